//! Eigenspaces at the exceptional values, built directly from local patterns.

use num_rational::Ratio;

use crate::dynamics::{AlgebraicEigenvalue, MapKind};
use crate::error::{Error, Result};
use crate::function::VertexFunction;
use crate::graphs::{
    build_graph, canonical_g_vertex, cells_at, enumerate_holes, hole_cycle_h, next_corner, prev_corner,
    side_cells, Family, FractalGraph, Word,
};

use super::{EigenBasis, Provenance, SpectrumEntry};

fn require_family(graph: &FractalGraph, family: Family) -> Result<()> {
    if graph.family() != family {
        return Err(Error::Consistency(format!(
            "expected a {family} graph, got {}",
            graph.family()
        )));
    }
    Ok(())
}

fn require_level(what: &'static str, level: usize, min: usize) -> Result<()> {
    if level < min {
        return Err(Error::LevelTooSmall { what, level, min });
    }
    Ok(())
}

fn seed_entry(num: i64, den: i64, map: MapKind, provenance: Provenance, functions: Vec<VertexFunction>) -> EigenBasis {
    EigenBasis {
        entry: SpectrumEntry {
            eigenvalue: AlgebraicEigenvalue::exact(Ratio::new(num, den), map),
            multiplicity: functions.len(),
            provenance,
        },
        functions,
    }
}

fn g_add(graph: &FractalGraph, values: &mut [f64], w: &Word, j: u8, v: f64) -> Result<()> {
    let idx = graph.require(&canonical_g_vertex(w, j)?)?;
    values[idx] += v;
    Ok(())
}

/// The `-3/2` eigenspace of `G_n`: one function per point of `V^G_{n-1}`,
/// with value 2 at the point and the pattern `-1, -1, +1` on the midpoints of
/// each level-`(n-1)` cell containing it.
pub fn g_basis_neg32_on(graph: &FractalGraph) -> Result<Vec<VertexFunction>> {
    require_family(graph, Family::G)?;
    let n = graph.level();
    if n == 0 {
        return [vec![1.0, -1.0, 0.0], vec![0.0, 1.0, -1.0]]
            .into_iter()
            .map(|v| VertexFunction::from_values(graph, v))
            .collect();
    }
    graph
        .vertices()
        .iter()
        .filter(|x| x.word().len() < n)
        .map(|x| {
            let mut values = vec![0.0; graph.len()];
            values[graph.require(x)?] = 2.0;
            for (cell, a) in cells_at(x, n - 1)? {
                let (b, c) = (next_corner(a), prev_corner(a));
                g_add(graph, &mut values, &cell.child(a), b, -1.0)?;
                g_add(graph, &mut values, &cell.child(a), c, -1.0)?;
                g_add(graph, &mut values, &cell.child(b), c, 1.0)?;
            }
            VertexFunction::from_values(graph, values)
        })
        .collect()
}

pub fn g_basis_neg32(n: usize) -> Result<EigenBasis> {
    let g = build_graph(Family::G, n)?;
    Ok(seed_entry(-3, 2, MapKind::RG, Provenance::SeedMinus32, g_basis_neg32_on(&g)?))
}

/// The `-5/4` eigenspace of `G_n`: one function per hole.
///
/// Walk the level-`(n-1)` cells bordering the hole in the order `w·1`,
/// `w·2`, `w·3`. Each such cell gets `-1` and `+1` at the two midpoints next
/// to its corner away from the hole, `+1` on the side the walk leaves by.
pub fn g_basis_neg54_on(graph: &FractalGraph) -> Result<Vec<VertexFunction>> {
    require_family(graph, Family::G)?;
    let n = graph.level();
    require_level("the -5/4 eigenspace", n, 2)?;
    enumerate_holes(n)
        .iter()
        .map(|hole| {
            let mut values = vec![0.0; graph.len()];
            for j in 1..=3u8 {
                let (entry, exit) = (prev_corner(j), next_corner(j));
                for cell in side_cells(&hole.word.child(j), entry, exit, n - 1)? {
                    g_add(graph, &mut values, &cell.child(j), exit, 1.0)?;
                    g_add(graph, &mut values, &cell.child(j), entry, -1.0)?;
                }
            }
            VertexFunction::from_values(graph, values)
        })
        .collect()
}

pub fn g_basis_neg54(n: usize) -> Result<EigenBasis> {
    let g = build_graph(Family::G, n)?;
    Ok(seed_entry(-5, 4, MapKind::RG, Provenance::SeedMinus54, g_basis_neg54_on(&g)?))
}

/// Adds the `-1` pattern of `H_2` on the level-`(n-2)` cell `cell`, with the
/// value 2 at `cell·a·a`.
fn add_h_pattern(graph: &FractalGraph, values: &mut [f64], cell: &Word, a: u8) -> Result<()> {
    for k in 1..=3u8 {
        for l in 1..=3u8 {
            let v = match (k == a, l == a) {
                (true, true) => 2.0,
                (true, false) | (false, true) => -1.0,
                (false, false) if k != l => 1.0,
                _ => continue,
            };
            let w = cell.child(k).child(l);
            let idx = graph
                .h_index(&w)
                .ok_or_else(|| Error::VertexNotFound(w.to_string()))?;
            values[idx] += v;
        }
    }
    Ok(())
}

/// The `-1` eigenspace of `H_n`. For `n ≥ 2` there is one function per point
/// of `V^G_{n-2}`: a copy of the `H_2` pattern in each level-`(n-2)` cell
/// containing the point, anchored at the cell's vertex next to it.
pub fn h_basis_neg1_on(graph: &FractalGraph) -> Result<Vec<VertexFunction>> {
    require_family(graph, Family::H)?;
    let n = graph.level();
    require_level("the -1 eigenspace", n, 1)?;
    if n == 1 {
        return [vec![0.0, 1.0, -1.0], vec![-1.0, 0.0, 1.0]]
            .into_iter()
            .map(|v| VertexFunction::from_values(graph, v))
            .collect();
    }
    let coarse = build_graph(Family::G, n - 2)?;
    coarse
        .vertices()
        .iter()
        .map(|x| {
            let mut values = vec![0.0; graph.len()];
            for (cell, a) in cells_at(x, n - 2)? {
                add_h_pattern(graph, &mut values, &cell, a)?;
            }
            VertexFunction::from_values(graph, values)
        })
        .collect()
}

pub fn h_basis_neg1(n: usize) -> Result<EigenBasis> {
    let h = build_graph(Family::H, n)?;
    Ok(seed_entry(-1, 1, MapKind::RH, Provenance::SeedMinus1, h_basis_neg1_on(&h)?))
}

/// The `-5/3` eigenspace of `H_n`: alternating `±1` around each hole cycle.
pub fn h_basis_neg53_on(graph: &FractalGraph) -> Result<Vec<VertexFunction>> {
    require_family(graph, Family::H)?;
    let n = graph.level();
    require_level("the -5/3 eigenspace", n, 2)?;
    enumerate_holes(n)
        .iter()
        .map(|hole| {
            let mut values = vec![0.0; graph.len()];
            for (i, v) in hole_cycle_h(hole, n)?.iter().enumerate() {
                values[graph.require(v)?] = if i % 2 == 0 { 1.0 } else { -1.0 };
            }
            VertexFunction::from_values(graph, values)
        })
        .collect()
}

pub fn h_basis_neg53(n: usize) -> Result<EigenBasis> {
    let h = build_graph(Family::H, n)?;
    Ok(seed_entry(-5, 3, MapKind::RH, Provenance::SeedMinus53, h_basis_neg53_on(&h)?))
}

/// The `-1` eigenspace of `J_n`: the `-3/2` basis of `G_n`, extended by zero
/// on the H-type vertices.
pub fn j_neg1_basis(n: usize) -> Result<EigenBasis> {
    let j = build_graph(Family::J, n)?;
    let g = build_graph(Family::G, n)?;
    let offset = j.len() - g.len();
    let functions = g_basis_neg32_on(&g)?
        .into_iter()
        .map(|f| {
            let mut values = vec![0.0; offset];
            values.extend_from_slice(f.values());
            VertexFunction::from_values(&j, values)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(seed_entry(-1, 1, MapKind::R3, Provenance::JLift, functions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laplacian::LaplacianOperator;

    fn check(basis: &EigenBasis, graph: &FractalGraph, tol: f64) {
        let op = LaplacianOperator::new(graph);
        for f in &basis.functions {
            op.check_eigen(f, basis.eigenvalue(), tol).unwrap();
        }
    }

    fn values_at(graph: &FractalGraph, f: &VertexFunction, addrs: &[&str]) -> Vec<f64> {
        addrs.iter().map(|a| f.at(graph, a).unwrap()).collect()
    }

    #[test]
    fn dimensions_and_residuals() {
        for n in 0..=5 {
            let g = build_graph(Family::G, n).unwrap();
            let b = g_basis_neg32(n).unwrap();
            assert_eq!(b.len(), (3usize.pow(n as u32) + 3) / 2);
            check(&b, &g, 1e-12);
            if n >= 2 {
                let b = g_basis_neg54(n).unwrap();
                assert_eq!(b.len(), (3usize.pow(n as u32 - 1) - 1) / 2);
                check(&b, &g, 1e-12);
            }
            let h = build_graph(Family::H, n).unwrap();
            if n >= 1 {
                let b = h_basis_neg1(n).unwrap();
                assert_eq!(b.len(), (3usize.pow(n as u32 - 1) + 3) / 2);
                check(&b, &h, 1e-12);
            }
            if n >= 2 {
                let b = h_basis_neg53(n).unwrap();
                assert_eq!(b.len(), (3usize.pow(n as u32 - 1) - 1) / 2);
                check(&b, &h, 1e-12);
            }
            let j = build_graph(Family::J, n).unwrap();
            check(&j_neg1_basis(n).unwrap(), &j, 1e-12);
        }
    }

    #[test]
    fn too_small_levels() {
        assert!(matches!(h_basis_neg1(0), Err(Error::LevelTooSmall { .. })));
        assert!(matches!(g_basis_neg54(1), Err(Error::LevelTooSmall { .. })));
        assert!(matches!(h_basis_neg53(1), Err(Error::LevelTooSmall { .. })));
    }

    #[test]
    fn g_one_anchor_pattern() {
        let g = build_graph(Family::G, 1).unwrap();
        let b = g_basis_neg32_on(&g).unwrap();
        let f = &b[g.find(".1").unwrap()];
        assert_eq!(
            values_at(&g, f, &[".1", "1.2", "1.3", "2.3", ".2", ".3"]),
            vec![2.0, -1.0, -1.0, 1.0, 0.0, 0.0]
        );
    }

    #[test]
    fn g_two_doubled_pattern() {
        let g = build_graph(Family::G, 2).unwrap();
        let b = g_basis_neg32_on(&g).unwrap();
        let anchor = "1.2".parse().unwrap();
        let pos = g.vertices().iter().filter(|x| x.word().len() < 2).position(|x| *x == anchor).unwrap();
        let f = &b[pos];
        assert_eq!(f.at(&g, "1.2").unwrap(), 2.0);
        assert_eq!(f.support(0.0).len(), 7);
        assert_eq!(f.values().iter().filter(|&&v| v == -1.0).count(), 4);
        assert_eq!(f.values().iter().filter(|&&v| v == 1.0).count(), 2);
    }

    #[test]
    fn g_hole_patterns() {
        let g = build_graph(Family::G, 2).unwrap();
        let f = &g_basis_neg54_on(&g).unwrap()[0];
        assert_eq!(values_at(&g, f, &["11.2", "22.3", "33.1"]), vec![1.0; 3]);
        assert_eq!(values_at(&g, f, &["21.2", "32.3", "11.3"]), vec![-1.0; 3]);
        assert_eq!(f.support(0.0).len(), 6);

        let g = build_graph(Family::G, 3).unwrap();
        let b = g_basis_neg54_on(&g).unwrap();
        let f = &b[1];
        assert_eq!(
            values_at(&g, f, &["111.2", "111.3", "122.3", "121.2", "131.3", "132.3"]),
            vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0]
        );
        assert_eq!(f.support(0.0).len(), 6);
    }

    #[test]
    fn h_patterns() {
        let h = build_graph(Family::H, 2).unwrap();
        let b = h_basis_neg1_on(&h).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(
            b[0].values(),
            &[2.0, -1.0, -1.0, -1.0, 0.0, 1.0, -1.0, 1.0, 0.0]
        );

        let h = build_graph(Family::H, 3).unwrap();
        let b = h_basis_neg1_on(&h).unwrap();
        let g1 = build_graph(Family::G, 1).unwrap();
        let f = &b[g1.find("1.2").unwrap()];
        assert_eq!(f.at(&h, "122").unwrap(), 2.0);
        assert_eq!(f.at(&h, "211").unwrap(), 2.0);
        assert_eq!(f.support(0.0).len(), 14);
    }

    #[test]
    fn h_cycle_patterns() {
        let h = build_graph(Family::H, 2).unwrap();
        let f = &h_basis_neg53_on(&h).unwrap()[0];
        assert_eq!(f.support(0.0).len(), 6);
        assert_eq!(f.at(&h, "12").unwrap(), -f.at(&h, "21").unwrap());
        assert_eq!(f.values().iter().sum::<f64>(), 0.0);
    }
}
