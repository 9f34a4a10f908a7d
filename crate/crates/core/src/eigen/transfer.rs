//! Maps that move eigenfunctions between levels and between families.

use crate::dynamics::MapKind;
use crate::error::{Error, Result};
use crate::function::VertexFunction;
use crate::graphs::{
    build_graph, canonical_g_vertex, cells_at, labeled_neighbor_table, next_corner, prev_corner, Family,
    FractalGraph, Word,
};
use crate::laplacian::LaplacianOperator;

/// Residual the input of an extension must meet.
pub const EXTENSION_RESIDUAL_TOLERANCE: f64 = 1e-9;

fn check_not_exceptional(map: MapKind, z: f64) -> Result<()> {
    if !z.is_finite() || map.exceptional_distance(z) <= crate::dynamics::EXCEPTIONAL_TOLERANCE {
        return Err(Error::Exceptional {
            z,
            reason: format!("in the exceptional set of {map}"),
        });
    }
    Ok(())
}

fn check_eigen(graph: &FractalGraph, f: &VertexFunction, lambda: f64) -> Result<()> {
    LaplacianOperator::new(graph).check_eigen(f, lambda, EXTENSION_RESIDUAL_TOLERANCE)?;
    Ok(())
}

/// Index plan for `G_n → G_{n+1}`.
#[derive(Clone, Debug)]
struct GExtension {
    /// Fine index of each coarse vertex.
    copy: Vec<usize>,
    /// New midpoint `F_w(m_j)` with the coarse indices of `F_w(p_j)`,
    /// `F_w(p_{j+1})`, `F_w(p_{j-1})`.
    midpoints: Vec<(usize, [usize; 3])>,
}

impl GExtension {
    fn new(coarse: &FractalGraph, fine: &FractalGraph) -> Result<Self> {
        let copy = coarse
            .vertices()
            .iter()
            .map(|v| fine.require(v))
            .collect::<Result<_>>()?;
        let idx = |g: &FractalGraph, w: &Word, j: u8| g.require(&canonical_g_vertex(w, j)?);
        let mut midpoints = Vec::with_capacity(3 * 3usize.pow(coarse.level() as u32));
        for w in Word::all(coarse.level()) {
            for j in 1..=3u8 {
                let (k, l) = (next_corner(j), prev_corner(j));
                midpoints.push((
                    idx(fine, &w.child(k), l)?,
                    [idx(coarse, &w, j)?, idx(coarse, &w, k)?, idx(coarse, &w, l)?],
                ));
            }
        }
        Ok(GExtension { copy, midpoints })
    }

    fn apply(&self, fine_len: usize, f: &[f64], z: f64) -> Vec<f64> {
        let denom = (4.0 * z + 5.0) * (2.0 * z + 1.0);
        let side = 2.0 * (z + 1.0);
        let mut out = vec![0.0; fine_len];
        for (c, &i) in self.copy.iter().enumerate() {
            out[i] = f[c];
        }
        for &(i, [a, b, c]) in &self.midpoints {
            out[i] = (f[a] + side * (f[b] + f[c])) / denom;
        }
        out
    }
}

/// Index plan for `H_n → H_{n+1}`: for each fine vertex `w·j`, the coarse
/// indices of `y_0 = w`, `y_j`, `y_{j+1}`, `y_{j-1}`.
#[derive(Clone, Debug)]
struct HExtension {
    stencil: Vec<[usize; 4]>,
}

impl HExtension {
    fn new(coarse: &FractalGraph, fine: &FractalGraph) -> Result<Self> {
        let table = labeled_neighbor_table(coarse)?;
        let mut stencil = vec![[0; 4]; fine.len()];
        for (y0, v) in coarse.vertices().iter().enumerate() {
            let nb = table[y0];
            for j in 1..=3u8 {
                let at = |k: u8| nb[(k - 1) as usize];
                let i = fine
                    .h_index(&v.word().child(j))
                    .ok_or_else(|| Error::VertexNotFound(v.word().child(j).to_string()))?;
                stencil[i] = [y0, at(j), at(next_corner(j)), at(prev_corner(j))];
            }
        }
        Ok(HExtension { stencil })
    }

    fn apply(&self, f: &[f64], z: f64) -> Vec<f64> {
        let pre = (z + 2.0) / (2.0 * (3.0 * z + 5.0) * (3.0 * z + 2.0));
        let (w0, wj) = (3.0 * z + 5.0, 3.0 * z + 3.0);
        self.stencil
            .iter()
            .map(|&[y0, yj, yk, yl]| pre * (w0 * f[y0] + wj * f[yj] + f[yk] + f[yl]))
            .collect()
    }
}

/// Index plan for `Φ₂` and `Φ₃` at one level.
#[derive(Clone, Debug)]
struct PhiPlan {
    /// G-neighbors in `J_n` of each H-vertex.
    h_to_g: Vec<[usize; 3]>,
    /// H-neighbors in `J_n` of each G-vertex (one for a corner, else two).
    g_to_h: Vec<(usize, Option<usize>)>,
}

impl PhiPlan {
    fn new(g: &FractalGraph, h: &FractalGraph) -> Result<Self> {
        let n = g.level();
        let h_to_g = h
            .vertices()
            .iter()
            .map(|v| {
                let mut out = [0; 3];
                for (slot, j) in out.iter_mut().zip(1..=3u8) {
                    *slot = g.require(&canonical_g_vertex(v.word(), j)?)?;
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let g_to_h = g
            .vertices()
            .iter()
            .map(|x| {
                let cells = cells_at(x, n)?;
                let find = |w: &Word| h.h_index(w).ok_or_else(|| Error::VertexNotFound(w.to_string()));
                Ok(match cells.as_slice() {
                    [(a, _)] => (find(a)?, None),
                    [(a, _), (b, _)] => (find(a)?, Some(find(b)?)),
                    _ => unreachable!("a G-vertex lies in one or two cells"),
                })
            })
            .collect::<Result<_>>()?;
        Ok(PhiPlan { h_to_g, g_to_h })
    }

    fn phi3(&self, f: &[f64]) -> Vec<f64> {
        self.h_to_g
            .iter()
            .map(|&[a, b, c]| (f[a] + f[b] + f[c]) / 3.0)
            .collect()
    }

    fn phi2(&self, g: &[f64]) -> Vec<f64> {
        self.g_to_h
            .iter()
            .map(|&(a, b)| match b {
                None => g[a],
                Some(b) => 0.5 * (g[a] + g[b]),
            })
            .collect()
    }
}

/// G and H graphs at levels `0..=max_level` with every transfer plan
/// between them precomputed. Read-only after construction, so one instance
/// can serve many threads.
#[derive(Clone, Debug)]
pub struct Hierarchy {
    g: Vec<FractalGraph>,
    h: Vec<FractalGraph>,
    g_ext: Vec<GExtension>,
    h_ext: Vec<HExtension>,
    phi: Vec<PhiPlan>,
}

impl Hierarchy {
    pub fn new(max_level: usize) -> Result<Self> {
        let g: Vec<_> = (0..=max_level)
            .map(|n| build_graph(Family::G, n))
            .collect::<Result<_>>()?;
        let h: Vec<_> = (0..=max_level)
            .map(|n| build_graph(Family::H, n))
            .collect::<Result<_>>()?;
        let g_ext = g.windows(2).map(|w| GExtension::new(&w[0], &w[1])).collect::<Result<_>>()?;
        let h_ext = h.windows(2).map(|w| HExtension::new(&w[0], &w[1])).collect::<Result<_>>()?;
        let phi = g.iter().zip(&h).map(|(g, h)| PhiPlan::new(g, h)).collect::<Result<_>>()?;
        Ok(Hierarchy { g, h, g_ext, h_ext, phi })
    }

    pub fn max_level(&self) -> usize {
        self.g.len() - 1
    }

    /// The G or H graph at `level`.
    pub fn graph(&self, family: Family, level: usize) -> Result<&FractalGraph> {
        let list = match family {
            Family::G => &self.g,
            Family::H => &self.h,
            Family::J => {
                return Err(Error::Consistency("the hierarchy holds only G and H graphs".into()));
            }
        };
        list.get(level).ok_or(Error::LevelTooLarge {
            level,
            max: self.max_level(),
        })
    }

    fn domain(&self, f: &VertexFunction) -> Result<&FractalGraph> {
        let graph = self.graph(f.family(), f.level())?;
        f.check_domain(graph)?;
        Ok(graph)
    }

    fn fine_level(&self, f: &VertexFunction) -> Result<usize> {
        let n = f.level() + 1;
        if n > self.max_level() {
            return Err(Error::LevelTooLarge {
                level: n,
                max: self.max_level(),
            });
        }
        Ok(n)
    }

    /// Extends an `RG(z)`-eigenfunction of `G_n` to a `z`-eigenfunction of
    /// `G_{n+1}`.
    pub fn extend_g(&self, f: &VertexFunction, z: f64) -> Result<VertexFunction> {
        let coarse = self.domain(f)?;
        if coarse.family() != Family::G {
            return Err(Error::Consistency(format!("extend_g needs a G function, got {}", f.family())));
        }
        check_not_exceptional(MapKind::RG, z)?;
        let denom = (4.0 * z + 5.0) * (2.0 * z + 1.0);
        if denom.abs() < crate::dynamics::EXCEPTIONAL_TOLERANCE {
            return Err(Error::Exceptional {
                z,
                reason: "vanishing extension denominator".into(),
            });
        }
        check_eigen(coarse, f, MapKind::RG.eval(z))?;
        let n = self.fine_level(f)?;
        let fine = &self.g[n];
        VertexFunction::from_values(fine, self.g_ext[n - 1].apply(fine.len(), f.values(), z))
    }

    /// Extends an `RH(z)`-eigenfunction of `H_n` to a `z`-eigenfunction of
    /// `H_{n+1}`.
    pub fn extend_h(&self, f: &VertexFunction, z: f64) -> Result<VertexFunction> {
        let coarse = self.domain(f)?;
        if coarse.family() != Family::H {
            return Err(Error::Consistency(format!("extend_h needs an H function, got {}", f.family())));
        }
        check_not_exceptional(MapKind::RH, z)?;
        check_eigen(coarse, f, MapKind::RH.eval(z))?;
        let n = self.fine_level(f)?;
        VertexFunction::from_values(&self.h[n], self.h_ext[n - 1].apply(f.values(), z))
    }

    /// `Φ₃ ∘ extend_g(·, 3z/4) ∘ Φ₂`, the same map as [`Hierarchy::extend_h`]
    /// computed through the gasket.
    pub fn extend_h_composed(&self, f: &VertexFunction, z: f64) -> Result<VertexFunction> {
        check_not_exceptional(MapKind::RH, z)?;
        let on_g = self.phi2(f)?;
        let extended = self.extend_g(&on_g, 0.75 * z)?;
        self.phi3(&extended)
    }

    /// Averages over the three G-neighbors of each H-vertex in `J_n`.
    pub fn phi3(&self, f: &VertexFunction) -> Result<VertexFunction> {
        let graph = self.domain(f)?;
        if graph.family() != Family::G {
            return Err(Error::Consistency(format!("phi3 needs a G function, got {}", f.family())));
        }
        let n = f.level();
        VertexFunction::from_values(&self.h[n], self.phi[n].phi3(f.values()))
    }

    /// Averages over the H-neighbors of each G-vertex in `J_n`.
    pub fn phi2(&self, g: &VertexFunction) -> Result<VertexFunction> {
        let graph = self.domain(g)?;
        if graph.family() != Family::H {
            return Err(Error::Consistency(format!("phi2 needs an H function, got {}", g.family())));
        }
        let n = g.level();
        VertexFunction::from_values(&self.g[n], self.phi[n].phi2(g.values()))
    }

    /// Extends an `R3(z)`-eigenfunction `g` of `G_n` to a `z`-eigenfunction of
    /// `J_n`: `g` on the G-type vertices, `Φ₃g / (1+z)` on the H-type ones.
    pub fn lift_to_j(&self, j: &FractalGraph, g: &VertexFunction, z: f64) -> Result<VertexFunction> {
        let graph = self.domain(g)?;
        if graph.family() != Family::G || j.family() != Family::J || j.level() != g.level() {
            return Err(Error::DomainMismatch {
                expected_family: Family::G,
                expected_level: j.level(),
                found_family: g.family(),
                found_level: g.level(),
            });
        }
        check_not_exceptional(MapKind::R3, z)?;
        check_eigen(graph, g, MapKind::R3.eval(z))?;
        let scale = 1.0 / (1.0 + z);
        let mut values: Vec<f64> = self.phi[g.level()].phi3(g.values()).iter().map(|v| v * scale).collect();
        values.extend_from_slice(g.values());
        VertexFunction::from_values(j, values)
    }
}

fn hierarchy_for(f: &VertexFunction, extra: usize) -> Result<Hierarchy> {
    Hierarchy::new(f.level() + extra)
}

/// One-off form of [`Hierarchy::extend_g`].
pub fn extend_g(f: &VertexFunction, z: f64) -> Result<VertexFunction> {
    hierarchy_for(f, 1)?.extend_g(f, z)
}

/// One-off form of [`Hierarchy::extend_h`].
pub fn extend_h(f: &VertexFunction, z: f64) -> Result<VertexFunction> {
    hierarchy_for(f, 1)?.extend_h(f, z)
}

/// One-off form of [`Hierarchy::extend_h_composed`].
pub fn extend_h_composed(f: &VertexFunction, z: f64) -> Result<VertexFunction> {
    hierarchy_for(f, 1)?.extend_h_composed(f, z)
}

pub fn phi3(f: &VertexFunction) -> Result<VertexFunction> {
    hierarchy_for(f, 0)?.phi3(f)
}

pub fn phi2(g: &VertexFunction) -> Result<VertexFunction> {
    hierarchy_for(g, 0)?.phi2(g)
}

pub fn lift_to_j(g: &VertexFunction, z: f64) -> Result<VertexFunction> {
    let j = build_graph(Family::J, g.level())?;
    hierarchy_for(g, 0)?.lift_to_j(&j, g, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::preimages;

    fn approx_eq(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn constants_extend_to_constants() {
        let hier = Hierarchy::new(3).unwrap();
        for family in [Family::G, Family::H] {
            let f = VertexFunction::constant(hier.graph(family, 2).unwrap(), 1.0);
            let g = match family {
                Family::G => hier.extend_g(&f, 0.0).unwrap(),
                _ => hier.extend_h(&f, 0.0).unwrap(),
            };
            assert!(g.values().iter().all(|v| (v - 1.0).abs() < 1e-15));
        }
    }

    #[test]
    fn extend_g_from_triangle() {
        let hier = Hierarchy::new(1).unwrap();
        let f = VertexFunction::from_values(hier.graph(Family::G, 0).unwrap(), vec![1.0, -1.0, 0.0]).unwrap();
        let g = hier.extend_g(&f, -0.75).unwrap();
        let g1 = hier.graph(Family::G, 1).unwrap();
        // midpoints opposite p_1, p_2, p_3
        let mids: Vec<f64> = ["2.3", "1.3", "1.2"].iter().map(|a| g.at(g1, a).unwrap()).collect();
        assert!(approx_eq(&mids, &[-0.5, 0.5, 0.0], 1e-15));
        check_eigen(g1, &g, -0.75).unwrap();

        let h = hier.phi3(&g).unwrap();
        assert!(approx_eq(h.values(), &[0.5, -0.5, 0.0], 1e-15));
        check_eigen(hier.graph(Family::H, 1).unwrap(), &h, -1.0).unwrap();
    }

    #[test]
    fn extend_h_worked_example() {
        let hier = Hierarchy::new(2).unwrap();
        let h1 = hier.graph(Family::H, 1).unwrap();
        let h2 = hier.graph(Family::H, 2).unwrap();
        let f = VertexFunction::from_values(h1, vec![0.0, 1.0, -1.0]).unwrap();
        let z = (-5.0 + 13f64.sqrt()) / 6.0;
        let g = hier.extend_h(&f, z).unwrap();
        for (addr, v) in [("11", 0.0), ("12", 0.2054), ("21", 0.6784), ("22", 0.8838), ("23", 0.4730)] {
            assert!((g.at(h2, addr).unwrap() - v).abs() < 1e-4, "{addr}");
        }
        for (a, b) in [("31", "21"), ("33", "22"), ("32", "23"), ("13", "12")] {
            assert!((g.at(h2, a).unwrap() + g.at(h2, b).unwrap()).abs() < 1e-15);
        }
        check_eigen(h2, &g, z).unwrap();
        let composed = hier.extend_h_composed(&f, z).unwrap();
        assert!(approx_eq(g.values(), composed.values(), 1e-12));
    }

    #[test]
    fn exceptional_and_residual_errors() {
        let hier = Hierarchy::new(2).unwrap();
        let h1 = hier.graph(Family::H, 1).unwrap();
        let f = VertexFunction::from_values(h1, vec![0.0, 1.0, -1.0]).unwrap();
        assert!(matches!(hier.extend_h(&f, -5.0 / 3.0), Err(Error::Exceptional { .. })));
        assert!(matches!(hier.extend_h(&f, 0.1), Err(Error::Residual { .. })));
        let g0 = VertexFunction::constant(hier.graph(Family::G, 0).unwrap(), 1.0);
        assert!(matches!(hier.extend_g(&g0, -0.5), Err(Error::Exceptional { .. })));
        let top = VertexFunction::constant(hier.graph(Family::G, 2).unwrap(), 1.0);
        assert!(matches!(hier.extend_g(&top, 0.0), Err(Error::LevelTooLarge { .. })));
    }

    #[test]
    fn lift_g_one_to_j_one() {
        let hier = Hierarchy::new(1).unwrap();
        let f = VertexFunction::from_values(hier.graph(Family::G, 0).unwrap(), vec![1.0, -1.0, 0.0]).unwrap();
        let g = hier.extend_g(&f, -0.75).unwrap();
        let j1 = build_graph(Family::J, 1).unwrap();
        let (lo, hi) = preimages(MapKind::R3, -0.75).unwrap();
        for z in [lo, hi] {
            let lifted = hier.lift_to_j(&j1, &g, z).unwrap();
            LaplacianOperator::new(&j1).check_eigen(&lifted, z, 1e-10).unwrap();
        }
        let neg32 = &crate::eigen::g_basis_neg32_on(hier.graph(Family::G, 1).unwrap()).unwrap()[0];
        assert!(matches!(hier.lift_to_j(&j1, neg32, -1.0), Err(Error::Exceptional { .. })));
    }
}
