//! Random-walk graph Laplacian
//! `Δf(x) = (1/deg x) Σ_{x~y} (f(y) − f(x))`, where a loop adds one to the
//! degree and nothing to the sum.

use crate::error::{Error, Result};
use crate::function::VertexFunction;
use crate::graphs::FractalGraph;
use crate::linalg::DenseMatrix;

#[derive(Clone, Debug)]
pub struct LaplacianOperator<'g> {
    graph: &'g FractalGraph,
    degrees: Vec<usize>,
}

impl<'g> LaplacianOperator<'g> {
    pub fn new(graph: &'g FractalGraph) -> Self {
        LaplacianOperator {
            graph,
            degrees: (0..graph.len()).map(|i| graph.degree(i)).collect(),
        }
    }

    pub fn graph(&self) -> &'g FractalGraph {
        self.graph
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn apply(&self, f: &VertexFunction) -> Result<VertexFunction> {
        f.check_domain(self.graph)?;
        let v = f.values();
        let out = (0..v.len())
            .map(|x| {
                let sum: f64 = self
                    .graph
                    .neighbors(x)
                    .iter()
                    .filter(|&&y| y != x)
                    .map(|&y| v[y] - v[x])
                    .sum();
                sum / self.degrees[x] as f64
            })
            .collect();
        VertexFunction::from_values(self.graph, out)
    }

    /// Relative eigen-equation residual `‖Δf − λf‖∞ / ‖f‖∞`.
    pub fn residual(&self, f: &VertexFunction, lambda: f64) -> Result<f64> {
        let lf = self.apply(f)?;
        let worst = lf
            .values()
            .iter()
            .zip(f.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - lambda * b).abs()));
        let norm = f.sup_norm();
        Ok(if norm > 0.0 { worst / norm } else { worst })
    }

    /// Errors with [`Error::Residual`] unless `Δf = λf` to relative `tol`.
    pub fn check_eigen(&self, f: &VertexFunction, lambda: f64, tol: f64) -> Result<f64> {
        let residual = self.residual(f, lambda)?;
        if residual > tol || f.sup_norm() == 0.0 {
            return Err(Error::Residual {
                residual: if f.sup_norm() == 0.0 { f64::INFINITY } else { residual },
                tolerance: tol,
            });
        }
        Ok(residual)
    }

    pub fn matrix(&self) -> DenseMatrix {
        let n = self.graph.len();
        let mut m = DenseMatrix::zeros(n, n);
        for x in 0..n {
            let w = 1.0 / self.degrees[x] as f64;
            for &y in self.graph.neighbors(x) {
                if y != x {
                    m[(x, y)] += w;
                    m[(x, x)] -= w;
                }
            }
        }
        m
    }
}

pub fn apply_laplacian(graph: &FractalGraph, f: &VertexFunction) -> Result<VertexFunction> {
    LaplacianOperator::new(graph).apply(f)
}

pub fn laplacian_matrix(graph: &FractalGraph) -> DenseMatrix {
    LaplacianOperator::new(graph).matrix()
}

/// `S = D^{1/2} m D^{-1/2}` with `D` the degree matrix, which is symmetric
/// for a Laplacian matrix of `graph`. Returns `S` and the per-vertex scaling
/// `sqrt(deg)`; an eigenvector `v` of `S` maps back to `D^{-1/2} v`.
pub fn symmetrize(graph: &FractalGraph, m: &DenseMatrix) -> Result<(DenseMatrix, Vec<f64>)> {
    if m.rows() != graph.len() || m.cols() != graph.len() {
        return Err(Error::LengthMismatch {
            expected: graph.len(),
            found: m.rows(),
        });
    }
    let scale: Vec<f64> = (0..graph.len())
        .map(|i| match graph.degree(i) {
            0 => Err(Error::Consistency(format!("vertex {} has degree 0", graph.vertex(i)))),
            d => Ok((d as f64).sqrt()),
        })
        .collect::<Result<_>>()?;
    let mut s = m.clone();
    for i in 0..graph.len() {
        for j in 0..graph.len() {
            s[(i, j)] *= scale[i] / scale[j];
        }
    }
    Ok((s, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_graph, Family};

    fn approx(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-14
    }

    #[test]
    fn constants_are_harmonic() {
        for family in [Family::G, Family::H, Family::J] {
            for n in 0..=3 {
                let g = build_graph(family, n).unwrap();
                let f = VertexFunction::constant(&g, 2.5);
                let lf = apply_laplacian(&g, &f).unwrap();
                assert!(lf.sup_norm() < 1e-15);
            }
        }
    }

    #[test]
    fn h1_neg_one_pattern() {
        let h1 = build_graph(Family::H, 1).unwrap();
        let f = VertexFunction::from_values(&h1, vec![0.0, 1.0, -1.0]).unwrap();
        let lf = apply_laplacian(&h1, &f).unwrap();
        assert_eq!(lf.values(), &[0.0, -1.0, 1.0]);
    }

    #[test]
    fn g1_neg_three_halves_pattern() {
        let g1 = build_graph(Family::G, 1).unwrap();
        let mut f = VertexFunction::zeros(&g1);
        for (addr, v) in [(".1", 2.0), ("1.2", -1.0), ("1.3", -1.0), ("2.3", 1.0)] {
            f.values_mut()[g1.find(addr).unwrap()] = v;
        }
        let lf = apply_laplacian(&g1, &f).unwrap();
        for (a, b) in lf.values().iter().zip(f.values()) {
            assert!(approx(*a, -1.5 * b));
        }
    }

    #[test]
    fn h1_matrix_uses_loop_convention() {
        let m = laplacian_matrix(&build_graph(Family::H, 1).unwrap());
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { -2.0 / 3.0 } else { 1.0 / 3.0 };
                assert!(approx(m[(i, j)], expected));
            }
        }
        assert_eq!(laplacian_matrix(&build_graph(Family::H, 0).unwrap()).as_slice(), &[0.0]);
    }

    #[test]
    fn g1_interior_rows() {
        let g1 = build_graph(Family::G, 1).unwrap();
        let m = laplacian_matrix(&g1);
        for (i, v) in g1.vertices().iter().enumerate() {
            if v.boundary_corner().is_none() {
                assert_eq!(m[(i, i)], -1.0);
                assert_eq!(m.row(i).iter().filter(|&&x| x == 0.25).count(), 4);
            }
        }
    }

    #[test]
    fn symmetrize_regular_is_identity_map() {
        let h = build_graph(Family::H, 3).unwrap();
        let m = laplacian_matrix(&h);
        let (s, _) = symmetrize(&h, &m).unwrap();
        assert!(s.max_abs_diff(&m) < 1e-16);
        let j1 = build_graph(Family::J, 1).unwrap();
        let (s, _) = symmetrize(&j1, &laplacian_matrix(&j1)).unwrap();
        assert!(s.asymmetry() <= 1e-14);
    }

    #[test]
    fn domain_mismatch() {
        let g1 = build_graph(Family::G, 1).unwrap();
        let h1 = build_graph(Family::H, 1).unwrap();
        let f = VertexFunction::zeros(&h1);
        assert!(matches!(apply_laplacian(&g1, &f), Err(Error::DomainMismatch { .. })));
    }
}
