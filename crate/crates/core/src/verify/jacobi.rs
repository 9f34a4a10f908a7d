use crate::error::{Error, Result};
use crate::graphs::FractalGraph;
use crate::laplacian::{laplacian_matrix, symmetrize};
use crate::linalg::DenseMatrix;

/// Largest matrix the dense oracle accepts.
pub const ORACLE_DIMENSION_CAP: usize = 1200;

const MAX_SWEEPS: usize = 100;
const CONVERGENCE: f64 = 1e-13;

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: DenseMatrix,
    pub off_diagonal_norm: f64,
    pub sweeps: usize,
}

impl EigenDecomposition {
    /// `max_k ‖A v_k − λ_k v_k‖∞` against the original matrix.
    pub fn max_residual(&self, m: &DenseMatrix) -> f64 {
        let n = m.dim();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let v: Vec<f64> = (0..n).map(|i| self.eigenvectors[(i, k)]).collect();
            let av = m.matvec(&v);
            for i in 0..n {
                worst = worst.max((av[i] - self.eigenvalues[k] * v[i]).abs());
            }
        }
        worst
    }
}

fn off_diagonal(a: &DenseMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigensolver for a symmetric matrix.
pub fn jacobi_eigensolve(m: &DenseMatrix) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.dim();
    if n > ORACLE_DIMENSION_CAP {
        return Err(Error::DimensionCap {
            dim: n,
            cap: ORACLE_DIMENSION_CAP,
        });
    }
    let asym = m.asymmetry();
    if asym > 1e-12 * m.max_abs() {
        return Err(Error::NotSymmetric(asym));
    }
    let mut a = m.clone();
    let mut v = DenseMatrix::identity(n);
    let target = CONVERGENCE * m.frobenius();
    let mut off = off_diagonal(&a);
    let mut sweeps = 0;
    while off > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 { 1.0 } else { -1.0 } / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        off = off_diagonal(&a);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let eigenvalues = order.iter().map(|&i| a[(i, i)]).collect();
    let mut eigenvectors = DenseMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for r in 0..n {
            eigenvectors[(r, col)] = v[(r, src)];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
        off_diagonal_norm: off,
        sweeps,
    })
}

/// Ascending eigenvalues of the graph Laplacian, from the symmetrized matrix.
pub fn oracle_spectrum(graph: &FractalGraph) -> Result<Vec<f64>> {
    let (s, _) = symmetrize(graph, &laplacian_matrix(graph))?;
    Ok(jacobi_eigensolve(&s)?.eigenvalues)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_graph, Family};

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn diagonal_input() {
        let d = DenseMatrix::from_rows(&[vec![3.0, 0.0], vec![0.0, -1.0]]);
        let e = jacobi_eigensolve(&d).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 3.0]);
        assert_eq!(e.sweeps, 0);
    }

    #[test]
    fn small_laplacians() {
        let h1 = oracle_spectrum(&build_graph(Family::H, 1).unwrap()).unwrap();
        assert!(close(&h1, &[-1.0, -1.0, 0.0], 1e-14));
        let g1 = oracle_spectrum(&build_graph(Family::G, 1).unwrap()).unwrap();
        assert!(close(&g1, &[-1.5, -1.5, -1.5, -0.75, -0.75, 0.0], 1e-14));
    }

    #[test]
    fn residuals_and_errors() {
        let g = build_graph(Family::G, 3).unwrap();
        let (s, _) = symmetrize(&g, &laplacian_matrix(&g)).unwrap();
        let e = jacobi_eigensolve(&s).unwrap();
        assert!(e.max_residual(&s) <= 1e-10 * s.max_abs());
        assert!(e.off_diagonal_norm <= 1e-13 * s.frobenius());

        let m = laplacian_matrix(&g);
        assert!(matches!(jacobi_eigensolve(&m), Err(Error::NotSymmetric(_))));
        let big = DenseMatrix::identity(ORACLE_DIMENSION_CAP + 1);
        assert!(matches!(jacobi_eigensolve(&big), Err(Error::DimensionCap { .. })));
    }
}
