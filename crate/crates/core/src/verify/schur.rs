use std::fmt;

use serde::Serialize;

use crate::dynamics::{MapKind, RationalFunction};
use crate::error::{Error, Result};
use crate::graphs::{build_graph, Family};
use crate::laplacian::laplacian_matrix;
use crate::linalg::DenseMatrix;

/// Samples closer than this to a pair's exceptional set are skipped.
pub const SAMPLE_EXCLUSION: f64 = 1e-6;

const MIN_PIVOT: f64 = 1e-10;

/// `S_z = A_KK − z − A_KD (A_DD − z)^{-1} A_DK`, with `K = keep` and `D` its
/// complement.
pub fn schur_complement(m: &DenseMatrix, keep: &[usize], z: f64) -> Result<DenseMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let mut kept = vec![false; m.dim()];
    for &k in keep {
        kept[k] = true;
    }
    let drop: Vec<usize> = (0..m.dim()).filter(|&i| !kept[i]).collect();
    let akk = m.submatrix(keep, keep).shift_diagonal(-z);
    if drop.is_empty() {
        return Ok(akk);
    }
    let add = m.submatrix(&drop, &drop).shift_diagonal(-z);
    let adk = m.submatrix(&drop, keep);
    let akd = m.submatrix(keep, &drop);
    let (x, _) = add.solve(&adk, MIN_PIVOT).map_err(|_| Error::Exceptional {
        z,
        reason: "the eliminated block is singular".into(),
    })?;
    Ok(akk.add_scaled(&akd.matmul(&x), -1.0))
}

/// The four spectral-similarity identities checked numerically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SimilarityPair {
    /// Star with `N` leaves reduced to the complete graph on its leaves.
    StarMesh(usize),
    /// `J_n` reduced to its G-type vertices.
    JvsG(usize),
    /// `J_n` reduced to its H-type vertices.
    JvsH(usize),
    /// `G_{n+1}` reduced to `V^G_n`.
    GStep(usize),
}

impl fmt::Display for SimilarityPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimilarityPair::StarMesh(n) => write!(f, "star_mesh({n})"),
            SimilarityPair::JvsG(n) => write!(f, "J_vs_G({n})"),
            SimilarityPair::JvsH(n) => write!(f, "J_vs_H({n})"),
            SimilarityPair::GStep(n) => write!(f, "G_step({n})"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SimilarityReport {
    pub pair: String,
    pub samples: Vec<f64>,
    pub defects: Vec<f64>,
    pub skipped: Vec<f64>,
    pub max_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Row-normalized Laplacian of the star with centre 0 and `leaves` leaves.
pub fn star_laplacian(leaves: usize) -> DenseMatrix {
    let mut m = DenseMatrix::identity(leaves + 1).scaled(-1.0);
    for i in 1..=leaves {
        m[(0, i)] = 1.0 / leaves as f64;
        m[(i, 0)] = 1.0;
    }
    m
}

/// Row-normalized Laplacian of the complete graph `K_n`.
pub fn complete_laplacian(n: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = if i == j { -1.0 } else { 1.0 / (n - 1) as f64 };
        }
    }
    m
}

type ScalarFn = Box<dyn Fn(f64) -> f64>;

struct Setup {
    big: DenseMatrix,
    keep: Vec<usize>,
    small: DenseMatrix,
    phi: ScalarFn,
    phi_tilde: ScalarFn,
    exceptional: Vec<f64>,
}

fn from_map(kind: MapKind) -> (ScalarFn, ScalarFn) {
    let d = kind.descriptor();
    let own = |r: Option<RationalFunction>| -> ScalarFn {
        let r = r.expect("map has a Schur realization");
        Box::new(move |z| r.eval(z))
    };
    (own(d.phi), own(d.phi_tilde))
}

fn setup(pair: SimilarityPair) -> Result<Setup> {
    let rationals = |k: MapKind| k.exceptional_set().iter().map(crate::dynamics::rational_to_f64).collect();
    Ok(match pair {
        SimilarityPair::StarMesh(leaves) => {
            if leaves < 2 {
                return Err(Error::Consistency("a star needs at least two leaves".into()));
            }
            let nf = leaves as f64;
            Setup {
                big: star_laplacian(leaves),
                keep: (1..=leaves).collect(),
                small: complete_laplacian(leaves),
                phi: Box::new(|z| 1.0 + z - 1.0 / (1.0 + z)),
                phi_tilde: Box::new(move |z| (nf - 1.0) / (nf * (1.0 + z))),
                exceptional: vec![-1.0],
            }
        }
        SimilarityPair::JvsG(n) | SimilarityPair::JvsH(n) => {
            let j = build_graph(Family::J, n)?;
            let h_count = 3usize.pow(n as u32);
            let (family, keep, kind): (Family, Vec<usize>, MapKind) = match pair {
                SimilarityPair::JvsG(_) => (Family::G, (h_count..j.len()).collect(), MapKind::R3),
                _ => (Family::H, (0..h_count).collect(), MapKind::R2),
            };
            let (phi, phi_tilde) = from_map(kind);
            Setup {
                big: laplacian_matrix(&j),
                keep,
                small: laplacian_matrix(&build_graph(family, n)?),
                phi,
                phi_tilde,
                exceptional: rationals(kind),
            }
        }
        SimilarityPair::GStep(n) => {
            let coarse = build_graph(Family::G, n)?;
            let fine = build_graph(Family::G, n + 1)?;
            let keep = coarse.vertices().iter().map(|v| fine.require(v)).collect::<Result<_>>()?;
            let (phi, phi_tilde) = from_map(MapKind::RG);
            Setup {
                big: laplacian_matrix(&fine),
                keep,
                small: laplacian_matrix(&coarse),
                phi,
                phi_tilde,
                exceptional: rationals(MapKind::RG),
            }
        }
    })
}

/// Max-norm of `S_z − (φ̃(z)·D̃ − φ(z))` at each sample, skipping samples
/// within [`SAMPLE_EXCLUSION`] of the pair's exceptional set.
pub fn similarity_defect(pair: SimilarityPair, z_samples: &[f64], tolerance: f64) -> Result<SimilarityReport> {
    let s = setup(pair)?;
    let mut report = SimilarityReport {
        pair: pair.to_string(),
        samples: Vec::new(),
        defects: Vec::new(),
        skipped: Vec::new(),
        max_defect: 0.0,
        tolerance,
        passed: true,
    };
    for &z in z_samples {
        if s.exceptional.iter().any(|e| (z - e).abs() <= SAMPLE_EXCLUSION) {
            report.skipped.push(z);
            continue;
        }
        let schur = schur_complement(&s.big, &s.keep, z)?;
        let expected = s.small.scaled((s.phi_tilde)(z)).shift_diagonal(-(s.phi)(z));
        let defect = schur.max_abs_diff(&expected);
        report.samples.push(z);
        report.defects.push(defect);
        report.max_defect = report.max_defect.max(defect);
    }
    report.passed = report.defects.iter().all(|d| *d <= tolerance);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_three() {
        let s = schur_complement(&star_laplacian(3), &[1, 2, 3], 0.5).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { -1.5 } else { 0.0 } + 1.0 / (3.0 * 1.5);
                assert!((s[(i, j)] - expected).abs() < 1e-15);
            }
        }
        assert!(matches!(
            schur_complement(&star_laplacian(3), &[1, 2, 3], -1.0),
            Err(Error::Exceptional { .. })
        ));
    }

    #[test]
    fn pairs_at_samples() {
        let samples = [0.7, -0.3, 2.0, -1.7];
        for pair in [
            SimilarityPair::StarMesh(5),
            SimilarityPair::JvsG(1),
            SimilarityPair::JvsH(1),
            SimilarityPair::GStep(1),
        ] {
            let r = similarity_defect(pair, &samples, 1e-10).unwrap();
            assert!(r.passed, "{r:?}");
            assert_eq!(r.samples.len(), 4);
        }
        let r = similarity_defect(SimilarityPair::GStep(0), &[-1.25, 0.7], 1e-10).unwrap();
        assert_eq!(r.skipped, vec![-1.25]);
    }
}
