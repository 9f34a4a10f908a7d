//! Independent checks: a dense eigensolver, Schur complements, spectrum
//! comparison and rank tests.

mod jacobi;
mod schur;
mod suite;

use serde::Serialize;

use crate::eigen::{expand_spectrum, SpectrumEntry};
use crate::error::{Error, Result};
use crate::function::VertexFunction;

pub use jacobi::{jacobi_eigensolve, oracle_spectrum, EigenDecomposition, ORACLE_DIMENSION_CAP};
pub use schur::{
    complete_laplacian, schur_complement, similarity_defect, star_laplacian, SimilarityPair, SimilarityReport,
    SAMPLE_EXCLUSION,
};
pub use suite::{run_suite, CheckResult, Suite, SuiteConfig, SuiteReport};

/// Spectrum comparison tolerance.
pub const SPECTRUM_TOLERANCE: f64 = 1e-8;

/// Schur-complement identity tolerance.
pub const SIMILARITY_TOLERANCE: f64 = 1e-10;

pub const SIMILARITY_SAMPLES: [f64; 4] = [0.7, -0.3, 2.0, -1.7];

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumComparison {
    pub count: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares entries expanded by multiplicity against ascending oracle values.
pub fn spectra_match(computed: &[SpectrumEntry], oracle: &[f64], tol: f64) -> Result<SpectrumComparison> {
    let values = expand_spectrum(computed);
    if values.len() != oracle.len() {
        return Err(Error::CountMismatch {
            computed: values.len(),
            oracle: oracle.len(),
        });
    }
    let max_deviation = values
        .iter()
        .zip(oracle)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(SpectrumComparison {
        count: values.len(),
        max_deviation,
        tolerance: tol,
        passed: max_deviation <= tol,
    })
}

/// Numerical rank of a family of functions on one graph.
pub fn gram_rank(basis: &[VertexFunction], tol: f64) -> usize {
    let views: Vec<&[f64]> = basis.iter().map(VertexFunction::values).collect();
    crate::linalg::gram_rank(&views, tol)
}
