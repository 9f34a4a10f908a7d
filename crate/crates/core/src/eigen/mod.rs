//! Spectra and eigenbases of `G_n`, `H_n` and `J_n` by spectral decimation.

mod basis;
mod seeds;
mod spectrum;
mod transfer;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dynamics::AlgebraicEigenvalue;
use crate::function::VertexFunction;

pub use basis::{full_basis, full_basis_with, BASIS_MAX_LEVEL};
pub use seeds::{
    g_basis_neg32, g_basis_neg32_on, g_basis_neg54, g_basis_neg54_on, h_basis_neg1, h_basis_neg1_on,
    h_basis_neg53, h_basis_neg53_on, j_neg1_basis,
};
pub use spectrum::{distinct_count, spectrum, SPECTRUM_MAX_LEVEL};
pub use transfer::{
    extend_g, extend_h, extend_h_composed, lift_to_j, phi2, phi3, Hierarchy, EXTENSION_RESIDUAL_TOLERANCE,
};

/// Residual bound every constructed eigenfunction must meet.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Gram-rank tolerance for multiplicity checks.
pub const RANK_TOLERANCE: f64 = 1e-8;

/// Where an eigenvalue and its eigenspace come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Provenance {
    Zero,
    SeedMinus1,
    SeedMinus53,
    SeedMinus32,
    SeedMinus54,
    JLift,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Zero => "zero",
            Provenance::SeedMinus1 => "seedMinus1",
            Provenance::SeedMinus53 => "seedMinus53",
            Provenance::SeedMinus32 => "seedMinus32",
            Provenance::SeedMinus54 => "seedMinus54",
            Provenance::JLift => "jLift",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub eigenvalue: AlgebraicEigenvalue,
    pub multiplicity: usize,
    pub provenance: Provenance,
}

impl SpectrumEntry {
    pub fn value(&self) -> f64 {
        self.eigenvalue.value
    }
}

/// A spectrum entry together with a basis of its eigenspace.
#[derive(Clone, Debug)]
pub struct EigenBasis {
    pub entry: SpectrumEntry,
    pub functions: Vec<VertexFunction>,
}

impl EigenBasis {
    pub fn eigenvalue(&self) -> f64 {
        self.entry.value()
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }
}

/// Expands entries by multiplicity into an ascending list of values.
pub fn expand_spectrum(entries: &[SpectrumEntry]) -> Vec<f64> {
    let mut out: Vec<f64> = entries
        .iter()
        .flat_map(|e| std::iter::repeat_n(e.value(), e.multiplicity))
        .collect();
    out.sort_by(f64::total_cmp);
    out
}
