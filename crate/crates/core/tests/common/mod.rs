#![allow(dead_code)]

use gasket_spectra::dynamics::rational_to_f64;
use gasket_spectra::eigen::{EigenBasis, SpectrumEntry};
use gasket_spectra::graphs::h_neighbor_word;
use gasket_spectra::{Family, FractalGraph, VertexFunction, Word};

/// Coefficients of a one-step H extension
/// `g(w·j) = c · ((a0) f(y0) + (aj) f(y_j) + f(y_{j+1}) + f(y_{j-1}))`.
#[derive(Clone, Copy, Debug)]
pub struct HStencil {
    pub prefactor: f64,
    pub anchor: f64,
    pub along: f64,
}

impl HStencil {
    /// The display as printed in the source text.
    pub fn printed(z: f64) -> Self {
        HStencil {
            prefactor: (2.0 * z + 3.0) / (6.0 * (4.0 * z + 5.0) * (2.0 * z + 1.0)),
            anchor: 4.0 * z + 5.0,
            along: 4.0 * z + 3.0,
        }
    }

    /// The form obtained by running the gasket extension at `3z/4`.
    pub fn corrected(z: f64) -> Self {
        HStencil {
            prefactor: (z + 2.0) / (2.0 * (3.0 * z + 5.0) * (3.0 * z + 2.0)),
            anchor: 3.0 * z + 5.0,
            along: 3.0 * z + 3.0,
        }
    }
}

/// Applies `stencil` to a function on `H_n`, giving a function on `H_{n+1}`.
pub fn extend_with(coarse: &FractalGraph, fine: &FractalGraph, f: &VertexFunction, stencil: HStencil) -> VertexFunction {
    let mut values = vec![0.0; fine.len()];
    let at = |w: &Word| f.values()[coarse.h_index(w).unwrap()];
    for w in Word::all(coarse.level()) {
        let y: Vec<f64> = (1..=3).map(|k| at(&h_neighbor_word(&w, k))).collect();
        for j in 1..=3u8 {
            let (next, prev) = (j % 3, (j + 1) % 3);
            let inner = stencil.anchor * at(&w) + stencil.along * y[j as usize - 1] + y[next as usize] + y[prev as usize];
            values[fine.h_index(&w.child(j)).unwrap()] = stencil.prefactor * inner;
        }
    }
    VertexFunction::from_values(fine, values).unwrap()
}

/// Multiplicity of a spectrum entry by the closed-form counting formulas.
pub fn formula_multiplicity(family: Family, n: usize, entry: &SpectrumEntry) -> usize {
    let p = |k: usize| 3usize.pow(k as u32);
    let seed = rational_to_f64(&entry.eigenvalue.seed);
    let d = entry.eigenvalue.depth();
    match family {
        Family::H if seed == 0.0 => 1,
        Family::H if seed == -1.0 => (p(n - 1 - d) + 3) / 2,
        Family::H => (p(n - 1 - d) - 1) / 2,
        Family::G if seed == 0.0 => 1,
        Family::G if seed == -1.5 => (p(n - d) + 3) / 2,
        Family::G => (p(n - 1 - d) - 1) / 2,
        Family::J if entry.eigenvalue.lift.is_none() => (p(n) + 3) / 2,
        Family::J => formula_multiplicity(Family::G, n, &lifted_base(entry)),
    }
}

fn lifted_base(entry: &SpectrumEntry) -> SpectrumEntry {
    let mut base = entry.clone();
    base.eigenvalue.lift = None;
    base
}

/// The basis in `bases` whose eigenvalue has the given seed and branch word.
pub fn find_basis<'a>(bases: &'a [EigenBasis], target: &SpectrumEntry, depth: usize) -> &'a EigenBasis {
    let want = &target.eigenvalue;
    bases
        .iter()
        .find(|b| {
            let ev = &b.entry.eigenvalue;
            ev.seed == want.seed && ev.lift.is_none() && ev.branch[..] == want.branch[..depth]
        })
        .expect("ancestor basis")
}
