use crate::dynamics::AlgebraicEigenvalue;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::function::VertexFunction;
use crate::graphs::{build_graph, Family, FractalGraph};
use crate::laplacian::LaplacianOperator;
use crate::linalg::gram_rank;

use super::seeds::{g_basis_neg32_on, g_basis_neg54_on, h_basis_neg1_on, h_basis_neg53_on};
use super::{spectrum, EigenBasis, Hierarchy, Provenance, SpectrumEntry, RANK_TOLERANCE, RESIDUAL_TOLERANCE};

/// Largest level accepted by [`full_basis`].
pub const BASIS_MAX_LEVEL: usize = 6;

fn seed_functions(hier: &Hierarchy, provenance: Provenance, level: usize) -> Result<Vec<VertexFunction>> {
    match provenance {
        Provenance::SeedMinus1 => h_basis_neg1_on(hier.graph(Family::H, level)?),
        Provenance::SeedMinus53 => h_basis_neg53_on(hier.graph(Family::H, level)?),
        Provenance::SeedMinus32 => g_basis_neg32_on(hier.graph(Family::G, level)?),
        Provenance::SeedMinus54 => g_basis_neg54_on(hier.graph(Family::G, level)?),
        Provenance::Zero | Provenance::JLift => Err(Error::Consistency(format!("{provenance} has no seed basis"))),
    }
}

/// Seed basis at level `n - depth`, pushed up one level per branch letter.
fn tree_functions(
    hier: &Hierarchy,
    family: Family,
    provenance: Provenance,
    ev: &AlgebraicEigenvalue,
    n: usize,
) -> Result<Vec<VertexFunction>> {
    if provenance == Provenance::Zero {
        return Ok(vec![VertexFunction::constant(hier.graph(family, n)?, 1.0)]);
    }
    let depth = ev.depth();
    let mut functions = seed_functions(hier, provenance, n - depth)?;
    for k in 1..=depth {
        let z = ev.ancestor(k)?.value;
        functions = functions
            .iter()
            .map(|f| match family {
                Family::G => hier.extend_g(f, z),
                _ => hier.extend_h(f, z),
            })
            .collect::<Result<_>>()?;
    }
    Ok(functions)
}

fn g_provenance(seed: &crate::dynamics::Rational) -> Result<Provenance> {
    match (*seed.numer(), *seed.denom()) {
        (0, 1) => Ok(Provenance::Zero),
        (-3, 2) => Ok(Provenance::SeedMinus32),
        (-5, 4) => Ok(Provenance::SeedMinus54),
        _ => Err(Error::Consistency(format!("no G seed {seed}"))),
    }
}

fn j_functions(hier: &Hierarchy, j: &FractalGraph, entry: &SpectrumEntry) -> Result<Vec<VertexFunction>> {
    let ev = &entry.eigenvalue;
    let n = j.level();
    if ev.lift.is_none() {
        let offset = j.len() - hier.graph(Family::G, n)?.len();
        return g_basis_neg32_on(hier.graph(Family::G, n)?)?
            .into_iter()
            .map(|f| {
                let mut values = vec![0.0; offset];
                values.extend_from_slice(f.values());
                VertexFunction::from_values(j, values)
            })
            .collect();
    }
    let base = ev.ancestor(ev.depth())?;
    tree_functions(hier, Family::G, g_provenance(&ev.seed)?, &base, n)?
        .iter()
        .map(|g| hier.lift_to_j(j, g, ev.value))
        .collect()
}

fn build_entry(hier: &Hierarchy, j: Option<&FractalGraph>, family: Family, n: usize, entry: &SpectrumEntry) -> Result<EigenBasis> {
    let (graph, functions) = match j {
        Some(j) => (j, j_functions(hier, j, entry)?),
        None => (
            hier.graph(family, n)?,
            tree_functions(hier, family, entry.provenance, &entry.eigenvalue, n)?,
        ),
    };
    if functions.len() != entry.multiplicity {
        return Err(Error::Consistency(format!(
            "{} basis functions for {} with multiplicity {}",
            functions.len(),
            entry.eigenvalue,
            entry.multiplicity
        )));
    }
    let op = LaplacianOperator::new(graph);
    for f in &functions {
        op.check_eigen(f, entry.value(), RESIDUAL_TOLERANCE)?;
    }
    let views: Vec<&[f64]> = functions.iter().map(VertexFunction::values).collect();
    let rank = gram_rank(&views, RANK_TOLERANCE);
    if rank != entry.multiplicity {
        return Err(Error::Consistency(format!(
            "eigenspace of {} has rank {rank}, expected {}",
            entry.eigenvalue, entry.multiplicity
        )));
    }
    Ok(EigenBasis {
        entry: entry.clone(),
        functions,
    })
}

/// A basis of every eigenspace of the level-`n` graph, in [`spectrum`] order.
/// Each member is residual-checked and each eigenspace rank-checked.
pub fn full_basis(family: Family, n: usize) -> Result<Vec<EigenBasis>> {
    full_basis_with(family, n, Execution::default())
}

/// [`full_basis`] with an explicit execution mode; eigenspaces are built
/// independently, and the output is the same in either mode.
pub fn full_basis_with(family: Family, n: usize, exec: Execution) -> Result<Vec<EigenBasis>> {
    if n > BASIS_MAX_LEVEL {
        return Err(Error::LevelTooLarge {
            level: n,
            max: BASIS_MAX_LEVEL,
        });
    }
    let entries = spectrum(family, n)?;
    let hier = Hierarchy::new(n)?;
    let j = match family {
        Family::J => Some(build_graph(Family::J, n)?),
        _ => None,
    };
    exec.try_map(&entries, |entry| build_entry(&hier, j.as_ref(), family, n, entry))
}
