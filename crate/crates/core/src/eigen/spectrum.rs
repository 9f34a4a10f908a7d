use num_rational::Ratio;

use crate::dynamics::{preimage_tree, AlgebraicEigenvalue, Branch, MapKind, Rational};
use crate::error::{Error, Result};
use crate::graphs::{vertex_count, Family};

use super::{Provenance, SpectrumEntry};

/// Largest level accepted by [`spectrum`]; the entry count grows like `2^n`.
pub const SPECTRUM_MAX_LEVEL: usize = 20;

fn pow3(k: usize) -> usize {
    3usize.pow(k as u32)
}

fn tree_entries(
    map: MapKind,
    seed: Rational,
    depth: usize,
    provenance: Provenance,
    multiplicity: impl Fn(usize) -> usize,
    out: &mut Vec<SpectrumEntry>,
) -> Result<()> {
    for (d, level) in preimage_tree(map, seed, depth)?.into_iter().enumerate() {
        for eigenvalue in level {
            out.push(SpectrumEntry {
                eigenvalue,
                multiplicity: multiplicity(d),
                provenance,
            });
        }
    }
    Ok(())
}

fn zero_entry(map: MapKind) -> SpectrumEntry {
    SpectrumEntry {
        eigenvalue: AlgebraicEigenvalue::exact(Ratio::from_integer(0), map),
        multiplicity: 1,
        provenance: Provenance::Zero,
    }
}

fn h_spectrum(n: usize) -> Result<Vec<SpectrumEntry>> {
    let mut out = vec![zero_entry(MapKind::RH)];
    if n >= 1 {
        tree_entries(
            MapKind::RH,
            Ratio::from_integer(-1),
            n - 1,
            Provenance::SeedMinus1,
            |i| (pow3(n - 1 - i) + 3) / 2,
            &mut out,
        )?;
    }
    if n >= 2 {
        tree_entries(
            MapKind::RH,
            Ratio::new(-5, 3),
            n - 2,
            Provenance::SeedMinus53,
            |j| (pow3(n - 1 - j) - 1) / 2,
            &mut out,
        )?;
    }
    Ok(out)
}

fn g_spectrum(n: usize) -> Result<Vec<SpectrumEntry>> {
    let mut out = vec![zero_entry(MapKind::RG)];
    tree_entries(
        MapKind::RG,
        Ratio::new(-3, 2),
        n,
        Provenance::SeedMinus32,
        |i| (pow3(n - i) + 3) / 2,
        &mut out,
    )?;
    if n >= 2 {
        tree_entries(
            MapKind::RG,
            Ratio::new(-5, 4),
            n - 2,
            Provenance::SeedMinus54,
            |j| (pow3(n - 1 - j) - 1) / 2,
            &mut out,
        )?;
    }
    Ok(out)
}

fn j_spectrum(n: usize) -> Result<Vec<SpectrumEntry>> {
    let mut out = Vec::new();
    for g in g_spectrum(n)? {
        let ev = &g.eigenvalue;
        if g.provenance == Provenance::SeedMinus32 && ev.depth() == 0 {
            continue;
        }
        for lift in [Branch::Lo, Branch::Hi] {
            let lifted = AlgebraicEigenvalue::resolve(ev.seed, ev.map, &ev.branch, Some(lift))?;
            if (lifted.value + 1.0).abs() <= crate::dynamics::EXCEPTIONAL_TOLERANCE {
                return Err(Error::Exceptional {
                    z: lifted.value,
                    reason: format!("R3 lift of {ev} meets -1"),
                });
            }
            out.push(SpectrumEntry {
                eigenvalue: lifted,
                multiplicity: g.multiplicity,
                provenance: Provenance::JLift,
            });
        }
    }
    out.push(SpectrumEntry {
        eigenvalue: AlgebraicEigenvalue::exact(Ratio::from_integer(-1), MapKind::R3),
        multiplicity: (pow3(n) + 3) / 2,
        provenance: Provenance::JLift,
    });
    Ok(out)
}

/// Eigenvalues of `Δ` on the level-`n` graph of `family`, with
/// multiplicities, in a fixed order: zero, then each seed's preimage tree by
/// depth and branch.
pub fn spectrum(family: Family, n: usize) -> Result<Vec<SpectrumEntry>> {
    if n > SPECTRUM_MAX_LEVEL {
        return Err(Error::LevelTooLarge {
            level: n,
            max: SPECTRUM_MAX_LEVEL,
        });
    }
    let entries = match family {
        Family::H => h_spectrum(n)?,
        Family::G => g_spectrum(n)?,
        Family::J => j_spectrum(n)?,
    };
    let total: usize = entries.iter().map(|e| e.multiplicity).sum();
    let expected = vertex_count(family, n);
    if total != expected {
        return Err(Error::Consistency(format!(
            "{family}_{n}: multiplicities sum to {total}, expected {expected}"
        )));
    }
    Ok(entries)
}

/// Number of distinct eigenvalues, merging values closer than `tol`.
pub fn distinct_count(entries: &[SpectrumEntry], tol: f64) -> usize {
    let mut values: Vec<f64> = entries.iter().map(SpectrumEntry::value).collect();
    values.sort_by(f64::total_cmp);
    values.windows(2).filter(|w| w[1] - w[0] > tol).count() + usize::from(!values.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(entries: &[SpectrumEntry]) -> Vec<(f64, usize)> {
        entries.iter().map(|e| (e.value(), e.multiplicity)).collect()
    }

    #[test]
    fn h_small() {
        assert_eq!(summary(&spectrum(Family::H, 0).unwrap()), vec![(0.0, 1)]);
        assert_eq!(summary(&spectrum(Family::H, 1).unwrap()), vec![(0.0, 1), (-1.0, 2)]);
        let s = summary(&spectrum(Family::H, 2).unwrap());
        let mult: Vec<usize> = s.iter().map(|e| e.1).collect();
        assert_eq!(mult, vec![1, 3, 2, 2, 1]);
        let s13 = 13f64.sqrt();
        assert!((s[2].0 - (-5.0 - s13) / 6.0).abs() < 1e-15);
        assert!((s[3].0 - (-5.0 + s13) / 6.0).abs() < 1e-15);
        assert!((s[4].0 + 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn g_small() {
        assert_eq!(summary(&spectrum(Family::G, 0).unwrap()), vec![(0.0, 1), (-1.5, 2)]);
        assert_eq!(
            summary(&spectrum(Family::G, 1).unwrap()),
            vec![(0.0, 1), (-1.5, 3), (-0.75, 2)]
        );
    }

    #[test]
    fn j_one() {
        let s = spectrum(Family::J, 1).unwrap();
        assert_eq!(s.iter().map(|e| e.multiplicity).sum::<usize>(), 9);
        let values: Vec<f64> = s.iter().map(SpectrumEntry::value).collect();
        assert!(values.contains(&0.0) && values.contains(&-2.0));
        assert_eq!(s.last().unwrap().value(), -1.0);
        assert_eq!(s.last().unwrap().multiplicity, 3);
    }

    #[test]
    fn totals_and_distinct_counts() {
        for n in 0..=8 {
            for family in [Family::G, Family::H, Family::J] {
                spectrum(family, n).unwrap();
            }
        }
        for n in 2..=8 {
            let s = spectrum(Family::H, n).unwrap();
            assert_eq!(distinct_count(&s, 1e-12), 3 * (1 << (n - 1)) - 1);
        }
    }
}
