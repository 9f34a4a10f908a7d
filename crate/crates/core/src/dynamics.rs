//! Decimation polynomials and their preimage trees.
//!
//! Every map here has the form `z ↦ a z² + b z`. Eigenvalues produced by
//! decimation are named by a rational seed and a word of root choices, so
//! they can be compared exactly across runs; the float value is derived and
//! refined on the composed polynomial.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

pub const MAX_TREE_DEPTH: usize = 40;

/// Preimages closer than this to an exceptional point are rejected.
pub const EXCEPTIONAL_TOLERANCE: f64 = 1e-9;

/// Backward-error target for refined tree values.
pub const REFINE_TOLERANCE: f64 = 1e-12;

fn q(n: i64, d: i64) -> Rational {
    Ratio::new(n, d)
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"-5/3"`, `"0"`, `"3/4"` and the like.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim().replace('\u{2212}', "-");
    let err = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| err())?;
            let d: i64 = d.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            Ok(Ratio::new(n, d))
        }
        None => Ok(Ratio::from_integer(s.parse().map_err(|_| err())?)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MapKind {
    R2,
    R3,
    RG,
    RH,
}

impl MapKind {
    /// `(a, b)` in `a z² + b z`.
    pub fn coefficients(self) -> (f64, f64) {
        match self {
            MapKind::R2 => (2.0, 4.0),
            MapKind::R3 => (1.5, 3.0),
            MapKind::RG => (4.0, 5.0),
            MapKind::RH => (3.0, 5.0),
        }
    }

    pub fn eval(self, z: f64) -> f64 {
        let (a, b) = self.coefficients();
        z * (a * z + b)
    }

    pub fn derivative(self, z: f64) -> f64 {
        let (a, b) = self.coefficients();
        2.0 * a * z + b
    }

    pub fn critical_value(self) -> f64 {
        let (a, b) = self.coefficients();
        -b * b / (4.0 * a)
    }

    pub fn exceptional_set(self) -> Vec<Rational> {
        match self {
            MapKind::R2 | MapKind::R3 => vec![q(-1, 1)],
            MapKind::RG => vec![q(-3, 2), q(-5, 4), q(-1, 2)],
            MapKind::RH => vec![q(-2, 1), q(-5, 3), q(-1, 1), q(-2, 3)],
        }
    }

    /// Distance from `z` to the nearest exceptional point.
    pub fn exceptional_distance(self, z: f64) -> f64 {
        self.exceptional_set()
            .iter()
            .map(|e| (z - rational_to_f64(e)).abs())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn descriptor(self) -> DecimationMap {
        DecimationMap::new(self)
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapKind::R2 => "R2",
            MapKind::R3 => "R3",
            MapKind::RG => "RG",
            MapKind::RH => "RH",
        })
    }
}

impl FromStr for MapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "r2" => Ok(MapKind::R2),
            "r3" => Ok(MapKind::R3),
            "rg" => Ok(MapKind::RG),
            "rh" => Ok(MapKind::RH),
            _ => Err(Error::Parse(format!("unknown map {s:?}"))),
        }
    }
}

/// Rational function with coefficients in ascending powers of `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    pub numerator: Vec<Rational>,
    pub denominator: Vec<Rational>,
}

impl RationalFunction {
    fn new(numerator: &[(i64, i64)], denominator: &[(i64, i64)]) -> Self {
        let conv = |c: &[(i64, i64)]| c.iter().map(|&(n, d)| q(n, d)).collect();
        RationalFunction {
            numerator: conv(numerator),
            denominator: conv(denominator),
        }
    }

    pub fn eval(&self, z: f64) -> f64 {
        let horner = |c: &[Rational]| c.iter().rev().fold(0.0, |acc, k| acc * z + rational_to_f64(k));
        horner(&self.numerator) / horner(&self.denominator)
    }
}

/// One decimation map with its exceptional set and, where a direct Schur
/// complement realizes it, the similarity functions `φ` and `φ̃` with
/// `R = φ / φ̃`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecimationMap {
    pub kind: MapKind,
    pub quadratic: Rational,
    pub linear: Rational,
    pub exceptional: Vec<Rational>,
    pub phi: Option<RationalFunction>,
    pub phi_tilde: Option<RationalFunction>,
}

impl DecimationMap {
    pub fn new(kind: MapKind) -> Self {
        // star-mesh: φ = 1 + z − 1/(1+z) = (z² + 2z)/(1 + z)
        let star_phi = || RationalFunction::new(&[(0, 1), (2, 1), (1, 1)], &[(1, 1), (1, 1)]);
        let (quadratic, linear, phi, phi_tilde) = match kind {
            MapKind::R2 => (
                q(2, 1),
                q(4, 1),
                Some(star_phi()),
                Some(RationalFunction::new(&[(1, 1)], &[(2, 1), (2, 1)])),
            ),
            MapKind::R3 => (
                q(3, 2),
                q(3, 1),
                Some(star_phi()),
                Some(RationalFunction::new(&[(2, 1)], &[(3, 1), (3, 1)])),
            ),
            MapKind::RG => (
                q(4, 1),
                q(5, 1),
                Some(RationalFunction::new(&[(0, 1), (3, 1), (2, 1)], &[(1, 1), (2, 1)])),
                Some(RationalFunction::new(&[(3, 1), (2, 1)], &[(5, 1), (14, 1), (8, 1)])),
            ),
            // only reachable through conjugation; no vertex-subset Schur complement
            MapKind::RH => (q(3, 1), q(5, 1), None, None),
        };
        DecimationMap {
            kind,
            quadratic,
            linear,
            exceptional: kind.exceptional_set(),
            phi,
            phi_tilde,
        }
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.kind.eval(z)
    }
}

pub fn eval_map(map: MapKind, z: f64) -> f64 {
    map.eval(z)
}

/// Both roots of `a z² + b z = zeta`, smaller first, computed without
/// cancellation. A double root is returned twice.
pub fn preimages(map: MapKind, zeta: f64) -> Result<(f64, f64)> {
    let (a, b) = map.coefficients();
    let c = -zeta;
    let mut disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        // rounding at an exact critical value
        if disc > -8.0 * f64::EPSILON * b * b {
            disc = 0.0;
        } else {
            return Err(Error::ComplexPreimage {
                target: zeta,
                discriminant: disc,
            });
        }
    }
    let qv = -0.5 * (b + b.signum() * disc.sqrt());
    let r1 = qv / a;
    let r2 = if qv != 0.0 { c / qv } else { r1 };
    Ok(if r1 <= r2 { (r1, r2) } else { (r2, r1) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    Lo,
    Hi,
}

impl Branch {
    pub fn symbol(self) -> char {
        match self {
            Branch::Lo => 'l',
            Branch::Hi => 'h',
        }
    }

    fn pick(self, roots: (f64, f64)) -> f64 {
        match self {
            Branch::Lo => roots.0,
            Branch::Hi => roots.1,
        }
    }
}

/// Eigenvalue named by a rational seed and the root choices that lead to it.
///
/// Following `branch` from `seed` through preimages of `map` gives the tree
/// value; a `lift` applies one further preimage under `R3`, which is how the
/// spectrum of `J_n` is read off that of `G_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicEigenvalue {
    pub seed: Rational,
    pub map: MapKind,
    pub branch: Vec<Branch>,
    pub lift: Option<Branch>,
    pub value: f64,
}

impl AlgebraicEigenvalue {
    pub fn exact(seed: Rational, map: MapKind) -> Self {
        AlgebraicEigenvalue {
            value: rational_to_f64(&seed),
            seed,
            map,
            branch: Vec::new(),
            lift: None,
        }
    }

    /// Follows the root choices from the seed and refines the result.
    pub fn resolve(seed: Rational, map: MapKind, branch: &[Branch], lift: Option<Branch>) -> Result<Self> {
        let mut z = rational_to_f64(&seed);
        for b in branch {
            z = b.pick(preimages(map, z)?);
        }
        if let Some(b) = lift {
            z = b.pick(preimages(MapKind::R3, z)?);
        }
        let mut ev = AlgebraicEigenvalue {
            seed,
            map,
            branch: branch.to_vec(),
            lift,
            value: z,
        };
        ev.refine();
        Ok(ev)
    }

    pub fn depth(&self) -> usize {
        self.branch.len()
    }

    pub fn seed_f64(&self) -> f64 {
        rational_to_f64(&self.seed)
    }

    /// Root-choice word, e.g. `"lh"`, with a `/l` or `/h` suffix for a lift.
    pub fn branch_label(&self) -> String {
        let mut s: String = self.branch.iter().map(|b| b.symbol()).collect();
        if let Some(b) = self.lift {
            s.push('/');
            s.push(b.symbol());
        }
        s
    }

    /// Tree value at `depth` along this eigenvalue's branch (no lift).
    pub fn ancestor(&self, depth: usize) -> Result<AlgebraicEigenvalue> {
        Self::resolve(self.seed, self.map, &self.branch[..depth], None)
    }

    /// The composed map evaluated at `z` and its derivative.
    fn composed(&self, z: f64) -> (f64, f64) {
        let (mut v, mut d) = (z, 1.0);
        if self.lift.is_some() {
            d *= MapKind::R3.derivative(v);
            v = MapKind::R3.eval(v);
        }
        for _ in 0..self.branch.len() {
            d *= self.map.derivative(v);
            v = self.map.eval(v);
        }
        (v, d)
    }

    /// `|P(z) − seed| / |P'(z)|` for the composed map `P`: how far `value`
    /// must move to become an exact root.
    pub fn backward_error(&self) -> f64 {
        let (p, dp) = self.composed(self.value);
        let r = (p - self.seed_f64()).abs();
        if r == 0.0 {
            0.0
        } else {
            r / dp.abs()
        }
    }

    /// Newton steps on the composed polynomial. Steps are only taken while
    /// they shrink the residual and stay tiny, so the root never switches
    /// branch.
    pub fn refine(&mut self) {
        if self.branch.is_empty() && self.lift.is_none() {
            return;
        }
        let target = self.seed_f64();
        let mut z = self.value;
        let (mut p, mut dp) = self.composed(z);
        let mut r = (p - target).abs();
        for _ in 0..12 {
            if r == 0.0 || dp == 0.0 || !dp.is_finite() {
                break;
            }
            let step = (p - target) / dp;
            if step.abs() <= 2.0 * f64::EPSILON * z.abs().max(1e-300) {
                break;
            }
            if step.abs() > 1e-6 * z.abs().max(1.0) {
                break;
            }
            let cand = z - step;
            let (pc, dc) = self.composed(cand);
            let rc = (pc - target).abs();
            if rc >= r {
                break;
            }
            z = cand;
            p = pc;
            dp = dc;
            r = rc;
        }
        self.value = z;
    }
}

impl fmt::Display for AlgebraicEigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12} [{} {} {}]", self.value, self.map, self.seed, self.branch_label())
    }
}

fn is_pruned_branch(map: MapKind, seed: &Rational, depth: usize) -> bool {
    map == MapKind::RG && *seed == q(-3, 2) && depth == 1
}

/// Preimage tree of `seed` under `map`, one vector per depth `0..=depth`.
///
/// The RG tree of `-3/2` loses its exceptional depth-1 child `-1/2`; any
/// other preimage within [`EXCEPTIONAL_TOLERANCE`] of the exceptional set is
/// an error.
pub fn preimage_tree(map: MapKind, seed: Rational, depth: usize) -> Result<Vec<Vec<AlgebraicEigenvalue>>> {
    if depth > MAX_TREE_DEPTH {
        return Err(Error::DepthTooLarge {
            depth,
            max: MAX_TREE_DEPTH,
        });
    }
    let mut levels = vec![vec![AlgebraicEigenvalue::exact(seed, map)]];
    for d in 1..=depth {
        let mut next = Vec::with_capacity(2 * levels[d - 1].len());
        for parent in &levels[d - 1] {
            let roots = preimages(map, parent.value)?;
            for (b, z) in [(Branch::Lo, roots.0), (Branch::Hi, roots.1)] {
                if map.exceptional_distance(z) <= EXCEPTIONAL_TOLERANCE {
                    if is_pruned_branch(map, &seed, d) {
                        continue;
                    }
                    return Err(Error::Exceptional {
                        z,
                        reason: format!("preimage of {} under {map} at depth {d}", parent.value),
                    });
                }
                let mut branch = parent.branch.clone();
                branch.push(b);
                let mut child = AlgebraicEigenvalue {
                    seed,
                    map,
                    branch,
                    lift: None,
                    value: z,
                };
                child.refine();
                if child.backward_error() > REFINE_TOLERANCE * child.value.abs().max(1.0) {
                    return Err(Error::Consistency(format!(
                        "refinement of {child} stalled at backward error {:e}",
                        child.backward_error()
                    )));
                }
                next.push(child);
            }
        }
        levels.push(next);
    }
    Ok(levels)
}

/// `(RH(z) − (4/3)·RG(3z/4), R2(z) − (4/3)·R3(z))`; both vanish identically.
pub fn conjugacy_defect(z: f64) -> (f64, f64) {
    (
        MapKind::RH.eval(z) - 4.0 / 3.0 * MapKind::RG.eval(0.75 * z),
        MapKind::R2.eval(z) - 4.0 / 3.0 * MapKind::R3.eval(z),
    )
}

/// Signed text form used in reports: `0`, `-1`, `-5/3`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else if r.is_negative() {
        format!("-{}/{}", r.numer().abs(), r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}
