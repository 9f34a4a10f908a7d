use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::eigen::{full_basis_with, spectrum, BASIS_MAX_LEVEL};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graphs::{build_graph, enumerate_holes, hole_count, hole_cycle_h, vertex_count, Family, FractalGraph};

use super::{
    gram_rank, oracle_spectrum, similarity_defect, spectra_match, SimilarityPair, ORACLE_DIMENSION_CAP,
    SIMILARITY_SAMPLES, SIMILARITY_TOLERANCE, SPECTRUM_TOLERANCE,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Similarity,
    Spectrum,
    Basis,
    Graphs,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "similarity" => Ok(Suite::Similarity),
            "spectrum" => Ok(Suite::Spectrum),
            "basis" => Ok(Suite::Basis),
            "graphs" => Ok(Suite::Graphs),
            _ => Err(Error::Parse(format!("unknown suite {s:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::All => "all",
            Suite::Similarity => "similarity",
            Suite::Spectrum => "spectrum",
            Suite::Basis => "basis",
            Suite::Graphs => "graphs",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub max_level: usize,
    /// Replaces every check's default tolerance when set.
    pub tolerance: Option<f64>,
    pub exec: Execution,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_level: 4,
            tolerance: None,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

fn check(suite: &str, name: String, outcome: Result<(bool, String)>) -> CheckResult {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckResult {
        suite: suite.into(),
        name,
        passed,
        detail,
    }
}

fn edge_count(family: Family, n: usize) -> usize {
    let cells = 3usize.pow(n as u32);
    match family {
        Family::G | Family::J => 3 * cells,
        Family::H => (3 * cells - 3) / 2,
    }
}

fn graph_checks(graph: &FractalGraph) -> (bool, String) {
    let (family, n) = (graph.family(), graph.level());
    let loops_expected = if family == Family::H { 3 } else { 0 };
    let regular = family != Family::H || (0..graph.len()).all(|i| graph.degree(i) == 3);
    let ok = graph.len() == vertex_count(family, n)
        && graph.edges().len() == edge_count(family, n)
        && graph.loops().len() == loops_expected
        && regular
        && graph.is_connected();
    (
        ok,
        format!(
            "{} vertices, {} edges, {} loops",
            graph.len(),
            graph.edges().len(),
            graph.loops().len()
        ),
    )
}

fn hole_checks(n: usize) -> Result<(bool, String)> {
    let h = build_graph(Family::H, n)?;
    let holes = enumerate_holes(n);
    let mut ok = holes.len() == hole_count(n);
    for hole in &holes {
        let cycle = hole_cycle_h(hole, n)?;
        ok &= cycle.len() == 3 << (n - hole.word.len() - 1);
        for (i, v) in cycle.iter().enumerate() {
            let a = h.require(v)?;
            let b = h.require(&cycle[(i + 1) % cycle.len()])?;
            ok &= h.neighbors(a).contains(&b);
        }
    }
    Ok((ok, format!("{} holes", holes.len())))
}

fn graph_suite(cfg: &SuiteConfig, out: &mut Vec<CheckResult>) {
    for family in [Family::G, Family::H, Family::J] {
        for n in 0..=cfg.max_level {
            let outcome = build_graph(family, n).map(|g| graph_checks(&g));
            out.push(check("graphs", format!("counts {family}_{n}"), outcome));
        }
    }
    for n in 2..=cfg.max_level {
        out.push(check("graphs", format!("hole cycles level {n}"), hole_checks(n)));
    }
}

fn spectrum_suite(cfg: &SuiteConfig, out: &mut Vec<CheckResult>) {
    let tol = cfg.tolerance.unwrap_or(SPECTRUM_TOLERANCE);
    let jobs: Vec<(Family, usize)> = [Family::H, Family::G, Family::J]
        .into_iter()
        .flat_map(|f| (0..=cfg.max_level).map(move |n| (f, n)))
        .filter(|&(f, n)| vertex_count(f, n) <= ORACLE_DIMENSION_CAP)
        .collect();
    let results = cfg.exec.map(&jobs, |&(family, n)| {
        let outcome = (|| {
            let oracle = oracle_spectrum(&build_graph(family, n)?)?;
            let r = spectra_match(&spectrum(family, n)?, &oracle, tol)?;
            Ok((r.passed, format!("{} eigenvalues, max deviation {:.3e}", r.count, r.max_deviation)))
        })();
        check("spectrum", format!("oracle {family}_{n}"), outcome)
    });
    out.extend(results);
}

fn similarity_suite(cfg: &SuiteConfig, out: &mut Vec<CheckResult>) {
    let tol = cfg.tolerance.unwrap_or(SIMILARITY_TOLERANCE);
    let top = cfg.max_level.min(3);
    let mut pairs: Vec<SimilarityPair> = [2, 3, 5].into_iter().map(SimilarityPair::StarMesh).collect();
    for n in 0..=top {
        pairs.extend([SimilarityPair::JvsG(n), SimilarityPair::JvsH(n), SimilarityPair::GStep(n)]);
    }
    let results = cfg.exec.map(&pairs, |&pair| {
        let outcome = similarity_defect(pair, &SIMILARITY_SAMPLES, tol)
            .map(|r| (r.passed, format!("max defect {:.3e} over {} samples", r.max_defect, r.samples.len())));
        check("similarity", pair.to_string(), outcome)
    });
    out.extend(results);
}

fn basis_suite(cfg: &SuiteConfig, out: &mut Vec<CheckResult>) {
    let top = cfg.max_level.min(BASIS_MAX_LEVEL);
    for family in [Family::H, Family::G, Family::J] {
        for n in 0..=top {
            let outcome = (|| {
                let bases = full_basis_with(family, n, cfg.exec)?;
                let all: Vec<_> = bases.into_iter().flat_map(|b| b.functions).collect();
                let dim = vertex_count(family, n);
                let rank = gram_rank(&all, cfg.tolerance.unwrap_or(crate::eigen::RANK_TOLERANCE));
                Ok((all.len() == dim && rank == dim, format!("{} functions, rank {rank} of {dim}", all.len())))
            })();
            out.push(check("basis", format!("completeness {family}_{n}"), outcome));
        }
    }
}

/// Runs the selected checks up to `config.max_level`.
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> SuiteReport {
    let mut checks = Vec::new();
    if matches!(suite, Suite::All | Suite::Graphs) {
        graph_suite(config, &mut checks);
    }
    if matches!(suite, Suite::All | Suite::Spectrum) {
        spectrum_suite(config, &mut checks);
    }
    if matches!(suite, Suite::All | Suite::Similarity) {
        similarity_suite(config, &mut checks);
    }
    if matches!(suite, Suite::All | Suite::Basis) {
        basis_suite(config, &mut checks);
    }
    let passed = checks.iter().all(|c| c.passed);
    SuiteReport { checks, passed }
}
