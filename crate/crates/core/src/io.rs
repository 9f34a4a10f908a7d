//! Text serializations for graphs, spectra, eigenfunctions and trees.
//!
//! Floats are written in shortest round-trip form so identical inputs give
//! byte-identical files.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::dynamics::{format_rational, AlgebraicEigenvalue};
use crate::eigen::{EigenBasis, SpectrumEntry};
use crate::function::VertexFunction;
use crate::graphs::{Family, FractalGraph};

/// One line per edge, `addr1 addr2`, then one `addr addr` line per loop.
pub fn graph_edgelist(graph: &FractalGraph) -> String {
    let mut out = String::new();
    for &(a, b) in graph.edges() {
        let _ = writeln!(out, "{} {}", graph.vertex(a), graph.vertex(b));
    }
    for &x in graph.loops() {
        let v = graph.vertex(x);
        let _ = writeln!(out, "{v} {v}");
    }
    out
}

pub fn graph_dot(graph: &FractalGraph) -> String {
    let mut out = format!("graph {}_{} {{\n", graph.family(), graph.level());
    for v in graph.vertices() {
        let _ = writeln!(out, "  \"{v}\";");
    }
    for &(a, b) in graph.edges() {
        let _ = writeln!(out, "  \"{}\" -- \"{}\";", graph.vertex(a), graph.vertex(b));
    }
    for &x in graph.loops() {
        let v = graph.vertex(x);
        let _ = writeln!(out, "  \"{v}\" -- \"{v}\";");
    }
    out.push_str("}\n");
    out
}

pub fn graph_json(graph: &FractalGraph) -> Value {
    let name = |i: usize| graph.vertex(i).to_string();
    json!({
        "family": graph.family(),
        "level": graph.level(),
        "vertices": graph.vertices().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "edges": graph.edges().iter().map(|&(a, b)| [name(a), name(b)]).collect::<Vec<_>>(),
        "loops": graph.loops().iter().map(|&x| name(x)).collect::<Vec<_>>(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumRecord {
    pub value: f64,
    pub seed: String,
    pub branch: String,
    pub multiplicity: usize,
    pub provenance: String,
}

impl From<&SpectrumEntry> for SpectrumRecord {
    fn from(e: &SpectrumEntry) -> Self {
        SpectrumRecord {
            value: e.value(),
            seed: format_rational(&e.eigenvalue.seed),
            branch: e.eigenvalue.branch_label(),
            multiplicity: e.multiplicity,
            provenance: e.provenance.to_string(),
        }
    }
}

pub fn spectrum_json(family: Family, level: usize, entries: &[SpectrumEntry]) -> Value {
    json!({
        "family": family,
        "level": level,
        "entries": entries.iter().map(SpectrumRecord::from).collect::<Vec<_>>(),
    })
}

pub fn spectrum_csv(entries: &[SpectrumEntry]) -> String {
    let mut out = String::from("value,seed,branch,multiplicity,provenance\n");
    for r in entries.iter().map(SpectrumRecord::from) {
        let _ = writeln!(
            out,
            "{:?},{},{},{},{}",
            r.value, r.seed, r.branch, r.multiplicity, r.provenance
        );
    }
    out
}

/// `address,value` header, then one row per vertex in graph order.
pub fn eigenfunction_csv(graph: &FractalGraph, f: &VertexFunction) -> String {
    let mut out = String::from("address,value\n");
    for (v, x) in graph.vertices().iter().zip(f.values()) {
        let _ = writeln!(out, "{v},{x:?}");
    }
    out
}

/// All eigenspaces in one document, functions as value arrays in the order
/// of `addresses`.
pub fn basis_bundle_json(graph: &FractalGraph, bases: &[(usize, &EigenBasis)]) -> Value {
    json!({
        "family": graph.family(),
        "level": graph.level(),
        "addresses": graph.vertices().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "eigenspaces": bases.iter().map(|(index, b)| json!({
            "index": index,
            "entry": SpectrumRecord::from(&b.entry),
            "functions": b.functions.iter().map(|f| f.values().to_vec()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

/// Indented text: one node per line, two spaces per depth.
pub fn decimation_tree_text(levels: &[Vec<AlgebraicEigenvalue>]) -> String {
    let mut out = String::new();
    let Some(root) = levels.first().and_then(|l| l.first()) else {
        return out;
    };
    let _ = writeln!(out, "{} seed {} = {:?}", root.map, format_rational(&root.seed), root.value);
    // children of consecutive parents are consecutive, so one cursor per
    // level suffices for a depth-first walk
    fn walk(levels: &[Vec<AlgebraicEigenvalue>], cursor: &mut [usize], depth: usize, prefix: &str, out: &mut String) {
        let Some(level) = levels.get(depth) else { return };
        while let Some(ev) = level.get(cursor[depth]) {
            let label = ev.branch_label();
            if !label.starts_with(prefix) {
                break;
            }
            cursor[depth] += 1;
            let _ = writeln!(out, "{}{} {:?}", "  ".repeat(depth), label, ev.value);
            walk(levels, cursor, depth + 1, &label, out);
        }
    }
    let mut cursor = vec![0; levels.len()];
    walk(levels, &mut cursor, 1, "", &mut out);
    out
}

pub fn decimation_tree_json(levels: &[Vec<AlgebraicEigenvalue>]) -> Value {
    let root = levels.first().and_then(|l| l.first());
    json!({
        "map": root.map(|r| r.map.to_string()),
        "seed": root.map(|r| format_rational(&r.seed)),
        "depth": levels.len().saturating_sub(1),
        "levels": levels.iter().map(|level| level.iter().map(|ev| json!({
            "branch": ev.branch_label(),
            "value": ev.value,
        })).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{preimage_tree, MapKind};
    use crate::eigen::spectrum;
    use crate::graphs::build_graph;
    use num_rational::Ratio;

    #[test]
    fn h1_edgelist() {
        let text = graph_edgelist(&build_graph(Family::H, 1).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines, vec!["1 2", "1 3", "2 3", "1 1", "2 2", "3 3"]);
    }

    #[test]
    fn g1_json_and_dot() {
        let g = build_graph(Family::G, 1).unwrap();
        let v = graph_json(&g);
        assert_eq!(v["family"], "G");
        assert_eq!(v["vertices"].as_array().unwrap().len(), 6);
        assert_eq!(v["edges"].as_array().unwrap().len(), 9);
        assert!(graph_dot(&g).starts_with("graph G_1 {"));
    }

    #[test]
    fn spectrum_formats() {
        let s = spectrum(Family::H, 2).unwrap();
        let csv = spectrum_csv(&s);
        assert_eq!(csv.lines().count(), 6);
        assert!(csv.contains("-1.0,-1,,3,seedMinus1"));
        let v = spectrum_json(Family::H, 2, &s);
        assert_eq!(v["entries"][4]["seed"], "-5/3");
        assert_eq!(v["entries"][2]["branch"], "l");
    }

    #[test]
    fn tree_text() {
        let t = preimage_tree(MapKind::RH, Ratio::from_integer(-1), 2).unwrap();
        let text = decimation_tree_text(&t);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 7);
        assert!(lines[1].starts_with("  l "));
        assert!(lines[2].starts_with("    ll "));
        assert!(lines[4].starts_with("  h "));
        assert_eq!(decimation_tree_json(&t)["levels"][2].as_array().unwrap().len(), 4);
    }
}
