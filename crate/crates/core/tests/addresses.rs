//! Graph structure checked against planar coordinates: `F_i(x) = (x + p_i)/2`
//! on the triangle `p_1 = (0,0)`, `p_2 = (1,0)`, `p_3 = (0,1)`. All points are
//! dyadic, so they are keyed exactly as integers scaled by `2^n`.

use std::collections::{BTreeMap, BTreeSet};

use gasket_spectra::graphs::{
    canonical_g_vertex, cells_at, g_vertex_count, h_neighbor_word, vertex_count, VertexAddress, Word,
};
use gasket_spectra::{build_graph, Family};

type Point = (i64, i64);

fn corner(j: u8, scale: i64) -> Point {
    match j {
        1 => (0, 0),
        2 => (scale, 0),
        _ => (0, scale),
    }
}

/// `F_w(p_j)` in units of `2^-n`.
fn point(w: &Word, j: u8, n: usize) -> Point {
    let scale = 1i64 << n;
    let mut p = corner(j, scale);
    for &letter in w.letters().iter().rev() {
        let q = corner(letter, scale);
        p = ((p.0 + q.0) / 2, (p.1 + q.1) / 2);
    }
    p
}

fn address_point(v: &VertexAddress, n: usize) -> Point {
    match v {
        VertexAddress::G { word, corner } => point(word, *corner, n),
        VertexAddress::H(_) => panic!("{v} has no point"),
    }
}

#[test]
fn canonical_names_agree_with_coordinates() {
    for n in 0..=6 {
        let mut by_point: BTreeMap<Point, BTreeSet<VertexAddress>> = BTreeMap::new();
        for len in 0..=n {
            for w in Word::all(len) {
                for j in 1..=3 {
                    let v = canonical_g_vertex(&w, j).unwrap();
                    assert_eq!(address_point(&v, n), point(&w, j, n), "F_{w}(p_{j})");
                    by_point.entry(point(&w, j, n)).or_default().insert(v);
                }
            }
        }
        assert!(by_point.values().all(|names| names.len() == 1), "n={n}");
        assert_eq!(by_point.len(), g_vertex_count(n));
        let g = build_graph(Family::G, n).unwrap();
        let graph_points: BTreeSet<Point> = g.vertices().iter().map(|v| address_point(v, n)).collect();
        assert_eq!(graph_points, by_point.keys().copied().collect());
    }
}

#[test]
fn gasket_edges_are_cell_sides() {
    for n in 0..=5 {
        let g = build_graph(Family::G, n).unwrap();
        let mut expected = BTreeSet::new();
        for w in Word::all(n) {
            for (a, b) in [(1, 2), (2, 3), (1, 3)] {
                let (p, q) = (point(&w, a, n), point(&w, b, n));
                expected.insert((p.min(q), p.max(q)));
            }
        }
        let found: BTreeSet<(Point, Point)> = g
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (p, q) = (address_point(g.vertex(a), n), address_point(g.vertex(b), n));
                (p.min(q), p.max(q))
            })
            .collect();
        assert_eq!(g.edges().len(), 3 * 3usize.pow(n as u32));
        assert_eq!(found, expected, "n={n}");
    }
}

#[test]
fn hanoi_edges_join_cells_sharing_a_point() {
    for n in 0..=5 {
        let h = build_graph(Family::H, n).unwrap();
        let cells = Word::all(n);
        let mut expected = BTreeSet::new();
        for (i, u) in cells.iter().enumerate() {
            for v in &cells[i + 1..] {
                let pu: BTreeSet<Point> = (1..=3).map(|j| point(u, j, n)).collect();
                if (1..=3).any(|j| pu.contains(&point(v, j, n))) {
                    expected.insert((u.to_string(), v.to_string()));
                }
            }
        }
        let found: BTreeSet<(String, String)> = h
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (h.vertex(a).word().to_string(), h.vertex(b).word().to_string());
                (x.clone().min(y.clone()), x.max(y))
            })
            .collect();
        assert_eq!(found, expected, "n={n}");
        let loops: BTreeSet<String> = h.loops().iter().map(|&x| h.vertex(x).word().to_string()).collect();
        let corners: BTreeSet<String> = (1..=3).map(|j| Word::repeat(j, n).to_string()).collect();
        assert_eq!(loops, corners);
    }
}

#[test]
fn hanoi_neighbor_words_share_the_named_corner() {
    for n in 1..=5 {
        for w in Word::all(n) {
            for k in 1..=3 {
                let v = h_neighbor_word(&w, k);
                let p = point(&w, k, n);
                if v == w {
                    assert_eq!(w, Word::repeat(k, n));
                } else {
                    assert!((1..=3).any(|j| point(&v, j, n) == p), "{w} via {k}");
                }
            }
        }
    }
}

#[test]
fn cells_at_lists_every_cell_touching_the_point() {
    for n in 0..=5 {
        let g = build_graph(Family::G, n).unwrap();
        for v in g.vertices() {
            let p = address_point(v, n);
            let mut expected: Vec<(Word, u8)> = Word::all(n)
                .into_iter()
                .flat_map(|w| (1..=3).map(move |j| (w.clone(), j)))
                .filter(|(w, j)| point(w, *j, n) == p)
                .collect();
            let mut found = cells_at(v, n).unwrap();
            expected.sort();
            found.sort();
            assert_eq!(found, expected, "{v}");
        }
    }
}

#[test]
fn intermediate_graph_joins_cells_to_their_corners() {
    for n in 0..=4 {
        let j = build_graph(Family::J, n).unwrap();
        assert_eq!(j.len(), vertex_count(Family::H, n) + vertex_count(Family::G, n));
        let mut found = BTreeSet::new();
        for &(a, b) in j.edges() {
            let (x, y) = (j.vertex(a), j.vertex(b));
            let (cell, g) = if x.is_h() { (x, y) } else { (y, x) };
            assert!(cell.is_h() && !g.is_h());
            found.insert((cell.word().clone(), address_point(g, n)));
        }
        let expected: BTreeSet<(Word, Point)> = Word::all(n)
            .into_iter()
            .flat_map(|w| (1..=3).map(move |k| (w.clone(), point(&w, k, n))))
            .collect();
        assert_eq!(found, expected);
    }
}

#[test]
fn text_forms() {
    let parse = |s: &str| s.parse::<VertexAddress>().unwrap();
    assert_eq!(parse("2.1"), parse("1.2"));
    assert_eq!(parse("12.2").to_string(), "1.2");
    assert_eq!(parse("11.2").to_string(), "11.2");
    assert_eq!(parse("0"), VertexAddress::H(Word::empty()));
    assert_eq!(parse("3.3").to_string(), ".3");
    assert!("1.4".parse::<VertexAddress>().is_err());
}
