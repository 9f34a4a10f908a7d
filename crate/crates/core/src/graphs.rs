//! Exact combinatorial construction of the gasket graphs `G_n`, the Hanoi
//! towers Schreier graphs `H_n` and the intermediate graphs `J_n`.
//!
//! Every vertex is named symbolically. A cell is a word `w` over `{1,2,3}`
//! and stands for the image of the unit triangle under the composed
//! contraction `F_w = F_{w_1} ∘ … ∘ F_{w_n}` with `F_j(x) = (x + p_j) / 2`.
//! An H-type vertex is the centre `F_w(p_0)` of a level-`n` cell, and a
//! G-type vertex is a corner `F_w(p_j)`. Corners shared by several cells are
//! identified by two rewriting rules:
//!
//! * trailing-letter absorption: `F_{u·j}(p_j) = F_u(p_j)`;
//! * midpoint exchange: `F_{u·a}(p_b) = F_{u·b}(p_a)` for `a ≠ b`.
//!
//! After absorption the canonical form keeps the representative whose last
//! letter is smaller than the corner index, so the word length of a canonical
//! G-vertex is the level at which that point first appears.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_LEVEL: usize = 8;

/// Corner that follows `j` cyclically in `1 → 2 → 3 → 1`.
pub fn next_corner(j: u8) -> u8 {
    j % 3 + 1
}

/// Corner that precedes `j` cyclically.
pub fn prev_corner(j: u8) -> u8 {
    (j + 1) % 3 + 1
}

fn check_corner(j: u8) -> Result<u8> {
    if (1..=3).contains(&j) {
        Ok(j)
    } else {
        Err(Error::InvalidCorner(j))
    }
}

/// Cell address: a word over the alphabet `{1,2,3}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: impl Into<Vec<u8>>) -> Result<Self> {
        let letters = letters.into();
        if let Some(&bad) = letters.iter().find(|l| !(1..=3).contains(*l)) {
            return Err(Error::InvalidLetter(bad));
        }
        Ok(Word(letters))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// `letter` repeated `count` times.
    pub fn repeat(letter: u8, count: usize) -> Self {
        debug_assert!((1..=3).contains(&letter));
        Word(vec![letter; count])
    }

    /// All words of length `n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| (1..=3).map(move |l| w.child(l)))
                .collect();
        }
        out
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    pub fn child(&self, letter: u8) -> Word {
        let mut letters = self.0.clone();
        letters.push(letter);
        Word(letters)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len.min(self.0.len())].to_vec())
    }

    pub fn parent(&self) -> Option<Word> {
        (!self.0.is_empty()).then(|| self.prefix(self.0.len() - 1))
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.0.starts_with(&prefix.0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .bytes()
            .map(|b| match b {
                b'1'..=b'3' => Ok(b - b'0'),
                _ => Err(Error::Parse(format!("invalid letter {:?} in word {s:?}", b as char))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word(letters))
    }
}

/// Symbolic vertex name.
///
/// Text form: an H-vertex prints as its word (the empty word prints as `0`,
/// the centre `p_0`); a G-vertex prints as `word.corner`, so the corner
/// `p_1` is `.1` and the midpoint of `p_1 p_2` is `1.2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexAddress {
    H(Word),
    G { word: Word, corner: u8 },
}

impl VertexAddress {
    pub fn is_h(&self) -> bool {
        matches!(self, VertexAddress::H(_))
    }

    /// Corner `p_j` of the level-0 triangle, if this is one.
    pub fn boundary_corner(&self) -> Option<u8> {
        match self {
            VertexAddress::G { word, corner } if word.is_empty() => Some(*corner),
            _ => None,
        }
    }

    pub fn word(&self) -> &Word {
        match self {
            VertexAddress::H(w) => w,
            VertexAddress::G { word, .. } => word,
        }
    }
}

impl fmt::Display for VertexAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexAddress::H(w) if w.is_empty() => f.write_str("0"),
            VertexAddress::H(w) => write!(f, "{w}"),
            VertexAddress::G { word, corner } => write!(f, "{word}.{corner}"),
        }
    }
}

impl FromStr for VertexAddress {
    type Err = Error;

    /// Parses the text form. G-vertices are canonicalized, so `2.1` and
    /// `1.2` parse to the same address.
    fn from_str(s: &str) -> Result<Self> {
        if s == "0" {
            return Ok(VertexAddress::H(Word::empty()));
        }
        match s.split_once('.') {
            None => Ok(VertexAddress::H(s.parse()?)),
            Some((w, c)) => {
                let corner: u8 = c
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid corner in {s:?}")))?;
                canonical_g_vertex(&w.parse()?, corner)
            }
        }
    }
}

/// Canonical name of the point `F_w(p_j)`.
pub fn canonical_g_vertex(w: &Word, j: u8) -> Result<VertexAddress> {
    let j = check_corner(j)?;
    let mut letters = w.letters().to_vec();
    while letters.last() == Some(&j) {
        letters.pop();
    }
    let Some(&a) = letters.last() else {
        return Ok(VertexAddress::G {
            word: Word::empty(),
            corner: j,
        });
    };
    if a < j {
        return Ok(VertexAddress::G {
            word: Word(letters),
            corner: j,
        });
    }
    *letters.last_mut().unwrap() = j;
    Ok(VertexAddress::G {
        word: Word(letters),
        corner: a,
    })
}

/// The level-`n` cells containing a G-vertex, each paired with the corner
/// index the vertex occupies in that cell. These are exactly the J_n
/// neighbors of the vertex.
pub fn cells_at(vertex: &VertexAddress, n: usize) -> Result<Vec<(Word, u8)>> {
    let VertexAddress::G { word, corner } = vertex else {
        return Err(Error::Consistency(format!("{vertex} is not a G-vertex")));
    };
    if word.len() > n {
        return Err(Error::WordTooLong {
            word: word.to_string(),
            level: n,
        });
    }
    let c = *corner;
    match word.parent() {
        None => Ok(vec![(Word::repeat(c, n), c)]),
        Some(u) => {
            let a = word.last().unwrap();
            let r = n - word.len();
            Ok(vec![
                (word.concat(&Word::repeat(c, r)), c),
                (u.child(c).concat(&Word::repeat(a, r)), a),
            ])
        }
    }
}

/// The H-vertex reached from cell `w` through its corner `F_w(p_k)`; `w`
/// itself when that corner is a boundary corner (a loop).
pub fn h_neighbor_word(w: &Word, k: u8) -> Word {
    let letters = w.letters();
    let r = letters.iter().rev().take_while(|&&l| l == k).count();
    let stem = &letters[..letters.len() - r];
    match stem.split_last() {
        None => w.clone(),
        Some((&a, u)) => {
            let mut out = u.to_vec();
            out.push(k);
            out.extend(std::iter::repeat_n(a, r));
            Word(out)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    G,
    H,
    J,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::G => "G",
            Family::H => "H",
            Family::J => "J",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g" | "G" => Ok(Family::G),
            "h" | "H" => Ok(Family::H),
            "j" | "J" => Ok(Family::J),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// Number of vertices of `G_n`.
pub fn g_vertex_count(n: usize) -> usize {
    if n == 0 {
        3
    } else {
        (3usize.pow(n as u32 + 1) + 3) / 2
    }
}

pub fn vertex_count(family: Family, n: usize) -> usize {
    match family {
        Family::G => g_vertex_count(n),
        Family::H => 3usize.pow(n as u32),
        Family::J => 3usize.pow(n as u32) + g_vertex_count(n),
    }
}

/// Immutable graph with deterministic (sorted) vertex order.
///
/// `adjacency[x]` lists each non-loop neighbor once and `x` itself once per
/// loop at `x`, so its length is the degree used by the Laplacian.
#[derive(Clone, Debug)]
pub struct FractalGraph {
    family: Family,
    level: usize,
    vertices: Vec<VertexAddress>,
    index: HashMap<VertexAddress, usize>,
    edges: Vec<(usize, usize)>,
    loops: Vec<usize>,
    adjacency: Vec<Vec<usize>>,
}

impl FractalGraph {
    fn assemble(
        family: Family,
        level: usize,
        vertices: Vec<VertexAddress>,
        mut edges: Vec<(usize, usize)>,
        mut loops: Vec<usize>,
    ) -> Self {
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        edges.sort_unstable();
        loops.sort_unstable();
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for &x in &loops {
            adjacency[x].push(x);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        FractalGraph {
            family,
            level,
            vertices,
            index,
            edges,
            loops,
            adjacency,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[VertexAddress] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &VertexAddress {
        &self.vertices[i]
    }

    /// Non-loop edges as sorted index pairs `(a, b)` with `a < b`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// One entry per loop; a vertex carrying several loops repeats.
    pub fn loops(&self) -> &[usize] {
        &self.loops
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn index_of(&self, v: &VertexAddress) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn require(&self, v: &VertexAddress) -> Result<usize> {
        self.index_of(v)
            .ok_or_else(|| Error::VertexNotFound(v.to_string()))
    }

    /// Index of the H-vertex with word `w`.
    pub fn h_index(&self, w: &Word) -> Option<usize> {
        self.index.get(&VertexAddress::H(w.clone())).copied()
    }

    /// Index of the vertex `F_w(p_j)`.
    pub fn g_index(&self, w: &Word, j: u8) -> Option<usize> {
        self.index_of(&canonical_g_vertex(w, j).ok()?)
    }

    /// Parses a text address and looks it up.
    pub fn find(&self, address: &str) -> Result<usize> {
        self.require(&address.parse()?)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

pub fn build_graph(family: Family, level: usize) -> Result<FractalGraph> {
    build_graph_capped(family, level, DEFAULT_MAX_LEVEL)
}

pub fn build_graph_capped(family: Family, level: usize, max_level: usize) -> Result<FractalGraph> {
    if level > max_level {
        return Err(Error::LevelTooLarge {
            level,
            max: max_level,
        });
    }
    Ok(match family {
        Family::G => build_g(level),
        Family::H => build_h(level),
        Family::J => build_j(level),
    })
}

fn g_vertices(n: usize, cells: &[Word]) -> Vec<VertexAddress> {
    let set: BTreeSet<VertexAddress> = cells
        .iter()
        .flat_map(|w| (1..=3).map(move |j| canonical_g_vertex(w, j).unwrap()))
        .collect();
    debug_assert_eq!(set.len(), g_vertex_count(n));
    set.into_iter().collect()
}

fn build_g(n: usize) -> FractalGraph {
    let cells = Word::all(n);
    let vertices = g_vertices(n, &cells);
    let index: HashMap<&VertexAddress, usize> =
        vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut edges = Vec::with_capacity(3 * cells.len());
    for w in &cells {
        let c: Vec<usize> = (1..=3)
            .map(|j| index[&canonical_g_vertex(w, j).unwrap()])
            .collect();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            edges.push((c[a].min(c[b]), c[a].max(c[b])));
        }
    }
    FractalGraph::assemble(Family::G, n, vertices, edges, Vec::new())
}

fn build_h(n: usize) -> FractalGraph {
    let cells = Word::all(n);
    let vertices: Vec<VertexAddress> = cells.iter().cloned().map(VertexAddress::H).collect();
    let mut edges = Vec::new();
    let mut loops = Vec::new();
    // cells are in lexicographic order, so position == index
    let index: HashMap<&Word, usize> = cells.iter().enumerate().map(|(i, w)| (w, i)).collect();
    for (i, w) in cells.iter().enumerate() {
        for k in 1..=3 {
            let other = h_neighbor_word(w, k);
            let o = index[&other];
            if o == i {
                loops.push(i);
            } else if i < o {
                edges.push((i, o));
            }
        }
    }
    FractalGraph::assemble(Family::H, n, vertices, edges, loops)
}

fn build_j(n: usize) -> FractalGraph {
    let cells = Word::all(n);
    let h_count = cells.len();
    let mut vertices: Vec<VertexAddress> = cells.iter().cloned().map(VertexAddress::H).collect();
    vertices.extend(g_vertices(n, &cells));
    let g_index: HashMap<&VertexAddress, usize> = vertices
        .iter()
        .enumerate()
        .skip(h_count)
        .map(|(i, v)| (v, i))
        .collect();
    let mut edges = Vec::with_capacity(3 * h_count);
    for (i, w) in cells.iter().enumerate() {
        for j in 1..=3 {
            edges.push((i, g_index[&canonical_g_vertex(w, j).unwrap()]));
        }
    }
    FractalGraph::assemble(Family::J, n, vertices, edges, Vec::new())
}

/// Neighbors `(y_1, y_2, y_3)` of `y0 = F_w(p_0)` in `H_n`, labelled so that
/// `y_k` is reached through `F_w(p_k)`; `y_k = y0` for a loop.
pub fn h_labeled_neighbors(graph: &FractalGraph, y0: &VertexAddress) -> Result<[VertexAddress; 3]> {
    let VertexAddress::H(w) = y0 else {
        return Err(Error::VertexNotFound(y0.to_string()));
    };
    if graph.family() != Family::H || graph.index_of(y0).is_none() {
        return Err(Error::VertexNotFound(y0.to_string()));
    }
    Ok([1, 2, 3].map(|k| VertexAddress::H(h_neighbor_word(w, k))))
}

/// Index form of [`h_labeled_neighbors`] for every vertex of an H graph.
pub fn labeled_neighbor_table(graph: &FractalGraph) -> Result<Vec<[usize; 3]>> {
    if graph.family() != Family::H {
        return Err(Error::Consistency(format!(
            "labelled neighbors need an H graph, got {}",
            graph.family()
        )));
    }
    // H vertices are all words of length n in order, so word rank == index
    let rank = |w: &Word| w.letters().iter().fold(0usize, |acc, &l| acc * 3 + (l - 1) as usize);
    Ok(graph
        .vertices()
        .iter()
        .map(|v| [1, 2, 3].map(|k| rank(&h_neighbor_word(v.word(), k))))
        .collect())
}

/// A bounded face of the gasket graph: the central inverted triangle of the
/// cell `word`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hole {
    pub word: Word,
}

/// Holes visible at level `n`: every cell of depth `0..=n-2`, shortest first.
pub fn enumerate_holes(n: usize) -> Vec<Hole> {
    (0..n.saturating_sub(1))
        .flat_map(Word::all)
        .map(|word| Hole { word })
        .collect()
}

pub fn hole_count(n: usize) -> usize {
    if n < 2 {
        0
    } else {
        (3usize.pow(n as u32 - 1) - 1) / 2
    }
}

/// Level-`n` cells along the side `a`–`b` of cell `u`, ordered from the
/// `a` end to the `b` end.
pub fn side_cells(u: &Word, a: u8, b: u8, n: usize) -> Result<Vec<Word>> {
    check_corner(a)?;
    check_corner(b)?;
    if a == b {
        return Err(Error::DegenerateSide(a));
    }
    if u.len() > n {
        return Err(Error::WordTooLong {
            word: u.to_string(),
            level: n,
        });
    }
    fn walk(u: &Word, a: u8, b: u8, n: usize, out: &mut Vec<Word>) {
        if u.len() == n {
            out.push(u.clone());
        } else {
            walk(&u.child(a), a, b, n, out);
            walk(&u.child(b), a, b, n, out);
        }
    }
    let mut out = Vec::with_capacity(1 << (n - u.len()));
    walk(u, a, b, n, &mut out);
    Ok(out)
}

/// Closed cycle of H-vertices around a hole.
///
/// Walks the subcells `w·1`, `w·2`, `w·3` in turn, listing the cells of each
/// along its side facing the hole from corner `j-1` to corner `j+1`.
pub fn hole_cycle_h(hole: &Hole, n: usize) -> Result<Vec<VertexAddress>> {
    let depth = hole.word.len();
    if depth + 2 > n {
        return Err(Error::HoleTooDeep { depth, level: n });
    }
    let mut cycle = Vec::with_capacity(3 << (n - depth - 1));
    for j in 1..=3 {
        let side = side_cells(&hole.word.child(j), prev_corner(j), next_corner(j), n)?;
        cycle.extend(side.into_iter().map(VertexAddress::H));
    }
    Ok(cycle)
}
