//! Finite 2-graph skeletons: a bicoloured directed graph together with a
//! family of commuting squares.
//!
//! Blue edges have degree `e1`, red edges degree `e2`. A commuting square
//! pairs a blue-red path `gh` with a red-blue path `ef` having the same
//! endpoints; the family of squares determines the 2-graph when each
//! blue-red and each red-blue path occurs in exactly one square.
//!
//! Paths are written in category order: in `gh` the edge `h` is traversed
//! first, so `s(g) = r(h)`, `r(gh) = r(g)` and `s(gh) = s(h)`.

use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::error::{Error, Result};

pub type VertexId = u32;
pub type EdgeId = u32;

/// Upper bound on the number of violations kept in an [`AxiomReport`].
pub const MAX_REPORTED_VIOLATIONS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub source: VertexId,
    pub range: VertexId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Colour {
    Blue,
    Red,
}

/// `blue_red.0 * blue_red.1 = red_blue.0 * red_blue.1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Square {
    pub blue_red: (EdgeId, EdgeId),
    pub red_blue: (EdgeId, EdgeId),
}

impl Square {
    fn key(&self) -> u64 {
        pack(self.blue_red)
    }

    fn value(&self) -> u64 {
        pack(self.red_blue)
    }
}

fn pack((a, b): (u32, u32)) -> u64 {
    (u64::from(a) << 32) | u64::from(b)
}

fn unpack(x: u64) -> (u32, u32) {
    ((x >> 32) as u32, x as u32)
}

/// Sorts by `key`, whose high 32 bits are a dense small index: a counting
/// pass on the high half, then short sorts inside each bucket.
fn bucket_sort<T: Copy>(items: &mut Vec<T>, key: impl Fn(&T) -> u64) {
    if items.is_sorted_by_key(&key) {
        return;
    }
    let Some(top) = items.iter().map(|x| key(x) >> 32).max() else {
        return;
    };
    let mut offsets = vec![0usize; top as usize + 2];
    for x in items.iter() {
        offsets[(key(x) >> 32) as usize + 1] += 1;
    }
    for i in 1..offsets.len() {
        offsets[i] += offsets[i - 1];
    }
    let mut fill = offsets.clone();
    let mut out = Vec::with_capacity(items.len());
    out.resize(items.len(), items[0]);
    for x in items.iter() {
        let b = (key(x) >> 32) as usize;
        out[fill[b]] = *x;
        fill[b] += 1;
    }
    for w in offsets.windows(2) {
        out[w[0]..w[1]].sort_unstable_by_key(&key);
    }
    *items = out;
}

/// Skeleton of a finite 2-graph.
///
/// Vertex and edge ids are indices. Squares are kept sorted by their
/// blue-red key; the red-blue direction is derived on demand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skeleton {
    #[serde(rename = "vertices")]
    labels: Vec<String>,
    blue_edges: Vec<Edge>,
    red_edges: Vec<Edge>,
    squares: Vec<Square>,
}

impl Skeleton {
    pub fn new(labels: Vec<String>, blue_edges: Vec<Edge>, red_edges: Vec<Edge>, mut squares: Vec<Square>) -> Self {
        bucket_sort(&mut squares, Square::key);
        Self {
            labels,
            blue_edges,
            red_edges,
            squares,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn blue_edges(&self) -> &[Edge] {
        &self.blue_edges
    }

    pub fn red_edges(&self) -> &[Edge] {
        &self.red_edges
    }

    pub fn edges(&self, colour: Colour) -> &[Edge] {
        match colour {
            Colour::Blue => &self.blue_edges,
            Colour::Red => &self.red_edges,
        }
    }

    pub fn edge(&self, colour: Colour, id: EdgeId) -> Edge {
        self.edges(colour)[id as usize]
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    /// The red-blue factorisation paired with the blue-red path `gh`.
    pub fn square(&self, g: EdgeId, h: EdgeId) -> Option<(EdgeId, EdgeId)> {
        let key = pack((g, h));
        self.squares
            .binary_search_by_key(&key, Square::key)
            .ok()
            .map(|i| self.squares[i].red_blue)
    }

    /// Squares re-sorted by their red-blue value, for lookups in that
    /// direction.
    pub fn red_blue_index(&self) -> Vec<(u64, u64)> {
        let mut idx: Vec<(u64, u64)> = self.squares.iter().map(|s| (s.value(), s.key())).collect();
        idx.sort_unstable();
        idx
    }

    /// Mutable access for fault-injection in tests and the CLI's tamper hook.
    pub fn squares_mut(&mut self) -> &mut Vec<Square> {
        &mut self.squares
    }

    /// Restores the key ordering after direct edits of the square list.
    pub fn resort(&mut self) {
        bucket_sort(&mut self.squares, Square::key);
    }

    /// Edge ids of `colour` grouped by range vertex, ascending within each
    /// group: `(offsets, ids)` in compressed sparse row form.
    fn by_range(&self, colour: Colour) -> (Vec<usize>, Vec<EdgeId>) {
        let edges = self.edges(colour);
        let nv = self.vertex_count();
        let mut offsets = vec![0usize; nv + 1];
        for e in edges {
            offsets[e.range as usize + 1] += 1;
        }
        for i in 0..nv {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut ids = vec![0; edges.len()];
        for (id, e) in edges.iter().enumerate() {
            ids[fill[e.range as usize]] = id as EdgeId;
            fill[e.range as usize] += 1;
        }
        (offsets, ids)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DanglingEdge { colour: Colour, edge: EdgeId },
    UnknownEdgeInSquare { blue_red: (EdgeId, EdgeId), red_blue: (EdgeId, EdgeId) },
    BlueRedNotComposable { blue: EdgeId, red: EdgeId },
    RedBlueNotComposable { red: EdgeId, blue: EdgeId },
    SquareEndpointMismatch { blue_red: (EdgeId, EdgeId), red_blue: (EdgeId, EdgeId) },
    DuplicateBlueRedKey { blue: EdgeId, red: EdgeId },
    DuplicateRedBlueValue { red: EdgeId, blue: EdgeId },
    MissingBlueRedKey { blue: EdgeId, red: EdgeId },
    MissingRedBlueValue { red: EdgeId, blue: EdgeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingEdge { colour, edge } => {
                write!(f, "dangling edge: {colour:?} edge {edge} has an endpoint outside the vertex set")
            }
            Violation::UnknownEdgeInSquare { blue_red, red_blue } => {
                write!(f, "unknown edge in square {blue_red:?} = {red_blue:?}")
            }
            Violation::BlueRedNotComposable { blue, red } => {
                write!(f, "blue-red key not composable: blue {blue}, red {red}")
            }
            Violation::RedBlueNotComposable { red, blue } => {
                write!(f, "red-blue value not composable: red {red}, blue {blue}")
            }
            Violation::SquareEndpointMismatch { blue_red, red_blue } => {
                write!(f, "square endpoint mismatch: {blue_red:?} vs {red_blue:?}")
            }
            Violation::DuplicateBlueRedKey { blue, red } => {
                write!(f, "duplicate blue-red key: blue {blue}, red {red}")
            }
            Violation::DuplicateRedBlueValue { red, blue } => {
                write!(f, "duplicate red-blue value: red {red}, blue {blue}")
            }
            Violation::MissingBlueRedKey { blue, red } => {
                write!(f, "missing blue-red key: blue {blue}, red {red}")
            }
            Violation::MissingRedBlueValue { red, blue } => {
                write!(f, "missing red-blue value: red {red}, blue {blue}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub vertices: usize,
    pub blue_edges: usize,
    pub red_edges: usize,
    pub squares: usize,
    /// First [`MAX_REPORTED_VIOLATIONS`] violations found.
    pub violations: Vec<Violation>,
    /// Number of violations found. Scans for missing pairs stop shortly
    /// after [`MAX_REPORTED_VIOLATIONS`], so large counts are lower bounds.
    pub violation_count: usize,
}

impl AxiomReport {
    pub fn is_ok(&self) -> bool {
        self.violation_count == 0
    }

    fn push(&mut self, v: Violation) {
        self.violation_count += 1;
        if self.violations.len() < MAX_REPORTED_VIOLATIONS {
            self.violations.push(v);
        }
    }
}

/// Exhaustively checks the skeleton invariants.
pub fn check_axioms(sk: &Skeleton) -> AxiomReport {
    let mut report = AxiomReport {
        vertices: sk.vertex_count(),
        blue_edges: sk.blue_edges.len(),
        red_edges: sk.red_edges.len(),
        squares: sk.squares.len(),
        ..Default::default()
    };
    let nv = sk.vertex_count() as u32;
    let mut dangling = false;
    for colour in [Colour::Blue, Colour::Red] {
        for (id, e) in sk.edges(colour).iter().enumerate() {
            if e.source >= nv || e.range >= nv {
                dangling = true;
                report.push(Violation::DanglingEdge { colour, edge: id as EdgeId });
            }
        }
    }
    if dangling {
        // Adjacency indices below assume in-range endpoints.
        return report;
    }

    let nb = sk.blue_edges.len() as u32;
    let nr = sk.red_edges.len() as u32;
    for sq in &sk.squares {
        let (g, h) = sq.blue_red;
        let (e, f) = sq.red_blue;
        if g >= nb || h >= nr || e >= nr || f >= nb {
            report.push(Violation::UnknownEdgeInSquare {
                blue_red: sq.blue_red,
                red_blue: sq.red_blue,
            });
            continue;
        }
        let (g, h, e, f) = (
            sk.blue_edges[g as usize],
            sk.red_edges[h as usize],
            sk.red_edges[e as usize],
            sk.blue_edges[f as usize],
        );
        if g.source != h.range {
            report.push(Violation::BlueRedNotComposable { blue: sq.blue_red.0, red: sq.blue_red.1 });
        }
        if e.source != f.range {
            report.push(Violation::RedBlueNotComposable { red: sq.red_blue.0, blue: sq.red_blue.1 });
        }
        if g.range != e.range || h.source != f.source {
            report.push(Violation::SquareEndpointMismatch {
                blue_red: sq.blue_red,
                red_blue: sq.red_blue,
            });
        }
    }

    // Keys: every composable blue-red pair exactly once.
    let keys: Vec<u64> = sk.squares.iter().map(Square::key).collect();
    for w in keys.windows(2) {
        if w[0] == w[1] {
            let (blue, red) = unpack(w[0]);
            report.push(Violation::DuplicateBlueRedKey { blue, red });
        }
    }
    let (red_off, red_ids) = sk.by_range(Colour::Red);
    let composable_blue_red = sk.blue_edges.iter().enumerate().flat_map(|(g, ge)| {
        let s = ge.source as usize;
        red_ids[red_off[s]..red_off[s + 1]]
            .iter()
            .map(move |&h| pack((g as u32, h)))
    });
    for missing in sorted_difference(composable_blue_red, &keys) {
        let (blue, red) = unpack(missing);
        report.push(Violation::MissingBlueRedKey { blue, red });
    }
    drop(keys);

    // Values: every composable red-blue pair exactly once. Composable
    // pairs are numbered red edge first, then by the blue edge's position
    // among the blue edges into the red edge's source, so a counting pass
    // replaces a sort.
    let (blue_off, blue_ids) = sk.by_range(Colour::Blue);
    let mut slot = vec![0u32; sk.blue_edges.len()];
    for w in blue_off.windows(2) {
        for (pos, &f) in blue_ids[w[0]..w[1]].iter().enumerate() {
            slot[f as usize] = pos as u32;
        }
    }
    let mut base = Vec::with_capacity(sk.red_edges.len() + 1);
    base.push(0usize);
    for e in &sk.red_edges {
        let s = e.source as usize;
        base.push(base[base.len() - 1] + blue_off[s + 1] - blue_off[s]);
    }
    let mut hits = vec![0u8; base[base.len() - 1]];
    for sq in &sk.squares {
        let (e, f) = sq.red_blue;
        if e >= nr || f >= nb || sk.red_edges[e as usize].source != sk.blue_edges[f as usize].range {
            continue;
        }
        let i = base[e as usize] + slot[f as usize] as usize;
        hits[i] = hits[i].saturating_add(1);
    }
    let mut missing = 0;
    'scan: for (e, ee) in sk.red_edges.iter().enumerate() {
        let s = ee.source as usize;
        for (pos, &f) in blue_ids[blue_off[s]..blue_off[s + 1]].iter().enumerate() {
            let (red, blue) = (e as EdgeId, f);
            match hits[base[e] + pos] {
                0 => {
                    report.push(Violation::MissingRedBlueValue { red, blue });
                    missing += 1;
                    if missing > MAX_REPORTED_VIOLATIONS {
                        break 'scan;
                    }
                }
                1 => {}
                _ => report.push(Violation::DuplicateRedBlueValue { red, blue }),
            }
        }
    }
    report
}

/// Elements of the ascending stream `expected` absent from the sorted slice
/// `present`.
fn sorted_difference(expected: impl Iterator<Item = u64>, present: &[u64]) -> Vec<u64> {
    let mut missing = Vec::new();
    let mut i = 0;
    for x in expected {
        while i < present.len() && present[i] < x {
            i += 1;
        }
        if i >= present.len() || present[i] != x {
            missing.push(x);
            if missing.len() > MAX_REPORTED_VIOLATIONS {
                // the caller only keeps the first few; stop early
                break;
            }
        }
    }
    missing
}

/// A colour-preserving map between skeletons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColouredGraphMorphism {
    pub vertex_map: Vec<VertexId>,
    pub blue_edge_map: Vec<EdgeId>,
    pub red_edge_map: Vec<EdgeId>,
}

impl ColouredGraphMorphism {
    pub fn identity(sk: &Skeleton) -> Self {
        let ids = |n: usize| (0..n as u32).collect();
        Self {
            vertex_map: ids(sk.vertex_count()),
            blue_edge_map: ids(sk.blue_edges.len()),
            red_edge_map: ids(sk.red_edges.len()),
        }
    }

    /// `other` after `self`.
    pub fn then(&self, other: &ColouredGraphMorphism) -> ColouredGraphMorphism {
        let comp = |a: &[u32], b: &[u32]| a.iter().map(|&x| b[x as usize]).collect();
        ColouredGraphMorphism {
            vertex_map: comp(&self.vertex_map, &other.vertex_map),
            blue_edge_map: comp(&self.blue_edge_map, &other.blue_edge_map),
            red_edge_map: comp(&self.red_edge_map, &other.red_edge_map),
        }
    }

    /// Inverse when all three maps are bijections.
    pub fn inverse(&self) -> Option<ColouredGraphMorphism> {
        Some(ColouredGraphMorphism {
            vertex_map: invert(&self.vertex_map)?,
            blue_edge_map: invert(&self.blue_edge_map)?,
            red_edge_map: invert(&self.red_edge_map)?,
        })
    }
}

/// Inverse of a permutation of `0..len`, or `None` if `perm` is not one.
pub fn invert(perm: &[u32]) -> Option<Vec<u32>> {
    let mut inv = vec![u32::MAX; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        let slot = inv.get_mut(p as usize)?;
        if *slot != u32::MAX {
            return None;
        }
        *slot = i as u32;
    }
    Some(inv)
}

/// True iff `m` is a bijection on vertices and on both edge colours,
/// intertwines source and range, and carries the commuting squares of `src`
/// onto those of `dst`.
pub fn is_isomorphism(m: &ColouredGraphMorphism, src: &Skeleton, dst: &Skeleton) -> bool {
    let sizes_match = m.vertex_map.len() == src.vertex_count()
        && m.blue_edge_map.len() == src.blue_edges.len()
        && m.red_edge_map.len() == src.red_edges.len()
        && src.vertex_count() == dst.vertex_count()
        && src.blue_edges.len() == dst.blue_edges.len()
        && src.red_edges.len() == dst.red_edges.len()
        && src.squares.len() == dst.squares.len();
    if !sizes_match {
        return false;
    }
    if invert(&m.vertex_map).is_none() || invert(&m.blue_edge_map).is_none() || invert(&m.red_edge_map).is_none() {
        return false;
    }
    for (colour, map) in [(Colour::Blue, &m.blue_edge_map), (Colour::Red, &m.red_edge_map)] {
        let (se, de) = (src.edges(colour), dst.edges(colour));
        let intertwines = se.iter().zip(map.iter()).all(|(e, &img)| {
            let d = de[img as usize];
            d.source == m.vertex_map[e.source as usize] && d.range == m.vertex_map[e.range as usize]
        });
        if !intertwines {
            return false;
        }
    }
    let mut image: Vec<(u64, u64)> = src
        .squares
        .iter()
        .map(|sq| {
            let (g, h) = sq.blue_red;
            let (e, f) = sq.red_blue;
            (
                pack((m.blue_edge_map[g as usize], m.red_edge_map[h as usize])),
                pack((m.red_edge_map[e as usize], m.blue_edge_map[f as usize])),
            )
        })
        .collect();
    image.sort_unstable();
    let mut target: Vec<(u64, u64)> = dst.squares.iter().map(|s| (s.key(), s.value())).collect();
    // already sorted by key; ties (only in malformed skeletons) need the value too
    target.sort_unstable();
    image == target
}

/// Which factorisation is enumerated by [`count_paths`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathOrder {
    /// `g_1 ... g_m1 h_1 ... h_m2`: blue edges at the range end.
    BlueFirst,
    /// `e_1 ... e_m2 f_1 ... f_m1`: red edges at the range end.
    RedFirst,
}

/// Number of paths of degree `(m1, m2)` with range `v`.
///
/// Each path has exactly one blue-then-red and one red-then-blue
/// factorisation, so both orders give the same count on a valid skeleton.
pub fn count_paths(sk: &Skeleton, degree: (u32, u32), v: VertexId, order: PathOrder, max_degree: (u32, u32)) -> Result<u128> {
    if degree.0 > max_degree.0 || degree.1 > max_degree.1 {
        return Err(Error::DegreeOutOfRange(degree.0, degree.1));
    }
    if v as usize >= sk.vertex_count() {
        return Err(Error::InvalidParameters(format!("vertex {v} out of range")));
    }
    let mut counts = vec![0u128; sk.vertex_count()];
    counts[v as usize] = 1;
    let step = |counts: &[u128], colour: Colour| {
        let mut next = vec![0u128; counts.len()];
        for e in sk.edges(colour) {
            next[e.source as usize] += counts[e.range as usize];
        }
        next
    };
    let steps = match order {
        PathOrder::BlueFirst => [(Colour::Blue, degree.0), (Colour::Red, degree.1)],
        PathOrder::RedFirst => [(Colour::Red, degree.1), (Colour::Blue, degree.0)],
    };
    for (colour, k) in steps {
        for _ in 0..k {
            counts = step(&counts, colour);
        }
    }
    Ok(counts.iter().sum())
}

/// Order in which [`paste`] resolves blue-red pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PastingOrder {
    LeftmostFirst,
    RightmostFirst,
}

/// Rewrites a coloured path into its red-then-blue factorisation by
/// repeatedly replacing a blue-red pair with its commuting square.
///
/// Each replacement fills one unit square of the rectangle the path spans.
pub fn paste(sk: &Skeleton, path: &[(Colour, EdgeId)], order: PastingOrder) -> Result<Vec<(Colour, EdgeId)>> {
    for w in path.windows(2) {
        let (a, b) = (sk.edge(w[0].0, w[0].1), sk.edge(w[1].0, w[1].1));
        if a.source != b.range {
            return Err(Error::NotComposable(format!("{:?} then {:?}", w[1], w[0])));
        }
    }
    let mut word = path.to_vec();
    loop {
        let mut pairs = (0..word.len().saturating_sub(1))
            .filter(|&i| word[i].0 == Colour::Blue && word[i + 1].0 == Colour::Red);
        let i = match order {
            PastingOrder::LeftmostFirst => pairs.next(),
            PastingOrder::RightmostFirst => pairs.next_back(),
        };
        let Some(i) = i else { return Ok(word) };
        let (e, f) = sk
            .square(word[i].1, word[i + 1].1)
            .ok_or_else(|| Error::Internal(format!("no square for blue {} red {}", word[i].1, word[i + 1].1)))?;
        word[i] = (Colour::Red, e);
        word[i + 1] = (Colour::Blue, f);
    }
}

/// Graphviz rendering: blue edges solid, red edges dashed, each drawn from
/// source to range.
pub fn to_dot(sk: &Skeleton, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{name}\" {{");
    let _ = writeln!(out, "  node [shape=box, fontname=\"monospace\"];");
    for (i, label) in sk.labels.iter().enumerate() {
        let _ = writeln!(out, "  v{i} [label=\"{}\"];", label.replace('"', "\\\""));
    }
    for e in &sk.blue_edges {
        let _ = writeln!(out, "  v{} -> v{} [color=blue, style=solid];", e.source, e.range);
    }
    for e in &sk.red_edges {
        let _ = writeln!(out, "  v{} -> v{} [color=red, style=dashed];", e.source, e.range);
    }
    out.push_str("}\n");
    out
}

pub fn to_json(sk: &Skeleton) -> String {
    serde_json::to_string_pretty(sk).expect("skeleton serializes")
}
