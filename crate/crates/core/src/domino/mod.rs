//! Domino 2-graphs `Λ(n,q,t)`.
//!
//! Vertices are words of length `n` over `Z/q` with trace `t`. A blue edge is
//! a one-row strip of width `n + 1`, a red edge a two-row strip of width `n`,
//! and a commuting square a two-row strip of width `n + 1`. Vertex ids are
//! positions in the lexicographic listing of the vertices; blue edge `v` is
//! the unique blue edge with range `v`; red edge `r * N + s` runs from `s`
//! to `r` where `N` is the vertex count.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::twograph::{Colour, Edge, EdgeId, Skeleton, Square, VertexId};
use crate::words::{self, Word};
use crate::Limits;

pub mod path;

pub use path::{complete_path, compose, factorize, validate_path, validate_shift_window, Grid, PartialRect, PathRect};

/// Basic data `(n, q, t)`: domino length, alphabet size and trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BasicData {
    pub n: usize,
    pub q: u32,
    pub t: u32,
}

impl BasicData {
    pub fn new(n: usize, q: u32, t: u32) -> Result<Self> {
        words::check_params(n, q, t)?;
        Ok(Self { n, q, t })
    }

    /// `q^(n-1)` as an exact integer.
    pub fn vertex_count(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.q), self.n - 1)
    }

    /// `q^(n-1)` if it does not exceed `limit`.
    pub fn vertex_count_within(&self, limit: u64) -> Result<u64> {
        match words::trace_class_size(self.n, self.q) {
            Some(size) if size <= limit => Ok(size),
            _ => Err(Error::LimitExceeded {
                what: "vertex set",
                needed: format!("{}^{} vertices", self.q, self.n - 1),
                limit,
            }),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.n == 1 || (self.n, self.q, self.t) == (2, 2, 0)
    }

    pub fn check_vertex(&self, v: &Word) -> Result<()> {
        if v.len() != self.n || v.q() != self.q || words::trace(v) != self.t {
            return Err(Error::NotAVertex(format!("{v} in Λ{self}")));
        }
        Ok(())
    }
}

impl fmt::Display for BasicData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n, self.q, self.t)
    }
}

/// All vertices in lexicographic order.
pub fn vertices(data: &BasicData, limits: &Limits) -> Result<Vec<Word>> {
    data.vertex_count_within(limits.max_vertices)?;
    words::enumerate_words(data.n, data.q, data.t)
}

/// The unique blue edge with range `v`.
pub fn blue_edge(data: &BasicData, v: &Word) -> Result<PathRect> {
    data.check_vertex(v)?;
    PathRect::from_row_vertices(*data, 1, std::slice::from_ref(v))
}

/// The unique red edge from `source` to `range`.
pub fn red_edge(data: &BasicData, source: &Word, range: &Word) -> Result<PathRect> {
    PathRect::from_row_vertices(*data, 0, &[range.clone(), source.clone()])
}

/// `σ(v) = s(e)` for the unique blue edge `e` with range `v`.
pub fn sigma(data: &BasicData, v: &Word) -> Result<Word> {
    Ok(blue_edge(data, v)?.source())
}

/// Number of blue cycles of each length `d | n`:
/// `h_d = sum over s with (n/d) s = t (mod q) of L_q(d, s)`.
pub fn blue_cycle_counts(data: &BasicData) -> BTreeMap<usize, BigUint> {
    let (n, q, t) = (data.n, u64::from(data.q), u64::from(data.t));
    words::divisors(n)
        .into_iter()
        .map(|d| {
            let mult = (n / d) as u64 % q;
            let h = (0..q)
                .filter(|s| (mult * s) % q == t)
                .map(|s| words::count_lyndon(d, data.q, s as u32).expect("parameters already checked"))
                .fold(BigUint::zero(), |acc, x| acc + x);
            (d, h)
        })
        .collect()
}

/// Blue cycle lengths found by walking every σ-orbit of the vertex set.
pub fn blue_cycle_counts_by_orbits(data: &BasicData, limit: u64) -> Result<BTreeMap<usize, u64>> {
    let size = data.vertex_count_within(limit)?;
    let mut counts: BTreeMap<usize, u64> = words::divisors(data.n).into_iter().map(|d| (d, 0)).collect();
    let mut seen = vec![false; size as usize];
    for start in 0..size {
        if seen[start as usize] {
            continue;
        }
        let mut word = words::unrank(start, data.n, data.q, data.t);
        let mut len = 0usize;
        loop {
            let r = words::trace_rank(&word, data.q) as usize;
            if seen[r] {
                break;
            }
            seen[r] = true;
            len += 1;
            word.rotate_left(1);
        }
        *counts.entry(len).or_default() += 1;
    }
    Ok(counts)
}

/// Order of σ: the lcm of the blue cycle lengths that occur.
pub fn sigma_order(data: &BasicData) -> u64 {
    blue_cycle_counts(data)
        .into_iter()
        .filter(|(_, h)| !h.is_zero())
        .fold(1u64, |acc, (d, _)| acc.lcm(&(d as u64)))
}

/// Factors `K_a × K_b` of a product decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProductFactors {
    /// Vertex count of the complete graph carrying the blue edges.
    pub blue: u64,
    /// Vertex count of the complete graph carrying the red edges.
    pub red: u64,
}

impl fmt::Display for ProductFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K{}×K{}", self.blue, self.red)
    }
}

/// `Some(factors)` iff `Λ(n,q,t)` is a product graph.
///
/// A product decomposition forces a blue loop at every vertex, i.e. every
/// blue cycle has length 1, and then `Λ ≅ K_1 × K_{h_1}`.
pub fn is_product_graph(data: &BasicData) -> Option<ProductFactors> {
    let counts = blue_cycle_counts(data);
    let loops = &counts[&1];
    if *loops != data.vertex_count() {
        return None;
    }
    let red = words::small(loops)?;
    Some(ProductFactors { blue: 1, red })
}

/// A domino graph with its skeleton materialized.
#[derive(Debug, Clone)]
pub struct DominoGraph {
    data: BasicData,
    vertices: Vec<Word>,
    /// `sigma[v]` is the id of `σ(v)`.
    sigma: Vec<VertexId>,
    skeleton: Skeleton,
}

impl DominoGraph {
    pub fn build(data: BasicData, limits: &Limits) -> Result<Self> {
        let nv = data.vertex_count_within(limits.max_vertices.min(u64::from(u16::MAX)))?;
        let vertices = words::enumerate_words(data.n, data.q, data.t)?;
        let sigma: Vec<VertexId> = vertices
            .iter()
            .map(|v| {
                let mut s = v.symbols().to_vec();
                s.rotate_left(1);
                words::trace_rank(&s, data.q) as VertexId
            })
            .collect();
        let nv32 = nv as u32;
        let blue: Vec<Edge> = (0..nv32)
            .map(|v| Edge {
                source: sigma[v as usize],
                range: v,
            })
            .collect();
        let red: Vec<Edge> = (0..nv32)
            .flat_map(|r| (0..nv32).map(move |s| Edge { source: s, range: r }))
            .collect();
        // The square whose left column is the red edge rho: its bottom row is
        // the blue edge with range r(rho), its top row the blue edge with
        // range s(rho), and its right column the red edge between the
        // rotated endpoints. Listing by (r, σ(s)) keeps the blue-red keys
        // ascending.
        let mut sigma_inv = vec![0 as VertexId; nv as usize];
        for (v, &s) in sigma.iter().enumerate() {
            sigma_inv[s as usize] = v as VertexId;
        }
        let squares: Vec<Square> = (0..nv32)
            .flat_map(|r| {
                let (sigma, sigma_inv) = (&sigma, &sigma_inv);
                (0..nv32).map(move |shifted_source| {
                    let s = sigma_inv[shifted_source as usize];
                    Square {
                        blue_red: (r, sigma[r as usize] * nv32 + shifted_source),
                        red_blue: (r * nv32 + s, s),
                    }
                })
            })
            .collect();
        let labels = vertices.iter().map(Word::to_string).collect();
        Ok(Self {
            data,
            vertices,
            sigma,
            skeleton: Skeleton::new(labels, blue, red, squares),
        })
    }

    pub fn data(&self) -> BasicData {
        self.data
    }

    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn vertex(&self, id: VertexId) -> &Word {
        &self.vertices[id as usize]
    }

    pub fn vertex_id(&self, v: &Word) -> Result<VertexId> {
        self.data.check_vertex(v)?;
        Ok(words::trace_rank(v.symbols(), self.data.q) as VertexId)
    }

    pub fn sigma_ids(&self) -> &[VertexId] {
        &self.sigma
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn into_skeleton(self) -> Skeleton {
        self.skeleton
    }

    pub fn red_edge_id(&self, source: VertexId, range: VertexId) -> EdgeId {
        range * self.vertices.len() as u32 + source
    }

    /// Identifies a degree `e1` or `e2` path with its skeleton edge.
    pub fn edge_of(&self, p: &PathRect) -> Option<(Colour, EdgeId)> {
        let r = self.vertex_id(&p.range()).ok()?;
        match p.degree() {
            (1, 0) => Some((Colour::Blue, r)),
            (0, 1) => Some((Colour::Red, self.red_edge_id(self.vertex_id(&p.source()).ok()?, r))),
            _ => None,
        }
    }

    /// The path of degree `e1` or `e2` represented by a skeleton edge.
    pub fn edge_path(&self, colour: Colour, id: EdgeId) -> Result<PathRect> {
        let e = self.skeleton.edge(colour, id);
        match colour {
            Colour::Blue => blue_edge(&self.data, self.vertex(e.range)),
            Colour::Red => red_edge(&self.data, self.vertex(e.source), self.vertex(e.range)),
        }
    }
}

/// Skeleton of `Λ(n,q,t)`: complete red graph, blue cycles given by σ, and
/// one commuting square per red edge.
pub fn build_skeleton(data: &BasicData, limits: &Limits) -> Result<Skeleton> {
    Ok(DominoGraph::build(*data, limits)?.into_skeleton())
}

/// Every path of the given degree, ordered by the row vertices.
///
/// A path is determined by the leading window of each row, so there are
/// `N^(m2 + 1)` of them.
pub fn enumerate_paths(data: &BasicData, degree: (u32, u32), limits: &Limits) -> Result<Vec<PathRect>> {
    if degree.0 > limits.max_path_degree.0 || degree.1 > limits.max_path_degree.1 {
        return Err(Error::DegreeOutOfRange(degree.0, degree.1));
    }
    let nv = data.vertex_count_within(limits.max_vertices)?;
    let rows = degree.1 as usize + 1;
    let total = nv
        .checked_pow(rows as u32)
        .filter(|&x| x <= limits.work_limit)
        .ok_or_else(|| Error::LimitExceeded {
            what: "path enumeration",
            needed: format!("{nv}^{rows} paths"),
            limit: limits.work_limit,
        })?;
    let verts = words::enumerate_words(data.n, data.q, data.t)?;
    let mut out = Vec::with_capacity(total as usize);
    let mut choice = vec![0usize; rows];
    for _ in 0..total {
        let row_words: Vec<Word> = choice.iter().map(|&i| verts[i].clone()).collect();
        out.push(PathRect::from_row_vertices(*data, degree.0, &row_words)?);
        for slot in choice.iter_mut().rev() {
            *slot += 1;
            if *slot < verts.len() {
                break;
            }
            *slot = 0;
        }
    }
    Ok(out)
}

/// Outcome of [`check_unique_factorisation`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FactorisationReport {
    pub data: Option<BasicData>,
    /// Paths enumerated across all degrees.
    pub paths: u64,
    /// `(path, split degree)` pairs checked.
    pub factorisations: u64,
    /// First few failures, described.
    pub failures: Vec<String>,
    pub failure_count: u64,
}

impl FactorisationReport {
    pub fn is_ok(&self) -> bool {
        self.failure_count == 0
    }

    fn fail(&mut self, message: String) {
        if self.failures.len() < crate::twograph::MAX_REPORTED_VIOLATIONS {
            self.failures.push(message);
        }
        self.failure_count += 1;
    }
}

/// Exhaustively checks unique factorisation for every path of degree at
/// most `max_degree`.
///
/// For each path `λ` of degree `m` and each `p <= m`, the restrictions to
/// `T(p)` and `T(m - p) + p` must compose back to `λ`. Since that makes
/// factorisation injective, it is a bijection onto the composable pairs
/// exactly when their number, counted from endpoint tallies, equals the
/// number of paths of degree `m`.
pub fn check_unique_factorisation(
    data: &BasicData,
    max_degree: (u32, u32),
    limits: &Limits,
) -> Result<FactorisationReport> {
    let nv = data.vertex_count_within(limits.max_vertices)? as usize;
    let id = |w: &Word| words::trace_rank(w.symbols(), data.q) as usize;
    let mut report = FactorisationReport { data: Some(*data), ..Default::default() };
    // (range tally, source tally) per degree
    let mut tallies: BTreeMap<(u32, u32), (Vec<u64>, Vec<u64>)> = BTreeMap::new();
    for m2 in 0..=max_degree.1 {
        for m1 in 0..=max_degree.0 {
            let m = (m1, m2);
            let paths = enumerate_paths(data, m, limits)?;
            report.paths += paths.len() as u64;
            let mut ranges = vec![0u64; nv];
            let mut sources = vec![0u64; nv];
            for lambda in &paths {
                ranges[id(&lambda.range())] += 1;
                sources[id(&lambda.source())] += 1;
            }
            tallies.insert(m, (ranges, sources));
            for p2 in 0..=m2 {
                for p1 in 0..=m1 {
                    let p = (p1, p2);
                    let rest = (m1 - p1, m2 - p2);
                    let pairs: u64 = tallies[&p].1.iter().zip(&tallies[&rest].0).map(|(a, b)| a * b).sum();
                    if pairs != paths.len() as u64 {
                        report.fail(format!(
                            "degree {m:?} split at {p:?}: {pairs} composable pairs but {} paths",
                            paths.len()
                        ));
                    }
                    for lambda in &paths {
                        report.factorisations += 1;
                        let (mu, nu) = factorize(lambda, p)?;
                        match compose(&mu, &nu) {
                            Ok(back) if back == *lambda => {}
                            Ok(back) => report.fail(format!("{m:?} at {p:?}: recomposed\n{back}differs from\n{lambda}")),
                            Err(e) => report.fail(format!("{m:?} at {p:?}: factors of\n{lambda}do not compose: {e}")),
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}
