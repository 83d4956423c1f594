//! Connectivity analytics for finite directed graphs: strong connectivity,
//! `n`-connectedness, vertex and graph periods, and the least `n` for which
//! a graph is `n`-connected.
//!
//! A graph is `n`-connected when every ordered pair of vertices is joined by
//! a path of length exactly `n`, i.e. the `n`-th boolean power of the vertex
//! matrix has no zero entry. A strongly connected graph of period 1 is
//! `n`-connected for every `n >= m + 2r`, where every return length at a
//! fixed vertex past `m` is realized and `r` is the diameter.

use std::collections::VecDeque;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Directed graph on vertices `0..n`. `adj[u][w]` records an edge `u -> w`
/// (source `u`, range `w`); parallel edges are kept only as multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    adj: Vec<Vec<bool>>,
    multiplicity: Option<Vec<Vec<u64>>>,
}

impl DirectedGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![vec![false; n]; n],
            multiplicity: None,
        }
    }

    /// Builds from `(source, range)` pairs, recording multiplicities.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        let mut mult = vec![vec![0u64; n]; n];
        for &(u, w) in edges {
            if u >= n || w >= n {
                return Err(Error::InvalidParameters(format!("edge {u} -> {w} outside 0..{n}")));
            }
            g.adj[u][w] = true;
            mult[u][w] += 1;
        }
        g.multiplicity = Some(mult);
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        Self {
            adj: vec![vec![true; n]; n],
            multiplicity: None,
        }
    }

    pub fn cycle(k: usize) -> Self {
        let mut g = Self::empty(k);
        for i in 0..k {
            g.adj[i][(i + 1) % k] = true;
        }
        g
    }

    /// Parses an edge list: one `src dst` pair per line, `#` comments.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: i + 1, message };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(err(format!("expected \"src dst\", got {line:?}")));
            }
            let parse = |s: &str| s.parse::<usize>().map_err(|e| err(format!("{s:?}: {e}")));
            edges.push((parse(fields[0])?, parse(fields[1])?));
        }
        let n = edges.iter().map(|&(u, w)| u.max(w) + 1).max().unwrap_or(0);
        if n == 0 {
            return Err(Error::Parse { line: 0, message: "no edges".into() });
        }
        Self::from_edges(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, u: usize, w: usize) -> bool {
        self.adj[u][w]
    }

    pub fn add_edge(&mut self, u: usize, w: usize) {
        self.adj[u][w] = true;
        if let Some(m) = self.multiplicity.as_mut() {
            m[u][w] += 1;
        }
    }

    pub fn multiplicity(&self) -> Option<&[Vec<u64>]> {
        self.multiplicity.as_deref()
    }

    pub fn matrix(&self) -> &[Vec<bool>] {
        &self.adj
    }

    fn reversed(&self) -> Self {
        let n = self.vertex_count();
        let mut r = Self::empty(n);
        for u in 0..n {
            for w in 0..n {
                r.adj[w][u] = self.adj[u][w];
            }
        }
        r
    }

    /// Shortest path lengths from `v`; `None` for unreachable vertices.
    pub fn distances_from(&self, v: usize) -> Vec<Option<u64>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for (w, &e) in self.adj[u].iter().enumerate() {
                if e && dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// Boolean matrix product `a * b`.
pub fn bool_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    let mut out = vec![vec![false; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] {
                for j in 0..n {
                    out[i][j] |= b[k][j];
                }
            }
        }
    }
    out
}

/// `m^k` over the boolean semiring, by repeated squaring.
pub fn bool_pow(m: &[Vec<bool>], mut k: u64) -> Vec<Vec<bool>> {
    let n = m.len();
    let mut result: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
    let mut base = m.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            result = bool_mul(&result, &base);
        }
        k >>= 1;
        if k > 0 {
            base = bool_mul(&base, &base);
        }
    }
    result
}

fn all_true(m: &[Vec<bool>]) -> bool {
    m.iter().all(|row| row.iter().all(|&x| x))
}

pub fn is_strongly_connected(g: &DirectedGraph) -> bool {
    if g.vertex_count() == 0 {
        return true;
    }
    g.distances_from(0).iter().all(Option::is_some) && g.reversed().distances_from(0).iter().all(Option::is_some)
}

/// Every ordered pair is joined by a path of length exactly `n`.
pub fn is_n_connected(g: &DirectedGraph, n: u64) -> bool {
    all_true(&bool_pow(g.matrix(), n))
}

/// Whether a loop at the vertex counts as a return path of length 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoopConvention {
    /// Return lengths `|μ| >= 1`.
    #[default]
    IncludeLoops,
    /// Return lengths `|μ| > 1`.
    ExcludeLoops,
}

/// gcd of the lengths of return paths at `v`, or `None` if there are none.
///
/// Levels of a breadth-first search inside the strongly connected component
/// of `v` give the gcd directly: it is the gcd of
/// `level(a) + 1 - level(b)` over the component's edges `a -> b`.
pub fn vertex_period(g: &DirectedGraph, v: usize) -> Option<u64> {
    let forward = g.distances_from(v);
    let backward = g.reversed().distances_from(v);
    let in_component: Vec<bool> = forward.iter().zip(&backward).map(|(f, b)| f.is_some() && b.is_some()).collect();
    let mut period = 0u64;
    let mut any_edge = false;
    for a in 0..g.vertex_count() {
        if !in_component[a] {
            continue;
        }
        for b in 0..g.vertex_count() {
            if in_component[b] && g.adj[a][b] {
                any_edge = true;
                let (la, lb) = (forward[a].unwrap_or(0) as i64, forward[b].unwrap_or(0) as i64);
                period = period.gcd(&((la + 1 - lb).unsigned_abs()));
            }
        }
    }
    any_edge.then_some(period)
}

/// [`vertex_period`] under an explicit loop convention.
///
/// A loop at `v` yields returns of every length, so both conventions give
/// the same value; the excluded variant is computed from return lengths
/// directly and serves as a cross-check.
pub fn vertex_period_with(g: &DirectedGraph, v: usize, convention: LoopConvention) -> Option<u64> {
    match convention {
        LoopConvention::IncludeLoops => vertex_period(g, v),
        LoopConvention::ExcludeLoops => {
            let bound = 3 * g.vertex_count() as u64 + 1;
            let lengths = return_lengths(g, v, bound);
            let gcd = (2..=bound).filter(|&k| lengths[k as usize]).fold(0u64, |acc, k| acc.gcd(&k));
            (gcd > 0).then_some(gcd)
        }
    }
}

/// `out[k]` is true iff a closed path of length `k` passes through `v`,
/// for `k` in `0..=max_len`.
pub fn return_lengths(g: &DirectedGraph, v: usize, max_len: u64) -> Vec<bool> {
    let n = g.vertex_count();
    let mut out = vec![false; max_len as usize + 1];
    let mut reach = vec![false; n];
    reach[v] = true;
    out[0] = true;
    for slot in out.iter_mut().skip(1) {
        let mut next = vec![false; n];
        for u in (0..n).filter(|&u| reach[u]) {
            for (hit, &edge) in next.iter_mut().zip(&g.adj[u]) {
                *hit |= edge;
            }
        }
        reach = next;
        *slot = reach[v];
    }
    out
}

/// Common period of a strongly connected graph.
pub fn graph_period(g: &DirectedGraph) -> Result<u64> {
    if !is_strongly_connected(g) {
        return Err(Error::NotStronglyConnected);
    }
    if g.vertex_count() == 0 {
        return Err(Error::InvalidParameters("empty graph".into()));
    }
    vertex_period(g, 0).ok_or_else(|| Error::InvalidParameters("graph has no cycles".into()))
}

/// Largest shortest-path distance over ordered pairs, if strongly connected.
pub fn diameter(g: &DirectedGraph) -> Option<u64> {
    let mut best = 0;
    for v in 0..g.vertex_count() {
        for d in g.distances_from(v) {
            best = best.max(d?);
        }
    }
    Some(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Exponent {
    /// Least `n` with the graph `n`-connected.
    Found { n: u64, bound: u64 },
    /// Not strongly connected, or period greater than 1.
    NotConnectable,
    /// The constructive bound `m + 2r` exceeds the search cap.
    CapExceeded { bound: u64, cap: u64 },
}

impl Exponent {
    pub fn value(&self) -> Option<u64> {
        match self {
            Exponent::Found { n, .. } => Some(*n),
            _ => None,
        }
    }
}

pub fn default_exponent_cap(g: &DirectedGraph) -> u64 {
    4 * (g.vertex_count() as u64).pow(2)
}

/// Least `n` for which `g` is `n`-connected.
///
/// The search runs up to `m + 2r`: `m` is the start of the tail of return
/// lengths at vertex 0 and `r` the diameter. Any route between two vertices
/// through vertex 0 of length `s <= 2r` can be padded by a return of length
/// `m + 2r - s`, so the bound always suffices.
pub fn min_connectivity_exponent(g: &DirectedGraph, cap: u64) -> Result<Exponent> {
    let nv = g.vertex_count();
    if nv == 0 || !is_strongly_connected(g) || vertex_period(g, 0) != Some(1) {
        return Ok(Exponent::NotConnectable);
    }
    let r = diameter(g).ok_or(Error::NotStronglyConnected)?;
    // Wielandt: period-1 strongly connected graphs have returns of every
    // length >= (V-1)^2 + 1.
    let wielandt = ((nv - 1) * (nv - 1) + 1) as u64;
    let horizon = wielandt + nv as u64;
    let lengths = return_lengths(g, 0, horizon);
    let mut m = horizon;
    while m > 1 && lengths[m as usize - 1] {
        m -= 1;
    }
    let bound = m + 2 * r;
    if bound > cap {
        // The cap may still admit a smaller exponent.
        return Ok(search(g, cap).map_or(Exponent::CapExceeded { bound, cap }, |n| Exponent::Found { n, bound }));
    }
    match search(g, bound) {
        Some(n) => Ok(Exponent::Found { n, bound }),
        None => Err(Error::Internal(format!("no n <= {bound} makes the graph n-connected"))),
    }
}

fn search(g: &DirectedGraph, limit: u64) -> Option<u64> {
    let mut power = g.matrix().to_vec();
    for n in 1..=limit {
        if all_true(&power) {
            return Some(n);
        }
        power = bool_mul(&power, g.matrix());
    }
    None
}
