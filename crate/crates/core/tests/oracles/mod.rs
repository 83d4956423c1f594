//! Brute-force reference implementations, written independently of the
//! library: no shared helpers, only direct definitions.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use rand::Rng;

/// Every word of length `n` over `0..q`, in lexicographic order.
pub fn all_words(n: usize, q: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..q).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn trace_words(n: usize, q: u32, t: u32) -> Vec<Vec<u32>> {
    all_words(n, q)
        .into_iter()
        .filter(|w| w.iter().sum::<u32>() % q == t)
        .collect()
}

pub fn rotation(w: &[u32], k: usize) -> Vec<u32> {
    (0..w.len()).map(|i| w[(i + k) % w.len()]).collect()
}

pub fn least_rotation(w: &[u32]) -> Vec<u32> {
    (0..w.len()).map(|k| rotation(w, k)).min().unwrap_or_default()
}

pub fn period(w: &[u32]) -> usize {
    (1..=w.len()).find(|&d| rotation(w, d) == w).unwrap_or(w.len())
}

/// Strictly smaller than every proper rotation.
pub fn is_lyndon(w: &[u32]) -> bool {
    !w.is_empty() && (1..w.len()).all(|k| w < rotation(w, k).as_slice())
}

pub fn lyndon_count(n: usize, q: u32, t: u32) -> u64 {
    trace_words(n, q, t).iter().filter(|w| is_lyndon(w)).count() as u64
}

/// Lengths of the rotation orbits of the trace-`t` words.
pub fn orbit_lengths(n: usize, q: u32, t: u32) -> BTreeMap<usize, u64> {
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut counts = BTreeMap::new();
    for w in trace_words(n, q, t) {
        if seen.contains(&w) {
            continue;
        }
        let orbit: HashSet<Vec<u32>> = (0..n).map(|k| rotation(&w, k)).collect();
        *counts.entry(orbit.len()).or_insert(0) += 1;
        seen.extend(orbit);
    }
    counts
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Fills holes in a grid (rows bottom first) one single-hole window at a
/// time until nothing changes. Returns the grid, possibly with holes left.
pub fn fill_single_holes(mut rows: Vec<Vec<Option<u32>>>, n: usize, q: u32, t: u32) -> Vec<Vec<Option<u32>>> {
    loop {
        let mut changed = false;
        for row in rows.iter_mut() {
            for l in 0..=row.len() - n {
                let holes: Vec<usize> = (l..l + n).filter(|&c| row[c].is_none()).collect();
                if holes.len() == 1 {
                    let sum: u32 = (l..l + n).filter_map(|c| row[c]).sum::<u32>() % q;
                    row[holes[0]] = Some((t + q - sum) % q);
                    changed = true;
                }
            }
        }
        if !changed {
            return rows;
        }
    }
}

/// Boolean adjacency, `adj[u][w]` for an edge `u -> w`.
pub type Adjacency = Vec<Vec<bool>>;

pub fn random_digraph(rng: &mut impl Rng, max_vertices: usize) -> Adjacency {
    let n = rng.gen_range(1..=max_vertices);
    let density: f64 = rng.gen_range(0.1..0.6);
    (0..n).map(|_| (0..n).map(|_| rng.gen_bool(density)).collect()).collect()
}

pub fn edges_of(adj: &Adjacency) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (u, row) in adj.iter().enumerate() {
        for (w, &e) in row.iter().enumerate() {
            if e {
                out.push((u, w));
            }
        }
    }
    out
}

fn multiply(a: &Adjacency, b: &Adjacency) -> Adjacency {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).any(|k| a[i][k] && b[k][j])).collect())
        .collect()
}

/// `adj^k` by `k - 1` plain multiplications.
pub fn power(adj: &Adjacency, k: u64) -> Adjacency {
    let n = adj.len();
    let mut acc: Adjacency = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
    for _ in 0..k {
        acc = multiply(&acc, adj);
    }
    acc
}

/// Reflexive-transitive closure by Floyd-Warshall.
pub fn reachability(adj: &Adjacency) -> Adjacency {
    let n = adj.len();
    let mut r = adj.clone();
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

pub fn strongly_connected(adj: &Adjacency) -> bool {
    reachability(adj).iter().all(|row| row.iter().all(|&x| x))
}

/// gcd of closed-walk lengths at `v` up to `max_len`, `None` if there are none.
pub fn return_gcd(adj: &Adjacency, v: usize, max_len: u64) -> Option<u64> {
    let mut walk = adj.clone();
    let mut g = 0;
    for k in 1..=max_len {
        if walk[v][v] {
            g = gcd(g, k);
        }
        walk = multiply(&walk, adj);
    }
    (g > 0).then_some(g)
}

/// Least `k <= max` with every entry of `adj^k` true.
pub fn exponent(adj: &Adjacency, max: u64) -> Option<u64> {
    let mut walk = adj.clone();
    for k in 1..=max {
        if walk.iter().all(|row| row.iter().all(|&x| x)) {
            return Some(k);
        }
        walk = multiply(&walk, adj);
    }
    None
}
