//! The crossed product `RΛ ×_α Z` of the red graph of a domino graph by
//! the action generated by `(σ⁻¹, σ₁⁻¹)`, and a machine check that it is
//! isomorphic to `Λ` as a 2-graph.
//!
//! The crossed product is materialized at skeleton level only. Degrees follow
//! the convention `d(λ, m) = (m, d(λ))`, so the new generators `(v, 1)` are
//! blue and the edges `(e, 0)` of the red graph stay red.

use num_integer::Integer;
use serde::Serialize;

use crate::domino::{BasicData, DominoGraph};
use crate::error::{Error, Result};
use crate::twograph::{self, invert, ColouredGraphMorphism, Edge, EdgeId, Skeleton, Square, VertexId};
use crate::Limits;

/// A pair of permutations of the vertices and the edges of a 1-graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphAutomorphism {
    pub vertex_perm: Vec<VertexId>,
    pub edge_perm: Vec<EdgeId>,
}

impl GraphAutomorphism {
    pub fn identity(vertices: usize, edges: usize) -> Self {
        Self {
            vertex_perm: (0..vertices as u32).collect(),
            edge_perm: (0..edges as u32).collect(),
        }
    }

    /// Checks bijectivity and `s(α(e)) = α(s(e))`, `r(α(e)) = α(r(e))`
    /// against the red edges of `base`.
    pub fn is_automorphism_of(&self, base: &Skeleton) -> bool {
        invert(&self.vertex_perm).is_some() && invert(&self.edge_perm).is_some() && self.intertwines(base)
    }

    fn intertwines(&self, base: &Skeleton) -> bool {
        let edges = base.red_edges();
        self.vertex_perm.len() == base.vertex_count()
            && self.edge_perm.len() == edges.len()
            && edges.iter().zip(&self.edge_perm).all(|(e, &img)| {
                edges.get(img as usize).is_some_and(|d| {
                    d.source == self.vertex_perm[e.source as usize] && d.range == self.vertex_perm[e.range as usize]
                })
            })
    }

    pub fn inverse(&self) -> Option<Self> {
        Some(Self {
            vertex_perm: invert(&self.vertex_perm)?,
            edge_perm: invert(&self.edge_perm)?,
        })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Self) -> Self {
        Self {
            vertex_perm: self.vertex_perm.iter().map(|&v| other.vertex_perm[v as usize]).collect(),
            edge_perm: self.edge_perm.iter().map(|&e| other.edge_perm[e as usize]).collect(),
        }
    }

    /// Least `k >= 1` with `self^k = id`.
    pub fn order(&self) -> u64 {
        cycle_lcm(&self.vertex_perm).lcm(&cycle_lcm(&self.edge_perm))
    }

    /// `self^m` for any integer `m`, reduced modulo the order.
    pub fn pow(&self, m: i64) -> Self {
        let order = self.order() as i64;
        let k = m.rem_euclid(order);
        let mut acc = Self::identity(self.vertex_perm.len(), self.edge_perm.len());
        for _ in 0..k {
            acc = acc.then(self);
        }
        acc
    }
}

fn cycle_lcm(perm: &[u32]) -> u64 {
    let mut seen = vec![false; perm.len()];
    let mut acc = 1u64;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i] as usize;
            len += 1;
        }
        acc = acc.lcm(&len);
    }
    acc
}

fn require_n_at_least_2(data: &BasicData) -> Result<()> {
    if data.n < 2 {
        return Err(Error::HypothesisViolated(format!(
            "the crossed-product description needs n >= 2, got Λ{data}"
        )));
    }
    Ok(())
}

/// The unique red edge from `σ(s(e))` to `σ(r(e))`.
pub fn sigma1(graph: &DominoGraph, e: EdgeId) -> Result<EdgeId> {
    require_n_at_least_2(&graph.data())?;
    let edge = graph
        .skeleton()
        .red_edges()
        .get(e as usize)
        .ok_or_else(|| Error::InvalidParameters(format!("red edge {e} out of range")))?;
    let sigma = graph.sigma_ids();
    Ok(graph.red_edge_id(sigma[edge.source as usize], sigma[edge.range as usize]))
}

/// `(σ, σ₁)` as an automorphism of the red graph, for any `n >= 2`.
pub fn sigma_pair(graph: &DominoGraph) -> Result<GraphAutomorphism> {
    require_n_at_least_2(&graph.data())?;
    let sigma = graph.sigma_ids();
    let edge_perm = graph
        .skeleton()
        .red_edges()
        .iter()
        .map(|e| graph.red_edge_id(sigma[e.source as usize], sigma[e.range as usize]))
        .collect();
    Ok(GraphAutomorphism {
        vertex_perm: graph.sigma_ids().to_vec(),
        edge_perm,
    })
}

/// The generator `(σ⁻¹, σ₁⁻¹)` of the action `α`.
///
/// Rejects `n < 2`, and `(2,2,0)` where `σ` is trivial; use
/// [`automorphism_generator`] to build it regardless.
pub fn build_automorphism(graph: &DominoGraph) -> Result<GraphAutomorphism> {
    let data = graph.data();
    if data.is_degenerate() {
        require_n_at_least_2(&data)?;
        return Err(Error::HypothesisViolated(format!(
            "σ is the identity on Λ{data}; the graph is a product graph"
        )));
    }
    automorphism_generator(graph)
}

/// The generator `(σ⁻¹, σ₁⁻¹)` for any `n >= 2`, degenerate cases included.
pub fn automorphism_generator(graph: &DominoGraph) -> Result<GraphAutomorphism> {
    sigma_pair(graph)?
        .inverse()
        .ok_or_else(|| Error::Internal("σ or σ₁ is not a bijection".into()))
}

/// The red graph `RΛ` as a skeleton with no blue edges.
pub fn red_graph(sk: &Skeleton) -> Skeleton {
    Skeleton::new(sk.labels().to_vec(), Vec::new(), sk.red_edges().to_vec(), Vec::new())
}

/// Skeleton of `E ×_α Z` for a 1-graph `E` given as the red edges of `base`.
///
/// Vertices `(v, 0)` and red edges `(e, 0)` keep the ids of `base`; the blue
/// edge `(v, 1)` has id `v`, range `(v, 0)` and source `(α⁻¹(v), 0)`. Each
/// red edge `ρ` gives the square `(ρ,0)(s(ρ),1) = (r(ρ),1)(α⁻¹(ρ),0)`.
pub fn crossed_product(base: &Skeleton, alpha: &GraphAutomorphism) -> Result<Skeleton> {
    let inv = alpha
        .inverse()
        .ok_or_else(|| Error::InvalidParameters("α is not a bijection".into()))?;
    let labels = base.labels().iter().map(|l| format!("({l},0)")).collect();
    let blue = (0..base.vertex_count() as u32)
        .map(|v| Edge {
            source: inv.vertex_perm[v as usize],
            range: v,
        })
        .collect();
    let red = base.red_edges().to_vec();
    // `inv` exists, so both maps are bijections.
    let squares = if alpha.intertwines(base) {
        // α⁻¹ carries the red edges into r onto those into α⁻¹(r), so
        // walking the latter in id order lists the keys ascending.
        let (offsets, ids) = red_by_range(base);
        (0..base.vertex_count())
            .flat_map(|r| {
                let v = inv.vertex_perm[r] as usize;
                ids[offsets[v]..offsets[v + 1]].iter().map(move |&h| (r, h))
            })
            .map(|(r, h)| {
                let rho = alpha.edge_perm[h as usize];
                Square {
                    blue_red: (r as VertexId, h),
                    red_blue: (rho, red[rho as usize].source),
                }
            })
            .collect()
    } else {
        red.iter()
            .enumerate()
            .map(|(rho, e)| Square {
                blue_red: (e.range, inv.edge_perm[rho]),
                red_blue: (rho as EdgeId, e.source),
            })
            .collect()
    };
    Ok(Skeleton::new(labels, blue, red, squares))
}

/// Red edge ids grouped by range, ascending within each group.
fn red_by_range(base: &Skeleton) -> (Vec<usize>, Vec<EdgeId>) {
    let nv = base.vertex_count();
    let mut offsets = vec![0usize; nv + 1];
    for e in base.red_edges() {
        offsets[e.range as usize + 1] += 1;
    }
    for i in 0..nv {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets.clone();
    let mut ids = vec![0; base.red_edges().len()];
    for (id, e) in base.red_edges().iter().enumerate() {
        ids[fill[e.range as usize]] = id as EdgeId;
        fill[e.range as usize] += 1;
    }
    (offsets, ids)
}

#[derive(Debug, Clone)]
pub struct CrossedSkeleton {
    pub base: Skeleton,
    pub alpha: GraphAutomorphism,
    pub derived: Skeleton,
}

pub fn build_crossed_product(graph: &DominoGraph) -> Result<CrossedSkeleton> {
    let alpha = build_automorphism(graph)?;
    let base = red_graph(graph.skeleton());
    let derived = crossed_product(&base, &alpha)?;
    Ok(CrossedSkeleton { base, alpha, derived })
}

/// `φ₀(v) = (v,0)`, `φ₁(β) = (r(β),1)`, `φ₂(ρ) = (ρ,0)`.
pub fn phi(graph: &DominoGraph) -> Result<ColouredGraphMorphism> {
    require_n_at_least_2(&graph.data())?;
    let sk = graph.skeleton();
    Ok(ColouredGraphMorphism {
        vertex_map: (0..sk.vertex_count() as u32).collect(),
        blue_edge_map: sk.blue_edges().iter().map(|b| b.range).collect(),
        red_edge_map: (0..sk.red_edges().len() as u32).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsoStatus {
    Verified,
    Failed,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub data: BasicData,
    pub status: IsoStatus,
    pub note: Option<String>,
    pub vertices: usize,
    pub blue_edges: usize,
    pub red_edges: usize,
    pub squares: usize,
    pub automorphism_valid: bool,
    pub automorphism_order: u64,
    pub crossed_axioms_ok: bool,
    pub isomorphism: bool,
}

impl IsoReport {
    pub fn is_ok(&self) -> bool {
        self.status != IsoStatus::Failed
    }
}

/// Checks that `φ` is an isomorphism from the skeleton of `Λ(n,q,t)` onto
/// the skeleton of `RΛ ×_α Z`, squares included.
pub fn verify_iso(data: &BasicData, limits: &Limits) -> Result<IsoReport> {
    require_n_at_least_2(data)?;
    let graph = DominoGraph::build(*data, limits)?;
    verify_iso_graph(&graph)
}

pub fn verify_iso_graph(graph: &DominoGraph) -> Result<IsoReport> {
    let data = graph.data();
    let sk = graph.skeleton();
    let mut report = IsoReport {
        data,
        status: IsoStatus::Skipped,
        note: None,
        vertices: sk.vertex_count(),
        blue_edges: sk.blue_edges().len(),
        red_edges: sk.red_edges().len(),
        squares: sk.squares().len(),
        automorphism_valid: false,
        automorphism_order: 0,
        crossed_axioms_ok: false,
        isomorphism: false,
    };
    if data.is_degenerate() {
        require_n_at_least_2(&data)?;
        report.note = Some(format!(
            "degenerate case: σ is the identity on Λ{data}, which is a product graph; isomorphism check skipped"
        ));
        return Ok(report);
    }
    let crossed = build_crossed_product(graph)?;
    report.automorphism_valid = crossed.alpha.is_automorphism_of(&crossed.base);
    report.automorphism_order = crossed.alpha.order();
    report.crossed_axioms_ok = twograph::check_axioms(&crossed.derived).is_ok();
    report.isomorphism = twograph::is_isomorphism(&phi(graph)?, sk, &crossed.derived);
    let ok = report.automorphism_valid && report.crossed_axioms_ok && report.isomorphism;
    report.status = if ok { IsoStatus::Verified } else { IsoStatus::Failed };
    Ok(report)
}

/// A path of a 1-graph given by its red edges: `edges[0]` has range
/// `range` and consecutive edges compose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedPath {
    pub range: VertexId,
    pub edges: Vec<EdgeId>,
}

impl RedPath {
    pub fn vertex(v: VertexId) -> Self {
        Self { range: v, edges: Vec::new() }
    }

    pub fn source(&self, base: &Skeleton) -> VertexId {
        self.edges
            .last()
            .map_or(self.range, |&e| base.red_edges()[e as usize].source)
    }

    pub fn is_valid(&self, base: &Skeleton) -> bool {
        let mut at = self.range;
        for &e in &self.edges {
            match base.red_edges().get(e as usize) {
                Some(edge) if edge.range == at => at = edge.source,
                _ => return false,
            }
        }
        true
    }

    pub fn apply(&self, alpha: &GraphAutomorphism) -> Self {
        Self {
            range: alpha.vertex_perm[self.range as usize],
            edges: self.edges.iter().map(|&e| alpha.edge_perm[e as usize]).collect(),
        }
    }
}

/// An element `(λ, m)` of the crossed product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedPath {
    pub path: RedPath,
    pub m: u32,
}

impl CrossedPath {
    /// `r(λ, m) = (r(λ), 0)`.
    pub fn range(&self) -> VertexId {
        self.path.range
    }

    /// `s(λ, m) = (α^{-m}(s(λ)), 0)`.
    pub fn source(&self, base: &Skeleton, alpha: &GraphAutomorphism) -> VertexId {
        alpha.pow(-i64::from(self.m)).vertex_perm[self.path.source(base) as usize]
    }

    /// `d(λ, m) = (m, |λ|)`.
    pub fn degree(&self) -> (u32, u32) {
        (self.m, self.path.edges.len() as u32)
    }
}

/// `(μ, m)(ν, k) = (μ α^m(ν), m + k)` when `s(μ, m) = r(ν, k)`.
pub fn crossed_compose(
    base: &Skeleton,
    alpha: &GraphAutomorphism,
    mu: &CrossedPath,
    nu: &CrossedPath,
) -> Result<CrossedPath> {
    if mu.source(base, alpha) != nu.range() {
        return Err(Error::NotComposable("s(μ,m) differs from r(ν,k)".into()));
    }
    let shifted = nu.path.apply(&alpha.pow(i64::from(mu.m)));
    let mut edges = mu.path.edges.clone();
    edges.extend_from_slice(&shifted.edges);
    let path = RedPath { range: mu.path.range, edges };
    if !path.is_valid(base) {
        return Err(Error::Internal("α^m(ν) does not continue μ".into()));
    }
    Ok(CrossedPath { path, m: mu.m + nu.m })
}
