//! Closed-form K-theory and a structure summary for the graph algebra of a
//! domino graph.
//!
//! Nothing operator-algebraic is computed here. Group orders come from the
//! closed formula; structural statements that cannot be checked by
//! combinatorics carry the [`Provenance::Asserted`] tag.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::domino::{self, BasicData};

/// Finitely generated abelian group `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianGroupDescriptor {
    pub free_rank: u32,
    #[serde(serialize_with = "decimal_list")]
    pub torsion_orders: Vec<BigUint>,
}

fn decimal_list<S: Serializer>(xs: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(BigUint::to_string))
}

fn decimal<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl AbelianGroupDescriptor {
    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn free(rank: u32) -> Self {
        Self { free_rank: rank, torsion_orders: Vec::new() }
    }

    /// `Z/order`; orders 0 and 1 give `Z` and the trivial group.
    pub fn cyclic(order: BigUint) -> Self {
        if order.is_zero() {
            Self::free(1)
        } else if order.is_one() {
            Self::trivial()
        } else {
            Self { free_rank: 0, torsion_orders: vec![order] }
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion_orders.is_empty()
    }
}

impl fmt::Display for AbelianGroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion_orders.iter().map(|d| format!("Z/{d}")));
        f.write_str(&parts.join(" + "))
    }
}

/// `(K_0, K_1)`: `Z^2` when `n = 1`, trivial for `(2,2,0)`, otherwise
/// `Z/(q^(n-1) - 1)` in both degrees.
pub fn k_theory(data: &BasicData) -> (AbelianGroupDescriptor, AbelianGroupDescriptor) {
    let group = if data.n == 1 {
        AbelianGroupDescriptor::free(2)
    } else if (data.n, data.q, data.t) == (2, 2, 0) {
        AbelianGroupDescriptor::trivial()
    } else {
        AbelianGroupDescriptor::cyclic(data.vertex_count() - 1u32)
    };
    (group.clone(), group)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StructureCase {
    /// `n = 1`: the algebra is `C(T) ⊗ C(T)`.
    ProductTorus,
    /// `(2,2,0)`: the algebra is `C(T) ⊗ O_2`.
    ProductO2,
    /// Every other case: a crossed product by `Z` of a Cuntz algebra.
    Crossed,
}

impl StructureCase {
    pub fn of(data: &BasicData) -> Self {
        if data.n == 1 {
            Self::ProductTorus
        } else if (data.n, data.q, data.t) == (2, 2, 0) {
            Self::ProductO2
        } else {
            Self::Crossed
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::ProductTorus => "PRODUCT_TORUS",
            Self::ProductO2 => "PRODUCT_O2",
            Self::Crossed => "CROSSED",
        }
    }
}

/// Primitive ideal space up to homeomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PrimitiveIdealSpace {
    #[serde(rename = "TORUS_2")]
    Torus2,
    Circle,
}

impl fmt::Display for PrimitiveIdealSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Torus2 => "T^2",
            Self::Circle => "T",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Evaluated by this library.
    Computed,
    /// Follows from a stated tensor decomposition by standard facts.
    Derived,
    /// A published theorem, recorded but not checked.
    Asserted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tagged<T> {
    pub value: T,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub data: BasicData,
    pub case: StructureCase,
    pub k0: AbelianGroupDescriptor,
    pub k1: AbelianGroupDescriptor,
    /// Number of generators of the Cuntz algebra on the vertex set: `q^(n-1)`.
    #[serde(serialize_with = "decimal")]
    pub cuntz_generator_count: BigUint,
    pub sigma_order: u64,
    pub primitive_ideal_space: Tagged<PrimitiveIdealSpace>,
    /// Simplicity of the finite crossed product; absent for product cases.
    pub simplicity_of_finite_crossed_product: Option<Tagged<bool>>,
}

pub fn structure_report(data: &BasicData) -> StructureReport {
    let case = StructureCase::of(data);
    let (k0, k1) = k_theory(data);
    let (prim, simple) = match case {
        StructureCase::ProductTorus => (
            Tagged { value: PrimitiveIdealSpace::Torus2, provenance: Provenance::Asserted },
            None,
        ),
        // O_2 is simple, so Prim(C(T) ⊗ O_2) = T.
        StructureCase::ProductO2 => (
            Tagged { value: PrimitiveIdealSpace::Circle, provenance: Provenance::Derived },
            None,
        ),
        StructureCase::Crossed => (
            Tagged { value: PrimitiveIdealSpace::Circle, provenance: Provenance::Asserted },
            Some(Tagged { value: true, provenance: Provenance::Asserted }),
        ),
    };
    StructureReport {
        data: *data,
        case,
        k0,
        k1,
        cuntz_generator_count: data.vertex_count(),
        sigma_order: domino::sigma_order(data),
        primitive_ideal_space: prim,
        simplicity_of_finite_crossed_product: simple,
    }
}

impl StructureReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "graph: Λ{}", self.data)?;
        writeln!(f, "case: {}", self.case.tag())?;
        writeln!(f, "K0: {}", self.k0)?;
        writeln!(f, "K1: {}", self.k1)?;
        writeln!(f, "cuntz generators: {}", self.cuntz_generator_count)?;
        writeln!(f, "sigma order: {}", self.sigma_order)?;
        let p = &self.primitive_ideal_space;
        writeln!(f, "Prim: {} ({})", p.value, tag(p.provenance))?;
        match &self.simplicity_of_finite_crossed_product {
            Some(s) => writeln!(f, "finite crossed product simple: {} ({})", s.value, tag(s.provenance)),
            None => writeln!(f, "finite crossed product simple: n/a"),
        }
    }
}

fn tag(p: Provenance) -> &'static str {
    match p {
        Provenance::Computed => "computed",
        Provenance::Derived => "derived",
        Provenance::Asserted => "asserted",
    }
}
