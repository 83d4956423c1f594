//! Construction and verification of the domino 2-graphs `Λ(n,q,t)`.
//!
//! * [`words`]: words over `Z/q`, necklaces, Lyndon words and their counts.
//! * [`twograph`]: generic 2-graph skeletons with axiom checking.
//! * [`domino`]: the domino graphs, their paths as filled rectangles, and
//!   composition by completing holes.
//! * [`crossed`]: the crossed product of the red graph by `Z` and the
//!   isomorphism with the domino graph.
//! * [`graphalg`]: connectivity, periods and `n`-connectedness of digraphs.
//! * [`cstar`]: closed-form K-theory and structure of the graph algebras.

#![forbid(unsafe_code)]

pub mod crossed;
pub mod cstar;
pub mod domino;
pub mod error;
pub mod graphalg;
pub mod twograph;
pub mod words;

pub use domino::BasicData;
pub use error::{Error, Result};

/// Size bounds for enumeration and verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest vertex count `q^(n-1)` for which a skeleton is built.
    pub max_vertices: u64,
    /// Largest degree for exhaustive path enumeration.
    pub max_path_degree: (u32, u32),
    /// Largest degree accepted by path counting on skeletons.
    pub max_count_degree: (u32, u32),
    /// Largest number of items an exhaustive scan may visit.
    pub work_limit: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_vertices: 4096,
            max_path_degree: (3, 3),
            max_count_degree: (4, 4),
            work_limit: 1 << 24,
        }
    }
}
