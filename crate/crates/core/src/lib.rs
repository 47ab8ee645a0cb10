//! Exact enumeration of equilibria of non-degenerate bimatrix games through
//! their labeled best-response polytopes, together with the stable-set,
//! facet-stable-set and disjoint-clique bounds on the number of equilibria,
//! and a census pipeline over combinatorial simple polytopes.

pub mod bounds;
pub mod census;
pub mod equilibrium;
pub mod error;
pub mod exact;
pub mod game;
pub mod graph;
pub mod oracle;
pub mod polytope;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{ExactMatrix, Scalar};
pub use game::{BestResponsePair, BimatrixGame};
pub use graph::Graph;
pub use polytope::LabeledPolytope;
