//! Regular evolution algebras built from finite simple graphs, exact
//! automorphism and isomorphism search for them, and realization of finite
//! groups as their automorphism groups.

pub mod cli;
pub mod evolution;
pub mod fields;
pub mod frucht;
pub mod functor;
pub mod graph;
pub mod groups;
pub mod monomial;
mod search;
pub mod text;

pub use evolution::{AlgebraElement, EvolutionAlgebra};
pub use fields::{FieldDescriptor, FieldScalar, ScalarMatrix};
pub use frucht::{realize_algebra, realize_graph, verify_realization};
pub use functor::{build_algebra, map_morphism, rebase, recover_graph};
pub use graph::{graph_automorphisms, graph_isomorphism, PermGroup, SimpleGraph, VertexMap};
pub use groups::{group_from_permutations, group_isomorphic, FiniteGroup};
pub use monomial::{algebra_automorphisms, algebra_isomorphism, MonomialMap};
