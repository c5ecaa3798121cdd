//! Weighted stable dual graphs, their isomorphism classes and the contraction
//! poset.

mod automorphism;
mod canon;
mod enumerate;
mod graph;
mod poset;

pub use automorphism::{automorphisms, vertex_automorphisms, AutGroup, Automorphism};
pub use canon::{canonical_form, GraphClass};
pub use enumerate::{check_signature, enumerate_stable_graphs};
pub use graph::{EdgeJson, GraphJson, HalfEdgeJson, StableGraph, TailJson, VertexJson};
pub use poset::{build_poset, ElementJson, PosetJson, StrataPoset};
