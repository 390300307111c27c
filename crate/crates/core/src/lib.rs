//! Abstract separation systems and a canonical tree-of-tangles construction.
//!
//! A separation system is a finite poset of *oriented separations* together
//! with an order-reversing involution. Given a family of consistent
//! orientations for which the system is rich enough (every crossing pair has a
//! family-respecting join or meet), [`tree::canonical_tree_set`] builds a
//! nested set of separations distinguishing the family. The construction makes
//! no arbitrary choices, so it commutes with every isomorphism of separation
//! systems.
//!
//! The [`graph`] module instantiates everything for vertex separations of
//! small graphs, [`iso`] provides relabelings for invariance testing, and
//! [`verify`] re-checks results independently of the constructor.

pub mod error;
pub mod graph;
pub mod io;
pub mod iso;
pub mod orientation;
pub mod sepsys;
pub mod tree;
pub mod verify;

pub use error::{Error, Lemma, Result};
pub use graph::{Graph, GraphSeparation, GraphSystem, VertexSet};
pub use iso::SepIso;
pub use orientation::{Family, Orientation};
pub use sepsys::{RawSystem, SepId, SeparationSystem, ValidationReport, Violation};
pub use tree::{NestedSet, Round};
pub use verify::{verify_nested_set, VerifyReport};
