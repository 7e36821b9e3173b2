//! Exact combinatorics of the Voronoi cells of the lattices of integer flows
//! and integer cuts of a finite connected multigraph.
//!
//! The flow side relates faces of the Voronoi cell of the origin to strongly
//! connected orientations of subgraphs; the cut side relates them to coherent
//! acyclic orientations of cut subgraphs. Both correspondences are built
//! combinatorially and checked against an independent double-description
//! computation of the cell. All arithmetic is exact.

pub mod caps;
pub mod corpus;
pub mod covering;
pub mod cut;
pub mod error;
pub mod examples;
pub mod flow;
pub mod graph;
pub mod orient;
pub mod polytope;
pub mod poset;
pub mod rational;
pub mod report;
pub mod voronoi;

pub use caps::Caps;
pub use error::{Error, Result};
pub use flow::EdgeVector;
pub use graph::{Arc, Circuit, Dir, Multigraph, OrientedSubgraph};
pub use poset::GradedPoset;
pub use rational::Q;
