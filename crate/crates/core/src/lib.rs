//! Local metric dimension of K4-free graphs.
//!
//! A set `W` of vertices is *local resolving* when every edge `uv` with both
//! ends outside `W` has some `w` in `W` with `d(u, w) != d(v, w)`. For every
//! connected graph on at least four vertices without a K4 there is such a set
//! of size at most `floor(n/2)`. This crate builds one constructively, verifies
//! it against an exhaustive oracle, and checks the surrounding known bounds.
//!
//! ```
//! use locdim::{construct_certificate, friendship_graph, ConstructOptions};
//!
//! let g = friendship_graph(3).unwrap();
//! let cert = construct_certificate(&g, &ConstructOptions::default()).unwrap();
//! assert_eq!(cert.w.len(), 3);
//! assert!(cert.is_clean());
//! ```

pub mod batch;
pub mod construct;
pub mod error;
pub mod fragments;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod packing;
pub mod par;
pub mod vertex_set;

pub use batch::{run_batch, BatchConfig, BatchReport, BatchSummary};
pub use construct::{construct, construct_certificate, Certificate, ConstructOptions, TraceStep};
pub use error::{ContractViolation, Error, Result};
pub use fragments::{classify_induced, enumerate_placements, FragmentClass, Placement};
pub use generators::{friendship_graph, named_graph, random_k4_free, random_triangle_free};
pub use graph::{DistanceTable, Graph};
pub use oracle::{check_known_bounds, is_local_resolving, local_metric_dimension, BoundReport, Verdict};
pub use packing::{check_division_facts, local_vertex_division, max_disjoint_packing, Division, FactReport};
pub use par::Execution;
pub use vertex_set::VertexSet;
