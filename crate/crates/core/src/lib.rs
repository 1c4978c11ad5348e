//! Greedy fragment construction heuristics for the travelling salesman
//! problem, built around interchangeable subtour trackers.
//!
//! The crate separates *what* arc is offered next (the construction shell in
//! [`heuristics`]) from *whether* it may be committed (the trackers in
//! [`trackers`]). Every tracker answers the same question, so the shells can
//! be run under any of them and must produce the same tour.

pub mod bench;
pub mod edges;
pub mod error;
pub mod heuristics;
pub mod oracle;
pub mod tour;
pub mod trackers;
pub mod tsplib;

pub use edges::{build_sorted_edges, Arc, Mode};
pub use error::{Error, Result};
pub use heuristics::{
    arc_greedy, double_ended_nn, nearest_neighbor, ordered_greedy, NodeOrder, OrderSpec,
};
pub use tour::{Heuristic, Provenance, Tour};
pub use trackers::{Reason, Tracker, TrackerKind, Verdict};
pub use tsplib::{parse_instance, read_instance, Instance, Kind, NodeId, SourceFormat};
