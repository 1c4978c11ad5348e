//! Subtour trackers.
//!
//! A tracker watches arcs being committed to a partial tour and decides
//! whether a candidate arc may join without breaking the degree bounds or
//! closing a cycle on fewer than `n` nodes. All three implementations answer
//! identically; they differ only in the state they keep:
//!
//! * [`MultipleFragment`] keeps, for each fragment endpoint, the opposite
//!   endpoint.
//! * [`ExhaustiveLoop`] keeps the committed adjacency and walks the fragment
//!   on every query.
//! * [`GreedyTracker`] keeps an ineligibility matrix whose marks are
//!   propagated by row addition as fragments grow.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::edges::{Arc, Mode};
use crate::error::{Error, Result};
use crate::tsplib::NodeId;

mod exhaustive;
mod fragment;
mod greedy;

pub use exhaustive::ExhaustiveLoop;
pub use fragment::MultipleFragment;
pub use greedy::GreedyTracker;

pub(crate) const NONE: usize = usize::MAX;

/// Why a candidate arc was refused. Different trackers may classify the same
/// refusal differently; only accept versus reject is comparable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    DegreeViolation,
    WouldCloseSubtour,
    IneligibleMark,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accepted,
    Rejected(Reason),
}

impl Verdict {
    pub fn is_accepted(self) -> bool {
        self == Verdict::Accepted
    }

    pub fn reason(self) -> Option<Reason> {
        match self {
            Verdict::Accepted => None,
            Verdict::Rejected(r) => Some(r),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accepted => f.write_str("accepted"),
            Verdict::Rejected(Reason::DegreeViolation) => f.write_str("rejected(degree_violation)"),
            Verdict::Rejected(Reason::WouldCloseSubtour) => {
                f.write_str("rejected(would_close_subtour)")
            }
            Verdict::Rejected(Reason::IneligibleMark) => f.write_str("rejected(ineligible_mark)"),
        }
    }
}

/// The shared contract of every subtour tracker.
///
/// `check` is pure; `commit` assumes the arc was judged legal. Construction
/// stops once `accepted() == n - 1`, after which [`Tracker::close_tour`]
/// names the arc that turns the Hamiltonian path into a tour.
pub trait Tracker {
    fn mode(&self) -> Mode;

    fn n(&self) -> usize;

    /// Number of committed arcs.
    fn accepted(&self) -> usize;

    fn check(&self, from: NodeId, to: NodeId) -> Verdict;

    fn commit(&mut self, from: NodeId, to: NodeId);

    /// Endpoints `(from, to)` of the arc that closes the Hamiltonian path.
    fn close_tour(&self) -> Result<(NodeId, NodeId)>;

    fn try_commit(&mut self, arc: &Arc) -> Verdict {
        debug_assert!(self.accepted() < self.n() - 1, "path is already complete");
        let verdict = self.check(arc.from, arc.to);
        if verdict.is_accepted() {
            self.commit(arc.from, arc.to);
        }
        verdict
    }
}

impl<T: Tracker + ?Sized> Tracker for Box<T> {
    fn mode(&self) -> Mode {
        (**self).mode()
    }
    fn n(&self) -> usize {
        (**self).n()
    }
    fn accepted(&self) -> usize {
        (**self).accepted()
    }
    fn check(&self, from: NodeId, to: NodeId) -> Verdict {
        (**self).check(from, to)
    }
    fn commit(&mut self, from: NodeId, to: NodeId) {
        (**self).commit(from, to)
    }
    fn close_tour(&self) -> Result<(NodeId, NodeId)> {
        (**self).close_tour()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TrackerKind {
    #[serde(rename = "MF")]
    Mf,
    #[serde(rename = "EL")]
    El,
    #[serde(rename = "GT")]
    Gt,
}

impl TrackerKind {
    /// Column order used in reports.
    pub const ALL: [TrackerKind; 3] = [TrackerKind::El, TrackerKind::Mf, TrackerKind::Gt];

    pub fn build(self, n: usize, mode: Mode, options: TrackerOptions) -> Box<dyn Tracker> {
        match self {
            TrackerKind::Mf => Box::new(MultipleFragment::new(n, mode)),
            TrackerKind::El => Box::new(ExhaustiveLoop::new(n, mode)),
            TrackerKind::Gt => Box::new(GreedyTracker::new(n, mode, options.row_col_delete)),
        }
    }
}

impl fmt::Display for TrackerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrackerKind::Mf => "MF",
            TrackerKind::El => "EL",
            TrackerKind::Gt => "GT",
        })
    }
}

impl FromStr for TrackerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mf" => Ok(TrackerKind::Mf),
            "el" => Ok(TrackerKind::El),
            "gt" => Ok(TrackerKind::Gt),
            other => Err(Error::Argument(format!("unknown tracker `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackerOptions {
    /// Retire matrix rows and columns of saturated nodes (greedy tracker).
    pub row_col_delete: bool,
}

impl Default for TrackerOptions {
    fn default() -> Self {
        TrackerOptions {
            row_col_delete: true,
        }
    }
}

/// Degree bookkeeping shared by all trackers: separate out/in flags when
/// directional, a single 0..=2 count when not.
#[derive(Debug, Clone)]
pub(crate) struct Degrees {
    mode: Mode,
    // Directional: out-degree. Non-directional: total degree.
    out: Vec<u8>,
    // Directional only: in-degree.
    inn: Vec<u8>,
}

impl Degrees {
    pub(crate) fn new(n: usize, mode: Mode) -> Self {
        Degrees {
            mode,
            out: vec![0; n],
            inn: if mode.is_directional() {
                vec![0; n]
            } else {
                Vec::new()
            },
        }
    }

    #[inline]
    pub(crate) fn allows(&self, from: NodeId, to: NodeId) -> bool {
        match self.mode {
            Mode::Directional => self.out[from] == 0 && self.inn[to] == 0,
            Mode::NonDirectional => self.out[from] < 2 && self.out[to] < 2,
        }
    }

    #[inline]
    pub(crate) fn add(&mut self, from: NodeId, to: NodeId) {
        self.out[from] += 1;
        match self.mode {
            Mode::Directional => self.inn[to] += 1,
            Mode::NonDirectional => self.out[to] += 1,
        }
    }

    /// Whether `v` can take no further arc at all.
    #[inline]
    pub(crate) fn saturated(&self, v: NodeId) -> bool {
        match self.mode {
            Mode::Directional => self.out[v] == 1 && self.inn[v] == 1,
            Mode::NonDirectional => self.out[v] == 2,
        }
    }

    pub(crate) fn closing_arc(&self, accepted: usize) -> Result<(NodeId, NodeId)> {
        let n = self.out.len();
        if accepted != n - 1 {
            return Err(Error::State(format!(
                "closing arc requested after {accepted} of {} commits",
                n - 1
            )));
        }
        let single = |it: &mut dyn Iterator<Item = NodeId>, what: &str| -> Result<NodeId> {
            match (it.next(), it.next()) {
                (Some(v), None) => Ok(v),
                _ => Err(Error::State(format!("no unique {what} node"))),
            }
        };
        match self.mode {
            Mode::Directional => {
                let from = single(&mut (0..n).filter(|&v| self.out[v] == 0), "unexited")?;
                let to = single(&mut (0..n).filter(|&v| self.inn[v] == 0), "unentered")?;
                Ok((from, to))
            }
            Mode::NonDirectional => {
                let mut ends = (0..n).filter(|&v| self.out[v] < 2);
                match (ends.next(), ends.next(), ends.next()) {
                    (Some(a), Some(b), None) => Ok((a, b)),
                    _ => Err(Error::State("path does not have exactly two ends".into())),
                }
            }
        }
    }
}
