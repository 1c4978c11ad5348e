use crate::edges::Mode;
use crate::error::Result;
use crate::tsplib::NodeId;

use super::{Degrees, Reason, Tracker, Verdict, NONE};

/// Multiple-Fragment tracker.
///
/// Every fragment endpoint stores the node at the opposite end of its
/// fragment; an isolated node is its own opposite end and interior nodes
/// store nothing. An arc is refused when it would join the two ends of one
/// fragment.
#[derive(Debug, Clone)]
pub struct MultipleFragment {
    mode: Mode,
    degrees: Degrees,
    tail: Vec<usize>,
    accepted: usize,
}

impl MultipleFragment {
    pub fn new(n: usize, mode: Mode) -> Self {
        MultipleFragment {
            mode,
            degrees: Degrees::new(n, mode),
            tail: (0..n).collect(),
            accepted: 0,
        }
    }

    /// Opposite endpoint of the fragment ending at `v`, `None` for interior
    /// nodes.
    pub fn tail(&self, v: NodeId) -> Option<NodeId> {
        (self.tail[v] != NONE).then_some(self.tail[v])
    }
}

impl Tracker for MultipleFragment {
    fn mode(&self) -> Mode {
        self.mode
    }

    fn n(&self) -> usize {
        self.tail.len()
    }

    fn accepted(&self) -> usize {
        self.accepted
    }

    #[inline]
    fn check(&self, from: NodeId, to: NodeId) -> Verdict {
        if !self.degrees.allows(from, to) {
            Verdict::Rejected(Reason::DegreeViolation)
        } else if self.tail[from] == to {
            Verdict::Rejected(Reason::WouldCloseSubtour)
        } else {
            Verdict::Accepted
        }
    }

    fn commit(&mut self, from: NodeId, to: NodeId) {
        // Fragments (a .. from) and (to .. b) merge into (a .. b).
        let a = self.tail[from];
        let b = self.tail[to];
        debug_assert!(a != NONE && b != NONE, "commit on an interior node");
        if from != a {
            self.tail[from] = NONE;
        }
        if to != b {
            self.tail[to] = NONE;
        }
        self.tail[a] = b;
        self.tail[b] = a;
        self.degrees.add(from, to);
        self.accepted += 1;
    }

    fn close_tour(&self) -> Result<(NodeId, NodeId)> {
        self.degrees.closing_arc(self.accepted)
    }
}
