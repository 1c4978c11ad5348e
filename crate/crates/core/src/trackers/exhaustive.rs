use crate::edges::Mode;
use crate::error::Result;
use crate::tsplib::NodeId;

use super::{Degrees, Reason, Tracker, Verdict, NONE};

/// Exhaustive Loop tracker.
///
/// Keeps only the committed adjacency. A candidate `from -> to` is traced
/// from `to` along committed arcs; reaching `from` again means the arc would
/// close a subtour, running off the end of the fragment means it is safe.
#[derive(Debug, Clone)]
pub struct ExhaustiveLoop {
    mode: Mode,
    degrees: Degrees,
    // Directional: successor in slot 0. Non-directional: both neighbours.
    links: Vec<[usize; 2]>,
    accepted: usize,
}

impl ExhaustiveLoop {
    pub fn new(n: usize, mode: Mode) -> Self {
        ExhaustiveLoop {
            mode,
            degrees: Degrees::new(n, mode),
            links: vec![[NONE; 2]; n],
            accepted: 0,
        }
    }

    /// Walks the fragment starting at `to`, reporting whether it returns to
    /// `start` in fewer than `n` steps.
    fn trace_returns(&self, start: NodeId, to: NodeId) -> bool {
        let n = self.links.len();
        let mut prev = NONE;
        let mut current = to;
        let mut steps = 1;
        loop {
            let next = match self.mode {
                Mode::Directional => self.links[current][0],
                Mode::NonDirectional => {
                    let [p, q] = self.links[current];
                    if p != NONE && p != prev {
                        p
                    } else if q != prev {
                        q
                    } else {
                        NONE
                    }
                }
            };
            if next == NONE {
                return false;
            }
            steps += 1;
            if next == start {
                // A full-length return is the closing arc, never offered.
                return steps < n;
            }
            debug_assert!(steps <= n, "trace longer than the instance");
            prev = current;
            current = next;
        }
    }
}

impl Tracker for ExhaustiveLoop {
    fn mode(&self) -> Mode {
        self.mode
    }

    fn n(&self) -> usize {
        self.links.len()
    }

    fn accepted(&self) -> usize {
        self.accepted
    }

    fn check(&self, from: NodeId, to: NodeId) -> Verdict {
        if !self.degrees.allows(from, to) {
            Verdict::Rejected(Reason::DegreeViolation)
        } else if self.trace_returns(from, to) {
            Verdict::Rejected(Reason::WouldCloseSubtour)
        } else {
            Verdict::Accepted
        }
    }

    fn commit(&mut self, from: NodeId, to: NodeId) {
        match self.mode {
            Mode::Directional => self.links[from][0] = to,
            Mode::NonDirectional => {
                for (a, b) in [(from, to), (to, from)] {
                    let slot = if self.links[a][0] == NONE { 0 } else { 1 };
                    self.links[a][slot] = b;
                }
            }
        }
        self.degrees.add(from, to);
        self.accepted += 1;
    }

    fn close_tour(&self) -> Result<(NodeId, NodeId)> {
        self.degrees.closing_arc(self.accepted)
    }
}
