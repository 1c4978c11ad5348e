use crate::edges::Mode;
use crate::error::Result;
use crate::tsplib::NodeId;

use super::{Degrees, Reason, Tracker, Verdict};

/// Greedy Tracker.
///
/// Holds an `n x n` matrix `x` where `x[i][j] > 0` marks arc `i -> j` as
/// ineligible. The diagonal starts marked. Committing `i -> j` marks the arc
/// and then adds row `i` into every row that has a mark in column `j`, so
/// every node downstream of `j` inherits the marks of everything upstream of
/// `i` and can no longer connect back to it.
///
/// The non-directional variant marks both orientations and propagates in
/// both directions, so all rows of a fragment mark the whole fragment.
///
/// With row/column delete enabled, rows of exited nodes and columns of
/// entered nodes (non-directional: nodes of degree two) drop out of the
/// active sets and are neither scanned nor updated again.
#[derive(Debug, Clone)]
pub struct GreedyTracker {
    mode: Mode,
    n: usize,
    x: Vec<u8>,
    degrees: Degrees,
    accepted: usize,
    delete: bool,
    rows: ActiveSet,
    cols: ActiveSet,
    // Reused buffers for the propagation step.
    targets: Vec<NodeId>,
    targets_rev: Vec<NodeId>,
    snapshot: Vec<(NodeId, u8)>,
    snapshot_rev: Vec<(NodeId, u8)>,
}

impl GreedyTracker {
    pub fn new(n: usize, mode: Mode, row_col_delete: bool) -> Self {
        let mut x = vec![0u8; n * n];
        for i in 0..n {
            x[i * n + i] = 1;
        }
        GreedyTracker {
            mode,
            n,
            x,
            degrees: Degrees::new(n, mode),
            accepted: 0,
            delete: row_col_delete,
            rows: ActiveSet::full(n),
            cols: ActiveSet::full(n),
            targets: Vec::new(),
            targets_rev: Vec::new(),
            snapshot: Vec::new(),
            snapshot_rev: Vec::new(),
        }
    }

    /// Raw mark count for arc `i -> j`.
    pub fn mark(&self, i: NodeId, j: NodeId) -> u8 {
        self.x[i * self.n + j]
    }

    pub fn row_col_delete(&self) -> bool {
        self.delete
    }

    /// Number of rows still scanned during propagation.
    pub fn active_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn active_cols(&self) -> usize {
        self.cols.len()
    }

    #[inline]
    fn bump(&mut self, i: NodeId, j: NodeId) {
        let cell = &mut self.x[i * self.n + j];
        *cell = cell.saturating_add(1);
    }

    /// Active rows (other than `skip`) with a mark in column `col`.
    fn rows_marked_in(&self, col: NodeId, skip: NodeId, out: &mut Vec<NodeId>) {
        out.clear();
        let n = self.n;
        out.extend(
            self.rows
                .iter()
                .filter(|&r| r != skip && self.x[r * n + col] > 0),
        );
    }

    /// Non-zero entries of row `row` restricted to active columns.
    fn snapshot_row(&self, row: NodeId, out: &mut Vec<(NodeId, u8)>) {
        out.clear();
        let base = row * self.n;
        out.extend(self.cols.iter().filter_map(|c| {
            let v = self.x[base + c];
            (v > 0).then_some((c, v))
        }));
    }

    fn fold(&mut self, targets: &[NodeId], snapshot: &[(NodeId, u8)]) {
        let n = self.n;
        for &r in targets {
            let row = &mut self.x[r * n..(r + 1) * n];
            for &(c, v) in snapshot {
                row[c] = row[c].saturating_add(v);
            }
        }
    }
}

impl Tracker for GreedyTracker {
    fn mode(&self) -> Mode {
        self.mode
    }

    fn n(&self) -> usize {
        self.n
    }

    fn accepted(&self) -> usize {
        self.accepted
    }

    #[inline]
    fn check(&self, from: NodeId, to: NodeId) -> Verdict {
        if !self.degrees.allows(from, to) {
            Verdict::Rejected(Reason::DegreeViolation)
        } else if self.x[from * self.n + to] > 0 {
            Verdict::Rejected(Reason::IneligibleMark)
        } else {
            Verdict::Accepted
        }
    }

    fn commit(&mut self, from: NodeId, to: NodeId) {
        let mut targets = std::mem::take(&mut self.targets);
        let mut snapshot = std::mem::take(&mut self.snapshot);

        match self.mode {
            Mode::Directional => {
                self.bump(from, to);
                self.rows_marked_in(to, from, &mut targets);
                self.snapshot_row(from, &mut snapshot);
                self.fold(&targets, &snapshot);
                self.degrees.add(from, to);
                if self.delete {
                    self.rows.remove(from);
                    self.cols.remove(to);
                }
            }
            Mode::NonDirectional => {
                let mut targets_rev = std::mem::take(&mut self.targets_rev);
                let mut snapshot_rev = std::mem::take(&mut self.snapshot_rev);
                self.bump(from, to);
                self.bump(to, from);
                // Both target sets are read before either fold runs.
                self.rows_marked_in(to, from, &mut targets);
                self.rows_marked_in(from, to, &mut targets_rev);
                self.snapshot_row(from, &mut snapshot);
                self.snapshot_row(to, &mut snapshot_rev);
                self.fold(&targets, &snapshot);
                self.fold(&targets_rev, &snapshot_rev);
                self.degrees.add(from, to);
                if self.delete {
                    for v in [from, to] {
                        if self.degrees.saturated(v) {
                            self.rows.remove(v);
                            self.cols.remove(v);
                        }
                    }
                }
                self.targets_rev = targets_rev;
                self.snapshot_rev = snapshot_rev;
            }
        }

        self.targets = targets;
        self.snapshot = snapshot;
        self.accepted += 1;
    }

    fn close_tour(&self) -> Result<(NodeId, NodeId)> {
        self.degrees.closing_arc(self.accepted)
    }
}

/// Index set with O(1) removal; iteration order is unspecified.
#[derive(Debug, Clone)]
struct ActiveSet {
    members: Vec<NodeId>,
    pos: Vec<usize>,
}

impl ActiveSet {
    fn full(n: usize) -> Self {
        ActiveSet {
            members: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    fn len(&self) -> usize {
        self.members.len()
    }

    fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.members.iter().copied()
    }

    fn remove(&mut self, v: NodeId) {
        let p = self.pos[v];
        if p == usize::MAX {
            return;
        }
        let last = *self
            .members
            .last()
            .expect("non-empty when removing a member");
        self.members.swap_remove(p);
        if last != v {
            self.pos[last] = p;
        }
        self.pos[v] = usize::MAX;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edges::Arc;

    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;

    #[test]
    fn fresh_state_only_blocks_the_diagonal() {
        let gt = GreedyTracker::new(5, Mode::Directional, true);
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(gt.check(i, j).is_accepted(), i != j);
            }
        }
    }

    #[test]
    fn return_arc_blocked_after_first_commit() {
        for delete in [false, true] {
            let mut gt = GreedyTracker::new(5, Mode::Directional, delete);
            gt.try_commit(&Arc::new(A, B, 12));
            assert!(gt.mark(B, A) > 0);
            assert!(gt.mark(A, B) > 0);
            assert!(!gt.check(B, A).is_accepted());
        }
    }

    #[test]
    fn propagation_blocks_c_to_a() {
        let mut gt = GreedyTracker::new(5, Mode::Directional, false);
        gt.try_commit(&Arc::new(A, B, 1));
        gt.try_commit(&Arc::new(B, C, 1));
        assert!(gt.mark(C, A) > 0);
        assert!(gt.mark(C, B) > 0);
        assert_eq!(gt.check(C, A), Verdict::Rejected(Reason::IneligibleMark));
    }

    #[test]
    fn marks_never_decrease() {
        let mut gt = GreedyTracker::new(6, Mode::Directional, false);
        let arcs = [(0, 1), (2, 3), (1, 2), (4, 5), (3, 4)];
        let mut before = gt.x.clone();
        for (i, j) in arcs {
            assert!(gt.try_commit(&Arc::new(i, j, 1)).is_accepted());
            assert!(gt.x.iter().zip(&before).all(|(a, b)| a >= b));
            before = gt.x.clone();
        }
    }

    #[test]
    fn delete_retires_rows_and_columns() {
        let mut gt = GreedyTracker::new(5, Mode::Directional, true);
        gt.try_commit(&Arc::new(A, B, 1));
        assert_eq!(gt.active_rows(), 4);
        assert_eq!(gt.active_cols(), 4);

        let mut nd = GreedyTracker::new(5, Mode::NonDirectional, true);
        nd.try_commit(&Arc::new(A, B, 1));
        assert_eq!(nd.active_rows(), 5);
        nd.try_commit(&Arc::new(B, C, 1));
        assert_eq!(nd.active_rows(), 4);
    }

    #[test]
    fn non_directional_marks_whole_fragment() {
        let mut gt = GreedyTracker::new(6, Mode::NonDirectional, false);
        gt.try_commit(&Arc::new(0, 1, 1));
        gt.try_commit(&Arc::new(2, 3, 1));
        gt.try_commit(&Arc::new(1, 2, 1));
        for r in 0..4 {
            for c in 0..4 {
                assert!(gt.mark(r, c) > 0, "x[{r}][{c}]");
            }
            assert_eq!(gt.mark(r, 4), 0);
        }
    }

    #[test]
    fn active_set_removal() {
        let mut s = ActiveSet::full(4);
        s.remove(1);
        s.remove(1);
        s.remove(3);
        let mut left: Vec<_> = s.iter().collect();
        left.sort();
        assert_eq!(left, vec![0, 2]);
    }
}
