//! Construction shells.
//!
//! [`arc_greedy`] walks the globally sorted arc stream and lets a tracker
//! filter it. [`nearest_neighbor`] and [`double_ended_nn`] grow a single
//! fragment and never need a tracker. [`ordered_greedy`] lets each node of a
//! priority list take its cheapest legal arc, with several fragments alive at
//! once, so it does need one.

use std::collections::VecDeque;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::edges::{build_sorted_edges, Arc, Mode};
use crate::error::{Error, Result};
use crate::tour::{cycle_order, Heuristic, Provenance, Tour};
use crate::trackers::{
    ExhaustiveLoop, GreedyTracker, MultipleFragment, Tracker, TrackerKind, TrackerOptions, Verdict,
};
use crate::tsplib::{Instance, NodeId};

/// One arc offered to a tracker by the arc-greedy shell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEvent {
    pub step: usize,
    pub arc: Arc,
    pub verdict: Verdict,
}

#[derive(Serialize)]
struct TraceLine {
    step: usize,
    from: NodeId,
    to: NodeId,
    weight: i64,
    accepted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<crate::trackers::Reason>,
}

impl TraceEvent {
    /// One JSON object per line, 1-based node numbers.
    pub fn to_json_line(&self) -> String {
        let line = TraceLine {
            step: self.step,
            from: self.arc.from + 1,
            to: self.arc.to + 1,
            weight: self.arc.weight,
            accepted: self.verdict.is_accepted(),
            reason: self.verdict.reason(),
        };
        serde_json::to_string(&line).expect("trace lines always serialize")
    }
}

/// Offers `edges` in order until the tracker holds a Hamiltonian path, then
/// appends the closing arc. Returns the `n` arcs of the cycle.
pub fn grow_path<T, F>(
    tracker: &mut T,
    edges: &[Arc],
    mut observe: F,
) -> Result<Vec<(NodeId, NodeId)>>
where
    T: Tracker + ?Sized,
    F: FnMut(TraceEvent),
{
    let n = tracker.n();
    let mut arcs = Vec::with_capacity(n);
    for (step, arc) in edges.iter().enumerate() {
        if tracker.accepted() == n - 1 {
            break;
        }
        let verdict = tracker.try_commit(arc);
        observe(TraceEvent {
            step,
            arc: *arc,
            verdict,
        });
        if verdict.is_accepted() {
            arcs.push((arc.from, arc.to));
        }
    }
    if tracker.accepted() != n - 1 {
        return Err(Error::State(format!(
            "arc stream exhausted after {} of {} commits",
            tracker.accepted(),
            n - 1
        )));
    }
    arcs.push(tracker.close_tour()?);
    Ok(arcs)
}

/// Runs the arc-greedy loop with a freshly built tracker of `kind`.
pub fn greedy_cycle<F: FnMut(TraceEvent)>(
    n: usize,
    mode: Mode,
    kind: TrackerKind,
    options: TrackerOptions,
    edges: &[Arc],
    observe: F,
) -> Result<Vec<(NodeId, NodeId)>> {
    // Static dispatch keeps the timed loop free of virtual calls.
    match kind {
        TrackerKind::Mf => grow_path(&mut MultipleFragment::new(n, mode), edges, observe),
        TrackerKind::El => grow_path(&mut ExhaustiveLoop::new(n, mode), edges, observe),
        TrackerKind::Gt => grow_path(
            &mut GreedyTracker::new(n, mode, options.row_col_delete),
            edges,
            observe,
        ),
    }
}

/// Arc-greedy (multiple fragment) construction under the given tracker.
pub fn arc_greedy(inst: &Instance, mode: Mode, kind: TrackerKind) -> Result<Tour> {
    arc_greedy_with(inst, mode, kind, TrackerOptions::default(), |_| {})
}

pub fn arc_greedy_with<F: FnMut(TraceEvent)>(
    inst: &Instance,
    mode: Mode,
    kind: TrackerKind,
    options: TrackerOptions,
    observe: F,
) -> Result<Tour> {
    let edges = build_sorted_edges(inst, mode)?;
    let arcs = greedy_cycle(inst.n(), mode, kind, options, &edges, observe)?;
    let order = cycle_order(inst.n(), mode, &arcs)?;
    Tour::new(
        inst,
        order,
        mode,
        Provenance {
            heuristic: Heuristic::ArcGreedy,
            tracker: Some(kind),
            parameters: (!options.row_col_delete && kind == TrackerKind::Gt)
                .then(|| "row_col_delete=false".to_string()),
        },
    )
}

fn check_start(inst: &Instance, start: NodeId) -> Result<()> {
    if start >= inst.n() {
        return Err(Error::Argument(format!(
            "start node {} outside 1..={}",
            start + 1,
            inst.n()
        )));
    }
    Ok(())
}

/// Cheapest unvisited node reachable from `from`, ties to the smaller id.
fn nearest_unvisited(inst: &Instance, from: NodeId, visited: &[bool]) -> Option<(NodeId, i64)> {
    let row = inst.row(from);
    let mut best: Option<(NodeId, i64)> = None;
    for (v, &w) in row.iter().enumerate() {
        if !visited[v] && best.is_none_or(|(_, bw)| w < bw) {
            best = Some((v, w));
        }
    }
    best
}

/// Nearest Neighbor: grow one fragment from `start`, always to the closest
/// unvisited node.
pub fn nearest_neighbor(inst: &Instance, start: NodeId) -> Result<Tour> {
    check_start(inst, start)?;
    let n = inst.n();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut current = start;
    visited[start] = true;
    order.push(start);
    while order.len() < n {
        let (next, _) = nearest_unvisited(inst, current, &visited).expect("unvisited node remains");
        visited[next] = true;
        order.push(next);
        current = next;
    }
    Tour::new(
        inst,
        order,
        Mode::default_for(inst),
        Provenance {
            heuristic: Heuristic::NearestNeighbor,
            tracker: None,
            parameters: Some(format!("start={}", start + 1)),
        },
    )
}

/// Double-Ended Nearest Neighbor: the fragment grows at whichever end has
/// the cheaper nearest unvisited node. Ties go to the head (the end plain
/// NN would extend), then to the smaller node id.
pub fn double_ended_nn(inst: &Instance, start: NodeId) -> Result<Tour> {
    Mode::NonDirectional.check(inst)?;
    check_start(inst, start)?;
    let n = inst.n();
    let mut visited = vec![false; n];
    let mut path = VecDeque::with_capacity(n);
    visited[start] = true;
    path.push_back(start);
    while path.len() < n {
        let head = *path.back().expect("path is never empty");
        let tail = *path.front().expect("path is never empty");
        let (hv, hw) = nearest_unvisited(inst, head, &visited).expect("unvisited node remains");
        let (tv, tw) = nearest_unvisited(inst, tail, &visited).expect("unvisited node remains");
        if tw < hw {
            visited[tv] = true;
            path.push_front(tv);
        } else {
            visited[hv] = true;
            path.push_back(hv);
        }
    }
    Tour::new(
        inst,
        path.into_iter().collect(),
        Mode::NonDirectional,
        Provenance {
            heuristic: Heuristic::DoubleEndedNn,
            tracker: None,
            parameters: Some(format!("start={}", start + 1)),
        },
    )
}

/// A priority list of all nodes for [`ordered_greedy`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeOrder(Vec<NodeId>);

impl NodeOrder {
    pub fn new(order: Vec<NodeId>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Argument(format!(
                    "node order is not a permutation of 1..={n}"
                )));
            }
        }
        Ok(NodeOrder(order))
    }

    pub fn identity(n: usize) -> Self {
        NodeOrder((0..n).collect())
    }

    /// Nodes by ascending sum of their outgoing weights, ties by id.
    pub fn distance_sum(inst: &Instance) -> Self {
        let mut order: Vec<NodeId> = (0..inst.n()).collect();
        order.sort_by_key(|&v| (inst.row(v).iter().sum::<i64>(), v));
        NodeOrder(order)
    }

    pub fn random(n: usize, seed: u64) -> Self {
        let mut order: Vec<NodeId> = (0..n).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        NodeOrder(order)
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// How to obtain a [`NodeOrder`] for an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderSpec {
    Identity,
    DistanceSum,
    Random(u64),
    /// Whitespace-separated 1-based node numbers.
    File(PathBuf),
}

impl OrderSpec {
    pub fn resolve(&self, inst: &Instance) -> Result<NodeOrder> {
        let order = match self {
            OrderSpec::Identity => NodeOrder::identity(inst.n()),
            OrderSpec::DistanceSum => NodeOrder::distance_sum(inst),
            OrderSpec::Random(seed) => NodeOrder::random(inst.n(), *seed),
            OrderSpec::File(path) => {
                let text = std::fs::read_to_string(path)?;
                let nodes = text
                    .split_whitespace()
                    .map(|t| match t.parse::<usize>() {
                        Ok(v) if v >= 1 => Ok(v - 1),
                        _ => Err(Error::Argument(format!("bad node `{t}` in order file"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                NodeOrder::new(nodes)?
            }
        };
        if order.len() != inst.n() {
            return Err(Error::Argument(format!(
                "order has {} nodes, instance has {}",
                order.len(),
                inst.n()
            )));
        }
        Ok(order)
    }
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderSpec::Identity => f.write_str("identity"),
            OrderSpec::DistanceSum => f.write_str("distance-sum"),
            OrderSpec::Random(seed) => write!(f, "random:{seed}"),
            OrderSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for OrderSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(OrderSpec::Identity),
            "distance-sum" | "distance_sum" => Ok(OrderSpec::DistanceSum),
            _ => {
                if let Some(seed) = s.strip_prefix("random:") {
                    seed.parse()
                        .map(OrderSpec::Random)
                        .map_err(|_| Error::Argument(format!("bad random seed `{seed}`")))
                } else if let Some(path) = s.strip_prefix("file:") {
                    Ok(OrderSpec::File(PathBuf::from(path)))
                } else {
                    Err(Error::Argument(format!("unknown order spec `{s}`")))
                }
            }
        }
    }
}

/// Ordered-Greedy with the greedy tracker.
pub fn ordered_greedy(inst: &Instance, mode: Mode, order: &NodeOrder) -> Result<Tour> {
    ordered_greedy_with(
        inst,
        mode,
        order,
        TrackerKind::Gt,
        TrackerOptions::default(),
    )
}

/// Ordered-Greedy: each of the first `n - 1` listed nodes in turn takes its
/// cheapest legal arc (leaving it when directional, incident to it
/// otherwise; ties to the smaller partner id).
///
/// Directional runs always complete. A non-directional node that already has
/// degree two when its turn comes has no legal arc, which is reported as
/// [`Error::Infeasible`].
pub fn ordered_greedy_with(
    inst: &Instance,
    mode: Mode,
    order: &NodeOrder,
    kind: TrackerKind,
    options: TrackerOptions,
) -> Result<Tour> {
    mode.check(inst)?;
    let n = inst.n();
    if order.len() != n {
        return Err(Error::Argument(format!(
            "order has {} nodes, instance has {n}",
            order.len()
        )));
    }
    let mut tracker = kind.build(n, mode, options);
    let mut arcs = Vec::with_capacity(n);

    // The last node in the list makes no choice; the closing arc covers it.
    for &v in &order.as_slice()[..n - 1] {
        let row = inst.row(v);
        let mut best: Option<(NodeId, i64)> = None;
        for (u, &w) in row.iter().enumerate() {
            if u != v && best.is_none_or(|(_, bw)| w < bw) && tracker.check(v, u).is_accepted() {
                best = Some((u, w));
            }
        }
        let Some((u, _)) = best else {
            return Err(Error::Infeasible {
                committed: tracker.accepted(),
                detail: format!("no legal arc for node {}", v + 1),
                order: order.as_slice().iter().map(|v| v + 1).collect(),
            });
        };
        tracker.commit(v, u);
        arcs.push((v, u));
    }
    arcs.push(tracker.close_tour()?);

    let order_nodes = cycle_order(n, mode, &arcs)?;
    Tour::new(
        inst,
        order_nodes,
        mode,
        Provenance {
            heuristic: Heuristic::OrderedGreedy,
            tracker: Some(kind),
            parameters: Some(format!(
                "order={}",
                order
                    .as_slice()
                    .iter()
                    .map(|v| (v + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )),
        },
    )
}
