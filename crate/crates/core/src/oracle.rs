//! Ground truth for tests and the `verify`/`oracle` subcommands.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::edges::{build_sorted_edges, Arc, Mode};
use crate::error::{Error, Result};
use crate::heuristics::{
    arc_greedy, double_ended_nn, grow_path, nearest_neighbor, ordered_greedy, NodeOrder,
};
use crate::tour::{cycle_order, Heuristic, Provenance, Tour};
use crate::trackers::{Tracker, TrackerKind, TrackerOptions, Verdict};
use crate::tsplib::{Instance, Kind, NodeId, SourceFormat};

/// Largest instance [`brute_force_optimal`] will enumerate.
pub const BRUTE_FORCE_CAP: usize = 10;

/// Exact optimum by depth-first enumeration with node 0 fixed first.
///
/// Among optimal tours the lexicographically smallest order is returned, so
/// symmetric results are already in canonical orientation.
pub fn brute_force_optimal(inst: &Instance) -> Result<Tour> {
    let n = inst.n();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }

    struct Search<'a> {
        inst: &'a Instance,
        path: Vec<NodeId>,
        used: Vec<bool>,
        best_cost: i64,
        best: Vec<NodeId>,
    }

    impl Search<'_> {
        fn dfs(&mut self, cost: i64) {
            let n = self.inst.n();
            let last = *self.path.last().expect("node 0 is always placed");
            if self.path.len() == n {
                let total = cost + self.inst.dist(last, 0);
                if total < self.best_cost {
                    self.best_cost = total;
                    self.best.clone_from(&self.path);
                }
                return;
            }
            for v in 1..n {
                if self.used[v] {
                    continue;
                }
                let c = cost + self.inst.dist(last, v);
                // Weights are non-negative, so a partial cost at or above the
                // incumbent can never improve on it.
                if c >= self.best_cost {
                    continue;
                }
                self.used[v] = true;
                self.path.push(v);
                self.dfs(c);
                self.path.pop();
                self.used[v] = false;
            }
        }
    }

    let mut search = Search {
        inst,
        path: vec![0],
        used: vec![false; n],
        best_cost: i64::MAX,
        best: Vec::new(),
    };
    search.used[0] = true;
    search.dfs(0);

    Tour::new(
        inst,
        search.best,
        Mode::default_for(inst),
        Provenance {
            heuristic: Heuristic::BruteForce,
            tracker: None,
            parameters: None,
        },
    )
}

/// First problem found by [`validate_tour`]. Node ids are zero-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    WrongLength { expected: usize, found: usize },
    NodeOutOfRange(NodeId),
    DuplicateNode(NodeId),
    MissingNode(NodeId),
    CostMismatch { recorded: i64, actual: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongLength { expected, found } => {
                write!(f, "tour has {found} nodes, expected {expected}")
            }
            Violation::NodeOutOfRange(v) => write!(f, "node {} out of range", v + 1),
            Violation::DuplicateNode(v) => write!(f, "duplicate node {}", v + 1),
            Violation::MissingNode(v) => write!(f, "missing node {}", v + 1),
            Violation::CostMismatch { recorded, actual } => {
                write!(f, "cost mismatch: recorded {recorded}, actual {actual}")
            }
        }
    }
}

/// Checks that `tour` is a permutation of the instance's nodes and that its
/// recorded cost is right.
pub fn validate_tour(inst: &Instance, tour: &Tour) -> std::result::Result<(), Violation> {
    let n = inst.n();
    let mut seen = vec![false; n];
    for &v in &tour.order {
        if v >= n {
            return Err(Violation::NodeOutOfRange(v));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Violation::DuplicateNode(v));
        }
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(Violation::MissingNode(v));
    }
    if tour.order.len() != n {
        return Err(Violation::WrongLength {
            expected: n,
            found: tour.order.len(),
        });
    }
    let actual = inst.tour_cost(&tour.order).expect("order already checked");
    if actual != tour.cost {
        return Err(Violation::CostMismatch {
            recorded: tour.cost,
            actual,
        });
    }
    Ok(())
}

/// Checks a sequence of committed arcs directly: every prefix must respect
/// the degree bounds and contain no cycle. The error names the first
/// offending arc.
///
/// Uses its own union-find so that it shares nothing with the trackers.
pub fn check_committed_prefixes(
    n: usize,
    mode: Mode,
    arcs: &[(NodeId, NodeId)],
) -> std::result::Result<(), String> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut out = vec![0u32; n];
    let mut inn = vec![0u32; n];
    for (k, &(a, b)) in arcs.iter().enumerate() {
        if a >= n || b >= n || a == b {
            return Err(format!("arc {k} ({a}, {b}) is not a proper arc"));
        }
        out[a] += 1;
        inn[b] += 1;
        let degree_ok = match mode {
            Mode::Directional => out[a] <= 1 && inn[b] <= 1,
            Mode::NonDirectional => out[a] + inn[a] <= 2 && out[b] + inn[b] <= 2,
        };
        if !degree_ok {
            return Err(format!("arc {k} ({a}, {b}) exceeds a degree bound"));
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return Err(format!(
                "arc {k} ({a}, {b}) closes a cycle on {} arcs",
                k + 1
            ));
        }
        parent[ra] = rb;
    }
    Ok(())
}

/// The arcs committed by an arc-greedy run, in commit order, excluding the
/// closing arc.
pub fn committed_arcs(
    inst: &Instance,
    mode: Mode,
    kind: TrackerKind,
) -> Result<Vec<(NodeId, NodeId)>> {
    let mut arcs = Vec::new();
    crate::heuristics::arc_greedy_with(inst, mode, kind, TrackerOptions::default(), |e| {
        if e.verdict.is_accepted() {
            arcs.push((e.arc.from, e.arc.to));
        }
    })?;
    Ok(arcs)
}

/// Symmetric instance on integer points drawn uniformly from `[0, 1000]^2`,
/// `EUC_2D` rounding.
pub fn random_euclidean(n: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            (
                rng.gen_range(0..=1000) as f64,
                rng.gen_range(0..=1000) as f64,
            )
        })
        .collect();
    Instance::euclidean(format!("euc{n}-s{seed}"), &points).expect("generated points are valid")
}

/// Asymmetric instance with independent uniform weights in `[1, 1000]`.
pub fn random_asymmetric(n: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = (0..n * n).map(|_| rng.gen_range(1..=1000)).collect();
    Instance::from_matrix(
        format!("asym{n}-s{seed}"),
        Kind::Asymmetric,
        SourceFormat::ExplicitFull,
        n,
        weights,
    )
    .expect("generated matrix is valid")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrackerVerdict {
    pub tracker: String,
    /// `None` when this tracker had already finished.
    pub verdict: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divergence {
    /// Position in the sorted arc stream.
    pub step: usize,
    pub arc: Arc,
    pub verdicts: Vec<TrackerVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrackerCost {
    pub tracker: String,
    pub cost: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub instance: String,
    pub mode: Mode,
    pub tours_identical: bool,
    pub costs: Vec<TrackerCost>,
    pub first_divergence: Option<Divergence>,
}

impl VerificationReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "instance: {}\nmode: {}\ntours_identical: {}\n",
            self.instance, self.mode, self.tours_identical
        );
        for c in &self.costs {
            match (&c.cost, &c.error) {
                (Some(cost), _) => out.push_str(&format!("cost {}: {cost}\n", c.tracker)),
                (None, Some(e)) => out.push_str(&format!("cost {}: failed ({e})\n", c.tracker)),
                (None, None) => out.push_str(&format!("cost {}: none\n", c.tracker)),
            }
        }
        match &self.first_divergence {
            None => out.push_str("first_divergence: none\n"),
            Some(d) => {
                let verdicts: Vec<String> = d
                    .verdicts
                    .iter()
                    .map(|v| format!("{}={}", v.tracker, v.verdict.as_deref().unwrap_or("done")))
                    .collect();
                out.push_str(&format!(
                    "first_divergence: step {} arc {}->{} (weight {}): {}\n",
                    d.step,
                    d.arc.from + 1,
                    d.arc.to + 1,
                    d.arc.weight,
                    verdicts.join(" ")
                ));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("reports always serialize")
    }
}

/// Runs arc-greedy under MF, EL and GT and compares tours and verdicts.
pub fn verify_equivalence(inst: &Instance, mode: Mode) -> Result<VerificationReport> {
    verify_equivalence_with(inst, mode, TrackerOptions::default())
}

pub fn verify_equivalence_with(
    inst: &Instance,
    mode: Mode,
    options: TrackerOptions,
) -> Result<VerificationReport> {
    let contenders = TrackerKind::ALL
        .iter()
        .map(|k| (k.to_string(), k.build(inst.n(), mode, options)))
        .collect();
    verify_trackers(inst, mode, contenders)
}

/// Compares arbitrary trackers over the same sorted arc stream.
pub fn verify_trackers(
    inst: &Instance,
    mode: Mode,
    contenders: Vec<(String, Box<dyn Tracker>)>,
) -> Result<VerificationReport> {
    let edges = build_sorted_edges(inst, mode)?;
    let n = inst.n();
    let mut traces: Vec<Vec<Verdict>> = Vec::with_capacity(contenders.len());
    let mut tours: Vec<Result<Vec<NodeId>>> = Vec::with_capacity(contenders.len());
    let mut names = Vec::with_capacity(contenders.len());

    for (name, mut tracker) in contenders {
        let mut trace = Vec::new();
        let tour = grow_path(&mut tracker, &edges, |e| trace.push(e.verdict))
            .and_then(|arcs| cycle_order(n, mode, &arcs));
        names.push(name);
        traces.push(trace);
        tours.push(tour);
    }

    let longest = traces.iter().map(Vec::len).max().unwrap_or(0);
    let first_divergence = (0..longest)
        .find(|&step| {
            let first = traces[0].get(step).map(|v| v.is_accepted());
            traces[1..]
                .iter()
                .any(|t| t.get(step).map(|v| v.is_accepted()) != first)
        })
        .map(|step| Divergence {
            step,
            arc: edges[step],
            verdicts: names
                .iter()
                .zip(&traces)
                .map(|(name, t)| TrackerVerdict {
                    tracker: name.clone(),
                    verdict: t.get(step).map(|v| v.to_string()),
                })
                .collect(),
        });

    let costs = names
        .iter()
        .zip(&tours)
        .map(|(name, tour)| match tour {
            Ok(order) => TrackerCost {
                tracker: name.clone(),
                cost: Some(
                    inst.tour_cost(order)
                        .expect("cycle_order yields full tours"),
                ),
                error: None,
            },
            Err(e) => TrackerCost {
                tracker: name.clone(),
                cost: None,
                error: Some(e.to_string()),
            },
        })
        .collect();

    let same_tours = match tours.first() {
        Some(Ok(first)) => tours[1..].iter().all(|t| matches!(t, Ok(o) if o == first)),
        _ => false,
    };

    Ok(VerificationReport {
        instance: inst.name().to_string(),
        mode,
        tours_identical: same_tours && first_divergence.is_none(),
        costs,
        first_divergence,
    })
}

/// Outcome of [`random_sweep`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub instances: usize,
    pub tours_checked: usize,
    /// Ordered-greedy runs that stopped with a declared infeasibility.
    pub infeasible: usize,
    pub violations: Vec<String>,
}

/// Every heuristic tour the oracle sweep checks on one instance: arc-greedy
/// under each tracker and mode, NN and DENN from every start, and
/// ordered-greedy with the identity, distance-sum and ten seeded random
/// orders. Ordered-greedy infeasibility is returned as `Err`.
pub fn all_heuristic_tours(inst: &Instance) -> Vec<(String, Result<Tour>)> {
    let n = inst.n();
    let modes: Vec<Mode> = Mode::ALL
        .into_iter()
        .filter(|m| m.check(inst).is_ok())
        .collect();
    let mut out = Vec::new();
    for &mode in &modes {
        for kind in TrackerKind::ALL {
            out.push((
                format!("arc_greedy/{mode}/{kind}"),
                arc_greedy(inst, mode, kind),
            ));
        }
        let mut orders = vec![
            ("identity".to_string(), NodeOrder::identity(n)),
            ("distance-sum".to_string(), NodeOrder::distance_sum(inst)),
        ];
        orders.extend((0..10).map(|s| (format!("random:{s}"), NodeOrder::random(n, s))));
        for (label, order) in orders {
            out.push((
                format!("og/{mode}/{label}"),
                ordered_greedy(inst, mode, &order),
            ));
        }
    }
    for start in 0..n {
        out.push((
            format!("nn/start={}", start + 1),
            nearest_neighbor(inst, start),
        ));
        if inst.is_symmetric() {
            out.push((
                format!("denn/start={}", start + 1),
                double_ended_nn(inst, start),
            ));
        }
    }
    out
}

/// Brute-force comparison on random instances of size `n` for seeds
/// `0..seeds`, one symmetric and one asymmetric instance per seed.
pub fn random_sweep(n: usize, seeds: u64) -> Result<SweepSummary> {
    if n > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    if n < 3 {
        return Err(Error::Argument(format!("oracle needs n >= 3, got {n}")));
    }
    let mut summary = SweepSummary::default();
    for seed in 0..seeds {
        for inst in [random_euclidean(n, seed), random_asymmetric(n, seed)] {
            summary.instances += 1;
            let best = brute_force_optimal(&inst)?;
            for (label, result) in all_heuristic_tours(&inst) {
                let tour = match result {
                    Ok(t) => t,
                    Err(Error::Infeasible { .. }) => {
                        summary.infeasible += 1;
                        continue;
                    }
                    Err(e) => {
                        summary
                            .violations
                            .push(format!("{} seed {seed} {label}: {e}", inst.name()));
                        continue;
                    }
                };
                summary.tours_checked += 1;
                if let Err(v) = validate_tour(&inst, &tour) {
                    summary
                        .violations
                        .push(format!("{} seed {seed} {label}: {v}", inst.name()));
                } else if tour.cost < best.cost {
                    summary.violations.push(format!(
                        "{} seed {seed} {label}: cost {} beats optimum {}",
                        inst.name(),
                        tour.cost,
                        best.cost
                    ));
                }
            }
        }
    }
    Ok(summary)
}
