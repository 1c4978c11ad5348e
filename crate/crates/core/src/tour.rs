use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::edges::Mode;
use crate::error::{Error, Result};
use crate::trackers::{TrackerKind, NONE};
use crate::tsplib::{Instance, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Heuristic {
    ArcGreedy,
    NearestNeighbor,
    DoubleEndedNn,
    OrderedGreedy,
    BruteForce,
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Heuristic::ArcGreedy => "arc_greedy",
            Heuristic::NearestNeighbor => "nn",
            Heuristic::DoubleEndedNn => "denn",
            Heuristic::OrderedGreedy => "og",
            Heuristic::BruteForce => "brute_force",
        })
    }
}

impl FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arc-greedy" | "arc_greedy" | "greedy" => Ok(Heuristic::ArcGreedy),
            "nn" => Ok(Heuristic::NearestNeighbor),
            "denn" => Ok(Heuristic::DoubleEndedNn),
            "og" | "ordered-greedy" => Ok(Heuristic::OrderedGreedy),
            "brute-force" | "brute_force" => Ok(Heuristic::BruteForce),
            other => Err(Error::Argument(format!("unknown heuristic `{other}`"))),
        }
    }
}

/// How a tour was built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub heuristic: Heuristic,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tracker: Option<TrackerKind>,
    /// Free-form parameters such as the start node or order spec.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameters: Option<String>,
}

/// A closed tour: `order` visits every node once, then returns to
/// `order[0]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tour {
    pub order: Vec<NodeId>,
    pub cost: i64,
    pub mode: Mode,
    pub provenance: Provenance,
}

impl Tour {
    pub fn new(
        inst: &Instance,
        order: Vec<NodeId>,
        mode: Mode,
        provenance: Provenance,
    ) -> Result<Self> {
        let cost = inst.tour_cost(&order)?;
        Ok(Tour {
            order,
            cost,
            mode,
            provenance,
        })
    }

    /// Plain-text rendering with 1-based node numbers.
    pub fn to_text(&self, instance_name: &str) -> String {
        let nodes: Vec<String> = self.order.iter().map(|v| (v + 1).to_string()).collect();
        format!(
            "name: {instance_name}\ncost: {}\ntour: {}\n",
            self.cost,
            nodes.join(" ")
        )
    }

    /// Structured rendering with 1-based node numbers.
    pub fn to_json(&self, instance_name: &str) -> serde_json::Value {
        serde_json::json!({
            "name": instance_name,
            "cost": self.cost,
            "mode": self.mode,
            "heuristic": self.provenance.heuristic,
            "tracker": self.provenance.tracker,
            "parameters": self.provenance.parameters,
            "tour": self.order.iter().map(|v| v + 1).collect::<Vec<_>>(),
        })
    }
}

/// Orders the nodes of a Hamiltonian cycle given as `n` arcs.
///
/// Directional cycles are followed along their arcs starting from node 0.
/// Non-directional cycles start at node 0 and step first to its smaller
/// neighbour, which makes the sequence canonical.
pub(crate) fn cycle_order(n: usize, mode: Mode, arcs: &[(NodeId, NodeId)]) -> Result<Vec<NodeId>> {
    if arcs.len() != n {
        return Err(Error::InvalidTour(format!(
            "{} arcs cannot form a cycle on {n} nodes",
            arcs.len()
        )));
    }
    let bad = || Error::InvalidTour("arcs do not form a Hamiltonian cycle".into());
    let mut order = Vec::with_capacity(n);
    match mode {
        Mode::Directional => {
            let mut succ = vec![NONE; n];
            for &(a, b) in arcs {
                if succ[a] != NONE {
                    return Err(bad());
                }
                succ[a] = b;
            }
            let mut v = 0;
            for _ in 0..n {
                order.push(v);
                v = succ[v];
                if v == NONE {
                    return Err(bad());
                }
            }
            if v != 0 {
                return Err(bad());
            }
        }
        Mode::NonDirectional => {
            let mut adj = vec![[NONE; 2]; n];
            for &(a, b) in arcs {
                for (u, w) in [(a, b), (b, a)] {
                    let slot = adj[u].iter().position(|&s| s == NONE).ok_or_else(bad)?;
                    adj[u][slot] = w;
                }
            }
            let (mut prev, mut v) = (0, adj[0][0].min(adj[0][1]));
            if v == NONE {
                return Err(bad());
            }
            order.push(0);
            while v != 0 {
                if order.len() == n {
                    return Err(bad());
                }
                order.push(v);
                let next = if adj[v][0] == prev {
                    adj[v][1]
                } else {
                    adj[v][0]
                };
                prev = v;
                v = next;
                if v == NONE {
                    return Err(bad());
                }
            }
        }
    }
    let mut seen = vec![false; n];
    for &v in &order {
        if std::mem::replace(&mut seen[v], true) {
            return Err(bad());
        }
    }
    if order.len() != n {
        return Err(bad());
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directional_cycle_follows_arcs() {
        let arcs = [(2, 0), (0, 3), (3, 1), (1, 2)];
        assert_eq!(
            cycle_order(4, Mode::Directional, &arcs).unwrap(),
            vec![0, 3, 1, 2]
        );
    }

    #[test]
    fn non_directional_cycle_is_canonical() {
        let arcs = [(0, 3), (1, 3), (1, 2), (0, 2)];
        assert_eq!(
            cycle_order(4, Mode::NonDirectional, &arcs).unwrap(),
            vec![0, 2, 1, 3]
        );
    }

    #[test]
    fn two_subtours_are_rejected() {
        let arcs = [(0, 1), (1, 0), (2, 3), (3, 2)];
        assert!(cycle_order(4, Mode::Directional, &arcs).is_err());
        let arcs = [(0, 1), (1, 2), (2, 0), (3, 3)];
        assert!(cycle_order(4, Mode::NonDirectional, &arcs).is_err());
    }

    #[test]
    fn heuristic_names() {
        assert_eq!(
            "arc-greedy".parse::<Heuristic>().unwrap(),
            Heuristic::ArcGreedy
        );
        assert_eq!("og".parse::<Heuristic>().unwrap(), Heuristic::OrderedGreedy);
        assert!("2opt".parse::<Heuristic>().is_err());
    }
}
