//! Candidate arc enumeration for the arc-greedy shell.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tsplib::{Instance, NodeId};

/// Whether arcs carry an orientation.
///
/// Directional construction bounds in- and out-degree by one each and works
/// on any instance. Non-directional construction bounds total degree by two
/// and needs a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Directional,
    NonDirectional,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Directional, Mode::NonDirectional];

    pub fn is_directional(self) -> bool {
        self == Mode::Directional
    }

    /// Fails with [`Error::Mode`] when `inst` cannot be built in this mode.
    pub fn check(self, inst: &Instance) -> Result<()> {
        if self == Mode::NonDirectional && !inst.is_symmetric() {
            return Err(Error::Mode {
                mode: self,
                instance: inst.name().to_string(),
            });
        }
        Ok(())
    }

    /// The natural mode for an instance: non-directional when symmetric.
    pub fn default_for(inst: &Instance) -> Mode {
        if inst.is_symmetric() {
            Mode::NonDirectional
        } else {
            Mode::Directional
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Directional => "directional",
            Mode::NonDirectional => "non_directional",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dir" | "directional" => Ok(Mode::Directional),
            "nondir" | "non_directional" | "non-directional" => Ok(Mode::NonDirectional),
            other => Err(Error::Argument(format!("unknown mode `{other}`"))),
        }
    }
}

/// A candidate arc `from -> to`. In non-directional mode the orientation is
/// only a naming convention and `from < to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub from: NodeId,
    pub to: NodeId,
    pub weight: i64,
}

impl Arc {
    pub fn new(from: NodeId, to: NodeId, weight: i64) -> Self {
        debug_assert_ne!(from, to, "self-loops are never candidates");
        Arc { from, to, weight }
    }

    fn sort_key(&self) -> (i64, NodeId, NodeId) {
        (self.weight, self.from, self.to)
    }
}

/// Every candidate arc of `inst` for `mode`, sorted by `(weight, from, to)`.
///
/// Directional yields all `n^2 - n` ordered pairs; non-directional yields
/// one arc per unordered pair with `from < to`.
pub fn build_sorted_edges(inst: &Instance, mode: Mode) -> Result<Vec<Arc>> {
    mode.check(inst)?;
    let n = inst.n();
    let mut arcs = match mode {
        Mode::Directional => {
            let mut arcs = Vec::with_capacity(n * n - n);
            for i in 0..n {
                let row = inst.row(i);
                arcs.extend((0..n).filter(|&j| j != i).map(|j| Arc::new(i, j, row[j])));
            }
            arcs
        }
        Mode::NonDirectional => {
            let mut arcs = Vec::with_capacity(n * (n - 1) / 2);
            for i in 0..n {
                let row = inst.row(i);
                arcs.extend(((i + 1)..n).map(|j| Arc::new(i, j, row[j])));
            }
            arcs
        }
    };
    // Keys are unique per arc, so an unstable sort is still deterministic.
    arcs.sort_unstable_by_key(Arc::sort_key);
    Ok(arcs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tsplib::{Kind, SourceFormat};

    fn triangle() -> Instance {
        Instance::from_matrix(
            "tri",
            Kind::Symmetric,
            SourceFormat::ExplicitFull,
            3,
            vec![0, 1, 2, 1, 0, 3, 2, 3, 0],
        )
        .unwrap()
    }

    fn uniform(n: usize, kind: Kind) -> Instance {
        let w = (0..n * n).map(|k| (k % 7) as i64 + 1).collect::<Vec<_>>();
        let w = if kind == Kind::Symmetric {
            let mut s = w.clone();
            for i in 0..n {
                for j in 0..i {
                    s[i * n + j] = w[j * n + i];
                }
            }
            s
        } else {
            w
        };
        Instance::from_matrix("u", kind, SourceFormat::ExplicitFull, n, w).unwrap()
    }

    #[test]
    fn counts_for_five_nodes() {
        let inst = uniform(5, Kind::Symmetric);
        assert_eq!(
            build_sorted_edges(&inst, Mode::Directional).unwrap().len(),
            20
        );
        assert_eq!(
            build_sorted_edges(&inst, Mode::NonDirectional)
                .unwrap()
                .len(),
            10
        );
    }

    #[test]
    fn triangle_order() {
        let arcs = build_sorted_edges(&triangle(), Mode::NonDirectional).unwrap();
        assert_eq!(
            arcs,
            vec![Arc::new(0, 1, 1), Arc::new(0, 2, 2), Arc::new(1, 2, 3)]
        );
    }

    #[test]
    fn ties_break_on_endpoints() {
        let inst = uniform(6, Kind::Asymmetric);
        let arcs = build_sorted_edges(&inst, Mode::Directional).unwrap();
        for w in arcs.windows(2) {
            assert!(w[0].sort_key() < w[1].sort_key());
        }
    }

    #[test]
    fn non_directional_rejected_on_asymmetric() {
        let inst = uniform(4, Kind::Asymmetric);
        assert!(matches!(
            build_sorted_edges(&inst, Mode::NonDirectional),
            Err(Error::Mode { .. })
        ));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("dir".parse::<Mode>().unwrap(), Mode::Directional);
        assert_eq!("nondir".parse::<Mode>().unwrap(), Mode::NonDirectional);
        assert!("sideways".parse::<Mode>().is_err());
    }
}
