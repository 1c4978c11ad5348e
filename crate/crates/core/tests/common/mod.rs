#![allow(dead_code)]

use std::collections::VecDeque;
use std::path::{Path, PathBuf};

use greedy_tsp::{read_instance, Instance, Mode, NodeId};

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/tsplib")
}

pub fn load(name: &str) -> Instance {
    read_instance(data_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Symmetric instances of the benchmark set.
pub const TABLE_SYMMETRIC: [&str; 14] = [
    "bays29", "gr48", "gr51", "berlin52", "pr76", "kroa100", "gr120", "gr130", "gr195", "ts225",
    "pma343", "pcb442", "dsj1000", "pr1002",
];

/// Asymmetric instances of the benchmark set. The set spells the
/// `rbg` family as `rgb`; both spellings are searched.
pub const TABLE_ASYMMETRIC: [&str; 9] = [
    "br17", "ry48p", "ft53", "ft70", "kro124p", "rgb323", "rgb358", "rgb403", "rgb443",
];

fn search_dirs() -> Vec<PathBuf> {
    let mut dirs = vec![data_dir()];
    if let Some(extra) = std::env::var_os("TSPLIB_DIR") {
        dirs.push(PathBuf::from(extra));
    }
    dirs
}

/// Locates a TSPLIB file by instance name in the bundled data directory or
/// `$TSPLIB_DIR`, ignoring case and an optional `.gz`-free extension.
pub fn find_instance(name: &str) -> Option<PathBuf> {
    let mut candidates = vec![name.to_ascii_lowercase()];
    if let Some(rest) = name.strip_prefix("rgb") {
        candidates.push(format!("rbg{rest}"));
    }
    for dir in search_dirs() {
        let Ok(entries) = std::fs::read_dir(&dir) else {
            continue;
        };
        for entry in entries.flatten() {
            let file = entry.file_name().to_string_lossy().to_ascii_lowercase();
            let Some((stem, ext)) = file.rsplit_once('.') else {
                continue;
            };
            if (ext == "tsp" || ext == "atsp") && candidates.iter().any(|c| c == stem) {
                return Some(entry.path());
            }
        }
    }
    None
}

/// Straightforward arc-greedy used as an independent reference: sort every
/// candidate pair, accept an arc when degrees allow it and a breadth-first
/// search over the committed arcs cannot already reach `from` from `to`.
/// Returns the committed arcs (without the closing arc) and the tour cost.
pub fn reference_greedy(inst: &Instance, mode: Mode) -> (Vec<(NodeId, NodeId)>, i64) {
    let n = inst.n();
    let mut cands: Vec<(i64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let wanted = match mode {
                Mode::Directional => i != j,
                Mode::NonDirectional => i < j,
            };
            if wanted {
                cands.push((inst.dist(i, j), i, j));
            }
        }
    }
    cands.sort();

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut outd = vec![0; n];
    let mut ind = vec![0; n];
    let mut arcs = Vec::new();
    let reachable = |adj: &Vec<Vec<usize>>, s: usize, t: usize| {
        let mut seen = vec![false; n];
        let mut q = VecDeque::from([s]);
        seen[s] = true;
        while let Some(v) = q.pop_front() {
            if v == t {
                return true;
            }
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    q.push_back(u);
                }
            }
        }
        false
    };
    for (_, i, j) in cands {
        if arcs.len() == n - 1 {
            break;
        }
        let degree_ok = match mode {
            Mode::Directional => outd[i] == 0 && ind[j] == 0,
            Mode::NonDirectional => outd[i] + ind[i] < 2 && outd[j] + ind[j] < 2,
        };
        if !degree_ok || reachable(&adj, j, i) {
            continue;
        }
        adj[i].push(j);
        if mode == Mode::NonDirectional {
            adj[j].push(i);
        }
        outd[i] += 1;
        ind[j] += 1;
        arcs.push((i, j));
    }
    assert_eq!(arcs.len(), n - 1, "reference greedy stalled");

    let mut cost: i64 = arcs.iter().map(|&(i, j)| inst.dist(i, j)).sum();
    let ends: Vec<usize> = match mode {
        Mode::Directional => {
            let from = (0..n).find(|&v| outd[v] == 0).unwrap();
            let to = (0..n).find(|&v| ind[v] == 0).unwrap();
            vec![from, to]
        }
        Mode::NonDirectional => (0..n).filter(|&v| outd[v] + ind[v] < 2).collect(),
    };
    cost += inst.dist(ends[0], ends[1]);
    (arcs, cost)
}
