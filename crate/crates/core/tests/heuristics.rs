use greedy_tsp::heuristics::ordered_greedy_with;
use greedy_tsp::oracle::{brute_force_optimal, random_asymmetric, random_euclidean, validate_tour};
use greedy_tsp::trackers::TrackerOptions;
use greedy_tsp::{
    arc_greedy, double_ended_nn, nearest_neighbor, ordered_greedy, Error, Instance, Kind, Mode,
    NodeOrder, SourceFormat, TrackerKind,
};

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;
const E: usize = 4;

/// Five nodes where D's nearest neighbour is E and E's nearest legal
/// partner after that is B.
fn og_fixture() -> Instance {
    let pairs = [
        (D, E, 1),
        (E, B, 2),
        (B, C, 3),
        (C, A, 2),
        (A, D, 3),
        (A, B, 9),
        (A, E, 7),
        (B, D, 8),
        (C, D, 6),
        (C, E, 5),
    ];
    let mut w = vec![0; 25];
    for (i, j, d) in pairs {
        w[i * 5 + j] = d;
        w[j * 5 + i] = d;
    }
    Instance::from_matrix("og5", Kind::Symmetric, SourceFormat::ExplicitFull, 5, w).unwrap()
}

#[test]
fn og_worked_example() {
    let inst = og_fixture();
    let order = NodeOrder::new(vec![D, E, C, B, A]).unwrap();

    let dir = ordered_greedy(&inst, Mode::Directional, &order).unwrap();
    assert_eq!(dir.order, vec![A, D, E, B, C]);
    assert_eq!(dir.cost, 11);

    let nondir = ordered_greedy(&inst, Mode::NonDirectional, &order).unwrap();
    // Same cycle, canonical orientation from A towards its smaller neighbour.
    assert_eq!(nondir.order, vec![A, C, B, E, D]);
    assert_eq!(nondir.cost, 11);

    let best = brute_force_optimal(&inst).unwrap();
    assert_eq!(best.cost, 11);
    assert_eq!(best.order, vec![A, C, B, E, D]);
}

#[test]
fn og_with_other_trackers_matches_gt() {
    let inst = og_fixture();
    let order = NodeOrder::new(vec![D, E, C, B, A]).unwrap();
    for mode in Mode::ALL {
        let gt = ordered_greedy(&inst, mode, &order).unwrap();
        for kind in [TrackerKind::Mf, TrackerKind::El] {
            let t =
                ordered_greedy_with(&inst, mode, &order, kind, TrackerOptions::default()).unwrap();
            assert_eq!(t.order, gt.order);
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn og_every_order_gives_a_tour_or_declared_infeasibility() {
    let orders = permutations(4);
    assert_eq!(orders.len(), 24);
    let mut infeasible = 0;
    for seed in 0..20 {
        for inst in [random_euclidean(4, seed), random_asymmetric(4, seed)] {
            let best = brute_force_optimal(&inst).unwrap().cost;
            for mode in Mode::ALL.into_iter().filter(|m| m.check(&inst).is_ok()) {
                for order in &orders {
                    let order = NodeOrder::new(order.clone()).unwrap();
                    match ordered_greedy(&inst, mode, &order) {
                        Ok(t) => {
                            assert_eq!(validate_tour(&inst, &t), Ok(()));
                            assert!(t.cost >= best);
                        }
                        Err(Error::Infeasible { .. }) => {
                            assert_eq!(mode, Mode::NonDirectional, "directional never stalls");
                            infeasible += 1;
                        }
                        Err(e) => panic!("unexpected error {e}"),
                    }
                }
            }
        }
    }
    assert!(infeasible > 0);
}

#[test]
fn og_infeasibility_names_the_stuck_node() {
    // Star around node 0: orders 1, 2 both take node 0, which is then full
    // when its own turn comes.
    let mut w = vec![50; 16];
    for v in 1..4 {
        w[v] = 1;
        w[v * 4] = 1;
    }
    let inst =
        Instance::from_matrix("star", Kind::Symmetric, SourceFormat::ExplicitFull, 4, w).unwrap();
    let order = NodeOrder::new(vec![1, 2, 0, 3]).unwrap();
    match ordered_greedy(&inst, Mode::NonDirectional, &order) {
        Err(Error::Infeasible {
            committed,
            detail,
            order,
        }) => {
            assert_eq!(committed, 2);
            assert!(detail.contains("node 1"), "{detail}");
            assert_eq!(order, vec![2, 3, 1, 4]);
        }
        other => panic!("expected infeasibility, got {other:?}"),
    }
}

#[test]
fn denn_sweeps_a_line_from_the_middle() {
    let xs = [0.0, 4.0, 5.0, 7.0, 12.0];
    let points: Vec<(f64, f64)> = xs.iter().map(|&x| (x, 0.0)).collect();
    let inst = Instance::euclidean("line", &points).unwrap();
    let best = brute_force_optimal(&inst).unwrap();
    assert_eq!(best.cost, 24);

    let denn = double_ended_nn(&inst, 2).unwrap();
    assert_eq!(denn.cost, 24);
    assert_eq!(denn.order, vec![4, 3, 2, 1, 0]);

    // Plain NN from the same node overshoots.
    assert_eq!(nearest_neighbor(&inst, 2).unwrap().cost, 26);
}

#[test]
fn nn_visits_closest_first() {
    let inst = og_fixture();
    let t = nearest_neighbor(&inst, D).unwrap();
    assert_eq!(t.order, vec![D, E, B, C, A]);
    assert_eq!(t.cost, 1 + 2 + 3 + 2 + 3);
}

#[test]
fn heuristics_are_deterministic() {
    let inst = random_euclidean(40, 9);
    for mode in Mode::ALL {
        for kind in TrackerKind::ALL {
            assert_eq!(
                arc_greedy(&inst, mode, kind).unwrap(),
                arc_greedy(&inst, mode, kind).unwrap()
            );
        }
        let order = NodeOrder::random(40, 1);
        assert_eq!(
            ordered_greedy(&inst, Mode::Directional, &order).unwrap(),
            ordered_greedy(&inst, Mode::Directional, &order).unwrap()
        );
    }
    assert_eq!(
        double_ended_nn(&inst, 5).unwrap(),
        double_ended_nn(&inst, 5).unwrap()
    );
}

#[test]
fn every_heuristic_respects_the_optimum_on_small_instances() {
    for seed in 0..30 {
        for inst in [random_euclidean(7, seed), random_asymmetric(7, seed)] {
            let best = brute_force_optimal(&inst).unwrap();
            assert_eq!(best.order[0], 0);
            for (label, result) in greedy_tsp::oracle::all_heuristic_tours(&inst) {
                match result {
                    Ok(t) => {
                        assert_eq!(validate_tour(&inst, &t), Ok(()), "{label}");
                        assert!(t.cost >= best.cost, "seed {seed} {label}");
                    }
                    Err(Error::Infeasible { .. }) => {}
                    Err(e) => panic!("seed {seed} {label}: {e}"),
                }
            }
        }
    }
}
