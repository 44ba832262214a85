use isingtsp::ising::Mode;
use isingtsp::oracle::held_karp_cycle;
use isingtsp::orchestrator::{fix_endpoints, merge_tours, solve_subproblem, MacroOptions, SubProblem};
use isingtsp::{
    build_distance_matrix, build_hierarchy, solve_hierarchical, tour_length, BitWidth, EdgeWeightType, Instance, Point,
    SolveConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_points(n: usize, seed: u64, side: f64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Point::new(rng.random_range(0.0..side), rng.random_range(0.0..side)))
        .collect()
}

fn instance(n: usize, seed: u64) -> Instance {
    Instance::new(
        format!("rand{n}"),
        EdgeWeightType::Euc2d,
        random_points(n, seed, 10_000.0),
    )
}

#[test]
fn merge_of_three_clusters_adds_boundary_edges() {
    // three well separated groups of three cities
    let pts: Vec<Point> = [
        (0.0, 0.0),
        (1.0, 0.0),
        (2.0, 0.0),
        (50.0, 0.0),
        (51.0, 1.0),
        (52.0, 0.0),
        (25.0, 40.0),
        (26.0, 41.0),
        (24.0, 42.0),
    ]
    .into_iter()
    .map(Point::from)
    .collect();
    let h = build_hierarchy(&pts, 3).unwrap();
    let level = &h.levels[0];
    assert_eq!(level.len(), 3);
    let order: Vec<usize> = (0..3).collect();
    let ep = fix_endpoints(&order, level, &pts);
    let opts = MacroOptions::new(BitWidth::default(), EdgeWeightType::Euc2d);
    let dm = build_distance_matrix(&pts, EdgeWeightType::Euc2d).unwrap();
    let mut paths = Vec::new();
    let mut intra = 0;
    for (c, &(entry, exit)) in order.iter().zip(&ep) {
        let members = &level[*c].members;
        let sp = SubProblem {
            node_ids: members.clone(),
            points: members.iter().map(|&m| pts[m]).collect(),
            mode: Mode::Path,
            entry: Some(entry),
            exit: Some(exit),
            seed: 0,
        };
        let sol = solve_subproblem(&sp, &opts).unwrap();
        intra += sol.order.windows(2).map(|e| dm.get(e[0], e[1]) as u64).sum::<u64>();
        paths.push(sol.order);
    }
    let merged = merge_tours(&paths, &ep, 9).unwrap();
    let boundary: u64 = (0..3).map(|i| dm.get(ep[i].1, ep[(i + 1) % 3].0) as u64).sum();
    assert_eq!(tour_length(&merged, &dm, true).unwrap(), intra + boundary);
}

#[test]
fn solutions_are_permutations() {
    for (n, m) in [(3, 12), (5, 4), (12, 12), (13, 12), (200, 12), (150, 6)] {
        let inst = instance(n, n as u64);
        let cfg = SolveConfig {
            max_cluster_size: m,
            seed: 4,
            ..SolveConfig::default()
        };
        let sol = solve_hierarchical(&inst, &cfg).unwrap();
        let mut seen = sol.tour.as_slice().to_vec();
        seen.sort_unstable();
        assert_eq!(seen, (0..n).collect::<Vec<_>>(), "n {n} m {m}");
        let dm = build_distance_matrix(&inst.coords, inst.edge_weight_type).unwrap();
        assert_eq!(
            sol.trace.tour_length,
            tour_length(sol.tour.as_slice(), &dm, true).unwrap()
        );
    }
}

#[test]
fn result_does_not_depend_on_thread_count() {
    let inst = instance(300, 9);
    let run = |threads| {
        let cfg = SolveConfig {
            seed: 21,
            max_parallel: threads,
            ..SolveConfig::default()
        };
        solve_hierarchical(&inst, &cfg).unwrap()
    };
    let one = run(1);
    for threads in [2, 5] {
        let other = run(threads);
        assert_eq!(one.tour, other.tour);
        assert_eq!(one.trace.levels, other.trace.levels);
    }
    let reseeded = solve_hierarchical(
        &inst,
        &SolveConfig {
            seed: 22,
            ..SolveConfig::default()
        },
    )
    .unwrap();
    assert_ne!(one.tour, reseeded.tour);
}

#[test]
fn sweep_log_tracks_every_macro() {
    let inst = instance(40, 2);
    let cfg = SolveConfig {
        record_sweeps: true,
        ..SolveConfig::default()
    };
    let sol = solve_hierarchical(&inst, &cfg).unwrap();
    let sweeps: u64 = sol.trace.levels.iter().flat_map(|l| l.sweeps.iter()).sum();
    assert_eq!(sol.sweep_log.len() as u64, sweeps);
    assert!(sol
        .sweep_log
        .iter()
        .all(|r| r.probability > 0.0 && r.probability <= 0.2 + 1e-12));
}

#[test]
fn small_instances_solved_exactly_at_top() {
    // a 4-city instance never reaches a macro
    let inst = instance(4, 1);
    let sol = solve_hierarchical(&inst, &SolveConfig::default()).unwrap();
    let dm = build_distance_matrix(&inst.coords, inst.edge_weight_type).unwrap();
    assert_eq!(sol.trace.tour_length, held_karp_cycle(&dm).unwrap().0);
    assert_eq!(sol.trace.levels[0].order_updates, vec![0]);
}

/// Module-level quality target for an 8-city closed tour. The final macro
/// state does not settle under the argmax-and-swap update, so this is red.
#[test]
#[ignore = "known red: annealed 8-city tours miss the optimum in most seeds"]
fn eight_city_anneal_reaches_optimum() {
    let opts = MacroOptions::new(BitWidth::default(), EdgeWeightType::Euc2d);
    let mut hits = 0;
    let mut worst: f64 = 0.0;
    for seed in 0..50 {
        let pts = random_points(8, 1000 + seed, 1000.0);
        let dm = build_distance_matrix(&pts, EdgeWeightType::Euc2d).unwrap();
        let (opt, _) = held_karp_cycle(&dm).unwrap();
        let sp = SubProblem {
            node_ids: (0..8).collect(),
            points: pts,
            mode: Mode::Cycle,
            entry: None,
            exit: None,
            seed,
        };
        let len = tour_length(&solve_subproblem(&sp, &opts).unwrap().order, &dm, true).unwrap();
        hits += (len == opt) as usize;
        worst = worst.max(len as f64 / opt as f64);
    }
    println!("8-city: {hits}/50 optimal, worst ratio {worst:.3}");
    assert!(hits >= 40);
    assert!(worst <= 1.10);
}
