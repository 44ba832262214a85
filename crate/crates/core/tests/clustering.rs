use isingtsp::{agglomerative_ward, build_hierarchy, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_points(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Point::new(rng.random_range(0.0..100.0), rng.random_range(0.0..100.0)))
        .collect()
}

/// Rescans every pair at every merge.
fn ward_brute_force(points: &[Point], k: usize) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = (0..points.len()).map(|i| vec![i]).collect();
    let stats = |c: &[usize]| {
        let (sx, sy) = c
            .iter()
            .fold((0.0, 0.0), |(x, y), &i| (x + points[i].x, y + points[i].y));
        let s = c.len() as f64;
        (c.len(), Point::new(sx / s, sy / s))
    };
    while clusters.len() > k {
        let mut best = (f64::INFINITY, usize::MAX, usize::MAX, 0, 0);
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let (na, ca) = stats(&clusters[a]);
                let (nb, cb) = stats(&clusters[b]);
                let d = (na * nb) as f64 / (na + nb) as f64 * ca.dist_sq(&cb);
                let (lo, hi) = (clusters[a][0].min(clusters[b][0]), clusters[a][0].max(clusters[b][0]));
                if d < best.0 || (d == best.0 && (lo, hi) < (best.1, best.2)) {
                    best = (d, lo, hi, a, b);
                }
            }
        }
        let merged = clusters.remove(best.4);
        clusters[best.3].extend(merged);
        clusters[best.3].sort_unstable();
    }
    clusters.sort_unstable_by_key(|c| c[0]);
    clusters
}

#[test]
fn ward_matches_brute_force() {
    for seed in 0..40 {
        let n = 4 + (seed as usize % 7);
        let pts = random_points(n, seed);
        for k in 1..=n {
            assert_eq!(
                agglomerative_ward(&pts, k).unwrap(),
                ward_brute_force(&pts, k),
                "seed {seed} k {k}"
            );
        }
    }
}

#[test]
fn hierarchy_invariants() {
    let pts = random_points(144, 3);
    let h = build_hierarchy(&pts, 12).unwrap();
    assert!(h.depth() >= 1);
    assert!(h.top_len() <= 12);
    for (l, level) in h.levels.iter().enumerate() {
        let below = h.level_len(l);
        let mut seen = vec![false; below];
        for node in level {
            assert!(!node.members.is_empty() && node.members.len() <= 12);
            for &m in &node.members {
                assert!(!seen[m], "level {l} member {m} twice");
                seen[m] = true;
            }
        }
        assert!(seen.iter().all(|&s| s), "level {l} misses a node");
        assert!(level.len() >= below.div_ceil(12));
        let lp = h.level_points(l);
        for node in level {
            let c = Point::mean(node.members.iter().map(|&m| &lp[m])).unwrap();
            assert!(c.dist(&node.centroid) < 1e-9);
        }
    }
}
