use isingtsp::distance::tsplib_distance;
use isingtsp::oracle::{exhaustive_cycle, exhaustive_path, held_karp_cycle, held_karp_path};
use isingtsp::{build_distance_matrix, quantize_weights, tour_length, BitWidth, DistanceMatrix, EdgeWeightType, Point};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_points(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Point::new(rng.random_range(0.0..1000.0), rng.random_range(0.0..1000.0)))
        .collect()
}

#[test]
fn matrix_matches_pairwise_formula() {
    let pts = random_points(8, 11);
    for conv in [EdgeWeightType::Euc2d, EdgeWeightType::Ceil2d, EdgeWeightType::Att] {
        let dm = build_distance_matrix(&pts, conv).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                if i == j {
                    continue;
                }
                let (dx, dy) = (pts[i].x - pts[j].x, pts[i].y - pts[j].y);
                let e = (dx * dx + dy * dy).sqrt();
                let want = match conv {
                    EdgeWeightType::Euc2d => (e + 0.5).floor(),
                    EdgeWeightType::Ceil2d => e.ceil(),
                    EdgeWeightType::Att => {
                        let r = ((dx * dx + dy * dy) / 10.0).sqrt();
                        let t = (r + 0.5).floor();
                        if t < r {
                            t + 1.0
                        } else {
                            t
                        }
                    }
                };
                assert_eq!(dm.get(i, j) as f64, want.max(1.0), "{conv:?} {i} {j}");
                assert_eq!(dm.get(i, j), dm.get(j, i));
                assert_eq!(tsplib_distance(conv, &pts[i], &pts[j]), want);
            }
        }
    }
}

#[test]
fn ten_cities_enumeration_agrees_with_dp() {
    let dm = build_distance_matrix(&random_points(10, 5), EdgeWeightType::Euc2d).unwrap();
    let (hk, tour) = held_karp_cycle(&dm).unwrap();
    let (ex, _) = exhaustive_cycle(&dm).unwrap();
    assert_eq!(hk, ex);
    assert_eq!(tour_length(&tour, &dm, true).unwrap(), hk);

    let (hp, route) = held_karp_path(&dm, 2, 7).unwrap();
    assert_eq!(hp, exhaustive_path(&dm, 2, 7).unwrap().0);
    assert_eq!((route[0], route[9]), (2, 7));
}

#[test]
fn quantization_uses_local_minimum() {
    let dm = DistanceMatrix::from_rows(&[
        vec![0, 10, 20, 40],
        vec![10, 0, 30, 160],
        vec![20, 30, 0, 10],
        vec![40, 160, 10, 0],
    ])
    .unwrap();
    let w = quantize_weights(&dm, BitWidth::new(4).unwrap());
    assert_eq!(w.get(0, 1), 15);
    assert_eq!(w.get(0, 2), 8);
    assert_eq!(w.get(0, 3), 4);
    // 15 * 10 / 160 = 0.94 rounds to 1
    assert_eq!(w.get(1, 3), 1);
    assert_eq!(w.get(2, 2), 0);
}

proptest! {
    #[test]
    fn weights_in_range_and_monotone(
        seed in any::<u64>(),
        n in 3usize..15,
        bits in 2u32..=4,
    ) {
        let dm = build_distance_matrix(&random_points(n, seed), EdgeWeightType::Euc2d).unwrap();
        let b = BitWidth::new(bits).unwrap();
        let w = quantize_weights(&dm, b);
        let top = (1u16 << bits) - 1;
        for i in 0..n {
            prop_assert_eq!(w.get(i, i), 0);
            for j in 0..n {
                if i == j { continue; }
                let v = w.get(i, j);
                prop_assert!((1..=top).contains(&v));
                prop_assert_eq!(v, w.get(j, i));
                if dm.get(i, j) == dm.d_min() {
                    prop_assert_eq!(v, top);
                }
                for k in 0..n {
                    if k != i && dm.get(i, k) > dm.get(i, j) {
                        prop_assert!(w.get(i, k) <= v);
                    }
                }
            }
        }
    }
}
