//! Bottom-up cluster hierarchy built with Ward-linkage agglomerative clustering.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Point;

/// One cluster: indices into the level below and the mean of their coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterNode {
    pub members: Vec<usize>,
    pub centroid: Point,
}

/// Cluster tree over a set of cities.
///
/// Level 0 is the cities themselves. `levels[l]` holds the clusters of tree
/// level `l + 1`, whose members index the nodes of level `l`. The nodes of the
/// last level (or the cities, when `levels` is empty) form the top problem,
/// which always has at most `max_cluster_size` nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hierarchy {
    pub max_cluster_size: usize,
    pub cities: Vec<Point>,
    pub levels: Vec<Vec<ClusterNode>>,
}

impl Hierarchy {
    /// Number of tree levels above the cities.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Coordinates of the nodes at tree level `level` (0 = cities).
    pub fn level_points(&self, level: usize) -> Vec<Point> {
        if level == 0 {
            self.cities.clone()
        } else {
            self.levels[level - 1].iter().map(|c| c.centroid).collect()
        }
    }

    pub fn level_len(&self, level: usize) -> usize {
        if level == 0 {
            self.cities.len()
        } else {
            self.levels[level - 1].len()
        }
    }

    /// Nodes of the top problem.
    pub fn top_len(&self) -> usize {
        self.level_len(self.depth())
    }
}

/// Ward merge cost between clusters with the given sizes and centroids.
#[inline]
fn ward_delta(size_a: usize, ca: Point, size_b: usize, cb: Point) -> f64 {
    let (a, b) = (size_a as f64, size_b as f64);
    a * b / (a + b) * ca.dist_sq(&cb)
}

struct WardState {
    active: Vec<bool>,
    size: Vec<usize>,
    sum: Vec<(f64, f64)>,
    nn: Vec<usize>,
    nn_cost: Vec<f64>,
}

impl WardState {
    fn centroid(&self, i: usize) -> Point {
        let s = self.size[i] as f64;
        Point::new(self.sum[i].0 / s, self.sum[i].1 / s)
    }

    fn cost(&self, i: usize, j: usize) -> f64 {
        ward_delta(self.size[i], self.centroid(i), self.size[j], self.centroid(j))
    }

    /// Nearest active partner of `i`, ties to the lowest index.
    fn rescan(&mut self, i: usize) {
        let mut best = (f64::INFINITY, usize::MAX);
        for j in 0..self.active.len() {
            if j == i || !self.active[j] {
                continue;
            }
            let c = self.cost(i, j);
            if c < best.0 {
                best = (c, j);
            }
        }
        self.nn[i] = best.1;
        self.nn_cost[i] = best.0;
    }
}

/// Greedy agglomerative clustering with the Ward criterion
/// `|A||B| / (|A|+|B|) * |c_A - c_B|^2`, down to `k` clusters.
///
/// Ties go to the pair with the lexicographically smallest
/// (lowest member of one cluster, lowest member of the other). Clusters are
/// returned with sorted members, ordered by their lowest member.
pub fn agglomerative_ward(points: &[Point], k: usize) -> Result<Vec<Vec<usize>>> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(Error::ClusterCount { k, n });
    }
    // cluster slot i always holds the cluster whose lowest member is i
    let mut st = WardState {
        active: vec![true; n],
        size: vec![1; n],
        sum: points.iter().map(|p| (p.x, p.y)).collect(),
        nn: vec![usize::MAX; n],
        nn_cost: vec![f64::INFINITY; n],
    };
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    if n > 1 {
        for i in 0..n {
            st.rescan(i);
        }
    }

    for _ in 0..(n - k) {
        let mut pick: Option<(f64, usize, usize)> = None;
        for i in 0..n {
            if !st.active[i] {
                continue;
            }
            let j = st.nn[i];
            let key = (st.nn_cost[i], i.min(j), i.max(j));
            if pick.is_none_or(|p| key.0 < p.0 || (key.0 == p.0 && (key.1, key.2) < (p.1, p.2))) {
                pick = Some(key);
            }
        }
        let (_, a, b) = pick.expect("at least two active clusters");

        st.active[b] = false;
        st.size[a] += st.size[b];
        st.sum[a].0 += st.sum[b].0;
        st.sum[a].1 += st.sum[b].1;
        let moved = std::mem::take(&mut members[b]);
        members[a].extend(moved);

        for i in 0..n {
            if !st.active[i] || i == a {
                continue;
            }
            if st.nn[i] == a || st.nn[i] == b {
                st.rescan(i);
            } else {
                let c = st.cost(i, a);
                if c < st.nn_cost[i] || (c == st.nn_cost[i] && a < st.nn[i]) {
                    st.nn[i] = a;
                    st.nn_cost[i] = c;
                }
            }
        }
        st.rescan(a);
    }

    Ok((0..n)
        .filter(|&i| st.active[i])
        .map(|i| {
            let mut m = std::mem::take(&mut members[i]);
            m.sort_unstable();
            m
        })
        .collect())
}

/// Clusters `indices` (into `points`) so that no cluster exceeds `m`, splitting
/// oversized Ward clusters recursively.
fn cluster_bounded(points: &[Point], indices: &[usize], k: usize, m: usize, out: &mut Vec<Vec<usize>>) -> Result<()> {
    let sub: Vec<Point> = indices.iter().map(|&i| points[i]).collect();
    for cluster in agglomerative_ward(&sub, k)? {
        let global: Vec<usize> = cluster.iter().map(|&c| indices[c]).collect();
        if global.len() > m {
            let k = global.len().div_ceil(m);
            cluster_bounded(points, &global, k, m, out)?;
        } else {
            out.push(global);
        }
    }
    Ok(())
}

/// Builds the cluster tree: each level is clustered into `ceil(len / m)`
/// groups until the remaining level has at most `m` nodes.
pub fn build_hierarchy(points: &[Point], m: usize) -> Result<Hierarchy> {
    if m < 3 {
        return Err(Error::ClusterSize { min: 3, got: m });
    }
    if points.is_empty() {
        return Err(Error::TooFewNodes { min: 1, got: 0 });
    }
    let mut levels = Vec::new();
    let mut current = points.to_vec();
    while current.len() > m {
        let all: Vec<usize> = (0..current.len()).collect();
        let mut clusters = Vec::new();
        cluster_bounded(&current, &all, current.len().div_ceil(m), m, &mut clusters)?;
        clusters.sort_unstable_by_key(|c| c[0]);
        let nodes: Vec<ClusterNode> = clusters
            .into_iter()
            .map(|members| {
                let centroid = Point::mean(members.iter().map(|&i| &current[i])).expect("non-empty cluster");
                ClusterNode { members, centroid }
            })
            .collect();
        current = nodes.iter().map(|c| c.centroid).collect();
        levels.push(nodes);
    }
    Ok(Hierarchy {
        max_cluster_size: m,
        cities: points.to_vec(),
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().copied().map(Point::from).collect()
    }

    #[test]
    fn two_pairs() {
        let p = pts(&[(0.0, 0.0), (0.0, 1.0), (10.0, 0.0), (10.0, 1.0)]);
        assert_eq!(agglomerative_ward(&p, 2).unwrap(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn k_equals_n_is_identity() {
        let p = pts(&[(0.0, 0.0), (3.0, 1.0), (7.0, 2.0)]);
        assert_eq!(agglomerative_ward(&p, 3).unwrap(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(agglomerative_ward(&p, 1).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn k_out_of_range() {
        let p = pts(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!(matches!(agglomerative_ward(&p, 0), Err(Error::ClusterCount { .. })));
        assert!(matches!(agglomerative_ward(&p, 3), Err(Error::ClusterCount { .. })));
    }

    #[test]
    fn ties_prefer_lowest_indices() {
        // four corners of a square: pairs (0,1), (2,3), (0,2), (1,3) tie
        let p = pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]);
        assert_eq!(agglomerative_ward(&p, 3).unwrap(), vec![vec![0, 1], vec![2], vec![3]]);
    }

    #[test]
    fn trivial_hierarchy() {
        let p: Vec<Point> = (0..10).map(|i| Point::new(i as f64, 0.0)).collect();
        let h = build_hierarchy(&p, 12).unwrap();
        assert_eq!(h.depth(), 0);
        assert_eq!(h.top_len(), 10);
        assert!(matches!(build_hierarchy(&p, 2), Err(Error::ClusterSize { .. })));
    }

    #[test]
    fn thirteen_points_make_two_clusters() {
        let p: Vec<Point> = (0..13)
            .map(|i| Point::new((i * 7 % 13) as f64, (i * 3 % 5) as f64))
            .collect();
        let h = build_hierarchy(&p, 12).unwrap();
        assert_eq!(h.depth(), 1);
        assert_eq!(h.levels[0].len(), 2);
    }

    #[test]
    fn oversized_ward_clusters_are_split() {
        // a dense blob of 20 plus 2 far outliers: Ward with k = 2 keeps the blob
        // whole, the split pass must break it up
        let mut p: Vec<Point> = (0..20).map(|i| Point::new((i % 5) as f64, (i / 5) as f64)).collect();
        p.push(Point::new(1000.0, 1000.0));
        p.push(Point::new(1001.0, 1000.0));
        let h = build_hierarchy(&p, 12).unwrap();
        assert!(h.levels[0].iter().all(|c| c.members.len() <= 12));
        assert!(h.levels[0].len() >= 3);
    }
}
