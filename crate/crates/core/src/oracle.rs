//! Reference solvers used to judge the annealer: exact dynamic programming,
//! brute-force enumeration, nearest-neighbor construction and 2-opt.

use crate::distance::{route_length, DistanceMatrix};
use crate::error::{Error, Result};

/// Largest instance the bitmask DP accepts.
pub const HELD_KARP_MAX: usize = 20;
/// Largest instance the enumerators accept.
pub const EXHAUSTIVE_MAX: usize = 12;

const INF: u64 = u64::MAX / 4;

fn check_size(n: usize, min: usize, max: usize) -> Result<()> {
    if n < min {
        return Err(Error::TooFewNodes { min, got: n });
    }
    if n > max {
        return Err(Error::TooManyNodes { max, got: n });
    }
    Ok(())
}

/// Shortest Hamiltonian path from `start` over all nodes, ending at `end`
/// when given, by DP over subsets of the other nodes.
fn held_karp_core(dm: &DistanceMatrix, start: usize, end: Option<usize>, close: bool) -> (u64, Vec<usize>) {
    let n = dm.n();
    // nodes other than start, renumbered 0..m
    let others: Vec<usize> = (0..n).filter(|&c| c != start).collect();
    let m = others.len();
    let full = (1usize << m) - 1;
    let mut cost = vec![INF; (1 << m) * m];
    let mut parent = vec![u8::MAX; (1 << m) * m];
    for (j, &c) in others.iter().enumerate() {
        cost[(1 << j) * m + j] = dm.get(start, c) as u64;
    }
    for set in 1..=full {
        for j in 0..m {
            if set & (1 << j) == 0 {
                continue;
            }
            let cur = cost[set * m + j];
            if cur >= INF {
                continue;
            }
            // a fixed end node may only be appended last
            if let Some(e) = end {
                if others[j] == e && set != full {
                    continue;
                }
            }
            let rest = full & !set;
            let mut bits = rest;
            while bits != 0 {
                let k = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let next = set | (1 << k);
                let c = cur + dm.get(others[j], others[k]) as u64;
                if c < cost[next * m + k] {
                    cost[next * m + k] = c;
                    parent[next * m + k] = j as u8;
                }
            }
        }
    }
    let (best, last) = match end {
        Some(e) => {
            let j = others.iter().position(|&c| c == e).expect("end is not start");
            (cost[full * m + j], j)
        }
        None => (0..m)
            .map(|j| {
                let extra = if close { dm.get(others[j], start) as u64 } else { 0 };
                (cost[full * m + j] + extra, j)
            })
            .min()
            .expect("at least one other node"),
    };
    let mut order = Vec::with_capacity(n);
    let (mut set, mut j) = (full, last);
    loop {
        order.push(others[j]);
        let p = parent[set * m + j];
        set &= !(1 << j);
        if p == u8::MAX {
            break;
        }
        j = p as usize;
    }
    order.push(start);
    order.reverse();
    (best, order)
}

/// Exact optimal closed tour (Held-Karp), starting at city 0.
pub fn held_karp_cycle(dm: &DistanceMatrix) -> Result<(u64, Vec<usize>)> {
    check_size(dm.n(), 3, HELD_KARP_MAX)?;
    Ok(held_karp_core(dm, 0, None, true))
}

/// Exact shortest Hamiltonian path from `entry` to `exit`.
pub fn held_karp_path(dm: &DistanceMatrix, entry: usize, exit: usize) -> Result<(u64, Vec<usize>)> {
    let n = dm.n();
    check_size(n, 2, HELD_KARP_MAX)?;
    if entry >= n || exit >= n || entry == exit {
        return Err(Error::InvalidEndpoints(format!(
            "entry {entry}, exit {exit} for {n} nodes"
        )));
    }
    Ok(held_karp_core(dm, entry, Some(exit), false))
}

/// Visits every permutation of `items` (Heap's algorithm).
fn for_each_permutation(items: &mut [usize], mut f: impl FnMut(&[usize])) {
    let n = items.len();
    let mut c = vec![0usize; n];
    f(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            f(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Optimal closed tour by trying every order of cities `1..n` after city 0.
pub fn exhaustive_cycle(dm: &DistanceMatrix) -> Result<(u64, Vec<usize>)> {
    let n = dm.n();
    check_size(n, 3, EXHAUSTIVE_MAX)?;
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best = (u64::MAX, Vec::new());
    let mut route = vec![0; n];
    for_each_permutation(&mut rest, |perm| {
        route[1..].copy_from_slice(perm);
        let len = route_length(&route, |a, b| dm.get(a, b) as u64, true);
        if len < best.0 {
            best = (len, route.clone());
        }
    });
    Ok(best)
}

/// Shortest `entry` -> `exit` path by trying every interior order.
pub fn exhaustive_path(dm: &DistanceMatrix, entry: usize, exit: usize) -> Result<(u64, Vec<usize>)> {
    let n = dm.n();
    check_size(n, 2, EXHAUSTIVE_MAX)?;
    if entry >= n || exit >= n || entry == exit {
        return Err(Error::InvalidEndpoints(format!(
            "entry {entry}, exit {exit} for {n} nodes"
        )));
    }
    let mut inner: Vec<usize> = (0..n).filter(|&c| c != entry && c != exit).collect();
    let mut route = vec![0; n];
    route[0] = entry;
    route[n - 1] = exit;
    let mut best = (u64::MAX, Vec::new());
    for_each_permutation(&mut inner, |perm| {
        route[1..n - 1].copy_from_slice(perm);
        let len = route_length(&route, |a, b| dm.get(a, b) as u64, false);
        if len < best.0 {
            best = (len, route.clone());
        }
    });
    Ok(best)
}

/// Greedy tour from `start`, always moving to the closest unvisited city
/// (ties to the lowest index).
pub fn nearest_neighbor(dm: &DistanceMatrix, start: usize) -> Vec<usize> {
    let n = dm.n();
    let mut visited = vec![false; n];
    let mut tour = Vec::with_capacity(n);
    let mut cur = start;
    visited[cur] = true;
    tour.push(cur);
    for _ in 1..n {
        let row = dm.row(cur);
        let next = (0..n)
            .filter(|&c| !visited[c])
            .min_by_key(|&c| (row[c], c))
            .expect("unvisited city left");
        visited[next] = true;
        tour.push(next);
        cur = next;
    }
    tour
}

/// First-improvement 2-opt on a closed tour, scanning edge pairs in index
/// order until no reversal shortens the tour.
pub fn two_opt(dm: &DistanceMatrix, tour: &[usize]) -> Vec<usize> {
    let n = tour.len();
    let mut t = tour.to_vec();
    if n < 4 {
        return t;
    }
    let d = |a: usize, b: usize| dm.get(a, b) as i64;
    let mut improved = true;
    while improved {
        improved = false;
        for i in 0..n - 2 {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = (t[i], t[i + 1]);
                let (c, e) = (t[j], t[(j + 1) % n]);
                if d(a, c) + d(b, e) < d(a, b) + d(c, e) {
                    t[i + 1..=j].reverse();
                    improved = true;
                }
            }
        }
    }
    t
}
