//! Top-down hierarchical solve.
//!
//! The top level is solved as a cycle on one macro. Going down, each cluster
//! gets its first and last node from the closest pair across every boundary
//! of the parent tour, then all clusters of the level are solved as
//! fixed-endpoint paths on independent macros and spliced back in parent
//! order.

use std::time::Instant;

use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::{build_hierarchy, ClusterNode};
use crate::distance::{build_distance_matrix, points_tour_length, quantize_weights, route_length, BitWidth};
use crate::error::{Error, Result};
use crate::ising::{AnnealSchedule, Decrement, MacroState, Mode, NonIdeal, SpinStorage};
use crate::oracle;
use crate::rng::{stream_key, MacroRng};
use crate::tsplib::{EdgeWeightType, Instance, Tour};
use crate::Point;

/// Sub-problems up to this size are solved by enumeration instead of
/// annealing. Below it the macro cannot move: neighbor exclusion leaves only
/// the current city (paths) or the tour's own reversal (cycles).
pub const EXACT_MAX: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    /// Largest cluster a macro holds.
    pub max_cluster_size: usize,
    pub bits: BitWidth,
    pub seed: u64,
    /// Worker threads; 0 uses the host parallelism.
    pub max_parallel: usize,
    /// HRS leakage fraction, 0 for an ideal crossbar.
    pub nonideal_eps: f64,
    pub decrement: Decrement,
    /// Keep one [`SweepLogRow`] per sweep of every macro.
    pub record_sweeps: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            max_cluster_size: 12,
            bits: BitWidth::default(),
            seed: 0,
            max_parallel: 0,
            nonideal_eps: 0.0,
            decrement: Decrement::PerSweep,
            record_sweeps: false,
        }
    }
}

/// Settings shared by every macro of a solve.
#[derive(Debug, Clone, Copy)]
pub struct MacroOptions {
    pub bits: BitWidth,
    pub convention: EdgeWeightType,
    pub nonideal: Option<NonIdeal>,
    pub schedule: AnnealSchedule,
    pub record_sweeps: bool,
}

impl MacroOptions {
    pub fn new(bits: BitWidth, convention: EdgeWeightType) -> Self {
        MacroOptions {
            bits,
            convention,
            nonideal: None,
            schedule: AnnealSchedule::default(),
            record_sweeps: false,
        }
    }
}

/// Work handed to one macro.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubProblem {
    /// Node indices at the level being solved.
    pub node_ids: Vec<usize>,
    pub points: Vec<Point>,
    pub mode: Mode,
    pub entry: Option<usize>,
    pub exit: Option<usize>,
    /// Key of the macro's random stream.
    pub seed: u64,
}

impl SubProblem {
    fn validate(&self) -> Result<()> {
        let n = self.node_ids.len();
        if n == 0 || self.points.len() != n {
            return Err(Error::SizeMismatch {
                expected: n.max(1),
                got: self.points.len(),
            });
        }
        if self.mode == Mode::Path {
            let (Some(entry), Some(exit)) = (self.entry, self.exit) else {
                return Err(Error::InvalidEndpoints(
                    "path sub-problem without entry and exit".into(),
                ));
            };
            if !self.node_ids.contains(&entry) || !self.node_ids.contains(&exit) {
                return Err(Error::InvalidEndpoints(format!(
                    "entry {entry} / exit {exit} not in sub-problem"
                )));
            }
            if n >= 2 && entry == exit {
                return Err(Error::InvalidEndpoints(format!(
                    "entry == exit == {entry} with {n} nodes"
                )));
            }
        }
        Ok(())
    }
}

/// Sweep-level progress of one macro.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepLogRow {
    pub level: usize,
    pub cluster: usize,
    pub sweep: usize,
    pub current_ua: f64,
    pub probability: f64,
    /// Route length of the stored order, in the instance's distance units.
    pub length: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubSolution {
    /// Visiting order over the sub-problem's node ids.
    pub order: Vec<usize>,
    pub order_updates: u64,
    pub sweeps: u64,
    pub sweep_log: Vec<SweepLogRow>,
}

/// Solves one sub-problem. Paths start at `entry` and end at `exit`.
pub fn solve_subproblem(sp: &SubProblem, opts: &MacroOptions) -> Result<SubSolution> {
    sp.validate()?;
    let n = sp.node_ids.len();
    let local = |id: usize| sp.node_ids.iter().position(|&x| x == id).expect("validated");
    let to_ids = |order: Vec<usize>| order.into_iter().map(|i| sp.node_ids[i]).collect::<Vec<_>>();
    let exact = |order: Vec<usize>| SubSolution {
        order: to_ids(order),
        order_updates: 0,
        sweeps: 0,
        sweep_log: Vec::new(),
    };

    let (entry, exit) = match sp.mode {
        Mode::Path => (local(sp.entry.unwrap()), local(sp.exit.unwrap())),
        Mode::Cycle => (0, 0),
    };
    match (sp.mode, n) {
        (_, 1) => return Ok(exact(vec![0])),
        (Mode::Cycle, 2) => return Ok(exact(vec![0, 1])),
        (Mode::Path, 2) => return Ok(exact(vec![entry, exit])),
        _ => {}
    }

    let dm = build_distance_matrix(&sp.points, opts.convention)?;
    if n <= EXACT_MAX {
        let (_, order) = match sp.mode {
            Mode::Cycle => oracle::exhaustive_cycle(&dm)?,
            Mode::Path => oracle::exhaustive_path(&dm, entry, exit)?,
        };
        return Ok(exact(order));
    }

    let weights = quantize_weights(&dm, opts.bits);
    let spins = match sp.mode {
        Mode::Cycle => SpinStorage::cycle((0..n).collect())?,
        Mode::Path => SpinStorage::path_between(n, entry, exit)?,
    };
    let rng = MacroRng::seed_from_u64(sp.seed);
    let mut state = MacroState::new(weights, spins, rng)?
        .with_schedule(opts.schedule)
        .with_nonideal(opts.nonideal);
    let cyclic = sp.mode == Mode::Cycle;
    let mut log = Vec::new();
    let order = if opts.record_sweeps {
        state.anneal_with(|rec, spins| {
            log.push(SweepLogRow {
                level: 0,
                cluster: 0,
                sweep: rec.sweep,
                current_ua: rec.current_ua,
                probability: rec.probability,
                length: route_length(spins.assign(), |a, b| dm.get(a, b) as u64, cyclic),
            })
        })?
    } else {
        state.anneal()?
    };
    Ok(SubSolution {
        order: to_ids(order),
        order_updates: state.order_updates(),
        sweeps: state.sweeps(),
        sweep_log: log,
    })
}

/// Entry and exit node of each cluster in `tour_of_clusters`, aligned with
/// positions in that tour.
///
/// Boundaries are fixed in tour order starting at position 0. At each one the
/// closest member pair (exit of the earlier cluster, entry of the later) wins,
/// skipping members already used as the other endpoint of a cluster with at
/// least two members. Ties go to the lowest member indices.
pub fn fix_endpoints(tour_of_clusters: &[usize], level: &[ClusterNode], points: &[Point]) -> Vec<(usize, usize)> {
    let k = tour_of_clusters.len();
    let mut entry: Vec<Option<usize>> = vec![None; k];
    let mut exit: Vec<Option<usize>> = vec![None; k];
    if k == 0 {
        return Vec::new();
    }
    for t in 0..k {
        let (ta, tb) = (t, (t + 1) % k);
        let ca = &level[tour_of_clusters[ta]].members;
        let cb = &level[tour_of_clusters[tb]].members;
        let mut best: Option<(f64, usize, usize)> = None;
        for &x in ca {
            if ca.len() >= 2 && entry[ta] == Some(x) {
                continue;
            }
            for &y in cb {
                if cb.len() >= 2 && exit[tb] == Some(y) {
                    continue;
                }
                if ta == tb && ca.len() >= 2 && x == y {
                    continue;
                }
                let d = points[x].dist_sq(&points[y]);
                if best.is_none_or(|(bd, bx, by)| d < bd || (d == bd && (x, y) < (bx, by))) {
                    best = Some((d, x, y));
                }
            }
        }
        let (_, x, y) = best.expect("every cluster has a usable member");
        exit[ta] = Some(x);
        entry[tb] = Some(y);
    }
    entry
        .into_iter()
        .zip(exit)
        .map(|(e, x)| (e.expect("set"), x.expect("set")))
        .collect()
}

/// Splices child paths in parent order. Each path must run from its fixed
/// entry to its fixed exit; the result must cover `0..level_len` exactly once.
pub fn merge_tours(child_paths: &[Vec<usize>], endpoints: &[(usize, usize)], level_len: usize) -> Result<Vec<usize>> {
    if child_paths.len() != endpoints.len() {
        return Err(Error::SizeMismatch {
            expected: endpoints.len(),
            got: child_paths.len(),
        });
    }
    let mut out = Vec::with_capacity(level_len);
    for (i, (path, &(entry, exit))) in child_paths.iter().zip(endpoints).enumerate() {
        if path.first() != Some(&entry) || path.last() != Some(&exit) {
            return Err(Error::EndpointMismatch {
                index: i,
                expected_entry: entry,
                expected_exit: exit,
            });
        }
        out.extend_from_slice(path);
    }
    if out.len() != level_len {
        return Err(Error::SizeMismatch {
            expected: level_len,
            got: out.len(),
        });
    }
    crate::tsplib::check_permutation(&out)?;
    Ok(out)
}

/// Per-level macro workload. `order_updates[i]` and `sweeps[i]` belong to
/// cluster `i` in parent-tour order; zero means it was solved exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelTrace {
    /// Tree level of the nodes being ordered (0 = cities).
    pub level: usize,
    pub clusters: usize,
    pub order_updates: Vec<u64>,
    pub sweeps: Vec<u64>,
}

/// Host wall time per phase, seconds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimes {
    pub clustering_s: f64,
    pub fixing_s: f64,
    pub annealing_s: f64,
    pub merging_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveTrace {
    /// Top level first.
    pub levels: Vec<LevelTrace>,
    pub phases: PhaseTimes,
    /// Parent-tour position where boundary fixing starts.
    pub start_cluster: usize,
    pub tour_length: u64,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub tour: Tour,
    pub trace: SolveTrace,
    pub sweep_log: Vec<SweepLogRow>,
}

fn secs(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

/// Clusters the instance, then solves it top-down on simulated macros.
pub fn solve_hierarchical(instance: &Instance, config: &SolveConfig) -> Result<Solution> {
    let n = instance.dimension();
    if n < 3 {
        return Err(Error::TooFewNodes { min: 3, got: n });
    }
    if config.max_cluster_size < 4 {
        return Err(Error::ClusterSize {
            min: 4,
            got: config.max_cluster_size,
        });
    }
    if !config.nonideal_eps.is_finite() || config.nonideal_eps < 0.0 {
        return Err(Error::Config(format!(
            "leak fraction {} must be >= 0",
            config.nonideal_eps
        )));
    }
    let opts = MacroOptions {
        bits: config.bits,
        convention: instance.edge_weight_type,
        nonideal: (config.nonideal_eps > 0.0).then_some(NonIdeal {
            hrs_leak_fraction: config.nonideal_eps,
        }),
        schedule: AnnealSchedule {
            decrement: config.decrement,
            ..AnnealSchedule::default()
        },
        record_sweeps: config.record_sweeps,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.max_parallel)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;

    let mut phases = PhaseTimes::default();
    let t = Instant::now();
    let hierarchy = build_hierarchy(&instance.coords, config.max_cluster_size)?;
    phases.clustering_s = secs(t);

    let depth = hierarchy.depth();
    let mut levels = Vec::with_capacity(depth + 1);
    let mut sweep_log = Vec::new();
    let tag = |log: &mut Vec<SweepLogRow>, rows: Vec<SweepLogRow>, level: usize, cluster: usize| {
        log.extend(rows.into_iter().map(|r| SweepLogRow { level, cluster, ..r }));
    };

    let t = Instant::now();
    let top_len = hierarchy.top_len();
    let top = SubProblem {
        node_ids: (0..top_len).collect(),
        points: hierarchy.level_points(depth),
        mode: Mode::Cycle,
        entry: None,
        exit: None,
        seed: stream_key(config.seed, &[depth as u64 + 1, 0]),
    };
    let top_sol = solve_subproblem(&top, &opts)?;
    phases.annealing_s += secs(t);
    levels.push(LevelTrace {
        level: depth,
        clusters: 1,
        order_updates: vec![top_sol.order_updates],
        sweeps: vec![top_sol.sweeps],
    });
    tag(&mut sweep_log, top_sol.sweep_log, depth, 0);
    let mut order = top_sol.order;

    for level in (1..=depth).rev() {
        let clusters = &hierarchy.levels[level - 1];
        let child_points = hierarchy.level_points(level - 1);

        let t = Instant::now();
        let endpoints = fix_endpoints(&order, clusters, &child_points);
        phases.fixing_s += secs(t);

        let subproblems: Vec<SubProblem> = order
            .iter()
            .zip(&endpoints)
            .map(|(&c, &(entry, exit))| {
                let members = &clusters[c].members;
                SubProblem {
                    node_ids: members.clone(),
                    points: members.iter().map(|&m| child_points[m]).collect(),
                    mode: Mode::Path,
                    entry: Some(entry),
                    exit: Some(exit),
                    seed: stream_key(config.seed, &[level as u64, c as u64]),
                }
            })
            .collect();

        let t = Instant::now();
        let solved: Vec<SubSolution> = pool.install(|| {
            subproblems
                .par_iter()
                .map(|sp| solve_subproblem(sp, &opts))
                .collect::<Result<_>>()
        })?;
        phases.annealing_s += secs(t);

        let t = Instant::now();
        levels.push(LevelTrace {
            level: level - 1,
            clusters: solved.len(),
            order_updates: solved.iter().map(|s| s.order_updates).collect(),
            sweeps: solved.iter().map(|s| s.sweeps).collect(),
        });
        let mut paths = Vec::with_capacity(solved.len());
        for (&c, s) in order.iter().zip(solved) {
            tag(&mut sweep_log, s.sweep_log, level - 1, c);
            paths.push(s.order);
        }
        order = merge_tours(&paths, &endpoints, child_points.len())?;
        phases.merging_s += secs(t);
    }

    let tour_length = points_tour_length(&instance.coords, instance.edge_weight_type, &order, true)?;
    Ok(Solution {
        tour: Tour::new(order)?,
        trace: SolveTrace {
            levels,
            phases,
            start_cluster: 0,
            tour_length,
        },
        sweep_log,
    })
}
