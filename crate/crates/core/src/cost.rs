//! Closed-form latency and energy estimate for the macro workload of a solve.
//!
//! One iteration of a macro (superpose, optimize, spin-storage update) costs a
//! fixed time and energy per bit width, taken from circuit simulation of a
//! 12-city macro. Host-side phases are reported from measured wall time.

use serde::{Deserialize, Serialize};

use crate::distance::BitWidth;
use crate::orchestrator::SolveTrace;

/// Per-iteration circuit figures for one bit width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacroCostTable {
    pub bits: u32,
    pub array_rows: usize,
    pub array_cols: usize,
    pub power_mw: f64,
    pub superpose_ns: f64,
    pub optimize_ns: f64,
    pub update_ns: f64,
    pub energy_per_iter_pj: f64,
}

const TABLE: [MacroCostTable; 3] = [
    MacroCostTable {
        bits: 2,
        array_rows: 12,
        array_cols: 36,
        power_mw: 4.202,
        superpose_ns: 3.0,
        optimize_ns: 4.0,
        update_ns: 2.0,
        energy_per_iter_pj: 37.82,
    },
    MacroCostTable {
        bits: 3,
        array_rows: 12,
        array_cols: 48,
        power_mw: 5.033,
        superpose_ns: 3.0,
        optimize_ns: 4.0,
        update_ns: 2.0,
        energy_per_iter_pj: 45.3,
    },
    MacroCostTable {
        bits: 4,
        array_rows: 12,
        array_cols: 60,
        power_mw: 5.11,
        superpose_ns: 3.0,
        optimize_ns: 4.0,
        update_ns: 2.0,
        energy_per_iter_pj: 45.98,
    },
];

impl MacroCostTable {
    pub fn for_bits(bits: BitWidth) -> &'static MacroCostTable {
        &TABLE[(bits.get() - 2) as usize]
    }

    pub fn all() -> &'static [MacroCostTable] {
        &TABLE
    }

    pub fn iteration_ns(&self) -> f64 {
        self.superpose_ns + self.optimize_ns + self.update_ns
    }
}

/// Estimated macro cost of one hierarchy level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCost {
    pub level: usize,
    /// Clusters that ran on a macro (exactly-solved ones excluded).
    pub macro_clusters: usize,
    /// Rounds of macro use: `ceil(macro_clusters / macros)`.
    pub batches: usize,
    pub order_updates: u64,
    pub latency_ns: f64,
    pub energy_pj: f64,
}

/// Host-side wall times, seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HostTimes {
    pub clustering_s: f64,
    pub fixing_s: f64,
    pub merging_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub bits: u32,
    /// Macros on the chip; `None` means one per cluster of a level.
    pub macros: Option<usize>,
    pub iteration_ns: f64,
    pub energy_per_iter_pj: f64,
    pub levels: Vec<LevelCost>,
    pub macro_latency_ns: f64,
    pub macro_energy_pj: f64,
    /// Measured host phases; absent when wall times are suppressed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub host: Option<HostTimes>,
    /// Costs this model does not estimate.
    pub unmodeled: Vec<String>,
}

/// Estimates macro latency and energy for a solve.
///
/// A cluster costs `order_updates * iteration_ns`; a level runs its clusters
/// in `ceil(clusters / macros)` batches, each as long as the slowest cluster;
/// energy is summed over every order update.
pub fn estimate(trace: &SolveTrace, bits: BitWidth, macros: Option<usize>) -> CostReport {
    let table = MacroCostTable::for_bits(bits);
    let iter_ns = table.iteration_ns();
    let macros = macros.filter(|&m| m > 0);

    let levels: Vec<LevelCost> = trace
        .levels
        .iter()
        .map(|lt| {
            let busy: Vec<u64> = lt.order_updates.iter().copied().filter(|&u| u > 0).collect();
            let batches = match macros {
                _ if busy.is_empty() => 0,
                Some(m) => busy.len().div_ceil(m),
                None => 1,
            };
            let slowest = busy.iter().copied().max().unwrap_or(0);
            let updates: u64 = busy.iter().sum();
            LevelCost {
                level: lt.level,
                macro_clusters: busy.len(),
                batches,
                order_updates: updates,
                latency_ns: batches as f64 * slowest as f64 * iter_ns,
                energy_pj: updates as f64 * table.energy_per_iter_pj,
            }
        })
        .collect();

    CostReport {
        bits: bits.get(),
        macros,
        iteration_ns: iter_ns,
        energy_per_iter_pj: table.energy_per_iter_pj,
        macro_latency_ns: levels.iter().map(|l| l.latency_ns).sum(),
        macro_energy_pj: levels.iter().map(|l| l.energy_pj).sum(),
        levels,
        host: Some(HostTimes {
            clustering_s: trace.phases.clustering_s,
            fixing_s: trace.phases.fixing_s,
            merging_s: trace.phases.merging_s,
        }),
        unmodeled: vec![
            "off-chip data transfer".to_string(),
            "weight mapping (crossbar programming) energy and latency".to_string(),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orchestrator::{LevelTrace, PhaseTimes};

    fn trace(levels: Vec<Vec<u64>>) -> SolveTrace {
        SolveTrace {
            levels: levels
                .into_iter()
                .enumerate()
                .map(|(i, u)| LevelTrace {
                    level: i,
                    clusters: u.len(),
                    sweeps: u.iter().map(|&x| if x > 0 { 1340 } else { 0 }).collect(),
                    order_updates: u,
                })
                .collect(),
            phases: PhaseTimes::default(),
            start_cluster: 0,
            tour_length: 0,
        }
    }

    #[test]
    fn table_values() {
        let e: Vec<f64> = MacroCostTable::all().iter().map(|t| t.energy_per_iter_pj).collect();
        assert_eq!(e, vec![37.82, 45.3, 45.98]);
        for t in MacroCostTable::all() {
            assert_eq!(t.iteration_ns(), 9.0);
            assert_eq!(t.array_cols, 12 * (t.bits as usize + 1));
        }
        assert!(e.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn one_twelve_city_cluster() {
        let r = estimate(&trace(vec![vec![13_400]]), BitWidth::new(4).unwrap(), Some(1));
        assert_eq!(r.macro_latency_ns, 120_600.0);
        assert!((r.macro_energy_pj - 616_132.0).abs() < 1e-6);
    }

    #[test]
    fn empty_trace_costs_nothing() {
        let r = estimate(&trace(vec![]), BitWidth::new(2).unwrap(), Some(4));
        assert_eq!(r.macro_latency_ns, 0.0);
        assert_eq!(r.macro_energy_pj, 0.0);
        let r = estimate(&trace(vec![vec![0, 0]]), BitWidth::new(2).unwrap(), Some(4));
        assert_eq!(r.levels[0].batches, 0);
        assert_eq!(r.macro_latency_ns, 0.0);
    }

    #[test]
    fn more_macros_fewer_batches() {
        let t = trace(vec![vec![1000; 8], vec![500; 3]]);
        let b = BitWidth::new(3).unwrap();
        let two = estimate(&t, b, Some(2));
        let four = estimate(&t, b, Some(4));
        assert_eq!(two.levels[0].latency_ns, 2.0 * four.levels[0].latency_ns);
        assert_eq!(two.macro_energy_pj, four.macro_energy_pj);
        let unlimited = estimate(&t, b, None);
        assert_eq!(unlimited.macro_latency_ns, (1000.0 + 500.0) * 9.0);
    }
}
