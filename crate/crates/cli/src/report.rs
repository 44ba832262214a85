use std::collections::BTreeMap;
use std::path::Path;

use isingtsp::orchestrator::PhaseTimes;
use isingtsp::CostReport;
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub schema: u32,
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub bits: u32,
    pub seed: u64,
    pub tour_length: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimal_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_times: Option<PhaseTimes>,
    pub cost_report: CostReport,
}

/// Columns of `--report csv` and of the bench rows.
pub const CSV_HEADER: [&str; 13] = [
    "instance",
    "n",
    "m",
    "bits",
    "seed",
    "tour_length",
    "optimal_ratio",
    "clustering_s",
    "fixing_s",
    "annealing_s",
    "merging_s",
    "macro_latency_ns",
    "macro_energy_pj",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn csv_record(&self) -> Vec<String> {
        let p = self.phase_times;
        vec![
            self.instance.clone(),
            self.n.to_string(),
            self.m.to_string(),
            self.bits.to_string(),
            self.seed.to_string(),
            self.tour_length.to_string(),
            opt(self.optimal_ratio),
            opt(p.map(|p| p.clustering_s)),
            opt(p.map(|p| p.fixing_s)),
            opt(p.map(|p| p.annealing_s)),
            opt(p.map(|p| p.merging_s)),
            self.cost_report.macro_latency_ns.to_string(),
            self.cost_report.macro_energy_pj.to_string(),
        ]
    }
}

pub fn csv_string(rows: &[Vec<String>], header: &[&str]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 fields")
}

/// Instance name to optimal tour length.
pub type Registry = BTreeMap<String, u64>;

pub fn load_registry(path: &Path) -> CliResult<Registry> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read registry {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(format!("registry {}: {e}", path.display())))
}
