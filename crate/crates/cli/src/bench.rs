use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use isingtsp::ising::Decrement;
use isingtsp::BitWidth;

use crate::args::BenchArgs;
use crate::config::ConfigFile;
use crate::error::{CliError, CliResult};
use crate::report::{csv_string, load_registry, CSV_HEADER};
use crate::solve::{check_common, host_parallelism, read_instance, run_one, RunParams};

/// Columns of the seed-averaged summary.
pub const SUMMARY_HEADER: [&str; 8] = [
    "instance",
    "m",
    "bits",
    "seeds",
    "mean_tour_length",
    "mean_optimal_ratio",
    "mean_macro_latency_ns",
    "mean_macro_energy_pj",
];

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSettings {
    pub instances: Vec<PathBuf>,
    pub optima: Option<PathBuf>,
    pub m: Vec<usize>,
    pub bits: Vec<BitWidth>,
    pub seeds: Vec<u64>,
    pub macros: usize,
    pub chip_macros: usize,
    pub nonideal_eps: f64,
    pub decrement: Decrement,
    pub deterministic: bool,
    pub output: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

/// Reads an instance list: one path per line, `#` starts a comment.
pub fn read_instance_list(path: &Path) -> CliResult<Vec<PathBuf>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read instance list {}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new(""));
    Ok(text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| base.join(l))
        .collect())
}

impl BenchSettings {
    pub fn resolve(args: &BenchArgs, cfg: &ConfigFile) -> CliResult<Self> {
        let list = args
            .instances
            .clone()
            .or_else(|| cfg.instances.clone())
            .ok_or_else(|| CliError::usage("missing --instances"))?;
        let bits = args
            .bits
            .clone()
            .or_else(|| cfg.bits.as_ref().map(|b| b.to_vec()))
            .unwrap_or_else(|| vec![2, 3, 4])
            .into_iter()
            .map(|b| BitWidth::new(b).map_err(|e| CliError::usage(e.to_string())))
            .collect::<CliResult<Vec<_>>>()?;
        let s = BenchSettings {
            instances: read_instance_list(&list)?,
            optima: args.optima.clone().or_else(|| cfg.optima.clone()),
            m: args
                .m
                .clone()
                .or_else(|| cfg.m.as_ref().map(|m| m.to_vec()))
                .unwrap_or_else(|| vec![8, 12]),
            bits,
            seeds: args
                .seeds
                .clone()
                .or_else(|| cfg.seeds.as_ref().map(|s| s.to_vec()))
                .unwrap_or_else(|| vec![0, 1]),
            macros: args.macros.or(cfg.macros).unwrap_or_else(host_parallelism),
            chip_macros: args.chip_macros.or(cfg.chip_macros).unwrap_or(0),
            nonideal_eps: args.nonideal_eps.or(cfg.nonideal_eps).unwrap_or(0.0),
            decrement: args
                .decrement
                .or(cfg.decrement)
                .map(Decrement::from)
                .unwrap_or_default(),
            deterministic: args.deterministic || cfg.deterministic.unwrap_or(false),
            output: args.output.clone(),
            summary: args.summary.clone(),
        };
        if s.instances.is_empty() || s.m.is_empty() || s.bits.is_empty() || s.seeds.is_empty() {
            return Err(CliError::usage(
                "bench needs at least one instance, m, bit width and seed",
            ));
        }
        for &m in &s.m {
            check_common(m, s.macros, s.nonideal_eps)?;
        }
        Ok(s)
    }
}

/// Averages bench rows over seeds, keyed by (instance, m, bits).
pub fn summarize(rows: &[Vec<String>]) -> Vec<Vec<String>> {
    let col = |name: &str| CSV_HEADER.iter().position(|&h| h == name).expect("known column");
    let (ci, cm, cb) = (col("instance"), col("m"), col("bits"));
    let metrics = [
        col("tour_length"),
        col("optimal_ratio"),
        col("macro_latency_ns"),
        col("macro_energy_pj"),
    ];
    let mut groups: BTreeMap<(String, usize, u32), Vec<&Vec<String>>> = BTreeMap::new();
    let mut first_seen = Vec::new();
    for r in rows {
        let key = (r[ci].clone(), r[cm].parse().unwrap_or(0), r[cb].parse().unwrap_or(0));
        if !groups.contains_key(&key) {
            first_seen.push(key.clone());
        }
        groups.entry(key).or_default().push(r);
    }
    first_seen
        .into_iter()
        .map(|key| {
            let g = &groups[&key];
            let mut out = vec![key.0.clone(), key.1.to_string(), key.2.to_string(), g.len().to_string()];
            for &c in &metrics {
                let vals: Vec<f64> = g.iter().filter_map(|r| r[c].parse().ok()).collect();
                out.push(if vals.len() == g.len() {
                    (vals.iter().sum::<f64>() / vals.len() as f64).to_string()
                } else {
                    String::new()
                });
            }
            out
        })
        .collect()
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::solve(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::solve(format!("cannot write: {e}"))),
    }
}

/// Runs every (instance, m, bits, seed) combination, in that nesting order.
pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> CliResult<()> {
    let cfg = ConfigFile::load_opt(args.config.as_deref())?;
    let s = BenchSettings::resolve(args, &cfg)?;
    let registry = s.optima.as_deref().map(load_registry).transpose()?;
    let mut rows = Vec::new();
    for path in &s.instances {
        let inst = read_instance(path)?;
        for &m in &s.m {
            for &bits in &s.bits {
                for &seed in &s.seeds {
                    let p = RunParams {
                        m,
                        bits,
                        seed,
                        macros: s.macros,
                        chip_macros: s.chip_macros,
                        nonideal_eps: s.nonideal_eps,
                        decrement: s.decrement,
                        deterministic: s.deterministic,
                        record_sweeps: false,
                    };
                    let (report, _) = run_one(&inst, &p, registry.as_ref())?;
                    rows.push(report.csv_record());
                }
            }
        }
    }
    emit(s.output.as_deref(), &csv_string(&rows, &CSV_HEADER), out)?;
    if let Some(path) = &s.summary {
        emit(Some(path), &csv_string(&summarize(&rows), &SUMMARY_HEADER), out)?;
    }
    Ok(())
}
