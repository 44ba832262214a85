use std::io::Write;
use std::path::{Path, PathBuf};

use isingtsp::ising::Decrement;
use isingtsp::{estimate, parse_instance, solve_hierarchical, write_tour, BitWidth, Instance, SolveConfig};

use crate::args::{ReportFormat, SolveArgs};
use crate::config::ConfigFile;
use crate::error::{CliError, CliResult};
use crate::report::{csv_string, load_registry, Registry, SolveReport, CSV_HEADER, SCHEMA_VERSION};

/// Fully resolved `solve` settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveSettings {
    pub instance: PathBuf,
    pub max_cluster_size: usize,
    pub bits: BitWidth,
    pub seed: u64,
    pub macros: usize,
    pub chip_macros: usize,
    pub nonideal_eps: f64,
    pub optima: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub report: ReportFormat,
    pub deterministic: bool,
    pub decrement: Decrement,
    pub tour: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

pub fn host_parallelism() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

pub(crate) fn check_common(m: usize, macros: usize, eps: f64) -> CliResult<()> {
    if m < 4 {
        return Err(CliError::usage(format!("max cluster size must be at least 4, got {m}")));
    }
    if macros == 0 {
        return Err(CliError::usage("--macros must be at least 1"));
    }
    if !eps.is_finite() || eps < 0.0 {
        return Err(CliError::usage(format!("--nonideal-eps must be >= 0, got {eps}")));
    }
    Ok(())
}

impl SolveSettings {
    /// Flags over config file over defaults.
    pub fn resolve(args: &SolveArgs, cfg: &ConfigFile) -> CliResult<Self> {
        let instance = args
            .instance
            .clone()
            .or_else(|| cfg.instance.clone())
            .ok_or_else(|| CliError::usage("missing --instance"))?;
        let bits = match (args.bits, &cfg.bits) {
            (Some(b), _) => b,
            (None, Some(c)) => match c.to_vec().as_slice() {
                [b] => *b,
                _ => return Err(CliError::usage("config: solve takes a single bits value")),
            },
            (None, None) => BitWidth::default().get(),
        };
        let bits = BitWidth::new(bits).map_err(|e| CliError::usage(e.to_string()))?;
        let s = SolveSettings {
            instance,
            max_cluster_size: args.max_cluster_size.or(cfg.max_cluster_size).unwrap_or(12),
            bits,
            seed: args.seed.or(cfg.seed).unwrap_or(0),
            macros: args.macros.or(cfg.macros).unwrap_or_else(host_parallelism),
            chip_macros: args.chip_macros.or(cfg.chip_macros).unwrap_or(0),
            nonideal_eps: args.nonideal_eps.or(cfg.nonideal_eps).unwrap_or(0.0),
            optima: args.optima.clone().or_else(|| cfg.optima.clone()),
            trace: args.trace.clone().or_else(|| cfg.trace.clone()),
            report: args.report.or(cfg.report).unwrap_or(ReportFormat::Json),
            deterministic: args.deterministic || cfg.deterministic.unwrap_or(false),
            decrement: args
                .decrement
                .or(cfg.decrement)
                .map(Decrement::from)
                .unwrap_or_default(),
            tour: args.tour.clone().or_else(|| cfg.tour.clone()),
            output: args.output.clone(),
        };
        check_common(s.max_cluster_size, s.macros, s.nonideal_eps)?;
        Ok(s)
    }
}

pub fn read_instance(path: &Path) -> CliResult<Instance> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read instance {}: {e}", path.display())))?;
    let mut inst = parse_instance(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    if inst.name.is_empty() {
        inst.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
    }
    Ok(inst)
}

/// Everything one solve run needs besides the instance.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RunParams {
    pub m: usize,
    pub bits: BitWidth,
    pub seed: u64,
    pub macros: usize,
    pub chip_macros: usize,
    pub nonideal_eps: f64,
    pub decrement: Decrement,
    pub deterministic: bool,
    pub record_sweeps: bool,
}

pub(crate) fn run_one(
    inst: &Instance,
    p: &RunParams,
    registry: Option<&Registry>,
) -> CliResult<(SolveReport, isingtsp::Solution)> {
    let cfg = SolveConfig {
        max_cluster_size: p.m,
        bits: p.bits,
        seed: p.seed,
        max_parallel: p.macros,
        nonideal_eps: p.nonideal_eps,
        decrement: p.decrement,
        record_sweeps: p.record_sweeps,
    };
    let sol = solve_hierarchical(inst, &cfg).map_err(|e| match e {
        isingtsp::Error::Parse(_) => CliError::from(e),
        e => CliError::solve(format!("solve failed: {e}")),
    })?;
    let mut cost = estimate(&sol.trace, p.bits, Some(p.chip_macros));
    let optimal_ratio = registry
        .and_then(|r| r.get(&inst.name))
        .map(|&opt| sol.trace.tour_length as f64 / opt as f64);
    let phase_times = if p.deterministic {
        cost.host = None;
        None
    } else {
        Some(sol.trace.phases)
    };
    let report = SolveReport {
        schema: SCHEMA_VERSION,
        instance: inst.name.clone(),
        n: inst.dimension(),
        m: p.m,
        bits: p.bits.get(),
        seed: p.seed,
        tour_length: sol.trace.tour_length,
        optimal_ratio,
        phase_times,
        cost_report: cost,
    };
    Ok((report, sol))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::solve(format!("cannot write {}: {e}", path.display())))
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let cfg = ConfigFile::load_opt(args.config.as_deref())?;
    let s = SolveSettings::resolve(args, &cfg)?;
    let inst = read_instance(&s.instance)?;
    let registry = s.optima.as_deref().map(load_registry).transpose()?;
    if let Some(r) = &registry {
        if !r.contains_key(&inst.name) {
            let _ = writeln!(err, "warning: no registry entry for {}", inst.name);
        }
    }
    let params = RunParams {
        m: s.max_cluster_size,
        bits: s.bits,
        seed: s.seed,
        macros: s.macros,
        chip_macros: s.chip_macros,
        nonideal_eps: s.nonideal_eps,
        decrement: s.decrement,
        deterministic: s.deterministic,
        record_sweeps: s.trace.is_some(),
    };
    let (report, sol) = run_one(&inst, &params, registry.as_ref())?;

    if let Some(path) = &s.trace {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &sol.sweep_log {
            w.serialize(row).expect("in-memory write");
        }
        let bytes = w.into_inner().expect("flush");
        write_file(path, &String::from_utf8(bytes).expect("utf-8"))?;
    }
    if let Some(path) = &s.tour {
        write_file(path, &write_tour(&sol.tour, &inst.name))?;
    }
    let text = match s.report {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Csv => csv_string(&[report.csv_record()], &CSV_HEADER),
    };
    match &s.output {
        Some(path) => write_file(path, &text),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::solve(format!("cannot write report: {e}"))),
    }
}
