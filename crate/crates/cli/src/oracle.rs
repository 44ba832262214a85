use std::io::Write;

use isingtsp::build_distance_matrix;
use isingtsp::oracle::{exhaustive_cycle, held_karp_cycle};

use crate::args::{OracleArgs, OracleMethod};
use crate::error::{CliError, CliResult};
use crate::solve::read_instance;

/// Prints the optimal closed-tour length of a small instance.
pub fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> CliResult<()> {
    let inst = read_instance(&args.instance)?;
    let dm = build_distance_matrix(&inst.coords, inst.edge_weight_type)?;
    let (len, _) = match args.method {
        OracleMethod::HeldKarp => held_karp_cycle(&dm)?,
        OracleMethod::Exhaustive => exhaustive_cycle(&dm)?,
    };
    writeln!(out, "{len}").map_err(|e| CliError::solve(format!("cannot write: {e}")))
}
