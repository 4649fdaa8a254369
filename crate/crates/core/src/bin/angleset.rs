//! Runs one JSON scenario and prints its report.
//!
//! Exit status: 0 when the verdict holds, 1 when it fails, 2 on bad input.

use angleset::scenario::{exit_code_for, run_scenario_file, Overrides, SERIES_NAMES};
use angleset::Error;
use clap::Parser;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "angleset", version, about = "Run an angle-set scenario and report the verdict")]
struct Args {
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the Monte-Carlo walk count.
    #[arg(long)]
    walks: Option<usize>,
    /// Override the angle tolerance (radians).
    #[arg(long)]
    tol: Option<f64>,
    /// Directory for the report and CSV series.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Series to write as CSV (repeatable): angle_trace, trajectory, level_set, aset_boundary.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SERIES_NAMES))]
    emit: Vec<String>,
}

fn fail(error: &Error) -> ExitCode {
    let body = match error {
        Error::Schema { path, message } => serde_json::json!({ "error": "schema", "path": path, "message": message }),
        other => serde_json::json!({ "error": other.to_string() }),
    };
    eprintln!("{body}");
    ExitCode::from(exit_code_for(error) as u8)
}

fn run(args: &Args) -> Result<i32, Error> {
    if !args.emit.is_empty() && args.out.is_none() {
        return Err(Error::Input("--emit needs --out".into()));
    }
    let overrides = Overrides { seed: args.seed, walks: args.walks, tol: args.tol };
    let output = run_scenario_file(&args.scenario, &overrides)?;
    let text = serde_json::to_string_pretty(&output.report).map_err(|e| Error::Io(e.to_string()))?;
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)?;
        let id = &output.report.id;
        for name in &args.emit {
            output.write_series(name, &dir.join(format!("{id}_{name}.csv")))?;
        }
        std::fs::write(dir.join(format!("{id}.report.json")), format!("{text}\n"))?;
    }
    // a closed pipe on stdout is not an error of the run
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    Ok(output.exit_code())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => fail(&e),
    }
}
