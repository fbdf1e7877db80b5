//! Command-line driver: run experiments from a config file, run invariant
//! suites, and derive plot-ready series from finished results directories.

mod config;
mod experiments;
mod plot;
mod table;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chrono::{SecondsFormat, Utc};
use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use config::{CliError, CliResult, Config};
use experiments::{run_experiment, RunOutput};
use kglab::verify::{run_suite, Suite};
use plot::{plot_view, View};

#[derive(Parser)]
#[command(name = "kglab", version, about = "Exact intersection measures, pair sums, and limsup experiments on the torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file and write results.
    Run {
        /// Path to the key=value config file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing). Defaults to the current
        /// directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker thread count; falls back to KGLAB_THREADS, then all cores.
        #[arg(long)]
        threads: Option<usize>,
        /// Replace the config's seed for sampling experiments.
        #[arg(long)]
        seed_override: Option<u64>,
    },
    /// Run a named invariant suite; exits 0 iff every check passes.
    Verify {
        /// One of: lemmas, basecase, inheritance, dichotomy, all.
        suite: String,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Emit a plot-ready CSV view from a finished results directory.
    Plotdata {
        /// Directory containing manifest.json and results.json.
        results_dir: PathBuf,
        /// One of: ratio-vs-q, fraction-vs-q, blocks, stripes-arcs,
        /// stripes-segments.
        view: String,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out, threads, seed_override } => {
            init_threads(threads);
            cmd_run(&config, out.as_deref(), seed_override)
        }
        Command::Verify { suite, threads } => {
            init_threads(threads);
            return cmd_verify(&suite);
        }
        Command::Plotdata { results_dir, view, out } => {
            cmd_plotdata(&results_dir, &view, out.as_deref())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn init_threads(flag: Option<usize>) {
    let n = flag.or_else(|| {
        std::env::var("KGLAB_THREADS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(n) = n {
        // Ignore failure: the global pool can only be set once (tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

fn cmd_run(config_path: &Path, out_dir: Option<&Path>, seed_override: Option<u64>) -> CliResult<()> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", config_path.display())))?;
    let cfg = Config::parse(&text)?;
    let experiment = cfg.kind()?.name();
    let started = Utc::now();
    let output = run_experiment(&cfg, seed_override)?;
    let finished = Utc::now();

    let dir = out_dir.unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;

    let csv = output.table.to_csv();
    let results_json = serde_json::to_string_pretty(&json!({
        "version": 1,
        "experiment": experiment,
        "columns": output.table.columns,
        "rows": output.table.to_json_rows(),
    }))
    .expect("results serialize");

    fs::write(dir.join("results.csv"), &csv)?;
    fs::write(dir.join("results.json"), &results_json)?;

    let manifest = manifest_json(
        experiment,
        &cfg,
        &output,
        seed_override,
        &started.to_rfc3339_opts(SecondsFormat::Micros, true),
        &finished.to_rfc3339_opts(SecondsFormat::Micros, true),
        &[("results.csv", csv.as_bytes()), ("results.json", results_json.as_bytes())],
    );
    fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest).expect("manifest serialize"),
    )?;
    println!("{experiment}: {} rows -> {}", output.table.rows.len(), dir.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn manifest_json(
    experiment: &str,
    cfg: &Config,
    output: &RunOutput,
    seed_override: Option<u64>,
    started: &str,
    finished: &str,
    files: &[(&str, &[u8])],
) -> Value {
    let mut checksums = Map::new();
    for (name, data) in files {
        checksums.insert((*name).into(), Value::String(sha256_hex(data)));
    }
    let widths: Map<String, Value> = output
        .widths
        .iter()
        .map(|(k, v)| ((*k).into(), json!(v)))
        .collect();
    let summary: Map<String, Value> = output
        .summary
        .iter()
        .map(|(k, v)| ((*k).into(), Value::String(v.clone())))
        .collect();
    json!({
        "version": 1,
        "experiment": experiment,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "config_sha256": sha256_hex(cfg.text.as_bytes()),
        "config_text": cfg.text,
        "seed_override": seed_override,
        "started_at": started,
        "finished_at": finished,
        "output_sha256": checksums,
        "enclosure_widths": widths,
        "summary": summary,
    })
}

fn cmd_verify(suite: &str) -> ExitCode {
    let suite: Suite = match suite.parse() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run_suite(suite) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    for check in &report.checks {
        let status = if check.passed { "pass" } else { "FAIL" };
        println!("{status}  {}  {}", check.name, check.detail);
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_plotdata(results_dir: &Path, view: &str, out: Option<&Path>) -> CliResult<()> {
    let view = View::parse(view)?;
    let manifest_path = results_dir.join("manifest.json");
    let manifest_text = fs::read_to_string(&manifest_path).map_err(|_| {
        CliError::Validation(format!("missing manifest: {}", manifest_path.display()))
    })?;
    let manifest: Value = serde_json::from_str(&manifest_text)
        .map_err(|e| CliError::Validation(format!("malformed manifest.json: {e}")))?;
    let config_text = manifest
        .get("config_text")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Validation("manifest lacks config_text".into()))?;
    let cfg = Config::parse(config_text)?;

    let results_text = fs::read_to_string(results_dir.join("results.json"))
        .map_err(|e| CliError::Validation(format!("cannot read results.json: {e}")))?;
    let results: Value = serde_json::from_str(&results_text)
        .map_err(|e| CliError::Validation(format!("malformed results.json: {e}")))?;
    let rows = results
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Validation("results.json lacks rows".into()))?;

    let table = plot_view(view, rows, &cfg)?;
    let csv = table.to_csv();
    match out {
        Some(path) => fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}
