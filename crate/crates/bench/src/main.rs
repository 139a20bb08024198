use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fo_bench::checks::evaluate;
use fo_bench::config::{self, ConfigError, RunConfig};
use fo_bench::registry::{build_problem, run_method, BuiltProblem, RunArtifacts, RunError};
use fo_bench::{acceptance, csv, svg};

/// Benchmark harness for the first-order optimization toolkit.
#[derive(Parser)]
#[command(name = "fobench", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one method on one problem from a config file.
    Run {
        config: PathBuf,
        /// Output directory for trace/plot files.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the problem seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Skip plot emission.
        #[arg(long)]
        no_plot: bool,
    },
    /// Execute every method in the config on the same problem and overlay.
    Compare {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        no_plot: bool,
    },
    /// Run the full verification suite and print the bound table.
    VerifySuite {
        /// Optional directory for the report file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            seed,
            no_plot,
        } => run_command(&config, out.as_deref(), seed, no_plot, false),
        Command::Compare {
            config,
            out,
            seed,
            no_plot,
        } => run_command(&config, out.as_deref(), seed, no_plot, true),
        Command::VerifySuite { out } => verify_suite(out.as_deref()),
    }
}

const EXIT_CONFIG: u8 = 1;
const EXIT_BOUND_FAILURE: u8 = 2;
const EXIT_DIVERGENCE: u8 = 3;

fn fail_config(e: &ConfigError) -> ExitCode {
    eprintln!("{e}");
    ExitCode::from(EXIT_CONFIG)
}

fn run_command(
    path: &Path,
    out_dir: Option<&Path>,
    seed: Option<u64>,
    no_plot: bool,
    compare: bool,
) -> ExitCode {
    let cfg = match config::load(path) {
        Ok(c) => c,
        Err(e) => return fail_config(&e),
    };
    let methods: Vec<_> = if compare {
        if cfg.methods.is_empty() {
            return fail_config(&ConfigError("field 'methods': empty method list".into()));
        }
        cfg.methods.clone()
    } else {
        match &cfg.method {
            Some(m) => vec![m.clone()],
            None => return fail_config(&ConfigError("field 'method': missing".into())),
        }
    };

    let built = match build_problem(&cfg.problem, seed) {
        Ok(b) => b,
        Err(e) => return fail_config(&e),
    };

    // Independent runs may proceed concurrently, capped by FOBENCH_THREADS.
    let threads = std::env::var("FOBENCH_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(1);

    let mut results: Vec<Option<Result<RunArtifacts, RunError>>> =
        (0..methods.len()).map(|_| None).collect();
    for chunk in (0..methods.len()).collect::<Vec<_>>().chunks(threads.max(1)) {
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for &idx in chunk {
                let m = &methods[idx];
                let built_ref = &built;
                let iters = cfg.budget.iterations;
                handles.push((idx, scope.spawn(move || run_method(built_ref, m, iters))));
            }
            for (idx, h) in handles {
                results[idx] = Some(h.join().expect("runner thread panicked"));
            }
        });
    }

    let mut series: Vec<(String, Vec<csv::TraceRow>)> = Vec::new();
    let mut last_artifacts: Option<RunArtifacts> = None;
    for (m, r) in methods.iter().zip(results.into_iter()) {
        match r.expect("scheduled") {
            Ok(artifacts) => {
                series.push((m.name.clone(), artifacts.rows.clone()));
                last_artifacts = Some(artifacts);
            }
            Err(RunError::Config(e)) => return fail_config(&e),
            Err(RunError::Solver(fo_core::Error::Divergence { step })) => {
                eprintln!("divergence: non-finite value at step {step}");
                return ExitCode::from(EXIT_DIVERGENCE);
            }
            Err(RunError::Solver(e)) => {
                eprintln!("solver error: {e}");
                return ExitCode::from(EXIT_DIVERGENCE);
            }
        }
    }

    // Trace CSV.
    let csv_text = if compare {
        csv::render_compare(&series)
    } else {
        csv::render(&series[0].1)
    };
    let trace_name = cfg
        .outputs
        .trace
        .clone()
        .unwrap_or_else(|| if compare { "compare.csv".into() } else { "trace.csv".into() });
    let trace_path = join_out(out_dir, &trace_name);
    if let Err(e) = write_file(&trace_path, &csv_text) {
        eprintln!("cannot write {}: {e}", trace_path.display());
        return ExitCode::from(EXIT_CONFIG);
    }
    println!("trace: {}", trace_path.display());

    // Plot, derived from the CSV file (never the in-memory trace).
    if !no_plot {
        let plot_name = cfg
            .outputs
            .plot
            .clone()
            .unwrap_or_else(|| trace_name.replace(".csv", ".svg"));
        let plot_path = join_out(out_dir, &plot_name);
        let f_star = match &built {
            BuiltProblem::Min(m) => m.problem.known_optimum.as_ref().map(|(_, f)| *f),
            _ => Some(0.0),
        };
        match std::fs::read_to_string(&trace_path) {
            Ok(text) => {
                let svg_text = svg::plot_csv(&text, f_star, &title_of(&cfg));
                if write_file(&plot_path, &svg_text).is_ok() {
                    println!("plot: {}", plot_path.display());
                }
            }
            Err(e) => eprintln!("plot skipped: {e}"),
        }
    }

    // Bound checks against the last run (single-method runs have one).
    let mut failed = false;
    if !cfg.verify.is_empty() {
        let artifacts = last_artifacts.as_ref().expect("at least one run");
        for id in &cfg.verify {
            match evaluate(id, &built, artifacts) {
                Ok(check) => {
                    println!(
                        "check {:<14} measured {:>14.6e}  predicted {:>14.6e}  {}",
                        check.name,
                        check.measured,
                        check.predicted,
                        if check.pass { "PASS" } else { "FAIL" }
                    );
                    failed |= !check.pass;
                }
                Err(e) => return fail_config(&e),
            }
        }
    }
    if failed {
        ExitCode::from(EXIT_BOUND_FAILURE)
    } else {
        ExitCode::SUCCESS
    }
}

fn title_of(cfg: &RunConfig) -> String {
    format!("{} (seed {:?})", cfg.problem.family, cfg.problem.seed)
}

fn join_out(out_dir: Option<&Path>, name: &str) -> PathBuf {
    match out_dir {
        Some(d) => d.join(name),
        None => PathBuf::from(name),
    }
}

fn write_file(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, text)
}

fn verify_suite(out_dir: Option<&Path>) -> ExitCode {
    let reports = acceptance::all();
    let table = acceptance::render_report(&reports);
    print!("{table}");
    for r in &reports {
        println!(
            "criterion {:>2} [{}] {}",
            r.id,
            if r.pass() { "PASS" } else { "FAIL" },
            r.title
        );
    }
    if let Some(dir) = out_dir {
        let path = dir.join("verify-report.txt");
        if write_file(&path, &table).is_ok() {
            println!("report: {}", path.display());
        }
    }
    if reports.iter().all(|r| r.pass()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_BOUND_FAILURE)
    }
}
