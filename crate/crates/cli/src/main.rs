mod config;
mod report;
mod scenario;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::ScenarioConfig;
use scenario::RunOptions;

/// Check warped-product graph identities, Cheeger quotients and drift-Laplacian spectra.
#[derive(Parser)]
#[command(name = "warpgraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory; beats `outputs.directory` and `WARPGRAPH_OUT`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Grid size for the eigenvalue solver, overriding `probes.grid_size`.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Multiplier applied to every tolerance.
    #[arg(long, global = true, default_value_t = 1.0)]
    tol: f64,
    /// Evaluate probes on one thread.
    #[arg(long, global = true)]
    serial: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file.
    Run { config: PathBuf },
    /// Print the builtin warping and density catalog.
    ListBuiltins {
        /// Also echo the series coefficients of this scenario file.
        config: Option<PathBuf>,
    },
    /// Run a builtin suite (or `all`).
    Verify {
        #[arg(long)]
        suite: String,
    },
}

const OUT_ENV: &str = "WARPGRAPH_OUT";
const DEFAULT_OUT: &str = "warpgraph-out";

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` when some check failed.
fn dispatch(cli: &Cli) -> Result<bool> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        anyhow::bail!("--tol must be a positive number, got {}", cli.tol);
    }
    let opts = RunOptions {
        grid: cli.grid,
        tol_scale: cli.tol,
        serial: cli.serial,
    };
    match &cli.command {
        Command::Run { config } => {
            let cfg = ScenarioConfig::from_path(config)?;
            run_one(&cfg, cli.out.as_deref(), opts)
        }
        Command::ListBuiltins { config } => {
            print_catalog(config.as_deref())?;
            Ok(true)
        }
        Command::Verify { suite } => {
            let mut ok = true;
            for cfg in suites::load(suite)? {
                ok &= run_one(&cfg, cli.out.as_deref(), opts)?;
            }
            Ok(ok)
        }
    }
}

fn run_one(cfg: &ScenarioConfig, out: Option<&Path>, opts: RunOptions) -> Result<bool> {
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| cfg.outputs.directory.as_ref().map(PathBuf::from))
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let outcome = scenario::run(cfg, opts)?;
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let stem = dir.join(&cfg.name);
    let with_ext = |ext: &str| PathBuf::from(format!("{}{ext}", stem.display()));
    for format in &cfg.outputs.formats {
        match format.as_str() {
            "json" => outcome.bundle.write_json(&with_ext(".json"))?,
            "csv" => {
                outcome.bundle.write_csv(&with_ext(".checks.csv"))?;
                std::fs::write(with_ext(".scan.csv"), &outcome.scan_csv)?;
                if let Some(p) = &outcome.profile_csv {
                    std::fs::write(with_ext(".profile.csv"), p)?;
                }
            }
            _ => unreachable!("formats are validated"),
        }
    }
    outcome.bundle.print_table();
    println!("reports written to {}", dir.display());
    Ok(!outcome.bundle.failed())
}

struct Entry {
    kind: &'static str,
    name: &'static str,
    formula: &'static str,
    oracle: &'static str,
    m_note: &'static str,
}

const CATALOG: &[Entry] = &[
    Entry {
        kind: "tau",
        name: "euclidean",
        formula: "tau = t",
        oracle: "phi = t/m, quotient(r) = m/r, C0 = m/t_max (attained at t_max)",
        m_note: "phi and C0 scale with m; r * quotient(r) = m exactly",
    },
    Entry {
        kind: "tau",
        name: "hyperbolic",
        formula: "tau = sinh t",
        oracle: "C0 = m - 1 as t_max grows; m = 2: phi = tanh(t/2)",
        m_note: "C0 depends on m; the bottom of the spectrum tends to (m - 1)^2/4",
    },
    Entry {
        kind: "tau",
        name: "sphere",
        formula: "tau = sin t, t_max < pi",
        oracle: "m = 2: phi = tan(t/2), C0 = cot(t_max/2)",
        m_note: "closed form given for m = 2 only; Ricci = m - 1",
    },
    Entry {
        kind: "tau",
        name: "custom-series",
        formula: "tau = sum a_k t^k with a_0 = a_2 = 0, a_1 = 1",
        oracle: "none; phi by quadrature, checked against its ODE",
        m_note: "coefficients are shared across m",
    },
    Entry {
        kind: "psi",
        name: "zero",
        formula: "Psi = 0",
        oracle: "unweighted volume",
        m_note: "independent of m",
    },
    Entry {
        kind: "psi",
        name: "constant",
        formula: "Psi = b (psi_parameter)",
        oracle: "phi and C0 unchanged from Psi = 0",
        m_note: "independent of m",
    },
    Entry {
        kind: "psi",
        name: "quadratic",
        formula: "Psi = a t^2 (psi_parameter)",
        oracle: "Gaussian weight for a < 0; Bakry-Emery Ricci = -2a on flat space",
        m_note: "the Ricci shift -2a does not depend on m",
    },
    Entry {
        kind: "psi",
        name: "log-cosh",
        formula: "Psi = ln cosh t",
        oracle: "hyperbolic m = 2: phi = tanh(t)/2, C0 = 2 as t_max grows",
        m_note: "with hyperbolic tau, C0 = m as t_max grows",
    },
    Entry {
        kind: "psi",
        name: "series",
        formula: "Psi = sum b_k t^k with b_1 = 0 (psi_coefficients)",
        oracle: "none; phi by quadrature, checked against its ODE",
        m_note: "coefficients are shared across m",
    },
];

fn print_catalog(config: Option<&Path>) -> Result<()> {
    for e in CATALOG {
        println!("{:<4} {:<14} {}", e.kind, e.name, e.formula);
        println!("     oracle: {}", e.oracle);
        println!("     m: {}", e.m_note);
    }
    println!("suites: {}, all", suites::SUITES.map(|(n, _)| n).join(", "));
    if let Some(path) = config {
        let cfg = ScenarioConfig::from_path(path)?;
        if cfg.space.tau == "custom-series" {
            println!("{}: tau coefficients {:?}", cfg.name, cfg.space.tau_coefficients);
        }
        if cfg.space.psi == "series" {
            println!("{}: psi coefficients {:?}", cfg.name, cfg.space.psi_coefficients);
        }
    }
    Ok(())
}
