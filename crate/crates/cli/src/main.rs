//! Command-line front end: run experiments, re-analyze snapshot files,
//! emit sampled circuits, print reference gaps, and self-validate.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use gapscope::config::ExperimentConfig;
use gapscope::{driver, io, report, validate, CliError};
use gapscope_core::eigen;
use gapscope_core::hamiltonian::{self, Hamiltonian};
use gapscope_core::observables::{ObservableMode, ObservableSet};
use gapscope_core::shadows::Method;
use gapscope_core::spectroscopy::{self, SpectroscopyConfig};

#[derive(Parser)]
#[command(
    name = "gapscope",
    version,
    about = "Energy-gap spectroscopy from randomized measurements on sampled time-evolution circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a full experiment from a config file and write
    /// snapshots.jsonl, spectrum.csv, peaks.json, and report.json.
    Run {
        /// Path to a TOML or JSON experiment config.
        config: PathBuf,
    },
    /// Re-run the classical pipeline on an existing snapshot file.
    Spectrum {
        /// Path to snapshots.jsonl.
        snapshots: PathBuf,
        #[command(flatten)]
        overrides: SpectrumArgs,
    },
    /// Sample evolution circuits only; write circuits.jsonl and
    /// sample_report.json with Γ and depth statistics.
    Sample {
        /// Path to a TOML or JSON experiment config.
        config: PathBuf,
    },
    /// Print reference energy gaps (closed form and/or dense
    /// diagonalization).
    Gap(GapArgs),
    /// Run the self-validation suite; exit 1 on any failure.
    Validate {
        /// Master seed for the stochastic checks.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args)]
struct SpectrumArgs {
    /// Observable locality q.
    #[arg(long, default_value_t = 3)]
    q: usize,
    /// Observable mode: all-subsets or contiguous-windows.
    #[arg(long, default_value = "all-subsets")]
    mode: String,
    /// Fraction of rows kept by the Ljung-Box ranking.
    #[arg(long, default_value_t = 0.10)]
    keep_fraction: f64,
    /// Ljung-Box lag count (default min(10, n_t/5)).
    #[arg(long)]
    lb_lags: Option<usize>,
    /// Number of dominant signals.
    #[arg(long, default_value_t = 5)]
    c: usize,
    /// Zero-padding multiple.
    #[arg(long, default_value_t = 4)]
    zero_pad: usize,
    /// Bins excluded around DC.
    #[arg(long, default_value_t = 2)]
    dc_exclude_bins: usize,
    /// Peak prominence threshold as a fraction of the band maximum.
    #[arg(long, default_value_t = 0.2)]
    min_prominence_fraction: f64,
    /// Output directory (defaults to the snapshot file's directory).
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Args)]
struct GapArgs {
    /// Model: heisenberg or tfim.
    #[arg(long)]
    model: String,
    /// Chain length.
    #[arg(long)]
    n: usize,
    /// Heisenberg XX coupling.
    #[arg(long, default_value_t = 1.0)]
    jx: f64,
    /// Heisenberg YY coupling.
    #[arg(long, default_value_t = 1.0)]
    jy: f64,
    /// Heisenberg ZZ coupling.
    #[arg(long, default_value_t = 1.0)]
    jz: f64,
    /// TFIM ZZ coupling.
    #[arg(long)]
    j: Option<f64>,
    /// TFIM transverse field.
    #[arg(long)]
    d: Option<f64>,
    /// Comma-separated level pair for the diagonalization gap
    /// (defaults to 0,1 when the width permits diagonalization).
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> gapscope::Result<ExitCode> {
    match cmd {
        Command::Run { config } => cmd_run(&config),
        Command::Spectrum {
            snapshots,
            overrides,
        } => cmd_spectrum(&snapshots, &overrides),
        Command::Sample { config } => cmd_sample(&config),
        Command::Gap(args) => cmd_gap(&args),
        Command::Validate { seed } => cmd_validate(seed),
    }
}

fn cmd_run(config_path: &Path) -> gapscope::Result<ExitCode> {
    let cfg = ExperimentConfig::load(config_path)?;
    let resolved = cfg.resolve()?;
    std::fs::create_dir_all(&resolved.output_dir)?;

    let started = Instant::now();
    let output = driver::run_experiment(&resolved.plan)?;
    let wall = started.elapsed().as_secs_f64();
    eprintln!(
        "collected {} records over {} time points in {wall:.1}s",
        output.set.records().len(),
        resolved.plan.grid().n_t()
    );

    let snap_path = resolved.output_dir.join("snapshots.jsonl");
    io::write_snapshots(&snap_path, &output.set, &resolved.config_sha)?;

    let spectrum =
        spectroscopy::analyze(&output.set, &resolved.observables, &resolved.spectroscopy)
            .map_err(CliError::from)?;
    io::write_spectrum_csv(&resolved.output_dir.join("spectrum.csv"), &spectrum)?;
    io::write_peaks_json(&resolved.output_dir.join("peaks.json"), &spectrum.peaks)?;

    let run_report = report::build_report(&resolved.plan, &output, &resolved.config_sha, wall);
    let report_json = serde_json::to_string_pretty(&run_report)
        .map_err(|e| CliError::Config(format!("report: {e}")))?;
    std::fs::write(resolved.output_dir.join("report.json"), report_json)?;

    for p in spectrum.peaks.iter().take(5) {
        println!("peak omega={:.6} lambda={:.6}", p.omega, p.lambda);
    }
    eprintln!("artifacts written to {}", resolved.output_dir.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_spectrum(snapshots: &Path, args: &SpectrumArgs) -> gapscope::Result<ExitCode> {
    let (set, _sha) = io::read_snapshots(snapshots)?;
    let mode = match args.mode.as_str() {
        "all-subsets" => ObservableMode::AllSubsets,
        "contiguous-windows" => ObservableMode::ContiguousWindows,
        other => {
            return Err(CliError::Config(format!(
                "--mode: unknown mode {other:?}; expected all-subsets or contiguous-windows"
            )));
        }
    };
    let obs =
        ObservableSet::enumerate(set.meta().n_qubits, args.q, mode).map_err(CliError::from)?;
    let cfg = SpectroscopyConfig {
        keep_fraction: args.keep_fraction,
        lb_lags: args.lb_lags,
        c: args.c,
        zero_pad: args.zero_pad,
        dc_exclude_bins: args.dc_exclude_bins,
        min_prominence_fraction: args.min_prominence_fraction,
    };
    let spectrum = spectroscopy::analyze(&set, &obs, &cfg).map_err(CliError::from)?;
    let out_dir = args.output_dir.clone().unwrap_or_else(|| {
        snapshots
            .parent()
            .unwrap_or(std::path::Path::new("."))
            .to_path_buf()
    });
    std::fs::create_dir_all(&out_dir)?;
    io::write_spectrum_csv(&out_dir.join("spectrum.csv"), &spectrum)?;
    io::write_peaks_json(&out_dir.join("peaks.json"), &spectrum.peaks)?;
    for p in spectrum.peaks.iter().take(5) {
        println!("peak omega={:.6} lambda={:.6}", p.omega, p.lambda);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sample(config_path: &Path) -> gapscope::Result<ExitCode> {
    let cfg = ExperimentConfig::load(config_path)?;
    let resolved = cfg.resolve()?;
    if resolved.plan.config().method != Method::Tepai {
        return Err(CliError::Config(
            "evolution.method: sample requires method \"tepai\"".into(),
        ));
    }
    std::fs::create_dir_all(&resolved.output_dir)?;
    let path = resolved.output_dir.join("circuits.jsonl");
    let mut w = std::io::BufWriter::new(std::fs::File::create(&path)?);
    let plan = &resolved.plan;
    let n_t = plan.grid().n_t();
    let m = plan.config().m_samples;
    // Per-time-point Γ and depth statistics alongside the circuits.
    let mut stats = Vec::with_capacity(n_t);
    for s in 1..=n_t {
        let mut depth_sum = 0usize;
        let mut max_depth = 0usize;
        let mut gate_sum = 0usize;
        let mut gamma_abs = 0.0;
        for mi in 0..m {
            let cell = plan.build_circuit(s, mi);
            let sampled = gapscope_core::evolution::SampledCircuit {
                gamma_signed: cell.gamma,
                gate_count: cell.circuit.len(),
                circuit: cell.circuit,
            };
            io::write_sampled_circuit(&mut w, &sampled)?;
            depth_sum += sampled.circuit.depth();
            max_depth = max_depth.max(sampled.circuit.depth());
            gate_sum += sampled.gate_count;
            gamma_abs = sampled.gamma_signed.abs();
        }
        let (trotter_depth, trotter_gates) = plan.trotter_reference(s);
        stats.push(serde_json::json!({
            "s": s,
            "t": plan.grid().time_at(s),
            "k_steps": plan.grid().steps_at(s),
            "gamma_abs": gamma_abs,
            "mean_depth": depth_sum as f64 / m as f64,
            "max_depth": max_depth,
            "mean_gate_count": gate_sum as f64 / m as f64,
            "trotter_depth": trotter_depth,
            "trotter_gate_count": trotter_gates,
        }));
    }
    use std::io::Write as _;
    w.flush()?;
    let report = serde_json::to_string_pretty(&serde_json::json!({
        "config_sha": resolved.config_sha,
        "per_time": stats,
    }))
    .map_err(|e| CliError::Config(format!("report: {e}")))?;
    std::fs::write(resolved.output_dir.join("sample_report.json"), report)?;
    eprintln!("circuits written to {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_gap(args: &GapArgs) -> gapscope::Result<ExitCode> {
    let (a, b) = match args.levels.as_deref() {
        Some([a, b]) => (*a, *b),
        Some(other) => {
            return Err(CliError::Config(format!(
                "--levels: expected exactly two indices, got {}",
                other.len()
            )));
        }
        None => (0, 1),
    };
    let h: Hamiltonian = match args.model.as_str() {
        "heisenberg" => {
            hamiltonian::Hamiltonian::heisenberg_chain(args.n, args.jx, args.jy, args.jz)
                .map_err(CliError::from)?
        }
        "tfim" => {
            let (j, d) = match (args.j, args.d) {
                (Some(j), Some(d)) => (j, d),
                _ => return Err(CliError::Config("--model tfim requires --j and --d".into())),
            };
            println!(
                "tfim closed-form gap (ground to first excited): {:.6}",
                hamiltonian::tfim_gap(args.n, j, d)
            );
            hamiltonian::Hamiltonian::tfim_chain(args.n, j, d).map_err(CliError::from)?
        }
        other => {
            return Err(CliError::Config(format!(
                "--model: unknown model {other:?}; expected heisenberg or tfim"
            )));
        }
    };
    // The diagonalization path is optional for wide chains unless level
    // indices were asked for explicitly.
    if args.levels.is_none() && args.n > gapscope_core::eigen::MAX_DIAG_QUBITS {
        eprintln!(
            "skipping diagonalization: {} qubits exceeds the dense limit",
            args.n
        );
        return Ok(ExitCode::SUCCESS);
    }
    let eig = eigen::eigendecompose(&h).map_err(CliError::from)?;
    let dim = eig.eigenvalues().len();
    if a >= dim || b >= dim {
        return Err(CliError::Config(format!(
            "--levels: indices ({a}, {b}) out of range for {dim} eigenstates"
        )));
    }
    println!("E[{a}] = {:.6}", eig.eigenvalues()[a]);
    println!("E[{b}] = {:.6}", eig.eigenvalues()[b]);
    println!(
        "diagonalization gap |E[{b}] - E[{a}]|: {:.6}",
        eig.gap(a, b)
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(seed: u64) -> gapscope::Result<ExitCode> {
    let results = validate::run_all(seed);
    let mut failures = 0;
    for r in &results {
        println!(
            "{}: {} — {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
        if !r.passed {
            failures += 1;
        }
    }
    if failures > 0 {
        return Err(CliError::Validation(format!(
            "{failures} of {} checks failed",
            results.len()
        )));
    }
    println!("all {} checks passed", results.len());
    Ok(ExitCode::SUCCESS)
}
