//! `quent` — entanglement measures for bipartite qudit states.
//!
//! Subcommands: `measure` (per-state report), `verify` (randomized identity
//! campaigns), `roof` (convex-roof minimization), `sample` (seeded state
//! generation). Exit codes: 0 success / all checks pass, 1 verified failure
//! or non-convergence, 2 input error.

use quent_cli::{checks, report, statefile};

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use quent_core::measures::measure_report;
use quent_core::rng::derive_seed;
use quent_core::roof::{convex_roof, wootters_concurrence_mixed, OptimizerConfig, RoofMeasure};
use quent_core::states::{
    random_mixed_state, random_pure_state, random_schmidt_vector, BipartiteDims,
};

use checks::{dims_for, run_check, CheckKind, VerifyReport};
use report::{MeasureReportDoc, RoofDoc};
use statefile::{read_state_file, StateFile};

#[derive(Parser)]
#[command(
    name = "quent",
    version,
    about = "Negativity, concurrence, and invariants for bipartite qudits"
)]
struct Cli {
    /// Worker threads for verification campaigns (default: all cores).
    /// Reports are byte-identical for any value.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureChoice {
    Concurrence,
    Negativity,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SampleKind {
    Pure,
    Mixed,
    Schmidt,
}

#[derive(Subcommand)]
enum Command {
    /// Compute all measures, invariants, and identity residuals for a state.
    Measure {
        /// State file (kind pure | mixed | schmidt).
        #[arg(long)]
        input: PathBuf,
        /// Report destination; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// Run randomized verification campaigns over the measure identities.
    Verify {
        /// Comma-separated check names, or "all".
        #[arg(long, default_value = "all")]
        checks: String,
        /// Dimension spec, e.g. "2..8", "3", "2x3", "2x2,3x3". Checks tied
        /// to a specific dimension ignore this.
        #[arg(long)]
        dims: Option<String>,
        /// Samples per (check, dimension).
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Tolerance override applied to every selected check.
        #[arg(long)]
        tol: Option<f64>,
        /// Report destination; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// Minimize a convex-roof measure over ensemble decompositions.
    Roof {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        measure: MeasureChoice,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        max_iterations: usize,
        /// Decomposition size L; default 2·rank(ρ).
        #[arg(long)]
        ensemble_size: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generate seeded random states or Schmidt vectors as files.
    Sample {
        #[arg(long, value_enum)]
        kind: SampleKind,
        /// Dimension spec; one file set per entry.
        #[arg(long, default_value = "2x2")]
        dims: String,
        /// Rank for mixed states; default full rank m·n.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory to write into (created if missing).
        #[arg(long, default_value = ".")]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: cannot configure {threads} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::Measure {
            input,
            output,
            format,
        } => cmd_measure(&input, output.as_deref(), format),
        Command::Verify {
            checks,
            dims,
            samples,
            seed,
            tol,
            output,
            format,
        } => cmd_verify(
            &checks,
            dims.as_deref(),
            samples,
            seed,
            tol,
            output.as_deref(),
            format,
        ),
        Command::Roof {
            input,
            measure,
            restarts,
            seed,
            max_iterations,
            ensemble_size,
            output,
        } => cmd_roof(
            &input,
            measure,
            restarts,
            seed,
            max_iterations,
            ensemble_size,
            output.as_deref(),
        ),
        Command::Sample {
            kind,
            dims,
            rank,
            count,
            seed,
            output,
        } => cmd_sample(kind, &dims, rank, count, seed, &output),
    }
}

fn cmd_measure(input: &Path, output: Option<&Path>, format: OutputFormat) -> Result<u8, String> {
    let state = read_state_file(input)?
        .into_state()
        .map_err(|e| format!("{}: {e}", input.display()))?;
    let report = measure_report(&state).map_err(|e| e.to_string())?;
    let doc = MeasureReportDoc::from(&report);
    let text = match format {
        OutputFormat::Json => to_pretty_json(&doc)?,
        OutputFormat::Csv => doc.to_csv(),
    };
    write_output(output, &text)?;
    Ok(0)
}

fn cmd_verify(
    checks_arg: &str,
    dims_arg: Option<&str>,
    samples: usize,
    seed: u64,
    tol: Option<f64>,
    output: Option<&Path>,
    format: OutputFormat,
) -> Result<u8, String> {
    if samples == 0 {
        return Err("--samples must be at least 1".into());
    }
    let kinds: Vec<CheckKind> = if checks_arg.trim() == "all" {
        CheckKind::ALL.to_vec()
    } else {
        checks_arg
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|name| {
                CheckKind::parse(name).ok_or_else(|| {
                    format!(
                        "unknown check '{name}'; valid checks: {}",
                        CheckKind::ALL.map(|k| k.name()).join(", ")
                    )
                })
            })
            .collect::<Result<_, _>>()?
    };
    if kinds.is_empty() {
        return Err("no checks selected".into());
    }
    let user_dims = dims_arg.map(parse_dims_spec).transpose()?;

    let mut outcomes = Vec::new();
    for kind in &kinds {
        for (m, n) in dims_for(*kind, user_dims.as_deref()) {
            if m.min(n) < 2 {
                return Err(format!(
                    "check '{}' needs min(m, n) ≥ 2, got {m}x{n}",
                    kind.name()
                ));
            }
            outcomes.push(run_check(*kind, m, n, samples, seed, tol));
        }
    }

    let all_pass = outcomes.iter().all(|o| o.pass);
    let campaign_id = format!(
        "{}-s{}-seed{}{}",
        kinds.iter().map(|k| k.name()).collect::<Vec<_>>().join("+"),
        samples,
        seed,
        dims_arg.map(|d| format!("-dims{d}")).unwrap_or_default()
    );
    let report = VerifyReport {
        campaign_id,
        master_seed: seed,
        pass: all_pass,
        checks: outcomes,
    };
    let text = match format {
        OutputFormat::Json => to_pretty_json(&report)?,
        OutputFormat::Csv => report.to_csv(),
    };
    write_output(output, &text)?;
    Ok(if all_pass { 0 } else { 1 })
}

fn cmd_roof(
    input: &Path,
    measure: MeasureChoice,
    restarts: usize,
    seed: u64,
    max_iterations: usize,
    ensemble_size: Option<usize>,
    output: Option<&Path>,
) -> Result<u8, String> {
    let rho = read_state_file(input)?
        .into_density_matrix()
        .map_err(|e| format!("{}: {e}", input.display()))?;
    let (roof_measure, name) = match measure {
        MeasureChoice::Concurrence => (RoofMeasure::Concurrence, "concurrence"),
        MeasureChoice::Negativity => (RoofMeasure::Negativity, "negativity"),
    };
    let config = OptimizerConfig {
        ensemble_size,
        restarts,
        max_iterations,
        seed,
        ..OptimizerConfig::default()
    };
    let result = convex_roof(&rho, roof_measure, &config).map_err(|e| e.to_string())?;
    let oracle = if rho.dims().m() == 2 && rho.dims().n() == 2 {
        Some(wootters_concurrence_mixed(&rho).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let doc = RoofDoc::new(name, [rho.dims().m(), rho.dims().n()], &result, oracle);
    write_output(output, &to_pretty_json(&doc)?)?;
    Ok(if result.converged { 0 } else { 1 })
}

fn cmd_sample(
    kind: SampleKind,
    dims_arg: &str,
    rank: Option<usize>,
    count: usize,
    seed: u64,
    output: &Path,
) -> Result<u8, String> {
    let dims_list = parse_dims_spec(dims_arg)?;
    std::fs::create_dir_all(output)
        .map_err(|e| format!("cannot create {}: {e}", output.display()))?;
    let mut file_index = 0u64;
    for (m, n) in dims_list {
        let dims = BipartiteDims::new(m, n).map_err(|e| e.to_string())?;
        for j in 0..count {
            let sample_seed = derive_seed(seed, file_index);
            file_index += 1;
            let (file, name) = match kind {
                SampleKind::Pure => (
                    StateFile::from_pure(&random_pure_state(dims, sample_seed)),
                    format!("pure_{m}x{n}_{j:04}.json"),
                ),
                SampleKind::Mixed => {
                    let r = rank.unwrap_or(dims.total());
                    let rho =
                        random_mixed_state(dims, r, sample_seed).map_err(|e| e.to_string())?;
                    (
                        StateFile::from_mixed(&rho),
                        format!("mixed_{m}x{n}_r{r}_{j:04}.json"),
                    )
                }
                SampleKind::Schmidt => {
                    let d = dims.d();
                    let k = random_schmidt_vector(d, sample_seed).map_err(|e| e.to_string())?;
                    (
                        StateFile::from_schmidt_form(&k),
                        format!("schmidt_d{d}_{j:04}.json"),
                    )
                }
            };
            let path = output.join(name);
            let text = to_pretty_json(&file)?;
            std::fs::write(&path, text)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        }
    }
    Ok(0)
}

/// Parse "2..8", "3", "2x3", or comma-separated combinations into (m, n)
/// pairs; bare numbers and ranges mean square d⊗d systems.
fn parse_dims_spec(spec: &str) -> Result<Vec<(usize, usize)>, String> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((lo, hi)) = item.split_once("..") {
            let lo: usize = lo
                .trim()
                .parse()
                .map_err(|_| format!("bad dimension range '{item}'"))?;
            let hi: usize = hi
                .trim()
                .parse()
                .map_err(|_| format!("bad dimension range '{item}'"))?;
            if lo == 0 || hi < lo {
                return Err(format!("bad dimension range '{item}'"));
            }
            out.extend((lo..=hi).map(|d| (d, d)));
        } else if let Some((m, n)) = item.split_once(['x', 'X']) {
            let m: usize = m
                .trim()
                .parse()
                .map_err(|_| format!("bad dimensions '{item}'"))?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| format!("bad dimensions '{item}'"))?;
            if m == 0 || n == 0 {
                return Err(format!("dimensions must be positive in '{item}'"));
            }
            out.push((m, n));
        } else {
            let d: usize = item
                .parse()
                .map_err(|_| format!("bad dimension '{item}'"))?;
            if d == 0 {
                return Err(format!("dimensions must be positive in '{item}'"));
            }
            out.push((d, d));
        }
    }
    if out.is_empty() {
        return Err(format!("empty dimension spec '{spec}'"));
    }
    Ok(out)
}

fn to_pretty_json<T: serde::Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| format!("serialization failed: {e}"))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), String> {
    match path {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("cannot write to stdout: {e}")),
    }
}
