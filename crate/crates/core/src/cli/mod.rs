//! Command-line front end: `verify`, `run` and `sweep`.
//!
//! Settings are layered: defaults, then a TOML file given with `--config`,
//! then `QSWITCH_MAX_DIM`, then flags. Exit codes: 0 success, 1 a check
//! failed, 2 usage or configuration error.

mod config;
mod output;
mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

pub use config::{AmplitudeMode, CommandKind, ConfigLayer, EncodingFamily, Format, RunConfig, MAX_DIM_ENV};
pub use output::{json_document, num, SCHEMA};
pub use verify::{verify, Check, CheckStatus, Expectation, VerifyReport};

use crate::numeric::{policy, set_policy, NumericPolicy};
use crate::protocols::{
    classical_flag_encodings, dfs_phase_encodings, fixed_configuration_baseline, identical_encodings,
    necessity_sweep, privacy_report, run_bipartite_establishment, run_ghz_distribution, run_private_dit,
    run_private_dit_all, Protocol, PERFECT_TOL,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Lib(#[from] crate::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "qswitch", version, about = "Coherently controlled erasing channels: checks, protocol runs and sweeps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Commands,
}

#[derive(Debug, Subcommand)]
pub enum Commands {
    /// Check the coincidence identities, closed forms and DFS preservation
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Vacuum amplitudes for the controlled choice
        #[arg(long, value_enum)]
        choice_amplitudes: Option<AmplitudeMode>,
        /// Seed for random-seeded amplitudes
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run one protocol and write its transcript
    Run {
        /// private-dit, bipartite, ghz or fixed-baseline
        protocol: Option<Protocol>,
        /// Message for private-dit
        #[arg(long)]
        x: Option<usize>,
        /// Encoding family for fixed-baseline
        #[arg(long, value_enum)]
        encodings: Option<EncodingFamily>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sweep a protocol over Schmidt spectra of the resource
    Sweep {
        /// private-dit, bipartite or ghz
        protocol: Option<Protocol>,
        /// Grid START:END:POINTS for the first Schmidt coefficient
        #[arg(long)]
        alpha: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// TOML file with any of the flag values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Qudit dimension
    #[arg(long)]
    pub d: Option<usize>,
    /// Number of receivers (transmission lines)
    #[arg(long, visible_alias = "n")]
    pub receivers: Option<usize>,
    /// max, schmidt:λ0,λ1,… or file:PATH
    #[arg(long)]
    pub resource: Option<String>,
    /// Output file (standard output if absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Tolerance for pass/fail verdicts
    #[arg(long)]
    pub tol: Option<f64>,
    /// Largest Hilbert-space dimension allowed
    #[arg(long)]
    pub max_dim: Option<usize>,
}

impl CommonArgs {
    fn layer(self, command: CommandKind) -> (Option<PathBuf>, ConfigLayer) {
        (
            self.config,
            ConfigLayer {
                command: Some(command),
                d: self.d,
                receivers: self.receivers,
                resource: self.resource,
                out: self.out,
                format: self.format,
                tol: self.tol,
                max_dim: self.max_dim,
                ..ConfigLayer::default()
            },
        )
    }
}

impl Cli {
    /// Resolved configuration, reading the config file and environment.
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let (path, flags) = match self.command {
            Commands::Verify {
                common,
                choice_amplitudes,
                seed,
            } => {
                let (p, mut l) = common.layer(CommandKind::Verify);
                l.choice_amplitudes = choice_amplitudes;
                l.seed = seed;
                (p, l)
            }
            Commands::Run {
                protocol,
                x,
                encodings,
                common,
            } => {
                let (p, mut l) = common.layer(CommandKind::Run);
                l.protocol = protocol;
                l.x = x;
                l.encodings = encodings;
                (p, l)
            }
            Commands::Sweep { protocol, alpha, common } => {
                let (p, mut l) = common.layer(CommandKind::Sweep);
                l.protocol = protocol;
                l.alpha = alpha;
                (p, l)
            }
        };
        let file = path.as_deref().map(ConfigLayer::load).transpose()?;
        let env = std::env::var(MAX_DIM_ENV).ok();
        RunConfig::resolve(file, env.as_deref(), flags)
    }
}

/// What one invocation produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub payload: String,
    pub summary: String,
    pub exit_code: u8,
}

/// Executes a resolved configuration without touching files or streams.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    set_policy(NumericPolicy {
        max_dim: cfg.max_dim,
        ..policy()
    });
    match cfg.command {
        CommandKind::Verify => {
            let r = verify(cfg)?;
            let payload = match cfg.format() {
                Format::Json => json_document(cfg, &r),
                Format::Csv => output::verify_csv(&r),
            };
            Ok(Outcome {
                payload,
                summary: output::verify_summary(&r),
                exit_code: if r.passed { 0 } else { 1 },
            })
        }
        CommandKind::Run => run(cfg),
        CommandKind::Sweep => sweep(cfg),
    }
}

fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let protocol = cfg.protocol()?;
    let (d, n) = (cfg.d, cfg.receivers);
    if protocol == Protocol::FixedBaseline {
        let enc = match cfg.encodings {
            EncodingFamily::DfsPhase => dfs_phase_encodings(d)?,
            EncodingFamily::ClassicalFlag => classical_flag_encodings(d)?,
            EncodingFamily::Identical => identical_encodings(d)?,
        };
        let r = fixed_configuration_baseline(d, &enc)?;
        let payload = match cfg.format() {
            Format::Json => json_document(cfg, &json!({ "encodings": cfg.encodings, "baseline": r })),
            Format::Csv => output::baseline_csv(&r),
        };
        let summary = format!(
            "fixed-baseline d={d}: bob_success={} bound={} charlie_min_trace_distance={} leak_certified={} implication_holds={}\n",
            num(r.bob_success),
            num(r.bound),
            num(r.min_pairwise_trace_distance),
            r.leak_certified,
            r.implication_holds
        );
        return Ok(Outcome {
            payload,
            summary,
            exit_code: if r.implication_holds { 0 } else { 1 },
        });
    }

    let resource = cfg.resource_state()?;
    let (t, extra, summary) = match protocol {
        Protocol::PrivateDit => {
            let t = run_private_dit(d, cfg.x, &resource)?;
            let privacy = privacy_report(&run_private_dit_all(d, &resource)?)?;
            let summary = format!(
                "private-dit d={d} x={} resource={}: success={} charlie_max_trace_distance={} charlie_pmf_max_deviation={}\n",
                cfg.x,
                resource.description(),
                num(t.metric("success_probability").unwrap_or(f64::NAN)),
                num(privacy.max_charlie_trace_distance),
                num(privacy.max_charlie_pmf_deviation)
            );
            (t, Some(privacy), summary)
        }
        Protocol::Bipartite | Protocol::Ghz => {
            let t = if protocol == Protocol::Bipartite {
                run_bipartite_establishment(d, &resource)?
            } else {
                run_ghz_distribution(d, n, &resource)?
            };
            let ggm = t.metric("ggm_pre_measurement").map(num).unwrap_or_else(|| "n/a".into());
            let summary = format!(
                "{protocol} d={d} N={} resource={}: mean_fidelity={} min_branch_fidelity={} ggm_pre_measurement={ggm}\n",
                t.params.n_lines,
                resource.description(),
                num(t.metric("mean_fidelity").unwrap_or(f64::NAN)),
                num(t.metric("min_branch_fidelity").unwrap_or(f64::NAN)),
            );
            (t, None, summary)
        }
        Protocol::FixedBaseline => unreachable!("handled above"),
    };
    let payload = match cfg.format() {
        Format::Json => match &extra {
            Some(p) => json_document(cfg, &json!({ "transcript": t, "privacy": p })),
            None => json_document(cfg, &json!({ "transcript": t })),
        },
        Format::Csv => output::transcript_csv(&t),
    };
    Ok(Outcome {
        payload,
        summary,
        exit_code: 0,
    })
}

fn sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let protocol = cfg.protocol()?;
    if protocol == Protocol::FixedBaseline {
        return Err(CliError::Config("fixed-baseline cannot be swept".into()));
    }
    let grid = cfg.grid()?;
    let table = necessity_sweep(protocol, cfg.d, cfg.receivers, &grid)?;
    let cert = table.certify(PERFECT_TOL);
    let payload = match cfg.format() {
        Format::Json => json_document(cfg, &json!({ "table": table, "certificate": cert })),
        Format::Csv => output::sweep_csv(&table),
    };
    let summary = format!(
        "sweep {protocol} d={} N={}: {} rows, perfect at {:?}, uniform at {:?}, perfect-only-at-uniform {} (tol {:.0e})\n",
        cfg.d,
        table.n_lines,
        table.rows.len(),
        cert.perfect_rows,
        cert.uniform_rows,
        if cert.holds { "holds" } else { "FAILS" },
        PERFECT_TOL
    );
    Ok(Outcome {
        payload,
        summary,
        exit_code: if cert.holds { 0 } else { 1 },
    })
}

/// Parses `args` (program name first), executes, writes the payload to
/// `--out` or standard output, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = cli.into_config().and_then(|cfg| {
        let outcome = execute(&cfg)?;
        match &cfg.out {
            Some(path) => {
                std::fs::write(path, &outcome.payload)?;
                print!("{}", outcome.summary);
            }
            None => {
                print!("{}", outcome.payload);
                eprint!("{}", outcome.summary);
            }
        }
        Ok(outcome.exit_code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
