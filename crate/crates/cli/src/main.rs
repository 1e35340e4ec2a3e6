//! `invstates`: build, twirl, test and reduce unitary-invariant states.
//!
//! Exit codes: 0 on success, 1 when `check --strict` reports a violated
//! criterion or `verify` has a failing check, 2 on usage and format errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use invariant_states::json::to_canonical_string;
use invariant_states::simplex::{
    bisep_check, exact_twirl, is_sigma_ppt, mc_twirl, reduce_mixed_pair, reduce_pair, separability_polytope_check,
    separability_ppt_all, synthesize,
};
use invariant_states::verify::{self, Level};
use invariant_states::{BinaryVector, Operator, Rng, StateDescriptor};

#[derive(Parser)]
#[command(name = "invstates", version, about = "Unitary-invariant states of 2K qudits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a state descriptor from fidelities or a simplex vertex.
    Build {
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Number of Alice–Bob pairs; inferred from the other flags if omitted.
        #[arg(long = "K")]
        k: Option<usize>,
        /// Family bits σ₁…σ_K (default all zeros).
        #[arg(long)]
        sigma: Option<BinaryVector>,
        /// Comma-separated fidelities, indexed by α with α₁ most significant.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "vertex")]
        fid: Option<Vec<f64>>,
        /// Put all weight on one vertex α.
        #[arg(long, required_unless_present = "fid")]
        vertex: Option<BinaryVector>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the synthesized density matrix as QOPB.
        #[arg(long)]
        dense: Option<PathBuf>,
    },
    /// Project a dense state (QOPB or JSON matrix) onto the σ-invariant states.
    Twirl {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        sigma: Option<BinaryVector>,
        /// Use a Monte-Carlo average over this many Haar samples.
        #[arg(long)]
        mc: Option<usize>,
        #[arg(long, default_value_t = 0, requires = "mc")]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a separability criterion on a descriptor.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        /// `ppt:<mu bits>`, `ppt-all`, `polytope` or `bisep`.
        #[arg(long)]
        criterion: String,
        /// Exit with status 1 when the criterion is violated.
        #[arg(long)]
        strict: bool,
    },
    /// Trace out a pair `i` or a mixed pair `A_i ⊗ B_j`.
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, conflicts_with = "mixed", required_unless_present = "mixed")]
        pair: Option<usize>,
        /// `i,j` with i ≠ j.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        mixed: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the self-check suite.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Build { d, k, sigma, fid, vertex, out, dense } => {
            let desc = build(d, k, sigma, fid, vertex)?;
            if let Some(path) = dense {
                let rho = synthesize(&desc)?;
                fs::write(&path, rho.to_qopb()).with_context(|| format!("writing {}", path.display()))?;
            }
            emit(&desc.to_json_value(), out.as_deref())?;
        }
        Command::Twirl { input, sigma, mc, seed, out } => {
            let bytes = fs::read(&input).with_context(|| format!("reading {}", input.display()))?;
            let rho = Operator::from_bytes(&bytes)?;
            let n = rho.num_subsystems();
            if n % 2 != 0 {
                bail!("state has {n} subsystems; expected 2K");
            }
            let sigma = sigma.unwrap_or_else(|| BinaryVector::zeros(n / 2));
            let exact = exact_twirl(&rho, &sigma)?;
            match mc {
                None => emit(&exact.to_json_value(), out.as_deref())?,
                Some(samples) => {
                    let estimate = mc_twirl(&rho, &sigma, samples, &mut Rng::new(seed))?;
                    let distance = estimate.frobenius_distance(&synthesize(&exact)?)?;
                    let report = json!({
                        "distance": distance,
                        "matrix": estimate.to_json_value(),
                        "samples": samples,
                        "seed": seed,
                        "sigma": sigma.bits(),
                    });
                    emit(&report, out.as_deref())?;
                }
            }
        }
        Command::Check { input, criterion, strict } => {
            let desc = read_descriptor(&input)?;
            let verdict = match criterion.as_str() {
                "ppt-all" => separability_ppt_all(&desc),
                "polytope" => separability_polytope_check(&desc),
                "bisep" => bisep_check(&desc),
                other => {
                    let bits = other
                        .strip_prefix("ppt:")
                        .ok_or_else(|| anyhow!("unknown criterion `{other}`"))?;
                    is_sigma_ppt(&desc, &bits.parse()?)?
                }
            };
            emit(&verdict.to_json_value(), None)?;
            if strict && !verdict.is_satisfied() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Reduce { input, pair, mixed, out } => {
            let desc = read_descriptor(&input)?;
            let value = match (pair, mixed) {
                (Some(i), _) => reduce_pair(&desc, i)?.to_json_value(),
                (None, Some(ij)) => {
                    let [i, j] = ij[..] else {
                        bail!("--mixed takes exactly two indices i,j");
                    };
                    let m = reduce_mixed_pair(&desc, i, j)?;
                    json!({
                        "d": m.d,
                        "orphan": m.orphan_state().to_json_value(),
                        "pairs": m.pairs.as_ref().map(StateDescriptor::to_json_value),
                    })
                }
                (None, None) => unreachable!("clap requires --pair or --mixed"),
            };
            emit(&value, out.as_deref())?;
        }
        Command::Verify { level, seed } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let report = verify::run(level, seed);
            print!("{report}");
            if !report.all_passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn build(
    d: usize,
    k: Option<usize>,
    sigma: Option<BinaryVector>,
    fid: Option<Vec<f64>>,
    vertex: Option<BinaryVector>,
) -> Result<StateDescriptor> {
    let k = match (k, &sigma, &fid, &vertex) {
        (Some(k), ..) => k,
        (None, Some(s), ..) => s.len(),
        (None, None, Some(f), _) => f.len().max(2).ilog2() as usize,
        (None, None, None, Some(v)) => v.len(),
        (None, None, None, None) => 1,
    };
    if k == 0 {
        bail!("K must be at least 1");
    }
    let sigma = sigma.unwrap_or_else(|| BinaryVector::zeros(k));
    if sigma.len() != k {
        bail!("sigma has {} bits but K = {k}", sigma.len());
    }
    let desc = match (fid, vertex) {
        (Some(f), _) => StateDescriptor::new(d, sigma, f)?,
        (None, Some(alpha)) => {
            if alpha.len() != k {
                bail!("vertex has {} bits but K = {k}", alpha.len());
            }
            StateDescriptor::vertex(d, sigma, &alpha)?
        }
        (None, None) => unreachable!("clap requires --fid or --vertex"),
    };
    Ok(desc)
}

fn read_descriptor(path: &Path) -> Result<StateDescriptor> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(StateDescriptor::from_json_value(value)?)
}

fn emit(value: &Value, out: Option<&Path>) -> Result<()> {
    let text = to_canonical_string(value) + "\n";
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => {
            if let Err(e) = io::stdout().lock().write_all(text.as_bytes()) {
                // a closed downstream pipe (`| head`) is not an error
                if e.kind() != io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(())
}
