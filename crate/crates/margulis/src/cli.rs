//! Command-line interface.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use margulis_core::group::schottky_intervals;
use margulis_core::isospectral::{spectrum_map_rank, strong_reconstruct};
use margulis_core::spectrum::{canonical_orbit, convergence_report, delta_family, frame_distance_report};
use margulis_core::word::enumerate_words;
use margulis_core::{affine::radiance, Error as CoreError, ReconstructOptions, Tolerances, Verdict};

use crate::format::{self, fmt_f64, FormatError, GroupFile, Metadata};
use crate::random::{self, Perturbation, SchottkyParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformMode {
    /// Random affine conjugate with orientation-preserving linear part.
    Conjugate,
    /// Random affine conjugate with orientation-reversing linear part.
    ReverseConjugate,
    PerturbEigenvalue,
    PerturbAngle,
    PerturbTranslation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Report {
    /// `d(g̃ⁿ(v), x⁺)` along the canonical orbit.
    Orbit,
    /// Frame distances along the canonical δ-family.
    Frames,
}

#[derive(Debug, Parser)]
#[command(name = "margulis", version, about = "Margulis spectra and affine conjugacy of Lorentzian groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random non-radiant Schottky deformation.
    Generate {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// Defaults depend on the rank.
        #[arg(long)]
        t_min: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        theta_jitter: f64,
        #[arg(long, default_value_t = 1.0)]
        cocycle_scale: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Conjugate or perturb a group file.
    Transform {
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: TransformMode,
        #[arg(long, default_value_t = 1e-3)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        generator: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Marked Margulis spectrum up to a word length.
    Spectrum {
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide affine conjugacy; exit 0 conjugate, 1 mismatch, 2 precondition, 3 inconclusive.
    Reconstruct {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convergence reports for eigenvector dynamics.
    Converge {
        #[arg(long, value_enum, default_value_t = Report::Orbit)]
        report: Report,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        #[arg(long, default_value_t = 12)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank of the spectrum map on H¹.
    Rank {
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load(path: &Path, tol: &Tolerances) -> Result<margulis_core::Presentation, CliError> {
    Ok(GroupFile::read(path)?.to_presentation(tol)?)
}

/// Runs a command and returns the process exit code; diagnostics go to
/// stderr.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    let tol = Tolerances::default();
    match cli.command {
        Command::Generate { rank, t_min, t_max, theta_jitter, cocycle_scale, seed, out } => {
            if rank < 2 {
                return Err(CliError::Usage("rank must be at least 2".into()));
            }
            let defaults = SchottkyParams::for_rank(rank);
            let (t_min, t_max) = (t_min.unwrap_or(defaults.t_min), t_max.unwrap_or(defaults.t_max));
            if !(t_min > 0.0 && t_max >= t_min) {
                return Err(CliError::Usage("need 0 < t-min <= t-max".into()));
            }
            let params = SchottkyParams { rank, t_min, t_max, theta_jitter, cocycle_scale };
            let p = random::schottky_deformation(&params, &mut random::rng(seed), &tol)?;
            let margin = schottky_intervals(&p.linear_parts(), 0.0, &tol)?.map(|s| s.min_gap).unwrap_or(f64::NAN);
            let (_, residual) = radiance(&p.gens);
            eprintln!("schottky margin\t{}", fmt_f64(margin));
            eprintln!("radiance residual\t{}", fmt_f64(residual));
            if random::radiant_point(&p).is_some() {
                eprintln!("warning: generated group is radiant");
            }
            let meta = Metadata { seed: Some(seed), description: format!("rank {rank} Schottky deformation, t in [{t_min}, {t_max}], cocycle scale {cocycle_scale}") };
            emit(&out, &GroupFile::from_presentation(&p, meta).to_json())?;
            Ok(EXIT_OK)
        }
        Command::Transform { input, mode, delta, generator, seed, out } => {
            let file = GroupFile::read(&input)?;
            let p = file.to_presentation(&tol)?;
            if generator >= p.rank() {
                return Err(CliError::Usage(format!("generator {generator} out of range")));
            }
            let mut rng = random::rng(seed);
            let (q, what) = match mode {
                TransformMode::Conjugate => (p.conjugate_by(&random::random_conjugator(&mut rng, false, 2.0)), "affine conjugate".to_string()),
                TransformMode::ReverseConjugate => (p.conjugate_by(&random::random_conjugator(&mut rng, true, 2.0)), "orientation-reversing affine conjugate".to_string()),
                TransformMode::PerturbEigenvalue => (random::perturb(&p, Perturbation::Eigenvalue, generator, delta, &mut rng, &tol)?, format!("eigenvalue of g{} scaled by 1+{delta}", generator + 1)),
                TransformMode::PerturbAngle => (random::perturb(&p, Perturbation::EigendirectionAngle, generator, delta, &mut rng, &tol)?, format!("attracting point of g{} rotated by {delta}", generator + 1)),
                TransformMode::PerturbTranslation => (random::perturb(&p, Perturbation::Translation, generator, delta, &mut rng, &tol)?, format!("cocycle moved by {delta} off the coboundaries")),
            };
            let meta = Metadata { seed: Some(seed), description: format!("{what} of {}", file.metadata.description) };
            emit(&out, &GroupFile::from_presentation(&q, meta).to_json())?;
            Ok(EXIT_OK)
        }
        Command::Spectrum { input, max_len, format, out } => {
            let p = load(&input, &tol)?;
            let s = crate::par::marked_spectrum(&p, max_len, &tol)?;
            let text = match format {
                OutputFormat::Table => format::spectrum_table(&s),
                OutputFormat::Json => format::spectrum_json(&s),
            };
            emit(&out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Reconstruct { first, second, max_len, tol: alpha_tol, format, out } => {
            let p1 = load(&first, &tol)?;
            let p2 = load(&second, &tol)?;
            let opts = ReconstructOptions { alpha_tol, ..ReconstructOptions::default() };
            let cert = strong_reconstruct(&p1, &p2, max_len, &opts)?;
            let text = match format {
                OutputFormat::Table => format::certificate_table(&cert),
                OutputFormat::Json => format::certificate_json(&cert),
            };
            emit(&out, &text)?;
            Ok(match cert.verdict {
                Verdict::Conjugate => EXIT_OK,
                Verdict::Mismatch { word, delta } => {
                    eprintln!("mismatch: witness {word}, |Δα| = {}", fmt_f64(delta));
                    EXIT_MISMATCH
                }
                Verdict::Inconclusive { reason } => {
                    eprintln!("inconclusive: {reason}");
                    EXIT_INCONCLUSIVE
                }
            })
        }
        Command::Converge { report, lambda, n_max, steps, format, out } => {
            let rows: Vec<[f64; 4]> = match report {
                Report::Orbit => {
                    if !(lambda > 0.0 && lambda < 1.0) {
                        return Err(CliError::Usage("lambda must lie in (0, 1)".into()));
                    }
                    let (g, v) = canonical_orbit(lambda);
                    let r = convergence_report(&g, &v, n_max, &tol)?;
                    let beta = std::f64::consts::FRAC_1_SQRT_2;
                    r.iter()
                        .map(|&(n, d)| {
                            let l = lambda.powi(n as i32);
                            let predicted = l * (1.0 + l * l).sqrt() / (beta * (1.0 + l * l));
                            let ratio = if n == 0 { f64::NAN } else { d / r[n - 1].1 };
                            [n as f64, d, predicted, ratio]
                        })
                        .collect()
                }
                Report::Frames => (0..=steps)
                    .map(|k| {
                        let delta = std::f64::consts::FRAC_PI_2 * 10f64.powf(-(k as f64) * 0.5);
                        let (g, h) = delta_family(delta, 0.5, &tol)?;
                        let (d_pm, d_0) = frame_distance_report(&g, &h, &tol)?;
                        Ok([delta, d_pm, d_0, d_pm / d_0])
                    })
                    .collect::<Result<_, CoreError>>()?,
            };
            let header = match report {
                Report::Orbit => ["n", "distance", "closed_form", "ratio"],
                Report::Frames => ["delta", "d_pm", "d_0", "ratio"],
            };
            let text = match format {
                OutputFormat::Table => {
                    let mut s = header.join("\t");
                    s.push('\n');
                    for r in &rows {
                        let first = if report == Report::Orbit { format!("{}", r[0] as usize) } else { fmt_f64(r[0]) };
                        s.push_str(&format!("{first}\t{}\t{}\t{}\n", fmt_f64(r[1]), fmt_f64(r[2]), fmt_f64(r[3])));
                    }
                    s
                }
                OutputFormat::Json => {
                    let objs: Vec<serde_json::Map<String, serde_json::Value>> = rows
                        .iter()
                        .map(|r| header.iter().zip(r).map(|(k, v)| (k.to_string(), serde_json::json!(v.is_finite().then_some(*v)))).collect())
                        .collect();
                    format::to_json(&objs)
                }
            };
            emit(&out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Rank { input, max_len, out } => {
            let p = load(&input, &tol)?;
            let words = enumerate_words(p.rank(), &p.orders, max_len);
            let gens = p.linear_parts();
            let hyperbolic: Vec<_> = words
                .into_iter()
                .filter(|w| margulis_core::group::evaluate_linear(&gens, w).map(|g| margulis_core::lorentz::is_hyperbolic(&g, &tol)).unwrap_or(false))
                .collect();
            let rank = spectrum_map_rank(&gens, &hyperbolic, &tol)?;
            let dim = 3 * p.rank() - 3;
            emit(&out, &format!("words\t{}\nrank\t{rank}\ndim_h1\t{dim}\n", hyperbolic.len()))?;
            Ok(EXIT_OK)
        }
    }
}

/// Exit code for an error: malformed input and failed preconditions map to 2.
pub fn error_exit_code(_e: &CliError) -> i32 {
    EXIT_PRECONDITION
}
