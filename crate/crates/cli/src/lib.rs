//! Subcommand front end: synthesis, sampling, density and dictionary
//! diagnostics, fractional-Fourier checks, recovery, and verification.
//!
//! All reports are JSON with a fixed field order and no timestamps unless
//! `--stamp` is given, so identical inputs produce byte-identical outputs.
//! Errors print a single-line JSON diagnostic to stderr; exit codes are
//! 2 for malformed configuration or arguments, 3 for numerical failure,
//! 4 for file I/O failure.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use gaborpr_core::{
    best_approximation, build_dictionary, density_report, dyadic_centers, frft_signal,
    gabor_transform, global_phase_distance, io, magnitude_samples, muntz_partial_sums,
    nested_completeness_experiment, recover_rotated, recover_signal, rotate_product_set,
    rotation_identity_residual, verify_uniqueness, BandlimitedSignal, DensityConvention, Error,
    FrequencyGrid, LebesgueExponent, PadConfig, PointSet, ProductSamples, RecoveryConfig,
    RecoveryReport, TfPoint,
};

const PI: f64 = std::f64::consts::PI;

#[derive(Parser)]
#[command(
    name = "gaborpr",
    about = "Gabor magnitude sampling and phase retrieval for bandlimited signals",
    version
)]
struct Cli {
    /// Worker threads for data-parallel regions (0 = library default).
    /// Outputs are independent of the thread count.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Append a unix-seconds stamp to reports (off by default so repeated
    /// runs are byte-identical).
    #[arg(long, global = true)]
    stamp: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a seeded random bandlimited signal file.
    Synth {
        #[arg(long = "B")]
        b: f64,
        #[arg(long = "M")]
        m: usize,
        /// Integrability tag p in [1, inf]; accepts "inf".
        #[arg(long, default_value = "2", value_parser = parse_exponent)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the zero signal instead of a random one.
        #[arg(long)]
        zero: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample |Gf| on a product set (optionally rotated) into a CSV.
    Sample {
        #[arg(long)]
        signal: PathBuf,
        /// Positions, "start:step:count".
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Frequencies, "start:step:count" or "nat:N" for {1..N}.
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
        /// Rotate the product set by this angle (token or radians); the
        /// samples are then taken from the inversely rotated signal class.
        #[arg(long, value_parser = parse_theta, allow_hyphen_values = true)]
        theta: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Export a spectrogram as 8-bit PGM with a JSON sidecar.
    Gabor {
        #[arg(long)]
        signal: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
        #[arg(long)]
        out_pgm: PathBuf,
        #[arg(long)]
        meta: PathBuf,
        /// Also write the magnitudes as a measurement CSV.
        #[arg(long)]
        out_csv: Option<PathBuf>,
    },
    /// Density diagnostics of a point set against a band.
    Density {
        /// Declared lattice "start:step:count" (exact closed-form density).
        #[arg(long, conflicts_with = "points", allow_hyphen_values = true)]
        lattice: Option<String>,
        /// Generic point set from a single-column CSV.
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long = "B")]
        b: f64,
        /// Window lengths for the counting table, comma-separated.
        #[arg(long, default_value = "1,2,5,10,20")]
        r: String,
        #[arg(long, value_enum, default_value_t = ConventionArg::FullLine)]
        convention: ConventionArg,
        /// Seeded probe signals for the empirical sampling constant.
        #[arg(long, default_value_t = 8)]
        probes: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Gaussian-dictionary completeness diagnostics.
    Zalik {
        #[arg(long = "B")]
        b: f64,
        #[arg(long = "M", default_value_t = 65)]
        m: usize,
        /// Gaussian rate c.
        #[arg(long, default_value_t = std::f64::consts::TAU)]
        rate: f64,
        /// Half-width of the dyadic center family.
        #[arg(long, default_value_t = 1.0)]
        half_width: f64,
        /// Dyadic refinement counts, comma-separated (N gives N+1 centers).
        #[arg(long, default_value = "8,16,32")]
        counts: String,
        #[arg(long, default_value_t = 1e-13)]
        ridge: f64,
        /// Fourier frequency of the test target η ↦ e^{2πi f η}.
        #[arg(long, default_value_t = 1.0)]
        target_frequency: f64,
        /// Partial-sum table cutoffs for the reciprocal-sum diagnostic of
        /// the integer center enumeration.
        #[arg(long, default_value = "1,2,4,8,16,32,64,128,256,512,1024")]
        muntz_table: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fractional Fourier transform of a signal and the rotation-identity
    /// residual check.
    Frft {
        #[arg(long)]
        signal: PathBuf,
        #[arg(long, value_parser = parse_theta, allow_hyphen_values = true)]
        theta: f64,
        /// Write the transformed signal (padded profile) here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Check grid "start:step:count" applied to both axes.
        #[arg(long, allow_hyphen_values = true)]
        check_identity: Option<String>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Recover a signal from a measurement CSV and a config JSON.
    Recover {
        #[arg(long)]
        measurements: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: PathBuf,
        /// Ground-truth signal for the report's distance field.
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Exit 0 even when the run raises diagnostics warnings.
        #[arg(long)]
        allow_warnings: bool,
    },
    /// Compare two signals: magnitudes on a product set vs global phase.
    Verify {
        #[arg(long)]
        signal_a: PathBuf,
        #[arg(long)]
        signal_b: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ConventionArg {
    FullLine,
    Span,
}

impl From<ConventionArg> for DensityConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::FullLine => DensityConvention::FullLine,
            ConventionArg::Span => DensityConvention::Span,
        }
    }
}

/// Runs the CLI on arguments (without the binary name); returns the exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = std::iter::once("gaborpr".to_string())
        .chain(args.into_iter().map(Into::into))
        .collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            diagnostic("argument-error", &e.to_string());
            return 2;
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return 0;
        }
    };
    if cli.threads > 0 {
        // the global pool can only be installed once per process; later
        // requests with a different count keep the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    let stamp = if cli.stamp {
        Some(
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        )
    } else {
        None
    };
    match dispatch(cli.command, stamp) {
        Ok(code) => code,
        Err(e) => {
            let (kind, code) = classify(&e);
            diagnostic(kind, &e.to_string());
            code
        }
    }
}

fn classify(e: &Error) -> (&'static str, i32) {
    match e {
        Error::InvalidArgument(_)
        | Error::GridMismatch(_)
        | Error::MalformedInput(_)
        | Error::SupportOverflow(_) => ("invalid-input", 2),
        Error::IllPosed(_) | Error::DegenerateField(_) => ("numerical-failure", 3),
        Error::Io(_) => ("io-failure", 4),
    }
}

fn diagnostic(kind: &str, message: &str) {
    eprintln!(
        "{}",
        serde_json::json!({ "kind": kind, "error": message })
    );
}

// ---------------------------------------------------------------------------
// declarations and small parsers
// ---------------------------------------------------------------------------

fn parse_exponent(s: &str) -> Result<f64, String> {
    if s == "inf" {
        return Ok(f64::INFINITY);
    }
    s.parse::<f64>().map_err(|e| e.to_string())
}

/// Angle tokens pi, pi/2, pi/4, pi/6 (optionally negated) map exactly;
/// anything else parses as radians.
pub fn parse_theta(s: &str) -> Result<f64, String> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let v = match body {
        "pi" => PI,
        "pi/2" => PI / 2.0,
        "pi/4" => PI / 4.0,
        "pi/6" => PI / 6.0,
        other => other
            .parse::<f64>()
            .map_err(|e| format!("bad angle {s:?}: {e}"))?,
    };
    Ok(if neg { -v } else { v })
}

/// Lattice declaration "start:step:count".
pub fn parse_lattice(decl: &str) -> gaborpr_core::Result<PointSet> {
    let parts: Vec<&str> = decl.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::MalformedInput(format!(
            "expected start:step:count, got {decl:?}"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|e| Error::MalformedInput(format!("{decl:?}: {e}")))?;
    let step: f64 = parts[1]
        .parse()
        .map_err(|e| Error::MalformedInput(format!("{decl:?}: {e}")))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|e| Error::MalformedInput(format!("{decl:?}: {e}")))?;
    PointSet::lattice(start, step, count)
}

/// Frequency declaration: a lattice or "nat:N" for {1, …, N}.
pub fn parse_axis(decl: &str) -> gaborpr_core::Result<Vec<f64>> {
    if let Some(n) = decl.strip_prefix("nat:") {
        let n: usize = n
            .parse()
            .map_err(|e| Error::MalformedInput(format!("{decl:?}: {e}")))?;
        if n == 0 {
            return Err(Error::MalformedInput("nat:N needs N >= 1".into()));
        }
        return Ok((1..=n).map(|k| k as f64).collect());
    }
    Ok(parse_lattice(decl)?.points().to_vec())
}

fn parse_list<T: std::str::FromStr>(s: &str) -> gaborpr_core::Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<T>()
                .map_err(|e| Error::MalformedInput(format!("bad list entry {tok:?}: {e}")))
        })
        .collect()
}

/// Every subcommand requires its file arguments to name distinct paths.
fn ensure_distinct_paths(paths: &[Option<&PathBuf>]) -> gaborpr_core::Result<()> {
    let present: Vec<&PathBuf> = paths.iter().filter_map(|p| *p).collect();
    for (i, a) in present.iter().enumerate() {
        for b in &present[i + 1..] {
            if a == b {
                return Err(Error::MalformedInput(format!(
                    "paths must be distinct, {} is used twice",
                    a.display()
                )));
            }
        }
    }
    Ok(())
}

fn read_text(path: &Path) -> gaborpr_core::Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn write_text(path: &Path, text: &str) -> gaborpr_core::Result<()> {
    Ok(std::fs::write(path, text)?)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> gaborpr_core::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization");
    text.push('\n');
    write_text(path, &text)
}

fn read_signal(path: &Path) -> gaborpr_core::Result<BandlimitedSignal> {
    io::signal_from_json(&read_text(path)?)
}

// ---------------------------------------------------------------------------
// recover configuration
// ---------------------------------------------------------------------------

/// On-disk recover configuration. `theta` selects the rotated pipeline (it
/// may be a number or an angle token); without it the measurements are read
/// as a plain product set.
#[derive(Debug, Deserialize)]
struct RecoverConfigFile {
    #[serde(rename = "B")]
    b: f64,
    #[serde(rename = "M")]
    m: usize,
    ridge1: f64,
    ridge2: f64,
    #[serde(default)]
    theta: Option<serde_json::Value>,
    #[serde(default)]
    omega_decl: Option<String>,
    #[serde(default)]
    x_decl: Option<String>,
}

/// Config echo embedded in reports, with the angle resolved to radians.
#[derive(Debug, Serialize)]
struct ConfigEcho {
    #[serde(rename = "B")]
    b: f64,
    #[serde(rename = "M")]
    m: usize,
    ridge1: f64,
    ridge2: f64,
    theta: Option<f64>,
    omega_decl: Option<String>,
    x_decl: Option<String>,
}

#[derive(Serialize)]
struct RecoverOutput<'a> {
    config: &'a ConfigEcho,
    report: &'a RecoveryReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    stamp: Option<u64>,
}

fn resolve_theta(raw: &Option<serde_json::Value>) -> gaborpr_core::Result<Option<f64>> {
    match raw {
        None | Some(serde_json::Value::Null) => Ok(None),
        Some(serde_json::Value::Number(n)) => Ok(Some(n.as_f64().ok_or_else(|| {
            Error::MalformedInput("theta is not a finite number".into())
        })?)),
        Some(serde_json::Value::String(s)) => Ok(Some(
            parse_theta(s).map_err(Error::MalformedInput)?,
        )),
        Some(other) => Err(Error::MalformedInput(format!(
            "theta must be a number or token, got {other}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// subcommand handlers
// ---------------------------------------------------------------------------

fn dispatch(command: Command, stamp: Option<u64>) -> gaborpr_core::Result<i32> {
    match command {
        Command::Synth {
            b,
            m,
            p,
            seed,
            zero,
            out,
        } => {
            let p = LebesgueExponent::new(p)?;
            let signal = if zero {
                BandlimitedSignal::zero(FrequencyGrid::new(b, m)?, p)
            } else {
                BandlimitedSignal::random(b, m, p, seed)?
            };
            write_text(&out, &io::signal_to_json(&signal))?;
            Ok(0)
        }

        Command::Sample {
            signal,
            x,
            omega,
            theta,
            out,
        } => {
            ensure_distinct_paths(&[Some(&signal), Some(&out)])?;
            let f = read_signal(&signal)?;
            let xs = parse_lattice(&x)?;
            let oms = parse_axis(&omega)?;
            let csv = match theta {
                None => {
                    let samples = magnitude_samples(&f, xs.points(), &oms)?;
                    io::measurements_to_csv(&samples)
                }
                Some(theta) => rotated_measurements_csv(&f, theta, &oms, &xs)?,
            };
            write_text(&out, &csv)?;
            Ok(0)
        }

        Command::Gabor {
            signal,
            x,
            omega,
            out_pgm,
            meta,
            out_csv,
        } => {
            ensure_distinct_paths(&[Some(&signal), Some(&out_pgm), Some(&meta), out_csv.as_ref()])?;
            let f = read_signal(&signal)?;
            let xs = parse_lattice(&x)?;
            let oms = parse_axis(&omega)?;
            let samples = magnitude_samples(&f, xs.points(), &oms)?;
            let (bytes, pgm_meta) = io::spectrogram_pgm(&samples);
            std::fs::write(&out_pgm, bytes)?;
            write_json(&meta, &pgm_meta)?;
            if let Some(csv) = out_csv {
                write_text(&csv, &io::measurements_to_csv(&samples))?;
            }
            Ok(0)
        }

        Command::Density {
            lattice,
            points,
            b,
            r,
            convention,
            probes,
            out,
        } => {
            let set = match (lattice, points) {
                (Some(decl), None) => parse_lattice(&decl)?,
                (None, Some(path)) => {
                    ensure_distinct_paths(&[Some(&path), Some(&out)])?;
                    PointSet::new(io::points_from_csv(&read_text(&path)?)?)?
                }
                _ => {
                    return Err(Error::MalformedInput(
                        "exactly one of --lattice or --points is required".into(),
                    ))
                }
            };
            let rs: Vec<f64> = parse_list(&r)?;
            let report = density_report(&set, b, &rs, convention.into(), probes)?;
            #[derive(Serialize)]
            struct Out<'a> {
                report: &'a gaborpr_core::DensityReport,
                #[serde(skip_serializing_if = "Option::is_none")]
                stamp: Option<u64>,
            }
            write_json(
                &out,
                &Out {
                    report: &report,
                    stamp,
                },
            )?;
            Ok(0)
        }

        Command::Zalik {
            b,
            m,
            rate,
            half_width,
            counts,
            ridge,
            target_frequency,
            muntz_table,
            out,
        } => {
            let grid = FrequencyGrid::new(b, m)?;
            let counts: Vec<usize> = parse_list(&counts)?;
            let freq = target_frequency;
            let target =
                move |eta: f64| Complex64::cis(std::f64::consts::TAU * freq * eta);
            let trend =
                nested_completeness_experiment(&target, rate, &grid, half_width, &counts, ridge)?;
            let max_count = counts.iter().max().copied().unwrap_or(0);
            let centers = dyadic_centers(half_width, max_count);
            let dict = build_dictionary(&centers, rate, &grid)?;
            let best = best_approximation(&target, &dict, ridge.max(1e-14))?;
            let ns: Vec<usize> = parse_list(&muntz_table)?;
            let n_max = ns.last().copied().unwrap_or(1);
            let muntz = muntz_partial_sums((1..=n_max).map(|k| k as f64), &ns)?;
            #[derive(Serialize)]
            struct ZalikReport<'a> {
                centers: Vec<f64>,
                c: f64,
                condition: f64,
                errors: Vec<(usize, f64, f64)>,
                muntz: &'a gaborpr_core::MuntzDiagnostic,
                #[serde(skip_serializing_if = "Option::is_none")]
                stamp: Option<u64>,
            }
            write_json(
                &out,
                &ZalikReport {
                    centers,
                    c: rate,
                    condition: best.condition,
                    errors: trend
                        .iter()
                        .map(|p| (p.centers, p.sup_error, p.l2_error))
                        .collect(),
                    muntz: &muntz,
                    stamp,
                },
            )?;
            Ok(0)
        }

        Command::Frft {
            signal,
            theta,
            out,
            check_identity,
            report,
        } => {
            ensure_distinct_paths(&[Some(&signal), out.as_ref(), report.as_ref()])?;
            let f = read_signal(&signal)?;
            let b = f.grid().half_width();
            let mut residual = None;
            let mut pad = PadConfig::auto(b, theta, 1.5, 1.5);
            if let Some(decl) = &check_identity {
                let axis = parse_axis(decl)?;
                let reach = axis.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
                pad = PadConfig::auto(b, theta, reach, reach);
                let mut pts = Vec::with_capacity(axis.len() * axis.len());
                for &px in &axis {
                    for &pom in &axis {
                        pts.push(TfPoint { x: px, omega: pom });
                    }
                }
                residual = Some(rotation_identity_residual(&f, theta, &pts, &pad)?);
            }
            let (transformed, band_leakage) = frft_signal(&f, theta, &pad)?;
            if let Some(path) = out {
                write_text(&path, &io::signal_to_json(&transformed))?;
            }
            if let Some(path) = report {
                #[derive(Serialize)]
                struct FrftReport {
                    theta: f64,
                    band_leakage: f64,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    identity_residual: Option<f64>,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    stamp: Option<u64>,
                }
                write_json(
                    &path,
                    &FrftReport {
                        theta,
                        band_leakage,
                        identity_residual: residual,
                        stamp,
                    },
                )?;
            }
            Ok(0)
        }

        Command::Recover {
            measurements,
            config,
            out,
            report,
            truth,
            allow_warnings,
        } => {
            ensure_distinct_paths(&[
                Some(&measurements),
                Some(&config),
                Some(&out),
                Some(&report),
                truth.as_ref(),
            ])?;
            let cfg: RecoverConfigFile = serde_json::from_str(&read_text(&config)?)
                .map_err(|e| Error::MalformedInput(format!("config: {e}")))?;
            let theta = resolve_theta(&cfg.theta)?;
            let echo = ConfigEcho {
                b: cfg.b,
                m: cfg.m,
                ridge1: cfg.ridge1,
                ridge2: cfg.ridge2,
                theta,
                omega_decl: cfg.omega_decl.clone(),
                x_decl: cfg.x_decl.clone(),
            };
            let rc = RecoveryConfig {
                m: cfg.m,
                ridge1: cfg.ridge1,
                ridge2: cfg.ridge2,
            };
            let rows = io::measurements_from_csv(&read_text(&measurements)?)?;

            let (recovered, mut rec_report) = match theta {
                None => {
                    let (xs_csv, oms_csv, mags) = io::product_from_rows(&rows)?;
                    let x_set = match &cfg.x_decl {
                        Some(decl) => parse_lattice(decl)?,
                        None => PointSet::new(xs_csv.clone())?,
                    };
                    let samples = ProductSamples::new(xs_csv, oms_csv, mags, cfg.b)?;
                    recover_signal(&samples, &x_set, &rc)?
                }
                Some(theta) => {
                    let x_set = cfg.x_decl.as_deref().map(parse_lattice).transpose()?.ok_or_else(
                        || Error::MalformedInput("rotated recovery needs x_decl".into()),
                    )?;
                    let omega = cfg
                        .omega_decl
                        .as_deref()
                        .map(parse_axis)
                        .transpose()?
                        .ok_or_else(|| {
                            Error::MalformedInput("rotated recovery needs omega_decl".into())
                        })?;
                    let (points, ordered) =
                        reorder_rotated_rows(theta, &omega, &x_set, &rows)?;
                    let (rot, rep) =
                        recover_rotated(&points, &ordered, theta, &omega, &x_set, cfg.b, &rc)?;
                    (rot.base, rep)
                }
            };
            if let Some(truth_path) = truth {
                let truth_signal = read_signal(&truth_path)?;
                rec_report.truth_distance =
                    Some(global_phase_distance(&truth_signal, &recovered)?);
            }
            write_text(&out, &io::signal_to_json(&recovered))?;
            write_json(
                &report,
                &RecoverOutput {
                    config: &echo,
                    report: &rec_report,
                    stamp,
                },
            )?;
            if !rec_report.warnings.is_empty() && !allow_warnings {
                diagnostic(
                    "recovery-warnings",
                    &rec_report.warnings.join("; "),
                );
                return Ok(3);
            }
            Ok(0)
        }

        Command::Verify {
            signal_a,
            signal_b,
            x,
            omega,
            tol,
            out,
        } => {
            ensure_distinct_paths(&[Some(&signal_a), Some(&signal_b), Some(&out)])?;
            let a = read_signal(&signal_a)?;
            let b = read_signal(&signal_b)?;
            let xs = parse_lattice(&x)?;
            let oms = parse_axis(&omega)?;
            let record = verify_uniqueness(&a, &b, xs.points(), &oms, tol)?;
            #[derive(Serialize)]
            struct Out<'a> {
                tol: f64,
                record: &'a gaborpr_core::UniquenessRecord,
                #[serde(skip_serializing_if = "Option::is_none")]
                stamp: Option<u64>,
            }
            write_json(
                &out,
                &Out {
                    tol,
                    record: &record,
                    stamp,
                },
            )?;
            Ok(0)
        }
    }
}

/// Forward model for rotated sampling: the measured signal is the inverse
/// rotation of the stored profile class, so its Gabor transform is evaluated
/// through the profile of the (-θ - π/2) transform of the quadrature measure.
fn rotated_measurements_csv(
    f: &BandlimitedSignal,
    theta: f64,
    omega: &[f64],
    x_set: &PointSet,
) -> gaborpr_core::Result<String> {
    let points = rotate_product_set(theta, omega, x_set.points());
    let max_x = points.iter().map(|p| p.x.abs()).fold(0.0, f64::max);
    let max_om = points.iter().map(|p| p.omega.abs()).fold(0.0, f64::max);
    let b = f.grid().half_width();
    let pad = PadConfig::auto(b, -theta - PI / 2.0, max_x, max_om);
    let (profile, _) = frft_signal(f, -theta - PI / 2.0, &pad)?;
    let mut rows: Vec<(f64, f64, f64)> = points
        .iter()
        .map(|p| (p.x, p.omega, gabor_transform(&profile, p.x, p.omega).norm()))
        .collect();
    rows.sort_by(|a, b| (a.0, a.1).partial_cmp(&(b.0, b.1)).expect("finite coords"));
    let mut csv = String::from("x,omega,magnitude\n");
    for (px, pom, mag) in rows {
        csv.push_str(&format!("{px},{pom},{mag}\n"));
    }
    Ok(csv)
}

/// Matches sorted CSV rows back onto the rotated product-set order.
fn reorder_rotated_rows(
    theta: f64,
    omega: &[f64],
    x_set: &PointSet,
    rows: &[(f64, f64, f64)],
) -> gaborpr_core::Result<(Vec<TfPoint>, Vec<f64>)> {
    let expected = rotate_product_set(theta, omega, x_set.points());
    if rows.len() != expected.len() {
        return Err(Error::MalformedInput(format!(
            "expected {} rotated samples, found {}",
            expected.len(),
            rows.len()
        )));
    }
    let tol = 1e-9;
    let ordered: gaborpr_core::Result<Vec<f64>> = expected
        .iter()
        .map(|pt| {
            // rows are sorted by x; scan the x-window around pt.x
            let lo = rows.partition_point(|r| r.0 < pt.x - tol);
            rows[lo..]
                .iter()
                .take_while(|r| r.0 <= pt.x + tol)
                .find(|r| (r.1 - pt.omega).abs() <= tol)
                .map(|r| r.2)
                .ok_or_else(|| {
                    Error::MalformedInput(format!(
                        "no measurement at rotated point ({}, {})",
                        pt.x, pt.omega
                    ))
                })
        })
        .collect();
    Ok((expected, ordered?))
}

// ---------------------------------------------------------------------------
// scripted round trip
// ---------------------------------------------------------------------------

/// Artifacts of one synth → sample → recover → verify chain.
#[derive(Debug)]
pub struct RoundtripArtifacts {
    pub verdict: String,
    pub truth_distance: Option<f64>,
    pub signal_bytes: Vec<u8>,
    pub report_bytes: Vec<u8>,
    pub verdict_bytes: Vec<u8>,
    pub warnings: Vec<String>,
}

/// Runs the full chain through the CLI entry point inside `dir`; returns the
/// produced artifacts. `Err` carries the first non-zero exit code.
#[allow(clippy::too_many_arguments)]
pub fn pipeline_roundtrip(
    dir: &Path,
    seed: u64,
    zero: bool,
    b: f64,
    m: usize,
    x_decl: &str,
    omega_decl: &str,
    ridge1: f64,
    ridge2: f64,
    verify_tol: f64,
    allow_warnings: bool,
) -> Result<RoundtripArtifacts, i32> {
    let path = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let truth = path("truth.json");
    let csv = path("measurements.csv");
    let cfg = path("config.json");
    let fhat = path("recovered.json");
    let report = path("report.json");
    let verdict = path("verdict.json");

    let mut synth = vec![
        "synth".to_string(),
        "--B".into(),
        b.to_string(),
        "--M".into(),
        m.to_string(),
        "--seed".into(),
        seed.to_string(),
        "--out".into(),
        truth.clone(),
    ];
    if zero {
        synth.push("--zero".into());
    }
    let code = run(synth);
    if code != 0 {
        return Err(code);
    }

    let code = run([
        "sample",
        "--signal",
        &truth,
        "--x",
        x_decl,
        "--omega",
        omega_decl,
        "--out",
        &csv,
    ]);
    if code != 0 {
        return Err(code);
    }

    let config = serde_json::json!({
        "B": b,
        "M": m,
        "ridge1": ridge1,
        "ridge2": ridge2,
        "theta": null,
        "omega_decl": omega_decl,
        "x_decl": x_decl,
    });
    std::fs::write(&cfg, format!("{config:#}\n")).map_err(|_| 4)?;

    let mut recover = vec![
        "recover".to_string(),
        "--measurements".into(),
        csv,
        "--config".into(),
        cfg,
        "--out".into(),
        fhat.clone(),
        "--report".into(),
        report.clone(),
        "--truth".into(),
        truth.clone(),
    ];
    if allow_warnings {
        recover.push("--allow-warnings".into());
    }
    let code = run(recover);
    if code != 0 {
        return Err(code);
    }

    let code = run([
        "verify",
        "--signal-a",
        &truth,
        "--signal-b",
        &fhat,
        "--x",
        x_decl,
        "--omega",
        omega_decl,
        "--tol",
        &verify_tol.to_string(),
        "--out",
        &verdict,
    ]);
    if code != 0 {
        return Err(code);
    }

    let report_bytes = std::fs::read(&report).map_err(|_| 4)?;
    let verdict_bytes = std::fs::read(&verdict).map_err(|_| 4)?;
    let signal_bytes = std::fs::read(&fhat).map_err(|_| 4)?;
    let parsed: serde_json::Value = serde_json::from_slice(&verdict_bytes).map_err(|_| 4)?;
    let verdict_str = parsed["record"]["verdict"]
        .as_str()
        .unwrap_or("missing")
        .to_string();
    let report_parsed: serde_json::Value = serde_json::from_slice(&report_bytes).map_err(|_| 4)?;
    let truth_distance = report_parsed["report"]["truth_distance"]["distance"].as_f64();
    let warnings = report_parsed["report"]["warnings"]
        .as_array()
        .map(|a| {
            a.iter()
                .filter_map(|v| v.as_str().map(String::from))
                .collect()
        })
        .unwrap_or_default();
    Ok(RoundtripArtifacts {
        verdict: verdict_str,
        truth_distance,
        signal_bytes,
        report_bytes,
        verdict_bytes,
        warnings,
    })
}
