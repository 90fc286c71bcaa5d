//! Command-line front end.
//!
//! Exit codes: 0 for certified / exact outcomes, 2 for refutations and
//! certified zeros, 3 for undecided or widely bracketed results, 1 for
//! input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::locc::{build_intermediate, decide_locc, ConversionPlan, PlanOptions};
use crate::majorization::{compare_scaled, MajorizationVerdict, Relation, Status, DEFAULT_TOL};
use crate::monotone::{check_inhibition, estimate_R, order_check, EstimateOptions, OrderVerdict, RateFamily};
use crate::numeric::Precision;
use crate::slocc::{
    filter_coefficients, max_probability, nu_spectrum, FilterReport, ProbabilityStatus, ProbabilityVerdict,
};
use crate::spectrum::spec_file::SpectrumSpec;
use crate::spectrum::{AmplitudeMatrix, SchmidtSpectrum, TailBudget};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrecisionArg {
    Double,
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RelationArg {
    Standard,
    Sub,
    Super,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Power,
    Squeeze,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RunConfig {
    /// Scan depth K.
    #[arg(long, global = true, default_value_t = 1000)]
    pub depth: usize,
    /// Largest n on the monotone grids.
    #[arg(long = "nmax", global = true, default_value_t = 1e9)]
    pub n_max: f64,
    /// Tie tolerance for majorization / bisection tolerance for monotones.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, value_enum, default_value_t = PrecisionArg::Double)]
    pub precision: PrecisionArg,
    /// Seed recorded for replaying randomized property tests.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

impl RunConfig {
    fn validate(&self) -> anyhow::Result<()> {
        if self.depth == 0 {
            bail!("--depth must be positive");
        }
        if !(self.n_max >= 100.0 && self.n_max.is_finite()) {
            bail!("--nmax must be a finite number ≥ 100");
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                bail!("--tol must be positive");
            }
        }
        Ok(())
    }

    fn budget(&self) -> TailBudget {
        TailBudget {
            precision: match self.precision {
                PrecisionArg::Double => Precision::Double,
                PrecisionArg::Extended => Precision::Extended,
            },
            ..TailBudget::default()
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "slocc", version, about = "Entanglement conversion of bipartite pure states with infinite Schmidt spectra")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// A spectrum argument is a path to a JSON spec or the JSON itself.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate coefficients and certified tail enclosures.
    Show {
        spec: String,
        #[arg(long, default_value_t = 20)]
        rows: usize,
    },
    /// Decide a majorization relation between two spectra.
    Check {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t = RelationArg::Standard)]
        relation: RelationArg,
    },
    /// Decide ε-LOCC convertibility and emit an intermediate-state plan.
    ConvertLocc {
        a: String,
        b: String,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
    },
    /// Optimal SLOCC probability, intermediate spectrum and filter.
    ConvertSlocc {
        a: String,
        b: String,
        /// Probability for ν; defaults to the certified lower bound.
        #[arg(long)]
        p: Option<f64>,
        /// Number of ν / filter entries reported.
        #[arg(long, default_value_t = 10)]
        entries: usize,
    },
    /// Estimate the monotones R^- and R^+.
    Monotone {
        spec: String,
        #[arg(long, value_enum, default_value_t = FamilyArg::Power)]
        family: FamilyArg,
        /// Skip the closed-form table.
        #[arg(long)]
        numeric: bool,
    },
    /// Order two states by their monotones.
    Order {
        psi: String,
        phi: String,
        #[arg(long, value_enum, default_value_t = FamilyArg::Power)]
        family: FamilyArg,
    },
    /// Copies of a geometric state against a target.
    Inhibit {
        base: String,
        #[arg(long)]
        copies: u32,
        target: String,
    },
    /// Schmidt spectrum of an amplitude matrix given as CSV.
    Ingest {
        csv: PathBuf,
        /// Imaginary parts, same shape.
        #[arg(long)]
        imag: Option<PathBuf>,
        /// Write the spec here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{text}");
                EXIT_OK
            } else {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_INPUT
        }
    }
}

fn load(arg: &str) -> anyhow::Result<SchmidtSpectrum> {
    let (text, origin) = if arg.trim_start().starts_with('{') {
        (arg.to_string(), "<inline>".to_string())
    } else {
        let text = fs::read_to_string(arg).with_context(|| format!("cannot read {arg}"))?;
        (text, arg.to_string())
    };
    let spec = SpectrumSpec::from_json(&text).map_err(|e| match e {
        Error::Parse { line, column, message } => anyhow::anyhow!("{origin}:{line}:{column}: {message}"),
        other => other.into(),
    })?;
    spec.build().with_context(|| format!("invalid spectrum in {origin}"))
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> anyhow::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn emit_csv<R: Serialize>(out: &mut dyn Write, rows: impl IntoIterator<Item = R>) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn verdict_code(v: &MajorizationVerdict) -> i32 {
    match v.status {
        Status::Certified => EXIT_OK,
        Status::Refuted { .. } => EXIT_NEGATIVE,
        Status::Undecided { .. } => EXIT_UNDECIDED,
    }
}

fn describe(v: &MajorizationVerdict) -> String {
    match v.status {
        Status::Certified => format!("{:?}: certified (depth {})", v.relation, v.depth),
        Status::Refuted { index, margin } => {
            format!("{:?}: refuted at n = {index}, margin {margin:e}", v.relation)
        }
        Status::Undecided { depth } => format!("{:?}: undecided at depth {depth}", v.relation),
    }
}

#[derive(Serialize)]
struct ShowRow {
    n: usize,
    coefficient: f64,
    tail_lower: f64,
    tail_upper: f64,
}

#[derive(Serialize)]
struct ShowJson {
    n: usize,
    coefficient: f64,
    tail: [f64; 2],
}

#[derive(Serialize)]
struct VerdictRow {
    relation: Relation,
    status: &'static str,
    index: Option<usize>,
    margin: Option<f64>,
    depth: usize,
}

impl From<&MajorizationVerdict> for VerdictRow {
    fn from(v: &MajorizationVerdict) -> Self {
        let (status, index, margin) = match v.status {
            Status::Certified => ("certified", None, None),
            Status::Refuted { index, margin } => ("refuted", Some(index), Some(margin)),
            Status::Undecided { .. } => ("undecided", None, None),
        };
        VerdictRow {
            relation: v.relation,
            status,
            index,
            margin,
            depth: v.depth,
        }
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum LoccOutput<'a> {
    Plan(&'a ConversionPlan),
    Verdict { verdict: &'a MajorizationVerdict },
}

#[derive(Serialize)]
struct SloccOutput<'a> {
    #[serde(flatten)]
    verdict: &'a ProbabilityVerdict,
    p: Option<f64>,
    nu: Option<Vec<f64>>,
    filter: Option<FilterReport>,
}

#[derive(Serialize)]
struct RatioCsv {
    n: usize,
    lambda_tail_lower: f64,
    lambda_tail_upper: f64,
    mu_tail_lower: f64,
    mu_tail_upper: f64,
    ratio_lower: f64,
    ratio_upper: f64,
}

fn family(f: FamilyArg) -> RateFamily {
    match f {
        FamilyArg::Power => RateFamily::power(),
        FamilyArg::Squeeze => RateFamily::squeeze(),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> anyhow::Result<i32> {
    let cfg = &cli.config;
    cfg.validate()?;
    let budget = cfg.budget();
    match &cli.command {
        Command::Show { spec, rows } => {
            let s = load(spec)?;
            let rows = s.support().map_or(*rows, |m| m.min(*rows)).max(1);
            let scan = s.scan(rows, &budget);
            let table: Vec<ShowRow> = (1..=rows)
                .map(|n| {
                    let t = scan.tail(n);
                    ShowRow {
                        n,
                        coefficient: scan.coefficient(n),
                        tail_lower: t.lower,
                        tail_upper: t.upper,
                    }
                })
                .collect();
            match cfg.format {
                Format::Json => emit_json(
                    out,
                    &table
                        .iter()
                        .map(|r| ShowJson {
                            n: r.n,
                            coefficient: r.coefficient,
                            tail: [r.tail_lower, r.tail_upper],
                        })
                        .collect::<Vec<_>>(),
                )?,
                Format::Csv => emit_csv(out, table)?,
                Format::Text => {
                    writeln!(out, "{:>8}  {:>24}  E_n", "n", "λ_n")?;
                    for r in table {
                        writeln!(
                            out,
                            "{:>8}  {:>24.17e}  [{:.17e}, {:.17e}]",
                            r.n, r.coefficient, r.tail_lower, r.tail_upper
                        )?;
                    }
                }
            }
            Ok(EXIT_OK)
        }

        Command::Check { a, b, relation } => {
            let (x, y) = (load(a)?, load(b)?);
            let relation = match relation {
                RelationArg::Standard => Relation::Majorized,
                RelationArg::Sub => Relation::SubMajorized,
                RelationArg::Super => Relation::SuperMajorized,
            };
            let v = compare_scaled(&x, 1.0, &y, 1.0, relation, cfg.depth, cfg.tol.unwrap_or(DEFAULT_TOL), &budget);
            match cfg.format {
                Format::Json => emit_json(out, &v)?,
                Format::Csv => emit_csv(out, [VerdictRow::from(&v)])?,
                Format::Text => writeln!(out, "{}", describe(&v))?,
            }
            Ok(verdict_code(&v))
        }

        Command::ConvertLocc { a, b, epsilon } => {
            let (x, y) = (load(a)?, load(b)?);
            let v = decide_locc(&x, &y, cfg.depth);
            if !v.is_certified() {
                match cfg.format {
                    Format::Json => emit_json(out, &LoccOutput::Verdict { verdict: &v })?,
                    Format::Csv => emit_csv(out, [VerdictRow::from(&v)])?,
                    Format::Text => writeln!(out, "{}", describe(&v))?,
                }
                return Ok(verdict_code(&v));
            }
            let opts = PlanOptions {
                depth: cfg.depth,
                ..PlanOptions::default()
            };
            let plan = build_intermediate(&x, &y, *epsilon, &opts)?;
            match cfg.format {
                Format::Json => emit_json(out, &LoccOutput::Plan(&plan))?,
                Format::Csv => emit_csv(out, plan.transcript.iter())?,
                Format::Text => {
                    writeln!(out, "case: {:?}", plan.case)?;
                    writeln!(out, "N1 = {}, N2 = {}, M = {:?}", plan.n1, plan.n2, plan.m)?;
                    writeln!(out, "splice index: {}", plan.splice_index)?;
                    writeln!(out, "delta: {:e}", plan.delta)?;
                    writeln!(out, "distance bound: {:e} (ε = {epsilon})", plan.distance_bound)?;
                    if let Some(p) = plan.plateau_value {
                        writeln!(out, "plateau: {p:e}")?;
                    }
                    let shown = plan.head.len().min(10);
                    writeln!(out, "head ({} entries): {:?}", plan.head.len(), &plan.head[..shown])?;
                    for t in &plan.transcript {
                        let mark = if t.holds { "ok " } else { "FAIL" };
                        writeln!(out, "  [{mark}] {}: {:e} ≤ {:e}", t.check, t.lhs, t.rhs)?;
                    }
                }
            }
            Ok(if plan.verified() { EXIT_OK } else { EXIT_UNDECIDED })
        }

        Command::ConvertSlocc { a, b, p, entries } => {
            let (x, y) = (load(a)?, load(b)?);
            let v = max_probability(&x, &y, cfg.depth);
            let p = p.or((v.p_lower > 0.0).then_some(v.p_lower));
            let (nu, filter) = match p {
                Some(p) => {
                    let nu = nu_spectrum(&y, p)?;
                    let filter = filter_coefficients(&y, &nu, *entries)?;
                    (Some(nu.head((*entries).max(1))), Some(filter))
                }
                None => (None, None),
            };
            match cfg.format {
                Format::Json => emit_json(
                    out,
                    &SloccOutput {
                        verdict: &v,
                        p,
                        nu,
                        filter,
                    },
                )?,
                Format::Csv => emit_csv(
                    out,
                    v.ratios.iter().map(|r| RatioCsv {
                        n: r.n,
                        lambda_tail_lower: r.lambda_tail.lower,
                        lambda_tail_upper: r.lambda_tail.upper,
                        mu_tail_lower: r.mu_tail.lower,
                        mu_tail_upper: r.mu_tail.upper,
                        ratio_lower: r.ratio_lower,
                        ratio_upper: r.ratio_upper,
                    }),
                )?,
                Format::Text => {
                    writeln!(out, "p* ∈ [{}, {}] ({:?}, witness n = {})", v.p_lower, v.p_upper, v.status, v.witness_index)?;
                    if let (Some(p), Some(nu), Some(f)) = (p, &nu, &filter) {
                        writeln!(out, "ν at p = {p}: {nu:?}")?;
                        writeln!(out, "filter μ → ν: {:?}", f.normalized)?;
                        writeln!(out, "filter success probability: {}", f.success_probability)?;
                    }
                }
            }
            let tol = cfg.tol.unwrap_or(1e-9);
            Ok(match v.status {
                ProbabilityStatus::Exact => EXIT_OK,
                ProbabilityStatus::CertifiedZero => EXIT_NEGATIVE,
                ProbabilityStatus::Bracketed if v.p_upper - v.p_lower <= tol => EXIT_OK,
                ProbabilityStatus::Bracketed => EXIT_UNDECIDED,
            })
        }

        Command::Monotone { spec, family: fam, numeric } => {
            let s = load(spec)?;
            let opts = EstimateOptions {
                n_max: cfg.n_max,
                tol: cfg.tol.unwrap_or(1e-3),
                force_numeric: *numeric,
                ..EstimateOptions::default()
            };
            let e = estimate_R(&s, &family(*fam), &opts);
            match cfg.format {
                Format::Json => emit_json(out, &e)?,
                Format::Csv => emit_csv(out, e.evidence.iter())?,
                Format::Text => {
                    writeln!(out, "R- ∈ [{}, {}]", e.r_minus.0, e.r_minus.1)?;
                    writeln!(out, "R+ ∈ [{}, {}]", e.r_plus.0, e.r_plus.1)?;
                    writeln!(out, "method: {:?}{}", e.method, if e.inconclusive { " (inconclusive trend)" } else { "" })?;
                }
            }
            Ok(if e.inconclusive { EXIT_UNDECIDED } else { EXIT_OK })
        }

        Command::Order { psi, phi, family: fam } => {
            let (x, y) = (load(psi)?, load(phi)?);
            let opts = EstimateOptions {
                n_max: cfg.n_max,
                tol: cfg.tol.unwrap_or(1e-3),
                ..EstimateOptions::default()
            };
            let r = order_check(&x, &y, &family(*fam), &opts);
            match cfg.format {
                Format::Json => emit_json(out, &r)?,
                Format::Csv => emit_csv(out, [(r.verdict, r.consistent)])?,
                Format::Text => {
                    writeln!(out, "{:?}", r.verdict)?;
                    writeln!(out, "Ψ: R- {:?}, R+ {:?}", r.psi.r_minus, r.psi.r_plus)?;
                    writeln!(out, "Φ: R- {:?}, R+ {:?}", r.phi.r_minus, r.phi.r_plus)?;
                    writeln!(out, "probability cross-check: {:?}, consistent: {}", r.probability.status, r.consistent)?;
                }
            }
            Ok(match r.verdict {
                OrderVerdict::ConvertibleCertified => EXIT_OK,
                OrderVerdict::BlockedCertified => EXIT_NEGATIVE,
                OrderVerdict::Inconclusive => EXIT_UNDECIDED,
            })
        }

        Command::Inhibit { base, copies, target } => {
            let (b, t) = (load(base)?, load(target)?);
            let r = check_inhibition(&b, *copies, &t, cfg.depth)?;
            match cfg.format {
                Format::Json => emit_json(out, &r)?,
                Format::Csv => emit_csv(
                    out,
                    r.ln_amplitudes
                        .iter()
                        .zip(&r.rank_sums)
                        .enumerate()
                        .map(|(i, (a, s))| (i + 1, *a, *s)),
                )?,
                Format::Text => {
                    writeln!(out, "{} copies of amplitude rate {}", r.copies, r.rate)?;
                    writeln!(out, "rank function matches enumeration: {}", r.rank_function_matches)?;
                    writeln!(out, "bound violations: {} of {}", r.bound_violations.len(), r.ln_amplitudes.len())?;
                    for a in &r.asymptotic {
                        writeln!(out, "f(k)·k^{}: vanishes = {}", a.c, a.vanishes)?;
                    }
                    writeln!(out, "tail ratio bound at K: {:e}", r.tail_ratio_bound)?;
                    writeln!(out, "max probability: {:?}", r.probability.status)?;
                }
            }
            Ok(if r.certified_zero { EXIT_NEGATIVE } else { EXIT_UNDECIDED })
        }

        Command::Ingest { csv, imag, output } => {
            let re = read_matrix(csv)?;
            let im = imag.as_deref().map(read_matrix).transpose()?;
            let m = AmplitudeMatrix::from_parts(&re, im.as_deref())?;
            let s = SchmidtSpectrum::from_amplitude_matrix(&m)?;
            let spec = s.to_spec().expect("finite spectra always have a spec");
            let text = spec.to_json();
            match output {
                Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("cannot write {}", path.display()))?,
                None => writeln!(out, "{text}")?,
            }
            Ok(EXIT_OK)
        }
    }
}

/// Read a real matrix, one row per line, with line/column diagnostics.
pub fn read_matrix(path: &Path) -> anyhow::Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_matrix(&text).map_err(|e| match e {
        Error::Parse { line, column, message } => {
            anyhow::anyhow!("{}:{line}:{column}: {message}", path.display())
        }
        other => other.into(),
    })
}

pub fn parse_matrix(text: &str) -> crate::Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::Parse {
                line,
                column: 1,
                message: e.to_string(),
            }
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let mut row = Vec::with_capacity(record.len());
        for (i, field) in record.iter().enumerate() {
            // ranges index the record without its delimiters
            let column = record.range(i).map_or(1, |r| r.start + i + 1);
            let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
                line,
                column,
                message: format!("expected a number, found {field:?}"),
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    Ok(rows)
}
