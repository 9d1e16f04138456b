use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use holocenter::io::{
    bb_from_document, system_from_document, BbEntry, SpectrumSummary, VerificationEntry, STATUS_CLASSIFIED,
    STATUS_NUMERIC,
};
use holocenter::verify::residual_slope;
use holocenter::{
    check_isochronous, classify, classify_spectrum, classify_spectrum_numeric, emit_report, enumerate_centers,
    CenterError, Format, IoError, ReportDocument, SpectrumError, SystemDocument, VerifyConfig, DEFAULT_ORDER,
};
use rayon::prelude::*;

/// Exact Briot-Bouquet solver and holomorphic center-manifold enumerator.
#[derive(Debug, Parser)]
#[command(name = "holocenter", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dispatch each chart and report multiplicities and obstructions.
    Classify(Common),
    /// Like `classify`, with the manifold series coefficients.
    Series(Common),
    /// Like `series`, with a numerical period and residual check.
    Verify(VerifyArgs),
    /// Classify a document read as `x·y' = f(x, y)`, variables[0] being `x`.
    Bb(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// System documents (JSON).
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Truncation order N.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: u32,
    #[arg(long, default_value_t = Format::Json)]
    format: Format,
    /// Report a floating-point spectrum when the exact one is not certifiable.
    #[arg(long)]
    numeric_fallback: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Radius of the start points around the origin.
    #[arg(long, default_value_t = 1e-2)]
    radius: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 20)]
    starts: usize,
    /// RK4 step size.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Classify,
    Series,
    Verify,
    Bb,
}

/// Per-file failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    const OTHER: u8 = 1;
    const PARSE: u8 = 2;
    const UNCERTIFIABLE: u8 = 3;
    const VERIFICATION: u8 = 4;

    fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Self {
            code,
            error: error.into(),
        }
    }
}

impl From<CenterError> for Failure {
    fn from(e: CenterError) -> Self {
        let code = match e {
            CenterError::Spectrum(SpectrumError::Uncertifiable(_)) => Self::UNCERTIFIABLE,
            _ => Self::OTHER,
        };
        Self::new(code, e)
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Self::new(Self::PARSE, e)
    }
}

struct Outcome {
    report: ReportDocument,
    verified: bool,
}

fn read(path: &PathBuf) -> Result<SystemDocument, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(|e| Failure::new(Failure::OTHER, e))?;
    Ok(SystemDocument::parse(&text)?)
}

fn run_bb(doc: &SystemDocument, order: u32) -> Result<ReportDocument, Failure> {
    let bb = bb_from_document(doc, order)?;
    let c = classify(&bb, order).map_err(|e| Failure::new(Failure::OTHER, e))?;
    Ok(ReportDocument {
        status: STATUS_CLASSIFIED.into(),
        bb: Some(BbEntry::new(&c, &doc.variables)),
        ..ReportDocument::empty(order)
    })
}

fn run_centers(
    doc: &SystemDocument,
    mode: Mode,
    common: &Common,
    verify: Option<&VerifyConfig>,
) -> Result<Outcome, Failure> {
    let order = common.order;
    let h = system_from_document(doc)?;
    let info = match classify_spectrum(h.linear()) {
        Ok(info) => info,
        Err(SpectrumError::Uncertifiable(p)) if common.numeric_fallback => {
            eprintln!(
                "warning: spectrum not certifiable (characteristic polynomial {p}); reporting numeric eigenvalues only"
            );
            let report = ReportDocument {
                status: STATUS_NUMERIC.into(),
                spectrum: Some(SpectrumSummary::numeric(&classify_spectrum_numeric(h.linear()))),
                ..ReportDocument::empty(order)
            };
            return Ok(Outcome { report, verified: true });
        }
        Err(e) => return Err(CenterError::from(e).into()),
    };
    if !info.has_imaginary() {
        let report = ReportDocument {
            spectrum: Some(SpectrumSummary::exact(&info, h.normal_form().name())),
            ..ReportDocument::empty(order)
        };
        return Ok(Outcome { report, verified: true });
    }
    let (h, basis) = h.normalized()?;
    let reports = enumerate_centers(&h, order)?;
    let spectrum = SpectrumSummary::exact(
        &classify_spectrum(h.linear()).map_err(CenterError::from)?,
        h.normal_form().name(),
    );
    let mut report =
        ReportDocument::from_centers(order, Some(spectrum), &reports, &doc.variables, mode != Mode::Classify);
    if let Some(p) = &basis {
        report = report.with_basis(p);
    }
    let mut verified = true;
    if let Some(cfg) = verify {
        for (entry, r) in report.charts.iter_mut().zip(&reports).filter(|(_, r)| r.exists()) {
            let v = check_isochronous(&h, r, cfg).map_err(|e| Failure::new(Failure::OTHER, e))?;
            let slope = match r.graph {
                Some(_) => residual_slope(&h, r, cfg.residual_grid, &[1e-1, 1e-2, 1e-3])
                    .map_err(|e| Failure::new(Failure::OTHER, e))?,
                None => None,
            };
            verified &= v.pass;
            entry.verification = Some(VerificationEntry::new(&v, slope));
        }
    }
    Ok(Outcome { report, verified })
}

fn process(path: &PathBuf, mode: Mode, common: &Common, verify: Option<&VerifyConfig>) -> Result<Outcome, Failure> {
    let doc = read(path)?;
    let mut outcome = match mode {
        Mode::Bb => Outcome {
            report: run_bb(&doc, common.order)?,
            verified: true,
        },
        _ => run_centers(&doc, mode, common, verify)?,
    };
    outcome.report.source = Some(path.display().to_string());
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, common, verify) = match &cli.command {
        Command::Classify(c) => (Mode::Classify, c, None),
        Command::Series(c) => (Mode::Series, c, None),
        Command::Bb(c) => (Mode::Bb, c, None),
        Command::Verify(v) => (
            Mode::Verify,
            &v.common,
            Some(VerifyConfig {
                starts: v.starts,
                radius: v.radius,
                tol: v.tol,
                step: v.step,
                seed: v.seed,
                ..VerifyConfig::default()
            }),
        ),
    };
    let results: Vec<Result<Outcome, Failure>> = common
        .files
        .par_iter()
        .map(|f| process(f, mode, common, verify.as_ref()))
        .collect();

    let mut code = 0u8;
    let mut reports = Vec::new();
    for (path, result) in common.files.iter().zip(results) {
        match result {
            Ok(o) => {
                if !o.verified {
                    eprintln!("{}: verification failed", path.display());
                    code = code.max(Failure::VERIFICATION);
                }
                reports.push(o.report);
            }
            Err(f) => {
                eprintln!("{}: {:#}", path.display(), f.error);
                code = code.max(f.code);
            }
        }
    }
    if !reports.is_empty() {
        // A closed pipe (e.g. `| head`) is not an error worth reporting.
        let _ = writeln!(std::io::stdout().lock(), "{}", emit_report(&reports, common.format));
    }
    ExitCode::from(code)
}
