//! JSON system documents and report serialization.
//!
//! Coefficients are exact: each is `[[re_num, re_den], [im_num, im_den]]`,
//! with integers given as JSON numbers or, when large, decimal strings.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bb::{BbClassification, BbSystem, SolutionKind};
use crate::center::{CenterManifoldReport, HoloSystem, Multiplicity};
use crate::matrix::SmallMatrix;
use crate::scalar::ExactComplex;
use crate::series::MultiSeries;
use crate::spectra::{NumericSpectrum, SpectrumInfo};
use crate::verify::VerifyResult;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{location}: {message}")]
    Invalid { location: String, message: String },
    #[error("invalid report text: {0}")]
    Text(String),
}

impl IoError {
    fn at(location: impl Into<String>, message: impl Into<String>) -> Self {
        IoError::Invalid {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

/// An integer literal: JSON number or decimal string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntLit {
    Num(i64),
    Text(String),
}

impl IntLit {
    fn value(&self) -> Option<BigInt> {
        match self {
            IntLit::Num(n) => Some(BigInt::from(*n)),
            IntLit::Text(s) => s.trim().parse().ok(),
        }
    }

    fn from_big(n: &BigInt) -> Self {
        n.to_i64().map_or_else(|| IntLit::Text(n.to_string()), IntLit::Num)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialRecord {
    pub coefficient: [[IntLit; 2]; 2],
    pub exponents: Vec<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDocument {
    pub variables: Vec<String>,
    pub equations: Vec<Vec<MonomialRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

fn rational_at(pair: &[IntLit; 2], location: &str) -> Result<BigRational, IoError> {
    let num = pair[0]
        .value()
        .ok_or_else(|| IoError::at(location, "malformed numerator"))?;
    let den = pair[1]
        .value()
        .ok_or_else(|| IoError::at(location, "malformed denominator"))?;
    if den.is_zero() {
        return Err(IoError::at(location, "zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

impl SystemDocument {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    /// One exact polynomial per equation, in all document variables. The
    /// truncation order is the largest degree present (at least 2), so
    /// nothing is lost.
    pub fn polynomials(&self) -> Result<Vec<MultiSeries>, IoError> {
        let n = self.variables.len();
        if n == 0 {
            return Err(IoError::at("variables", "no variables"));
        }
        let mut order = 2;
        let mut parsed = Vec::with_capacity(self.equations.len());
        for (i, eq) in self.equations.iter().enumerate() {
            let mut terms = Vec::with_capacity(eq.len());
            for (k, m) in eq.iter().enumerate() {
                let loc = format!("equations[{i}][{k}]");
                if m.exponents.len() != n {
                    return Err(IoError::at(
                        format!("{loc}.exponents"),
                        format!("expected {n} exponents, found {}", m.exponents.len()),
                    ));
                }
                let deg: u32 = m.exponents.iter().sum();
                if deg == 0 {
                    return Err(IoError::at(loc, "constant term: the origin must be an equilibrium"));
                }
                let re = rational_at(&m.coefficient[0], &format!("{loc}.coefficient[0]"))?;
                let im = rational_at(&m.coefficient[1], &format!("{loc}.coefficient[1]"))?;
                order = order.max(deg);
                terms.push((m.exponents.clone(), ExactComplex::new(re, im)));
            }
            parsed.push(terms);
        }
        parsed
            .into_iter()
            .map(|terms| MultiSeries::from_terms(n, order, terms).map_err(|e| IoError::at("equations", e.to_string())))
            .collect()
    }

    pub fn description(&self) -> Option<&str> {
        self.metadata.as_ref()?.description.as_deref()
    }

    /// Document for the polynomials `fields` in the given variables.
    pub fn from_polynomials(variables: Vec<String>, fields: &[MultiSeries], description: Option<String>) -> Self {
        let equations = fields
            .iter()
            .map(|f| {
                f.terms()
                    .map(|(e, c)| MonomialRecord {
                        coefficient: [
                            [IntLit::from_big(c.re().numer()), IntLit::from_big(c.re().denom())],
                            [IntLit::from_big(c.im().numer()), IntLit::from_big(c.im().denom())],
                        ],
                        exponents: e.to_vec(),
                    })
                    .collect()
            })
            .collect();
        Self {
            variables,
            equations,
            metadata: description.map(|d| Metadata { description: Some(d) }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

fn check_square(doc: &SystemDocument) -> Result<(), IoError> {
    if doc.equations.len() != doc.variables.len() {
        return Err(IoError::at(
            "equations",
            format!(
                "{} equations for {} variables",
                doc.equations.len(),
                doc.variables.len()
            ),
        ));
    }
    Ok(())
}

/// Holomorphic system `ż = F(z)` in 2 or 3 variables.
pub fn parse_system(text: &str) -> Result<HoloSystem, IoError> {
    system_from_document(&SystemDocument::parse(text)?)
}

pub fn system_from_document(doc: &SystemDocument) -> Result<HoloSystem, IoError> {
    check_square(doc)?;
    let n = doc.variables.len();
    if !(2..=3).contains(&n) {
        return Err(IoError::at(
            "variables",
            format!("dimension {n} is not 2 or 3 (one-variable documents are only usable as Briot-Bouquet input)"),
        ));
    }
    HoloSystem::from_fields(doc.polynomials()?).map_err(|e| IoError::at("equations", e.to_string()))
}

/// Document for a holomorphic system, with default variable names.
pub fn emit_system(h: &HoloSystem, description: Option<String>) -> SystemDocument {
    let names = ["x", "y", "z"][..h.dim()].iter().map(|s| s.to_string()).collect();
    SystemDocument::from_polynomials(names, &h.fields(), description)
}

/// Briot-Bouquet system `x·y' = f(x, y)`: the first variable is `x` and
/// there is one equation per remaining variable. Truncated at `order`.
pub fn parse_bb(text: &str, order: u32) -> Result<BbSystem, IoError> {
    bb_from_document(&SystemDocument::parse(text)?, order)
}

pub fn bb_from_document(doc: &SystemDocument, order: u32) -> Result<BbSystem, IoError> {
    let n = doc.variables.len();
    if n < 2 || doc.equations.len() != n - 1 {
        return Err(IoError::at(
            "equations",
            format!(
                "a Briot-Bouquet document lists the independent variable first and one equation per dependent variable ({} variables, {} equations)",
                n,
                doc.equations.len()
            ),
        ));
    }
    let polys: Vec<MultiSeries> = doc.polynomials()?.iter().map(|p| p.with_order(order)).collect();
    BbSystem::from_rhs(polys).map_err(|e| IoError::at("equations", e.to_string()))
}

// --- reports ----------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format {other:?} (json or text)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Text => "text",
        })
    }
}

/// Rounds to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioEntry {
    pub from: String,
    pub to: String,
    pub ratio: String,
    pub natural: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub certified: bool,
    pub eigenvalues: Vec<String>,
    pub multiplicities: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonalizable: Option<bool>,
    pub normal_form: String,
    pub imaginary_ratios: Vec<RatioEntry>,
}

impl SpectrumSummary {
    pub fn exact(info: &SpectrumInfo, normal_form: &str) -> Self {
        let name = |k: usize| info.eigenvalues[k].value.to_string();
        Self {
            certified: true,
            eigenvalues: info.eigenvalues.iter().map(|e| e.value.to_string()).collect(),
            multiplicities: info.eigenvalues.iter().map(|e| e.multiplicity).collect(),
            diagonalizable: Some(info.diagonalizable),
            normal_form: normal_form.to_string(),
            imaginary_ratios: info
                .imaginary_ratios
                .iter()
                .map(|r| RatioEntry {
                    from: name(r.from),
                    to: name(r.to),
                    ratio: r.ratio.to_string(),
                    natural: r.is_natural(),
                })
                .collect(),
        }
    }

    pub fn numeric(spec: &NumericSpectrum) -> Self {
        let show = |z: &(f64, f64)| format!("{}{:+}i", round15(z.0), round15(z.1));
        Self {
            certified: false,
            eigenvalues: spec.eigenvalues.iter().map(show).collect(),
            multiplicities: vec![1; spec.eigenvalues.len()],
            diagonalizable: None,
            normal_form: "uncertified".into(),
            imaginary_ratios: spec
                .imaginary_ratios
                .iter()
                .map(|&(from, to, ratio, natural)| RatioEntry {
                    from: show(&spec.eigenvalues[from]),
                    to: show(&spec.eigenvalues[to]),
                    ratio: round15(ratio).to_string(),
                    natural,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstructionEntry {
    pub name: String,
    pub order: u32,
    pub variable: usize,
    pub value: String,
    pub blocking: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeEntry {
    pub axis: String,
    pub derivative: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub degree: u32,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesEntry {
    pub variable: String,
    pub coefficients: Vec<CoefficientEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationEntry {
    /// Absent when an integration diverged.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub return_error: Option<f64>,
    pub residual_error: f64,
    pub predicted_period: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_slope: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<String>,
}

impl VerificationEntry {
    pub fn new(v: &VerifyResult, residual_slope: Option<f64>) -> Self {
        Self {
            return_error: v.return_error.is_finite().then(|| round15(v.return_error)),
            residual_error: round15(v.residual_error),
            predicted_period: round15(v.predicted_period),
            pass: v.pass,
            residual_slope: residual_slope.map(round15),
            diagnostics: v.diagnostics.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<String>,
    pub tangency: String,
    pub theorem_tag: String,
    pub multiplicity: String,
    pub free_parameter_count: usize,
    pub free_parameters: Vec<FreeEntry>,
    pub obstructions: Vec<ObstructionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub no_go_constant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocking_order: Option<u32>,
    pub period: String,
    pub period_value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<Vec<SeriesEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationEntry>,
}

fn axis_name(names: &[String], k: usize) -> String {
    names.get(k).cloned().unwrap_or_else(|| format!("z{k}"))
}

fn series_entries(names: &[String], graph: &[MultiSeries]) -> Vec<SeriesEntry> {
    graph
        .iter()
        .enumerate()
        .map(|(k, g)| SeriesEntry {
            variable: axis_name(names, k),
            coefficients: g
                .terms()
                .map(|(e, c)| CoefficientEntry {
                    degree: e[0],
                    value: c.to_string(),
                })
                .collect(),
        })
        .collect()
}

impl ChartEntry {
    pub fn new(r: &CenterManifoldReport, names: &[String], with_series: bool) -> Self {
        Self {
            chart: r.chart.map(|c| axis_name(names, c)),
            tangency: r.tangency.clone(),
            theorem_tag: r.theorem_tag.clone(),
            multiplicity: r.multiplicity.as_str().into(),
            free_parameter_count: r.free_parameters.len(),
            free_parameters: r
                .free_parameters
                .iter()
                .map(|f| FreeEntry {
                    axis: axis_name(names, f.axis),
                    derivative: f.derivative,
                })
                .collect(),
            obstructions: r
                .obstructions
                .iter()
                .map(|o| ObstructionEntry {
                    name: o.name.clone(),
                    order: o.order,
                    variable: o.variable,
                    value: o.value.to_string(),
                    blocking: o.blocking,
                })
                .collect(),
            no_go_constant: r.no_go_constant.as_ref().map(ToString::to_string),
            blocking_order: r.blocking_order,
            period: r.period.to_string(),
            period_value: round15(r.period.value()),
            series: if with_series && r.multiplicity != Multiplicity::None {
                r.graph.as_ref().map(|g| series_entries(names, g))
            } else {
                None
            },
            verification: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BbEntry {
    pub kind: String,
    pub pattern: String,
    pub obstructions: Vec<ObstructionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocking_order: Option<u32>,
    pub free_parameter_count: usize,
    pub free_parameters: Vec<FreeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<Vec<SeriesEntry>>,
}

impl BbEntry {
    pub fn new(c: &BbClassification, names: &[String]) -> Self {
        let dependent: Vec<String> = names.iter().skip(1).cloned().collect();
        Self {
            kind: match c.kind {
                SolutionKind::NoSolution => "no solution",
                SolutionKind::Unique => "unique",
                SolutionKind::Family => "family",
            }
            .into(),
            pattern: format!("{:?}", c.pattern),
            obstructions: c
                .obstructions
                .iter()
                .map(|o| ObstructionEntry {
                    name: o.name.clone(),
                    order: o.order,
                    variable: o.variable,
                    value: o.value.to_string(),
                    blocking: o.blocking,
                })
                .collect(),
            blocking_order: c.blocking_order,
            free_parameter_count: c.free_parameter_count(),
            free_parameters: c
                .solution
                .iter()
                .flat_map(|s| &s.free_parameters)
                .map(|p| FreeEntry {
                    axis: axis_name(&dependent, p.variable),
                    derivative: p.order,
                })
                .collect(),
            series: c.solution.as_ref().map(|s| {
                let comps: Vec<MultiSeries> = (0..s.n()).map(|j| s.component(j)).collect();
                series_entries(&dependent, &comps)
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub order: u32,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSummary>,
    /// Rows of the change of basis `z = P·w` applied before dispatch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<String>>>,
    pub charts: Vec<ChartEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bb: Option<BbEntry>,
}

pub const STATUS_CLASSIFIED: &str = "classified";
pub const STATUS_NO_IMAGINARY: &str = "no purely imaginary eigenvalue";
pub const STATUS_NUMERIC: &str = "uncertified numeric spectrum";

impl ReportDocument {
    pub fn empty(order: u32) -> Self {
        Self {
            source: None,
            order,
            status: STATUS_NO_IMAGINARY.into(),
            spectrum: None,
            basis: None,
            charts: Vec::new(),
            bb: None,
        }
    }

    /// Report for an enumeration; an empty list yields the
    /// no-imaginary-eigenvalue status.
    pub fn from_centers(
        order: u32,
        spectrum: Option<SpectrumSummary>,
        reports: &[CenterManifoldReport],
        names: &[String],
        with_series: bool,
    ) -> Self {
        Self {
            status: if reports.is_empty() {
                STATUS_NO_IMAGINARY
            } else {
                STATUS_CLASSIFIED
            }
            .into(),
            spectrum,
            charts: reports.iter().map(|r| ChartEntry::new(r, names, with_series)).collect(),
            ..Self::empty(order)
        }
    }

    pub fn with_basis(mut self, p: &SmallMatrix) -> Self {
        self.basis = Some(
            (0..p.dim())
                .map(|i| p.row(i).iter().map(ToString::to_string).collect())
                .collect(),
        );
        self
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes"),
            Format::Text => toml::to_string(self).expect("report serializes"),
        }
    }

    pub fn parse(text: &str, format: Format) -> Result<Self, IoError> {
        match format {
            Format::Json => Ok(serde_json::from_str(text)?),
            Format::Text => toml::from_str(text).map_err(|e| IoError::Text(e.to_string())),
        }
    }
}

/// Serializes a batch of reports. Several reports become a JSON array or a
/// TOML document with one `[[report]]` table each.
pub fn emit_report(reports: &[ReportDocument], format: Format) -> String {
    match (reports, format) {
        ([one], _) => one.emit(format),
        (_, Format::Json) => serde_json::to_string_pretty(reports).expect("reports serialize"),
        (_, Format::Text) => {
            #[derive(Serialize)]
            struct Batch<'a> {
                report: &'a [ReportDocument],
            }
            toml::to_string(&Batch { report: reports }).expect("reports serialize")
        }
    }
}
