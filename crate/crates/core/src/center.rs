//! Holomorphic center manifolds at an equilibrium of a 2- or 3-dimensional
//! holomorphic vector field.
//!
//! A manifold graphed over the chart axis `z_c` is sought as `z_j = t·u_j(t)`
//! with `t = z_c`. The invariance condition becomes a Briot-Bouquet system in
//! `(t, u)`, which the `bb` module classifies exactly.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::bb::{self, BbClassification, BbError, BbSystem, ObstructionConstant, SolutionKind};
use crate::matrix::SmallMatrix;
use crate::scalar::ExactComplex;
use crate::series::{MultiSeries, SeriesError};
use crate::spectra::{classify_spectrum, normal_form_of, normalizing_basis, NormalFormTag, SpectrumError};

const AXES: [&str; 3] = ["x", "y", "z"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CenterError {
    #[error("only dimensions 2 and 3 are supported, got {0}")]
    BadDimension(usize),
    #[error("malformed system: {0}")]
    Malformed(String),
    #[error("chart {0} has a zero linear eigenvalue")]
    InvalidChart(usize),
    #[error("linear part is not in a recognised normal form; normalize it first")]
    NotNormalized,
    #[error("chart {chart}: expected {expected}, found {found}")]
    DispatchMismatch {
        chart: usize,
        expected: &'static str,
        found: String,
    },
    #[error("report has no graph")]
    NoGraph,
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Bb(#[from] BbError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `ż = Λz + N(z)` with polynomial `N` of degree ≥ 2. The stored field is the
/// original one divided by `time_scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct HoloSystem {
    linear: SmallMatrix,
    nonlinear: Vec<MultiSeries>,
    normal_form: NormalFormTag,
    time_scale: BigRational,
}

impl HoloSystem {
    pub fn new(linear: SmallMatrix, nonlinear: Vec<MultiSeries>) -> Result<Self, CenterError> {
        let n = linear.dim();
        if !(2..=3).contains(&n) {
            return Err(CenterError::BadDimension(n));
        }
        if nonlinear.len() != n {
            return Err(CenterError::Malformed(format!(
                "{} nonlinear series for dimension {n}",
                nonlinear.len()
            )));
        }
        let order = nonlinear[0].order();
        for (i, f) in nonlinear.iter().enumerate() {
            if f.nvars() != n || f.order() != order {
                return Err(CenterError::Malformed(format!(
                    "nonlinear series {i} has the wrong shape"
                )));
            }
            if f.min_degree().is_some_and(|d| d < 2) {
                return Err(CenterError::Malformed(format!(
                    "nonlinear series {i} has terms of degree < 2"
                )));
            }
        }
        Ok(Self {
            normal_form: normal_form_of(&linear),
            linear,
            nonlinear,
            time_scale: BigRational::one(),
        })
    }

    /// Splits full right-hand sides into linear part and nonlinearity.
    pub fn from_fields(fields: Vec<MultiSeries>) -> Result<Self, CenterError> {
        let n = fields.len();
        if !(2..=3).contains(&n) {
            return Err(CenterError::BadDimension(n));
        }
        let mut linear = SmallMatrix::zero(n);
        for (i, f) in fields.iter().enumerate() {
            if f.nvars() != n {
                return Err(CenterError::Malformed(format!(
                    "equation {i} has {} variables",
                    f.nvars()
                )));
            }
            if !f.constant_term().is_zero() {
                return Err(CenterError::Malformed(format!("equation {i} has a constant term")));
            }
            for j in 0..n {
                linear.set(i, j, f.linear_coeff(j));
            }
        }
        let order = fields.iter().map(MultiSeries::order).max().unwrap_or(2).max(2);
        let nonlinear = fields
            .iter()
            .map(|f| f.filter_degree(|d| d >= 2).with_order(order))
            .collect();
        Self::new(linear, nonlinear)
    }

    pub fn dim(&self) -> usize {
        self.linear.dim()
    }

    pub fn linear(&self) -> &SmallMatrix {
        &self.linear
    }

    pub fn nonlinear(&self) -> &[MultiSeries] {
        &self.nonlinear
    }

    pub fn normal_form(&self) -> &NormalFormTag {
        &self.normal_form
    }

    pub fn time_scale(&self) -> &BigRational {
        &self.time_scale
    }

    pub fn order(&self) -> u32 {
        self.nonlinear[0].order()
    }

    /// Full component `F_i = (Λz)_i + N_i`.
    pub fn field(&self, i: usize) -> MultiSeries {
        let n = self.dim();
        (0..n).fold(self.nonlinear[i].clone(), |acc, j| {
            &acc + &MultiSeries::variable(n, self.order(), j).scale(self.linear.get(i, j))
        })
    }

    pub fn fields(&self) -> Vec<MultiSeries> {
        (0..self.dim()).map(|i| self.field(i)).collect()
    }

    /// Same polynomials, truncation order changed (the nonlinearity is an
    /// exact polynomial, so raising the order loses nothing).
    pub fn with_order(&self, order: u32) -> Self {
        Self {
            nonlinear: self.nonlinear.iter().map(|f| f.with_order(order)).collect(),
            ..self.clone()
        }
    }

    /// `F → c·F` with the time scale untouched.
    pub fn scaled(&self, c: &BigRational) -> Self {
        let k = ExactComplex::real(c.clone());
        let linear = self.linear.scale(&k);
        Self {
            normal_form: normal_form_of(&linear),
            linear,
            nonlinear: self.nonlinear.iter().map(|f| f.scale(&k)).collect(),
            time_scale: self.time_scale.clone(),
        }
    }

    /// New time `τ = s·t`: the field is divided by `s`.
    pub fn rescale_time(&self, s: &BigRational) -> Self {
        let mut out = self.scaled(&s.recip());
        out.time_scale = &self.time_scale * s;
        out
    }

    /// The system in coordinates `z = P·w`.
    pub fn transform(&self, p: &SmallMatrix) -> Result<Self, CenterError> {
        let n = self.dim();
        let order = self.order();
        let p_inv = p
            .inverse()
            .map_err(|_| CenterError::Malformed("change of basis is singular".into()))?;
        let subs: Vec<MultiSeries> = (0..n)
            .map(|j| {
                (0..n).fold(MultiSeries::zero(n, order), |acc, k| {
                    &acc + &MultiSeries::variable(n, order, k).scale(p.get(j, k))
                })
            })
            .collect();
        let composed: Vec<MultiSeries> = self
            .nonlinear
            .iter()
            .map(|f| f.compose(&subs))
            .collect::<Result<_, _>>()?;
        let nonlinear = (0..n)
            .map(|i| {
                (0..n).fold(MultiSeries::zero(n, order), |acc, j| {
                    &acc + &composed[j].scale(p_inv.get(i, j))
                })
            })
            .collect();
        let linear = p_inv.mul(&self.linear).mul(p);
        Ok(Self {
            normal_form: normal_form_of(&linear),
            linear,
            nonlinear,
            time_scale: self.time_scale.clone(),
        })
    }

    /// Exact linear change of coordinates into normal form. Returns the
    /// basis used, or `None` when the system already was normalized.
    pub fn normalized(&self) -> Result<(Self, Option<SmallMatrix>), CenterError> {
        if self.normal_form.is_normalized() {
            return Ok((self.clone(), None));
        }
        let p = normalizing_basis(&self.linear)?;
        let out = self.transform(&p)?;
        if !out.normal_form.is_normalized() {
            return Err(CenterError::NotNormalized);
        }
        Ok((out, Some(p)))
    }
}

/// Result of the chart ansatz.
#[derive(Debug, Clone, PartialEq)]
pub enum ChartReduction {
    /// `reduced` is in the variables `(t, u_1, …)`, where `u_k` belongs to
    /// axis `dependent[k]`.
    Reduced {
        chart: usize,
        dependent: Vec<usize>,
        reduced: BbSystem,
    },
    /// The reduced equation for axis `axis` has the nonzero constant term
    /// `constant`, so no manifold is graphed over this chart.
    NoGo {
        chart: usize,
        axis: usize,
        constant: ExactComplex,
    },
}

/// Sends `z_c → t` and `z_j → t·u_j`.
fn chart_substitute(f: &MultiSeries, chart: usize, order: u32) -> Result<MultiSeries, SeriesError> {
    let n = f.nvars();
    MultiSeries::from_terms(
        n,
        order,
        f.terms().map(|(e, c)| {
            let mut ex = Vec::with_capacity(n);
            ex.push(e.iter().sum());
            ex.extend(e.iter().enumerate().filter(|(j, _)| *j != chart).map(|(_, &k)| k));
            (ex, c.clone())
        }),
    )
}

/// Briot-Bouquet system for manifolds graphed over axis `chart`, to order
/// `order` in `(t, u)`.
pub fn chart_reduce(h: &HoloSystem, chart: usize, order: u32) -> Result<ChartReduction, CenterError> {
    let n = h.dim();
    if chart >= n {
        return Err(CenterError::InvalidChart(chart));
    }
    let lcc = h.linear().get(chart, chart).clone();
    let Some(lcc_inv) = lcc.inv() else {
        return Err(CenterError::InvalidChart(chart));
    };
    let dependent: Vec<usize> = (0..n).filter(|&j| j != chart).collect();
    for &j in &dependent {
        let c = h.linear().get(j, chart);
        if !c.is_zero() {
            return Ok(ChartReduction::NoGo {
                chart,
                axis: j,
                constant: c * &lcc_inv,
            });
        }
    }
    let h = h.with_order(h.order().max(order + 1));
    let mapped: Vec<MultiSeries> = (0..n)
        .map(|i| chart_substitute(&h.field(i), chart, order + 1)?.divide_by_x())
        .collect::<Result<_, _>>()?;
    let phi_inv = mapped[chart].inverse()?;
    let rhs = dependent
        .iter()
        .enumerate()
        .map(|(k, &j)| &(&mapped[j] * &phi_inv) - &MultiSeries::variable(n, order, k + 1))
        .collect();
    Ok(ChartReduction::Reduced {
        chart,
        dependent,
        reduced: BbSystem::from_rhs(rhs)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplicity {
    None,
    Unique,
    Infinite,
}

impl Multiplicity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Multiplicity::None => "none",
            Multiplicity::Unique => "unique",
            Multiplicity::Infinite => "infinite",
        }
    }
}

/// A free Taylor coefficient of the graph: `d^derivative z_axis / dt^derivative`
/// at the origin. Representative value 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeSlot {
    pub axis: usize,
    pub derivative: u32,
}

/// Period `2π / frequency` in original time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Period {
    pub frequency: BigRational,
}

impl Period {
    pub fn value(&self) -> f64 {
        let f = ExactComplex::real(self.frequency.clone()).to_c64().re;
        2.0 * std::f64::consts::PI / f
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.frequency.is_integer() {
            if self.frequency.is_one() {
                write!(f, "2π")
            } else {
                write!(f, "2π/{}", self.frequency.numer())
            }
        } else {
            write!(f, "2π/({})", self.frequency)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CenterManifoldReport {
    /// Axis the graph is taken over; `None` for an isochronous center at the
    /// origin.
    pub chart: Option<usize>,
    pub tangency: String,
    pub tangent_axes: Vec<usize>,
    pub multiplicity: Multiplicity,
    pub free_parameters: Vec<FreeSlot>,
    /// `z_i(t)`, univariate in the chart variable, at order `order + 1`.
    pub graph: Option<Vec<MultiSeries>>,
    pub period: Period,
    pub theorem_tag: String,
    pub obstructions: Vec<ObstructionConstant>,
    pub blocking_order: Option<u32>,
    /// Constant term that rules out the chart outright.
    pub no_go_constant: Option<ExactComplex>,
    pub order: u32,
}

impl CenterManifoldReport {
    pub fn exists(&self) -> bool {
        self.multiplicity != Multiplicity::None
    }
}

fn tangency_label(axes: &[usize]) -> String {
    match axes {
        [a] => format!("{}-invariant", AXES[*a]),
        _ => format!(
            "({})-invariant",
            axes.iter().map(|&a| AXES[a]).collect::<Vec<_>>().join(",")
        ),
    }
}

/// Graph functions `z_i(t)` with free parameters at 0.
pub fn manifold_graph(r: &CenterManifoldReport) -> Result<Vec<MultiSeries>, CenterError> {
    r.graph.clone().ok_or(CenterError::NoGraph)
}

/// `F_c(Z)·Z_j' − F_j(Z)` along the graph, per axis (the chart axis gives
/// zero identically). Exact; vanishes through order `order + 1`.
pub fn graph_residual(h: &HoloSystem, r: &CenterManifoldReport) -> Result<Vec<MultiSeries>, CenterError> {
    let graph = manifold_graph(r)?;
    let chart = r.chart.ok_or(CenterError::NoGraph)?;
    let order = graph[0].order();
    let h = h.with_order(h.order().max(order));
    let fz: Vec<MultiSeries> = h.fields().iter().map(|f| f.compose(&graph)).collect::<Result<_, _>>()?;
    Ok((0..h.dim())
        .map(|j| &(&fz[chart] * &graph[j].derivative(0)) - &fz[j])
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Expect {
    Unique,
    Obstructed,
    NoGo,
}

impl Expect {
    fn name(self) -> &'static str {
        match self {
            Expect::Unique => "a unique solution",
            Expect::Obstructed => "an obstruction-dependent verdict",
            Expect::NoGo => "no manifold in this chart",
        }
    }
}

/// Case selected by the normalized, rescaled linear part.
struct Case {
    tag: &'static str,
    charts: Vec<(usize, Expect)>,
    /// Free initial slopes alone already give infinitely many manifolds.
    slopes_give_family: bool,
}

fn natural(q: &BigRational) -> bool {
    q.is_integer() && q > &BigRational::one()
}

fn theorem_case(tag: &NormalFormTag) -> Option<Case> {
    use Expect::*;
    let obstructed_if = |b: bool| if b { Obstructed } else { Unique };
    let one = BigRational::one();
    let case = |tag, charts, slopes_give_family| {
        Some(Case {
            tag,
            charts,
            slopes_give_family,
        })
    };
    match tag {
        NormalFormTag::SingleImaginary => case("single imaginary eigenvalue", vec![(0, Unique)], false),
        NormalFormTag::ImaginaryPair { mu, lambda } => {
            if *mu == one {
                lambda.as_ref()?;
                case(
                    "equal imaginary pair, diagonalizable",
                    vec![(0, Unique), (1, Unique)],
                    false,
                )
            } else {
                case(
                    "two distinct imaginary eigenvalues",
                    vec![(0, obstructed_if(natural(mu))), (1, Unique)],
                    false,
                )
            }
        }
        NormalFormTag::ImaginaryTriple { mu, nu } => {
            if *mu == one && *nu == one {
                None
            } else if *mu == one {
                case(
                    "equal imaginary pair below a third imaginary eigenvalue",
                    vec![
                        (0, obstructed_if(natural(nu))),
                        (1, obstructed_if(natural(nu))),
                        (2, Unique),
                    ],
                    true,
                )
            } else if mu == nu {
                case(
                    "equal imaginary pair above a third imaginary eigenvalue",
                    vec![(0, obstructed_if(natural(mu))), (1, Unique), (2, Unique)],
                    false,
                )
            } else {
                case(
                    "three distinct imaginary eigenvalues",
                    vec![
                        (0, obstructed_if(natural(mu) || natural(nu))),
                        (1, obstructed_if(natural(&(nu / mu)))),
                        (2, Unique),
                    ],
                    false,
                )
            }
        }
        NormalFormTag::JordanPair { other } => match other {
            Some(l) if l.is_purely_imaginary() => {
                let mu = l.im();
                let charts = if *mu == one {
                    vec![(0, Unique), (1, NoGo), (2, Unique)]
                } else {
                    vec![
                        (0, obstructed_if(natural(mu))),
                        (1, NoGo),
                        (2, obstructed_if(natural(&mu.recip()))),
                    ]
                };
                case("imaginary Jordan pair with a third imaginary eigenvalue", charts, false)
            }
            _ => case("imaginary Jordan pair", vec![(0, Unique), (1, NoGo)], false),
        },
        NormalFormTag::JordanTriple => case(
            "imaginary 3×3 Jordan block",
            vec![(0, Unique), (1, NoGo), (2, NoGo)],
            false,
        ),
        NormalFormTag::NotNormalized => None,
    }
}

pub const POINCARE_TAG: &str = "Poincaré isochronous center";

enum ChartOutcome {
    NoGo {
        axis: usize,
        constant: ExactComplex,
    },
    Classified {
        dependent: Vec<usize>,
        classification: BbClassification,
    },
}

fn run_chart(h: &HoloSystem, chart: usize, order: u32) -> Result<ChartOutcome, CenterError> {
    Ok(match chart_reduce(h, chart, order)? {
        ChartReduction::NoGo { axis, constant, .. } => ChartOutcome::NoGo { axis, constant },
        ChartReduction::Reduced { dependent, reduced, .. } => ChartOutcome::Classified {
            dependent,
            classification: bb::classify(&reduced, order)?,
        },
    })
}

fn abs_im(z: &ExactComplex) -> BigRational {
    z.im().abs()
}

/// All holomorphic center manifolds of a normalized system, to order
/// `order` in the reduced charts. Reports come in chart order with
/// existing manifolds first.
pub fn enumerate_centers(h: &HoloSystem, order: u32) -> Result<Vec<CenterManifoldReport>, CenterError> {
    let info = classify_spectrum(h.linear())?;
    if !info.has_imaginary() {
        return Ok(Vec::new());
    }
    if !h.normal_form().is_normalized() {
        return Err(CenterError::NotNormalized);
    }
    let n = h.dim();
    let diag = h.linear().diag();
    let imaginary: Vec<usize> = (0..n).filter(|&i| diag[i].is_purely_imaginary()).collect();
    let smallest = imaginary
        .iter()
        .map(|&i| abs_im(&diag[i]))
        .min()
        .expect("imaginary eigenvalue");
    let hs = h.rescale_time(&smallest).with_order(h.order().max(order + 1));
    let frequency = |i: usize| abs_im(hs.linear().get(i, i)) * hs.time_scale();

    if info.eigenvalues.len() == 1 && info.diagonalizable {
        return Ok(vec![CenterManifoldReport {
            chart: None,
            tangency: "isochronous center at origin".into(),
            tangent_axes: (0..n).collect(),
            multiplicity: Multiplicity::Unique,
            free_parameters: Vec::new(),
            graph: None,
            period: Period {
                frequency: frequency(0),
            },
            theorem_tag: POINCARE_TAG.into(),
            obstructions: Vec::new(),
            blocking_order: None,
            no_go_constant: None,
            order,
        }]);
    }
    let case = theorem_case(hs.normal_form()).ok_or(CenterError::NotNormalized)?;
    debug_assert_eq!(case.charts.iter().map(|c| c.0).collect::<Vec<_>>(), imaginary);

    let outcomes: Vec<ChartOutcome> = case
        .charts
        .par_iter()
        .map(|&(c, _)| run_chart(&hs, c, order))
        .collect::<Result<_, _>>()?;

    for (&(chart, expect), outcome) in case.charts.iter().zip(&outcomes) {
        let found = match outcome {
            ChartOutcome::NoGo { .. } => Expect::NoGo,
            ChartOutcome::Classified { classification, .. } => match classification.kind {
                SolutionKind::Unique => Expect::Unique,
                _ => Expect::Obstructed,
            },
        };
        let unique_with_resonance = matches!(
            outcome,
            ChartOutcome::Classified { classification, .. }
                if classification.kind == SolutionKind::Unique && classification.pattern != bb::ResonancePattern::NonResonant
        );
        if found != expect || unique_with_resonance {
            return Err(CenterError::DispatchMismatch {
                chart,
                expected: expect.name(),
                found: found.name().into(),
            });
        }
    }

    let existing: Vec<usize> = case
        .charts
        .iter()
        .zip(&outcomes)
        .filter(|(_, o)| matches!(o, ChartOutcome::Classified { classification, .. } if classification.kind != SolutionKind::NoSolution))
        .map(|(&(c, _), _)| c)
        .collect();
    let exists = |chart: usize| existing.contains(&chart);

    let mut found = Vec::new();
    let mut none = Vec::new();
    for (&(chart, _), outcome) in case.charts.iter().zip(outcomes) {
        let period = Period {
            frequency: frequency(chart),
        };
        match outcome {
            ChartOutcome::NoGo { axis, constant } => none.push(CenterManifoldReport {
                chart: Some(chart),
                tangency: tangency_label(&[chart]),
                tangent_axes: vec![chart],
                multiplicity: Multiplicity::None,
                free_parameters: Vec::new(),
                graph: None,
                period,
                theorem_tag: format!("{} (constant term on the {}-axis)", case.tag, AXES[axis]),
                obstructions: Vec::new(),
                blocking_order: Some(0),
                no_go_constant: Some(constant),
                order,
            }),
            ChartOutcome::Classified {
                dependent,
                classification,
            } => {
                let Some(sol) = classification.solution.as_ref() else {
                    none.push(CenterManifoldReport {
                        chart: Some(chart),
                        tangency: tangency_label(&[chart]),
                        tangent_axes: vec![chart],
                        multiplicity: Multiplicity::None,
                        free_parameters: Vec::new(),
                        graph: None,
                        period,
                        theorem_tag: format!("{} (obstruction does not vanish)", case.tag),
                        obstructions: classification.obstructions.clone(),
                        blocking_order: classification.blocking_order,
                        no_go_constant: None,
                        order,
                    });
                    continue;
                };
                // Free initial slopes along eigen-axes sharing the chart eigenvalue,
                // kept only when that axis carries manifolds of its own.
                let lin = hs.linear();
                let slopes: Vec<usize> = dependent
                    .iter()
                    .copied()
                    .filter(|&j| {
                        lin.get(j, j) == lin.get(chart, chart)
                            && (0..n).all(|i| i == j || lin.get(i, j).is_zero())
                            && exists(j)
                    })
                    .collect();
                let mut axes = vec![chart];
                axes.extend(&slopes);
                axes.sort_unstable();
                if found.iter().any(|r: &CenterManifoldReport| r.tangent_axes == axes) {
                    continue;
                }
                let mut free: Vec<FreeSlot> = slopes.iter().map(|&axis| FreeSlot { axis, derivative: 1 }).collect();
                free.extend(sol.free_parameters.iter().map(|p| FreeSlot {
                    axis: dependent[p.variable],
                    derivative: p.order + 1,
                }));
                let multiplicity =
                    if classification.kind == SolutionKind::Family || (case.slopes_give_family && !slopes.is_empty()) {
                        Multiplicity::Infinite
                    } else {
                        Multiplicity::Unique
                    };
                let mut graph = vec![MultiSeries::zero(1, order + 1); n];
                graph[chart] = MultiSeries::variable(1, order + 1, 0);
                for (k, &j) in dependent.iter().enumerate() {
                    let t = MultiSeries::variable(1, order + 1, 0);
                    graph[j] = &t * &sol.component(k).with_order(order + 1);
                }
                found.push(CenterManifoldReport {
                    chart: Some(chart),
                    tangency: tangency_label(&axes),
                    tangent_axes: axes,
                    multiplicity,
                    free_parameters: free,
                    graph: Some(graph),
                    period,
                    theorem_tag: case.tag.to_string(),
                    obstructions: classification.obstructions.clone(),
                    blocking_order: None,
                    no_go_constant: None,
                    order,
                });
            }
        }
    }
    found.extend(none);
    Ok(found)
}

/// Parses `a/b` helper used by tests and the CLI.
pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> ExactComplex {
        ExactComplex::from_integer(n)
    }

    fn im(n: i64) -> ExactComplex {
        ExactComplex::imaginary(rational(n, 1))
    }

    fn zero3(order: u32) -> Vec<MultiSeries> {
        vec![MultiSeries::zero(3, order); 3]
    }

    fn quad(i: usize, e: [u32; 3], k: ExactComplex, order: u32) -> (usize, MultiSeries) {
        (i, MultiSeries::monomial(3, order, e.to_vec(), k))
    }

    fn system(diag: Vec<ExactComplex>, extra: &[(usize, MultiSeries)]) -> HoloSystem {
        let mut nl = zero3(4);
        for (i, s) in extra {
            nl[*i] = &nl[*i] + s;
        }
        HoloSystem::new(SmallMatrix::diagonal(diag), nl).unwrap()
    }

    #[test]
    fn chart_reduce_diagonal_linear() {
        let h = system(vec![ExactComplex::i(), im(2), c(1)], &[]);
        let ChartReduction::Reduced { reduced, dependent, .. } = chart_reduce(&h, 1, 6).unwrap() else {
            panic!("expected a reduction");
        };
        assert_eq!(dependent, vec![0, 2]);
        let expected = SmallMatrix::diagonal(vec![ExactComplex::ratio(-1, 2), ExactComplex::from_parts(-1, 1, -1, 2)]);
        assert_eq!(reduced.a(), &expected);
        assert!(reduced.nonlinear().iter().all(MultiSeries::is_zero));
    }

    #[test]
    fn jordan_pair_y_chart_is_no_go() {
        let lin = SmallMatrix::from_rows(vec![
            vec![ExactComplex::i(), c(1), c(0)],
            vec![c(0), ExactComplex::i(), c(0)],
            vec![c(0), c(0), c(-1)],
        ])
        .unwrap();
        let h = HoloSystem::new(lin, zero3(4)).unwrap();
        match chart_reduce(&h, 1, 6).unwrap() {
            ChartReduction::NoGo { constant, axis, .. } => {
                assert_eq!(axis, 0);
                assert_eq!(constant, -ExactComplex::i());
            }
            other => panic!("unexpected {other:?}"),
        }
        // x-chart: zero u-row, no coupling from u into v.
        let ChartReduction::Reduced { reduced, .. } = chart_reduce(&h, 0, 6).unwrap() else {
            panic!();
        };
        assert!(reduced.a().get(0, 0).is_zero() && reduced.a().get(0, 1).is_zero());
        assert!(reduced.a().get(1, 0).is_zero());
        assert_eq!(reduced.a().get(1, 1), &ExactComplex::from_parts(-1, 1, 1, 1));
    }

    #[test]
    fn jordan_triple_x_chart() {
        let lin = SmallMatrix::from_rows(vec![
            vec![ExactComplex::i(), c(1), c(0)],
            vec![c(0), ExactComplex::i(), c(1)],
            vec![c(0), c(0), ExactComplex::i()],
        ])
        .unwrap();
        let h = HoloSystem::new(lin, zero3(4)).unwrap();
        let ChartReduction::Reduced { reduced, .. } = chart_reduce(&h, 0, 6).unwrap() else {
            panic!();
        };
        let expected = SmallMatrix::from_rows(vec![vec![c(0), -ExactComplex::i()], vec![c(0), c(0)]]).unwrap();
        assert_eq!(reduced.a(), &expected);
    }

    #[test]
    fn linear_diag_with_resonance() {
        let h = system(vec![ExactComplex::i(), im(3), c(1)], &[]);
        let reports = enumerate_centers(&h, 8).unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(reports[0].chart, Some(0));
        assert_eq!(reports[0].multiplicity, Multiplicity::Infinite);
        assert_eq!(reports[0].free_parameters, vec![FreeSlot { axis: 1, derivative: 3 }]);
        assert_eq!(reports[0].period.to_string(), "2π");
        assert_eq!(reports[1].chart, Some(1));
        assert_eq!(reports[1].multiplicity, Multiplicity::Unique);
        assert_eq!(reports[1].period.to_string(), "2π/3");
        for r in &reports {
            assert!(manifold_graph(r).unwrap().iter().all(|g| g.degree().unwrap_or(0) <= 1));
        }
    }

    #[test]
    fn b200_toggles_x_manifold() {
        for (b, mult) in [(1, Multiplicity::None), (0, Multiplicity::Infinite)] {
            let h = system(vec![ExactComplex::i(), im(2), c(1)], &[quad(1, [2, 0, 0], c(b), 4)]);
            let reports = enumerate_centers(&h, 10).unwrap();
            let x = reports.iter().find(|r| r.chart == Some(0)).unwrap();
            let y = reports.iter().find(|r| r.chart == Some(1)).unwrap();
            assert_eq!(x.multiplicity, mult);
            assert_eq!(y.multiplicity, Multiplicity::Unique);
            if b == 1 {
                assert_eq!(reports.last().unwrap().chart, Some(0));
                assert_eq!(x.obstructions[0].value, -ExactComplex::i());
            }
            for r in reports.iter().filter(|r| r.exists()) {
                let res = graph_residual(&h, r).unwrap();
                assert!(res.iter().all(MultiSeries::is_zero), "{res:?}");
            }
        }
    }

    #[test]
    fn poincare_center() {
        let h = system(
            vec![im(2), im(2), im(2)],
            &[quad(0, [1, 1, 0], c(1), 4), quad(2, [0, 2, 0], c(3), 4)],
        );
        let reports = enumerate_centers(&h, 8).unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].theorem_tag, POINCARE_TAG);
        assert_eq!(reports[0].period.to_string(), "2π/2");
    }

    #[test]
    fn equal_pair_with_hyperbolic_is_one_plane() {
        let h = system(
            vec![ExactComplex::i(), ExactComplex::i(), c(-1)],
            &[quad(2, [1, 1, 0], c(1), 4)],
        );
        let reports = enumerate_centers(&h, 8).unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].tangency, "(x,y)-invariant");
        assert_eq!(reports[0].multiplicity, Multiplicity::Unique);
    }

    #[test]
    fn hyperbolic_only_gives_nothing() {
        let h = system(vec![c(1), c(2), c(3)], &[]);
        assert!(enumerate_centers(&h, 6).unwrap().is_empty());
    }

    #[test]
    fn scaling_divides_periods() {
        let h = system(vec![ExactComplex::i(), im(2), c(1)], &[quad(2, [1, 1, 0], c(1), 4)]);
        let a = enumerate_centers(&h, 8).unwrap();
        let b = enumerate_centers(&h.scaled(&rational(3, 1)), 8).unwrap();
        for (ra, rb) in a.iter().zip(&b) {
            assert_eq!(ra.graph, rb.graph);
            assert_eq!(rb.period.frequency, &ra.period.frequency * rational(3, 1));
        }
    }

    #[test]
    fn normalization_recovers_diagonal_form() {
        // conjugate diag(i, 2i) by a shear
        let p = SmallMatrix::from_rows(vec![vec![c(1), c(1)], vec![c(0), c(1)]]).unwrap();
        let base = HoloSystem::new(
            SmallMatrix::diagonal(vec![ExactComplex::i(), im(2)]),
            vec![MultiSeries::zero(2, 3); 2],
        )
        .unwrap();
        let mixed = base.transform(&p).unwrap();
        assert!(!mixed.normal_form().is_normalized());
        let (norm, basis) = mixed.normalized().unwrap();
        assert!(basis.is_some());
        assert!(norm.normal_form().is_normalized());
        assert_eq!(enumerate_centers(&norm, 6).unwrap().len(), 2);
    }
}
