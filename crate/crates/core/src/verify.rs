//! Floating-point checks of the exact results: fixed-step RK4 integration
//! in real time, return-to-start after the predicted period, and numeric
//! residuals of the manifold graphs.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::center::{manifold_graph, CenterError, CenterManifoldReport, HoloSystem};
use crate::scalar::ExactComplex;
use crate::series::MultiSeries;

pub const DEFAULT_DIVERGENCE_BOUND: f64 = 1e3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("step and horizon must be positive (step {step}, horizon {horizon})")]
    BadStep { step: f64, horizon: f64 },
    #[error("start point has {got} components, system has {dim}")]
    Dimension { got: usize, dim: usize },
    #[error("trajectory left the ball of radius {bound} at t = {time}")]
    Divergence { time: f64, bound: f64 },
    #[error("report has no manifold to verify")]
    NoManifold,
    #[error(transparent)]
    Center(#[from] CenterError),
}

/// Polynomial vector field in double precision, in original time.
#[derive(Debug, Clone)]
pub struct NumericField {
    dim: usize,
    terms: Vec<Vec<(Vec<u32>, Complex64)>>,
    max_power: usize,
}

impl NumericField {
    pub fn new(h: &HoloSystem) -> Self {
        let scale = ExactComplex::real(h.time_scale().clone());
        let terms: Vec<Vec<(Vec<u32>, Complex64)>> = h
            .fields()
            .iter()
            .map(|f| f.scale(&scale).terms().map(|(e, c)| (e.to_vec(), c.to_c64())).collect())
            .collect();
        let max_power = terms
            .iter()
            .flatten()
            .flat_map(|(e, _)| e.iter().copied())
            .max()
            .unwrap_or(1) as usize;
        Self {
            dim: h.dim(),
            terms,
            max_power,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, z: &[Complex64], out: &mut [Complex64]) {
        let mut pows = vec![vec![Complex64::new(1.0, 0.0); self.max_power + 1]; self.dim];
        for (j, p) in pows.iter_mut().enumerate() {
            for k in 1..=self.max_power {
                p[k] = p[k - 1] * z[j];
            }
        }
        for (o, comp) in out.iter_mut().zip(&self.terms) {
            *o = comp
                .iter()
                .map(|(e, c)| e.iter().enumerate().fold(*c, |acc, (j, &k)| acc * pows[j][k as usize]))
                .sum();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<(f64, Vec<Complex64>)>,
    pub step: f64,
    pub method: String,
}

impl Trajectory {
    pub fn last(&self) -> &[Complex64] {
        &self.samples.last().expect("trajectory has samples").1
    }
}

fn norm(z: &[Complex64]) -> f64 {
    z.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

fn rk4_step(field: &NumericField, z: &mut [Complex64], h: f64, scratch: &mut [Vec<Complex64>; 5]) {
    let n = z.len();
    let [k1, k2, k3, k4, tmp] = scratch;
    field.eval(z, k1);
    for i in 0..n {
        tmp[i] = z[i] + k1[i] * (h / 2.0);
    }
    field.eval(tmp, k2);
    for i in 0..n {
        tmp[i] = z[i] + k2[i] * (h / 2.0);
    }
    field.eval(tmp, k3);
    for i in 0..n {
        tmp[i] = z[i] + k3[i] * h;
    }
    field.eval(tmp, k4);
    for i in 0..n {
        z[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
    }
}

/// Fixed-step RK4 from `0` to `horizon`; the step is shrunk slightly so
/// the last step lands exactly on `horizon`. `keep_every` thins the
/// recorded samples (the endpoints are always kept).
pub fn integrate_field(
    field: &NumericField,
    z0: &[Complex64],
    horizon: f64,
    step: f64,
    keep_every: usize,
) -> Result<Trajectory, VerifyError> {
    if !(step > 0.0 && horizon > 0.0) {
        return Err(VerifyError::BadStep { step, horizon });
    }
    if z0.len() != field.dim() {
        return Err(VerifyError::Dimension {
            got: z0.len(),
            dim: field.dim(),
        });
    }
    let steps = (horizon / step).ceil().max(1.0) as usize;
    let h = horizon / steps as f64;
    let n = field.dim();
    let mut scratch: [Vec<Complex64>; 5] = std::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); n]);
    let mut z = z0.to_vec();
    let mut samples = vec![(0.0, z.clone())];
    let keep_every = keep_every.max(1);
    for s in 1..=steps {
        rk4_step(field, &mut z, h, &mut scratch);
        let t = s as f64 * h;
        let r = norm(&z);
        if !r.is_finite() || r > DEFAULT_DIVERGENCE_BOUND {
            return Err(VerifyError::Divergence {
                time: t,
                bound: DEFAULT_DIVERGENCE_BOUND,
            });
        }
        if s % keep_every == 0 || s == steps {
            samples.push((if s == steps { horizon } else { t }, z.clone()));
        }
    }
    Ok(Trajectory {
        samples,
        step: h,
        method: "rk4".into(),
    })
}

/// Integrates `h` in original time, recording every step.
pub fn integrate(h: &HoloSystem, z0: &[Complex64], horizon: f64, step: f64) -> Result<Trajectory, VerifyError> {
    integrate_field(&NumericField::new(h), z0, horizon, step, 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub starts: usize,
    pub radius: f64,
    pub tol: f64,
    pub step: f64,
    pub residual_grid: usize,
    pub seed: u64,
    /// Integrate for this time instead of the reported period.
    pub period_override: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            starts: 20,
            radius: 1e-2,
            tol: 1e-6,
            step: 1e-3,
            residual_grid: 16,
            seed: 0,
            period_override: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyResult {
    pub return_error: f64,
    pub residual_error: f64,
    pub predicted_period: f64,
    pub pass: bool,
    pub diagnostics: Option<String>,
}

/// Start points: on the truncated graph at chart values `|t| ≤ radius`, or
/// random points of the ball when the report covers a full neighbourhood.
fn start_points(r: &CenterManifoldReport, dim: usize, cfg: &VerifyConfig) -> Result<Vec<Vec<Complex64>>, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.starts);
    match &r.graph {
        Some(graph) => {
            for k in 0..cfg.starts {
                let theta = std::f64::consts::TAU * k as f64 / cfg.starts as f64;
                let scale = cfg.radius * rng.random_range(0.5..=1.0);
                let mut t = Complex64::from_polar(scale, theta);
                let mut z = eval_graph(graph, t)?;
                let r0 = norm(&z);
                if r0 > cfg.radius {
                    t *= cfg.radius / r0;
                    z = eval_graph(graph, t)?;
                }
                out.push(z);
            }
        }
        None if r.chart.is_none() && r.exists() => {
            for _ in 0..cfg.starts {
                let mut z: Vec<Complex64> = (0..dim)
                    .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect();
                let s = cfg.radius * rng.random_range(0.5..=1.0) / norm(&z).max(f64::MIN_POSITIVE);
                z.iter_mut().for_each(|c| *c *= s);
                out.push(z);
            }
        }
        None => return Err(VerifyError::NoManifold),
    }
    Ok(out)
}

fn eval_graph(graph: &[MultiSeries], t: Complex64) -> Result<Vec<Complex64>, VerifyError> {
    graph
        .iter()
        .map(|g| g.eval_numeric(&[t]).map_err(|e| VerifyError::Center(e.into())))
        .collect()
}

/// Integrates every start for the reported period (or the override) and
/// compares with the start. Divergence is a failed check, not an error.
pub fn check_isochronous(
    h: &HoloSystem,
    r: &CenterManifoldReport,
    cfg: &VerifyConfig,
) -> Result<VerifyResult, VerifyError> {
    let period = cfg.period_override.unwrap_or_else(|| r.period.value());
    let starts = start_points(r, h.dim(), cfg)?;
    let field = NumericField::new(h);
    let runs: Vec<Result<f64, VerifyError>> = starts
        .par_iter()
        .map(|z0| {
            let traj = integrate_field(&field, z0, period, cfg.step, usize::MAX)?;
            let end = traj.last();
            Ok(norm(&end.iter().zip(z0).map(|(a, b)| a - b).collect::<Vec<_>>()))
        })
        .collect();
    let mut return_error: f64 = 0.0;
    let mut diagnostics = None;
    for run in runs {
        match run {
            Ok(e) => return_error = return_error.max(e),
            Err(e) => {
                return_error = f64::INFINITY;
                diagnostics = Some(e.to_string());
            }
        }
    }
    let residual_error = if r.graph.is_some() {
        check_residual_numeric(h, r, cfg.residual_grid, cfg.radius)?
    } else {
        0.0
    };
    Ok(VerifyResult {
        pass: return_error <= cfg.tol && residual_error <= cfg.tol,
        return_error,
        residual_error,
        predicted_period: period,
        diagnostics,
    })
}

/// Exact residual polynomials `F_c(Z)·Z_j' − F_j(Z)` of the truncated graph,
/// with no truncation of the composition.
pub fn full_residual(h: &HoloSystem, r: &CenterManifoldReport) -> Result<Vec<MultiSeries>, VerifyError> {
    let graph = manifold_graph(r)?;
    let chart = r.chart.ok_or(VerifyError::NoManifold)?;
    let gdeg = graph.iter().filter_map(MultiSeries::degree).max().unwrap_or(1);
    let fdeg = h.fields().iter().filter_map(MultiSeries::degree).max().unwrap_or(1);
    let order = fdeg * gdeg + gdeg;
    let graph: Vec<MultiSeries> = graph.iter().map(|g| g.with_order(order)).collect();
    let fields = h.with_order(order.max(h.order())).fields();
    let fz: Vec<MultiSeries> = fields
        .iter()
        .map(|f| f.compose(&graph))
        .collect::<Result<_, _>>()
        .map_err(|e| VerifyError::Center(e.into()))?;
    Ok((0..h.dim())
        .map(|j| &(&fz[chart] * &graph[j].derivative(0)) - &fz[j])
        .collect())
}

/// Largest `|residual|` over `grid` points of the circle `|t| = radius`.
/// The exact residual polynomial has no terms below order `N + 2`, so its
/// floating-point value keeps full relative accuracy at small radii.
pub fn check_residual_numeric(
    h: &HoloSystem,
    r: &CenterManifoldReport,
    grid: usize,
    radius: f64,
) -> Result<f64, VerifyError> {
    let res = full_residual(h, r)?;
    let mut worst: f64 = 0.0;
    for k in 0..grid.max(1) {
        let t = Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / grid.max(1) as f64);
        for s in &res {
            let v = s.eval_numeric(&[t]).map_err(|e| VerifyError::Center(e.into()))?;
            worst = worst.max(v.norm());
        }
    }
    Ok(worst)
}

/// Least-squares slope of `log residual` against `log radius`. `None` when
/// some residual is exactly zero (no decay to measure).
pub fn residual_slope(
    h: &HoloSystem,
    r: &CenterManifoldReport,
    grid: usize,
    radii: &[f64],
) -> Result<Option<f64>, VerifyError> {
    let mut pts = Vec::with_capacity(radii.len());
    for &rad in radii {
        let v = check_residual_numeric(h, r, grid, rad)?;
        if v == 0.0 {
            return Ok(None);
        }
        pts.push((rad.ln(), v.ln()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(Some(sxy / sxx))
}
