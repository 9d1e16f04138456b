//! Formal solutions of Briot-Bouquet systems `x·y' = p·x + A·y + f(x, y)`.
//!
//! The non-resonant case is a plain order-by-order recursion. Resonant
//! systems (some eigenvalue of `A` a positive integer) go through the
//! shearing cascade `y = x·(ỹ + c)`, which lowers every eigenvalue by one per
//! step and exposes the obstruction constant at each resonant order.

use std::collections::HashMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::matrix::{LinearSolve, SmallMatrix};
use crate::scalar::ExactComplex;
use crate::series::{MultiSeries, SeriesError};
use crate::spectra::{exact_eigenvalues, jordan_block_sizes};

/// Default truncation order.
pub const DEFAULT_ORDER: u32 = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BbError {
    #[error("malformed Briot-Bouquet system: {0}")]
    Malformed(String),
    #[error("{0} dependent variables are not supported here (at most {1})")]
    UnsupportedDimension(usize, usize),
    #[error("eigenvalue {0} of A is a positive integer; use classify()")]
    Resonant(u64),
    #[error("obstruction does not vanish: {witness:?}")]
    Blocked { witness: Vec<ExactComplex> },
    #[error("order {got} too small: need at least {needed} to reach every resonant order")]
    OrderTooSmall { needed: u32, got: u32 },
    #[error("requested order {requested} exceeds the truncation order {available} of the system")]
    OrderExceedsTruncation { requested: u32, available: u32 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A Briot-Bouquet system with `n` dependent variables. The nonlinear
/// series are in the variables `(x, y_1, …, y_n)` and contain only terms of
/// total degree ≥ 2.
#[derive(Debug, Clone, PartialEq)]
pub struct BbSystem {
    a: SmallMatrix,
    px: Vec<ExactComplex>,
    nonlinear: Vec<MultiSeries>,
}

impl BbSystem {
    pub fn new(a: SmallMatrix, px: Vec<ExactComplex>, nonlinear: Vec<MultiSeries>) -> Result<Self, BbError> {
        let n = a.dim();
        if px.len() != n || nonlinear.len() != n {
            return Err(BbError::Malformed(format!(
                "A is {n}×{n} but {} linear-in-x coefficients and {} nonlinear series were given",
                px.len(),
                nonlinear.len()
            )));
        }
        let order = nonlinear[0].order();
        for (i, f) in nonlinear.iter().enumerate() {
            if f.nvars() != n + 1 {
                return Err(BbError::Malformed(format!(
                    "nonlinear series {i} has {} variables, expected {}",
                    f.nvars(),
                    n + 1
                )));
            }
            if f.order() != order {
                return Err(BbError::Malformed(
                    "nonlinear series disagree on truncation order".into(),
                ));
            }
            if f.min_degree().is_some_and(|d| d < 2) {
                return Err(BbError::Malformed(format!(
                    "nonlinear series {i} has terms of degree < 2"
                )));
            }
        }
        Ok(Self { a, px, nonlinear })
    }

    /// Splits full right-hand sides `f_i(x, y)` into linear and nonlinear
    /// parts. Constant terms are rejected.
    pub fn from_rhs(rhs: Vec<MultiSeries>) -> Result<Self, BbError> {
        let n = rhs.len();
        if n == 0 || n > crate::matrix::MAX_DIM {
            return Err(BbError::UnsupportedDimension(n, crate::matrix::MAX_DIM));
        }
        let mut a = SmallMatrix::zero(n);
        let mut px = Vec::with_capacity(n);
        let mut nonlinear = Vec::with_capacity(n);
        for (i, f) in rhs.iter().enumerate() {
            if f.nvars() != n + 1 {
                return Err(BbError::Malformed(format!(
                    "equation {i} has {} variables, expected {}",
                    f.nvars(),
                    n + 1
                )));
            }
            if !f.constant_term().is_zero() {
                return Err(BbError::Malformed(format!("equation {i} has a constant term")));
            }
            px.push(f.linear_coeff(0));
            for j in 0..n {
                a.set(i, j, f.linear_coeff(j + 1));
            }
            nonlinear.push(f.filter_degree(|d| d >= 2));
        }
        Self::new(a, px, nonlinear)
    }

    pub fn n(&self) -> usize {
        self.a.dim()
    }

    pub fn a(&self) -> &SmallMatrix {
        &self.a
    }

    pub fn px(&self) -> &[ExactComplex] {
        &self.px
    }

    pub fn nonlinear(&self) -> &[MultiSeries] {
        &self.nonlinear
    }

    pub fn order(&self) -> u32 {
        self.nonlinear[0].order()
    }

    /// Full right-hand side `p_i x + (A y)_i + f_i`.
    pub fn rhs(&self, i: usize) -> MultiSeries {
        let n = self.n();
        let order = self.order();
        let mut s = self.nonlinear[i].clone();
        s = &s + &MultiSeries::variable(n + 1, order, 0).scale(&self.px[i]);
        for j in 0..n {
            s = &s + &MultiSeries::variable(n + 1, order, j + 1).scale(self.a.get(i, j));
        }
        s
    }

    pub fn with_order(&self, order: u32) -> Self {
        Self {
            a: self.a.clone(),
            px: self.px.clone(),
            nonlinear: self.nonlinear.iter().map(|f| f.with_order(order)).collect(),
        }
    }

    /// The same system in coordinates `y = P·w`.
    pub fn transform(&self, p: &SmallMatrix) -> Result<Self, BbError> {
        let n = self.n();
        let order = self.order();
        let p_inv = p
            .inverse()
            .map_err(|_| BbError::Malformed("change of basis is singular".into()))?;
        let mut subs = vec![MultiSeries::variable(n + 1, order, 0)];
        for j in 0..n {
            let mut s = MultiSeries::zero(n + 1, order);
            for k in 0..n {
                s = &s + &MultiSeries::variable(n + 1, order, k + 1).scale(p.get(j, k));
            }
            subs.push(s);
        }
        let composed: Vec<MultiSeries> = self
            .nonlinear
            .iter()
            .map(|f| f.compose(&subs))
            .collect::<Result<_, _>>()?;
        let nonlinear = (0..n)
            .map(|i| {
                (0..n).fold(MultiSeries::zero(n + 1, order), |acc, j| {
                    &acc + &composed[j].scale(p_inv.get(i, j))
                })
            })
            .collect();
        Ok(Self {
            a: p_inv.mul(&self.a).mul(p),
            px: p_inv.mul_vec(&self.px),
            nonlinear,
        })
    }
}

/// One free coefficient of a solution family: the order-`order` coefficient
/// of dependent variable `variable` (in the coordinates the cascade runs in).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeParameter {
    pub order: u32,
    pub variable: usize,
    pub id: usize,
}

/// Truncated solution `y_j(x) = Σ_{k=1..order} c_{k,j} x^k`, with every free
/// parameter at its representative value 0.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSolution {
    order: u32,
    coefficients: Vec<Vec<ExactComplex>>,
    pub free_parameters: Vec<FreeParameter>,
}

impl FormalSolution {
    pub fn new(coefficients: Vec<Vec<ExactComplex>>, free_parameters: Vec<FreeParameter>) -> Self {
        Self {
            order: coefficients.len().saturating_sub(1) as u32,
            coefficients,
            free_parameters,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn n(&self) -> usize {
        self.coefficients.first().map_or(0, Vec::len)
    }

    /// Coefficient of `x^k` in `y_j`; index 0 is always zero.
    pub fn coefficient(&self, k: usize, j: usize) -> &ExactComplex {
        &self.coefficients[k][j]
    }

    pub fn coefficients(&self) -> &[Vec<ExactComplex>] {
        &self.coefficients
    }

    /// `y_j` as a univariate series.
    pub fn component(&self, j: usize) -> MultiSeries {
        let cs: Vec<ExactComplex> = self.coefficients.iter().map(|c| c[j].clone()).collect();
        MultiSeries::from_univariate(&cs, self.order)
    }

    fn component_vectors(&self) -> Vec<Vec<ExactComplex>> {
        (0..self.n())
            .map(|j| self.coefficients.iter().map(|c| c[j].clone()).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionKind {
    NoSolution,
    Unique,
    Family,
}

/// Positive-integer eigenvalue pattern of `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResonancePattern {
    NonResonant,
    Single { q: u64 },
    Distinct { q: u64, s: u64 },
    EqualDiagonal { q: u64 },
    EqualJordan { q: u64, epsilon: ExactComplex },
}

/// An obstruction constant read off the cascade at a resonant order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionConstant {
    /// `p̄`, `r̄` (first resonant order) or `r̂` (second one).
    pub name: String,
    pub order: u32,
    pub variable: usize,
    pub value: ExactComplex,
    /// Whether a nonzero value rules out solutions.
    pub blocking: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BbClassification {
    pub kind: SolutionKind,
    pub pattern: ResonancePattern,
    pub obstructions: Vec<ObstructionConstant>,
    pub solution: Option<FormalSolution>,
    pub blocking_order: Option<u32>,
    /// Change of basis `y = P·w` into the coordinates the cascade ran in,
    /// when that was not the identity.
    pub basis: Option<SmallMatrix>,
}

impl BbClassification {
    pub fn free_parameter_count(&self) -> usize {
        self.solution.as_ref().map_or(0, |s| s.free_parameters.len())
    }
}

// --- univariate substitution ------------------------------------------------

fn mul_trunc(a: &[ExactComplex], b: &[ExactComplex], upto: usize) -> Vec<ExactComplex> {
    let mut out = vec![ExactComplex::zero(); upto + 1];
    for (i, ai) in a.iter().enumerate().take(upto + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(upto + 1 - i) {
            if !bj.is_zero() {
                out[i + j] += &(ai * bj);
            }
        }
    }
    out
}

/// Coefficients `0..=upto` of `f(x, y_1(x), …, y_n(x))` for univariate
/// coefficient vectors `ys` with `y_j(0) = 0`.
pub(crate) fn substitute_univariate(f: &MultiSeries, ys: &[Vec<ExactComplex>], upto: usize) -> Vec<ExactComplex> {
    let mut cache: HashMap<Vec<u32>, Vec<ExactComplex>> = HashMap::new();
    let n = ys.len();
    let mut one = vec![ExactComplex::zero(); upto + 1];
    one[0] = ExactComplex::one();
    cache.insert(vec![0; n], one);
    let mut out = vec![ExactComplex::zero(); upto + 1];
    for (e, c) in f.terms() {
        let deg: u32 = e.iter().sum();
        if deg as usize > upto {
            continue;
        }
        let key = e[1..].to_vec();
        let prod = product_of_powers(&key, ys, upto, &mut cache).clone();
        let shift = e[0] as usize;
        for (k, v) in prod.iter().enumerate() {
            if k + shift > upto {
                break;
            }
            if !v.is_zero() {
                out[k + shift] += &(c * v);
            }
        }
    }
    out
}

fn product_of_powers<'a>(
    key: &[u32],
    ys: &[Vec<ExactComplex>],
    upto: usize,
    cache: &'a mut HashMap<Vec<u32>, Vec<ExactComplex>>,
) -> &'a Vec<ExactComplex> {
    if !cache.contains_key(key) {
        let j = key.iter().position(|&k| k > 0).expect("non-trivial key");
        let mut smaller = key.to_vec();
        smaller[j] -= 1;
        let base = product_of_powers(&smaller, ys, upto, cache).clone();
        let v = mul_trunc(&base, &ys[j], upto);
        cache.insert(key.to_vec(), v);
    }
    &cache[key]
}

// --- operations ---------------------------------------------------------------

/// Unique formal solution when no eigenvalue of `A` is a positive integer
/// `≤ order`: solves `(kI − A)c_k = r_k` for `k = 1..=order`.
pub fn formal_solve_nonresonant(bb: &BbSystem, order: u32) -> Result<FormalSolution, BbError> {
    if order > bb.order() {
        return Err(BbError::OrderExceedsTruncation {
            requested: order,
            available: bb.order(),
        });
    }
    let n = bb.n();
    let mut comps: Vec<Vec<ExactComplex>> = vec![vec![ExactComplex::zero(); order as usize + 1]; n];
    for k in 1..=order as usize {
        let mut rhs: Vec<ExactComplex> = (0..n)
            .map(|i| substitute_univariate(&bb.nonlinear[i], &comps, k)[k].clone())
            .collect();
        if k == 1 {
            for (r, p) in rhs.iter_mut().zip(&bb.px) {
                *r += p;
            }
        }
        let m = SmallMatrix::identity(n)
            .scale(&ExactComplex::from_integer(k as i64))
            .sub(&bb.a);
        let c = m.solve(&rhs).map_err(|_| BbError::Resonant(k as u64))?;
        for (j, cj) in c.into_iter().enumerate() {
            comps[j][k] = cj;
        }
    }
    let coefficients = (0..=order as usize)
        .map(|k| comps.iter().map(|c| c[k].clone()).collect())
        .collect();
    Ok(FormalSolution::new(coefficients, Vec::new()))
}

/// Result of one shearing step.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionStep {
    pub system: BbSystem,
    /// The constants `c` in `y = x·(ỹ + c)`; these are the order-one
    /// coefficients of the solution.
    pub shift: Vec<ExactComplex>,
    /// Dependent variables whose shift was free (set to 0).
    pub free_variables: Vec<usize>,
}

/// One step `y = x·(ỹ + c)` with `(I − A)c = p`, followed by division by
/// `x`. The new system has linear part `A − I`.
pub fn reduction_step(bb: &BbSystem) -> Result<ReductionStep, BbError> {
    let n = bb.n();
    let m = SmallMatrix::identity(n).sub(&bb.a);
    let (shift, free_variables) = match m.solve_with_free(&bb.px) {
        LinearSolve::Inconsistent { witness } => return Err(BbError::Blocked { witness }),
        LinearSolve::Solved { solution, free } => (solution, free),
    };
    let mut nonlinear = Vec::with_capacity(n);
    let mut px = Vec::with_capacity(n);
    for f in &bb.nonlinear {
        let mut g = f.clone();
        for (j, c) in shift.iter().enumerate() {
            g = g.shear_substitute(j + 1, c)?;
        }
        let g = g.divide_by_x()?;
        debug_assert!(g.constant_term().is_zero());
        px.push(g.linear_coeff(0));
        nonlinear.push(g.filter_degree(|d| d >= 2));
    }
    let system = BbSystem {
        a: bb.a.sub(&SmallMatrix::identity(n)),
        px,
        nonlinear,
    };
    Ok(ReductionStep {
        system,
        shift,
        free_variables,
    })
}

/// Positive-integer eigenvalues of `A` and whether `A` is diagonalizable.
/// A spectrum that is not exact over `Q(i)` has no integer eigenvalue when
/// `n ≤ 2` (the other root would be rational too).
fn integer_spectrum(a: &SmallMatrix) -> (Vec<u64>, bool) {
    match exact_eigenvalues(a) {
        Ok(eigs) => {
            let mut ints = Vec::new();
            let mut diagonalizable = true;
            for e in &eigs {
                if let Some(q) = e.value.as_positive_integer() {
                    ints.extend(std::iter::repeat_n(q, e.multiplicity));
                    if jordan_block_sizes(a, &e.value, e.multiplicity).iter().any(|&s| s > 1) {
                        diagonalizable = false;
                    }
                }
            }
            ints.sort_unstable();
            (ints, diagonalizable)
        }
        Err(_) => (Vec::new(), true),
    }
}

fn eigenvector(a: &SmallMatrix, lambda: &ExactComplex) -> Vec<ExactComplex> {
    a.shifted(lambda)
        .kernel()
        .into_iter()
        .next()
        .expect("eigenvalue has an eigenvector")
}

/// Basis in which the cascade runs, and the pattern it realizes.
fn canonical_basis(a: &SmallMatrix, ints: &[u64], diagonalizable: bool) -> (Option<SmallMatrix>, ResonancePattern) {
    let n = a.dim();
    let q = ints[0];
    let qc = ExactComplex::from_integer(q as i64);
    if n == 1 {
        return (None, ResonancePattern::Single { q });
    }
    let other = a.trace() - &qc;
    let pattern = match ints {
        [_] => ResonancePattern::Single { q },
        [_, s] if *s != q => ResonancePattern::Distinct { q, s: *s },
        _ if diagonalizable => ResonancePattern::EqualDiagonal { q },
        _ => ResonancePattern::EqualJordan {
            q,
            epsilon: ExactComplex::zero(),
        },
    };
    match pattern {
        ResonancePattern::EqualJordan { .. } => {
            let (basis, eps) = if a.get(1, 0).is_zero() {
                (None, a.get(0, 1).clone())
            } else if a.get(0, 1).is_zero() {
                let swap = SmallMatrix::from_columns(&[
                    vec![ExactComplex::zero(), ExactComplex::one()],
                    vec![ExactComplex::one(), ExactComplex::zero()],
                ]);
                (Some(swap), a.get(1, 0).clone())
            } else {
                let nil = a.shifted(&qc);
                let e0 = vec![ExactComplex::one(), ExactComplex::zero()];
                let e1 = vec![ExactComplex::zero(), ExactComplex::one()];
                let head = if nil.mul_vec(&e0).iter().any(|c| !c.is_zero()) {
                    e0
                } else {
                    e1
                };
                let tail = nil.mul_vec(&head);
                (Some(SmallMatrix::from_columns(&[tail, head])), ExactComplex::one())
            };
            (basis, ResonancePattern::EqualJordan { q, epsilon: eps })
        }
        _ if a.is_diagonal() => (None, pattern),
        _ => {
            let v1 = eigenvector(a, &qc);
            let v2 = eigenvector(a, &other);
            (Some(SmallMatrix::from_columns(&[v1, v2])), pattern)
        }
    }
}

fn obstruction_name(pattern: &ResonancePattern, step: u64, variable: usize, first_resonant: u64) -> (String, bool) {
    match pattern {
        ResonancePattern::EqualJordan { .. } => {
            if variable == 0 {
                ("p̄".into(), false)
            } else {
                ("r̄".into(), true)
            }
        }
        ResonancePattern::Distinct { .. } if step > first_resonant => ("r̂".into(), true),
        ResonancePattern::EqualDiagonal { .. } if variable == 1 => ("r̄".into(), true),
        _ => ("p̄".into(), true),
    }
}

/// Full classification: existence, uniqueness or a free family of formal
/// solutions with `y(0) = 0`, completed to `order`.
pub fn classify(bb: &BbSystem, order: u32) -> Result<BbClassification, BbError> {
    let n = bb.n();
    if n > 2 {
        return Err(BbError::UnsupportedDimension(n, 2));
    }
    if order > bb.order() {
        return Err(BbError::OrderExceedsTruncation {
            requested: order,
            available: bb.order(),
        });
    }
    let bb = bb.with_order(order);
    let (ints, diagonalizable) = integer_spectrum(&bb.a);
    let Some(&top) = ints.last() else {
        let solution = formal_solve_nonresonant(&bb, order)?;
        return Ok(BbClassification {
            kind: SolutionKind::Unique,
            pattern: ResonancePattern::NonResonant,
            obstructions: Vec::new(),
            solution: Some(solution),
            blocking_order: None,
            basis: None,
        });
    };
    let needed = top as u32 + 2;
    if order < needed {
        return Err(BbError::OrderTooSmall { needed, got: order });
    }
    let (basis, pattern) = canonical_basis(&bb.a, &ints, diagonalizable);
    let canon = match &basis {
        Some(p) => bb.transform(p)?,
        None => bb.clone(),
    };
    let canon_diag = canon.a.diag();

    let mut sys = canon;
    let mut shifts: Vec<Vec<ExactComplex>> = Vec::new();
    let mut free = Vec::new();
    let mut obstructions = Vec::new();
    for k in 1..=top {
        let kc = ExactComplex::from_integer(k as i64);
        for (j, d) in canon_diag.iter().enumerate() {
            if *d == kc {
                let (name, blocking_kind) = obstruction_name(&pattern, k, j, ints[0]);
                let value = sys.px[j].clone();
                obstructions.push(ObstructionConstant {
                    blocking: blocking_kind && !value.is_zero(),
                    name,
                    order: k as u32,
                    variable: j,
                    value,
                });
            }
        }
        match reduction_step(&sys) {
            Ok(step) => {
                for v in step.free_variables {
                    free.push(FreeParameter {
                        order: k as u32,
                        variable: v,
                        id: free.len(),
                    });
                }
                shifts.push(step.shift);
                sys = step.system;
            }
            Err(BbError::Blocked { .. }) => {
                debug_assert!(obstructions.iter().any(|o| o.blocking));
                return Ok(BbClassification {
                    kind: SolutionKind::NoSolution,
                    pattern,
                    obstructions,
                    solution: None,
                    blocking_order: Some(k as u32),
                    basis,
                });
            }
            Err(e) => return Err(e),
        }
    }
    let tail = formal_solve_nonresonant(&sys, order - top as u32)?;
    let mut coefficients = vec![vec![ExactComplex::zero(); n]];
    coefficients.extend(shifts);
    coefficients.extend(tail.coefficients.into_iter().skip(1));
    if let Some(p) = &basis {
        for c in coefficients.iter_mut() {
            *c = p.mul_vec(c);
        }
    }
    let kind = if free.is_empty() {
        SolutionKind::Unique
    } else {
        SolutionKind::Family
    };
    Ok(BbClassification {
        kind,
        pattern,
        obstructions,
        solution: Some(FormalSolution::new(coefficients, free)),
        blocking_order: None,
        basis,
    })
}

/// `x·y' − (p·x + A·y + f(x, y))` along `sol`, per dependent variable, to
/// `order`.
pub fn residual(bb: &BbSystem, sol: &FormalSolution, order: u32) -> Vec<MultiSeries> {
    let n = bb.n();
    let upto = order as usize;
    let mut ys = sol.component_vectors();
    for y in ys.iter_mut() {
        y.resize(upto + 1, ExactComplex::zero());
        y.truncate(upto + 1);
    }
    (0..n)
        .map(|i| {
            let mut out = substitute_univariate(&bb.nonlinear[i], &ys, upto);
            for (k, o) in out.iter_mut().enumerate() {
                let mut lin: ExactComplex = (0..n).map(|j| bb.a.get(i, j) * &ys[j][k]).sum();
                if k == 1 {
                    lin += &bb.px[i];
                }
                let lhs = &ys[i][k] * &ExactComplex::from_integer(k as i64);
                *o = lhs - &*o - lin;
            }
            MultiSeries::from_univariate(&out, order)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> ExactComplex {
        ExactComplex::from_integer(n)
    }

    fn q(a: i64, b: i64) -> ExactComplex {
        ExactComplex::ratio(a, b)
    }

    fn mono(nvars: usize, order: u32, e: &[u32], k: ExactComplex) -> MultiSeries {
        MultiSeries::monomial(nvars, order, e.to_vec(), k)
    }

    fn system_1d(p: i64, a: i64, f: MultiSeries) -> BbSystem {
        BbSystem::new(SmallMatrix::diagonal(vec![c(a)]), vec![c(p)], vec![f]).unwrap()
    }

    #[test]
    fn nonresonant_1d() {
        let bb = system_1d(1, -1, MultiSeries::zero(2, 8));
        let sol = formal_solve_nonresonant(&bb, 8).unwrap();
        assert_eq!(sol.coefficient(1, 0), &q(1, 2));
        for k in 2..=8 {
            assert!(sol.coefficient(k, 0).is_zero());
        }
        assert!(sol.free_parameters.is_empty());
    }

    #[test]
    fn nonresonant_2d() {
        let a = SmallMatrix::diagonal(vec![c(-1), c(-2)]);
        let f = MultiSeries::zero(3, 8);
        let g = mono(3, 8, &[2, 0, 0], c(1));
        let bb = BbSystem::new(a, vec![c(1), c(0)], vec![f, g]).unwrap();
        let sol = formal_solve_nonresonant(&bb, 8).unwrap();
        assert_eq!(sol.component(0), mono(1, 8, &[1], q(1, 2)));
        assert_eq!(sol.component(1), mono(1, 8, &[2], q(1, 4)));
        assert!(residual(&bb, &sol, 8).iter().all(MultiSeries::is_zero));
    }

    #[test]
    fn zero_system_has_zero_solution() {
        let a = SmallMatrix::from_rows(vec![vec![c(-3), c(1)], vec![c(2), ExactComplex::i()]]).unwrap();
        let bb = BbSystem::new(
            a,
            vec![c(0), c(0)],
            vec![MultiSeries::zero(3, 6), MultiSeries::zero(3, 6)],
        )
        .unwrap();
        let sol = formal_solve_nonresonant(&bb, 6).unwrap();
        assert!(sol.coefficients().iter().flatten().all(Zero::is_zero));
    }

    #[test]
    fn nonresonant_refuses_integer_eigenvalue() {
        let bb = system_1d(1, 3, MultiSeries::zero(2, 6));
        assert_eq!(formal_solve_nonresonant(&bb, 6), Err(BbError::Resonant(3)));
    }

    #[test]
    fn step_reads_shifted_linear_coefficient() {
        // p=1, q=2, r=0, s=-1, f = x·u, g = 0
        let a = SmallMatrix::diagonal(vec![c(2), c(-1)]);
        let f = mono(3, 8, &[1, 1, 0], c(1));
        let bb = BbSystem::new(a, vec![c(1), c(0)], vec![f, MultiSeries::zero(3, 8)]).unwrap();
        let step = reduction_step(&bb).unwrap();
        assert_eq!(step.shift, vec![c(-1), c(0)]);
        assert_eq!(step.system.px(), &[c(-1), c(0)]);
        assert_eq!(step.system.a(), &SmallMatrix::diagonal(vec![c(1), c(-2)]));
        assert_eq!(step.system.order(), 7);
    }

    #[test]
    fn step_on_zero_data() {
        let a = SmallMatrix::diagonal(vec![c(2), q(1, 3)]);
        let bb = BbSystem::new(
            a,
            vec![c(0), c(0)],
            vec![MultiSeries::zero(3, 6), MultiSeries::zero(3, 6)],
        )
        .unwrap();
        let step = reduction_step(&bb).unwrap();
        assert_eq!(step.system.px(), &[c(0), c(0)]);
        assert_eq!(step.system.a().diag(), vec![c(1), q(-2, 3)]);
    }

    #[test]
    fn jordan_step_shift() {
        let a = SmallMatrix::from_rows(vec![vec![c(2), c(1)], vec![c(0), c(2)]]).unwrap();
        let bb = BbSystem::new(
            a,
            vec![c(1), c(0)],
            vec![MultiSeries::zero(3, 6), MultiSeries::zero(3, 6)],
        )
        .unwrap();
        let step = reduction_step(&bb).unwrap();
        assert_eq!(step.shift, vec![c(-1), c(0)]);
    }

    #[test]
    fn blocked_step_carries_witness() {
        let bb = system_1d(3, 1, MultiSeries::zero(2, 6));
        assert_eq!(
            reduction_step(&bb).unwrap_err(),
            BbError::Blocked { witness: vec![c(3)] }
        );
    }

    #[test]
    fn single_resonance_without_solution() {
        // x u' = x + 2u + x·u
        let bb = system_1d(1, 2, mono(2, 8, &[1, 1], c(1)));
        let cl = classify(&bb, 8).unwrap();
        assert_eq!(cl.kind, SolutionKind::NoSolution);
        assert_eq!(cl.blocking_order, Some(2));
        assert_eq!(cl.obstructions.len(), 1);
        assert_eq!(cl.obstructions[0].name, "p̄");
        assert_eq!(cl.obstructions[0].value, c(-1));
        assert!(cl.obstructions[0].blocking);
    }

    #[test]
    fn single_resonance_family() {
        // x u' = x + 2u
        let bb = system_1d(1, 2, MultiSeries::zero(2, 8));
        let cl = classify(&bb, 8).unwrap();
        assert_eq!(cl.kind, SolutionKind::Family);
        let sol = cl.solution.unwrap();
        assert_eq!(sol.coefficient(1, 0), &c(-1));
        assert_eq!(
            sol.free_parameters,
            vec![FreeParameter {
                order: 2,
                variable: 0,
                id: 0
            }]
        );
        assert!(residual(&bb, &sol, 8).iter().all(MultiSeries::is_zero));
    }

    #[test]
    fn nonresonant_2d_classifies_unique() {
        let a = SmallMatrix::diagonal(vec![c(-1), c(-2)]);
        let f = mono(3, 8, &[0, 1, 1], c(3));
        let bb = BbSystem::new(a, vec![c(1), c(1)], vec![f, MultiSeries::zero(3, 8)]).unwrap();
        let cl = classify(&bb, 8).unwrap();
        assert_eq!(cl.kind, SolutionKind::Unique);
        assert_eq!(cl.pattern, ResonancePattern::NonResonant);
    }

    #[test]
    fn order_budget_enforced() {
        let bb = system_1d(0, 5, MultiSeries::zero(2, 6));
        assert_eq!(classify(&bb, 6), Err(BbError::OrderTooSmall { needed: 7, got: 6 }));
    }

    #[test]
    fn perturbed_solution_has_residual_at_order_two() {
        let bb = system_1d(1, -1, mono(2, 6, &[0, 2], c(1)));
        let sol = formal_solve_nonresonant(&bb, 6).unwrap();
        let mut coeffs = sol.coefficients().to_vec();
        coeffs[2][0] += &c(1);
        let bad = FormalSolution::new(coeffs, vec![]);
        let r = residual(&bb, &bad, 6);
        assert!(!r[0].coeff(&[2]).is_zero());
        assert!(r[0].coeff(&[1]).is_zero());
    }

    #[test]
    fn non_canonical_linear_part_is_conjugated() {
        // lower-triangular A with eigenvalues 2 and 1/2
        let a = SmallMatrix::from_rows(vec![vec![q(1, 2), c(0)], vec![c(1), c(2)]]).unwrap();
        let f = mono(3, 8, &[1, 1, 0], c(1));
        let g = mono(3, 8, &[0, 1, 1], c(2));
        let bb = BbSystem::new(a, vec![c(1), c(1)], vec![f, g]).unwrap();
        let cl = classify(&bb, 8).unwrap();
        assert!(cl.basis.is_some());
        if let Some(sol) = &cl.solution {
            assert!(residual(&bb, sol, 8).iter().all(MultiSeries::is_zero));
        }
    }
}
