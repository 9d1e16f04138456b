//! Sparse truncated multivariate power series over `Q(i)`.
//!
//! Truncation is by total degree. Variable 0 plays the role of the
//! independent variable whenever a series is read as the right-hand side of
//! a Briot-Bouquet system; nothing here depends on that except
//! [`MultiSeries::shear_substitute`] and [`MultiSeries::divide_by_x`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::ExactComplex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("variable count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("exponent {exponent:?} has wrong length for {nvars} variables")]
    ExponentLength { exponent: Vec<u32>, nvars: usize },
    #[error("variable index {index} cannot be sheared (nvars = {nvars})")]
    BadIndex { index: usize, nvars: usize },
    #[error("term {exponent:?} is not divisible by the independent variable")]
    NotDivisible { exponent: Vec<u32> },
    #[error("series has a zero constant term and cannot be inverted")]
    NotInvertible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Truncated power series `Σ c_α z^α`, `|α| ≤ order`, no zero coefficients
/// stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiSeries {
    nvars: usize,
    order: u32,
    terms: BTreeMap<Vec<u32>, ExactComplex>,
}

fn degree(exp: &[u32]) -> u32 {
    exp.iter().sum()
}

fn binomial(n: u32, k: u32) -> i64 {
    let mut acc: i64 = 1;
    for t in 0..k {
        acc = acc * i64::from(n - t) / i64::from(t + 1);
    }
    acc
}

impl MultiSeries {
    pub fn zero(nvars: usize, order: u32) -> Self {
        Self {
            nvars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, order: u32, c: ExactComplex) -> Self {
        let mut s = Self::zero(nvars, order);
        s.add_term(vec![0; nvars], c);
        s
    }

    /// The coordinate function `z_j`.
    pub fn variable(nvars: usize, order: u32, j: usize) -> Self {
        let mut exp = vec![0; nvars];
        exp[j] = 1;
        Self::monomial(nvars, order, exp, ExactComplex::one())
    }

    pub fn monomial(nvars: usize, order: u32, exponent: Vec<u32>, coeff: ExactComplex) -> Self {
        assert_eq!(exponent.len(), nvars, "exponent length");
        let mut s = Self::zero(nvars, order);
        s.add_term(exponent, coeff);
        s
    }

    /// Builds a series from `(exponent, coefficient)` pairs. Repeated
    /// exponents are summed; terms above `order` are dropped.
    pub fn from_terms<I>(nvars: usize, order: u32, terms: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (Vec<u32>, ExactComplex)>,
    {
        let mut s = Self::zero(nvars, order);
        for (exp, c) in terms {
            if exp.len() != nvars {
                return Err(SeriesError::ExponentLength { exponent: exp, nvars });
            }
            s.add_term(exp, c);
        }
        Ok(s)
    }

    /// Univariate series `Σ coeffs[k] t^k`.
    pub fn from_univariate(coeffs: &[ExactComplex], order: u32) -> Self {
        let mut s = Self::zero(1, order);
        for (k, c) in coeffs.iter().enumerate() {
            s.add_term(vec![k as u32], c.clone());
        }
        s
    }

    fn add_term(&mut self, exp: Vec<u32>, c: ExactComplex) {
        if c.is_zero() || degree(&exp) > self.order {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &ExactComplex)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn get(&self, exponent: &[u32]) -> Option<&ExactComplex> {
        self.terms.get(exponent)
    }

    pub fn coeff(&self, exponent: &[u32]) -> ExactComplex {
        self.get(exponent).cloned().unwrap_or_else(ExactComplex::zero)
    }

    pub fn constant_term(&self) -> ExactComplex {
        self.coeff(&vec![0; self.nvars])
    }

    /// Coefficient of `z_j` (degree-one monomial).
    pub fn linear_coeff(&self, j: usize) -> ExactComplex {
        let mut e = vec![0; self.nvars];
        e[j] = 1;
        self.coeff(&e)
    }

    /// Highest total degree present.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| degree(e)).max()
    }

    /// Lowest total degree present.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| degree(e)).min()
    }

    /// Keeps only the terms whose total degree satisfies `keep`.
    pub fn filter_degree(&self, keep: impl Fn(u32) -> bool) -> Self {
        Self {
            nvars: self.nvars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(degree(e)))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        let mut s = self.filter_degree(|d| d <= order);
        s.order = order;
        s
    }

    /// Re-labels the truncation bound. Raising it treats the stored terms as
    /// an exact polynomial, which is how input systems are represented.
    pub fn with_order(&self, order: u32) -> Self {
        let mut s = self.filter_degree(|d| d <= order);
        s.order = order;
        s
    }

    pub fn scale(&self, k: &ExactComplex) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        Self {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), SeriesError> {
        if self.nvars != other.nvars {
            return Err(SeriesError::DimensionMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_same(other)?;
        let order = self.order.min(other.order);
        let mut s = self.truncate(order);
        for (e, c) in &other.terms {
            s.add_term(e.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_same(other)?;
        let order = self.order.min(other.order);
        let mut s = self.truncate(order);
        for (e, c) in &other.terms {
            s.add_term(e.clone(), -c);
        }
        Ok(s)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_same(other)?;
        let order = self.order.min(other.order);
        let mut a: Vec<_> = self.terms.iter().map(|(e, c)| (degree(e), e, c)).collect();
        let mut b: Vec<_> = other.terms.iter().map(|(e, c)| (degree(e), e, c)).collect();
        a.sort_by_key(|t| t.0);
        b.sort_by_key(|t| t.0);
        let mut acc: HashMap<Vec<u32>, ExactComplex> = HashMap::new();
        for (da, ea, ca) in &a {
            if *da > order {
                break;
            }
            for (db, eb, cb) in &b {
                if da + db > order {
                    break;
                }
                let exp: Vec<u32> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                let prod = *ca * *cb;
                match acc.get_mut(&exp) {
                    Some(v) => *v += &prod,
                    None => {
                        acc.insert(exp, prod);
                    }
                }
            }
        }
        Ok(Self {
            nvars: self.nvars,
            order,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    /// Replaces `z_j` by `z_0·(z_j + shift)` and re-truncates.
    pub fn shear_substitute(&self, j: usize, shift: &ExactComplex) -> Result<Self, SeriesError> {
        if j == 0 || j >= self.nvars {
            return Err(SeriesError::BadIndex {
                index: j,
                nvars: self.nvars,
            });
        }
        let mut s = Self::zero(self.nvars, self.order);
        for (e, c) in &self.terms {
            let k = e[j];
            for m in 0..=k {
                let mut exp = e.clone();
                exp[0] += k;
                exp[j] = m;
                if degree(&exp) > self.order {
                    continue;
                }
                let coeff = c * &shift.pow(k - m) * ExactComplex::from_integer(binomial(k, m));
                s.add_term(exp, coeff);
            }
        }
        Ok(s)
    }

    /// Divides by the independent variable `z_0`; the order drops by one.
    pub fn divide_by_x(&self) -> Result<Self, SeriesError> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[0] == 0 {
                return Err(SeriesError::NotDivisible { exponent: e.clone() });
            }
            let mut exp = e.clone();
            exp[0] -= 1;
            terms.insert(exp, c.clone());
        }
        Ok(Self {
            nvars: self.nvars,
            order: self.order.saturating_sub(1),
            terms,
        })
    }

    /// Partial derivative in `z_j`; valid to one order less.
    pub fn derivative(&self, j: usize) -> Self {
        let mut s = Self::zero(self.nvars, self.order.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[j] == 0 {
                continue;
            }
            let mut exp = e.clone();
            exp[j] -= 1;
            s.add_term(exp, c * &ExactComplex::from_integer(i64::from(e[j])));
        }
        s
    }

    /// Multiplicative inverse, defined when the constant term is nonzero.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = self.constant_term();
        let c0_inv = c0.inv().ok_or(SeriesError::NotInvertible)?;
        // 1/φ = c0⁻¹ · 1/(1 + δ), δ = (φ - c0)/c0, evaluated by Horner.
        let delta = self.filter_degree(|d| d > 0).scale(&c0_inv);
        let one = Self::constant(self.nvars, self.order, ExactComplex::one());
        let mut acc = one.clone();
        for _ in 0..=self.order {
            acc = one.checked_sub(&delta.checked_mul(&acc)?)?;
        }
        Ok(acc.scale(&c0_inv))
    }

    /// Substitutes `subs[j]` for `z_j`. All substitutes share one variable
    /// count; the result is truncated at the smaller of the two orders.
    pub fn compose(&self, subs: &[MultiSeries]) -> Result<Self, SeriesError> {
        if subs.len() != self.nvars {
            return Err(SeriesError::DimensionMismatch {
                left: self.nvars,
                right: subs.len(),
            });
        }
        let Some(first) = subs.first() else {
            return Ok(self.clone());
        };
        let m = first.nvars;
        for s in subs {
            if s.nvars != m {
                return Err(SeriesError::DimensionMismatch {
                    left: m,
                    right: s.nvars,
                });
            }
        }
        let order = subs.iter().map(|s| s.order).min().unwrap_or(self.order).min(self.order);
        let low = subs
            .iter()
            .map(|s| s.min_degree().unwrap_or(u32::MAX))
            .min()
            .unwrap_or(0);
        let mut powers: Vec<Vec<MultiSeries>> = subs
            .iter()
            .map(|s| vec![Self::constant(m, order, ExactComplex::one()), s.truncate(order)])
            .collect();
        let mut out = Self::zero(m, order);
        for (e, c) in &self.terms {
            if low > 0 && u64::from(degree(e)) * u64::from(low) > u64::from(order) {
                continue;
            }
            let mut term = Self::constant(m, order, c.clone());
            for (j, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[j].len() <= k as usize {
                    let next = powers[j].last().unwrap().checked_mul(&powers[j][1])?;
                    powers[j].push(next);
                }
                term = term.checked_mul(&powers[j][k as usize])?;
                if term.is_zero() {
                    break;
                }
            }
            for (te, tc) in term.terms {
                out.add_term(te, tc);
            }
        }
        Ok(out)
    }

    /// Double-precision evaluation of the truncated polynomial.
    pub fn eval_numeric(&self, point: &[Complex64]) -> Result<Complex64, SeriesError> {
        if point.len() != self.nvars {
            return Err(SeriesError::DimensionMismatch {
                left: self.nvars,
                right: point.len(),
            });
        }
        if self.nvars == 1 {
            // Horner in the single variable.
            let Some(top) = self.degree() else {
                return Ok(Complex64::new(0.0, 0.0));
            };
            let mut acc = Complex64::new(0.0, 0.0);
            for k in (0..=top).rev() {
                acc = acc * point[0] + self.get(&[k]).map_or(Complex64::new(0.0, 0.0), |c| c.to_c64());
            }
            return Ok(acc);
        }
        let pows = numeric_powers(point, self.order);
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .enumerate()
                    .fold(c.to_c64(), |acc, (j, &k)| acc * pows[j][k as usize])
            })
            .sum())
    }

    /// Exact evaluation at a Gaussian-rational point.
    pub fn eval_exact(&self, point: &[ExactComplex]) -> Result<ExactComplex, SeriesError> {
        if point.len() != self.nvars {
            return Err(SeriesError::DimensionMismatch {
                left: self.nvars,
                right: point.len(),
            });
        }
        let max_exp = self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0);
        let pows: Vec<Vec<ExactComplex>> = point
            .iter()
            .map(|p| {
                let mut v = vec![ExactComplex::one()];
                for k in 1..=max_exp as usize {
                    let next = &v[k - 1] * p;
                    v.push(next);
                }
                v
            })
            .collect();
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .enumerate()
                    .fold(c.clone(), |acc, (j, &k)| &acc * &pows[j][k as usize])
            })
            .sum())
    }
}

fn numeric_powers(point: &[Complex64], order: u32) -> Vec<Vec<Complex64>> {
    point
        .iter()
        .map(|&p| {
            let mut v = Vec::with_capacity(order as usize + 1);
            v.push(Complex64::new(1.0, 0.0));
            for k in 1..=order as usize {
                v.push(v[k - 1] * p);
            }
            v
        })
        .collect()
}

/// Exact `a (op) b`, optionally scaled by `scalar`.
pub fn arith(
    a: &MultiSeries,
    b: &MultiSeries,
    op: ArithOp,
    scalar: Option<&ExactComplex>,
) -> Result<MultiSeries, SeriesError> {
    let r = match op {
        ArithOp::Add => a.checked_add(b)?,
        ArithOp::Sub => a.checked_sub(b)?,
        ArithOp::Mul => a.checked_mul(b)?,
    };
    Ok(match scalar {
        Some(k) => r.scale(k),
        None => r,
    })
}

macro_rules! series_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> std::ops::$tr<&'a MultiSeries> for &'a MultiSeries {
            type Output = MultiSeries;
            /// Panics on a variable-count mismatch; use the `checked_*`
            /// form when the inputs are not known to agree.
            fn $m(self, rhs: &MultiSeries) -> MultiSeries {
                self.$checked(rhs).expect("series variable count mismatch")
            }
        }
    };
}

series_op!(Add, add, checked_add);
series_op!(Sub, sub, checked_sub);
series_op!(Mul, mul, checked_mul);

impl std::ops::Neg for &MultiSeries {
    type Output = MultiSeries;
    fn neg(self) -> MultiSeries {
        self.scale(&-ExactComplex::one())
    }
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O({})", self.order + 1);
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (j, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*z{j}")?,
                    _ => write!(f, "*z{j}^{k}")?,
                }
            }
        }
        write!(f, " + O({})", self.order + 1)
    }
}

impl fmt::Debug for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiSeries[{} vars] {}", self.nvars, self)
    }
}
