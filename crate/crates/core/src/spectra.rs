//! Exact eigenvalues, Jordan structure and normal-form detection for the
//! linear part of a small system.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::SmallMatrix;
use crate::scalar::ExactComplex;

/// Relative tolerance of the uncertified double-precision path.
pub const NUMERIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("eigenvalues are not exactly representable over Q(i) (characteristic polynomial {0})")]
    Uncertifiable(String),
    #[error("linear part has a zero eigenvalue; no normal form applies")]
    ZeroEigenvalue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigenvalue {
    pub value: ExactComplex,
    pub multiplicity: usize,
}

/// `ω_to / ω_from` for two distinct purely imaginary eigenvalues `iω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImaginaryRatio {
    pub from: usize,
    pub to: usize,
    pub ratio: BigRational,
}

impl ImaginaryRatio {
    pub fn is_natural(&self) -> bool {
        self.ratio.is_integer() && self.ratio.is_positive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumInfo {
    /// Distinct eigenvalues in canonical order (see [`canonical_order`]).
    pub eigenvalues: Vec<Eigenvalue>,
    pub diagonalizable: bool,
    /// `(eigenvalue, block size)`, grouped by eigenvalue, larger blocks
    /// first.
    pub jordan_blocks: Vec<(ExactComplex, usize)>,
    /// Indices refer to `eigenvalues`.
    pub imaginary_ratios: Vec<ImaginaryRatio>,
    pub positive_integer_eigenvalues: Vec<(ExactComplex, u64)>,
}

impl SpectrumInfo {
    /// Imaginary parts `ω` of the purely imaginary eigenvalues, in order.
    pub fn imaginary_frequencies(&self) -> Vec<BigRational> {
        self.eigenvalues
            .iter()
            .filter(|e| e.value.is_purely_imaginary())
            .map(|e| e.value.im().clone())
            .collect()
    }

    pub fn has_imaginary(&self) -> bool {
        self.eigenvalues.iter().any(|e| e.value.is_purely_imaginary())
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.multiplicity).sum()
    }
}

/// Imaginary eigenvalues first, by `|ω|` ascending with `ω > 0` before
/// `ω < 0`; the rest by real then imaginary part.
pub fn canonical_order(a: &ExactComplex, b: &ExactComplex) -> Ordering {
    match (a.is_purely_imaginary(), b.is_purely_imaginary()) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (true, true) => a
            .im()
            .abs()
            .cmp(&b.im().abs())
            .then_with(|| b.im().is_positive().cmp(&a.im().is_positive())),
        (false, false) => a.re().cmp(b.re()).then_with(|| a.im().cmp(b.im())),
    }
}

// --- univariate polynomials over Q(i), coefficients low → high -----------

fn trim(mut p: Vec<ExactComplex>) -> Vec<ExactComplex> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_eval(p: &[ExactComplex], x: &ExactComplex) -> ExactComplex {
    p.iter().rev().fold(ExactComplex::zero(), |acc, c| &(&acc * x) + c)
}

fn poly_derivative(p: &[ExactComplex]) -> Vec<ExactComplex> {
    if p.len() <= 1 {
        return vec![ExactComplex::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * &ExactComplex::from_integer(k as i64))
        .collect()
}

fn poly_divrem(a: &[ExactComplex], b: &[ExactComplex]) -> (Vec<ExactComplex>, Vec<ExactComplex>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].inv().expect("nonzero divisor");
    if r.len() - 1 < db {
        return (vec![ExactComplex::zero()], r);
    }
    let mut q = vec![ExactComplex::zero(); r.len() - db];
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        if dr < db {
            break;
        }
        let f = &r[dr] * &lead;
        for (k, bc) in b.iter().enumerate() {
            let v = &f * bc;
            r[dr - db + k] -= &v;
        }
        q[dr - db] = f;
        r = trim(r);
        if dr == 0 {
            break;
        }
    }
    (trim(q), r)
}

fn poly_is_zero(p: &[ExactComplex]) -> bool {
    p.iter().all(Zero::is_zero)
}

fn poly_monic(p: &[ExactComplex]) -> Vec<ExactComplex> {
    let p = trim(p.to_vec());
    let lead = p.last().unwrap().inv().expect("nonzero polynomial");
    p.iter().map(|c| c * &lead).collect()
}

fn poly_gcd(a: &[ExactComplex], b: &[ExactComplex]) -> Vec<ExactComplex> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !poly_is_zero(&b) {
        let (_, r) = poly_divrem(&a, &b);
        a = b;
        b = r;
    }
    poly_monic(&a)
}

/// Best rational approximation by continued fractions.
fn rationalize(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let tol = 1e-10 * x.abs().max(1.0);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let approx = BigRational::new(h1.clone(), k1.clone());
        if (approx.to_f64().unwrap_or(f64::NAN) - x).abs() <= tol {
            return Some(approx);
        }
        let frac = r - a;
        if frac.abs() < 1e-300 {
            return Some(approx);
        }
        r = 1.0 / frac;
    }
    None
}

/// Durand–Kerner iteration on a monic polynomial in double precision.
pub(crate) fn numeric_roots(monic: &[Complex64]) -> Vec<Complex64> {
    let n = monic.len() - 1;
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let scale = monic.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * scale).collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-12, 0.0);
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * scale {
            break;
        }
    }
    roots
}

fn quadratic_roots(p: &[ExactComplex]) -> Option<Vec<ExactComplex>> {
    // p = c0 + c1 λ + λ²
    let c0 = &p[0];
    let c1 = &p[1];
    let four = ExactComplex::from_integer(4);
    let disc = c1 * c1 - &four * c0;
    let s = disc.sqrt()?;
    let two = ExactComplex::from_integer(2);
    Some(vec![(-c1 + &s) / &two, (-c1 - &s) / two])
}

/// Distinct roots of a squarefree monic polynomial, if all lie in `Q(i)`.
fn squarefree_roots(p: &[ExactComplex]) -> Option<Vec<ExactComplex>> {
    match p.len() - 1 {
        0 => Some(vec![]),
        1 => Some(vec![-&p[0]]),
        2 => quadratic_roots(p),
        _ => {
            let approx: Vec<Complex64> = p.iter().map(ExactComplex::to_c64).collect();
            for z in numeric_roots(&approx) {
                let cand = ExactComplex::new(rationalize(z.re)?, rationalize(z.im)?);
                if poly_eval(p, &cand).is_zero() {
                    let (q, _) = poly_divrem(p, &[-&cand, ExactComplex::one()]);
                    let mut rest = squarefree_roots(&poly_monic(&q))?;
                    rest.insert(0, cand);
                    return Some(rest);
                }
            }
            None
        }
    }
}

fn poly_to_string(p: &[ExactComplex]) -> String {
    let terms: Vec<String> = p
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| match k {
            0 => format!("({c})"),
            1 => format!("({c})λ"),
            _ => format!("({c})λ^{k}"),
        })
        .collect();
    terms.join(" + ")
}

/// Exact eigenvalues (with algebraic multiplicities) of `m`.
pub fn exact_eigenvalues(m: &SmallMatrix) -> Result<Vec<Eigenvalue>, SpectrumError> {
    let p = m.char_poly();
    let dp = poly_derivative(&p);
    let g = poly_gcd(&p, &dp);
    let (sf, _) = poly_divrem(&p, &g);
    let sf = poly_monic(&sf);
    let roots = squarefree_roots(&sf).ok_or_else(|| SpectrumError::Uncertifiable(poly_to_string(&p)))?;
    let mut out: Vec<Eigenvalue> = roots
        .into_iter()
        .map(|r| {
            let lin = [-&r, ExactComplex::one()];
            let mut q = p.clone();
            let mut mult = 0;
            loop {
                let (qq, rem) = poly_divrem(&q, &lin);
                if !poly_is_zero(&rem) {
                    break;
                }
                mult += 1;
                q = qq;
                if q.len() == 1 {
                    break;
                }
            }
            Eigenvalue {
                value: r,
                multiplicity: mult,
            }
        })
        .collect();
    out.sort_by(|a, b| canonical_order(&a.value, &b.value));
    Ok(out)
}

/// Jordan block sizes of eigenvalue `lambda` (algebraic multiplicity
/// `mult`), from the ranks of `(m − λI)^k`.
pub fn jordan_block_sizes(m: &SmallMatrix, lambda: &ExactComplex, mult: usize) -> Vec<usize> {
    let n = m.dim();
    let nil = m.shifted(lambda);
    let mut ranks = vec![n];
    let mut power = SmallMatrix::identity(n);
    for _ in 0..=mult {
        power = power.mul(&nil);
        ranks.push(power.rank());
    }
    // at_least[k] = number of blocks of size ≥ k+1
    let at_least: Vec<usize> = (0..=mult).map(|k| ranks[k] - ranks[k + 1]).collect();
    let mut sizes = Vec::new();
    for k in (0..mult).rev() {
        let exact = at_least[k] - at_least.get(k + 1).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(k + 1, exact));
    }
    sizes
}

/// Certified spectral classification.
pub fn classify_spectrum(m: &SmallMatrix) -> Result<SpectrumInfo, SpectrumError> {
    let eigenvalues = exact_eigenvalues(m)?;
    let mut jordan_blocks = Vec::new();
    for e in &eigenvalues {
        for size in jordan_block_sizes(m, &e.value, e.multiplicity) {
            jordan_blocks.push((e.value.clone(), size));
        }
    }
    let diagonalizable = jordan_blocks.iter().all(|(_, s)| *s == 1);
    let mut imaginary_ratios = Vec::new();
    for (i, a) in eigenvalues.iter().enumerate() {
        for (j, b) in eigenvalues.iter().enumerate() {
            if i != j && a.value.is_purely_imaginary() && b.value.is_purely_imaginary() {
                imaginary_ratios.push(ImaginaryRatio {
                    from: i,
                    to: j,
                    ratio: b.value.im() / a.value.im(),
                });
            }
        }
    }
    let positive_integer_eigenvalues = eigenvalues
        .iter()
        .filter_map(|e| e.value.as_positive_integer().map(|k| (e.value.clone(), k)))
        .collect();
    Ok(SpectrumInfo {
        eigenvalues,
        diagonalizable,
        jordan_blocks,
        imaginary_ratios,
        positive_integer_eigenvalues,
    })
}

/// Double-precision spectrum, used only when the exact path is refused and
/// the caller explicitly accepts uncertified results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericSpectrum {
    pub eigenvalues: Vec<(f64, f64)>,
    pub purely_imaginary: Vec<bool>,
    /// `(from, to, ω_to/ω_from, is a natural number within tolerance)`.
    pub imaginary_ratios: Vec<(usize, usize, f64, bool)>,
    pub tolerance: f64,
}

pub fn classify_spectrum_numeric(m: &SmallMatrix) -> NumericSpectrum {
    let p: Vec<Complex64> = m.char_poly().iter().map(ExactComplex::to_c64).collect();
    let mut roots = numeric_roots(&p);
    let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let tol = NUMERIC_TOLERANCE * scale;
    let is_imag = |z: &Complex64| z.re.abs() <= tol && z.im.abs() > tol;
    roots.sort_by(|a, b| {
        is_imag(b)
            .cmp(&is_imag(a))
            .then(a.im.abs().total_cmp(&b.im.abs()))
            .then(a.re.total_cmp(&b.re))
    });
    let purely_imaginary: Vec<bool> = roots.iter().map(is_imag).collect();
    let mut ratios = Vec::new();
    for i in 0..roots.len() {
        for j in 0..roots.len() {
            if i != j && purely_imaginary[i] && purely_imaginary[j] {
                let r = roots[j].im / roots[i].im;
                let natural = r > 0.5 && (r - r.round()).abs() <= NUMERIC_TOLERANCE * r.abs().max(1.0);
                ratios.push((i, j, r, natural));
            }
        }
    }
    NumericSpectrum {
        eigenvalues: roots.iter().map(|z| (z.re, z.im)).collect(),
        purely_imaginary,
        imaginary_ratios: ratios,
        tolerance: NUMERIC_TOLERANCE,
    }
}

/// Which linear normal form a linear part is written in. Parameters are
/// expressed after rescaling time so the leading imaginary eigenvalue is
/// exactly `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalFormTag {
    /// One imaginary eigenvalue, on the first axis; the rest hyperbolic.
    SingleImaginary,
    /// `diag(i, iμ[, λ])` with `|μ| ≥ 1` and `Re λ ≠ 0`.
    ImaginaryPair {
        mu: BigRational,
        lambda: Option<ExactComplex>,
    },
    /// `diag(i, iμ, iν)` with `1 ≤ |μ| ≤ |ν|`.
    ImaginaryTriple {
        mu: BigRational,
        nu: BigRational,
    },
    /// `[[i, ε, 0], [0, i, 0], [0, 0, λ]]` (third row absent in dimension 2).
    JordanPair {
        other: Option<ExactComplex>,
    },
    /// Single 3×3 Jordan block at `i`.
    JordanTriple,
    NotNormalized,
}

impl NormalFormTag {
    pub fn is_normalized(&self) -> bool {
        !matches!(self, NormalFormTag::NotNormalized)
    }

    pub fn name(&self) -> &'static str {
        match self {
            NormalFormTag::SingleImaginary => "single-imaginary",
            NormalFormTag::ImaginaryPair { .. } => "diagonal-imaginary-pair",
            NormalFormTag::ImaginaryTriple { .. } => "diagonal-imaginary-triple",
            NormalFormTag::JordanPair { .. } => "jordan-pair",
            NormalFormTag::JordanTriple => "jordan-triple",
            NormalFormTag::NotNormalized => "not-normalized",
        }
    }
}

/// Exact normal-form test of a 2×2 or 3×3 linear part.
pub fn normal_form_of(m: &SmallMatrix) -> NormalFormTag {
    use NormalFormTag::*;
    let n = m.dim();
    if !(2..=3).contains(&n) || !m.is_upper_triangular() {
        return NotNormalized;
    }
    let d = m.diag();
    if d.iter().any(Zero::is_zero) {
        return NotNormalized;
    }
    // Off-diagonal entries only on the superdiagonal inside equal-eigenvalue runs.
    for i in 0..n {
        for j in i + 1..n {
            if m.get(i, j).is_zero() {
                continue;
            }
            if j != i + 1 || d[i] != d[j] {
                return NotNormalized;
            }
        }
    }
    let imag: Vec<bool> = d.iter().map(ExactComplex::is_purely_imaginary).collect();
    let k = imag.iter().take_while(|b| **b).count();
    if k == 0 || imag[k..].iter().any(|b| *b) {
        return NotNormalized;
    }
    let omega1 = d[0].im().clone();
    let scaled = |z: &ExactComplex| z.scale(&omega1.recip());
    let chained = |i: usize| !m.get(i, i + 1).is_zero();
    let sorted = |a: &ExactComplex, b: &ExactComplex| canonical_order(a, b) != Ordering::Greater;

    if n == 3 && k == 3 && chained(0) && chained(1) {
        return JordanTriple;
    }
    if k >= 2 && chained(0) {
        let other = (n == 3).then(|| scaled(&d[2]));
        return JordanPair { other };
    }
    if (0..k.saturating_sub(1)).any(chained) || (1..k).any(|i| !sorted(&d[i - 1], &d[i])) {
        return NotNormalized;
    }
    match k {
        1 => SingleImaginary,
        2 => ImaginaryPair {
            mu: d[1].im() / &omega1,
            lambda: (n == 3).then(|| scaled(&d[2])),
        },
        _ => ImaginaryTriple {
            mu: d[1].im() / &omega1,
            nu: d[2].im() / &omega1,
        },
    }
}

/// Exact change of basis `P` with `P⁻¹ m P` in normal form, available when
/// the spectrum is certifiable, nonzero and has an imaginary eigenvalue.
pub fn normalizing_basis(m: &SmallMatrix) -> Result<SmallMatrix, SpectrumError> {
    let info = classify_spectrum(m)?;
    if info.eigenvalues.iter().any(|e| e.value.is_zero()) {
        return Err(SpectrumError::ZeroEigenvalue);
    }
    let n = m.dim();
    // Collect Jordan chains per eigenvalue, in canonical eigenvalue order.
    let mut chains: Vec<(ExactComplex, Vec<Vec<ExactComplex>>)> = Vec::new();
    for e in &info.eigenvalues {
        let nil = m.shifted(&e.value);
        let sizes = jordan_block_sizes(m, &e.value, e.multiplicity);
        let max = sizes.iter().copied().max().unwrap_or(1);
        if max == 1 {
            for v in nil.kernel() {
                chains.push((e.value.clone(), vec![v]));
            }
            continue;
        }
        // Head of the longest chain: a vector killed by nil^max but not nil^(max-1).
        let top = nil.pow(max as u32 - 1);
        let head = nil
            .pow(max as u32)
            .kernel()
            .into_iter()
            .find(|v| top.mul_vec(v).iter().any(|c| !c.is_zero()))
            .expect("generalized eigenvector exists");
        let mut chain = vec![head];
        for _ in 1..max {
            let next = nil.mul_vec(chain.last().unwrap());
            chain.push(next);
        }
        chain.reverse();
        let eigvec = chain[0].clone();
        chains.push((e.value.clone(), chain));
        // Remaining size-1 blocks of this eigenvalue: kernel vectors independent of eigvec.
        for v in nil.kernel() {
            if sizes.len() == 1 {
                break;
            }
            let pair = SmallMatrix::from_columns(&pad(&[eigvec.clone(), v.clone()], n));
            if pair.rank() >= 2 {
                chains.push((e.value.clone(), vec![v]));
                break;
            }
        }
    }
    // Jordan chains of imaginary eigenvalues go first, then the remaining
    // imaginary directions, then the hyperbolic ones.
    chains.sort_by(|(a, ca), (b, cb)| {
        let key = |z: &ExactComplex, c: &Vec<Vec<ExactComplex>>| (!(z.is_purely_imaginary() && c.len() > 1)) as u8;
        key(a, ca).cmp(&key(b, cb)).then_with(|| canonical_order(a, b))
    });
    let cols: Vec<Vec<ExactComplex>> = chains.into_iter().flat_map(|(_, c)| c).collect();
    Ok(SmallMatrix::from_columns(&cols))
}

fn pad(vs: &[Vec<ExactComplex>], n: usize) -> Vec<Vec<ExactComplex>> {
    let mut out = vs.to_vec();
    while out.len() < n {
        out.push(vec![ExactComplex::zero(); n]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> ExactComplex {
        ExactComplex::from_integer(n)
    }

    fn ci(n: i64) -> ExactComplex {
        ExactComplex::from_parts(0, 1, n, 1)
    }

    #[test]
    fn diagonal_imaginary_resonant_pair() {
        let m = SmallMatrix::diagonal(vec![ci(1), ci(2), c(1)]);
        let s = classify_spectrum(&m).unwrap();
        let vals: Vec<_> = s.eigenvalues.iter().map(|e| e.value.clone()).collect();
        assert_eq!(vals, vec![ci(1), ci(2), c(1)]);
        assert!(s.diagonalizable);
        let r = s.imaginary_ratios.iter().find(|r| r.from == 0 && r.to == 1).unwrap();
        assert_eq!(r.ratio, BigRational::from_integer(2.into()));
        assert!(r.is_natural());
        assert_eq!(s.positive_integer_eigenvalues, vec![(c(1), 1)]);
    }

    #[test]
    fn triple_imaginary_diagonal() {
        let m = SmallMatrix::diagonal(vec![ci(1), ci(1), ci(1)]);
        let s = classify_spectrum(&m).unwrap();
        assert_eq!(
            s.eigenvalues,
            vec![Eigenvalue {
                value: ci(1),
                multiplicity: 3
            }]
        );
        assert!(s.diagonalizable);
        assert_eq!(s.jordan_blocks, vec![(ci(1), 1), (ci(1), 1), (ci(1), 1)]);
    }

    #[test]
    fn jordan_pair_plus_real() {
        let lam = ExactComplex::ratio(1, 2);
        let m = SmallMatrix::from_rows(vec![
            vec![ci(1), c(1), c(0)],
            vec![c(0), ci(1), c(0)],
            vec![c(0), c(0), lam.clone()],
        ])
        .unwrap();
        let s = classify_spectrum(&m).unwrap();
        assert!(!s.diagonalizable);
        assert_eq!(s.jordan_blocks, vec![(ci(1), 2), (lam, 1)]);
    }

    #[test]
    fn irrational_spectrum_is_rejected() {
        // eigenvalues ±i√2
        let m = SmallMatrix::from_rows(vec![vec![c(0), c(1)], vec![c(-2), c(0)]]).unwrap();
        assert!(matches!(classify_spectrum(&m), Err(SpectrumError::Uncertifiable(_))));
        let num = classify_spectrum_numeric(&m);
        assert!(num.purely_imaginary.iter().all(|b| *b));
        assert!((num.eigenvalues[0].1.abs() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cubic_with_gaussian_roots() {
        // companion matrix of (λ - 1/2)(λ - 3i)(λ + 2 - i)
        let roots = [ExactComplex::ratio(1, 2), ci(3), ExactComplex::from_parts(-2, 1, 1, 1)];
        let m = SmallMatrix::from_rows(vec![
            vec![roots[0].clone(), c(1), c(0)],
            vec![c(0), roots[1].clone(), c(1)],
            vec![c(0), c(0), roots[2].clone()],
        ])
        .unwrap();
        // conjugate by a dense invertible matrix so the roots are not visible
        let p = SmallMatrix::from_rows(vec![
            vec![c(1), c(2), c(0)],
            vec![c(0), c(1), ExactComplex::i()],
            vec![c(1), c(0), c(1)],
        ])
        .unwrap();
        let dense = p.inverse().unwrap().mul(&m).mul(&p);
        let s = classify_spectrum(&dense).unwrap();
        let mut got: Vec<_> = s.eigenvalues.iter().map(|e| e.value.clone()).collect();
        let mut want = roots.to_vec();
        got.sort_by(canonical_order);
        want.sort_by(canonical_order);
        assert_eq!(got, want);
        assert!(s.diagonalizable);
    }

    #[test]
    fn normal_form_examples() {
        let lam = ExactComplex::from_parts(1, 1, 1, 1);
        let m = SmallMatrix::diagonal(vec![ci(1), ci(2), lam.clone()]);
        assert_eq!(
            normal_form_of(&m),
            NormalFormTag::ImaginaryPair {
                mu: BigRational::from_integer(2.into()),
                lambda: Some(lam)
            }
        );
        let j3 = SmallMatrix::from_rows(vec![
            vec![ci(1), c(1), c(0)],
            vec![c(0), ci(1), c(1)],
            vec![c(0), c(0), ci(1)],
        ])
        .unwrap();
        assert_eq!(normal_form_of(&j3), NormalFormTag::JordanTriple);
        let real = SmallMatrix::diagonal(vec![c(1), c(2), c(3)]);
        assert_eq!(normal_form_of(&real), NormalFormTag::NotNormalized);
        let unsorted = SmallMatrix::diagonal(vec![ci(2), ci(1), c(1)]);
        assert_eq!(normal_form_of(&unsorted), NormalFormTag::NotNormalized);
    }

    #[test]
    fn normalizing_basis_produces_normal_form() {
        // Jordan pair at 2i and hyperbolic -1, hidden by a change of basis
        let j = SmallMatrix::from_rows(vec![
            vec![ci(2), c(1), c(0)],
            vec![c(0), ci(2), c(0)],
            vec![c(0), c(0), c(-1)],
        ])
        .unwrap();
        let q = SmallMatrix::from_rows(vec![
            vec![c(1), c(1), c(0)],
            vec![c(0), c(1), c(1)],
            vec![c(1), c(0), c(2)],
        ])
        .unwrap();
        let dense = q.mul(&j).mul(&q.inverse().unwrap());
        let p = normalizing_basis(&dense).unwrap();
        let nf = p.inverse().unwrap().mul(&dense).mul(&p);
        assert!(matches!(normal_form_of(&nf), NormalFormTag::JordanPair { .. }), "{nf}");
    }
}
