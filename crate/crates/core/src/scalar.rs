//! Exact Gaussian-rational scalars.
//!
//! Every coefficient in the symbolic part of the crate lives in `Q(i)`, so
//! all the "is this obstruction zero?" decisions are exact.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A complex number `re + i·im` with arbitrary-precision rational parts.
///
/// `BigRational` keeps both parts in lowest terms with a positive
/// denominator, so structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactComplex {
    re: BigRational,
    im: BigRational,
}

pub(crate) fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl ExactComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn imaginary(im: BigRational) -> Self {
        Self {
            re: BigRational::zero(),
            im,
        }
    }

    /// `num/den` as a real scalar. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(rational(num, den))
    }

    /// `(re_num/re_den) + i·(im_num/im_den)`.
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Self::new(rational(re_num, re_den), rational(im_num, im_den))
    }

    pub fn i() -> Self {
        Self::imaginary(BigRational::one())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Nonzero with vanishing real part.
    pub fn is_purely_imaginary(&self) -> bool {
        self.re.is_zero() && !self.im.is_zero()
    }

    /// `Some(k)` iff the value is exactly the positive integer `k`.
    pub fn as_positive_integer(&self) -> Option<u64> {
        if !self.im.is_zero() || !self.re.is_integer() || !self.re.is_positive() {
            return None;
        }
        self.re.to_integer().to_u64()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `|z|²`, always exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = self.norm_sqr();
        Some(Self {
            re: &self.re / &d,
            im: -&self.im / &d,
        })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Exact binary value of a finite double, as a Gaussian rational.
    pub fn from_c64(z: Complex64) -> Option<Self> {
        Some(Self::new(
            BigRational::from_float(z.re)?,
            BigRational::from_float(z.im)?,
        ))
    }

    /// Exact square root in `Q(i)` when one exists.
    ///
    /// The principal branch is returned (non-negative real part; for a
    /// negative real radicand, positive imaginary part).
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.im.is_zero() {
            return if self.re.is_negative() {
                rational_sqrt(&-&self.re).map(Self::imaginary)
            } else {
                rational_sqrt(&self.re).map(Self::real)
            };
        }
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(BigInt::from(2));
        let x = rational_sqrt(&((&modulus + &self.re) / &two))?;
        let y = rational_sqrt(&((&modulus - &self.re) / &two))?;
        let y = if self.im.is_negative() { -y } else { y };
        Some(Self::new(x, y))
    }
}

/// Square root of a non-negative rational, if it is rational.
pub(crate) fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl Zero for ExactComplex {
    fn zero() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for ExactComplex {
    fn one() -> Self {
        Self::real(BigRational::one())
    }
}

impl From<i64> for ExactComplex {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for ExactComplex {
    fn from(q: BigRational) -> Self {
        Self::real(q)
    }
}

impl<'a> Add<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn add(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn sub(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: &ExactComplex) -> ExactComplex {
        if self.im.is_zero() && rhs.im.is_zero() {
            return ExactComplex::real(&self.re * &rhs.re);
        }
        ExactComplex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a> Div<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    /// Panics on division by zero, like the rational types underneath.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &ExactComplex) -> ExactComplex {
        let inv = rhs.inv().expect("division by zero ExactComplex");
        self * &inv
    }
}

impl Neg for &ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Neg for ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<ExactComplex> for ExactComplex {
            type Output = ExactComplex;
            fn $m(self, rhs: ExactComplex) -> ExactComplex {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ExactComplex> for ExactComplex {
            type Output = ExactComplex;
            fn $m(self, rhs: &ExactComplex) -> ExactComplex {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<ExactComplex> for &'a ExactComplex {
            type Output = ExactComplex;
            fn $m(self, rhs: ExactComplex) -> ExactComplex {
                self.$m(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&ExactComplex> for ExactComplex {
    fn add_assign(&mut self, rhs: &ExactComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&ExactComplex> for ExactComplex {
    fn sub_assign(&mut self, rhs: &ExactComplex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&ExactComplex> for ExactComplex {
    fn mul_assign(&mut self, rhs: &ExactComplex) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for ExactComplex {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Renders as `a`, `bi`, `a+bi`, with `(p/q)i` for fractional imaginary
/// parts, e.g. `-1/2+(3/2)i`, `-i`, `2i`.
impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&fmt_rational(&self.re));
        }
        let mag = self.im.abs();
        let im_part = if mag.is_one() {
            "i".to_string()
        } else if mag.is_integer() {
            format!("{}i", mag.numer())
        } else {
            format!("({})i", fmt_rational(&mag))
        };
        let sign = if self.im.is_negative() { "-" } else { "+" };
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{im_part}")
            } else {
                f.write_str(&im_part)
            }
        } else {
            write!(f, "{}{}{}", fmt_rational(&self.re), sign, im_part)
        }
    }
}

impl fmt::Debug for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
