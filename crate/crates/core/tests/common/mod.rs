//! Test-only oracle and random generators.
//!
//! The oracle solves `x·y' = p·x + A·y + f(x, y)` by undetermined
//! coefficients with dense univariate arithmetic and its own elimination,
//! sharing nothing with the library's solver beyond scalar arithmetic.

#![allow(dead_code, clippy::needless_range_loop)]

use holocenter::{BbSystem, ExactComplex, MultiSeries, SmallMatrix};
use num_traits::{One, Zero};
use rand::Rng;

pub type Q = ExactComplex;

#[derive(Debug, Clone)]
pub struct OracleSystem {
    pub n: usize,
    pub a: Vec<Vec<Q>>,
    pub px: Vec<Q>,
    /// Terms of `f_i` in `(x, y_1, …, y_n)`.
    pub f: Vec<Vec<(Vec<u32>, Q)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// First order whose coefficient equation has no solution.
    pub unsolvable_at: Option<usize>,
    /// Total number of undetermined unknowns (set to 0).
    pub free: usize,
    /// `coeffs[k][j]`, valid for `k` below `unsolvable_at`.
    pub coeffs: Vec<Vec<Q>>,
    /// `(order, variable, rhs value)` where `A_jj` equals the order.
    pub resonant_rhs: Vec<(usize, usize, Q)>,
}

fn mul_trunc(a: &[Q], b: &[Q], deg: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); deg + 1];
    for i in 0..a.len().min(deg + 1) {
        for j in 0..b.len().min(deg + 1 - i) {
            out[i + j] = &out[i + j] + &(&a[i] * &b[j]);
        }
    }
    out
}

/// Gauss-Jordan on `[m | r]`; free unknowns set to 0.
/// Returns `None` when inconsistent, else `(solution, nullity)`.
fn solve(m: &[Vec<Q>], r: &[Q]) -> Option<(Vec<Q>, usize)> {
    let n = r.len();
    let mut aug: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row = m[i].clone();
            row.push(r[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&i| !aug[i][col].is_zero()) else {
            continue;
        };
        aug.swap(row, p);
        let inv = Q::one() / &aug[row][col];
        for c in 0..=n {
            aug[row][c] = &aug[row][c] * &inv;
        }
        for i in 0..n {
            if i != row && !aug[i][col].is_zero() {
                let k = aug[i][col].clone();
                for c in 0..=n {
                    let v = &aug[row][c] * &k;
                    aug[i][c] = &aug[i][c] - &v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if (row..n).any(|i| !aug[i][n].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][n].clone();
    }
    Some((x, n - pivots.len()))
}

pub fn oracle(sys: &OracleSystem, order: usize) -> OracleResult {
    let n = sys.n;
    let mut y: Vec<Vec<Q>> = vec![vec![Q::zero(); order + 1]; n];
    let mut free = 0;
    let mut resonant_rhs = Vec::new();
    let mut unsolvable_at = None;
    for k in 1..=order {
        let mut r = vec![Q::zero(); n];
        for i in 0..n {
            if k == 1 {
                r[i] = &r[i] + &sys.px[i];
            }
            for (e, c) in &sys.f[i] {
                if e[0] as usize > k {
                    continue;
                }
                let mut prod = vec![Q::zero(); k + 1];
                prod[e[0] as usize] = c.clone();
                for j in 0..n {
                    for _ in 0..e[j + 1] {
                        prod = mul_trunc(&prod, &y[j], k);
                    }
                }
                r[i] = &r[i] + &prod[k];
            }
        }
        let kq = Q::from_integer(k as i64);
        for j in 0..n {
            if sys.a[j][j] == kq {
                resonant_rhs.push((k, j, r[j].clone()));
            }
        }
        let m: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            &kq - &sys.a[i][j]
                        } else {
                            -sys.a[i][j].clone()
                        }
                    })
                    .collect()
            })
            .collect();
        match solve(&m, &r) {
            None => {
                unsolvable_at = Some(k);
                break;
            }
            Some((c, nullity)) => {
                free += nullity;
                for j in 0..n {
                    y[j][k] = c[j].clone();
                }
            }
        }
    }
    OracleResult {
        unsolvable_at,
        free,
        coeffs: (0..=order).map(|k| (0..n).map(|j| y[j][k].clone()).collect()).collect(),
        resonant_rhs,
    }
}

impl OracleSystem {
    pub fn to_bb(&self, order: u32) -> BbSystem {
        let a = SmallMatrix::from_rows(self.a.clone()).unwrap();
        let f = self
            .f
            .iter()
            .map(|terms| MultiSeries::from_terms(self.n + 1, order, terms.iter().cloned()).unwrap())
            .collect();
        BbSystem::new(a, self.px.clone(), f).unwrap()
    }

    /// Adds `c·x^k` to `f_i` (or to `p_i` when `k = 1`).
    pub fn add_power_of_x(&mut self, i: usize, k: u32, c: &Q) {
        if k == 1 {
            self.px[i] = &self.px[i] + c;
        } else {
            let mut e = vec![0; self.n + 1];
            e[0] = k;
            self.f[i].push((e, c.clone()));
        }
    }
}

// --- random data --------------------------------------------------------------

pub fn small_rational<R: Rng>(rng: &mut R) -> Q {
    let num = rng.random_range(-3..=3);
    let den = rng.random_range(1..=3);
    Q::ratio(num, den)
}

pub fn small_scalar<R: Rng>(rng: &mut R) -> Q {
    if rng.random_bool(0.3) {
        let re = small_rational(rng);
        let im = small_rational(rng);
        Q::new(re.re().clone(), im.re().clone())
    } else {
        small_rational(rng)
    }
}

pub fn nonzero_scalar<R: Rng>(rng: &mut R) -> Q {
    loop {
        let c = small_scalar(rng);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Eigenvalue that is never a positive integer.
pub fn nonresonant_eigenvalue<R: Rng>(rng: &mut R) -> Q {
    match rng.random_range(0..4) {
        0 => Q::from_integer(rng.random_range(-4..=0)),
        1 => {
            let den = rng.random_range(2..=5);
            let mut num = rng.random_range(-12..=12);
            if num % den == 0 {
                num += 1;
            }
            Q::ratio(num, den)
        }
        2 => Q::from_parts(
            rng.random_range(-3..=3),
            1,
            rng.random_range(1..=4),
            rng.random_range(1..=3),
        ),
        _ => Q::from_parts(0, 1, rng.random_range(-5..=5).max(1), 2),
    }
}

/// Sparse terms of total degree 2..=`max_deg` in `(x, y_1, …, y_n)`.
pub fn random_terms<R: Rng>(rng: &mut R, n: usize, max_terms: usize, max_deg: u32) -> Vec<(Vec<u32>, Q)> {
    let count = rng.random_range(0..=max_terms);
    (0..count)
        .map(|_| {
            let deg = rng.random_range(2..=max_deg);
            let mut e = vec![0u32; n + 1];
            for _ in 0..deg {
                e[rng.random_range(0..=n)] += 1;
            }
            (e, nonzero_scalar(rng))
        })
        .collect()
}

pub fn random_system<R: Rng>(rng: &mut R, diag: Vec<Q>, epsilon: Option<Q>, max_deg: u32) -> OracleSystem {
    let n = diag.len();
    let mut a = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        a[i][i] = diag[i].clone();
    }
    if let Some(e) = epsilon {
        a[0][1] = e;
    }
    OracleSystem {
        n,
        px: (0..n).map(|_| small_scalar(rng)).collect(),
        f: (0..n).map(|_| random_terms(rng, n, 4, max_deg)).collect(),
        a,
    }
}
