//! Fixed inputs shared by the criterion targets.

use holocenter::center::rational;
use holocenter::{BbSystem, ExactComplex, HoloSystem, MultiSeries, SmallMatrix};

fn q(n: i64) -> ExactComplex {
    ExactComplex::from_integer(n)
}

fn im(n: i64) -> ExactComplex {
    ExactComplex::imaginary(rational(n, 1))
}

fn quad(terms: &[([u32; 3], ExactComplex)]) -> MultiSeries {
    MultiSeries::from_terms(3, 2, terms.iter().map(|(e, c)| (e.to_vec(), c.clone()))).unwrap()
}

/// `ẋ = ix, ẏ = 2iy + x², ż = z` plus a little coupling.
pub fn resonant_pair() -> HoloSystem {
    let nl = vec![
        quad(&[([0, 1, 1], q(1))]),
        quad(&[([2, 0, 0], q(1)), ([1, 0, 1], ExactComplex::ratio(1, 2))]),
        quad(&[([1, 1, 0], im(1))]),
    ];
    HoloSystem::new(SmallMatrix::diagonal(vec![ExactComplex::i(), im(2), q(1)]), nl).unwrap()
}

/// Three imaginary eigenvalues with nonlinear terms everywhere.
pub fn imaginary_triple() -> HoloSystem {
    let nl = vec![
        quad(&[([0, 2, 0], q(1)), ([0, 0, 2], ExactComplex::ratio(-1, 3))]),
        quad(&[([2, 0, 0], im(1)), ([1, 0, 1], q(2))]),
        quad(&[([1, 1, 0], q(1)), ([0, 2, 0], ExactComplex::from_parts(1, 2, 1, 2))]),
    ];
    HoloSystem::new(SmallMatrix::diagonal(vec![ExactComplex::i(), im(-2), im(5)]), nl).unwrap()
}

/// `i·I₃` with a quadratic perturbation.
pub fn poincare() -> HoloSystem {
    let nl = vec![
        quad(&[([0, 1, 1], ExactComplex::ratio(1, 4))]),
        quad(&[([2, 0, 0], ExactComplex::from_parts(0, 1, -1, 8))]),
        quad(&[([1, 1, 0], ExactComplex::from_parts(1, 8, 1, 8))]),
    ];
    HoloSystem::new(SmallMatrix::diagonal(vec![ExactComplex::i(); 3]), nl).unwrap()
}

/// Two-dimensional nonresonant Briot-Bouquet system of degree 3.
pub fn nonresonant_bb(order: u32) -> BbSystem {
    let a = SmallMatrix::from_rows(vec![
        vec![ExactComplex::ratio(-1, 2), q(1)],
        vec![q(0), ExactComplex::from_parts(0, 1, 3, 2)],
    ])
    .unwrap();
    let f = |terms: &[([u32; 3], ExactComplex)]| {
        MultiSeries::from_terms(3, order, terms.iter().map(|(e, c)| (e.to_vec(), c.clone()))).unwrap()
    };
    let nl = vec![
        f(&[
            ([0, 2, 0], q(1)),
            ([1, 0, 1], ExactComplex::ratio(2, 3)),
            ([0, 1, 2], q(-1)),
        ]),
        f(&[
            ([2, 0, 0], im(1)),
            ([0, 1, 1], q(3)),
            ([1, 1, 1], ExactComplex::ratio(1, 5)),
        ]),
    ];
    BbSystem::new(a, vec![q(1), ExactComplex::i()], nl).unwrap()
}

/// Dense-ish series in three variables for arithmetic benchmarks.
pub fn dense_series(order: u32) -> MultiSeries {
    let mut terms = Vec::new();
    for a in 0..=order {
        for b in 0..=order - a {
            for c in 0..=order - a - b {
                terms.push((
                    vec![a, b, c],
                    ExactComplex::from_parts(i64::from(a + 1), i64::from(b + 1), i64::from(c), 1),
                ));
            }
        }
    }
    MultiSeries::from_terms(3, order, terms).unwrap()
}
