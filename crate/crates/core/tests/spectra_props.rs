use holocenter::center::rational;
use holocenter::spectra::exact_eigenvalues;
use holocenter::{classify_spectrum, normal_form_of, normalizing_basis, ExactComplex, NormalFormTag, SmallMatrix};
use num_traits::Zero;
use proptest::prelude::*;

fn eigenvalue() -> impl Strategy<Value = ExactComplex> {
    prop_oneof![
        (-4i64..=4)
            .prop_filter("nonzero", |k| *k != 0)
            .prop_map(|k| ExactComplex::imaginary(rational(k, 1))),
        (-4i64..=4, 1i64..=2, -4i64..=4).prop_map(|(a, b, c)| ExactComplex::from_parts(a, b, c, 1)),
    ]
}

/// Unimodular upper/lower shears, so conjugation stays integral.
fn shear() -> impl Strategy<Value = SmallMatrix> {
    (-2i64..=2, -2i64..=2, -2i64..=2).prop_map(|(a, b, c)| {
        let q = ExactComplex::from_integer;
        let up = SmallMatrix::from_rows(vec![
            vec![q(1), q(a), q(b)],
            vec![q(0), q(1), q(c)],
            vec![q(0), q(0), q(1)],
        ])
        .unwrap();
        let low = SmallMatrix::from_rows(vec![
            vec![q(1), q(0), q(0)],
            vec![q(c), q(1), q(0)],
            vec![q(a), q(b), q(1)],
        ])
        .unwrap();
        up.mul(&low)
    })
}

fn sorted(mut v: Vec<(ExactComplex, usize)>) -> Vec<(ExactComplex, usize)> {
    v.sort_by(|a, b| format!("{:?}", a).cmp(&format!("{:?}", b)));
    v
}

proptest! {
    #[test]
    fn spectrum_is_similarity_invariant(d in prop::collection::vec(eigenvalue(), 3), p in shear()) {
        let m = SmallMatrix::diagonal(d.clone());
        let conj = p.mul(&m).mul(&p.inverse().unwrap());
        let a: Vec<_> = exact_eigenvalues(&m).unwrap().into_iter().map(|e| (e.value, e.multiplicity)).collect();
        let b: Vec<_> = exact_eigenvalues(&conj).unwrap().into_iter().map(|e| (e.value, e.multiplicity)).collect();
        prop_assert_eq!(sorted(a), sorted(b));
        prop_assert!(classify_spectrum(&conj).unwrap().diagonalizable);
        prop_assert_eq!(conj.trace(), m.trace());
    }

    #[test]
    fn normalizing_basis_normalizes(d in prop::collection::vec(eigenvalue(), 3), p in shear()) {
        prop_assume!(d.iter().any(ExactComplex::is_purely_imaginary) && d.iter().all(|e| !e.is_zero()));
        let m = p.mul(&SmallMatrix::diagonal(d)).mul(&p.inverse().unwrap());
        let b = normalizing_basis(&m).unwrap();
        let n = b.inverse().unwrap().mul(&m).mul(&b);
        prop_assert!(normal_form_of(&n) != NormalFormTag::NotNormalized, "{:?}", n);
    }

    #[test]
    fn jordan_block_is_not_diagonalizable(k in 1i64..=4, eps in -3i64..=3) {
        prop_assume!(eps != 0);
        let l = ExactComplex::imaginary(rational(k, 1));
        let z = ExactComplex::zero();
        let m = SmallMatrix::from_rows(vec![vec![l.clone(), ExactComplex::from_integer(eps)], vec![z, l]]).unwrap();
        let info = classify_spectrum(&m).unwrap();
        prop_assert!(!info.diagonalizable);
        prop_assert_eq!(info.jordan_blocks[0].1, 2);
    }
}
