mod common;

use common::{nonresonant_eigenvalue, nonzero_scalar, oracle, random_system, Q};
use holocenter::{classify, formal_solve_nonresonant, reduction_step, residual, SolutionKind};
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn resonant_diag(rng: &mut ChaCha8Rng) -> (Vec<Q>, Option<Q>) {
    let int = |k: i64| Q::from_integer(k);
    match rng.random_range(0..4) {
        0 => (vec![int(rng.random_range(1..=4))], None),
        1 => {
            let q = rng.random_range(1..=3);
            (vec![int(q), int(q + rng.random_range(1..=2))], None)
        }
        2 => {
            let q = rng.random_range(1..=3);
            (vec![int(q), int(q)], None)
        }
        _ => {
            let q = rng.random_range(1..=3);
            (vec![int(q), int(q)], Some(nonzero_scalar(rng)))
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn nonresonant_matches_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=2);
        let diag = (0..n).map(|_| nonresonant_eigenvalue(&mut rng)).collect();
        let sys = random_system(&mut rng, diag, None, 3);
        let bb = sys.to_bb(8);
        let sol = formal_solve_nonresonant(&bb, 8).unwrap();
        let o = oracle(&sys, 8);
        prop_assert_eq!(sol.coefficients(), o.coeffs.as_slice());
        prop_assert!(residual(&bb, &sol, 8).iter().all(|r| r.is_zero()));
    }

    #[test]
    fn resonant_classification_matches_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (diag, eps) = resonant_diag(&mut rng);
        let sys = random_system(&mut rng, diag, eps, 3);
        let c = classify(&sys.to_bb(8), 8).unwrap();
        let o = oracle(&sys, 8);
        prop_assert_eq!(c.blocking_order.map(|k| k as usize), o.unsolvable_at);
        let obs: Vec<_> = c.obstructions.iter().map(|ob| (ob.order as usize, ob.variable, ob.value.clone())).collect();
        prop_assert_eq!(obs, o.resonant_rhs);
        if c.kind != SolutionKind::NoSolution {
            prop_assert_eq!(c.free_parameter_count(), o.free);
            prop_assert_eq!(c.solution.as_ref().unwrap().coefficients(), o.coeffs.as_slice());
        }
    }

    /// Trichotomy: no solution exactly when a blocking constant is nonzero,
    /// a family exactly when some resonance leaves a free coefficient.
    #[test]
    fn trichotomy(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (diag, eps) = resonant_diag(&mut rng);
        let sys = random_system(&mut rng, diag, eps, 3);
        let bb = sys.to_bb(8);
        let c = classify(&bb, 8).unwrap();
        let blocked = c.obstructions.iter().any(|o| o.blocking && !o.value.is_zero());
        prop_assert_eq!(c.kind == SolutionKind::NoSolution, blocked);
        match c.kind {
            SolutionKind::NoSolution => prop_assert!(c.solution.is_none() && c.blocking_order.is_some()),
            SolutionKind::Unique => prop_assert_eq!(c.free_parameter_count(), 0),
            SolutionKind::Family => prop_assert!(c.free_parameter_count() > 0),
        }
        if let Some(sol) = &c.solution {
            prop_assert!(residual(&bb, sol, 8).iter().all(|r| r.is_zero()));
        }
    }

    /// One shearing step conjugates solutions: `y = x·(ỹ + c)`.
    #[test]
    fn reduction_step_conjugates_solutions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=2);
        let diag = (0..n).map(|_| nonresonant_eigenvalue(&mut rng)).collect();
        let sys = random_system(&mut rng, diag, None, 3);
        let bb = sys.to_bb(8);
        let step = reduction_step(&bb).unwrap();
        prop_assert!(step.free_variables.is_empty());
        let full = formal_solve_nonresonant(&bb, 8).unwrap();
        let shifted = formal_solve_nonresonant(&step.system, 7).unwrap();
        for j in 0..n {
            prop_assert_eq!(full.coefficient(1, j), &step.shift[j]);
            for k in 1..=7 {
                prop_assert_eq!(full.coefficient(k + 1, j), shifted.coefficient(k, j));
            }
        }
    }
}
