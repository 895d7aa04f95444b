//! Randomized invariants of transforms, enumerators and the LP.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use imw_core::enumerators::{
    enumerate_code, enumerate_operator, hs_norm_sq, matrix_kl_holds, random_rational_operator,
    random_rational_projector, CodeProjector,
};
use imw_core::lp::{build_lp, solve, Verdict};
use imw_core::macwilliams::{
    macwilliams_from_sectors, su2_macwilliams_closed, verify_first_row,
    verify_weighted_orthogonality,
};
use imw_core::{conjugation_sectors, rat, su2_irrep, sym_power_rep, Decomposition, Rational};

fn small_rep(choice: u8) -> Decomposition {
    let rep = match choice % 5 {
        0 => su2_irrep(2),
        1 => su2_irrep(3),
        2 => su2_irrep(4),
        3 => sym_power_rep(3, 2).unwrap(),
        _ => sym_power_rep(3, 3).unwrap(),
    };
    conjugation_sectors(&rep).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closed_form_is_orthogonal(two_j in 0u32..=14) {
        let m = su2_macwilliams_closed(two_j).unwrap();
        prop_assert!(verify_weighted_orthogonality(&m));
        prop_assert!(verify_first_row(&m));
        // M is an involution on the scalar enumerators
        let sq = m.m.mul(&m.m).unwrap();
        let n = m.size();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { rat(1, 1) } else { rat(0, 1) };
                prop_assert_eq!(&sq[(i, j)], &want);
            }
        }
    }

    #[test]
    fn parseval_and_completeness(choice in 0u8..5, seed in any::<u64>()) {
        let dec = small_rep(choice);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_rational_operator(dec.dim, 0.4, &mut rng);
        let e = enumerate_operator(&x, &dec).unwrap();
        let tr = x.trace();
        prop_assert_eq!(e.trace_a(), hs_norm_sq(&x, &dec.metric));
        prop_assert_eq!(e.trace_b(), &tr * &tr);
        let m = macwilliams_from_sectors(&dec).unwrap();
        prop_assert_eq!(m.apply(&e.a_vector().unwrap()).unwrap(), e.b_vector().unwrap());
    }

    #[test]
    fn projectors_satisfy_kl_and_their_lp(choice in 0u8..5, seed in any::<u64>(), kf in 0.0f64..1.0) {
        let dec = small_rep(choice);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = 1 + ((dec.dim - 1) as f64 * kf) as usize;
        let p = CodeProjector::new(random_rational_projector(&dec.metric, k, &mut rng), &dec.metric).unwrap();
        let e = enumerate_code(&p, &dec).unwrap();
        for s in &e.sectors {
            prop_assert!(matrix_kl_holds(s, k).unwrap());
        }
        // the normalized enumerators of a real code are a feasible LP point
        // when nothing beyond the trivial sector is required
        let m = macwilliams_from_sectors(&dec).unwrap();
        let a: Vec<Rational> = e.a_tilde().unwrap();
        let lp = build_lp(&m, k, &[]).unwrap();
        prop_assert!(lp.satisfies(&a));
        let feasible = matches!(solve(&lp).unwrap().verdict, Verdict::Feasible { .. });
        prop_assert!(feasible);
    }
}
