use imw_core::enumerators::{enumerate_operator, random_rational_operator, random_rational_projector};
use imw_core::macwilliams::{
    block_macwilliams, macwilliams_from_sectors, su2_macwilliams_closed, verify_first_row,
    verify_weighted_orthogonality,
};
use imw_core::{
    build_irrep_by_highest_weight, conjugation_sectors, rat, su2_irrep, sym_power_rep, IrrepLabel,
    Rational, RationalMatrix,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn parse_rows(rows: &[&[(i64, i64)]]) -> RationalMatrix {
    RationalMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&(p, q)| rat(p, q)).collect())
            .collect(),
    )
    .unwrap()
}

#[test]
fn spin_two_matrix() {
    let expect = parse_rows(&[
        &[(1, 5); 5],
        &[(3, 5), (1, 2), (3, 10), (0, 1), (-2, 5)],
        &[(1, 1), (1, 2), (-3, 14), (-4, 7), (2, 7)],
        &[(7, 5), (0, 1), (-4, 5), (1, 2), (-1, 10)],
        &[(9, 5), (-6, 5), (18, 35), (-9, 70), (1, 70)],
    ]);
    let dec = conjugation_sectors(&su2_irrep(4)).unwrap();
    assert_eq!(macwilliams_from_sectors(&dec).unwrap().m, expect);
    assert_eq!(su2_macwilliams_closed(4).unwrap().m, expect);
}

#[test]
fn spin_seven_halves_matrix() {
    let expect = parse_rows(&[
        &[(1, 8); 8],
        &[(3, 8), (59, 168), (17, 56), (13, 56), (23, 168), (1, 56), (-1, 8), (-7, 24)],
        &[(5, 8), (85, 168), (7, 24), (5, 168), (-5, 24), (-55, 168), (-5, 24), (7, 24)],
        &[(7, 8), (13, 24), (1, 24), (-31, 88), (-101, 264), (1, 88), (119, 264), (-49, 264)],
        &[(9, 8), (23, 56), (-3, 8), (-303, 616), (1, 8), (309, 616), (-3, 8), (7, 88)],
        &[(11, 8), (11, 168), (-121, 168), (1, 56), (103, 168), (-363, 728), (53, 312), (-7, 312)],
        &[(13, 8), (-13, 24), (-13, 24), (221, 264), (-13, 24), (53, 264), (-1, 24), (1, 264)],
        &[(15, 8), (-35, 24), (7, 8), (-35, 88), (35, 264), (-35, 1144), (5, 1144), (-1, 3432)],
    ]);
    let closed = su2_macwilliams_closed(7).unwrap();
    assert_eq!(closed.m, expect);
    let dec = conjugation_sectors(&su2_irrep(7)).unwrap();
    assert_eq!(macwilliams_from_sectors(&dec).unwrap().m, expect);
    assert!(verify_weighted_orthogonality(&closed));
}

#[test]
fn sym_cube_qutrit_matrix() {
    let expect = parse_rows(&[
        &[(1, 10); 4],
        &[(4, 5), (3, 5), (4, 15), (-1, 5)],
        &[(27, 10), (9, 10), (-47, 70), (9, 70)],
        &[(32, 5), (-8, 5), (32, 105), (-1, 35)],
    ]);
    let dec = conjugation_sectors(&sym_power_rep(3, 3).unwrap()).unwrap();
    let m = macwilliams_from_sectors(&dec).unwrap();
    assert_eq!(m.m, expect);
    assert!(verify_weighted_orthogonality(&m));
    assert!(verify_first_row(&m));
}

#[test]
fn closed_form_invariants_up_to_spin_six() {
    for tj in 0..=12 {
        let m = su2_macwilliams_closed(tj).unwrap();
        assert!(verify_weighted_orthogonality(&m), "2j={tj}");
        assert!(verify_first_row(&m), "2j={tj}");
        // column sums: N δ_{ρ0}
        for c in 0..m.size() {
            let s: Rational = (0..m.size()).map(|r| m.m[(r, c)].clone()).sum();
            let expect = if c == 0 { rat(tj as i64 + 1, 1) } else { rat(0, 1) };
            assert_eq!(s, expect, "2j={tj} column {c}");
        }
    }
}

#[test]
fn block_transform_on_adjoint() {
    let rep = build_irrep_by_highest_weight(&IrrepLabel::new(vec![1, 1]).unwrap()).unwrap();
    let dec = conjugation_sectors(&rep).unwrap();
    let bm = block_macwilliams(&dec).unwrap();
    assert!(bm.verify_weighted_orthogonality());
    // the transform mixes sectors
    assert!(bm.cross_sector_nonzeros() > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..4 {
        let x = if trial < 2 {
            random_rational_operator(dec.dim, 0.3, &mut rng)
        } else {
            random_rational_projector(&dec.metric, trial, &mut rng)
        };
        let e = enumerate_operator(&x, &dec).unwrap();
        let a: Vec<_> = e.sectors.iter().map(|s| s.a.clone()).collect();
        let b: Vec<_> = e.sectors.iter().map(|s| s.b.clone()).collect();
        let predicted = bm.m.mul_vec(&bm.vectorize(&a)).unwrap();
        assert_eq!(predicted, bm.vectorize(&b), "trial {trial}");
    }
}

#[test]
fn block_transform_on_27() {
    let rep = build_irrep_by_highest_weight(&IrrepLabel::new(vec![2, 2]).unwrap()).unwrap();
    let dec = conjugation_sectors(&rep).unwrap();
    let bm = block_macwilliams(&dec).unwrap();
    assert_eq!(bm.index.len(), 33);
    assert!(bm.verify_weighted_orthogonality());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let x = random_rational_projector(&dec.metric, 2, &mut rng);
    let e = enumerate_operator(&x, &dec).unwrap();
    let a: Vec<_> = e.sectors.iter().map(|s| s.a.clone()).collect();
    let b: Vec<_> = e.sectors.iter().map(|s| s.b.clone()).collect();
    assert_eq!(bm.m.mul_vec(&bm.vectorize(&a)).unwrap(), bm.vectorize(&b));
}
