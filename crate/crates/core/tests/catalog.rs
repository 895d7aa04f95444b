use imw_core::codes::{
    builtin_catalog, catalog_code, embedded_code, physical_distance_bruteforce, projector_from_spec,
};
use imw_core::enumerators::{
    code_depth, enumerate_code, enumerate_operator, hs_norm_sq, matrix_kl_holds,
    normalized_enumerators, random_rational_operator, random_rational_projector,
};
use imw_core::{conjugation_sectors, rat, su2_irrep, sym_power_rep, Rational, RationalMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn v(xs: &[(i64, i64)]) -> Vec<Rational> {
    xs.iter().map(|&(p, q)| rat(p, q)).collect()
}

fn enumerators_of(name: &str) -> (Vec<Rational>, Vec<Rational>) {
    let spec = catalog_code(name).unwrap();
    let rep = spec.ambient.build().unwrap();
    let dec = conjugation_sectors(&rep).unwrap();
    let p = projector_from_spec(&spec, &rep).unwrap();
    normalized_enumerators(&p, &dec).unwrap()
}

#[test]
fn code_522_enumerators() {
    let (a, b) = enumerators_of("5-2-2");
    assert_eq!(a, v(&[(1, 1), (0, 1), (0, 1), (0, 1), (3, 2)]));
    assert_eq!(b, v(&[(1, 1), (0, 1), (20, 7), (5, 2), (51, 14)]));
}

#[test]
fn code_823_enumerators() {
    let (a, b) = enumerators_of("8-2-3");
    assert_eq!(a, v(&[(1, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (3, 1), (0, 1)]));
    assert_eq!(
        b,
        v(&[(1, 1), (0, 1), (0, 1), (49, 11), (0, 1), (49, 13), (3, 1), (540, 143)])
    );
}

#[test]
fn code_1022_enumerators() {
    let (a, b) = enumerators_of("10-2-2");
    assert_eq!(a, v(&[(1, 1), (0, 1), (0, 1), (4, 1)]));
    assert_eq!(b, v(&[(1, 1), (0, 1), (45, 7), (88, 7)]));
}

#[test]
fn depth_equals_physical_distance() {
    for spec in builtin_catalog() {
        let rep = spec.ambient.build().unwrap();
        let dec = conjugation_sectors(&rep).unwrap();
        let p = projector_from_spec(&spec, &rep).unwrap();
        let depth = code_depth(&p, &dec).unwrap();
        let (q, n, code) = embedded_code(&spec).unwrap();
        let report = physical_distance_bruteforce(q, n, &code, depth.min(n)).unwrap();
        assert_eq!(report.distance, depth.min(n + 1), "{}", spec.name);
        assert!(report.margin < 1e-9);
    }
    let depths: Vec<usize> = ["5-2-2", "8-2-3", "10-2-2"]
        .iter()
        .map(|name| {
            let spec = catalog_code(name).unwrap();
            let rep = spec.ambient.build().unwrap();
            let dec = conjugation_sectors(&rep).unwrap();
            code_depth(&projector_from_spec(&spec, &rep).unwrap(), &dec).unwrap()
        })
        .collect();
    assert_eq!(depths, vec![2, 3, 2]);
}

#[test]
fn unnormalized_522_values() {
    let spec = catalog_code("5-2-2").unwrap();
    let rep = spec.ambient.build().unwrap();
    let dec = conjugation_sectors(&rep).unwrap();
    let p = projector_from_spec(&spec, &rep).unwrap();
    let e = enumerate_code(&p, &dec).unwrap();
    // A₀ = K²/N, B₀ = K/N
    assert_eq!(e.a_vector().unwrap()[0], rat(4, 5));
    assert_eq!(e.b_vector().unwrap()[0], rat(2, 5));
    assert_eq!(e.trace_a(), rat(2, 1));
    assert_eq!(e.trace_b(), rat(4, 1));
    for s in &e.sectors {
        assert!(matrix_kl_holds(s, 2).unwrap());
    }
}

#[test]
fn parseval_and_completeness() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for rep in [su2_irrep(3), sym_power_rep(3, 2).unwrap()] {
        let dec = conjugation_sectors(&rep).unwrap();
        for _ in 0..3 {
            let x = random_rational_operator(dec.dim, 0.4, &mut rng);
            let e = enumerate_operator(&x, &dec).unwrap();
            assert_eq!(e.trace_a(), hs_norm_sq(&x, &dec.metric));
            let tr = x.trace();
            assert_eq!(e.trace_b(), &tr * &tr);
        }
    }
}

#[test]
fn random_projectors_obey_kl_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let dec = conjugation_sectors(&su2_irrep(4)).unwrap();
    for k in 1..=3 {
        let x: RationalMatrix = random_rational_projector(&dec.metric, k, &mut rng);
        let p = imw_core::enumerators::CodeProjector::new(x, &dec.metric).unwrap();
        let e = enumerate_code(&p, &dec).unwrap();
        for s in &e.sectors {
            assert!(matrix_kl_holds(s, k).unwrap());
        }
        let (a, b) = normalized_enumerators(&p, &dec).unwrap();
        assert_eq!(a[0], rat(1, 1));
        assert_eq!(b[0], rat(1, 1));
    }
}
