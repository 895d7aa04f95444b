use imw_core::macwilliams::block_macwilliams;
use imw_core::sdp::{block_char_poly, build_sdp, check_point, to_orthonormal_blocks, DetectionMode};
use imw_core::{
    build_irrep_by_highest_weight, conjugation_sectors, rat, IrrepLabel, Radical, RadicalMatrix,
    Rational, RationalMatrix,
};
use num_traits::{One, Zero};

fn diag(xs: Vec<Radical>) -> RadicalMatrix {
    RadicalMatrix::diagonal(&xs)
}

fn r(p: i64, q: i64) -> Radical {
    Radical::from(rat(p, q))
}

/// Published K = 5 blocks in sector order.
fn table(labels: &[String]) -> (Vec<RadicalMatrix>, Vec<RadicalMatrix>) {
    let root = Radical::term(rat(1, 84), 3189).unwrap();
    let (ap, am) = (&r(117, 84) + &root, &r(117, 84) - &root);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for l in labels {
        let (x, y) = match l.as_str() {
            "(0,0)" => (diag(vec![r(25, 27)]), diag(vec![r(5, 27)])),
            "(1,1)" => (diag(vec![r(0, 1); 2]), diag(vec![r(0, 1); 2])),
            "(3,0)" | "(0,3)" => (diag(vec![r(0, 1)]), diag(vec![r(125, 189)])),
            "(2,2)" => (diag(vec![r(0, 1); 3]), diag(vec![ap.clone(), r(0, 1), am.clone()])),
            "(4,1)" | "(1,4)" => (diag(vec![r(0, 1); 2]), diag(vec![r(25, 18), r(25, 36)])),
            "(6,0)" | "(0,6)" => (diag(vec![r(40, 27)]), diag(vec![r(29, 27)])),
            "(3,3)" => (diag(vec![r(0, 1); 2]), diag(vec![r(56, 27), r(520, 189)])),
            "(5,2)" | "(2,5)" => (diag(vec![r(0, 1)]), diag(vec![r(73, 28)])),
            "(4,4)" => (diag(vec![r(10, 9)]), diag(vec![r(235, 54)])),
            other => panic!("unexpected sector {other}"),
        };
        a.push(x);
        b.push(y);
    }
    (a, b)
}

fn char_poly_of_diag(d: &RadicalMatrix) -> Vec<Rational> {
    // ∏ (x − λ_i), coefficients low to high
    let mut poly = vec![Radical::one()];
    for i in 0..d.rows() {
        let lam = d[(i, i)].clone();
        let mut next = vec![Radical::zero(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] - &c.checked_mul(&lam).unwrap();
        }
        poly = next;
    }
    poly.iter().map(|c| c.to_rational().expect("rational coefficients")).collect()
}

#[test]
fn published_table_against_computed_transform() {
    let rep = build_irrep_by_highest_weight(&IrrepLabel::new(vec![2, 2]).unwrap()).unwrap();
    let dec = conjugation_sectors(&rep).unwrap();
    let bm = block_macwilliams(&dec).unwrap();
    let labels: Vec<String> = bm.labels.iter().map(|l| l.to_string()).collect();
    let (a, b) = table(&labels);
    let p = build_sdp(&bm, 5, &[1], DetectionMode::Strict).unwrap();
    let c = check_point(&p, &a, &b, 1e-7).unwrap();
    assert_eq!(c.trace_a, r(5, 1));
    assert_eq!(c.trace_b, r(25, 1));
    assert!(c.psd_exact);
    assert!(c.psd.iter().all(|(x, y)| *x && *y));

    // B = M A from the table's A, which lives on multiplicity-free sectors
    let a_hat: Vec<RationalMatrix> = a
        .iter()
        .enumerate()
        .map(|(s, blk)| {
            let m = blk.rows();
            let mut h = RationalMatrix::zeros(m, m);
            for i in 0..m {
                h[(i, i)] = blk[(i, i)].to_rational().unwrap() * &bm.copy_scales[s].0[i];
            }
            h
        })
        .collect();
    let b_hat = bm.unvectorize(&bm.m.mul_vec(&bm.vectorize(&a_hat)).unwrap());
    let ours = to_orthonormal_blocks(&bm, &b_hat).unwrap();
    let c2 = check_point(&p, &a, &ours, 1e-7).unwrap();
    for s in 0..labels.len() {
        assert_eq!(block_char_poly(&bm, s, &b_hat[s]), char_poly_of_diag(&b[s]), "{}", labels[s]);
    }
    assert!(c2.feasible);
}
