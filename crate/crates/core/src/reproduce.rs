//! Reference checks: every reproduced matrix, enumerator, bound and table,
//! each reported as one pass/fail line.

use std::sync::OnceLock;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cache::Cache;
use crate::codes::{catalog_code, embedded_code, physical_distance_bruteforce, projector_from_spec};
use crate::enumerators::{
    code_depth, enumerate_code, enumerate_operator, hs_norm_sq, matrix_kl_holds,
    normalized_enumerators, projector_enumerator, random_rational_operator,
    random_rational_projector, random_weight_block_mixing, recombine_sector, twirl_enumerator,
    CodeProjector,
};
use crate::error::{Error, Result};
use crate::linalg::{RadicalMatrix, RationalMatrix};
use crate::lp::{build_lp, check_uniqueness, solve, Verdict};
use crate::macwilliams::{
    macwilliams_from_sectors, su2_macwilliams_closed, su2_twirl_scalar, twirl_scalar_action,
    verify_first_row, verify_weighted_orthogonality, BlockMacWilliams, MacWilliamsMatrix,
};
use crate::rep::{
    build_irrep_by_highest_weight, su2_irrep, sym_power_rep, Decomposition, IrrepLabel, Rep,
};
use crate::scalar::{rat, Radical, Rational};
use crate::sdp::{
    block_char_poly, build_sdp, check_point, solve_feasibility, DetectionMode, SdpVerdict,
};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:>2}. {} ({:.1}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.seconds,
            self.detail
        )
    }
}

pub const CRITERIA: [(u32, &str); 11] = [
    (1, "MacWilliams matrices equal the reference values"),
    (2, "6j closed form equals the sector computation, 2j = 1..8"),
    (3, "weighted orthogonality, first row 1/N, sector dimension count"),
    (4, "catalog code enumerators"),
    (5, "LP unique feasible points"),
    (6, "LP infeasibility grid with Farkas certificates"),
    (7, "enumerator property suites"),
    (8, "SU(2) twirl acts by the 6j scalar"),
    (9, "intrinsic depth equals brute-force physical distance"),
    (10, "(2,2) reference block enumerators"),
    (11, "(2,2) SDP: K = 5 feasible, K = 6 infeasible"),
];

pub const SLOW: [u32; 1] = [11];

/// Shared state so the 27-dimensional decomposition and block transform are
/// computed once per run.
pub struct Context {
    pub cache: Cache,
    pub seed: u64,
    su3_22: OnceLock<(Decomposition, BlockMacWilliams)>,
}

impl Context {
    pub fn new(cache: Cache, seed: u64) -> Self {
        Self {
            cache,
            seed,
            su3_22: OnceLock::new(),
        }
    }

    fn decomposition(&self, rep: &Rep) -> Result<Decomposition> {
        self.cache.decomposition(rep)
    }

    fn scalar(&self, rep: &Rep) -> Result<MacWilliamsMatrix> {
        macwilliams_from_sectors(&self.decomposition(rep)?)
    }

    pub fn su3_22(&self) -> Result<&(Decomposition, BlockMacWilliams)> {
        if let Some(v) = self.su3_22.get() {
            return Ok(v);
        }
        let rep = build_irrep_by_highest_weight(&IrrepLabel::new(vec![2, 2])?)?;
        let dec = self.cache.decomposition(&rep)?;
        let bm = self.cache.block_macwilliams(&dec)?;
        Ok(self.su3_22.get_or_init(|| (dec, bm)))
    }
}

type Check = Result<(bool, String)>;

fn rows(data: &[&[(i64, i64)]]) -> RationalMatrix {
    RationalMatrix::from_rows(
        data.iter()
            .map(|r| r.iter().map(|&(p, q)| rat(p, q)).collect())
            .collect(),
    )
    .expect("rectangular")
}

fn ints(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&v| rat(v, 1)).collect()
}

fn fracs(xs: &[(i64, i64)]) -> Vec<Rational> {
    xs.iter().map(|&(p, q)| rat(p, q)).collect()
}

pub fn expected_spin_two() -> RationalMatrix {
    rows(&[
        &[(1, 5); 5],
        &[(3, 5), (1, 2), (3, 10), (0, 1), (-2, 5)],
        &[(1, 1), (1, 2), (-3, 14), (-4, 7), (2, 7)],
        &[(7, 5), (0, 1), (-4, 5), (1, 2), (-1, 10)],
        &[(9, 5), (-6, 5), (18, 35), (-9, 70), (1, 70)],
    ])
}

pub fn expected_spin_seven_halves() -> RationalMatrix {
    rows(&[
        &[(1, 8); 8],
        &[(3, 8), (59, 168), (17, 56), (13, 56), (23, 168), (1, 56), (-1, 8), (-7, 24)],
        &[(5, 8), (85, 168), (7, 24), (5, 168), (-5, 24), (-55, 168), (-5, 24), (7, 24)],
        &[(7, 8), (13, 24), (1, 24), (-31, 88), (-101, 264), (1, 88), (119, 264), (-49, 264)],
        &[(9, 8), (23, 56), (-3, 8), (-303, 616), (1, 8), (309, 616), (-3, 8), (7, 88)],
        &[(11, 8), (11, 168), (-121, 168), (1, 56), (103, 168), (-363, 728), (53, 312), (-7, 312)],
        &[(13, 8), (-13, 24), (-13, 24), (221, 264), (-13, 24), (53, 264), (-1, 24), (1, 264)],
        &[(15, 8), (-35, 24), (7, 8), (-35, 88), (35, 264), (-35, 1144), (5, 1144), (-1, 3432)],
    ])
}

pub fn expected_sym_cube_qutrit() -> RationalMatrix {
    rows(&[
        &[(1, 10); 4],
        &[(4, 5), (3, 5), (4, 15), (-1, 5)],
        &[(27, 10), (9, 10), (-47, 70), (9, 70)],
        &[(32, 5), (-8, 5), (32, 105), (-1, 35)],
    ])
}

fn c1(ctx: &Context) -> Check {
    let cases = [
        ("j=2", su2_irrep(4), expected_spin_two()),
        ("j=7/2", su2_irrep(7), expected_spin_seven_halves()),
        ("Sym3(C3)", sym_power_rep(3, 3)?, expected_sym_cube_qutrit()),
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, rep, expect) in cases {
        let eq = ctx.scalar(&rep)?.m == expect;
        ok &= eq;
        notes.push(format!("{name} {}", if eq { "equal" } else { "DIFFERS" }));
    }
    Ok((ok, notes.join(", ")))
}

fn c2(ctx: &Context) -> Check {
    let mut bad = Vec::new();
    for tj in 1..=8 {
        if ctx.scalar(&su2_irrep(tj))?.m != su2_macwilliams_closed(tj)?.m {
            bad.push(tj);
        }
    }
    Ok((
        bad.is_empty(),
        if bad.is_empty() {
            "8 of 8 equal".into()
        } else {
            format!("differ for 2j in {bad:?}")
        },
    ))
}

fn c3(ctx: &Context) -> Check {
    let mut scalar_reps: Vec<Rep> = (0..=8).map(su2_irrep).collect();
    scalar_reps.push(sym_power_rep(3, 2)?);
    scalar_reps.push(sym_power_rep(3, 3)?);
    scalar_reps.push(sym_power_rep(4, 2)?);
    let mut ok = true;
    let mut count = 0;
    for rep in &scalar_reps {
        let m = ctx.scalar(rep)?;
        ok &= verify_weighted_orthogonality(&m) && verify_first_row(&m);
        ok &= ctx.decomposition(rep)?.total_dimension() == rep.dim() * rep.dim();
        count += 1;
    }
    let adj = build_irrep_by_highest_weight(&IrrepLabel::new(vec![1, 1])?)?;
    ok &= ctx.decomposition(&adj)?.total_dimension() == 64;
    let (dec, _) = ctx.su3_22()?;
    let total = dec.total_dimension();
    ok &= total == 729;
    Ok((
        ok,
        format!("{count} scalar matrices checked; (1,1) sums to 64, (2,2) sums to {total}"),
    ))
}

fn c4(ctx: &Context) -> Check {
    let expect = [
        (
            "5-2-2",
            fracs(&[(1, 1), (0, 1), (0, 1), (0, 1), (3, 2)]),
            fracs(&[(1, 1), (0, 1), (20, 7), (5, 2), (51, 14)]),
        ),
        (
            "8-2-3",
            ints(&[1, 0, 0, 0, 0, 0, 3, 0]),
            fracs(&[(1, 1), (0, 1), (0, 1), (49, 11), (0, 1), (49, 13), (3, 1), (540, 143)]),
        ),
        ("10-2-2", ints(&[1, 0, 0, 4]), fracs(&[(1, 1), (0, 1), (45, 7), (88, 7)])),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, ea, eb) in expect {
        let spec = catalog_code(name)?;
        let rep = spec.ambient.build()?;
        let dec = ctx.decomposition(&rep)?;
        let (a, b) = normalized_enumerators(&projector_from_spec(&spec, &rep)?, &dec)?;
        let eq = a == ea && b == eb;
        ok &= eq;
        notes.push(format!("{name} {}", if eq { "equal" } else { "DIFFERS" }));
    }
    Ok((ok, notes.join(", ")))
}

fn c5(ctx: &Context) -> Check {
    let cases = [
        ("j=2,K=2,d=2", su2_irrep(4), vec![1], fracs(&[(1, 1), (0, 1), (0, 1), (0, 1), (3, 2)])),
        ("j=7/2,K=2,d=3", su2_irrep(7), vec![1, 2], ints(&[1, 0, 0, 0, 0, 0, 3, 0])),
        ("Sym3(C3),K=2,d=2", sym_power_rep(3, 3)?, vec![1], ints(&[1, 0, 0, 4])),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, rep, det, expect) in cases {
        let u = check_uniqueness(&build_lp(&ctx.scalar(&rep)?, 2, &det)?)?;
        let good = u.unique && u.point.as_ref() == Some(&expect);
        ok &= good;
        notes.push(format!("{name} {}", if good { "unique" } else { "MISMATCH" }));
    }
    Ok((ok, notes.join(", ")))
}

/// `((n,K,d))_q` instances as (name, rep, K, detected sector indices).
pub fn infeasibility_grid() -> Result<Vec<(&'static str, Rep, usize, Vec<usize>)>> {
    Ok(vec![
        ("((2,2,2))_2", su2_irrep(2), 2, vec![1]),
        ("((3,2,2))_2", su2_irrep(3), 2, vec![1]),
        ("((4,3,2))_2", su2_irrep(4), 3, vec![1]),
        ("((4,2,3))_2", su2_irrep(4), 2, vec![1, 2]),
        ("((5,2,3))_2", su2_irrep(5), 2, vec![1, 2]),
        ("((6,2,3))_2", su2_irrep(6), 2, vec![1, 2]),
        ("((7,3,3))_2", su2_irrep(7), 3, vec![1, 2]),
        ("((7,2,4))_2", su2_irrep(7), 2, vec![1, 2, 3]),
        ("((3,3,2))_3", sym_power_rep(3, 3)?, 3, vec![1]),
        ("((3,2,3))_3", sym_power_rep(3, 3)?, 2, vec![1, 2]),
        ("((2,2,2))_3", sym_power_rep(3, 2)?, 2, vec![1]),
    ])
}

fn c6(ctx: &Context) -> Check {
    let mut bad = Vec::new();
    let grid = infeasibility_grid()?;
    for (name, rep, k, det) in &grid {
        let lp = build_lp(&ctx.scalar(rep)?, *k, det)?;
        match solve(&lp)?.verdict {
            Verdict::Infeasible {
                eq_multipliers,
                ge_multipliers,
            } if lp.verify_farkas(&eq_multipliers, &ge_multipliers) => {}
            _ => bad.push(*name),
        }
    }
    Ok((
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} of {} infeasible, certificates verified", grid.len(), grid.len())
        } else {
            format!("not certified: {bad:?}")
        },
    ))
}

fn random_k<R: Rng>(n: usize, rng: &mut R) -> usize {
    rng.gen_range(1..n)
}

fn vec_blocks(e: &crate::enumerators::EnumeratorData) -> (Vec<RationalMatrix>, Vec<RationalMatrix>) {
    (
        e.sectors.iter().map(|s| s.a.clone()).collect(),
        e.sectors.iter().map(|s| s.b.clone()).collect(),
    )
}

fn c7(ctx: &Context) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut failures: Vec<String> = Vec::new();
    let (dec22, bm22) = ctx.su3_22()?;
    let adj = build_irrep_by_highest_weight(&IrrepLabel::new(vec![1, 1])?)?;
    let mut decs: Vec<Decomposition> = vec![
        ctx.decomposition(&su2_irrep(4))?,
        ctx.decomposition(&su2_irrep(7))?,
        ctx.decomposition(&sym_power_rep(3, 3)?)?,
        ctx.decomposition(&adj)?,
    ];
    decs.push(dec22.clone());

    // Parseval and completeness
    for dec in &decs {
        for i in 0..50 {
            let x = random_rational_operator(dec.dim, 0.3, &mut rng);
            let e = enumerate_operator(&x, dec)?;
            let tr = x.trace();
            if e.trace_a() != hs_norm_sq(&x, &dec.metric) || e.trace_b() != &tr * &tr {
                failures.push(format!("Parseval/completeness {} sample {i}", dec.spec));
            }
        }
    }

    // scalar KL inequality and B = M A on multiplicity-free reps
    for dec in decs.iter().filter(|d| d.is_multiplicity_free()) {
        let m = macwilliams_from_sectors(dec)?;
        for i in 0..20 {
            let k = random_k(dec.dim, &mut rng);
            let p = CodeProjector::new(random_rational_projector(&dec.metric, k, &mut rng), &dec.metric)?;
            let e = enumerate_code(&p, dec)?;
            let a = e.a_vector()?;
            let b = e.b_vector()?;
            let kr = rat(k as i64, 1);
            if a.iter().zip(&b).any(|(x, y)| *x > &kr * y) {
                failures.push(format!("scalar KL {} sample {i}", dec.spec));
            }
            if m.apply(&a)? != b {
                failures.push(format!("B = M A {} sample {i}", dec.spec));
            }
        }
    }

    // matrix KL and block B = M A on (2,2)
    for i in 0..10 {
        let k = 1 + i % 3;
        let p = CodeProjector::new(random_rational_projector(&dec22.metric, k, &mut rng), &dec22.metric)?;
        let e = enumerate_code(&p, dec22)?;
        for s in &e.sectors {
            if !matrix_kl_holds(s, k)? {
                failures.push(format!("matrix KL (2,2) sample {i} sector {}", s.sector_label));
            }
        }
        let (a, b) = vec_blocks(&e);
        if bm22.m.mul_vec(&bm22.vectorize(&a))? != bm22.vectorize(&b) {
            failures.push(format!("block B = M A (2,2) sample {i}"));
        }
    }

    // basis independence under recombination inside weight blocks
    for dec in [&decs[0], &decs[3]] {
        for i in 0..5 {
            let x = random_rational_operator(dec.dim, 0.4, &mut rng);
            for s in &dec.sectors {
                let r = random_weight_block_mixing(s, &mut rng);
                let s2 = recombine_sector(s, &r)?;
                if twirl_enumerator(&x, dec, s)? != twirl_enumerator(&x, dec, &s2)?
                    || projector_enumerator(&x, dec, s)? != projector_enumerator(&x, dec, &s2)?
                {
                    failures.push(format!("basis dependence {} sample {i} sector {}", dec.spec, s.label));
                }
            }
        }
    }
    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            "250 Parseval/completeness, 60 scalar KL + MacWilliams, 10 matrix KL + block MacWilliams, 10 recombination samples".into()
        } else {
            failures.join("; ")
        },
    ))
}

fn c8(ctx: &Context) -> Check {
    let mut bad = Vec::new();
    let mut count = 0;
    for tj in 0..=6u32 {
        let dec = ctx.decomposition(&su2_irrep(tj))?;
        for k1 in 0..=tj {
            for k2 in 0..=tj {
                let c = twirl_scalar_action(&dec, k2 as usize, k1 as usize)?;
                count += 1;
                if c != su2_twirl_scalar(tj, k1, k2)? {
                    bad.push((tj, k1, k2));
                }
            }
        }
    }
    Ok((
        bad.is_empty(),
        if bad.is_empty() {
            format!("{count} sector pairs act by the closed-form scalar")
        } else {
            format!("mismatch at (2j,k1,k2) {bad:?}")
        },
    ))
}

fn c9(ctx: &Context) -> Check {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, expect) in [("5-2-2", 2usize), ("10-2-2", 2)] {
        let spec = catalog_code(name)?;
        let rep = spec.ambient.build()?;
        let depth = code_depth(&projector_from_spec(&spec, &rep)?, &ctx.decomposition(&rep)?)?;
        let (q, n, code) = embedded_code(&spec)?;
        let r = physical_distance_bruteforce(q, n, &code, n)?;
        let good = r.distance == expect && depth == expect && r.margin <= 1e-9;
        ok &= good;
        notes.push(format!(
            "{name}: distance {} on {n} qudits of dim {q}, depth {depth}, margin {:.1e}, failing weight deviation {:.3}",
            r.distance,
            r.margin,
            r.failure.unwrap_or(0.0)
        ));
    }
    Ok((ok, notes.join("; ")))
}

fn r(p: i64, q: i64) -> Radical {
    Radical::from(rat(p, q))
}

/// Reference `K = 5` block enumerators for the 27-dimensional SU(3) irrep,
/// on an orthonormal multiplicity basis, in the given sector order.
pub fn reference_table(labels: &[String]) -> Result<(Vec<RadicalMatrix>, Vec<RadicalMatrix>)> {
    let root = Radical::term(rat(1, 84), 3189)?;
    let (ap, am) = (&r(117, 84) + &root, &r(117, 84) - &root);
    let diag = |xs: Vec<Radical>| RadicalMatrix::diagonal(&xs);
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
            other => {
                return Err(Error::InternalInconsistency(format!(
                    "no reference block for sector {other}"
                )))
            }
        };
        a.push(x);
        b.push(y);
    }
    Ok((a, b))
}

fn diag_char_poly(d: &RadicalMatrix) -> Result<Vec<Rational>> {
    let mut poly = vec![Radical::one()];
    for i in 0..d.rows() {
        let lam = d[(i, i)].clone();
        let mut next = vec![Radical::zero(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] - &c.checked_mul(&lam)?;
        }
        poly = next;
    }
    poly.iter()
        .map(|c| {
            c.to_rational()
                .ok_or_else(|| Error::NonRationalResult(format!("coefficient {c}")))
        })
        .collect()
}

fn c10(ctx: &Context) -> Check {
    let (_, bm) = ctx.su3_22()?;
    let labels: Vec<String> = bm.labels.iter().map(|l| l.to_string()).collect();
    let (a, b) = reference_table(&labels)?;
    let p = build_sdp(bm, 5, &[1], DetectionMode::Strict)?;
    let c = check_point(&p, &a, &b, 1e-7)?;
    let psd = c.psd.iter().all(|(x, y)| *x && *y);
    let ok = c.trace_a == r(5, 1) && c.trace_b == r(25, 1) && psd && c.psd_exact;
    // B = M A from the reference A, compared by characteristic polynomial
    let a_hat: Vec<RationalMatrix> = a
        .iter()
        .enumerate()
        .map(|(s, blk)| {
            let m = blk.rows();
            let mut h = RationalMatrix::zeros(m, m);
            for i in 0..m {
                let v = blk[(i, i)].to_rational().expect("rational reference A");
                h[(i, i)] = v * &bm.copy_scales[s].0[i];
            }
            h
        })
        .collect();
    let b_hat = bm.unvectorize(&bm.m.mul_vec(&bm.vectorize(&a_hat))?);
    let mut spectra_match = true;
    for s in 0..labels.len() {
        spectra_match &= block_char_poly(bm, s, &b_hat[s]) == diag_char_poly(&b[s])?;
    }
    Ok((
        ok && spectra_match,
        format!(
            "sum Tr A = {}, sum Tr B = {}, all blocks PSD (exact: {}); spectra of M A match the reference B: {}",
            c.trace_a, c.trace_b, c.psd_exact, spectra_match
        ),
    ))
}

pub const SDP_TOL: f64 = 1e-7;
pub const SDP_MARGIN: f64 = 1e-4;

fn describe(v: &SdpVerdict) -> String {
    match v {
        SdpVerdict::ApproxFeasible { min_eigenvalue, .. } => {
            format!("feasible (t* = {min_eigenvalue:.1e})")
        }
        SdpVerdict::LikelyInfeasible { infeasibility } => {
            format!("infeasible (margin {infeasibility:.3e})")
        }
        SdpVerdict::Infeasible => "infeasible (linear system)".into(),
    }
}

fn c11(ctx: &Context) -> Check {
    let (_, bm) = ctx.su3_22()?;
    let mut parts = Vec::new();
    let mut strict_ok = false;
    for mode in [DetectionMode::Strict, DetectionMode::Depth] {
        let r5 = solve_feasibility(&build_sdp(bm, 5, &[1], mode)?, SDP_TOL)?;
        let r6 = solve_feasibility(&build_sdp(bm, 6, &[1], mode)?, SDP_TOL)?;
        let margin_ok = match &r6.verdict {
            SdpVerdict::LikelyInfeasible { infeasibility } => *infeasibility >= SDP_MARGIN,
            SdpVerdict::Infeasible => true,
            SdpVerdict::ApproxFeasible { .. } => false,
        };
        let good = r5.is_feasible() && margin_ok;
        if mode == DetectionMode::Strict {
            strict_ok = good;
        }
        parts.push(format!(
            "{mode:?}: K=5 {}, K=6 {}",
            describe(&r5.verdict),
            describe(&r6.verdict)
        ));
    }
    Ok((strict_ok, parts.join("; ")))
}

pub fn run_criterion(id: u32, ctx: &Context) -> CriterionReport {
    let start = Instant::now();
    let title = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, t)| t.to_string())
        .unwrap_or_else(|| format!("unknown criterion {id}"));
    let outcome = match id {
        1 => c1(ctx),
        2 => c2(ctx),
        3 => c3(ctx),
        4 => c4(ctx),
        5 => c5(ctx),
        6 => c6(ctx),
        7 => c7(ctx),
        8 => c8(ctx),
        9 => c9(ctx),
        10 => c10(ctx),
        11 => c11(ctx),
        _ => Ok((false, "no such criterion".into())),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionReport {
        id,
        title,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all(ctx: &Context, include_slow: bool) -> Vec<CriterionReport> {
    CRITERIA
        .iter()
        .map(|(id, _)| *id)
        .filter(|id| include_slow || !SLOW.contains(id))
        .map(|id| run_criterion(id, ctx))
        .collect()
}
