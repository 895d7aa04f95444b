//! Exact linear programming over the normalized enumerators of a
//! multiplicity-free decomposition.
//!
//! Variables are `Ã_ξ ≥ 0`; `B̃ = K M Ã` is substituted throughout. The
//! constraints are `Ã₀ = 1`, `B̃₀ = 1`, `Ã_ξ = B̃_ξ` for detected `ξ`, and
//! `B̃_ξ − Ã_ξ ≥ 0` for every `ξ`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;
use crate::macwilliams::MacWilliamsMatrix;
use crate::scalar::rational::serde_rational_vec;
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpProblem {
    pub labels: Vec<String>,
    pub depths: Vec<usize>,
    pub k: usize,
    pub detected: Vec<usize>,
    /// `K·M`.
    pub transform: RationalMatrix,
    pub a_eq: RationalMatrix,
    #[serde(with = "serde_rational_vec")]
    pub b_eq: Vec<Rational>,
    /// Rows `g` with `g·Ã ≥ 0`.
    pub a_ge: RationalMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Feasible {
        #[serde(with = "serde_rational_vec")]
        point: Vec<Rational>,
    },
    /// Multipliers `y` (equality rows) and `μ ≥ 0` (inequality rows) with
    /// `A_eqᵀy + A_geᵀμ ≤ 0` and `b_eqᵀy = 1`: contracting the constraints
    /// gives `1 ≤ 0`.
    Infeasible {
        #[serde(with = "serde_rational_vec")]
        eq_multipliers: Vec<Rational>,
        #[serde(with = "serde_rational_vec")]
        ge_multipliers: Vec<Rational>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpResult {
    pub k: usize,
    pub detected: Vec<String>,
    #[serde(flatten)]
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unique: Option<bool>,
}

impl LpResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self.verdict, Verdict::Feasible { .. })
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match &self.verdict {
            Verdict::Feasible { point } => Some(point),
            Verdict::Infeasible { .. } => None,
        }
    }
}

fn int(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Sector indices from labels, rejecting the trivial sector and unknown
/// labels.
pub fn detected_indices(m: &MacWilliamsMatrix, labels: &[String]) -> Result<Vec<usize>> {
    let names: Vec<String> = m.labels.iter().map(|l| l.to_string()).collect();
    let mut out = Vec::new();
    for l in labels {
        let i = names
            .iter()
            .position(|n| n == l)
            .ok_or_else(|| Error::Parse(format!("unknown sector {l}; sectors are {}", names.join(", "))))?;
        if i != 0 {
            out.push(i);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Sectors of depth `1 ≤ depth < d`.
pub fn detected_below_depth(m: &MacWilliamsMatrix, d: usize) -> Vec<usize> {
    (1..m.size()).filter(|&i| m.depths[i] < d).collect()
}

pub fn build_lp(m: &MacWilliamsMatrix, k: usize, detected: &[usize]) -> Result<LpProblem> {
    if k == 0 {
        return Err(Error::Parse("K must be at least 1".into()));
    }
    let n = m.size();
    if let Some(&bad) = detected.iter().find(|&&i| i >= n) {
        return Err(Error::DimensionMismatch(format!("sector index {bad} out of {n}")));
    }
    let km = m.m.scale(&int(k));
    let mut eq_rows = Vec::new();
    let mut b_eq = Vec::new();
    let mut unit = vec![Rational::zero(); n];
    unit[0] = Rational::one();
    eq_rows.push(unit);
    b_eq.push(Rational::one());
    eq_rows.push(km.row(0).to_vec());
    b_eq.push(Rational::one());
    let mut det: Vec<usize> = detected.iter().copied().filter(|&i| i != 0).collect();
    det.sort_unstable();
    det.dedup();
    // (KM − I) row ξ
    let diff_row = |xi: usize| -> Vec<Rational> {
        let mut r = km.row(xi).to_vec();
        r[xi] -= Rational::one();
        r
    };
    for &xi in &det {
        eq_rows.push(diff_row(xi));
        b_eq.push(Rational::zero());
    }
    let ge_rows: Vec<Vec<Rational>> = (0..n).map(diff_row).collect();
    Ok(LpProblem {
        labels: m.labels.iter().map(|l| l.to_string()).collect(),
        depths: m.depths.clone(),
        k,
        detected: det,
        transform: km,
        a_eq: RationalMatrix::from_rows(eq_rows)?,
        b_eq,
        a_ge: RationalMatrix::from_rows(ge_rows)?,
    })
}

impl LpProblem {
    pub fn num_vars(&self) -> usize {
        self.labels.len()
    }

    /// Exact re-substitution of every constraint.
    pub fn satisfies(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars() || x.iter().any(|v| v.is_negative()) {
            return false;
        }
        let eq_ok = self
            .a_eq
            .mul_vec(x)
            .map(|v| v == self.b_eq)
            .unwrap_or(false);
        let ge_ok = self
            .a_ge
            .mul_vec(x)
            .map(|v| v.iter().all(|g| !g.is_negative()))
            .unwrap_or(false);
        eq_ok && ge_ok
    }

    /// Exact check that the multipliers derive `1 ≤ 0`.
    pub fn verify_farkas(&self, y: &[Rational], mu: &[Rational]) -> bool {
        if y.len() != self.a_eq.rows() || mu.len() != self.a_ge.rows() {
            return false;
        }
        if mu.iter().any(|v| v.is_negative()) {
            return false;
        }
        let by: Rational = self.b_eq.iter().zip(y).map(|(b, v)| b * v).sum();
        if by != Rational::one() {
            return false;
        }
        (0..self.num_vars()).all(|j| {
            let c: Rational = (0..y.len())
                .map(|i| &self.a_eq[(i, j)] * &y[i])
                .chain((0..mu.len()).map(|i| &self.a_ge[(i, j)] * &mu[i]))
                .sum();
            !c.is_positive()
        })
    }

    /// Standard form `[A_eq 0; A_ge −I] (x, s) = (b_eq, 0)`.
    fn standard_form(&self) -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let n = self.num_vars();
        let g = self.a_ge.rows();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..self.a_eq.rows() {
            let mut r = self.a_eq.row(i).to_vec();
            r.extend(std::iter::repeat(Rational::zero()).take(g));
            rows.push(r);
            rhs.push(self.b_eq[i].clone());
        }
        for i in 0..g {
            let mut r = self.a_ge.row(i).to_vec();
            r.extend((0..g).map(|j| if i == j { -Rational::one() } else { Rational::zero() }));
            rows.push(r);
            rhs.push(Rational::zero());
        }
        debug_assert!(rows.iter().all(|r| r.len() == n + g));
        (rows, rhs)
    }
}

enum Outcome {
    Optimal(Vec<Rational>),
    Unbounded,
    Infeasible(Vec<Rational>),
}

struct Tableau {
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Columns excluding the right-hand side.
    width: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.t[r][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        for v in self.t[r].iter_mut() {
            *v /= &p;
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimizes `cost` over the allowed columns with Bland's rule. Returns
    /// false when unbounded.
    fn run(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            let mut entering = None;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j].clone();
                for (r, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.t[r][j].is_zero() {
                        rc -= &cost[b] * &self.t[r][j];
                    }
                }
                if rc.is_negative() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else { return true };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.t.len() {
                if !self.t[r][c].is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / &self.t[r][c];
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(r, c);
        }
    }
}

/// `min cᵀx` subject to `Ax = b`, `x ≥ 0`; with `c = None` only feasibility
/// is decided. An infeasible system returns `z` with `Aᵀz ≥ 0`, `bᵀz < 0`.
fn simplex(a: &[Vec<Rational>], b: &[Rational], c: Option<&[Rational]>) -> Outcome {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut sign = vec![Rational::one(); m];
    let mut t = Vec::with_capacity(m);
    for i in 0..m {
        if b[i].is_negative() {
            sign[i] = -Rational::one();
        }
        let mut row: Vec<Rational> = a[i].iter().map(|v| v * &sign[i]).collect();
        row.extend((0..m).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
        row.push(&b[i] * &sign[i]);
        t.push(row);
    }
    let mut tab = Tableau {
        t,
        basis: (n..n + m).collect(),
        width: n + m,
    };
    let cost1: Vec<Rational> = (0..n + m)
        .map(|j| if j < n { Rational::zero() } else { Rational::one() })
        .collect();
    tab.run(&cost1, n + m);
    let infeas: Rational = (0..m)
        .filter(|&r| tab.basis[r] >= n)
        .map(|r| tab.rhs(r).clone())
        .sum();
    if infeas.is_positive() {
        // y = c_Bᵀ B⁻¹, read off the artificial columns
        let z: Vec<Rational> = (0..m)
            .map(|i| {
                let y: Rational = (0..m)
                    .filter(|&r| tab.basis[r] >= n)
                    .map(|r| tab.t[r][n + i].clone())
                    .sum();
                -y * &sign[i]
            })
            .collect();
        return Outcome::Infeasible(z);
    }
    for r in 0..m {
        if tab.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| !tab.t[r][j].is_zero()) {
                tab.pivot(r, j);
            }
        }
    }
    if let Some(c) = c {
        let mut cost: Vec<Rational> = c.to_vec();
        cost.extend((0..m).map(|_| Rational::zero()));
        if !tab.run(&cost, n) {
            return Outcome::Unbounded;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &bv) in tab.basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab.rhs(r).clone();
        }
    }
    Outcome::Optimal(x)
}

fn optimize(lp: &LpProblem, objective: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let (a, b) = lp.standard_form();
    let mut c = objective.to_vec();
    c.extend(std::iter::repeat(Rational::zero()).take(a[0].len() - objective.len()));
    match simplex(&a, &b, Some(&c)) {
        Outcome::Optimal(x) => Ok(Some(x[..lp.num_vars()].to_vec())),
        Outcome::Unbounded => Ok(None),
        Outcome::Infeasible(_) => Err(Error::InfeasibleInput),
    }
}

pub fn solve(lp: &LpProblem) -> Result<LpResult> {
    let (a, b) = lp.standard_form();
    let n = lp.num_vars();
    let verdict = match simplex(&a, &b, None) {
        Outcome::Optimal(x) => {
            let point = x[..n].to_vec();
            if !lp.satisfies(&point) {
                return Err(Error::InternalInconsistency(
                    "simplex point fails re-substitution".into(),
                ));
            }
            Verdict::Feasible { point }
        }
        Outcome::Infeasible(z) => {
            let e = lp.a_eq.rows();
            let by: Rational = -z[..e].iter().zip(&lp.b_eq).map(|(v, b)| v * b).sum::<Rational>();
            let y: Vec<Rational> = z[..e].iter().map(|v| -v / &by).collect();
            let mu: Vec<Rational> = z[e..].iter().map(|v| -v / &by).collect();
            if !lp.verify_farkas(&y, &mu) {
                return Err(Error::InternalInconsistency(
                    "Farkas certificate fails verification".into(),
                ));
            }
            Verdict::Infeasible {
                eq_multipliers: y,
                ge_multipliers: mu,
            }
        }
        Outcome::Unbounded => unreachable!("feasibility phase has no objective"),
    };
    Ok(LpResult {
        k: lp.k,
        detected: lp.detected.iter().map(|&i| lp.labels[i].clone()).collect(),
        verdict,
        unique: None,
    })
}

/// Coordinate ranges of the feasible region.
#[derive(Clone, Debug, PartialEq)]
pub struct Uniqueness {
    pub unique: bool,
    pub point: Option<Vec<Rational>>,
    pub min: Vec<Rational>,
    /// `None` where a coordinate is unbounded above.
    pub max: Vec<Option<Rational>>,
}

/// Minimizes and maximizes every coordinate; the region is a single point
/// iff all ranges collapse.
pub fn check_uniqueness(lp: &LpProblem) -> Result<Uniqueness> {
    let n = lp.num_vars();
    let ranges: Vec<(Rational, Option<Rational>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut c = vec![Rational::zero(); n];
            c[i] = Rational::one();
            let lo = optimize(lp, &c)?.expect("bounded below by zero")[i].clone();
            c[i] = -Rational::one();
            let hi = optimize(lp, &c)?.map(|x| x[i].clone());
            Ok((lo, hi))
        })
        .collect::<Result<_>>()?;
    let unique = ranges.iter().all(|(lo, hi)| hi.as_ref() == Some(lo));
    let (min, max): (Vec<_>, Vec<_>) = ranges.into_iter().unzip();
    Ok(Uniqueness {
        unique,
        point: unique.then(|| min.clone()),
        min,
        max,
    })
}

/// Solve, then fill in uniqueness when feasible.
pub fn solve_with_uniqueness(lp: &LpProblem) -> Result<LpResult> {
    let mut r = solve(lp)?;
    if r.is_feasible() {
        let u = check_uniqueness(lp)?;
        r.unique = Some(u.unique);
        if let Some(p) = u.point {
            r.verdict = Verdict::Feasible { point: p };
        }
    }
    Ok(r)
}

/// Largest `K` in the range whose LP is feasible.
pub fn scan_max_k(
    m: &MacWilliamsMatrix,
    detected: &[usize],
    ks: std::ops::RangeInclusive<usize>,
) -> Result<usize> {
    let ks: Vec<usize> = ks.collect();
    let feasible: Vec<bool> = ks
        .par_iter()
        .map(|&k| Ok(solve(&build_lp(m, k, detected)?)?.is_feasible()))
        .collect::<Result<_>>()?;
    ks.iter()
        .zip(&feasible)
        .filter(|(_, f)| **f)
        .map(|(k, _)| *k)
        .max()
        .ok_or(Error::InfeasibleAll)
}

/// Largest `d` such that the LP detecting every sector of depth `< d` is
/// feasible, for `1 ≤ d ≤ max depth + 1`.
pub fn scan_max_d(m: &MacWilliamsMatrix, k: usize) -> Result<usize> {
    let top = m.depths.iter().copied().max().unwrap_or(0) + 1;
    let ds: Vec<usize> = (1..=top).collect();
    let feasible: Vec<bool> = ds
        .par_iter()
        .map(|&d| Ok(solve(&build_lp(m, k, &detected_below_depth(m, d))?)?.is_feasible()))
        .collect::<Result<_>>()?;
    ds.iter()
        .zip(&feasible)
        .filter(|(_, f)| **f)
        .map(|(d, _)| *d)
        .max()
        .ok_or(Error::InfeasibleAll)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::macwilliams::su2_macwilliams_closed;
    use crate::scalar::rat;

    fn rats(xs: &[(i64, i64)]) -> Vec<Rational> {
        xs.iter().map(|&(p, q)| rat(p, q)).collect()
    }

    #[test]
    fn simplex_small() {
        // x + y = 1, x - y = 0
        let a = vec![rats(&[(1, 1), (1, 1)]), rats(&[(1, 1), (-1, 1)])];
        match simplex(&a, &rats(&[(1, 1), (0, 1)]), None) {
            Outcome::Optimal(x) => assert_eq!(x, rats(&[(1, 2), (1, 2)])),
            _ => panic!(),
        }
        // x + y = -1 has no nonnegative solution
        let a = vec![rats(&[(1, 1), (1, 1)])];
        match simplex(&a, &rats(&[(-1, 1)]), None) {
            Outcome::Infeasible(z) => {
                assert!(z[0].is_positive());
            }
            _ => panic!(),
        }
        // min -x with x - y = 0 is unbounded
        let a = vec![rats(&[(1, 1), (-1, 1)])];
        assert!(matches!(
            simplex(&a, &rats(&[(0, 1)]), Some(&rats(&[(-1, 1), (0, 1)]))),
            Outcome::Unbounded
        ));
    }

    #[test]
    fn spin_two_unique_point() {
        let m = su2_macwilliams_closed(4).unwrap();
        let lp = build_lp(&m, 2, &[1]).unwrap();
        assert_eq!(lp.num_vars(), 5);
        let u = check_uniqueness(&lp).unwrap();
        assert!(u.unique);
        assert_eq!(u.point.unwrap(), rats(&[(1, 1), (0, 1), (0, 1), (0, 1), (3, 2)]));
    }

    #[test]
    fn spin_three_halves_certificate() {
        let m = su2_macwilliams_closed(3).unwrap();
        let lp = build_lp(&m, 2, &[1]).unwrap();
        let r = solve(&lp).unwrap();
        match &r.verdict {
            Verdict::Infeasible {
                eq_multipliers,
                ge_multipliers,
            } => {
                assert!(lp.verify_farkas(eq_multipliers, ge_multipliers));
                let mut bad = ge_multipliers.clone();
                bad[0] = -Rational::one();
                assert!(!lp.verify_farkas(eq_multipliers, &bad));
            }
            _ => panic!("expected infeasible"),
        }
    }

    #[test]
    fn json_round_trip() {
        let m = su2_macwilliams_closed(3).unwrap();
        let lp = build_lp(&m, 2, &[1]).unwrap();
        let back: LpProblem = serde_json::from_str(&serde_json::to_string(&lp).unwrap()).unwrap();
        assert_eq!(back, lp);
        let r = solve(&lp).unwrap();
        let back: LpResult = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
