//! Semidefinite feasibility for block enumerators.
//!
//! Unknowns are the symmetric entries of the projector blocks `Â_ξ` in the
//! rational multiplicity basis; `B̂ = M̂ Â` is substituted. Cone constraints
//! are imposed on the orthonormal-basis blocks `A_ξ = S⁻¹ Â_ξ S⁻¹`, which
//! differ from `Â_ξ` by a positive congruence.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{affine_solutions, is_psd_exact, RadicalMatrix, RationalMatrix};
use crate::macwilliams::{BlockIndex, BlockMacWilliams};
use crate::scalar::{Radical, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectionMode {
    /// `A_ξ = K·B_ξ`.
    Strict,
    /// `A_ξ = 0`.
    Depth,
}

impl std::str::FromStr for DetectionMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Self::Strict),
            "depth" => Ok(Self::Depth),
            _ => Err(Error::Parse(format!("detection mode {s}: expected strict or depth"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SdpProblem {
    pub labels: Vec<String>,
    pub multiplicities: Vec<usize>,
    pub k: usize,
    pub detected: Vec<usize>,
    pub mode: DetectionMode,
    /// `(sector, α, β)` with `α ≤ β`, one per unknown.
    pub vars: Vec<(usize, usize, usize)>,
    /// Linear equalities on the unknowns.
    pub eq: RationalMatrix,
    #[serde(with = "crate::scalar::rational::serde_rational_vec")]
    pub eq_rhs: Vec<Rational>,
    #[serde(skip)]
    block: Option<BlockMacWilliams>,
}

fn int(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

impl SdpProblem {
    fn block(&self) -> &BlockMacWilliams {
        self.block.as_ref().expect("problem built from a block matrix")
    }

    fn var_of(&self, i: &BlockIndex) -> usize {
        let (a, b) = (i.alpha.min(i.beta), i.alpha.max(i.beta));
        self.vars
            .iter()
            .position(|&v| v == (i.sector, a, b))
            .expect("variable exists")
    }

    /// Linear map from unknowns to `vec(B̂)`, as a dense matrix.
    fn b_map(&self) -> RationalMatrix {
        let bm = self.block();
        let n = bm.index.len();
        let mut out = RationalMatrix::zeros(n, self.vars.len());
        for (col, idx) in bm.index.iter().enumerate() {
            let v = self.var_of(idx);
            for r in 0..n {
                let x = &bm.m[(r, col)];
                if !x.is_zero() {
                    let cur = &out[(r, v)] + x;
                    out[(r, v)] = cur;
                }
            }
        }
        out
    }
}

pub fn build_sdp(
    bm: &BlockMacWilliams,
    k: usize,
    detected: &[usize],
    mode: DetectionMode,
) -> Result<SdpProblem> {
    let mut vars = Vec::new();
    for (s, &m) in bm.multiplicities.iter().enumerate() {
        for a in 0..m {
            for b in a..m {
                vars.push((s, a, b));
            }
        }
    }
    let mut det: Vec<usize> = detected.iter().copied().filter(|&i| i != 0).collect();
    det.sort_unstable();
    det.dedup();
    let mut p = SdpProblem {
        labels: bm.labels.iter().map(|l| l.to_string()).collect(),
        multiplicities: bm.multiplicities.clone(),
        k,
        detected: det.clone(),
        mode,
        vars,
        eq: RationalMatrix::zeros(0, 0),
        eq_rhs: Vec::new(),
        block: Some(bm.clone()),
    };
    let nv = p.vars.len();
    let bmap = p.b_map();
    let kk = int(k);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs = Vec::new();
    // weighted traces
    let mut tr_a = vec![Rational::zero(); nv];
    let mut tr_b = vec![Rational::zero(); nv];
    for (r, idx) in bm.index.iter().enumerate() {
        if idx.alpha != idx.beta {
            continue;
        }
        let w = bm.copy_scales[idx.sector].0[idx.alpha].recip();
        let v = p.var_of(idx);
        tr_a[v] += &w;
        for c in 0..nv {
            if !bmap[(r, c)].is_zero() {
                tr_b[c] += &bmap[(r, c)] * &w;
            }
        }
    }
    rows.push(tr_a);
    rhs.push(kk.clone());
    rows.push(tr_b);
    rhs.push(&kk * &kk);
    let strict_row = |idx: &BlockIndex, r: usize| -> Vec<Rational> {
        let mut row: Vec<Rational> = (0..nv).map(|c| -(&kk * &bmap[(r, c)])).collect();
        row[p.var_of(idx)] += Rational::one();
        row
    };
    // the trivial sector is always detected
    let r0 = bm.position(0, 0, 0);
    rows.push(strict_row(&bm.index[r0], r0));
    rhs.push(Rational::zero());
    for (r, idx) in bm.index.iter().enumerate() {
        if !det.contains(&idx.sector) || idx.alpha > idx.beta {
            continue;
        }
        match mode {
            DetectionMode::Strict => rows.push(strict_row(idx, r)),
            DetectionMode::Depth => {
                let mut row = vec![Rational::zero(); nv];
                row[p.var_of(idx)] = Rational::one();
                rows.push(row);
            }
        }
        rhs.push(Rational::zero());
    }
    p.eq = RationalMatrix::from_rows(rows)?;
    p.eq_rhs = rhs;
    Ok(p)
}

// Dense float helpers; blocks here are tiny.

type FMat = Vec<Vec<f64>>;

fn cholesky(a: &FMat) -> Option<FMat> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}

fn cholesky_solve(l: &FMat, b: &[f64]) -> Vec<f64> {
    let n = l.len();
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i][k] * y[k];
        }
        y[i] = s / l[i][i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k][i] * x[k];
        }
        x[i] = s / l[i][i];
    }
    x
}

fn spd_inverse(l: &FMat) -> FMat {
    let n = l.len();
    let cols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            cholesky_solve(l, &e)
        })
        .collect();
    (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn sym_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut m: FMat = a.to_vec();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    ev
}

fn min_eigenvalue(a: &FMat) -> f64 {
    if a.is_empty() {
        return f64::INFINITY;
    }
    sym_eigenvalues(a)[0]
}

/// One cone block `X(z) = X₀ + Σ z_k X_k`.
struct Cone {
    x0: FMat,
    dirs: Vec<FMat>,
}

impl Cone {
    fn eval(&self, z: &[f64], t: f64) -> FMat {
        let n = self.x0.len();
        let mut x = self.x0.clone();
        for (zk, d) in z.iter().zip(&self.dirs) {
            if *zk == 0.0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    x[i][j] += zk * d[i][j];
                }
            }
        }
        for (i, row) in x.iter_mut().enumerate() {
            row[i] -= t;
        }
        x
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SdpVerdict {
    ApproxFeasible {
        /// Orthonormal-basis blocks per sector.
        a_blocks: Vec<Vec<Vec<f64>>>,
        b_blocks: Vec<Vec<Vec<f64>>>,
        max_residual: f64,
        min_eigenvalue: f64,
    },
    LikelyInfeasible {
        /// `−max_t`, where `t` bounds every cone block's eigenvalues below.
        infeasibility: f64,
    },
    /// The linear equalities alone have no solution; decided exactly.
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpResult {
    pub k: usize,
    pub mode: DetectionMode,
    pub tol: f64,
    #[serde(flatten)]
    pub verdict: SdpVerdict,
    /// Best `t` reached.
    pub t_star: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl SdpResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self.verdict, SdpVerdict::ApproxFeasible { .. })
    }
}

const MAX_NEWTON: usize = 2000;
const NEWTON_PER_STAGE: usize = 60;

/// Per-sector float blocks `A`, `B` in the orthonormal multiplicity basis
/// from a vector of unknowns.
fn blocks_of(p: &SdpProblem, y: &[f64], bmap: &[Vec<f64>]) -> (Vec<FMat>, Vec<FMat>) {
    let bm = p.block();
    let sq: Vec<Vec<f64>> = bm
        .copy_scales
        .iter()
        .map(|s| s.0.iter().map(|v| crate::scalar::rational::rational_to_f64(v).sqrt()).collect())
        .collect();
    let mut a: Vec<FMat> = p.multiplicities.iter().map(|&m| vec![vec![0.0; m]; m]).collect();
    let mut b = a.clone();
    for (r, idx) in bm.index.iter().enumerate() {
        let w = sq[idx.sector][idx.alpha] * sq[idx.sector][idx.beta];
        let v = p.var_of(idx);
        a[idx.sector][idx.alpha][idx.beta] = y[v] / w;
        let bv: f64 = bmap[r].iter().zip(y).map(|(c, x)| c * x).sum();
        b[idx.sector][idx.alpha][idx.beta] = bv / w;
    }
    // symmetrize B
    for blk in &mut b {
        let m = blk.len();
        for i in 0..m {
            for j in i + 1..m {
                let s = 0.5 * (blk[i][j] + blk[j][i]);
                blk[i][j] = s;
                blk[j][i] = s;
            }
        }
    }
    (a, b)
}

/// Maximizes `t` subject to every cone block `⪰ tI` by a log-barrier Newton
/// method, and declares feasibility when `t* ≥ −tol`.
pub fn solve_feasibility(p: &SdpProblem, tol: f64) -> Result<SdpResult> {
    let Some((y0, kernel)) = affine_solutions(&p.eq, &p.eq_rhs)? else {
        return Ok(SdpResult {
            k: p.k,
            mode: p.mode,
            tol,
            verdict: SdpVerdict::Infeasible,
            t_star: None,
            iterations: 0,
            converged: true,
        });
    };
    let to_f = |v: &Rational| crate::scalar::rational::rational_to_f64(v);
    let bmap_r = p.b_map();
    let bmap: Vec<Vec<f64>> = (0..bmap_r.rows())
        .map(|r| bmap_r.row(r).iter().map(to_f).collect())
        .collect();
    let y0f: Vec<f64> = y0.iter().map(to_f).collect();
    let kf: Vec<Vec<f64>> = kernel.iter().map(|v| v.iter().map(to_f).collect()).collect();
    let kk = p.k as f64;

    // Cone blocks as affine functions of z, from A and K·B − A.
    let (a0, b0) = blocks_of(p, &y0f, &bmap);
    let dirs: Vec<(Vec<FMat>, Vec<FMat>)> = kf.iter().map(|d| blocks_of(p, d, &bmap)).collect();
    let mut cones = Vec::new();
    for s in 0..p.multiplicities.len() {
        let combo = |a: &FMat, b: &FMat| -> FMat {
            a.iter()
                .zip(b)
                .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| kk * y - x).collect())
                .collect()
        };
        let ca = Cone {
            x0: a0[s].clone(),
            dirs: dirs.iter().map(|(a, _)| a[s].clone()).collect(),
        };
        let cb = Cone {
            x0: combo(&a0[s], &b0[s]),
            dirs: dirs.iter().map(|(a, b)| combo(&a[s], &b[s])).collect(),
        };
        for c in [ca, cb] {
            let zero = |m: &FMat| m.iter().flatten().all(|v| v.abs() < 1e-14);
            // identically zero blocks are pinned by the equalities
            if !(zero(&c.x0) && c.dirs.iter().all(zero)) {
                cones.push(c);
            }
        }
    }

    let nz = kf.len();
    let mut z = vec![0.0; nz];
    let min_eig = |z: &[f64]| -> f64 {
        cones
            .iter()
            .map(|c| min_eigenvalue(&c.eval(z, 0.0)))
            .fold(f64::INFINITY, f64::min)
    };
    let finish = |z: &[f64], t_star: f64, iterations: usize, converged: bool| -> SdpResult {
        let y: Vec<f64> = (0..y0f.len())
            .map(|i| y0f[i] + z.iter().zip(&kf).map(|(zk, d)| zk * d[i]).sum::<f64>())
            .collect();
        let res = p
            .eq
            .to_f64()
            .iter()
            .zip(&p.eq_rhs)
            .map(|(row, b)| (row.iter().zip(&y).map(|(c, x)| c * x).sum::<f64>() - to_f(b)).abs())
            .fold(0.0, f64::max);
        let (a, b) = blocks_of(p, &y, &bmap);
        let verdict = if t_star >= -tol && res <= tol {
            SdpVerdict::ApproxFeasible {
                a_blocks: a,
                b_blocks: b,
                max_residual: res,
                min_eigenvalue: t_star,
            }
        } else {
            SdpVerdict::LikelyInfeasible {
                infeasibility: -t_star,
            }
        };
        SdpResult {
            k: p.k,
            mode: p.mode,
            tol,
            verdict,
            t_star: Some(t_star),
            iterations,
            converged,
        }
    };
    if cones.is_empty() {
        return Ok(finish(&z, 0.0, 0, true));
    }
    if nz == 0 {
        return Ok(finish(&z, min_eig(&z), 0, true));
    }
    let scale = cones
        .iter()
        .flat_map(|c| c.x0.iter().flatten().chain(c.dirs.iter().flatten().flatten()))
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1.0);
    let total_dim: usize = cones.iter().map(|c| c.x0.len()).sum();
    let mut t = min_eig(&z) - 1.0;
    let mut mu = scale;
    let mut iterations = 0;
    let mut converged = false;
    // φ(z,t) = −t − μ Σ log det X_i
    let phi = |z: &[f64], t: f64, mu: f64| -> Option<f64> {
        let mut acc = -t;
        for c in &cones {
            let l = cholesky(&c.eval(z, t))?;
            let logdet: f64 = (0..l.len()).map(|i| 2.0 * l[i][i].ln()).sum();
            acc -= mu * logdet;
        }
        Some(acc)
    };
    let target = 1e-14 * scale;
    'outer: while mu * total_dim as f64 > target {
        for _ in 0..NEWTON_PER_STAGE {
            if iterations >= MAX_NEWTON {
                break 'outer;
            }
            iterations += 1;
            let nw = nz + 1;
            let mut g = vec![0.0; nw];
            let mut h = vec![vec![0.0; nw]; nw];
            g[nz] = -1.0;
            for c in &cones {
                let x = c.eval(&z, t);
                let Some(l) = cholesky(&x) else { break 'outer };
                let xi = spd_inverse(&l);
                let m = x.len();
                // X⁻¹ D_k for every direction, with D_t = −I
                let mut prods: Vec<FMat> = c
                    .dirs
                    .iter()
                    .map(|d| {
                        (0..m)
                            .map(|i| (0..m).map(|j| (0..m).map(|q| xi[i][q] * d[q][j]).sum()).collect())
                            .collect()
                    })
                    .collect();
                prods.push(xi.iter().map(|r| r.iter().map(|v| -v).collect()).collect());
                for a in 0..nw {
                    let tr: f64 = (0..m).map(|i| prods[a][i][i]).sum();
                    g[a] -= mu * tr;
                    for b in a..nw {
                        let tr2: f64 = (0..m)
                            .flat_map(|i| (0..m).map(move |j| (i, j)))
                            .map(|(i, j)| prods[a][i][j] * prods[b][j][i])
                            .sum();
                        h[a][b] += mu * tr2;
                        if a != b {
                            h[b][a] += mu * tr2;
                        }
                    }
                }
            }
            let reg = 1e-14 * (0..nw).map(|i| h[i][i]).fold(0.0, f64::max).max(1e-300);
            for (i, row) in h.iter_mut().enumerate() {
                row[i] += reg;
            }
            let Some(l) = cholesky(&h) else { break 'outer };
            let step: Vec<f64> = cholesky_solve(&l, &g).iter().map(|v| -v).collect();
            let dec: f64 = -g.iter().zip(&step).map(|(a, b)| a * b).sum::<f64>();
            if dec / (2.0 * mu) < 1e-10 || !dec.is_finite() {
                break;
            }
            let f0 = phi(&z, t, mu).expect("interior point");
            let mut s = 1.0;
            loop {
                let zn: Vec<f64> = z.iter().zip(&step).map(|(a, b)| a + s * b).collect();
                let tn = t + s * step[nz];
                if let Some(f1) = phi(&zn, tn, mu) {
                    if f1 <= f0 - 0.25 * s * dec {
                        z = zn;
                        t = tn;
                        break;
                    }
                }
                s *= 0.5;
                if s < 1e-12 {
                    break;
                }
            }
            if s < 1e-12 {
                break;
            }
        }
        mu *= 0.2;
        if mu * total_dim as f64 <= target {
            converged = true;
        }
    }
    let t_star = min_eig(&z);
    Ok(finish(&z, t_star.max(t), iterations, converged))
}

// Candidate checking

/// Exact and float diagnostics of candidate blocks given on the orthonormal
/// multiplicity basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointCheck {
    pub trace_a: Radical,
    pub trace_b: Radical,
    /// `Σ Tr A − K` and `Σ Tr B − K²`, exact.
    pub normalization_residuals: (Radical, Radical),
    /// Per sector: `A ⪰ 0` and `K·B − A ⪰ 0`.
    pub psd: Vec<(bool, bool)>,
    /// True when every PSD decision above was exact.
    pub psd_exact: bool,
    pub min_eigenvalue: f64,
    /// `max |vec(B̂) − M̂ vec(Â)|`; meaningful when the candidate uses this
    /// library's multiplicity bases.
    pub macwilliams_residual: f64,
    /// Largest violation of the detection equalities.
    pub detection_residual: f64,
    pub feasible: bool,
}

fn radical_block_psd(m: &RadicalMatrix, tol: f64) -> Result<(bool, bool, f64)> {
    let n = m.rows();
    let f = m.to_f64();
    let ev = min_eigenvalue(&f);
    if let Some(r) = (0..n * n)
        .map(|i| m[(i / n, i % n)].to_rational())
        .collect::<Option<Vec<_>>>()
    {
        let rm = RationalMatrix::new(n, n, r)?;
        return Ok((is_psd_exact(&rm)?, true, ev));
    }
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)].is_zero()));
    if diagonal {
        let mut ok = true;
        for i in 0..n {
            match m[(i, i)].signum() {
                Ok(s) => ok &= s >= 0,
                Err(_) => return Ok((ev >= -tol, false, ev)),
            }
        }
        return Ok((ok, true, ev));
    }
    Ok((ev >= -tol, false, ev))
}

pub fn check_point(
    p: &SdpProblem,
    a: &[RadicalMatrix],
    b: &[RadicalMatrix],
    tol: f64,
) -> Result<PointCheck> {
    let ns = p.multiplicities.len();
    if a.len() != ns || b.len() != ns {
        return Err(Error::ShapeMismatch(format!(
            "expected {ns} blocks, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    for (s, &m) in p.multiplicities.iter().enumerate() {
        if a[s].shape() != (m, m) || b[s].shape() != (m, m) {
            return Err(Error::ShapeMismatch(format!(
                "sector {} needs {m}x{m} blocks",
                p.labels[s]
            )));
        }
    }
    let kk = Radical::from(int(p.k));
    let trace_a = a.iter().fold(Radical::zero(), |acc, x| acc + x.trace());
    let trace_b = b.iter().fold(Radical::zero(), |acc, x| acc + x.trace());
    let res_a = &trace_a - &kk;
    let res_b = &trace_b - &(&kk * &kk);
    let mut psd = Vec::new();
    let mut exact = true;
    let mut min_ev = f64::INFINITY;
    for s in 0..ns {
        let (ok_a, ex_a, ev_a) = radical_block_psd(&a[s], tol)?;
        let kb_a = b[s].scale(&int(p.k)).sub(&a[s])?;
        let (ok_b, ex_b, ev_b) = radical_block_psd(&kb_a, tol)?;
        psd.push((ok_a, ok_b));
        exact &= ex_a && ex_b;
        min_ev = min_ev.min(ev_a).min(ev_b);
    }
    // MacWilliams residual in the rational multiplicity basis
    let bm = p.block();
    let hat = |blocks: &[RadicalMatrix]| -> Vec<f64> {
        bm.index
            .iter()
            .map(|i| {
                let s = &bm.copy_scales[i.sector].0;
                let w = (crate::scalar::rational::rational_to_f64(&s[i.alpha])
                    * crate::scalar::rational::rational_to_f64(&s[i.beta]))
                .sqrt();
                blocks[i.sector][(i.alpha, i.beta)].to_f64() * w
            })
            .collect()
    };
    let (ah, bh) = (hat(a), hat(b));
    let mf = bm.m.to_f64();
    let mw = mf
        .iter()
        .zip(&bh)
        .map(|(row, bv)| (row.iter().zip(&ah).map(|(c, x)| c * x).sum::<f64>() - bv).abs())
        .fold(0.0, f64::max);
    let mut det_res: f64 = 0.0;
    let kf = p.k as f64;
    let mut check = |s: usize| {
        let m = p.multiplicities[s];
        for i in 0..m {
            for j in 0..m {
                let av = a[s][(i, j)].to_f64();
                let v = match p.mode {
                    DetectionMode::Strict => av - kf * b[s][(i, j)].to_f64(),
                    DetectionMode::Depth => av,
                };
                det_res = det_res.max(v.abs());
            }
        }
    };
    check(0);
    for &s in &p.detected {
        check(s);
    }
    let norm_ok = res_a.is_zero() && res_b.is_zero();
    let feasible = norm_ok
        && psd.iter().all(|(x, y)| *x && *y)
        && mw <= tol
        && det_res <= tol;
    Ok(PointCheck {
        trace_a,
        trace_b,
        normalization_residuals: (res_a, res_b),
        psd,
        psd_exact: exact,
        min_eigenvalue: min_ev,
        macwilliams_residual: mw,
        detection_residual: det_res,
        feasible,
    })
}

/// Exact orthonormal-basis blocks `A = S⁻¹ÂS⁻¹` from rational-basis blocks.
pub fn to_orthonormal_blocks(bm: &BlockMacWilliams, hat: &[RationalMatrix]) -> Result<Vec<RadicalMatrix>> {
    hat.iter()
        .enumerate()
        .map(|(s, h)| {
            let sc = &bm.copy_scales[s].0;
            let m = h.rows();
            let mut out = RadicalMatrix::zeros(m, m);
            for i in 0..m {
                for j in 0..m {
                    if h[(i, j)].is_zero() {
                        continue;
                    }
                    let r = Radical::sqrt_rational(&(&sc[i] * &sc[j]).recip())?;
                    out[(i, j)] = r.mul_rational(&h[(i, j)]);
                }
            }
            Ok(out)
        })
        .collect()
}

/// `Tr` of each block weighted by `1/s_α`, as the true trace.
pub fn weighted_traces(bm: &BlockMacWilliams, hat: &[RationalMatrix]) -> Vec<Rational> {
    hat.iter()
        .enumerate()
        .map(|(s, h)| {
            (0..h.rows())
                .map(|i| &h[(i, i)] / &bm.copy_scales[s].0[i])
                .sum()
        })
        .collect()
}

/// Characteristic polynomial coefficients `[c₀, …, c_{m-1}, 1]` of the
/// orthonormal-basis block, computed from the rational matrix `S⁻² Â`,
/// which is similar to it.
pub fn block_char_poly(bm: &BlockMacWilliams, sector: usize, hat: &RationalMatrix) -> Vec<Rational> {
    let sc = &bm.copy_scales[sector].0;
    let m = hat.rows();
    let mut x = hat.clone();
    for i in 0..m {
        for j in 0..m {
            let v = &hat[(i, j)] / &sc[i];
            x[(i, j)] = v;
        }
    }
    // Faddeev–LeVerrier
    let mut coeffs = vec![Rational::zero(); m + 1];
    coeffs[m] = Rational::one();
    let mut mk = RationalMatrix::zeros(m, m);
    let id = RationalMatrix::identity(m);
    for k in 1..=m {
        let prev = coeffs[m - k + 1].clone();
        mk = x.mul(&mk).expect("square").add(&id.scale(&prev)).expect("square");
        let tr = x.mul(&mk).expect("square").trace();
        coeffs[m - k] = -tr / int(k);
    }
    coeffs
}
