//! Projector and twirl enumerators of operators and code projectors.
//!
//! For sectors with multiplicity the enumerators are `m × m` matrices on the
//! multiplicity space. They are reported in the rational basis given by the
//! copies of [`Sector`], whose highest-weight operators are orthogonal with
//! squared norms proportional to `copy_scale`. The matrices in an orthonormal
//! multiplicity basis are `S⁻¹ A S⁻¹` with `S = diag(√copy_scale)`; traces,
//! positivity and the detection equality are unaffected by this congruence
//! once traces are weighted by `1/copy_scale`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{is_psd_exact, Matrix, RationalMatrix};
use crate::rep::{
    dense_mul_sparse, hs_metric_dense, hs_metric_dense2, sparse_mul_dense, Decomposition,
    IrrepLabel, Sector,
};
use crate::scalar::rational::serde_rational_vec;
use crate::scalar::{Rational, Scalar};

/// Orthogonal projector onto a code, written on the working basis of its
/// representation.
#[derive(Clone, Debug)]
pub struct CodeProjector<T> {
    pub matrix: Matrix<T>,
    pub k: usize,
    pub n: usize,
}

fn as_rational<T: Scalar>(v: &T, what: &str) -> Result<Rational> {
    v.to_radical()
        .to_rational()
        .ok_or_else(|| Error::NonRationalResult(format!("{what} = {}", v.to_radical())))
}

impl<T: Scalar> CodeProjector<T> {
    /// Validates `P² = P`, self-adjointness for the metric, and an integer
    /// positive trace.
    pub fn new(matrix: Matrix<T>, metric: &[Rational]) -> Result<Self> {
        let n = matrix.rows();
        if !matrix.is_square() || metric.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} projector for dimension {}",
                matrix.rows(),
                matrix.cols(),
                metric.len()
            )));
        }
        if matrix.mul(&matrix)? != matrix {
            return Err(Error::NotAProjector("P^2 != P".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                if matrix[(i, j)].scale(&metric[i]) != matrix[(j, i)].scale(&metric[j]) {
                    return Err(Error::NotAProjector("P is not self-adjoint".into()));
                }
            }
        }
        let tr = as_rational(&matrix.trace(), "Tr P")?;
        if !tr.is_integer() || !tr.is_positive() {
            return Err(Error::NotAProjector(format!("trace {tr} is not a positive integer")));
        }
        let k = tr.to_integer().to_usize().expect("small trace");
        Ok(Self { matrix, k, n })
    }

    pub fn k_rational(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.k))
    }
}

/// `⟨X, F^α_a⟩` for every copy and basis operator.
fn sector_overlaps<T: Scalar>(x: &Matrix<T>, s: &Sector, metric: &[Rational]) -> Vec<Vec<T>> {
    s.copies
        .iter()
        .map(|ops| ops.iter().map(|f| hs_metric_dense(x, f, metric)).collect())
        .collect()
}

/// Projector enumerator block: entry `(α,β) = Σ_ab (G⁻¹)_ab ⟨X,F^β_a⟩⟨X,F^α_b⟩`.
pub fn projector_enumerator<T: Scalar>(
    x: &Matrix<T>,
    dec: &Decomposition,
    s: &Sector,
) -> Result<RationalMatrix> {
    check_dim(x, dec)?;
    let ov = sector_overlaps(x, s, &dec.metric);
    let m = s.multiplicity;
    let blocks = s.weight_blocks();
    let mut out = RationalMatrix::zeros(m, m);
    for al in 0..m {
        for be in al..m {
            let mut acc = T::zero();
            for blk in &blocks {
                for &a in blk {
                    if ov[be][a].is_zero() {
                        continue;
                    }
                    for &b in blk {
                        let g = &s.gram_inv[(a, b)];
                        if g.is_zero() || ov[al][b].is_zero() {
                            continue;
                        }
                        acc = acc + (ov[be][a].clone() * ov[al][b].clone()).scale(g);
                    }
                }
            }
            let v = as_rational(&acc, &format!("A[{}]({al},{be})", s.label))?;
            out[(be, al)] = v.clone();
            out[(al, be)] = v;
        }
    }
    Ok(out)
}

/// Twirl enumerator block: entry `(α,β) = Σ_cd (G⁻¹)_cd Tr(X† F^α_c† X F^β_d)`.
pub fn twirl_enumerator<T: Scalar>(
    x: &Matrix<T>,
    dec: &Decomposition,
    s: &Sector,
) -> Result<RationalMatrix> {
    check_dim(x, dec)?;
    let metric = &dec.metric;
    let m = s.multiplicity;
    // Tr(X† F† X F') = ⟨F X, X F'⟩
    let left: Vec<Vec<Matrix<T>>> = s
        .copies
        .iter()
        .map(|ops| ops.iter().map(|f| sparse_mul_dense(f, x)).collect())
        .collect();
    let right: Vec<Vec<Matrix<T>>> = s
        .copies
        .iter()
        .map(|ops| ops.iter().map(|f| dense_mul_sparse(x, f)).collect())
        .collect();
    let blocks = s.weight_blocks();
    let mut out = RationalMatrix::zeros(m, m);
    for al in 0..m {
        for be in 0..m {
            let mut acc = T::zero();
            for blk in &blocks {
                for &c in blk {
                    for &d in blk {
                        let g = &s.gram_inv[(c, d)];
                        if g.is_zero() {
                            continue;
                        }
                        acc = acc + hs_metric_dense2(&left[al][c], &right[be][d], metric).scale(g);
                    }
                }
            }
            out[(al, be)] = as_rational(&acc, &format!("B[{}]({al},{be})", s.label))?;
        }
    }
    Ok(out)
}

fn check_dim<T: Scalar>(x: &Matrix<T>, dec: &Decomposition) -> Result<()> {
    if x.rows() != dec.dim || x.cols() != dec.dim {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator on a {}-dimensional representation",
            x.rows(),
            x.cols(),
            dec.dim
        )));
    }
    Ok(())
}

/// `Σ_α M[α][α] / copy_scale[α]`: the trace in an orthonormal multiplicity
/// basis.
pub fn weighted_trace(m: &RationalMatrix, copy_scale: &[Rational]) -> Rational {
    (0..m.rows()).map(|i| &m[(i, i)] / &copy_scale[i]).sum()
}

/// Enumerator pair of one sector.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SectorEnumerator {
    pub sector_label: IrrepLabel,
    pub depth: usize,
    #[serde(rename = "A")]
    pub a: RationalMatrix,
    #[serde(rename = "B")]
    pub b: RationalMatrix,
    #[serde(rename = "A_tilde", with = "opt_rational", skip_serializing_if = "Option::is_none", default)]
    pub a_tilde: Option<Rational>,
    #[serde(rename = "B_tilde", with = "opt_rational", skip_serializing_if = "Option::is_none", default)]
    pub b_tilde: Option<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub copy_scale: Vec<Rational>,
}

mod opt_rational {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::scalar::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_str(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

impl SectorEnumerator {
    pub fn trace_a(&self) -> Rational {
        weighted_trace(&self.a, &self.copy_scale)
    }

    pub fn trace_b(&self) -> Rational {
        weighted_trace(&self.b, &self.copy_scale)
    }

    pub fn is_scalar(&self) -> bool {
        self.a.rows() == 1
    }
}

/// Enumerators of an operator over a whole decomposition.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnumeratorData {
    pub n: usize,
    /// Code dimension when the input was a projector.
    pub k: Option<usize>,
    pub sectors: Vec<SectorEnumerator>,
}

impl EnumeratorData {
    pub fn trace_a(&self) -> Rational {
        self.sectors.iter().map(SectorEnumerator::trace_a).sum()
    }

    pub fn trace_b(&self) -> Rational {
        self.sectors.iter().map(SectorEnumerator::trace_b).sum()
    }

    /// Scalar `A` vector; fails when a sector has multiplicity.
    pub fn a_vector(&self) -> Result<Vec<Rational>> {
        self.scalar(|s| &s.a)
    }

    pub fn b_vector(&self) -> Result<Vec<Rational>> {
        self.scalar(|s| &s.b)
    }

    fn scalar(&self, f: impl Fn(&SectorEnumerator) -> &RationalMatrix) -> Result<Vec<Rational>> {
        self.sectors
            .iter()
            .map(|s| {
                if s.is_scalar() {
                    Ok(f(s)[(0, 0)].clone())
                } else {
                    Err(Error::MultiplicityPresent(s.sector_label.to_string()))
                }
            })
            .collect()
    }

    pub fn a_tilde(&self) -> Option<Vec<Rational>> {
        self.sectors.iter().map(|s| s.a_tilde.clone()).collect()
    }

    pub fn b_tilde(&self) -> Option<Vec<Rational>> {
        self.sectors.iter().map(|s| s.b_tilde.clone()).collect()
    }
}

/// Enumerators of an arbitrary operator.
pub fn enumerate_operator<T: Scalar>(x: &Matrix<T>, dec: &Decomposition) -> Result<EnumeratorData> {
    let sectors = dec
        .sectors
        .iter()
        .map(|s| {
            Ok(SectorEnumerator {
                sector_label: s.label.clone(),
                depth: s.depth,
                a: projector_enumerator(x, dec, s)?,
                b: twirl_enumerator(x, dec, s)?,
                a_tilde: None,
                b_tilde: None,
                copy_scale: s.copy_scale.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnumeratorData {
        n: dec.dim,
        k: None,
        sectors,
    })
}

/// Enumerators of a code projector, with normalized scalars
/// `Ã = (N/K²) A`, `B̃ = (N/K) B` filled in for multiplicity-free sectors.
pub fn enumerate_code<T: Scalar>(p: &CodeProjector<T>, dec: &Decomposition) -> Result<EnumeratorData> {
    let mut data = enumerate_operator(&p.matrix, dec)?;
    data.k = Some(p.k);
    let n = Rational::from_integer(BigInt::from(p.n));
    let k = p.k_rational();
    for s in &mut data.sectors {
        if s.is_scalar() {
            s.a_tilde = Some(&s.a[(0, 0)] * &n / (&k * &k));
            s.b_tilde = Some(&s.b[(0, 0)] * &n / &k);
        }
    }
    Ok(data)
}

/// `(Ã, B̃)` of a code in a multiplicity-free decomposition.
pub fn normalized_enumerators<T: Scalar>(
    p: &CodeProjector<T>,
    dec: &Decomposition,
) -> Result<(Vec<Rational>, Vec<Rational>)> {
    if let Some(s) = dec.sectors.iter().find(|s| s.multiplicity > 1) {
        return Err(Error::MultiplicityPresent(s.label.to_string()));
    }
    let data = enumerate_code(p, dec)?;
    Ok((
        data.a_tilde().expect("scalar sectors"),
        data.b_tilde().expect("scalar sectors"),
    ))
}

/// Knill–Laflamme detection of a whole sector: `P F P = c_F P` for every
/// basis operator of every copy. The enumerator equality `A = K·B` is
/// evaluated as well and must agree.
pub fn kl_detects<T: Scalar>(p: &CodeProjector<T>, dec: &Decomposition, s: &Sector) -> Result<bool> {
    let by_operator = kl_operator_check(p, s)?;
    let a = projector_enumerator(&p.matrix, dec, s)?;
    let b = twirl_enumerator(&p.matrix, dec, s)?;
    let by_enumerator = a == b.scale(&p.k_rational());
    if by_operator != by_enumerator {
        return Err(Error::InternalInconsistency(format!(
            "sector {}: operator detection {by_operator} but A = K B is {by_enumerator}",
            s.label
        )));
    }
    Ok(by_operator)
}

fn kl_operator_check<T: Scalar>(p: &CodeProjector<T>, s: &Sector) -> Result<bool> {
    let pm = &p.matrix;
    let k_inv = p.k_rational().recip();
    for ops in &s.copies {
        for f in ops {
            let pf = dense_mul_sparse(pm, f);
            let c = pf.trace().scale(&k_inv);
            let pfp = pf.mul(pm)?;
            let expect = pm.map(|v| v.clone() * c.clone());
            if pfp != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Per-sector detection flags.
pub fn detection_flags<T: Scalar>(p: &CodeProjector<T>, dec: &Decomposition) -> Result<Vec<bool>> {
    dec.sectors.iter().map(|s| kl_detects(p, dec, s)).collect()
}

/// Largest `d` such that every sector of depth `< d` is detected.
pub fn code_depth<T: Scalar>(p: &CodeProjector<T>, dec: &Decomposition) -> Result<usize> {
    let flags = detection_flags(p, dec)?;
    Ok(depth_from_flags(&flags, &dec.depths()))
}

pub fn depth_from_flags(flags: &[bool], depths: &[usize]) -> usize {
    flags
        .iter()
        .zip(depths)
        .filter(|(f, _)| !**f)
        .map(|(_, d)| *d)
        .min()
        .unwrap_or_else(|| depths.iter().max().map_or(0, |d| d + 1))
}

/// Matrix Knill–Laflamme inequality `K·B − A ⪰ 0`, checked exactly.
pub fn matrix_kl_holds(e: &SectorEnumerator, k: usize) -> Result<bool> {
    let kb = e.b.scale(&Rational::from_integer(BigInt::from(k)));
    is_psd_exact(&kb.sub(&e.a)?)
}

/// Random rank-`k` orthogonal projector with rational entries on a basis with
/// diagonal metric `w`, built from small random integer vectors.
pub fn random_rational_projector<R: Rng>(
    metric: &[Rational],
    k: usize,
    rng: &mut R,
) -> RationalMatrix {
    let n = metric.len();
    assert!(k <= n);
    let ip = |u: &[Rational], v: &[Rational]| -> Rational {
        u.iter()
            .zip(v)
            .zip(metric)
            .map(|((a, b), w)| a * b * w)
            .sum()
    };
    let mut basis: Vec<(Vec<Rational>, Rational)> = Vec::new();
    while basis.len() < k {
        let mut u: Vec<Rational> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Rational::from_integer(BigInt::from(rng.gen_range(-3i64..=3)))
                } else {
                    Rational::zero()
                }
            })
            .collect();
        for (b, nb) in &basis {
            let c = ip(b, &u) / nb;
            for (x, y) in u.iter_mut().zip(b) {
                *x -= &c * y;
            }
        }
        let nu = ip(&u, &u);
        if !nu.is_zero() {
            basis.push((u, nu));
        }
    }
    let mut p = RationalMatrix::zeros(n, n);
    for (u, nu) in &basis {
        for a in 0..n {
            if u[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if u[b].is_zero() {
                    continue;
                }
                let v = &p[(a, b)] + &u[a] * &u[b] * &metric[b] / nu;
                p[(a, b)] = v;
            }
        }
    }
    p
}

/// Random rational operator with small entries, roughly `density` nonzero.
pub fn random_rational_operator<R: Rng>(n: usize, density: f64, rng: &mut R) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(density) {
                m[(i, j)] = Rational::new(
                    BigInt::from(rng.gen_range(-5i64..=5)),
                    BigInt::from(rng.gen_range(1i64..=4)),
                );
            }
        }
    }
    m
}

/// `Tr(X†X)` in the working basis.
pub fn hs_norm_sq<T: Scalar>(x: &Matrix<T>, metric: &[Rational]) -> T {
    hs_metric_dense2(x, x, metric)
}

/// A random invertible rational matrix acting inside the weight blocks of
/// `s`: unit lower triangular times a diagonal of small nonzero integers.
pub fn random_weight_block_mixing<R: Rng>(s: &Sector, rng: &mut R) -> RationalMatrix {
    let d = s.dim;
    let mut r = RationalMatrix::zeros(d, d);
    for blk in s.weight_blocks() {
        for (p, &i) in blk.iter().enumerate() {
            let mut diag = rng.gen_range(1i64..=3);
            if rng.gen_bool(0.5) {
                diag = -diag;
            }
            r[(i, i)] = Rational::from_integer(BigInt::from(diag));
            for &j in &blk[..p] {
                r[(i, j)] = Rational::new(
                    BigInt::from(rng.gen_range(-3i64..=3)),
                    BigInt::from(rng.gen_range(1i64..=3)),
                );
            }
        }
    }
    r
}

/// The same sector on the basis `F'_c = Σ_d R_cd F_d`, applied identically
/// to every copy. `R` must preserve the weight blocks.
pub fn recombine_sector(s: &Sector, r: &RationalMatrix) -> Result<Sector> {
    let copies = s
        .copies
        .iter()
        .map(|ops| {
            (0..s.dim)
                .map(|c| {
                    let mut acc = crate::rep::SparseOp::zero(ops[0].dim());
                    for (d, f) in ops.iter().enumerate() {
                        if !r[(c, d)].is_zero() {
                            acc = acc.add(&f.scale(&r[(c, d)]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let gram = r.mul(&s.gram)?.mul(&r.transpose())?;
    let gram_inv = crate::linalg::invert(&gram)?;
    Ok(Sector {
        copies,
        gram,
        gram_inv,
        ..s.clone()
    })
}
