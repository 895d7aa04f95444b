//! Exact representations of su(2) and su(q), and the isotypic decomposition
//! of their conjugation action on operators.
//!
//! Every [`Rep`] is stored on a *working basis* `v_a` that is orthogonal but
//! not normalized: `⟨v_a, v_b⟩ = δ_ab · w_a` with rational `w_a`. All
//! generator matrices are rational in that basis. Matrices on the
//! orthonormal basis `e_a = v_a / √w_a` are obtained with
//! [`Rep::to_isometric`].

mod highest_weight;
mod label;
mod op;
mod sectors;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use highest_weight::{build_irrep_by_highest_weight, build_irrep_with_degree, DEFAULT_DEGREE_BOUND};
pub use label::{
    adjoint_depth, adjoint_depth_with_cap, epsilon_to_dynkin, tensor_decompose,
    weight_multiplicities, IrrepLabel, DEFAULT_DEPTH_CAP,
};
pub use op::{
    dense_mul_sparse, hs_metric, hs_metric_dense, hs_metric_dense2, sparse_mul_dense, SparseOp,
};
pub use sectors::{conjugation_sectors, Decomposition, Sector, SECTOR_FORMAT_VERSION};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, RadicalMatrix, RationalMatrix};
use crate::scalar::{Radical, Rational, Scalar};

/// Identifies how a representation was built; doubles as a cache key.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RepSpec {
    Su2 { two_j: u32 },
    Sym { q: usize, n: usize },
    HighestWeight { label: IrrepLabel },
}

impl RepSpec {
    pub fn build(&self) -> Result<Rep> {
        match self {
            RepSpec::Su2 { two_j } => Ok(su2_irrep(*two_j)),
            RepSpec::Sym { q, n } => sym_power_rep(*q, *n),
            RepSpec::HighestWeight { label } => build_irrep_by_highest_weight(label),
        }
    }

    pub fn key(&self) -> String {
        match self {
            RepSpec::Su2 { two_j } => format!("su2-2j{two_j}"),
            RepSpec::Sym { q, n } => format!("sym-q{q}-n{n}"),
            RepSpec::HighestWeight { label } => {
                let parts: Vec<String> = label.dynkin().iter().map(u32::to_string).collect();
                format!("hw-su{}-{}", label.q(), parts.join("_"))
            }
        }
    }
}

impl std::fmt::Display for RepSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RepSpec::Su2 { two_j } => write!(f, "su2 2j={two_j}"),
            RepSpec::Sym { q, n } => write!(f, "Sym^{n}(C^{q})"),
            RepSpec::HighestWeight { label } => write!(f, "su{} {label}", label.q()),
        }
    }
}

/// Representation of su(q) by Chevalley generators `E_i, F_i, H_i`.
#[derive(Clone, Debug)]
pub struct Rep {
    pub spec: RepSpec,
    /// `q` of su(q).
    pub q: usize,
    pub raising: Vec<SparseOp>,
    pub lowering: Vec<SparseOp>,
    pub cartan: Vec<SparseOp>,
    /// Dynkin weight of each working-basis vector.
    pub weights: Vec<Vec<i64>>,
    /// Squared norms `w_a` of the working basis.
    pub metric: Vec<Rational>,
}

impl Rep {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn rank(&self) -> usize {
        self.q - 1
    }

    pub fn raising_matrices(&self) -> Vec<RationalMatrix> {
        self.raising.iter().map(SparseOp::to_dense).collect()
    }

    pub fn lowering_matrices(&self) -> Vec<RationalMatrix> {
        self.lowering.iter().map(SparseOp::to_dense).collect()
    }

    pub fn cartan_matrices(&self) -> Vec<RationalMatrix> {
        self.cartan.iter().map(SparseOp::to_dense).collect()
    }

    /// Rewrite a working-basis matrix on the orthonormal basis:
    /// `T_ab = T'_ab · √(w_a / w_b)`.
    pub fn to_isometric<T: Scalar>(&self, m: &Matrix<T>) -> Result<RadicalMatrix> {
        let n = self.dim();
        let mut out = RadicalMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = &m[(i, j)];
                if v.is_zero() {
                    continue;
                }
                let r = Radical::sqrt_rational(&(&self.metric[i] / &self.metric[j]))?;
                out[(i, j)] = v.to_radical().checked_mul(&r)?;
            }
        }
        Ok(out)
    }

    /// Inverse of [`Rep::to_isometric`].
    pub fn from_isometric(&self, m: &RadicalMatrix) -> Result<RadicalMatrix> {
        let n = self.dim();
        let mut out = RadicalMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = &m[(i, j)];
                if v.is_zero() {
                    continue;
                }
                let r = Radical::sqrt_rational(&(&self.metric[j] / &self.metric[i]))?;
                out[(i, j)] = v.checked_mul(&r)?;
            }
        }
        Ok(out)
    }

    /// Coordinates in the working basis of a vector given on the orthonormal
    /// basis: `ψ'_a = ψ_a / √w_a`.
    pub fn vector_from_isometric(&self, v: &[Radical]) -> Result<Vec<Radical>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for dim {}",
                v.len(),
                self.dim()
            )));
        }
        v.iter()
            .zip(&self.metric)
            .map(|(a, w)| {
                let s = Radical::sqrt_rational(w)?;
                // 1/√w = √w / w
                a.checked_mul(&s)?.div_rational(w)
            })
            .collect()
    }

    /// Checks the su(q) relations exactly on the stored generators:
    /// `[E_i,F_j] = δ_ij H_i`, `[H_i,E_j] = A_ij E_j`, `[H_i,F_j] = −A_ij F_j`,
    /// commuting Cartans, and the Serre relations.
    pub fn check_relations(&self) -> Result<()> {
        let r = self.rank();
        let cartan_a = |i: usize, j: usize| -> i64 {
            if i == j {
                2
            } else if i.abs_diff(j) == 1 {
                -1
            } else {
                0
            }
        };
        let fail = |what: String| Err(Error::InternalInconsistency(what));
        for i in 0..r {
            for j in 0..r {
                let c = self.raising[i].commutator(&self.lowering[j]);
                let expect = if i == j {
                    self.cartan[i].clone()
                } else {
                    SparseOp::zero(self.dim())
                };
                if c != expect {
                    return fail(format!("[E{i},F{j}]"));
                }
                let a = Rational::from_integer(BigInt::from(cartan_a(i, j)));
                if self.cartan[i].commutator(&self.raising[j]) != self.raising[j].scale(&a) {
                    return fail(format!("[H{i},E{j}]"));
                }
                if self.cartan[i].commutator(&self.lowering[j]) != self.lowering[j].scale(&-a) {
                    return fail(format!("[H{i},F{j}]"));
                }
                if !self.cartan[i].commutator(&self.cartan[j]).is_zero() {
                    return fail(format!("[H{i},H{j}]"));
                }
                if i != j && cartan_a(i, j) == -1 {
                    // ad(E_i)^2 E_j = 0
                    let e = &self.raising;
                    let s = e[i].commutator(&e[i].commutator(&e[j]));
                    let f = &self.lowering;
                    let t = f[i].commutator(&f[i].commutator(&f[j]));
                    if !s.is_zero() || !t.is_zero() {
                        return fail(format!("Serre relation ({i},{j})"));
                    }
                } else if i != j && (!self.raising[i].commutator(&self.raising[j]).is_zero()
                    || !self.lowering[i].commutator(&self.lowering[j]).is_zero())
                {
                    return fail(format!("Serre relation ({i},{j})"));
                }
            }
        }
        for (i, h) in self.cartan.iter().enumerate() {
            for (a, _) in self.weights.iter().enumerate() {
                let expect = Rational::from_integer(BigInt::from(self.weights[a][i]));
                if h.get(a, a) != expect {
                    return fail(format!("H{i} not diagonal with weight entries"));
                }
            }
            if h.iter().any(|(a, b, _)| a != b) {
                return fail(format!("H{i} not diagonal"));
            }
        }
        Ok(())
    }

    /// Check that `E_i† = F_i` with respect to the stored metric, i.e. that
    /// the generators integrate to a unitary group action.
    pub fn check_unitary(&self) -> Result<()> {
        for (i, (e, f)) in self.raising.iter().zip(&self.lowering).enumerate() {
            if e.adjoint(&self.metric) != *f {
                return Err(Error::InternalInconsistency(format!(
                    "E{i} adjoint differs from F{i}"
                )));
            }
        }
        Ok(())
    }
}

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Spin-j irrep of su(2) on the basis `x₁^{2j−k} x₂^k`, `k = 0..2j`
/// (weight `m = j − k`, so index 0 is the top weight).
pub fn su2_irrep(two_j: u32) -> Rep {
    let n = two_j as usize + 1;
    let mut e = SparseOp::zero(n);
    let mut f = SparseOp::zero(n);
    let mut h = SparseOp::zero(n);
    let nn = two_j as i64;
    for k in 0..n {
        let ki = k as i64;
        if k > 0 {
            e.add_entry(k - 1, k, int(ki));
        }
        if k + 1 < n {
            f.add_entry(k + 1, k, int(nn - ki));
        }
        h.add_entry(k, k, int(nn - 2 * ki));
    }
    Rep {
        spec: RepSpec::Su2 { two_j },
        q: 2,
        raising: vec![e],
        lowering: vec![f],
        cartan: vec![h],
        weights: (0..n as i64).map(|k| vec![nn - 2 * k]).collect(),
        metric: (0..n as u64)
            .map(|k| Rational::new(BigInt::one(), binomial(two_j as u64, k)))
            .collect(),
    }
}

/// Occupation vectors `a` with `Σ a_i = n`, in descending lexicographic
/// order (top weight `(n,0,…,0)` first).
pub fn occupation_basis(q: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(q: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=left).rev() {
            cur.push(a);
            rec(q, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(q, n, &mut Vec::new(), &mut out);
    out
}

pub fn multinomial(a: &[usize]) -> BigInt {
    let mut acc = BigInt::one();
    let mut total = 0u64;
    for &x in a {
        for i in 1..=x as u64 {
            total += 1;
            acc = acc * BigInt::from(total) / BigInt::from(i);
        }
    }
    acc
}

/// `Sym^n(C^q)` on monomials `x^a`, with `E_i = x_i ∂_{i+1}` and
/// `F_i = x_{i+1} ∂_i`. The metric `1/multinomial(n; a)` is the one induced
/// by the isometric embedding into `(C^q)^{⊗n}`.
pub fn sym_power_rep(q: usize, n: usize) -> Result<Rep> {
    if q < 2 || n < 1 {
        return Err(Error::InvalidCodeSpec(format!("Sym^{n}(C^{q}) needs q>=2, n>=1")));
    }
    let basis = occupation_basis(q, n);
    let index: BTreeMap<Vec<usize>, usize> =
        basis.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
    let d = basis.len();
    let mut raising = vec![SparseOp::zero(d); q - 1];
    let mut lowering = vec![SparseOp::zero(d); q - 1];
    let mut cartan = vec![SparseOp::zero(d); q - 1];
    let mut weights = Vec::with_capacity(d);
    for (col, a) in basis.iter().enumerate() {
        let mut w = Vec::with_capacity(q - 1);
        for i in 0..q - 1 {
            let h = a[i] as i64 - a[i + 1] as i64;
            w.push(h);
            cartan[i].add_entry(col, col, int(h));
            if a[i + 1] > 0 {
                let mut b = a.clone();
                b[i] += 1;
                b[i + 1] -= 1;
                raising[i].add_entry(index[&b], col, int(a[i + 1] as i64));
            }
            if a[i] > 0 {
                let mut b = a.clone();
                b[i] -= 1;
                b[i + 1] += 1;
                lowering[i].add_entry(index[&b], col, int(a[i] as i64));
            }
        }
        weights.push(w);
    }
    Ok(Rep {
        spec: RepSpec::Sym { q, n },
        q,
        raising,
        lowering,
        cartan,
        weights,
        metric: basis
            .iter()
            .map(|a| Rational::new(BigInt::one(), multinomial(a)))
            .collect(),
    })
}
