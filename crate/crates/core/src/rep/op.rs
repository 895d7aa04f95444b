use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::linalg::{Matrix, RationalMatrix};
use crate::scalar::{Rational, Scalar};

/// Sparse square rational operator.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SparseOp {
    n: usize,
    #[serde(with = "entries_serde")]
    entries: BTreeMap<(usize, usize), Rational>,
}

mod entries_serde {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::scalar::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<(usize, usize), Rational>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        m.iter()
            .map(|((i, j), v)| (*i, *j, format_rational(v)))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<(usize, usize), Rational>, D::Error> {
        let v = Vec::<(usize, usize, String)>::deserialize(d)?;
        v.into_iter()
            .map(|(i, j, s)| {
                parse_rational(&s)
                    .map(|r| ((i, j), r))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

impl SparseOp {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: BTreeMap::new(),
        }
    }

    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut op = Self::zero(n);
        op.entries.insert((i, j), Rational::from_integer(1.into()));
        op
    }

    pub fn from_dense(m: &RationalMatrix) -> Self {
        let mut op = Self::zero(m.rows());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m[(i, j)].is_zero() {
                    op.entries.insert((i, j), m[(i, j)].clone());
                }
            }
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.entries.iter().map(|((i, j), v)| (*i, *j, v))
    }

    pub fn add_entry(&mut self, i: usize, j: usize, v: Rational) {
        if v.is_zero() {
            return;
        }
        let slot = self.entries.entry((i, j)).or_insert_with(Rational::zero);
        *slot += v;
        if slot.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    pub fn to_dense(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.n, self.n);
        for ((i, j), v) in &self.entries {
            m[(*i, *j)] = v.clone();
        }
        m
    }

    pub fn to_dense_as<T: Scalar>(&self) -> Matrix<T> {
        let mut m = Matrix::zeros(self.n, self.n);
        for ((i, j), v) in &self.entries {
            m[(*i, *j)] = T::from_rational(v.clone());
        }
        m
    }

    fn rows(&self) -> Vec<Vec<(usize, &Rational)>> {
        let mut rows = vec![Vec::new(); self.n];
        for ((i, j), v) in &self.entries {
            rows[*i].push((*j, v));
        }
        rows
    }

    pub fn mul(&self, rhs: &SparseOp) -> SparseOp {
        let rhs_rows = rhs.rows();
        let mut out = SparseOp::zero(self.n);
        for ((i, k), a) in &self.entries {
            for (j, b) in &rhs_rows[*k] {
                out.add_entry(*i, *j, a * *b);
            }
        }
        out
    }

    pub fn add(&self, rhs: &SparseOp) -> SparseOp {
        let mut out = self.clone();
        for ((i, j), v) in &rhs.entries {
            out.add_entry(*i, *j, v.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &SparseOp) -> SparseOp {
        let mut out = self.clone();
        for ((i, j), v) in &rhs.entries {
            out.add_entry(*i, *j, -v.clone());
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> SparseOp {
        if r.is_zero() {
            return SparseOp::zero(self.n);
        }
        SparseOp {
            n: self.n,
            entries: self.entries.iter().map(|(k, v)| (*k, v * r)).collect(),
        }
    }

    /// `[self, t] = self·t − t·self`.
    pub fn commutator(&self, t: &SparseOp) -> SparseOp {
        self.mul(t).sub(&t.mul(self))
    }

    pub fn transpose(&self) -> SparseOp {
        SparseOp {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|((i, j), v)| ((*j, *i), v.clone()))
                .collect(),
        }
    }

    /// Adjoint with respect to the diagonal metric `w` (basis vectors of
    /// squared norm `w_a`): `W⁻¹ Tᵀ W`.
    pub fn adjoint(&self, metric: &[Rational]) -> SparseOp {
        SparseOp {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|((i, j), v)| ((*j, *i), v * &metric[*i] / &metric[*j]))
                .collect(),
        }
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.n];
        for ((i, j), a) in &self.entries {
            if !v[*j].is_zero() {
                out[*i] += a * &v[*j];
            }
        }
        out
    }

    pub fn trace(&self) -> Rational {
        self.entries
            .iter()
            .filter(|((i, j), _)| i == j)
            .map(|(_, v)| v.clone())
            .sum()
    }
}

/// Hilbert–Schmidt inner product of two operators written in a basis with
/// diagonal metric `w`: `Σ x_ab y_ab w_a / w_b`.
pub fn hs_metric(x: &SparseOp, y: &SparseOp, metric: &[Rational]) -> Rational {
    let (small, big) = if x.nnz() <= y.nnz() { (x, y) } else { (y, x) };
    let mut acc = Rational::zero();
    for ((i, j), a) in &small.entries {
        if let Some(b) = big.entries.get(&(*i, *j)) {
            acc += a * b * &metric[*i] / &metric[*j];
        }
    }
    acc
}

/// Same as [`hs_metric`] with a dense left argument of any scalar type.
pub fn hs_metric_dense<T: Scalar>(x: &Matrix<T>, y: &SparseOp, metric: &[Rational]) -> T {
    let mut acc = T::zero();
    for ((i, j), b) in &y.entries {
        let a = &x[(*i, *j)];
        if a.is_zero() {
            continue;
        }
        acc = acc + a.scale(&(b * &metric[*i] / &metric[*j]));
    }
    acc
}

/// Metric inner product of two dense operators.
pub fn hs_metric_dense2<T: Scalar>(x: &Matrix<T>, y: &Matrix<T>, metric: &[Rational]) -> T {
    let n = x.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (&x[(i, j)], &y[(i, j)]);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            acc = acc + (a.clone() * b.clone()).scale(&(&metric[i] / &metric[j]));
        }
    }
    acc
}

/// `x · s` with dense `x` and sparse `s`.
pub fn dense_mul_sparse<T: Scalar>(x: &Matrix<T>, s: &SparseOp) -> Matrix<T> {
    let n = x.rows();
    let mut out = Matrix::zeros(n, n);
    for ((k, j), b) in &s.entries {
        for i in 0..n {
            let a = &x[(i, *k)];
            if a.is_zero() {
                continue;
            }
            let cur = std::mem::replace(&mut out[(i, *j)], T::zero());
            out[(i, *j)] = cur + a.scale(b);
        }
    }
    out
}

/// `s · x` with sparse `s` and dense `x`.
pub fn sparse_mul_dense<T: Scalar>(s: &SparseOp, x: &Matrix<T>) -> Matrix<T> {
    let n = x.rows();
    let mut out = Matrix::zeros(n, n);
    for ((i, k), a) in &s.entries {
        for j in 0..n {
            let b = &x[(*k, j)];
            if b.is_zero() {
                continue;
            }
            let cur = std::mem::replace(&mut out[(*i, j)], T::zero());
            out[(*i, j)] = cur + b.scale(a);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn sparse_matches_dense() {
        let a = RationalMatrix::from_rows(vec![
            vec![rat(1, 1), rat(0, 1), rat(2, 3)],
            vec![rat(0, 1), rat(-1, 2), rat(0, 1)],
            vec![rat(5, 1), rat(0, 1), rat(0, 1)],
        ])
        .unwrap();
        let b = a.transpose();
        let (sa, sb) = (SparseOp::from_dense(&a), SparseOp::from_dense(&b));
        assert_eq!(sa.mul(&sb).to_dense(), a.mul(&b).unwrap());
        assert_eq!(dense_mul_sparse(&a, &sb), a.mul(&b).unwrap());
        assert_eq!(sparse_mul_dense(&sa, &b), a.mul(&b).unwrap());
        assert_eq!(sa.trace(), a.trace());
    }

    #[test]
    fn metric_adjoint_is_adjoint() {
        let w = vec![rat(1, 1), rat(1, 3), rat(2, 5)];
        let x = SparseOp::from_dense(
            &RationalMatrix::from_rows(vec![
                vec![rat(1, 1), rat(2, 1), rat(0, 1)],
                vec![rat(0, 1), rat(3, 1), rat(1, 7)],
                vec![rat(4, 1), rat(0, 1), rat(1, 1)],
            ])
            .unwrap(),
        );
        let y = SparseOp::unit(3, 1, 2).add(&SparseOp::unit(3, 0, 0));
        let z = SparseOp::unit(3, 2, 0).add(&SparseOp::unit(3, 1, 1));
        // <x y, z> = <y, x† z>
        assert_eq!(
            hs_metric(&x.mul(&y), &z, &w),
            hs_metric(&y, &x.adjoint(&w).mul(&z), &w)
        );
    }
}
