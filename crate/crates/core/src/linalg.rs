//! Dense exact matrices over [`Rational`] or [`Radical`].

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Radical, Rational, Scalar};

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RationalMatrix = Matrix<Rational>;
pub type RadicalMatrix = Matrix<Radical>;

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Hermitian adjoint; every matrix in scope is real so this is the
    /// transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose()
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = std::mem::replace(&mut out[(i, j)], T::zero());
                    out[(i, j)] = cur + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.shape(),
                rhs.shape()
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map(|x| x.scale(r))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Scalar::to_f64).collect())
            .collect()
    }
}

/// `Tr(x† y)`; adjoint is the transpose because entries are real.
pub fn hs_inner<T: Scalar>(x: &Matrix<T>, y: &Matrix<T>) -> Result<T> {
    if x.shape() != y.shape() {
        return Err(Error::DimensionMismatch(format!(
            "{:?} vs {:?}",
            x.shape(),
            y.shape()
        )));
    }
    Ok(x
        .data
        .iter()
        .zip(&y.data)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(0);
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_struct("Matrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("data", &rows)
            .finish()
    }
}

// Rational-only algorithms.

/// Reduced row echelon form; returns the reduced matrix and pivot columns.
pub fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = a[(r, c)].recip();
        for j in c..a.cols {
            let v = &a[(r, j)] * &inv;
            a[(r, j)] = v;
        }
        for i in 0..a.rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..a.cols {
                if a[(r, j)].is_zero() {
                    continue;
                }
                let v = &a[(i, j)] - &f * &a[(r, j)];
                a[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Basis of the null space, one vector per free column. Each vector has a 1
/// in its free column.
pub fn rref_kernel(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); m.cols];
            v[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, f)].clone();
            }
            v
        })
        .collect()
}

/// All solutions of `m x = b` as a particular solution plus a kernel basis,
/// or `None` when the system is inconsistent.
pub fn affine_solutions(
    m: &RationalMatrix,
    b: &[Rational],
) -> Result<Option<(Vec<Rational>, Vec<Vec<Rational>>)>> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch(format!(
            "{} right-hand sides for {} rows",
            b.len(),
            m.rows
        )));
    }
    let mut aug = RationalMatrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols)] = b[i].clone();
    }
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r[(row, m.cols)].clone();
    }
    Ok(Some((x, rref_kernel(m))))
}

pub fn rank(m: &RationalMatrix) -> usize {
    rref(m).1.len()
}

pub fn invert(m: &RationalMatrix) -> Result<RationalMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "cannot invert {}x{}",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    let mut aug = RationalMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = Rational::one();
    }
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::SingularMatrix);
    }
    let mut out = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = r[(i, n + j)].clone();
        }
    }
    Ok(out)
}

/// Solve `m x = b` for square nonsingular `m`.
pub fn solve(m: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    invert(m)?.mul_vec(b)
}

pub fn determinant(m: &RationalMatrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("determinant of non-square".into()));
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != c {
            for j in 0..n {
                a.data.swap(p * n + j, c * n + j);
            }
            det = -det;
        }
        let piv = a[(c, c)].clone();
        det *= &piv;
        for i in c + 1..n {
            if a[(i, c)].is_zero() {
                continue;
            }
            let f = &a[(i, c)] / &piv;
            for j in c..n {
                let v = &a[(i, j)] - &f * &a[(c, j)];
                a[(i, j)] = v;
            }
        }
    }
    Ok(det)
}

fn submatrix(m: &RationalMatrix, idx: &[usize]) -> RationalMatrix {
    let mut out = RationalMatrix::zeros(idx.len(), idx.len());
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            out[(a, b)] = m[(i, j)].clone();
        }
    }
    out
}

/// Exact PSD test for symmetric rational matrices via all principal minors.
///
/// Leading minors alone are not enough for semidefiniteness, so every
/// subset is checked; intended for the small blocks that arise here.
pub fn is_psd_exact(m: &RationalMatrix) -> Result<bool> {
    if !m.is_symmetric() {
        return Err(Error::ShapeMismatch("PSD test needs a symmetric matrix".into()));
    }
    let n = m.rows;
    if n > 16 {
        return Err(Error::TooLarge(format!("{n}x{n} principal-minor PSD test")));
    }
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if determinant(&submatrix(m, &idx))?.is_negative() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn vec_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// JSON: row-major nested arrays. Rationals as "p/q" strings, radicals as
// triple lists.

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let rows = rows
            .into_iter()
            .map(|r| {
                r.iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Matrix::from_rows(rows).map_err(D::Error::custom)
    }
}

impl Serialize for RadicalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RadicalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Radical>>::deserialize(d)?;
        Matrix::from_rows(rows).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v, 1)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn kernel_examples() {
        assert!(rref_kernel(&RationalMatrix::identity(3)).is_empty());
        assert_eq!(rref_kernel(&RationalMatrix::zeros(2, 2)).len(), 2);
        let k = rref_kernel(&m(&[&[1, 1], &[2, 2]]));
        assert_eq!(k.len(), 1);
        // proportional to (1,-1)
        assert_eq!(&k[0][0] + &k[0][1], rat(0, 1));
        assert!(!k[0][0].is_zero());
    }

    #[test]
    fn invert_examples() {
        let id = RationalMatrix::identity(3);
        assert_eq!(invert(&id).unwrap(), id);
        let d = RationalMatrix::diagonal(&[rat(2, 1), rat(3, 1)]);
        assert_eq!(
            invert(&d).unwrap(),
            RationalMatrix::diagonal(&[rat(1, 2), rat(1, 3)])
        );
        assert!(matches!(
            invert(&m(&[&[1, 2], &[2, 4]])),
            Err(Error::SingularMatrix)
        ));
    }

    #[test]
    fn hs_inner_examples() {
        let i2 = RationalMatrix::identity(2);
        assert_eq!(hs_inner(&i2, &i2).unwrap(), rat(2, 1));
        let e01 = m(&[&[0, 1], &[0, 0]]);
        let e10 = m(&[&[0, 0], &[1, 0]]);
        assert_eq!(hs_inner(&e01, &e01).unwrap(), rat(1, 1));
        assert_eq!(hs_inner(&e01, &e10).unwrap(), rat(0, 1));
        assert!(hs_inner(&i2, &RationalMatrix::identity(3)).is_err());
    }

    #[test]
    fn dimension_checks() {
        let a = RationalMatrix::zeros(2, 3);
        assert!(a.mul(&a).is_err());
        assert!(a.add(&RationalMatrix::zeros(3, 2)).is_err());
        assert!(Matrix::<Rational>::new(2, 2, vec![rat(1, 1)]).is_err());
    }

    #[test]
    fn psd_needs_all_minors() {
        // leading minors are 0 and 0 but the matrix is not PSD
        let bad = m(&[&[0, 0], &[0, -1]]);
        assert!(!is_psd_exact(&bad).unwrap());
        assert!(is_psd_exact(&m(&[&[2, 1], &[1, 2]])).unwrap());
        assert!(!is_psd_exact(&m(&[&[1, 2], &[2, 1]])).unwrap());
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&m(&[&[1, 2], &[3, 4]])).unwrap(), rat(-2, 1));
        assert_eq!(
            determinant(&m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]])).unwrap(),
            rat(-5, 1)
        );
    }

    #[test]
    fn json_round_trip() {
        let a = Matrix::from_rows(vec![vec![rat(1, 2), rat(-3, 1)]]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"[["1/2","-3"]]"#);
        let back: RationalMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = RationalMatrix> {
        prop::collection::vec((-9i64..10, 1i64..5), n * n).prop_map(move |v| {
            Matrix::new(n, n, v.into_iter().map(|(p, q)| rat(p, q)).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn invert_twice_is_identity(a in arb_matrix(4)) {
            if let Ok(inv) = invert(&a) {
                prop_assert_eq!(a.mul(&inv).unwrap(), RationalMatrix::identity(4));
                prop_assert_eq!(invert(&inv).unwrap(), a);
            } else {
                prop_assert!(determinant(&a).unwrap().is_zero());
            }
        }

        #[test]
        fn kernel_vectors_are_annihilated(a in arb_matrix(3)) {
            let k = rref_kernel(&a);
            prop_assert_eq!(k.len() + rank(&a), 3);
            for v in k {
                prop_assert!(a.mul_vec(&v).unwrap().iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn hs_norm_nonnegative(a in arb_matrix(3)) {
            let n = hs_inner(&a, &a).unwrap();
            prop_assert!(!n.is_negative());
            prop_assert_eq!(n.is_zero(), a.is_zero());
        }
    }

    #[test]
    fn affine_solution_sets() {
        let m = RationalMatrix::from_rows(vec![vec![rat(1, 1), rat(1, 1), rat(0, 1)]]).unwrap();
        let (x, k) = affine_solutions(&m, &[rat(2, 1)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), vec![rat(2, 1)]);
        assert_eq!(k.len(), 2);
        let m = RationalMatrix::from_rows(vec![vec![rat(1, 1)], vec![rat(2, 1)]]).unwrap();
        assert!(affine_solutions(&m, &[rat(1, 1), rat(1, 1)]).unwrap().is_none());
    }
}
