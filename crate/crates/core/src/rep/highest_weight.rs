//! Irreps realized inside `V^{⊗p} ⊗ (V*)^{⊗r}` for the defining
//! representation `V = C^q`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{IrrepLabel, Rep, RepSpec, SparseOp};
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Default bound on `p + r`.
pub const DEFAULT_DEGREE_BOUND: usize = 8;

type SVec = BTreeMap<usize, Rational>;

struct TensorSpace {
    q: usize,
    /// `true` for dual factors.
    dual: Vec<bool>,
}

#[derive(Clone, Copy)]
enum Gen {
    E(usize),
    F(usize),
}

impl TensorSpace {
    fn len(&self) -> usize {
        self.dual.len()
    }

    fn digit(&self, idx: usize, k: usize) -> usize {
        idx / self.q.pow((self.len() - 1 - k) as u32) % self.q
    }

    fn set_digit(&self, idx: usize, k: usize, d: usize) -> usize {
        let p = self.q.pow((self.len() - 1 - k) as u32);
        idx - self.digit(idx, k) * p + d * p
    }

    fn weight(&self, idx: usize) -> Vec<i64> {
        let mut w = vec![0i64; self.q - 1];
        for k in 0..self.len() {
            let d = self.digit(idx, k);
            let s = if self.dual[k] { -1 } else { 1 };
            if d < self.q - 1 {
                w[d] += s;
            }
            if d > 0 {
                w[d - 1] -= s;
            }
        }
        w
    }

    fn apply(&self, g: Gen, v: &SVec) -> SVec {
        let mut out = SVec::new();
        for (&idx, c) in v {
            for k in 0..self.len() {
                let d = self.digit(idx, k);
                // (from, to, sign) on this factor
                let (from, to, sign) = match (g, self.dual[k]) {
                    (Gen::E(i), false) => (i + 1, i, 1),
                    (Gen::F(i), false) => (i, i + 1, 1),
                    (Gen::E(i), true) => (i, i + 1, -1),
                    (Gen::F(i), true) => (i + 1, i, -1),
                };
                if d != from {
                    continue;
                }
                let j = self.set_digit(idx, k, to);
                let val = if sign > 0 { c.clone() } else { -c.clone() };
                let slot = out.entry(j).or_insert_with(Rational::zero);
                *slot += val;
                if slot.is_zero() {
                    out.remove(&j);
                }
            }
        }
        out
    }
}

fn dot(a: &SVec, b: &SVec) -> Rational {
    let (s, l) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    s.iter()
        .filter_map(|(k, x)| l.get(k).map(|y| x * y))
        .sum()
}

fn axpy(y: &mut SVec, a: &Rational, x: &SVec) {
    for (k, v) in x {
        let slot = y.entry(*k).or_insert_with(Rational::zero);
        *slot += a * v;
        if slot.is_zero() {
            y.remove(k);
        }
    }
}

/// Build the irrep with highest weight `target` inside a tensor power of the
/// defining representation and its dual.
pub fn build_irrep_by_highest_weight(target: &IrrepLabel) -> Result<Rep> {
    build_irrep_with_degree(target, DEFAULT_DEGREE_BOUND)
}

pub fn build_irrep_with_degree(target: &IrrepLabel, degree_bound: usize) -> Result<Rep> {
    let q = target.q();
    let a = target.dynkin();
    let unreachable = || Error::NotReachable(target.to_string(), degree_bound);
    let (p, r) = if q == 2 {
        (a[0] as usize, 0)
    } else {
        if a[1..q - 2].iter().any(|&x| x != 0) {
            return Err(unreachable());
        }
        (a[0] as usize, a[q - 2] as usize)
    };
    if p + r > degree_bound {
        return Err(unreachable());
    }
    let space = TensorSpace {
        q,
        dual: std::iter::repeat(false)
            .take(p)
            .chain(std::iter::repeat(true).take(r))
            .collect(),
    };
    // e_0^{⊗p} ⊗ (e_{q-1}^*)^{⊗r}
    let mut hw_idx = 0usize;
    for k in 0..space.len() {
        if space.dual[k] {
            hw_idx = space.set_digit(hw_idx, k, q - 1);
        }
    }
    let hw: SVec = BTreeMap::from([(hw_idx, Rational::one())]);

    let mut basis: Vec<SVec> = vec![hw];
    let mut norms: Vec<Rational> = vec![Rational::one()];
    let mut weights: Vec<Vec<i64>> = vec![space.weight(hw_idx)];
    let mut level: Vec<usize> = vec![0];
    while !level.is_empty() {
        let mut next = Vec::new();
        for &b in &level {
            for i in 0..q - 1 {
                let mut v = space.apply(Gen::F(i), &basis[b]);
                if v.is_empty() {
                    continue;
                }
                let w = {
                    let (&idx, _) = v.iter().next().expect("nonempty");
                    space.weight(idx)
                };
                // orthogonalize against existing vectors of this weight
                for (c, u) in basis.iter().enumerate() {
                    if weights[c] != w {
                        continue;
                    }
                    let coef = dot(u, &v) / &norms[c];
                    if !coef.is_zero() {
                        axpy(&mut v, &-coef, u);
                    }
                }
                if v.is_empty() {
                    continue;
                }
                norms.push(dot(&v, &v));
                basis.push(v);
                weights.push(w);
                next.push(basis.len() - 1);
            }
        }
        level = next;
    }
    if basis.len() != target.dim() {
        return Err(Error::InternalInconsistency(format!(
            "built {} vectors for {target} of dimension {}",
            basis.len(),
            target.dim()
        )));
    }

    let n = basis.len();
    let mut by_weight: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (i, w) in weights.iter().enumerate() {
        by_weight.entry(w.clone()).or_default().push(i);
    }
    let matrix_of = |g: Gen| -> Result<SparseOp> {
        let mut op = SparseOp::zero(n);
        for (col, u) in basis.iter().enumerate() {
            let mut image = space.apply(g, u);
            if image.is_empty() {
                continue;
            }
            let (&idx, _) = image.iter().next().expect("nonempty");
            let w = space.weight(idx);
            for &row in by_weight.get(&w).map(Vec::as_slice).unwrap_or(&[]) {
                let coef = dot(&basis[row], &image) / &norms[row];
                if !coef.is_zero() {
                    axpy(&mut image, &-coef.clone(), &basis[row]);
                    op.add_entry(row, col, coef);
                }
            }
            if !image.is_empty() {
                return Err(Error::InternalInconsistency(format!(
                    "generator image leaves the span of {target}"
                )));
            }
        }
        Ok(op)
    };
    let mut raising = Vec::new();
    let mut lowering = Vec::new();
    let mut cartan = Vec::new();
    for i in 0..q - 1 {
        raising.push(matrix_of(Gen::E(i))?);
        lowering.push(matrix_of(Gen::F(i))?);
        let mut h = SparseOp::zero(n);
        for (a, w) in weights.iter().enumerate() {
            h.add_entry(a, a, Rational::from_integer(BigInt::from(w[i])));
        }
        cartan.push(h);
    }
    Ok(Rep {
        spec: RepSpec::HighestWeight {
            label: target.clone(),
        },
        q,
        raising,
        lowering,
        cartan,
        weights,
        metric: norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::su2_irrep;

    #[test]
    fn su3_adjoint_and_27() {
        let l = IrrepLabel::new(vec![1, 1]).unwrap();
        let r = build_irrep_by_highest_weight(&l).unwrap();
        assert_eq!(r.dim(), 8);
        r.check_relations().unwrap();
        r.check_unitary().unwrap();
        let l = IrrepLabel::new(vec![2, 2]).unwrap();
        let r = build_irrep_by_highest_weight(&l).unwrap();
        assert_eq!(r.dim(), 27);
        r.check_relations().unwrap();
        r.check_unitary().unwrap();
        assert_eq!(r.weights[0], vec![2, 2]);
    }

    #[test]
    fn su2_matches_direct_construction() {
        for tj in 0..6 {
            let a = build_irrep_by_highest_weight(&IrrepLabel::su2(tj)).unwrap();
            let b = su2_irrep(tj);
            assert_eq!(a.weights, b.weights);
            a.check_relations().unwrap();
            // identical on the orthonormal basis
            for (x, y) in [(&a.raising[0], &b.raising[0]), (&a.lowering[0], &b.lowering[0])] {
                assert_eq!(
                    a.to_isometric(&x.to_dense()).unwrap(),
                    b.to_isometric(&y.to_dense()).unwrap()
                );
            }
        }
    }

    #[test]
    fn other_groups() {
        let l = IrrepLabel::new(vec![1, 0, 1]).unwrap();
        let r = build_irrep_by_highest_weight(&l).unwrap();
        assert_eq!(r.dim(), 15);
        r.check_relations().unwrap();
        let l = IrrepLabel::new(vec![0, 3]).unwrap();
        assert_eq!(build_irrep_by_highest_weight(&l).unwrap().dim(), 10);
    }

    #[test]
    fn not_reachable() {
        let mid = IrrepLabel::new(vec![0, 1, 0]).unwrap();
        assert!(matches!(
            build_irrep_by_highest_weight(&mid),
            Err(Error::NotReachable(..))
        ));
        let big = IrrepLabel::new(vec![5, 5]).unwrap();
        assert!(matches!(
            build_irrep_with_degree(&big, 8),
            Err(Error::NotReachable(..))
        ));
    }
}
