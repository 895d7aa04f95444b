//! Isotypic decomposition of `L(V)` under `T ↦ [X, T]`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{adjoint_depth, hs_metric, IrrepLabel, Rep, RepSpec, SparseOp};
use crate::error::{Error, Result};
use crate::linalg::{invert, rref_kernel, RationalMatrix};
use crate::scalar::rational::serde_rational_vec;
use crate::scalar::Rational;

/// Bumped whenever the basis conventions below change, so stale caches are
/// never reused.
pub const SECTOR_FORMAT_VERSION: u32 = 1;

/// One isotypic sector `m_ξ · V_ξ` of the conjugation action.
///
/// Copy `α` is spanned by `copies[α]`; every copy is generated from its own
/// highest-weight operator by the same lowering words, so
/// `copies[α][i] ↦ copies[β][i]` is an intertwiner. Highest-weight operators
/// of different copies are orthogonal but not normalized: the Gram matrix of
/// copy `α` is `copy_scale[α] · gram`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sector {
    pub label: IrrepLabel,
    pub multiplicity: usize,
    pub dim: usize,
    pub depth: usize,
    pub copies: Vec<Vec<SparseOp>>,
    pub gram: RationalMatrix,
    pub gram_inv: RationalMatrix,
    #[serde(with = "serde_rational_vec")]
    pub copy_scale: Vec<Rational>,
    /// `(parent, i)`: operator `k+1` is `[F_i, op_parent]`.
    pub words: Vec<(usize, usize)>,
    /// Dynkin weight of each basis operator.
    pub op_weights: Vec<Vec<i64>>,
}

impl Sector {
    pub fn highest_weight_op(&self, copy: usize) -> &SparseOp {
        &self.copies[copy][0]
    }

    /// Index ranges of operators sharing a weight. The Gram matrix is block
    /// diagonal along these.
    pub fn weight_blocks(&self) -> Vec<Vec<usize>> {
        let mut by: BTreeMap<&Vec<i64>, Vec<usize>> = BTreeMap::new();
        for (i, w) in self.op_weights.iter().enumerate() {
            by.entry(w).or_default().push(i);
        }
        by.into_values().collect()
    }

    /// Coordinates of an operator lying in copy `copy` on that copy's basis.
    pub fn coordinates(&self, copy: usize, t: &SparseOp, metric: &[Rational]) -> Vec<Rational> {
        let inner: Vec<Rational> = self.copies[copy]
            .iter()
            .map(|f| hs_metric(f, t, metric))
            .collect();
        let mut out = self
            .gram_inv
            .mul_vec(&inner)
            .expect("gram shape matches copy size");
        for v in &mut out {
            *v /= &self.copy_scale[copy];
        }
        out
    }

    /// Orthogonal projection of `t` onto copy `copy`, expressed on its basis.
    pub fn project(&self, copy: usize, t: &SparseOp, metric: &[Rational]) -> SparseOp {
        let coords = self.coordinates(copy, t, metric);
        let mut out = SparseOp::zero(t.dim());
        for (c, f) in coords.iter().zip(&self.copies[copy]) {
            if !c.is_zero() {
                out = out.add(&f.scale(c));
            }
        }
        out
    }
}

/// Sector decomposition of `L(V)` together with the working-basis metric of
/// `V`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Decomposition {
    pub format_version: u32,
    pub spec: RepSpec,
    pub dim: usize,
    #[serde(with = "serde_rational_vec")]
    pub metric: Vec<Rational>,
    pub sectors: Vec<Sector>,
}

impl Decomposition {
    pub fn sector(&self, label: &IrrepLabel) -> Option<&Sector> {
        self.sectors.iter().find(|s| &s.label == label)
    }

    pub fn sector_index(&self, label: &IrrepLabel) -> Option<usize> {
        self.sectors.iter().position(|s| &s.label == label)
    }

    pub fn labels(&self) -> Vec<IrrepLabel> {
        self.sectors.iter().map(|s| s.label.clone()).collect()
    }

    pub fn depths(&self) -> Vec<usize> {
        self.sectors.iter().map(|s| s.depth).collect()
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.sectors.iter().all(|s| s.multiplicity == 1)
    }

    /// `Σ m_ξ d_ξ`, which must equal `N²`.
    pub fn total_dimension(&self) -> usize {
        self.sectors.iter().map(|s| s.multiplicity * s.dim).sum()
    }
}

fn simple_root(rank: usize, i: usize) -> Vec<i64> {
    (0..rank)
        .map(|j| {
            if i == j {
                2
            } else if i.abs_diff(j) == 1 {
                -1
            } else {
                0
            }
        })
        .collect()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Highest-weight operators of weight `lambda`: the common kernel of
/// `T ↦ [E_i, T]` on the matrix units of that weight.
fn highest_weight_ops(rep: &Rep, units: &[(usize, usize)]) -> Vec<SparseOp> {
    let n = rep.dim();
    let rank = rep.rank();
    let mut row_of: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    let mut columns: Vec<BTreeMap<usize, Rational>> = Vec::with_capacity(units.len());
    for &(a, b) in units {
        let unit = SparseOp::unit(n, a, b);
        let mut col = BTreeMap::new();
        for i in 0..rank {
            let img = rep.raising[i].commutator(&unit);
            for (c, d, v) in img.iter() {
                let next = row_of.len();
                let r = *row_of.entry((i, c, d)).or_insert(next);
                col.insert(r, v.clone());
            }
        }
        columns.push(col);
    }
    let rows = row_of.len();
    let mut m = RationalMatrix::zeros(rows, units.len());
    for (j, col) in columns.iter().enumerate() {
        for (r, v) in col {
            m[(*r, j)] = v.clone();
        }
    }
    rref_kernel(&m)
        .into_iter()
        .map(|v| {
            let mut op = SparseOp::zero(n);
            for (k, c) in v.into_iter().enumerate() {
                let (a, b) = units[k];
                op.add_entry(a, b, c);
            }
            op
        })
        .collect()
}

/// Unnormalized Gram–Schmidt residual of `t` against `basis` (which is
/// already orthogonal).
fn residual(t: &SparseOp, basis: &[(SparseOp, Rational)], metric: &[Rational]) -> SparseOp {
    let mut r = t.clone();
    for (b, nb) in basis {
        let c = hs_metric(b, t, metric) / nb;
        if !c.is_zero() {
            r = r.sub(&b.scale(&c));
        }
    }
    r
}

fn lowering_words(
    rep: &Rep,
    hw: &SparseOp,
    hw_weight: &[i64],
    metric: &[Rational],
) -> (Vec<SparseOp>, Vec<(usize, usize)>, Vec<Vec<i64>>) {
    let rank = rep.rank();
    let mut ops = vec![hw.clone()];
    let mut weights = vec![hw_weight.to_vec()];
    let mut words = Vec::new();
    let mut shadow: BTreeMap<Vec<i64>, Vec<(SparseOp, Rational)>> = BTreeMap::new();
    shadow
        .entry(hw_weight.to_vec())
        .or_default()
        .push((hw.clone(), hs_metric(hw, hw, metric)));
    let mut level = vec![0usize];
    while !level.is_empty() {
        let mut next = Vec::new();
        for &p in &level {
            for i in 0..rank {
                let cand = rep.lowering[i].commutator(&ops[p]);
                if cand.is_zero() {
                    continue;
                }
                let w = sub(&weights[p], &simple_root(rank, i));
                let sh = shadow.entry(w.clone()).or_default();
                let res = residual(&cand, sh, metric);
                if res.is_zero() {
                    continue;
                }
                let nr = hs_metric(&res, &res, metric);
                sh.push((res, nr));
                ops.push(cand);
                weights.push(w);
                words.push((p, i));
                next.push(ops.len() - 1);
            }
        }
        level = next;
    }
    (ops, words, weights)
}

fn replay(rep: &Rep, hw: &SparseOp, words: &[(usize, usize)]) -> Vec<SparseOp> {
    let mut ops = vec![hw.clone()];
    for &(p, i) in words {
        let op = rep.lowering[i].commutator(&ops[p]);
        ops.push(op);
    }
    ops
}

fn gram_of(ops: &[SparseOp], weights: &[Vec<i64>], metric: &[Rational]) -> RationalMatrix {
    let d = ops.len();
    let mut g = RationalMatrix::zeros(d, d);
    for a in 0..d {
        for b in a..d {
            if weights[a] != weights[b] {
                continue;
            }
            let v = hs_metric(&ops[a], &ops[b], metric);
            g[(b, a)] = v.clone();
            g[(a, b)] = v;
        }
    }
    g
}

/// Blockwise inverse of a weight-block-diagonal Gram matrix.
fn block_inverse(g: &RationalMatrix, weights: &[Vec<i64>]) -> Result<RationalMatrix> {
    let d = g.rows();
    let mut blocks: BTreeMap<&Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (i, w) in weights.iter().enumerate() {
        blocks.entry(w).or_default().push(i);
    }
    let mut out = RationalMatrix::zeros(d, d);
    for idx in blocks.values() {
        let mut b = RationalMatrix::zeros(idx.len(), idx.len());
        for (x, &i) in idx.iter().enumerate() {
            for (y, &j) in idx.iter().enumerate() {
                b[(x, y)] = g[(i, j)].clone();
            }
        }
        let inv = invert(&b)?;
        for (x, &i) in idx.iter().enumerate() {
            for (y, &j) in idx.iter().enumerate() {
                out[(i, j)] = inv[(x, y)].clone();
            }
        }
    }
    Ok(out)
}

/// Sort key: depth, then label size, then label descending, which puts the
/// trivial sector first and conjugate pairs next to each other.
fn sector_order(s: &Sector) -> (usize, u32, std::cmp::Reverse<Vec<u32>>) {
    (
        s.depth,
        s.label.dynkin().iter().sum(),
        std::cmp::Reverse(s.label.dynkin().to_vec()),
    )
}

/// Decompose the conjugation action of `rep` on `L(V)` into isotypic sectors.
pub fn conjugation_sectors(rep: &Rep) -> Result<Decomposition> {
    let n = rep.dim();
    let metric = &rep.metric;
    let mut units: BTreeMap<Vec<i64>, Vec<(usize, usize)>> = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            units
                .entry(sub(&rep.weights[a], &rep.weights[b]))
                .or_default()
                .push((a, b));
        }
    }
    let mut sectors = Vec::new();
    for (lambda, us) in &units {
        if lambda.iter().any(|&x| x < 0) {
            continue;
        }
        let cands = highest_weight_ops(rep, us);
        if cands.is_empty() {
            continue;
        }
        // orthogonalize the highest-weight operators
        let mut hws: Vec<(SparseOp, Rational)> = Vec::new();
        for c in cands {
            let r = residual(&c, &hws, metric);
            if r.is_zero() {
                return Err(Error::InternalInconsistency(
                    "dependent highest-weight operators".into(),
                ));
            }
            let nr = hs_metric(&r, &r, metric);
            hws.push((r, nr));
        }
        let label = IrrepLabel::new(lambda.iter().map(|&x| x as u32).collect())?;
        let (first, words, op_weights) = lowering_words(rep, &hws[0].0, lambda, metric);
        if first.len() != label.dim() {
            return Err(Error::InternalInconsistency(format!(
                "sector {label}: generated {} operators, expected {}",
                first.len(),
                label.dim()
            )));
        }
        let mut copies = vec![first];
        for (hw, _) in &hws[1..] {
            copies.push(replay(rep, hw, &words));
        }
        let gram = gram_of(&copies[0], &op_weights, metric);
        let gram_inv = block_inverse(&gram, &op_weights)?;
        let copy_scale = hws.iter().map(|(_, nr)| nr / &hws[0].1).collect();
        sectors.push(Sector {
            depth: adjoint_depth(&label)?,
            dim: label.dim(),
            multiplicity: hws.len(),
            label,
            copies,
            gram,
            gram_inv,
            copy_scale,
            words,
            op_weights,
        });
    }
    sectors.sort_by_key(sector_order);
    let dec = Decomposition {
        format_version: SECTOR_FORMAT_VERSION,
        spec: rep.spec.clone(),
        dim: n,
        metric: metric.clone(),
        sectors,
    };
    if dec.total_dimension() != n * n {
        return Err(Error::InternalInconsistency(format!(
            "sectors cover {} of {} operator dimensions",
            dec.total_dimension(),
            n * n
        )));
    }
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{build_irrep_by_highest_weight, su2_irrep, sym_power_rep};
    use crate::scalar::rat;

    fn su3(p: u32, q: u32) -> IrrepLabel {
        IrrepLabel::new(vec![p, q]).unwrap()
    }

    #[test]
    fn su2_sectors() {
        let dec = conjugation_sectors(&su2_irrep(4)).unwrap();
        let labels: Vec<_> = dec.sectors.iter().map(|s| s.label.dynkin()[0]).collect();
        assert_eq!(labels, vec![0, 2, 4, 6, 8]);
        let dims: Vec<_> = dec.sectors.iter().map(|s| s.dim).collect();
        assert_eq!(dims, vec![1, 3, 5, 7, 9]);
        assert!(dec.is_multiplicity_free());
        assert_eq!(dec.depths(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn sym33_sectors() {
        let dec = conjugation_sectors(&sym_power_rep(3, 3).unwrap()).unwrap();
        assert_eq!(dec.labels(), vec![su3(0, 0), su3(1, 1), su3(2, 2), su3(3, 3)]);
        assert_eq!(
            dec.sectors.iter().map(|s| s.dim).collect::<Vec<_>>(),
            vec![1, 8, 27, 64]
        );
        assert_eq!(dec.total_dimension(), 100);
    }

    #[test]
    fn adjoint_rep_has_multiplicity_two() {
        let rep = build_irrep_by_highest_weight(&su3(1, 1)).unwrap();
        let dec = conjugation_sectors(&rep).unwrap();
        assert_eq!(dec.total_dimension(), 64);
        let s = dec.sector(&su3(1, 1)).unwrap();
        assert_eq!(s.multiplicity, 2);
        check_sector_invariants(&rep, &dec);
    }

    fn check_sector_invariants(rep: &Rep, dec: &Decomposition) {
        let metric = &rep.metric;
        for s in &dec.sectors {
            // highest-weight operators are killed by every raising operator
            for c in 0..s.multiplicity {
                for e in &rep.raising {
                    assert!(e.commutator(s.highest_weight_op(c)).is_zero());
                }
                // copy Gram is the scaled shared Gram
                let g = gram_of(&s.copies[c], &s.op_weights, metric);
                assert_eq!(g, s.gram.scale(&s.copy_scale[c]));
            }
            assert_eq!(s.gram.mul(&s.gram_inv).unwrap(), RationalMatrix::identity(s.dim));
            // aligned copies: the generators act by the same matrix on every copy
            for x in rep.raising.iter().chain(&rep.lowering) {
                let act = |c: usize| -> Vec<Vec<Rational>> {
                    s.copies[c]
                        .iter()
                        .map(|f| s.coordinates(c, &x.commutator(f), metric))
                        .collect()
                };
                let first = act(0);
                for c in 1..s.multiplicity {
                    assert_eq!(act(c), first, "copy alignment in {}", s.label);
                }
            }
        }
        // sectors and copies are mutually orthogonal
        let hw: Vec<&SparseOp> = dec
            .sectors
            .iter()
            .flat_map(|s| s.copies.iter().flatten())
            .collect();
        let mut owner = Vec::new();
        for (k, s) in dec.sectors.iter().enumerate() {
            for c in 0..s.multiplicity {
                owner.extend(std::iter::repeat((k, c)).take(s.dim));
            }
        }
        for i in 0..hw.len() {
            for j in i + 1..hw.len() {
                if owner[i] != owner[j] {
                    assert!(hs_metric(hw[i], hw[j], metric).is_zero());
                }
            }
        }
    }

    #[test]
    fn invariants_small_reps() {
        for rep in [su2_irrep(3), sym_power_rep(3, 2).unwrap()] {
            let dec = conjugation_sectors(&rep).unwrap();
            check_sector_invariants(&rep, &dec);
        }
    }

    #[test]
    fn copy_scale_starts_at_one() {
        let dec = conjugation_sectors(&su2_irrep(2)).unwrap();
        for s in &dec.sectors {
            assert_eq!(s.copy_scale, vec![rat(1, 1)]);
        }
    }

    #[test]
    fn json_round_trip() {
        let dec = conjugation_sectors(&su2_irrep(2)).unwrap();
        let s = serde_json::to_string(&dec).unwrap();
        let back: Decomposition = serde_json::from_str(&s).unwrap();
        assert_eq!(back.labels(), dec.labels());
        assert_eq!(back.sectors[1].copies, dec.sectors[1].copies);
        assert_eq!(back.metric, dec.metric);
    }
}
