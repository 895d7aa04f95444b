//! Intrinsic MacWilliams transforms: scalar matrices for multiplicity-free
//! decompositions, block matrices in general, and the SU(2) 6j closed form.
//!
//! Index convention: `B = M A`, so rows are indexed by the twirl sector and
//! columns by the projector sector. Equivalently `M[ρ][ξ]` is the scalar by
//! which the twirl of sector `ρ` acts on sector `ξ`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;
use crate::rep::{hs_metric, Decomposition, IrrepLabel, Sector, SparseOp, SECTOR_FORMAT_VERSION};
use crate::scalar::rational::serde_rational_vec;
use crate::scalar::Rational;

/// Where a matrix came from; stored alongside serialized output so that
/// matrices built under different basis conventions are never mixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub rep: String,
    pub basis_convention_version: u32,
}

impl Provenance {
    fn of(dec: &Decomposition) -> Self {
        Self {
            rep: dec.spec.key(),
            basis_convention_version: SECTOR_FORMAT_VERSION,
        }
    }

    fn closed_form(two_j: u32) -> Self {
        Self {
            rep: format!("su2-2j{two_j}"),
            basis_convention_version: SECTOR_FORMAT_VERSION,
        }
    }
}

/// Scalar transform for a multiplicity-free decomposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MacWilliamsMatrix {
    pub labels: Vec<IrrepLabel>,
    pub dims: Vec<usize>,
    pub depths: Vec<usize>,
    pub m: RationalMatrix,
    pub provenance: Provenance,
}

impl MacWilliamsMatrix {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Representation dimension `N`, recovered from `Σ d_ξ = N²`.
    pub fn rep_dim(&self) -> usize {
        let total: usize = self.dims.iter().sum();
        (total as f64).sqrt().round() as usize
    }

    pub fn dim_matrix(&self) -> RationalMatrix {
        RationalMatrix::diagonal(
            &self
                .dims
                .iter()
                .map(|&d| Rational::from_integer(BigInt::from(d)))
                .collect::<Vec<_>>(),
        )
    }

    pub fn apply(&self, a: &[Rational]) -> Result<Vec<Rational>> {
        self.m.mul_vec(a)
    }
}

fn int(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `⟨F_c A, B F_d⟩ = Tr(A† F_c† B F_d)` summed against `G⁻¹_cd` over one
/// sector copy pair, restricted to the weight blocks where `G⁻¹` lives.
fn twirl_pairing(
    s: &Sector,
    left_copy: usize,
    right_copy: usize,
    a: &SparseOp,
    b: &SparseOp,
    metric: &[Rational],
) -> Rational {
    let left: Vec<SparseOp> = s.copies[left_copy].iter().map(|f| f.mul(a)).collect();
    let right: Vec<SparseOp> = s.copies[right_copy].iter().map(|f| b.mul(f)).collect();
    let mut acc = Rational::zero();
    for blk in s.weight_blocks() {
        for &c in &blk {
            if left[c].is_zero() {
                continue;
            }
            for &d in &blk {
                let g = &s.gram_inv[(c, d)];
                if g.is_zero() || right[d].is_zero() {
                    continue;
                }
                acc += hs_metric(&left[c], &right[d], metric) * g;
            }
        }
    }
    acc
}

/// Scalar transform from the defining trace formula
/// `M[ξ][ρ] = (1/d_ρ) Σ_{E∈ρ, F∈ξ} Tr(E† F† E F)`, with Gram-inverse weights
/// in place of orthonormal bases.
pub fn macwilliams_from_sectors(dec: &Decomposition) -> Result<MacWilliamsMatrix> {
    if let Some(s) = dec.sectors.iter().find(|s| s.multiplicity > 1) {
        return Err(Error::MultiplicityPresent(s.label.to_string()));
    }
    let n = dec.sectors.len();
    let metric = &dec.metric;
    let entries: Vec<(usize, usize, Rational)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|xi| (0..n).map(move |rho| (xi, rho)))
        .map(|(xi, rho)| {
            let (sx, sr) = (&dec.sectors[xi], &dec.sectors[rho]);
            let mut acc = Rational::zero();
            // Σ_ab G_ρ⁻¹_ab ⟨F_c E_a, E_b F_d⟩ weighted by G_ξ⁻¹_cd
            for blk in sr.weight_blocks() {
                for &a in &blk {
                    for &b in &blk {
                        let g = &sr.gram_inv[(a, b)];
                        if g.is_zero() {
                            continue;
                        }
                        let v = twirl_pairing(sx, 0, 0, &sr.copies[0][a], &sr.copies[0][b], metric);
                        acc += v * g;
                    }
                }
            }
            (xi, rho, acc / int(sr.dim))
        })
        .collect();
    let mut m = RationalMatrix::zeros(n, n);
    for (i, j, v) in entries {
        m[(i, j)] = v;
    }
    Ok(MacWilliamsMatrix {
        labels: dec.labels(),
        dims: dec.sectors.iter().map(|s| s.dim).collect(),
        depths: dec.depths(),
        m,
        provenance: Provenance::of(dec),
    })
}

/// Scalar by which the Gram-weighted twirl of sector `twirl` acts on every
/// basis operator of sector `target`. Errors if the action is not scalar.
pub fn twirl_scalar_action(dec: &Decomposition, twirl: usize, target: usize) -> Result<Rational> {
    let metric = &dec.metric;
    let tw = &dec.sectors[twirl];
    let adj: Vec<SparseOp> = tw.copies[0].iter().map(|f| f.adjoint(metric)).collect();
    let mut scalar: Option<Rational> = None;
    for copy in &dec.sectors[target].copies {
        for y in copy {
            let mut image = SparseOp::zero(dec.dim);
            for blk in tw.weight_blocks() {
                for &c in &blk {
                    let left = adj[c].mul(y);
                    if left.is_zero() {
                        continue;
                    }
                    for &d in &blk {
                        let g = &tw.gram_inv[(c, d)];
                        if g.is_zero() {
                            continue;
                        }
                        image = image.add(&left.mul(&tw.copies[0][d]).scale(g));
                    }
                }
            }
            // image must equal c·y
            let c = hs_metric(y, &image, metric) / hs_metric(y, y, metric);
            if image != y.scale(&c) {
                return Err(Error::InternalInconsistency(format!(
                    "twirl of {} does not act as a scalar on {}",
                    tw.label, dec.sectors[target].label
                )));
            }
            match &scalar {
                None => scalar = Some(c),
                Some(s) if *s != c => {
                    return Err(Error::InternalInconsistency(format!(
                        "twirl of {} acts by different scalars on {}",
                        tw.label, dec.sectors[target].label
                    )))
                }
                _ => {}
            }
        }
    }
    Ok(scalar.expect("sectors are nonempty"))
}

/// `M D Mᵀ = D`, exactly.
pub fn verify_weighted_orthogonality(m: &MacWilliamsMatrix) -> bool {
    let d = m.dim_matrix();
    m.m.mul(&d)
        .and_then(|x| x.mul(&m.m.transpose()))
        .map(|x| x == d)
        .unwrap_or(false)
}

/// Every entry of row 0 equals `1/N`.
pub fn verify_first_row(m: &MacWilliamsMatrix) -> bool {
    let inv = Rational::new(BigInt::one(), BigInt::from(m.rep_dim()));
    m.m.row(0).iter().all(|v| *v == inv)
}

// 6j symbols

fn factorial(n: i64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `Δ(j j k)²` for `two_j = 2j` and integer `k`.
fn triangle_sq(two_j: i64, k: i64) -> Rational {
    Rational::new(
        factorial(two_j - k) * factorial(k) * factorial(k),
        factorial(two_j + k + 1),
    )
}

/// `{j j k₁; j j k₂}` by the Racah single sum. For this argument pattern the
/// four triangle coefficients pair into `Δ(jjk₁)²Δ(jjk₂)²`, so the value is
/// rational.
pub fn su2_sixj_symmetric(two_j: u32, k1: u32, k2: u32) -> Result<Rational> {
    if k1 > two_j || k2 > two_j {
        return Err(Error::TriangleViolation(format!(
            "{{j j {k1}; j j {k2}}} with 2j = {two_j}"
        )));
    }
    let (tj, a, b) = (two_j as i64, k1 as i64, k2 as i64);
    let pref = triangle_sq(tj, a) * triangle_sq(tj, b);
    let lo = (tj + a).max(tj + b);
    let hi = (2 * tj).min(tj + a + b);
    let mut sum = Rational::zero();
    for t in lo..=hi {
        let num = factorial(t + 1);
        let den = factorial(t - tj - a).pow(2)
            * factorial(t - tj - b).pow(2)
            * factorial(2 * tj - t)
            * factorial(tj + a + b - t).pow(2);
        let term = Rational::new(num, den);
        if t % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(pref * sum)
}

fn parity_sign(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Closed form `M[k₁][k₂] = (−1)^{2j+k₁+k₂} (2k₁+1) {j j k₁; j j k₂}`.
pub fn su2_macwilliams_closed(two_j: u32) -> Result<MacWilliamsMatrix> {
    let n = two_j as usize + 1;
    let mut m = RationalMatrix::zeros(n, n);
    for k1 in 0..=two_j {
        for k2 in 0..=two_j {
            let v = su2_sixj_symmetric(two_j, k1, k2)?
                * parity_sign((two_j + k1 + k2) as i64)
                * int(2 * k1 as usize + 1);
            m[(k1 as usize, k2 as usize)] = v;
        }
    }
    Ok(MacWilliamsMatrix {
        labels: (0..=two_j).map(|k| IrrepLabel::su2(2 * k)).collect(),
        dims: (0..=two_j as usize).map(|k| 2 * k + 1).collect(),
        depths: (0..=two_j as usize).collect(),
        m,
        provenance: Provenance::closed_form(two_j),
    })
}

/// Scalar `c[k₁][k₂] = (2k₂+1)(−1)^{2j+k₁+k₂}{j j k₁; j j k₂}` by which the
/// twirl of sector `k₂` acts on sector `k₁`.
pub fn su2_twirl_scalar(two_j: u32, k1: u32, k2: u32) -> Result<Rational> {
    Ok(su2_sixj_symmetric(two_j, k1, k2)?
        * parity_sign((two_j + k1 + k2) as i64)
        * int(2 * k2 as usize + 1))
}

// Block transform

/// One coordinate `(sector, α, β)` of a vectorized block enumerator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockIndex {
    pub sector: usize,
    pub alpha: usize,
    pub beta: usize,
}

/// Block transform with `vec(B) = M vec(A)` for block enumerators reported in
/// the rational multiplicity basis of [`crate::enumerators`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockMacWilliams {
    pub labels: Vec<IrrepLabel>,
    pub dims: Vec<usize>,
    pub depths: Vec<usize>,
    pub multiplicities: Vec<usize>,
    /// Per sector, the squared-norm ratios of the copies.
    pub copy_scales: Vec<ScaleList>,
    pub index: Vec<BlockIndex>,
    pub m: RationalMatrix,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScaleList(#[serde(with = "serde_rational_vec")] pub Vec<Rational>);

pub fn block_index(multiplicities: &[usize]) -> Vec<BlockIndex> {
    let mut out = Vec::new();
    for (sector, &m) in multiplicities.iter().enumerate() {
        for alpha in 0..m {
            for beta in 0..m {
                out.push(BlockIndex { sector, alpha, beta });
            }
        }
    }
    out
}

impl BlockMacWilliams {
    pub fn position(&self, sector: usize, alpha: usize, beta: usize) -> usize {
        self.index
            .iter()
            .position(|i| i.sector == sector && i.alpha == alpha && i.beta == beta)
            .expect("index in range")
    }

    /// Flatten per-sector blocks in [`BlockMacWilliams::index`] order.
    pub fn vectorize(&self, blocks: &[RationalMatrix]) -> Vec<Rational> {
        self.index
            .iter()
            .map(|i| blocks[i.sector][(i.alpha, i.beta)].clone())
            .collect()
    }

    pub fn unvectorize(&self, v: &[Rational]) -> Vec<RationalMatrix> {
        let mut out: Vec<RationalMatrix> = self
            .multiplicities
            .iter()
            .map(|&m| RationalMatrix::zeros(m, m))
            .collect();
        for (i, x) in self.index.iter().zip(v) {
            out[i.sector][(i.alpha, i.beta)] = x.clone();
        }
        out
    }

    /// Block weighted orthogonality `M D' Mᵀ = D'` with
    /// `D' = diag(d_ξ · s_α · s_β)`, the form taken by `U Uᵀ = 1` in the
    /// rational multiplicity basis.
    pub fn verify_weighted_orthogonality(&self) -> bool {
        let d: Vec<Rational> = self
            .index
            .iter()
            .map(|i| {
                let s = &self.copy_scales[i.sector].0;
                int(self.dims[i.sector]) * &s[i.alpha] * &s[i.beta]
            })
            .collect();
        let dm = RationalMatrix::diagonal(&d);
        self.m
            .mul(&dm)
            .and_then(|x| x.mul(&self.m.transpose()))
            .map(|x| x == dm)
            .unwrap_or(false)
    }

    /// Number of nonzero entries coupling different sectors.
    pub fn cross_sector_nonzeros(&self) -> usize {
        let mut count = 0;
        for (r, ri) in self.index.iter().enumerate() {
            for (c, ci) in self.index.iter().enumerate() {
                if ri.sector != ci.sector && !self.m[(r, c)].is_zero() {
                    count += 1;
                }
            }
        }
        count
    }

    /// The scalar matrix when every multiplicity is one.
    pub fn to_scalar(&self) -> Result<MacWilliamsMatrix> {
        if let Some(i) = self.multiplicities.iter().position(|&m| m > 1) {
            return Err(Error::MultiplicityPresent(self.labels[i].to_string()));
        }
        Ok(MacWilliamsMatrix {
            labels: self.labels.clone(),
            dims: self.dims.clone(),
            depths: self.depths.clone(),
            m: self.m.clone(),
            provenance: self.provenance.clone(),
        })
    }
}

/// Block transform via Schur's lemma: the twirl `T_{ρμν}` maps copy `α` of
/// `ξ` into sector `ξ`, so it is determined by its value on the
/// highest-weight operators,
/// `T_{ρμν}(hw^α_ξ) = Σ_β C[β][α] hw^β_ξ`, and
/// `M[(ρ,μ,ν),(ξ,α,β)] = C[β][α] / s^ξ_α`.
pub fn block_macwilliams(dec: &Decomposition) -> Result<BlockMacWilliams> {
    let metric = &dec.metric;
    let mult: Vec<usize> = dec.sectors.iter().map(|s| s.multiplicity).collect();
    let index = block_index(&mult);
    let pos: BTreeMap<(usize, usize, usize), usize> = index
        .iter()
        .enumerate()
        .map(|(p, i)| ((i.sector, i.alpha, i.beta), p))
        .collect();
    let ns = dec.sectors.len();
    let pairs: Vec<(usize, usize)> = (0..ns).flat_map(|r| (0..ns).map(move |x| (r, x))).collect();
    let entries: Vec<Vec<(usize, usize, Rational)>> = pairs
        .par_iter()
        .map(|&(rho, xi)| {
            let sr = &dec.sectors[rho];
            let sx = &dec.sectors[xi];
            let mut out = Vec::new();
            for beta in 0..sx.multiplicity {
                let hb = sx.highest_weight_op(beta);
                let nb = hs_metric(hb, hb, metric);
                for alpha in 0..sx.multiplicity {
                    let ha = sx.highest_weight_op(alpha);
                    for mu in 0..sr.multiplicity {
                        for nu in 0..sr.multiplicity {
                            // ⟨hw^β, T(hw^α)⟩ = Σ G⁻¹_cd ⟨F^μ_c hw^β, hw^α F^ν_d⟩
                            let c = twirl_pairing(sr, mu, nu, hb, ha, metric) / &nb;
                            if c.is_zero() {
                                continue;
                            }
                            let v = c / &sx.copy_scale[alpha];
                            out.push((pos[&(rho, mu, nu)], pos[&(xi, alpha, beta)], v));
                        }
                    }
                }
            }
            out
        })
        .collect();
    let mut m = RationalMatrix::zeros(index.len(), index.len());
    for (r, c, v) in entries.into_iter().flatten() {
        m[(r, c)] = v;
    }
    Ok(BlockMacWilliams {
        labels: dec.labels(),
        dims: dec.sectors.iter().map(|s| s.dim).collect(),
        depths: dec.depths(),
        multiplicities: mult,
        copy_scales: dec
            .sectors
            .iter()
            .map(|s| ScaleList(s.copy_scale.clone()))
            .collect(),
        index,
        m,
        provenance: Provenance::of(dec),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{conjugation_sectors, su2_irrep, sym_power_rep};
    use crate::scalar::rat;

    #[test]
    fn sixj_values() {
        assert_eq!(su2_sixj_symmetric(1, 1, 1).unwrap(), rat(1, 6));
        assert_eq!(su2_sixj_symmetric(4, 4, 4).unwrap(), rat(1, 630));
        for tj in 0..8u32 {
            for k in 0..=tj {
                // {j j 0; j j k} = (-1)^{2j+k} / (2j+1)
                let expect = parity_sign((tj + k) as i64) * rat(1, tj as i64 + 1);
                assert_eq!(su2_sixj_symmetric(tj, 0, k).unwrap(), expect);
                for k2 in 0..=tj {
                    assert_eq!(
                        su2_sixj_symmetric(tj, k, k2).unwrap(),
                        su2_sixj_symmetric(tj, k2, k).unwrap()
                    );
                }
            }
        }
        assert!(matches!(
            su2_sixj_symmetric(2, 3, 0),
            Err(Error::TriangleViolation(_))
        ));
    }

    #[test]
    fn spin_half_closed_form() {
        let m = su2_macwilliams_closed(1).unwrap();
        let expect = RationalMatrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 2)],
            vec![rat(3, 2), rat(-1, 2)],
        ])
        .unwrap();
        assert_eq!(m.m, expect);
    }

    #[test]
    fn closed_form_matches_sectors() {
        for tj in 0..=4 {
            let dec = conjugation_sectors(&su2_irrep(tj)).unwrap();
            let m = macwilliams_from_sectors(&dec).unwrap();
            assert_eq!(m.m, su2_macwilliams_closed(tj).unwrap().m, "2j={tj}");
            assert!(verify_weighted_orthogonality(&m));
            assert!(verify_first_row(&m));
        }
    }

    #[test]
    fn block_collapses_to_scalar() {
        for rep in [su2_irrep(3), sym_power_rep(3, 2).unwrap()] {
            let dec = conjugation_sectors(&rep).unwrap();
            let scalar = macwilliams_from_sectors(&dec).unwrap();
            let block = block_macwilliams(&dec).unwrap();
            assert_eq!(block.to_scalar().unwrap().m, scalar.m);
        }
    }

    #[test]
    fn twirl_action_matches_transpose() {
        let dec = conjugation_sectors(&su2_irrep(3)).unwrap();
        let m = macwilliams_from_sectors(&dec).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let c = twirl_scalar_action(&dec, b, a).unwrap();
                assert_eq!(c, m.m[(b, a)]);
                assert_eq!(c, su2_twirl_scalar(3, a as u32, b as u32).unwrap());
            }
        }
    }

    #[test]
    fn perturbed_matrix_fails_orthogonality() {
        let mut m = su2_macwilliams_closed(4).unwrap();
        assert!(verify_weighted_orthogonality(&m));
        m.m[(2, 3)] += rat(1, 1000);
        assert!(!verify_weighted_orthogonality(&m));
    }

    #[test]
    fn multiplicity_rejected_by_scalar_path() {
        let rep =
            crate::rep::build_irrep_by_highest_weight(&IrrepLabel::new(vec![1, 1]).unwrap()).unwrap();
        let dec = conjugation_sectors(&rep).unwrap();
        assert!(matches!(
            macwilliams_from_sectors(&dec),
            Err(Error::MultiplicityPresent(_))
        ));
    }
}
