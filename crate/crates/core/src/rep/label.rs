//! Irrep labels for SU(q), weight multiplicities and tensor products.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap for [`adjoint_depth`].
pub const DEFAULT_DEPTH_CAP: usize = 12;

/// Highest weight of an SU(q) irrep in Dynkin coordinates `(a_1, …, a_{q-1})`.
///
/// For SU(2) the single entry is `2j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IrrepLabel {
    dynkin: Vec<u32>,
}

impl IrrepLabel {
    pub fn new(dynkin: Vec<u32>) -> Result<Self> {
        if dynkin.is_empty() {
            return Err(Error::Parse("irrep label needs rank >= 1".into()));
        }
        Ok(Self { dynkin })
    }

    pub fn su2(two_j: u32) -> Self {
        Self {
            dynkin: vec![two_j],
        }
    }

    pub fn trivial(q: usize) -> Self {
        Self {
            dynkin: vec![0; q - 1],
        }
    }

    /// Adjoint irrep: spin 1 for SU(2), `(1,0,…,0,1)` otherwise.
    pub fn adjoint(q: usize) -> Self {
        let mut d = vec![0; q - 1];
        if q == 2 {
            d[0] = 2;
        } else {
            d[0] = 1;
            d[q - 2] = 1;
        }
        Self { dynkin: d }
    }

    pub fn dynkin(&self) -> &[u32] {
        &self.dynkin
    }

    pub fn rank(&self) -> usize {
        self.dynkin.len()
    }

    pub fn q(&self) -> usize {
        self.dynkin.len() + 1
    }

    pub fn is_trivial(&self) -> bool {
        self.dynkin.iter().all(|&a| a == 0)
    }

    pub fn conjugate(&self) -> Self {
        let mut d = self.dynkin.clone();
        d.reverse();
        Self { dynkin: d }
    }

    /// Weyl dimension formula.
    pub fn dim(&self) -> usize {
        let q = self.q();
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        for i in 0..q {
            for j in i + 1..q {
                let s: u128 = (i..j).map(|k| self.dynkin[k] as u128 + 1).sum();
                num *= s;
                den *= (j - i) as u128;
                let g = gcd(num, den);
                num /= g;
                den /= g;
            }
        }
        debug_assert_eq!(den, 1);
        (num / den) as usize
    }

    /// Partition form `λ_i = Σ_{k≥i} a_k`, length `q` with last entry 0.
    pub fn partition(&self) -> Vec<i64> {
        let q = self.q();
        let mut out = vec![0i64; q];
        for i in (0..q - 1).rev() {
            out[i] = out[i + 1] + self.dynkin[i] as i64;
        }
        out
    }

    fn from_epsilon(v: &[i64]) -> Self {
        Self {
            dynkin: v.windows(2).map(|w| (w[0] - w[1]) as u32).collect(),
        }
    }

    /// `Σ i·a_i mod q`; irreps inside adjoint powers have class 0.
    pub fn congruence_class(&self) -> usize {
        let q = self.q();
        self.dynkin
            .iter()
            .enumerate()
            .map(|(i, &a)| (i + 1) * a as usize)
            .sum::<usize>()
            % q
    }

    /// Spin value for SU(2) (`"3/2"`, `"2"`), Dynkin tuple otherwise.
    pub fn short_name(&self) -> String {
        self.to_string()
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank() == 1 {
            let t = self.dynkin[0];
            if t % 2 == 0 {
                write!(f, "{}", t / 2)
            } else {
                write!(f, "{t}/2")
            }
        } else {
            let parts: Vec<String> = self.dynkin.iter().map(u32::to_string).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

impl fmt::Debug for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses `"su2:4"` (twice the spin), `"su3:2,2"`, or a bare tuple `"(2,2)"`.
impl FromStr for IrrepLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad irrep label `{s}`"));
        let parse_list = |t: &str| -> Result<Vec<u32>> {
            t.trim_matches(|c| c == '(' || c == ')')
                .split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|_| bad()))
                .collect()
        };
        if let Some((group, rest)) = s.split_once(':') {
            let q: usize = group
                .trim()
                .strip_prefix("su")
                .and_then(|x| x.parse().ok())
                .ok_or_else(bad)?;
            let d = parse_list(rest)?;
            if q < 2 || d.len() != q - 1 {
                return Err(bad());
            }
            Self::new(d)
        } else {
            Self::new(parse_list(s)?)
        }
    }
}

/// Weights of an irrep in the ε basis (content vectors of semistandard
/// tableaux) with multiplicities, enumerated through Gelfand–Tsetlin patterns.
pub fn weight_multiplicities(label: &IrrepLabel) -> BTreeMap<Vec<i64>, u64> {
    let top = label.partition();
    let q = top.len();
    let mut out = BTreeMap::new();
    // rows[k] has length q-k; content of letter (q-k) is |rows[k]| - |rows[k+1]|.
    fn recurse(row: &[i64], contents: &mut Vec<i64>, out: &mut BTreeMap<Vec<i64>, u64>) {
        let total: i64 = row.iter().sum();
        if row.len() == 1 {
            contents.push(total);
            let mut w = contents.clone();
            w.reverse();
            *out.entry(w).or_insert(0) += 1;
            contents.pop();
            return;
        }
        let n = row.len() - 1;
        let mut next = vec![0i64; n];
        fn fill(
            row: &[i64],
            next: &mut Vec<i64>,
            i: usize,
            total: i64,
            contents: &mut Vec<i64>,
            out: &mut BTreeMap<Vec<i64>, u64>,
        ) {
            if i == next.len() {
                let sub: i64 = next.iter().sum();
                contents.push(total - sub);
                recurse(next, contents, out);
                contents.pop();
                return;
            }
            for v in row[i + 1]..=row[i] {
                next[i] = v;
                fill(row, next, i + 1, total, contents, out);
            }
        }
        fill(row, &mut next, 0, total, contents, out);
    }
    let mut contents = Vec::with_capacity(q);
    recurse(&top, &mut contents, &mut out);
    out
}

/// Dynkin weight from an ε-basis weight.
pub fn epsilon_to_dynkin(w: &[i64]) -> Vec<i64> {
    w.windows(2).map(|p| p[0] - p[1]).collect()
}

/// Decompose `a ⊗ b` by the Brauer–Klimyk rule.
pub fn tensor_decompose(a: &IrrepLabel, b: &IrrepLabel) -> Result<BTreeMap<IrrepLabel, u64>> {
    if a.rank() != b.rank() {
        return Err(Error::GroupMismatch(a.to_string(), b.to_string()));
    }
    // iterate over the weights of the smaller factor
    let (big, small) = if a.dim() >= b.dim() { (a, b) } else { (b, a) };
    let q = big.q();
    let lam = big.partition();
    let rho: Vec<i64> = (0..q as i64).rev().collect();
    let mut acc: BTreeMap<IrrepLabel, i64> = BTreeMap::new();
    for (nu, mult) in weight_multiplicities(small) {
        let mut v: Vec<i64> = (0..q).map(|i| lam[i] + nu[i] + rho[i]).collect();
        // sort descending, tracking permutation parity
        let mut sign = 1i64;
        for i in 0..q {
            for j in 0..q - 1 - i {
                if v[j] < v[j + 1] {
                    v.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if v.windows(2).any(|p| p[0] == p[1]) {
            continue;
        }
        let w: Vec<i64> = (0..q).map(|i| v[i] - rho[i]).collect();
        *acc.entry(IrrepLabel::from_epsilon(&w)).or_insert(0) += sign * mult as i64;
    }
    let mut out = BTreeMap::new();
    for (l, m) in acc {
        if m < 0 {
            return Err(Error::InternalInconsistency(format!(
                "negative multiplicity {m} for {l} in {a} x {b}"
            )));
        }
        if m > 0 {
            out.insert(l, m as u64);
        }
    }
    Ok(out)
}

/// Smallest `t` with `xi` inside `Ad^{⊗t}`.
pub fn adjoint_depth(xi: &IrrepLabel) -> Result<usize> {
    adjoint_depth_with_cap(xi, DEFAULT_DEPTH_CAP)
}

pub fn adjoint_depth_with_cap(xi: &IrrepLabel, cap: usize) -> Result<usize> {
    let exceeded = || Error::DepthBoundExceeded {
        label: xi.to_string(),
        cap,
    };
    if xi.is_trivial() {
        return Ok(0);
    }
    if xi.congruence_class() != 0 {
        return Err(exceeded());
    }
    let q = xi.q();
    let ad = IrrepLabel::adjoint(q);
    let mut level: BTreeSet<IrrepLabel> = BTreeSet::from([IrrepLabel::trivial(q)]);
    for t in 1..=cap {
        let mut next = BTreeSet::new();
        for l in &level {
            next.extend(tensor_decompose(l, &ad)?.into_keys());
        }
        if next.contains(xi) {
            return Ok(t);
        }
        level = next;
    }
    Err(exceeded())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn su3(p: u32, q: u32) -> IrrepLabel {
        IrrepLabel::new(vec![p, q]).unwrap()
    }

    /// Decompose a weight multiset by repeatedly removing the irrep of the
    /// highest remaining weight.
    fn peel(mut weights: BTreeMap<Vec<i64>, i64>, q: usize) -> BTreeMap<IrrepLabel, u64> {
        let mut out = BTreeMap::new();
        loop {
            weights.retain(|_, m| *m != 0);
            let Some(top) = weights
                .keys()
                .max_by_key(|w| {
                    // height functional <w, rho>
                    w.iter()
                        .enumerate()
                        .map(|(i, x)| x * (q - i) as i64)
                        .sum::<i64>()
                })
                .cloned()
            else {
                break;
            };
            let label = IrrepLabel::from_epsilon(&top);
            let shift = top[q - 1];
            for (w, m) in weight_multiplicities(&label) {
                let w: Vec<i64> = w.iter().map(|x| x + shift).collect();
                *weights.entry(w).or_insert(0) -= m as i64;
            }
            *out.entry(label).or_insert(0) += 1;
        }
        out
    }

    fn brute_force(a: &IrrepLabel, b: &IrrepLabel) -> BTreeMap<IrrepLabel, u64> {
        let q = a.q();
        let mut w = BTreeMap::new();
        for (x, mx) in weight_multiplicities(a) {
            for (y, my) in weight_multiplicities(b) {
                let s: Vec<i64> = x.iter().zip(&y).map(|(u, v)| u + v).collect();
                *w.entry(s).or_insert(0) += (mx * my) as i64;
            }
        }
        peel(w, q)
    }

    #[test]
    fn weyl_dimensions() {
        assert_eq!(su3(1, 1).dim(), 8);
        assert_eq!(su3(2, 2).dim(), 27);
        assert_eq!(su3(3, 3).dim(), 64);
        assert_eq!(su3(6, 0).dim(), 28);
        for p in 0..6u32 {
            for q in 0..6u32 {
                let expect = ((p + 1) * (q + 1) * (p + q + 2) / 2) as usize;
                assert_eq!(su3(p, q).dim(), expect);
            }
        }
        assert_eq!(IrrepLabel::su2(7).dim(), 8);
        assert_eq!(IrrepLabel::new(vec![1, 0, 0]).unwrap().dim(), 4);
        assert_eq!(IrrepLabel::new(vec![1, 0, 1]).unwrap().dim(), 15);
    }

    #[test]
    fn weight_counts_match_dim() {
        for l in [su3(2, 2), su3(3, 1), IrrepLabel::su2(5), IrrepLabel::new(vec![1, 1, 0]).unwrap()] {
            let total: u64 = weight_multiplicities(&l).values().sum();
            assert_eq!(total as usize, l.dim());
        }
        // zero weight of (2,2) has multiplicity 3
        let w = weight_multiplicities(&su3(2, 2));
        assert_eq!(w[&vec![2, 2, 2]], 3);
    }

    #[test]
    fn tensor_examples() {
        let t = tensor_decompose(&su3(1, 0), &su3(0, 1)).unwrap();
        assert_eq!(t, BTreeMap::from([(su3(0, 0), 1), (su3(1, 1), 1)]));
        let t = tensor_decompose(&su3(1, 1), &su3(1, 1)).unwrap();
        let expect = BTreeMap::from([
            (su3(0, 0), 1),
            (su3(1, 1), 2),
            (su3(3, 0), 1),
            (su3(0, 3), 1),
            (su3(2, 2), 1),
        ]);
        assert_eq!(t, expect);
        let t = tensor_decompose(&IrrepLabel::su2(1), &IrrepLabel::su2(1)).unwrap();
        assert_eq!(t, BTreeMap::from([(IrrepLabel::su2(0), 1), (IrrepLabel::su2(2), 1)]));
    }

    #[test]
    fn tensor_matches_brute_force() {
        let labels = [su3(1, 0), su3(0, 1), su3(1, 1), su3(2, 0), su3(2, 2), su3(3, 1)];
        for a in &labels {
            for b in &labels {
                let t = tensor_decompose(a, b).unwrap();
                assert_eq!(t, brute_force(a, b), "{a} x {b}");
                let dim: u64 = t.iter().map(|(l, m)| l.dim() as u64 * m).sum();
                assert_eq!(dim as usize, a.dim() * b.dim());
            }
        }
        for a in 0..6 {
            for b in 0..6 {
                let (x, y) = (IrrepLabel::su2(a), IrrepLabel::su2(b));
                assert_eq!(tensor_decompose(&x, &y).unwrap(), brute_force(&x, &y));
            }
        }
    }

    #[test]
    fn rank_mismatch() {
        assert!(matches!(
            tensor_decompose(&su3(1, 0), &IrrepLabel::su2(1)),
            Err(Error::GroupMismatch(..))
        ));
    }

    #[test]
    fn depths() {
        for k in 0..6 {
            assert_eq!(adjoint_depth(&IrrepLabel::su2(2 * k)).unwrap(), k as usize);
        }
        assert_eq!(adjoint_depth(&su3(0, 0)).unwrap(), 0);
        assert_eq!(adjoint_depth(&su3(1, 1)).unwrap(), 1);
        assert_eq!(adjoint_depth(&su3(2, 2)).unwrap(), 2);
        assert_eq!(adjoint_depth(&su3(3, 0)).unwrap(), 2);
        assert_eq!(adjoint_depth(&su3(3, 3)).unwrap(), 3);
        assert_eq!(adjoint_depth(&su3(4, 1)).unwrap(), 3);
        assert_eq!(adjoint_depth(&su3(4, 4)).unwrap(), 4);
        assert_eq!(adjoint_depth(&su3(6, 0)).unwrap(), 4);
        assert_eq!(adjoint_depth(&su3(5, 2)).unwrap(), 4);
        assert!(matches!(
            adjoint_depth(&su3(1, 0)),
            Err(Error::DepthBoundExceeded { .. })
        ));
        assert!(adjoint_depth_with_cap(&su3(4, 4), 3).is_err());
    }

    #[test]
    fn su2_depth_brute_force() {
        // spin-k appears in spin-1^{⊗t} iff t >= k (small t)
        let one = IrrepLabel::su2(2);
        let mut level = BTreeMap::from([(IrrepLabel::su2(0), 1u64)]);
        for t in 1..=5u32 {
            let mut next = BTreeMap::new();
            for (l, m) in &level {
                for (l2, m2) in brute_force(l, &one) {
                    *next.entry(l2).or_insert(0) += m * m2;
                }
            }
            let max = next.keys().map(|l: &IrrepLabel| l.dynkin()[0]).max().unwrap();
            assert_eq!(max, 2 * t);
            level = next;
        }
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(IrrepLabel::su2(3).to_string(), "3/2");
        assert_eq!(IrrepLabel::su2(4).to_string(), "2");
        assert_eq!(su3(2, 2).to_string(), "(2,2)");
        assert_eq!("su3:2,2".parse::<IrrepLabel>().unwrap(), su3(2, 2));
        assert_eq!("su2:7".parse::<IrrepLabel>().unwrap(), IrrepLabel::su2(7));
        assert_eq!("(1,1)".parse::<IrrepLabel>().unwrap(), su3(1, 1));
        assert!("su3:1".parse::<IrrepLabel>().is_err());
    }
}
