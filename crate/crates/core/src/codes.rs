//! Explicit codes: codeword specs, projectors, the Dicke embedding into
//! qudit registers, and a brute-force physical distance check.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerators::CodeProjector;
use crate::error::{Error, Result};
use crate::linalg::RadicalMatrix;
use crate::rep::{multinomial, occupation_basis, Rep, RepSpec};
use crate::scalar::{Radical, Rational};

/// Codewords are given on the orthonormal basis of the ambient irrep, in the
/// same order as its working basis (highest weight first).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub name: String,
    pub ambient: RepSpec,
    pub codewords: Vec<Vec<Radical>>,
}

fn inner(u: &[Radical], v: &[Radical]) -> Result<Radical> {
    let mut acc = Radical::zero();
    for (a, b) in u.iter().zip(v) {
        if !a.is_zero() && !b.is_zero() {
            acc = acc + a.checked_mul(b)?;
        }
    }
    Ok(acc)
}

impl CodeSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        let spec: CodeSpec = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn k(&self) -> usize {
        self.codewords.len()
    }

    /// Checks lengths, pure-radical amplitudes, nonzero norms and exact
    /// mutual orthogonality.
    pub fn validate(&self) -> Result<()> {
        let rep = self.ambient.build()?;
        let n = rep.dim();
        if self.codewords.is_empty() {
            return Err(Error::InvalidCodeSpec(format!("{}: no codewords", self.name)));
        }
        for (i, c) in self.codewords.iter().enumerate() {
            if c.len() != n {
                return Err(Error::InvalidCodeSpec(format!(
                    "{}: codeword {i} has length {} but the ambient dimension is {n}",
                    self.name,
                    c.len()
                )));
            }
            if let Some(a) = c.iter().find(|a| a.terms().count() > 1) {
                return Err(Error::InvalidCodeSpec(format!(
                    "{}: amplitude {a} is not of the form c*sqrt(m)",
                    self.name
                )));
            }
        }
        for i in 0..self.k() {
            let nn = inner(&self.codewords[i], &self.codewords[i])?;
            if nn.is_zero() {
                return Err(Error::InvalidCodeSpec(format!(
                    "{}: codeword {i} is zero",
                    self.name
                )));
            }
            for j in 0..i {
                if !inner(&self.codewords[i], &self.codewords[j])?.is_zero() {
                    return Err(Error::NonOrthogonalCodewords(j, i));
                }
            }
        }
        Ok(())
    }
}

/// `P = Σ |ψ⟩⟨ψ| / ⟨ψ|ψ⟩` on the orthonormal basis.
pub fn isometric_projector(spec: &CodeSpec) -> Result<RadicalMatrix> {
    spec.validate()?;
    let n = spec.codewords[0].len();
    let mut p = RadicalMatrix::zeros(n, n);
    for c in &spec.codewords {
        let norm = inner(c, c)?
            .to_rational()
            .ok_or_else(|| Error::InvalidCodeSpec("irrational codeword norm".into()))?;
        for a in 0..n {
            if c[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if c[b].is_zero() {
                    continue;
                }
                let v = &p[(a, b)] + &c[a].checked_mul(&c[b])?.div_rational(&norm)?;
                p[(a, b)] = v;
            }
        }
    }
    Ok(p)
}

/// The code projector on the working basis of the ambient representation.
pub fn projector_from_spec(spec: &CodeSpec, rep: &Rep) -> Result<CodeProjector<Radical>> {
    if rep.spec != spec.ambient {
        return Err(Error::GroupMismatch(
            spec.ambient.to_string(),
            rep.spec.to_string(),
        ));
    }
    let p = rep.from_isometric(&isometric_projector(spec)?)?;
    CodeProjector::new(p, &rep.metric)
}

fn ket(n: usize, entries: &[(usize, Radical)]) -> Vec<Radical> {
    let mut v = vec![Radical::zero(); n];
    for (i, a) in entries {
        v[*i] = a.clone();
    }
    v
}

fn sqrt_frac(p: i64, q: i64) -> Radical {
    Radical::sqrt_rational(&Rational::new(BigInt::from(p), BigInt::from(q))).expect("small")
}

fn occ_index(q: usize, n: usize, occ: &[usize]) -> usize {
    occupation_basis(q, n)
        .iter()
        .position(|a| a == occ)
        .expect("valid occupation")
}

/// The three worked codes plus two trivial ones.
pub fn builtin_catalog() -> Vec<CodeSpec> {
    let h = sqrt_frac(1, 2);
    let c522 = CodeSpec {
        name: "5-2-2".into(),
        ambient: RepSpec::Su2 { two_j: 4 },
        codewords: vec![
            ket(5, &[(0, h.clone()), (4, h)]),
            ket(5, &[(2, Radical::one())]),
        ],
    };
    let (a, b, c) = (sqrt_frac(15, 64), sqrt_frac(7, 64), sqrt_frac(21, 64));
    let c823 = CodeSpec {
        name: "8-2-3".into(),
        ambient: RepSpec::Su2 { two_j: 7 },
        codewords: vec![
            ket(
                8,
                &[(0, a.clone()), (2, b.clone()), (4, c.clone()), (6, -c.clone())],
            ),
            ket(8, &[(7, a), (5, b), (3, c.clone()), (1, -c)]),
        ],
    };
    let t = sqrt_frac(1, 3);
    let c1022 = CodeSpec {
        name: "10-2-2".into(),
        ambient: RepSpec::Sym { q: 3, n: 3 },
        codewords: vec![
            ket(
                10,
                &[
                    (occ_index(3, 3, &[3, 0, 0]), t.clone()),
                    (occ_index(3, 3, &[0, 3, 0]), t.clone()),
                    (occ_index(3, 3, &[0, 0, 3]), t),
                ],
            ),
            ket(10, &[(occ_index(3, 3, &[1, 1, 1]), Radical::one())]),
        ],
    };
    let full = CodeSpec {
        name: "trivial-full-qubit".into(),
        ambient: RepSpec::Su2 { two_j: 1 },
        codewords: vec![ket(2, &[(0, Radical::one())]), ket(2, &[(1, Radical::one())])],
    };
    let top = CodeSpec {
        name: "trivial-top-spin1".into(),
        ambient: RepSpec::Su2 { two_j: 2 },
        codewords: vec![ket(3, &[(0, Radical::one())])],
    };
    vec![c522, c823, c1022, full, top]
}

pub fn catalog_code(name: &str) -> Result<CodeSpec> {
    builtin_catalog()
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::InvalidCodeSpec(format!("no catalog code named {name}")))
}

/// `(q, n)` of the qudit register an ambient space symmetrizes into. Spin
/// `j` is read as `Sym^{2j}(C²)`.
pub fn register_of(ambient: &RepSpec) -> Result<(usize, usize)> {
    match ambient {
        RepSpec::Su2 { two_j } => Ok((2, *two_j as usize)),
        RepSpec::Sym { q, n } => Ok((*q, *n)),
        RepSpec::HighestWeight { label } => Err(Error::InvalidCodeSpec(format!(
            "{label} has no symmetric-power register"
        ))),
    }
}

/// Image of an orthonormal-basis vector of `Sym^n(C^q)` under the isometric
/// symmetrization into `(C^q)^{⊗n}`: `|a⟩ ↦ multinomial(a)^{-1/2} Σ |s⟩`
/// over strings `s` with occupation `a`. Site 0 is the most significant
/// digit.
pub fn dicke_embed(q: usize, n: usize, v: &[Radical]) -> Result<Vec<Radical>> {
    let basis = occupation_basis(q, n);
    if v.len() != basis.len() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for Sym^{n}(C^{q}) of dimension {}",
            v.len(),
            basis.len()
        )));
    }
    let total = q.checked_pow(n as u32).ok_or(Error::TooLarge("register".into()))?;
    let index: std::collections::BTreeMap<&Vec<usize>, usize> =
        basis.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let scales: Vec<Radical> = basis
        .iter()
        .map(|a| Radical::sqrt_rational(&Rational::new(BigInt::one(), multinomial(a))))
        .collect::<Result<_>>()?;
    let mut out = vec![Radical::zero(); total];
    let mut occ = vec![0usize; q];
    for (s, slot) in out.iter_mut().enumerate() {
        occ.iter_mut().for_each(|x| *x = 0);
        let mut x = s;
        for _ in 0..n {
            occ[x % q] += 1;
            x /= q;
        }
        let i = index[&occ];
        if !v[i].is_zero() {
            *slot = v[i].checked_mul(&scales[i])?;
        }
    }
    Ok(out)
}

/// Result of [`physical_distance_bruteforce`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub distance: usize,
    /// Largest deviation from the error-detection conditions among the
    /// supports that passed.
    pub margin: f64,
    /// Smallest deviation among errors at the failing weight, if any.
    pub failure: Option<f64>,
}

pub const BRUTE_FORCE_TOL: f64 = 1e-9;
const MAX_REGISTER: usize = 729;

/// Local operator basis: identity, `|a⟩⟨b|` for `a ≠ b`, and
/// `|0⟩⟨0| − |i⟩⟨i|`. Entries are `(row, col, value)`.
fn local_basis(q: usize) -> Vec<Vec<(usize, usize, f64)>> {
    let mut out = vec![(0..q).map(|i| (i, i, 1.0)).collect::<Vec<_>>()];
    for a in 0..q {
        for b in 0..q {
            if a != b {
                out.push(vec![(a, b, 1.0)]);
            }
        }
    }
    for i in 1..q {
        out.push(vec![(0, 0, 1.0), (i, i, -1.0)]);
    }
    out
}

fn apply_local(
    q: usize,
    n: usize,
    site: usize,
    op: &[(usize, usize, f64)],
    psi: &[f64],
) -> Vec<f64> {
    let stride = q.pow((n - 1 - site) as u32);
    let mut out = vec![0.0; psi.len()];
    for (s, &amp) in psi.iter().enumerate() {
        if amp == 0.0 {
            continue;
        }
        let d = s / stride % q;
        for &(r, c, v) in op {
            if c == d {
                out[s - d * stride + r * stride] += v * amp;
            }
        }
    }
    out
}

fn subsets(n: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, t, &mut Vec::new(), &mut out);
    out
}

/// Worst deviation of `⟨ψ_i|E|ψ_j⟩ = c δ_ij` over all errors whose
/// non-identity factors sit exactly on `support`.
fn support_violation(q: usize, n: usize, code: &[Vec<f64>], support: &[usize]) -> f64 {
    let basis = local_basis(q);
    let nontrivial = basis.len() - 1;
    let mut worst: f64 = 0.0;
    let mut choice = vec![0usize; support.len()];
    loop {
        let images: Vec<Vec<f64>> = code
            .iter()
            .map(|psi| {
                let mut v = psi.clone();
                for (k, &site) in support.iter().enumerate() {
                    v = apply_local(q, n, site, &basis[1 + choice[k]], &v);
                }
                v
            })
            .collect();
        let g = |i: usize, j: usize| -> f64 {
            code[i].iter().zip(&images[j]).map(|(a, b)| a * b).sum()
        };
        let g00 = g(0, 0);
        for i in 0..code.len() {
            for j in 0..code.len() {
                let dev = if i == j { (g(i, i) - g00).abs() } else { g(i, j).abs() };
                worst = worst.max(dev);
            }
        }
        // next tuple
        let mut k = 0;
        while k < choice.len() {
            choice[k] += 1;
            if choice[k] < nontrivial {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == choice.len() {
            return worst;
        }
    }
}

/// Largest `d ≤ t_max + 1` such that the error-detection conditions hold,
/// within [`BRUTE_FORCE_TOL`], for every error on fewer than `d` sites.
/// `code` holds orthonormal states on `(C^q)^{⊗n}`.
pub fn physical_distance_bruteforce(
    q: usize,
    n: usize,
    code: &[Vec<f64>],
    t_max: usize,
) -> Result<DistanceReport> {
    let total = q.checked_pow(n as u32).unwrap_or(usize::MAX);
    if total > MAX_REGISTER {
        return Err(Error::TooLarge(format!("{n} qudits of dimension {q}")));
    }
    if code.iter().any(|c| c.len() != total) {
        return Err(Error::DimensionMismatch("code state length".into()));
    }
    let mut margin: f64 = 0.0;
    for t in 1..=t_max.min(n) {
        let worst = subsets(n, t)
            .par_iter()
            .map(|s| support_violation(q, n, code, s))
            .reduce(|| 0.0, f64::max);
        if worst > BRUTE_FORCE_TOL {
            return Ok(DistanceReport {
                distance: t,
                margin,
                failure: Some(worst),
            });
        }
        margin = margin.max(worst);
    }
    Ok(DistanceReport {
        distance: t_max.min(n) + 1,
        margin,
        failure: None,
    })
}

/// Normalized physical codewords of a catalog-style spec, as floats.
pub fn embedded_code(spec: &CodeSpec) -> Result<(usize, usize, Vec<Vec<f64>>)> {
    let (q, n) = register_of(&spec.ambient)?;
    let mut out = Vec::new();
    for c in &spec.codewords {
        let norm = inner(c, c)?.to_f64().sqrt();
        let v = dicke_embed(q, n, c)?;
        out.push(v.iter().map(|a| a.to_f64() / norm).collect());
    }
    Ok((q, n, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn projector_522_isometric() {
        let p = isometric_projector(&catalog_code("5-2-2").unwrap()).unwrap();
        let half = Radical::from(rat(1, 2));
        assert_eq!(p[(0, 0)], half);
        assert_eq!(p[(0, 4)], half);
        assert_eq!(p[(4, 0)], half);
        assert_eq!(p[(4, 4)], half);
        assert_eq!(p[(2, 2)], Radical::one());
        assert_eq!(p[(1, 1)], Radical::zero());
    }

    #[test]
    fn single_codeword_is_matrix_unit() {
        let spec = catalog_code("trivial-top-spin1").unwrap();
        let rep = spec.ambient.build().unwrap();
        let p = projector_from_spec(&spec, &rep).unwrap();
        assert_eq!(p.k, 1);
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == 0 && j == 0 { Radical::one() } else { Radical::zero() };
                assert_eq!(p.matrix[(i, j)], e);
            }
        }
    }

    #[test]
    fn projector_823_rank_two() {
        let spec = catalog_code("8-2-3").unwrap();
        let rep = spec.ambient.build().unwrap();
        let p = projector_from_spec(&spec, &rep).unwrap();
        assert_eq!(p.k, 2);
        // codewords are unit vectors
        for c in &spec.codewords {
            assert_eq!(inner(c, c).unwrap(), Radical::one());
        }
    }

    #[test]
    fn rejects_bad_specs() {
        let mut spec = catalog_code("5-2-2").unwrap();
        spec.codewords[1] = ket(5, &[(0, Radical::one())]);
        assert!(matches!(spec.validate(), Err(Error::NonOrthogonalCodewords(0, 1))));
        let mut spec = catalog_code("5-2-2").unwrap();
        spec.codewords[1][2] = Radical::from(1) + sqrt_frac(2, 1);
        assert!(matches!(spec.validate(), Err(Error::InvalidCodeSpec(_))));
        let mut spec = catalog_code("5-2-2").unwrap();
        spec.codewords[1].pop();
        assert!(matches!(spec.validate(), Err(Error::InvalidCodeSpec(_))));
    }

    #[test]
    fn json_round_trip() {
        for spec in builtin_catalog() {
            let back = CodeSpec::from_json(&spec.to_json().unwrap()).unwrap();
            assert_eq!(back, spec);
        }
    }

    #[test]
    fn dicke_examples() {
        let v = ket(10, &[(occ_index(3, 3, &[1, 1, 1]), Radical::one())]);
        let e = dicke_embed(3, 3, &v).unwrap();
        let s6 = sqrt_frac(1, 6);
        for (s, a) in e.iter().enumerate() {
            let digits = [s / 9, s / 3 % 3, s % 3];
            let perm = {
                let mut d = digits;
                d.sort();
                d == [0, 1, 2]
            };
            assert_eq!(*a, if perm { s6.clone() } else { Radical::zero() });
        }
        let top = dicke_embed(3, 3, &ket(10, &[(0, Radical::one())])).unwrap();
        assert_eq!(top[0], Radical::one());
        assert_eq!(top.iter().filter(|a| !a.is_zero()).count(), 1);
        let spin = dicke_embed(2, 4, &ket(5, &[(0, Radical::one())])).unwrap();
        assert_eq!(spin[0], Radical::one());
    }

    #[test]
    fn dicke_isometry() {
        let n = occupation_basis(3, 3).len();
        for i in 0..n {
            for j in 0..n {
                let u = dicke_embed(3, 3, &ket(n, &[(i, Radical::one())])).unwrap();
                let v = dicke_embed(3, 3, &ket(n, &[(j, Radical::one())])).unwrap();
                let expect = if i == j { Radical::one() } else { Radical::zero() };
                assert_eq!(inner(&u, &v).unwrap(), expect);
            }
        }
    }

    #[test]
    fn full_space_has_distance_one() {
        let (q, n, code) = embedded_code(&catalog_code("trivial-full-qubit").unwrap()).unwrap();
        assert_eq!(physical_distance_bruteforce(q, n, &code, 3).unwrap().distance, 1);
    }

    #[test]
    fn too_large_register() {
        let code = vec![vec![0.0; 4096]];
        assert!(matches!(
            physical_distance_bruteforce(2, 12, &code, 2),
            Err(Error::TooLarge(_))
        ));
    }
}
