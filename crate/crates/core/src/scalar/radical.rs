use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, rational_to_f64, Rational};
use crate::error::{Error, Result};

/// Trial-division bound used when extracting square parts.
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;

/// Split `n = root² · free` with `free` squarefree, returning `(root, free)`.
///
/// Trial division stops at `bound`; if an unfactored cofactor remains whose
/// squarefreeness cannot be certified, an error is returned instead of a guess.
pub fn squarefree_decompose(n: u64, bound: u64) -> Result<(u64, u64)> {
    if n == 0 {
        return Err(Error::DivisionByZero);
    }
    let mut rest = n;
    let mut root = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p <= bound && p.saturating_mul(p) <= rest {
        if rest % p == 0 {
            let mut e = 0u32;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            root *= p.pow(e / 2);
            if e % 2 == 1 {
                free *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        if p.saturating_mul(p) > rest {
            // rest is prime
            free *= rest;
        } else {
            let s = rest.sqrt();
            if s * s == rest {
                // Square of something with no small factor: s itself is prime
                // or a product of two large primes, both fine for the root.
                root *= s;
            } else if rest < bound.saturating_mul(bound).saturating_mul(bound) {
                // No factor <= bound and fewer than three large prime factors
                // possible, so rest is p or p*q with distinct large primes.
                free *= rest;
            } else {
                return Err(Error::FactorizationBound {
                    value: n.to_string(),
                    bound,
                });
            }
        }
    }
    Ok((root, free))
}

/// Finite sum `Σ c_m √m` over squarefree positive integers `m` with rational
/// coefficients. The key `1` holds the rational part. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Radical {
    terms: BTreeMap<u64, Rational>,
}

impl Radical {
    /// `c · √m` where `m` must already be squarefree.
    pub fn term(coeff: Rational, m: u64) -> Result<Self> {
        if m == 0 {
            return Ok(Self::zero());
        }
        let (root, free) = squarefree_decompose(m, DEFAULT_FACTOR_BOUND)?;
        let mut out = Self::zero();
        out.push(free, coeff * Rational::from_integer(BigInt::from(root)));
        Ok(out)
    }

    /// `√r` for a non-negative rational `r`, simplified so the key is
    /// squarefree.
    pub fn sqrt_rational(r: &Rational) -> Result<Self> {
        Self::sqrt_rational_with_bound(r, DEFAULT_FACTOR_BOUND)
    }

    pub fn sqrt_rational_with_bound(r: &Rational, bound: u64) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::InvalidCodeSpec(format!(
                "square root of negative {}",
                format_rational(r)
            )));
        }
        if r.is_zero() {
            return Ok(Self::zero());
        }
        // sqrt(p/q) = sqrt(p q) / q
        let pq = (r.numer() * r.denom())
            .to_u64()
            .ok_or_else(|| Error::FactorizationBound {
                value: format_rational(r),
                bound,
            })?;
        let (root, free) = squarefree_decompose(pq, bound)?;
        let coeff = Rational::new(BigInt::from(root), r.denom().clone());
        let mut out = Self::zero();
        out.push(free, coeff);
        Ok(out)
    }

    fn push(&mut self, key: u64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&k| k == 1)
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.rational_part())
        } else {
            None
        }
    }

    pub fn rational_part(&self) -> Rational {
        self.terms.get(&1).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * r)).collect(),
        }
    }

    pub fn div_rational(&self, q: &Rational) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.mul_rational(&q.recip()))
    }

    /// Division by another radical is only defined when the divisor is rational.
    pub fn checked_div(&self, other: &Radical) -> Result<Self> {
        match other.to_rational() {
            Some(q) => self.div_rational(&q),
            None => Err(Error::UnsupportedDivision),
        }
    }

    pub fn checked_mul(&self, other: &Radical) -> Result<Self> {
        let mut out = Self::zero();
        for (&m, a) in &self.terms {
            for (&n, b) in &other.terms {
                let g = m.gcd(&n);
                let key = (m / g)
                    .checked_mul(n / g)
                    .ok_or(Error::RadicalOverflow(m, n))?;
                out.push(key, a * b * Rational::from_integer(BigInt::from(g)));
            }
        }
        Ok(out)
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(k, v)| rational_to_f64(v) * (*k as f64).sqrt())
            .sum()
    }

    /// Exact sign for values of the form `a + b√m`; larger combinations are
    /// rejected rather than decided numerically.
    pub fn signum(&self) -> Result<i8> {
        let irr: Vec<_> = self.terms.iter().filter(|(k, _)| **k != 1).collect();
        let sgn = |r: &Rational| -> i8 {
            if r.is_positive() {
                1
            } else if r.is_negative() {
                -1
            } else {
                0
            }
        };
        let a = self.rational_part();
        match irr.as_slice() {
            [] => Ok(sgn(&a)),
            [(m, b)] => {
                let (sa, sb) = (sgn(&a), sgn(b));
                if sa == 0 || sa == sb {
                    return Ok(sb);
                }
                // opposite signs: compare a² with b² m
                let lhs = &a * &a;
                let rhs = *b * *b * Rational::from_integer(BigInt::from(**m));
                Ok(if lhs > rhs { sa } else { sb })
            }
            _ => Err(Error::UndecidableSign(self.to_string())),
        }
    }
}

impl From<Rational> for Radical {
    fn from(r: Rational) -> Self {
        let mut out = Self::zero();
        out.push(1, r);
        out
    }
}

impl From<i64> for Radical {
    fn from(v: i64) -> Self {
        Self::from(Rational::from_integer(BigInt::from(v)))
    }
}

impl Zero for Radical {
    fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Radical {
    fn one() -> Self {
        Self::from(Rational::one())
    }
}

impl Add for Radical {
    type Output = Radical;

    fn add(mut self, rhs: Radical) -> Radical {
        for (k, v) in rhs.terms {
            self.push(k, v);
        }
        self
    }
}

impl<'a> Add<&'a Radical> for &'a Radical {
    type Output = Radical;

    fn add(self, rhs: &Radical) -> Radical {
        self.clone() + rhs.clone()
    }
}

impl Neg for Radical {
    type Output = Radical;

    fn neg(self) -> Radical {
        Self {
            terms: self.terms.into_iter().map(|(k, v)| (k, -v)).collect(),
        }
    }
}

impl Sub for Radical {
    type Output = Radical;

    fn sub(self, rhs: Radical) -> Radical {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a Radical> for &'a Radical {
    type Output = Radical;

    fn sub(self, rhs: &Radical) -> Radical {
        self.clone() - rhs.clone()
    }
}

/// Panics only if a product key overflows `u64`; use
/// [`Radical::checked_mul`] where that matters.
impl Mul for Radical {
    type Output = Radical;

    fn mul(self, rhs: Radical) -> Radical {
        self.checked_mul(&rhs).expect("radical key overflow")
    }
}

impl<'a> Mul<&'a Radical> for &'a Radical {
    type Output = Radical;

    fn mul(self, rhs: &Radical) -> Radical {
        self.checked_mul(rhs).expect("radical key overflow")
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, v)) in self.terms.iter().enumerate() {
            let (sign, mag) = if v.is_negative() {
                ("-", -v.clone())
            } else {
                ("+", v.clone())
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if *k == 1 {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "sqrt({k})")?;
            } else {
                write!(f, "{}*sqrt({k})", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Integers are written as JSON numbers when they fit in `i64`, otherwise as
/// decimal strings.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

impl JsonInt {
    fn from_big(v: &BigInt) -> Self {
        v.to_i64()
            .map(JsonInt::Small)
            .unwrap_or_else(|| JsonInt::Big(v.to_string()))
    }

    fn to_big(&self) -> std::result::Result<BigInt, String> {
        match self {
            JsonInt::Small(v) => Ok(BigInt::from(*v)),
            JsonInt::Big(s) => s.parse().map_err(|_| format!("bad integer `{s}`")),
        }
    }
}

impl Serialize for Radical {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let triples: Vec<(JsonInt, JsonInt, u64)> = self
            .terms
            .iter()
            .map(|(k, v)| (JsonInt::from_big(v.numer()), JsonInt::from_big(v.denom()), *k))
            .collect();
        triples.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Radical {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let triples = Vec::<(JsonInt, JsonInt, u64)>::deserialize(d)?;
        let mut out = Radical::zero();
        for (p, q, m) in triples {
            let p = p.to_big().map_err(D::Error::custom)?;
            let q = q.to_big().map_err(D::Error::custom)?;
            if q.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            let t = Radical::term(Rational::new(p, q), m).map_err(D::Error::custom)?;
            out = out + t;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn sq(c: Rational, m: u64) -> Radical {
        Radical::term(c, m).unwrap()
    }

    #[test]
    fn decompose_small() {
        assert_eq!(squarefree_decompose(1, 100).unwrap(), (1, 1));
        assert_eq!(squarefree_decompose(12, 100).unwrap(), (2, 3));
        assert_eq!(squarefree_decompose(3189, 100).unwrap(), (1, 3189));
        assert_eq!(squarefree_decompose(2 * 2 * 3 * 3 * 5 * 7, 100).unwrap(), (6, 35));
    }

    #[test]
    fn decompose_large_prime_cofactor() {
        // 1_000_003 is prime
        assert_eq!(squarefree_decompose(1_000_003, 1000).unwrap(), (1, 1_000_003));
        let p = 1_000_003u64;
        assert_eq!(squarefree_decompose(p * p, 1000).unwrap(), (p, 1));
    }

    #[test]
    fn decompose_refuses_when_uncertain() {
        // 1009 * 1013 * 1019 with a bound too small to see any factor.
        let n = 1009u64 * 1013 * 1019;
        assert!(matches!(
            squarefree_decompose(n, 10),
            Err(Error::FactorizationBound { .. })
        ));
    }

    #[test]
    fn term_extracts_square_part() {
        let r = Radical::term(rat(1, 1), 12).unwrap();
        assert_eq!(r, sq(rat(2, 1), 3));
    }

    #[test]
    fn sqrt_of_rational() {
        // sqrt(15/64) = sqrt(15)/8
        let r = Radical::sqrt_rational(&rat(15, 64)).unwrap();
        assert_eq!(r, sq(rat(1, 8), 15));
        let half = Radical::sqrt_rational(&rat(1, 2)).unwrap();
        assert_eq!(half, sq(rat(1, 2), 2));
    }

    #[test]
    fn products_merge_keys() {
        let a = sq(rat(1, 1), 6);
        let b = sq(rat(1, 1), 10);
        // sqrt6 sqrt10 = 2 sqrt15
        assert_eq!(a * b, sq(rat(2, 1), 15));
        let c = sq(rat(3, 1), 7);
        assert_eq!(c.clone() * c, Radical::from(rat(63, 1)));
    }

    #[test]
    fn division_by_rational() {
        let x = sq(rat(1, 8), 15);
        assert_eq!(x.div_rational(&rat(1, 2)).unwrap(), sq(rat(1, 4), 15));
        assert_eq!(Radical::zero().div_rational(&rat(3, 1)).unwrap(), Radical::zero());
        let y = Radical::from(rat(3, 1)) + sq(rat(2, 1), 5);
        let expect = Radical::from(rat(1, 2)) + sq(rat(1, 3), 5);
        assert_eq!(y.div_rational(&rat(6, 1)).unwrap(), expect);
        assert!(matches!(y.div_rational(&rat(0, 1)), Err(Error::DivisionByZero)));
        assert!(matches!(
            y.checked_div(&sq(rat(1, 1), 2)),
            Err(Error::UnsupportedDivision)
        ));
    }

    #[test]
    fn exact_sign() {
        // (117 - sqrt(3189)) / 84 > 0
        let alpha_minus = Radical::from(rat(117, 84)) - sq(rat(1, 84), 3189);
        assert_eq!(alpha_minus.signum().unwrap(), 1);
        let neg = Radical::from(rat(1, 1)) - sq(rat(1, 1), 2);
        assert_eq!(neg.signum().unwrap(), -1);
        let two = sq(rat(1, 1), 2) + sq(rat(1, 1), 3);
        assert!(two.signum().is_err());
    }

    #[test]
    fn json_triples() {
        let x = Radical::from(rat(1, 2)) + sq(rat(-1, 3), 5);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "[[1,2,1],[-1,3,5]]");
        let back: Radical = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    fn arb_radical() -> impl Strategy<Value = Radical> {
        let keys = prop::sample::select(vec![1u64, 2, 3, 5, 6, 7, 10, 15]);
        prop::collection::vec((keys, -20i64..20, 1i64..9), 0..4).prop_map(|ts| {
            ts.into_iter()
                .fold(Radical::zero(), |acc, (m, p, q)| acc + sq(rat(p, q), m))
        })
    }

    proptest! {
        #[test]
        fn mul_assoc_comm(a in arb_radical(), b in arb_radical(), c in arb_radical()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn distributive(a in arb_radical(), b in arb_radical(), c in arb_radical()) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn pure_term_squares_to_rational(p in -50i64..50, q in 1i64..20, m in 1u64..200) {
            let t = Radical::term(rat(p, q), m).unwrap();
            let sq = &t * &t;
            prop_assert!(sq.is_rational());
            prop_assert_eq!(sq.rational_part(), rat(p * p, q * q) * Rational::from_integer(BigInt::from(m)));
        }

        #[test]
        fn f64_agrees(a in arb_radical(), b in arb_radical()) {
            let prod = (&a * &b).to_f64();
            prop_assert!((prod - a.to_f64() * b.to_f64()).abs() < 1e-9 * (1.0 + prod.abs()));
        }
    }
}
