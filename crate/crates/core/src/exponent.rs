//! Exact extended-real exponents `p ∈ [1, ∞]`.
//!
//! Exponents are kept as rationals so that boundary tests such as
//! `1/q = 1/2 + 1/p` are decided exactly. `1/∞ = 0` and the conjugate of
//! `1` is `∞`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs are capped at 9 digits per component so that the few chained
/// operations done on exponents cannot overflow `i128`.
pub type Rational = Ratio<i128>;

/// An exponent in `[1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(Rational),
    Infinite,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(Ratio::new_raw(1, 1));
    pub const TWO: Exponent = Exponent::Finite(Ratio::new_raw(2, 1));
    pub const INF: Exponent = Exponent::Infinite;

    /// Builds a finite exponent, rejecting values below 1.
    pub fn finite(value: Rational) -> Result<Self> {
        if value < Rational::one() {
            return Err(Error::InvalidExponent(format!(
                "{value} is below 1"
            )));
        }
        Ok(Exponent::Finite(value))
    }

    pub fn ratio(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidExponent("zero denominator".into()));
        }
        Self::finite(Rational::new(num, den))
    }

    pub fn integer(value: i128) -> Result<Self> {
        Self::finite(Rational::from_integer(value))
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn recip(&self) -> Rational {
        match self {
            Exponent::Finite(r) => r.recip(),
            Exponent::Infinite => Rational::zero(),
        }
    }

    /// The conjugate exponent `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(&self) -> Exponent {
        let r = Rational::one() - self.recip();
        if r.is_zero() {
            Exponent::Infinite
        } else {
            Exponent::Finite(r.recip())
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Exponent::Finite(r) if r.is_one())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Finite(r) => r.to_f64().unwrap_or(f64::INFINITY),
            Exponent::Infinite => f64::INFINITY,
        }
    }

    /// `1/p` as a float.
    pub fn recip_f64(&self) -> f64 {
        self.recip().to_f64().unwrap_or(0.0)
    }

    /// Builds from an `f64`, used only by generators and tests; `inf` maps to `∞`.
    pub fn from_f64_approx(value: f64) -> Result<Self> {
        if value.is_infinite() && value > 0.0 {
            return Ok(Exponent::Infinite);
        }
        let r = Rational::approximate_float(value)
            .ok_or_else(|| Error::InvalidExponent(format!("{value}")))?;
        Self::finite(r)
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Larger exponent means smaller reciprocal.
        other.recip().cmp(&self.recip())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Exponent::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

const MAX_DIGITS: usize = 9;

fn parse_u64_digits(s: &str) -> Result<i128> {
    if s.is_empty() || s.len() > MAX_DIGITS || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::InvalidExponent(format!("bad digits {s:?}")));
    }
    s.parse::<i128>()
        .map_err(|e| Error::InvalidExponent(e.to_string()))
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts `inf`, an integer, a rational `a/b`, or a terminating decimal
    /// such as `1.5`; decimals are converted exactly.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        if matches!(lower.as_str(), "inf" | "infinity" | "+inf") || t == "∞" {
            return Ok(Exponent::Infinite);
        }
        if let Some((a, b)) = t.split_once('/') {
            let num = parse_u64_digits(a.trim())?;
            let den = parse_u64_digits(b.trim())?;
            return Self::ratio(num, den);
        }
        if let Some((int, frac)) = t.split_once('.') {
            let int_part = if int.is_empty() { 0 } else { parse_u64_digits(int)? };
            if frac.is_empty() {
                return Self::integer(int_part);
            }
            let frac_part = parse_u64_digits(frac)?;
            let scale = 10i128
                .checked_pow(frac.len() as u32)
                .ok_or_else(|| Error::InvalidExponent("too many decimals".into()))?;
            let num = int_part
                .checked_mul(scale)
                .and_then(|v| v.checked_add(frac_part))
                .ok_or_else(|| Error::InvalidExponent("decimal overflow".into()))?;
            return Self::ratio(num, scale);
        }
        Self::integer(parse_u64_digits(t)?)
    }
}

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A pair `(p, q)`: polynomials are normed on `B_{ℓ_p^n}`, majorants on `B_{ℓ_q^n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub p: Exponent,
    pub q: Exponent,
}

impl ExponentPair {
    pub fn new(p: Exponent, q: Exponent) -> Self {
        ExponentPair { p, q }
    }

    pub fn p_conj(&self) -> Exponent {
        self.p.conjugate()
    }

    pub fn q_conj(&self) -> Exponent {
        self.q.conjugate()
    }

    /// `β = (1/q − 1/p)·q'` as an exact rational, `None` when it is infinite
    /// (`q = 1 < p`). For `p = q = 1` the product `0·∞` is taken as `0`.
    pub fn beta(&self) -> Option<Rational> {
        let diff = self.q.recip() - self.p.recip();
        match self.q_conj() {
            Exponent::Finite(qc) => Some(diff * qc),
            Exponent::Infinite => {
                if diff.is_zero() {
                    Some(Rational::zero())
                } else if diff.is_positive() {
                    None
                } else {
                    // q = 1 and 1/p > 1 cannot happen for p >= 1.
                    Some(Rational::zero())
                }
            }
        }
    }

    pub fn beta_f64(&self) -> f64 {
        match self.beta() {
            Some(b) => b.to_f64().unwrap_or(f64::INFINITY),
            None => f64::INFINITY,
        }
    }

    /// `1 < q ≤ p ≤ 2`, where the small-range `χ` bound applies.
    pub fn in_small_range(&self) -> bool {
        !self.q.is_one() && self.q <= self.p && self.p <= Exponent::TWO
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, q={})", self.p, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> Exponent {
        s.parse().unwrap()
    }

    #[test]
    fn parses_rationals_decimals_and_inf() {
        assert_eq!(e("4/3"), Exponent::ratio(4, 3).unwrap());
        assert_eq!(e("1.5"), Exponent::ratio(3, 2).unwrap());
        assert_eq!(e("2"), Exponent::TWO);
        assert_eq!(e("inf"), Exponent::INF);
        assert_eq!(e(" INF "), Exponent::INF);
        assert!("0.5".parse::<Exponent>().is_err());
        assert!("1/0".parse::<Exponent>().is_err());
        assert!("-2".parse::<Exponent>().is_err());
        assert!("".parse::<Exponent>().is_err());
        assert!("99999999999999999999".parse::<Exponent>().is_err());
        assert!("1.0000000001".parse::<Exponent>().is_err());
    }

    #[test]
    fn conjugates_are_exact() {
        assert_eq!(Exponent::ONE.conjugate(), Exponent::INF);
        assert_eq!(Exponent::INF.conjugate(), Exponent::ONE);
        assert_eq!(Exponent::TWO.conjugate(), Exponent::TWO);
        assert_eq!(e("4/3").conjugate(), e("4"));
        for s in ["1", "4/3", "3/2", "2", "3", "inf"] {
            let p = e(s);
            assert_eq!(p.recip() + p.conjugate().recip(), Rational::one());
        }
    }

    #[test]
    fn ordering_follows_value() {
        assert!(e("4/3") < e("3/2"));
        assert!(e("2") < Exponent::INF);
        assert!(Exponent::ONE < e("1.01"));
    }

    #[test]
    fn beta_matches_definition() {
        let pair = ExponentPair::new(e("2"), e("4/3"));
        assert_eq!(pair.beta(), Some(Rational::one()));
        let diag = ExponentPair::new(e("2"), e("2"));
        assert_eq!(diag.beta(), Some(Rational::zero()));
        let q1 = ExponentPair::new(e("2"), Exponent::ONE);
        assert_eq!(q1.beta(), None);
        assert!(q1.beta_f64().is_infinite());
        // β ≥ 0 whenever q ≤ p.
        for p in ["1", "4/3", "3/2", "2", "inf"] {
            for q in ["4/3", "3/2", "2"] {
                let pair = ExponentPair::new(e(p), e(q));
                if pair.q <= pair.p {
                    assert!(pair.beta().unwrap() >= Rational::zero());
                }
            }
        }
    }

    #[test]
    fn display_roundtrips() {
        for s in ["1", "4/3", "3/2", "2", "inf"] {
            assert_eq!(e(s).to_string(), s);
            assert_eq!(e(&e(s).to_string()), e(s));
        }
    }
}
