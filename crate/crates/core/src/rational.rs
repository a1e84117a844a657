//! Exact rational arithmetic helpers and continued fractions.
//!
//! All measures, coupling constants and lattice phases in this crate are
//! [`Q`] values. Irrational parameters never enter the exact layer directly;
//! they are approximated by the convergents of a continued fraction.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

use crate::error::{LabError, Result};

pub type Q = BigRational;

pub fn q(numer: i64, denom: i64) -> Q {
    Q::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `x - floor(x)`, always in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

/// Parses `"a/b"`, an integer, or a finite decimal such as `"-0.4142"`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let err = || LabError::Parse(format!("not a rational number: `{s}`"));
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(LabError::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let digits = int_part.trim_start_matches(['-', '+']);
        if !frac_part.chars().all(|c| c.is_ascii_digit())
            || !digits.chars().all(|c| c.is_ascii_digit())
            || (digits.is_empty() && frac_part.is_empty())
        {
            return Err(err());
        }
        let whole: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| err())?
        };
        let scale = num::pow(BigInt::from(10), frac_part.len());
        let fractional: BigInt = if frac_part.is_empty() {
            BigInt::zero()
        } else {
            frac_part.parse().map_err(|_| err())?
        };
        let value = Q::new(whole * &scale + fractional, scale);
        return Ok(if negative { -value } else { value });
    }
    let n: BigInt = s.parse().map_err(|_| err())?;
    Ok(Q::from_integer(n))
}

/// Parses a comma-separated list of rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<Q>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse_rational)
        .collect()
}

/// Nearest rational to `x` with denominator at most `max_den`; ties go to
/// the smaller denominator.
pub fn nearest_rational(x: f64, max_den: u64) -> Q {
    let mut best = (f64::INFINITY, 0i64, 1i64);
    for d in 1..=max_den.max(1) {
        let n = (x * d as f64).round();
        let err = (x - n / d as f64).abs();
        if err < best.0 - 1e-15 {
            best = (err, n as i64, d as i64);
        }
    }
    q(best.1, best.2)
}

/// Simple continued fraction `[a0; a1, a2, ...]` of a rational number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub terms: Vec<BigInt>,
}

impl ContinuedFraction {
    pub fn of(x: &Q) -> Self {
        let mut terms = Vec::new();
        let mut num = x.numer().clone();
        let mut den = x.denom().clone();
        while !den.is_zero() {
            let a = num::Integer::div_floor(&num, &den);
            let rem = &num - &a * &den;
            terms.push(a);
            num = den;
            den = rem;
        }
        Self { terms }
    }

    /// Continued fraction of a decimal string, truncated to `max_terms`.
    ///
    /// Used to carry an irrational target (given to many digits) as a
    /// stream of rational convergents.
    pub fn of_decimal(s: &str, max_terms: usize) -> Result<Self> {
        let mut cf = Self::of(&parse_rational(s)?);
        cf.terms.truncate(max_terms);
        Ok(cf)
    }

    pub fn convergents(&self) -> Vec<Q> {
        let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
        let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
        let mut out = Vec::with_capacity(self.terms.len());
        for a in &self.terms {
            let h_next = a * &h + &h_prev;
            let k_next = a * &k + &k_prev;
            h_prev = std::mem::replace(&mut h, h_next);
            k_prev = std::mem::replace(&mut k, k_next);
            out.push(Q::new(h.clone(), k.clone()));
        }
        out
    }
}

/// Serde adapter writing a rational as `"p/q"` (or `"p"`).
pub mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_q_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}
