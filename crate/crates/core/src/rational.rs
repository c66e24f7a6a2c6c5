//! Exact rational scalars and a few helpers for comparing sums of square roots.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational; always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `[+-]digits[/digits]`. The denominator must be positive.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let numerator = parse_signed_digits(num).ok_or_else(bad)?;
    let denominator = match den {
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            d
        }
        None => BigInt::one(),
    };
    Ok(Rational::new(numerator, denominator))
}

fn parse_signed_digits(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let value: BigInt = digits.parse().ok()?;
    Some(if s.starts_with('-') { -value } else { value })
}

/// Accepts everything [`parse_rational`] does plus decimal notation such as
/// `-1.25` or `3e-2`, converted verbatim (no rounding).
pub fn parse_decimal(s: &str) -> Result<Rational> {
    if let Ok(r) = parse_rational(s) {
        return Ok(r);
    }
    let bad = || Error::InvalidRational(s.to_string());
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let sign_free = int_part.strip_prefix(['+', '-']).unwrap_or(int_part);
    if sign_free.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let joined = format!("{}{}", int_part, frac_part);
    let joined = if sign_free.is_empty() {
        format!("{}0{}", &int_part[..int_part.len() - sign_free.len()], frac_part)
    } else {
        joined
    };
    let numerator = parse_signed_digits(&joined).ok_or_else(bad)?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::from_integer(numerator * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numerator, num_traits::pow(ten, (-scale) as usize))
    })
}

/// `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact value of a finite `f64`.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator and denominator both overflow f64; scale them down together
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[Rational]) -> Rational {
    dot(a, a)
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn sqrt_exact(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

fn sign_of(r: &Rational) -> Ordering {
    match r.numer().sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

/// A term `coefficient * sqrt(radicand)` with `radicand >= 0`.
#[derive(Clone, Debug)]
pub struct SqrtTerm {
    pub coefficient: Rational,
    pub radicand: Rational,
}

impl SqrtTerm {
    pub fn new(coefficient: Rational, radicand: Rational) -> Self {
        assert!(!radicand.is_negative(), "negative radicand");
        SqrtTerm { coefficient, radicand }
    }

    pub fn rational(value: Rational) -> Self {
        SqrtTerm { coefficient: value, radicand: Rational::one() }
    }
}

/// Exact sign of `sum coefficient_i * sqrt(radicand_i)`.
///
/// Terms with identical radicands are merged first; at most three distinct
/// radicands may remain (a rational part counts as radicand 1).
pub fn sign_of_sqrt_sum(terms: &[SqrtTerm]) -> Ordering {
    let mut merged: Vec<SqrtTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        if t.coefficient.is_zero() || t.radicand.is_zero() {
            continue;
        }
        // fold perfect squares into the rational part
        let t = match sqrt_exact(&t.radicand) {
            Some(root) if !root.is_one() => SqrtTerm::rational(&t.coefficient * root),
            _ => t.clone(),
        };
        match merged.iter_mut().find(|m| m.radicand == t.radicand) {
            Some(m) => m.coefficient += t.coefficient,
            None => merged.push(t),
        }
    }
    merged.retain(|t| !t.coefficient.is_zero());
    assert!(merged.len() <= 3, "sign_of_sqrt_sum supports at most three radicands");
    match merged.len() {
        0 => Ordering::Equal,
        1 => sign_of(&merged[0].coefficient),
        _ => {
            let (head, last) = merged.split_at(merged.len() - 1);
            let s_head = sign_of_sqrt_sum(head);
            let s_last = sign_of(&last[0].coefficient);
            if s_head == Ordering::Equal {
                return s_last;
            }
            if s_head == s_last {
                return s_head;
            }
            // opposite signs: compare magnitudes via head^2 - last^2
            let mut squared: Vec<SqrtTerm> = Vec::new();
            let mut rational_part = -(&last[0].coefficient * &last[0].coefficient * &last[0].radicand);
            for t in head {
                rational_part += &t.coefficient * &t.coefficient * &t.radicand;
            }
            squared.push(SqrtTerm::rational(rational_part));
            for i in 0..head.len() {
                for j in i + 1..head.len() {
                    squared.push(SqrtTerm::new(
                        int(2) * &head[i].coefficient * &head[j].coefficient,
                        &head[i].radicand * &head[j].radicand,
                    ));
                }
            }
            match sign_of_sqrt_sum(&squared) {
                Ordering::Equal => Ordering::Equal,
                Ordering::Greater => s_head,
                Ordering::Less => s_last,
            }
        }
    }
}

/// Serde helpers for rationals written as `"p/q"` strings.
pub mod serde_rational {
    use super::*;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_rational(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter().map(|s| parse_rational(s).map_err(D::Error::custom)).collect()
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&format_rational(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
            let v = Option::<String>::deserialize(d)?;
            v.map(|s| parse_rational(&s).map_err(D::Error::custom)).transpose()
        }
    }
}
