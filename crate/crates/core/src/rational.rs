//! Exact rationals and their `"num/den"` string encoding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `"n"` for integers, `"n/d"` otherwise.
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let bad = || Error::InvalidInput(format!("not a rational: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // very large numerators and denominators: scale through logs
        let n = x.numer().abs();
        let d = x.denom();
        let ln = n.bits() as f64 - d.bits() as f64;
        let sign = if x.is_negative() { -1.0 } else { 1.0 };
        sign * 2f64.powf(ln)
    })
}

/// `base^exp` for an integer exponent of either sign.
pub fn pow_q(base: &Q, exp: i64) -> Q {
    let mut acc = Q::one();
    let b = if exp < 0 { base.recip() } else { base.clone() };
    for _ in 0..exp.unsigned_abs() {
        acc *= &b;
    }
    acc
}

/// `p^exp` for an integer base and exponent of either sign.
pub fn pow_int(p: u64, exp: i64) -> Q {
    let mag = num_traits::pow(BigInt::from(p), exp.unsigned_abs() as usize);
    if exp >= 0 {
        Q::from_integer(mag)
    } else {
        Q::new(BigInt::one(), mag)
    }
}

pub fn serialize_q<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_q(x))
}

pub fn deserialize_q<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
    let s = String::deserialize(d)?;
    parse_q(&s).map_err(de::Error::custom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip() {
        for (s, v) in [("2", qi(2)), ("1/2", q(1, 2)), ("-3/4", q(-3, 4)), ("6/8", q(3, 4))] {
            assert_eq!(parse_q(s).unwrap(), v);
        }
        assert_eq!(format_q(&q(6, 8)), "3/4");
        assert_eq!(format_q(&qi(5)), "5");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn powers() {
        assert_eq!(pow_int(5, -2), q(1, 25));
        assert_eq!(pow_q(&q(2, 3), 3), q(8, 27));
        assert_eq!(pow_q(&q(2, 3), -1), q(3, 2));
    }
}
