use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_q, parse_q, pow_int, to_f64, Q};

/// A finite Dirichlet series `sum_n c_n n^{-s}` with exact nonnegative
/// rational coefficients indexed by dimension `n >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DirichletPoly {
    terms: BTreeMap<u64, Q>,
}

impl DirichletPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The series `1 = 1^{-s}`.
    pub fn one() -> Self {
        Self::monomial(1, Q::one())
    }

    pub fn monomial(dim: u64, coeff: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(dim, coeff).expect("valid monomial");
        p
    }

    /// Builds from `(dimension, integer multiplicity)` pairs.
    pub fn from_counts<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Self {
        let mut p = Self::zero();
        for (n, c) in pairs {
            p.add_term(n, Q::from_integer(BigInt::from(c)))
                .expect("dimension must be positive");
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (u64, Q)>>(pairs: I) -> Result<Self> {
        let mut p = Self::zero();
        for (n, c) in pairs {
            p.add_term(n, c)?;
        }
        Ok(p)
    }

    /// Adds `coeff * dim^{-s}`.
    pub fn add_term(&mut self, dim: u64, coeff: Q) -> Result<()> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension 0 in Dirichlet polynomial".into()));
        }
        if coeff.is_negative() {
            return Err(Error::InvalidInput(format!(
                "negative multiplicity {} at dimension {dim}",
                format_q(&coeff)
            )));
        }
        if coeff.is_zero() {
            return Ok(());
        }
        *self.terms.entry(dim).or_insert_with(Q::zero) += coeff;
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Q)> {
        self.terms.iter().map(|(&n, c)| (n, c))
    }

    pub fn coeff(&self, dim: u64) -> Q {
        self.terms.get(&dim).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_dim(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    /// Value at `s = 0`: the total multiplicity.
    pub fn total(&self) -> Q {
        self.terms.values().fold(Q::zero(), |acc, c| acc + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&n, c) in &other.terms {
            *out.terms.entry(n).or_insert_with(Q::zero) += c;
        }
        out
    }

    /// Multiplies every coefficient by a nonnegative rational.
    pub fn scale(&self, factor: &Q) -> Self {
        assert!(!factor.is_negative(), "negative scale factor");
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&n, c)| (n, c * factor)).collect(),
        }
    }

    /// Multiplies by `m^{-s}`: every dimension is scaled by `m`.
    pub fn shift(&self, m: u64) -> Self {
        assert!(m >= 1);
        Self {
            terms: self.terms.iter().map(|(&n, c)| (n * m, c.clone())).collect(),
        }
    }

    /// Dirichlet convolution (product of series).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                *out.terms.entry(a * b).or_insert_with(Q::zero) += ca * cb;
            }
        }
        out
    }

    /// Multiplicities as integers, if they all are.
    pub fn integer_counts(&self) -> Option<Vec<(u64, u64)>> {
        self.terms
            .iter()
            .map(|(&n, c)| {
                if c.denom().is_one() {
                    u64::try_from(c.numer()).ok().map(|c| (n, c))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Evaluates at real `s`.
    pub fn eval(&self, s: f64) -> f64 {
        // sum small terms first
        let mut parts: Vec<f64> = self
            .terms
            .iter()
            .map(|(&n, c)| to_f64(c) * (n as f64).powf(-s))
            .collect();
        parts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        let mut sum = 0.0;
        let mut comp = 0.0;
        for x in parts {
            let y = x - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum
    }

    /// Exact value at an integer `s`.
    pub fn eval_exact(&self, s: i64) -> Q {
        self.terms
            .iter()
            .fold(Q::zero(), |acc, (&n, c)| acc + c * pow_int(n, -s))
    }
}

/// `eval_dirichlet`: exact when `s` is an integer, otherwise floating.
pub fn eval_dirichlet(poly: &DirichletPoly, s: &Q) -> f64 {
    if s.is_integer() {
        if let Ok(k) = i64::try_from(s.numer()) {
            return to_f64(&poly.eval_exact(k));
        }
    }
    poly.eval(to_f64(s))
}

impl fmt::Display for DirichletPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(n, c)| format!("{}*{}^-s", format_q(c), n))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    terms: Vec<(u64, String)>,
}

impl Serialize for DirichletPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            terms: self.terms.iter().map(|(&n, c)| (n, format_q(c))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DirichletPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = Wire::deserialize(d)?;
        let mut out = DirichletPoly::zero();
        for (n, c) in w.terms {
            let c = parse_q(&c).map_err(D::Error::custom)?;
            out.add_term(n, c).map_err(D::Error::custom)?;
        }
        Ok(out)
    }
}

/// `log(r_1 + ... + r_N) / log N`: the N-th term of the limsup sequence
/// whose limit is the abscissa of convergence.
pub fn abscissa_from_counts(counts: &[u64]) -> Result<f64> {
    let n = counts.len();
    if n < 2 {
        return Err(Error::Undefined("need at least two counts".into()));
    }
    let total: f64 = counts.iter().map(|&c| c as f64).sum();
    if total == 0.0 {
        return Err(Error::Undefined("all counts are zero".into()));
    }
    Ok(total.ln() / (n as f64).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn evaluation_examples() {
        let triv = DirichletPoly::from_counts([(1, 1)]);
        assert_eq!(eval_dirichlet(&triv, &qi(2)), 1.0);
        let s3 = DirichletPoly::from_counts([(1, 2), (2, 1)]);
        assert_eq!(eval_dirichlet(&s3, &qi(0)), 3.0);
        assert_eq!(eval_dirichlet(&s3, &qi(1)), 2.5);
        assert_eq!(s3.eval_exact(1), q(5, 2));
        assert!((eval_dirichlet(&s3, &q(1, 2)) - (2.0 + 2f64.powf(-0.5))).abs() < 1e-15);
    }

    #[test]
    fn abscissa_counts_examples() {
        let mut r = vec![0u64; 10];
        r[0] = 1;
        assert_eq!(abscissa_from_counts(&r).unwrap(), 0.0);
        assert!((abscissa_from_counts(&[1; 100]).unwrap() - 1.0).abs() < 1e-12);
        let lin: Vec<u64> = (1..=1000).collect();
        // oracle: closed-form partial sum N(N+1)/2
        let expected = (1000.0f64 * 1001.0 / 2.0).ln() / 1000f64.ln();
        assert!((abscissa_from_counts(&lin).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 1.8998).abs() < 1e-4);
        assert!(abscissa_from_counts(&[0, 0, 0]).is_err());
        assert!(abscissa_from_counts(&[5]).is_err());
    }

    #[test]
    fn shift_scale_and_json() {
        let p = DirichletPoly::from_counts([(1, 2), (2, 1)]);
        let shifted = p.shift(3).scale(&q(1, 2));
        assert_eq!(shifted.coeff(3), qi(1));
        assert_eq!(shifted.coeff(6), q(1, 2));
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"terms":[[1,"2"],[2,"1"]]}"#);
        let back: DirichletPoly = serde_json::from_str(r#"{"terms":[[3,"1/2"],[1,"4/2"]]}"#).unwrap();
        assert_eq!(back.coeff(1), qi(2));
        assert_eq!(back.coeff(3), q(1, 2));
        assert!(serde_json::from_str::<DirichletPoly>(r#"{"terms":[[0,"1"]]}"#).is_err());
        assert!(serde_json::from_str::<DirichletPoly>(r#"{"terms":[[2,"-1"]]}"#).is_err());
    }

    #[test]
    fn convolution() {
        let a = DirichletPoly::from_counts([(1, 1), (2, 1)]);
        let b = DirichletPoly::from_counts([(1, 1), (3, 2)]);
        let c = a.mul(&b);
        assert_eq!(c, DirichletPoly::from_counts([(1, 1), (2, 1), (3, 2), (6, 2)]));
    }

    proptest::proptest! {
        #[test]
        fn monotone_in_s(terms in proptest::collection::vec((1u64..50, 0u64..20), 1..8),
                         s1 in -2.0f64..4.0, ds in 0.0f64..3.0) {
            let p = DirichletPoly::from_counts(terms);
            let (a, b) = (p.eval(s1), p.eval(s1 + ds));
            proptest::prop_assert!(a >= b - 1e-9 * a.abs().max(1.0));
        }
    }
}
