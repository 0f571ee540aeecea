use num_traits::One;
use serde::{Deserialize, Serialize};

use super::cone::{decompose_cone, Cone};
use super::{Exact, Float, Point};
use crate::error::{Error, Result};
use crate::rational::{deserialize_q, serialize_q, Q};

/// `constant * p^{d - es} * prod_j p^{-A_j s + B_j} / (1 - p^{-A_j s + B_j})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeSumTerm {
    #[serde(serialize_with = "serialize_q", deserialize_with = "deserialize_q")]
    pub constant: Q,
    #[serde(default)]
    pub d: i64,
    #[serde(default)]
    pub e: i64,
    pub pairs: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeSumForm {
    pub terms: Vec<ConeSumTerm>,
}

impl ConeSumForm {
    pub(crate) fn eval_at<P: Point>(&self, pt: &P) -> Result<P::V> {
        let mut acc = pt.zero();
        for t in &self.terms {
            let mut v = pt.mul(&pt.from_q(&t.constant), &pt.p_pow(t.d, t.e));
            for &(a, b) in &t.pairs {
                v = pt.mul(&v, &pt.pair(a, b)?);
            }
            acc = pt.add(&acc, &v);
        }
        Ok(acc)
    }

    pub fn eval(&self, p: u64, s: f64) -> Result<f64> {
        self.eval_at(&Float { p: p as f64, s })
    }

    /// Exact value at an integer `s`.
    pub fn eval_exact(&self, p: u64, s: i64) -> Result<Q> {
        self.eval_at(&Exact { p, s })
    }

    pub(crate) fn scaled(mut self, c: &Q, d: i64, e: i64) -> Self {
        for t in &mut self.terms {
            t.constant = &t.constant * c;
            t.d += d;
            t.e += e;
        }
        self
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `sum_{gamma in C} p^{-s (nbar . gamma) + (mbar . gamma)}`, one term per
/// simplicial piece: the apex shifted back by every generator, times the
/// product of `p^{x_v} / (1 - p^{x_v})` over the generators `v`.
pub fn cone_geometric_sum(cone: &Cone, nbar: &[i64], mbar: &[i64]) -> Result<ConeSumForm> {
    if nbar.len() != cone.dim || mbar.len() != cone.dim {
        return Err(Error::InvalidInput("weight vectors do not match the cone dimension".into()));
    }
    let mut terms = Vec::new();
    for piece in decompose_cone(cone)? {
        let mut base = piece.apex.clone();
        let mut pairs = Vec::new();
        for g in &piece.generators {
            let (n_dot, m_dot) = (dot(nbar, g), dot(mbar, g));
            if n_dot < 0 || (n_dot == 0 && m_dot >= 0) {
                return Err(Error::DivergentCone { generator: g.clone(), n_dot, m_dot });
            }
            pairs.push((n_dot, m_dot));
            base.iter_mut().zip(g).for_each(|(a, b)| *a -= b);
        }
        terms.push(ConeSumTerm { constant: Q::one(), d: dot(mbar, &base), e: dot(nbar, &base), pairs });
    }
    Ok(ConeSumForm { terms })
}

/// Direct summation over `C` inside the box `[0, bound]^n`.
pub fn direct_cone_sum(cone: &Cone, nbar: &[i64], mbar: &[i64], p: u64, s: f64, bound: i64) -> f64 {
    let n = cone.dim;
    let ln_p = (p as f64).ln();
    let mut x = vec![0i64; n];
    let mut acc = 0.0;
    loop {
        if cone.contains(&x) {
            acc += (ln_p * (dot(mbar, &x) as f64 - s * dot(nbar, &x) as f64)).exp();
        }
        let mut c = 0;
        while c < n && x[c] == bound {
            x[c] = 0;
            c += 1;
        }
        if c == n {
            break;
        }
        x[c] += 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn one_geometric_series() {
        let c = Cone::orthant(&[1]);
        let f = cone_geometric_sum(&c, &[2], &[1]).unwrap();
        assert_eq!(f.terms, vec![ConeSumTerm { constant: Q::one(), d: 0, e: 0, pairs: vec![(2, 1)] }]);
        // p^{-1} / (1 - p^{-1}) at p = 5, s = 1
        assert_eq!(f.eval_exact(5, 1).unwrap(), q(1, 4));
    }

    #[test]
    fn square_matches_closed_form() {
        let c = Cone::orthant(&[1, 1]);
        let f = cone_geometric_sum(&c, &[1, 1], &[0, 0]).unwrap();
        assert_eq!(f.eval_exact(5, 1).unwrap(), q(1, 16));
        let direct = direct_cone_sum(&c, &[1, 1], &[0, 0], 5, 1.0, 60);
        assert!((f.eval(5, 1.0).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn divergence_is_reported() {
        let c = Cone::orthant(&[0, 0]);
        let err = cone_geometric_sum(&c, &[1, 0], &[0, 1]).unwrap_err();
        assert!(matches!(err, Error::DivergentCone { n_dot: 0, m_dot: 1, .. }), "{err}");
        assert!(cone_geometric_sum(&c, &[1, 0], &[0, -1]).is_ok());
        let f = cone_geometric_sum(&Cone::orthant(&[0]), &[1], &[2]).unwrap();
        assert!(matches!(f.eval(3, 1.0), Err(Error::Pole { .. })));
    }
}
