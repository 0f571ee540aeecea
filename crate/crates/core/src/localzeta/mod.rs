//! Truncated p-adic integrals of V-functions and the lattice-cone pipeline
//! that turns them into rational functions in `p^{-s}`.
//!
//! Exponents follow the crate-wide convention: a pair `(A, B)` stands for
//! `p^{-As+B}` and a monomial `(d, e)` for `p^{d-es}`.

mod cone;
mod sum;
mod vfunction;

pub use cone::{decompose_cone, verify_decomposition, Affine, Cone, Congruence, DecompositionCheck, SimplicialPiece};
pub use sum::{cone_geometric_sum, direct_cone_sum, ConeSumForm, ConeSumTerm};
pub use vfunction::{
    example_closed_form, example_vfunction, vfunction_eval, vfunction_eval_exact, vfunction_integral,
    vfunction_integral_exact, vfunction_to_jaikin, ResidueCondition, VFunctionDesc, VJaikinForm, VJaikinTerm, VPiece,
};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{pow_int, pow_q, qi, to_f64, Q};

/// Arithmetic at a fixed point `(p, s)`: floating point for rational `s`,
/// exact rationals for integer `s`.
pub(crate) trait Point: Sync {
    type V: Clone + Send;
    fn zero(&self) -> Self::V;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn from_q(&self, x: &Q) -> Self::V;
    /// `p^{d - e s}`.
    fn p_pow(&self, d: i64, e: i64) -> Self::V;
    /// `c^{-s}` for a positive integer `c`.
    fn neg_s_pow(&self, c: &Q) -> Self::V;
    /// `p^{-As+B} / (1 - p^{-As+B})`, with a pole error unless `As > B`.
    fn pair(&self, a: i64, b: i64) -> Result<Self::V>;
}

pub(crate) struct Float {
    pub p: f64,
    pub s: f64,
}

impl Point for Float {
    type V = f64;
    fn zero(&self) -> f64 {
        0.0
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn from_q(&self, x: &Q) -> f64 {
        to_f64(x)
    }
    fn p_pow(&self, d: i64, e: i64) -> f64 {
        self.p.powf(d as f64 - e as f64 * self.s)
    }
    fn neg_s_pow(&self, c: &Q) -> f64 {
        to_f64(c).powf(-self.s)
    }
    fn pair(&self, a: i64, b: i64) -> Result<f64> {
        if a as f64 * self.s - b as f64 <= 0.0 {
            return Err(Error::Pole { a, b, s: self.s });
        }
        let x = self.p_pow(b, a);
        Ok(x / (1.0 - x))
    }
}

pub(crate) struct Exact {
    pub p: u64,
    pub s: i64,
}

impl Point for Exact {
    type V = Q;
    fn zero(&self) -> Q {
        Q::zero()
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a * b
    }
    fn from_q(&self, x: &Q) -> Q {
        x.clone()
    }
    fn p_pow(&self, d: i64, e: i64) -> Q {
        pow_int(self.p, d - e * self.s)
    }
    fn neg_s_pow(&self, c: &Q) -> Q {
        pow_q(c, -self.s)
    }
    fn pair(&self, a: i64, b: i64) -> Result<Q> {
        if a * self.s - b <= 0 {
            return Err(Error::Pole { a, b, s: self.s as f64 });
        }
        let x = self.p_pow(b, a);
        Ok(&x / (Q::one() - &x))
    }
}

/// Value of an integer polynomial (low degree first) at `p`.
pub(crate) fn poly_at(coeffs: &[i64], p: u64) -> Q {
    coeffs.iter().rev().fold(Q::zero(), |acc, &c| acc * qi(p as i64) + qi(c))
}
