use num_traits::Signed;
use serde::Serialize;

use super::empirical::{empirical_abscissa, AbscissaEstimate, BisectionConfig};
use super::poly::DirichletPoly;
use crate::error::{Error, Result};
use crate::rational::{format_q, pow_q, to_f64, Q};

/// Something that can be evaluated at a real point of its convergence region.
pub trait SeriesEval {
    fn eval_at(&self, s: &Q) -> Result<f64>;

    /// Exact value, when available (used to decide boundary cases exactly).
    fn eval_exact(&self, _s: &Q) -> Option<Q> {
        None
    }
}

impl SeriesEval for DirichletPoly {
    fn eval_at(&self, s: &Q) -> Result<f64> {
        Ok(super::poly::eval_dirichlet(self, s))
    }

    fn eval_exact(&self, s: &Q) -> Option<Q> {
        if s.is_integer() {
            i64::try_from(s.numer()).ok().map(|k| DirichletPoly::eval_exact(self, k))
        } else {
            None
        }
    }
}

impl<F: Fn(&Q) -> Result<f64>> SeriesEval for F {
    fn eval_at(&self, s: &Q) -> Result<f64> {
        self(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceWitness {
    pub index: usize,
    pub s: String,
    pub a: f64,
    pub b: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub witness: Option<EquivalenceWitness>,
    /// Points of the grid checked for every index; the check is sampled, not universal.
    pub grid: Vec<String>,
}

const SLACK: f64 = 1e-12;

/// Checks `C^{-1-s} b_n(s) <= a_n(s) <= C^{1+s} b_n(s)` for every index and
/// grid point.
pub fn check_equivalence<A: SeriesEval, B: SeriesEval>(
    family_a: &[A],
    family_b: &[B],
    c: &Q,
    s_grid: &[Q],
) -> Result<EquivalenceReport> {
    if s_grid.is_empty() {
        return Err(Error::Undefined("empty evaluation grid".into()));
    }
    if family_a.len() != family_b.len() {
        return Err(Error::InvalidInput("families have different index sets".into()));
    }
    if !c.is_positive() {
        return Err(Error::InvalidInput("equivalence constant must be positive".into()));
    }
    let grid = s_grid.iter().map(format_q).collect();
    for (index, (a, b)) in family_a.iter().zip(family_b).enumerate() {
        for s in s_grid {
            let ok = match (a.eval_exact(s), b.eval_exact(s)) {
                (Some(x), Some(y)) => {
                    let k = i64::try_from(s.numer()).expect("integer grid point") + 1;
                    let up = pow_q(c, k);
                    let down = pow_q(c, -k);
                    &y * &down <= x && x <= &y * &up
                }
                _ => {
                    let x = a.eval_at(s)?;
                    let y = b.eval_at(s)?;
                    let e = 1.0 + to_f64(s);
                    let cf = to_f64(c);
                    let tol = SLACK * x.abs().max(y.abs());
                    y * cf.powf(-e) <= x + tol && x <= y * cf.powf(e) + tol
                }
            };
            if !ok {
                return Ok(EquivalenceReport {
                    equivalent: false,
                    witness: Some(EquivalenceWitness {
                        index,
                        s: format_q(s),
                        a: a.eval_at(s)?,
                        b: b.eval_at(s)?,
                    }),
                    grid,
                });
            }
        }
    }
    Ok(EquivalenceReport { equivalent: true, witness: None, grid })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductAbscissaReport {
    pub estimate_a: AbscissaEstimate,
    pub estimate_b: AbscissaEstimate,
    pub tolerance: f64,
    /// `None` when either estimate is inconclusive.
    pub agree: Option<bool>,
}

/// Bisection estimates of the abscissae of `prod_p (1 + a_p(s))` and
/// `prod_p (1 + b_p(s))` over the given primes.
pub fn equiv_products_same_abscissa<FA, FB>(
    a: FA,
    b: FB,
    primes: &[u64],
    cfg: &BisectionConfig,
) -> ProductAbscissaReport
where
    FA: Fn(u64, f64) -> f64 + Sync,
    FB: Fn(u64, f64) -> f64 + Sync,
{
    let estimate_a = empirical_abscissa(primes, &a, cfg);
    let estimate_b = empirical_abscissa(primes, &b, cfg);
    let agree = match (&estimate_a, &estimate_b) {
        (AbscissaEstimate::Value { value: x }, AbscissaEstimate::Value { value: y }) => {
            Some((x - y).abs() <= cfg.tol)
        }
        (AbscissaEstimate::NegInfinity, AbscissaEstimate::NegInfinity) => Some(true),
        (AbscissaEstimate::Inconclusive { .. }, _) | (_, AbscissaEstimate::Inconclusive { .. }) => None,
        _ => Some(false),
    };
    ProductAbscissaReport { estimate_a, estimate_b, tolerance: cfg.tol, agree }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::primes_up_to;
    use crate::rational::{q, qi};

    fn grid() -> Vec<Q> {
        vec![qi(0), qi(1), qi(2)]
    }

    #[test]
    fn reflexive_and_constant_ratio() {
        let a = vec![DirichletPoly::from_counts([(1, 2), (2, 1)]), DirichletPoly::from_counts([(3, 1)])];
        let r = check_equivalence(&a, &a, &qi(1), &grid()).unwrap();
        assert!(r.equivalent);
        let doubled: Vec<_> = a.iter().map(|p| p.scale(&qi(2))).collect();
        assert!(check_equivalence(&doubled, &a, &qi(2), &grid()).unwrap().equivalent);
        assert!(check_equivalence(&a, &doubled, &qi(2), &grid()).unwrap().equivalent);
        assert!(!check_equivalence(&doubled, &a, &q(3, 2), &[qi(0)]).unwrap().equivalent);
        assert!(matches!(check_equivalence(&a, &a, &qi(1), &[]), Err(Error::Undefined(_))));
    }

    #[test]
    fn growing_ratio_has_witness() {
        // a_n(s) = p_n^s b_n(s) with b_n = p_n^{-s}, i.e. a_n = 1
        let primes = [2u64, 3, 5, 7, 11, 13];
        let a: Vec<_> = primes.iter().map(|_| |_: &Q| Ok(1.0)).collect();
        let b: Vec<_> = primes
            .iter()
            .map(|&p| move |s: &Q| Ok((p as f64).powf(-to_f64(s))))
            .collect();
        let r = check_equivalence(&a, &b, &qi(3), &[qi(1), qi(2)]).unwrap();
        assert!(!r.equivalent);
        let w = r.witness.unwrap();
        // first index failing 1 <= C^{1+s} p^{-s}: p = 7 at s = 2 (49 > 27)
        assert_eq!(primes[w.index], 7);
        assert_eq!(w.s, "2");
    }

    #[test]
    fn constant_factor_does_not_move_abscissa() {
        let primes = primes_up_to(200_000);
        let cfg = BisectionConfig::default();
        let r = equiv_products_same_abscissa(
            |p, s| 2.0 * (p as f64).powf(-s),
            |p, s| (p as f64).powf(-s),
            &primes,
            &cfg,
        );
        assert_eq!(r.agree, Some(true));
        match r.estimate_b {
            AbscissaEstimate::Value { value } => assert!((value - 1.0).abs() < 0.05, "{value}"),
            other => panic!("{other:?}"),
        }
        let z = equiv_products_same_abscissa(|_, _| 0.0, |_, _| 0.0, &primes, &cfg);
        assert!(matches!(z.estimate_a, AbscissaEstimate::NegInfinity));
        assert_eq!(z.agree, Some(true));
    }

    proptest::proptest! {
        #[test]
        fn symmetric(counts_a in proptest::collection::vec((1u64..20, 1u64..9), 1..5),
                     factor in 1u64..4, c_num in 1i64..5) {
            let a = vec![DirichletPoly::from_counts(counts_a.clone())];
            let b = vec![a[0].scale(&qi(factor as i64))];
            let c = q(c_num, 1);
            let g = vec![qi(0), qi(1), qi(3)];
            let ab = check_equivalence(&a, &b, &c, &g).unwrap().equivalent;
            let ba = check_equivalence(&b, &a, &c, &g).unwrap().equivalent;
            proptest::prop_assert_eq!(ab, ba);
        }
    }
}
