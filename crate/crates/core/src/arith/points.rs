use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::reduce_i64;

/// `coeff * prod_i x_i^{exps[i]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: i64,
    pub exps: Vec<u32>,
}

/// A multivariate integer polynomial as a list of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPoly {
    pub terms: Vec<Monomial>,
}

impl IntPoly {
    pub fn new(terms: Vec<(i64, Vec<u32>)>) -> Self {
        Self {
            terms: terms.into_iter().map(|(coeff, exps)| Monomial { coeff, exps }).collect(),
        }
    }
}

/// The zero set of a list of integer polynomials in affine `n`-space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineVarietySpec {
    pub n: usize,
    #[serde(default)]
    pub polynomials: Vec<IntPoly>,
}

pub const MAX_AMBIENT_DIM: usize = 6;

impl AffineVarietySpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_AMBIENT_DIM {
            return Err(Error::InvalidInput(format!(
                "ambient dimension {} outside 1..={MAX_AMBIENT_DIM}",
                self.n
            )));
        }
        for poly in &self.polynomials {
            for m in &poly.terms {
                if m.exps.len() > self.n {
                    return Err(Error::InvalidInput(format!(
                        "monomial with {} exponents in dimension {}",
                        m.exps.len(),
                        self.n
                    )));
                }
            }
        }
        Ok(())
    }

    /// Product variety on disjoint variable sets.
    pub fn product(&self, other: &Self) -> Self {
        let mut polynomials = self.polynomials.clone();
        for poly in &other.polynomials {
            polynomials.push(IntPoly {
                terms: poly
                    .terms
                    .iter()
                    .map(|m| {
                        let mut exps = vec![0; self.n];
                        exps.extend(&m.exps);
                        Monomial { coeff: m.coeff, exps }
                    })
                    .collect(),
            });
        }
        Self { n: self.n + other.n, polynomials }
    }
}

/// Number of `F_p`-points, by exhaustive enumeration of `F_p^n`.
pub fn count_points(v: &AffineVarietySpec, p: u64, budget: u64) -> Result<u64> {
    v.validate()?;
    let size = (p as u128).pow(v.n as u32);
    if size > budget as u128 {
        return Err(Error::SizeExceeded { what: format!("{p}^{} points", v.n), cap: budget });
    }
    // tables[i][x][e] = x^e mod p, up to the largest exponent of variable i
    let max_exp: Vec<u32> = (0..v.n)
        .map(|i| {
            v.polynomials
                .iter()
                .flat_map(|q| q.terms.iter().map(move |m| m.exps.get(i).copied().unwrap_or(0)))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let tables: Vec<Vec<Vec<u64>>> = max_exp
        .iter()
        .map(|&e| {
            (0..p)
                .map(|x| {
                    let mut row = Vec::with_capacity(e as usize + 1);
                    let mut acc = 1 % p;
                    for _ in 0..=e {
                        row.push(acc);
                        acc = acc * x % p;
                    }
                    row
                })
                .collect()
        })
        .collect();
    let polys: Vec<Vec<(u64, Vec<u32>)>> = v
        .polynomials
        .iter()
        .map(|q| q.terms.iter().map(|m| (reduce_i64(m.coeff, p), m.exps.clone())).collect())
        .collect();
    let mut x = vec![0u64; v.n];
    let mut count = 0u64;
    loop {
        let vanishes = polys.iter().all(|terms| {
            let mut s = 0u64;
            for (c, exps) in terms {
                let mut t = *c;
                for (i, &e) in exps.iter().enumerate() {
                    t = t * tables[i][x[i] as usize][e as usize] % p;
                }
                s += t;
            }
            s.is_multiple_of(p)
        });
        count += vanishes as u64;
        let mut i = 0;
        loop {
            if i == v.n {
                return Ok(count);
            }
            x[i] += 1;
            if x[i] < p {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn curve(terms: Vec<(i64, Vec<u32>)>) -> AffineVarietySpec {
        AffineVarietySpec { n: 2, polynomials: vec![IntPoly::new(terms)] }
    }

    #[test]
    fn count_examples() {
        let point = AffineVarietySpec { n: 1, polynomials: vec![IntPoly::new(vec![(1, vec![1])])] };
        assert_eq!(count_points(&point, 7, 1_000).unwrap(), 1);
        let plane = AffineVarietySpec { n: 2, polynomials: vec![] };
        assert_eq!(count_points(&plane, 5, 1_000).unwrap(), 25);
        // y^2 - x^3 + x
        let e = curve(vec![(1, vec![0, 2]), (-1, vec![3, 0]), (1, vec![1, 0])]);
        assert_eq!(count_points(&e, 5, 1_000).unwrap(), 7);
        let axes = curve(vec![(1, vec![1, 1])]);
        assert_eq!(count_points(&axes, 11, 1_000).unwrap(), 21);
        assert!(matches!(count_points(&plane, 101, 1_000), Err(Error::SizeExceeded { .. })));
    }

    #[test]
    fn multiplicative_on_products() {
        let e = curve(vec![(1, vec![0, 2]), (-1, vec![3, 0]), (1, vec![1, 0])]);
        let circle = curve(vec![(1, vec![2, 0]), (1, vec![0, 2]), (-1, vec![])]);
        let prod = e.product(&circle);
        for p in [3u64, 5, 7] {
            let a = count_points(&e, p, 1 << 20).unwrap();
            let b = count_points(&circle, p, 1 << 20).unwrap();
            assert_eq!(count_points(&prod, p, 1 << 20).unwrap(), a * b);
        }
    }
}
