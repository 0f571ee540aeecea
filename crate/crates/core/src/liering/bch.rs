use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::ModMatrix;
use crate::error::{Error, Result};
use crate::numtheory::{inv_mod, mul_mod, reduce_i64};
use crate::rational::Q;

/// A Lie series in two letters: right-normed brackets
/// `[w_1, [w_2, ..., [w_{n-1}, w_n]]]` of words over `{X = 0, Y = 1}` with
/// rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LieSeries {
    pub terms: BTreeMap<Vec<u8>, Q>,
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Dynkin's form of the Campbell-Hausdorff series up to total degree `order`:
/// `sum_m (-1)^{m-1}/m sum 1/(sum (r_i + s_i)) [X^{r_1} Y^{s_1} ... X^{r_m} Y^{s_m}] / prod r_i! s_i!`,
/// keeping only the words whose right-normed bracket can be nonzero
/// (`s_m = 1`, or `s_m = 0` and `r_m = 1`), merged so every bracket ends in `[X, Y]`.
pub fn bch_series(order: usize) -> LieSeries {
    let mut terms: BTreeMap<Vec<u8>, Q> = BTreeMap::new();
    // depth-first over sequences of pairs (r_i, s_i) with r_i + s_i > 0
    fn rec(
        pairs: &mut Vec<(usize, usize)>,
        used: usize,
        order: usize,
        terms: &mut BTreeMap<Vec<u8>, Q>,
    ) {
        if let Some(&(r, s)) = pairs.last() {
            if s == 1 || (s == 0 && r == 1) {
                let m = pairs.len();
                let mut word = Vec::with_capacity(used);
                let mut den = BigInt::from(m) * BigInt::from(used);
                for &(r, s) in pairs.iter() {
                    word.extend(std::iter::repeat_n(0u8, r));
                    word.extend(std::iter::repeat_n(1u8, s));
                    den *= factorial(r) * factorial(s);
                }
                let sign = if m % 2 == 1 { BigInt::one() } else { -BigInt::one() };
                let c = Q::new(sign, den);
                let e = terms.entry(word).or_insert_with(Q::zero);
                *e += c;
            }
        }
        for total in 1..=order - used {
            for r in 0..=total {
                pairs.push((r, total - r));
                rec(pairs, used + total, order, terms);
                pairs.pop();
            }
        }
    }
    rec(&mut Vec::new(), 0, order, &mut terms);
    // canonical form: the innermost bracket is [X, Y]
    let mut canonical: BTreeMap<Vec<u8>, Q> = BTreeMap::new();
    for (mut w, c) in terms {
        let n = w.len();
        if n >= 2 && w[n - 1] == w[n - 2] {
            continue;
        }
        let c = if n >= 2 && w[n - 1] == 0 {
            w.swap(n - 1, n - 2);
            -c
        } else {
            c
        };
        *canonical.entry(w).or_insert_with(Q::zero) += c;
    }
    canonical.retain(|_, c| !c.is_zero());
    LieSeries { terms: canonical }
}

/// The operations a Lie ring over `Z/m` must supply to evaluate Lie series.
pub trait LieOps {
    type Elem: Clone;
    fn modulus(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, a: &Self::Elem, c: u64) -> Self::Elem;
    fn bracket(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

impl LieOps for u64 {
    type Elem = ModMatrix;

    fn modulus(&self) -> u64 {
        *self
    }

    fn zero(&self) -> ModMatrix {
        ModMatrix::zero(0, *self)
    }

    fn add(&self, a: &ModMatrix, b: &ModMatrix) -> ModMatrix {
        if a.n == 0 {
            return b.clone();
        }
        a.add(b)
    }

    fn scale(&self, a: &ModMatrix, c: u64) -> ModMatrix {
        a.scale(c)
    }

    fn bracket(&self, a: &ModMatrix, b: &ModMatrix) -> ModMatrix {
        a.bracket(b)
    }

    fn is_zero(&self, a: &ModMatrix) -> bool {
        a.is_zero()
    }
}

/// A Lie series compiled for a modulus: a straight-line program computing
/// every needed right-normed bracket once, then a weighted sum.
#[derive(Clone, Debug)]
pub struct CompiledSeries {
    /// Slot `i + 2` holds `[letter, slot]`; slots 0 and 1 are `X` and `Y`.
    steps: Vec<(u8, usize)>,
    /// `(slot, coefficient mod m)`.
    output: Vec<(usize, u64)>,
    pub modulus: u64,
}

fn q_mod(c: &Q, m: u64) -> Result<u64> {
    let num = (c.numer() % BigInt::from(m)).to_i64().expect("reduced numerator");
    let den_big = c.denom().abs() % BigInt::from(m);
    let den = den_big.to_u64().expect("reduced denominator");
    let inv = inv_mod(den, m).ok_or_else(|| {
        Error::Domain(format!("denominator {} is not invertible modulo {m}", c.denom()))
    })?;
    Ok(mul_mod(reduce_i64(num, m), inv, m))
}

impl LieSeries {
    pub fn compile(&self, m: u64) -> Result<CompiledSeries> {
        let mut slots: HashMap<Vec<u8>, usize> = HashMap::new();
        slots.insert(vec![0], 0);
        slots.insert(vec![1], 1);
        let mut steps = Vec::new();
        let mut output = Vec::new();
        fn slot_of(w: &[u8], slots: &mut HashMap<Vec<u8>, usize>, steps: &mut Vec<(u8, usize)>) -> usize {
            if let Some(&s) = slots.get(w) {
                return s;
            }
            let inner = slot_of(&w[1..], slots, steps);
            steps.push((w[0], inner));
            let s = steps.len() + 1;
            slots.insert(w.to_vec(), s);
            s
        }
        for (w, c) in &self.terms {
            let cm = q_mod(c, m)?;
            if cm != 0 {
                output.push((slot_of(w, &mut slots, &mut steps), cm));
            }
        }
        Ok(CompiledSeries { steps, output, modulus: m })
    }
}

impl CompiledSeries {
    /// Slot `i + 2` is `[slot letter, slot inner]` for `(letter, inner) = steps()[i]`.
    pub fn steps(&self) -> &[(u8, usize)] {
        &self.steps
    }

    /// `(slot, coefficient)` pairs of the weighted sum.
    pub fn output(&self) -> &[(usize, u64)] {
        &self.output
    }

    pub fn eval<L: LieOps>(&self, ops: &L, x: &L::Elem, y: &L::Elem) -> L::Elem {
        let mut vals: Vec<L::Elem> = Vec::with_capacity(self.steps.len() + 2);
        vals.push(x.clone());
        vals.push(y.clone());
        for &(letter, inner) in &self.steps {
            let v = ops.bracket(&vals[letter as usize], &vals[inner]);
            vals.push(v);
        }
        let mut acc = ops.zero();
        for &(slot, c) in &self.output {
            acc = ops.add(&acc, &ops.scale(&vals[slot], c));
        }
        acc
    }
}

/// All right-normed brackets of length `len` in `x`, `y` vanish.
pub fn brackets_vanish<L: LieOps>(ops: &L, x: &L::Elem, y: &L::Elem, len: usize) -> bool {
    let mut level: Vec<L::Elem> = vec![x.clone(), y.clone()];
    for _ in 1..len {
        let mut next = Vec::new();
        for v in &level {
            for g in [x, y] {
                let b = ops.bracket(g, v);
                if !ops.is_zero(&b) {
                    next.push(b);
                }
            }
        }
        if next.is_empty() {
            return true;
        }
        level = next;
    }
    level.iter().all(|v| ops.is_zero(v))
}

/// `log(exp A exp B)` by the Campbell-Hausdorff series truncated at degree
/// `order`. Requires `order < p` and that brackets of length `order + 1` vanish.
pub fn bch(a: &ModMatrix, b: &ModMatrix, order: usize, p: u64) -> Result<ModMatrix> {
    if order as u64 >= p {
        return Err(Error::Domain(format!("truncation order {order} must be below p = {p}")));
    }
    let m = a.m;
    if !brackets_vanish(&m, a, b, order + 1) {
        return Err(Error::Precondition(format!(
            "brackets of length {} do not vanish: truncation would not be exact",
            order + 1
        )));
    }
    let series = bch_series(order.max(1)).compile(m)?;
    Ok(series.eval(&m, a, b))
}

#[cfg(test)]
mod tests {
    use super::super::matrix::{exp_truncated, log_truncated};
    use super::*;
    use crate::rational::q;
    use rand::{Rng, SeedableRng};

    #[test]
    fn low_degree_coefficients() {
        let s = bch_series(3);
        assert_eq!(s.terms[&vec![0]], q(1, 1));
        assert_eq!(s.terms[&vec![1]], q(1, 1));
        assert_eq!(s.terms[&vec![0, 1]], q(1, 2));
        // degree 3: (1/12)[X,[X,Y]] - (1/12)[Y,[X,Y]]
        assert_eq!(s.terms[&vec![0, 0, 1]], q(1, 12));
        assert_eq!(s.terms[&vec![1, 0, 1]], q(-1, 12));
        assert_eq!(s.terms.len(), 5);
        // degree 4: -(1/24)[Y,[X,[X,Y]]], and [X,[Y,[X,Y]]] = [Y,[X,[X,Y]]]
        let s4 = bch_series(4);
        let deg4: Vec<_> = s4.terms.iter().filter(|(w, _)| w.len() == 4).collect();
        assert_eq!(deg4, vec![(&vec![0, 1, 0, 1], &q(-1, 48)), (&vec![1, 0, 0, 1], &q(-1, 48))]);
    }

    fn strictly_upper<R: Rng>(rng: &mut R, n: usize, m: u64) -> ModMatrix {
        let mut a = ModMatrix::zero(n, m);
        for i in 0..n {
            for j in i + 1..n {
                a.a[i * n + j] = rng.gen_range(0..m);
            }
        }
        a
    }

    #[test]
    fn examples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let a = strictly_upper(&mut rng, 3, 7);
        assert_eq!(bch(&a, &ModMatrix::zero(3, 7), 3, 7).unwrap(), a);
        // class 2: A + B + [A,B]/2
        let b = strictly_upper(&mut rng, 3, 7);
        let expect = a.add(&b).add(&a.bracket(&b).scale(4));
        assert_eq!(bch(&a, &b, 2, 7).unwrap(), expect);
        assert!(matches!(bch(&a, &b, 7, 7), Err(Error::Domain(_))));
        let c = strictly_upper(&mut rng, 4, 7);
        let d = strictly_upper(&mut rng, 4, 7);
        assert!(matches!(bch(&c, &d, 1, 7), Err(Error::Precondition(_))));
        let oracle = log_truncated(&exp_truncated(&c, 7).unwrap().mul(&exp_truncated(&d, 7).unwrap()), 7).unwrap();
        assert_eq!(bch(&c, &d, 3, 7).unwrap(), oracle);
    }
}
