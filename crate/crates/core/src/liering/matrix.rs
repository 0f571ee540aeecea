use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{inv_mod, mul_mod, reduce_i64};

/// Square matrix over `Z/m`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModMatrix {
    pub n: usize,
    pub m: u64,
    pub a: Vec<u64>,
}

impl ModMatrix {
    pub fn zero(n: usize, m: u64) -> Self {
        Self { n, m, a: vec![0; n * n] }
    }

    pub fn identity(n: usize, m: u64) -> Self {
        let mut z = Self::zero(n, m);
        for i in 0..n {
            z.a[i * n + i] = 1 % m;
        }
        z
    }

    pub fn from_i64(n: usize, m: u64, entries: &[i64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidInput(format!("expected {} entries, got {}", n * n, entries.len())));
        }
        Ok(Self { n, m, a: entries.iter().map(|&x| reduce_i64(x, m)).collect() })
    }

    /// The matrix unit `E_{ij}` (0-based).
    pub fn unit(n: usize, m: u64, i: usize, j: usize) -> Self {
        let mut z = Self::zero(n, m);
        z.a[i * n + j] = 1 % m;
        z
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let m = self.m;
        Self { n: self.n, m, a: self.a.iter().zip(&o.a).map(|(&x, &y)| (x + y) % m).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let m = self.m;
        Self { n: self.n, m, a: self.a.iter().zip(&o.a).map(|(&x, &y)| (x + m - y) % m).collect() }
    }

    pub fn scale(&self, c: u64) -> Self {
        let m = self.m;
        Self { n: self.n, m, a: self.a.iter().map(|&x| mul_mod(x, c % m, m)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let m = self.m;
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = (out[i * n + j] + mul_mod(x, o.a[k * n + j], m)) % m;
                }
            }
        }
        Self { n, m, a: out }
    }

    /// `[A, B] = AB - BA`.
    pub fn bracket(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn trace_pairing(&self, o: &Self) -> u64 {
        let n = self.n;
        let mut t = 0u64;
        for i in 0..n {
            for k in 0..n {
                t = (t + mul_mod(self.a[i * n + k], o.a[k * n + i], self.m)) % self.m;
            }
        }
        t
    }

    /// Least `j` with `A^j = 0`, if at most `limit`.
    pub fn nilpotency_index(&self, limit: usize) -> Option<usize> {
        let mut pow = Self::identity(self.n, self.m);
        for j in 0..=limit {
            if pow.is_zero() {
                return Some(j);
            }
            pow = pow.mul(self);
        }
        None
    }
}

/// Nilpotency index of `a`, which must be at most `p` so that every `1/j!`
/// in the truncated series is a unit.
fn nilpotent_length(a: &ModMatrix, p: u64) -> Result<usize> {
    a.nilpotency_index(p as usize)
        .ok_or_else(|| Error::Domain(format!("matrix is not nilpotent of index at most p = {p}")))
}

/// Checks `p > 2n` and returns the nilpotency index of `a`.
fn series_length(a: &ModMatrix, p: u64) -> Result<usize> {
    if p <= 2 * a.n as u64 {
        return Err(Error::Domain(format!("need p > 2n, got p = {p}, n = {}", a.n)));
    }
    nilpotent_length(a, p)
}

/// Modular inverse of `j!` modulo `m`, for `j < p`.
fn inv_factorial(j: usize, m: u64) -> u64 {
    let f = (1..=j as u64).fold(1 % m, |acc, i| mul_mod(acc, i % m, m));
    inv_mod(f, m).expect("factorial below p is a unit")
}

/// `exp(A) = sum_{j < N} A^j / j!` for `A^N = 0`, `N < p`, `p > 2n`.
pub fn exp_nilpotent(a: &ModMatrix, p: u64) -> Result<ModMatrix> {
    Ok(exp_terms(a, series_length(a, p)?))
}

/// `log(g) = sum_{j >= 1} (-1)^{j+1} (g - I)^j / j`, truncated where `(g - I)^j = 0`.
pub fn log_unipotent(g: &ModMatrix, p: u64) -> Result<ModMatrix> {
    let u = g.sub(&ModMatrix::identity(g.n, g.m));
    Ok(log_terms(&u, series_length(&u, p)?))
}

/// [`exp_nilpotent`] requiring only that the nilpotency index is at most `p`.
pub fn exp_truncated(a: &ModMatrix, p: u64) -> Result<ModMatrix> {
    Ok(exp_terms(a, nilpotent_length(a, p)?))
}

/// [`log_unipotent`] requiring only that the nilpotency index of `g - I` is at most `p`.
pub fn log_truncated(g: &ModMatrix, p: u64) -> Result<ModMatrix> {
    let u = g.sub(&ModMatrix::identity(g.n, g.m));
    Ok(log_terms(&u, nilpotent_length(&u, p)?))
}

fn exp_terms(a: &ModMatrix, len: usize) -> ModMatrix {
    let mut acc = ModMatrix::identity(a.n, a.m);
    let mut pow = ModMatrix::identity(a.n, a.m);
    for j in 1..len {
        pow = pow.mul(a);
        acc = acc.add(&pow.scale(inv_factorial(j, a.m)));
    }
    acc
}

fn log_terms(u: &ModMatrix, len: usize) -> ModMatrix {
    let mut acc = ModMatrix::zero(u.n, u.m);
    let mut pow = ModMatrix::identity(u.n, u.m);
    for j in 1..len {
        pow = pow.mul(u);
        let c = inv_mod(j as u64 % u.m, u.m).expect("j below p is a unit");
        let term = pow.scale(c);
        acc = if j % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Default cap on the number of enumerated group elements in [`nori_lie`].
pub const NORI_CAP: usize = 100_000;

#[derive(Clone, Debug, Serialize)]
pub struct NoriLie {
    pub p: u64,
    pub n: usize,
    /// Row-reduced basis of the span of `log(g)` over the order-`p` elements.
    pub basis: Vec<ModMatrix>,
    pub order_p_elements: usize,
    pub group_order: usize,
}

impl NoriLie {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// The `F_p`-span of `log(g)` over all elements of order `p` in the group
/// generated by `gens`, asserted to be closed under commutators.
pub fn nori_lie(gens: &[ModMatrix], p: u64, cap: usize) -> Result<NoriLie> {
    let n = gens.first().map(|g| g.n).ok_or_else(|| Error::InvalidInput("no generators".into()))?;
    if p <= 2 * n as u64 {
        return Err(Error::Domain(format!("need p > 2n, got p = {p}, n = {n}")));
    }
    let id = ModMatrix::identity(n, p);
    let gens: Vec<ModMatrix> = gens.iter().map(|g| ModMatrix { n, m: p, a: g.a.iter().map(|&x| x % p).collect() }).collect();
    for g in &gens {
        if pow_matrix(g, p) != id {
            return Err(Error::InvalidInput("generator does not have order p".into()));
        }
    }
    let mut seen = std::collections::HashSet::new();
    let mut elems = vec![id.clone()];
    seen.insert(id.a.clone());
    let mut i = 0;
    while i < elems.len() {
        for g in &gens {
            let y = elems[i].mul(g);
            if seen.insert(y.a.clone()) {
                if elems.len() >= cap {
                    return Err(Error::SizeExceeded { what: "group enumerated for the Nori Lie algebra".into(), cap: cap as u64 });
                }
                elems.push(y);
            }
        }
        i += 1;
    }
    let mut span = Span::new(p);
    let mut count = 0;
    for g in &elems {
        if *g != id && pow_matrix(g, p) == id {
            count += 1;
            span.insert(&log_unipotent(g, p)?.a);
        }
    }
    let basis: Vec<ModMatrix> = span.rows.iter().map(|r| ModMatrix { n, m: p, a: r.clone() }).collect();
    for a in &basis {
        for b in &basis {
            if !span.contains(&a.bracket(b).a) {
                return Err(Error::Internal("span of logarithms is not closed under commutators".into()));
            }
        }
    }
    Ok(NoriLie { p, n, basis, order_p_elements: count, group_order: elems.len() })
}

fn pow_matrix(g: &ModMatrix, mut e: u64) -> ModMatrix {
    let mut acc = ModMatrix::identity(g.n, g.m);
    let mut base = g.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        base = base.mul(&base);
        e >>= 1;
    }
    acc
}

/// Row-reduced span of vectors over `F_p`.
#[derive(Clone, Debug)]
pub struct Span {
    p: u64,
    pub rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new(p: u64) -> Self {
        Self { p, rows: vec![], pivots: vec![] }
    }

    fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut v: Vec<u64> = v.iter().map(|&x| x % p).collect();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = (*x + p - c * r % p) % p;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p;
        let mut v = self.reduce(v);
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(v[piv], p).unwrap();
        for x in v.iter_mut() {
            *x = *x * inv % p;
        }
        for row in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                for (x, &r) in row.iter_mut().zip(&v) {
                    *x = (*x + p - c * r % p) % p;
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(piv);
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        self.rows = order.iter().map(|&i| self.rows[i].clone()).collect();
        self.pivots = order.iter().map(|&i| self.pivots[i]).collect();
        true
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, j: usize) -> ModMatrix {
        ModMatrix::unit(3, 7, i, j)
    }

    #[test]
    fn exp_examples() {
        assert_eq!(exp_nilpotent(&ModMatrix::zero(3, 7), 7).unwrap(), ModMatrix::identity(3, 7));
        let a = e(0, 1);
        assert_eq!(exp_nilpotent(&a, 7).unwrap(), ModMatrix::identity(3, 7).add(&a));
        let a = e(0, 1).add(&e(1, 2));
        // A^2 = E13 and 2^{-1} = 4 mod 7
        let expect = ModMatrix::identity(3, 7).add(&a).add(&e(0, 2).scale(4));
        assert_eq!(exp_nilpotent(&a, 7).unwrap(), expect);
        assert!(matches!(exp_nilpotent(&a, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn log_examples() {
        assert!(log_unipotent(&ModMatrix::identity(3, 7), 7).unwrap().is_zero());
        let g = ModMatrix::identity(3, 7).add(&e(0, 1)).add(&e(0, 2));
        assert_eq!(log_unipotent(&g, 7).unwrap(), e(0, 1).add(&e(0, 2)));
    }

    #[test]
    fn nori_examples() {
        let t = ModMatrix::from_i64(2, 7, &[1, 1, 0, 1]).unwrap();
        let l = nori_lie(std::slice::from_ref(&t), 7, NORI_CAP).unwrap();
        assert_eq!(l.dimension(), 1);
        assert_eq!(l.basis[0], ModMatrix::unit(2, 7, 0, 1));
        let u = ModMatrix::from_i64(2, 7, &[1, 0, 1, 1]).unwrap();
        let l = nori_lie(&[t, u], 7, NORI_CAP).unwrap();
        assert_eq!(l.group_order, 336);
        assert_eq!(l.dimension(), 3);
        let gens = [
            ModMatrix::identity(3, 7).add(&e(0, 1)),
            ModMatrix::identity(3, 7).add(&e(1, 2)),
        ];
        let l = nori_lie(&gens, 7, NORI_CAP).unwrap();
        assert_eq!(l.group_order, 343);
        assert_eq!(l.dimension(), 3);
        assert!(matches!(nori_lie(&gens, 5, NORI_CAP), Err(Error::Domain(_))));
    }
}
