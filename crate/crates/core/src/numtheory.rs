//! Small-integer number theory: modular arithmetic, primes, and dense
//! polynomials over prime fields.

use rand::Rng;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if (a | b) >> 32 == 0 {
        a * b % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = ((a % m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub fn reduce_i64(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes `<= bound` (sieve of Eratosthenes).
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Prime factorization by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// If `n = p^a` for a prime `p` and `a >= 1`, returns `(p, a)`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let f = factorize(n);
    if f.len() == 1 {
        Some(f[0])
    } else {
        None
    }
}

/// Smallest prime `q > lower` with `q ≡ 1 (mod e)`.
pub fn prime_one_mod(e: u64, lower: u64) -> u64 {
    let mut q = (lower / e + 1) * e + 1;
    while !is_prime(q) {
        q += e;
    }
    q
}

/// A generator of the multiplicative group of `F_q`.
pub fn primitive_root(q: u64) -> u64 {
    let factors = factorize(q - 1);
    (2..q)
        .find(|&g| factors.iter().all(|&(f, _)| pow_mod(g, (q - 1) / f, q) != 1))
        .expect("prime field has a generator")
}

/// A primitive `n`-th root of unity in `F_q`; requires `n | q - 1`.
pub fn root_of_unity(n: u64, q: u64) -> u64 {
    assert_eq!((q - 1) % n, 0, "{n} does not divide {q} - 1");
    pow_mod(primitive_root(q), (q - 1) / n, q)
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Dense polynomial over `F_q`, coefficients low degree first, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    pub q: u64,
    pub c: Vec<u64>,
}

impl FpPoly {
    pub fn new(q: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= q;
        }
        let mut p = FpPoly { q, c };
        p.trim();
        p
    }

    pub fn from_i64(q: u64, c: &[i64]) -> Self {
        Self::new(q, c.iter().map(|&a| reduce_i64(a, q)).collect())
    }

    pub fn x(q: u64) -> Self {
        Self::new(q, vec![0, 1])
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c
            .iter()
            .rev()
            .fold(0, |acc, &a| (mul_mod(acc, x, self.q) + a) % self.q)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        let q = self.q;
        let c = (0..n)
            .map(|i| {
                let a = *self.c.get(i).unwrap_or(&0);
                let b = *other.c.get(i).unwrap_or(&0);
                (a + q - b) % q
            })
            .collect();
        Self::new(q, c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(self.q, vec![]);
        }
        let q = self.q;
        let mut acc = vec![0u128; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                acc[i + j] += a as u128 * b as u128;
                if acc[i + j] >= 1u128 << 126 {
                    acc[i + j] %= q as u128;
                }
            }
        }
        Self::new(q, acc.into_iter().map(|v| (v % q as u128) as u64).collect())
    }

    /// `(quotient, remainder)`.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let q = self.q;
        let dd = d.degree().expect("division by zero polynomial");
        let inv_lead = inv_mod(d.lead(), q).expect("leading coefficient invertible");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::new(q, vec![]), self.clone());
        }
        let mut quot = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let coef = mul_mod(r[i], inv_lead, q);
            if coef == 0 {
                continue;
            }
            quot[i - dd] = coef;
            for (j, &b) in d.c.iter().enumerate() {
                let idx = i - dd + j;
                r[idx] = (r[idx] + q - mul_mod(coef, b, q)) % q;
            }
        }
        (Self::new(q, quot), Self::new(q, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lead(), self.q).expect("field");
        Self::new(self.q, self.c.iter().map(|&a| mul_mod(a, inv, self.q)).collect())
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::new(self.q, vec![1]).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(n) => n as u64,
        };
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let x = Self::x(self.q);
        let frob = |k: u64| -> Self {
            let mut t = x.clone();
            for _ in 0..k {
                t = t.pow_mod(self.q, &f);
            }
            t
        };
        for (r, _) in factorize(n) {
            let t = frob(n / r).sub(&x);
            if f.gcd(&t).degree() != Some(0) {
                return false;
            }
        }
        frob(n).sub(&x).rem(&f).is_zero()
    }

    /// Distinct roots in `F_q` of a nonzero polynomial, sorted ascending.
    /// Uses Cantor-Zassenhaus splitting driven by the supplied RNG.
    pub fn roots<R: Rng>(&self, rng: &mut R) -> Vec<u64> {
        let q = self.q;
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let x = Self::x(q);
        let mut split = if q < 64 {
            // tiny fields: brute force
            return (0..q).filter(|&a| f.eval(a) == 0).collect();
        } else {
            let xq = x.pow_mod(q, &f);
            f.gcd(&xq.sub(&x))
        };
        let mut out = Vec::new();
        if split.c.first() == Some(&0) && split.degree().unwrap_or(0) >= 1 {
            out.push(0);
            split = split.divrem(&x).0;
        }
        let mut stack = vec![split];
        while let Some(g) = stack.pop() {
            match g.degree() {
                None | Some(0) => continue,
                Some(1) => {
                    let g = g.monic();
                    out.push((q - g.c[0]) % q);
                }
                Some(_) => loop {
                    let a = rng.gen_range(0..q);
                    let t = Self::new(q, vec![a, 1]).pow_mod((q - 1) / 2, &g);
                    let h = g.gcd(&t.sub(&Self::new(q, vec![1])));
                    let dh = h.degree().unwrap_or(0);
                    if dh > 0 && dh < g.degree().unwrap() {
                        let other = g.divrem(&h).0;
                        stack.push(h);
                        stack.push(other);
                        break;
                    }
                },
            }
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn modular_basics() {
        assert_eq!(inv_mod(2, 7), Some(4));
        assert_eq!(inv_mod(6, 9), None);
        assert_eq!(pow_mod(3, 4, 7), 4);
        assert!(is_prime(1_000_003));
        assert!(!is_prime(1_000_001));
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(totient(72), 24);
        assert_eq!(prime_power(125), Some((5, 3)));
        assert_eq!(prime_power(12), None);
        let q = prime_one_mod(24, 1 << 30);
        assert!(is_prime(q) && q % 24 == 1);
        let z = root_of_unity(24, q);
        assert_eq!(pow_mod(z, 24, q), 1);
        assert_ne!(pow_mod(z, 12, q), 1);
        assert_ne!(pow_mod(z, 8, q), 1);
    }

    #[test]
    fn irreducibility() {
        // x^2 + 1 has no root mod 3, splits mod 5
        assert!(FpPoly::from_i64(3, &[1, 0, 1]).is_irreducible());
        assert!(!FpPoly::from_i64(5, &[1, 0, 1]).is_irreducible());
        // x^3 - 2 mod 7: 2 is not a cube mod 7
        assert!(FpPoly::from_i64(7, &[-2, 0, 0, 1]).is_irreducible());
        assert!(!FpPoly::from_i64(5, &[-2, 0, 0, 1]).is_irreducible());
        // (x^2+1)^2 mod 3 is reducible despite having no roots
        let f = FpPoly::from_i64(3, &[1, 0, 1]);
        assert!(!f.mul(&f).is_irreducible());
    }

    #[test]
    fn roots_of_split_polynomial() {
        let q = 1_000_003;
        let mut f = FpPoly::new(q, vec![1]);
        for r in [5u64, 17, 99_999, 0] {
            f = f.mul(&FpPoly::new(q, vec![(q - r) % q, 1]));
        }
        // an irreducible quadratic factor contributes no roots
        f = f.mul(&FpPoly::from_i64(q, &[-2, 0, 1]).mul(&FpPoly::new(q, vec![1])));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let roots = f.roots(&mut rng);
        let expected: Vec<u64> = {
            let mut v = vec![0, 5, 17, 99_999];
            // include square roots of 2 if they exist
            let sq: Vec<u64> = (1..q).filter(|&a| mul_mod(a, a, q) == 2).take(2).collect();
            v.extend(sq);
            v.sort();
            v
        };
        assert_eq!(roots, expected);
    }
}
