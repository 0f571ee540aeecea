//! Exact arithmetic in `Z[zeta_n]`, in the power basis modulo the
//! cyclotomic polynomial `Phi_n`.

use std::fmt;

use crate::numtheory::{gcd, mul_mod, reduce_i64};

/// Integer coefficients of `Phi_n`, constant term first.
pub fn cyclotomic_poly(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_div(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut quot = vec![0i64; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &b) in den.iter().enumerate() {
            rem[i + j] -= c * b;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// An element of `Z[zeta_n]`: coefficients of `1, zeta, ..., zeta^{phi-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Cyc(pub Vec<i64>);

impl Cyc {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// The rational integer value, if the element is one.
    pub fn as_integer(&self) -> Option<i64> {
        if self.0[1..].iter().all(|&c| c == 0) {
            Some(self.0[0])
        } else {
            None
        }
    }
}

/// The field `Q(zeta_n)` with precomputed reductions of `zeta^j`.
#[derive(Clone, Debug)]
pub struct CycField {
    order: u32,
    phi: usize,
    /// `powers[j]` is `zeta^j` in the power basis, for `0 <= j < n`.
    powers: Vec<Cyc>,
}

impl CycField {
    pub fn new(order: u32) -> Self {
        assert!(order >= 1);
        let phi_poly = cyclotomic_poly(order);
        let phi = phi_poly.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..order {
            powers.push(Cyc(cur.clone()));
            // multiply by x and reduce x^phi = -(Phi - x^phi)
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] -= top * phi_poly[i];
                }
            }
        }
        Self { order, phi, powers }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn zero(&self) -> Cyc {
        Cyc(vec![0; self.phi])
    }

    pub fn int(&self, v: i64) -> Cyc {
        let mut c = self.zero();
        c.0[0] = v;
        c
    }

    /// `zeta^j` for any integer `j`.
    pub fn root(&self, j: i64) -> Cyc {
        self.powers[j.rem_euclid(self.order as i64) as usize].clone()
    }

    /// `sum_j counts[j] zeta^{j * step}`.
    pub fn from_root_counts(&self, counts: &[i64], step: u32) -> Cyc {
        let mut out = vec![0i64; self.phi];
        for (j, &m) in counts.iter().enumerate() {
            if m != 0 {
                let idx = (j as u64 * step as u64 % self.order as u64) as usize;
                for (o, &c) in out.iter_mut().zip(&self.powers[idx].0) {
                    *o += m * c;
                }
            }
        }
        Cyc(out)
    }

    pub fn add(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn scale(&self, a: &Cyc, k: i64) -> Cyc {
        Cyc(a.0.iter().map(|x| x * k).collect())
    }

    pub fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        let mut prod = vec![0i128; 2 * self.phi];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] += x as i128 * y as i128;
            }
        }
        let mut out = vec![0i128; self.phi];
        for (d, &c) in prod.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if d < self.phi {
                out[d] += c;
            } else {
                let red = &self.powers[d % self.order as usize].0;
                for (o, &r) in out.iter_mut().zip(red) {
                    *o += c * r as i128;
                }
            }
        }
        Cyc(out
            .into_iter()
            .map(|v| i64::try_from(v).expect("cyclotomic coefficient overflow"))
            .collect())
    }

    /// The Galois automorphism `zeta -> zeta^a`, `gcd(a, n) = 1`.
    pub fn galois(&self, x: &Cyc, a: i64) -> Cyc {
        debug_assert_eq!(gcd(a.rem_euclid(self.order as i64) as u64, self.order as u64), 1);
        let mut out = vec![0i64; self.phi];
        for (i, &c) in x.0.iter().enumerate() {
            if c != 0 {
                let r = &self.powers[(i as i64 * a).rem_euclid(self.order as i64) as usize].0;
                for (o, &v) in out.iter_mut().zip(r) {
                    *o += c * v;
                }
            }
        }
        Cyc(out)
    }

    /// Complex conjugation.
    pub fn conj(&self, x: &Cyc) -> Cyc {
        self.galois(x, -1)
    }

    /// Reinterprets an element of `Q(zeta_m)`, `m | n`, in this field.
    pub fn embed(&self, from: &CycField, x: &Cyc) -> Cyc {
        assert_eq!(self.order % from.order, 0, "field order must divide");
        self.from_root_counts(&x.0, self.order / from.order)
    }

    /// Image under `zeta -> z` in `F_ell`, `z` a primitive `n`-th root of unity.
    pub fn reduce(&self, x: &Cyc, ell: u64, z: u64) -> u64 {
        let mut acc = 0u64;
        for &c in x.0.iter().rev() {
            acc = (mul_mod(acc, z, ell) + reduce_i64(c, ell)) % ell;
        }
        acc
    }

    /// Floating-point value under `zeta -> exp(2 pi i / n)`.
    pub fn to_complex(&self, x: &Cyc) -> (f64, f64) {
        let t = 2.0 * std::f64::consts::PI / self.order as f64;
        x.0.iter().enumerate().fold((0.0, 0.0), |(re, im), (i, &c)| {
            let a = t * i as f64;
            (re + c as f64 * a.cos(), im + c as f64 * a.sin())
        })
    }

    pub fn display(&self, x: &Cyc) -> String {
        let mut parts = Vec::new();
        for (i, &c) in x.0.iter().enumerate() {
            if c != 0 {
                parts.push(match i {
                    0 => format!("{c}"),
                    1 => format!("{c}*z"),
                    _ => format!("{c}*z^{i}"),
                });
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}
