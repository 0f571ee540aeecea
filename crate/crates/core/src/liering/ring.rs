use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::bch::{bch_series, CompiledSeries, LieOps};
use super::matrix::ModMatrix;
use crate::error::{Error, Result};
use crate::groupcore::{FiniteGroup, GroupLaw, DEFAULT_GROUP_CAP};
use crate::numtheory::{inv_mod, is_prime, mul_mod, reduce_i64};

/// A finite nilpotent Lie ring, free of rank `rank` over `Z/p^k`, given by
/// structure constants `[e_i, e_j] = sum_l c_{ij}^l e_l`.
#[derive(Clone, Debug)]
pub struct NilpotentLieRing {
    pub p: u64,
    pub k: u32,
    pub rank: usize,
    modulus: u64,
    /// `(i, j, l, c)` with `i < j` and `c != 0`.
    constants: Vec<(usize, usize, usize, u64)>,
    pub nilpotency_class: usize,
    /// Optional faithful realization by `n x n` matrices over `Z/matrix_modulus`.
    pub matrix_basis: Option<Vec<ModMatrix>>,
}

/// JSON form: `structure` lists `rank * rank` entries, entry `i * rank + j`
/// holding the pairs `[l, c]` of `[e_i, e_j]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LieRingSpec {
    pub p: u64,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<Vec<Vec<[i64; 2]>>>,
    /// Basis matrices, each flattened row-major.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_basis: Option<Vec<Vec<i64>>>,
    /// Modulus of the matrix entries; defaults to `p^k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_modulus: Option<u64>,
}

impl NilpotentLieRing {
    /// Validates antisymmetry, the Jacobi identity, the matrix realization if
    /// any, and computes the nilpotency class, which must be below `p`.
    pub fn new(p: u64, k: u32, rank: usize, structure: &[Vec<(usize, i64)>], matrix_basis: Option<Vec<ModMatrix>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidInput("level k must be at least 1".into()));
        }
        let modulus = p.checked_pow(k).filter(|&m| m < 1 << 31).ok_or_else(|| Error::SizeExceeded {
            what: format!("modulus {p}^{k}"),
            cap: 1 << 31,
        })?;
        if structure.len() != rank * rank {
            return Err(Error::InvalidInput(format!("expected {} structure entries, got {}", rank * rank, structure.len())));
        }
        let mut dense = vec![0u64; rank * rank * rank];
        for (ij, list) in structure.iter().enumerate() {
            for &(l, c) in list {
                if l >= rank {
                    return Err(Error::InvalidInput(format!("basis index {l} out of range")));
                }
                let e = &mut dense[ij * rank + l];
                *e = (*e + reduce_i64(c, modulus)) % modulus;
            }
        }
        for i in 0..rank {
            for j in 0..rank {
                for l in 0..rank {
                    let a = dense[(i * rank + j) * rank + l];
                    let b = dense[(j * rank + i) * rank + l];
                    if !(a + b).is_multiple_of(modulus) {
                        return Err(Error::InvalidInput(format!("[e{i}, e{j}] + [e{j}, e{i}] != 0")));
                    }
                }
            }
        }
        let mut constants = Vec::new();
        for i in 0..rank {
            for j in i + 1..rank {
                for l in 0..rank {
                    let c = dense[(i * rank + j) * rank + l];
                    if c != 0 {
                        constants.push((i, j, l, c));
                    }
                }
            }
        }
        let mut ring = Self { p, k, rank, modulus, constants, nilpotency_class: 0, matrix_basis: None };
        ring.check_jacobi()?;
        ring.nilpotency_class = ring.compute_class()?;
        if let Some(basis) = matrix_basis {
            ring.attach_matrices(basis)?;
        }
        Ok(ring)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of elements, `p^{k rank}`.
    pub fn order(&self) -> Option<u64> {
        self.modulus.checked_pow(self.rank as u32)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.rank];
        v[i] = 1 % self.modulus;
        v
    }

    pub fn structure(&self) -> Vec<Vec<(usize, u64)>> {
        let m = self.modulus;
        let mut out = vec![Vec::new(); self.rank * self.rank];
        for &(i, j, l, c) in &self.constants {
            out[i * self.rank + j].push((l, c));
            out[j * self.rank + i].push((l, (m - c) % m));
        }
        out
    }

    pub fn bracket(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.rank];
        self.bracket_into(x, y, &mut out);
        out
    }

    /// Writes `[x, y]` into `out`, which must be zero.
    fn bracket_into(&self, x: &[u64], y: &[u64], out: &mut [u64]) {
        let m = self.modulus;
        for &(i, j, l, c) in &self.constants {
            let t = (x[i] * y[j] % m + m - x[j] * y[i] % m) % m;
            if t != 0 {
                out[l] = (out[l] + c * t % m) % m;
            }
        }
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).map(|(&a, &b)| (a + b) % self.modulus).collect()
    }

    pub fn scale(&self, x: &[u64], c: u64) -> Vec<u64> {
        x.iter().map(|&a| mul_mod(a, c % self.modulus, self.modulus)).collect()
    }

    pub fn neg(&self, x: &[u64]) -> Vec<u64> {
        x.iter().map(|&a| (self.modulus - a) % self.modulus).collect()
    }

    /// `ad(y)` as a matrix acting on coordinate columns: column `j` is `[y, e_j]`.
    pub fn ad(&self, y: &[u64]) -> ModMatrix {
        let r = self.rank;
        let mut a = ModMatrix::zero(r, self.modulus);
        for j in 0..r {
            let col = self.bracket(y, &self.basis_vector(j));
            for i in 0..r {
                a.a[i * r + j] = col[i];
            }
        }
        a
    }

    /// `Ad(exp y) = exp(ad y)`, exact because `ad y` is nilpotent of index at most the class.
    pub fn adjoint_exp(&self, y: &[u64]) -> ModMatrix {
        let ad = self.ad(y);
        let m = self.modulus;
        let mut acc = ModMatrix::identity(self.rank, m);
        let mut pow = ModMatrix::identity(self.rank, m);
        let mut fact = 1u64;
        for j in 1..=self.nilpotency_class {
            pow = pow.mul(&ad);
            if pow.is_zero() {
                break;
            }
            fact = mul_mod(fact, j as u64, m);
            acc = acc.add(&pow.scale(inv_mod(fact, m).expect("j < p")));
        }
        acc
    }

    fn check_jacobi(&self) -> Result<()> {
        let r = self.rank;
        let e: Vec<Vec<u64>> = (0..r).map(|i| self.basis_vector(i)).collect();
        for i in 0..r {
            for j in i + 1..r {
                let eij = self.bracket(&e[i], &e[j]);
                for l in j + 1..r {
                    let a = self.bracket(&e[l], &eij);
                    let b = self.bracket(&e[i], &self.bracket(&e[j], &e[l]));
                    let c = self.bracket(&e[j], &self.bracket(&e[l], &e[i]));
                    if self.add(&self.add(&a, &b), &c).iter().any(|&x| x != 0) {
                        return Err(Error::InvalidInput(format!("Jacobi identity fails on (e{i}, e{j}, e{l})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Least `c` such that all right-normed brackets of `c + 1` basis elements
    /// vanish; these span the `(c + 1)`-th term of the lower central series.
    fn compute_class(&self) -> Result<usize> {
        const SPAN_CAP: usize = 100_000;
        let r = self.rank;
        let mut level: HashSet<Vec<u64>> = (0..r).map(|i| self.basis_vector(i)).filter(|v| v.iter().any(|&x| x != 0)).collect();
        if level.is_empty() {
            return Ok(1);
        }
        for class in 1..self.p as usize {
            let mut next = HashSet::new();
            for v in &level {
                for i in 0..r {
                    let b = self.bracket(&self.basis_vector(i), v);
                    if b.iter().any(|&x| x != 0) {
                        next.insert(b);
                    }
                }
                if next.len() > SPAN_CAP {
                    return Err(Error::SizeExceeded { what: "lower central series spanning set".into(), cap: SPAN_CAP as u64 });
                }
            }
            if next.is_empty() {
                return Ok(class);
            }
            level = next;
        }
        Err(Error::Domain(format!("nilpotency class is at least p = {}", self.p)))
    }

    fn attach_matrices(&mut self, basis: Vec<ModMatrix>) -> Result<()> {
        if basis.len() != self.rank {
            return Err(Error::InvalidInput(format!("{} basis matrices for rank {}", basis.len(), self.rank)));
        }
        let n = basis.first().map_or(0, |b| b.n);
        let mm = basis.first().map_or(self.modulus, |b| b.m);
        if basis.iter().any(|b| b.n != n || b.m != mm || b.a.len() != n * n) {
            return Err(Error::InvalidInput("basis matrices differ in size or modulus".into()));
        }
        if n > 0 && self.p <= 2 * n as u64 {
            return Err(Error::Domain(format!("matrix realization needs p > 2n, got p = {}, n = {n}", self.p)));
        }
        if !mm.is_multiple_of(self.modulus) {
            return Err(Error::InvalidInput(format!("matrix modulus {mm} is not a multiple of p^k = {}", self.modulus)));
        }
        for (idx, b) in basis.iter().enumerate() {
            let reduced = ModMatrix { n, m: self.p, a: b.a.iter().map(|&x| x % self.p).collect() };
            if reduced.nilpotency_index(n).is_none() {
                return Err(Error::InvalidInput(format!("basis matrix {idx} is not nilpotent modulo p")));
            }
        }
        let structure = self.structure();
        for i in 0..self.rank {
            for j in 0..self.rank {
                let lhs = basis[i].bracket(&basis[j]);
                let mut rhs = ModMatrix::zero(n, mm);
                for &(l, c) in &structure[i * self.rank + j] {
                    rhs = rhs.add(&basis[l].scale(c));
                }
                if lhs != rhs {
                    return Err(Error::InvalidInput(format!("matrix realization violates [e{i}, e{j}]")));
                }
            }
        }
        self.matrix_basis = Some(basis);
        Ok(())
    }

    /// Realizes a coordinate vector as a matrix, if a realization is attached.
    pub fn to_matrix(&self, x: &[u64]) -> Option<ModMatrix> {
        let basis = self.matrix_basis.as_ref()?;
        let n = basis[0].n;
        let mut acc = ModMatrix::zero(n, basis[0].m);
        for (b, &c) in basis.iter().zip(x) {
            acc = acc.add(&b.scale(c));
        }
        Some(acc)
    }

    pub fn from_spec(spec: &LieRingSpec) -> Result<Self> {
        let modulus = spec.p.checked_pow(spec.k).ok_or_else(|| Error::InvalidInput("p^k overflows".into()))?;
        let mm = spec.matrix_modulus.unwrap_or(modulus);
        let matrices = match &spec.matrix_basis {
            None => None,
            Some(list) => {
                let mut out = Vec::new();
                for entries in list {
                    let n = crate::numtheory::isqrt(entries.len() as u64) as usize;
                    out.push(ModMatrix::from_i64(n, mm, entries)?);
                }
                Some(out)
            }
        };
        let structure: Vec<Vec<(usize, i64)>> = match (&spec.structure, &matrices) {
            (Some(s), _) => s
                .iter()
                .map(|list| {
                    list.iter()
                        .map(|&[l, c]| usize::try_from(l).map(|l| (l, c)).map_err(|_| Error::InvalidInput(format!("negative basis index {l}"))))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?,
            (None, Some(ms)) => structure_from_matrices(ms, spec.p, modulus)?,
            (None, None) => return Err(Error::InvalidInput("need structure constants or a matrix basis".into())),
        };
        let rank = match spec.rank {
            Some(r) => r,
            None => matrices.as_ref().map(|m| m.len()).unwrap_or_else(|| crate::numtheory::isqrt(structure.len() as u64) as usize),
        };
        Self::new(spec.p, spec.k, rank, &structure, matrices)
    }

    pub fn to_spec(&self) -> LieRingSpec {
        let structure = self.structure().into_iter().map(|list| list.into_iter().map(|(l, c)| [l as i64, c as i64]).collect()).collect();
        LieRingSpec {
            p: self.p,
            k: self.k,
            rank: Some(self.rank),
            structure: Some(structure),
            matrix_basis: self.matrix_basis.as_ref().map(|bs| bs.iter().map(|b| b.a.iter().map(|&x| x as i64).collect()).collect()),
            matrix_modulus: self.matrix_basis.as_ref().map(|bs| bs[0].m),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_spec(&serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_spec())?)
    }

    /// Rank-`rank` abelian ring over `Z/p^k`.
    pub fn abelian(p: u64, k: u32, rank: usize) -> Result<Self> {
        Self::new(p, k, rank, &vec![Vec::new(); rank * rank], None)
    }

    /// Strictly upper-triangular `n x n` matrices over `Z/p^k`, with basis
    /// `E_{ij}` ordered by superdiagonal then row. The matrix realization is
    /// attached when `p > 2n`.
    pub fn strictly_upper(n: usize, p: u64, k: u32) -> Result<Self> {
        let mut idx = Vec::new();
        for d in 1..n {
            for i in 0..n - d {
                idx.push((i, i + d));
            }
        }
        let rank = idx.len();
        let pos = |i: usize, j: usize| idx.iter().position(|&e| e == (i, j));
        let mut structure = vec![Vec::new(); rank * rank];
        for (a, &(i, j)) in idx.iter().enumerate() {
            for (b, &(k2, l)) in idx.iter().enumerate() {
                // [E_ij, E_kl] = d_jk E_il - d_li E_kj
                if j == k2 {
                    structure[a * rank + b].push((pos(i, l).unwrap(), 1));
                }
                if l == i {
                    structure[a * rank + b].push((pos(k2, j).unwrap(), -1));
                }
            }
        }
        let m = p.pow(k);
        let matrices = (p > 2 * n as u64).then(|| idx.iter().map(|&(i, j)| ModMatrix::unit(n, m, i, j)).collect());
        Self::new(p, k, rank, &structure, matrices)
    }

    /// The Heisenberg ring `X, Y, Z` with `[X, Y] = Z` over `Z/p^k`.
    pub fn heisenberg(p: u64, k: u32) -> Result<Self> {
        Self::strictly_upper(3, p, k)
    }

    /// The Lie ring of the first congruence quotient
    /// `ker(SL_2(Z/p^level) -> SL_2(F_p))`: `p sl_2` modulo `p^level`, as a
    /// ring over `Z/p^{level-1}` with basis `pH, pE, pF`.
    pub fn sl2_congruence(p: u64, level: u32) -> Result<Self> {
        if level < 2 {
            return Err(Error::InvalidInput("level must be at least 2".into()));
        }
        let pi = p as i64;
        let mut structure = vec![Vec::new(); 9];
        let mut set = |i: usize, j: usize, l: usize, c: i64| {
            structure[i * 3 + j].push((l, c * pi));
            structure[j * 3 + i].push((l, -c * pi));
        };
        // [H, E] = 2E, [H, F] = -2F, [E, F] = H
        set(0, 1, 1, 2);
        set(0, 2, 2, -2);
        set(1, 2, 0, 1);
        let mm = p.pow(level);
        let matrices = (p > 4).then(|| {
            [[1i64, 0, 0, -1], [0, 1, 0, 0], [0, 0, 1, 0]]
                .iter()
                .map(|x| ModMatrix::from_i64(2, mm, &x.map(|v| v * pi)).expect("2x2"))
                .collect()
        });
        Self::new(p, level - 1, 3, &structure, matrices)
    }
}

/// Structure constants of the span of `ms`, which must be free of rank
/// `ms.len()` over `Z/p^k` after dividing out a common valuation.
fn structure_from_matrices(ms: &[ModMatrix], p: u64, modulus: u64) -> Result<Vec<Vec<(usize, i64)>>> {
    let r = ms.len();
    let mut structure = vec![Vec::new(); r * r];
    for i in 0..r {
        for j in 0..r {
            let b = ms[i].bracket(&ms[j]);
            let coords = solve_coordinates(ms, &b, p, modulus)?;
            structure[i * r + j] = coords.into_iter().enumerate().filter(|&(_, c)| c != 0).map(|(l, c)| (l, c as i64)).collect();
        }
    }
    Ok(structure)
}

fn valuation(x: u64, p: u64) -> u32 {
    if x == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    let mut x = x;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// Coordinates of `target` in the basis `ms` modulo `modulus = p^k`, by
/// elimination with minimal-valuation pivots over `Z/mm`.
fn solve_coordinates(ms: &[ModMatrix], target: &ModMatrix, p: u64, modulus: u64) -> Result<Vec<u64>> {
    let r = ms.len();
    let mm = target.m;
    let rows = target.a.len();
    // augmented columns: basis vectors then target
    let mut a: Vec<Vec<u64>> = (0..rows).map(|e| ms.iter().map(|b| b.a[e]).chain([target.a[e]]).collect()).collect();
    let mut pivots = Vec::new();
    let mut used = vec![false; rows];
    for col in 0..r {
        let best = (0..rows).filter(|&e| !used[e]).min_by_key(|&e| valuation(a[e][col], p));
        let Some(e) = best.filter(|&e| a[e][col] != 0) else {
            return Err(Error::InvalidInput("matrix basis is not free".into()));
        };
        used[e] = true;
        let v = valuation(a[e][col], p);
        let pv = p.pow(v);
        let unit = inv_mod(a[e][col] / pv, mm).expect("unit part");
        for f in 0..rows {
            if f != e && a[f][col] != 0 {
                if valuation(a[f][col], p) < v {
                    return Err(Error::Internal("pivot valuation".into()));
                }
                let factor = mul_mod(a[f][col] / pv, unit, mm);
                for c in 0..=r {
                    let t = mul_mod(factor, a[e][c], mm);
                    a[f][c] = (a[f][c] + mm - t) % mm;
                }
            }
        }
        pivots.push((e, v, unit));
    }
    if (0..rows).any(|e| !used[e] && a[e][r] != 0) {
        return Err(Error::InvalidInput("bracket leaves the span of the matrix basis".into()));
    }
    let mut out = Vec::with_capacity(r);
    for (col, &(e, v, unit)) in pivots.iter().enumerate() {
        let pv = p.pow(v);
        if mm / pv != modulus {
            return Err(Error::InvalidInput(format!("matrix basis has torsion p^{v}, inconsistent with modulus {modulus}")));
        }
        if !a[e][r].is_multiple_of(pv) {
            return Err(Error::InvalidInput("bracket leaves the span of the matrix basis".into()));
        }
        let _ = col;
        out.push(mul_mod(a[e][r] / pv, unit, mm) % modulus);
    }
    Ok(out)
}

impl LieOps for NilpotentLieRing {
    type Elem = Vec<u64>;

    fn modulus(&self) -> u64 {
        self.modulus
    }

    fn zero(&self) -> Vec<u64> {
        vec![0; self.rank]
    }

    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        NilpotentLieRing::add(self, a, b)
    }

    fn scale(&self, a: &Vec<u64>, c: u64) -> Vec<u64> {
        NilpotentLieRing::scale(self, a, c)
    }

    fn bracket(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        NilpotentLieRing::bracket(self, a, b)
    }

    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&x| x == 0)
    }
}

/// The Lazard group of a ring: elements are coordinate vectors, encoded in
/// mixed radix `sum_i x_i (p^k)^i`, multiplied by the Campbell-Hausdorff series.
pub struct LazardLaw {
    pub ring: NilpotentLieRing,
    series: CompiledSeries,
    order: usize,
}

impl LazardLaw {
    pub fn new(ring: NilpotentLieRing) -> Result<Self> {
        if ring.nilpotency_class as u64 >= ring.p {
            return Err(Error::Domain(format!("class {} is not below p = {}", ring.nilpotency_class, ring.p)));
        }
        let order = ring
            .order()
            .filter(|&o| o <= DEFAULT_GROUP_CAP as u64)
            .ok_or_else(|| Error::SizeExceeded { what: "Lazard group order".into(), cap: DEFAULT_GROUP_CAP as u64 })?
            as usize;
        let series = bch_series(ring.nilpotency_class.max(1)).compile(ring.modulus)?;
        Ok(Self { ring, series, order })
    }

    pub fn encode(&self, x: &[u64]) -> u32 {
        let m = self.ring.modulus;
        x.iter().rev().fold(0u64, |acc, &c| acc * m + c) as u32
    }

    pub fn decode(&self, mut a: u32) -> Vec<u64> {
        let m = self.ring.modulus as u32;
        (0..self.ring.rank)
            .map(|_| {
                let c = a % m;
                a /= m;
                c as u64
            })
            .collect()
    }

    pub fn mul_coords(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let r = self.ring.rank;
        let m = self.ring.modulus;
        let steps = self.series.steps();
        let mut buf = vec![0u64; (steps.len() + 2) * r];
        buf[..r].copy_from_slice(x);
        buf[r..2 * r].copy_from_slice(y);
        for (s, &(letter, inner)) in steps.iter().enumerate() {
            let (done, rest) = buf.split_at_mut((s + 2) * r);
            let a = &done[letter as usize * r..(letter as usize + 1) * r];
            let b = &done[inner * r..(inner + 1) * r];
            self.ring.bracket_into(a, b, &mut rest[..r]);
        }
        let mut out = vec![0u64; r];
        for &(slot, c) in self.series.output() {
            for (o, &v) in out.iter_mut().zip(&buf[slot * r..(slot + 1) * r]) {
                *o = (*o + mul_mod(v, c, m)) % m;
            }
        }
        out
    }
}

impl GroupLaw for LazardLaw {
    fn order(&self) -> usize {
        self.order
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.encode(&self.mul_coords(&self.decode(a), &self.decode(b)))
    }

    fn inv(&self, a: u32) -> Option<u32> {
        Some(self.encode(&self.ring.neg(&self.decode(a))))
    }

    fn pow(&self, a: u32, e: u64) -> Option<u32> {
        Some(self.encode(&self.ring.scale(&self.decode(a), e)))
    }
}

/// The finite group on the underlying set of `ring` with `x * y = bch(x, y)`.
/// Generators are the basis vectors.
pub fn group_from_liering(ring: &NilpotentLieRing) -> Result<(FiniteGroup, Arc<LazardLaw>)> {
    let law = Arc::new(LazardLaw::new(ring.clone())?);
    let gens = (0..ring.rank).map(|i| law.encode(&ring.basis_vector(i))).collect();
    Ok((FiniteGroup::from_law(law.clone(), 0, gens), law))
}

#[cfg(test)]
mod tests {
    use super::super::matrix::exp_truncated;
    use super::*;
    use crate::groupcore::{group_from_generators, zeta_of_group};

    #[test]
    fn constructors() {
        let h = NilpotentLieRing::heisenberg(5, 1).unwrap();
        assert_eq!((h.rank, h.nilpotency_class), (3, 2));
        assert!(h.matrix_basis.is_none());
        let u = NilpotentLieRing::strictly_upper(4, 11, 1).unwrap();
        assert_eq!((u.rank, u.nilpotency_class), (6, 3));
        assert!(u.matrix_basis.is_some());
        let a = NilpotentLieRing::abelian(3, 2, 4).unwrap();
        assert_eq!(a.nilpotency_class, 1);
        let s = NilpotentLieRing::sl2_congruence(5, 2).unwrap();
        assert_eq!((s.k, s.nilpotency_class), (1, 1));
        let s = NilpotentLieRing::sl2_congruence(5, 3).unwrap();
        assert_eq!((s.k, s.nilpotency_class), (2, 2));
        assert!(NilpotentLieRing::strictly_upper(4, 3, 1).is_err());
    }

    #[test]
    fn rejects_bad_structure() {
        // [e0, e1] = e2 without the antisymmetric partner
        let bad = vec![vec![], vec![(2, 1)], vec![], vec![], vec![], vec![], vec![], vec![], vec![]];
        assert!(NilpotentLieRing::new(5, 1, 3, &bad, None).is_err());
        let json = r#"{"p": 5, "k": 1, "rank": 2, "structure": [[], [[0, 1]], [[0, -1]], []]}"#;
        // [e0, e1] = e0 is solvable but not nilpotent
        assert!(matches!(NilpotentLieRing::from_json(json), Err(Error::Domain(_))));
    }

    #[test]
    fn json_round_trip() {
        let u = NilpotentLieRing::strictly_upper(3, 7, 2).unwrap();
        let back = NilpotentLieRing::from_json(&u.to_json().unwrap()).unwrap();
        assert_eq!(back.structure(), u.structure());
        let spec = LieRingSpec {
            p: 7,
            k: 1,
            rank: None,
            structure: None,
            matrix_basis: Some(vec![vec![0, 1, 0, 0, 0, 0, 0, 0, 0], vec![0, 0, 0, 0, 0, 1, 0, 0, 0], vec![0, 0, 1, 0, 0, 0, 0, 0, 0]]),
            matrix_modulus: None,
        };
        let from_m = NilpotentLieRing::from_spec(&spec).unwrap();
        assert_eq!(from_m.structure(), NilpotentLieRing::heisenberg(7, 1).unwrap().structure());
        let s = NilpotentLieRing::sl2_congruence(5, 3).unwrap();
        let mut spec = s.to_spec();
        spec.structure = None;
        assert_eq!(NilpotentLieRing::from_spec(&spec).unwrap().structure(), s.structure());
    }

    #[test]
    fn abelian_law_is_addition() {
        let a = NilpotentLieRing::abelian(3, 2, 2).unwrap();
        let (g, law) = group_from_liering(&a).unwrap();
        assert_eq!(g.order(), 81);
        for x in 0..81 {
            for y in 0..81 {
                let s = a.add(&law.decode(x), &law.decode(y));
                assert_eq!(g.mul(x, y), law.encode(&s));
            }
        }
    }

    #[test]
    fn heisenberg_f3_matches_matrix_group() {
        let h = NilpotentLieRing::heisenberg(3, 1).unwrap();
        let (g, law) = group_from_liering(&h).unwrap();
        assert_eq!(g.order(), 27);
        g.check_associative(27, 0, 1).unwrap();
        let gens = [vec![1, 1, 0, 0, 1, 0, 0, 0, 1], vec![1, 0, 0, 0, 1, 1, 0, 0, 1]];
        let mg = group_from_generators(&gens, 3, 3, DEFAULT_GROUP_CAP).unwrap();
        let data = mg.matrices().unwrap();
        let basis: Vec<ModMatrix> = [(0, 1), (1, 2), (0, 2)].iter().map(|&(i, j)| ModMatrix::unit(3, 3, i, j)).collect();
        let phi = |x: u32| {
            let v = law.decode(x);
            let mut a = ModMatrix::zero(3, 3);
            for (b, &c) in basis.iter().zip(&v) {
                a = a.add(&b.scale(c));
            }
            let e = exp_truncated(&a, 3).unwrap();
            let key: Vec<u32> = e.a.iter().map(|&x| x as u32).collect();
            (0..mg.order() as u32).find(|&y| data.matrix(y) == key.as_slice()).unwrap()
        };
        let image: Vec<u32> = (0..27).map(phi).collect();
        let mut sorted = image.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 27);
        for x in 0..27 {
            for y in 0..27 {
                assert_eq!(image[g.mul(x, y) as usize], mg.mul(image[x as usize], image[y as usize]));
            }
        }
    }

    #[test]
    fn heisenberg_z25_sampled() {
        let h = NilpotentLieRing::heisenberg(5, 2).unwrap();
        let (g, _) = group_from_liering(&h).unwrap();
        assert_eq!(g.order(), 15625);
        assert!(!g.is_tabulated());
        g.check_associative(0, 3000, 9).unwrap();
        g.check_identity_inverse().unwrap();
    }

    #[test]
    fn sl2_level2_is_abelian_of_order_p3() {
        let s = NilpotentLieRing::sl2_congruence(5, 2).unwrap();
        let (g, _) = group_from_liering(&s).unwrap();
        assert_eq!(g.order(), 125);
        let z = zeta_of_group(&g).unwrap();
        assert_eq!(z.integer_counts().unwrap(), vec![(1, 125)]);
    }
}
