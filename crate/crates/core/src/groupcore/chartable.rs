use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cyclotomic::{Cyc, CycField};
use super::group::{Classes, FiniteGroup};
use crate::dirichlet::DirichletPoly;
use crate::error::{Error, Result};
use crate::numtheory::{gcd, inv_mod, isqrt, pow_mod, prime_one_mod, root_of_unity, FpPoly};

/// Default cap on the group order for character tables.
pub const DEFAULT_TABLE_CAP: usize = 200_000;

/// Cap on the number of conjugacy classes (the class-algebra matrix is dense).
pub const MAX_CLASSES: usize = 4096;

const SEED: u64 = 0x00d1_c0de;
const ATTEMPTS: usize = 6;

/// Exact character table: rows are irreducible characters, columns are
/// conjugacy classes, values lie in `Q(zeta_E)` with `E` the exponent.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub order: u64,
    pub classes: Arc<Classes>,
    pub field: CycField,
    pub chars: Vec<Vec<Cyc>>,
    pub degrees: Vec<u64>,
    /// Class of `g^{-1}` for each class.
    pub inverse_class: Vec<usize>,
    /// `power_maps[k][t]` is the class of `g_k^t` for `t` below the order of `g_k`.
    pub power_maps: Vec<Vec<usize>>,
}

impl CharacterTable {
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn class_of(&self, x: u32) -> usize {
        self.classes.class_of[x as usize] as usize
    }

    /// `chi_i(x)` for a group element `x`.
    pub fn value(&self, i: usize, x: u32) -> &Cyc {
        &self.chars[i][self.class_of(x)]
    }

    /// `zeta(s) = sum_chi chi(1)^{-s}`.
    pub fn zeta(&self) -> DirichletPoly {
        let mut counts = std::collections::BTreeMap::new();
        for &d in &self.degrees {
            *counts.entry(d).or_insert(0u64) += 1;
        }
        DirichletPoly::from_counts(counts)
    }

    /// Classes on which `chi_i` takes the value `chi_i(1)`.
    pub fn kernel_classes(&self, i: usize) -> Vec<bool> {
        let one = self.field.int(self.degrees[i] as i64);
        self.chars[i].iter().map(|v| *v == one).collect()
    }

    /// Exact row and column orthogonality in the cyclotomic field.
    pub fn verify_exact(&self) -> Result<()> {
        let f = &self.field;
        let r = self.len();
        let n = self.order as i64;
        let sizes: Vec<i64> = (0..r).map(|k| self.classes.size(k) as i64).collect();
        let conj: Vec<Vec<Cyc>> = self.chars.iter().map(|row| row.iter().map(|v| f.conj(v)).collect()).collect();
        for i in 0..r {
            for j in 0..r {
                let mut acc = f.zero();
                for k in 0..r {
                    acc = f.add(&acc, &f.scale(&f.mul(&self.chars[i][k], &conj[j][k]), sizes[k]));
                }
                if acc != f.int(if i == j { n } else { 0 }) {
                    return Err(Error::Internal(format!("row orthogonality fails at ({i}, {j})")));
                }
            }
        }
        for k in 0..r {
            for l in 0..r {
                let mut acc = f.zero();
                for i in 0..r {
                    acc = f.add(&acc, &f.mul(&self.chars[i][k], &conj[i][l]));
                }
                let expect = if k == l { n / sizes[k] } else { 0 };
                if acc != f.int(expect) {
                    return Err(Error::Internal(format!("column orthogonality fails at ({k}, {l})")));
                }
            }
        }
        Ok(())
    }

    /// Exact verification without cyclotomic products: Galois compatibility
    /// `sigma_a(chi(g)) = chi(g^a)` makes every row inner product a rational
    /// integer of absolute value at most `|G|^2`, which is then pinned down by
    /// its residues modulo two primes.
    pub fn verify(&self) -> Result<()> {
        let r = self.len();
        let f = &self.field;
        let e = f.order() as u64;
        if self.degrees.iter().map(|d| d * d).sum::<u64>() != self.order {
            return Err(Error::Internal("sum of squared degrees differs from the group order".into()));
        }
        for a in unit_generators(e) {
            for (i, row) in self.chars.iter().enumerate() {
                for k in 0..r {
                    let pm = &self.power_maps[k];
                    let target = pm[(a % pm.len() as u64) as usize];
                    if f.galois(&row[k], a as i64) != row[target] {
                        return Err(Error::Internal(format!(
                            "character {i} is not Galois compatible at class {k}"
                        )));
                    }
                }
            }
        }
        let mut lower = 1u64 << 30;
        for _ in 0..2 {
            let ell = prime_one_mod(e, lower);
            lower = ell;
            let z = root_of_unity(e, ell);
            let x: Vec<Vec<u64>> = self
                .chars
                .iter()
                .map(|row| row.iter().map(|v| f.reduce(v, ell, z)).collect())
                .collect();
            let sizes: Vec<u64> = (0..r).map(|k| self.classes.size(k) % ell).collect();
            for i in 0..r {
                let y: Vec<u64> = (0..r).map(|k| sizes[k] * x[i][k] % ell).collect();
                for (j, xj) in x.iter().enumerate() {
                    let mut acc = 0u128;
                    for k in 0..r {
                        acc += (y[k] * xj[self.inverse_class[k]]) as u128;
                    }
                    let expect = if i == j { self.order % ell } else { 0 };
                    if (acc % ell as u128) as u64 != expect {
                        return Err(Error::Internal(format!("row orthogonality fails at ({i}, {j})")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A generating set of `(Z/e)^x`.
fn unit_generators(e: u64) -> Vec<u64> {
    let mut gens = Vec::new();
    if e <= 2 {
        return gens;
    }
    let mut seen = vec![false; e as usize];
    seen[1] = true;
    let mut group = vec![1u64];
    for a in 2..e {
        if gcd(a, e) != 1 || seen[a as usize] {
            continue;
        }
        gens.push(a);
        let mut i = 0;
        while i < group.len() {
            for &b in &gens {
                let y = group[i] * b % e;
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    group.push(y);
                }
            }
            i += 1;
        }
    }
    gens
}

pub fn character_table(g: &FiniteGroup) -> Result<CharacterTable> {
    character_table_capped(g, DEFAULT_TABLE_CAP)
}

pub fn character_table_capped(g: &FiniteGroup, cap: usize) -> Result<CharacterTable> {
    if g.order() > cap {
        return Err(Error::SizeExceeded { what: "group order for character table".into(), cap: cap as u64 });
    }
    character_table_with(g, Arc::new(Classes::compute(g)))
}

/// Character table for precomputed classes.
pub fn character_table_with(g: &FiniteGroup, classes: Arc<Classes>) -> Result<CharacterTable> {
    let r = classes.len();
    if r > MAX_CLASSES {
        return Err(Error::SizeExceeded { what: "number of conjugacy classes".into(), cap: MAX_CLASSES as u64 });
    }
    let e = classes.exponent();
    if e > u32::MAX as u64 {
        return Err(Error::SizeExceeded { what: "group exponent".into(), cap: u32::MAX as u64 });
    }
    let field = CycField::new(e as u32);
    let inverse_class: Vec<usize> =
        (0..r).map(|k| classes.class_of[g.inv(classes.rep(k)) as usize] as usize).collect();
    let power_maps: Vec<Vec<usize>> = (0..r)
        .map(|k| {
            let x = classes.rep(k);
            let mut out = vec![0usize; classes.orders[k] as usize];
            let mut cur = g.identity();
            for slot in out.iter_mut() {
                *slot = classes.class_of[cur as usize] as usize;
                cur = g.mul(cur, x);
            }
            out
        })
        .collect();
    let ell = prime_one_mod(e, 1 << 30);
    let z = root_of_unity(e, ell);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut last_err = None;
    for _ in 0..ATTEMPTS {
        match eigen_characters(g, &classes, &inverse_class, ell, &mut rng) {
            Ok(rows) => {
                let mut lifted = Vec::with_capacity(r);
                for (d, row) in rows {
                    let values = (0..r)
                        .map(|k| lift_value(&field, &row, &power_maps[k], d, e, ell, z))
                        .collect::<Result<Vec<_>>>()?;
                    lifted.push((d, values));
                }
                // trivial character first, then by degree and values
                let trivial: Vec<Cyc> = (0..r).map(|_| field.int(1)).collect();
                lifted.sort_by(|a, b| {
                    (a.0, a.1 != trivial, &a.1).cmp(&(b.0, b.1 != trivial, &b.1))
                });
                let table = CharacterTable {
                    order: g.order() as u64,
                    classes,
                    field,
                    degrees: lifted.iter().map(|x| x.0).collect(),
                    chars: lifted.into_iter().map(|x| x.1).collect(),
                    inverse_class,
                    power_maps,
                };
                table.verify()?;
                return Ok(table);
            }
            Err(err) => last_err = Some(err),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Internal("character table failed".into())))
}

/// Eigenvectors of a random central element of the group algebra acting on
/// the class-sum basis. Returns `(degree, chi(g_k) mod ell)` for each character.
fn eigen_characters(
    g: &FiniteGroup,
    classes: &Classes,
    inverse_class: &[usize],
    ell: u64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(u64, Vec<u64>)>> {
    let r = classes.len();
    let n = g.order() as u64;
    let sizes: Vec<u64> = (0..r).map(|k| classes.size(k) % ell).collect();
    if r == 1 {
        return Ok(vec![(1, vec![1])]);
    }
    // M[k][l] = (h_k / h_l) sum_{x : x g_k in C_l} c_{class(x)}
    let coef: Vec<u64> = (0..r).map(|_| rng.gen_range(1..ell)).collect();
    let reps: Vec<u32> = (0..r).map(|k| classes.rep(k)).collect();
    let mut m = vec![0u64; r * r];
    for x in 0..g.order() as u32 {
        let c = coef[classes.class_of[x as usize] as usize];
        for (k, &gk) in reps.iter().enumerate() {
            let l = classes.class_of[g.mul(x, gk) as usize] as usize;
            let cell = &mut m[k * r + l];
            *cell += c;
            if *cell >= 1 << 62 {
                *cell %= ell;
            }
        }
    }
    let inv_sizes: Vec<u64> = sizes.iter().map(|&h| inv_mod(h, ell).expect("ell exceeds |G|")).collect();
    for k in 0..r {
        for l in 0..r {
            let v = m[k * r + l] % ell;
            m[k * r + l] = v * sizes[k] % ell * inv_sizes[l] % ell;
        }
    }
    // Krylov sequence of a random vector
    let mut krylov: Vec<Vec<u64>> = Vec::with_capacity(r + 1);
    krylov.push((0..r).map(|_| rng.gen_range(0..ell)).collect());
    for i in 0..r {
        let next = matvec(&m, &krylov[i], r, ell);
        krylov.push(next);
    }
    // solve sum_i c_i M^i v = M^r v
    let mut a = vec![vec![0u64; r]; r];
    for (i, col) in krylov[..r].iter().enumerate() {
        for row in 0..r {
            a[row][i] = col[row];
        }
    }
    let c = solve_mod(a, krylov[r].clone(), ell)
        .ok_or_else(|| Error::Internal("random vector is not cyclic".into()))?;
    let mut charpoly: Vec<u64> = c.iter().map(|&ci| (ell - ci) % ell).collect();
    charpoly.push(1);
    let roots = FpPoly::new(ell, charpoly.clone()).roots(rng);
    if roots.len() != r {
        return Err(Error::Internal("central element does not separate characters".into()));
    }
    let mut out = Vec::with_capacity(r);
    for lambda in roots {
        // q(x) = charpoly(x) / (x - lambda), then w = q(M) v
        let mut q = vec![0u64; r];
        let mut carry = 1u64;
        q[r - 1] = 1;
        for i in (0..r - 1).rev() {
            carry = (charpoly[i + 1] + carry * lambda) % ell;
            q[i] = carry;
        }
        let mut w = vec![0u128; r];
        for (i, &qi) in q.iter().enumerate() {
            if qi == 0 {
                continue;
            }
            for (acc, &kv) in w.iter_mut().zip(&krylov[i]) {
                *acc += (qi * kv) as u128;
            }
        }
        let w: Vec<u64> = w.into_iter().map(|v| (v % ell as u128) as u64).collect();
        let w0 = inv_mod(w[0], ell).ok_or_else(|| Error::Internal("eigenvector vanishes at 1".into()))?;
        let omega: Vec<u64> = w.iter().map(|&x| x * w0 % ell).collect();
        // sum_k omega_k omega_{k*} / h_k = |G| / chi(1)^2
        let mut s = 0u64;
        for k in 0..r {
            s = (s + omega[k] * omega[inverse_class[k]] % ell * inv_sizes[k]) % ell;
        }
        let s_inv = inv_mod(s, ell).ok_or_else(|| Error::Internal("degenerate degree equation".into()))?;
        let d2 = n % ell * s_inv % ell;
        let d = isqrt(d2);
        if d == 0 || d * d != d2 || !n.is_multiple_of(d) {
            return Err(Error::Internal(format!("degree equation has no integral solution ({d2})")));
        }
        let values = (0..r).map(|k| omega[k] * (d % ell) % ell * inv_sizes[k] % ell).collect();
        out.push((d, values));
    }
    Ok(out)
}

/// Recovers `chi(g)` from residues of `chi(g^t)` by the discrete Fourier
/// transform on `<g>`: the multiplicity of `zeta_o^j` as an eigenvalue.
fn lift_value(
    field: &CycField,
    row: &[u64],
    powers: &[usize],
    degree: u64,
    e: u64,
    ell: u64,
    z: u64,
) -> Result<Cyc> {
    let o = powers.len() as u64;
    let zo = pow_mod(z, e / o, ell);
    let zo_inv = inv_mod(zo, ell).unwrap();
    let o_inv = inv_mod(o % ell, ell).unwrap();
    let mut counts = vec![0i64; o as usize];
    let mut total = 0u64;
    for (j, slot) in counts.iter_mut().enumerate() {
        let step = pow_mod(zo_inv, j as u64, ell);
        let mut acc = 0u64;
        let mut w = 1u64;
        for &cls in powers {
            acc = (acc + row[cls] * w) % ell;
            w = w * step % ell;
        }
        let mj = acc * o_inv % ell;
        if mj > degree {
            return Err(Error::Internal(format!("eigenvalue multiplicity {mj} exceeds degree {degree}")));
        }
        total += mj;
        *slot = mj as i64;
    }
    if total != degree {
        return Err(Error::Internal("eigenvalue multiplicities do not sum to the degree".into()));
    }
    Ok(field.from_root_counts(&counts, (e / o) as u32))
}

fn matvec(m: &[u64], v: &[u64], r: usize, ell: u64) -> Vec<u64> {
    (0..r)
        .map(|k| {
            let row = &m[k * r..(k + 1) * r];
            let acc: u128 = row.iter().zip(v).map(|(&a, &b)| (a * b) as u128).sum();
            (acc % ell as u128) as u64
        })
        .collect()
}

/// Solves `a x = b` over `F_ell` (`ell < 2^31`); `None` if singular.
fn solve_mod(mut a: Vec<Vec<u64>>, mut b: Vec<u64>, ell: u64) -> Option<Vec<u64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&i| a[i][col] != 0)?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = inv_mod(a[col][col], ell)?;
        for x in a[col][col..].iter_mut() {
            *x = *x * inv % ell;
        }
        b[col] = b[col] * inv % ell;
        let pivot_row = a[col].clone();
        let pivot_b = b[col];
        for i in 0..n {
            if i == col || a[i][col] == 0 {
                continue;
            }
            let f = ell - a[i][col];
            for (x, &p) in a[i][col..].iter_mut().zip(&pivot_row[col..]) {
                *x = (*x + f * p) % ell;
            }
            b[i] = (b[i] + f * pivot_b) % ell;
        }
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::super::group::{group_from_generators, group_from_permutations, DEFAULT_GROUP_CAP};
    use super::*;

    fn degrees(t: &CharacterTable) -> Vec<u64> {
        let mut d = t.degrees.clone();
        d.sort();
        d
    }

    #[test]
    fn small_tables() {
        let c3 = group_from_permutations(&[vec![1, 2, 0]], 100).unwrap();
        let t = character_table(&c3).unwrap();
        assert_eq!(degrees(&t), vec![1, 1, 1]);
        t.verify_exact().unwrap();

        let s3 = group_from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]], 100).unwrap();
        let t = character_table(&s3).unwrap();
        assert_eq!(degrees(&t), vec![1, 1, 2]);
        t.verify_exact().unwrap();
        assert_eq!(t.zeta(), DirichletPoly::from_counts([(1, 2), (2, 1)]));

        let sl = [vec![1, 1, 0, 1], vec![1, 0, 1, 1]];
        let g = group_from_generators(&sl, 2, 3, DEFAULT_GROUP_CAP).unwrap();
        let t = character_table(&g).unwrap();
        assert_eq!(degrees(&t), vec![1, 1, 1, 2, 2, 2, 3]);
        t.verify_exact().unwrap();
    }

    #[test]
    fn trivial_group() {
        let g = FiniteGroup::from_table(vec![vec![0]]).unwrap();
        let t = character_table(&g).unwrap();
        assert_eq!(t.zeta(), DirichletPoly::from_counts([(1, 1)]));
    }

    #[test]
    fn sl2_mod_9() {
        let sl = [vec![1, 1, 0, 1], vec![1, 0, 1, 1]];
        let g = group_from_generators(&sl, 2, 9, DEFAULT_GROUP_CAP).unwrap();
        let t = character_table(&g).unwrap();
        assert_eq!(t.degrees.iter().map(|d| d * d).sum::<u64>(), 648);
        t.verify_exact().unwrap();
    }

    #[test]
    fn corrupted_table_is_rejected() {
        let s3 = group_from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]], 100).unwrap();
        let mut t = character_table(&s3).unwrap();
        t.verify().unwrap();
        t.chars[1][1] = t.field.int(5);
        assert!(t.verify().is_err());
    }

    #[test]
    fn unit_group_generators() {
        for e in [3u64, 7, 8, 12, 24, 72, 105] {
            let gens = unit_generators(e);
            let mut seen = std::collections::BTreeSet::from([1]);
            let mut frontier = vec![1];
            while let Some(x) = frontier.pop() {
                for &a in &gens {
                    let y = x * a % e;
                    if seen.insert(y) {
                        frontier.push(y);
                    }
                }
            }
            let units = (1..e).filter(|&a| gcd(a, e) == 1).count();
            assert_eq!(seen.len(), units, "e = {e}");
        }
    }
}
