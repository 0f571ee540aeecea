use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::numtheory::{factorize, inv_mod, reduce_i64};

/// Default cap on the size of generated groups.
pub const DEFAULT_GROUP_CAP: usize = 200_000;

/// Groups up to this order get an explicit multiplication table.
pub const TABLE_CAP: usize = 2048;

/// A multiplication law on `0..order` supplied by some concrete model.
pub trait GroupLaw: Send + Sync {
    fn order(&self) -> usize;
    fn mul(&self, a: u32, b: u32) -> u32;
    /// Fast inverse, if the model has one.
    fn inv(&self, _a: u32) -> Option<u32> {
        None
    }
    /// Fast power, if the model has one.
    fn pow(&self, _a: u32, _e: u64) -> Option<u32> {
        None
    }
}

#[derive(Clone)]
enum Law {
    Table(Arc<Vec<u32>>),
    Implicit(Arc<dyn GroupLaw>),
}

/// Matrix entries of the elements of a matrix group over `Z/m`.
#[derive(Clone, Debug)]
pub struct MatrixData {
    pub modulus: u64,
    pub n: usize,
    /// Row-major entries, `n * n` per element, in element order.
    pub entries: Vec<u32>,
}

impl MatrixData {
    pub fn matrix(&self, a: u32) -> &[u32] {
        let k = self.n * self.n;
        &self.entries[a as usize * k..(a as usize + 1) * k]
    }
}

/// A finite group on the element set `0..order`.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    identity: u32,
    inv: Arc<Vec<u32>>,
    gens: Vec<u32>,
    law: Law,
    matrices: Option<Arc<MatrixData>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("identity", &self.identity)
            .field("gens", &self.gens)
            .finish()
    }
}

/// A subgroup as the sorted list of its element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(transparent)]
pub struct Subgroup {
    elems: Vec<u32>,
}

impl Subgroup {
    pub fn from_sorted(elems: Vec<u32>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        Self { elems }
    }

    pub fn elements(&self) -> &[u32] {
        &self.elems
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    /// Position of `x` in the element list (its index in the extracted group).
    pub fn position(&self, x: u32) -> Option<u32> {
        self.elems.binary_search(&x).ok().map(|i| i as u32)
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.elems.iter().all(|&x| other.contains(x))
    }
}

impl FiniteGroup {
    /// Builds from a full multiplication table, checking the group axioms
    /// (associativity exhaustively up to order 512, else on random triples).
    pub fn from_table(table: Vec<Vec<u32>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty multiplication table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &table {
            if row.len() != n {
                return Err(Error::InvalidInput("multiplication table is not square".into()));
            }
            if row.iter().any(|&x| x as usize >= n) {
                return Err(Error::InvalidInput("table entry out of range".into()));
            }
            flat.extend_from_slice(row);
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| flat[e * n + x] as usize == x && flat[x * n + e] as usize == x))
            .ok_or_else(|| Error::InvalidInput("no identity element".into()))? as u32;
        let mut inv = vec![0u32; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| flat[a * n + b] == identity && flat[b * n + a] == identity)
                .ok_or_else(|| Error::InvalidInput(format!("element {a} has no inverse")))?;
            inv[a] = b as u32;
        }
        let mut g = Self {
            order: n,
            identity,
            inv: Arc::new(inv),
            gens: vec![],
            law: Law::Table(Arc::new(flat)),
            matrices: None,
        };
        g.check_associative(512, 20_000, 0x5eed)?;
        g.gens = g.greedy_generators();
        Ok(g)
    }

    /// Wraps an implicit law. Inverses are taken from the law when it has
    /// them, otherwise by powering. Small groups are tabulated.
    pub fn from_law(law: Arc<dyn GroupLaw>, identity: u32, gens: Vec<u32>) -> Self {
        let order = law.order();
        let inv: Vec<u32> = (0..order as u32)
            .map(|a| match law.inv(a) {
                Some(b) => b,
                None => {
                    let mut prev = identity;
                    let mut cur = a;
                    while cur != identity {
                        prev = cur;
                        cur = law.mul(cur, a);
                    }
                    prev
                }
            })
            .collect();
        let mut g = Self {
            order,
            identity,
            inv: Arc::new(inv),
            gens,
            law: Law::Implicit(law),
            matrices: None,
        };
        if order <= TABLE_CAP {
            g.tabulate();
        }
        g
    }

    fn tabulate(&mut self) {
        if let Law::Implicit(law) = &self.law {
            let n = self.order;
            let mut flat = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    flat[a * n + b] = law.mul(a as u32, b as u32);
                }
            }
            self.law = Law::Table(Arc::new(flat));
        }
    }

    fn greedy_generators(&self) -> Vec<u32> {
        let mut gens: Vec<u32> = Vec::new();
        let mut sub = self.subgroup_generated(&[]);
        for x in 0..self.order as u32 {
            if sub.order() == self.order {
                break;
            }
            if !sub.contains(x) {
                gens.push(x);
                sub = self.subgroup_generated(&gens);
            }
        }
        gens
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn gens(&self) -> &[u32] {
        &self.gens
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.law, Law::Table(_))
    }

    pub fn matrices(&self) -> Option<&MatrixData> {
        self.matrices.as_deref()
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.law {
            Law::Table(t) => t[a as usize * self.order + b as usize],
            Law::Implicit(l) => l.mul(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// `g^{-1} x g`.
    #[inline]
    pub fn conj(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        if let Law::Implicit(l) = &self.law {
            if let Some(r) = l.pow(a, e) {
                return r;
            }
        }
        let mut acc = self.identity;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut k = 1;
        let mut cur = a;
        while cur != self.identity {
            cur = self.mul(cur, a);
            k += 1;
        }
        k
    }

    /// Exhaustive associativity up to `full_up_to`, otherwise `samples`
    /// random triples from a seeded generator.
    pub fn check_associative(&self, full_up_to: usize, samples: usize, seed: u64) -> Result<()> {
        let n = self.order as u32;
        let fail = |a, b, c| Err(Error::InvalidInput(format!("not associative at ({a}, {b}, {c})")));
        if self.order <= full_up_to {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return fail(a, b, c);
                        }
                    }
                }
            }
        } else {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return fail(a, b, c);
                }
            }
        }
        Ok(())
    }

    /// Identity and inverse laws on every element.
    pub fn check_identity_inverse(&self) -> Result<()> {
        for a in 0..self.order as u32 {
            if self.mul(a, self.identity) != a || self.mul(self.identity, a) != a {
                return Err(Error::Internal(format!("identity law fails at {a}")));
            }
            if self.mul(a, self.inv(a)) != self.identity {
                return Err(Error::Internal(format!("inverse law fails at {a}")));
            }
        }
        Ok(())
    }

    /// The subgroup generated by `gens`.
    pub fn subgroup_generated(&self, gens: &[u32]) -> Subgroup {
        let mut seen = vec![false; self.order];
        seen[self.identity as usize] = true;
        let mut elems = vec![self.identity];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        Subgroup::from_sorted(elems)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted((0..self.order as u32).collect())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_sorted(vec![self.identity])
    }

    pub fn is_normal(&self, sub: &Subgroup) -> bool {
        sub.elements()
            .iter()
            .all(|&x| self.gens.iter().all(|&g| sub.contains(self.conj(x, g))))
    }

    /// A generating set of `sub` (greedy, deterministic).
    pub fn subgroup_gens(&self, sub: &Subgroup) -> Vec<u32> {
        let mut gens: Vec<u32> = Vec::new();
        let mut cur = self.trivial();
        for &x in sub.elements() {
            if cur.order() == sub.order() {
                break;
            }
            if !cur.contains(x) {
                gens.push(x);
                cur = self.subgroup_generated(&gens);
            }
        }
        gens
    }

    /// Normal closure of a set of elements.
    pub fn normal_closure(&self, xs: &[u32]) -> Subgroup {
        let mut gens: Vec<u32> = Vec::new();
        let mut sub = self.trivial();
        let mut queue: VecDeque<u32> = xs.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            if sub.contains(x) {
                continue;
            }
            gens.push(x);
            sub = self.subgroup_generated(&gens);
            for &g in &self.gens {
                queue.push_back(self.conj(x, g));
            }
        }
        // conjugates of generators by generators are inside: normal
        loop {
            let missing: Vec<u32> = sub
                .elements()
                .iter()
                .flat_map(|&x| self.gens.iter().map(move |&g| (x, g)))
                .map(|(x, g)| self.conj(x, g))
                .filter(|&y| !sub.contains(y))
                .collect();
            if missing.is_empty() {
                return sub;
            }
            gens.extend(missing);
            sub = self.subgroup_generated(&gens);
        }
    }

    /// Extracts `sub` as a group on `0..|sub|`, element `i` being the
    /// `i`-th smallest ambient index.
    pub fn extract(&self, sub: &Subgroup) -> FiniteGroup {
        let elems = Arc::new(sub.elements().to_vec());
        let law = SubLaw { parent: self.clone(), elems: elems.clone() };
        let identity = sub.position(self.identity).expect("subgroup contains identity");
        let gens: Vec<u32> = self
            .subgroup_gens(sub)
            .into_iter()
            .map(|g| sub.position(g).unwrap())
            .collect();
        let inv: Vec<u32> = elems.iter().map(|&x| sub.position(self.inv(x)).unwrap()).collect();
        let mut g = FiniteGroup {
            order: sub.order(),
            identity,
            inv: Arc::new(inv),
            gens,
            law: Law::Implicit(Arc::new(law)),
            matrices: None,
        };
        if g.order <= TABLE_CAP {
            g.tabulate();
        }
        g
    }
}

struct SubLaw {
    parent: FiniteGroup,
    elems: Arc<Vec<u32>>,
}

impl GroupLaw for SubLaw {
    fn order(&self) -> usize {
        self.elems.len()
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let x = self.parent.mul(self.elems[a as usize], self.elems[b as usize]);
        self.elems.binary_search(&x).expect("subgroup closed under products") as u32
    }
}

/// Conjugacy classes with representatives, sizes and element orders.
#[derive(Clone, Debug)]
pub struct Classes {
    /// Class index of every element.
    pub class_of: Vec<u32>,
    /// Members of each class, sorted; class 0 is the identity.
    pub members: Vec<Vec<u32>>,
    pub orders: Vec<u64>,
}

impl Classes {
    pub fn compute(g: &FiniteGroup) -> Self {
        const NONE: u32 = u32::MAX;
        let mut class_of = vec![NONE; g.order()];
        let mut members: Vec<Vec<u32>> = Vec::new();
        let mut start = vec![g.identity()];
        start.extend((0..g.order() as u32).filter(|&x| x != g.identity()));
        for x in start {
            if class_of[x as usize] != NONE {
                continue;
            }
            let id = members.len() as u32;
            class_of[x as usize] = id;
            let mut cls = vec![x];
            let mut i = 0;
            while i < cls.len() {
                let y = cls[i];
                for &s in g.gens() {
                    let z = g.conj(y, s);
                    if class_of[z as usize] == NONE {
                        class_of[z as usize] = id;
                        cls.push(z);
                    }
                }
                i += 1;
            }
            cls.sort_unstable();
            members.push(cls);
        }
        let orders = members.iter().map(|c| g.element_order(c[0])).collect();
        Self { class_of, members, orders }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn rep(&self, k: usize) -> u32 {
        self.members[k][0]
    }

    pub fn size(&self, k: usize) -> u64 {
        self.members[k].len() as u64
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &o| crate::numtheory::lcm(acc, o))
    }

    /// Class of `g_k^a`.
    pub fn power_class(&self, g: &FiniteGroup, k: usize, a: u64) -> usize {
        self.class_of[g.pow(self.rep(k), a) as usize] as usize
    }
}

/// Packs a matrix with entries below `2^bits` into a `u128`, first entry in
/// the most significant position (so integer order is lexicographic order).
fn pack(m: &[u32], bits: u32) -> u128 {
    m.iter().fold(0u128, |acc, &x| (acc << bits) | x as u128)
}

fn mat_mul(a: &[u32], b: &[u32], n: usize, m: u64) -> Vec<u32> {
    let mut out = vec![0u32; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0u64;
            for k in 0..n {
                s = (s + a[i * n + k] as u64 * b[k * n + j] as u64) % m;
            }
            out[i * n + j] = s as u32;
        }
    }
    out
}

/// True if the matrix is invertible modulo every prime dividing `m`.
fn invertible_mod(a: &[u32], n: usize, m: u64) -> bool {
    factorize(m).into_iter().all(|(p, _)| {
        let mut r: Vec<u64> = a.iter().map(|&x| x as u64 % p).collect();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&i| r[i * n + col] != 0) else {
                return false;
            };
            for j in 0..n {
                r.swap(col * n + j, piv * n + j);
            }
            let iv = inv_mod(r[col * n + col], p).unwrap();
            for i in col + 1..n {
                let f = r[i * n + col] * iv % p;
                for j in col..n {
                    r[i * n + j] = (r[i * n + j] + p * p - f * r[col * n + j] % p) % p;
                }
            }
        }
        true
    })
}

struct MatrixLaw {
    n: usize,
    m: u64,
    bits: u32,
    keys: Vec<u128>,
    data: Arc<MatrixData>,
}

impl MatrixLaw {
    fn index(&self, mat: &[u32]) -> u32 {
        self.keys.binary_search(&pack(mat, self.bits)).expect("closed under products") as u32
    }
}

impl GroupLaw for MatrixLaw {
    fn order(&self) -> usize {
        self.keys.len()
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let c = mat_mul(self.data.matrix(a), self.data.matrix(b), self.n, self.m);
        self.index(&c)
    }
}

/// Closure of a set of invertible `n x n` matrices over `Z/m` (row-major
/// integer entries), indexed lexicographically by entries.
pub fn group_from_generators(gens: &[Vec<i64>], n: usize, m: u64, cap: usize) -> Result<FiniteGroup> {
    if n == 0 || m < 2 {
        return Err(Error::InvalidInput("need n >= 1 and modulus >= 2".into()));
    }
    let bits = 64 - (m - 1).leading_zeros();
    if bits as usize * n * n > 128 || m > u32::MAX as u64 {
        return Err(Error::InvalidInput(format!(
            "{n}x{n} matrices mod {m} are too large for this engine"
        )));
    }
    let mut reduced: Vec<Vec<u32>> = Vec::new();
    for g in gens {
        if g.len() != n * n {
            return Err(Error::InvalidInput(format!("generator has {} entries, expected {}", g.len(), n * n)));
        }
        let r: Vec<u32> = g.iter().map(|&x| reduce_i64(x, m) as u32).collect();
        if !invertible_mod(&r, n, m) {
            return Err(Error::InvalidInput(format!("generator {g:?} is not invertible mod {m}")));
        }
        reduced.push(r);
    }
    let mut id = vec![0u32; n * n];
    for i in 0..n {
        id[i * n + i] = 1;
    }
    // generator inverses by powering
    let ginv: Vec<Vec<u32>> = reduced
        .iter()
        .map(|g| {
            let mut prev = id.clone();
            let mut cur = g.clone();
            while cur != id {
                prev = cur.clone();
                cur = mat_mul(&cur, g, n, m);
            }
            prev
        })
        .collect();
    // breadth-first closure, tracking inverses: (x g)^{-1} = g^{-1} x^{-1}
    let mut seen: HashSet<u128> = HashSet::new();
    let mut mats: Vec<Vec<u32>> = vec![id.clone()];
    let mut invs: Vec<Vec<u32>> = vec![id.clone()];
    seen.insert(pack(&id, bits));
    let mut i = 0;
    while i < mats.len() {
        for (g, gi) in reduced.iter().zip(&ginv) {
            let y = mat_mul(&mats[i], g, n, m);
            if seen.insert(pack(&y, bits)) {
                if mats.len() >= cap {
                    return Err(Error::SizeExceeded { what: "generated group".into(), cap: cap as u64 });
                }
                invs.push(mat_mul(gi, &invs[i], n, m));
                mats.push(y);
            }
        }
        i += 1;
    }
    let mut order: Vec<usize> = (0..mats.len()).collect();
    order.sort_by_key(|&i| pack(&mats[i], bits));
    let keys: Vec<u128> = order.iter().map(|&i| pack(&mats[i], bits)).collect();
    let mut entries = Vec::with_capacity(mats.len() * n * n);
    for &i in &order {
        entries.extend_from_slice(&mats[i]);
    }
    let data = Arc::new(MatrixData { modulus: m, n, entries });
    let law = MatrixLaw { n, m, bits, keys, data: data.clone() };
    let index_of = |mat: &[u32]| law.index(mat);
    let identity = index_of(&id);
    let gen_idx: Vec<u32> = reduced.iter().map(|g| index_of(g)).collect();
    let mut inv = vec![0u32; mats.len()];
    for (&i, _) in order.iter().zip(0..) {
        inv[index_of(&mats[i]) as usize] = index_of(&invs[i]);
    }
    let order_n = law.keys.len();
    let law: Arc<dyn GroupLaw> = Arc::new(law);
    let mut g = FiniteGroup {
        order: order_n,
        identity,
        inv: Arc::new(inv),
        gens: gen_idx,
        law: Law::Implicit(law),
        matrices: Some(data),
    };
    if order_n <= TABLE_CAP {
        g.tabulate();
    }
    Ok(g)
}

/// Permutation group on `0..degree` generated by the given images.
pub fn group_from_permutations(gens: &[Vec<u32>], cap: usize) -> Result<FiniteGroup> {
    let degree = gens.first().map_or(1, |g| g.len());
    for g in gens {
        let mut sorted = g.clone();
        sorted.sort_unstable();
        if g.len() != degree || sorted.iter().enumerate().any(|(i, &x)| i as u32 != x) {
            return Err(Error::InvalidInput(format!("{g:?} is not a permutation of 0..{degree}")));
        }
    }
    let id: Vec<u32> = (0..degree as u32).collect();
    let compose = |a: &[u32], b: &[u32]| -> Vec<u32> { a.iter().map(|&x| b[x as usize]).collect() };
    let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut perms = vec![id.clone()];
    index.insert(id.clone(), 0);
    let mut i = 0;
    while i < perms.len() {
        for g in gens {
            let y = compose(&perms[i], g);
            if !index.contains_key(&y) {
                if perms.len() >= cap {
                    return Err(Error::SizeExceeded { what: "generated group".into(), cap: cap as u64 });
                }
                index.insert(y.clone(), perms.len() as u32);
                perms.push(y);
            }
        }
        i += 1;
    }
    let mut sorted = perms.clone();
    sorted.sort();
    let pos: HashMap<&Vec<u32>, u32> = sorted.iter().enumerate().map(|(i, p)| (p, i as u32)).collect();
    let n = sorted.len();
    if n > TABLE_CAP {
        return Err(Error::SizeExceeded { what: "permutation group order".into(), cap: TABLE_CAP as u64 });
    }
    let mut table = vec![vec![0u32; n]; n];
    for (a, pa) in sorted.iter().enumerate() {
        for (b, pb) in sorted.iter().enumerate() {
            table[a][b] = pos[&compose(pa, pb)];
        }
    }
    let mut g = FiniteGroup::from_table(table)?;
    g.gens = gens.iter().map(|p| pos[p]).collect();
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_groups() {
        let swap = group_from_generators(&[vec![0, 1, 1, 0]], 2, 2, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(swap.order(), 2);
        let sl = [vec![1, 1, 0, 1], vec![1, 0, 1, 1]];
        let g3 = group_from_generators(&sl, 2, 3, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(g3.order(), 24);
        let g9 = group_from_generators(&sl, 2, 9, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(g9.order(), 648);
        g9.check_identity_inverse().unwrap();
        g9.check_associative(0, 5000, 1).unwrap();
        // lexicographic indexing: the first element has the smallest entries
        let data = g3.matrices().unwrap();
        assert!(data.matrix(0) < data.matrix(1));
        assert!(matches!(
            group_from_generators(&[vec![2, 0, 0, 1]], 2, 4, DEFAULT_GROUP_CAP),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            group_from_generators(&sl, 2, 9, 100),
            Err(Error::SizeExceeded { .. })
        ));
    }

    #[test]
    fn deterministic_indexing() {
        let sl = [vec![1, 1, 0, 1], vec![1, 0, 1, 1]];
        let a = group_from_generators(&sl, 2, 5, DEFAULT_GROUP_CAP).unwrap();
        let b = group_from_generators(&[sl[1].clone(), sl[0].clone()], 2, 5, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(a.matrices().unwrap().entries, b.matrices().unwrap().entries);
        for x in 0..a.order() as u32 {
            for y in 0..a.order() as u32 {
                assert_eq!(a.mul(x, y), b.mul(x, y));
            }
        }
    }

    #[test]
    fn classes_and_subgroups() {
        let s3 = group_from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]], 1000).unwrap();
        assert_eq!(s3.order(), 6);
        let cl = Classes::compute(&s3);
        let mut sizes: Vec<u64> = (0..cl.len()).map(|k| cl.size(k)).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(cl.exponent(), 6);
        let c3 = s3.subgroup_generated(&[s3.gens()[0]]);
        assert_eq!(c3.order(), 3);
        assert!(s3.is_normal(&c3));
        let c2 = s3.subgroup_generated(&[s3.gens()[1]]);
        assert!(!s3.is_normal(&c2));
        assert_eq!(s3.normal_closure(&[s3.gens()[1]]).order(), 6);
        let ext = s3.extract(&c3);
        assert_eq!(ext.order(), 3);
        assert_eq!(Classes::compute(&ext).len(), 3);
    }

    #[test]
    fn table_validation() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]]).is_ok());
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        // a loop that is not associative: quasigroup of order 5 with identity
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteGroup::from_table(t).is_err());
    }
}
