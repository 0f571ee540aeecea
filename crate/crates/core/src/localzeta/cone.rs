use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `coeffs . x + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Affine {
    pub coeffs: Vec<i64>,
    #[serde(default)]
    pub constant: i64,
}

impl Affine {
    pub fn new(coeffs: Vec<i64>, constant: i64) -> Self {
        Self { coeffs, constant }
    }

    pub fn eval(&self, x: &[i64]) -> i64 {
        self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() + self.constant
    }
}

/// `affine(x) = 0 mod modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Congruence {
    pub affine: Affine,
    pub modulus: u64,
}

/// Integer points `x in Z^n` with every inequality `>= 0` and every congruence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone {
    pub dim: usize,
    #[serde(default)]
    pub inequalities: Vec<Affine>,
    #[serde(default)]
    pub congruences: Vec<Congruence>,
}

impl Cone {
    pub fn new(dim: usize) -> Self {
        Self { dim, inequalities: vec![], congruences: vec![] }
    }

    /// `x_i >= lower_i` for every coordinate.
    pub fn orthant(lower: &[i64]) -> Self {
        let dim = lower.len();
        let mut c = Self::new(dim);
        for (i, &l) in lower.iter().enumerate() {
            c = c.with_inequality(unit(dim, i), -l);
        }
        c
    }

    pub fn with_inequality(mut self, coeffs: Vec<i64>, constant: i64) -> Self {
        self.inequalities.push(Affine::new(coeffs, constant));
        self
    }

    pub fn with_congruence(mut self, coeffs: Vec<i64>, constant: i64, modulus: u64) -> Self {
        self.congruences.push(Congruence { affine: Affine::new(coeffs, constant), modulus });
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = self.inequalities.iter().any(|a| a.coeffs.len() != self.dim)
            || self.congruences.iter().any(|c| c.affine.coeffs.len() != self.dim || c.modulus == 0);
        if bad {
            return Err(Error::InvalidInput("cone data has the wrong dimension or a zero modulus".into()));
        }
        Ok(())
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.inequalities.iter().all(|a| a.eval(x) >= 0)
            && self.congruences.iter().all(|c| c.affine.eval(x).rem_euclid(c.modulus as i64) == 0)
    }

    /// Least common multiple of the congruence moduli.
    pub fn period(&self) -> i64 {
        self.congruences.iter().fold(1i64, |acc, c| num_integer::lcm(acc, c.modulus as i64))
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// `{apex + sum n_i g_i : n_i >= 0}` with linearly independent generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimplicialPiece {
    pub apex: Vec<i64>,
    pub generators: Vec<Vec<i64>>,
}

fn det(m: &[Vec<i128>]) -> i128 {
    // Bareiss elimination, exact on integers
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank && a[r][c] != 0 {
                let (f, g) = (a[r][c], a[rank][c]);
                for k in 0..cols {
                    a[r][k] = a[r][k] * g - a[rank][k] * f;
                }
                let h = a[r].iter().fold(0i128, |acc, &x| num_integer::gcd(acc, x));
                if h > 1 {
                    a[r].iter_mut().for_each(|x| *x /= h);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn primitive(v: Vec<i128>) -> Result<Vec<i64>> {
    let g = v.iter().fold(0i128, |acc, &x| num_integer::gcd(acc, x));
    v.iter()
        .map(|&x| i64::try_from(if g > 1 { x / g } else { x }).map_err(|_| Error::InvalidInput("cone data too large".into())))
        .collect()
}

/// Null vector of `m - 1` rows in dimension `m`, by signed maximal minors.
fn null_vector(rows: &[&Vec<i64>], m: usize) -> Vec<i128> {
    (0..m)
        .map(|j| {
            let minor: Vec<Vec<i128>> =
                rows.iter().map(|r| (0..m).filter(|&c| c != j).map(|c| r[c] as i128).collect()).collect();
            let d = det(&minor);
            if j % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

/// Extreme rays of the pointed cone `{z : h . z >= 0 for h in rows}`.
fn extreme_rays(rows: &[Vec<i64>], m: usize) -> Result<Vec<Vec<i64>>> {
    if rank(rows) < m {
        return Err(Error::Domain("the cone contains a line: unbounded in a negative direction".into()));
    }
    let mut rays = BTreeSet::new();
    for sub in subsets(rows.len(), m - 1) {
        let chosen: Vec<&Vec<i64>> = sub.iter().map(|&i| &rows[i]).collect();
        let d = null_vector(&chosen, m);
        if d.iter().all(|&x| x == 0) {
            continue;
        }
        let d = primitive(d)?;
        for cand in [d.clone(), d.iter().map(|x| -x).collect::<Vec<_>>()] {
            if rows.iter().all(|h| dot(h, &cand) >= 0) {
                rays.insert(cand);
            }
        }
    }
    Ok(rays.into_iter().collect())
}

/// Pulling triangulation of the face spanned by `face` (ray indices).
fn triangulate(face: &[usize], rays: &[Vec<i64>], rows: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let vecs: Vec<Vec<i64>> = face.iter().map(|&i| rays[i].clone()).collect();
    let d = rank(&vecs);
    if face.len() == d {
        return vec![face.to_vec()];
    }
    let apex = face[0];
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for h in rows {
        let g: Vec<usize> = face.iter().copied().filter(|&i| dot(h, &rays[i]) == 0).collect();
        if g.len() < face.len() && !g.contains(&apex) && !g.is_empty() {
            let gv: Vec<Vec<i64>> = g.iter().map(|&i| rays[i].clone()).collect();
            if rank(&gv) == d - 1 {
                facets.insert(g);
            }
        }
    }
    let mut out = Vec::new();
    for g in facets {
        for mut s in triangulate(&g, rays, rows) {
            s.insert(0, apex);
            out.push(s);
        }
    }
    out
}

/// Exact coordinates `lambda` with `x = sum lambda_i w_i`, as numerators over a
/// common denominator, or `None` if `x` is outside the span.
struct Coordinates {
    rows: Vec<usize>,
    adj: Vec<Vec<i128>>,
    det: i128,
    w: Vec<Vec<i64>>,
}

impl Coordinates {
    fn new(w: &[Vec<i64>]) -> Self {
        let d = w.len();
        let m = w[0].len();
        for rows in subsets(m, d) {
            let sq: Vec<Vec<i128>> = rows.iter().map(|&r| w.iter().map(|g| g[r] as i128).collect()).collect();
            let dt = det(&sq);
            if dt != 0 {
                // adjugate: adj[i][j] = (-1)^{i+j} minor(j, i)
                let adj = (0..d)
                    .map(|i| {
                        (0..d)
                            .map(|j| {
                                let minor: Vec<Vec<i128>> = (0..d)
                                    .filter(|&r| r != j)
                                    .map(|r| (0..d).filter(|&c| c != i).map(|c| sq[r][c]).collect())
                                    .collect();
                                let v = det(&minor);
                                if (i + j) % 2 == 0 {
                                    v
                                } else {
                                    -v
                                }
                            })
                            .collect()
                    })
                    .collect();
                let (adj, dt) = if dt < 0 { (neg_matrix(adj), -dt) } else { (adj, dt) };
                return Self { rows, adj, det: dt, w: w.to_vec() };
            }
        }
        unreachable!("generators are linearly independent")
    }

    /// Numerators `det * lambda_i`.
    fn solve(&self, x: &[i64]) -> Option<Vec<i128>> {
        let rhs: Vec<i128> = self.rows.iter().map(|&r| x[r] as i128).collect();
        let num: Vec<i128> = self.adj.iter().map(|row| row.iter().zip(&rhs).map(|(a, b)| a * b).sum()).collect();
        for (c, &xc) in x.iter().enumerate() {
            let v: i128 = self.w.iter().zip(&num).map(|(g, l)| g[c] as i128 * l).sum();
            if v != xc as i128 * self.det {
                return None;
            }
        }
        Some(num)
    }
}

fn neg_matrix(a: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
    a.into_iter().map(|r| r.into_iter().map(|x| -x).collect()).collect()
}

/// Disjoint simplicial pieces whose union is exactly the integer points of
/// `cone`. The polyhedron is homogenized, triangulated by pulling, made
/// half-open along a generic interior direction, and each simplicial cone is
/// split into translates of its fundamental parallelepiped; the slice at
/// height one gives the pieces.
pub fn decompose_cone(cone: &Cone) -> Result<Vec<SimplicialPiece>> {
    cone.validate()?;
    let n = cone.dim;
    let m = n + 1;
    let mut rows: Vec<Vec<i64>> = cone
        .inequalities
        .iter()
        .map(|a| a.coeffs.iter().copied().chain([a.constant]).collect())
        .collect();
    rows.push(unit(m, n));
    let rays = extreme_rays(&rows, m)?;
    for r in &rays {
        if r[n] == 0 && r[..n].iter().any(|&x| x < 0) {
            return Err(Error::Domain(format!("recession direction {:?} leaves every shifted positive orthant", &r[..n])));
        }
    }
    if rays.iter().all(|r| r[n] == 0) {
        return Ok(vec![]);
    }
    let all: Vec<usize> = (0..rays.len()).collect();
    let simplices = triangulate(&all, &rays, &rows);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xc0e);
    let y: Vec<i64> = loop {
        let mut y = vec![0i64; m];
        for r in &rays {
            let c = rng.gen_range(1..1_000_000i64);
            for (a, &b) in y.iter_mut().zip(r) {
                *a += c * b;
            }
        }
        let generic = simplices.iter().all(|s| {
            let w: Vec<Vec<i64>> = s.iter().map(|&i| rays[i].clone()).collect();
            Coordinates::new(&w).solve(&y).is_some_and(|l| l.iter().all(|&x| x != 0))
        });
        if generic {
            break y;
        }
    };
    let period = cone.period();
    let mut pieces = Vec::new();
    for s in &simplices {
        let w: Vec<Vec<i64>> = s.iter().map(|&i| rays[i].iter().map(|x| x * period).collect()).collect();
        let coords = Coordinates::new(&w);
        let open: Vec<bool> = coords.solve(&y).expect("y in span").iter().map(|&l| l < 0).collect();
        let lo: Vec<i64> = (0..m).map(|c| w.iter().map(|g| g[c].min(0)).sum()).collect();
        let hi: Vec<i64> = (0..m).map(|c| w.iter().map(|g| g[c].max(0)).sum()).collect();
        let mut q = lo.clone();
        q[n] = 0;
        if hi[n] < 0 {
            continue;
        }
        let top = hi.clone();
        let mut top = top;
        top[n] = top[n].min(1);
        loop {
            if let Some(num) = coords.solve(&q) {
                // mu_i = lambda_i in [0, 1), or (0, 1] on open facets
                let det = coords.det;
                let inside = num.iter().zip(&open).all(|(&l, &o)| if o { l > 0 && l <= det } else { l >= 0 && l < det });
                if inside {
                    emit(&q, &w, n, cone, &mut pieces);
                }
            }
            // odometer over the box
            let mut c = 0;
            loop {
                if c == m {
                    break;
                }
                if q[c] < top[c] {
                    q[c] += 1;
                    break;
                }
                q[c] = if c == n { 0 } else { lo[c] };
                c += 1;
            }
            if c == m {
                break;
            }
        }
    }
    pieces.sort();
    Ok(pieces)
}

/// Pieces at height one from the parallelepiped point `q`.
fn emit(q: &[i64], w: &[Vec<i64>], n: usize, cone: &Cone, out: &mut Vec<SimplicialPiece>) {
    let flat: Vec<Vec<i64>> = w.iter().filter(|g| g[n] == 0).map(|g| g[..n].to_vec()).collect();
    let mut push = |apex: Vec<i64>| {
        if cone.contains(&apex) {
            out.push(SimplicialPiece { apex, generators: flat.clone() });
        }
    };
    match q[n] {
        1 => push(q[..n].to_vec()),
        0 => {
            for g in w.iter().filter(|g| g[n] == 1) {
                push(q[..n].iter().zip(g).map(|(a, b)| a + b).collect());
            }
        }
        _ => {}
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionCheck {
    pub bound: i64,
    pub points: usize,
    pub uncovered: usize,
    pub overcovered: usize,
    pub spurious: usize,
}

impl DecompositionCheck {
    pub fn holds(&self) -> bool {
        self.uncovered == 0 && self.overcovered == 0 && self.spurious == 0
    }
}

/// Compares the pieces with direct membership on the box `[0, bound]^n`.
pub fn verify_decomposition(cone: &Cone, pieces: &[SimplicialPiece], bound: i64) -> DecompositionCheck {
    let n = cone.dim;
    let mut hits: HashMap<Vec<i64>, usize> = HashMap::new();
    fn walk(p: &[i64], gens: &[Vec<i64>], bound: i64, hits: &mut HashMap<Vec<i64>, usize>) {
        if p.iter().any(|&x| x > bound) {
            return;
        }
        match gens.split_first() {
            None => {
                if p.iter().all(|&x| x >= 0) {
                    *hits.entry(p.to_vec()).or_insert(0) += 1;
                }
            }
            Some((g, rest)) => {
                let mut cur = p.to_vec();
                loop {
                    walk(&cur, rest, bound, hits);
                    cur.iter_mut().zip(g).for_each(|(a, b)| *a += b);
                    if cur.iter().any(|&x| x > bound) || g.iter().all(|&x| x == 0) {
                        break;
                    }
                }
            }
        }
    }
    for piece in pieces {
        walk(&piece.apex, &piece.generators, bound, &mut hits);
    }
    let mut check = DecompositionCheck { bound, points: 0, uncovered: 0, overcovered: 0, spurious: 0 };
    let mut x = vec![0i64; n];
    loop {
        let inside = cone.contains(&x);
        let h = hits.get(&x).copied().unwrap_or(0);
        check.points += usize::from(inside);
        match (inside, h) {
            (true, 0) => check.uncovered += 1,
            (true, 1) | (false, 0) => {}
            (true, _) => check.overcovered += 1,
            (false, _) => check.spurious += 1,
        }
        let mut c = 0;
        while c < n && x[c] == bound {
            x[c] = 0;
            c += 1;
        }
        if c == n {
            break;
        }
        x[c] += 1;
    }
    check
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_line() {
        let c = Cone::orthant(&[1]);
        let pieces = decompose_cone(&c).unwrap();
        assert_eq!(pieces, vec![SimplicialPiece { apex: vec![1], generators: vec![vec![1]] }]);
    }

    #[test]
    fn diagonal_split() {
        let c = Cone::new(2).with_inequality(vec![1, -1], 0).with_inequality(vec![0, 1], -1);
        let pieces = decompose_cone(&c).unwrap();
        assert!(verify_decomposition(&c, &pieces, 50).holds());
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].apex, vec![1, 1]);
        // the same set as a non-simplicial description splits in two
        let c2 = Cone::orthant(&[1, 1]).with_inequality(vec![1, -1], 0).with_inequality(vec![2, -1], 0);
        let pieces = decompose_cone(&c2).unwrap();
        assert!(verify_decomposition(&c2, &pieces, 50).holds());
    }

    #[test]
    fn congruence_sublattice() {
        let c = Cone::orthant(&[1, 1]).with_congruence(vec![1, -1], 0, 2);
        let pieces = decompose_cone(&c).unwrap();
        let check = verify_decomposition(&c, &pieces, 50);
        assert!(check.holds(), "{check:?}");
        assert_eq!(check.points, 25 * 25 + 25 * 25);
    }

    #[test]
    fn three_dimensional_and_bounded() {
        let c = Cone::orthant(&[0, 0, 0]).with_inequality(vec![1, 1, -1], 0).with_congruence(vec![1, 2, 0], 1, 3);
        let pieces = decompose_cone(&c).unwrap();
        assert!(verify_decomposition(&c, &pieces, 30).holds());
        let boxed = Cone::orthant(&[0, 0]).with_inequality(vec![-1, 0], 3).with_inequality(vec![0, -1], 2);
        let pieces = decompose_cone(&boxed).unwrap();
        assert_eq!(pieces.len(), 12);
        assert!(pieces.iter().all(|p| p.generators.is_empty()));
        let strip = Cone::orthant(&[0, 0]).with_inequality(vec![1, -1], 0).with_inequality(vec![-1, 1], 3);
        assert!(verify_decomposition(&strip, &decompose_cone(&strip).unwrap(), 50).holds());
        // non-simplicial recession cone: four rays
        let square = Cone::orthant(&[0, 0, 0])
            .with_inequality(vec![1, 1, -1], 0)
            .with_inequality(vec![-1, 1, 1], 0)
            .with_inequality(vec![1, -1, 1], 0);
        assert!(verify_decomposition(&square, &decompose_cone(&square).unwrap(), 20).holds());
    }

    #[test]
    fn rejects_unbounded_below() {
        let c = Cone::new(1).with_inequality(vec![-1], 0);
        assert!(matches!(decompose_cone(&c), Err(Error::Domain(_))));
        let line = Cone::new(2).with_inequality(vec![0, 1], 0);
        assert!(matches!(decompose_cone(&line), Err(Error::Domain(_))));
        let empty = Cone::orthant(&[0]).with_inequality(vec![-1], -1);
        assert!(decompose_cone(&empty).unwrap().is_empty());
    }
}
