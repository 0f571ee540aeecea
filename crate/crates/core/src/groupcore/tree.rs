use serde::Serialize;

use super::clifford::{max_normal_p_subgroup, restriction_multiplicities, NormalPair, SubgroupChars};
use super::group::{FiniteGroup, Subgroup};
use crate::dirichlet::DirichletPoly;
use crate::error::{Error, Result};
use crate::numtheory::prime_power;

/// A node `(H, K, rho)`: `rho in Irr(K)`, `K` a normal `p`-subgroup of `H`.
/// `stabilizer` is `S = Stab_H(rho)` and `p_radical` is `V = O_p(S)`.
#[derive(Clone, Debug, Serialize)]
pub struct TreeNode {
    pub h_order: usize,
    pub k_order: usize,
    /// Index of `rho` in the character table of `K`.
    pub char_index: usize,
    pub dim: u64,
    pub stabilizer: Subgroup,
    pub p_radical: Subgroup,
    /// `[H : S]`.
    pub index: u64,
    /// Size of the orbit of `rho` under the parent stabilizer (1 at the root).
    pub orbit_size: usize,
    /// `dim rho / dim(parent rho)` (1 at the root).
    pub dim_ratio: u64,
    /// `zeta_{S|rho}` by brute force, at leaves (`V = K`).
    pub leaf_zeta: Option<DirichletPoly>,
    pub children: Vec<TreeNode>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionTree {
    pub p: u64,
    pub root: TreeNode,
}

impl DecompositionTree {
    pub fn depth(&self) -> usize {
        fn go(n: &TreeNode) -> usize {
            1 + n.children.iter().map(go).max().unwrap_or(0)
        }
        go(&self.root)
    }

    pub fn node_count(&self) -> usize {
        fn go(n: &TreeNode) -> usize {
            1 + n.children.iter().map(go).sum::<usize>()
        }
        go(&self.root)
    }

    pub fn leaves(&self) -> Vec<&TreeNode> {
        fn go<'a>(n: &'a TreeNode, out: &mut Vec<&'a TreeNode>) {
            if n.children.is_empty() {
                out.push(n);
            }
            for c in &n.children {
                go(c, out);
            }
        }
        let mut out = Vec::new();
        go(&self.root, &mut out);
        out
    }
}

fn is_p_group(order: usize, p: u64) -> bool {
    order == 1 || prime_power(order as u64).is_some_and(|(b, _)| b == p)
}

/// Builds the decomposition tree of `rho in Irr(K)` for a normal `p`-subgroup
/// `K` of `H`. Orbit representatives are the minimal character indices.
pub fn decomposition_tree(h: &FiniteGroup, k: &Subgroup, rho: usize, p: u64) -> Result<DecompositionTree> {
    if !is_p_group(k.order(), p) {
        return Err(Error::InvalidInput(format!("K has order {}, not a power of {p}", k.order())));
    }
    if !h.is_normal(k) {
        return Err(Error::InvalidInput("K is not normal in H".into()));
    }
    let kc = SubgroupChars::new(h, k.clone())?;
    if rho >= kc.table.len() {
        return Err(Error::InvalidInput(format!("character index {rho} out of range")));
    }
    let root = build(h, &h.whole(), &kc, rho, p, 1, 1)?;
    Ok(DecompositionTree { p, root })
}

fn build(
    ambient: &FiniteGroup,
    h: &Subgroup,
    k: &SubgroupChars,
    rho: usize,
    p: u64,
    orbit_size: usize,
    dim_ratio: u64,
) -> Result<TreeNode> {
    let s = k.stabilizer(ambient, h, rho);
    let s_group = ambient.extract(&s);
    let v_local = max_normal_p_subgroup(&s_group, p);
    let mut v: Vec<u32> = v_local.elements().iter().map(|&i| s.elements()[i as usize]).collect();
    v.sort_unstable();
    let v = Subgroup::from_sorted(v);
    let index = (h.order() / s.order()) as u64;
    let dim = k.table.degrees[rho];
    let mut node = TreeNode {
        h_order: h.order(),
        k_order: k.order(),
        char_index: rho,
        dim,
        stabilizer: s.clone(),
        p_radical: v.clone(),
        index,
        orbit_size,
        dim_ratio,
        leaf_zeta: None,
        children: vec![],
    };
    if v == k.sub {
        let pair = NormalPair::from_parts(ambient, SubgroupChars::new(ambient, s)?, k.clone())?;
        node.leaf_zeta = Some(pair.relative_zeta(rho)?);
        return Ok(node);
    }
    if v.order() <= k.order() || !k.sub.is_subset(&v) {
        return Err(Error::Internal("p-radical chain is not strictly increasing".into()));
    }
    let vc = SubgroupChars::new(ambient, v)?;
    let mult = restriction_multiplicities(&vc, k)?;
    let over: Vec<usize> = (0..vc.table.len()).filter(|&t| mult[t][rho] > 0).collect();
    let gens = ambient.subgroup_gens(&s);
    for (tau, size) in vc.orbit_reps(ambient, &gens, &over) {
        let ratio = vc.table.degrees[tau] / dim;
        node.children.push(build(ambient, &s, &vc, tau, p, size, ratio)?);
    }
    Ok(node)
}

/// Folds `zeta_{H|rho} = [H:S]^{-s} sum_{tau} |tau^S|^{-1} (dim tau / dim rho)^{-s} zeta_{S|tau}`
/// over the tree, summing one representative per orbit.
pub fn zeta_via_tree(tree: &DecompositionTree) -> Result<DirichletPoly> {
    fn go(n: &TreeNode) -> Result<DirichletPoly> {
        if n.index == 0 || n.dim_ratio == 0 || n.orbit_size == 0 {
            return Err(Error::InvalidInput("malformed tree: zero index, ratio or orbit".into()));
        }
        let inner = match (&n.leaf_zeta, n.children.is_empty()) {
            (Some(z), true) => z.clone(),
            (None, false) => {
                let mut acc = DirichletPoly::zero();
                for c in &n.children {
                    // the orbit contributes |orbit| copies weighted by 1/|orbit|
                    acc = acc.add(&go(c)?.shift(c.dim_ratio));
                }
                acc
            }
            _ => return Err(Error::InvalidInput("malformed tree: leaf without zeta or inner node with zeta".into())),
        };
        Ok(inner.shift(n.index))
    }
    go(&tree.root)
}

#[cfg(test)]
mod tests {
    use super::super::catalog::named;
    use super::super::clifford::relative_zeta;
    use super::super::group::{group_from_generators, DEFAULT_GROUP_CAP};
    use super::*;

    #[test]
    fn p_group_is_single_node() {
        let g = named("Heis27").unwrap();
        let t = decomposition_tree(&g, &g.whole(), 3, 3).unwrap();
        assert_eq!(t.node_count(), 1);
        assert_eq!(zeta_via_tree(&t).unwrap(), DirichletPoly::from_counts([(1, 1)]));
    }

    #[test]
    fn s4_over_v4() {
        let s4 = named("S4").unwrap();
        let v4 = max_normal_p_subgroup(&s4, 2);
        for rho in 1..4 {
            let t = decomposition_tree(&s4, &v4, rho, 2).unwrap();
            assert_eq!(t.root.stabilizer.order(), 8);
            assert_eq!(t.root.p_radical.order(), 8);
            assert_eq!(t.depth(), 2);
            assert!(t.root.children.iter().all(|c| c.children.is_empty()));
            let z = zeta_via_tree(&t).unwrap();
            assert_eq!(z, DirichletPoly::from_counts([(3, 2)]));
            assert_eq!(z, relative_zeta(&s4, &v4, rho).unwrap());
        }
    }

    #[test]
    fn rejects_bad_input() {
        let s4 = named("S4").unwrap();
        assert!(decomposition_tree(&s4, &s4.whole(), 0, 2).is_err());
        let c4 = s4.subgroup_generated(&[s4.gens()[0]]);
        assert!(decomposition_tree(&s4, &c4, 0, 2).is_err());
    }

    #[test]
    fn sl2_mod_9_congruence_kernel() {
        let sl = [vec![1, 1, 0, 1], vec![1, 0, 1, 1]];
        let g = group_from_generators(&sl, 2, 9, DEFAULT_GROUP_CAP).unwrap();
        let data = g.matrices().unwrap();
        let kernel: Vec<u32> = (0..g.order() as u32)
            .filter(|&x| {
                let m = data.matrix(x);
                m[0] % 3 == 1 && m[1].is_multiple_of(3) && m[2].is_multiple_of(3) && m[3] % 3 == 1
            })
            .collect();
        let k = Subgroup::from_sorted(kernel);
        assert_eq!(k.order(), 27);
        let pair = NormalPair::new(&g, &g.whole(), &k).unwrap();
        assert!(pair.k.table.degrees.iter().all(|&d| d == 1));
        for rho in 0..27 {
            let t = decomposition_tree(&g, &k, rho, 3).unwrap();
            let z = zeta_via_tree(&t).unwrap();
            assert_eq!(z, pair.relative_zeta(rho).unwrap(), "rho = {rho}");
            for leaf in t.leaves() {
                assert_eq!(leaf.p_radical.order(), leaf.k_order);
            }
        }
        let json = serde_json::to_string(&decomposition_tree(&g, &k, 1, 3).unwrap()).unwrap();
        assert!(json.contains("\"p_radical\""));
    }
}
