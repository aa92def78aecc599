//! Transitivity trees over finite systems: x-paths, levels, legality, reach
//! sets and the mutual-reachability equivalence.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt::Write as _;

use crate::error::Error;
use crate::relation::{FiniteSystem, PointId, PointSet};

/// Default node budget for [`build_tree`].
pub const TREE_CAP: usize = 1_000_000;

/// One x-path `⟨x₀,…,xₙ⟩`, stored through its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathNode {
    pub parent: Option<usize>,
    pub endpoint: PointId,
    pub depth: usize,
}

/// All x-paths of length at most `depth_bound`, in breadth-first order with
/// children sorted by endpoint.
#[derive(Debug, Clone)]
pub struct TruncTree {
    pub root: PointId,
    pub depth_bound: usize,
    pub nodes: Vec<PathNode>,
    pub levels: Vec<Vec<usize>>,
}

impl TruncTree {
    pub fn path(&self, mut i: usize) -> Vec<PointId> {
        let mut out = vec![self.nodes[i].endpoint];
        while let Some(p) = self.nodes[i].parent {
            out.push(self.nodes[p].endpoint);
            i = p;
        }
        out.reverse();
        out
    }

    /// Endpoints of level `n`.
    pub fn level_endpoints(&self, n: usize, sys: &FiniteSystem) -> PointSet {
        sys.set_of(self.levels.get(n).into_iter().flatten().map(|&i| self.nodes[i].endpoint))
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        !self.nodes.iter().any(|n| n.parent == Some(i))
    }

    pub fn to_dot(&self, sys: &FiniteSystem) -> String {
        let mut s = String::from("digraph tree {\n  rankdir=TB;\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  n{} [label=\"{}\"];", i, sys.name(n.endpoint).replace('"', "\\\""));
        }
        for lvl in &self.levels {
            let ids: Vec<String> = lvl.iter().map(|i| format!("n{i};")).collect();
            let _ = writeln!(s, "  {{ rank=same; {} }}", ids.join(" "));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if let Some(p) = n.parent {
                let _ = writeln!(s, "  n{p} -> n{i};");
            }
        }
        s.push_str("}\n");
        s
    }
}

pub fn build_tree(sys: &FiniteSystem, x: PointId, d: usize, cap: usize) -> Result<TruncTree, Error> {
    let mut nodes = vec![PathNode { parent: None, endpoint: x, depth: 0 }];
    let mut levels = vec![vec![0]];
    for depth in 1..=d {
        let mut next = Vec::new();
        for &i in &levels[depth - 1] {
            for q in sys.succ(nodes[i].endpoint).ones() {
                if nodes.len() == cap {
                    return Err(Error::Overflow { partial: nodes.len(), cap });
                }
                next.push(nodes.len());
                nodes.push(PathNode { parent: Some(i), endpoint: q, depth });
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    Ok(TruncTree { root: x, depth_bound: d, nodes, levels })
}

/// `levelₙ(T_G(x))* = Gⁿ(x)`.
pub fn level_star(sys: &FiniteSystem, x: PointId, n: usize) -> PointSet {
    sys.power_image(x, n)
}

/// `Lₙ(T_G(x))* = ⋃_{k ≤ n} Gᵏ(x)`.
pub fn cum_level_star(sys: &FiniteSystem, x: PointId, n: usize) -> PointSet {
    let mut cur = sys.singleton(x);
    let mut cum = cur.clone();
    for _ in 0..n {
        cur = sys.image(&cur);
        cum.union_with(&cur);
    }
    cum
}

/// Strongly connected components, each sorted, listed in the topological order
/// of the condensation that prefers the component with the smallest point.
pub fn sccs(sys: &FiniteSystem) -> Vec<Vec<PointId>> {
    let mut g = DiGraph::<(), ()>::with_capacity(sys.len(), 0);
    let ids: Vec<_> = (0..sys.len()).map(|_| g.add_node(())).collect();
    for (a, b) in sys.edges() {
        g.add_edge(ids[a], ids[b], ());
    }
    let mut comps: Vec<Vec<PointId>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<PointId> = c.into_iter().map(|n| n.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    comps.sort_unstable_by_key(|c| c[0]);
    let mut comp_of = vec![0; sys.len()];
    for (i, c) in comps.iter().enumerate() {
        for &p in c {
            comp_of[p] = i;
        }
    }
    let mut indeg = vec![0usize; comps.len()];
    let mut out: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); comps.len()];
    for (a, b) in sys.edges() {
        let (ca, cb) = (comp_of[a], comp_of[b]);
        if ca != cb && out[ca].insert(cb) {
            indeg[cb] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..comps.len()).filter(|&c| indeg[c] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(comps.len());
    while let Some(Reverse(c)) = ready.pop() {
        order.push(comps[c].clone());
        for &d in &out[c] {
            indeg[d] -= 1;
            if indeg[d] == 0 {
                ready.push(Reverse(d));
            }
        }
    }
    order
}

/// Points lying on a cycle, self-loops included.
pub fn cyclic_points(sys: &FiniteSystem) -> PointSet {
    let mut out = sys.empty_set();
    for c in sccs(sys) {
        if c.len() > 1 || sys.has_edge(c[0], c[0]) {
            out.extend(c);
        }
    }
    out
}

/// Backward closure of `a`: every point with a path into `a`.
pub fn back_closure(sys: &FiniteSystem, a: &PointSet) -> PointSet {
    let mut out = a.clone();
    let mut frontier = a.clone();
    while !frontier.is_clear() {
        let mut next = sys.preimage(&frontier);
        next.difference_with(&out);
        out.union_with(&next);
        frontier = next;
    }
    out
}

/// Points with an infinite walk: those reaching a cycle.
pub fn legal_set(sys: &FiniteSystem) -> PointSet {
    back_closure(sys, &cyclic_points(sys))
}

pub fn is_legal(sys: &FiniteSystem, x: PointId) -> bool {
    legal_set(sys).contains(x)
}

/// The lexicographically least infinite walk from `x` as `stem · cycle^ω`.
///
/// At each step the smallest successor that is itself legal is taken.
pub fn legal_lasso(sys: &FiniteSystem, x: PointId) -> Option<(Vec<PointId>, Vec<PointId>)> {
    lasso_within(sys, x, &legal_set(sys))
}

fn lasso_within(sys: &FiniteSystem, x: PointId, legal: &PointSet) -> Option<(Vec<PointId>, Vec<PointId>)> {
    if !legal.contains(x) {
        return None;
    }
    let mut walk = vec![x];
    let mut seen = vec![usize::MAX; sys.len()];
    seen[x] = 0;
    let mut cur = x;
    loop {
        cur = sys.succ(cur).ones().find(|&q| legal.contains(q))?;
        if seen[cur] != usize::MAX {
            let cycle = walk.split_off(seen[cur]);
            return Some((walk, cycle));
        }
        seen[cur] = walk.len();
        walk.push(cur);
    }
}

/// The lexicographically least infinite walk from `x` that stays in `keep`.
pub fn lasso_inside(sys: &FiniteSystem, x: PointId, keep: &PointSet) -> Option<(Vec<PointId>, Vec<PointId>)> {
    if !keep.contains(x) {
        return None;
    }
    let sub = sys.restrict(keep)?;
    let ids: Vec<PointId> = keep.ones().collect();
    let local = ids.iter().position(|&p| p == x)?;
    let (stem, cycle) = legal_lasso(&sub, local)?;
    Some((stem.iter().map(|&i| ids[i]).collect(), cycle.iter().map(|&i| ids[i]).collect()))
}

/// `X \ π₀(G)`.
pub fn degenerate_set(sys: &FiniteSystem) -> PointSet {
    sys.complement(&sys.nondegenerate())
}

/// `T_G(x)* = ⋃ₙ Gⁿ(x)`.
pub fn reach_star(sys: &FiniteSystem, x: PointId) -> PointSet {
    let mut out = sys.singleton(x);
    let mut frontier = out.clone();
    while !frontier.is_clear() {
        let mut next = sys.image(&frontier);
        next.difference_with(&out);
        out.union_with(&next);
        frontier = next;
    }
    out
}

/// Union of the vertex sets of all infinite branches from `x`.
pub fn branch_union(sys: &FiniteSystem, x: PointId) -> PointSet {
    let mut r = reach_star(sys, x);
    r.intersect_with(&legal_set(sys));
    r
}

/// `[x]_G = T_G(x)* ∩ T_{G⁻¹}(x)*`.
pub fn equiv_class(sys: &FiniteSystem, x: PointId) -> PointSet {
    let mut r = reach_star(sys, x);
    r.intersect_with(&reach_star(&sys.inverse(), x));
    r
}

/// An eventually periodic walk `stem · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso<T> {
    pub stem: Vec<T>,
    pub cycle: Vec<T>,
}

/// Order `n` of a cyclic walk `⟨x₀,…,xₙ⟩^ω`, or `None` if the walk is not
/// purely periodic.
pub fn cyclic_order<T: PartialEq + Clone>(w: &Lasso<T>) -> Option<usize> {
    if w.cycle.is_empty() {
        return None;
    }
    let len = w.cycle.len();
    let period = (1..=len)
        .find(|&p| len.is_multiple_of(p) && (0..len).all(|i| w.cycle[i] == w.cycle[i % p]))
        .unwrap_or(len);
    let mut cycle: Vec<T> = w.cycle[..period].to_vec();
    let mut stem = w.stem.clone();
    while let Some(last) = stem.last() {
        if *last != cycle[period - 1] {
            break;
        }
        stem.pop();
        cycle.rotate_right(1);
    }
    stem.is_empty().then(|| period - 1)
}

/// A finite branch prefix and whether it extends to an infinite branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub prefix: Vec<PointId>,
    pub extendable: bool,
}

/// All x-paths of length exactly `k`, each flagged by legality of its endpoint.
pub fn walks(sys: &FiniteSystem, x: PointId, k: usize, cap: usize) -> Result<Vec<Walk>, Error> {
    let legal = legal_set(sys);
    let t = build_tree(sys, x, k, cap)?;
    Ok(t.levels
        .get(k)
        .into_iter()
        .flatten()
        .map(|&i| {
            let prefix = t.path(i);
            let extendable = legal.contains(*prefix.last().unwrap());
            Walk { prefix, extendable }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fx1() -> FiniteSystem {
        FiniteSystem::new(&["1", "2"], &[("1", "2"), ("2", "1"), ("2", "2")]).unwrap()
    }
    fn fx2() -> FiniteSystem {
        FiniteSystem::new(&["0", "1"], &[("0", "0"), ("1", "0"), ("0", "1")]).unwrap()
    }
    fn fx3() -> FiniteSystem {
        FiniteSystem::new(&["0", "1", "2"], &[("0", "1"), ("1", "2"), ("2", "0"), ("2", "2")]).unwrap()
    }
    fn ab() -> FiniteSystem {
        FiniteSystem::new(&["a", "b"], &[("a", "b")]).unwrap()
    }

    fn paths(s: &FiniteSystem, t: &TruncTree) -> Vec<String> {
        (0..t.nodes.len()).map(|i| t.path(i).iter().map(|&p| s.name(p)).collect()).collect()
    }

    #[test]
    fn build_tree_examples() {
        let s = fx2();
        let t = build_tree(&s, 1, 2, TREE_CAP).unwrap();
        assert_eq!(paths(&s, &t), ["1", "10", "100", "101"]);
        let s = ab();
        let t = build_tree(&s, 1, 3, TREE_CAP).unwrap();
        assert_eq!(paths(&s, &t), ["b"]);
        assert!(t.is_leaf(0));
        let s = fx1();
        assert_eq!(paths(&s, &build_tree(&s, 0, 1, TREE_CAP).unwrap()), ["1", "12"]);
        assert_eq!(
            paths(&s, &build_tree(&s, 0, 3, TREE_CAP).unwrap()),
            ["1", "12", "121", "122", "1212", "1221", "1222"]
        );
    }

    #[test]
    fn tree_budget_is_a_typed_error() {
        let s = fx1();
        assert!(matches!(build_tree(&s, 0, 10, 20), Err(Error::Overflow { partial: 20, cap: 20 })));
    }

    #[test]
    fn cumulative_levels() {
        let s = fx3();
        assert_eq!(cum_level_star(&s, 0, 2), s.full_set());
        assert_eq!(level_star(&s, 2, 0), s.singleton(2));
    }

    #[test]
    fn legality_examples() {
        assert!(is_legal(&fx1(), 0));
        assert!(!is_legal(&ab(), 1));
        assert!(!is_legal(&ab(), 0));
        let d = FiniteSystem::from_indices(1, &[(0, 0)]).unwrap();
        assert!(is_legal(&d, 0));
        assert_eq!(legal_lasso(&fx2(), 1), Some((vec![1], vec![0])));
    }

    #[test]
    fn degenerate_examples() {
        assert!(degenerate_set(&fx2()).is_clear());
        let s = ab();
        assert_eq!(s.names_of(&degenerate_set(&s)), ["b"]);
    }

    #[test]
    fn reach_branch_equiv_examples() {
        let s = fx3();
        assert_eq!(reach_star(&s, 0), s.full_set());
        assert_eq!(equiv_class(&s, 0), s.full_set());
        let s = ab();
        assert_eq!(reach_star(&s, 1), s.singleton(1));
        assert!(branch_union(&s, 0).is_clear());
        let s = fx1();
        assert_eq!(reach_star(&s, 0), s.full_set());
        assert_eq!(branch_union(&s, 0), s.full_set());
        assert_eq!(equiv_class(&s, 0), s.full_set());
        let d = FiniteSystem::from_indices(2, &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(branch_union(&d, 1), d.singleton(1));
        assert_eq!(equiv_class(&d, 1), d.singleton(1));
    }

    #[test]
    fn cyclic_order_examples() {
        assert_eq!(cyclic_order(&Lasso { stem: vec![], cycle: vec!['a'] }), Some(0));
        assert_eq!(cyclic_order(&Lasso { stem: vec!['a', 'a'], cycle: vec!['a', 'a'] }), Some(0));
        assert_eq!(cyclic_order(&Lasso { stem: vec![], cycle: vec![1, 2, 1, 2] }), Some(1));
        assert_eq!(cyclic_order(&Lasso { stem: vec![1], cycle: vec![2, 1] }), Some(1));
        assert_eq!(cyclic_order(&Lasso { stem: vec![1], cycle: vec![0] }), None);
    }

    #[test]
    fn dot_export_shape() {
        let s = fx2();
        let dot = build_tree(&s, 1, 2, TREE_CAP).unwrap().to_dot(&s);
        assert_eq!(dot.matches("[label=").count(), 4);
        assert_eq!(dot.matches("->").count(), 3);
        let s = ab();
        let dot = build_tree(&s, 1, 4, TREE_CAP).unwrap().to_dot(&s);
        assert_eq!(dot.matches("[label=").count(), 1);
        assert_eq!(dot.matches("->").count(), 0);
    }
}
