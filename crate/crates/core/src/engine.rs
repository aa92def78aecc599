//! The set-algebra contract shared by the finite, segment and sequence-space
//! engines, and the level computations written once against it.

use std::fmt::Debug;

use crate::relation::{FiniteSystem, PointId, PointSet};
use crate::verdict::{Verdict, Witness};

pub trait Engine {
    type Point: Clone + Debug;
    type Set: Clone + PartialEq + Debug;

    fn point_name(&self, p: &Self::Point) -> String;
    /// Deterministic sample of `count` points (all points when finite and fewer).
    fn sample_points(&self, count: usize) -> Vec<Self::Point>;

    fn singleton(&self, p: &Self::Point) -> Self::Set;
    fn empty(&self) -> Self::Set;
    fn full(&self) -> Self::Set;
    fn union(&self, a: &Self::Set, b: &Self::Set) -> Self::Set;
    fn intersect(&self, a: &Self::Set, b: &Self::Set) -> Self::Set;
    fn complement(&self, a: &Self::Set) -> Self::Set;
    fn closure(&self, a: &Self::Set) -> Self::Set;
    fn is_empty(&self, a: &Self::Set) -> bool;

    fn is_dense(&self, a: &Self::Set) -> bool {
        self.closure(a) == self.full()
    }

    /// `G(A)`.
    fn image(&self, a: &Self::Set) -> Self::Set;
    /// `G⁻¹(A)`.
    fn preimage(&self, a: &Self::Set) -> Self::Set;

    /// `G⁻¹[A] = X \ G⁻¹(X \ A)`.
    fn lower_preimage(&self, a: &Self::Set) -> Self::Set {
        self.complement(&self.preimage(&self.complement(a)))
    }

    fn is_isolated(&self, p: &Self::Point) -> bool;

    /// Whether `p` starts an infinite walk.
    fn legality(&self, p: &Self::Point, depth: usize) -> Verdict;
}

/// `G⁰(x), …, Gⁿ(x)`.
pub fn levels<E: Engine>(e: &E, x: &E::Point, n: usize) -> Vec<E::Set> {
    let mut out = vec![e.singleton(x)];
    for i in 0..n {
        let next = e.image(&out[i]);
        out.push(next);
    }
    out
}

/// `L₀*, …, Lₙ*` where `Lₖ* = ⋃_{j ≤ k} Gʲ(x)`.
pub fn cum_levels<E: Engine>(e: &E, x: &E::Point, n: usize) -> Vec<E::Set> {
    let mut out: Vec<E::Set> = Vec::with_capacity(n + 1);
    for lvl in levels(e, x, n) {
        let next = match out.last() {
            Some(prev) => e.union(prev, &lvl),
            None => lvl,
        };
        out.push(next);
    }
    out
}

/// Least `n ≥ 1` with `cl(Lₙ*) = X`, searching up to `depth`.
pub fn first_dense_cum_level<E: Engine>(e: &E, x: &E::Point, depth: usize) -> Option<usize> {
    let mut cum = e.singleton(x);
    let mut cur = cum.clone();
    for n in 1..=depth {
        cur = e.image(&cur);
        cum = e.union(&cum, &cur);
        if e.is_dense(&cum) {
            return Some(n);
        }
    }
    None
}

/// `G⁻ⁿ[A]`.
pub fn lower_preimage_n<E: Engine>(e: &E, a: &E::Set, n: usize) -> E::Set {
    let mut cur = a.clone();
    for _ in 0..n {
        cur = e.lower_preimage(&cur);
    }
    cur
}

impl Engine for FiniteSystem {
    type Point = PointId;
    type Set = PointSet;

    fn point_name(&self, p: &PointId) -> String {
        self.name(*p).to_string()
    }

    fn sample_points(&self, count: usize) -> Vec<PointId> {
        (0..self.len().min(count)).collect()
    }

    fn singleton(&self, p: &PointId) -> PointSet {
        FiniteSystem::singleton(self, *p)
    }

    fn empty(&self) -> PointSet {
        self.empty_set()
    }

    fn full(&self) -> PointSet {
        self.full_set()
    }

    fn union(&self, a: &PointSet, b: &PointSet) -> PointSet {
        let mut u = a.clone();
        u.union_with(b);
        u
    }

    fn intersect(&self, a: &PointSet, b: &PointSet) -> PointSet {
        let mut u = a.clone();
        u.intersect_with(b);
        u
    }

    fn complement(&self, a: &PointSet) -> PointSet {
        FiniteSystem::complement(self, a)
    }

    fn closure(&self, a: &PointSet) -> PointSet {
        a.clone()
    }

    fn is_empty(&self, a: &PointSet) -> bool {
        a.is_clear()
    }

    fn image(&self, a: &PointSet) -> PointSet {
        FiniteSystem::image(self, a)
    }

    fn preimage(&self, a: &PointSet) -> PointSet {
        FiniteSystem::preimage(self, a)
    }

    fn is_isolated(&self, _p: &PointId) -> bool {
        true
    }

    fn legality(&self, p: &PointId, _depth: usize) -> Verdict {
        match crate::tree::legal_lasso(self, *p) {
            Some((stem, cycle)) => Verdict::proved(Witness::Lasso {
                stem: stem.iter().map(|&q| self.name(q).to_string()).collect(),
                cycle: cycle.iter().map(|&q| self.name(q).to_string()).collect(),
            }),
            None => {
                let mut cur = FiniteSystem::singleton(self, *p);
                let mut depth = 0;
                while !cur.is_clear() {
                    cur = FiniteSystem::image(self, &cur);
                    depth += 1;
                }
                Verdict::refuted(Witness::DeadEnd { point: self.name(*p).to_string(), depth })
            }
        }
    }
}
