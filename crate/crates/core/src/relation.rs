//! Finite CR-dynamical systems and the basic relation operators.

use fixedbitset::FixedBitSet;
use std::collections::HashMap;
use std::fmt;

use crate::error::Error;

/// Index of a point inside one [`FiniteSystem`].
pub type PointId = usize;

/// Subset of the points of a finite system.
pub type PointSet = FixedBitSet;

/// Default budget for [`FiniteSystem::mahavier_product`].
pub const MAHAVIER_CAP: usize = 1_000_000;

/// A finite point set with a nonempty edge relation.
///
/// The space carries the discrete topology, so every subset is closed and
/// open and the only dense subset is the whole space.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteSystem {
    names: Vec<String>,
    succ: Vec<PointSet>,
    pred: Vec<PointSet>,
}

impl FiniteSystem {
    /// Build a system from named points and named edges.
    pub fn new<S: AsRef<str>>(points: &[S], edges: &[(S, S)]) -> Result<Self, Error> {
        if points.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut index = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.as_ref().to_string(), i).is_some() {
                return Err(Error::DuplicatePoint(p.as_ref().to_string()));
            }
        }
        let lookup = |s: &S| {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| Error::UnknownPoint(s.as_ref().to_string()))
        };
        let mut pairs = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            pairs.push((lookup(a)?, lookup(b)?));
        }
        let names = points.iter().map(|p| p.as_ref().to_string()).collect();
        Self::build(names, &pairs)
    }

    /// Build a system on points `0..n` named by their decimal index.
    pub fn from_indices(n: usize, edges: &[(PointId, PointId)]) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        for &(a, b) in edges {
            for p in [a, b] {
                if p >= n {
                    return Err(Error::UnknownPoint(p.to_string()));
                }
            }
        }
        Self::build((0..n).map(|i| i.to_string()).collect(), edges)
    }

    fn build(names: Vec<String>, edges: &[(PointId, PointId)]) -> Result<Self, Error> {
        if edges.is_empty() {
            return Err(Error::EmptyRelation);
        }
        let n = names.len();
        let mut succ = vec![FixedBitSet::with_capacity(n); n];
        let mut pred = vec![FixedBitSet::with_capacity(n); n];
        for &(a, b) in edges {
            succ[a].insert(b);
            pred[b].insert(a);
        }
        Ok(FiniteSystem { names, succ, pred })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, p: PointId) -> &str {
        &self.names[p]
    }

    pub fn index_of(&self, name: &str) -> Result<PointId, Error> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn succ(&self, p: PointId) -> &PointSet {
        &self.succ[p]
    }

    pub fn pred(&self, p: PointId) -> &PointSet {
        &self.pred[p]
    }

    pub fn has_edge(&self, a: PointId, b: PointId) -> bool {
        self.succ[a].contains(b)
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> Vec<(PointId, PointId)> {
        (0..self.len())
            .flat_map(|a| self.succ[a].ones().map(move |b| (a, b)))
            .collect()
    }

    pub fn empty_set(&self) -> PointSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> PointSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn singleton(&self, p: PointId) -> PointSet {
        let mut s = self.empty_set();
        s.insert(p);
        s
    }

    pub fn set_of<I: IntoIterator<Item = PointId>>(&self, it: I) -> PointSet {
        let mut s = self.empty_set();
        s.extend(it);
        s
    }

    /// Set of names, parsed against this system.
    pub fn set_of_names<S: AsRef<str>>(&self, names: &[S]) -> Result<PointSet, Error> {
        let mut s = self.empty_set();
        for n in names {
            s.insert(self.index_of(n.as_ref())?);
        }
        Ok(s)
    }

    pub fn complement(&self, a: &PointSet) -> PointSet {
        let mut c = a.clone();
        c.toggle_range(..);
        c
    }

    /// Names of the members of `a`, in point order.
    pub fn names_of(&self, a: &PointSet) -> Vec<String> {
        a.ones().map(|p| self.names[p].clone()).collect()
    }

    /// `G(A)`.
    pub fn image(&self, a: &PointSet) -> PointSet {
        let mut out = self.empty_set();
        for p in a.ones() {
            out.union_with(&self.succ[p]);
        }
        out
    }

    /// `G⁻¹(A)`: the points with at least one successor in `A`.
    pub fn preimage(&self, a: &PointSet) -> PointSet {
        let mut out = self.empty_set();
        for p in a.ones() {
            out.union_with(&self.pred[p]);
        }
        out
    }

    /// `Gⁿ(x)`.
    pub fn power_image(&self, x: PointId, n: usize) -> PointSet {
        let mut cur = self.singleton(x);
        for _ in 0..n {
            cur = self.image(&cur);
        }
        cur
    }

    /// `G⁻ⁿ(x) = (G⁻¹)ⁿ(x)`.
    pub fn back_image(&self, x: PointId, n: usize) -> PointSet {
        let mut cur = self.singleton(x);
        for _ in 0..n {
            cur = self.preimage(&cur);
        }
        cur
    }

    /// `G⁻ⁿ[A] = {y : Gⁿ(y) ⊆ A}`. Points with empty n-th image are members.
    pub fn lower_preimage(&self, a: &PointSet, n: usize) -> PointSet {
        let mut cur = a.clone();
        for _ in 0..n {
            let mut next = self.empty_set();
            for y in 0..self.len() {
                if self.succ[y].is_subset(&cur) {
                    next.insert(y);
                }
            }
            cur = next;
        }
        cur
    }

    /// All sequences `⟨x₀,…,x_m⟩` with consecutive pairs in `G`, in
    /// lexicographic order. Fails once more than `cap` sequences exist.
    pub fn mahavier_product(&self, m: usize, cap: usize) -> Result<Vec<Vec<PointId>>, Error> {
        let mut out = Vec::new();
        let mut stack: Vec<Vec<PointId>> = (0..self.len()).rev().map(|p| vec![p]).collect();
        while let Some(seq) = stack.pop() {
            if seq.len() == m + 1 {
                if out.len() == cap {
                    return Err(Error::Overflow { partial: out.len(), cap });
                }
                out.push(seq);
                continue;
            }
            let last = *seq.last().unwrap();
            let next: Vec<PointId> = self.succ[last].ones().collect();
            for &q in next.iter().rev() {
                let mut s = seq.clone();
                s.push(q);
                stack.push(s);
            }
        }
        Ok(out)
    }

    /// `G⁻¹`.
    pub fn inverse(&self) -> FiniteSystem {
        FiniteSystem {
            names: self.names.clone(),
            succ: self.pred.clone(),
            pred: self.succ.clone(),
        }
    }

    /// `π₀(G)`: points with at least one successor.
    pub fn nondegenerate(&self) -> PointSet {
        self.set_of((0..self.len()).filter(|&p| !self.succ[p].is_clear()))
    }

    /// `π₁(G)`: points with at least one predecessor.
    pub fn range(&self) -> PointSet {
        self.set_of((0..self.len()).filter(|&p| !self.pred[p].is_clear()))
    }

    /// Whether `π₀(G) = X`.
    pub fn is_sv(&self) -> bool {
        self.succ.iter().all(|s| !s.is_clear())
    }

    /// Whether `G = G⁻¹`.
    pub fn is_symmetric(&self) -> bool {
        self.succ == self.pred
    }

    /// `G ∪ G⁻¹`.
    pub fn symmetrized(&self) -> FiniteSystem {
        let mut s = self.clone();
        for p in 0..self.len() {
            s.succ[p].union_with(&self.pred[p]);
            s.pred[p].union_with(&self.succ[p]);
        }
        s
    }

    /// The subsystem induced on `keep`, or `None` when no edge survives.
    pub fn restrict(&self, keep: &PointSet) -> Option<FiniteSystem> {
        let ids: Vec<PointId> = keep.ones().collect();
        let pos: HashMap<PointId, usize> = ids.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let edges: Vec<(usize, usize)> = self
            .edges()
            .into_iter()
            .filter_map(|(a, b)| Some((*pos.get(&a)?, *pos.get(&b)?)))
            .collect();
        let names = ids.iter().map(|&p| self.names[p].clone()).collect();
        Self::build(names, &edges).ok()
    }

    /// Remove one edge, or `None` if that would empty the relation.
    pub fn without_edge(&self, a: PointId, b: PointId) -> Option<FiniteSystem> {
        let edges: Vec<_> = self.edges().into_iter().filter(|&e| e != (a, b)).collect();
        Self::build(self.names.clone(), &edges).ok()
    }
}

impl fmt::Debug for FiniteSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges()
            .into_iter()
            .map(|(a, b)| format!("({},{})", self.names[a], self.names[b]))
            .collect();
        write!(f, "finite {{{}}}; edges {{{}}}", self.names.join(","), edges.join(","))
    }
}
