//! The transitive-point hierarchy and system-level transitivity on the
//! finite engine.
//!
//! Point order is declaration order; every witness is the least one in that
//! order.

pub mod oracle;
pub mod props;

use serde::Serialize;
use std::collections::HashMap;

use crate::engine::{first_dense_cum_level, Engine};
use crate::relation::{FiniteSystem, PointId, PointSet};
use crate::tree::{self, lasso_inside, legal_set, reach_star, sccs};
use crate::verdict::{Verdict, Witness};

/// `(3,n)` index of a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "n", rename_all = "snake_case")]
pub enum Index {
    Finite(usize),
    Omega,
    NotApplicable,
    Unknown(usize),
}

/// Size of a minimal dense branch family; always at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverCount(usize);

impl CoverCount {
    pub fn new(n: usize) -> Option<CoverCount> {
        (n > 1).then_some(CoverCount(n))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// `(3,ω,n)` index of a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "n", rename_all = "snake_case")]
pub enum CoverIndex {
    Families(CoverCount),
    Omega,
    NotApplicable,
    Unknown(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassRecord {
    pub point: String,
    pub legal: Verdict,
    pub degenerate: bool,
    pub trans0: Verdict,
    pub trans1: Verdict,
    pub trans2: Verdict,
    pub trans3: Verdict,
    pub intransitive: Verdict,
    pub three_n: Index,
    pub omega_cover: CoverIndex,
}

impl ClassRecord {
    pub fn trans(&self, k: usize) -> &Verdict {
        [&self.trans0, &self.trans1, &self.trans2, &self.trans3][k]
    }
}

/// Nonemptiness of each point class; `None` when undecided.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DoFlags {
    pub trans0: Option<bool>,
    pub trans1: Option<bool>,
    pub trans2: Option<bool>,
    pub trans3: Option<bool>,
    pub three_n: Option<bool>,
    pub three_omega: Option<bool>,
    pub three_omega_n: Option<bool>,
    pub three_omega_omega: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemRecord {
    pub sv: bool,
    pub do_flags: DoFlags,
    /// Verdicts for 0-, 1- and 2-transitivity of the system.
    pub itrans: [Verdict; 3],
}

fn names(sys: &FiniteSystem, ps: &[PointId]) -> Vec<String> {
    ps.iter().map(|&p| sys.name(p).to_string()).collect()
}

fn dead_end(sys: &FiniteSystem, x: PointId) -> Verdict {
    match sys.legality(&x, 0) {
        Verdict::Refuted { witness } => Verdict::refuted(witness),
        _ => unreachable!("dead_end called on a legal point"),
    }
}

/// For each point `v`, the first `n` with `Gⁿ(x) = {v}`.
///
/// The level sequence is iterated until a level repeats or becomes empty.
pub fn singleton_levels(sys: &FiniteSystem, x: PointId) -> Vec<Option<usize>> {
    let mut hits = vec![None; sys.len()];
    let mut seen: HashMap<PointSet, usize> = HashMap::new();
    let mut cur = sys.singleton(x);
    let mut n = 0;
    while !cur.is_clear() && !seen.contains_key(&cur) {
        if cur.count_ones(..) == 1 {
            let v = cur.ones().next().unwrap();
            hits[v].get_or_insert(n);
        }
        let next = sys.image(&cur);
        seen.insert(cur, n);
        cur = next;
        n += 1;
    }
    hits
}

pub fn is_trans0(sys: &FiniteSystem, x: PointId) -> Verdict {
    if !tree::is_legal(sys, x) {
        return dead_end(sys, x);
    }
    let hits = singleton_levels(sys, x);
    match hits.iter().position(|h| h.is_none()) {
        Some(v) => Verdict::refuted(Witness::Pair { u: sys.name(x).into(), v: sys.name(v).into() }),
        None => Verdict::proved(Witness::SingletonLevels {
            hits: hits.iter().enumerate().map(|(v, h)| (sys.name(v).into(), h.unwrap())).collect(),
        }),
    }
}

/// Whether some walk from `x` avoiding `v` reaches a cycle avoiding `v`,
/// by depth-first search with gray/black colouring.
fn escapes(sys: &FiniteSystem, x: PointId, v: PointId) -> bool {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Gray,
        Black,
    }
    if x == v {
        return false;
    }
    let mut mark = vec![Mark::White; sys.len()];
    let mut stack: Vec<(PointId, Vec<PointId>)> = vec![(x, sys.succ(x).ones().collect())];
    mark[x] = Mark::Gray;
    while let Some((p, rest)) = stack.last_mut() {
        match rest.pop() {
            Some(q) if q == v => {}
            Some(q) => match mark[q] {
                Mark::Gray => return true,
                Mark::Black => {}
                Mark::White => {
                    mark[q] = Mark::Gray;
                    stack.push((q, sys.succ(q).ones().collect()));
                }
            },
            None => {
                mark[*p] = Mark::Black;
                stack.pop();
            }
        }
    }
    false
}

pub fn is_trans1(sys: &FiniteSystem, x: PointId) -> Verdict {
    if !tree::is_legal(sys, x) {
        return dead_end(sys, x);
    }
    for v in 0..sys.len() {
        if escapes(sys, x, v) {
            let mut keep = sys.full_set();
            keep.set(v, false);
            let (stem, cycle) = lasso_inside(sys, x, &keep).expect("escaping walk exists");
            return Verdict::refuted(Witness::Avoiding {
                avoided: sys.name(v).into(),
                stem: names(sys, &stem),
                cycle: names(sys, &cycle),
            });
        }
    }
    Verdict::proved(Witness::Exhaustive { states: sys.len() })
}

fn missing(sys: &FiniteSystem, reached: &PointSet) -> Witness {
    Witness::Reach {
        reached: sys.names_of(reached),
        missing: sys.names_of(&sys.complement(reached)),
    }
}

/// Some branch from `x` visits every point.
///
/// The components of the condensation must form a chain in topological order
/// starting at `x` and ending in a component that carries a cycle.
pub fn is_trans2(sys: &FiniteSystem, x: PointId) -> Verdict {
    if !tree::is_legal(sys, x) {
        return dead_end(sys, x);
    }
    let reach = reach_star(sys, x);
    if reach != sys.full_set() {
        return Verdict::refuted(missing(sys, &reach));
    }
    let comps = sccs(sys);
    for w in comps.windows(2) {
        let linked = w[0].iter().any(|&a| w[1].iter().any(|&b| sys.has_edge(a, b)));
        if !linked {
            return Verdict::refuted(Witness::Pair { u: sys.name(w[0][0]).into(), v: sys.name(w[1][0]).into() });
        }
    }
    let last = comps.last().unwrap();
    if last.len() == 1 && !sys.has_edge(last[0], last[0]) {
        return dead_end(sys, last[0]);
    }
    Verdict::proved(Witness::Chain { components: comps.iter().map(|c| names(sys, c)).collect() })
}

/// The closure of the branch union is `X`: everything is reachable and legal.
pub fn is_trans3(sys: &FiniteSystem, x: PointId) -> Verdict {
    let legal = legal_set(sys);
    if !legal.contains(x) {
        return dead_end(sys, x);
    }
    let reach = reach_star(sys, x);
    if reach != sys.full_set() {
        return Verdict::refuted(missing(sys, &reach));
    }
    match sys.complement(&legal).ones().next() {
        Some(bad) => dead_end(sys, bad),
        None => Verdict::proved(Witness::Reach { reached: sys.names_of(&reach), missing: vec![] }),
    }
}

pub fn is_intransitive(sys: &FiniteSystem, x: PointId) -> Verdict {
    if !tree::is_legal(sys, x) {
        return dead_end(sys, x);
    }
    match is_trans3(sys, x) {
        Verdict::Proved { witness } => Verdict::refuted(witness),
        Verdict::Refuted { witness } => Verdict::proved(witness),
        u => u,
    }
}

/// Least `n ≥ 1` with `Lₙ* = X` for points in `trans₃ \ trans₂`.
pub fn three_n_index(sys: &FiniteSystem, x: PointId) -> Index {
    if !is_trans3(sys, x).is_proved() || is_trans2(sys, x).is_proved() {
        return Index::NotApplicable;
    }
    // Cumulative levels of a finite system stabilise within |X| steps.
    match first_dense_cum_level(sys, &x, sys.len()) {
        Some(n) => Index::Finite(n),
        None => Index::Omega,
    }
}

/// Finite systems have no `(3,ω)` points, so this is never applicable.
pub fn omega_cover_index(sys: &FiniteSystem, x: PointId) -> CoverIndex {
    match three_n_index(sys, x) {
        Index::Omega => unreachable!("cumulative levels stabilise on finite systems"),
        _ => CoverIndex::NotApplicable,
    }
}

pub fn classify_point(sys: &FiniteSystem, x: PointId) -> ClassRecord {
    ClassRecord {
        point: sys.name(x).to_string(),
        legal: sys.legality(&x, 0),
        degenerate: sys.succ(x).is_clear(),
        trans0: is_trans0(sys, x),
        trans1: is_trans1(sys, x),
        trans2: is_trans2(sys, x),
        trans3: is_trans3(sys, x),
        intransitive: is_intransitive(sys, x),
        three_n: three_n_index(sys, x),
        omega_cover: omega_cover_index(sys, x),
    }
}

pub fn trans_set(sys: &FiniteSystem, k: usize) -> PointSet {
    let f = [is_trans0, is_trans1, is_trans2, is_trans3][k];
    sys.set_of((0..sys.len()).filter(|&x| f(sys, x).is_proved()))
}

pub fn intrans_set(sys: &FiniteSystem) -> PointSet {
    sys.set_of((0..sys.len()).filter(|&x| is_intransitive(sys, x).is_proved()))
}

/// Points with a finite `(3,n)` index.
pub fn three_n_set(sys: &FiniteSystem) -> PointSet {
    sys.set_of((0..sys.len()).filter(|&x| matches!(three_n_index(sys, x), Index::Finite(_))))
}

/// `⋃_{k ≥ start} G⁻ᵏ[A]`, iterating until the lower-preimage sequence repeats.
pub fn lower_preimage_union(sys: &FiniteSystem, a: &PointSet, start: usize) -> PointSet {
    let mut out = sys.empty_set();
    let mut seen = std::collections::HashSet::new();
    let mut cur = sys.lower_preimage(a, start);
    while seen.insert(cur.clone()) {
        out.union_with(&cur);
        cur = sys.lower_preimage(&cur, 1);
    }
    out
}

/// `⋃_{k ≥ start} G⁻ᵏ(A)` for the hitting preimage.
pub fn preimage_union(sys: &FiniteSystem, a: &PointSet, start: usize) -> PointSet {
    let inv = sys.inverse();
    image_union(&inv, a, start)
}

/// `⋃_{k ≥ start} Gᵏ(A)`.
pub fn image_union(sys: &FiniteSystem, a: &PointSet, start: usize) -> PointSet {
    let mut cur = a.clone();
    for _ in 0..start {
        cur = sys.image(&cur);
    }
    let mut out = cur.clone();
    loop {
        cur = sys.image(&cur);
        let before = out.clone();
        out.union_with(&cur);
        if out == before {
            return out;
        }
    }
}

/// `legal(G) ∩ ⋂_v ⋃_{k ≥ 0} G⁻ᵏ[{v}]`.
pub fn formula_trans0(sys: &FiniteSystem) -> PointSet {
    let mut out = legal_set(sys);
    for v in 0..sys.len() {
        out.intersect_with(&lower_preimage_union(sys, &sys.singleton(v), 0));
    }
    out
}

/// `⋂_v {x : every infinite branch of x meets v}`.
pub fn formula_trans1(sys: &FiniteSystem) -> PointSet {
    let mut out = sys.full_set();
    for v in 0..sys.len() {
        let mut keep = sys.full_set();
        keep.set(v, false);
        if let Some(sub) = sys.restrict(&keep) {
            let ids: Vec<PointId> = keep.ones().collect();
            for i in legal_set(&sub).ones() {
                out.set(ids[i], false);
            }
        }
    }
    out
}

/// `⋂_v ⋃_{k ≥ 0} G⁻ᵏ({v})`.
pub fn formula_trans3(sys: &FiniteSystem) -> PointSet {
    let mut out = sys.full_set();
    for v in 0..sys.len() {
        out.intersect_with(&preimage_union(sys, &sys.singleton(v), 0));
    }
    out
}

/// `∀u,v ∃n: ∅ ≠ Gⁿ(u) ⊆ {v}`.
pub fn itrans0(sys: &FiniteSystem) -> Verdict {
    for u in 0..sys.len() {
        let hits = singleton_levels(sys, u);
        if let Some(v) = hits.iter().position(|h| h.is_none()) {
            return Verdict::refuted(Witness::Pair { u: sys.name(u).into(), v: sys.name(v).into() });
        }
    }
    Verdict::proved(Witness::Exhaustive { states: sys.len() * sys.len() })
}

/// Every point is legal and no infinite walk from any point avoids any point.
pub fn itrans1(sys: &FiniteSystem) -> Verdict {
    for u in 0..sys.len() {
        if let Verdict::Refuted { witness } = is_trans1(sys, u) {
            return Verdict::refuted(witness);
        }
    }
    Verdict::proved(Witness::Exhaustive { states: sys.len() * sys.len() })
}

/// Every point reaches every point.
pub fn itrans2(sys: &FiniteSystem) -> Verdict {
    for u in 0..sys.len() {
        let r = reach_star(sys, u);
        if let Some(v) = sys.complement(&r).ones().next() {
            return Verdict::refuted(Witness::Pair { u: sys.name(u).into(), v: sys.name(v).into() });
        }
    }
    Verdict::proved(Witness::Chain { components: vec![sys.names().to_vec()] })
}

pub fn system_class(sys: &FiniteSystem) -> SystemRecord {
    let nonempty = |k| Some(!trans_set(sys, k).is_clear());
    SystemRecord {
        sv: sys.is_sv(),
        do_flags: DoFlags {
            trans0: nonempty(0),
            trans1: nonempty(1),
            trans2: nonempty(2),
            trans3: nonempty(3),
            three_n: Some(!three_n_set(sys).is_clear()),
            three_omega: Some(false),
            three_omega_n: Some(false),
            three_omega_omega: Some(false),
        },
        itrans: [itrans0(sys), itrans1(sys), itrans2(sys)],
    }
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
    fn fork() -> FiniteSystem {
        FiniteSystem::new(&["0", "1", "2"], &[("0", "1"), ("0", "2"), ("1", "1"), ("2", "2")]).unwrap()
    }

    fn set(sys: &FiniteSystem, k: usize) -> Vec<String> {
        sys.names_of(&trans_set(sys, k))
    }

    #[test]
    fn fx1_point_classes() {
        let s = fx1();
        assert_eq!(set(&s, 0), ["1"]);
        assert_eq!(set(&s, 1), ["1"]);
        assert_eq!(set(&s, 2), ["1", "2"]);
        assert_eq!(set(&s, 3), ["1", "2"]);
        assert_eq!(s.names_of(&formula_trans0(&s)), ["1"]);
    }

    #[test]
    fn fx2_classes() {
        let s = fx2();
        assert!(is_trans1(&s, 0).is_refuted());
        assert!(is_trans1(&s, 1).is_proved());
        assert_eq!(set(&s, 1), ["1"]);
        let r = system_class(&s);
        assert!(r.itrans[2].is_proved());
        assert!(r.itrans[1].is_refuted());
        assert!(r.itrans[0].is_refuted());
    }

    #[test]
    fn fx3_classes() {
        let s = fx3();
        assert!(is_trans0(&s, 0).is_proved());
        assert_eq!(set(&s, 1), ["0"]);
        assert_eq!(set(&s, 2), ["0", "1", "2"]);
        assert_eq!(set(&s, 3), ["0", "1", "2"]);
        assert_eq!(s.names_of(&formula_trans3(&s)), ["0", "1", "2"]);
        let r = system_class(&s);
        assert_eq!(r.do_flags.trans1, Some(true));
        assert!(r.itrans[1].is_refuted());
        assert!(r.itrans[2].is_proved());
    }

    #[test]
    fn fork_classes() {
        let s = fork();
        assert!(is_trans2(&s, 0).is_refuted());
        assert!(is_trans3(&s, 0).is_proved());
        assert!(is_trans3(&s, 1).is_refuted());
        assert_eq!(three_n_index(&s, 0), Index::Finite(1));
        assert_eq!(three_n_index(&s, 1), Index::NotApplicable);
        assert_eq!(omega_cover_index(&s, 0), CoverIndex::NotApplicable);
    }

    #[test]
    fn trivial_cases() {
        let one = FiniteSystem::from_indices(1, &[(0, 0)]).unwrap();
        assert!(is_trans0(&one, 0).is_proved());
        assert!(is_trans2(&one, 0).is_proved());
        let ab = FiniteSystem::new(&["a", "b"], &[("a", "b")]).unwrap();
        for x in 0..2 {
            assert!(is_trans1(&ab, x).is_refuted());
            assert!(is_trans3(&ab, x).is_refuted());
        }
        let diag = FiniteSystem::from_indices(3, &[(0, 0), (1, 1), (2, 2)]).unwrap();
        assert!(trans_set(&diag, 3).is_clear());
        assert!(formula_trans0(&diag).is_clear());
    }

    #[test]
    fn witnesses_are_least() {
        match is_trans1(&fx2(), 0) {
            Verdict::Refuted { witness: Witness::Avoiding { avoided, stem, cycle } } => {
                assert_eq!(avoided, "1");
                assert!(stem.is_empty());
                assert_eq!(cycle, ["0"]);
            }
            other => panic!("{other:?}"),
        }
        match is_trans2(&fork(), 0) {
            Verdict::Refuted { witness: Witness::Pair { u, v } } => assert_eq!((u.as_str(), v.as_str()), ("1", "2")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cover_count_is_at_least_two() {
        assert!(CoverCount::new(1).is_none());
        assert_eq!(CoverCount::new(2).map(CoverCount::get), Some(2));
    }
}
