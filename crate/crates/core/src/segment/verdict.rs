//! Bounded-depth transitivity verdicts for segment relations.

use std::collections::VecDeque;

use super::region::{farey, show_q, Region, Q};
use super::relation::SegRelation;
use crate::classify::{ClassRecord, CoverIndex, Index};
use crate::engine::Engine;
use crate::verdict::{Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegParams {
    pub depth: usize,
    /// Base intervals have endpoints with denominator at most `net`.
    pub net: u64,
    /// Node budget of the lasso search.
    pub budget: usize,
    /// Most intervals an iterated image may have before iteration gives up.
    pub max_parts: usize,
}

impl Default for SegParams {
    fn default() -> Self {
        SegParams { depth: 32, net: 16, budget: 10_000, max_parts: 512 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegQuery {
    System2Transitive,
    System0Transitive,
    PointTrans1(Q),
    PointTrans2(Q),
    PointTrans3(Q),
}

pub fn seg_verdict(r: &SegRelation, query: &SegQuery, params: &SegParams) -> Verdict {
    match query {
        SegQuery::System2Transitive => system_2_transitive(r, params),
        SegQuery::System0Transitive => system_0_transitive(r, params),
        SegQuery::PointTrans1(x) => point_trans1(r, x, params),
        SegQuery::PointTrans2(x) => point_trans2(r, x, params),
        SegQuery::PointTrans3(x) => point_trans3(r, x, params),
    }
}

/// Open intervals between consecutive grid points of the net. Every base
/// interval of the net contains one of them.
pub fn elementary_intervals(net: u64) -> Vec<Region> {
    farey(net)
        .windows(2)
        .map(|w| Region::interval(w[0].clone(), w[1].clone(), false, false))
        .collect()
}

/// Some `n ≤ depth` with `Gⁿ(U) ∩ V ≠ ∅` for every pair of elementary
/// intervals. Since images are monotone this covers every base pair.
fn system_2_transitive(r: &SegRelation, p: &SegParams) -> Verdict {
    let base = elementary_intervals(p.net);
    let mut max_n = 0;
    for u in &base {
        let mut hit: Vec<Option<usize>> = vec![None; base.len()];
        let mut cur = u.clone();
        let mut cum = u.clone();
        for n in 0..=p.depth {
            for (j, v) in base.iter().enumerate() {
                if hit[j].is_none() && cur.meets(v) {
                    hit[j] = Some(n);
                }
            }
            if hit.iter().all(Option::is_some) {
                break;
            }
            cur = r.image(&cur);
            let next = cum.union(&cur);
            if next == cum {
                let j = hit.iter().position(Option::is_none).unwrap();
                return Verdict::refuted(Witness::Pair { u: u.to_string(), v: base[j].to_string() });
            }
            cum = next;
        }
        match hit.iter().map(|h| h.ok_or(())).collect::<Result<Vec<_>, _>>() {
            Ok(ns) => max_n = max_n.max(ns.into_iter().max().unwrap_or(0)),
            Err(()) => return Verdict::Unknown { depth: p.depth },
        }
    }
    Verdict::proved(Witness::NetCover { net: p.net, pairs: base.len() * base.len(), max_n })
}

/// Some `n ≤ depth` with `G⁻ⁿ[U] ∩ V ≠ ∅` for every pair of elementary
/// intervals. This characterizes 0-transitivity only for relations whose
/// domain is the whole interval, so other relations get `Unknown`.
fn system_0_transitive(r: &SegRelation, p: &SegParams) -> Verdict {
    if !r.is_sv() {
        return Verdict::Unknown { depth: 0 };
    }
    let base = elementary_intervals(p.net);
    let mut max_n = 0;
    for u in &base {
        let mut hit: Vec<Option<usize>> = vec![None; base.len()];
        let mut seen: Vec<Region> = Vec::new();
        let mut cur = u.clone();
        for n in 0..=p.depth {
            for (j, v) in base.iter().enumerate() {
                if hit[j].is_none() && cur.meets(v) {
                    hit[j] = Some(n);
                }
            }
            if hit.iter().all(Option::is_some) {
                break;
            }
            if seen.contains(&cur) {
                let j = hit.iter().position(Option::is_none).unwrap();
                return Verdict::refuted(Witness::Pair { u: u.to_string(), v: base[j].to_string() });
            }
            seen.push(cur.clone());
            cur = r.lower_preimage(&cur, 1);
        }
        match hit.iter().map(|h| h.ok_or(())).collect::<Result<Vec<_>, _>>() {
            Ok(ns) => max_n = max_n.max(ns.into_iter().max().unwrap_or(0)),
            Err(()) => return Verdict::Unknown { depth: p.depth },
        }
    }
    Verdict::proved(Witness::NetCover { net: p.net, pairs: base.len() * base.len(), max_n })
}

/// Breadth-first search for a walk `stem · cycle^ω` from `x`, stepping only to
/// included endpoints of each image and closing the cycle at an ancestor.
pub fn find_lasso(r: &SegRelation, x: &Q, budget: usize) -> Option<Witness> {
    struct Node {
        point: Q,
        parent: Option<usize>,
    }
    let mut nodes = vec![Node { point: x.clone(), parent: None }];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let mut path = vec![i];
        while let Some(par) = nodes[*path.last().unwrap()].parent {
            path.push(par);
        }
        path.reverse();
        for y in r.image_of(&nodes[i].point).atoms() {
            if let Some(at) = path.iter().position(|&j| nodes[j].point == y) {
                let pts: Vec<String> = path.iter().map(|&j| show_q(&nodes[j].point)).collect();
                return Some(Witness::Lasso { stem: pts[..at].to_vec(), cycle: pts[at..].to_vec() });
            }
            if nodes.len() >= budget {
                return None;
            }
            nodes.push(Node { point: y, parent: Some(i) });
            queue.push_back(nodes.len() - 1);
        }
    }
    None
}

/// Whether `stem · cycle^ω` is a walk of `r` starting at `stem[0]` (or `cycle[0]`).
pub fn check_lasso(r: &SegRelation, stem: &[Q], cycle: &[Q]) -> bool {
    if cycle.is_empty() {
        return false;
    }
    let walk: Vec<&Q> = stem.iter().chain(cycle).chain(cycle.first()).collect();
    walk.windows(2).all(|w| r.image_of(w[0]).contains(w[1]))
}

/// A point `p` that maps onto `[0,1]` and is hit from every point, reached
/// from `x` in at most `depth` steps. Walks can alternate between `p` and any
/// sequence of points, so some branch is dense.
pub fn fiber_certificate(r: &SegRelation, x: &Q, depth: usize, max_parts: usize) -> Option<Witness> {
    let full = Region::full();
    let hubs: Vec<Q> = r
        .coordinates()
        .point_list()
        .into_iter()
        .filter(|p| r.image_of(p) == full && r.preimage(&Region::point(p.clone())) == full)
        .collect();
    let mut cur = Region::point(x.clone());
    for steps in 0..=depth {
        if let Some(h) = hubs.iter().find(|h| cur.contains(h)) {
            return Some(Witness::Fiber { hub: show_q(h), steps });
        }
        if hubs.is_empty() || cur.parts().len() > max_parts {
            return None;
        }
        cur = r.image(&cur);
    }
    None
}

/// A finite set `P` such that every walk visits at most one point outside
/// `P`. `P` holds the segment coordinates together with the forward orbit of
/// the image of their complement, which must be finite. Every vertex set is
/// then finite, so no branch of any point is dense.
pub fn branch_finite_certificate(r: &SegRelation, depth: usize) -> Option<Witness> {
    let p0 = r.coordinates();
    let mut orbit = r.image(&p0.complement());
    for _ in 0..=depth {
        if !orbit.is_finite() {
            return None;
        }
        let next = orbit.union(&r.image(&orbit));
        if next == orbit {
            let p = p0.union(&orbit);
            return Some(Witness::BranchFinite { points: p.point_list().iter().map(show_q).collect() });
        }
        orbit = next;
    }
    None
}

fn point_trans1(r: &SegRelation, x: &Q, p: &SegParams) -> Verdict {
    match r.legality(x, p.depth) {
        Verdict::Proved { .. } => {}
        other => return other,
    }
    if let Some(w) = find_lasso(r, x, p.budget) {
        return Verdict::refuted(w);
    }
    match point_trans2(r, x, p) {
        v @ Verdict::Refuted { .. } => v,
        _ => Verdict::Unknown { depth: p.depth },
    }
}

fn point_trans2(r: &SegRelation, x: &Q, p: &SegParams) -> Verdict {
    match r.legality(x, p.depth) {
        Verdict::Proved { .. } => {}
        other => return other,
    }
    if let Some(w) = fiber_certificate(r, x, p.depth, p.max_parts) {
        return Verdict::proved(w);
    }
    match branch_finite_certificate(r, p.depth) {
        Some(w) => Verdict::refuted(w),
        None => Verdict::Unknown { depth: p.depth },
    }
}

fn point_trans3(r: &SegRelation, x: &Q, p: &SegParams) -> Verdict {
    match r.legality(x, p.depth) {
        Verdict::Proved { .. } => {}
        other => return other,
    }
    if !r.is_sv() {
        return Verdict::Unknown { depth: p.depth };
    }
    let mut cur = Region::point(x.clone());
    let mut cum = cur.clone();
    for n in 1..=p.depth {
        cur = r.image(&cur);
        let next = cum.union(&cur);
        if next.is_dense() {
            return Verdict::proved(Witness::Levels { n });
        }
        if next == cum {
            return Verdict::refuted(Witness::Reach {
                reached: vec![cum.to_string()],
                missing: vec![cum.closure().complement().to_string()],
            });
        }
        if next.parts().len() > p.max_parts {
            return Verdict::Unknown { depth: n };
        }
        cum = next;
    }
    Verdict::Unknown { depth: p.depth }
}

/// `a ∧ ¬b` in three-valued logic, keeping the deciding witness.
fn and_not(a: &Verdict, b: &Verdict) -> Verdict {
    match (a, b) {
        (Verdict::Refuted { witness }, _) => Verdict::refuted(witness.clone()),
        (_, Verdict::Proved { witness }) => Verdict::refuted(witness.clone()),
        (Verdict::Proved { .. }, Verdict::Refuted { witness }) => Verdict::proved(witness.clone()),
        (Verdict::Unknown { depth }, _) | (_, Verdict::Unknown { depth }) => Verdict::Unknown { depth: *depth },
    }
}

pub fn seg_point_class(r: &SegRelation, x: &Q, p: &SegParams) -> ClassRecord {
    let legal = r.legality(x, p.depth);
    let trans3 = point_trans3(r, x, p);
    let trans2 = point_trans2(r, x, p);
    let trans1 = point_trans1(r, x, p);
    let trans0 = match &trans1 {
        v @ Verdict::Refuted { .. } => v.clone(),
        _ => Verdict::Unknown { depth: p.depth },
    };
    let three_n = match (&trans3, &trans2) {
        (Verdict::Proved { witness: Witness::Levels { n } }, Verdict::Refuted { .. }) => Index::Finite(*n),
        (Verdict::Refuted { .. }, _) | (_, Verdict::Proved { .. }) => Index::NotApplicable,
        _ => Index::Unknown(p.depth),
    };
    let omega_cover = match three_n {
        Index::Finite(_) | Index::NotApplicable => CoverIndex::NotApplicable,
        _ => CoverIndex::Unknown(p.depth),
    };
    ClassRecord {
        point: show_q(x),
        degenerate: r.image_of(x).is_empty(),
        intransitive: and_not(&legal, &trans3),
        legal,
        trans0,
        trans1,
        trans2,
        trans3,
        three_n,
        omega_cover,
    }
}

#[cfg(test)]
mod tests {
    use super::super::region::q;
    use super::super::relation::Segment;
    use super::*;

    fn seg(a: (Q, Q), b: (Q, Q)) -> Segment {
        Segment::new(a, b).unwrap()
    }

    fn tent() -> Vec<Segment> {
        vec![seg((q(0, 1), q(0, 1)), (q(1, 2), q(1, 1))), seg((q(1, 2), q(1, 1)), (q(1, 1), q(0, 1)))]
    }

    /// `(1/(k+1), 1/(k+2))` for `k ≤ n`, the fiber over `1/(n+2)` and the
    /// bottom edge.
    fn staircase(n: i64) -> SegRelation {
        let mut s: Vec<Segment> = (0..=n)
            .map(|k| {
                let (a, b) = (q(1, k + 1), q(1, k + 2));
                seg((a.clone(), b.clone()), (a, b))
            })
            .collect();
        s.push(seg((q(1, n + 2), q(0, 1)), (q(1, n + 2), q(1, 1))));
        s.push(seg((q(0, 1), q(0, 1)), (q(1, 1), q(0, 1))));
        SegRelation::new(s).unwrap()
    }

    #[test]
    fn tent_is_two_transitive_on_a_coarse_net() {
        let r = SegRelation::new(tent()).unwrap();
        let p = SegParams { depth: 16, net: 4, ..SegParams::default() };
        let v = seg_verdict(&r, &SegQuery::System2Transitive, &p);
        assert!(v.is_proved(), "{v:?}");
    }

    #[test]
    fn diagonal_is_not_two_transitive() {
        let r = SegRelation::new(vec![seg((q(0, 1), q(0, 1)), (q(1, 1), q(1, 1)))]).unwrap();
        let p = SegParams { depth: 4, net: 2, ..SegParams::default() };
        let v = seg_verdict(&r, &SegQuery::System2Transitive, &p);
        assert_eq!(v, Verdict::refuted(Witness::Pair { u: "(0,1/2)".into(), v: "(1/2,1)".into() }));
    }

    #[test]
    fn staircase_levels_and_certificate() {
        let r = staircase(1);
        let l = r.levels(&q(1, 1), 3);
        assert_eq!(l.levels[1], Region::points([q(0, 1), q(1, 2)]));
        assert_eq!(l.levels[2], Region::points([q(0, 1), q(1, 3)]));
        assert_eq!(l.cumulative[2], Region::points([q(0, 1), q(1, 3), q(1, 2), q(1, 1)]));
        assert_eq!(l.cumulative[3], Region::full());
        let w = branch_finite_certificate(&r, 8).unwrap();
        assert_eq!(w, Witness::BranchFinite { points: vec!["0".into(), "1/3".into(), "1/2".into(), "1".into()] });
        let c = seg_point_class(&r, &q(1, 1), &SegParams::default());
        assert_eq!(c.three_n, Index::Finite(3));
        assert!(c.trans1.is_refuted() && c.trans0.is_refuted());
    }

    #[test]
    fn inverse_fiber_lasso() {
        let mut s: Vec<Segment> = tent();
        s.push(seg((q(1, 2), q(0, 1)), (q(1, 2), q(1, 1))));
        let inv = SegRelation::new(s).unwrap().transpose();
        let v = seg_verdict(&inv, &SegQuery::PointTrans1(q(3, 4)), &SegParams::default());
        assert_eq!(v, Verdict::refuted(Witness::Lasso { stem: vec!["3/4".into()], cycle: vec!["1/2".into()] }));
        assert!(check_lasso(&inv, &[q(3, 4)], &[q(1, 2)]));
        assert!(!check_lasso(&inv, &[q(3, 4)], &[q(1, 3)]));
    }

    #[test]
    fn hub_certificate() {
        let r = SegRelation::new(vec![
            seg((q(0, 1), q(0, 1)), (q(1, 1), q(0, 1))),
            seg((q(0, 1), q(0, 1)), (q(0, 1), q(1, 1))),
        ])
        .unwrap();
        let v = seg_verdict(&r, &SegQuery::PointTrans2(q(1, 3)), &SegParams::default());
        assert_eq!(v, Verdict::proved(Witness::Fiber { hub: "0".into(), steps: 1 }));
    }
}
