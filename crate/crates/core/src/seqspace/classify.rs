//! Exact point classification on sequence spaces through a finite abstract
//! graph.
//!
//! Terms with index at least a cut `N` behave alike under every rule, so each
//! sequence gets one late node standing for all of them. Points, early terms
//! and late nodes form a [`FiniteSystem`]. Reachability and legality are read
//! off that graph. Branch questions additionally need every tail rule to map a
//! sequence into itself with shift 0 or 1, and no late node on a cycle other
//! than its own loop; outside that class the answers are `Unknown`.

use crate::classify::{self, ClassRecord, CoverCount, CoverIndex, Index};
use crate::engine::{first_dense_cum_level, Engine};
use crate::relation::{FiniteSystem, PointId, PointSet};
use crate::tree::{lasso_inside, legal_lasso, legal_set, reach_star, sccs};
use crate::verdict::{Verdict, Witness};

use super::{Rule, SeqSpace, SqPoint, TailSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqParams {
    pub depth: usize,
}

impl Default for SqParams {
    fn default() -> Self {
        SqParams { depth: 64 }
    }
}

#[derive(Debug, Clone)]
pub struct Abstraction {
    /// Terms with index `≥ cut` are late.
    pub cut: u64,
    pub graph: FiniteSystem,
    /// Whether sequence `a` has the rule `a_k ↦ a_{k+1}` on its late terms.
    pub run: Vec<bool>,
    /// Whether sequence `a` has the rule `a_k ↦ a_k` on its late terms.
    pub stay: Vec<bool>,
    /// Every tail shift is nonnegative, so reachability is exact.
    pub forward: bool,
    /// Branch questions are decided exactly.
    pub branches: bool,
}

impl Abstraction {
    pub fn new(s: &SeqSpace) -> Abstraction {
        let mut cut = 1u64;
        let mut forward = true;
        let mut self_only = true;
        for r in s.rules() {
            let idx = |p: &SqPoint| match *p {
                SqPoint::Term(_, k) => k + 1,
                SqPoint::Finite(_) => 0,
            };
            match r {
                Rule::Pair(u, v) => cut = cut.max(idx(u)).max(idx(v)),
                Rule::TailToTail { a, b, shift, from } => {
                    cut = cut.max(*from);
                    forward &= *shift >= 0;
                    self_only &= a == b && (0..=1).contains(shift);
                }
                Rule::TailToPoint { p, from, .. } | Rule::PointToTail { p, from, .. } => {
                    cut = cut.max(*from).max(idx(p));
                }
            }
        }
        let fin = s.points().len();
        let width = cut as usize + 1;
        let node = |p: SqPoint| match p {
            SqPoint::Finite(i) => i,
            SqPoint::Term(a, k) => fin + a * width + (k.min(cut)) as usize,
        };
        let mut names: Vec<String> = s.points().to_vec();
        for q in s.seqs() {
            names.extend((0..cut).map(|k| format!("{}[{}]", q.name, k)));
            names.push(format!("{}[{}..]", q.name, cut));
        }
        let n_seq = s.seqs().len();
        let (mut run, mut stay) = (vec![false; n_seq], vec![false; n_seq]);
        let mut edges = Vec::new();
        for r in s.rules() {
            match *r {
                Rule::Pair(u, v) => edges.push((node(u), node(v))),
                Rule::TailToTail { a, b, shift, from } => {
                    for k in from..=cut {
                        let to = (k as i64 + shift).max(0) as u64;
                        edges.push((node(SqPoint::Term(a, k)), node(SqPoint::Term(b, to))));
                    }
                    if a == b && shift == 1 {
                        run[a] = true;
                    }
                    if a == b && shift == 0 {
                        stay[a] = true;
                    }
                }
                Rule::TailToPoint { a, p, from } => {
                    for k in from..=cut {
                        edges.push((node(SqPoint::Term(a, k)), node(p)));
                    }
                }
                Rule::PointToTail { p, a, from } => {
                    for k in from..=cut {
                        edges.push((node(p), node(SqPoint::Term(a, k))));
                    }
                }
            }
        }
        edges.sort();
        edges.dedup();
        let named: Vec<(&str, &str)> = edges.iter().map(|&(u, v)| (names[u].as_str(), names[v].as_str())).collect();
        let graph = FiniteSystem::new(&names.iter().map(String::as_str).collect::<Vec<_>>(), &named).expect("rules give at least one edge");
        let mut abs = Abstraction { cut, graph, run, stay, forward, branches: false };
        abs.branches = forward && self_only && (0..n_seq).all(|a| {
            let l = abs.late(s, a);
            sccs(&abs.graph).iter().any(|c| c == &vec![l])
        });
        abs
    }

    pub fn node(&self, s: &SeqSpace, p: &SqPoint) -> PointId {
        match *p {
            SqPoint::Finite(i) => i,
            SqPoint::Term(a, k) => s.points().len() + a * (self.cut as usize + 1) + k.min(self.cut) as usize,
        }
    }

    pub fn late(&self, s: &SeqSpace, a: usize) -> PointId {
        self.node(s, &SqPoint::Term(a, self.cut))
    }

    fn is_late(&self, s: &SeqSpace, v: PointId) -> Option<usize> {
        (0..s.seqs().len()).find(|&a| self.late(s, a) == v)
    }

    /// Nodes every dense set must contain: isolated points, early terms and
    /// one late node per sequence.
    pub fn required(&self, s: &SeqSpace) -> PointSet {
        let mut req = self.graph.empty_set();
        for v in 0..self.graph.len() {
            if v >= s.points().len() || !s.is_limit(v) {
                req.insert(v);
            }
        }
        req
    }

    pub fn legality(&self, s: &SeqSpace, p: &SqPoint) -> Verdict {
        if !self.forward {
            return Verdict::Unknown { depth: 0 };
        }
        let v = self.node(s, p);
        match legal_lasso(&self.graph, v) {
            Some((stem, cycle)) => Verdict::proved(Witness::Lasso {
                stem: stem.iter().map(|&c| self.graph.name(c).to_string()).collect(),
                cycle: cycle.iter().map(|&c| self.graph.name(c).to_string()).collect(),
            }),
            None => self.graph.legality(&v, 0),
        }
    }
}

/// `L_{start+period} = L_start` with late indices moved up by `shift`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pattern {
    pub start: usize,
    pub period: usize,
    pub shift: u64,
}

#[derive(Debug, Clone)]
pub struct SqLevels {
    pub levels: Vec<TailSet>,
    pub cumulative: Vec<TailSet>,
    pub pattern: Option<Pattern>,
    pub cut: u64,
}

impl SqLevels {
    /// `⋃ₙ Gⁿ(x)` when the pattern shifts by 0 or 1.
    pub fn reach(&self) -> Option<TailSet> {
        let p = self.pattern?;
        let base = &self.cumulative[p.start + p.period - 1];
        match p.shift {
            0 => Some(base.clone()),
            1 => {
                let mut out = base.clone();
                for l in &self.levels[p.start..p.start + p.period] {
                    for q in l.points() {
                        if let SqPoint::Term(a, k) = *q {
                            if k < self.cut {
                                continue;
                            }
                            out = out.union(&TailSet::new([], &[(a, k)]));
                        }
                    }
                }
                Some(out)
            }
            _ => None,
        }
    }
}

/// Levels up to `depth`, stopping one period after the first translation
/// pattern is confirmed.
pub fn sq_levels(s: &SeqSpace, x: &SqPoint, depth: usize, cut: u64) -> SqLevels {
    let mut levels = vec![s.singleton(x)];
    let mut cumulative = levels.clone();
    let late_min = |t: &TailSet| -> Option<u64> {
        let terms = t.points().iter().filter_map(|p| match *p {
            SqPoint::Term(_, k) if k >= cut => Some(k),
            _ => None,
        });
        terms.chain(t.tails().values().copied().filter(|&k| k >= cut)).min()
    };
    let mut pattern = None;
    for n in 1..=depth + 1 {
        let next = s.image(&levels[n - 1]);
        cumulative.push(cumulative[n - 1].union(&next));
        levels.push(next);
        if pattern.is_some() || n < 2 {
            continue;
        }
        // Candidate pair (i, j = n - 1), confirmed by the pair (i + 1, n).
        let j = n - 1;
        for i in 0..j {
            let shift = match (late_min(&levels[i]), late_min(&levels[j])) {
                (Some(a), Some(b)) if b >= a => b - a,
                (None, None) => 0,
                _ => continue,
            };
            if levels[i].shift_late(cut, shift) == levels[j] && levels[i + 1].shift_late(cut, shift) == levels[n] {
                pattern = Some(Pattern { start: i, period: j - i, shift });
                break;
            }
        }
        if pattern.is_some() {
            break;
        }
    }
    SqLevels { levels, cumulative, pattern, cut }
}

fn names(g: &FiniteSystem, set: &PointSet) -> Vec<String> {
    g.names_of(set)
}

/// Minimal number of branches from `x` whose union contains every required
/// node, as chains of required components. A late node can only be covered by
/// a branch that ends running along it. `None` when some sequence has no run,
/// so no finite family is dense.
fn branch_cover(abs: &Abstraction, s: &SeqSpace, req: &PointSet) -> Option<Vec<Vec<String>>> {
    let g = &abs.graph;
    let comps = sccs(g);
    let comp_of = |v: PointId| comps.iter().position(|c| c.contains(&v)).unwrap();
    let mut elems: Vec<usize> = req.ones().map(comp_of).collect();
    elems.sort();
    elems.dedup();
    let late_of = |c: usize| abs.is_late(s, comps[c][0]);
    if elems.iter().filter_map(|&c| late_of(c)).any(|a| !abs.run[a]) {
        return None;
    }
    let reach: Vec<PointSet> = elems.iter().map(|&c| reach_star(g, comps[c][0])).collect();
    let less = |i: usize, j: usize| i != j && late_of(elems[i]).is_none() && reach[i].contains(comps[elems[j]][0]);
    let m = elems.len();
    let mut mate: Vec<Option<usize>> = vec![None; m];
    fn augment(i: usize, m: usize, less: &dyn Fn(usize, usize) -> bool, seen: &mut [bool], mate: &mut [Option<usize>]) -> bool {
        for j in 0..m {
            if less(i, j) && !seen[j] {
                seen[j] = true;
                if mate[j].is_none_or(|k| augment(k, m, less, seen, mate)) {
                    mate[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    for i in 0..m {
        augment(i, m, &less, &mut vec![false; m], &mut mate);
    }
    let mut next: Vec<Option<usize>> = vec![None; m];
    for (j, i) in mate.iter().enumerate() {
        if let Some(i) = i {
            next[*i] = Some(j);
        }
    }
    let label = |c: usize| {
        let members: Vec<String> = comps[c].iter().filter(|&&v| req.contains(v)).map(|&v| g.name(v).to_string()).collect();
        members.join(",")
    };
    let mut chains = Vec::new();
    for start in (0..m).filter(|&j| mate[j].is_none()) {
        let mut chain = vec![label(elems[start])];
        let mut cur = start;
        while let Some(n) = next[cur] {
            chain.push(label(elems[n]));
            cur = n;
        }
        chains.push(chain);
    }
    Some(chains)
}

fn negate(v: &Verdict) -> Verdict {
    match v {
        Verdict::Proved { witness } => Verdict::refuted(witness.clone()),
        Verdict::Refuted { witness } => Verdict::proved(witness.clone()),
        u => u.clone(),
    }
}

pub fn sq_point_class(s: &SeqSpace, x: &SqPoint, p: &SqParams) -> ClassRecord {
    let abs = s.abstraction();
    let g = &abs.graph;
    let v = abs.node(s, x);
    let name = s.point_name(x);
    let legal = abs.legality(s, x);
    let unknown = Verdict::Unknown { depth: p.depth };
    let degenerate = s.image(&s.singleton(x)).is_empty();
    if s.seqs().is_empty() {
        let mut rec = classify::classify_point(g, v);
        rec.point = name;
        return rec;
    }
    if !abs.branches {
        let trans3 = if legal.is_refuted() { legal.clone() } else { unknown.clone() };
        return ClassRecord {
            point: name,
            degenerate,
            intransitive: unknown.clone(),
            trans0: trans3.clone(),
            trans1: trans3.clone(),
            trans2: trans3.clone(),
            trans3,
            legal,
            three_n: Index::Unknown(p.depth),
            omega_cover: CoverIndex::Unknown(p.depth),
        };
    }
    let req = abs.required(s);
    let mut branch = reach_star(g, v);
    branch.intersect_with(&legal_set(g));
    let mut missing = req.clone();
    missing.difference_with(&branch);
    let trans3 = if !legal.is_proved() {
        legal.clone()
    } else {
        Verdict::from_bool(
            missing.is_clear(),
            Witness::Reach { reached: names(g, &branch), missing: names(g, &missing) },
        )
    };
    let cover = trans3.is_proved().then(|| branch_cover(&abs, s, &req));
    let trans2 = match &cover {
        None => trans3.clone(),
        Some(Some(chains)) => Verdict::from_bool(chains.len() == 1, Witness::BranchCover { branches: chains.clone() }),
        Some(None) => {
            let a = (0..s.seqs().len()).find(|&a| !abs.run[a]).unwrap();
            Verdict::refuted(Witness::Reach {
                reached: names(g, &branch),
                missing: vec![g.name(abs.late(s, a)).to_string()],
            })
        }
    };
    let trans1 = if trans2.is_proved() { avoiding_walk(&abs, s, v, &req) } else { trans2.clone() };
    let trans0 = match &trans1 {
        Verdict::Refuted { .. } => trans1.clone(),
        _ => unknown.clone(),
    };
    let three_n = if !(trans3.is_proved() && trans2.is_refuted()) {
        Index::NotApplicable
    } else if let Some(n) = first_dense_cum_level(s, x, p.depth) {
        Index::Finite(n)
    } else {
        let lv = sq_levels(s, x, p.depth, abs.cut);
        let stable = lv.cumulative.windows(2).any(|w| w[0] == w[1]);
        let finite_forever = lv.pattern.is_some_and(|pt| {
            pt.shift <= 1 && lv.levels[pt.start..pt.start + pt.period].iter().all(TailSet::is_finite)
        });
        if stable || finite_forever {
            Index::Omega
        } else {
            Index::Unknown(p.depth)
        }
    };
    let omega_cover = match (three_n, &cover) {
        (Index::Omega, Some(Some(chains))) => CoverIndex::Families(CoverCount::new(chains.len()).unwrap()),
        (Index::Omega, Some(None)) => CoverIndex::Omega,
        (Index::Unknown(d), _) => CoverIndex::Unknown(d),
        _ => CoverIndex::NotApplicable,
    };
    ClassRecord {
        point: name,
        degenerate,
        intransitive: match &legal {
            Verdict::Proved { .. } => negate(&trans3),
            other => other.clone(),
        },
        legal,
        trans0,
        trans1,
        trans2,
        trans3,
        three_n,
        omega_cover,
    }
}

/// Shortest path from `v` to `u`, both ends included.
fn path(g: &FiniteSystem, v: PointId, u: PointId) -> Option<Vec<PointId>> {
    let mut parent: Vec<Option<PointId>> = vec![None; g.len()];
    let mut seen = g.singleton(v);
    let mut queue = std::collections::VecDeque::from([v]);
    while let Some(a) = queue.pop_front() {
        if a == u {
            let mut out = vec![u];
            while let Some(p) = parent[*out.last().unwrap()] {
                out.push(p);
            }
            out.reverse();
            return Some(out);
        }
        for b in g.succ(a).ones() {
            if !seen.put(b) {
                parent[b] = Some(a);
                queue.push_back(b);
            }
        }
    }
    None
}

/// Refutes 1-transitivity with an infinite walk missing some required node,
/// or proves it when none exists. A walk misses a late node unless it ends
/// running along it.
fn avoiding_walk(abs: &Abstraction, s: &SeqSpace, v: PointId, req: &PointSet) -> Verdict {
    let g = &abs.graph;
    for u in req.ones().filter(|&u| u != v) {
        let found = match abs.is_late(s, u) {
            None => {
                let mut keep = g.full_set();
                keep.set(u, false);
                lasso_inside(g, v, &keep)
            }
            Some(a) => {
                let stop = if abs.stay[a] { path(g, v, u).map(|mut st| (st.split_off(st.len() - 1), st)) } else { None };
                stop.map(|(cycle, stem)| (stem, cycle))
                    .or_else(|| g.without_edge(u, u).and_then(|h| legal_lasso(&h, v)))
            }
        };
        if let Some((stem, cycle)) = found {
            let nm = |ps: &[PointId]| ps.iter().map(|&p| g.name(p).to_string()).collect::<Vec<_>>();
            return Verdict::refuted(Witness::Avoiding { avoided: g.name(u).to_string(), stem: nm(&stem), cycle: nm(&cycle) });
        }
    }
    Verdict::proved(Witness::Exhaustive { states: g.len() })
}

#[cfg(test)]
mod tests {
    use super::super::tests::branching;
    use super::*;

    #[test]
    fn levels_repeat_up_to_translation() {
        let s = branching(1);
        let cut = s.abstraction().cut;
        let lv = sq_levels(&s, &SqPoint::Finite(1), 16, cut);
        let shown: Vec<String> = lv.levels[..4].iter().map(|l| s.set_text(l)).collect();
        assert_eq!(shown, ["{1}", "{x[0],x[1]}", "{x[0],x[2]}", "{x[0],x[3]}"]);
        assert_eq!(lv.pattern, Some(Pattern { start: 2, period: 1, shift: 1 }));
        assert_eq!(s.set_text(&lv.reach().unwrap()), "{1,x[0..]}");
        let zero = sq_levels(&s, &SqPoint::Finite(0), 8, cut);
        assert!(zero.levels.iter().all(|l| s.set_text(l) == "{0}"));
    }

    #[test]
    fn branching_point_class() {
        for n in 1..=5u64 {
            let s = branching(n);
            let r = sq_point_class(&s, &SqPoint::Finite(1), &SqParams::default());
            assert!(r.trans3.is_proved() && r.trans2.is_refuted(), "n={n}: {r:?}");
            assert_eq!(r.three_n, Index::Omega);
            assert_eq!(r.omega_cover, CoverIndex::Families(CoverCount::new(n as usize + 1).unwrap()));
        }
        let s = branching(1);
        let r = sq_point_class(&s, &SqPoint::Finite(0), &SqParams::default());
        assert!(r.intransitive.is_proved() && r.trans3.is_refuted());
    }

    #[test]
    fn single_run_is_two_transitive() {
        let s = SeqSpace::new(
            vec!["0".into(), "1".into()],
            vec![super::super::Sequence { name: "x".into(), limit: 0 }],
            vec![
                Rule::Pair(SqPoint::Finite(0), SqPoint::Finite(0)),
                Rule::Pair(SqPoint::Finite(1), SqPoint::Term(0, 0)),
                Rule::TailToTail { a: 0, b: 0, shift: 1, from: 0 },
            ],
        )
        .unwrap();
        let r = sq_point_class(&s, &SqPoint::Finite(1), &SqParams::default());
        assert!(r.trans2.is_proved() && r.trans1.is_proved(), "{r:?}");
        assert_eq!(r.three_n, Index::NotApplicable);
    }

    #[test]
    fn truncation_never_gains_transitivity() {
        for n in 1..=5u64 {
            let s = branching(n);
            let t = s.truncate(20).unwrap();
            let one = t.index_of("1").unwrap();
            assert!(classify::is_trans2(&t, one).is_refuted());
            assert!(classify::is_trans3(&t, one).is_refuted());
        }
    }
}
