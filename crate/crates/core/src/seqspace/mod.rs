//! Spaces made of finitely many points plus sequences converging to some of
//! them, with relations given by finitely many rules.

mod classify;

pub use classify::{sq_levels, sq_point_class, Abstraction, Pattern, SqLevels, SqParams};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::engine::Engine;
use crate::error::Error;
use crate::relation::FiniteSystem;
use crate::segment::{q, Q};
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SqPoint {
    Finite(usize),
    /// Term `k` of sequence `seq`.
    Term(usize, u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    pub name: String,
    pub limit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Pair(SqPoint, SqPoint),
    /// `(a_k, b_{k+shift})` for `k ≥ from`.
    TailToTail { a: usize, b: usize, shift: i64, from: u64 },
    /// `(a_k, p)` for `k ≥ from`.
    TailToPoint { a: usize, p: SqPoint, from: u64 },
    /// `(p, a_k)` for `k ≥ from`.
    PointToTail { p: SqPoint, a: usize, from: u64 },
}

/// A finite set of points together with at most one tail per sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TailSet {
    finite: BTreeSet<SqPoint>,
    tails: BTreeMap<usize, u64>,
}

impl TailSet {
    pub fn new<I: IntoIterator<Item = SqPoint>>(points: I, tails: &[(usize, u64)]) -> TailSet {
        let mut t = TailSet { finite: points.into_iter().collect(), tails: BTreeMap::new() };
        for &(a, s) in tails {
            t.add_tail(a, s);
        }
        t.canonicalize();
        t
    }

    fn add_tail(&mut self, a: usize, s: u64) {
        let e = self.tails.entry(a).or_insert(s);
        *e = (*e).min(s);
    }

    /// Drop terms covered by tails and fold adjacent terms into them.
    fn canonicalize(&mut self) {
        for (&a, s) in self.tails.iter_mut() {
            self.finite.retain(|p| !matches!(*p, SqPoint::Term(b, k) if b == a && k >= *s));
            while *s > 0 && self.finite.remove(&SqPoint::Term(a, *s - 1)) {
                *s -= 1;
            }
        }
    }

    pub fn points(&self) -> &BTreeSet<SqPoint> {
        &self.finite
    }

    pub fn tails(&self) -> &BTreeMap<usize, u64> {
        &self.tails
    }

    pub fn contains(&self, p: &SqPoint) -> bool {
        match *p {
            SqPoint::Term(a, k) if self.tails.get(&a).is_some_and(|&s| k >= s) => true,
            _ => self.finite.contains(p),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.tails.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.tails.is_empty()
    }

    pub fn union(&self, o: &TailSet) -> TailSet {
        let mut t = self.clone();
        t.finite.extend(o.finite.iter().copied());
        for (&a, &s) in &o.tails {
            t.add_tail(a, s);
        }
        t.canonicalize();
        t
    }

    pub fn intersect(&self, o: &TailSet) -> TailSet {
        let mut t = TailSet {
            finite: self.finite.iter().chain(&o.finite).filter(|p| self.contains(p) && o.contains(p)).copied().collect(),
            ..TailSet::default()
        };
        for (&a, &s) in &self.tails {
            if let Some(&r) = o.tails.get(&a) {
                t.tails.insert(a, s.max(r));
            }
        }
        t.canonicalize();
        t
    }

    /// Move every term with index at least `cut` up by `by`.
    pub fn shift_late(&self, cut: u64, by: u64) -> TailSet {
        let mv = |k: u64| if k >= cut { k + by } else { k };
        let mut t = TailSet {
            finite: self
                .finite
                .iter()
                .map(|p| match *p {
                    SqPoint::Term(a, k) => SqPoint::Term(a, mv(k)),
                    f => f,
                })
                .collect(),
            tails: self.tails.iter().map(|(&a, &s)| (a, mv(s))).collect(),
        };
        t.canonicalize();
        t
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SeqSpace {
    points: Vec<String>,
    seqs: Vec<Sequence>,
    rules: Vec<Rule>,
}

impl SeqSpace {
    pub fn new(points: Vec<String>, seqs: Vec<Sequence>, rules: Vec<Rule>) -> Result<SeqSpace, Error> {
        if points.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut seen = BTreeSet::new();
        for n in points.iter().chain(seqs.iter().map(|s| &s.name)) {
            if !seen.insert(n.as_str()) {
                return Err(Error::DuplicatePoint(n.clone()));
            }
        }
        if let Some(s) = seqs.iter().find(|s| s.limit >= points.len()) {
            return Err(Error::UnknownPoint(format!("limit of {}", s.name)));
        }
        if rules.is_empty() {
            return Err(Error::EmptyRelation);
        }
        let sp = SeqSpace { points, seqs, rules };
        for r in &sp.rules {
            sp.check_rule(r)?;
        }
        Ok(sp)
    }

    fn check_rule(&self, r: &Rule) -> Result<(), Error> {
        let pt = |p: &SqPoint| match *p {
            SqPoint::Finite(i) if i < self.points.len() => Ok(()),
            SqPoint::Term(a, _) if a < self.seqs.len() => Ok(()),
            _ => Err(Error::UnknownPoint(format!("{p:?}"))),
        };
        let sq = |a: usize| if a < self.seqs.len() { Ok(()) } else { Err(Error::UnknownPoint(format!("sequence {a}"))) };
        match r {
            Rule::Pair(u, v) => pt(u).and(pt(v)),
            Rule::TailToTail { a, b, shift, from } => {
                sq(*a)?;
                sq(*b)?;
                if (*from as i64) + shift < 0 {
                    return Err(Error::Invalid(format!("{} maps below index 0", self.rule_text(r))));
                }
                self.require_limit_pair(r, self.limit(*a), self.limit(*b))
            }
            Rule::TailToPoint { a, p, .. } => {
                sq(*a)?;
                pt(p)?;
                self.require_limit_pair(r, self.limit(*a), *p)
            }
            Rule::PointToTail { p, a, .. } => {
                sq(*a)?;
                pt(p)?;
                self.require_limit_pair(r, *p, self.limit(*a))
            }
        }
    }

    fn require_limit_pair(&self, r: &Rule, u: SqPoint, v: SqPoint) -> Result<(), Error> {
        if self.has_pair(&u, &v) {
            Ok(())
        } else {
            Err(Error::NotClosed(format!(
                "{} needs the limit pair ({},{})",
                self.rule_text(r),
                self.point_name(&u),
                self.point_name(&v)
            )))
        }
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn seqs(&self) -> &[Sequence] {
        &self.seqs
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn limit(&self, a: usize) -> SqPoint {
        SqPoint::Finite(self.seqs[a].limit)
    }

    pub fn is_limit(&self, i: usize) -> bool {
        self.seqs.iter().any(|s| s.limit == i)
    }

    /// Resolve `name` or `seq[k]`.
    pub fn point_of(&self, s: &str) -> Result<SqPoint, Error> {
        if let Some(i) = self.points.iter().position(|p| p == s) {
            return Ok(SqPoint::Finite(i));
        }
        let bad = || Error::UnknownPoint(s.to_string());
        let (name, rest) = s.split_once('[').ok_or_else(bad)?;
        let k: u64 = rest.strip_suffix(']').and_then(|k| k.parse().ok()).ok_or_else(bad)?;
        let a = self.seq_of(name)?;
        Ok(SqPoint::Term(a, k))
    }

    pub fn seq_of(&self, name: &str) -> Result<usize, Error> {
        self.seqs.iter().position(|q| q.name == name).ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    /// Embedding in `[0,1]`: finite points keep no value, terms sit at `1/(k+2)`.
    pub fn term_value(k: u64) -> Q {
        q(1, k as i64 + 2)
    }

    pub fn has_pair(&self, u: &SqPoint, v: &SqPoint) -> bool {
        self.rules.iter().any(|r| match (r, *u, *v) {
            (Rule::Pair(a, b), _, _) => a == u && b == v,
            (Rule::TailToTail { a, b, shift, from }, SqPoint::Term(x, k), SqPoint::Term(y, j)) => {
                x == *a && y == *b && k >= *from && j as i64 == k as i64 + shift
            }
            (Rule::TailToPoint { a, p, from }, SqPoint::Term(x, k), _) => x == *a && k >= *from && p == v,
            (Rule::PointToTail { p, a, from }, _, SqPoint::Term(y, k)) => p == u && y == *a && k >= *from,
            _ => false,
        })
    }

    pub fn transpose(&self) -> SeqSpace {
        let rules = self
            .rules
            .iter()
            .map(|r| match *r {
                Rule::Pair(u, v) => Rule::Pair(v, u),
                Rule::TailToTail { a, b, shift, from } => {
                    Rule::TailToTail { a: b, b: a, shift: -shift, from: (from as i64 + shift) as u64 }
                }
                Rule::TailToPoint { a, p, from } => Rule::PointToTail { p, a, from },
                Rule::PointToTail { p, a, from } => Rule::TailToPoint { a, p, from },
            })
            .collect();
        SeqSpace { points: self.points.clone(), seqs: self.seqs.clone(), rules }
    }

    pub fn image(&self, set: &TailSet) -> TailSet {
        let mut out = TailSet::default();
        for r in &self.rules {
            match *r {
                Rule::Pair(u, v) => {
                    if set.contains(&u) {
                        out.finite.insert(v);
                    }
                }
                Rule::TailToTail { a, b, shift, from } => {
                    let to = |k: u64| (k as i64 + shift) as u64;
                    for p in &set.finite {
                        if let SqPoint::Term(x, k) = *p {
                            if x == a && k >= from {
                                out.finite.insert(SqPoint::Term(b, to(k)));
                            }
                        }
                    }
                    if let Some(&s) = set.tails.get(&a) {
                        out.add_tail(b, to(s.max(from)));
                    }
                }
                Rule::TailToPoint { a, p, from } => {
                    let hit = set.tails.contains_key(&a)
                        || set.finite.iter().any(|q| matches!(*q, SqPoint::Term(x, k) if x == a && k >= from));
                    if hit {
                        out.finite.insert(p);
                    }
                }
                Rule::PointToTail { p, a, from } => {
                    if set.contains(&p) {
                        out.add_tail(a, from);
                    }
                }
            }
        }
        out.canonicalize();
        out
    }

    /// The finite system on the points and the first `k + 1` terms of every
    /// sequence, keeping the pairs that stay inside.
    pub fn truncate(&self, k: u64) -> Result<FiniteSystem, Error> {
        let mut names = self.points.clone();
        let idx = |p: &SqPoint| -> Option<usize> {
            match *p {
                SqPoint::Finite(i) => Some(i),
                SqPoint::Term(a, j) if j <= k => Some(self.points.len() + a * (k as usize + 1) + j as usize),
                SqPoint::Term(..) => None,
            }
        };
        for (a, _) in self.seqs.iter().enumerate() {
            for j in 0..=k {
                names.push(self.point_name(&SqPoint::Term(a, j)));
            }
        }
        let all: Vec<SqPoint> = (0..self.points.len())
            .map(SqPoint::Finite)
            .chain((0..self.seqs.len()).flat_map(|a| (0..=k).map(move |j| SqPoint::Term(a, j))))
            .collect();
        let mut edges = Vec::new();
        for u in &all {
            for v in &all {
                if self.has_pair(u, v) {
                    edges.push((idx(u).unwrap(), idx(v).unwrap()));
                }
            }
        }
        let named: Vec<(&str, &str)> = edges.iter().map(|&(u, v)| (names[u].as_str(), names[v].as_str())).collect();
        FiniteSystem::new(&names.iter().map(String::as_str).collect::<Vec<_>>(), &named)
    }

    pub fn rule_text(&self, r: &Rule) -> String {
        let n = |p: &SqPoint| self.point_name(p);
        match r {
            Rule::Pair(u, v) => format!("rule pair ({},{})", n(u), n(v)),
            Rule::TailToTail { a, b, shift, from } => {
                format!("rule tail {} -> {} shift {} from {}", self.seqs[*a].name, self.seqs[*b].name, shift, from)
            }
            Rule::TailToPoint { a, p, from } => format!("rule tail {} -> point {} from {}", self.seqs[*a].name, n(p), from),
            Rule::PointToTail { p, a, from } => format!("rule point {} -> tail {} from {}", n(p), self.seqs[*a].name, from),
        }
    }

    pub fn set_text(&self, t: &TailSet) -> String {
        let mut parts: Vec<String> = t.finite.iter().map(|p| self.point_name(p)).collect();
        parts.extend(t.tails.iter().map(|(&a, s)| format!("{}[{}..]", self.seqs[a].name, s)));
        format!("{{{}}}", parts.join(","))
    }

    pub fn abstraction(&self) -> Abstraction {
        Abstraction::new(self)
    }
}

impl fmt::Debug for SeqSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "seqspace {:?}", self.points)?;
        for s in &self.seqs {
            write!(f, "; sequence {} limit {}", s.name, self.points[s.limit])?;
        }
        for r in &self.rules {
            write!(f, "; {}", self.rule_text(r))?;
        }
        Ok(())
    }
}

impl Engine for SeqSpace {
    type Point = SqPoint;
    type Set = TailSet;

    fn point_name(&self, p: &SqPoint) -> String {
        match *p {
            SqPoint::Finite(i) => self.points[i].clone(),
            SqPoint::Term(a, k) => format!("{}[{}]", self.seqs[a].name, k),
        }
    }

    /// Finite points, then terms in order of index across sequences.
    fn sample_points(&self, count: usize) -> Vec<SqPoint> {
        let finite = (0..self.points.len()).map(SqPoint::Finite);
        let n = self.seqs.len();
        let terms = (0..).flat_map(move |k| (0..n).map(move |a| SqPoint::Term(a, k)));
        if n == 0 {
            return finite.take(count).collect();
        }
        finite.chain(terms).take(count).collect()
    }

    fn singleton(&self, p: &SqPoint) -> TailSet {
        TailSet::new([*p], &[])
    }

    fn empty(&self) -> TailSet {
        TailSet::default()
    }

    fn full(&self) -> TailSet {
        let tails: Vec<(usize, u64)> = (0..self.seqs.len()).map(|a| (a, 0)).collect();
        TailSet::new((0..self.points.len()).map(SqPoint::Finite), &tails)
    }

    fn union(&self, a: &TailSet, b: &TailSet) -> TailSet {
        a.union(b)
    }

    fn intersect(&self, a: &TailSet, b: &TailSet) -> TailSet {
        a.intersect(b)
    }

    fn complement(&self, t: &TailSet) -> TailSet {
        let mut out = TailSet::default();
        for i in 0..self.points.len() {
            if !t.finite.contains(&SqPoint::Finite(i)) {
                out.finite.insert(SqPoint::Finite(i));
            }
        }
        for a in 0..self.seqs.len() {
            let top = match t.tails.get(&a) {
                Some(&s) => s,
                None => {
                    let last = t.finite.iter().filter_map(|p| match *p {
                        SqPoint::Term(b, k) if b == a => Some(k + 1),
                        _ => None,
                    });
                    let s = last.max().unwrap_or(0);
                    out.add_tail(a, s);
                    s
                }
            };
            for k in 0..top {
                if !t.finite.contains(&SqPoint::Term(a, k)) {
                    out.finite.insert(SqPoint::Term(a, k));
                }
            }
        }
        out.canonicalize();
        out
    }

    /// Adds the limit of every sequence with a tail in the set.
    fn closure(&self, t: &TailSet) -> TailSet {
        let mut out = t.clone();
        for &a in t.tails.keys() {
            out.finite.insert(self.limit(a));
        }
        out.canonicalize();
        out
    }

    fn is_empty(&self, t: &TailSet) -> bool {
        t.is_empty()
    }

    fn image(&self, a: &TailSet) -> TailSet {
        SeqSpace::image(self, a)
    }

    fn preimage(&self, a: &TailSet) -> TailSet {
        self.transpose().image(a)
    }

    fn is_isolated(&self, p: &SqPoint) -> bool {
        match *p {
            SqPoint::Finite(i) => !self.is_limit(i),
            SqPoint::Term(..) => true,
        }
    }

    fn legality(&self, p: &SqPoint, _depth: usize) -> Verdict {
        self.abstraction().legality(self, p)
    }
}
