use num_traits::{One, Signed, Zero};
use std::fmt;

use super::region::{sample_rationals, show_q, Interval, Region, Q};
use crate::engine::Engine;
use crate::error::Error;
use crate::verdict::{Verdict, Witness};

/// Closed segment from `(x0,y0)` to `(x1,y1)` with `x0 ≤ x1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub x0: Q,
    pub y0: Q,
    pub x1: Q,
    pub y1: Q,
}

impl Segment {
    pub fn new(a: (Q, Q), b: (Q, Q)) -> Result<Segment, Error> {
        for c in [&a.0, &a.1, &b.0, &b.1] {
            if c.is_negative() || *c > Q::one() {
                return Err(Error::Invalid(format!("coordinate {} outside [0,1]", show_q(c))));
            }
        }
        let (p, r) = if (&a.0, &a.1) <= (&b.0, &b.1) { (a, b) } else { (b, a) };
        Ok(Segment { x0: p.0, y0: p.1, x1: r.0, y1: r.1 })
    }

    pub fn is_vertical(&self) -> bool {
        self.x0 == self.x1
    }

    pub fn transpose(&self) -> Segment {
        Segment::new((self.y0.clone(), self.x0.clone()), (self.y1.clone(), self.x1.clone())).unwrap()
    }

    pub fn domain(&self) -> Region {
        Region::closed(self.x0.clone(), self.x1.clone())
    }

    pub fn range(&self) -> Region {
        let (lo, hi) = if self.y0 <= self.y1 { (&self.y0, &self.y1) } else { (&self.y1, &self.y0) };
        Region::closed(lo.clone(), hi.clone())
    }

    /// Value at `x` for a non-vertical segment.
    pub fn at(&self, x: &Q) -> Q {
        &self.y0 + (x - &self.x0) * (&self.y1 - &self.y0) / (&self.x1 - &self.x0)
    }

    /// `{y : (x,y) on the segment}` for a single point `x`.
    pub fn fiber(&self, x: &Q) -> Region {
        if !self.domain().contains(x) {
            Region::empty()
        } else if self.is_vertical() {
            self.range()
        } else {
            Region::point(self.at(x))
        }
    }

    pub fn image(&self, a: &Region) -> Region {
        if self.is_vertical() {
            return if a.contains(&self.x0) { self.range() } else { Region::empty() };
        }
        let d = a.intersect(&self.domain());
        let slope = &self.y1 - &self.y0;
        let parts = d
            .parts()
            .iter()
            .map(|p| {
                let (ylo, yhi) = (self.at(&p.lo), self.at(&p.hi));
                if slope.is_zero() {
                    Interval::point(ylo)
                } else if slope.is_positive() {
                    Interval { lo: ylo, hi: yhi, lo_closed: p.lo_closed, hi_closed: p.hi_closed }
                } else {
                    Interval { lo: yhi, hi: ylo, lo_closed: p.hi_closed, hi_closed: p.lo_closed }
                }
            })
            .collect();
        Region::from_parts(parts)
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "segment ({},{})->({},{})",
            show_q(&self.x0),
            show_q(&self.y0),
            show_q(&self.x1),
            show_q(&self.y1)
        )
    }
}

/// A closed relation on `[0,1]` given as a finite union of segments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegRelation {
    segments: Vec<Segment>,
}

impl SegRelation {
    pub fn new(segments: Vec<Segment>) -> Result<SegRelation, Error> {
        if segments.is_empty() {
            return Err(Error::EmptyRelation);
        }
        Ok(SegRelation { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn transpose(&self) -> SegRelation {
        SegRelation { segments: self.segments.iter().map(Segment::transpose).collect() }
    }

    pub fn image(&self, a: &Region) -> Region {
        self.segments.iter().fold(Region::empty(), |acc, s| acc.union(&s.image(a)))
    }

    pub fn image_of(&self, x: &Q) -> Region {
        self.segments.iter().fold(Region::empty(), |acc, s| acc.union(&s.fiber(x)))
    }

    pub fn preimage(&self, a: &Region) -> Region {
        self.transpose().image(a)
    }

    /// `G⁻ⁿ[A]`, iterating `G⁻¹[B] = X \ G⁻¹(X \ B)`.
    pub fn lower_preimage(&self, a: &Region, n: usize) -> Region {
        let t = self.transpose();
        let mut cur = a.clone();
        for _ in 0..n {
            cur = t.image(&cur.complement()).complement();
        }
        cur
    }

    /// `π₀(G)`; closed as a finite union of closed intervals.
    pub fn nondegenerate(&self) -> Region {
        self.segments.iter().fold(Region::empty(), |acc, s| acc.union(&s.domain()))
    }

    pub fn is_sv(&self) -> bool {
        self.nondegenerate() == Region::full()
    }

    /// Every coordinate appearing in a segment endpoint, with `0` and `1`.
    pub fn coordinates(&self) -> Region {
        let mut pts = vec![Q::zero(), Q::one()];
        for s in &self.segments {
            pts.extend([s.x0.clone(), s.y0.clone(), s.x1.clone(), s.y1.clone()]);
        }
        Region::points(pts)
    }

    pub fn levels(&self, x: &Q, n: usize) -> SegLevels {
        let mut levels = vec![Region::point(x.clone())];
        let mut cumulative = levels.clone();
        let mut stabilized = None;
        for i in 1..=n {
            let next = self.image(&levels[i - 1]);
            let cum = cumulative[i - 1].union(&next);
            if stabilized.is_none() && cum == cumulative[i - 1] {
                stabilized = Some(i - 1);
            }
            levels.push(next);
            cumulative.push(cum);
        }
        let dense_from = cumulative.iter().position(Region::is_dense);
        SegLevels { levels, cumulative, stabilized, dense_from }
    }
}

/// `G⁰(x), …, Gⁿ(x)` with their cumulative unions.
#[derive(Clone, Debug)]
pub struct SegLevels {
    pub levels: Vec<Region>,
    pub cumulative: Vec<Region>,
    /// First index whose cumulative union equals the next one.
    pub stabilized: Option<usize>,
    /// First index whose cumulative union is dense; every later one is too.
    pub dense_from: Option<usize>,
}

impl Engine for SegRelation {
    type Point = Q;
    type Set = Region;

    fn point_name(&self, p: &Q) -> String {
        show_q(p)
    }

    fn sample_points(&self, count: usize) -> Vec<Q> {
        sample_rationals(count)
    }

    fn singleton(&self, p: &Q) -> Region {
        Region::point(p.clone())
    }

    fn empty(&self) -> Region {
        Region::empty()
    }

    fn full(&self) -> Region {
        Region::full()
    }

    fn union(&self, a: &Region, b: &Region) -> Region {
        a.union(b)
    }

    fn intersect(&self, a: &Region, b: &Region) -> Region {
        a.intersect(b)
    }

    fn complement(&self, a: &Region) -> Region {
        a.complement()
    }

    fn closure(&self, a: &Region) -> Region {
        a.closure()
    }

    fn is_empty(&self, a: &Region) -> bool {
        a.is_empty()
    }

    fn image(&self, a: &Region) -> Region {
        SegRelation::image(self, a)
    }

    fn preimage(&self, a: &Region) -> Region {
        SegRelation::preimage(self, a)
    }

    fn is_isolated(&self, _p: &Q) -> bool {
        false
    }

    /// Proved when every point has a successor or a lasso through included
    /// endpoints is found; refuted when some level is empty.
    fn legality(&self, p: &Q, depth: usize) -> Verdict {
        if self.is_sv() {
            return Verdict::proved(Witness::Total { domain: self.nondegenerate().to_string() });
        }
        let mut cur = Region::point(p.clone());
        for n in 1..=depth {
            cur = self.image(&cur);
            if cur.is_empty() {
                return Verdict::refuted(Witness::DeadEnd { point: show_q(p), depth: n });
            }
        }
        match super::verdict::find_lasso(self, p, depth) {
            Some(w) => Verdict::proved(w),
            None => Verdict::Unknown { depth },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::region::q;
    use super::*;

    fn seg(a: (i64, i64, i64, i64), b: (i64, i64, i64, i64)) -> Segment {
        Segment::new((q(a.0, a.1), q(a.2, a.3)), (q(b.0, b.1), q(b.2, b.3))).unwrap()
    }

    fn tent() -> SegRelation {
        SegRelation::new(vec![seg((0, 1, 0, 1), (1, 2, 1, 1)), seg((1, 2, 1, 1), (1, 1, 0, 1))]).unwrap()
    }

    fn fx4() -> SegRelation {
        SegRelation::new(vec![seg((0, 1, 1, 1), (1, 1, 1, 1)), seg((0, 1, 0, 1), (0, 1, 1, 1))]).unwrap()
    }

    fn fx10() -> SegRelation {
        SegRelation::new(vec![seg((0, 1, 0, 1), (1, 1, 0, 1)), seg((0, 1, 0, 1), (0, 1, 1, 1))]).unwrap()
    }

    #[test]
    fn image_examples() {
        assert_eq!(tent().image(&Region::closed(q(0, 1), q(1, 4))), Region::closed(q(0, 1), q(1, 2)));
        assert_eq!(fx4().image(&Region::point(q(0, 1))), Region::full());
        let diag = SegRelation::new(vec![seg((0, 1, 0, 1), (1, 1, 1, 1))]).unwrap();
        let a = Region::interval(q(1, 5), q(1, 3), false, true).union(&Region::point(q(7, 8)));
        assert_eq!(diag.image(&a), a);
    }

    #[test]
    fn preimage_examples() {
        assert_eq!(tent().preimage(&Region::point(q(1, 1))), Region::point(q(1, 2)));
        let mut fx6 = tent().segments().to_vec();
        fx6.push(seg((1, 2, 0, 1), (1, 2, 1, 1)));
        let fx6 = SegRelation::new(fx6).unwrap();
        assert_eq!(fx6.lower_preimage(&Region::full(), 1), Region::full());
        assert_eq!(
            fx10().lower_preimage(&Region::point(q(0, 1)), 1),
            Region::interval(q(0, 1), q(1, 1), false, true)
        );
    }

    #[test]
    fn level_examples() {
        let l = tent().levels(&q(1, 2), 2);
        assert_eq!(l.levels, [Region::point(q(1, 2)), Region::point(q(1, 1)), Region::point(q(0, 1))]);
        let l = tent().levels(&q(0, 1), 3);
        assert!(l.levels.iter().all(|r| *r == Region::point(q(0, 1))));
        assert_eq!(l.stabilized, Some(0));
    }

    #[test]
    fn nondegenerate_set_is_closed() {
        let r = SegRelation::new(vec![seg((1, 4, 0, 1), (1, 2, 1, 1)), seg((3, 4, 1, 2), (3, 4, 1, 2))]).unwrap();
        let n = r.nondegenerate();
        assert_eq!(n.closure(), n);
        assert!(!r.is_sv());
        assert!(tent().is_sv());
    }
}
