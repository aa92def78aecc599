//! Canonical finite unions of rational intervals in `[0,1]`.

use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Parse `p/q` or an integer.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    let r: Q = s.parse().ok()?;
    Some(r)
}

pub fn show_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    /// `None` when the described set is empty.
    pub fn new(lo: Q, hi: Q, lo_closed: bool, hi_closed: bool) -> Option<Interval> {
        if lo > hi || (lo == hi && !(lo_closed && hi_closed)) {
            None
        } else {
            Some(Interval { lo, hi, lo_closed, hi_closed })
        }
    }

    pub fn closed(lo: Q, hi: Q) -> Option<Interval> {
        Interval::new(lo, hi, true, true)
    }

    pub fn point(x: Q) -> Interval {
        Interval { lo: x.clone(), hi: x, lo_closed: true, hi_closed: true }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Q) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        above && below
    }

    pub fn intersect(&self, o: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.cmp(&o.lo) {
            std::cmp::Ordering::Less => (o.lo.clone(), o.lo_closed),
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_closed),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_closed && o.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&o.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_closed),
            std::cmp::Ordering::Greater => (o.hi.clone(), o.hi_closed),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_closed && o.hi_closed),
        };
        Interval::new(lo, hi, lo_closed, hi_closed)
    }

    /// Some rational strictly inside, or the point itself.
    pub fn inner_point(&self) -> Q {
        if self.is_point() {
            self.lo.clone()
        } else {
            (&self.lo + &self.hi) / Q::from_integer(2.into())
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", show_q(&self.lo));
        }
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            show_q(&self.lo),
            show_q(&self.hi),
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// A subset of `[0,1]` as sorted, pairwise disjoint, non-mergeable intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Region {
    parts: Vec<Interval>,
}

impl Region {
    pub fn empty() -> Region {
        Region { parts: vec![] }
    }

    pub fn full() -> Region {
        Region { parts: vec![Interval::closed(Q::zero(), Q::one()).unwrap()] }
    }

    pub fn point(x: Q) -> Region {
        Region::from_parts(vec![Interval::point(x)])
    }

    pub fn points<I: IntoIterator<Item = Q>>(xs: I) -> Region {
        Region::from_parts(xs.into_iter().map(Interval::point).collect())
    }

    pub fn interval(lo: Q, hi: Q, lo_closed: bool, hi_closed: bool) -> Region {
        Region::from_parts(Interval::new(lo, hi, lo_closed, hi_closed).into_iter().collect())
    }

    pub fn closed(lo: Q, hi: Q) -> Region {
        Region::interval(lo, hi, true, true)
    }

    /// Canonical form of an arbitrary list of intervals, clipped to `[0,1]`.
    pub fn from_parts(parts: Vec<Interval>) -> Region {
        let unit = Interval::closed(Q::zero(), Q::one()).unwrap();
        let mut parts: Vec<Interval> = parts.iter().filter_map(|p| p.intersect(&unit)).collect();
        parts.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for p in parts {
            if let Some(cur) = out.last_mut() {
                let touches = p.lo < cur.hi || (p.lo == cur.hi && (cur.hi_closed || p.lo_closed));
                if touches {
                    if p.hi > cur.hi {
                        cur.hi = p.hi;
                        cur.hi_closed = p.hi_closed;
                    } else if p.hi == cur.hi {
                        cur.hi_closed |= p.hi_closed;
                    }
                    continue;
                }
            }
            out.push(p);
        }
        Region { parts: out }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn union(&self, o: &Region) -> Region {
        Region::from_parts(self.parts.iter().chain(&o.parts).cloned().collect())
    }

    pub fn intersect(&self, o: &Region) -> Region {
        let mut out = Vec::new();
        for a in &self.parts {
            for b in &o.parts {
                out.extend(a.intersect(b));
            }
        }
        Region::from_parts(out)
    }

    /// Complement relative to `[0,1]`.
    pub fn complement(&self) -> Region {
        let mut out = Vec::new();
        let mut pos = Q::zero();
        let mut closed = true;
        for p in &self.parts {
            out.extend(Interval::new(pos, p.lo.clone(), closed, !p.lo_closed));
            pos = p.hi.clone();
            closed = !p.hi_closed;
        }
        out.extend(Interval::new(pos, Q::one(), closed, true));
        Region::from_parts(out)
    }

    pub fn difference(&self, o: &Region) -> Region {
        self.intersect(&o.complement())
    }

    pub fn closure(&self) -> Region {
        Region::from_parts(
            self.parts
                .iter()
                .map(|p| Interval { lo_closed: true, hi_closed: true, ..p.clone() })
                .collect(),
        )
    }

    pub fn is_dense(&self) -> bool {
        self.closure() == Region::full()
    }

    pub fn is_subset(&self, o: &Region) -> bool {
        self.union(o) == *o
    }

    pub fn meets(&self, o: &Region) -> bool {
        !self.intersect(o).is_empty()
    }

    /// Whether the region is a finite set of points.
    pub fn is_finite(&self) -> bool {
        self.parts.iter().all(Interval::is_point)
    }

    /// The points of a finite region, ascending.
    pub fn point_list(&self) -> Vec<Q> {
        self.parts.iter().filter(|p| p.is_point()).map(|p| p.lo.clone()).collect()
    }

    /// Included endpoints of every part, ascending and deduplicated.
    pub fn atoms(&self) -> Vec<Q> {
        let mut out = Vec::new();
        for p in &self.parts {
            if p.lo_closed {
                out.push(p.lo.clone());
            }
            if p.hi_closed && !p.is_point() {
                out.push(p.hi.clone());
            }
        }
        out
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "{{}}");
        }
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(" u "))
    }
}

/// Reduced fractions in `[0,1]` with denominator at most `d`, ascending.
pub fn farey(d: u64) -> Vec<Q> {
    let mut out: Vec<Q> = (1..=d as i64)
        .flat_map(|den| (0..=den).map(move |num| q(num, den)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// The first `count` rationals of `[0,1]` ordered by denominator, then numerator.
pub fn sample_rationals(count: usize) -> Vec<Q> {
    (1i64..)
        .flat_map(|den| (0..=den).filter(move |num| num.gcd(&den) == 1).map(move |num| q(num, den)))
        .take(count)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_open_interval() {
        let r = Region::interval(q(1, 4), q(1, 2), false, false);
        assert_eq!(r.closure(), Region::closed(q(1, 4), q(1, 2)));
    }

    #[test]
    fn removing_a_point_stays_dense() {
        let r = Region::full().difference(&Region::point(q(1, 2)));
        assert_eq!(r.parts().len(), 2);
        assert!(r.is_dense());
        assert_eq!(r.to_string(), "[0,1/2) u (1/2,1]");
    }

    #[test]
    fn touching_closed_intervals_coalesce() {
        let r = Region::closed(q(0, 1), q(1, 4)).union(&Region::closed(q(1, 4), q(1, 2)));
        assert_eq!(r, Region::closed(q(0, 1), q(1, 2)));
        let open = Region::interval(q(0, 1), q(1, 4), true, false).union(&Region::interval(q(1, 4), q(1, 2), false, true));
        assert_eq!(open.parts().len(), 2);
        assert_eq!(open.union(&Region::point(q(1, 4))), Region::closed(q(0, 1), q(1, 2)));
    }

    #[test]
    fn complement_bookkeeping() {
        let r = Region::point(q(0, 1));
        assert_eq!(r.complement(), Region::interval(q(0, 1), q(1, 1), false, true));
        assert_eq!(Region::full().complement(), Region::empty());
        assert_eq!(Region::empty().complement(), Region::full());
    }

    #[test]
    fn samples_and_grid() {
        let s: Vec<String> = sample_rationals(7).iter().map(show_q).collect();
        assert_eq!(s, ["0", "1", "1/2", "1/3", "2/3", "1/4", "3/4"]);
        assert_eq!(farey(4).len(), 7);
    }
}
