//! Exhaustive point classification for small systems, written without the
//! component or bitset machinery of the main classifier.

use super::{ClassRecord, CoverIndex, Index};
use crate::error::Error;
use crate::relation::{FiniteSystem, PointId};
use crate::verdict::{Verdict, Witness};

pub const BF_BOUND: usize = 7;

struct Graph {
    n: usize,
    adj: Vec<Vec<bool>>,
}

impl Graph {
    fn of(sys: &FiniteSystem) -> Graph {
        let n = sys.len();
        let mut adj = vec![vec![false; n]; n];
        for (a, b) in sys.edges() {
            adj[a][b] = true;
        }
        Graph { n, adj }
    }

    /// A walk with `steps` edges from `x` inside `mask` exists. With
    /// `steps = |mask|` some point repeats, so this is an infinite walk.
    fn walks_inside(&self, x: usize, mask: u32, steps: usize) -> bool {
        let mut can: Vec<bool> = (0..self.n).map(|p| mask >> p & 1 == 1).collect();
        for _ in 0..steps {
            can = (0..self.n)
                .map(|p| mask >> p & 1 == 1 && (0..self.n).any(|q| self.adj[p][q] && can[q]))
                .collect();
        }
        can[x]
    }

    fn legal(&self, x: usize) -> bool {
        self.walks_inside(x, self.full(), self.n)
    }

    fn full(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    fn step(&self, level: &[bool]) -> Vec<bool> {
        (0..self.n).map(|q| (0..self.n).any(|p| level[p] && self.adj[p][q])).collect()
    }

    /// Levels `G⁰(x), G¹(x), …` up to and including the first repeat.
    fn levels(&self, x: usize) -> Vec<Vec<bool>> {
        let mut out: Vec<Vec<bool>> = vec![(0..self.n).map(|p| p == x).collect()];
        loop {
            let next = self.step(out.last().unwrap());
            let again = out.contains(&next);
            out.push(next);
            if again {
                return out;
            }
        }
    }

    fn trans0(&self, x: usize) -> bool {
        let lv = self.levels(x);
        (0..self.n).all(|v| lv.iter().any(|l| (0..self.n).all(|p| l[p] == (p == v))))
    }

    /// Every subset containing `x` that admits an infinite walk from `x` is
    /// the whole space.
    fn trans1(&self, x: usize) -> bool {
        (0..=self.full())
            .filter(|&m| m >> x & 1 == 1)
            .filter(|&m| self.walks_inside(x, m, m.count_ones() as usize))
            .all(|m| m == self.full())
    }

    /// Breadth-first search over (current point, visited set).
    fn trans2(&self, x: usize) -> bool {
        let states = self.n << self.n;
        let id = |p: usize, m: u32| p << self.n | m as usize;
        let mut seen = vec![false; states];
        let mut queue = vec![(x, 1u32 << x)];
        seen[id(x, 1 << x)] = true;
        while let Some((p, m)) = queue.pop() {
            if m == self.full() && self.legal(p) {
                return true;
            }
            for q in 0..self.n {
                let nm = m | 1 << q;
                if self.adj[p][q] && !seen[id(q, nm)] {
                    seen[id(q, nm)] = true;
                    queue.push((q, nm));
                }
            }
        }
        false
    }

    fn cum_levels(&self, x: usize) -> Vec<Vec<bool>> {
        let mut cum = vec![false; self.n];
        self.levels(x)
            .iter()
            .map(|l| {
                for p in 0..self.n {
                    cum[p] |= l[p];
                }
                cum.clone()
            })
            .collect()
    }

    fn trans3(&self, x: usize) -> bool {
        let reach = self.cum_levels(x).pop().unwrap();
        reach.iter().all(|&r| r) && (0..self.n).all(|p| self.legal(p))
    }
}

fn verdict(b: bool, states: usize) -> Verdict {
    Verdict::from_bool(b, Witness::Exhaustive { states })
}

/// Classify `x` by exhaustive search; the space must have at most `bound` points.
pub fn bf_point_class(sys: &FiniteSystem, x: PointId, bound: usize) -> Result<ClassRecord, Error> {
    if sys.len() > bound.min(31) {
        return Err(Error::BoundExceeded { size: sys.len(), bound });
    }
    let g = Graph::of(sys);
    let states = g.n << g.n;
    let legal = g.legal(x);
    let t = [
        legal && g.trans0(x),
        legal && g.trans1(x),
        legal && g.trans2(x),
        legal && g.trans3(x),
    ];
    let three_n = if t[3] && !t[2] {
        let cum = g.cum_levels(x);
        match (1..cum.len()).find(|&n| cum[n].iter().all(|&b| b)) {
            Some(n) => Index::Finite(n),
            None => Index::Omega,
        }
    } else {
        Index::NotApplicable
    };
    Ok(ClassRecord {
        point: sys.name(x).to_string(),
        legal: verdict(legal, states),
        degenerate: !g.adj[x].iter().any(|&b| b),
        trans0: verdict(t[0], states),
        trans1: verdict(t[1], states),
        trans2: verdict(t[2], states),
        trans3: verdict(t[3], states),
        intransitive: verdict(legal && !t[3], states),
        three_n,
        omega_cover: CoverIndex::NotApplicable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classes(sys: &FiniteSystem) -> [Vec<String>; 4] {
        let recs: Vec<_> = (0..sys.len()).map(|x| bf_point_class(sys, x, BF_BOUND).unwrap()).collect();
        std::array::from_fn(|k| {
            recs.iter().filter(|r| r.trans(k).is_proved()).map(|r| r.point.clone()).collect()
        })
    }

    #[test]
    fn fx1_exhaustive() {
        let s = FiniteSystem::new(&["1", "2"], &[("1", "2"), ("2", "1"), ("2", "2")]).unwrap();
        assert_eq!(classes(&s), [vec!["1"], vec!["1"], vec!["1", "2"], vec!["1", "2"]]);
    }

    #[test]
    fn fx3_exhaustive() {
        let s = FiniteSystem::new(&["0", "1", "2"], &[("0", "1"), ("1", "2"), ("2", "0"), ("2", "2")]).unwrap();
        let c = classes(&s);
        assert_eq!(c[1], ["0"]);
        assert_eq!(c[2], ["0", "1", "2"]);
    }

    #[test]
    fn bound_is_enforced() {
        let s = FiniteSystem::from_indices(8, &[(0, 0)]).unwrap();
        assert!(matches!(bf_point_class(&s, 0, BF_BOUND), Err(Error::BoundExceeded { size: 8, bound: 7 })));
    }
}
