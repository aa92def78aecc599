//! Seeded random finite systems checked against the oracle and the property
//! suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::thread;

use crate::classify::oracle::{bf_point_class, BF_BOUND};
use crate::classify::props::crosscheck_properties;
use crate::classify::classify_point;
use crate::error::Error;
use crate::relation::{FiniteSystem, PointId};
use crate::report::SCHEMA;

pub const MAX_SIZE: usize = 7;

/// Which family a case was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Batch {
    Uniform,
    /// `G ∪ G⁻¹` of a uniform case.
    Symmetric,
    /// A uniform case with one edge added at each point lacking a successor.
    Sv,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: usize,
    pub batch: Batch,
    pub check: String,
    pub detail: String,
    /// Smallest failing subsystem found by deleting edges and points.
    pub system: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub seed: u64,
    pub count: usize,
    pub size: usize,
    /// Uniform cases that already were SV, out of `count`.
    pub sv_cases: usize,
    pub oracle_checks: usize,
    pub property_checks: usize,
    pub failures: Vec<Failure>,
    pub pass: bool,
}

/// A uniformly random nonempty relation on `1..=size` points.
pub fn random_system(rng: &mut ChaCha8Rng, size: usize) -> FiniteSystem {
    let n = rng.gen_range(1..=size);
    loop {
        let edges: Vec<(PointId, PointId)> =
            (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|_| rng.gen::<bool>()).collect();
        if let Ok(s) = FiniteSystem::from_indices(n, &edges) {
            return s;
        }
    }
}

fn sv_completion(rng: &mut ChaCha8Rng, sys: &FiniteSystem) -> FiniteSystem {
    let n = sys.len();
    let mut edges = sys.edges();
    for a in 0..n {
        if sys.succ(a).is_clear() {
            edges.push((a, rng.gen_range(0..n)));
        }
    }
    FiniteSystem::from_indices(n, &edges).expect("nonempty")
}

/// First disagreement between the classifier and the exhaustive oracle.
pub fn oracle_disagreement(sys: &FiniteSystem) -> Option<String> {
    for x in 0..sys.len() {
        let fast = classify_point(sys, x);
        let slow = match bf_point_class(sys, x, BF_BOUND) {
            Ok(r) => r,
            Err(e) => return Some(e.to_string()),
        };
        for k in 0..4 {
            if fast.trans(k).decided() != slow.trans(k).decided() {
                return Some(format!(
                    "trans{k} at {}: classifier {}, oracle {}",
                    sys.name(x),
                    fast.trans(k).status(),
                    slow.trans(k).status()
                ));
            }
        }
    }
    None
}

pub fn property_failure(sys: &FiniteSystem, name: &str) -> Option<String> {
    crosscheck_properties(sys)
        .into_iter()
        .find(|p| p.name == name && !p.pass)
        .map(|p| p.detail.unwrap_or_default())
}

/// Greedily deletes edges, then points, while `fails` still holds.
pub fn shrink(sys: &FiniteSystem, fails: impl Fn(&FiniteSystem) -> bool) -> FiniteSystem {
    let mut cur = sys.clone();
    'outer: loop {
        for (a, b) in cur.edges() {
            if let Some(s) = cur.without_edge(a, b).filter(|s| fails(s)) {
                cur = s;
                continue 'outer;
            }
        }
        for p in 0..cur.len() {
            let mut keep = cur.full_set();
            keep.set(p, false);
            if let Some(s) = cur.restrict(&keep).filter(|s| fails(s)) {
                cur = s;
                continue 'outer;
            }
        }
        return cur;
    }
}

fn check_case(case: usize, batch: Batch, sys: &FiniteSystem) -> Vec<Failure> {
    let mut out = vec![];
    if let Some(detail) = oracle_disagreement(sys) {
        let small = shrink(sys, |s| oracle_disagreement(s).is_some());
        out.push(Failure { case, batch, check: "oracle".into(), detail, system: format!("{small:?}") });
    }
    for p in crosscheck_properties(sys).into_iter().filter(|p| !p.pass) {
        let small = shrink(sys, |s| property_failure(s, p.name).is_some());
        out.push(Failure {
            case,
            batch,
            check: p.name.to_string(),
            detail: p.detail.unwrap_or_default(),
            system: format!("{small:?}"),
        });
    }
    out
}

/// Runs `count` uniform cases, each also symmetrized and completed to SV.
pub fn random_suite(seed: u64, count: usize, size: usize) -> Result<SuiteReport, Error> {
    if size == 0 || size > MAX_SIZE {
        return Err(Error::Invalid(format!("size must be between 1 and {MAX_SIZE}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = vec![];
    let mut sv_cases = 0;
    for i in 0..count {
        let g = random_system(&mut rng, size);
        sv_cases += usize::from(g.is_sv());
        let sv = sv_completion(&mut rng, &g);
        let sym = g.symmetrized();
        cases.push((i, Batch::Uniform, g));
        cases.push((i, Batch::Symmetric, sym));
        cases.push((i, Batch::Sv, sv));
    }
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(16);
    let chunk = cases.len().div_ceil(workers).max(1);
    let failures: Vec<Failure> = thread::scope(|sc| {
        let handles: Vec<_> = cases
            .chunks(chunk)
            .map(|part| sc.spawn(move || part.iter().flat_map(|(i, b, s)| check_case(*i, *b, s)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("suite worker panicked")).collect()
    });
    let per = crosscheck_properties(&FiniteSystem::from_indices(1, &[(0, 0)]).unwrap()).len();
    Ok(SuiteReport {
        schema: SCHEMA,
        seed,
        count,
        size,
        sv_cases,
        oracle_checks: cases.len(),
        property_checks: cases.len() * per,
        pass: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_seeded_and_nonempty() {
        let a: Vec<_> = (0..20).map(|_| 0).scan(ChaCha8Rng::seed_from_u64(3), |r, _| Some(random_system(r, 4))).collect();
        let b: Vec<_> = (0..20).map(|_| 0).scan(ChaCha8Rng::seed_from_u64(3), |r, _| Some(random_system(r, 4))).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|s| !s.edges().is_empty() && s.len() <= 4));
    }

    #[test]
    fn shrink_finds_a_minimal_witness() {
        let sys = FiniteSystem::from_indices(4, &[(0, 1), (1, 2), (2, 2), (3, 3), (3, 0)]).unwrap();
        let small = shrink(&sys, |s| s.edges().iter().any(|&(a, b)| a == b));
        assert_eq!(small.len(), 1);
        assert_eq!(small.edges(), [(0, 0)]);
    }

    #[test]
    fn small_suite_passes() {
        let r = random_suite(1, 40, 5).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        assert_eq!(r.oracle_checks, 120);
        assert_eq!(r, random_suite(1, 40, 5).unwrap());
    }
}
