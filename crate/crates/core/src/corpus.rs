//! Pinned example systems and the checks that run alongside them.

use num_traits::{One, Zero};
use serde::Serialize;
use std::thread;

use crate::binstream::{binstream_verify, BinStream};
use crate::doc::parse_system;
use crate::error::Error;
use crate::report::{run_classify, Report, RunParams, SCHEMA};
use crate::segment::{q, show_q, Q};

pub const FIXTURES: &[(&str, &str)] = &[
    ("fx1", include_str!("../corpus/fx1.sys")),
    ("fx2", include_str!("../corpus/fx2.sys")),
    ("fx3", include_str!("../corpus/fx3.sys")),
    ("fx4", include_str!("../corpus/fx4.sys")),
    ("tent", include_str!("../corpus/tent.sys")),
    ("fx6", include_str!("../corpus/fx6.sys")),
    ("fx6inv", include_str!("../corpus/fx6inv.sys")),
    ("fx7_0", include_str!("../corpus/fx7_0.sys")),
    ("fx7_1", include_str!("../corpus/fx7_1.sys")),
    ("fx7_2", include_str!("../corpus/fx7_2.sys")),
    ("fx7_3", include_str!("../corpus/fx7_3.sys")),
    ("fx8_1", include_str!("../corpus/fx8_1.sys")),
    ("fx8_2", include_str!("../corpus/fx8_2.sys")),
    ("fx8_3", include_str!("../corpus/fx8_3.sys")),
    ("fx8_4", include_str!("../corpus/fx8_4.sys")),
    ("fx8_5", include_str!("../corpus/fx8_5.sys")),
    ("fx10", include_str!("../corpus/fx10.sys")),
];

/// Checks that are not system documents.
pub const CHECKS: &[&str] = &["stormy", "binstream"];

pub const STORMY_MAX_Q: u32 = 10;
pub const BINSTREAM_MAX_PREFIX: usize = 8;
pub const BINSTREAM_BOUND: usize = 100_000;

pub fn fixture(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn names() -> Vec<&'static str> {
    FIXTURES.iter().map(|(n, _)| *n).chain(CHECKS.iter().copied()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub name: String,
    pub pass: bool,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub schema: u32,
    pub entries: Vec<Entry>,
    pub pass: bool,
}

/// `2t` on `[0,1/4]`, `1-2t` on `[1/4,1/2]`.
pub fn f1(t: &Q) -> Q {
    if *t <= q(1, 4) {
        t * q(2, 1)
    } else {
        Q::one() - t * q(2, 1)
    }
}

/// `2t-1/2` on `[1/2,3/4]`, `5/2-2t` on `[3/4,1]`.
pub fn f2(t: &Q) -> Q {
    if *t <= q(3, 4) {
        t * q(2, 1) - q(1, 2)
    } else {
        q(5, 2) - t * q(2, 1)
    }
}

/// Orbit of `t` under `f` up to and including the first visit to `1/2`.
pub fn orbit_to_half(f: fn(&Q) -> Q, t: &Q, max_steps: usize) -> Option<Vec<Q>> {
    let mut orbit = vec![t.clone()];
    while *orbit.last().unwrap() != q(1, 2) {
        if orbit.len() > max_steps {
            return None;
        }
        let next = f(orbit.last().unwrap());
        orbit.push(next);
    }
    Some(orbit)
}

/// Dyadics `p/2^q`, `1 ≤ q ≤ max_q`, in `(0,1/2)` under `f1` and in `[1/2,1]`
/// under `f2`, each reaching `1/2` within `2q` steps. Returns the failures and
/// the number of points checked.
pub fn stormy_check(max_q: u32) -> (Vec<String>, usize) {
    let mut failures = vec![];
    let mut checked = 0;
    for qq in 1..=max_q {
        let den = 1i64 << qq;
        for p in (1..=den).step_by(2) {
            let t = q(p, den);
            let (f, name): (fn(&Q) -> Q, _) = if t < q(1, 2) { (f1, "f1") } else { (f2, "f2") };
            checked += 1;
            if orbit_to_half(f, &t, 2 * qq as usize).is_none() {
                failures.push(format!("{name}-orbit of {} misses 1/2 within {} steps", show_q(&t), 2 * qq));
            }
        }
    }
    if let Some(o) = orbit_to_half(f2, &Q::one(), 2) {
        checked += 1;
        debug_assert!(o.len() == 2 && !o[0].is_zero());
    } else {
        failures.push("f2-orbit of 1 misses 1/2".into());
    }
    (failures, checked)
}

/// All bit strings of length `n`, lexicographically.
pub fn bit_strings(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0u64..1 << n).map(move |v| (0..n).rev().map(|i| ((v >> i) & 1) as u8).collect())
}

/// Every prefix of length `≤ max_len` has a common shift in both streams, and
/// the shift reads the prefix in freshly generated streams.
pub fn binstream_check(max_len: usize, bound: usize) -> Result<(Vec<String>, usize), Error> {
    let mut failures = vec![];
    let mut checked = 0;
    for n in 0..=max_len {
        for b in bit_strings(n) {
            checked += 1;
            match binstream_verify(&b, bound)? {
                None => failures.push(format!("no common shift for {b:?} within {bound}")),
                Some(at) => {
                    let ok = [0, 1].iter().all(|&s| BinStream::new(s).prefix(at + n)[at..] == b[..]);
                    if !ok {
                        failures.push(format!("shift {at} does not read {b:?}"));
                    }
                }
            }
        }
    }
    Ok((failures, checked))
}

fn run_entry(name: &str, params: RunParams) -> Result<Entry, Error> {
    let entry = |failures: Vec<String>, report, summary| Entry {
        name: name.to_string(),
        pass: failures.is_empty(),
        failures,
        report,
        summary,
    };
    match name {
        "stormy" => {
            let (f, n) = stormy_check(STORMY_MAX_Q);
            Ok(entry(f, None, Some(format!("{n} dyadic orbits"))))
        }
        "binstream" => {
            let (f, n) = binstream_check(BINSTREAM_MAX_PREFIX, BINSTREAM_BOUND)?;
            Ok(entry(f, None, Some(format!("{n} prefixes"))))
        }
        _ => {
            let text = fixture(name).ok_or_else(|| Error::Invalid(format!("no fixture named `{name}`")))?;
            let report = run_classify(&parse_system(text)?, params)?;
            Ok(entry(report.failures(), Some(report), None))
        }
    }
}

/// Runs the selected entries, or all of them for an empty selection.
pub fn corpus_verify(selection: &[String], params: RunParams) -> Result<CorpusReport, Error> {
    let all = names();
    let chosen: Vec<&str> = if selection.is_empty() {
        all
    } else {
        for s in selection {
            if !all.contains(&s.as_str()) {
                return Err(Error::Invalid(format!("no fixture named `{s}`")));
            }
        }
        selection.iter().map(String::as_str).collect()
    };
    let entries = thread::scope(|sc| {
        let handles: Vec<_> = chosen.iter().map(|n| sc.spawn(move || run_entry(n, params))).collect();
        handles.into_iter().map(|h| h.join().expect("corpus worker panicked")).collect::<Result<Vec<_>, _>>()
    })?;
    let pass = entries.iter().all(|e| e.pass);
    Ok(CorpusReport { schema: SCHEMA, entries, pass })
}
