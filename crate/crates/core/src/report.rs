//! Classification reports and expectation checking.

use serde::Serialize;
use std::collections::BTreeMap;

use crate::classify::props::{crosscheck_properties, PropertyResult};
use crate::classify::{
    classify_point, intrans_set, system_class, three_n_set, trans_set, ClassRecord, CoverIndex, DoFlags, Index,
    SystemRecord,
};
use crate::doc::{Body, Expect, Status, SystemDoc, Value};
use crate::engine::Engine;
use crate::error::Error;
use crate::segment::{seg_point_class, seg_verdict, SegParams, SegQuery};
use crate::seqspace::{sq_point_class, SqParams, SqPoint};
use crate::tree::{build_tree, legal_set, TREE_CAP};
use crate::verdict::Verdict;

pub const SCHEMA: u32 = 1;

/// Rational points classified on the interval engine, besides those named in
/// expectations.
pub const SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunParams {
    pub depth: Option<usize>,
    pub net: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Params {
    pub depth: usize,
    pub net: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub expect: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub engine: &'static str,
    pub params: Params,
    pub points: Vec<ClassRecord>,
    pub system: SystemRecord,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub sets: BTreeMap<&'static str, Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub properties: Vec<PropertyResult>,
    pub expectations: Vec<Outcome>,
    pub pass: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .expectations
            .iter()
            .filter(|o| !o.pass)
            .map(|o| format!("{}, got {}", o.expect, o.actual))
            .collect();
        out.extend(
            self.properties
                .iter()
                .filter(|p| !p.pass)
                .map(|p| format!("property {} failed: {}", p.name, p.detail.as_deref().unwrap_or(""))),
        );
        out
    }
}

fn names<E: Engine>(e: &E, ps: &[E::Point]) -> Vec<String> {
    ps.iter().map(|p| e.point_name(p)).collect()
}

fn do_flags(records: &[ClassRecord]) -> DoFlags {
    let seen = |f: &dyn Fn(&ClassRecord) -> bool| records.iter().any(f).then_some(true);
    DoFlags {
        trans0: seen(&|r| r.trans0.is_proved()),
        trans1: seen(&|r| r.trans1.is_proved()),
        trans2: seen(&|r| r.trans2.is_proved()),
        trans3: seen(&|r| r.trans3.is_proved()),
        three_n: seen(&|r| matches!(r.three_n, Index::Finite(_))),
        three_omega: seen(&|r| r.three_n == Index::Omega),
        three_omega_n: seen(&|r| matches!(r.omega_cover, CoverIndex::Families(_))),
        three_omega_omega: seen(&|r| r.omega_cover == CoverIndex::Omega),
    }
}

fn verdict_value(v: &Verdict) -> Value {
    Value::Status(match v {
        Verdict::Proved { .. } => Status::Proved,
        Verdict::Refuted { .. } => Status::Refuted,
        Verdict::Unknown { .. } => Status::Unknown,
    })
}

fn index_value(i: Index) -> Value {
    match i {
        Index::Finite(n) => Value::Count(n),
        Index::Omega => Value::Omega,
        Index::NotApplicable => Value::NotApplicable,
        Index::Unknown(_) => Value::Status(Status::Unknown),
    }
}

fn cover_value(c: CoverIndex) -> Value {
    match c {
        CoverIndex::Families(n) => Value::Count(n.get()),
        CoverIndex::Omega => Value::Omega,
        CoverIndex::NotApplicable => Value::NotApplicable,
        CoverIndex::Unknown(_) => Value::Status(Status::Unknown),
    }
}

fn point_verdict<'a>(r: &'a ClassRecord, key: &str) -> Option<&'a Verdict> {
    Some(match key {
        "legal" => &r.legal,
        "trans0" => &r.trans0,
        "trans1" => &r.trans1,
        "trans2" => &r.trans2,
        "trans3" => &r.trans3,
        "intrans" => &r.intransitive,
        _ => return None,
    })
}

fn point_value(r: &ClassRecord, key: &str) -> Option<Value> {
    match key {
        "three_n" => Some(index_value(r.three_n)),
        "omega_cover" => Some(cover_value(r.omega_cover)),
        _ => point_verdict(r, key).map(verdict_value),
    }
}

/// Checks one expectation against the classified points.
///
/// A set value lists exactly the classified points whose verdict is proved;
/// every other classified point must be refuted.
fn check(e: &Expect, records: &[ClassRecord], system: &SystemRecord, exact: Option<&BTreeMap<&str, Vec<String>>>) -> Outcome {
    let shown = e.to_string();
    let fail = |actual: String| Outcome { expect: shown.clone(), actual, pass: false };
    let actual = match (&e.at, e.key.as_str()) {
        (None, "sv") => Value::Status(if system.sv { Status::Proved } else { Status::Refuted }),
        (None, k) if k.starts_with("itrans") => {
            let i: usize = k[6..].parse().unwrap();
            verdict_value(&system.itrans[i])
        }
        (None, k) => {
            if let Some(sets) = exact {
                match sets.get(k) {
                    Some(s) => Value::Set(s.clone()),
                    None => return fail(format!("no set for `{k}`")),
                }
            } else {
                let mut members = vec![];
                let mut undecided = vec![];
                for r in records {
                    match point_verdict(r, k).map(Verdict::decided) {
                        Some(Some(true)) => members.push(r.point.clone()),
                        Some(Some(false)) => {}
                        Some(None) => undecided.push(r.point.clone()),
                        None => return fail(format!("`{k}` is not a point class")),
                    }
                }
                if !undecided.is_empty() {
                    return fail(format!("unknown at {{{}}}", undecided.join(",")));
                }
                if e.value == Value::All && members.len() == records.len() {
                    Value::All
                } else {
                    Value::Set(members)
                }
            }
        }
        (Some(p), k) => match records.iter().find(|r| &r.point == p).and_then(|r| point_value(r, k)) {
            Some(v) => v,
            None => return fail(format!("no `{k}` value at {p}")),
        },
    };
    let expected = match (&e.value, exact) {
        (Value::All, Some(_)) => Value::Set(records.iter().map(|r| r.point.clone()).collect()),
        (v, _) => v.clone(),
    };
    let pass = match (&expected, &actual) {
        (Value::Set(a), Value::Set(b)) => {
            let (mut a, mut b) = (a.clone(), b.clone());
            a.sort();
            b.sort();
            a == b
        }
        (a, b) => a == b,
    };
    Outcome { expect: shown, actual: actual.to_string(), pass }
}

fn finish(
    doc: &SystemDoc,
    params: Params,
    points: Vec<ClassRecord>,
    system: SystemRecord,
    sets: BTreeMap<&'static str, Vec<String>>,
    properties: Vec<PropertyResult>,
) -> Report {
    let exact = (!sets.is_empty()).then_some(&sets);
    let expectations: Vec<Outcome> = doc.expects.iter().map(|e| check(e, &points, &system, exact)).collect();
    let pass = expectations.iter().all(|o| o.pass) && properties.iter().all(|p| p.pass);
    Report {
        schema: SCHEMA,
        name: doc.name.clone(),
        engine: doc.body.kind(),
        params,
        points,
        system,
        sets,
        properties,
        expectations,
        pass,
    }
}

pub fn run_classify(doc: &SystemDoc, run: RunParams) -> Result<Report, Error> {
    let defaults = SegParams::default();
    let params = Params {
        depth: run.depth.or(doc.depth).unwrap_or(defaults.depth),
        net: run.net.or(doc.net).unwrap_or(defaults.net),
    };
    let at: Vec<&str> = doc.expects.iter().filter_map(|e| e.at.as_deref()).collect();
    match &doc.body {
        Body::Finite(sys) => {
            for p in &at {
                sys.index_of(p)?;
            }
            let points = (0..sys.len()).map(|x| classify_point(sys, x)).collect();
            let mut sets = BTreeMap::new();
            for (k, key) in ["trans0", "trans1", "trans2", "trans3"].into_iter().enumerate() {
                sets.insert(key, sys.names_of(&trans_set(sys, k)));
            }
            sets.insert("intrans", sys.names_of(&intrans_set(sys)));
            sets.insert("legal", sys.names_of(&legal_set(sys)));
            sets.insert("three_n", sys.names_of(&three_n_set(sys)));
            Ok(finish(doc, params, points, system_class(sys), sets, crosscheck_properties(sys)))
        }
        Body::Interval(r) => {
            let sp = SegParams { depth: params.depth, net: params.net, ..defaults };
            let mut xs = r.sample_points(SAMPLES);
            for p in &at {
                let x = doc.rational(p)?;
                if !xs.contains(&x) {
                    xs.push(x);
                }
            }
            let points: Vec<ClassRecord> = xs.iter().map(|x| seg_point_class(r, x, &sp)).collect();
            let wants = |k: &str| doc.expects.iter().any(|e| e.key == k);
            let system = SystemRecord {
                sv: r.is_sv(),
                do_flags: do_flags(&points),
                itrans: [
                    if wants("itrans0") {
                        seg_verdict(r, &SegQuery::System0Transitive, &sp)
                    } else {
                        Verdict::Unknown { depth: 0 }
                    },
                    Verdict::Unknown { depth: 0 },
                    if wants("itrans2") {
                        seg_verdict(r, &SegQuery::System2Transitive, &sp)
                    } else {
                        Verdict::Unknown { depth: 0 }
                    },
                ],
            };
            Ok(finish(doc, params, points, system, BTreeMap::new(), vec![]))
        }
        Body::SeqSpace(s) => {
            let h = s.abstraction();
            let mut xs: Vec<_> = (0..s.points().len()).map(SqPoint::Finite).collect();
            for a in 0..s.seqs().len() {
                xs.extend((0..=h.cut).map(|k| SqPoint::Term(a, k)));
            }
            for p in &at {
                let x = s.point_of(p)?;
                if !xs.contains(&x) {
                    xs.push(x);
                }
            }
            let sq = SqParams { depth: params.depth.max(SqParams::default().depth) };
            let points: Vec<ClassRecord> = xs.iter().map(|x| sq_point_class(s, x, &sq)).collect();
            debug_assert_eq!(names(s, &xs), points.iter().map(|r| r.point.clone()).collect::<Vec<_>>());
            let system = SystemRecord {
                sv: h.graph.is_sv(),
                do_flags: do_flags(&points),
                itrans: std::array::from_fn(|_| Verdict::Unknown { depth: 0 }),
            };
            Ok(finish(doc, params, points, system, BTreeMap::new(), vec![]))
        }
    }
}

/// The transitivity tree of `root` cut at `depth`, as DOT. Finite systems only.
pub fn export_dot(doc: &SystemDoc, root: &str, depth: usize) -> Result<String, Error> {
    match &doc.body {
        Body::Finite(sys) => {
            let x = sys.index_of(root)?;
            Ok(build_tree(sys, x, depth, TREE_CAP)?.to_dot(sys))
        }
        b => Err(Error::Invalid(format!("tree export needs a finite system, found {}", b.kind()))),
    }
}
