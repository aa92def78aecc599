use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crdyn::binstream::binstream_verify;
use crdyn::classify::{itrans0, itrans1, itrans2, trans_set, CoverCount, CoverIndex, Index};
use crdyn::corpus::{bit_strings, f1, f2, orbit_to_half};
use crdyn::doc::{parse_system, Body};
use crdyn::engine::Engine;
use crdyn::segment::verdict::{check_lasso, elementary_intervals};
use crdyn::segment::{q, seg_point_class, seg_verdict, Region, SegParams, SegQuery, SegRelation, Q};
use crdyn::seqspace::{sq_point_class, SeqSpace, SqParams};
use crdyn::suite::{oracle_disagreement, random_suite, random_system};
use crdyn::{FiniteSystem, Verdict, Witness};

type Check = Result<(), String>;
type Criterion = (&'static str, u64, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn finite(text: &str) -> FiniteSystem {
    match parse_system(text).unwrap().body {
        Body::Finite(s) => s,
        _ => unreachable!(),
    }
}

fn interval(text: &str) -> SegRelation {
    match parse_system(text).unwrap().body {
        Body::Interval(r) => r,
        _ => unreachable!(),
    }
}

fn seqspace(text: &str) -> SeqSpace {
    match parse_system(text).unwrap().body {
        Body::SeqSpace(s) => s,
        _ => unreachable!(),
    }
}

fn fixture(name: &str) -> &'static str {
    crdyn::corpus::fixture(name).unwrap()
}

fn names(sys: &FiniteSystem, k: usize) -> Vec<String> {
    sys.names_of(&trans_set(sys, k))
}

fn fx1() -> Check {
    let sys = finite(fixture("fx1"));
    let want = [vec!["1"], vec!["1"], vec!["1", "2"], vec!["1", "2"]];
    for (k, w) in want.iter().enumerate() {
        ensure(names(&sys, k) == *w, || format!("trans{k} = {:?}", names(&sys, k)))?;
    }
    Ok(())
}

fn fx2() -> Check {
    let sys = finite(fixture("fx2"));
    ensure(itrans2(&sys).is_proved(), || "itrans2 not proved".into())?;
    ensure(itrans1(&sys).is_refuted(), || "itrans1 not refuted".into())?;
    ensure(itrans0(&sys).is_refuted(), || "itrans0 not refuted".into())
}

fn fx3() -> Check {
    let sys = finite(fixture("fx3"));
    ensure(names(&sys, 1) == ["0"], || format!("trans1 = {:?}", names(&sys, 1)))?;
    ensure(names(&sys, 2) == ["0", "1", "2"], || format!("trans2 = {:?}", names(&sys, 2)))
}

fn fx4() -> Check {
    let r = interval(fixture("fx4"));
    let c = seg_point_class(&r, &q(0, 1), &SegParams::default());
    ensure(c.three_n == Index::Finite(1), || format!("three_n(0) = {:?}", c.three_n))?;
    let l = r.levels(&q(0, 1), 1);
    ensure(l.cumulative[1] == Region::full() && l.cumulative[0] != Region::full(), || "levels".into())
}

fn fx7() -> Check {
    for n in 0..=3usize {
        let r = interval(fixture(&format!("fx7_{n}")));
        let one = q(1, 1);
        let c = seg_point_class(&r, &one, &SegParams::default());
        ensure(c.three_n == Index::Finite(n + 2), || format!("n={n}: three_n(1) = {:?}", c.three_n))?;
        let l = r.levels(&one, n + 2);
        ensure(l.cumulative[n + 2] == Region::full(), || format!("n={n}: L*_{} = {}", n + 2, l.cumulative[n + 2]))?;
        ensure(l.cumulative[n + 1] != Region::full(), || format!("n={n}: L*_{} is full", n + 1))?;
        ensure(
            matches!(c.trans2, Verdict::Refuted { witness: Witness::BranchFinite { .. } }),
            || format!("n={n}: trans2 = {:?}", c.trans2),
        )?;
    }
    Ok(())
}

fn fx8() -> Check {
    for n in 1..=5usize {
        let s = seqspace(fixture(&format!("fx8_{n}")));
        let c = sq_point_class(&s, &s.point_of("1").unwrap(), &SqParams::default());
        let cover = CoverIndex::Families(CoverCount::new(n + 1).unwrap());
        ensure(c.trans3.is_proved(), || format!("n={n}: trans3 = {:?}", c.trans3))?;
        ensure(c.trans2.is_refuted(), || format!("n={n}: trans2 = {:?}", c.trans2))?;
        ensure(c.three_n == Index::Omega, || format!("n={n}: three_n = {:?}", c.three_n))?;
        ensure(c.omega_cover == cover, || format!("n={n}: omega_cover = {:?}", c.omega_cover))?;
    }
    Ok(())
}

/// Some `n ≤ depth` with `step^n(U) ∩ V ≠ ∅`, for every pair of net intervals.
fn net_pairs_covered(step: impl Fn(&Region) -> Region, net: u64, depth: usize) -> bool {
    let base = elementary_intervals(net);
    base.iter().all(|u| {
        let mut cur = u.clone();
        let mut missing: Vec<&Region> = base.iter().collect();
        for n in 0..=depth {
            missing.retain(|v| !cur.meets(v));
            if missing.is_empty() {
                return true;
            }
            if n < depth {
                cur = step(&cur);
            }
        }
        false
    })
}

fn tent_and_fx6() -> Check {
    let tent = interval(fixture("tent"));
    let p = SegParams { depth: 16, net: 4, ..SegParams::default() };
    let v = seg_verdict(&tent, &SegQuery::System2Transitive, &p);
    ensure(
        matches!(v, Verdict::Proved { witness: Witness::NetCover { net: 4, max_n, .. } } if max_n <= 16),
        || format!("tent: {v:?}"),
    )?;
    ensure(net_pairs_covered(|a| tent.image(a), 4, 16), || "tent: pair recheck failed".into())?;

    let fx6 = interval(fixture("fx6"));
    let p = SegParams { depth: 32, net: 4, ..SegParams::default() };
    let v = seg_verdict(&fx6, &SegQuery::System0Transitive, &p);
    ensure(v.is_proved(), || format!("fx6: {v:?}"))?;
    ensure(net_pairs_covered(|a| fx6.lower_preimage(a, 1), 4, 32), || "fx6: pair recheck failed".into())?;

    let inv = interval(fixture("fx6inv"));
    let t = fx6.transpose();
    ensure(inv.sample_points(32).iter().all(|x| inv.image_of(x) == t.image_of(x)), || {
        "fx6inv is not the transpose of fx6".into()
    })?;
    let half = q(1, 2);
    for x in inv.sample_points(16) {
        ensure(check_lasso(&inv, std::slice::from_ref(&x), std::slice::from_ref(&half)), || format!("no branch {x},1/2,1/2,..."))?;
        let v = seg_verdict(&inv, &SegQuery::PointTrans1(x.clone()), &SegParams::default());
        ensure(v.is_refuted(), || format!("fx6inv trans1 at {x}: {v:?}"))?;
    }
    Ok(())
}

fn fx10() -> Check {
    let r = interval(fixture("fx10"));
    let p = SegParams { depth: 2, ..SegParams::default() };
    for x in r.sample_points(16) {
        let t1 = seg_verdict(&r, &SegQuery::PointTrans1(x.clone()), &p);
        ensure(
            matches!(&t1, Verdict::Refuted { witness: Witness::Lasso { .. } | Witness::Avoiding { .. } }),
            || format!("trans1 at {x}: {t1:?}"),
        )?;
        let t2 = seg_verdict(&r, &SegQuery::PointTrans2(x.clone()), &p);
        ensure(
            matches!(&t2, Verdict::Proved { witness: Witness::Fiber { steps, .. } } if *steps <= 2),
            || format!("trans2 at {x}: {t2:?}"),
        )?;
    }
    Ok(())
}

fn oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..500 {
        let sys = random_system(&mut rng, 5);
        if let Some(d) = oracle_disagreement(&sys) {
            return Err(format!("case {i} {sys:?}: {d}"));
        }
    }
    Ok(())
}

fn theorem_suite() -> Check {
    let r = random_suite(10, 500, 6).map_err(|e| e.to_string())?;
    ensure(r.pass, || format!("{:?}", r.failures.first()))
}

fn stormy() -> Check {
    let half = q(1, 2);
    let mut count = 0;
    for qq in 1..=10u32 {
        let den = 1i64 << qq;
        for p in (1..=den).step_by(2) {
            let t = q(p, den);
            let f: fn(&Q) -> Q = if t < half { f1 } else { f2 };
            let o = orbit_to_half(f, &t, 2 * qq as usize).ok_or_else(|| format!("{p}/{den} does not reach 1/2"))?;
            ensure(o.windows(2).all(|w| w[1] == f(&w[0])), || format!("{p}/{den}: bad orbit"))?;
            ensure(o.len() <= 2 * qq as usize + 1, || format!("{p}/{den}: {} steps", o.len() - 1))?;
            count += 1;
        }
    }
    let o = orbit_to_half(f1, &q(3, 8), 6).unwrap();
    ensure(o == [q(3, 8), q(1, 4), half], || format!("orbit of 3/8: {o:?}"))?;
    ensure(count == 1023, || format!("{count} dyadics"))
}

/// Independent stream generator: blocks as strings, joined by the separator.
fn stream(sep: char, len: usize) -> Vec<u8> {
    let mut s = String::new();
    let mut w = 1;
    while s.len() < len {
        for v in 0..1u32 << w {
            if !s.is_empty() {
                s.push(sep);
            }
            s.push_str(&format!("{v:0w$b}"));
        }
        w += 1;
    }
    s.bytes().take(len).map(|b| b - b'0').collect()
}

fn binstream() -> Check {
    let bound = 100_000;
    let s0 = stream('0', bound + 8);
    let s1 = stream('1', bound + 8);
    for n in 0..=8 {
        for b in bit_strings(n) {
            let at = binstream_verify(&b, bound)
                .map_err(|e| e.to_string())?
                .ok_or_else(|| format!("no shift for {b:?}"))?;
            ensure(s0[at..at + n] == b[..] && s1[at..at + n] == b[..], || format!("shift {at} fails for {b:?}"))?;
            let earlier = (0..at).any(|i| s0[i..i + n] == b[..] && s1[i..i + n] == b[..]);
            ensure(!earlier, || format!("shift {at} is not minimal for {b:?}"))?;
        }
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("fx1 point classes", 1, fx1),
        ("fx2 system transitivity", 1, fx2),
        ("fx3 point classes", 1, fx3),
        ("fx4 three_n index", 1, fx4),
        ("fx7 staircase indices and certificates", 5, fx7),
        ("fx8 branch covers", 5, fx8),
        ("tent, fx6 and fx6 inverse certificates", 30, tent_and_fx6),
        ("fx10 branches and fibers", 5, fx10),
        ("oracle equivalence on 500 systems", 60, oracle),
        ("theorem suite on 500 systems", 120, theorem_suite),
        ("dyadic orbits reach 1/2", 5, stormy),
        ("binary stream common shifts", 30, binstream),
    ];
    let mut failed = vec![];
    for (i, (name, secs, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = result.and_then(|()| {
            ensure(took < Duration::from_secs(*secs), || format!("took {took:?}, limit {secs}s"))
        });
        match &result {
            Ok(()) => println!("criterion {:>2}: PASS {name} ({took:.2?})", i + 1),
            Err(e) => {
                println!("criterion {:>2}: FAIL {name} ({took:.2?}): {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
