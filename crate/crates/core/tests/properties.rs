use proptest::prelude::*;

use crdyn::classify::oracle::{bf_point_class, BF_BOUND};
use crdyn::classify::props::crosscheck_properties;
use crdyn::classify::{classify_point, trans_set};
use crdyn::doc::{parse_system, print_system, Body, SystemDoc};
use crdyn::engine::Engine;
use crdyn::segment::{q, Region, SegRelation, Segment, Q};
use crdyn::seqspace::{Rule, SeqSpace, Sequence, SqPoint, TailSet};
use crdyn::FiniteSystem;

fn rational(den: i64) -> impl Strategy<Value = Q> {
    (0..=den).prop_map(move |n| q(n, den))
}

fn small_q() -> impl Strategy<Value = Q> {
    prop_oneof![rational(2), rational(3), rational(4), rational(6), rational(8)]
}

fn interval() -> impl Strategy<Value = Region> {
    (small_q(), small_q(), any::<bool>(), any::<bool>()).prop_map(|(a, b, lc, hc)| {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Region::interval(lo, hi, lc, hc)
    })
}

fn region() -> impl Strategy<Value = Region> {
    prop::collection::vec(interval(), 0..4).prop_map(|v| v.iter().fold(Region::empty(), |a, r| a.union(r)))
}

fn segment() -> impl Strategy<Value = Segment> {
    (small_q(), small_q(), small_q(), small_q()).prop_map(|(a, b, c, d)| Segment::new((a, b), (c, d)).unwrap())
}

fn seg_relation() -> impl Strategy<Value = SegRelation> {
    prop::collection::vec(segment(), 1..4).prop_map(|s| SegRelation::new(s).unwrap())
}

fn finite_system(max: usize) -> impl Strategy<Value = FiniteSystem> {
    (1..=max)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(any::<bool>(), n * n)))
        .prop_filter_map("empty relation", |(n, bits)| {
            let edges: Vec<_> = (0..n * n).filter(|&i| bits[i]).map(|i| (i / n, i % n)).collect();
            FiniteSystem::from_indices(n, &edges).ok()
        })
}

fn probes() -> Vec<Q> {
    (0..=24).map(|n| q(n, 24)).chain([q(1, 7), q(5, 7), q(1, 5)]).collect()
}

proptest! {
    #[test]
    fn region_boolean_laws(a in region(), b in region(), c in region()) {
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.intersect(&b), b.intersect(&a));
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert_eq!(a.union(&b).complement(), a.complement().intersect(&b.complement()));
        prop_assert_eq!(a.intersect(&b.union(&c)), a.intersect(&b).union(&a.intersect(&c)));
        prop_assert_eq!(a.closure().closure(), a.closure());
        prop_assert!(a.is_subset(&a.closure()));
        for x in probes() {
            prop_assert_eq!(a.union(&b).contains(&x), a.contains(&x) || b.contains(&x));
            prop_assert_eq!(a.complement().contains(&x), !a.contains(&x));
        }
    }

    #[test]
    fn image_and_preimage_are_adjoint(r in seg_relation(), a in region(), b in region()) {
        prop_assert_eq!(r.image(&a).meets(&b), a.meets(&r.preimage(&b)));
        prop_assert_eq!(r.transpose().transpose(), r.clone());
    }

    #[test]
    fn image_is_pointwise(r in seg_relation(), a in region()) {
        let img = r.image(&a);
        for y in probes() {
            let hit = r.preimage(&Region::point(y.clone())).meets(&a);
            prop_assert_eq!(img.contains(&y), hit, "y = {}", y);
        }
    }

    #[test]
    fn lower_preimage_is_containment(r in seg_relation(), b in region()) {
        let low = r.lower_preimage(&b, 1);
        prop_assert_eq!(low.clone(), r.preimage(&b.complement()).complement());
        for x in probes() {
            prop_assert_eq!(low.contains(&x), r.image_of(&x).is_subset(&b), "x = {}", x);
        }
    }

    /// Point segments on a grid behave exactly like the finite relation on
    /// the grid.
    #[test]
    fn grid_relations_match_finite_systems(sys in finite_system(5), pick in prop::collection::vec(any::<bool>(), 5)) {
        let n = sys.len();
        let grid = |i: usize| q(i as i64 + 1, n as i64 + 1);
        let segs = sys.edges().into_iter().map(|(a, b)| Segment::new((grid(a), grid(b)), (grid(a), grid(b))).unwrap()).collect();
        let r = SegRelation::new(segs).unwrap();
        let chosen: Vec<usize> = (0..n).filter(|&i| pick[i]).collect();
        let region = Region::points(chosen.iter().map(|&i| grid(i)));
        let image = sys.image(&sys.set_of(chosen.iter().copied()));
        prop_assert_eq!(r.image(&region), Region::points(image.ones().map(grid)));
        let pre = sys.preimage(&sys.set_of(chosen.iter().copied()));
        prop_assert_eq!(r.preimage(&region), Region::points(pre.ones().map(grid)));
    }

    #[test]
    fn classifier_matches_oracle(sys in finite_system(5)) {
        for x in 0..sys.len() {
            let fast = classify_point(&sys, x);
            let slow = bf_point_class(&sys, x, BF_BOUND).unwrap();
            for k in 0..4 {
                prop_assert_eq!(fast.trans(k).decided(), slow.trans(k).decided(), "trans{} at {} in {:?}", k, x, sys);
            }
        }
    }

    #[test]
    fn theorem_suite_holds(sys in finite_system(6)) {
        for p in crosscheck_properties(&sys) {
            prop_assert!(p.pass, "{} on {:?}: {:?}", p.name, sys, p.detail);
        }
    }

    #[test]
    fn containment_chain(sys in finite_system(6)) {
        for k in 0..3 {
            prop_assert!(trans_set(&sys, k).is_subset(&trans_set(&sys, k + 1)));
        }
    }

    #[test]
    fn symmetric_systems_have_equal_trans2_and_trans3(sys in finite_system(6)) {
        let s = sys.symmetrized();
        prop_assert_eq!(trans_set(&s, 2), trans_set(&s, 3));
    }

    #[test]
    fn finite_documents_roundtrip(sys in finite_system(6)) {
        let doc = SystemDoc { name: None, depth: None, net: None, body: Body::Finite(sys), expects: vec![] };
        let text = print_system(&doc);
        prop_assert_eq!(parse_system(&text).unwrap(), doc);
    }

    #[test]
    fn tailset_union_distributes(
        a in tailset(), b in tailset(), c in tailset()
    ) {
        prop_assert_eq!(a.intersect(&b.union(&c)), a.intersect(&b).union(&a.intersect(&c)));
        prop_assert_eq!(a.union(&b.intersect(&c)), a.union(&b).intersect(&a.union(&c)));
        let s = shift_space();
        prop_assert_eq!(s.image(&a.union(&b)), s.image(&a).union(&s.image(&b)));
        prop_assert_eq!(s.complement(&s.complement(&a)), a.clone());
        for k in 0..12 {
            let p = SqPoint::Term(0, k);
            prop_assert_eq!(a.union(&b).contains(&p), a.contains(&p) || b.contains(&p));
        }
    }
}

fn tailset() -> impl Strategy<Value = TailSet> {
    (prop::collection::vec(0u64..10, 0..4), prop::option::of(0u64..10), any::<bool>()).prop_map(|(terms, tail, lim)| {
        let mut pts: Vec<SqPoint> = terms.into_iter().map(|k| SqPoint::Term(0, k)).collect();
        if lim {
            pts.push(SqPoint::Finite(0));
        }
        let tails: Vec<(usize, u64)> = tail.into_iter().map(|t| (0, t)).collect();
        TailSet::new(pts, &tails)
    })
}

fn shift_space() -> SeqSpace {
    SeqSpace::new(
        vec!["0".into()],
        vec![Sequence { name: "x".into(), limit: 0 }],
        vec![
            Rule::Pair(SqPoint::Finite(0), SqPoint::Finite(0)),
            Rule::Pair(SqPoint::Term(0, 0), SqPoint::Term(0, 3)),
            Rule::TailToTail { a: 0, b: 0, shift: 1, from: 1 },
        ],
    )
    .unwrap()
}
