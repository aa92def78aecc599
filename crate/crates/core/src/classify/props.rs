//! Property checks evaluated on a finite system.

use serde::Serialize;
use std::collections::HashSet;

use super::{
    formula_trans0, formula_trans1, formula_trans3, image_union, intrans_set, itrans0, itrans1, itrans2,
    lower_preimage_union, preimage_union, three_n_index, three_n_set, trans_set, Index,
};
use crate::relation::{FiniteSystem, PointSet};
use crate::tree::{equiv_class, legal_set, reach_star};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

struct Facts<'a> {
    sys: &'a FiniteSystem,
    full: PointSet,
    legal: PointSet,
    trans: [PointSet; 4],
    intrans: PointSet,
    itrans: [bool; 3],
}

impl<'a> Facts<'a> {
    fn new(sys: &'a FiniteSystem) -> Self {
        Facts {
            sys,
            full: sys.full_set(),
            legal: legal_set(sys),
            trans: std::array::from_fn(|k| trans_set(sys, k)),
            intrans: intrans_set(sys),
            itrans: [itrans0(sys).is_proved(), itrans1(sys).is_proved(), itrans2(sys).is_proved()],
        }
    }

    fn show(&self, a: &PointSet) -> String {
        format!("{{{}}}", self.sys.names_of(a).join(","))
    }
}

type Check = fn(&Facts) -> Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn containment_chain(f: &Facts) -> Result<(), String> {
    for k in 0..3 {
        ensure(f.trans[k].is_subset(&f.trans[k + 1]), || {
            format!("trans{k} = {} not inside trans{} = {}", f.show(&f.trans[k]), k + 1, f.show(&f.trans[k + 1]))
        })?;
    }
    Ok(())
}

fn legal_partition(f: &Facts) -> Result<(), String> {
    let mut u = f.trans[3].clone();
    u.union_with(&f.intrans);
    ensure(u == f.legal && f.trans[3].is_disjoint(&f.intrans), || {
        format!("legal {} vs trans3 {} + intrans {}", f.show(&f.legal), f.show(&f.trans[3]), f.show(&f.intrans))
    })
}

fn transitive_points_forbid_illegal(f: &Facts) -> Result<(), String> {
    for k in 0..4 {
        ensure(f.trans[k].is_clear() || f.legal == f.full, || {
            format!("trans{k} = {} but illegal points exist", f.show(&f.trans[k]))
        })?;
    }
    Ok(())
}

fn isolated_point_reaches_trans2(f: &Facts) -> Result<(), String> {
    if f.trans[2].is_clear() {
        return Ok(());
    }
    let inv = f.sys.inverse();
    let found = f.trans[2].ones().any(|x| reach_star(&inv, x) == f.trans[2]);
    ensure(found && f.trans[2] == f.trans[3], || {
        format!("trans2 = {}, trans3 = {}", f.show(&f.trans[2]), f.show(&f.trans[3]))
    })
}

fn backward_propagation(f: &Facts) -> Result<(), String> {
    for k in [2, 3] {
        for (x, y) in f.sys.edges() {
            ensure(!f.trans[k].contains(y) || f.trans[k].contains(x), || {
                format!("({},{}) with {} in trans{k}", f.sys.name(x), f.sys.name(y), f.sys.name(y))
            })?;
        }
    }
    Ok(())
}

fn no_three_n_beside_trans2(f: &Facts) -> Result<(), String> {
    if f.trans[2].is_clear() {
        return Ok(());
    }
    let t3n = three_n_set(f.sys);
    ensure(t3n.is_clear() && f.trans[2] == f.trans[3], || format!("(3,n) points {}", f.show(&t3n)))
}

fn three_n_union_not_dense(f: &Facts) -> Result<(), String> {
    let t3n = three_n_set(f.sys);
    ensure(t3n != f.full, || "every point is (3,n)".into())
}

fn reach_inside_trans3(f: &Facts) -> Result<(), String> {
    for x in 0..f.sys.len() {
        let r = reach_star(f.sys, x);
        ensure(!r.is_subset(&f.trans[3]) || f.trans[2].contains(x), || {
            format!("reach({}) inside trans3 but not 2-transitive", f.sys.name(x))
        })?;
    }
    Ok(())
}

fn symmetric_relation(f: &Facts) -> Result<(), String> {
    ensure(!f.sys.is_symmetric() || f.trans[2] == f.trans[3], || "G = G⁻¹ but trans2 ≠ trans3".into())
}

fn inverse_trans3(f: &Facts) -> Result<(), String> {
    let inv3 = trans_set(&f.sys.inverse(), 3);
    ensure(inv3 != f.trans[3] || f.trans[2] == f.trans[3], || {
        format!("trans3(G) = trans3(G⁻¹) = {} but trans2 = {}", f.show(&inv3), f.show(&f.trans[2]))
    })
}

fn equivalence_classes(f: &Facts) -> Result<(), String> {
    for x in 0..f.sys.len() {
        let class = equiv_class(f.sys, x);
        let name = f.sys.name(x);
        for k in [2, 3] {
            ensure(!f.trans[k].contains(x) || class.is_subset(&f.trans[k]), || {
                format!("[{name}] = {} not inside trans{k}", f.show(&class))
            })?;
        }
        if class == f.full {
            ensure(class.is_subset(&f.trans[2]), || format!("[{name}] dense but not inside trans2"))?;
        }
        ensure(f.trans[2].contains(x) || class != f.full, || format!("[{name}] dense, {name} not in trans2"))?;
    }
    Ok(())
}

fn pairs_hold(n: usize, test: impl Fn(usize, usize) -> bool) -> bool {
    (0..n).all(|u| (0..n).all(|v| test(u, v)))
}

fn two_transitivity_items(f: &Facts) -> Result<(), String> {
    let s = f.sys;
    let n = s.len();
    let inv = s.inverse();
    let single = |u| s.singleton(u);
    let fwd = |u, v, from| (from..=n).any(|k| s.power_image(u, k).contains(v));
    let bwd = |u, v, from| (from..=n).any(|k| s.back_image(u, k).contains(v));
    let items = [
        pairs_hold(n, |u, v| fwd(u, v, 0)),
        pairs_hold(n, |u, v| fwd(u, v, 1)),
        (0..n).all(|u| image_union(s, &single(u), 0) == f.full),
        (0..n).all(|u| image_union(s, &single(u), 1) == f.full),
        pairs_hold(n, |u, v| bwd(u, v, 0)),
        pairs_hold(n, |u, v| bwd(u, v, 1)),
        (0..n).all(|u| preimage_union(s, &single(u), 0) == f.full),
        (0..n).all(|u| image_union(&inv, &single(u), 1) == f.full),
    ];
    ensure(items[0] == f.itrans[2], || "item (1) disagrees with the classifier".into())?;
    groups_agree(&items)
}

fn groups_agree(items: &[bool; 8]) -> Result<(), String> {
    for group in [[0, 2, 4, 6], [1, 3, 5, 7]] {
        let first = items[group[0]];
        ensure(group.iter().all(|&i| items[i] == first), || {
            let shown: Vec<String> = group.iter().map(|&i| format!("({})={}", i + 1, items[i])).collect();
            shown.join(" ")
        })?;
    }
    Ok(())
}

/// Least `n ≥ from` with `Gⁿ(x) ⊆ target` and `Gⁿ(x) ≠ ∅`, scanning levels until one repeats.
fn level_inside(s: &FiniteSystem, x: usize, target: &PointSet, from: usize) -> bool {
    let mut cur = s.power_image(x, from);
    let mut seen = HashSet::new();
    while seen.insert(cur.clone()) {
        if !cur.is_clear() && cur.is_subset(target) {
            return true;
        }
        cur = s.image(&cur);
    }
    false
}

/// `G⁻ⁿ[A] ∋ v` for some `n ≥ from`, scanning lower preimages until one repeats.
fn lower_hits(s: &FiniteSystem, a: &PointSet, v: usize, from: usize) -> bool {
    let mut cur = s.lower_preimage(a, from);
    let mut seen = HashSet::new();
    while seen.insert(cur.clone()) {
        if cur.contains(v) {
            return true;
        }
        cur = s.lower_preimage(&cur, 1);
    }
    false
}

fn zero_transitivity_items(f: &Facts) -> Result<(), String> {
    let s = f.sys;
    if !s.is_sv() {
        return Ok(());
    }
    let n = s.len();
    let single = |u| s.singleton(u);
    let mut meet = f.full.clone();
    for u in 0..n {
        meet.intersect_with(&lower_preimage_union(s, &single(u), 1));
    }
    let items = [
        f.itrans[0],
        pairs_hold(n, |u, v| level_inside(s, u, &single(v), 1)),
        pairs_hold(n, |u, v| lower_hits(s, &single(u), v, 0)),
        pairs_hold(n, |u, v| lower_hits(s, &single(u), v, 1)),
        (0..n).all(|u| lower_preimage_union(s, &single(u), 0) == f.full),
        (0..n).all(|u| lower_preimage_union(s, &single(u), 1) == f.full),
        f.trans[0] == f.full,
        meet == f.full,
    ];
    groups_agree(&items)
}

fn transitive_iff_full(f: &Facts) -> Result<(), String> {
    for k in [0, 1] {
        ensure(f.itrans[k] == (f.trans[k] == f.full), || {
            format!("itrans{k} = {} but trans{k} = {}", f.itrans[k], f.show(&f.trans[k]))
        })?;
    }
    Ok(())
}

fn two_transitive_is_surjective(f: &Facts) -> Result<(), String> {
    ensure(!f.itrans[2] || (f.sys.nondegenerate() == f.full && f.sys.range() == f.full), || {
        "2-transitive with a point outside π₀ or π₁".into()
    })
}

fn sv_two_transitive_iff_trans3_full(f: &Facts) -> Result<(), String> {
    ensure(!f.sys.is_sv() || f.itrans[2] == (f.trans[3] == f.full), || {
        format!("SV, itrans2 = {}, trans3 = {}", f.itrans[2], f.show(&f.trans[3]))
    })
}

fn nonempty_trans2_dense_iff_transitive(f: &Facts) -> Result<(), String> {
    if f.trans[2].is_clear() {
        return Ok(());
    }
    let a = f.itrans[2];
    let b = f.trans[2] == f.full;
    let c = f.trans[3] == f.full;
    ensure(a == b && b == c, || format!("itrans2 = {a}, trans2 dense = {b}, trans3 dense = {c}"))
}

fn formulas_match(f: &Facts) -> Result<(), String> {
    let s = f.sys;
    let f0 = formula_trans0(s);
    ensure(f0 == f.trans[0], || format!("formula0 {} vs trans0 {}", f.show(&f0), f.show(&f.trans[0])))?;
    let mut f1 = formula_trans1(s);
    f1.intersect_with(&f.legal);
    ensure(f1 == f.trans[1], || format!("formula1 {} vs trans1 {}", f.show(&f1), f.show(&f.trans[1])))?;
    if s.is_sv() {
        let f3 = formula_trans3(s);
        ensure(f3 == f.trans[3], || format!("formula3 {} vs trans3 {}", f.show(&f3), f.show(&f.trans[3])))?;
    }
    Ok(())
}

fn no_three_omega(f: &Facts) -> Result<(), String> {
    for x in 0..f.sys.len() {
        ensure(three_n_index(f.sys, x) != Index::Omega, || format!("{} is (3,ω)", f.sys.name(x)))?;
    }
    Ok(())
}

fn implication_chains(f: &Facts) -> Result<(), String> {
    for k in 0..3 {
        ensure(f.trans[k].is_clear() || !f.trans[k + 1].is_clear(), || format!("{k}-DO but not {}-DO", k + 1))?;
    }
    ensure(!f.itrans[0] || f.itrans[1], || "0-transitive but not 1-transitive".into())?;
    ensure(!f.itrans[1] || f.itrans[2], || "1-transitive but not 2-transitive".into())
}

const CHECKS: &[(&str, Check)] = &[
    ("containment_chain", containment_chain),
    ("legal_partition", legal_partition),
    ("transitive_points_forbid_illegal", transitive_points_forbid_illegal),
    ("isolated_point_reaches_trans2", isolated_point_reaches_trans2),
    ("backward_propagation", backward_propagation),
    ("no_three_n_beside_trans2", no_three_n_beside_trans2),
    ("three_n_union_not_dense", three_n_union_not_dense),
    ("reach_inside_trans3", reach_inside_trans3),
    ("symmetric_relation", symmetric_relation),
    ("inverse_trans3", inverse_trans3),
    ("equivalence_classes", equivalence_classes),
    ("two_transitivity_items", two_transitivity_items),
    ("zero_transitivity_items", zero_transitivity_items),
    ("transitive_iff_full", transitive_iff_full),
    ("two_transitive_is_surjective", two_transitive_is_surjective),
    ("sv_two_transitive_iff_trans3_full", sv_two_transitive_iff_trans3_full),
    ("nonempty_trans2_dense_iff_transitive", nonempty_trans2_dense_iff_transitive),
    ("formulas_match", formulas_match),
    ("no_three_omega", no_three_omega),
    ("implication_chains", implication_chains),
];

pub fn property_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

pub fn crosscheck_properties(sys: &FiniteSystem) -> Vec<PropertyResult> {
    let facts = Facts::new(sys);
    CHECKS
        .iter()
        .map(|(name, check)| match check(&facts) {
            Ok(()) => PropertyResult { name, pass: true, detail: None },
            Err(d) => PropertyResult { name, pass: false, detail: Some(d) },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_pass(sys: &FiniteSystem) {
        for r in crosscheck_properties(sys) {
            assert!(r.pass, "{}: {:?}", r.name, r.detail);
        }
    }

    #[test]
    fn fixtures_pass() {
        all_pass(&FiniteSystem::new(&["1", "2"], &[("1", "2"), ("2", "1"), ("2", "2")]).unwrap());
        all_pass(&FiniteSystem::new(&["0", "1"], &[("0", "0"), ("1", "0"), ("0", "1")]).unwrap());
        all_pass(&FiniteSystem::new(&["a", "b"], &[("a", "b")]).unwrap());
    }

    #[test]
    fn fx1_shows_propagation_fails_below_two() {
        let s = FiniteSystem::new(&["1", "2"], &[("1", "2"), ("2", "1"), ("2", "2")]).unwrap();
        for k in [0, 1] {
            let t = trans_set(&s, k);
            assert!(t.contains(0) && s.has_edge(1, 0) && !t.contains(1));
        }
    }
}
