//! Structural invariants over randomly ramified Hopf quivers.

use std::collections::BTreeMap;

use proptest::prelude::*;
use serde_json::json;

use lqhopf::bimodules::{canonical_bimodule, dualize_bimodule};
use lqhopf::braidmod::{braiding_matrix, check_module, conjugation_module, trivial_module};
use lqhopf::cli::instance::{build_instance, Instance, InstanceSpec};
use lqhopf::exactlin::{Field, SparseMatrix};
use lqhopf::gradedhopf::{cotensor_hopf, duality_check, tensor_hopf, verify_hopf};
use lqhopf::lqt::verify_lqt;
use lqhopf::quivers::{build_hopf_quiver, conjugacy_classes, FiniteGroup, Ramification};

const GROUPS: [&str; 5] = ["Z1", "Z2", "Z3", "Z4", "V4"];

/// Arrow counts per conjugacy class, or None when there are no arrows or more than `cap`.
fn ramification(group: usize, counts: &[u32], cap: u32) -> Option<(FiniteGroup, Vec<(u32, u32)>)> {
    let g = FiniteGroup::builtin(GROUPS[group]).unwrap();
    let entries: Vec<(u32, u32)> = conjugacy_classes(&g)
        .iter()
        .zip(counts.iter().cycle())
        .filter(|(_, &k)| k > 0)
        .map(|(c, &k)| (c[0], k))
        .collect();
    let arrows: u32 = conjugacy_classes(&g).iter().zip(counts.iter().cycle()).map(|(c, &k)| c.len() as u32 * k).sum();
    (arrows > 0 && arrows <= cap).then_some((g, entries))
}

/// Keeps D small enough for dense structure tables.
const ARROW_CAP: u32 = 4;

fn random_instance(group: usize, counts: &[u32], variant: &str, top: u32, level: u32) -> Option<Instance> {
    let (g, entries) = ramification(group, counts, ARROW_CAP)?;
    let ram: BTreeMap<String, u32> = entries.iter().map(|&(x, k)| (g.label(x).to_string(), k)).collect();
    let spec: InstanceSpec = serde_json::from_value(json!({
        "group": GROUPS[group],
        "ramification": ram,
        "max_degree": top,
        "level": level,
        "variant": variant,
    }))
    .unwrap();
    Some(build_instance(&spec).unwrap_or_else(|e| panic!("build {spec:?}: {e}")))
}

fn arb_case() -> impl Strategy<Value = (usize, Vec<u32>, &'static str)> {
    (0..GROUPS.len(), prop::collection::vec(0u32..=2, 4), prop::sample::select(vec!["i", "ii"]))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn double_is_a_hopf_algebra((group, counts, variant) in arb_case()) {
        let Some(inst) = random_instance(group, &counts, variant, 2, 0) else { return Ok(()) };
        let dcp = &inst.structure.dcp;
        for alg in [&dcp.a, &dcp.h, &dcp.d] {
            let r = verify_hopf(alg);
            prop_assert!(r.failures().is_empty(), "{}: {:?}", r.algebra, r.failures().first().map(|f| &f.witness));
        }
    }

    #[test]
    fn tensor_and_cotensor_are_dual((group, counts, _variant) in arb_case()) {
        let Some((g, entries)) = ramification(group, &counts, ARROW_CAP) else { return Ok(()) };
        let q = build_hopf_quiver(g.clone(), Ramification::new(&g, &entries).unwrap());
        let m = dualize_bimodule(&canonical_bimodule(&q, Field::Rational).unwrap());
        let t = tensor_hopf(&m, 3).unwrap();
        let c = cotensor_hopf(&dualize_bimodule(&m), 3).unwrap();
        let r = duality_check(&t, &c).unwrap();
        prop_assert!(r.failures().is_empty(), "{:?}", r.failures().first().map(|f| &f.witness));
    }

    #[test]
    fn lqt_axioms_hold_at_levels_zero_and_one((group, counts, variant) in arb_case()) {
        let Some(inst) = random_instance(group, &counts, variant, 2, 1) else { return Ok(()) };
        for n in [0, 1] {
            let r = verify_lqt(&inst.structure, n).unwrap();
            let bad = r.projected.iter().find(|c| !c.passed());
            prop_assert!(bad.is_none(), "n={n}: {:?}", bad.map(|c| (&c.axiom, &c.witness)));
        }
    }

    #[test]
    fn braidings_are_invertible_and_unital((group, counts, variant) in arb_case()) {
        let Some(inst) = random_instance(group, &counts, variant, 1, 0) else { return Ok(()) };
        let s = &inst.structure;
        let g = FiniteGroup::builtin(GROUPS[group]).unwrap();
        let triv = trivial_module(&s.dcp);
        let conj = conjugation_module(&s.dcp, &g).unwrap();
        prop_assert!(check_module(&conj, &s.dcp).passed());
        let c = braiding_matrix(s, &conj, &conj).unwrap();
        let n = conj.dim() * conj.dim();
        prop_assert_eq!(c.matrix.mul(&c.inverse).unwrap(), SparseMatrix::identity(c.matrix.field, n));
        let t = braiding_matrix(s, &triv, &conj).unwrap();
        prop_assert!(t.matrix.is_identity(), "braiding with the unit object is the flip");
    }
}
