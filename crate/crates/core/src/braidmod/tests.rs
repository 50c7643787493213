use super::*;
use crate::exactlin::Comb;
use crate::bimodules::{canonical_bimodule, default_characters, dualize_bimodule, example_bimodule, HopfBimoduleData};
use crate::lqt::{build_lqt, LqtStructure, UnitVariant};
use crate::quivers::{build_hopf_quiver, Ramification};

fn s3() -> FiniteGroup {
    FiniteGroup::symmetric(3)
}

fn el(g: &FiniteGroup, label: &str) -> u32 {
    g.elements().find(|x| g.label(*x) == label).unwrap()
}

/// Zero ramification: D = D_0. `dual` picks A_0 = (kG)*.
fn bare(g: &FiniteGroup, dual: bool) -> LqtStructure {
    let q = build_hopf_quiver(g.clone(), Ramification::new(g, &[]).unwrap());
    let m = canonical_bimodule(&q, Field::Rational).unwrap();
    let m = if dual { dualize_bimodule(&m) } else { m };
    build_lqt(&m, 0, 0, UnitVariant::Unit).unwrap()
}

fn example(top: u32) -> LqtStructure {
    let g = FiniteGroup::cyclic(2);
    let q = build_hopf_quiver(g.clone(), Ramification::new(&g, &[(0, 3)]).unwrap());
    let m: HopfBimoduleData = example_bimodule(&q, Field::Rational, &default_characters(Field::Rational)).unwrap();
    build_lqt(&dualize_bimodule(&m), top, top, UnitVariant::Unit).unwrap()
}

fn basis_vec(f: Field, n: usize, i: usize) -> Vec<Scalar> {
    (0..n).map(|k| if k == i { f.one() } else { f.zero() }).collect()
}

fn image(c: &SparseMatrix, col: usize) -> Vec<(usize, Scalar)> {
    let v = c.apply(&basis_vec(c.field, c.cols, col)).unwrap();
    v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()
}

#[test]
fn trivial_module_passes_everywhere() {
    let s = example(2);
    let t = trivial_module(&s.dcp);
    let r = check_module(&t, &s.dcp);
    assert!(r.passed(), "{:?}", r.checks);
    let c = braiding_matrix(&s, &t, &t).unwrap();
    assert!(c.matrix.is_identity());
    assert_eq!(c.levels, vec![1]);
}

#[test]
fn conjugation_modules_are_valid() {
    let g = s3();
    for dual in [true, false] {
        let s = bare(&g, dual);
        let c = conjugation_module(&s.dcp, &g).unwrap();
        assert_eq!(c.dim(), 6);
        assert!(!c.degree_zero_only);
        let r = check_module(&c, &s.dcp);
        assert!(r.passed(), "{:?}", r.checks);
        let t = class_module(&s.dcp, &g, el(&g, "213")).unwrap();
        assert_eq!(t.dim(), 3);
        assert!(check_module(&t, &s.dcp).passed());
    }
}

#[test]
fn incompatible_grading_is_rejected() {
    let g = s3();
    let s = bare(&g, true);
    let f = Field::Rational;
    // the permutation action on a line graded by a transposition
    let sign: Vec<Scalar> = g.elements().map(|_| f.one()).collect();
    let err = character_module(&s.dcp, &g, el(&g, "213"), &sign).unwrap_err();
    assert!(matches!(err, BraidError::Compatibility(_)), "{err}");
    assert!(character_module(&s.dcp, &g, g.identity(), &sign).is_ok());
}

#[test]
fn degree_zero_braiding_on_conjugation_module() {
    let g = s3();
    let n = g.order() as usize;
    for dual in [true, false] {
        let s = bare(&g, dual);
        let m = conjugation_module(&s.dcp, &g).unwrap();
        let c = braiding_matrix(&s, &m, &m).unwrap();
        assert_eq!(c.level(), 0);
        for a in g.elements() {
            for b in g.elements() {
                let (x, y) = if dual { (b, g.conj(b, a)) } else { (g.conj(a, b), a) };
                let got = image(&c.matrix, a as usize * n + b as usize);
                assert_eq!(got, vec![(x as usize * n + y as usize, Field::Rational.one())], "dual={dual}");
            }
        }
        assert!(c.inverse.mul(&c.matrix).unwrap().is_identity());
    }
}

#[test]
fn abelian_conjugation_braids_by_flip() {
    let g = FiniteGroup::cyclic(2);
    let s = bare(&g, true);
    let m = conjugation_module(&s.dcp, &g).unwrap();
    let c = braiding_matrix(&s, &m, &m).unwrap();
    for a in 0..2 {
        for b in 0..2 {
            assert_eq!(image(&c.matrix, a * 2 + b), vec![(b * 2 + a, Field::Rational.one())]);
        }
    }
}

#[test]
fn braid_relation_on_s3_modules() {
    let g = s3();
    for dual in [true, false] {
        let s = bare(&g, dual);
        let class = class_module(&s.dcp, &g, el(&g, "213")).unwrap();
        let c = braiding_matrix(&s, &class, &class).unwrap();
        let r = check_braid_relation(&c, &c, &c);
        assert!(r.passed(), "{r:?}");
        assert_eq!(c.matrix.rows * class.dim(), 27);

        let conj = conjugation_module(&s.dcp, &g).unwrap();
        let cc = braiding_matrix(&s, &conj, &conj).unwrap();
        assert!(check_braid_relation(&cc, &cc, &cc).passed());
        let ck = braiding_matrix(&s, &conj, &class).unwrap();
        let kc = braiding_matrix(&s, &class, &conj).unwrap();
        assert!(check_braid_relation(&cc, &ck, &ck).passed());
        assert!(check_braid_relation(&kc, &kc, &cc).passed());

        let mut bad = c.clone();
        let v = bad.matrix.get(0, 0).add(&Field::Rational.one());
        bad.matrix.set(0, 0, v);
        assert!(!check_braid_relation(&bad, &bad, &bad).passed());
    }
}

#[test]
fn extension_by_zero_breaks_the_cross_relations() {
    let s = example(2);
    let g = FiniteGroup::cyclic(2);
    let m = conjugation_module(&s.dcp, &g).unwrap();
    assert!(m.degree_zero_only);
    assert!(check_module(&m, &s.dcp).passed());
    let ext = m.extend_by_zero(2);
    let r = check_module(&ext, &s.dcp);
    let mult = r.check("multiplicative").unwrap();
    assert!(!mult.passed());
    assert!(r.check("finite-cycles").unwrap().passed());

    // (1⊗h)(a⊗1) with h = a the sign-twisted loop at g: a degree-0 term appears
    let dcp = &s.dcp;
    let arrow = dcp.a.find_label("a[g1->g1;3]").unwrap();
    let harrow = dcp.h.find_label("a[g1->g1;3]").unwrap();
    assert!(dcp.tau.tau(harrow, arrow).is_one());
    let lhs = dcp.d.mul(&dcp.embed_h(&dcp.h.elem(harrow)), &dcp.embed_a(&dcp.a.elem(arrow))).unwrap();
    let low: Elem = lhs.filter(|x| x.degree == 0);
    let pg = dcp.d.find_label("p_g1|g1").unwrap();
    assert_eq!(low, Comb::term(pg, Field::Rational.from_i64(2)));
    // both factors act by zero but their product does not
    assert!(!ext.rho_elem(&lhs).is_zero());
}

#[test]
fn wrong_bound_is_caught() {
    let s = example(1);
    let mut t = trivial_module(&s.dcp);
    let x = s.dcp.d.basis(1).next().unwrap();
    t.set_action(x, SparseMatrix::identity(Field::Rational, 1));
    let r = check_module(&t, &s.dcp);
    let c = r.check("finite-cycles").unwrap();
    assert_eq!(c.failed, 1);
    assert!(c.witness.as_ref().unwrap().contains("bound 0"));
}

#[test]
fn tensor_products() {
    let g = s3();
    let s = bare(&g, true);
    let t = trivial_module(&s.dcp);
    let conj = conjugation_module(&s.dcp, &g).unwrap();
    let class = class_module(&s.dcp, &g, el(&g, "213")).unwrap();
    let tc = tensor_module(&t, &conj, &s.dcp).unwrap();
    for x in s.dcp.d.all_basis() {
        assert_eq!(tc.rho(x), conj.rho(x));
    }
    let l = tensor_module(&tensor_module(&conj, &class, &s.dcp).unwrap(), &class, &s.dcp).unwrap();
    let r = tensor_module(&conj, &tensor_module(&class, &class, &s.dcp).unwrap(), &s.dcp).unwrap();
    for x in s.dcp.d.all_basis() {
        assert_eq!(l.rho(x), r.rho(x));
    }
    assert!(check_module(&l, &s.dcp).passed());
}

#[test]
fn tensor_bound_on_example() {
    let s = example(2);
    let t = trivial_module(&s.dcp);
    let tt = tensor_module(&t, &t, &s.dcp).unwrap();
    assert_eq!(tt.bounds, vec![0]);
    let mut loose = tt.clone();
    loose.bounds = tensor_bounds(&t, &t);
    assert!(check_module(&loose, &s.dcp).passed());
}

#[test]
fn hexagons() {
    let g = s3();
    let s = bare(&g, true);
    let t = trivial_module(&s.dcp);
    let r = hexagon_check(&s, &t, &t, &t).unwrap();
    assert!(r.passed());
    let class = class_module(&s.dcp, &g, el(&g, "213")).unwrap();
    let conj = conjugation_module(&s.dcp, &g).unwrap();
    for (u, v, w) in [(&class, &class, &class), (&conj, &class, &t), (&class, &conj, &class)] {
        let r = hexagon_check(&s, u, v, w).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
    }
    let e = example(3);
    let t = trivial_module(&e.dcp);
    assert!(hexagon_check(&e, &t, &t, &t).unwrap().passed());
}

#[test]
fn braiding_is_natural_for_the_class_inclusion() {
    let g = s3();
    let s = bare(&g, false);
    let conj = conjugation_module(&s.dcp, &g).unwrap();
    let rep = el(&g, "213");
    let class = class_module(&s.dcp, &g, rep).unwrap();
    let f = Field::Rational;
    let mut inc = SparseMatrix::zero(f, 6, 3);
    for (i, l) in class.labels.iter().enumerate() {
        inc.set(conj.labels.iter().position(|x| x == l).unwrap(), i, f.one());
    }
    let r = naturality_check(&s, (&class, &conj, &inc), (&conj, &conj, &SparseMatrix::identity(f, 6))).unwrap();
    assert!(r.passed(), "{:?}", r.checks);
    let mut bad = inc.clone();
    bad.set(0, 0, f.one());
    let r = naturality_check(&s, (&class, &conj, &bad), (&conj, &conj, &SparseMatrix::identity(f, 6))).unwrap();
    assert!(!r.check("module-map").unwrap().passed());
}

#[test]
fn braiding_is_level_stable_on_example() {
    let s = example(3);
    let t = trivial_module(&s.dcp);
    let c1 = braiding_at_level(&s, &t, &t, 1).unwrap();
    for n in 2..=3 {
        assert_eq!(braiding_at_level(&s, &t, &t, n).unwrap(), c1);
    }
    assert!(matches!(braiding_at_level(&s, &t, &t, 4), Err(BraidError::Level { need: 4, have: 3 })));
}

#[test]
fn trivial_coaction_is_unit() {
    let s = example(2);
    let t = trivial_module(&s.dcp);
    let y = yd_structure(&s, &t).unwrap();
    assert!(y.passed(), "{:?}", y.checks);
    let mut expect = Comb::new();
    for (x, c) in s.dcp.d.unit().iter() {
        expect.add_term((*x, 0usize), c.clone());
    }
    assert_eq!(y.coaction[0], expect);
}

#[test]
fn degree_zero_coactions() {
    let g = s3();
    let f = Field::Rational;
    // A_0 = kG: δ(v_h) = h ⊗ v_h
    let s = bare(&g, false);
    let m = conjugation_module(&s.dcp, &g).unwrap();
    let y = yd_structure(&s, &m).unwrap();
    assert!(y.passed(), "{:?}", y.checks);
    for h in g.elements() {
        let mut expect = Comb::new();
        let one_h = s.dcp.h.unit();
        for (p, c) in one_h.iter() {
            expect.add_term((s.dcp.index(BasisIndex::new(0, h), *p), h as usize), c.clone());
        }
        assert_eq!(y.coaction[h as usize], expect);
    }
    // A_0 = (kG)*: δ(v_h) = Σ_g p_g ⊗ g·v_h
    let s = bare(&g, true);
    let m = conjugation_module(&s.dcp, &g).unwrap();
    let y = yd_structure(&s, &m).unwrap();
    assert!(y.passed(), "{:?}", y.checks);
    let h = el(&g, "213");
    let mut expect = Comb::new();
    for k in g.elements() {
        expect.add_term((s.dcp.index(BasisIndex::new(0, k), BasisIndex::new(0, g.identity())), g.conj(k, h) as usize), f.one());
    }
    assert_eq!(y.coaction[h as usize], expect);
}

#[test]
fn example_characters_extended_by_zero() {
    let s = example(3);
    let g = FiniteGroup::cyclic(2);
    let f = Field::Rational;
    let mut lines = Vec::new();
    for h0 in g.elements() {
        for sign in [false, true] {
            let psi = vec![f.one(), if sign { f.from_i64(-1) } else { f.one() }];
            let m = character_module(&s.dcp, &g, h0, &psi).unwrap().extend_by_zero(3);
            let r = check_module(&m, &s.dcp);
            // only lines graded by the identity avoid the degree-0 terms of the sign-twisted loops
            assert_eq!(r.passed(), h0 == g.identity(), "h0={h0} sign={sign}");
            if r.passed() {
                lines.push(m);
            }
        }
    }
    let t = trivial_module(&s.dcp);
    for x in s.dcp.d.all_basis() {
        assert_eq!(lines[0].rho(x), t.rho(x));
    }
    let sign = &lines[1];
    let c = braiding_matrix(&s, sign, sign).unwrap();
    assert!(c.matrix.is_identity());
    assert_eq!(c.level(), 1);
    for n in 1..=3 {
        assert_eq!(braiding_at_level(&s, sign, sign, n).unwrap(), c.matrix);
    }
    assert!(hexagon_check(&s, sign, &t, sign).unwrap().passed());
    let y = yd_structure(&s, sign).unwrap();
    assert!(y.passed(), "{:?}", y.checks);
}
