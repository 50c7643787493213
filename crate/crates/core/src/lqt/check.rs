use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::exactlin::{BasisIndex, Comb};
use crate::gradedhopf::{CheckOutcome, Elem, Elem2, GradedHopfAlgebra};

use super::{LqtError, LqtStructure, UnitVariant};

type T = Comb<Vec<BasisIndex>>;

fn lift2(e: &Elem2) -> T {
    e.map_keys(|(a, b)| vec![*a, *b])
}

fn lift1(e: &Elem) -> T {
    e.map_keys(|a| vec![*a])
}

/// Slotwise tensor product of two tensors.
fn otimes(x: &T, y: &T) -> T {
    let mut out = T::new();
    for (k, c) in x.iter() {
        for (l, d) in y.iter() {
            let mut v = k.clone();
            v.extend_from_slice(l);
            out.add_term(v, c.mul(d));
        }
    }
    out
}

/// Product of tensors where slot `i` lives in `algs[i]`.
fn mul_t(algs: &[&GradedHopfAlgebra], x: &T, y: &T) -> Result<T, LqtError> {
    let mut out = T::new();
    for (k, c) in x.iter() {
        for (l, d) in y.iter() {
            let mut acc = T::term(Vec::with_capacity(k.len()), c.mul(d));
            for (i, (p, q)) in k.iter().zip(l).enumerate() {
                let prod = algs[i].mul_basis(*p, *q).ok_or(crate::gradedhopf::GradedError::Budget(p.degree, q.degree, algs[i].top))?;
                acc = otimes(&acc, &lift1(prod));
                if acc.is_zero() {
                    break;
                }
            }
            out.add(&acc);
        }
    }
    Ok(out)
}

/// Applies `f` to slot `i`, producing `k` slots in its place.
fn apply_slot(x: &T, i: usize, f: impl Fn(BasisIndex) -> T) -> T {
    let mut out = T::new();
    for (k, c) in x.iter() {
        for (img, d) in f(k[i]).iter() {
            let mut v = k[..i].to_vec();
            v.extend_from_slice(img);
            v.extend_from_slice(&k[i + 1..]);
            out.add_term(v, c.mul(d));
        }
    }
    out
}

/// `k`-fold iterated comultiplication, `k ≥ 1` output slots.
fn comul_n(h: &GradedHopfAlgebra, x: BasisIndex, k: usize) -> T {
    let mut acc = T::term(vec![x], h.one());
    for _ in 1..k {
        acc = apply_slot(&acc, 0, |y| lift2(h.comul_basis(y)));
    }
    acc
}

fn project(t: &T, n: u32) -> T {
    t.filter(|k| k.iter().all(|x| x.degree <= n))
}

struct Dual {
    proj: CheckOutcome,
    exact: CheckOutcome,
}

impl Dual {
    fn new(axiom: &str) -> Self {
        Dual { proj: CheckOutcome::named(axiom), exact: CheckOutcome::named(axiom) }
    }

    fn compare(&mut self, lhs: &T, rhs: &T, n: u32, witness: impl Fn() -> String) {
        self.proj.note(project(lhs, n) == project(rhs, n), &witness);
        self.exact.note(lhs == rhs, &witness);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LqtReport {
    pub n: u32,
    pub top: u32,
    pub variant: UnitVariant,
    /// Every tensor slot restricted to degrees `≤ n` before comparing.
    pub projected: Vec<CheckOutcome>,
    /// Raw comparison including components above degree `n`.
    pub exact: Vec<CheckOutcome>,
}

impl LqtReport {
    pub fn passed(&self) -> bool {
        self.projected.iter().all(|c| c.passed())
    }

    pub fn check(&self, axiom: &str) -> Option<&CheckOutcome> {
        self.projected.iter().find(|c| c.axiom == axiom)
    }

    pub fn exact_check(&self, axiom: &str) -> Option<&CheckOutcome> {
        self.exact.iter().find(|c| c.axiom == axiom)
    }
}

/// Minimal truncation for verifying level `n`.
pub fn required_top(n: u32) -> u32 {
    (2 * n).max(n + 1)
}

pub fn verify_lqt(s: &LqtStructure, n: u32) -> Result<LqtReport, LqtError> {
    let need = required_top(n);
    if s.top() < need {
        return Err(LqtError::Budget { have: s.top(), need });
    }
    let lv = s.level(n)?;
    let next = s.level(n + 1)?;
    let dcp = &s.dcp;
    let (a, h, d) = (&dcp.a, &dcp.h, &dcp.d);
    let p = lift2(&lv.p);
    let r = lift2(&lv.r);
    let mut checks: Vec<Dual> = Vec::new();

    // copairing laws for P ∈ H⊗A
    let mut cp1 = Dual::new("CP1");
    let lhs = apply_slot(&p, 1, |y| lift2(a.comul_basis(y)));
    let mut rhs = T::new();
    for (k, c) in p.iter() {
        for (l, e) in p.iter() {
            let prod = h.mul_basis(k[0], l[0]).expect("budget");
            for (x, f) in prod.iter() {
                rhs.add_term(vec![*x, l[1], k[1]], c.mul(e).mul(f));
            }
        }
    }
    cp1.compare(&lhs, &rhs, n, || "P".into());
    let mut cp2 = Dual::new("CP2");
    let lhs = apply_slot(&p, 0, |y| lift2(h.comul_basis(y)));
    let mut rhs = T::new();
    for (k, c) in p.iter() {
        for (l, e) in p.iter() {
            let prod = a.mul_basis(k[1], l[1]).expect("budget");
            for (x, f) in prod.iter() {
                rhs.add_term(vec![k[0], l[0], *x], c.mul(e).mul(f));
            }
        }
    }
    cp2.compare(&lhs, &rhs, n, || "P".into());
    let mut cp3 = Dual::new("CP3");
    let mut cp4 = Dual::new("CP4");
    let mut l3 = Elem::new();
    let mut l4 = Elem::new();
    for ((x, y), c) in lv.p.iter() {
        l3.add_term(*x, c.mul(a.counit_basis(*y)));
        l4.add_term(*y, c.mul(h.counit_basis(*x)));
    }
    cp3.compare(&lift1(&l3), &lift1(h.unit()), n, || "Σ P' ε(P'')".into());
    cp4.compare(&lift1(&l4), &lift1(a.unit()), n, || "Σ ε(P') P''".into());
    checks.extend([cp1, cp2, cp3, cp4]);

    // the same laws for R in D⊗D
    let mut lqt1 = Dual::new("LQT1");
    let lhs = apply_slot(&r, 1, |y| lift2(d.comul_basis(y)));
    let mut rhs = T::new();
    for (k, c) in r.iter() {
        for (l, e) in r.iter() {
            for (x, f) in d.mul_basis(k[0], l[0]).expect("budget").iter() {
                rhs.add_term(vec![*x, l[1], k[1]], c.mul(e).mul(f));
            }
        }
    }
    lqt1.compare(&lhs, &rhs, n, || "R".into());
    let mut lqt2 = Dual::new("LQT2");
    let lhs = apply_slot(&r, 0, |y| lift2(d.comul_basis(y)));
    let mut rhs = T::new();
    for (k, c) in r.iter() {
        for (l, e) in r.iter() {
            for (x, f) in d.mul_basis(k[1], l[1]).expect("budget").iter() {
                rhs.add_term(vec![k[0], l[0], *x], c.mul(e).mul(f));
            }
        }
    }
    lqt2.compare(&lhs, &rhs, n, || "R".into());
    let mut rcp3 = Dual::new("R-CP3");
    let mut rcp4 = Dual::new("R-CP4");
    let mut l3 = Elem::new();
    let mut l4 = Elem::new();
    for ((x, y), c) in lv.r.iter() {
        l3.add_term(*x, c.mul(d.counit_basis(*y)));
        l4.add_term(*y, c.mul(d.counit_basis(*x)));
    }
    rcp3.compare(&lift1(&l3), &lift1(d.unit()), n, || "Σ R' ε(R'')".into());
    rcp4.compare(&lift1(&l4), &lift1(d.unit()), n, || "Σ ε(R') R''".into());

    // almost cocommutativity on D_(n)
    let dbasis: Vec<BasisIndex> = (0..=n).flat_map(|k| d.basis(k)).collect();
    let aco: Vec<(bool, bool, BasisIndex)> = dbasis
        .par_iter()
        .map(|&y| {
            let dy = lift2(d.comul_basis(y));
            let flip: T = dy.map_keys(|k| vec![k[1], k[0]]);
            let lhs = mul_t(&[d, d], &flip, &r).expect("budget");
            let rhs = mul_t(&[d, d], &r, &dy).expect("budget");
            (project(&lhs, n) == project(&rhs, n), lhs == rhs, y)
        })
        .collect();
    let mut lqt3 = Dual::new("LQT3");
    for (pj, ex, y) in aco {
        lqt3.proj.note(pj, || format!("y={}", d.label(y)));
        lqt3.exact.note(ex, || format!("y={}", d.label(y)));
    }
    checks.extend([lqt1, lqt2, lqt3, rcp3, rcp4]);

    // the two halves of almost cocommutativity
    let tau = &dcp.tau;
    let mut aco1 = Dual::new("ACO1");
    for y in (0..=n).flat_map(|k| h.basis(k)) {
        let y2 = comul_n(h, y, 2);
        let mut lhs = T::new();
        for (k, c) in p.iter() {
            for (l, e) in y2.iter() {
                for (x, f) in h.mul_basis(k[0], l[0]).expect("budget").iter() {
                    lhs.add_term(vec![*x, k[1], l[1]], c.mul(e).mul(f));
                }
            }
        }
        let y4 = comul_n(h, y, 4);
        let mut rhs = T::new();
        for (k, c) in p.iter() {
            let pp = comul_n(a, k[1], 3);
            for (l, e) in y4.iter() {
                for (m, f) in pp.iter() {
                    let t = tau.tau(l[0], m[0]).mul(&tau.tau_inv(l[2], m[2]));
                    if t.is_zero() {
                        continue;
                    }
                    for (x, g) in h.mul_basis(l[3], k[0]).expect("budget").iter() {
                        rhs.add_term(vec![*x, m[1], l[1]], c.mul(e).mul(f).mul(g).mul(&t));
                    }
                }
            }
        }
        aco1.compare(&lhs, &rhs, n, || format!("y={}", h.label(y)));
    }
    let mut aco2 = Dual::new("ACO2");
    for x in (0..=n).flat_map(|k| a.basis(k)) {
        let x2 = comul_n(a, x, 2);
        let mut lhs = T::new();
        for (k, c) in p.iter() {
            for (l, e) in x2.iter() {
                for (z, f) in a.mul_basis(l[0], k[1]).expect("budget").iter() {
                    lhs.add_term(vec![l[1], k[0], *z], c.mul(e).mul(f));
                }
            }
        }
        let x4 = comul_n(a, x, 4);
        let mut rhs = T::new();
        for (k, c) in p.iter() {
            let pp = comul_n(h, k[0], 3);
            for (l, e) in x4.iter() {
                for (m, f) in pp.iter() {
                    let t = tau.tau(m[0], l[0]).mul(&tau.tau_inv(m[2], l[2]));
                    if t.is_zero() {
                        continue;
                    }
                    for (z, g) in a.mul_basis(k[1], l[3]).expect("budget").iter() {
                        rhs.add_term(vec![l[1], m[1], *z], c.mul(e).mul(f).mul(g).mul(&t));
                    }
                }
            }
        }
        aco2.compare(&lhs, &rhs, n, || format!("x={}", a.label(x)));
    }
    checks.extend([aco1, aco2]);

    // R_{n+1} - R_n lives in D_{n+1} ⊗ D_{n+1}
    let mut lqt4 = Dual::new("LQT4'");
    let mut w = next.r.clone();
    w.sub(&lv.r);
    let ok = w.keys().all(|(x, y)| x.degree == n + 1 && y.degree == n + 1);
    lqt4.proj.note(ok, || format!("R_{} - R_{}", n + 1, n));
    lqt4.exact.note(ok, || format!("R_{} - R_{}", n + 1, n));

    // τ(P', x)P'' = x and τ(y, P'')P' = y
    let mut hyp = Dual::new("pairing-hypotheses");
    for x in (0..=n).flat_map(|k| a.basis(k)) {
        let mut v = Elem::new();
        let mut u = Elem::new();
        for ((hp, ap), c) in lv.p.iter() {
            v.add_term(*ap, c.mul(&tau.tau(*hp, x)));
            u.add_term(*hp, c.mul(&tau.tau(x, *ap)));
        }
        let ok = v == a.elem(x) && u == h.elem(x);
        hyp.proj.note(ok, || format!("x={}", a.label(x)));
        hyp.exact.note(ok, || format!("x={}", a.label(x)));
    }

    // R R⁻¹ = 1⊗1 = R⁻¹ R
    let mut inv = Dual::new("R-inverse");
    let ri = lift2(&lv.r_inv);
    let one = otimes(&lift1(d.unit()), &lift1(d.unit()));
    let rri = mul_t(&[d, d], &r, &ri)?;
    let rir = mul_t(&[d, d], &ri, &r)?;
    inv.proj.note(project(&rri, n) == one && project(&rir, n) == one, || "R R^-1".into());
    inv.exact.note(rri == one && rir == one, || "R R^-1".into());
    checks.extend([lqt4, hyp, inv]);

    let (projected, exact) = checks.into_iter().map(|c| (c.proj, c.exact)).unzip();
    Ok(LqtReport { n, top: s.top(), variant: s.variant, projected, exact })
}

#[derive(Clone, Debug, Serialize)]
pub struct QybeDefect {
    pub n: u32,
    /// Number of nonzero components per total degree.
    pub terms_by_degree: BTreeMap<u32, usize>,
    pub lowest_degree: Option<u32>,
    /// Whether the defect vanishes once every slot is restricted to degrees `≤ n`.
    pub projected_zero: bool,
    #[serde(skip)]
    pub defect: Comb<Vec<BasisIndex>>,
}

impl QybeDefect {
    pub fn is_zero(&self) -> bool {
        self.defect.is_zero()
    }
}

/// `R₁₂R₁₃R₂₃ − R₂₃R₁₃R₁₂` in `D^{⊗3}`.
pub fn qybe_defect(s: &LqtStructure, n: u32) -> Result<QybeDefect, LqtError> {
    if s.top() < 3 * n {
        return Err(LqtError::Budget { have: s.top(), need: 3 * n });
    }
    let d = &s.dcp.d;
    let r = &s.level(n)?.r;
    let one = d.unit();
    let mut r12 = T::new();
    let mut r13 = T::new();
    let mut r23 = T::new();
    for ((x, y), c) in r.iter() {
        for (u, e) in one.iter() {
            let ce = c.mul(e);
            r12.add_term(vec![*x, *y, *u], ce.clone());
            r13.add_term(vec![*x, *u, *y], ce.clone());
            r23.add_term(vec![*u, *x, *y], ce);
        }
    }
    let algs = [d, d, d];
    let lhs = mul_t(&algs, &mul_t(&algs, &r12, &r13)?, &r23)?;
    let rhs = mul_t(&algs, &mul_t(&algs, &r23, &r13)?, &r12)?;
    let mut defect = lhs;
    defect.sub(&rhs);
    let mut terms_by_degree = BTreeMap::new();
    for k in defect.keys() {
        *terms_by_degree.entry(k.iter().map(|x| x.degree).sum::<u32>()).or_insert(0) += 1;
    }
    Ok(QybeDefect {
        n,
        lowest_degree: terms_by_degree.keys().next().copied(),
        projected_zero: project(&defect, n).is_zero(),
        terms_by_degree,
        defect,
    })
}
