//! Skew pairings, copairings, double cross products and the family {R_n}.

mod check;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bimodules::{dualize_bimodule, BaseKind, HopfBimoduleData};
use crate::exactlin::{BasisIndex, Comb, Scalar};
use crate::gradedhopf::{
    cotensor_hopf, opposite_coalgebra, tensor_hopf, CheckOutcome, Elem, Elem2, GradedError, GradedHopfAlgebra, HopfReport,
};

pub use check::{qybe_defect, required_top, verify_lqt, LqtReport, QybeDefect};

pub type Elem3 = Comb<(BasisIndex, BasisIndex, BasisIndex)>;

#[derive(Debug, Error)]
pub enum LqtError {
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("{what} fails: {witness}")]
    Verification { what: String, witness: String },
    #[error("budget N={have} too small, need N>={need}")]
    Budget { have: u32, need: u32 },
    #[error("level {0} not built")]
    MissingLevel(u32),
}

fn first_failure(r: &HopfReport) -> Option<LqtError> {
    r.failures().first().map(|f| LqtError::Verification {
        what: format!("{} {}", r.algebra, f.axiom),
        witness: f.witness.clone().unwrap_or_default(),
    })
}

/// Iterated comultiplication `(Δ⊗id)Δ`.
pub fn comul3(h: &GradedHopfAlgebra, x: BasisIndex) -> Elem3 {
    let mut out = Elem3::new();
    for ((a, b), c) in h.comul_basis(x).iter() {
        for ((p, q), d) in h.comul_basis(*a).iter() {
            out.add_term((*p, *q, *b), c.mul(d));
        }
    }
    out
}

/// `τ(h, a) = δ_{h,a}` on matching word bases; `τ⁻¹(h, a) = τ(h, S_A a)`.
#[derive(Clone, Debug)]
pub struct SkewPairing {
    pub field: crate::exactlin::Field,
    inv: HashMap<(BasisIndex, BasisIndex), Scalar>,
}

impl SkewPairing {
    /// Kronecker τ with a stored `τ⁻¹` table; nothing is checked here.
    pub fn from_inverse(field: crate::exactlin::Field, inv: HashMap<(BasisIndex, BasisIndex), Scalar>) -> Self {
        SkewPairing { field, inv }
    }

    pub fn tau(&self, h: BasisIndex, a: BasisIndex) -> Scalar {
        if h == a {
            self.field.one()
        } else {
            self.field.zero()
        }
    }

    pub fn tau_inv(&self, h: BasisIndex, a: BasisIndex) -> Scalar {
        self.inv.get(&(h, a)).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn eval(&self, h: &Elem, a: &Elem) -> Scalar {
        let mut acc = self.field.zero();
        for (k, c) in h.iter() {
            if let Some(d) = a.get(k) {
                acc = acc.add(&c.mul(d));
            }
        }
        acc
    }
}

/// Kronecker pairing between `H` and `A`, checked against the skew-pairing laws.
pub fn quiver_skew_pairing(a: &GradedHopfAlgebra, h: &GradedHopfAlgebra) -> Result<SkewPairing, LqtError> {
    crate::gradedhopf::DualityPairing::new(a, h)?;
    let mut inv = HashMap::new();
    for x in a.all_basis() {
        let s = a.antipode_basis(x).ok_or(GradedError::Mismatch("A has no antipode".into()))?;
        for (k, c) in s.iter() {
            inv.insert((*k, x), c.clone());
        }
    }
    let tau = SkewPairing { field: a.field, inv };
    let r = verify_skew_pairing(&tau, a, h);
    match first_failure(&r) {
        Some(e) => Err(e),
        None => Ok(tau),
    }
}

pub fn verify_skew_pairing(tau: &SkewPairing, a: &GradedHopfAlgebra, h: &GradedHopfAlgebra) -> HopfReport {
    let basis: Vec<BasisIndex> = a.all_basis().collect();
    let lab = |x: &BasisIndex| a.label(*x).to_string();
    let mut sp1 = CheckOutcome::named("SP1");
    let mut sp2 = CheckOutcome::named("SP2");
    let mut skipped = 0;
    for x in &basis {
        for y in &basis {
            let Some(yz) = a.mul_basis(*x, *y) else {
                skipped += 1;
                continue;
            };
            // τ(q, xy) = Σ τ(q₁,x)τ(q₂,y)
            for q in h.basis(x.degree + y.degree) {
                let lhs = tau.eval(&h.elem(q), yz);
                let rhs = h.comul_basis(q).get(&(*x, *y)).cloned().unwrap_or_else(|| a.field.zero());
                sp1.note(lhs == rhs, || format!("x={}, y={}, q={}", lab(x), lab(y), lab(&q)));
            }
            // τ(xy, z) = Σ τ(x,z₂)τ(y,z₁)
            let xu = h.mul_basis(*x, *y).expect("same budget");
            for z in a.basis(x.degree + y.degree) {
                let lhs = tau.eval(xu, &a.elem(z));
                let rhs = a.comul_basis(z).get(&(*y, *x)).cloned().unwrap_or_else(|| a.field.zero());
                sp2.note(lhs == rhs, || format!("x={}, u={}, z={}", lab(x), lab(y), lab(&z)));
            }
        }
    }
    let mut sp3 = CheckOutcome::named("SP3");
    let mut sp4 = CheckOutcome::named("SP4");
    let mut conv = CheckOutcome::named("convolution-inverse");
    for x in &basis {
        sp3.note(tau.eval(&h.elem(*x), a.unit()) == *h.counit_basis(*x), || format!("x={}", lab(x)));
        sp4.note(tau.eval(h.unit(), &a.elem(*x)) == *a.counit_basis(*x), || format!("y={}", lab(x)));
        for y in a.basis(x.degree) {
            let target = h.counit_basis(*x).mul(a.counit_basis(y));
            let mut l = a.field.zero();
            let mut r = a.field.zero();
            for ((h1, h2), c) in h.comul_basis(*x).iter() {
                for ((a1, a2), d) in a.comul_basis(y).iter() {
                    let cd = c.mul(d);
                    l = l.add(&cd.mul(&tau.tau(*h1, *a1)).mul(&tau.tau_inv(*h2, *a2)));
                    r = r.add(&cd.mul(&tau.tau_inv(*h1, *a1)).mul(&tau.tau(*h2, *a2)));
                }
            }
            conv.note(l == target && r == target, || format!("h={}, a={}", lab(x), lab(&y)));
        }
    }
    HopfReport { algebra: "τ".into(), top: a.top, checks: vec![sp1, sp2, sp3, sp4, conv], skipped }
}

/// `D = A ⋈_τ H` with basis `A_i × H_j`, product through the α, β tables.
#[derive(Clone, Debug)]
pub struct DoubleCrossProduct {
    /// Base of A's degree-0 part; H's degree-0 part is its dual.
    pub a_kind: BaseKind,
    pub a: GradedHopfAlgebra,
    pub h: GradedHopfAlgebra,
    pub tau: SkewPairing,
    pub d: GradedHopfAlgebra,
    pairs: Vec<Vec<(BasisIndex, BasisIndex)>>,
    lookup: HashMap<(BasisIndex, BasisIndex), BasisIndex>,
    /// `α(h,b) ∈ A`
    pub alpha: HashMap<(BasisIndex, BasisIndex), Elem>,
    /// `β(h,b) ∈ H`
    pub beta: HashMap<(BasisIndex, BasisIndex), Elem>,
    /// `(1⊗h)(b⊗1)` as A⊗H terms
    pub exchange: HashMap<(BasisIndex, BasisIndex), Elem2>,
}

impl DoubleCrossProduct {
    pub fn index(&self, a: BasisIndex, h: BasisIndex) -> BasisIndex {
        self.lookup[&(a, h)]
    }

    pub fn parts(&self, x: BasisIndex) -> (BasisIndex, BasisIndex) {
        self.pairs[x.degree as usize][x.ordinal as usize]
    }

    /// `a ⊗ h` for combinations.
    pub fn pure(&self, a: &Elem, h: &Elem) -> Elem {
        let mut out = Elem::new();
        for (x, c) in a.iter() {
            for (y, d) in h.iter() {
                out.add_term(self.index(*x, *y), c.mul(d));
            }
        }
        out
    }

    pub fn embed_a(&self, a: &Elem) -> Elem {
        self.pure(a, self.h.unit())
    }

    pub fn embed_h(&self, h: &Elem) -> Elem {
        self.pure(self.a.unit(), h)
    }

    /// Both sides of the exchange law on every in-budget pair.
    pub fn exchange_report(&self) -> HopfReport {
        let mut ex = CheckOutcome::named("exchange");
        let a = &self.a;
        let h = &self.h;
        for (&(hx, bx), x) in &self.exchange {
            let mut direct = Elem2::new();
            let h3 = comul3(h, hx);
            let b3 = comul3(a, bx);
            for ((h1, h2, h3), c) in h3.iter() {
                for ((b1, b2, b3), d) in b3.iter() {
                    let t = self.tau.tau(*h1, *b1).mul(&self.tau.tau_inv(*h3, *b3));
                    if !t.is_zero() {
                        direct.add_term((*b2, *h2), c.mul(d).mul(&t));
                    }
                }
            }
            ex.note(direct == *x, || format!("h={}, b={}", h.label(hx), a.label(bx)));
        }
        let mut emb = CheckOutcome::named("embeddings");
        for x in a.all_basis() {
            for y in a.all_basis() {
                let (Some(pa), Some(ph)) = (a.mul_basis(x, y), h.mul_basis(x, y)) else { continue };
                let da = self.d.mul(&self.embed_a(&a.elem(x)), &self.embed_a(&a.elem(y))).ok();
                let dh = self.d.mul(&self.embed_h(&h.elem(x)), &self.embed_h(&h.elem(y))).ok();
                emb.note(da == Some(self.embed_a(pa)) && dh == Some(self.embed_h(ph)), || {
                    format!("x={}, y={}", a.label(x), a.label(y))
                });
            }
        }
        HopfReport { algebra: self.d.name.clone(), top: self.d.top, checks: vec![ex, emb], skipped: 0 }
    }
}

pub fn double_cross_product(
    a: &GradedHopfAlgebra,
    h: &GradedHopfAlgebra,
    tau: &SkewPairing,
    a_kind: BaseKind,
) -> Result<DoubleCrossProduct, LqtError> {
    let top = a.top.min(h.top);
    let f = a.field;
    let mut pairs: Vec<Vec<(BasisIndex, BasisIndex)>> = Vec::new();
    let mut labels: Vec<Vec<String>> = Vec::new();
    let mut lookup = HashMap::new();
    for n in 0..=top {
        let mut ps = Vec::new();
        let mut ls = Vec::new();
        for i in 0..=n {
            for x in a.basis(i) {
                for y in h.basis(n - i) {
                    lookup.insert((x, y), BasisIndex::new(n, ps.len() as u32));
                    ps.push((x, y));
                    ls.push(format!("{}|{}", a.label(x), h.label(y)));
                }
            }
        }
        pairs.push(ps);
        labels.push(ls);
    }
    let a3: Vec<Elem3> = a.all_basis().map(|x| comul3(a, x)).collect();
    let h3: Vec<Elem3> = h.all_basis().map(|x| comul3(h, x)).collect();

    let mut alpha = HashMap::new();
    let mut beta = HashMap::new();
    for hx in h.all_basis() {
        for bx in a.all_basis() {
            if hx.degree + bx.degree > top {
                continue;
            }
            let mut al = Elem::new();
            for ((h1, h2), c) in h.comul_basis(hx).iter() {
                for ((b1, b2, b3), d) in a3[a.flat(bx)].iter() {
                    let t = tau.tau(*h1, *b1).mul(&tau.tau_inv(*h2, *b3));
                    if !t.is_zero() {
                        al.add_term(*b2, c.mul(d).mul(&t));
                    }
                }
            }
            let mut be = Elem::new();
            for ((h1, h2, h3), c) in h3[h.flat(hx)].iter() {
                for ((b1, b2), d) in a.comul_basis(bx).iter() {
                    let t = tau.tau(*h1, *b1).mul(&tau.tau_inv(*h3, *b2));
                    if !t.is_zero() {
                        be.add_term(*h2, c.mul(d).mul(&t));
                    }
                }
            }
            alpha.insert((hx, bx), al);
            beta.insert((hx, bx), be);
        }
    }
    let mut exchange = HashMap::new();
    for &(hx, bx) in alpha.keys() {
        let mut x = Elem2::new();
        for ((h1, h2), c) in h.comul_basis(hx).iter() {
            for ((b1, b2), d) in a.comul_basis(bx).iter() {
                let cd = c.mul(d);
                for (p, e) in alpha[&(*h1, *b1)].iter() {
                    for (q, g) in beta[&(*h2, *b2)].iter() {
                        x.add_term((*p, *q), cd.mul(e).mul(g));
                    }
                }
            }
        }
        exchange.insert((hx, bx), x);
    }

    let mut d = GradedHopfAlgebra::with_bases(&format!("{}#{}", a.name, h.name), f, labels);
    let dbasis: Vec<BasisIndex> = d.all_basis().collect();
    let products: Vec<(BasisIndex, BasisIndex, Elem)> = dbasis
        .par_iter()
        .flat_map_iter(|&x| {
            let (ax, hx) = pairs[x.degree as usize][x.ordinal as usize];
            let (pairs, exchange, lookup) = (&pairs, &exchange, &lookup);
            dbasis.iter().filter(move |y| x.degree + y.degree <= top).map(move |&y| {
                let (by, gy) = pairs[y.degree as usize][y.ordinal as usize];
                let mut out = Elem::new();
                for ((b2, h2), c) in exchange[&(hx, by)].iter() {
                    let l = a.mul_basis(ax, *b2).expect("in budget");
                    let r = h.mul_basis(*h2, gy).expect("in budget");
                    for (p, e) in l.iter() {
                        let ce = c.mul(e);
                        for (q, g) in r.iter() {
                            out.add_term(lookup[&(*p, *q)], ce.mul(g));
                        }
                    }
                }
                (x, y, out)
            })
        })
        .collect();
    for (x, y, p) in products {
        d.set_mul(x, y, p);
    }
    for &x in &dbasis {
        let (ax, hx) = pairs[x.degree as usize][x.ordinal as usize];
        let mut dd = Elem2::new();
        for ((a1, a2), c) in a.comul_basis(ax).iter() {
            for ((h1, h2), e) in h.comul_basis(hx).iter() {
                dd.add_term((lookup[&(*a1, *h1)], lookup[&(*a2, *h2)]), c.mul(e));
            }
        }
        d.set_comul(x, dd);
        d.set_counit(x, a.counit_basis(ax).mul(h.counit_basis(hx)));
    }
    let mut dcp = DoubleCrossProduct { a_kind, a: a.clone(), h: h.clone(), tau: tau.clone(), d, pairs, lookup, alpha, beta, exchange };
    dcp.d.set_unit(dcp.pure(a.unit(), h.unit()));

    // S_D(a⊗h) = (1⊗S_H h)(S_A a⊗1), likewise for the inverse
    let mut s = Vec::with_capacity(dbasis.len());
    let mut si = Vec::with_capacity(dbasis.len());
    for &x in &dbasis {
        let (ax, hx) = dcp.parts(x);
        let sh = dcp.embed_h(h.antipode_basis(hx).expect("antipode"));
        let sa = dcp.embed_a(a.antipode_basis(ax).expect("antipode"));
        s.push(dcp.d.mul(&sh, &sa)?);
        let sh = dcp.embed_h(h.antipode_inv_basis(hx).expect("antipode"));
        let sa = dcp.embed_a(a.antipode_inv_basis(ax).expect("antipode"));
        si.push(dcp.d.mul(&sh, &sa)?);
    }
    dcp.d.set_antipode(s, si);
    Ok(dcp)
}

/// Which element stands in the first slot of `R_n = 1_A ⊗ P_n ⊗ 1_H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnitVariant {
    /// The algebra unit of A.
    Unit,
    /// The single degree-0 basis element indexed by the group identity.
    Literal,
}

#[derive(Clone, Debug)]
pub struct Level {
    pub n: u32,
    /// `P_n` keyed (H index, A index).
    pub p: Elem2,
    pub r: Elem2,
    pub r_inv: Elem2,
}

#[derive(Clone, Debug)]
pub struct LqtStructure {
    pub dcp: DoubleCrossProduct,
    pub variant: UnitVariant,
    pub levels: Vec<Level>,
}

impl LqtStructure {
    pub fn level(&self, n: u32) -> Result<&Level, LqtError> {
        self.levels.get(n as usize).ok_or(LqtError::MissingLevel(n))
    }

    pub fn top(&self) -> u32 {
        self.dcp.d.top
    }
}

/// `P_n = Σ_{deg q ≤ n} q ⊗ q*`.
pub fn canonical_copairing(a: &GradedHopfAlgebra, n: u32) -> Elem2 {
    let mut p = Elem2::new();
    for d in 0..=n.min(a.top) {
        for x in a.basis(d) {
            p.add_term((x, x), a.one());
        }
    }
    p
}

/// `R_n = 1_A ⊗ P_n ⊗ 1_H` and `R_n⁻¹ = (S⊗id)R_n`; `identity` is the group identity.
pub fn build_r(dcp: &DoubleCrossProduct, p: &Elem2, variant: UnitVariant, identity: u32) -> (Elem2, Elem2) {
    let one_a = match variant {
        UnitVariant::Unit => dcp.a.unit().clone(),
        UnitVariant::Literal => dcp.a.elem(BasisIndex::new(0, identity)),
    };
    let mut r = Elem2::new();
    for ((hx, ax), c) in p.iter() {
        let left = dcp.pure(&one_a, &dcp.h.elem(*hx));
        let right = dcp.pure(&dcp.a.elem(*ax), dcp.h.unit());
        for (x, d) in left.iter() {
            for (y, e) in right.iter() {
                r.add_term((*x, *y), c.mul(d).mul(e));
            }
        }
    }
    let mut r_inv = Elem2::new();
    for ((x, y), c) in r.iter() {
        let sx = dcp.d.antipode_basis(*x).expect("antipode");
        for (k, d) in sx.iter() {
            r_inv.add_term((*k, *y), c.mul(d));
        }
    }
    (r, r_inv)
}

/// `A = T_B(M)^cop`, `H = T^c_{B*}(M*)`, Kronecker τ and dual-basis copairings up to `levels`.
pub fn build_lqt(m: &HopfBimoduleData, top: u32, levels: u32, variant: UnitVariant) -> Result<LqtStructure, LqtError> {
    let a = opposite_coalgebra(&tensor_hopf(m, top)?);
    let h = cotensor_hopf(&dualize_bimodule(m), top)?;
    let tau = quiver_skew_pairing(&a, &h)?;
    let dcp = double_cross_product(&a, &h, &tau, m.base)?;
    if let Some(e) = first_failure(&dcp.exchange_report()) {
        return Err(e);
    }
    let mut out = Vec::new();
    for n in 0..=levels.min(top) {
        let p = canonical_copairing(&dcp.a, n);
        let (r, r_inv) = build_r(&dcp, &p, variant, m.group.identity());
        out.push(Level { n, p, r, r_inv });
    }
    Ok(LqtStructure { dcp, variant, levels: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodules::{canonical_bimodule, default_characters, example_bimodule};
    use crate::exactlin::Field;
    use crate::gradedhopf::verify_hopf;
    use crate::quivers::{build_hopf_quiver, FiniteGroup, Ramification};

    fn example_arrow_module() -> HopfBimoduleData {
        let g = FiniteGroup::cyclic(2);
        let q = build_hopf_quiver(g.clone(), Ramification::new(&g, &[(0, 3)]).unwrap());
        let m = example_bimodule(&q, Field::Rational, &default_characters(Field::Rational)).unwrap();
        dualize_bimodule(&m)
    }

    fn one_loop() -> HopfBimoduleData {
        let g = FiniteGroup::cyclic(1);
        let q = build_hopf_quiver(g.clone(), Ramification::new(&g, &[(0, 1)]).unwrap());
        dualize_bimodule(&canonical_bimodule(&q, Field::Rational).unwrap())
    }

    fn idx(h: &GradedHopfAlgebra, s: &str) -> BasisIndex {
        h.find_label(s).unwrap_or_else(|| panic!("no basis element {s}"))
    }

    #[test]
    fn tau_on_degree_zero_is_evaluation() {
        let s = build_lqt(&example_arrow_module(), 1, 1, UnitVariant::Unit).unwrap();
        let (a, h) = (&s.dcp.a, &s.dcp.h);
        let pg = idx(a, "p_g1");
        let g = idx(h, "g1");
        let e = idx(h, "e");
        assert!(s.dcp.tau.tau(g, pg).is_one());
        assert!(s.dcp.tau.tau(e, pg).is_zero());
        // τ(1_H, x) = ε_A(x)
        for x in a.all_basis() {
            assert_eq!(s.dcp.tau.eval(h.unit(), &a.elem(x)), *a.counit_basis(x));
        }
    }

    #[test]
    fn copairing_examples() {
        let s = build_lqt(&one_loop(), 2, 2, UnitVariant::Unit).unwrap();
        let (a, h) = (&s.dcp.a, &s.dcp.h);
        let mut p1 = Elem2::new();
        p1.add_term((idx(h, "e"), idx(a, "p_e")), a.one());
        p1.add_term((idx(h, "a[e->e;1]"), idx(a, "a[e->e;1]")), a.one());
        assert_eq!(s.levels[1].p, p1);

        let z2 = build_lqt(&example_arrow_module(), 1, 1, UnitVariant::Unit).unwrap();
        let (a, h) = (&z2.dcp.a, &z2.dcp.h);
        let mut p0 = Elem2::new();
        p0.add_term((idx(h, "e"), idx(a, "p_e")), a.one());
        p0.add_term((idx(h, "g1"), idx(a, "p_g1")), a.one());
        assert_eq!(z2.levels[0].p, p0);
        // 1_A = p_e + p_g expands R_0 into four simple tensors
        assert_eq!(z2.levels[0].r.len(), 4);
        let w: Elem2 = {
            let mut w = z2.levels[1].p.clone();
            w.sub(&z2.levels[0].p);
            w
        };
        assert!(w.keys().all(|(x, y)| x.degree == 1 && y.degree == 1));
        assert_eq!(w.len(), 6);
    }

    #[test]
    fn double_cross_product_degree_zero() {
        let s = build_lqt(&example_arrow_module(), 2, 2, UnitVariant::Unit).unwrap();
        let dcp = &s.dcp;
        assert_eq!(dcp.d.dims(), vec![4, 24, 108]);
        assert_eq!(dcp.d.dims().iter().sum::<usize>(), 136);
        assert!(dcp.exchange_report().passed());
        // (1⊗g)(p_h⊗1) = p_{ghg⁻¹}⊗g
        let g = FiniteGroup::cyclic(2);
        for x in g.elements() {
            for y in g.elements() {
                let hx = BasisIndex::new(0, x);
                let py = BasisIndex::new(0, y);
                let lhs = dcp.d.mul(&dcp.embed_h(&dcp.h.elem(hx)), &dcp.embed_a(&dcp.a.elem(py))).unwrap();
                let expect = dcp.d.elem(dcp.index(BasisIndex::new(0, g.conj(x, y)), hx));
                assert_eq!(lhs, expect);
            }
        }
        let r = verify_hopf(&dcp.d);
        assert!(r.passed(), "{:?}", r.failures());
    }

    #[test]
    fn tau_inverse_matches_convolution() {
        let s = build_lqt(&example_arrow_module(), 2, 2, UnitVariant::Unit).unwrap();
        let r = verify_skew_pairing(&s.dcp.tau, &s.dcp.a, &s.dcp.h);
        assert!(r.passed(), "{:?}", r.failures());
    }

    #[test]
    fn example_level_one_is_local_quasitriangular() {
        let s = build_lqt(&example_arrow_module(), 2, 2, UnitVariant::Unit).unwrap();
        for n in 0..=1 {
            let r = verify_lqt(&s, n).unwrap();
            assert!(r.passed(), "n={n}: {:?}", r.projected);
        }
        // the truncated copairing is only a copairing after restricting degrees
        let r = verify_lqt(&s, 1).unwrap();
        assert!(!r.exact_check("CP1").unwrap().passed());
    }

    #[test]
    fn literal_unit_fails_counit_law() {
        let s = build_lqt(&example_arrow_module(), 1, 1, UnitVariant::Literal).unwrap();
        let r = verify_lqt(&s, 0).unwrap();
        assert!(!r.passed());
        assert!(!r.check("R-CP3").unwrap().passed());
        assert!(r.check("R-CP4").unwrap().passed());
    }

    #[test]
    fn one_loop_cp1_excess_term() {
        let s = build_lqt(&one_loop(), 2, 2, UnitVariant::Unit).unwrap();
        let r = verify_lqt(&s, 1).unwrap();
        assert!(r.passed());
        assert!(!r.exact_check("CP1").unwrap().passed());
    }

    #[test]
    fn budget_is_enforced() {
        let s = build_lqt(&example_arrow_module(), 1, 1, UnitVariant::Unit).unwrap();
        assert!(matches!(verify_lqt(&s, 1), Err(LqtError::Budget { need: 2, .. })));
        assert!(matches!(qybe_defect(&s, 1), Err(LqtError::Budget { need: 3, .. })));
        assert_eq!(required_top(0), 1);
    }

    #[test]
    fn deleting_a_term_of_r_is_detected() {
        let mut s = build_lqt(&example_arrow_module(), 1, 1, UnitVariant::Unit).unwrap();
        let first = *s.levels[0].r.keys().next().unwrap();
        s.levels[0].r.set(first, Field::Rational.zero());
        let r = verify_lqt(&s, 0).unwrap();
        let failed: Vec<&str> = r.projected.iter().filter(|c| !c.passed()).map(|c| c.axiom.as_str()).collect();
        assert!(failed.contains(&"R-CP3") || failed.contains(&"LQT3"), "{failed:?}");
    }

    #[test]
    fn degree_zero_doubles_over_s3() {
        let g = FiniteGroup::symmetric(3);
        let q = build_hopf_quiver(g.clone(), Ramification::new(&g, &[]).unwrap());
        let m = dualize_bimodule(&canonical_bimodule(&q, Field::Rational).unwrap());
        let s = build_lqt(&m, 1, 1, UnitVariant::Unit).unwrap();
        assert_eq!(s.dcp.d.dims(), vec![36, 0]);
        let r = verify_lqt(&s, 0).unwrap();
        assert!(r.passed(), "{:?}", r.projected);
        assert!(r.exact.iter().all(|c| c.passed()));
        let s = build_lqt(&m, 0, 0, UnitVariant::Unit).unwrap();
        assert!(qybe_defect(&s, 0).unwrap().is_zero());
    }

    #[test]
    fn second_construction_on_example() {
        let g = FiniteGroup::cyclic(2);
        let q = build_hopf_quiver(g.clone(), Ramification::new(&g, &[(0, 3)]).unwrap());
        let m = example_bimodule(&q, Field::Rational, &default_characters(Field::Rational)).unwrap();
        let s = build_lqt(&m, 2, 2, UnitVariant::Unit).unwrap();
        assert_eq!(s.dcp.d.dim(0), 4);
        assert_eq!(s.dcp.a.label(BasisIndex::new(0, 1)), "g1");
        assert_eq!(s.dcp.h.label(BasisIndex::new(0, 1)), "p_g1");
        assert!(s.dcp.tau.tau(BasisIndex::new(0, 1), BasisIndex::new(0, 1)).is_one());
        for n in 0..=1 {
            let r = verify_lqt(&s, n).unwrap();
            assert!(r.passed(), "n={n}: {:?}", r.projected);
        }
        assert!(verify_hopf(&s.dcp.d).passed());
    }

    #[test]
    fn levels_are_coherent() {
        let s = build_lqt(&example_arrow_module(), 2, 2, UnitVariant::Unit).unwrap();
        for n in 0..2 {
            let low = s.levels[n].r.filter(|(x, y)| x.degree <= n as u32 && y.degree <= n as u32);
            let high = s.levels[n + 1].r.filter(|(x, y)| x.degree <= n as u32 && y.degree <= n as u32);
            assert_eq!(low, high);
        }
    }

    #[test]
    fn one_loop_yang_baxter() {
        let s = build_lqt(&one_loop(), 3, 3, UnitVariant::Unit).unwrap();
        assert_eq!(s.dcp.d.dims().iter().sum::<usize>(), 10);
        assert!(qybe_defect(&s, 1).unwrap().is_zero());
    }
}
