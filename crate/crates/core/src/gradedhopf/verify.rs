use rayon::prelude::*;
use serde::Serialize;

use crate::exactlin::{BasisIndex, Comb};

use super::{Elem, Elem2, GradedHopfAlgebra};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckOutcome {
    pub axiom: String,
    pub attempted: usize,
    pub failed: usize,
    pub witness: Option<String>,
}

impl CheckOutcome {
    fn new(axiom: &str) -> Self {
        CheckOutcome { axiom: axiom.to_string(), attempted: 0, failed: 0, witness: None }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.attempted += 1;
        if !ok {
            self.failed += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    fn merge(mut self, other: CheckOutcome) -> CheckOutcome {
        self.attempted += other.attempted;
        self.failed += other.failed;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub(crate) fn named(axiom: &str) -> Self {
        Self::new(axiom)
    }

    pub(crate) fn note(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.record(ok, witness)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HopfReport {
    pub algebra: String,
    pub top: u32,
    pub checks: Vec<CheckOutcome>,
    /// Basis tuples whose check would leave the degree budget.
    pub skipped: usize,
}

impl HopfReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn check(&self, axiom: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn failures(&self) -> Vec<&CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }
}

fn apply_left(h: &GradedHopfAlgebra, d: &Elem2) -> Comb<(BasisIndex, BasisIndex, BasisIndex)> {
    let mut out = Comb::new();
    for ((a, b), c) in d.iter() {
        for ((p, q), e) in h.comul_basis(*a).iter() {
            out.add_term((*p, *q, *b), c.mul(e));
        }
    }
    out
}

fn apply_right(h: &GradedHopfAlgebra, d: &Elem2) -> Comb<(BasisIndex, BasisIndex, BasisIndex)> {
    let mut out = Comb::new();
    for ((a, b), c) in d.iter() {
        for ((p, q), e) in h.comul_basis(*b).iter() {
            out.add_term((*a, *p, *q), c.mul(e));
        }
    }
    out
}

/// μ(f⊗g)Δ(x) where the non-identity slot uses a table of images.
fn convolve(h: &GradedHopfAlgebra, x: BasisIndex, left: Option<&[Elem]>, right: Option<&[Elem]>) -> Option<Elem> {
    let mut out = Elem::new();
    for ((a, b), c) in h.comul_basis(x).iter() {
        let fa = left.map_or_else(|| h.elem(*a), |s| s[h.flat(*a)].clone());
        let gb = right.map_or_else(|| h.elem(*b), |s| s[h.flat(*b)].clone());
        out.axpy(c, &h.mul(&fa, &gb).ok()?);
    }
    Some(out)
}

pub fn verify_hopf(h: &GradedHopfAlgebra) -> HopfReport {
    let basis: Vec<BasisIndex> = h.all_basis().collect();
    let lab = |x: &BasisIndex| h.label(*x).to_string();
    let mut checks = Vec::new();
    let mut skipped = 0usize;

    let mut grading = CheckOutcome::new("grading");
    let mut coassoc = CheckOutcome::new("coassociativity");
    let mut counit = CheckOutcome::new("counit");
    let mut unit = CheckOutcome::new("unit");
    for x in &basis {
        let d = h.comul_basis(*x);
        grading.record(d.keys().all(|(a, b)| a.degree + b.degree == x.degree), || format!("Δ({})", lab(x)));
        coassoc.record(apply_left(h, d) == apply_right(h, d), || format!("x={}", lab(x)));
        let mut l = Elem::new();
        let mut r = Elem::new();
        for ((a, b), c) in d.iter() {
            l.add_term(*b, c.mul(h.counit_basis(*a)));
            r.add_term(*a, c.mul(h.counit_basis(*b)));
        }
        counit.record(l == h.elem(*x) && r == h.elem(*x), || format!("x={}", lab(x)));
        let ex = h.elem(*x);
        let ok = h.mul(h.unit(), &ex).ok() == Some(ex.clone()) && h.mul(&ex, h.unit()).ok() == Some(ex.clone());
        unit.record(ok, || format!("x={}", lab(x)));
    }
    let one = h.unit().clone();
    counit.record(h.counit(&one).is_one(), || "ε(1)".into());
    let mut one2 = Elem2::new();
    for (a, c) in one.iter() {
        for (b, d) in one.iter() {
            one2.add_term((*a, *b), c.mul(d));
        }
    }
    counit.record(h.comul(&one) == one2, || "Δ(1)".into());

    // pairs: grading of μ, bialgebra compatibility, multiplicative counit
    let pair_results: Vec<(CheckOutcome, CheckOutcome, usize)> = basis
        .par_iter()
        .map(|x| {
            let mut grading = CheckOutcome::new("grading");
            let mut bialg = CheckOutcome::new("bialgebra");
            let mut skipped = 0;
            for y in &basis {
                let Some(p) = h.mul_basis(*x, *y) else {
                    skipped += 1;
                    continue;
                };
                grading.record(p.keys().all(|k| k.degree <= x.degree + y.degree), || format!("{}·{}", lab(x), lab(y)));
                let lhs = h.comul(p);
                let ok = match h.mul2(h.comul_basis(*x), h.comul_basis(*y)) {
                    Ok(rhs) => lhs == rhs && h.counit(p) == h.counit_basis(*x).mul(h.counit_basis(*y)),
                    Err(_) => false,
                };
                bialg.record(ok, || format!("x={}, y={}", lab(x), lab(y)));
            }
            (grading, bialg, skipped)
        })
        .collect();
    let mut bialg = CheckOutcome::new("bialgebra");
    for (g, b, s) in pair_results {
        grading = grading.merge(g);
        bialg = bialg.merge(b);
        skipped += s;
    }

    let assoc_results: Vec<(CheckOutcome, usize)> = basis
        .par_iter()
        .map(|x| {
            let mut out = CheckOutcome::new("associativity");
            let mut skipped = 0;
            for y in &basis {
                for z in &basis {
                    if x.degree + y.degree + z.degree > h.top {
                        skipped += 1;
                        continue;
                    }
                    let xy = h.mul_basis(*x, *y).expect("in budget");
                    let yz = h.mul_basis(*y, *z).expect("in budget");
                    let l = h.mul(xy, &h.elem(*z));
                    let r = h.mul(&h.elem(*x), yz);
                    out.record(l.is_ok() && l == r, || format!("({}, {}, {})", lab(x), lab(y), lab(z)));
                }
            }
            (out, skipped)
        })
        .collect();
    let mut assoc = CheckOutcome::new("associativity");
    for (a, s) in assoc_results {
        assoc = assoc.merge(a);
        skipped += s;
    }
    checks.extend([grading, coassoc, counit, unit, assoc, bialg]);

    let mut left = CheckOutcome::new("antipode-left");
    let mut right = CheckOutcome::new("antipode-right");
    let mut inv = CheckOutcome::new("antipode-inverse");
    if let (Some(s), Some(si)) = (h.antipode.as_deref(), h.antipode_inv.as_deref()) {
        for x in &basis {
            let target = one.scaled(h.counit_basis(*x));
            left.record(convolve(h, *x, Some(s), None).as_ref() == Some(&target), || format!("x={}", lab(x)));
            right.record(convolve(h, *x, None, Some(s)).as_ref() == Some(&target), || format!("x={}", lab(x)));
            let ok = h.antipode(&si[h.flat(*x)]).as_ref() == Some(&h.elem(*x))
                && h.antipode_inv(&s[h.flat(*x)]).as_ref() == Some(&h.elem(*x));
            inv.record(ok, || format!("x={}", lab(x)));
        }
    } else {
        skipped += basis.len();
    }
    checks.extend([left, right, inv]);
    HopfReport { algebra: h.name.clone(), top: h.top, checks, skipped }
}
