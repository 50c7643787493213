use std::collections::HashMap;

use crate::exactlin::{BasisIndex, Scalar};

use super::verify::{CheckOutcome, HopfReport};
use super::{Elem, GradedError, GradedHopfAlgebra};

/// Kronecker pairing between a path-algebra-type basis and the matching
/// coordinate basis of the cotensor side: `⟨x, q⟩ = δ_{x,q}`.
#[derive(Clone, Debug)]
pub struct DualityPairing {
    pub top: u32,
    dims: Vec<usize>,
}

impl DualityPairing {
    pub fn new(a: &GradedHopfAlgebra, c: &GradedHopfAlgebra) -> Result<Self, GradedError> {
        if a.dims() != c.dims() {
            return Err(GradedError::Mismatch(format!("dimensions {:?} vs {:?}", a.dims(), c.dims())));
        }
        for x in a.all_basis().filter(|x| x.degree > 0) {
            if a.label(x) != c.label(x) {
                return Err(GradedError::Mismatch(format!("basis {x}: {} vs {}", a.label(x), c.label(x))));
            }
        }
        Ok(DualityPairing { top: a.top, dims: a.dims() })
    }

    pub fn pair(&self, x: &Elem, q: &Elem) -> Scalar {
        let f = x.iter().next().map(|(_, c)| c.field()).or_else(|| q.iter().next().map(|(_, c)| c.field()));
        let mut acc = match f {
            Some(f) => f.zero(),
            None => return crate::exactlin::Field::Rational.zero(),
        };
        for (k, c) in x.iter() {
            if let Some(d) = q.get(k) {
                acc = acc.add(&c.mul(d));
            }
        }
        acc
    }

    /// `x ↦ ⟨x, -⟩` as coordinates on the cotensor side.
    pub fn phi(&self, x: &Elem) -> Elem {
        x.clone()
    }

    /// Recovers an element from a functional restricted to degrees `≤ n`.
    pub fn psi(&self, n: u32, f: &Elem) -> Elem {
        f.filter(|k| k.degree <= n && (k.ordinal as usize) < self.dims[k.degree as usize])
    }
}

/// Multiplication of `a` against comultiplication of `c`, and the reverse, on every in-budget pair.
pub fn duality_check(a: &GradedHopfAlgebra, c: &GradedHopfAlgebra) -> Result<HopfReport, GradedError> {
    let pairing = DualityPairing::new(a, c)?;
    let lab = |x: &BasisIndex| a.label(*x).to_string();
    let basis: Vec<BasisIndex> = a.all_basis().collect();
    let mut skipped = 0;

    let dual_of = |h: &GradedHopfAlgebra| {
        let mut m: HashMap<(BasisIndex, BasisIndex), Elem> = HashMap::new();
        for q in &basis {
            for ((x, y), s) in h.comul_basis(*q).iter() {
                m.entry((*x, *y)).or_default().add_term(*q, s.clone());
            }
        }
        m
    };
    let from_c = dual_of(c);
    let from_a = dual_of(a);

    let mut mult = CheckOutcome::named("product-coproduct");
    let mut comult = CheckOutcome::named("coproduct-product");
    for x in &basis {
        for y in &basis {
            let (Some(pa), Some(pc)) = (a.mul_basis(*x, *y), c.mul_basis(*x, *y)) else {
                skipped += 1;
                continue;
            };
            let empty = Elem::new();
            mult.note(pa == from_c.get(&(*x, *y)).unwrap_or(&empty), || format!("x={}, y={}", lab(x), lab(y)));
            comult.note(pc == from_a.get(&(*x, *y)).unwrap_or(&empty), || format!("q={}, r={}", lab(x), lab(y)));
        }
    }
    let mut units = CheckOutcome::named("unit-counit");
    for q in &basis {
        let eq = pairing.pair(a.unit(), &c.elem(*q)) == *c.counit_basis(*q);
        let ea = pairing.pair(&a.elem(*q), c.unit()) == *a.counit_basis(*q);
        units.note(eq && ea, || format!("q={}", lab(q)));
    }
    let mut kron = CheckOutcome::named("kronecker");
    for x in &basis {
        for y in a.basis(x.degree) {
            let v = pairing.pair(&a.elem(*x), &c.elem(y));
            let ok = if *x == y { v.is_one() } else { v.is_zero() };
            kron.note(ok, || format!("⟨{}, {}⟩", lab(x), lab(&y)));
        }
    }
    Ok(HopfReport {
        algebra: format!("⟨{}, {}⟩", a.name, c.name),
        top: a.top,
        checks: vec![mult, comult, units, kron],
        skipped,
    })
}
