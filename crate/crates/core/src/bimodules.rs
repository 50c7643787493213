//! Hopf bimodules over kG and (kG)* carried by the arrows of a Hopf quiver.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{Comb, Field, Scalar};
use crate::quivers::{FiniteGroup, HopfQuiver};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BimoduleError {
    #[error("axiom {axiom} fails at {witness}")]
    Axiom { axiom: String, witness: String },
    #[error("{0}")]
    Input(String),
}

/// Which finite-dimensional group Hopf algebra the bimodule lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseKind {
    /// kG, basis the group elements.
    Group,
    /// (kG)*, basis the dual idempotents p_g.
    DualGroup,
}

impl BaseKind {
    pub fn dual(self) -> BaseKind {
        match self {
            BaseKind::Group => BaseKind::DualGroup,
            BaseKind::DualGroup => BaseKind::Group,
        }
    }
}

/// Structure maps of kG or (kG)* on basis indices `0..|G|`.
#[derive(Clone, Debug)]
pub struct BaseHopf {
    pub kind: BaseKind,
    pub group: FiniteGroup,
    pub field: Field,
}

impl BaseHopf {
    pub fn new(kind: BaseKind, group: FiniteGroup, field: Field) -> Self {
        BaseHopf { kind, group, field }
    }

    pub fn dim(&self) -> u32 {
        self.group.order()
    }

    pub fn mul(&self, a: u32, b: u32) -> Comb<u32> {
        match self.kind {
            BaseKind::Group => Comb::term(self.group.mul(a, b), self.field.one()),
            BaseKind::DualGroup if a == b => Comb::term(a, self.field.one()),
            BaseKind::DualGroup => Comb::new(),
        }
    }

    pub fn unit(&self) -> Comb<u32> {
        match self.kind {
            BaseKind::Group => Comb::term(self.group.identity(), self.field.one()),
            BaseKind::DualGroup => self.group.elements().map(|g| (g, self.field.one())).collect(),
        }
    }

    pub fn comul(&self, a: u32) -> Comb<(u32, u32)> {
        match self.kind {
            BaseKind::Group => Comb::term((a, a), self.field.one()),
            BaseKind::DualGroup => self
                .group
                .elements()
                .map(|x| ((x, self.group.mul(self.group.inv(x), a)), self.field.one()))
                .collect(),
        }
    }

    pub fn counit(&self, a: u32) -> Scalar {
        match self.kind {
            BaseKind::Group => self.field.one(),
            BaseKind::DualGroup if a == self.group.identity() => self.field.one(),
            BaseKind::DualGroup => self.field.zero(),
        }
    }

    pub fn antipode(&self, a: u32) -> Comb<u32> {
        Comb::term(self.group.inv(a), self.field.one())
    }

    pub fn label(&self, a: u32) -> String {
        match self.kind {
            BaseKind::Group => self.group.label(a).to_string(),
            BaseKind::DualGroup => format!("p_{}", self.group.label(a)),
        }
    }
}

/// Left kG-coaction `a ↦ t(a)⊗a` and right coaction `a ↦ a⊗s(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowComodule {
    pub left_coact: Vec<Comb<(u32, u32)>>,
    pub right_coact: Vec<Comb<(u32, u32)>>,
}

/// Left (kG)*-action `p·a = ⟨p,t(a)⟩a` and right action `a·p = ⟨p,s(a)⟩a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowModule {
    pub left_act: Vec<Vec<Comb<u32>>>,
    pub right_act: Vec<Vec<Comb<u32>>>,
}

pub fn arrow_comodule(q: &HopfQuiver, field: Field) -> ArrowComodule {
    let one = field.one();
    let m = q.num_arrows() as u32;
    ArrowComodule {
        left_coact: (0..m).map(|a| Comb::term((q.t(a), a), one.clone())).collect(),
        right_coact: (0..m).map(|a| Comb::term((a, q.s(a)), one.clone())).collect(),
    }
}

pub fn arrow_module(q: &HopfQuiver, field: Field) -> ArrowModule {
    let one = field.one();
    let m = q.num_arrows() as u32;
    let proj = |a: u32, v: u32| if v == a { Comb::term(a, one.clone()) } else { Comb::new() };
    ArrowModule {
        left_act: q.group.elements().map(|g| (0..m).map(|a| if q.t(a) == g { proj(a, a) } else { Comb::new() }).collect()).collect(),
        right_act: (0..m).map(|a| q.group.elements().map(|g| if q.s(a) == g { proj(a, a) } else { Comb::new() }).collect()).collect(),
    }
}

/// The four structure maps on a finite basis (the arrows), over kG or (kG)*.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfBimoduleData {
    pub base: BaseKind,
    pub group: FiniteGroup,
    pub field: Field,
    pub carrier: Vec<String>,
    /// `left_act[b][m] = b·m`
    pub left_act: Vec<Vec<Comb<u32>>>,
    /// `right_act[m][b] = m·b`
    pub right_act: Vec<Vec<Comb<u32>>>,
    /// `δ⁻(m) = Σ b⊗m'` keyed `(b, m')`
    pub left_coact: Vec<Comb<(u32, u32)>>,
    /// `δ⁺(m) = Σ m'⊗b` keyed `(m', b)`
    pub right_coact: Vec<Comb<(u32, u32)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomFailure {
    pub axiom: String,
    pub witness: String,
}

impl HopfBimoduleData {
    pub fn dim(&self) -> u32 {
        self.carrier.len() as u32
    }

    pub fn base_hopf(&self) -> BaseHopf {
        BaseHopf::new(self.base, self.group.clone(), self.field)
    }

    pub fn act_left(&self, b: u32, m: u32) -> &Comb<u32> {
        &self.left_act[b as usize][m as usize]
    }

    pub fn act_right(&self, m: u32, b: u32) -> &Comb<u32> {
        &self.right_act[m as usize][b as usize]
    }

    fn act_left_vec(&self, b: &Comb<u32>, v: &Comb<u32>) -> Comb<u32> {
        let mut out = Comb::new();
        for (bi, bc) in b.iter() {
            for (mi, mc) in v.iter() {
                out.axpy(&bc.mul(mc), self.act_left(*bi, *mi));
            }
        }
        out
    }

    fn act_right_vec(&self, v: &Comb<u32>, b: &Comb<u32>) -> Comb<u32> {
        let mut out = Comb::new();
        for (mi, mc) in v.iter() {
            for (bi, bc) in b.iter() {
                out.axpy(&bc.mul(mc), self.act_right(*mi, *bi));
            }
        }
        out
    }

    /// Checks module, comodule, bicomodule and Hopf-compatibility laws; first failure per axiom.
    pub fn verify(&self) -> Vec<AxiomFailure> {
        let base = self.base_hopf();
        let nb = base.dim();
        let nm = self.dim();
        let mut fails: Vec<AxiomFailure> = Vec::new();
        let fail = |axiom: &str, witness: String, fails: &mut Vec<AxiomFailure>| {
            if !fails.iter().any(|f| f.axiom == axiom) {
                fails.push(AxiomFailure { axiom: axiom.to_string(), witness });
            }
        };
        let unit = base.unit();
        let basis_m = |m: u32| Comb::term(m, self.field.one());
        let basis_b = |b: u32| Comb::term(b, self.field.one());

        for m in 0..nm {
            let lm = self.act_left_vec(&unit, &basis_m(m));
            if lm != basis_m(m) {
                fail("left-unital", format!("m={}", self.carrier[m as usize]), &mut fails);
            }
            let rm = self.act_right_vec(&basis_m(m), &unit);
            if rm != basis_m(m) {
                fail("right-unital", format!("m={}", self.carrier[m as usize]), &mut fails);
            }
        }
        for b in 0..nb {
            for b2 in 0..nb {
                let prod = base.mul(b, b2);
                for m in 0..nm {
                    let lhs = self.act_left_vec(&prod, &basis_m(m));
                    let rhs = self.act_left_vec(&basis_b(b), self.act_left(b2, m));
                    if lhs != rhs {
                        fail("left-associative", format!("b={}, b'={}, m={}", base.label(b), base.label(b2), self.carrier[m as usize]), &mut fails);
                    }
                    let lhs = self.act_right_vec(&basis_m(m), &prod);
                    let rhs = self.act_right_vec(self.act_right(m, b), &basis_b(b2));
                    if lhs != rhs {
                        fail("right-associative", format!("m={}, b={}, b'={}", self.carrier[m as usize], base.label(b), base.label(b2)), &mut fails);
                    }
                    let lhs = self.act_right_vec(self.act_left(b, m), &basis_b(b2));
                    let rhs = self.act_left_vec(&basis_b(b), self.act_right(m, b2));
                    if lhs != rhs {
                        fail("bimodule", format!("b={}, m={}, b'={}", base.label(b), self.carrier[m as usize], base.label(b2)), &mut fails);
                    }
                }
            }
        }

        for m in 0..nm {
            let w = || format!("m={}", self.carrier[m as usize]);
            let dl = &self.left_coact[m as usize];
            let dr = &self.right_coact[m as usize];
            // counit
            let mut cl = Comb::new();
            for ((b, m2), c) in dl.iter() {
                cl.add_term(*m2, c.mul(&base.counit(*b)));
            }
            if cl != basis_m(m) {
                fail("left-counit", w(), &mut fails);
            }
            let mut cr = Comb::new();
            for ((m2, b), c) in dr.iter() {
                cr.add_term(*m2, c.mul(&base.counit(*b)));
            }
            if cr != basis_m(m) {
                fail("right-counit", w(), &mut fails);
            }
            // coassociativity
            let mut lhs: Comb<(u32, u32, u32)> = Comb::new();
            let mut rhs: Comb<(u32, u32, u32)> = Comb::new();
            for ((b, m2), c) in dl.iter() {
                for ((x, y), d) in base.comul(*b).iter() {
                    lhs.add_term((*x, *y, *m2), c.mul(d));
                }
                for ((b2, m3), d) in self.left_coact[*m2 as usize].iter() {
                    rhs.add_term((*b, *b2, *m3), c.mul(d));
                }
            }
            if lhs != rhs {
                fail("left-coassociative", w(), &mut fails);
            }
            let mut lhs: Comb<(u32, u32, u32)> = Comb::new();
            let mut rhs: Comb<(u32, u32, u32)> = Comb::new();
            for ((m2, b), c) in dr.iter() {
                for ((x, y), d) in base.comul(*b).iter() {
                    rhs.add_term((*m2, *x, *y), c.mul(d));
                }
                for ((m3, b2), d) in self.right_coact[*m2 as usize].iter() {
                    lhs.add_term((*m3, *b2, *b), c.mul(d));
                }
            }
            if lhs != rhs {
                fail("right-coassociative", w(), &mut fails);
            }
            // (δ⁻⊗id)δ⁺ = (id⊗δ⁺)δ⁻
            let mut lhs: Comb<(u32, u32, u32)> = Comb::new();
            for ((m2, b), c) in dr.iter() {
                for ((b2, m3), d) in self.left_coact[*m2 as usize].iter() {
                    lhs.add_term((*b2, *m3, *b), c.mul(d));
                }
            }
            let mut rhs: Comb<(u32, u32, u32)> = Comb::new();
            for ((b, m2), c) in dl.iter() {
                for ((m3, b2), d) in self.right_coact[*m2 as usize].iter() {
                    rhs.add_term((*b, *m3, *b2), c.mul(d));
                }
            }
            if lhs != rhs {
                fail("bicomodule", w(), &mut fails);
            }
        }

        // Coactions are bimodule maps for the diagonal structures.
        for b in 0..nb {
            let db = base.comul(b);
            for m in 0..nm {
                let w = || format!("b={}, m={}", base.label(b), self.carrier[m as usize]);
                // δ⁻(b·m) = Σ b1 m₋₁ ⊗ b2·m₀
                let lhs = self.coact_left_vec(self.act_left(b, m));
                let mut rhs: Comb<(u32, u32)> = Comb::new();
                for ((b1, b2), c) in db.iter() {
                    for ((x, m0), d) in self.left_coact[m as usize].iter() {
                        let cd = c.mul(d);
                        for (y, e) in base.mul(*b1, *x).iter() {
                            for (m1, f) in self.act_left(*b2, *m0).iter() {
                                rhs.add_term((*y, *m1), cd.mul(e).mul(f));
                            }
                        }
                    }
                }
                if lhs != rhs {
                    fail("left-coaction-left-linear", w(), &mut fails);
                }
                // δ⁻(m·b) = Σ m₋₁ b1 ⊗ m₀·b2
                let lhs = self.coact_left_vec(self.act_right(m, b));
                let mut rhs: Comb<(u32, u32)> = Comb::new();
                for ((b1, b2), c) in db.iter() {
                    for ((x, m0), d) in self.left_coact[m as usize].iter() {
                        let cd = c.mul(d);
                        for (y, e) in base.mul(*x, *b1).iter() {
                            for (m1, f) in self.act_right(*m0, *b2).iter() {
                                rhs.add_term((*y, *m1), cd.mul(e).mul(f));
                            }
                        }
                    }
                }
                if lhs != rhs {
                    fail("left-coaction-right-linear", w(), &mut fails);
                }
                // δ⁺(b·m) = Σ b1·m₀ ⊗ b2 m₁
                let lhs = self.coact_right_vec(self.act_left(b, m));
                let mut rhs: Comb<(u32, u32)> = Comb::new();
                for ((b1, b2), c) in db.iter() {
                    for ((m0, x), d) in self.right_coact[m as usize].iter() {
                        let cd = c.mul(d);
                        for (m1, f) in self.act_left(*b1, *m0).iter() {
                            for (y, e) in base.mul(*b2, *x).iter() {
                                rhs.add_term((*m1, *y), cd.mul(e).mul(f));
                            }
                        }
                    }
                }
                if lhs != rhs {
                    fail("right-coaction-left-linear", w(), &mut fails);
                }
                // δ⁺(m·b) = Σ m₀·b1 ⊗ m₁ b2
                let lhs = self.coact_right_vec(self.act_right(m, b));
                let mut rhs: Comb<(u32, u32)> = Comb::new();
                for ((b1, b2), c) in db.iter() {
                    for ((m0, x), d) in self.right_coact[m as usize].iter() {
                        let cd = c.mul(d);
                        for (m1, f) in self.act_right(*m0, *b1).iter() {
                            for (y, e) in base.mul(*x, *b2).iter() {
                                rhs.add_term((*m1, *y), cd.mul(e).mul(f));
                            }
                        }
                    }
                }
                if lhs != rhs {
                    fail("right-coaction-right-linear", w(), &mut fails);
                }
            }
        }
        fails
    }

    pub fn coact_left_vec(&self, v: &Comb<u32>) -> Comb<(u32, u32)> {
        v.map_linear(|m| self.left_coact[*m as usize].clone())
    }

    pub fn coact_right_vec(&self, v: &Comb<u32>) -> Comb<(u32, u32)> {
        v.map_linear(|m| self.right_coact[*m as usize].clone())
    }

    pub fn check(self) -> Result<Self, BimoduleError> {
        match self.verify().into_iter().next() {
            None => Ok(self),
            Some(f) => Err(BimoduleError::Axiom { axiom: f.axiom, witness: f.witness }),
        }
    }
}

/// Completes the arrow comodule with user action tables and verifies every law.
///
/// `left[g][a] = g·a`, `right[a][g] = a·g`.
pub fn assemble_hopf_bimodule(
    q: &HopfQuiver,
    field: Field,
    left: Vec<Vec<Comb<u32>>>,
    right: Vec<Vec<Comb<u32>>>,
) -> Result<HopfBimoduleData, BimoduleError> {
    let n = q.group.order() as usize;
    let m = q.num_arrows();
    if left.len() != n || left.iter().any(|r| r.len() != m) {
        return Err(BimoduleError::Input(format!("left action table must be {n}x{m}")));
    }
    if right.len() != m || right.iter().any(|r| r.len() != n) {
        return Err(BimoduleError::Input(format!("right action table must be {m}x{n}")));
    }
    for row in left.iter().chain(right.iter()) {
        for v in row {
            if v.keys().any(|&k| k as usize >= m) {
                return Err(BimoduleError::Input("action table refers to a missing arrow".into()));
            }
            if v.iter().any(|(_, c)| c.field() != field) {
                return Err(BimoduleError::Input("action table scalars are not in the ground field".into()));
            }
        }
    }
    let co = arrow_comodule(q, field);
    HopfBimoduleData {
        base: BaseKind::Group,
        group: q.group.clone(),
        field,
        carrier: (0..m as u32).map(|a| q.arrow_label(a)).collect(),
        left_act: left,
        right_act: right,
        left_coact: co.left_coact,
        right_coact: co.right_coact,
    }
    .check()
}

/// `g·(x,c,i) = (gx,c,i)` and `(x,c,i)·h = (xh, h⁻¹ch, i)`.
pub fn canonical_bimodule(q: &HopfQuiver, field: Field) -> Result<HopfBimoduleData, BimoduleError> {
    let g = &q.group;
    let one = field.one();
    let left = g
        .elements()
        .map(|h| {
            (0..q.num_arrows() as u32)
                .map(|a| {
                    let ar = q.arrow(a);
                    let b = q.find_arrow(g.mul(h, ar.source), ar.class_elem, ar.index).expect("arrow exists");
                    Comb::term(b, one.clone())
                })
                .collect()
        })
        .collect();
    let right = (0..q.num_arrows() as u32)
        .map(|a| {
            let ar = q.arrow(a);
            g.elements()
                .map(|h| {
                    let c = g.mul(g.mul(g.inv(h), ar.class_elem), h);
                    let b = q.find_arrow(g.mul(ar.source, h), c, ar.index).expect("arrow exists");
                    Comb::term(b, one.clone())
                })
                .collect()
        })
        .collect();
    assemble_hopf_bimodule(q, field, left, right)
}

/// The Z₂ quiver with three loops per vertex and characters `chi[i][h]`.
///
/// Left action `g·a_x⁽ⁱ⁾ = a_{gx}⁽ⁱ⁾`; the right action is given on `a_e⁽ⁱ⁾` by
/// the character and extended to `a_x⁽ⁱ⁾` through the bimodule law, which
/// yields `a_x⁽ⁱ⁾·h = χ⁽ⁱ⁾(h) a_{xh}⁽ⁱ⁾`.
pub fn example_bimodule(q: &HopfQuiver, field: Field, chi: &[Vec<Scalar>; 3]) -> Result<HopfBimoduleData, BimoduleError> {
    if field.characteristic() == 2 {
        return Err(BimoduleError::Input("the Z2 example needs char k != 2".into()));
    }
    let g = &q.group;
    let e = g.identity();
    if g.order() != 2 || q.num_arrows() != 6 || q.arrows.iter().any(|a| a.class_elem != e) {
        return Err(BimoduleError::Input("the Z2 example needs G = Z2 with three loops at each vertex".into()));
    }
    for (i, c) in chi.iter().enumerate() {
        if c.len() != 2 {
            return Err(BimoduleError::Input(format!("character {} must have 2 values", i + 1)));
        }
    }
    let one = field.one();
    let left = g
        .elements()
        .map(|h| {
            (0..6u32)
                .map(|a| {
                    let ar = q.arrow(a);
                    Comb::term(q.find_arrow(g.mul(h, ar.source), e, ar.index).expect("loop"), one.clone())
                })
                .collect()
        })
        .collect();
    let right = (0..6u32)
        .map(|a| {
            let ar = q.arrow(a);
            g.elements()
                .map(|h| {
                    let b = q.find_arrow(g.mul(ar.source, h), e, ar.index).expect("loop");
                    Comb::term(b, chi[ar.index as usize][h as usize].clone())
                })
                .collect()
        })
        .collect();
    assemble_hopf_bimodule(q, field, left, right)
}

/// Trivial and sign characters of Z₂ as value tables.
pub fn z2_character(field: Field, sign: bool) -> Vec<Scalar> {
    vec![field.one(), if sign { field.from_i64(-1) } else { field.one() }]
}

pub fn default_characters(field: Field) -> [Vec<Scalar>; 3] {
    [z2_character(field, false), z2_character(field, false), z2_character(field, true)]
}

/// Transposes actions into coactions and back; the base becomes its dual.
///
/// The dual basis of the base is indexed like the base itself (`g ↔ p_g`).
pub fn dualize_bimodule(m: &HopfBimoduleData) -> HopfBimoduleData {
    let nb = m.group.order();
    let nm = m.dim();
    let mut left_act = vec![vec![Comb::new(); nm as usize]; nb as usize];
    let mut right_act = vec![vec![Comb::new(); nb as usize]; nm as usize];
    for x in 0..nm {
        for ((b, a), c) in m.left_coact[x as usize].iter() {
            left_act[*b as usize][*a as usize].add_term(x, c.clone());
        }
        for ((a, b), c) in m.right_coact[x as usize].iter() {
            right_act[*a as usize][*b as usize].add_term(x, c.clone());
        }
    }
    let mut left_coact = vec![Comb::new(); nm as usize];
    let mut right_coact = vec![Comb::new(); nm as usize];
    for b in 0..nb {
        for x in 0..nm {
            for (a, c) in m.act_left(b, x).iter() {
                left_coact[*a as usize].add_term((b, x), c.clone());
            }
            for (a, c) in m.act_right(x, b).iter() {
                right_coact[*a as usize].add_term((x, b), c.clone());
            }
        }
    }
    HopfBimoduleData {
        base: m.base.dual(),
        group: m.group.clone(),
        field: m.field,
        carrier: m.carrier.clone(),
        left_act,
        right_act,
        left_coact,
        right_coact,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quivers::{build_hopf_quiver, Ramification};

    fn example() -> (HopfQuiver, HopfBimoduleData) {
        let g = FiniteGroup::cyclic(2);
        let q = build_hopf_quiver(g.clone(), Ramification::new(&g, &[(0, 3)]).unwrap());
        let f = Field::Rational;
        let m = example_bimodule(&q, f, &default_characters(f)).unwrap();
        (q, m)
    }

    #[test]
    fn arrow_comodule_on_loops() {
        let (q, _) = example();
        let co = arrow_comodule(&q, Field::Rational);
        let one = Field::Rational.one();
        let a = q.find_arrow(1, 0, 0).unwrap();
        assert_eq!(co.left_coact[a as usize], Comb::term((1, a), one.clone()));
        assert_eq!(co.right_coact[a as usize], Comb::term((a, 1), one));
    }

    #[test]
    fn arrow_module_projections() {
        let (q, _) = example();
        let am = arrow_module(&q, Field::Rational);
        let a = q.find_arrow(1, 0, 0).unwrap();
        assert_eq!(am.left_act[1][a as usize], Comb::term(a, Field::Rational.one()));
        assert!(am.left_act[0][a as usize].is_zero());
        let mut unit_sum = Comb::new();
        for g in 0..2 {
            unit_sum.add(&am.left_act[g][a as usize]);
        }
        assert_eq!(unit_sum, Comb::term(a, Field::Rational.one()));
    }

    #[test]
    fn example_passes_all_axioms() {
        let (_, m) = example();
        assert!(m.verify().is_empty());
        let d = dualize_bimodule(&m);
        assert_eq!(d.verify(), vec![]);
    }

    #[test]
    fn one_loop_trivial_group() {
        let g = FiniteGroup::cyclic(1);
        let q = build_hopf_quiver(g.clone(), Ramification::new(&g, &[(0, 1)]).unwrap());
        let m = canonical_bimodule(&q, Field::Rational).unwrap();
        let d = dualize_bimodule(&m);
        assert!(d.verify().is_empty());
        assert_eq!(d.left_act, m.left_act);
        assert_eq!(dualize_bimodule(&d), m);
    }

    #[test]
    fn broken_right_action_is_named() {
        let (q, m) = example();
        let one = Field::Rational.one();
        let mut right = m.right_act.clone();
        // send a loop at e to a loop at e under g, although the source must move to g
        let a = q.find_arrow(0, 0, 0).unwrap();
        right[a as usize][1] = Comb::term(a, one);
        let err = assemble_hopf_bimodule(&q, Field::Rational, m.left_act.clone(), right.clone()).unwrap_err();
        match err {
            BimoduleError::Axiom { axiom, .. } => assert_eq!(axiom, "bimodule"),
            other => panic!("unexpected {other:?}"),
        }
        let broken = HopfBimoduleData { right_act: right, ..m };
        let names: Vec<String> = broken.verify().into_iter().map(|f| f.axiom).collect();
        assert!(names.contains(&"right-coaction-right-linear".to_string()));
    }

    #[test]
    fn double_dual_is_identity() {
        let (_, m) = example();
        assert_eq!(dualize_bimodule(&dualize_bimodule(&m)), m);
    }

    #[test]
    fn dual_actions_are_arrow_module() {
        let (q, m) = example();
        let d = dualize_bimodule(&m);
        let am = arrow_module(&q, Field::Rational);
        assert_eq!(d.base, BaseKind::DualGroup);
        assert_eq!(d.left_act, am.left_act);
        assert_eq!(d.right_act, am.right_act);
    }

    #[test]
    fn dual_coactions_mirror_characters() {
        let (q, m) = example();
        let d = dualize_bimodule(&m);
        // δ⁺(a*) on the sign-twisted loop at e carries χ(g) = -1 on the p_g leg
        let a = q.find_arrow(0, 0, 2).unwrap();
        let b = q.find_arrow(1, 0, 2).unwrap();
        assert_eq!(d.right_coact[a as usize].get(&(b, 1)), Some(&Field::Rational.from_i64(-1)));
    }

    #[test]
    fn canonical_on_s3() {
        let g = FiniteGroup::symmetric(3);
        let classes = crate::quivers::conjugacy_classes(&g);
        let t = classes.iter().find(|c| c.len() == 3).unwrap()[0];
        let q = build_hopf_quiver(g.clone(), Ramification::new(&g, &[(t, 1)]).unwrap());
        let m = canonical_bimodule(&q, Field::Rational).unwrap();
        assert!(dualize_bimodule(&m).verify().is_empty());
    }

    #[test]
    fn prime_field_example() {
        let g = FiniteGroup::cyclic(2);
        let q = build_hopf_quiver(g.clone(), Ramification::new(&g, &[(0, 3)]).unwrap());
        let f = Field::prime(3).unwrap();
        assert!(example_bimodule(&q, f, &default_characters(f)).is_ok());
    }
}
