//! Degree-truncated graded Hopf algebras with explicit bases and sparse tables.

mod antipode;
mod data;
mod cotensor;
mod duality;
mod tensor;
mod verify;
mod words;

use thiserror::Error;

use crate::bimodules::{BaseHopf, BimoduleError};
use crate::exactlin::{BasisIndex, Comb, Field, Scalar};

pub use antipode::compute_antipode;
pub use data::{elem2_data, elem_data, parse_elem, parse_elem2, parse_index, AlgebraData, Term2Data, TermData};
pub use cotensor::cotensor_hopf;
pub use duality::{duality_check, DualityPairing};
pub use tensor::tensor_hopf;
pub use verify::{verify_hopf, CheckOutcome, HopfReport};
pub use words::Piece;

pub type Elem = Comb<BasisIndex>;
pub type Elem2 = Comb<(BasisIndex, BasisIndex)>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("product of degrees {0} and {1} exceeds truncation {2}")]
    Budget(u32, u32, u32),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("antipode system infeasible in degree {0}")]
    Infeasible(u32),
    #[error("antipode not unique in degree {0}")]
    Underdetermined(u32),
    #[error(transparent)]
    Bimodule(#[from] BimoduleError),
    #[error("{0}")]
    Mismatch(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedHopfAlgebra {
    pub name: String,
    pub field: Field,
    pub top: u32,
    labels: Vec<Vec<String>>,
    offsets: Vec<usize>,
    /// Flat `x*total + y`; `None` outside the degree budget.
    mul: Vec<Option<Elem>>,
    comul: Vec<Elem2>,
    counit: Vec<Scalar>,
    unit: Elem,
    antipode: Option<Vec<Elem>>,
    antipode_inv: Option<Vec<Elem>>,
}

impl GradedHopfAlgebra {
    /// Empty tables over the given per-degree bases; products in budget start at zero.
    pub fn with_bases(name: &str, field: Field, labels: Vec<Vec<String>>) -> Self {
        assert!(!labels.is_empty(), "need a degree-0 basis");
        let top = labels.len() as u32 - 1;
        let mut offsets = vec![0];
        for l in &labels {
            offsets.push(offsets.last().unwrap() + l.len());
        }
        let total = *offsets.last().unwrap();
        let mut mul = Vec::with_capacity(total * total);
        for i in 0..labels.len() {
            for _ in 0..labels[i].len() {
                for (j, l) in labels.iter().enumerate() {
                    for _ in 0..l.len() {
                        mul.push(if i + j <= top as usize { Some(Elem::new()) } else { None });
                    }
                }
            }
        }
        GradedHopfAlgebra {
            name: name.to_string(),
            field,
            top,
            labels,
            offsets,
            mul,
            comul: vec![Elem2::new(); total],
            counit: vec![field.zero(); total],
            unit: Elem::new(),
            antipode: None,
            antipode_inv: None,
        }
    }

    pub fn dim(&self, d: u32) -> usize {
        self.labels.get(d as usize).map_or(0, |l| l.len())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l.len()).collect()
    }

    pub fn total_dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn basis(&self, d: u32) -> impl Iterator<Item = BasisIndex> {
        (0..self.dim(d) as u32).map(move |o| BasisIndex::new(d, o))
    }

    pub fn all_basis(&self) -> impl Iterator<Item = BasisIndex> + '_ {
        (0..=self.top).flat_map(move |d| self.basis(d))
    }

    pub fn flat(&self, x: BasisIndex) -> usize {
        self.offsets[x.degree as usize] + x.ordinal as usize
    }

    pub fn unflat(&self, i: usize) -> BasisIndex {
        let d = self.offsets.partition_point(|&o| o <= i) - 1;
        BasisIndex::new(d as u32, (i - self.offsets[d]) as u32)
    }

    pub fn label(&self, x: BasisIndex) -> &str {
        &self.labels[x.degree as usize][x.ordinal as usize]
    }

    pub fn labels(&self, d: u32) -> &[String] {
        &self.labels[d as usize]
    }

    pub fn find_label(&self, s: &str) -> Option<BasisIndex> {
        self.all_basis().find(|x| self.label(*x) == s)
    }

    pub fn one(&self) -> Scalar {
        self.field.one()
    }

    pub fn elem(&self, x: BasisIndex) -> Elem {
        Elem::term(x, self.one())
    }

    pub fn show(&self, v: &Elem) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.iter().map(|(k, c)| format!("{}*{}", c, self.label(*k))).collect::<Vec<_>>().join(" + ")
    }

    pub fn show2(&self, v: &Elem2) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.iter()
            .map(|((a, b), c)| format!("{}*{}(x){}", c, self.label(*a), self.label(*b)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    // --- structure maps ---

    pub fn mul_basis(&self, x: BasisIndex, y: BasisIndex) -> Option<&Elem> {
        self.mul[self.flat(x) * self.total_dim() + self.flat(y)].as_ref()
    }

    pub fn mul(&self, u: &Elem, v: &Elem) -> Result<Elem, GradedError> {
        let mut out = Elem::new();
        for (x, a) in u.iter() {
            for (y, b) in v.iter() {
                let p = self.mul_basis(*x, *y).ok_or(GradedError::Budget(x.degree, y.degree, self.top))?;
                out.axpy(&a.mul(b), p);
            }
        }
        Ok(out)
    }

    /// Product in the tensor square, componentwise.
    pub fn mul2(&self, u: &Elem2, v: &Elem2) -> Result<Elem2, GradedError> {
        let mut out = Elem2::new();
        for ((x1, x2), a) in u.iter() {
            for ((y1, y2), b) in v.iter() {
                let p = self.mul_basis(*x1, *y1).ok_or(GradedError::Budget(x1.degree, y1.degree, self.top))?;
                let q = self.mul_basis(*x2, *y2).ok_or(GradedError::Budget(x2.degree, y2.degree, self.top))?;
                let ab = a.mul(b);
                for (k1, c1) in p.iter() {
                    let abc = ab.mul(c1);
                    for (k2, c2) in q.iter() {
                        out.add_term((*k1, *k2), abc.mul(c2));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn comul_basis(&self, x: BasisIndex) -> &Elem2 {
        &self.comul[self.flat(x)]
    }

    pub fn comul(&self, u: &Elem) -> Elem2 {
        u.map_linear(|x| self.comul_basis(*x).clone())
    }

    pub fn counit_basis(&self, x: BasisIndex) -> &Scalar {
        &self.counit[self.flat(x)]
    }

    pub fn counit(&self, u: &Elem) -> Scalar {
        u.iter().fold(self.field.zero(), |acc, (x, c)| acc.add(&c.mul(self.counit_basis(*x))))
    }

    pub fn unit(&self) -> &Elem {
        &self.unit
    }

    pub fn has_antipode(&self) -> bool {
        self.antipode.is_some() && self.antipode_inv.is_some()
    }

    pub fn antipode_basis(&self, x: BasisIndex) -> Option<&Elem> {
        self.antipode.as_ref().map(|s| &s[self.flat(x)])
    }

    pub fn antipode_inv_basis(&self, x: BasisIndex) -> Option<&Elem> {
        self.antipode_inv.as_ref().map(|s| &s[self.flat(x)])
    }

    pub fn antipode(&self, u: &Elem) -> Option<Elem> {
        let s = self.antipode.as_ref()?;
        Some(u.map_linear(|x| s[self.flat(*x)].clone()))
    }

    pub fn antipode_inv(&self, u: &Elem) -> Option<Elem> {
        let s = self.antipode_inv.as_ref()?;
        Some(u.map_linear(|x| s[self.flat(*x)].clone()))
    }

    // --- setters (construction and mutation tests) ---

    pub fn set_mul(&mut self, x: BasisIndex, y: BasisIndex, v: Elem) {
        let i = self.flat(x) * self.total_dim() + self.flat(y);
        assert!(self.mul[i].is_some(), "product outside the degree budget");
        self.mul[i] = Some(v);
    }

    pub fn set_comul(&mut self, x: BasisIndex, v: Elem2) {
        let i = self.flat(x);
        self.comul[i] = v;
    }

    pub fn set_counit(&mut self, x: BasisIndex, c: Scalar) {
        let i = self.flat(x);
        self.counit[i] = c;
    }

    pub fn set_unit(&mut self, v: Elem) {
        self.unit = v;
    }

    pub fn set_antipode(&mut self, s: Vec<Elem>, s_inv: Vec<Elem>) {
        assert_eq!(s.len(), self.total_dim());
        assert_eq!(s_inv.len(), self.total_dim());
        self.antipode = Some(s);
        self.antipode_inv = Some(s_inv);
    }

    pub fn set_antipode_at(&mut self, x: BasisIndex, v: Elem) {
        let i = self.flat(x);
        if let Some(s) = self.antipode.as_mut() {
            s[i] = v;
        }
    }

    /// The same structure restricted to degrees `≤ n`.
    pub fn truncate(&self, n: u32) -> GradedHopfAlgebra {
        let n = n.min(self.top);
        let mut out = GradedHopfAlgebra::with_bases(&self.name, self.field, self.labels[..=n as usize].to_vec());
        let basis: Vec<BasisIndex> = out.all_basis().collect();
        for &x in &basis {
            out.set_comul(x, self.comul_basis(x).clone());
            out.set_counit(x, self.counit_basis(x).clone());
            for &y in &basis {
                if x.degree + y.degree <= n {
                    let p = self.mul_basis(x, y).expect("in budget").filter(|k| k.degree <= n);
                    out.set_mul(x, y, p);
                }
            }
        }
        out.unit = self.unit.clone();
        if let (Some(s), Some(si)) = (&self.antipode, &self.antipode_inv) {
            let total = out.total_dim();
            out.antipode = Some(s[..total].to_vec());
            out.antipode_inv = Some(si[..total].to_vec());
        }
        out
    }
}

/// `B` as a graded Hopf algebra concentrated in degree 0.
pub fn base_algebra(b: &BaseHopf) -> GradedHopfAlgebra {
    let labels = vec![(0..b.dim()).map(|g| b.label(g)).collect()];
    let name = match b.kind {
        crate::bimodules::BaseKind::Group => "kG",
        crate::bimodules::BaseKind::DualGroup => "(kG)*",
    };
    let mut h = GradedHopfAlgebra::with_bases(name, b.field, labels);
    let idx = |g: u32| BasisIndex::new(0, g);
    for x in 0..b.dim() {
        for y in 0..b.dim() {
            h.set_mul(idx(x), idx(y), b.mul(x, y).map_keys(|g| idx(*g)));
        }
        h.set_comul(idx(x), b.comul(x).map_keys(|(p, q)| (idx(*p), idx(*q))));
        h.set_counit(idx(x), b.counit(x));
    }
    h.set_unit(b.unit().map_keys(|g| idx(*g)));
    let s: Vec<Elem> = (0..b.dim()).map(|x| b.antipode(x).map_keys(|g| idx(*g))).collect();
    h.set_antipode(s.clone(), s);
    h
}

/// Flipped comultiplication, antipode replaced by its inverse.
pub fn opposite_coalgebra(h: &GradedHopfAlgebra) -> GradedHopfAlgebra {
    let mut out = h.clone();
    out.name = match h.name.strip_suffix("^cop") {
        Some(base) => base.to_string(),
        None => format!("{}^cop", h.name),
    };
    for i in 0..out.comul.len() {
        out.comul[i] = h.comul[i].map_keys(|(a, b)| (*b, *a));
    }
    out.antipode = h.antipode_inv.clone();
    out.antipode_inv = h.antipode.clone();
    out
}
