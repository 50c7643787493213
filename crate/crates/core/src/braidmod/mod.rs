//! Finite-cycle module certificates, their braidings and coactions.

mod braiding;
mod yd;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bimodules::BaseKind;
use crate::exactlin::{BasisIndex, Field, Scalar, SparseMatrix};
use crate::gradedhopf::{CheckOutcome, Elem};
use crate::lqt::DoubleCrossProduct;
use crate::quivers::{conjugacy_classes, FiniteGroup};

pub use braiding::{
    braiding_at_level, braiding_matrix, check_braid_relation, hexagon_check, naturality_check, tensor_bounds,
    tensor_module, BraidReport, BraidingOperator,
};
pub use yd::{yd_structure, YdStructure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("insufficient level: need R_{need}, structure has levels up to {have}")]
    Level { need: u32, have: u32 },
    #[error("module {module}: {msg}")]
    Shape { module: String, msg: String },
    #[error("grading and action are incompatible: {0}")]
    Compatibility(String),
    #[error("braiding is not invertible: {0}")]
    NotInvertible(String),
}

/// Matrix certificate of a D-module with finite cycles.
#[derive(Clone, Debug)]
pub struct FiniteCycleModule {
    pub name: String,
    pub field: Field,
    pub labels: Vec<String>,
    /// `n_x` per basis vector.
    pub bounds: Vec<u32>,
    pub grading: Option<Vec<u32>>,
    /// The action is only known on `D_0`.
    pub degree_zero_only: bool,
    /// Matrices are supplied for degrees `≤ top`; absent ones act by zero.
    pub top: u32,
    actions: BTreeMap<BasisIndex, SparseMatrix>,
}

impl FiniteCycleModule {
    pub fn new(name: &str, field: Field, labels: Vec<String>, bounds: Vec<u32>, top: u32) -> Self {
        FiniteCycleModule {
            name: name.to_string(),
            field,
            labels,
            bounds,
            grading: None,
            degree_zero_only: false,
            top,
            actions: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn max_bound(&self) -> u32 {
        self.bounds.iter().copied().max().unwrap_or(0)
    }

    /// Degrees on which the action is known.
    pub fn known_top(&self) -> u32 {
        if self.degree_zero_only {
            0
        } else {
            self.top
        }
    }

    pub fn set_action(&mut self, x: BasisIndex, m: SparseMatrix) {
        if m.is_zero() {
            self.actions.remove(&x);
        } else {
            self.actions.insert(x, m);
        }
    }

    pub fn action(&self, x: BasisIndex) -> Option<&SparseMatrix> {
        self.actions.get(&x)
    }

    pub fn actions(&self) -> impl Iterator<Item = (&BasisIndex, &SparseMatrix)> {
        self.actions.iter()
    }

    pub fn rho(&self, x: BasisIndex) -> SparseMatrix {
        self.actions.get(&x).cloned().unwrap_or_else(|| self.zero())
    }

    pub fn rho_elem(&self, v: &Elem) -> SparseMatrix {
        let mut out = self.zero();
        for (x, c) in v.iter() {
            if let Some(m) = self.actions.get(x) {
                for i in 0..m.rows {
                    for (j, e) in m.row(i) {
                        out.add_at(i, j, &c.mul(e));
                    }
                }
            }
        }
        out
    }

    fn zero(&self) -> SparseMatrix {
        SparseMatrix::zero(self.field, self.dim(), self.dim())
    }

    /// The same degree-0 data declared as a module over all of D, positive degrees acting by zero.
    pub fn extend_by_zero(&self, top: u32) -> FiniteCycleModule {
        let mut m = self.clone();
        m.name = format!("{} (extended by zero)", self.name);
        m.degree_zero_only = false;
        m.top = top;
        m
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleReport {
    pub module: String,
    pub checks: Vec<CheckOutcome>,
}

impl ModuleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.axiom == name)
    }
}

fn column_nonzero(m: &SparseMatrix, j: usize) -> bool {
    (0..m.rows).any(|i| m.row(i).any(|(k, _)| k == j))
}

/// Unit, multiplicativity, finite cycles and grading, exhaustively over in-budget basis elements.
pub fn check_module(m: &FiniteCycleModule, dcp: &DoubleCrossProduct) -> ModuleReport {
    let d = &dcp.d;
    let n = m.dim();
    let top = m.known_top().min(d.top);
    let mut shape = CheckOutcome::named("shape");
    shape.note(m.bounds.len() == n, || format!("{} bounds for dimension {n}", m.bounds.len()));
    shape.note(m.field == d.field, || "module and algebra over different fields".into());
    if let Some(g) = &m.grading {
        shape.note(g.len() == n, || format!("{} grades for dimension {n}", g.len()));
    }
    for (x, a) in &m.actions {
        let known = x.degree <= top && (x.ordinal as usize) < d.dim(x.degree);
        shape.note(known, || format!("action given for {x:?}, outside the in-budget basis"));
        shape.note(a.rows == n && a.cols == n, || format!("ρ({}) is {}x{}", d.label(*x), a.rows, a.cols));
    }
    if !shape.passed() {
        return ModuleReport { module: m.name.clone(), checks: vec![shape] };
    }

    let mut unit = CheckOutcome::named("unit");
    let one = m.rho_elem(d.unit());
    unit.note(one.is_identity(), || format!("ρ(1) differs from the identity at {:?}", one.first_difference(&SparseMatrix::identity(m.field, n))));

    let basis: Vec<BasisIndex> = (0..=top).flat_map(|k| d.basis(k)).collect();
    let mult = basis
        .par_iter()
        .map(|&x| {
            let mut out = CheckOutcome::named("multiplicative");
            let rx = m.rho(x);
            for &y in &basis {
                if x.degree + y.degree > top {
                    continue;
                }
                let Some(xy) = d.mul_basis(x, y) else { continue };
                let lhs = rx.mul(&m.rho(y)).expect("square matrices");
                let rhs = m.rho_elem(xy);
                out.note(lhs == rhs, || {
                    format!("ρ({})ρ({}) ≠ ρ({}·{}) at {:?}", d.label(x), d.label(y), d.label(x), d.label(y), lhs.first_difference(&rhs))
                });
            }
            out
        })
        .reduce(|| CheckOutcome::named("multiplicative"), merge);

    let mut cycles = CheckOutcome::named("finite-cycles");
    for (x, a) in &m.actions {
        for (i, b) in m.bounds.iter().enumerate() {
            if x.degree > *b {
                cycles.note(!column_nonzero(a, i), || {
                    format!("{} of degree {} moves {} with bound {b}", d.label(*x), x.degree, m.labels[i])
                });
            }
        }
    }

    let mut checks = vec![shape, unit, mult, cycles];
    if let Some(g) = &m.grading {
        let mut graded = CheckOutcome::named("graded");
        for (x, a) in &m.actions {
            for i in 0..n {
                for (j, _) in a.row(i) {
                    graded.note(g[i] == g[j] + x.degree, || {
                        format!("{} sends {} of grade {} to grade {}", d.label(*x), m.labels[j], g[j], g[i])
                    });
                }
            }
        }
        checks.push(graded);
    }
    ModuleReport { module: m.name.clone(), checks }
}

fn merge(mut a: CheckOutcome, b: CheckOutcome) -> CheckOutcome {
    a.attempted += b.attempted;
    a.failed += b.failed;
    if a.witness.is_none() {
        a.witness = b.witness;
    }
    a
}

/// The counit action on a line.
pub fn trivial_module(dcp: &DoubleCrossProduct) -> FiniteCycleModule {
    let d = &dcp.d;
    let mut m = FiniteCycleModule::new("trivial", d.field, vec!["1".into()], vec![0], d.top);
    for x in d.all_basis() {
        let e = d.counit_basis(x);
        if !e.is_zero() {
            let mut a = SparseMatrix::zero(d.field, 1, 1);
            a.set(0, 0, e.clone());
            m.set_action(x, a);
        }
    }
    m
}

/// A `D_0`-module from a G-graded G-module: `p_h` projects onto `M_h`, `g` acts as given.
pub fn d0_module_from_yd(
    dcp: &DoubleCrossProduct,
    group: &FiniteGroup,
    name: &str,
    labels: Vec<String>,
    grading: &[u32],
    action: &[SparseMatrix],
) -> Result<FiniteCycleModule, BraidError> {
    let n = labels.len();
    let f = dcp.d.field;
    let shape = |msg: String| BraidError::Shape { module: name.to_string(), msg };
    if grading.len() != n || action.len() != group.order() as usize {
        return Err(shape(format!("{} grades and {} action matrices for dimension {n}", grading.len(), action.len())));
    }
    if let Some(g) = grading.iter().find(|&&g| g >= group.order()) {
        return Err(shape(format!("grade {g} is not a group element")));
    }
    if action.iter().any(|a| a.rows != n || a.cols != n) {
        return Err(shape("action matrix of the wrong size".into()));
    }
    if !action[group.identity() as usize].is_identity() {
        return Err(shape("the identity does not act as the identity".into()));
    }
    for g in group.elements() {
        for h in group.elements() {
            let gh = action[g as usize].mul(&action[h as usize]).expect("square");
            if gh != action[group.mul(g, h) as usize] {
                return Err(shape(format!("ρ({})ρ({}) ≠ ρ({}{})", group.label(g), group.label(h), group.label(g), group.label(h))));
            }
        }
    }
    for g in group.elements() {
        let a = &action[g as usize];
        for j in 0..n {
            for i in 0..n {
                if !a.get(i, j).is_zero() && grading[i] != group.conj(g, grading[j]) {
                    return Err(BraidError::Compatibility(format!(
                        "{} sends {} of degree {} into degree {}, expected {}",
                        group.label(g),
                        labels[j],
                        group.label(grading[j]),
                        group.label(grading[i]),
                        group.label(group.conj(g, grading[j]))
                    )));
                }
            }
        }
    }
    let projection = |h: u32| {
        let mut p = SparseMatrix::zero(f, n, n);
        for (i, g) in grading.iter().enumerate() {
            if *g == h {
                p.set(i, i, f.one());
            }
        }
        p
    };
    let d = &dcp.d;
    let positive = (1..=d.top).any(|k| d.dim(k) > 0);
    let mut m = FiniteCycleModule::new(name, f, labels, vec![0; n], if positive { 0 } else { d.top });
    m.degree_zero_only = positive;
    for x in d.basis(0) {
        let (a, h) = dcp.parts(x);
        let rho = match dcp.a_kind {
            BaseKind::DualGroup => projection(a.ordinal).mul(&action[h.ordinal as usize]),
            BaseKind::Group => action[a.ordinal as usize].mul(&projection(h.ordinal)),
        }
        .expect("square");
        m.set_action(x, rho);
    }
    Ok(m)
}

fn permutation_action(group: &FiniteGroup, support: &[u32]) -> Vec<SparseMatrix> {
    let f = Field::Rational;
    let pos: BTreeMap<u32, usize> = support.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    group
        .elements()
        .map(|g| {
            let mut a = SparseMatrix::zero(f, support.len(), support.len());
            for (j, h) in support.iter().enumerate() {
                a.set(pos[&group.conj(g, *h)], j, f.one());
            }
            a
        })
        .collect()
}

fn retarget(ms: Vec<SparseMatrix>, f: Field) -> Vec<SparseMatrix> {
    ms.into_iter()
        .map(|m| {
            let mut out = SparseMatrix::zero(f, m.rows, m.cols);
            for i in 0..m.rows {
                for (j, _) in m.row(i) {
                    out.set(i, j, f.one());
                }
            }
            out
        })
        .collect()
}

/// Conjugation on the span of a union of conjugacy classes, graded by the elements themselves.
pub fn conjugation_module_on(
    dcp: &DoubleCrossProduct,
    group: &FiniteGroup,
    name: &str,
    support: &[u32],
) -> Result<FiniteCycleModule, BraidError> {
    let labels = support.iter().map(|g| format!("v_{}", group.label(*g))).collect();
    let action = retarget(permutation_action(group, support), dcp.d.field);
    d0_module_from_yd(dcp, group, name, labels, support, &action)
}

/// `kG` with `g·v_h = v_{ghg⁻¹}` and `v_h` in degree h.
pub fn conjugation_module(dcp: &DoubleCrossProduct, group: &FiniteGroup) -> Result<FiniteCycleModule, BraidError> {
    let all: Vec<u32> = group.elements().collect();
    conjugation_module_on(dcp, group, "conjugation", &all)
}

/// The conjugation module restricted to the class of `rep`.
pub fn class_module(dcp: &DoubleCrossProduct, group: &FiniteGroup, rep: u32) -> Result<FiniteCycleModule, BraidError> {
    let class = conjugacy_classes(group)
        .into_iter()
        .find(|c| c.contains(&rep))
        .ok_or_else(|| BraidError::Shape { module: "class".into(), msg: format!("{rep} is not a group element") })?;
    conjugation_module_on(dcp, group, &format!("class of {}", group.label(rep)), &class)
}

/// A line in degree `h0` on which G acts by the character `psi`.
pub fn character_module(
    dcp: &DoubleCrossProduct,
    group: &FiniteGroup,
    h0: u32,
    psi: &[Scalar],
) -> Result<FiniteCycleModule, BraidError> {
    let f = dcp.d.field;
    let action: Vec<SparseMatrix> = psi
        .iter()
        .map(|c| {
            let mut a = SparseMatrix::zero(f, 1, 1);
            a.set(0, 0, c.clone());
            a
        })
        .collect();
    let name = format!("character in degree {}", group.label(h0));
    d0_module_from_yd(dcp, group, &name, vec!["v".into()], &[h0], &action)
}

#[cfg(test)]
mod tests;
