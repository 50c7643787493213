use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::exactlin::{Field, Scalar, SparseMatrix};
use crate::gradedhopf::{CheckOutcome, Elem2};
use crate::lqt::{DoubleCrossProduct, LqtStructure};

use super::{BraidError, FiniteCycleModule};

/// `C_{U,V}: U⊗V → V⊗U` with its inverse; tensor bases ordered with the left factor slow.
#[derive(Clone, Debug)]
pub struct BraidingOperator {
    pub source: (String, String),
    pub dims: (usize, usize),
    /// Level used for each source basis pair `(i, j)`, row-major.
    pub levels: Vec<u32>,
    pub matrix: SparseMatrix,
    pub inverse: SparseMatrix,
}

impl BraidingOperator {
    pub fn level(&self) -> u32 {
        self.levels.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BraidReport {
    pub checks: Vec<CheckOutcome>,
}

impl BraidReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.axiom == name)
    }
}

fn same_field(u: &FiniteCycleModule, v: &FiniteCycleModule) -> Result<Field, BraidError> {
    if u.field != v.field {
        return Err(BraidError::Shape { module: v.name.clone(), msg: format!("field differs from {}", u.name) });
    }
    Ok(u.field)
}

fn columns(m: &SparseMatrix) -> Vec<Vec<(usize, Scalar)>> {
    let mut out = vec![Vec::new(); m.cols];
    for i in 0..m.rows {
        for (j, c) in m.row(i) {
            out[j].push((i, c.clone()));
        }
    }
    out
}

/// Columns of `Σ ρ_V(r″) ⊗ ρ_U(r′)` composed with the flip, keyed by source pair.
/// `swap` exchanges the roles for the inverse formula `y⊗x ↦ Σ r′x ⊗ r″y`.
fn assemble(
    r: &Elem2,
    u: &FiniteCycleModule,
    v: &FiniteCycleModule,
    wanted: &[(usize, usize)],
    swap: bool,
) -> BTreeMap<(usize, usize), BTreeMap<usize, Scalar>> {
    let (du, dv) = (u.dim(), v.dim());
    let terms: Vec<_> = r
        .iter()
        .filter_map(|((x, y), c)| {
            let (mu, mv) = (u.action(*x)?, v.action(*y)?);
            Some((columns(mu), columns(mv), c.clone()))
        })
        .collect();
    wanted
        .par_iter()
        .map(|&(i, j)| {
            let mut col: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (cu, cv, c) in &terms {
                for (l, a) in &cu[i] {
                    for (k, b) in &cv[j] {
                        let row = if swap { l * dv + k } else { k * du + l };
                        let t = c.mul(a).mul(b);
                        let e = col.entry(row).or_insert_with(|| t.field().zero());
                        *e = e.add(&t);
                    }
                }
            }
            col.retain(|_, c| !c.is_zero());
            ((i, j), col)
        })
        .collect()
}

fn check_level(s: &LqtStructure, n: u32) -> Result<(), BraidError> {
    if (n as usize) < s.levels.len() {
        Ok(())
    } else {
        Err(BraidError::Level { need: n, have: s.levels.len() as u32 - 1 })
    }
}

fn check_supplied(m: &FiniteCycleModule) -> Result<(), BraidError> {
    if !m.degree_zero_only && m.max_bound() > m.top {
        return Err(BraidError::Shape {
            module: m.name.clone(),
            msg: format!("bound {} exceeds the supplied degrees {}", m.max_bound(), m.top),
        });
    }
    Ok(())
}

/// `C^{R_n}` with one global level, no admissibility check.
pub fn braiding_at_level(
    s: &LqtStructure,
    u: &FiniteCycleModule,
    v: &FiniteCycleModule,
    n: u32,
) -> Result<SparseMatrix, BraidError> {
    let f = same_field(u, v)?;
    check_level(s, n)?;
    let (du, dv) = (u.dim(), v.dim());
    let wanted: Vec<(usize, usize)> = (0..du).flat_map(|i| (0..dv).map(move |j| (i, j))).collect();
    let mut c = SparseMatrix::zero(f, du * dv, du * dv);
    for ((i, j), col) in assemble(&s.levels[n as usize].r, u, v, &wanted, false) {
        for (row, e) in col {
            c.set(row, i * dv + j, e);
        }
    }
    Ok(c)
}

/// Minimal admissible level for a basis pair; `R_n = R_0` throughout when D is concentrated in degree 0.
fn pair_level(s: &LqtStructure, u: &FiniteCycleModule, v: &FiniteCycleModule, i: usize, j: usize) -> u32 {
    let flat = (1..=s.top()).all(|k| s.dcp.d.dim(k) == 0);
    if u.degree_zero_only || v.degree_zero_only || flat {
        0
    } else {
        2 * u.bounds[i] + 2 * v.bounds[j] + 1
    }
}

/// `x⊗y ↦ Σ R″y ⊗ R′x` with per-pair levels and the inverse from `R⁻¹`.
pub fn braiding_matrix(
    s: &LqtStructure,
    u: &FiniteCycleModule,
    v: &FiniteCycleModule,
) -> Result<BraidingOperator, BraidError> {
    let f = same_field(u, v)?;
    check_supplied(u)?;
    check_supplied(v)?;
    let (du, dv) = (u.dim(), v.dim());
    let mut by_level: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    let mut levels = Vec::with_capacity(du * dv);
    for i in 0..du {
        for j in 0..dv {
            let n = pair_level(s, u, v, i, j);
            by_level.entry(n).or_default().push((i, j));
            levels.push(n);
        }
    }
    let mut matrix = SparseMatrix::zero(f, du * dv, du * dv);
    let mut inverse = SparseMatrix::zero(f, du * dv, du * dv);
    for (n, wanted) in &by_level {
        check_level(s, *n)?;
        let level = &s.levels[*n as usize];
        for ((i, j), col) in assemble(&level.r, u, v, wanted, false) {
            for (row, e) in col {
                matrix.set(row, i * dv + j, e);
            }
        }
        for ((i, j), col) in assemble(&level.r_inv, u, v, wanted, true) {
            for (row, e) in col {
                inverse.set(row, j * du + i, e);
            }
        }
    }
    let op = BraidingOperator { source: (u.name.clone(), v.name.clone()), dims: (du, dv), levels, matrix, inverse };
    for (name, p) in [("C⁻¹C", op.inverse.mul(&op.matrix)), ("CC⁻¹", op.matrix.mul(&op.inverse))] {
        let p = p.expect("square");
        if !p.is_identity() {
            let id = SparseMatrix::identity(f, du * dv);
            return Err(BraidError::NotInvertible(format!("{name} differs from the identity at {:?}", p.first_difference(&id))));
        }
    }
    Ok(op)
}

fn id(f: Field, n: usize) -> SparseMatrix {
    SparseMatrix::identity(f, n)
}

fn compose(ms: &[SparseMatrix]) -> SparseMatrix {
    let mut it = ms.iter();
    let mut acc = it.next().expect("nonempty").clone();
    for m in it {
        acc = m.mul(&acc).expect("composable");
    }
    acc
}

fn compare(name: &str, lhs: &SparseMatrix, rhs: &SparseMatrix) -> CheckOutcome {
    let mut c = CheckOutcome::named(name);
    c.note(lhs == rhs, || format!("first differing entry {:?}", lhs.first_difference(rhs)));
    c
}

/// `(C_{V,W}⊗id)(id⊗C_{U,W})(C_{U,V}⊗id) = (id⊗C_{U,V})(C_{U,W}⊗id)(id⊗C_{V,W})` on `U⊗V⊗W`.
pub fn check_braid_relation(c_uv: &BraidingOperator, c_uw: &BraidingOperator, c_vw: &BraidingOperator) -> CheckOutcome {
    let (du, dv) = c_uv.dims;
    let dw = c_uw.dims.1;
    if c_uw.dims.0 != du || c_vw.dims != (dv, dw) {
        let mut c = CheckOutcome::named("braid-relation");
        c.note(false, || "inconsistent module dimensions".into());
        return c;
    }
    let f = c_uv.matrix.field;
    let lhs = compose(&[
        c_uv.matrix.kron(&id(f, dw)),
        id(f, dv).kron(&c_uw.matrix),
        c_vw.matrix.kron(&id(f, du)),
    ]);
    let rhs = compose(&[
        id(f, du).kron(&c_vw.matrix),
        c_uw.matrix.kron(&id(f, dv)),
        id(f, dw).kron(&c_uv.matrix),
    ]);
    compare("braid-relation", &lhs, &rhs)
}

/// `n_{x⊗y} = 2n_x + 2n_y`.
pub fn tensor_bounds(u: &FiniteCycleModule, v: &FiniteCycleModule) -> Vec<u32> {
    u.bounds.iter().flat_map(|a| v.bounds.iter().map(move |b| 2 * a + 2 * b)).collect()
}

/// `h·(x⊗y) = Σ h₁x ⊗ h₂y`, bounds tightened to what the action shows.
pub fn tensor_module(
    u: &FiniteCycleModule,
    v: &FiniteCycleModule,
    dcp: &DoubleCrossProduct,
) -> Result<FiniteCycleModule, BraidError> {
    let f = same_field(u, v)?;
    let d = &dcp.d;
    let zero_only = u.degree_zero_only || v.degree_zero_only;
    let top = u.known_top().min(v.known_top()).min(d.top);
    let labels = u.labels.iter().flat_map(|a| v.labels.iter().map(move |b| format!("{a}⊗{b}"))).collect();
    let mut m = FiniteCycleModule::new(&format!("({}⊗{})", u.name, v.name), f, labels, tensor_bounds(u, v), top);
    m.degree_zero_only = zero_only;
    if zero_only {
        m.top = 0;
    }
    let basis: Vec<_> = (0..=top).flat_map(|k| d.basis(k)).collect();
    let actions: Vec<_> = basis
        .par_iter()
        .map(|&x| {
            let mut acc = SparseMatrix::zero(f, u.dim() * v.dim(), u.dim() * v.dim());
            for ((x1, x2), c) in d.comul_basis(x).iter() {
                let (Some(a), Some(b)) = (u.action(*x1), v.action(*x2)) else { continue };
                let k = a.kron(b);
                for i in 0..k.rows {
                    for (j, e) in k.row(i) {
                        acc.add_at(i, j, &c.mul(e));
                    }
                }
            }
            (x, acc)
        })
        .collect();
    let dv = v.dim();
    let mut seen = vec![0u32; m.dim()];
    for (x, a) in actions {
        for i in 0..a.rows {
            for (j, _) in a.row(i) {
                seen[j] = seen[j].max(x.degree);
            }
        }
        m.set_action(x, a);
    }
    for (k, b) in m.bounds.iter_mut().enumerate() {
        let sum = u.bounds[k / dv] + v.bounds[k % dv];
        *b = (*b).min(if sum <= top { seen[k] } else { sum });
    }
    if let (Some(gu), Some(gv)) = (&u.grading, &v.grading) {
        m.grading = Some(gu.iter().flat_map(|a| gv.iter().map(move |b| a + b)).collect());
    }
    Ok(m)
}

/// Both hexagons for `(U, V, W)` plus the braid relation among the three braidings.
pub fn hexagon_check(
    s: &LqtStructure,
    u: &FiniteCycleModule,
    v: &FiniteCycleModule,
    w: &FiniteCycleModule,
) -> Result<BraidReport, BraidError> {
    let dcp = &s.dcp;
    let f = same_field(u, v)?;
    same_field(u, w)?;
    let (du, dv, dw) = (u.dim(), v.dim(), w.dim());
    let c_uv = braiding_matrix(s, u, v)?;
    let c_uw = braiding_matrix(s, u, w)?;
    let c_vw = braiding_matrix(s, v, w)?;
    let uv = tensor_module(u, v, dcp)?;
    let vw = tensor_module(v, w, dcp)?;
    let c_uv_w = braiding_matrix(s, &uv, w)?;
    let c_u_vw = braiding_matrix(s, u, &vw)?;
    let left = compose(&[id(f, du).kron(&c_vw.matrix), c_uw.matrix.kron(&id(f, dv))]);
    let right = compose(&[c_uv.matrix.kron(&id(f, dw)), id(f, dv).kron(&c_uw.matrix)]);
    Ok(BraidReport {
        checks: vec![
            compare("hexagon-uv-w", &c_uv_w.matrix, &left),
            compare("hexagon-u-vw", &c_u_vw.matrix, &right),
            check_braid_relation(&c_uv, &c_uw, &c_vw),
        ],
    })
}

fn is_module_map(f: &SparseMatrix, a: &FiniteCycleModule, b: &FiniteCycleModule, dcp: &DoubleCrossProduct) -> CheckOutcome {
    let mut c = CheckOutcome::named("module-map");
    let top = a.known_top().min(b.known_top()).min(dcp.d.top);
    if f.rows != b.dim() || f.cols != a.dim() {
        c.note(false, || format!("map is {}x{}, expected {}x{}", f.rows, f.cols, b.dim(), a.dim()));
        return c;
    }
    for x in (0..=top).flat_map(|k| dcp.d.basis(k)) {
        let lhs = f.mul(&a.rho(x)).expect("shape");
        let rhs = b.rho(x).mul(f).expect("shape");
        c.note(lhs == rhs, || format!("map does not commute with {}", dcp.d.label(x)));
    }
    c
}

/// `(g⊗f)∘C_{U,V} = C_{U′,V′}∘(f⊗g)` for module maps `f: U→U′`, `g: V→V′`.
pub fn naturality_check(
    s: &LqtStructure,
    (u, u2, f): (&FiniteCycleModule, &FiniteCycleModule, &SparseMatrix),
    (v, v2, g): (&FiniteCycleModule, &FiniteCycleModule, &SparseMatrix),
) -> Result<BraidReport, BraidError> {
    let mut checks = vec![is_module_map(f, u, u2, &s.dcp), is_module_map(g, v, v2, &s.dcp)];
    if checks.iter().all(|c| c.passed()) {
        let c = braiding_matrix(s, u, v)?;
        let c2 = braiding_matrix(s, u2, v2)?;
        let lhs = g.kron(f).mul(&c.matrix).expect("shape");
        let rhs = c2.matrix.mul(&f.kron(g)).expect("shape");
        checks.push(compare("naturality", &lhs, &rhs));
    }
    Ok(BraidReport { checks })
}
