use std::collections::BTreeMap;

use crate::exactlin::{BasisIndex, Comb, LinearSystem};

use super::{Elem, GradedError, GradedHopfAlgebra};

/// Solves `Σ S(x₁)x₂ = ε(x)1` (or `Σ S⁻¹(x₂)x₁ = ε(x)1` when `inverse`) in degree `n`.
fn solve_degree(h: &GradedHopfAlgebra, n: u32, lower: &[Elem], inverse: bool) -> Result<Vec<Elem>, GradedError> {
    let dn = h.dim(n) as u32;
    let mut sys: LinearSystem<(u32, u32)> = LinearSystem::new(h.field);
    for x in h.basis(n) {
        let mut rows: BTreeMap<BasisIndex, Comb<(u32, u32)>> = BTreeMap::new();
        let mut rhs = h.unit().scaled(h.counit_basis(x));
        for ((a, b), c) in h.comul_basis(x).iter() {
            let (inner, outer) = if inverse { (*b, *a) } else { (*a, *b) };
            if inner.degree < n {
                let s = &lower[h.flat(inner)];
                let known = h.mul(s, &h.elem(outer))?;
                rhs.axpy(&c.neg(), &known);
                continue;
            }
            for z in 0..dn {
                let p = h.mul_basis(BasisIndex::new(n, z), outer).ok_or(GradedError::Budget(n, outer.degree, h.top))?;
                for (w, d) in p.iter() {
                    rows.entry(*w).or_default().add_term((inner.ordinal, z), c.mul(d));
                }
            }
        }
        let keys: std::collections::BTreeSet<BasisIndex> = rows.keys().chain(rhs.keys()).copied().collect();
        for w in keys {
            let row = rows.remove(&w).unwrap_or_default();
            let r = rhs.get(&w).cloned().unwrap_or_else(|| h.field.zero());
            sys.add_row(row, r).map_err(|_| GradedError::Infeasible(n))?;
        }
    }
    if sys.rank() != (dn as usize) * (dn as usize) {
        return Err(GradedError::Underdetermined(n));
    }
    let sol = sys.solve();
    let mut out = vec![Elem::new(); dn as usize];
    for ((y, z), c) in sol {
        out[y as usize].add_term(BasisIndex::new(n, z), c);
    }
    Ok(out)
}

/// Fills S and S⁻¹ degree by degree.
pub fn compute_antipode(h: &GradedHopfAlgebra) -> Result<GradedHopfAlgebra, GradedError> {
    let mut s: Vec<Elem> = Vec::with_capacity(h.total_dim());
    let mut si: Vec<Elem> = Vec::with_capacity(h.total_dim());
    for n in 0..=h.top {
        let a = solve_degree(h, n, &s, false)?;
        let b = solve_degree(h, n, &si, true)?;
        s.extend(a);
        si.extend(b);
    }
    let mut out = h.clone();
    out.set_antipode(s, si);
    Ok(out)
}
