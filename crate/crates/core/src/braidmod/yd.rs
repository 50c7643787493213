use rayon::prelude::*;
use serde::Serialize;

use crate::exactlin::{BasisIndex, Comb};
use crate::gradedhopf::CheckOutcome;
use crate::lqt::LqtStructure;

use super::{BraidError, FiniteCycleModule};

type Coact = Comb<(BasisIndex, usize)>;

/// `δ⁻(x) = Σ R″ ⊗ R′x` with the laws it was checked against.
#[derive(Clone, Debug, Serialize)]
pub struct YdStructure {
    pub module: String,
    /// Level used per basis vector.
    pub levels: Vec<u32>,
    #[serde(skip)]
    pub coaction: Vec<Coact>,
    pub checks: Vec<CheckOutcome>,
    /// Coaction laws hold but the left-left compatibility does not.
    pub convention_mismatch: bool,
    /// `(h, x)` pairs whose products leave the degree budget.
    pub skipped: usize,
}

impl YdStructure {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.axiom == name)
    }
}

fn coact(s: &LqtStructure, m: &FiniteCycleModule, i: usize, n: u32) -> Coact {
    let mut out = Coact::new();
    for ((x, y), c) in s.levels[n as usize].r.iter() {
        let Some(a) = m.action(*x) else { continue };
        for k in 0..a.rows {
            let e = a.get(k, i);
            if !e.is_zero() {
                out.add_term((*y, k), c.mul(&e));
            }
        }
    }
    out
}

pub fn yd_structure(s: &LqtStructure, m: &FiniteCycleModule) -> Result<YdStructure, BraidError> {
    let d = &s.dcp.d;
    let have = s.levels.len() as u32 - 1;
    let levels: Vec<u32> = m.bounds.iter().map(|b| if m.degree_zero_only { 0 } else { *b }).collect();
    if let Some(&need) = levels.iter().find(|&&n| n > have) {
        return Err(BraidError::Level { need, have });
    }
    let delta: Vec<Coact> = (0..m.dim()).map(|i| coact(s, m, i, levels[i])).collect();

    let mut stable = CheckOutcome::named("level-stability");
    if !m.degree_zero_only {
        for (i, n) in levels.iter().enumerate() {
            if *n < have {
                stable.note(coact(s, m, i, n + 1) == delta[i], || format!("δ({}) changes from level {n} to {}", m.labels[i], n + 1));
            }
        }
    }

    let mut counit = CheckOutcome::named("counit");
    for (i, v) in delta.iter().enumerate() {
        let mut back: Comb<usize> = Comb::new();
        for ((x, k), c) in v.iter() {
            back.add_term(*k, c.mul(d.counit_basis(*x)));
        }
        counit.note(back == Comb::term(i, m.field.one()), || format!("(ε⊗id)δ({}) ≠ {}", m.labels[i], m.labels[i]));
    }

    let mut coassoc = CheckOutcome::named("coassociativity");
    for (i, v) in delta.iter().enumerate() {
        let mut lhs: Comb<(BasisIndex, BasisIndex, usize)> = Comb::new();
        let mut rhs: Comb<(BasisIndex, BasisIndex, usize)> = Comb::new();
        for ((x, k), c) in v.iter() {
            for ((p, q), e) in d.comul_basis(*x).iter() {
                lhs.add_term((*p, *q, *k), c.mul(e));
            }
            for ((y, l), e) in delta[*k].iter() {
                rhs.add_term((*x, *y, *l), c.mul(e));
            }
        }
        coassoc.note(lhs == rhs, || format!("(Δ⊗id)δ({0}) ≠ (id⊗δ)δ({0})", m.labels[i]));
    }

    let top = m.known_top().min(d.top);
    let hs: Vec<BasisIndex> = (0..=top).flat_map(|k| d.basis(k)).collect();
    let (compat, skipped) = hs
        .par_iter()
        .map(|&h| {
            let mut out = CheckOutcome::named("yetter-drinfeld");
            let mut skipped = 0;
            for i in 0..m.dim() {
                match yd_sides(m, s, &delta, h, i) {
                    Some((l, r)) => out.note(l == r, || format!("h={}, x={}", d.label(h), m.labels[i])),
                    None => skipped += 1,
                }
            }
            (out, skipped)
        })
        .reduce(
            || (CheckOutcome::named("yetter-drinfeld"), 0),
            |(mut a, sa), (b, sb)| {
                a.attempted += b.attempted;
                a.failed += b.failed;
                if a.witness.is_none() {
                    a.witness = b.witness;
                }
                (a, sa + sb)
            },
        );
    let convention_mismatch = !compat.passed() && counit.passed() && coassoc.passed();
    Ok(YdStructure {
        module: m.name.clone(),
        levels,
        coaction: delta,
        checks: vec![stable, counit, coassoc, compat],
        convention_mismatch,
        skipped,
    })
}

/// `Σ h₁x₋₁ ⊗ h₂x₀` and `Σ (h₁x)₋₁h₂ ⊗ (h₁x)₀`, or `None` past the budget.
fn yd_sides(m: &FiniteCycleModule, s: &LqtStructure, delta: &[Coact], h: BasisIndex, i: usize) -> Option<(Coact, Coact)> {
    let d = &s.dcp.d;
    let mut lhs = Coact::new();
    let mut rhs = Coact::new();
    for ((h1, h2), c) in d.comul_basis(h).iter() {
        for ((x, k), e) in delta[i].iter() {
            let Some(a) = m.action(*h2) else { continue };
            let prod = d.mul_basis(*h1, *x)?;
            for l in 0..a.rows {
                let t = a.get(l, *k);
                if t.is_zero() {
                    continue;
                }
                for (p, q) in prod.iter() {
                    lhs.add_term((*p, l), c.mul(e).mul(&t).mul(q));
                }
            }
        }
        let Some(a) = m.action(*h1) else { continue };
        for k in 0..a.rows {
            let t = a.get(k, i);
            if t.is_zero() {
                continue;
            }
            for ((x, l), e) in delta[k].iter() {
                let prod = d.mul_basis(*x, *h2)?;
                for (p, q) in prod.iter() {
                    rhs.add_term((*p, *l), c.mul(&t).mul(e).mul(q));
                }
            }
        }
    }
    Some((lhs, rhs))
}
