use std::collections::HashMap;

use crate::bimodules::{dualize_bimodule, BaseKind, HopfBimoduleData};
use crate::exactlin::{BasisIndex, Comb};

use super::words::{Piece, WordIndex, WordSystem};
use super::{base_algebra, compute_antipode, Elem, Elem2, GradedError, GradedHopfAlgebra};

/// Coordinates of the cotensor power are read at the normal words of the dual
/// tensor power: the dual-basis element of a normal word `w` is
/// `E(w) = Σ_u [NF(u)]_w u`, and `E(w)` has coefficient `δ_{w,w'}` at normal `w'`.
struct Cotensor<'a> {
    m: &'a HopfBimoduleData,
    idx: WordIndex,
    embed: Vec<Vec<Comb<Vec<u32>>>>,
}

impl Cotensor<'_> {
    fn piece(&self, x: BasisIndex) -> Piece {
        if x.degree == 0 {
            Piece::B(x.ordinal)
        } else {
            Piece::M(self.idx.word(x)[0])
        }
    }

    fn split(
        &self,
        h: &GradedHopfAlgebra,
        x: BasisIndex,
        degs: &[u32],
        memo: &mut HashMap<(BasisIndex, Vec<u32>), Comb<Vec<Piece>>>,
    ) -> Comb<Vec<Piece>> {
        if degs.len() == 1 {
            debug_assert_eq!(x.degree, degs[0]);
            return Comb::term(vec![self.piece(x)], h.one());
        }
        let key = (x, degs.to_vec());
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let mut out = Comb::new();
        for ((l, r), c) in h.comul_basis(x).iter() {
            if l.degree != degs[0] {
                continue;
            }
            let rest = self.split(h, *r, &degs[1..], memo);
            let p = self.piece(*l);
            for (tail, d) in rest.iter() {
                let mut v = Vec::with_capacity(degs.len());
                v.push(p);
                v.extend_from_slice(tail);
                out.add_term(v, c.mul(d));
            }
        }
        memo.insert(key, out.clone());
        out
    }

    /// Applies the bimodule actions slotwise.
    fn act_slots(&self, xs: &[Piece], ys: &[Piece]) -> Comb<Vec<u32>> {
        let mut acc = Comb::term(Vec::with_capacity(xs.len()), self.m.field.one());
        for (p, q) in xs.iter().zip(ys) {
            let v = match (p, q) {
                (Piece::B(b), Piece::M(a)) => self.m.act_left(*b, *a),
                (Piece::M(a), Piece::B(b)) => self.m.act_right(*a, *b),
                _ => unreachable!("slot degrees are complementary"),
            };
            let mut next = Comb::new();
            for (w, c) in acc.iter() {
                for (a, d) in v.iter() {
                    let mut nw = w.clone();
                    nw.push(*a);
                    next.add_term(nw, c.mul(d));
                }
            }
            acc = next;
        }
        acc
    }

    /// Coordinates of a cotensor element, after checking it lies in the cotensor power.
    fn coordinates(&self, n: u32, v: &Comb<Vec<u32>>) -> Result<Elem, GradedError> {
        let mut coords = Elem::new();
        for (w, c) in v.iter() {
            if let Some(x) = self.idx.index(w) {
                coords.add_term(x, c.clone());
            }
        }
        let mut rebuilt = Comb::new();
        for (x, c) in coords.iter() {
            rebuilt.axpy(c, &self.embed[n as usize][x.ordinal as usize]);
        }
        if rebuilt != *v {
            return Err(GradedError::Mismatch(format!("product leaves the cotensor power in degree {n}")));
        }
        Ok(coords)
    }
}

/// T^c_B(M) truncated at degree `top`, with antipode.
pub fn cotensor_hopf(m: &HopfBimoduleData, top: u32) -> Result<GradedHopfAlgebra, GradedError> {
    if let Some(f) = m.verify().into_iter().next() {
        return Err(crate::bimodules::BimoduleError::Axiom { axiom: f.axiom, witness: f.witness }.into());
    }
    let dual = dualize_bimodule(m);
    let ws = WordSystem::new(&dual)?;
    let idx = WordIndex::build(&ws, top);
    let one = m.field.one();

    let mut embed: Vec<Vec<Comb<Vec<u32>>>> = vec![Vec::new()];
    for n in 1..=top as usize {
        let mut e: Vec<Comb<Vec<u32>>> = idx.words[n].iter().map(|_| Comb::new()).collect();
        if dual.base == BaseKind::DualGroup {
            for (i, w) in idx.words[n].iter().enumerate() {
                e[i] = Comb::term(w.clone(), one.clone());
            }
        } else {
            let letters = ws.letters();
            let mut u = vec![0u32; n];
            loop {
                for (w, c) in ws.normalize(&u).iter() {
                    let x = idx.index(w).expect("normal word");
                    e[x.ordinal as usize].add_term(u.clone(), c.clone());
                }
                let mut k = n;
                while k > 0 {
                    k -= 1;
                    u[k] += 1;
                    if u[k] < letters {
                        break;
                    }
                    u[k] = 0;
                }
                if u.iter().all(|&a| a == 0) {
                    break;
                }
            }
        }
        embed.push(e);
    }
    let ct = Cotensor { m, idx, embed };

    let base = m.base_hopf();
    let b = base_algebra(&base);
    let mut labels = vec![b.labels(0).to_vec()];
    for n in 1..=top as usize {
        labels.push(ct.idx.words[n].iter().map(|w| ws.word_label(w)).collect());
    }
    let name = match m.base {
        BaseKind::Group => "T^c_kG(M)",
        BaseKind::DualGroup => "T^c_(kG)*(M)",
    };
    let mut h = GradedHopfAlgebra::with_bases(name, m.field, labels);
    let basis: Vec<BasisIndex> = h.all_basis().collect();

    // deconcatenation, with the coactions at both ends
    for &x in &basis {
        if x.degree == 0 {
            h.set_comul(x, b.comul_basis(x).clone());
            h.set_counit(x, b.counit_basis(x).clone());
            continue;
        }
        let n = x.degree as usize;
        let mut d = Elem2::new();
        for (u, c) in ct.embed[n][x.ordinal as usize].iter() {
            for ((g, a0), e) in m.left_coact[u[0] as usize].iter() {
                let mut v = u.clone();
                v[0] = *a0;
                if let Some(y) = ct.idx.index(&v) {
                    d.add_term((BasisIndex::new(0, *g), y), c.mul(e));
                }
            }
            for i in 1..n {
                if let (Some(l), Some(r)) = (ct.idx.index(&u[..i]), ct.idx.index(&u[i..])) {
                    d.add_term((l, r), c.clone());
                }
            }
            for ((a0, g), e) in m.right_coact[u[n - 1] as usize].iter() {
                let mut v = u.clone();
                v[n - 1] = *a0;
                if let Some(y) = ct.idx.index(&v) {
                    d.add_term((y, BasisIndex::new(0, *g)), c.mul(e));
                }
            }
        }
        h.set_comul(x, d);
    }

    let mut memo = HashMap::new();
    for &x in &basis {
        for &y in &basis {
            let n = x.degree + y.degree;
            if n > top {
                continue;
            }
            if n == 0 {
                h.set_mul(x, y, b.mul_basis(x, y).unwrap().clone());
                continue;
            }
            let mut full: Comb<Vec<u32>> = Comb::new();
            for mask in 0u32..(1 << n) {
                if mask.count_ones() != x.degree {
                    continue;
                }
                let dx: Vec<u32> = (0..n).map(|k| (mask >> (n - 1 - k)) & 1).collect();
                let dy: Vec<u32> = dx.iter().map(|d| 1 - d).collect();
                let xs = ct.split(&h, x, &dx, &mut memo);
                let ys = ct.split(&h, y, &dy, &mut memo);
                for (px, cx) in xs.iter() {
                    for (py, cy) in ys.iter() {
                        full.axpy(&cx.mul(cy), &ct.act_slots(px, py));
                    }
                }
            }
            let p = ct.coordinates(n, &full)?;
            h.set_mul(x, y, p);
        }
    }
    h.set_unit(b.unit().clone());
    compute_antipode(&h)
}
