use crate::bimodules::{BaseKind, HopfBimoduleData};
use crate::exactlin::{BasisIndex, Comb};

use super::words::{WordIndex, WordSystem};
use super::{base_algebra, compute_antipode, Elem, Elem2, GradedError, GradedHopfAlgebra};

/// Word in T_B(M): a base basis element or a nonempty normal letter sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Word {
    B(u32),
    M(Vec<u32>),
}

struct Tensor<'a> {
    ws: WordSystem<'a>,
}

impl Tensor<'_> {
    fn m(&self) -> &HopfBimoduleData {
        self.ws.m
    }

    fn normal(&self, w: &[u32]) -> Comb<Word> {
        self.ws.normalize(w).map_keys(|v| Word::M(v.clone()))
    }

    fn mul(&self, x: &Word, y: &Word) -> Comb<Word> {
        let m = self.m();
        let base = m.base_hopf();
        match (x, y) {
            (Word::B(a), Word::B(b)) => base.mul(*a, *b).map_keys(|g| Word::B(*g)),
            (Word::B(b), Word::M(w)) => {
                let mut out = Comb::new();
                for (l, c) in m.act_left(*b, w[0]).iter() {
                    let mut v = w.clone();
                    v[0] = *l;
                    out.axpy(c, &self.normal(&v));
                }
                out
            }
            (Word::M(w), Word::B(b)) => {
                let mut out = Comb::new();
                let last = w.len() - 1;
                for (l, c) in m.act_right(w[last], *b).iter() {
                    let mut v = w.clone();
                    v[last] = *l;
                    out.axpy(c, &self.normal(&v));
                }
                out
            }
            (Word::M(w), Word::M(v)) => {
                let mut u = w.clone();
                u.extend_from_slice(v);
                self.normal(&u)
            }
        }
    }

    fn mul2(&self, u: &Comb<(Word, Word)>, v: &Comb<(Word, Word)>) -> Comb<(Word, Word)> {
        let mut out = Comb::new();
        for ((x1, x2), a) in u.iter() {
            for ((y1, y2), b) in v.iter() {
                let p = self.mul(x1, y1);
                let q = self.mul(x2, y2);
                let ab = a.mul(b);
                for (k1, c1) in p.iter() {
                    for (k2, c2) in q.iter() {
                        out.add_term((k1.clone(), k2.clone()), ab.mul(c1).mul(c2));
                    }
                }
            }
        }
        out
    }

    fn comul_letter(&self, a: u32) -> Comb<(Word, Word)> {
        let m = self.m();
        let mut out = Comb::new();
        for ((b, a0), c) in m.left_coact[a as usize].iter() {
            out.add_term((Word::B(*b), Word::M(vec![*a0])), c.clone());
        }
        for ((a0, b), c) in m.right_coact[a as usize].iter() {
            out.add_term((Word::M(vec![*a0]), Word::B(*b)), c.clone());
        }
        out
    }

    fn comul_word(&self, w: &[u32]) -> Comb<(Word, Word)> {
        let mut acc = self.comul_letter(w[w.len() - 1]);
        for &a in w[..w.len() - 1].iter().rev() {
            acc = self.mul2(&self.comul_letter(a), &acc);
        }
        acc
    }
}

fn index_of(idx: &WordIndex, w: &Word) -> BasisIndex {
    match w {
        Word::B(b) => BasisIndex::new(0, *b),
        Word::M(v) => idx.index(v).expect("normal word in budget"),
    }
}

fn to_elem(idx: &WordIndex, c: &Comb<Word>) -> Elem {
    c.map_keys(|w| index_of(idx, w))
}

/// T_B(M) truncated at degree `top`, with antipode.
pub fn tensor_hopf(m: &HopfBimoduleData, top: u32) -> Result<GradedHopfAlgebra, GradedError> {
    if let Some(f) = m.verify().into_iter().next() {
        return Err(crate::bimodules::BimoduleError::Axiom { axiom: f.axiom, witness: f.witness }.into());
    }
    let t = Tensor { ws: WordSystem::new(m)? };
    let idx = WordIndex::build(&t.ws, top);
    let base = m.base_hopf();
    let b = base_algebra(&base);
    let mut labels = vec![b.labels(0).to_vec()];
    for n in 1..=top as usize {
        labels.push(idx.words[n].iter().map(|w| t.ws.word_label(w)).collect());
    }
    let name = match m.base {
        BaseKind::Group => "T_kG(M)",
        BaseKind::DualGroup => "T_(kG)*(M)",
    };
    let mut h = GradedHopfAlgebra::with_bases(name, m.field, labels);
    let words: Vec<(BasisIndex, Word)> = h
        .all_basis()
        .map(|x| (x, if x.degree == 0 { Word::B(x.ordinal) } else { Word::M(idx.word(x).to_vec()) }))
        .collect();
    for (x, wx) in &words {
        for (y, wy) in &words {
            if x.degree + y.degree <= top {
                h.set_mul(*x, *y, to_elem(&idx, &t.mul(wx, wy)));
            }
        }
        let d: Elem2 = match wx {
            Word::B(g) => b.comul_basis(BasisIndex::new(0, *g)).clone(),
            Word::M(v) => t.comul_word(v).map_keys(|(p, q)| (index_of(&idx, p), index_of(&idx, q))),
        };
        h.set_comul(*x, d);
        if x.degree == 0 {
            h.set_counit(*x, b.counit_basis(*x).clone());
        }
    }
    h.set_unit(b.unit().clone());
    compute_antipode(&h)
}
