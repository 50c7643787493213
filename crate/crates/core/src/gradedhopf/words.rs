//! Normal forms of words in `M ⊗_B ⋯ ⊗_B M` for B = kG or (kG)*.
//!
//! Over (kG)* the basis letters must be eigenvectors of both projection
//! actions; a word is then nonzero exactly when composable. Over kG the right
//! coaction must be diagonal (each letter has a source); group elements are
//! pushed to the right, so every letter except the last one has source e.

use std::collections::HashMap;

use crate::bimodules::{BaseKind, HopfBimoduleData};
use crate::exactlin::{BasisIndex, Comb};

use super::GradedError;

/// Degree-0 or degree-1 tensor factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Piece {
    B(u32),
    M(u32),
}

pub(crate) struct WordSystem<'a> {
    pub m: &'a HopfBimoduleData,
    src: Vec<u32>,
    tgt: Vec<u32>,
}

impl<'a> WordSystem<'a> {
    pub fn new(m: &'a HopfBimoduleData) -> Result<Self, GradedError> {
        let n = m.dim();
        let one = m.field.one();
        let mut src = vec![0; n as usize];
        let mut tgt = vec![0; n as usize];
        match m.base {
            BaseKind::DualGroup => {
                for a in 0..n {
                    let eig = |left: bool| -> Result<u32, GradedError> {
                        let mut hit = None;
                        for g in m.group.elements() {
                            let v = if left { m.act_left(g, a) } else { m.act_right(a, g) };
                            if v.is_zero() {
                                continue;
                            }
                            if *v != Comb::term(a, one.clone()) || hit.is_some() {
                                return Err(GradedError::Unsupported(format!(
                                    "letter {} is not an eigenvector of the (kG)*-actions",
                                    m.carrier[a as usize]
                                )));
                            }
                            hit = Some(g);
                        }
                        hit.ok_or_else(|| GradedError::Unsupported(format!("letter {} is killed by the unit", m.carrier[a as usize])))
                    };
                    tgt[a as usize] = eig(true)?;
                    src[a as usize] = eig(false)?;
                }
            }
            BaseKind::Group => {
                for a in 0..n {
                    let d = &m.right_coact[a as usize];
                    let mut it = d.iter();
                    match (it.next(), it.next()) {
                        (Some(((b, s), c)), None) if *b == a && c.is_one() => src[a as usize] = *s,
                        _ => {
                            return Err(GradedError::Unsupported(format!(
                                "right coaction on {} is not of the form a ⊗ s(a)",
                                m.carrier[a as usize]
                            )))
                        }
                    }
                    let d = &m.left_coact[a as usize];
                    let mut it = d.iter();
                    match (it.next(), it.next()) {
                        (Some(((t, b), c)), None) if *b == a && c.is_one() => tgt[a as usize] = *t,
                        _ => {
                            return Err(GradedError::Unsupported(format!(
                                "left coaction on {} is not of the form t(a) ⊗ a",
                                m.carrier[a as usize]
                            )))
                        }
                    }
                }
            }
        }
        Ok(WordSystem { m, src, tgt })
    }

    pub fn letters(&self) -> u32 {
        self.m.dim()
    }

    pub fn source(&self, a: u32) -> u32 {
        self.src[a as usize]
    }

    pub fn target(&self, a: u32) -> u32 {
        self.tgt[a as usize]
    }

    pub fn is_normal(&self, w: &[u32]) -> bool {
        match self.m.base {
            BaseKind::DualGroup => w.windows(2).all(|p| self.source(p[0]) == self.target(p[1])),
            BaseKind::Group => {
                let e = self.m.group.identity();
                w.len() < 2 || w[..w.len() - 1].iter().all(|&a| self.source(a) == e)
            }
        }
    }

    /// Normal form of an arbitrary letter sequence in the balanced tensor power.
    pub fn normalize(&self, w: &[u32]) -> Comb<Vec<u32>> {
        let one = self.m.field.one();
        match self.m.base {
            BaseKind::DualGroup => {
                if self.is_normal(w) {
                    Comb::term(w.to_vec(), one)
                } else {
                    Comb::new()
                }
            }
            BaseKind::Group => {
                let g = &self.m.group;
                let e = g.identity();
                let mut acc = Comb::term(w.to_vec(), one);
                for k in 0..w.len().saturating_sub(1) {
                    let mut next = Comb::new();
                    for (word, c) in acc.iter() {
                        let s = self.source(word[k]);
                        if s == e {
                            next.add_term(word.clone(), c.clone());
                            continue;
                        }
                        let left = self.m.act_right(word[k], g.inv(s));
                        let right = self.m.act_left(s, word[k + 1]);
                        for (a, ca) in left.iter() {
                            for (b, cb) in right.iter() {
                                let mut nw = word.clone();
                                nw[k] = *a;
                                nw[k + 1] = *b;
                                next.add_term(nw, c.mul(ca).mul(cb));
                            }
                        }
                    }
                    acc = next;
                }
                acc
            }
        }
    }

    /// All normal words of length `n`, lexicographic in written order.
    pub fn enumerate(&self, n: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        self.extend(n, &mut cur, &mut out);
        out
    }

    fn extend(&self, n: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let e = self.m.group.identity();
        for a in 0..self.letters() {
            let ok = match self.m.base {
                BaseKind::DualGroup => cur.last().map_or(true, |&p| self.source(p) == self.target(a)),
                BaseKind::Group => cur.len() + 1 == n || self.source(a) == e,
            };
            if ok {
                cur.push(a);
                self.extend(n, cur, out);
                cur.pop();
            }
        }
    }

    pub fn word_label(&self, w: &[u32]) -> String {
        w.iter().map(|&a| self.m.carrier[a as usize].as_str()).collect::<Vec<_>>().join("")
    }
}

/// Per-degree index of normal words.
pub(crate) struct WordIndex {
    pub words: Vec<Vec<Vec<u32>>>,
    lookup: HashMap<Vec<u32>, u32>,
}

impl WordIndex {
    pub fn build(ws: &WordSystem, top: u32) -> Self {
        let words: Vec<Vec<Vec<u32>>> = (0..=top as usize).map(|n| if n == 0 { Vec::new() } else { ws.enumerate(n) }).collect();
        let mut lookup = HashMap::new();
        for ws in &words {
            for (i, w) in ws.iter().enumerate() {
                lookup.insert(w.clone(), i as u32);
            }
        }
        WordIndex { words, lookup }
    }

    /// Basis index of a nonempty normal word, if within the truncation.
    pub fn index(&self, w: &[u32]) -> Option<BasisIndex> {
        self.lookup.get(w).map(|&o| BasisIndex::new(w.len() as u32, o))
    }

    pub fn word(&self, x: BasisIndex) -> &[u32] {
        &self.words[x.degree as usize][x.ordinal as usize]
    }
}
