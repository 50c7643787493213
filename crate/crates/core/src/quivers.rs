//! Finite groups by Cayley table, ramification data, Hopf quivers and paths.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("Cayley table row {row}: {msg}")]
    TableRow { row: usize, msg: String },
    #[error("Cayley table: {0}")]
    Table(String),
    #[error("unknown builtin group {0:?}")]
    UnknownGroup(String),
    #[error("ramification references element {0}, which is not in the group")]
    NotAClass(u32),
    #[error("ramification lists the class of {0} twice")]
    DuplicateClass(u32),
}

/// A finite group given by its multiplication table on labels `0..order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    pub name: String,
    pub labels: Vec<String>,
    table: Vec<Vec<u32>>,
    identity: u32,
    inverses: Vec<u32>,
}

impl FiniteGroup {
    /// Validates the table as a group: closure, identity, inverses, associativity.
    pub fn from_table(name: &str, labels: Vec<String>, table: Vec<Vec<u32>>) -> Result<Self, QuiverError> {
        let n = table.len();
        if n == 0 {
            return Err(QuiverError::Table("empty table".into()));
        }
        if labels.len() != n {
            return Err(QuiverError::Table(format!("{} labels for {} rows", labels.len(), n)));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(QuiverError::TableRow { row: i, msg: format!("has {} entries, expected {n}", row.len()) });
            }
            if let Some(v) = row.iter().find(|&&v| v as usize >= n) {
                return Err(QuiverError::TableRow { row: i, msg: format!("entry {v} out of range") });
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] as usize == x && table[x][e] as usize == x))
            .ok_or_else(|| QuiverError::Table("no identity element".into()))? as u32;
        let mut inverses = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| QuiverError::TableRow { row: x, msg: "element has no inverse".into() })?;
            inverses.push(inv as u32);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b] as usize;
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c] as usize] {
                        return Err(QuiverError::TableRow {
                            row: a,
                            msg: format!("associativity fails for ({a},{b},{c})"),
                        });
                    }
                }
            }
        }
        Ok(FiniteGroup { name: name.to_string(), labels, table, identity, inverses })
    }

    pub fn cyclic(n: u32) -> Self {
        assert!(n >= 1);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let labels = (0..n).map(|k| if k == 0 { "e".to_string() } else { format!("g{k}") }).collect();
        Self::from_table(&format!("Z{n}"), labels, table).expect("cyclic table is a group")
    }

    /// Symmetric group on `k` letters; elements listed lexicographically by one-line notation.
    pub fn symmetric(k: usize) -> Self {
        let perms = permutations(k);
        let index: HashMap<Vec<usize>, u32> = perms.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        // (p q)(i) = p(q(i))
        let table = perms
            .iter()
            .map(|p| perms.iter().map(|q| index[&q.iter().map(|&i| p[i]).collect::<Vec<_>>()]).collect())
            .collect();
        let labels = perms
            .iter()
            .map(|p| p.iter().map(|i| (i + 1).to_string()).collect::<String>())
            .collect();
        Self::from_table(&format!("S{k}"), labels, table).expect("symmetric table is a group")
    }

    pub fn klein() -> Self {
        let table = (0..4u32).map(|a| (0..4u32).map(|b| a ^ b).collect()).collect();
        let labels = ["e", "a", "b", "ab"].iter().map(|s| s.to_string()).collect();
        Self::from_table("V4", labels, table).expect("Klein table is a group")
    }

    /// `Zn`, `S3`, `S4`, `V4` (also `klein`), `trivial`.
    pub fn builtin(name: &str) -> Result<Self, QuiverError> {
        let lower = name.to_ascii_lowercase();
        match lower.as_str() {
            "trivial" | "z1" => Ok(Self::cyclic(1)),
            "s3" => Ok(Self::symmetric(3)),
            "s4" => Ok(Self::symmetric(4)),
            "v4" | "klein" => Ok(Self::klein()),
            _ => lower
                .strip_prefix('z')
                .and_then(|k| k.parse::<u32>().ok())
                .filter(|&k| (1..=64).contains(&k))
                .map(Self::cyclic)
                .ok_or_else(|| QuiverError::UnknownGroup(name.to_string())),
        }
    }

    pub fn order(&self) -> u32 {
        self.table.len() as u32
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize][b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    /// `g h g⁻¹`
    pub fn conj(&self, g: u32, h: u32) -> u32 {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order()
    }

    pub fn table(&self) -> &[Vec<u32>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn label(&self, g: u32) -> &str {
        &self.labels[g as usize]
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Orbits of conjugation, each sorted, ordered by least element.
pub fn conjugacy_classes(g: &FiniteGroup) -> Vec<Vec<u32>> {
    let mut seen = vec![false; g.order() as usize];
    let mut out = Vec::new();
    for x in g.elements() {
        if seen[x as usize] {
            continue;
        }
        let mut class: Vec<u32> = g.elements().map(|h| g.conj(h, x)).collect();
        class.sort_unstable();
        class.dedup();
        for &c in &class {
            seen[c as usize] = true;
        }
        out.push(class);
    }
    out
}

/// Multiplicity per conjugacy class, keyed by the class's least element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ramification {
    pub multiplicity: BTreeMap<u32, u32>,
}

impl Ramification {
    /// Accepts any element as class representative; each class at most once.
    pub fn new(g: &FiniteGroup, entries: &[(u32, u32)]) -> Result<Self, QuiverError> {
        let classes = conjugacy_classes(g);
        let mut multiplicity = BTreeMap::new();
        for &(elem, r) in entries {
            if elem >= g.order() {
                return Err(QuiverError::NotAClass(elem));
            }
            let rep = classes.iter().find(|c| c.contains(&elem)).expect("classes partition G")[0];
            if multiplicity.insert(rep, r).is_some() {
                return Err(QuiverError::DuplicateClass(elem));
            }
        }
        multiplicity.retain(|_, r| *r > 0);
        Ok(Ramification { multiplicity })
    }

    /// r_C for the class containing `c`.
    pub fn of(&self, g: &FiniteGroup, c: u32) -> u32 {
        let rep = conjugacy_classes(g).into_iter().find(|cl| cl.contains(&c)).expect("element")[0];
        self.multiplicity.get(&rep).copied().unwrap_or(0)
    }
}

/// An arrow from `source` to `source·class_elem`, the `index`-th for that pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub source: u32,
    pub class_elem: u32,
    pub index: u32,
    pub target: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopfQuiver {
    pub group: FiniteGroup,
    pub ramification: Ramification,
    pub arrows: Vec<Arrow>,
    #[serde(skip)]
    lookup: HashMap<(u32, u32, u32), u32>,
}

pub fn build_hopf_quiver(g: FiniteGroup, r: Ramification) -> HopfQuiver {
    let classes = conjugacy_classes(&g);
    let mut arrows = Vec::new();
    for x in g.elements() {
        for c in g.elements() {
            let rep = classes.iter().find(|cl| cl.contains(&c)).expect("element")[0];
            let m = r.multiplicity.get(&rep).copied().unwrap_or(0);
            for index in 0..m {
                arrows.push(Arrow { source: x, class_elem: c, index, target: g.mul(x, c) });
            }
        }
    }
    HopfQuiver::from_parts(g, r, arrows)
}

impl HopfQuiver {
    fn from_parts(group: FiniteGroup, ramification: Ramification, arrows: Vec<Arrow>) -> Self {
        let lookup = arrows
            .iter()
            .enumerate()
            .map(|(i, a)| ((a.source, a.class_elem, a.index), i as u32))
            .collect();
        HopfQuiver { group, ramification, arrows, lookup }
    }

    /// Rebuilds lookup tables after deserialization.
    pub fn reindexed(self) -> Self {
        let HopfQuiver { group, ramification, arrows, .. } = self;
        Self::from_parts(group, ramification, arrows)
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, id: u32) -> &Arrow {
        &self.arrows[id as usize]
    }

    pub fn s(&self, id: u32) -> u32 {
        self.arrows[id as usize].source
    }

    pub fn t(&self, id: u32) -> u32 {
        self.arrows[id as usize].target
    }

    pub fn find_arrow(&self, source: u32, class_elem: u32, index: u32) -> Option<u32> {
        self.lookup.get(&(source, class_elem, index)).copied()
    }

    pub fn arrow_label(&self, id: u32) -> String {
        let a = self.arrow(id);
        format!(
            "a[{}->{};{}]",
            self.group.label(a.source),
            self.group.label(a.target),
            a.index + 1
        )
    }

    pub fn arrows_between(&self, x: u32, y: u32) -> usize {
        self.arrows.iter().filter(|a| a.source == x && a.target == y).count()
    }

    pub fn path_label(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            self.group.label(p.source).to_string()
        } else {
            p.arrows.iter().map(|&a| self.arrow_label(a)).collect::<Vec<_>>().join("")
        }
    }

    /// Builds a path from written-order arrow ids, checking composability.
    pub fn path(&self, arrows: Vec<u32>) -> Option<Path> {
        if arrows.is_empty() {
            return None;
        }
        for w in arrows.windows(2) {
            if self.s(w[0]) != self.t(w[1]) {
                return None;
            }
        }
        let source = self.s(*arrows.last().expect("nonempty"));
        let target = self.t(arrows[0]);
        Some(Path { arrows, source, target })
    }
}

/// A path `a_n ⋯ a_1` stored in written order; empty arrow list means a vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Path {
    pub arrows: Vec<u32>,
    pub source: u32,
    pub target: u32,
}

impl Path {
    pub fn vertex(x: u32) -> Self {
        Path { arrows: Vec::new(), source: x, target: x }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.arrows.is_empty()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arrows.is_empty() {
            write!(f, "v{}", self.source)
        } else {
            let parts: Vec<String> = self.arrows.iter().map(|a| a.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

/// All n-paths, lexicographic in written-order arrow ids.
pub fn enumerate_paths(q: &HopfQuiver, n: usize) -> Vec<Path> {
    if n == 0 {
        return q.group.elements().map(Path::vertex).collect();
    }
    let mut into: Vec<Vec<u32>> = vec![Vec::new(); q.group.order() as usize];
    for (i, a) in q.arrows.iter().enumerate() {
        into[a.target as usize].push(i as u32);
    }
    let mut out = Vec::new();
    let mut stack: Vec<u32> = Vec::with_capacity(n);
    fn go(q: &HopfQuiver, into: &[Vec<u32>], n: usize, stack: &mut Vec<u32>, out: &mut Vec<Path>) {
        if stack.len() == n {
            out.push(q.path(stack.clone()).expect("composable by construction"));
            return;
        }
        let candidates: Vec<u32> = match stack.last() {
            None => (0..q.num_arrows() as u32).collect(),
            Some(&prev) => into[q.s(prev) as usize].clone(),
        };
        for a in candidates {
            stack.push(a);
            go(q, into, n, stack, out);
            stack.pop();
        }
    }
    go(q, &into, n, &mut stack, &mut out);
    out
}

/// `p q`, defined iff `s(p) = t(q)`.
pub fn compose_paths(p: &Path, q: &Path) -> Option<Path> {
    if p.source != q.target {
        return None;
    }
    let mut arrows = p.arrows.clone();
    arrows.extend_from_slice(&q.arrows);
    Some(Path { arrows, source: q.source, target: p.target })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example_quiver() -> HopfQuiver {
        let g = FiniteGroup::cyclic(2);
        let r = Ramification::new(&g, &[(0, 3)]).unwrap();
        build_hopf_quiver(g, r)
    }

    #[test]
    fn class_counts() {
        assert_eq!(conjugacy_classes(&FiniteGroup::cyclic(2)), vec![vec![0], vec![1]]);
        assert_eq!(conjugacy_classes(&FiniteGroup::cyclic(1)), vec![vec![0]]);
        let s3 = FiniteGroup::symmetric(3);
        let mut sizes: Vec<usize> = conjugacy_classes(&s3).iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    // Brute-force orbit oracle: x ~ y iff some h has h x h⁻¹ = y.
    #[test]
    fn classes_match_brute_force() {
        for g in [FiniteGroup::symmetric(3), FiniteGroup::symmetric(4), FiniteGroup::klein(), FiniteGroup::cyclic(5)] {
            let classes = conjugacy_classes(&g);
            for x in g.elements() {
                for y in g.elements() {
                    let related = g.elements().any(|h| g.mul(g.mul(h, x), g.inv(h)) == y);
                    let same = classes.iter().any(|c| c.contains(&x) && c.contains(&y));
                    assert_eq!(related, same);
                }
            }
        }
    }

    #[test]
    fn example_quiver_shape() {
        let q = example_quiver();
        assert_eq!(q.group.order(), 2);
        assert_eq!(q.num_arrows(), 6);
        assert_eq!(q.arrows_between(0, 0), 3);
        assert_eq!(q.arrows_between(1, 1), 3);
        assert_eq!(q.arrows_between(0, 1), 0);
        let g = FiniteGroup::cyclic(2);
        let q1 = build_hopf_quiver(g.clone(), Ramification::new(&g, &[(0, 1)]).unwrap());
        assert_eq!(q1.num_arrows(), 2);
    }

    #[test]
    fn s3_transpositions_out_degree() {
        let g = FiniteGroup::symmetric(3);
        let t = g.elements().find(|&x| x != g.identity() && g.mul(x, x) == g.identity()).unwrap();
        let q = build_hopf_quiver(g.clone(), Ramification::new(&g, &[(t, 1)]).unwrap());
        for x in g.elements() {
            let out = q.arrows.iter().filter(|a| a.source == x).count();
            let brute = g.elements().filter(|&y| {
                let c = g.mul(g.inv(x), y);
                c != g.identity() && g.mul(c, c) == g.identity()
            }).count();
            assert_eq!(out, 3);
            assert_eq!(out, brute);
        }
    }

    #[test]
    fn hopf_counting_exhaustive() {
        let g = FiniteGroup::symmetric(3);
        let classes = conjugacy_classes(&g);
        let entries: Vec<(u32, u32)> = classes.iter().enumerate().map(|(i, c)| (c[0], i as u32)).collect();
        let r = Ramification::new(&g, &entries).unwrap();
        let q = build_hopf_quiver(g.clone(), r.clone());
        for x in g.elements() {
            for y in g.elements() {
                assert_eq!(q.arrows_between(x, y) as u32, r.of(&g, g.mul(g.inv(x), y)));
            }
        }
    }

    #[test]
    fn path_counts_example() {
        let q = example_quiver();
        assert_eq!(enumerate_paths(&q, 0).len(), 2);
        for n in 0..=4 {
            let paths = enumerate_paths(&q, n);
            assert_eq!(paths.len(), 2 * 3usize.pow(n as u32));
            // brute force: all arrow sequences that compose
            let brute = (0..6usize.pow(n as u32))
                .filter(|code| {
                    let mut c = *code;
                    let seq: Vec<u32> = (0..n).map(|_| { let a = (c % 6) as u32; c /= 6; a }).collect();
                    n == 0 || q.path(seq).is_some()
                })
                .count();
            if n > 0 {
                assert_eq!(paths.len(), brute);
            }
        }
        assert_eq!(enumerate_paths(&q, 2), enumerate_paths(&q, 2));
    }

    #[test]
    fn composition_rules() {
        let q = example_quiver();
        let a = q.path(vec![0]).unwrap();
        let aa = compose_paths(&a, &a).unwrap();
        assert_eq!(aa.len(), 2);
        let v = Path::vertex(a.target);
        assert_eq!(compose_paths(&v, &a), Some(a.clone()));
        let other = q.path(vec![3]).unwrap();
        assert_eq!(other.source, 1);
        assert_eq!(compose_paths(&a, &other), None);
    }

    #[test]
    fn table_validation() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::from_table("x", vec!["e".into(), "g".into()], bad).is_err());
        let ragged = vec![vec![0, 1], vec![1]];
        assert!(matches!(
            FiniteGroup::from_table("x", vec!["e".into(), "g".into()], ragged),
            Err(QuiverError::TableRow { row: 1, .. })
        ));
        let g = FiniteGroup::cyclic(2);
        assert!(matches!(Ramification::new(&g, &[(5, 1)]), Err(QuiverError::NotAClass(5))));
    }

    proptest! {
        #[test]
        fn composition_associative(seed in 0u64..500) {
            let g = FiniteGroup::symmetric(3);
            let classes = conjugacy_classes(&g);
            let r = Ramification::new(&g, &[(classes[1][0], 1), (classes[0][0], 1)]).unwrap();
            let q = build_hopf_quiver(g, r);
            let ps = enumerate_paths(&q, 1);
            let pick = |k: u64| ps[(k as usize) % ps.len()].clone();
            let (a, b, c) = (pick(seed), pick(seed / 7 + 3), pick(seed / 49 + 11));
            let left = compose_paths(&a, &b).and_then(|ab| compose_paths(&ab, &c));
            let right = compose_paths(&b, &c).and_then(|bc| compose_paths(&a, &bc));
            prop_assert_eq!(left, right);
        }
    }
}
