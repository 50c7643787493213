use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::{LinError, Scalar};

/// Position of a basis vector: homogeneous degree and ordinal inside that degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisIndex {
    pub degree: u32,
    pub ordinal: u32,
}

impl BasisIndex {
    pub const fn new(degree: u32, ordinal: u32) -> Self {
        BasisIndex { degree, ordinal }
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.degree, self.ordinal)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpaceId(pub u32);

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A finite linear combination of keys with nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Comb<K: Ord> {
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord> Default for Comb<K> {
    fn default() -> Self {
        Comb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for Comb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<K: Ord + Clone> Comb<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(k: K, c: Scalar) -> Self {
        let mut out = Self::new();
        out.add_term(k, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, k: &K) -> Option<&Scalar> {
        self.terms.get(k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn into_terms(self) -> BTreeMap<K, Scalar> {
        self.terms
    }

    pub fn add_term(&mut self, k: K, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// In place `self += c * other`.
    pub fn axpy(&mut self, c: &Scalar, other: &Comb<K>) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), c.mul(v));
        }
    }

    pub fn add(&mut self, other: &Comb<K>) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn sub(&mut self, other: &Comb<K>) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.neg());
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Comb<K> {
        let mut out = Comb::new();
        out.axpy(c, self);
        out
    }

    /// Applies a linear map given on keys.
    pub fn map_linear<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Comb<L>) -> Comb<L> {
        let mut out = Comb::new();
        for (k, c) in &self.terms {
            out.axpy(c, &f(k));
        }
        out
    }

    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> Comb<L> {
        let mut out = Comb::new();
        for (k, c) in &self.terms {
            out.add_term(f(k), c.clone());
        }
        out
    }

    pub fn filter(&self, mut keep: impl FnMut(&K) -> bool) -> Comb<K> {
        Comb {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Mutable access for deliberate corruption in tests.
    pub fn set(&mut self, k: K, c: Scalar) {
        if c.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, c);
        }
    }
}

impl<K: Ord + Clone> FromIterator<(K, Scalar)> for Comb<K> {
    fn from_iter<I: IntoIterator<Item = (K, Scalar)>>(iter: I) -> Self {
        let mut out = Comb::new();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

/// Vector in an indexed space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVector {
    pub space: SpaceId,
    pub entries: Comb<BasisIndex>,
}

impl SparseVector {
    pub fn zero(space: SpaceId) -> Self {
        SparseVector { space, entries: Comb::new() }
    }

    pub fn basis(space: SpaceId, idx: BasisIndex, one: Scalar) -> Self {
        SparseVector { space, entries: Comb::term(idx, one) }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_zero()
    }

    pub fn coeff(&self, idx: &BasisIndex) -> Option<&Scalar> {
        self.entries.get(idx)
    }

    /// `self + c * w`, zeros pruned.
    pub fn add_scaled(&self, w: &SparseVector, c: &Scalar) -> Result<SparseVector, LinError> {
        if self.space != w.space {
            return Err(LinError::SpaceMismatch(self.space, w.space));
        }
        let mut out = self.clone();
        out.entries.axpy(c, &w.entries);
        Ok(out)
    }
}

pub type IndexTuple = SmallVec<[BasisIndex; 4]>;

/// Element of a tensor product of up to four indexed spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseTensor {
    pub spaces: SmallVec<[SpaceId; 4]>,
    pub entries: Comb<IndexTuple>,
}

impl SparseTensor {
    pub fn zero(spaces: &[SpaceId]) -> Result<Self, LinError> {
        if spaces.is_empty() || spaces.len() > 4 {
            return Err(LinError::BadArity(spaces.len()));
        }
        Ok(SparseTensor { spaces: spaces.iter().copied().collect(), entries: Comb::new() })
    }

    pub fn arity(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_zero()
    }

    pub fn add_term(&mut self, idx: &[BasisIndex], c: Scalar) -> Result<(), LinError> {
        if idx.len() != self.arity() {
            return Err(LinError::BadArity(idx.len()));
        }
        self.entries.add_term(idx.iter().copied().collect(), c);
        Ok(())
    }

    /// Appends a factor: `self ⊗ v`.
    pub fn extend(&self, v: &SparseVector) -> Result<SparseTensor, LinError> {
        if self.arity() >= 4 {
            return Err(LinError::BadArity(self.arity() + 1));
        }
        let mut spaces = self.spaces.clone();
        spaces.push(v.space);
        let mut entries = Comb::new();
        for (k, a) in self.entries.iter() {
            for (j, b) in v.entries.iter() {
                let mut key = k.clone();
                key.push(*j);
                entries.add_term(key, a.mul(b));
            }
        }
        Ok(SparseTensor { spaces, entries })
    }

    pub fn add_scaled(&self, w: &SparseTensor, c: &Scalar) -> Result<SparseTensor, LinError> {
        if self.spaces != w.spaces {
            return Err(LinError::SpaceMismatch(
                self.spaces.first().copied().unwrap_or(SpaceId(0)),
                w.spaces.first().copied().unwrap_or(SpaceId(0)),
            ));
        }
        let mut out = self.clone();
        out.entries.axpy(c, &w.entries);
        Ok(out)
    }
}

/// `v ⊗ w` with entries `(i, j) ↦ v_i w_j`.
pub fn tensor(v: &SparseVector, w: &SparseVector) -> SparseTensor {
    let mut entries = Comb::new();
    for (i, a) in v.entries.iter() {
        for (j, b) in w.entries.iter() {
            let key: IndexTuple = [*i, *j].into_iter().collect();
            entries.add_term(key, a.mul(b));
        }
    }
    SparseTensor { spaces: [v.space, w.space].into_iter().collect(), entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Field;
    use proptest::prelude::*;

    const S: SpaceId = SpaceId(0);

    fn e(i: u32) -> BasisIndex {
        BasisIndex::new(0, i)
    }

    fn vec_of(pairs: &[(u32, i64, i64)]) -> SparseVector {
        let f = Field::Rational;
        let mut v = SparseVector::zero(S);
        for &(i, n, d) in pairs {
            v.entries.add_term(e(i), f.from_ratio(n, d));
        }
        v
    }

    #[test]
    fn add_scaled_examples() {
        let f = Field::Rational;
        let v = vec_of(&[(0, 1, 2), (3, -4, 1)]);
        let w = vec_of(&[(1, 7, 3)]);
        assert_eq!(v.add_scaled(&w, &f.zero()).unwrap(), v);
        assert!(v.add_scaled(&v, &f.from_i64(-1)).unwrap().is_zero());
        let a = vec_of(&[(1, 2, 3)]);
        let b = vec_of(&[(1, 1, 3)]);
        assert_eq!(a.add_scaled(&b, &f.one()).unwrap(), vec_of(&[(1, 1, 1)]));
        let other = SparseVector::zero(SpaceId(9));
        assert!(matches!(v.add_scaled(&other, &f.one()), Err(LinError::SpaceMismatch(..))));
    }

    #[test]
    fn tensor_examples() {
        let one = Field::Rational.one();
        let t = tensor(&vec_of(&[(1, 1, 1)]), &vec_of(&[(2, 1, 1)]));
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.entries.get(&[e(1), e(2)].into_iter().collect()), Some(&one));
        assert!(tensor(&SparseVector::zero(S), &vec_of(&[(2, 1, 1)])).is_zero());
        let t = tensor(&vec_of(&[(1, 1, 1), (2, 1, 1)]), &vec_of(&[(1, 1, 1), (2, -1, 1)]));
        let signs: Vec<String> = t.entries.iter().map(|(_, c)| c.to_string()).collect();
        assert_eq!(signs, vec!["1/1", "-1/1", "1/1", "-1/1"]);
    }

    #[test]
    fn tensor_arity_bounds() {
        assert!(SparseTensor::zero(&[]).is_err());
        assert!(SparseTensor::zero(&[S; 5]).is_err());
        let v = vec_of(&[(0, 1, 1)]);
        let t = tensor(&v, &v).extend(&v).unwrap().extend(&v).unwrap();
        assert_eq!(t.arity(), 4);
        assert!(t.extend(&v).is_err());
    }

    fn arb_vec() -> impl Strategy<Value = SparseVector> {
        proptest::collection::vec((0u32..6, -9i64..10, 1i64..5), 0..6).prop_map(|v| {
            let f = Field::Rational;
            let mut out = SparseVector::zero(S);
            for (i, n, d) in v {
                out.entries.add_term(e(i), f.from_ratio(n, d));
            }
            out
        })
    }

    proptest! {
        #[test]
        fn add_scaled_commutes_and_associates(u in arb_vec(), v in arb_vec(), w in arb_vec()) {
            let one = Field::Rational.one();
            let uv = u.add_scaled(&v, &one).unwrap();
            let vu = v.add_scaled(&u, &one).unwrap();
            prop_assert_eq!(&uv, &vu);
            let left = uv.add_scaled(&w, &one).unwrap();
            let right = u.add_scaled(&v.add_scaled(&w, &one).unwrap(), &one).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn no_stored_zeros(u in arb_vec(), v in arb_vec()) {
            let s = u.add_scaled(&v, &Field::Rational.from_i64(-1)).unwrap();
            prop_assert!(s.entries.iter().all(|(_, c)| !c.is_zero()));
        }

        #[test]
        fn tensor_is_bilinear(u in arb_vec(), v in arb_vec(), w in arb_vec()) {
            let one = Field::Rational.one();
            let lhs = tensor(&u.add_scaled(&v, &one).unwrap(), &w);
            let rhs = tensor(&u, &w).add_scaled(&tensor(&v, &w), &one).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn rationals_stay_canonical(u in arb_vec(), v in arb_vec()) {
            let s = u.add_scaled(&v, &Field::Rational.from_ratio(3, 7)).unwrap();
            for (_, c) in s.entries.iter() {
                let r = c.as_rational().unwrap();
                prop_assert!(r.denom() > num_bigint::BigInt::from(0));
                prop_assert_eq!(num_integer::Integer::gcd(&r.numer(), &r.denom()), num_bigint::BigInt::from(1));
            }
        }
    }
}
