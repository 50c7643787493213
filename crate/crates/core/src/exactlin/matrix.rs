use std::collections::BTreeMap;

use super::{Field, LinError, Scalar};

/// Row-major sparse matrix with exact entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub field: Field,
    pub rows: usize,
    pub cols: usize,
    data: Vec<BTreeMap<usize, Scalar>>,
}

impl SparseMatrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        SparseMatrix { field, rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i].get(&j).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn set(&mut self, i: usize, j: usize, c: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        if c.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, c);
        }
    }

    pub fn add_at(&mut self, i: usize, j: usize, c: &Scalar) {
        let v = self.get(i, j).add(c);
        self.set(i, j, v);
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, &Scalar)> {
        self.data[i].iter().map(|(j, c)| (*j, c))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinError> {
        if self.cols != other.rows {
            return Err(LinError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = SparseMatrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (k, a) in &self.data[i] {
                for (j, b) in &other.data[*k] {
                    let t = a.mul(b);
                    match acc.get_mut(j) {
                        Some(v) => *v = v.add(&t),
                        None => {
                            acc.insert(*j, t);
                        }
                    }
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[i] = acc;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinError::Dimension("difference of unequal shapes".into()));
        }
        let mut out = self.clone();
        for i in 0..other.rows {
            for (j, c) in &other.data[i] {
                out.add_at(i, *j, &c.neg());
            }
        }
        Ok(out)
    }

    /// Kronecker product; row index of `self` is the slow one.
    pub fn kron(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = SparseMatrix::zero(self.field, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for (j, a) in &self.data[i] {
                for k in 0..other.rows {
                    for (l, b) in &other.data[k] {
                        out.set(i * other.rows + k, j * other.cols + l, a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut out = SparseMatrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for (j, c) in &self.data[i] {
                out.set(*j, i, c.clone());
            }
        }
        out
    }

    pub fn apply(&self, x: &[Scalar]) -> Result<Vec<Scalar>, LinError> {
        if x.len() != self.cols {
            return Err(LinError::Dimension(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i]
                    .iter()
                    .fold(self.field.zero(), |acc, (j, c)| acc.add(&c.mul(&x[*j])))
            })
            .collect())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| self.data[i].len() == 1 && self.data[i].get(&i).is_some_and(|c| c.is_one()))
    }

    /// First position where two equally shaped matrices differ.
    pub fn first_difference(&self, other: &SparseMatrix) -> Option<(usize, usize)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((usize::MAX, usize::MAX));
        }
        for i in 0..self.rows {
            if self.data[i] != other.data[i] {
                let j = self.data[i]
                    .keys()
                    .chain(other.data[i].keys())
                    .copied()
                    .filter(|j| self.data[i].get(j) != other.data[i].get(j))
                    .min()
                    .expect("rows differ");
                return Some((i, j));
            }
        }
        None
    }

    /// Dense row-major exact strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    pub fn from_strings(field: Field, rows: &[Vec<String>]) -> Result<SparseMatrix, LinError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::zero(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LinError::Dimension(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            for (j, s) in r.iter().enumerate() {
                m.set(i, j, field.parse(s)?);
            }
        }
        Ok(m)
    }

    /// Exact inverse by Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<SparseMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a: Vec<BTreeMap<usize, Scalar>> = self.data.clone();
        let mut inv: Vec<BTreeMap<usize, Scalar>> =
            (0..n).map(|i| BTreeMap::from([(i, self.field.one())])).collect();
        for c in 0..n {
            let p = (c..n).find(|&i| a[i].contains_key(&c))?;
            a.swap(c, p);
            inv.swap(c, p);
            let s = a[c][&c].inv()?;
            scale_row(&mut a[c], &s);
            scale_row(&mut inv[c], &s);
            for i in 0..n {
                if i == c {
                    continue;
                }
                if let Some(f) = a[i].get(&c).cloned() {
                    let neg = f.neg();
                    let (ac, ic) = (a[c].clone(), inv[c].clone());
                    axpy_row(&mut a[i], &neg, &ac);
                    axpy_row(&mut inv[i], &neg, &ic);
                }
            }
        }
        Some(SparseMatrix { field: self.field, rows: n, cols: n, data: inv })
    }
}

fn scale_row(r: &mut BTreeMap<usize, Scalar>, s: &Scalar) {
    for v in r.values_mut() {
        *v = v.mul(s);
    }
}

fn axpy_row(r: &mut BTreeMap<usize, Scalar>, c: &Scalar, x: &BTreeMap<usize, Scalar>) {
    for (j, v) in x {
        let t = c.mul(v);
        let nv = match r.get(j) {
            Some(old) => old.add(&t),
            None => t,
        };
        if nv.is_zero() {
            r.remove(j);
        } else {
            r.insert(*j, nv);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(field: Field, rows: &[&[i64]]) -> SparseMatrix {
        let mut out = SparseMatrix::zero(field, rows.len(), rows[0].len());
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                out.set(i, j, field.from_i64(*v));
            }
        }
        out
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let f = Field::Rational;
        let k = SparseMatrix::identity(f, 2).kron(&SparseMatrix::identity(f, 3));
        assert!(k.is_identity());
    }

    #[test]
    fn kron_mixed_product() {
        let f = Field::Rational;
        let a = m(f, &[&[1, 2], &[0, 1]]);
        let b = m(f, &[&[0, 1], &[1, 0]]);
        let c = m(f, &[&[3, 0], &[1, 1]]);
        let d = m(f, &[&[1, -1], &[2, 0]]);
        let lhs = a.kron(&b).mul(&c.kron(&d)).unwrap();
        let rhs = a.mul(&c).unwrap().kron(&b.mul(&d).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_roundtrip() {
        let f = Field::Rational;
        let a = m(f, &[&[2, 1, 0], &[1, 1, 0], &[0, 3, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        assert!(m(f, &[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn strings_roundtrip() {
        let f = Field::Rational;
        let a = m(f, &[&[2, -1], &[0, 5]]);
        let s = a.to_strings();
        assert_eq!(s[0][1], "-1/1");
        assert_eq!(SparseMatrix::from_strings(f, &s).unwrap(), a);
    }
}
