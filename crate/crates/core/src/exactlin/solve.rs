use std::collections::BTreeMap;

use super::{BasisIndex, Comb, Field, LinError, Scalar, SparseVector};

/// Incremental sparse Gaussian elimination over exact scalars.
///
/// Each accepted row is stored with its smallest key as pivot (coefficient 1),
/// so every later row can be reduced in a single ascending sweep.
pub struct LinearSystem<K: Ord + Clone> {
    field: Field,
    pivots: BTreeMap<K, (Comb<K>, Scalar)>,
    rows_seen: usize,
}

impl<K: Ord + Clone> LinearSystem<K> {
    pub fn new(field: Field) -> Self {
        LinearSystem { field, pivots: BTreeMap::new(), rows_seen: 0 }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn rows_seen(&self) -> usize {
        self.rows_seen
    }

    fn reduce(&self, mut row: Comb<K>, mut rhs: Scalar) -> (Comb<K>, Scalar) {
        let mut cursor: Option<K> = None;
        loop {
            let next = row
                .keys()
                .filter(|k| cursor.as_ref().map_or(true, |c| *k > c))
                .find(|k| self.pivots.contains_key(*k))
                .cloned();
            let Some(k) = next else { break };
            let neg = row.get(&k).expect("key present").neg();
            let (prow, prhs) = &self.pivots[&k];
            row.axpy(&neg, prow);
            rhs = rhs.add(&neg.mul(prhs));
            cursor = Some(k);
        }
        (row, rhs)
    }

    /// Adds the equation `row · x = rhs`.
    pub fn add_row(&mut self, row: Comb<K>, rhs: Scalar) -> Result<(), LinError> {
        self.rows_seen += 1;
        let (row, rhs) = self.reduce(row, rhs);
        let Some((p, c)) = row.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return if rhs.is_zero() { Ok(()) } else { Err(LinError::Infeasible) };
        };
        let inv = c.inv().expect("nonzero pivot");
        self.pivots.insert(p, (row.scaled(&inv), rhs.mul(&inv)));
        Ok(())
    }

    /// One solution, free variables set to zero.
    pub fn solve(&self) -> BTreeMap<K, Scalar> {
        let mut x: BTreeMap<K, Scalar> = BTreeMap::new();
        for (p, (row, rhs)) in self.pivots.iter().rev() {
            let mut v = rhs.clone();
            for (k, c) in row.iter() {
                if k == p {
                    continue;
                }
                if let Some(xk) = x.get(k) {
                    v = v.sub(&c.mul(xk));
                }
            }
            if !v.is_zero() {
                x.insert(p.clone(), v);
            }
        }
        x
    }
}

/// Solves `row_i · x = rhs_i` for all rows over one indexed space.
pub fn solve_linear(rows: &[(SparseVector, Scalar)]) -> Result<SparseVector, LinError> {
    let Some((first, _)) = rows.first() else {
        return Err(LinError::Malformed("no equations".into()));
    };
    let space = first.space;
    let field = rows
        .iter()
        .flat_map(|(v, r)| v.entries.iter().map(|(_, c)| c.field()).chain(Some(r.field())))
        .next()
        .unwrap_or(Field::Rational);
    let mut sys: LinearSystem<BasisIndex> = LinearSystem::new(field);
    for (i, (v, rhs)) in rows.iter().enumerate() {
        if v.space != space {
            return Err(LinError::Malformed(format!("row {i} lives in space {}, expected {space}", v.space)));
        }
        if v.entries.iter().any(|(_, c)| c.field() != field) || rhs.field() != field {
            return Err(LinError::Malformed(format!("row {i} mixes fields")));
        }
        sys.add_row(v.entries.clone(), rhs.clone())?;
    }
    let mut out = SparseVector::zero(space);
    for (k, c) in sys.solve() {
        out.entries.add_term(k, c);
    }
    Ok(out)
}
