//! Plain serializable form of the structure tables; scalars are exact strings.

use serde::{Deserialize, Serialize};

use crate::exactlin::{BasisIndex, Field};

use super::{Elem, Elem2, GradedError, GradedHopfAlgebra};

/// `[index, coefficient]` with the index written `degree:ordinal`.
pub type TermData = (String, String);
pub type Term2Data = (String, String, String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraData {
    pub name: String,
    pub field: Field,
    pub labels: Vec<Vec<String>>,
    pub unit: Vec<TermData>,
    /// Indexed like the flattened basis.
    pub counit: Vec<String>,
    pub comul: Vec<Vec<Term2Data>>,
    /// Nonzero in-budget products `[x, y, x·y]`.
    pub mul: Vec<(String, String, Vec<TermData>)>,
    pub antipode: Option<Vec<Vec<TermData>>>,
    pub antipode_inv: Option<Vec<Vec<TermData>>>,
}

pub fn elem_data(v: &Elem) -> Vec<TermData> {
    v.iter().map(|(k, c)| (k.to_string(), c.to_string())).collect()
}

pub fn elem2_data(v: &Elem2) -> Vec<Term2Data> {
    v.iter().map(|((x, y), c)| (x.to_string(), y.to_string(), c.to_string())).collect()
}

fn bad(msg: String) -> GradedError {
    GradedError::Mismatch(msg)
}

pub fn parse_index(s: &str) -> Result<BasisIndex, GradedError> {
    let (d, o) = s.split_once(':').ok_or_else(|| bad(format!("basis index {s:?} is not degree:ordinal")))?;
    let d = d.parse().map_err(|_| bad(format!("bad degree in {s:?}")))?;
    let o = o.parse().map_err(|_| bad(format!("bad ordinal in {s:?}")))?;
    Ok(BasisIndex::new(d, o))
}

fn index_in(h: &GradedHopfAlgebra, s: &str) -> Result<BasisIndex, GradedError> {
    let x = parse_index(s)?;
    if x.degree > h.top || x.ordinal as usize >= h.dim(x.degree) {
        return Err(bad(format!("{s} is not a basis index of {}", h.name)));
    }
    Ok(x)
}

pub fn parse_elem(h: &GradedHopfAlgebra, terms: &[TermData]) -> Result<Elem, GradedError> {
    let mut out = Elem::new();
    for (k, c) in terms {
        let c = h.field.parse(c).map_err(|e| bad(e.to_string()))?;
        out.add_term(index_in(h, k)?, c);
    }
    Ok(out)
}

pub fn parse_elem2(h: &GradedHopfAlgebra, terms: &[Term2Data]) -> Result<Elem2, GradedError> {
    let mut out = Elem2::new();
    for (x, y, c) in terms {
        let c = h.field.parse(c).map_err(|e| bad(e.to_string()))?;
        out.add_term((index_in(h, x)?, index_in(h, y)?), c);
    }
    Ok(out)
}

impl GradedHopfAlgebra {
    pub fn to_data(&self) -> AlgebraData {
        let basis: Vec<BasisIndex> = self.all_basis().collect();
        let mut mul = Vec::new();
        for &x in &basis {
            for &y in &basis {
                if let Some(p) = self.mul_basis(x, y).filter(|p| !p.is_empty()) {
                    mul.push((x.to_string(), y.to_string(), elem_data(p)));
                }
            }
        }
        let table = |t: &Option<Vec<Elem>>| t.as_ref().map(|s| s.iter().map(elem_data).collect());
        AlgebraData {
            name: self.name.clone(),
            field: self.field,
            labels: self.labels.clone(),
            unit: elem_data(&self.unit),
            counit: self.counit.iter().map(|c| c.to_string()).collect(),
            comul: self.comul.iter().map(elem2_data).collect(),
            mul,
            antipode: table(&self.antipode),
            antipode_inv: table(&self.antipode_inv),
        }
    }

    pub fn from_data(d: &AlgebraData) -> Result<GradedHopfAlgebra, GradedError> {
        if d.labels.is_empty() {
            return Err(bad(format!("{} has no degree-0 basis", d.name)));
        }
        let mut h = GradedHopfAlgebra::with_bases(&d.name, d.field, d.labels.clone());
        let total = h.total_dim();
        if d.counit.len() != total || d.comul.len() != total {
            return Err(bad(format!("{}: counit/comultiplication tables need {total} entries", d.name)));
        }
        for (i, (c, dd)) in d.counit.iter().zip(&d.comul).enumerate() {
            let x = h.unflat(i);
            let c = d.field.parse(c).map_err(|e| bad(e.to_string()))?;
            h.set_counit(x, c);
            let v = parse_elem2(&h, dd)?;
            h.set_comul(x, v);
        }
        for (x, y, p) in &d.mul {
            let (x, y) = (index_in(&h, x)?, index_in(&h, y)?);
            if x.degree + y.degree > h.top {
                return Err(bad(format!("{}: product {x}·{y} lies outside the degree budget", d.name)));
            }
            let v = parse_elem(&h, p)?;
            h.set_mul(x, y, v);
        }
        let unit = parse_elem(&h, &d.unit)?;
        h.set_unit(unit);
        if let (Some(s), Some(si)) = (&d.antipode, &d.antipode_inv) {
            if s.len() != total || si.len() != total {
                return Err(bad(format!("{}: antipode tables need {total} entries", d.name)));
            }
            let s = s.iter().map(|t| parse_elem(&h, t)).collect::<Result<Vec<_>, _>>()?;
            let si = si.iter().map(|t| parse_elem(&h, t)).collect::<Result<Vec<_>, _>>()?;
            h.set_antipode(s, si);
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodules::{default_characters, example_bimodule};
    use crate::gradedhopf::tensor_hopf;
    use crate::quivers::{build_hopf_quiver, FiniteGroup, Ramification};

    #[test]
    fn tables_roundtrip_through_json() {
        let g = FiniteGroup::cyclic(2);
        let q = build_hopf_quiver(g.clone(), Ramification::new(&g, &[(0, 3)]).unwrap());
        let m = example_bimodule(&q, Field::Rational, &default_characters(Field::Rational)).unwrap();
        let h = tensor_hopf(&m, 2).unwrap();
        let text = serde_json::to_string(&h.to_data()).unwrap();
        let back: AlgebraData = serde_json::from_str(&text).unwrap();
        assert_eq!(GradedHopfAlgebra::from_data(&back).unwrap(), h);
    }

    #[test]
    fn out_of_budget_product_is_rejected() {
        let g = FiniteGroup::cyclic(1);
        let q = build_hopf_quiver(g.clone(), Ramification::new(&g, &[(0, 1)]).unwrap());
        let m = crate::bimodules::canonical_bimodule(&q, Field::Rational).unwrap();
        let mut d = tensor_hopf(&m, 1).unwrap().to_data();
        d.mul.push(("1:0".into(), "1:0".into(), vec![]));
        assert!(GradedHopfAlgebra::from_data(&d).is_err());
        assert!(parse_index("1-0").is_err());
    }
}
