//! Module certificates: matrices of D basis elements on a finite basis.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::braidmod::{
    character_module, class_module, conjugation_module, trivial_module, BraidError, FiniteCycleModule,
};
use crate::exactlin::{BasisIndex, SparseMatrix};
use crate::lqt::LqtStructure;
use crate::quivers::FiniteGroup;

use super::instance::{field_name, parse_field};
use super::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleCert {
    pub name: String,
    #[serde(default)]
    pub field: Option<String>,
    pub basis: Vec<String>,
    /// `n_x` per basis vector; zero when absent.
    #[serde(default)]
    pub bounds: Option<Vec<u32>>,
    #[serde(default)]
    pub degree_zero_only: bool,
    /// Integer degree per basis vector; D_k must raise it by k.
    #[serde(default)]
    pub grading: Option<Vec<u32>>,
    /// Highest D degree whose action is supplied; absent matrices act by zero.
    #[serde(default)]
    pub top: Option<u32>,
    /// D basis label to a row-major matrix.
    pub actions: BTreeMap<String, Vec<Vec<String>>>,
}

pub fn braid_error(e: BraidError) -> CliError {
    match e {
        BraidError::Level { .. } | BraidError::Shape { .. } => CliError::Input(e.to_string()),
        e => CliError::Verification(e.to_string()),
    }
}

fn group_element(g: &FiniteGroup, label: &str) -> Result<u32, CliError> {
    g.elements()
        .find(|x| g.label(*x) == label)
        .ok_or_else(|| CliError::Input(format!("{label:?} is not an element of {}", g.name)))
}

pub fn module_of(cert: &ModuleCert, s: &LqtStructure) -> Result<FiniteCycleModule, CliError> {
    let d = &s.dcp.d;
    let bad = |msg: String| CliError::Input(format!("module {}: {msg}", cert.name));
    if let Some(f) = &cert.field {
        if parse_field(f)? != d.field {
            return Err(bad(format!("field {f} differs from {}", field_name(d.field))));
        }
    }
    let n = cert.basis.len();
    let bounds = cert.bounds.clone().unwrap_or_else(|| vec![0; n]);
    if bounds.len() != n {
        return Err(bad(format!("{} bounds for {n} basis vectors", bounds.len())));
    }
    let top = if cert.degree_zero_only { 0 } else { cert.top.unwrap_or(d.top) };
    let mut m = FiniteCycleModule::new(&cert.name, d.field, cert.basis.clone(), bounds, top);
    m.degree_zero_only = cert.degree_zero_only;
    if let Some(gr) = &cert.grading {
        if gr.len() != n {
            return Err(bad(format!("{} grading entries for {n} basis vectors", gr.len())));
        }
        m.grading = Some(gr.clone());
    }
    for (label, rows) in &cert.actions {
        let x = d.find_label(label).ok_or_else(|| bad(format!("{label:?} is not a basis element of D")))?;
        if x.degree > top {
            return Err(bad(format!("{label} has degree {} above the declared top {top}", x.degree)));
        }
        let a = SparseMatrix::from_strings(d.field, rows).map_err(|e| bad(format!("{label}: {e}")))?;
        if a.rows != n || a.cols != n {
            return Err(bad(format!("{label} acts by a {}x{} matrix, expected {n}x{n}", a.rows, a.cols)));
        }
        m.set_action(x, a);
    }
    Ok(m)
}

pub fn cert_of(m: &FiniteCycleModule, s: &LqtStructure) -> ModuleCert {
    let d = &s.dcp.d;
    let actions = m
        .actions()
        .map(|(x, a): (&BasisIndex, &SparseMatrix)| (d.label(*x).to_string(), a.to_strings()))
        .collect();
    ModuleCert {
        name: m.name.clone(),
        field: Some(field_name(m.field)),
        basis: m.labels.clone(),
        bounds: Some(m.bounds.clone()),
        degree_zero_only: m.degree_zero_only,
        grading: m.grading.clone(),
        top: Some(m.top),
        actions,
    }
}

/// `trivial`, `conjugation`, `class:<element>` or `character:<element>:<v1,v2,...>`.
pub fn builtin_module(spec: &str, s: &LqtStructure, g: &FiniteGroup) -> Result<FiniteCycleModule, CliError> {
    let dcp = &s.dcp;
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["trivial"] => Ok(trivial_module(dcp)),
        ["conjugation"] => conjugation_module(dcp, g).map_err(braid_error),
        ["class", rep] => class_module(dcp, g, group_element(g, rep)?).map_err(braid_error),
        ["character", h0, vals] => {
            let psi = vals
                .split(',')
                .map(|v| dcp.d.field.parse(v.trim()).map_err(|e| CliError::Input(format!("character value {v:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if psi.len() != g.order() as usize {
                return Err(CliError::Input(format!("character needs {} values, got {}", g.order(), psi.len())));
            }
            character_module(dcp, g, group_element(g, h0)?, &psi).map_err(braid_error)
        }
        _ => Err(CliError::Input(format!(
            "unknown builtin module {spec:?}; expected trivial, conjugation, class:<g> or character:<g>:<values>"
        ))),
    }
}
