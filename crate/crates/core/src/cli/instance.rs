//! Instance files: group, ramification, bimodule data, budgets and variants.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bimodules::{
    assemble_hopf_bimodule, canonical_bimodule, default_characters, dualize_bimodule, example_bimodule,
    BimoduleError, HopfBimoduleData,
};
use crate::exactlin::{Comb, Field, Scalar};
use crate::lqt::{build_lqt, required_top, LqtError, LqtStructure, UnitVariant};
use crate::quivers::{build_hopf_quiver, FiniteGroup, HopfQuiver, QuiverError, Ramification};

use super::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Builtin(String),
    Table {
        #[serde(default)]
        name: Option<String>,
        #[serde(default)]
        labels: Option<Vec<String>>,
        table: Vec<Vec<u32>>,
    },
}

/// One action-table entry: arrow label to coefficient.
pub type ArrowComb = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BimoduleSpec {
    /// `g·a` and `a·h` by translation and conjugation of arrow data.
    #[default]
    Canonical,
    /// Z₂ with three loops at e; `characters[i][h]` twists the right action on the i-th loop.
    Z2ThreeLoops {
        #[serde(default)]
        characters: Option<Vec<Vec<String>>>,
    },
    /// `left[g][a] = g·a`, `right[a][g] = a·g`, rows in group and arrow order.
    Tables { left: Vec<Vec<ArrowComb>>, right: Vec<Vec<ArrowComb>> },
}

/// Which side carries the arrow module: (i) builds on `kQ₁^a`, (ii) on `kQ₁^c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Construction {
    #[default]
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    Ii,
}

impl std::str::FromStr for Construction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "i" => Ok(Construction::I),
            "ii" => Ok(Construction::Ii),
            _ => Err(format!("unknown construction {s:?}, expected i or ii")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    #[serde(default = "rational")]
    pub field: String,
    pub group: GroupSpec,
    /// Class representative label to number of arrows per class element.
    #[serde(default)]
    pub ramification: BTreeMap<String, u32>,
    #[serde(default)]
    pub bimodule: BimoduleSpec,
    #[serde(default)]
    pub max_degree: Option<u32>,
    #[serde(default)]
    pub level: Option<u32>,
    #[serde(default)]
    pub variant: Construction,
    #[serde(default = "unit_variant")]
    pub r_unit_variant: UnitVariant,
}

fn rational() -> String {
    "rational".into()
}

fn unit_variant() -> UnitVariant {
    UnitVariant::Unit
}

/// `rational`/`Q`, or an odd prime as `prime:p`, `F_p` or `p`.
pub fn parse_field(s: &str) -> Result<Field, CliError> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("rational") || t == "Q" {
        return Ok(Field::Rational);
    }
    let digits = t.strip_prefix("prime:").or_else(|| t.strip_prefix("F_")).unwrap_or(t);
    let p: u64 = digits.parse().map_err(|_| CliError::Input(format!("unknown field {s:?}")))?;
    Field::prime(p).map_err(|e| CliError::Input(e.to_string()))
}

pub fn field_name(f: Field) -> String {
    match f {
        Field::Rational => "rational".into(),
        Field::Prime { p } => format!("prime:{p}"),
    }
}

impl InstanceSpec {
    pub fn level(&self) -> u32 {
        self.level.unwrap_or(0)
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree.unwrap_or_else(|| required_top(self.level()))
    }

    /// Fills defaults so the stored copy is self-describing.
    pub fn resolved(&self) -> Result<InstanceSpec, CliError> {
        let mut s = self.clone();
        s.field = field_name(parse_field(&self.field)?);
        s.level = Some(self.level());
        s.max_degree = Some(self.max_degree());
        if s.level() > s.max_degree() {
            return Err(CliError::Input(format!(
                "level {} needs max-degree at least {}, got {}",
                s.level(),
                s.level(),
                s.max_degree()
            )));
        }
        Ok(s)
    }
}

/// The pieces an instance expands to.
pub struct Instance {
    pub spec: InstanceSpec,
    pub group: FiniteGroup,
    pub quiver: HopfQuiver,
    /// The kG-Hopf bimodule on `kQ₁^c`.
    pub coarrow: HopfBimoduleData,
    pub structure: LqtStructure,
}

fn quiver_error(e: QuiverError) -> CliError {
    CliError::Input(e.to_string())
}

fn bimodule_error(e: BimoduleError) -> CliError {
    match e {
        BimoduleError::Input(m) => CliError::Input(m),
        e => CliError::Verification(e.to_string()),
    }
}

pub fn lqt_error(e: LqtError) -> CliError {
    match e {
        LqtError::Budget { .. } | LqtError::MissingLevel(_) => CliError::Input(e.to_string()),
        e => CliError::Verification(e.to_string()),
    }
}

pub fn parse_group(g: &GroupSpec) -> Result<FiniteGroup, QuiverError> {
    match g {
        GroupSpec::Builtin(name) => FiniteGroup::builtin(name),
        GroupSpec::Table { name, labels, table } => {
            let labels = labels.clone().unwrap_or_else(|| (0..table.len()).map(|i| format!("x{i}")).collect());
            FiniteGroup::from_table(name.as_deref().unwrap_or("G"), labels, table.clone())
        }
    }
}

pub fn group_of(g: &GroupSpec) -> Result<FiniteGroup, CliError> {
    parse_group(g).map_err(quiver_error)
}

fn element(g: &FiniteGroup, label: &str) -> Result<u32, CliError> {
    g.elements()
        .find(|x| g.label(*x) == label)
        .ok_or_else(|| CliError::Input(format!("{label:?} is not an element of {}", g.name)))
}

fn scalar(f: Field, s: &str) -> Result<Scalar, CliError> {
    f.parse(s).map_err(|e| CliError::Input(format!("scalar {s:?}: {e}")))
}

fn arrow_comb(q: &HopfQuiver, f: Field, c: &ArrowComb) -> Result<Comb<u32>, CliError> {
    let mut out = Comb::new();
    for (label, v) in c {
        let a = (0..q.num_arrows() as u32)
            .find(|a| q.arrow_label(*a) == *label)
            .ok_or_else(|| CliError::Input(format!("{label:?} is not an arrow")))?;
        out.add_term(a, scalar(f, v)?);
    }
    Ok(out)
}

fn table(q: &HopfQuiver, f: Field, rows: &[Vec<ArrowComb>]) -> Result<Vec<Vec<Comb<u32>>>, CliError> {
    rows.iter().map(|r| r.iter().map(|c| arrow_comb(q, f, c)).collect()).collect()
}

pub fn build_instance(spec: &InstanceSpec) -> Result<Instance, CliError> {
    let spec = spec.resolved()?;
    let field = parse_field(&spec.field)?;
    let group = group_of(&spec.group)?;
    let mut entries = Vec::new();
    for (label, r) in &spec.ramification {
        entries.push((element(&group, label)?, *r));
    }
    let quiver = build_hopf_quiver(group.clone(), Ramification::new(&group, &entries).map_err(quiver_error)?);
    let coarrow = match &spec.bimodule {
        BimoduleSpec::Canonical => canonical_bimodule(&quiver, field),
        BimoduleSpec::Z2ThreeLoops { characters } => {
            let chi = match characters {
                None => default_characters(field),
                Some(rows) => {
                    if rows.len() != 3 {
                        return Err(CliError::Input(format!("{} characters given, expected 3", rows.len())));
                    }
                    let mut out = default_characters(field);
                    for (i, r) in rows.iter().enumerate() {
                        out[i] = r.iter().map(|s| scalar(field, s)).collect::<Result<_, _>>()?;
                    }
                    out
                }
            };
            example_bimodule(&quiver, field, &chi)
        }
        BimoduleSpec::Tables { left, right } => {
            assemble_hopf_bimodule(&quiver, field, table(&quiver, field, left)?, table(&quiver, field, right)?)
        }
    }
    .map_err(bimodule_error)?;
    let m = match spec.variant {
        Construction::I => dualize_bimodule(&coarrow),
        Construction::Ii => coarrow.clone(),
    };
    // LQT4' at level n compares R_{n+1} with R_n
    let levels = (spec.level() + 1).min(spec.max_degree());
    let structure = build_lqt(&m, spec.max_degree(), levels, spec.r_unit_variant).map_err(lqt_error)?;
    Ok(Instance { spec, group, quiver, coarrow, structure })
}
