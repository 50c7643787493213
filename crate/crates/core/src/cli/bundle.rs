//! Serialized algebra bundles: every structure table plus the instance and ledger.

use serde::{Deserialize, Serialize};

use crate::bimodules::BaseKind;
use crate::exactlin::{BasisIndex, Field};
use crate::gradedhopf::{elem2_data, parse_elem2, AlgebraData, CheckOutcome, Elem2, GradedHopfAlgebra, Term2Data};
use crate::lqt::{
    build_r, canonical_copairing, double_cross_product, required_top, verify_lqt, Level, LqtStructure, SkewPairing,
    UnitVariant,
};

use super::instance::{build_instance, lqt_error, Instance, InstanceSpec};
use super::CliError;

pub const FORMAT: &str = "lqhopf-bundle/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub topic: String,
    pub decision: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelData {
    pub n: u32,
    /// `P_n` as `[H index, A index, c]`.
    pub p: Vec<Term2Data>,
    pub r: Vec<Term2Data>,
    pub r_inv: Vec<Term2Data>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupData {
    pub name: String,
    pub labels: Vec<String>,
    pub table: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bundle {
    pub format: String,
    pub instance: InstanceSpec,
    pub ledger: Vec<LedgerEntry>,
    pub group: GroupData,
    pub arrows: Vec<String>,
    pub a_kind: BaseKind,
    pub a: AlgebraData,
    pub h: AlgebraData,
    pub d: AlgebraData,
    /// `τ⁻¹` as `[H index, A index, c]`; τ itself is the Kronecker pairing.
    pub tau_inv: Vec<Term2Data>,
    pub levels: Vec<LevelData>,
}

fn entry(topic: &str, decision: String) -> LedgerEntry {
    LedgerEntry { topic: topic.into(), decision }
}

fn ledger(inst: &Instance) -> Vec<LedgerEntry> {
    let s = &inst.spec;
    let mut out = vec![
        entry(
            "construction",
            match s.variant {
                super::instance::Construction::I => "i: A = (path algebra on the arrow module)^cop, H = path coalgebra".into(),
                super::instance::Construction::Ii => "ii: A = (tensor algebra on the co-arrow module)^cop, H = its cotensor dual".into(),
            },
        ),
        entry(
            "r-unit-variant",
            match s.r_unit_variant {
                UnitVariant::Unit => "unit: R_n = 1_A ⊗ P_n ⊗ 1_H with 1_A the algebra unit".into(),
                UnitVariant::Literal => "literal: first slot is the single degree-0 basis element at the identity".into(),
            },
        ),
        entry("truncation", format!(
                "structure constants stored for total degree ≤ {}; R_n stored for n ≤ {}",
                s.max_degree(),
                inst.structure.levels.len() - 1
            )),
        entry("basis-order", "degree, then ordinal; words in normal form; D basis A_i × H_(n-i) for i = 0..n".into()),
        entry("arrow-labels", "a[source->target;index], index 1-based, ordered by source, class element, index".into()),
        entry("tau", "Kronecker on the shared word basis; τ⁻¹(h, a) = τ(h, S_A a)".into()),
        entry("braiding", "C(x⊗y) = Σ R″y ⊗ R′x, per-pair level 2n_x + 2n_y + 1, level 0 for degree-0 modules".into()),
    ];
    if let super::instance::BimoduleSpec::Z2ThreeLoops { characters } = &s.bimodule {
        out.push(entry(
            "characters",
            match characters {
                None => "trivial, trivial, sign".into(),
                Some(c) => format!("{c:?}"),
            },
        ));
        out.push(entry("right-action", "a_x·h = χ(h) a_(xh), extended from the loops at e by the bimodule law".into()));
    }
    if let Some(e) = arbitration(inst) {
        out.push(e);
    }
    out
}

/// ACO and R-CP3 at level 1 under both choices of the first slot of `R_1`.
fn arbitration(inst: &Instance) -> Option<LedgerEntry> {
    let s = &inst.structure;
    if s.levels.len() < 3 || s.top() < required_top(1) {
        return None;
    }
    let mut parts = Vec::new();
    for v in [UnitVariant::Unit, UnitVariant::Literal] {
        let mut levels = Vec::new();
        for l in &s.levels[..3] {
            let (r, r_inv) = build_r(&s.dcp, &l.p, v, inst.group.identity());
            levels.push(Level { n: l.n, p: l.p.clone(), r, r_inv });
        }
        let t = LqtStructure { dcp: s.dcp.clone(), variant: v, levels };
        let rep = verify_lqt(&t, 1).ok()?;
        let status: Vec<String> = ["ACO1", "ACO2", "R-CP3"]
            .iter()
            .map(|a| format!("{a} {}", if rep.check(a).is_some_and(|c| c.passed()) { "pass" } else { "fail" }))
            .collect();
        let name = match v {
            UnitVariant::Unit => "unit",
            UnitVariant::Literal => "literal",
        };
        parts.push(format!("{name}: {}", status.join(", ")));
    }
    Some(entry("r-unit-arbitration", format!("level 1, {}", parts.join("; "))))
}

fn level_data(l: &Level) -> LevelData {
    LevelData { n: l.n, p: elem2_data(&l.p), r: elem2_data(&l.r), r_inv: elem2_data(&l.r_inv) }
}

fn tau_inv_elem(a: &GradedHopfAlgebra) -> Elem2 {
    let mut out = Elem2::new();
    for x in a.all_basis() {
        if let Some(s) = a.antipode_basis(x) {
            for (k, c) in s.iter() {
                out.add_term((*k, x), c.clone());
            }
        }
    }
    out
}

pub fn bundle_of(inst: &Instance) -> Bundle {
    let s = &inst.structure;
    let g = &inst.group;
    Bundle {
        format: FORMAT.into(),
        instance: inst.spec.clone(),
        ledger: ledger(inst),
        group: GroupData { name: g.name.clone(), labels: g.labels.clone(), table: g.table().to_vec() },
        arrows: (0..inst.quiver.num_arrows() as u32).map(|a| inst.quiver.arrow_label(a)).collect(),
        a_kind: s.dcp.a_kind,
        a: s.dcp.a.to_data(),
        h: s.dcp.h.to_data(),
        d: s.dcp.d.to_data(),
        tau_inv: elem2_data(&tau_inv_elem(&s.dcp.a)),
        levels: s.levels.iter().map(level_data).collect(),
    }
}

pub fn build_bundle(spec: &InstanceSpec) -> Result<(Instance, Bundle), CliError> {
    let inst = build_instance(spec)?;
    let b = bundle_of(&inst);
    Ok((inst, b))
}

/// The structure read back from stored tables; D is the stored table, not a recomputation.
pub struct Loaded {
    pub structure: LqtStructure,
    /// D recomputed from the stored A, H and τ.
    pub recomputed_d: GradedHopfAlgebra,
}

fn data_error(e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("bundle: {e}"))
}

pub fn load(b: &Bundle) -> Result<Loaded, CliError> {
    if b.format != FORMAT {
        return Err(CliError::Input(format!("bundle format {:?}, expected {FORMAT:?}", b.format)));
    }
    let a = GradedHopfAlgebra::from_data(&b.a).map_err(data_error)?;
    let h = GradedHopfAlgebra::from_data(&b.h).map_err(data_error)?;
    let d = GradedHopfAlgebra::from_data(&b.d).map_err(data_error)?;
    let field = a.field;
    if h.field != field || d.field != field {
        return Err(data_error("algebras over different fields"));
    }
    let inv = parse_elem2(&a, &b.tau_inv).map_err(data_error)?;
    let tau = SkewPairing::from_inverse(field, inv.iter().map(|((x, y), c)| ((*x, *y), c.clone())).collect());
    let mut dcp = double_cross_product(&a, &h, &tau, b.a_kind).map_err(lqt_error)?;
    if dcp.d.labels(0) != d.labels(0) || dcp.d.dims() != d.dims() {
        return Err(data_error("stored D basis does not match A ⋈ H"));
    }
    let recomputed_d = std::mem::replace(&mut dcp.d, d);
    let mut levels = Vec::new();
    for l in &b.levels {
        let p = parse_elem2(&a, &l.p).map_err(data_error)?;
        let r = parse_elem2(&dcp.d, &l.r).map_err(data_error)?;
        let r_inv = parse_elem2(&dcp.d, &l.r_inv).map_err(data_error)?;
        levels.push(Level { n: l.n, p, r, r_inv });
    }
    if levels.iter().enumerate().any(|(i, l)| l.n != i as u32) {
        return Err(data_error("levels must be stored as 0, 1, 2, ..."));
    }
    let structure = LqtStructure { dcp, variant: b.instance.r_unit_variant, levels };
    Ok(Loaded { structure, recomputed_d })
}

fn first_diff<T: PartialEq + std::fmt::Debug>(what: &str, x: &[T], y: &[T]) -> Option<String> {
    if x.len() != y.len() {
        return Some(format!("{what}: {} entries stored, {} expected", x.len(), y.len()));
    }
    x.iter().zip(y).position(|(p, q)| p != q).map(|i| format!("{what}: entry {i} is {:?}, expected {:?}", x[i], y[i]))
}

fn algebra_diff(what: &str, x: &AlgebraData, y: &AlgebraData) -> Option<String> {
    if x.labels != y.labels {
        return Some(format!("{what}: basis labels differ"));
    }
    first_diff(&format!("{what} product"), &x.mul, &y.mul)
        .or_else(|| first_diff(&format!("{what} coproduct"), &x.comul, &y.comul))
        .or_else(|| first_diff(&format!("{what} counit"), &x.counit, &y.counit))
        .or_else(|| (x.unit != y.unit).then(|| format!("{what}: unit differs")))
        .or_else(|| (x.antipode != y.antipode).then(|| format!("{what}: antipode differs")))
        .or_else(|| (x.antipode_inv != y.antipode_inv).then(|| format!("{what}: antipode inverse differs")))
        .or_else(|| (x.name != y.name || x.field != y.field).then(|| format!("{what}: name or field differs")))
}

/// Stored tables against a fresh build from the embedded instance, plus internal coherence.
pub fn consistency(b: &Bundle, loaded: &Loaded) -> Result<Vec<CheckOutcome>, CliError> {
    let s = &loaded.structure;
    let dcp = &s.dcp;
    let mut table = CheckOutcome::named("double-cross-product-table");
    let d = &dcp.d;
    for x in d.all_basis() {
        for y in d.all_basis() {
            if x.degree + y.degree <= d.top {
                table.note(d.mul_basis(x, y) == loaded.recomputed_d.mul_basis(x, y), || {
                    format!("stored {}·{} differs from the exchange law", d.label(x), d.label(y))
                });
            }
        }
        table.note(d.comul_basis(x) == loaded.recomputed_d.comul_basis(x), || format!("stored Δ({}) differs", d.label(x)));
    }

    let mut tau = CheckOutcome::named("tau-inverse");
    let expect = elem2_data(&tau_inv_elem(&dcp.a));
    tau.note(b.tau_inv == expect, || first_diff("τ⁻¹", &b.tau_inv, &expect).unwrap_or_default());

    let mut coherent = CheckOutcome::named("truncation-coherence");
    let identity = b.group.table.iter().position(|row| row.iter().enumerate().all(|(j, v)| *v as usize == j)).unwrap_or(0);
    for l in &s.levels {
        let p = canonical_copairing(&dcp.a, l.n);
        coherent.note(p == l.p, || format!("P_{} is not the dual-basis copairing", l.n));
        let (r, r_inv) = build_r(dcp, &l.p, s.variant, identity as u32);
        coherent.note(r == l.r, || format!("R_{} is not 1_A ⊗ P_{} ⊗ 1_H", l.n, l.n));
        coherent.note(r_inv == l.r_inv, || format!("stored R_{}⁻¹ is not (S⊗id)R_{}", l.n, l.n));
        if l.n > 0 {
            let prev = &s.levels[l.n as usize - 1];
            let low = |v: &Elem2| v.filter(|(x, y): &(BasisIndex, BasisIndex)| x.degree < l.n && y.degree < l.n);
            coherent.note(low(&l.p) == prev.p, || format!("P_{} truncated to degree {} is not P_{}", l.n, l.n - 1, l.n - 1));
        }
    }
    for (what, alg) in [("A", &dcp.a), ("H", &dcp.h), ("D", d)] {
        coherent.note(alg.top == b.instance.max_degree(), || format!("{what} is truncated at {}, instance says {}", alg.top, b.instance.max_degree()));
    }

    let mut rebuild = CheckOutcome::named("rebuild");
    let (_, fresh) = build_bundle(&b.instance)?;
    let diff = algebra_diff("A", &b.a, &fresh.a)
        .or_else(|| algebra_diff("H", &b.h, &fresh.h))
        .or_else(|| algebra_diff("D", &b.d, &fresh.d))
        .or_else(|| (b.levels != fresh.levels).then(|| "stored R levels differ from a fresh build".into()))
        .or_else(|| (b.ledger != fresh.ledger).then(|| "ledger differs from a fresh build".into()))
        .or_else(|| (b != &fresh).then(|| "bundle differs from a fresh build".into()));
    rebuild.note(diff.is_none(), || diff.clone().unwrap_or_default());
    Ok(vec![table, tau, coherent, rebuild])
}

pub fn field_of(b: &Bundle) -> Field {
    b.a.field
}
