//! Command-line front end: instance files in, bundles and JSON reports out.
//!
//! Exit codes: 0 all checks pass, 1 a verification failed, 2 bad input.

pub mod bundle;
pub mod instance;
pub mod module;
pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::braidmod::{braiding_matrix, check_module, hexagon_check, yd_structure, BraidError, FiniteCycleModule};
use crate::gradedhopf::{duality_check, opposite_coalgebra, verify_hopf, CheckOutcome, Elem, Elem2};
use crate::lqt::{build_r, qybe_defect, required_top, verify_lqt, verify_skew_pairing, LqtStructure, UnitVariant};
use crate::quivers::{FiniteGroup, QuiverError};

use bundle::{build_bundle, consistency, load, Bundle, LedgerEntry};
use instance::{parse_group, Construction, GroupSpec, InstanceSpec};
use module::{braid_error, builtin_module, module_of, ModuleCert};
use report::{Check, Dims, Report, Section};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) | CliError::Io(_) => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RUnit {
    Unit,
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    I,
    Ii,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum What {
    Hopf,
    Pairing,
    Copairing,
    Lqt,
    Duality,
}

#[derive(Debug, Parser)]
#[command(name = "lqhopf", version, about = "Exact local quasitriangular Hopf algebras on Hopf quivers")]
struct Cli {
    /// Instance file (JSON) or a bundle written by `build`.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Truncation degree N (instance files only).
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    /// Level n of the canonical element R_n.
    #[arg(long, global = true)]
    level: Option<u32>,
    /// `rational` or an odd prime `p` (instance files only).
    #[arg(long, global = true)]
    field: Option<String>,
    /// Which side carries the arrow module (instance files only).
    #[arg(long, global = true, value_enum)]
    variant: Option<VariantArg>,
    /// First slot of R_n: algebra unit or the identity idempotent (instance files only).
    #[arg(long, global = true, value_enum)]
    r_unit_variant: Option<RUnit>,
    /// Worker threads for verification sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Add wall-clock timings to the report and stderr.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the algebra bundle from an instance file.
    Build,
    /// Run one verifier.
    Verify {
        #[arg(long, value_enum)]
        what: What,
    },
    /// Emit P_n, R_n and R_n^-1 on labelled bases.
    EmitR,
    /// Braiding matrices, braid relation and hexagons for module certificates.
    Braid {
        /// Certificate file or `builtin:trivial|conjugation|class:<g>|character:<g>:<values>`; repeatable.
        #[arg(long = "module", required = true)]
        modules: Vec<String>,
        /// Also emit and check the induced coactions.
        #[arg(long)]
        yd: bool,
    },
    /// Measure R12 R13 R23 - R23 R13 R12.
    YbeDefect,
    /// Every verifier the truncation allows.
    Report,
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(CliError::Input(format!("--threads {n}: {e}"))),
        },
        None => execute(&cli),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

struct Timer {
    on: bool,
    phases: BTreeMap<String, u128>,
}

impl Timer {
    fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        if self.on {
            let ms = t.elapsed().as_millis();
            eprintln!("timing {phase}: {ms} ms");
            self.phases.insert(phase.into(), ms);
        }
        out
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let path = cli.input.as_deref().ok_or_else(|| CliError::Input("--input is required".into()))?;
    let input = read_input(path)?;
    let mut timer = Timer { on: cli.timing, phases: BTreeMap::new() };
    if let Command::Build = cli.command {
        let Input::Spec(spec) = input else {
            return Err(CliError::Input(format!("{}: build expects an instance file, not a bundle", path.display())));
        };
        let spec = with_overrides(cli, spec)?;
        check_group(path, &spec)?;
        let (inst, b) = timer.time("build", || build_bundle(&spec))?;
        let dims = Dims::of(&inst.structure);
        eprintln!("D dims by degree {:?}, total {}", dims.d, dims.d_total);
        emit(cli, &to_json(&b))?;
        return Ok(true);
    }

    let ctx = timer.time("load", || context(cli, path, input))?;
    let mut rep = Report::new(command_name(&cli.command), ctx.spec.clone(), Dims::of(&ctx.s), ctx.ledger.clone());
    if let Some(c) = &ctx.consistency {
        rep.push(Section::of("bundle", c));
    }
    let level = cli.level.unwrap_or(ctx.spec.level());
    match &cli.command {
        Command::Build => unreachable!(),
        Command::Verify { what } => match what {
            What::Hopf => timer.time("hopf", || hopf_sections(&ctx, &mut rep)),
            What::Pairing => timer.time("pairing", || pairing_sections(&ctx, &mut rep)),
            What::Copairing => timer.time("copairing", || rep.push(copairing_section(&ctx, level))),
            What::Duality => rep.push(timer.time("duality", || duality_section(&ctx.s))?),
            What::Lqt => {
                preflight_lqt(&ctx.s, level)?;
                rep.push(timer.time("lqt", || lqt_section(&ctx.s, level))?);
            }
        },
        Command::EmitR => rep.push(timer.time("emit-r", || r_section(&ctx.s, level))),
        Command::YbeDefect => {
            preflight_ybe(&ctx.s, level)?;
            rep.push(timer.time("ybe-defect", || ybe_section(&ctx.s, level))?);
        }
        Command::Braid { modules, yd } => timer.time("braid", || braid_sections(&ctx, modules, *yd, &mut rep))?,
        Command::Report => {
            timer.time("hopf", || hopf_sections(&ctx, &mut rep));
            timer.time("pairing", || pairing_sections(&ctx, &mut rep));
            rep.push(copairing_section(&ctx, ctx.s.levels.len() as u32 - 1));
            rep.push(timer.time("duality", || duality_section(&ctx.s))?);
            for n in 0..ctx.s.levels.len() as u32 {
                match preflight_lqt(&ctx.s, n) {
                    Ok(()) => rep.push(timer.time(&format!("lqt:{n}"), || lqt_section(&ctx.s, n))?),
                    Err(e) => rep.push(Section::new(&format!("lqt:{n}"), vec![Check::skipped("lqt", e.to_string())])),
                }
                match preflight_ybe(&ctx.s, n) {
                    Ok(()) => rep.push(timer.time(&format!("ybe-defect:{n}"), || ybe_section(&ctx.s, n))?),
                    Err(e) => {
                        rep.push(Section::new(&format!("ybe-defect:{n}"), vec![Check::skipped("qybe-zero", e.to_string())]))
                    }
                }
            }
        }
    }
    if cli.timing {
        rep.timing_ms = Some(timer.phases);
    }
    emit(cli, &rep.to_json())?;
    Ok(rep.passed)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Build => "build",
        Command::Verify { what } => match what {
            What::Hopf => "verify hopf",
            What::Pairing => "verify pairing",
            What::Copairing => "verify copairing",
            What::Lqt => "verify lqt",
            What::Duality => "verify duality",
        },
        Command::EmitR => "emit-r",
        Command::Braid { .. } => "braid",
        Command::YbeDefect => "ybe-defect",
        Command::Report => "report",
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

enum Input {
    Spec(InstanceSpec),
    Bundle(Box<Bundle>),
}

fn json_error(path: &Path, e: &serde_json::Error) -> CliError {
    let msg = e.to_string();
    let msg = msg.split(" at line ").next().unwrap_or(&msg);
    CliError::Input(format!("{}:{}:{}: {msg}", path.display(), e.line(), e.column()))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_input(path: &Path) -> Result<Input, CliError> {
    let text = read_text(path)?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| json_error(path, &e))?;
    if v.get("format").is_some() {
        let b: Bundle = serde_json::from_str(&text).map_err(|e| json_error(path, &e))?;
        Ok(Input::Bundle(Box::new(b)))
    } else {
        let s: InstanceSpec = serde_json::from_str(&text).map_err(|e| json_error(path, &e))?;
        Ok(Input::Spec(s))
    }
}

/// 1-based line of the Cayley table, or of row `row` inside it.
fn table_line(text: &str, row: Option<usize>) -> Option<usize> {
    let start = text.find("\"table\"")?;
    let mut pos = start;
    let (mut depth, mut seen) = (0usize, 0usize);
    for (i, ch) in text[start..].char_indices() {
        match ch {
            '[' => {
                depth += 1;
                if depth == 2 {
                    if Some(seen) == row {
                        pos = start + i;
                        break;
                    }
                    seen += 1;
                }
            }
            ']' => {
                depth = depth.saturating_sub(1);
                if depth == 0 {
                    break;
                }
            }
            _ => {}
        }
    }
    Some(text[..pos].matches('\n').count() + 1)
}

fn check_group(path: &Path, spec: &InstanceSpec) -> Result<(), CliError> {
    if let Err(e) = parse_group(&spec.group) {
        let row = match &e {
            QuiverError::TableRow { row, .. } => Some(*row),
            _ => None,
        };
        let line = match &spec.group {
            GroupSpec::Table { .. } => read_text(path).ok().and_then(|t| table_line(&t, row)),
            GroupSpec::Builtin(_) => None,
        };
        return Err(CliError::Input(match line {
            Some(l) => format!("{}:{l}: {e}", path.display()),
            None => format!("{}: {e}", path.display()),
        }));
    }
    Ok(())
}

fn with_overrides(cli: &Cli, mut spec: InstanceSpec) -> Result<InstanceSpec, CliError> {
    if let Some(f) = &cli.field {
        spec.field = f.clone();
    }
    if let Some(n) = cli.level {
        spec.level = Some(n);
    }
    if let Some(n) = cli.max_degree {
        spec.max_degree = Some(n);
    }
    if let Some(v) = cli.variant {
        spec.variant = match v {
            VariantArg::I => Construction::I,
            VariantArg::Ii => Construction::Ii,
        };
    }
    if let Some(v) = cli.r_unit_variant {
        spec.r_unit_variant = match v {
            RUnit::Unit => UnitVariant::Unit,
            RUnit::Literal => UnitVariant::Literal,
        };
    }
    spec.resolved()
}

struct Context {
    spec: InstanceSpec,
    group: FiniteGroup,
    s: LqtStructure,
    ledger: Vec<LedgerEntry>,
    consistency: Option<Vec<CheckOutcome>>,
}

fn context(cli: &Cli, path: &Path, input: Input) -> Result<Context, CliError> {
    match input {
        Input::Spec(spec) => {
            let spec = with_overrides(cli, spec)?;
            check_group(path, &spec)?;
            let (inst, b) = build_bundle(&spec)?;
            Ok(Context { spec: inst.spec, group: inst.group, s: inst.structure, ledger: b.ledger, consistency: None })
        }
        Input::Bundle(b) => {
            if cli.field.is_some() || cli.max_degree.is_some() || cli.variant.is_some() || cli.r_unit_variant.is_some() {
                return Err(CliError::Input(
                    "--field, --max-degree, --variant and --r-unit-variant apply to instance files; rebuild the bundle".into(),
                ));
            }
            let group = FiniteGroup::from_table(&b.group.name, b.group.labels.clone(), b.group.table.clone())
                .map_err(|e| CliError::Input(format!("{}: bundle group: {e}", path.display())))?;
            let loaded = load(&b)?;
            let checks = consistency(&b, &loaded)?;
            Ok(Context {
                spec: b.instance.clone(),
                group,
                s: loaded.structure,
                ledger: b.ledger.clone(),
                consistency: Some(checks),
            })
        }
    }
}

fn preflight_lqt(s: &LqtStructure, n: u32) -> Result<(), CliError> {
    let need = required_top(n);
    if s.top() < need {
        return Err(CliError::Input(format!(
            "level {n} needs max-degree at least {need}, the structure is truncated at {}",
            s.top()
        )));
    }
    if n as usize + 1 >= s.levels.len() {
        return Err(CliError::Input(format!("level {n} needs R_{} as well; rebuild with --level {n}", n + 1)));
    }
    Ok(())
}

fn preflight_ybe(s: &LqtStructure, n: u32) -> Result<(), CliError> {
    if s.top() < 3 * n {
        return Err(CliError::Input(format!(
            "the Yang-Baxter defect at level {n} needs max-degree at least {}, the structure is truncated at {}",
            3 * n,
            s.top()
        )));
    }
    if n as usize >= s.levels.len() {
        return Err(CliError::Input(format!("level {n} was not built; rebuild with --level {n}")));
    }
    Ok(())
}

fn hopf_sections(ctx: &Context, rep: &mut Report) {
    let dcp = &ctx.s.dcp;
    for (name, alg) in [("A", &dcp.a), ("H", &dcp.h), ("D", &dcp.d)] {
        let r = verify_hopf(alg);
        let mut sec = Section::of(&format!("hopf:{name}"), &r.checks);
        if r.skipped > 0 {
            sec.checks.push(Check::skipped("budget", format!("{} basis tuples leave degree {}", r.skipped, r.top)));
        }
        rep.push(sec);
    }
}

fn pairing_sections(ctx: &Context, rep: &mut Report) {
    let dcp = &ctx.s.dcp;
    rep.push(Section::of("pairing", &verify_skew_pairing(&dcp.tau, &dcp.a, &dcp.h).checks));
    rep.push(Section::of("exchange", &dcp.exchange_report().checks));
}

/// `P_n` is a dual-basis copairing for τ and `R_n` is assembled from it.
fn copairing_section(ctx: &Context, n: u32) -> Section {
    let s = &ctx.s;
    let dcp = &s.dcp;
    let mut checks = Vec::new();
    for l in s.levels.iter().take(n as usize + 1) {
        let mut on_a = CheckOutcome::named(&format!("dual-basis-a:{}", l.n));
        for a in (0..=l.n).flat_map(|k| dcp.a.basis(k)) {
            let mut v = Elem::new();
            for ((hx, ax), c) in l.p.iter() {
                v.add_term(*ax, c.mul(&dcp.tau.tau(*hx, a)));
            }
            on_a.note(v == dcp.a.elem(a), || format!("Σ τ(h_i, {}) a_i", dcp.a.label(a)));
        }
        let mut on_h = CheckOutcome::named(&format!("dual-basis-h:{}", l.n));
        for h in (0..=l.n).flat_map(|k| dcp.h.basis(k)) {
            let mut v = Elem::new();
            for ((hx, ax), c) in l.p.iter() {
                v.add_term(*hx, c.mul(&dcp.tau.tau(h, *ax)));
            }
            on_h.note(v == dcp.h.elem(h), || format!("Σ h_i τ({}, a_i)", dcp.h.label(h)));
        }
        let (r, r_inv) = build_r(dcp, &l.p, s.variant, ctx.group.identity());
        let mut form = CheckOutcome::named(&format!("r-form:{}", l.n));
        form.note(r == l.r, || format!("R_{} differs from 1 ⊗ P_{} ⊗ 1", l.n, l.n));
        form.note(r_inv == l.r_inv, || format!("R_{}^-1 differs from (S⊗id)R_{}", l.n, l.n));
        checks.extend([on_a, on_h, form]);
    }
    Section::of("copairing", &checks)
}

fn duality_section(s: &LqtStructure) -> Result<Section, CliError> {
    let r = duality_check(&opposite_coalgebra(&s.dcp.a), &s.dcp.h).map_err(|e| CliError::Verification(e.to_string()))?;
    Ok(Section::of("duality", &r.checks))
}

fn lqt_section(s: &LqtStructure, n: u32) -> Result<Section, CliError> {
    let r = verify_lqt(s, n).map_err(instance::lqt_error)?;
    let exact: Vec<Check> = r.exact.iter().map(Check::of).collect();
    Ok(Section::of(&format!("lqt:{n}"), &r.projected).with_data(json!({ "unprojected": exact })))
}

fn terms2(s: &LqtStructure, v: &Elem2, left_h: bool) -> serde_json::Value {
    let dcp = &s.dcp;
    let rows: Vec<_> = v
        .iter()
        .map(|((x, y), c)| {
            if left_h {
                json!([dcp.h.label(*x), dcp.a.label(*y), c.to_string()])
            } else {
                json!([dcp.d.label(*x), dcp.d.label(*y), c.to_string()])
            }
        })
        .collect();
    json!(rows)
}

fn r_section(s: &LqtStructure, n: u32) -> Section {
    let d = &s.dcp.d;
    let one = {
        let mut o = Elem2::new();
        for (x, c) in d.unit().iter() {
            for (y, e) in d.unit().iter() {
                o.add_term((*x, *y), c.mul(e));
            }
        }
        o
    };
    let mut checks = Vec::new();
    let mut levels = Vec::new();
    for l in s.levels.iter().take(n as usize + 1) {
        let name = format!("r-inverse:{}", l.n);
        // R_n is truncated, so the products agree with 1⊗1 only through degree n
        let low = |v: Elem2| v.filter(|(x, y)| x.degree <= l.n && y.degree <= l.n);
        match (d.mul2(&l.r, &l.r_inv), d.mul2(&l.r_inv, &l.r)) {
            (Ok(a), Ok(b)) => checks.push(Check::verdict(
                &name,
                low(a) == one && low(b) == one,
                Some(format!("R_{} R_{}^-1 ≠ 1⊗1 through degree {}", l.n, l.n, l.n)),
            )),
            _ => checks.push(Check::skipped(&name, format!("budget: products reach degree {}", 2 * l.n))),
        }
        levels.push(json!({
            "n": l.n,
            "p": terms2(s, &l.p, true),
            "r": terms2(s, &l.r, false),
            "r_inv": terms2(s, &l.r_inv, false),
        }));
    }
    Section::new("r", checks).with_data(json!({ "levels": levels }))
}

fn ybe_section(s: &LqtStructure, n: u32) -> Result<Section, CliError> {
    let q = qybe_defect(s, n).map_err(instance::lqt_error)?;
    let check = if n == 0 {
        Check::verdict("qybe-zero", q.is_zero(), q.lowest_degree.map(|k| format!("nonzero component in degree {k}")))
    } else {
        Check::skipped("qybe-zero", "measured, not asserted, above level 0".into())
    };
    Ok(Section::new(&format!("ybe-defect:{n}"), vec![check]).with_data(serde_json::to_value(&q).expect("serializable")))
}

fn load_module(spec: &str, ctx: &Context) -> Result<FiniteCycleModule, CliError> {
    if let Some(b) = spec.strip_prefix("builtin:") {
        return builtin_module(b, &ctx.s, &ctx.group);
    }
    let path = Path::new(spec);
    let text = read_text(path)?;
    let cert: ModuleCert = serde_json::from_str(&text).map_err(|e| json_error(path, &e))?;
    module_of(&cert, &ctx.s)
}

fn matrix_data(m: &crate::exactlin::SparseMatrix) -> serde_json::Value {
    json!(m.to_strings())
}

fn braid_sections(ctx: &Context, specs: &[String], yd: bool, rep: &mut Report) -> Result<(), CliError> {
    let mut valid = Vec::new();
    for spec in specs {
        let m = load_module(spec, ctx)?;
        let r = check_module(&m, &ctx.s.dcp);
        let ok = r.passed();
        rep.push(Section::of(&format!("module:{}", m.name), &r.checks).with_data(json!({ "dim": m.dim() })));
        if ok {
            valid.push(m);
        }
    }
    if valid.len() < specs.len() {
        rep.push(Section::new("braiding", vec![Check::skipped("braiding", "some certificates failed".into())]));
    }
    for u in &valid {
        for v in &valid {
            let name = format!("braiding:{}|{}", u.name, v.name);
            match braiding_matrix(&ctx.s, u, v) {
                Ok(c) => rep.push(Section::new(&name, vec![Check::verdict("invertible", true, None)]).with_data(json!({
                    "rows": c.matrix.rows,
                    "cols": c.matrix.cols,
                    "level": c.level(),
                    "matrix": matrix_data(&c.matrix),
                    "inverse": matrix_data(&c.inverse),
                }))),
                Err(BraidError::NotInvertible(w)) => rep.push(Section::new(&name, vec![Check::verdict("invertible", false, Some(w))])),
                Err(e) => return Err(braid_error(e)),
            }
        }
    }
    for u in &valid {
        for v in &valid {
            for w in &valid {
                let r = hexagon_check(&ctx.s, u, v, w).map_err(braid_error)?;
                rep.push(Section::of(&format!("hexagon:{}|{}|{}", u.name, v.name, w.name), &r.checks));
            }
        }
    }
    if yd {
        let d = &ctx.s.dcp.d;
        for m in &valid {
            let y = yd_structure(&ctx.s, m).map_err(braid_error)?;
            let coaction: Vec<_> = y
                .coaction
                .iter()
                .map(|c| c.iter().map(|((x, i), e)| json!([d.label(*x), m.labels[*i], e.to_string()])).collect::<Vec<_>>())
                .collect();
            let data = json!({
                "levels": y.levels,
                "convention_mismatch": y.convention_mismatch,
                "skipped": y.skipped,
                "coaction": coaction,
            });
            rep.push(Section::of(&format!("yd:{}", m.name), &y.checks).with_data(data));
        }
    }
    Ok(())
}
