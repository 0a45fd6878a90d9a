//! The `cinf` command line: argument parsing, dispatch and reports.
//!
//! Every command produces one report. With `--json` it is printed as a
//! single JSON object under a versioned schema tag; otherwise a short text
//! rendering is printed. Exit codes: 0 pass, 1 domain finding, 2 input
//! error, 3 internal invariant violation.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::forms::verify_cartan;
use crate::graded::Algebra;
use crate::harrison::{map_i, map_i_expectation, Complex, Flavor};
use crate::lie::{Alphabet, CnStructure, Derivation};
use crate::obstruction::{
    check_cn, check_invariance, extend_structure, lift_morphism_to_symplectic, lift_to_symplectic, obs_structure, Extension,
    LiftOptions, LiftResult, Multimaps, ObstructionClass, ObstructionError, Setting, StructureFlavor,
};

pub mod files;

pub use files::{format_expression, parse_expression, AlgebraFile, MorphismFile, StructureFile};

pub const SCHEMA: &str = "cinf.report";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ErrorCode {
    #[serde(rename = "E-USAGE")]
    Usage,
    #[serde(rename = "E-IO")]
    Io,
    #[serde(rename = "E-SYNTAX")]
    Syntax,
    #[serde(rename = "E-DEGREE")]
    Degree,
    #[serde(rename = "E-VALIDATION")]
    Validation,
    #[serde(rename = "E-PRECONDITION")]
    Precondition,
    #[serde(rename = "E-INTERNAL")]
    Internal,
}

impl ErrorCode {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCode::Internal => 3,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CliError {
    pub code: ErrorCode,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<String>,
}

impl CliError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
            line: None,
            column: None,
            witness: Vec::new(),
        }
    }
}

impl From<ObstructionError> for CliError {
    fn from(e: ObstructionError) -> Self {
        let code = match e {
            ObstructionError::Internal(_) | ObstructionError::Infeasible { .. } | ObstructionError::ExceptionalBidegree { .. } => {
                ErrorCode::Internal
            }
            _ => ErrorCode::Precondition,
        };
        CliError::new(code, e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CochainFlavor {
    Harrison,
    Dual,
    Cyclic,
}

impl From<CochainFlavor> for Flavor {
    fn from(f: CochainFlavor) -> Flavor {
        match f {
            CochainFlavor::Harrison => Flavor::Harrison,
            CochainFlavor::Dual => Flavor::Dual,
            CochainFlavor::Cyclic => Flavor::Cyclic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ObsFlavor {
    Plain,
    Symplectic,
    Unital,
}

impl From<ObsFlavor> for StructureFlavor {
    fn from(f: ObsFlavor) -> StructureFlavor {
        match f {
            ObsFlavor::Plain => StructureFlavor::Plain,
            ObsFlavor::Symplectic => StructureFlavor::Symplectic,
            ObsFlavor::Unital => StructureFlavor::Unital,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cinf", version, about = "Exact obstruction theory for symplectic C-infinity structures")]
pub struct Cli {
    /// Print the structured JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate an algebra, and optionally a structure against it.
    Check {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        structure: Option<PathBuf>,
        /// Largest arity for the multimap invariance check.
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
    },
    /// Cohomology dimensions of the cochain blocks with order at most the window.
    Cohomology {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, value_enum, default_value = "harrison")]
        flavor: CochainFlavor,
        #[arg(long)]
        normalised: bool,
        #[arg(long = "bidegree-window", alias = "window", default_value_t = 4)]
        window: usize,
    },
    /// Obstruction class of a C_n-structure.
    Obstruction {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        structure: Option<PathBuf>,
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, value_enum, default_value = "plain")]
        flavor: ObsFlavor,
    },
    /// Extend a C_n-structure to a C_{n+1}-structure, or report the obstruction.
    Extend {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        structure: Option<PathBuf>,
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, value_enum, default_value = "plain")]
        flavor: ObsFlavor,
    },
    /// Lift a C_N-structure on a Frobenius algebra to a symplectic one.
    Lift {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        structure: Option<PathBuf>,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        unital: bool,
        /// Also run the two-step construction and check its output.
        #[arg(long)]
        two_step_crosscheck: bool,
    },
    /// Replace a morphism between symplectic structures by a symplectic one.
    LiftMorphism {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        morphism: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        unital: bool,
    },
    /// Ranks of I: HC^{i+1} → H^i(A, A*) against the expected trichotomy.
    #[command(name = "verify-I")]
    VerifyI {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, default_value_t = 4)]
        window: usize,
    },
    /// The seven Cartan identities on seeded random instances.
    VerifyCartan {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Cohomology { .. } => "cohomology",
            Command::Obstruction { .. } => "obstruction",
            Command::Extend { .. } => "extend",
            Command::Lift { .. } => "lift",
            Command::LiftMorphism { .. } => "lift-morphism",
            Command::VerifyI { .. } => "verify-I",
            Command::VerifyCartan { .. } => "verify-cartan",
        }
    }
}

/// A finished command: exit code, JSON report and text rendering.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: Value,
    pub text: String,
}

impl Outcome {
    pub fn json(&self) -> String {
        serde_json::to_string_pretty(&self.report).expect("reports serialize")
    }
}

struct Body {
    finding: bool,
    result: Value,
    text: Vec<String>,
}

fn envelope(command: &str, status: &str, exit_code: i32, key: &str, body: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "version": SCHEMA_VERSION,
        "command": command,
        "status": status,
        "exit_code": exit_code,
        key: body,
    })
}

fn error_outcome(command: &str, e: CliError) -> Outcome {
    let code = e.code.exit_code();
    let status = if code == 3 { "internal-error" } else { "input-error" };
    let text = format!("error[{}]: {}", serde_json::to_value(e.code).unwrap().as_str().unwrap_or(""), e.message);
    Outcome {
        exit_code: code,
        report: envelope(command, status, code, "error", serde_json::to_value(&e).unwrap()),
        text,
    }
}

/// Parse arguments (the first being the program name) and run.
pub fn run_args<I, T>(args: I) -> Result<(Outcome, bool), clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    Ok((run(&cli.command), cli.json))
}

pub fn run(cmd: &Command) -> Outcome {
    finish(cmd.name(), dispatch(cmd))
}

fn finish(name: &str, body: Result<Body, CliError>) -> Outcome {
    match body {
        Ok(b) => {
            let (status, code) = if b.finding { ("finding", 1) } else { ("pass", 0) };
            let mut text = b.text;
            text.push(format!("status: {status}"));
            Outcome {
                exit_code: code,
                report: envelope(name, status, code, "result", b.result),
                text: text.join("\n"),
            }
        }
        Err(e) => error_outcome(name, e),
    }
}

/// Report for an input that failed before any command ran.
pub fn error_report(command: &str, e: CliError) -> Outcome {
    error_outcome(command, e)
}

/// `check` on already parsed inputs.
pub fn check_report(algebra: &AlgebraFile, structure: Option<&StructureFile>, max_arity: usize) -> Outcome {
    finish("check", check(algebra, structure, max_arity))
}

/// `cohomology` on an already parsed algebra.
pub fn cohomology_report(algebra: &AlgebraFile, flavor: Flavor, normalised: bool, window: usize) -> Outcome {
    finish("cohomology", cohomology(algebra, flavor, normalised, window))
}

/// `obstruction` (or `extend` when `extend` is set) on already parsed inputs.
pub fn obstruction_report(
    algebra: &AlgebraFile,
    structure: Option<&StructureFile>,
    level: Option<usize>,
    flavor: StructureFlavor,
    extend: bool,
) -> Outcome {
    let name = if extend { "extend" } else { "obstruction" };
    finish(name, obstruction(algebra, structure, level, flavor, extend))
}

/// `lift` on already parsed inputs.
pub fn lift_report(algebra: &AlgebraFile, structure: Option<&StructureFile>, order: usize, unital: bool, two_step: bool) -> Outcome {
    finish("lift", lift(algebra, structure, order, unital, two_step))
}

/// `lift-morphism` on already parsed inputs.
pub fn lift_morphism_report(
    algebra: &AlgebraFile,
    source: &StructureFile,
    target: &StructureFile,
    morphism: &MorphismFile,
    order: usize,
    unital: bool,
) -> Outcome {
    finish("lift-morphism", lift_morphism(algebra, source, target, morphism, order, unital))
}

/// Entry point for the binary: prints the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let json_requested = args.iter().any(|a| a == "--json");
    match run_args(args) {
        Ok((out, json)) => {
            if json {
                println!("{}", out.json());
            } else {
                println!("{}", out.text);
            }
            out.exit_code
        }
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let out = error_outcome("usage", CliError::new(ErrorCode::Usage, e.to_string().trim().to_string()));
            if json_requested {
                println!("{}", out.json());
            } else {
                eprint!("{e}");
            }
            out.exit_code
        }
    }
}

fn load_algebra(file: &AlgebraFile, need_pairing: bool) -> Result<Algebra, CliError> {
    file.build(need_pairing)
}

fn load_structure(file: Option<&StructureFile>, alg: &Algebra, alpha: &Alphabet, level: Option<usize>) -> Result<CnStructure, CliError> {
    match file {
        Some(f) => f.build(alg, alpha, level),
        None => StructureFile::default().build(alg, alpha, level),
    }
}

fn load_optional(path: Option<&PathBuf>) -> Result<Option<StructureFile>, CliError> {
    path.map(|p| StructureFile::load(p)).transpose()
}

fn field_json(alpha: &Alphabet, xi: &Derivation) -> Value {
    let images: serde_json::Map<String, Value> = (0..alpha.rank() as u8)
        .filter(|&g| !xi.image(g).is_zero())
        .map(|g| (alpha.name(g).to_string(), Value::String(format_expression(alpha, xi.image(g)))))
        .collect();
    Value::Object(images)
}

fn zero_or(s: String, zero: bool) -> String {
    if zero {
        "0".into()
    } else {
        s
    }
}

fn class_json(alpha: &Alphabet, c: &ObstructionClass) -> Value {
    json!({
        "flavor": c.flavor,
        "complex": c.complex,
        "normalised": c.normalised,
        "bidegree": [c.order, c.degree],
        "representative": zero_or(c.representative.display(alpha), c.representative.is_zero()),
        "class": c.class,
        "zero": c.is_zero(),
    })
}

fn dispatch(cmd: &Command) -> Result<Body, CliError> {
    match cmd {
        Command::Check { algebra, structure, max_arity } => {
            check(&AlgebraFile::load(algebra)?, load_optional(structure.as_ref())?.as_ref(), *max_arity)
        }
        Command::Cohomology {
            algebra,
            flavor,
            normalised,
            window,
        } => cohomology(&AlgebraFile::load(algebra)?, (*flavor).into(), *normalised, *window),
        Command::Obstruction {
            algebra,
            structure,
            level,
            flavor,
        } => obstruction(&AlgebraFile::load(algebra)?, load_optional(structure.as_ref())?.as_ref(), *level, (*flavor).into(), false),
        Command::Extend {
            algebra,
            structure,
            level,
            flavor,
        } => obstruction(&AlgebraFile::load(algebra)?, load_optional(structure.as_ref())?.as_ref(), *level, (*flavor).into(), true),
        Command::Lift {
            algebra,
            structure,
            order,
            unital,
            two_step_crosscheck,
        } => lift(&AlgebraFile::load(algebra)?, load_optional(structure.as_ref())?.as_ref(), *order, *unital, *two_step_crosscheck),
        Command::LiftMorphism {
            algebra,
            source,
            target,
            morphism,
            order,
            unital,
        } => lift_morphism(
            &AlgebraFile::load(algebra)?,
            &StructureFile::load(source)?,
            &StructureFile::load(target)?,
            &MorphismFile::load(morphism)?,
            *order,
            *unital,
        ),
        Command::VerifyI { algebra, window } => verify_i(&AlgebraFile::load(algebra)?, *window),
        Command::VerifyCartan { samples, seed } => {
            let r = verify_cartan(*samples, *seed);
            let mut text = vec![format!("cartan identities: {} samples, seed {}", r.samples, r.seed)];
            for t in &r.tallies {
                text.push(format!("  {:<40} {}/{} hold", t.identity, t.checked - t.failed, t.checked));
            }
            Ok(Body {
                finding: !r.passed(),
                result: serde_json::to_value(&r).unwrap(),
                text,
            })
        }
    }
}

fn check(algebra: &AlgebraFile, structure: Option<&StructureFile>, max_arity: usize) -> Result<Body, CliError> {
    let alg = load_algebra(algebra, false)?;
    let frobenius = alg.pairing.is_some();
    let alg = if frobenius { load_algebra(algebra, true)? } else { alg };
    let setting = Setting::new(&alg);
    let alpha = setting.alphabet();
    let mut text = vec![format!(
        "algebra: rank {}, {}",
        alg.rank(),
        if frobenius { "Frobenius" } else { "no pairing" }
    )];
    let mut result = json!({ "rank": alg.rank(), "frobenius": frobenius });
    let mut finding = false;
    if structure.is_some() {
        let m = load_structure(structure, &alg, alpha, None)?;
        let r = check_cn(&setting, &m)?;
        let cn = r.is_zero();
        finding |= !cn;
        text.push(format!(
            "structure: level {}, {}",
            m.level(),
            if cn { "C_n holds".to_string() } else { format!("[m,m]/2 nonzero in order {}", r.min_order().unwrap_or(0)) }
        ));
        let mut s = json!({
            "level": m.level(),
            "cn": cn,
            "residual": field_json(alpha, &r),
        });
        if frobenius {
            let sym = setting.symplectic()?;
            let lw = sym.symplectic_residual(m.field());
            let mm = Multimaps::from_derivation(alpha, m.field());
            let v = check_invariance(alpha, alg.pairing.as_ref().unwrap(), &mm, max_arity);
            finding |= !lw.is_zero() || v.is_some();
            text.push(format!("L_m omega = {}", zero_or(lw.display(alpha), lw.is_zero())));
            text.push(match &v {
                None => format!("cyclic invariance holds up to arity {max_arity}"),
                Some(v) => format!("cyclic invariance fails in arity {} at {:?}: {} != {}", v.arity, v.tuple, v.lhs, v.rhs),
            });
            s["symplectic_residual"] = json!(zero_or(lw.display(alpha), lw.is_zero()));
            s["invariance_violation"] = serde_json::to_value(&v).unwrap();
        }
        result["structure"] = s;
    }
    Ok(Body { finding, result, text })
}

fn cohomology(algebra: &AlgebraFile, flavor: Flavor, normalised: bool, window: usize) -> Result<Body, CliError> {
    let alg = load_algebra(algebra, flavor != Flavor::Harrison)?;
    let c = Complex::new(&alg, flavor, normalised).map_err(|e| CliError::new(ErrorCode::Precondition, e.to_string()))?;
    let mut rows = Vec::new();
    let mut text = vec![format!("{} complex{}, orders <= {window}", flavor.name(), if normalised { " (normalised)" } else { "" })];
    text.push("  order degree cochains cocycles coboundaries dim".into());
    for order in 1..=window {
        for j in c.degrees(order) {
            let h = c.cohomology(order, j);
            if h.cochains == 0 {
                continue;
            }
            text.push(format!(
                "  {:>5} {:>6} {:>8} {:>8} {:>12} {:>3}",
                order, j, h.cochains, h.cocycles, h.coboundaries, h.dim
            ));
            rows.push(serde_json::to_value(&h).unwrap());
        }
    }
    Ok(Body {
        finding: false,
        result: json!({ "flavor": flavor, "normalised": normalised, "window": window, "blocks": rows }),
        text,
    })
}

fn obstruction(algebra: &AlgebraFile, structure: Option<&StructureFile>, level: Option<usize>, flavor: StructureFlavor, extend: bool) -> Result<Body, CliError> {
    let alg = load_algebra(algebra, flavor != StructureFlavor::Plain)?;
    let setting = Setting::new(&alg);
    let alpha = setting.alphabet();
    let m = load_structure(structure, &alg, alpha, level)?;
    if !extend {
        let c = obs_structure(&setting, &m, flavor)?;
        let text = vec![
            format!("{} obstruction of a C_{}-structure in bidegree ({}, {})", flavor.name(), m.level(), c.order, c.degree),
            format!("class: {}", if c.is_zero() { "zero".to_string() } else { format!("{:?}", c.class.iter().map(|x| x.to_string()).collect::<Vec<_>>()) }),
        ];
        return Ok(Body {
            finding: !c.is_zero(),
            result: json!({ "level": m.level(), "obstruction": class_json(alpha, &c) }),
            text,
        });
    }
    match extend_structure(&setting, &m, flavor)? {
        Extension::Extended(e) => Ok(Body {
            finding: false,
            text: vec![
                format!("extended to a C_{}-structure", e.structure.level()),
                format!("m_{} = {}", m.level(), zero_or(e.part.display(alpha), e.part.is_zero())),
                format!("solution space dimension {} (cocycles {})", e.solution_dim, e.cocycle_dim),
            ],
            result: json!({
                "extended": true,
                "part": field_json(alpha, &e.part),
                "structure": StructureFile::from_structure(alpha, &e.structure),
                "solution_dim": e.solution_dim,
                "cocycle_dim": e.cocycle_dim,
            }),
        }),
        Extension::Obstructed(c) => Ok(Body {
            finding: true,
            text: vec![format!("obstructed: nonzero class in bidegree ({}, {})", c.order, c.degree)],
            result: json!({ "extended": false, "obstruction": class_json(alpha, &c) }),
        }),
    }
}

fn lift_json(alpha: &Alphabet, r: &LiftResult) -> Value {
    let res = &r.residuals;
    json!({
        "order": r.order,
        "structure": StructureFile::from_structure(alpha, &r.structure),
        "phi": MorphismFile::from_diffeo(alpha, &r.phi),
        "stages": r.stages,
        "residuals": {
            "square": zero_or(res.square.display(alpha), res.square.is_zero()),
            "symplectic": zero_or(res.symplectic.display(alpha), res.symplectic.is_zero()),
            "conjugation": zero_or(res.conjugation.display(alpha), res.conjugation.is_zero()),
            "pointed": if res.pointed { "0" } else { "not pointed" },
            "normalised": res.normalised.map(|n| if n { "0" } else { "not normalised" }),
        },
        "all_zero": res.all_zero(),
    })
}

fn lift_text(label: &str, alpha: &Alphabet, r: &LiftResult) -> Vec<String> {
    let res = &r.residuals;
    let mut t = vec![format!("{label}: {} stages", r.stages.len())];
    for s in &r.stages {
        t.push(format!(
            "  stage {}: unknowns {}, rank {}, support {}, obstruction in {:?}",
            s.order, s.unknowns, s.rank, s.support, s.obstruction_bidegree
        ));
    }
    t.push(format!("  residual m'^2: {}", zero_or(res.square.display(alpha), res.square.is_zero())));
    t.push(format!("  residual L_m' omega: {}", zero_or(res.symplectic.display(alpha), res.symplectic.is_zero())));
    t.push(format!("  residual phi m phi^-1 - m': {}", zero_or(res.conjugation.display(alpha), res.conjugation.is_zero())));
    t.push(format!("  residual pointed: {}", if res.pointed { "0" } else { "not pointed" }));
    if let Some(n) = res.normalised {
        t.push(format!("  residual normalised: {}", if n { "0" } else { "not normalised" }));
    }
    t
}

fn lift(algebra: &AlgebraFile, structure: Option<&StructureFile>, order: usize, unital: bool, two_step: bool) -> Result<Body, CliError> {
    let alg = load_algebra(algebra, true)?;
    let setting = Setting::new(&alg);
    let alpha = setting.alphabet();
    let m = load_structure(structure, &alg, alpha, Some(order))?;
    let joint = lift_to_symplectic(&setting, &m, LiftOptions { unital, two_step: false })?;
    let mut text = lift_text("joint lift", alpha, &joint);
    let mut finding = !joint.residuals.all_zero();
    let mut result = json!({ "order": order, "unital": unital, "lift": lift_json(alpha, &joint) });
    if two_step {
        let cross = lift_to_symplectic(&setting, &m, LiftOptions { unital, two_step: true })?;
        finding |= !cross.residuals.all_zero();
        text.extend(lift_text("two-step lift", alpha, &cross));
        result["two_step"] = lift_json(alpha, &cross);
        result["outputs_agree"] = json!(cross.structure == joint.structure);
    }
    Ok(Body { finding, result, text })
}

fn lift_morphism(
    algebra: &AlgebraFile,
    source: &StructureFile,
    target: &StructureFile,
    morphism: &MorphismFile,
    order: usize,
    unital: bool,
) -> Result<Body, CliError> {
    let alg = load_algebra(algebra, true)?;
    let setting = Setting::new(&alg);
    let alpha = setting.alphabet();
    let m = load_structure(Some(source), &alg, alpha, Some(order))?;
    let mp = load_structure(Some(target), &alg, alpha, Some(order))?;
    let phi = morphism.build(alpha)?;
    let r = lift_morphism_to_symplectic(&setting, &phi, &m, &mp, unital)?;
    let res = &r.residuals;
    let sym = zero_or(res.symplectic.display(alpha), res.symplectic.is_zero());
    let conj = zero_or(res.conjugation.display(alpha), res.conjugation.is_zero());
    let hom = zero_or(res.homotopy.display(alpha), res.homotopy.is_zero());
    let etas: Vec<Value> = r.etas.iter().map(|e| field_json(alpha, e)).collect();
    Ok(Body {
        finding: !res.all_zero(),
        text: vec![
            format!("symplectic morphism after {} stages", r.stages.len()),
            format!("  residual phi'^* omega - omega: {sym}"),
            format!("  residual phi' m phi'^-1 - m': {conj}"),
            format!("  residual phi - phi' h: {hom}"),
        ],
        result: json!({
            "order": r.order,
            "phi": MorphismFile::from_diffeo(alpha, &r.phi),
            "etas": etas,
            "stages": r.stages,
            "residuals": { "symplectic": sym, "conjugation": conj, "homotopy": hom },
            "all_zero": res.all_zero(),
        }),
    })
}

fn verify_i(algebra: &AlgebraFile, window: usize) -> Result<Body, CliError> {
    let alg = load_algebra(algebra, false)?;
    let cc = Complex::new(&alg, Flavor::Cyclic, false).map_err(|e| CliError::new(ErrorCode::Precondition, e.to_string()))?;
    let du = cc.sibling(Flavor::Dual, false).map_err(|e| CliError::new(ErrorCode::Precondition, e.to_string()))?;
    let mut rows = Vec::new();
    let mut text = vec!["  i  j  source target rank  mono  epi  expected".to_string()];
    let mut finding = false;
    for i in 1..=window {
        let js: BTreeSet<i64> = cc.degrees(i + 1).into_iter().chain(du.degrees(i)).collect();
        for j in js {
            let m = map_i(&alg, i, j).map_err(|e| CliError::new(ErrorCode::Precondition, e.to_string()))?;
            let (inj, surj) = map_i_expectation(i);
            let ok = (!inj || m.injective()) && (!surj || m.surjective());
            finding |= !ok;
            let expected = match (inj, surj) {
                (true, true) => "iso",
                (true, false) => "mono",
                _ => "epi",
            };
            text.push(format!(
                "  {i} {j:>2} {:>6} {:>6} {:>4}  {:<5} {:<4} {expected}{}",
                m.source_dim,
                m.target_dim,
                m.rank,
                m.injective(),
                m.surjective(),
                if ok { "" } else { "  FAIL" }
            ));
            rows.push(json!({
                "i": i, "j": j,
                "source_dim": m.source_dim, "target_dim": m.target_dim, "rank": m.rank,
                "injective": m.injective(), "surjective": m.surjective(),
                "expected": expected, "holds": ok,
            }));
        }
    }
    Ok(Body {
        finding,
        result: json!({ "window": window, "rows": rows }),
        text,
    })
}
