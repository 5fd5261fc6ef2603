//! Command-line surface: argument parsing, point files and JSON reports.
//!
//! Every command prints one report
//! `{"command", "inputs_digest", "payload", "tool_version", "seed"}`.
//! The digest is SHA-256 over the arguments and the bytes of every file read.
//! Exit status: 0 on any computed answer, 2 on usage errors, 3 on input
//! errors, 4 when a search budget runs out, 1 on internal failures.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::conditions::{defect_in, probe_with_budget, q_factoriality_verdict, PROBE_BUDGET};
use crate::error::{Error, Result};
use crate::exactalg::{format_rational, Field};
use crate::families::{
    find_singular_points, make_example_i, make_example_ii, make_fourfold, split_example_i, split_example_ii, theorem_bound,
    varchenko_bound, BoundKind, FamilyInstance, SCAN_BUDGET,
};
use crate::forms::{parse_form, Form, VARIABLE_LETTERS};
use crate::incidence::{
    bese_conditions_with, check_property_nabla_with, max_points_on_curve_with, partition_with, SearchBudget,
};
use crate::pipeline::{cone_plan_with, full_report_with, witness_cone_with, witness_direct};
use crate::projgeom::{random_projection, ProjPoint};
use crate::Mode;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

/// Field descriptor of a structured point file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldSpec {
    #[default]
    Rational,
    Prime(u64),
}

impl FieldSpec {
    pub fn field(self) -> Result<Field> {
        match self {
            FieldSpec::Rational => Ok(Field::Rational),
            FieldSpec::Prime(p) => Field::prime(p),
        }
    }
}

/// Contents of a point file in either format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetFile {
    pub ambient_dim: usize,
    #[serde(default)]
    pub field: FieldSpec,
    pub points: Vec<ProjPoint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

impl PointSetFile {
    pub fn new(ambient_dim: usize, points: Vec<ProjPoint>) -> PointSetFile {
        PointSetFile { ambient_dim, field: FieldSpec::Rational, points, labels: Vec::new() }
    }

    /// Reads the structured JSON format when the text starts with `{`, the
    /// line format otherwise.
    pub fn parse(text: &str) -> Result<PointSetFile> {
        let file = if text.trim_start().starts_with('{') {
            serde_json::from_str::<PointSetFile>(text).map_err(|e| Error::invalid(format!("point file: {e}")))?
        } else {
            parse_lines(text)?
        };
        if let Some(p) = file.points.iter().find(|p| p.num_vars() != file.ambient_dim + 1) {
            return Err(Error::dims(format!("point {p} does not lie in P^{}", file.ambient_dim)));
        }
        if !file.labels.is_empty() && file.labels.len() != file.points.len() {
            return Err(Error::invalid(format!("{} labels for {} points", file.labels.len(), file.points.len())));
        }
        Ok(file)
    }

    /// The line format: a `# P <dim>` header, then one tuple per line.
    pub fn to_lines(&self) -> String {
        let mut out = format!("# P {}\n", self.ambient_dim);
        for p in &self.points {
            let coords: Vec<String> = p.coords().iter().map(ToString::to_string).collect();
            out.push_str(&coords.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("point file serializes")
    }
}

fn parse_lines(text: &str) -> Result<PointSetFile> {
    let mut dim = None;
    let mut points = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let mut words = rest.split_whitespace();
            if dim.is_none() && words.next() == Some("P") {
                let d = words.next().and_then(|w| w.parse::<usize>().ok());
                dim = Some(d.ok_or_else(|| Error::invalid(format!("line {}: malformed header", no + 1)))?);
            }
            continue;
        }
        let Some(d) = dim else {
            return Err(Error::invalid(format!("line {}: point before the '# P <dim>' header", no + 1)));
        };
        let body = line.split('#').next().unwrap_or("");
        let coords = body
            .split_whitespace()
            .map(|w| w.parse().map_err(|_| Error::invalid(format!("line {}: '{w}' is not an integer", no + 1))))
            .collect::<Result<Vec<_>>>()?;
        if coords.len() != d + 1 {
            return Err(Error::dims(format!("line {}: {} coordinates in P^{d}", no + 1, coords.len())));
        }
        points.push(ProjPoint::new(coords).map_err(|_| Error::invalid(format!("line {}: zero vector", no + 1)))?);
    }
    let ambient_dim = dim.ok_or_else(|| Error::invalid("missing '# P <dim>' header"))?;
    Ok(PointSetFile::new(ambient_dim, points))
}

/// The printed report of one command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub payload: Value,
    pub tool_version: String,
    pub seed: Option<u64>,
}

#[derive(Parser, Debug)]
#[command(name = "nodal", version, about = "Exact defect computations for nodal threefolds")]
struct Cli {
    /// Seed for the random projection; a fresh one is drawn and reported when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Prime for finite-field commands, or to compute over F_p instead of Q.
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Node limit of the exact incidence search.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    DoubleSolid,
    Hypersurface,
}

#[derive(Args, Debug)]
struct ModeArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
}

impl ModeArgs {
    fn mode(&self) -> Result<Mode> {
        match (self.kind, self.r, self.n) {
            (Kind::DoubleSolid, Some(r), _) => Ok(Mode::DoubleSolid { r }),
            (Kind::Hypersurface, _, Some(n)) => Ok(Mode::Hypersurface { n }),
            (Kind::DoubleSolid, None, _) => Err(Error::invalid("--kind double-solid needs --r")),
            (Kind::Hypersurface, _, None) => Err(Error::invalid("--kind hypersurface needs --n")),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Direct,
    Cone,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Preset {
    CyDoubleSolid,
    CyQuintic,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyName {
    ExampleI,
    ExampleII,
    Fourfold,
    SplitExampleI,
    SplitExampleII,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    /// `g` (or each `g_i` of a fourfold, repeated).
    #[arg(long, allow_hyphen_values = true)]
    g: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    h: Option<String>,
    /// `f` (or each `f_i` of a fourfold, repeated).
    #[arg(long, allow_hyphen_values = true)]
    f: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank and defect of the point conditions in one degree.
    Defect {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
    },
    /// A form through all points but one, missing that one.
    Separate {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        index: usize,
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
    },
    /// Bound check and defect at the critical degree.
    Verdict {
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long)]
        points: PathBuf,
    },
    /// Most points of a plane set on one curve of degree k.
    CurveMax {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        k: u32,
    },
    /// At most i*M points on any curve of degree i, for i up to k-max.
    NablaCheck {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        multiplier: Option<usize>,
        #[arg(long)]
        k_max: Option<u32>,
        #[arg(long, value_enum)]
        preset: Option<Preset>,
    },
    /// Size and curve conditions for plane points in degree d.
    BeseCheck {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        degree: u32,
    },
    /// Oversized on-a-curve parts plus a residual, with the inequality ledger.
    Partition {
        #[command(flatten)]
        mode: ModeArgs,
        /// Plane points, or nodes in P^3/P^4 which are projected first.
        #[arg(long)]
        points: PathBuf,
    },
    /// Witness hypersurface of the critical degree for one node.
    Witness {
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        index: usize,
        #[arg(long = "mode", value_enum, default_value = "direct")]
        method: Method,
    },
    /// Verdict, incidence profile, partition and per-node witness status.
    FullReport {
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long)]
        points: PathBuf,
    },
    /// Singular points of a family member over F_p (default p = 7).
    FindNodes {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Builds a family member and prints its equation.
    GenFamily {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// The lattice count A_i(j).
    Varchenko {
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
    },
    /// Node-count bound of the theorems.
    Bound {
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Dimension estimate of a common zero set from point counts over two primes.
    BaseLocusProbe {
        #[arg(long)]
        vars: usize,
        #[arg(long = "gen", required = true, allow_hyphen_values = true)]
        generators: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        ambient: Option<String>,
        #[arg(long, value_delimiter = ',', default_values_t = [11u64, 13])]
        primes: Vec<u64>,
    },
    /// Parses a polynomial and prints it back.
    ParseCheck {
        #[arg(long, default_value_t = 4)]
        vars: usize,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Defect { .. } => "defect",
            Command::Separate { .. } => "separate",
            Command::Verdict { .. } => "verdict",
            Command::CurveMax { .. } => "curve-max",
            Command::NablaCheck { .. } => "nabla-check",
            Command::BeseCheck { .. } => "bese-check",
            Command::Partition { .. } => "partition",
            Command::Witness { .. } => "witness",
            Command::FullReport { .. } => "full-report",
            Command::FindNodes { .. } => "find-nodes",
            Command::GenFamily { .. } => "gen-family",
            Command::Varchenko { .. } => "varchenko",
            Command::Bound { .. } => "bound",
            Command::BaseLocusProbe { .. } => "base-locus-probe",
            Command::ParseCheck { .. } => "parse-check",
        }
    }

    fn uses_seed(&self) -> bool {
        matches!(
            self,
            Command::Partition { .. } | Command::FullReport { .. } | Command::Witness { method: Method::Cone, .. }
        )
    }
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::Syntax { .. }
        | Error::Inhomogeneous { .. }
        | Error::InvalidInput(_)
        | Error::DimensionMismatch(_)
        | Error::DegreeMismatch(_)
        | Error::NotPrime(_)
        | Error::PointOnCenter { .. }
        | Error::NotSingular { .. } => EXIT_INPUT,
        _ => EXIT_INTERNAL,
    }
}

struct Ctx {
    hasher: Sha256,
    budget: SearchBudget,
    prime: Option<u64>,
    seed: u64,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
        self.hasher.update(&bytes);
        String::from_utf8(bytes).map_err(|_| Error::invalid(format!("{} is not UTF-8", path.display())))
    }

    fn points(&mut self, path: &Path) -> Result<PointSetFile> {
        let text = self.read(path)?;
        PointSetFile::parse(&text)
    }

    fn plane_points(&mut self, path: &Path) -> Result<Vec<ProjPoint>> {
        let f = self.points(path)?;
        if f.ambient_dim != 2 {
            return Err(Error::dims(format!("expected points in P^2, got P^{}", f.ambient_dim)));
        }
        Ok(f.points)
    }

    fn mode_points(&mut self, path: &Path, mode: Mode) -> Result<Vec<ProjPoint>> {
        let f = self.points(path)?;
        if f.ambient_dim + 1 != mode.num_vars() {
            return Err(Error::dims(format!("mode {mode:?} needs points in P^{}, got P^{}", mode.num_vars() - 1, f.ambient_dim)));
        }
        Ok(f.points)
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable payload")
}

fn error_report(command: &str, e: &Error) -> String {
    let v = json!({ "command": command, "error": e.to_string(), "tool_version": env!("CARGO_PKG_VERSION") });
    serde_json::to_string_pretty(&v).expect("json")
}

/// Runs one command line (including the program name) and returns the exit
/// status with the text to print.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.to_string());
        }
    };
    let name = cli.command.name();
    let seed = cli.seed.unwrap_or_else(rand::random);
    let mut hasher = Sha256::new();
    for a in args.iter().skip(1) {
        hasher.update(a.to_string_lossy().as_bytes());
        hasher.update([0u8]);
    }
    let budget = cli.budget.map(SearchBudget::with_nodes).unwrap_or_default();
    let mut ctx = Ctx { hasher, budget, prime: cli.prime, seed };
    let uses_seed = cli.command.uses_seed();
    match execute(&cli.command, &mut ctx) {
        Ok(payload) => {
            let report = Report {
                command: name.to_string(),
                inputs_digest: hex::encode(ctx.hasher.finalize()),
                payload,
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                seed: uses_seed.then_some(seed),
            };
            (EXIT_OK, serde_json::to_string_pretty(&report).expect("json"))
        }
        Err(e) => (exit_code(&e), error_report(name, &e)),
    }
}

fn execute(cmd: &Command, ctx: &mut Ctx) -> Result<Value> {
    match cmd {
        Command::Defect { points, degree } => {
            let file = ctx.points(points)?;
            let field = match ctx.prime {
                Some(p) => Field::prime(p)?,
                None => file.field.field()?,
            };
            let report = defect_in(field, &file.points, *degree, file.ambient_dim + 1)?;
            let mut v = to_value(&report);
            v["dependency"] = to_value(&report.dependency().map(|d| d.iter().map(ToString::to_string).collect::<Vec<_>>()));
            v["unseparated"] = to_value(&report.unseparated());
            Ok(v)
        }
        Command::Separate { points, index, degree } => {
            let file = ctx.points(points)?;
            Ok(match witness_direct(&file.points, *index, *degree)? {
                Some(c) => json!({ "separated": true, "certificate": to_value(&c) }),
                None => json!({ "separated": false, "certificate": null }),
            })
        }
        Command::Verdict { mode, points } => {
            let mode = mode.mode()?;
            let nodes = ctx.mode_points(points, mode)?;
            let v = q_factoriality_verdict(mode, &nodes)?;
            Ok(json!({
                "mode": to_value(&v.mode),
                "num_nodes": v.num_nodes,
                "bound": format_rational(&v.bound),
                "bound_ok": v.bound_ok,
                "cy_bound": v.cy_bound,
                "cy_bound_ok": v.cy_bound_ok,
                "degree": v.degree,
                "rank": v.report.rank,
                "defect": v.report.defect,
                "dependency": v.report.dependency().map(|d| d.iter().map(ToString::to_string).collect::<Vec<_>>()),
                "q_factorial": v.q_factorial,
            }))
        }
        Command::CurveMax { points, k } => {
            let pts = ctx.plane_points(points)?;
            Ok(to_value(&max_points_on_curve_with(&pts, *k, &ctx.budget)?))
        }
        Command::NablaCheck { points, multiplier, k_max, preset } => {
            let pts = ctx.plane_points(points)?;
            let (m, k) = match (preset, multiplier) {
                (Some(Preset::CyDoubleSolid), _) => (7, 2),
                (Some(Preset::CyQuintic), _) => (5, 2),
                (None, Some(m)) => (*m, k_max.unwrap_or(3)),
                (None, None) => return Err(Error::invalid("nabla-check needs --multiplier or --preset")),
            };
            Ok(to_value(&check_property_nabla_with(&pts, m, k_max.unwrap_or(k), &ctx.budget)?))
        }
        Command::BeseCheck { points, degree } => {
            let pts = ctx.plane_points(points)?;
            Ok(to_value(&bese_conditions_with(&pts, *degree, &ctx.budget)?))
        }
        Command::Partition { mode, points } => {
            let mode = mode.mode()?;
            let file = ctx.points(points)?;
            let (images, projection) = match file.ambient_dim {
                2 => (file.points, None),
                d if d + 1 == mode.num_vars() => {
                    let pr = random_projection(d, &file.points, ctx.seed)?;
                    (pr.project(&file.points)?.images, Some(pr))
                }
                d => return Err(Error::dims(format!("partition takes points in P^2 or P^{}, got P^{d}", mode.num_vars() - 1))),
            };
            let cert = partition_with(&images, mode, &ctx.budget)?;
            Ok(json!({ "projection": to_value(&projection), "images": to_value(&images), "certificate": to_value(&cert) }))
        }
        Command::Witness { mode, points, index, method } => {
            let mode = mode.mode()?;
            let nodes = ctx.mode_points(points, mode)?;
            let result = match method {
                Method::Direct => witness_direct(&nodes, *index, mode.critical_degree())?.ok_or_else(|| {
                    Error::NoWitness(format!("no form of degree {} separates node {index}", mode.critical_degree()))
                }),
                Method::Cone => {
                    if *index >= nodes.len() {
                        return Err(Error::invalid(format!("point index {index} out of range for {} nodes", nodes.len())));
                    }
                    let pr = random_projection(mode.num_vars() - 1, &nodes, ctx.seed)?;
                    let plan = cone_plan_with(&nodes, mode, pr, &ctx.budget)?;
                    witness_cone_with(&nodes, *index, &plan)
                }
            };
            Ok(match result {
                Ok(mut c) => {
                    c.mode = Some(mode);
                    json!({ "witness": true, "certificate": to_value(&c) })
                }
                Err(Error::NoWitness(reason)) => json!({ "witness": false, "reason": reason }),
                Err(e) => return Err(e),
            })
        }
        Command::FullReport { mode, points } => {
            let mode = mode.mode()?;
            let nodes = ctx.mode_points(points, mode)?;
            Ok(to_value(&full_report_with(&nodes, mode, ctx.seed, &ctx.budget)?))
        }
        Command::FindNodes { family } => {
            let inst = build_family(family)?;
            let p = ctx.prime.unwrap_or(7);
            let list = find_singular_points(&inst.equation, p, SCAN_BUDGET)?;
            Ok(json!({ "instance": to_value(&inst), "nodes": to_value(&list) }))
        }
        Command::GenFamily { family } => Ok(to_value(&build_family(family)?)),
        Command::Varchenko { i, j } => Ok(json!({ "i": i, "j": j, "value": varchenko_bound(*i, *j)? })),
        Command::Bound { mode } => {
            let mode = mode.mode()?;
            let cy = match mode {
                Mode::DoubleSolid { r: 4 } => Some(theorem_bound(BoundKind::CyDoubleSolid)),
                Mode::Hypersurface { n: 5 } => Some(theorem_bound(BoundKind::CyQuintic)),
                _ => None,
            };
            Ok(json!({
                "mode": to_value(&mode),
                "bound": format_rational(&theorem_bound(BoundKind::from(mode))),
                "cy_bound": cy.map(|b| format_rational(&b)),
                "degree": mode.critical_degree(),
            }))
        }
        Command::BaseLocusProbe { vars, generators, ambient, primes } => {
            let [p1, p2] = primes[..] else {
                return Err(Error::invalid("--primes takes exactly two primes"));
            };
            let gens = generators.iter().map(|g| parse_form(g, *vars)).collect::<Result<Vec<Form>>>()?;
            let amb = ambient.as_deref().map(|a| parse_form(a, *vars)).transpose()?;
            Ok(to_value(&probe_with_budget(&gens, *vars, amb.as_ref(), [p1, p2], PROBE_BUDGET)?))
        }
        Command::ParseCheck { vars, expr } => {
            let f = parse_form(expr, *vars)?;
            let letters: Vec<String> = VARIABLE_LETTERS.iter().take(*vars).enumerate().map(|(i, c)| format!("{c}=x{i}")).collect();
            Ok(json!({ "form": f.to_string(), "degree": f.degree(), "terms": f.num_terms(), "variables": letters }))
        }
    }
}

fn build_family(a: &FamilyArgs) -> Result<FamilyInstance> {
    let need = |v: Option<u32>, flag: &str| v.ok_or_else(|| Error::invalid(format!("this family needs --{flag}")));
    let one = |v: &[String], flag: &str, nv: usize| -> Result<Form> {
        match v {
            [s] => parse_form(s, nv),
            _ => Err(Error::invalid(format!("this family needs exactly one --{flag}"))),
        }
    };
    match a.family {
        FamilyName::SplitExampleI => Ok(split_example_i()),
        FamilyName::SplitExampleII => Ok(split_example_ii()),
        FamilyName::ExampleI => {
            let h = a.h.as_deref().ok_or_else(|| Error::invalid("example-i needs --h"))?;
            make_example_i(need(a.r, "r")?, one(&a.g, "g", 4)?, parse_form(h, 4)?, one(&a.f, "f", 4)?)
        }
        FamilyName::ExampleII => make_example_ii(need(a.n, "n")?, one(&a.g, "g", 5)?, one(&a.f, "f", 5)?),
        FamilyName::Fourfold => {
            if a.f.len() != 3 || a.g.len() != 3 {
                return Err(Error::invalid("fourfold needs three --f and three --g"));
            }
            let pairs = a.f.iter().zip(&a.g).map(|(f, g)| Ok((parse_form(f, 5)?, parse_form(g, 5)?))).collect::<Result<Vec<_>>>()?;
            make_fourfold(&pairs)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn payload(out: &str) -> Value {
        serde_json::from_str::<Report>(out).unwrap().payload
    }

    #[test]
    fn varchenko_command() {
        let (code, out) = run(["nodal", "varchenko", "--i", "3", "--j", "6"]);
        assert_eq!(code, 0);
        assert_eq!(payload(&out)["value"], 68);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["nodal", "varchenko", "--i", "3"]).0, EXIT_USAGE);
        assert_eq!(run(["nodal", "frobnicate"]).0, EXIT_USAGE);
    }

    #[test]
    fn parse_errors_exit_three() {
        let (code, out) = run(["nodal", "parse-check", "--vars", "3", "x^2 + y"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(out.contains("inhomogeneous"));
    }

    #[test]
    fn line_format() {
        let f = PointSetFile::parse("# P 2\n# comment\n1 0 0\n\n0 2 0  # trailing\n").unwrap();
        assert_eq!(f.points.len(), 2);
        assert_eq!(f.points[1], ProjPoint::from_i64(&[0, 1, 0]).unwrap());
        assert_eq!(PointSetFile::parse(&f.to_lines()).unwrap(), f);
        assert!(PointSetFile::parse("1 0 0\n").is_err());
        assert!(PointSetFile::parse("# P 2\n1 0\n").is_err());
    }

    #[test]
    fn json_format() {
        let text = r#"{"ambient_dim": 1, "field": {"prime": 7}, "points": [[1, 2], [0, "3"]], "labels": ["a", "b"]}"#;
        let f = PointSetFile::parse(text).unwrap();
        assert_eq!(f.field, FieldSpec::Prime(7));
        assert_eq!(PointSetFile::parse(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn seeds_are_reported_only_when_used() {
        let (_, out) = run(["nodal", "bound", "--kind", "double-solid", "--r", "3"]);
        let r: Report = serde_json::from_str(&out).unwrap();
        assert_eq!(r.seed, None);
        assert_eq!(r.payload["bound"], "5");
        let back: Report = serde_json::from_str(&serde_json::to_string_pretty(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
