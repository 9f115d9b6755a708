//! The `cube` command line: argument parsing, dispatch, JSON and SVG output.
//!
//! JSON goes to stdout and a one-line human summary to stderr. Exit codes:
//! 0 pass, 1 failed check or runtime error, 2 `WindowTooSmall`, 64 usage.

use std::collections::{BTreeMap, HashMap};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{CubeError, Result};
use crate::groves::{coefficients_j, enumerate_cyl_groves, enumerate_strip_groves, LozengeRegion};
use crate::lattice::{Region, Vertex};
use crate::laurent::{parse_rational, LaurentPoly, Rational, VarId};
use crate::networks::{build_strip_network, char_poly_plethysm, recurrence_poly};
use crate::recurrence::RecurrenceState;
use crate::svg;
use crate::verify::{self, OracleCase, PeriodicityMode};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_WINDOW: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug, Clone, PartialEq, Eq)]
#[command(name = "cube", version, about = "Exact cube recurrence, groves and cylindrical networks")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// Evolve the recurrence and print every value up to `--tmax`.
    Evolve(EvolveArgs),
    /// Enumerate groves of G(v,t), or strip groves with --n/--m.
    Groves(GrovesArgs),
    /// Print J_0..J_m of the (3n,m)-groves.
    Jcoeff(StripArgs),
    /// Print the recurrence polynomial, or its plethysm with --r.
    Qpoly(QpolyArgs),
    /// Print the quotient network N_{n,m}, one edge per line.
    Network(NetworkArgs),
    /// Run a certification check.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    Plane,
    Triangle,
    Cylinder,
    Torus,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct RegionArgs {
    #[arg(long, value_enum)]
    pub region: RegionKind,
    /// Triangle side or strip width.
    #[arg(long)]
    pub m: Option<i64>,
    /// Cylinder period parameter.
    #[arg(long)]
    pub n: Option<i64>,
    /// First torus period, as i,j,k.
    #[arg(long, visible_alias = "A", allow_hyphen_values = true, default_value = "3,-3,0")]
    pub a: Vertex,
    /// Second torus period, as i,j,k.
    #[arg(long, visible_alias = "B", allow_hyphen_values = true, default_value = "0,3,-3")]
    pub b: Vertex,
}

impl RegionArgs {
    pub fn region(&self) -> Result<Region> {
        let need = |x: Option<i64>, flag: &str| {
            x.ok_or_else(|| CubeError::Usage(format!("--region {:?} needs {flag}", self.region).to_lowercase()))
        };
        match self.region {
            RegionKind::Plane => Ok(Region::Plane),
            RegionKind::Triangle => Region::triangle(need(self.m, "--m")?),
            RegionKind::Cylinder => Region::cylinder(need(self.n, "--n")?, need(self.m, "--m")?),
            RegionKind::Torus => Region::torus(self.a, self.b),
        }
    }
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub region: RegionArgs,
    #[arg(long)]
    pub tmax: i64,
    /// Initial values, as x[i,j,k]=p/q; repeatable.
    #[arg(long = "assign", allow_hyphen_values = true)]
    pub assign: Vec<String>,
    /// Only report this vertex, as i,j,k (required for the plane).
    #[arg(long, allow_hyphen_values = true)]
    pub vertex: Option<Vertex>,
    /// Give every unassigned variable a random rational value.
    #[arg(long)]
    pub random: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub json: JsonOut,
}

/// `--json [PATH]`: also write the JSON document to `PATH`.
#[derive(Args, Debug, Clone, PartialEq, Eq, Default)]
pub struct JsonOut {
    #[arg(long = "json", num_args = 0..=1, value_name = "PATH")]
    pub json: Option<Option<PathBuf>>,
}

impl JsonOut {
    fn path(&self) -> Option<&PathBuf> {
        self.json.as_ref().and_then(Option::as_ref)
    }
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct GrovesArgs {
    #[arg(long)]
    pub t: i64,
    /// Apex vertex, as i,j,k; defaults to the first of (0,0,0), (0,1,-1),
    /// (0,2,-2) of the right color.
    #[arg(long, visible_alias = "v", allow_hyphen_values = true)]
    pub vertex: Option<Vertex>,
    #[arg(long)]
    pub n: Option<i64>,
    #[arg(long)]
    pub m: Option<i64>,
    /// Draw the groves: `out.svg` for a single grove, `out_0000.svg`,
    /// `out_0001.svg`, ... for several, or one file per grove inside a
    /// directory when the path has no `.svg` extension.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct StripArgs {
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub m: i64,
    #[command(flatten)]
    pub json: JsonOut,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct QpolyArgs {
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub m: i64,
    #[arg(long)]
    pub r: Option<usize>,
    #[command(flatten)]
    pub json: JsonOut,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct NetworkArgs {
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub m: i64,
    /// Write the edge list here instead of stdout.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
pub enum VerifyCommand {
    Periodicity {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        symbolic: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    Cylrec {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
        /// Second coordinate of v = (m-1, j, 1-m-j).
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        j: i64,
        #[arg(long, default_value_t = verify::DEFAULT_LMAX)]
        lmax: usize,
        /// Numeric trials instead of a symbolic run.
        #[arg(long, default_value_t = 0)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Pleth {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        i: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        j: i64,
        /// Defaults to the degree of Q^⟨r⟩ plus room for three residuals.
        #[arg(long)]
        lmax: Option<usize>,
        #[arg(long)]
        symbolic: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        trials: usize,
    },
    Groves {
        #[arg(long)]
        t: i64,
        /// Also check strip groves of this cylinder.
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        m: Option<i64>,
    },
    Entropy {
        #[arg(long, default_value_t = 12)]
        tmax: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0")]
        vertex: Vertex,
        #[arg(long, allow_hyphen_values = true, default_value = "3,-3,0")]
        a: Vertex,
        #[arg(long, allow_hyphen_values = true, default_value = "0,3,-3")]
        b: Vertex,
        /// Recompute degrees from explicit polynomials up to this T.
        #[arg(long, default_value_t = 2)]
        symbolic_upto: usize,
    },
}

/// Parses `argv` (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    RunConfig::try_parse_from(argv).map_err(|e| CubeError::Usage(e.to_string()))
}

/// Parses `x[i,j,k]=p/q`.
pub fn parse_assignment(s: &str) -> Result<(Vertex, Rational)> {
    let (lhs, rhs) = s
        .split_once('=')
        .ok_or_else(|| CubeError::Usage(format!("--assign {s}: expected x[i,j,k]=value")))?;
    let usage = |e: CubeError| CubeError::Usage(format!("--assign {s}: {e}"));
    let v = Vertex::parse_var(lhs.trim()).map_err(usage)?;
    let x = parse_rational(rhs.trim()).map_err(usage)?;
    Ok((v, x))
}

fn assignment_map(region: &Region, items: &[String]) -> Result<HashMap<VarId, Rational>> {
    let mut out = HashMap::new();
    for s in items {
        let (v, x) = parse_assignment(s)?;
        if !region.contains(v) {
            return Err(CubeError::Usage(format!("--assign {s}: vertex is not in the region")));
        }
        if region.is_boundary(v) {
            return Err(CubeError::Usage(format!("--assign {s}: boundary values are fixed to 1")));
        }
        out.insert(VarId(region.canonicalize(v)?), x);
    }
    Ok(out)
}

/// Output of one subcommand: JSON for stdout, a summary for stderr and an
/// exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub json: Value,
    pub summary: String,
    pub code: i32,
}

impl Outcome {
    fn ok(json: Value, summary: String) -> Self {
        Outcome { json, summary, code: EXIT_PASS }
    }

    /// Also writes the JSON to `path`, if given.
    fn saved(self, path: Option<&PathBuf>) -> Result<Self> {
        if let Some(p) = path {
            std::fs::write(p, format!("{}\n", serde_json::to_string_pretty(&self.json).expect("json")))?;
        }
        Ok(self)
    }

    fn check(json: Value, summary: String, passed: bool) -> Self {
        Outcome { json, summary, code: if passed { EXIT_PASS } else { EXIT_FAIL } }
    }
}

fn default_apex(t: i64) -> Vertex {
    [Vertex::new(0, 0, 0), Vertex::new(0, 1, -1), Vertex::new(0, 2, -2)]
        .into_iter()
        .find(|v| (t + 1 - v.color() as i64).rem_euclid(3) == 0)
        .expect("one of three colors")
}

fn evolve(a: &EvolveArgs) -> Result<Outcome> {
    let region = a.region.region()?;
    let mut assign = assignment_map(&region, &a.assign)?;
    if a.random {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        for (v, x) in verify::random_assignment(&region, &mut rng)? {
            assign.entry(v).or_insert(x);
        }
    }
    let mut state = RecurrenceState::with_assignment(region, &assign)?;
    let values: BTreeMap<(i64, Vertex), LaurentPoly> = match (region, a.vertex) {
        (Region::Plane, None) => return Err(CubeError::Usage("--region plane needs --vertex".into())),
        (_, Some(v)) => {
            if !region.contains(v) {
                return Err(CubeError::Usage(format!("--vertex {v} is not in the region")));
            }
            let e = v.color() as i64;
            let mut out = BTreeMap::new();
            let mut t = e;
            while t <= a.tmax {
                out.insert((t, v), state.value(v, t)?);
                t += 3;
            }
            out
        }
        (_, None) => state
            .evolve_slice(a.tmax)?
            .into_iter()
            .map(|((v, t), p)| ((t, v), p))
            .collect(),
    };
    let map: serde_json::Map<String, Value> =
        values.iter().map(|((t, v), p)| (format!("{}@{t}", v.var_name()), p.to_json())).collect();
    let summary = format!("{} values up to t={}", map.len(), a.tmax);
    Outcome::ok(Value::Object(map), summary).saved(a.json.path())
}

/// Where the `k`-th of `total` drawings goes; see [`GrovesArgs::svg`].
fn svg_path(path: &std::path::Path, k: usize, total: usize) -> Result<PathBuf> {
    if path.extension().is_some_and(|e| e == "svg") {
        if total == 1 {
            return Ok(path.to_path_buf());
        }
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("grove");
        return Ok(path.with_file_name(format!("{stem}_{k:04}.svg")));
    }
    std::fs::create_dir_all(path)?;
    Ok(path.join(format!("grove_{k:04}.svg")))
}

fn groves(a: &GrovesArgs) -> Result<Outcome> {
    let v = a.vertex.unwrap_or_else(|| default_apex(a.t));
    match (a.n, a.m) {
        (Some(n), Some(m)) => {
            let gs = enumerate_strip_groves(n, m, v, a.t)?;
            let region = LozengeRegion::new(v, a.t)?;
            if let Some(path) = &a.svg {
                for (k, g) in gs.iter().enumerate() {
                    svg::write_svg(&svg_path(path, k, gs.len())?, &svg::forest_svg(&region, &g.forest))?;
                }
            }
            let sum = gs.iter().fold(LaurentPoly::zero(), |s, g| s.add(&g.weight));
            let rows: Vec<Value> = gs.iter().map(|g| g.weight.to_json()).collect();
            let summary = format!("{} strip groves of G_{m}({v},{})", gs.len(), a.t);
            Ok(Outcome::ok(json!({ "count": gs.len(), "weights": rows, "sum": sum.to_json() }), summary))
        }
        (None, None) => {
            let region = LozengeRegion::new(v, a.t)?;
            let gs = region.enumerate_groves();
            if let Some(path) = &a.svg {
                for (k, f) in gs.iter().enumerate() {
                    svg::write_svg(&svg_path(path, k, gs.len())?, &svg::forest_svg(&region, f))?;
                }
            }
            let weights: Vec<LaurentPoly> = gs.iter().map(|f| region.weight(f)).collect();
            let sum = weights.iter().fold(LaurentPoly::zero(), |s, w| s.add(w));
            let rows: Vec<Value> = weights.iter().map(LaurentPoly::to_json).collect();
            let summary = format!("{} groves of G({v},{})", gs.len(), a.t);
            Ok(Outcome::ok(json!({ "count": gs.len(), "weights": rows, "sum": sum.to_json() }), summary))
        }
        _ => Err(CubeError::Usage("--n and --m go together".into())),
    }
}

fn jcoeff(a: &StripArgs) -> Result<Outcome> {
    let j = coefficients_j(a.n, a.m)?;
    let mut counts = vec![0usize; j.len()];
    for g in enumerate_cyl_groves(a.n, a.m)? {
        counts[g.h as usize] += 1;
    }
    let summary = format!("J_0..J_{} for (n,m)=({},{}); grove counts {counts:?}", a.m, a.n, a.m);
    Outcome::ok(
        json!({ "J": j.iter().map(LaurentPoly::to_json).collect::<Vec<_>>(), "counts": counts }),
        summary,
    )
    .saved(a.json.path())
}

fn qpoly(a: &QpolyArgs) -> Result<Outcome> {
    let q = recurrence_poly(a.n, a.m)?;
    let p = match a.r {
        None | Some(1) => q,
        Some(r) => char_poly_plethysm(&q, r)?,
    };
    let summary = format!("degree {} characteristic polynomial", p.degree());
    Outcome::ok(p.to_json(), summary).saved(a.json.path())
}

fn network(a: &NetworkArgs) -> Result<Outcome> {
    let net = build_strip_network(a.n, a.m)?;
    let text = net.to_edge_list();
    if let Some(path) = &a.svg {
        svg::write_svg(path, &svg::network_svg(&net))?;
    }
    let summary = format!("{} nodes, {} edges", net.nodes.len(), net.edges.len());
    match &a.dot {
        Some(path) => {
            std::fs::write(path, &text)?;
            Ok(Outcome::ok(json!({ "nodes": net.nodes.len(), "edges": net.edges.len() }), summary))
        }
        None => Ok(Outcome { json: Value::String(text), summary, code: EXIT_PASS }),
    }
}

fn certificate_outcome(name: &str, certs: Vec<verify::RecurrenceCertificate>) -> Outcome {
    let all_valid = certs.iter().all(verify::RecurrenceCertificate::is_valid);
    let any_onset = certs.iter().all(|c| c.onset.is_some());
    let code = if all_valid {
        EXIT_PASS
    } else if any_onset {
        EXIT_WINDOW
    } else {
        EXIT_FAIL
    };
    let onsets: Vec<Option<usize>> = certs.iter().map(|c| c.onset).collect();
    let json = json!({
        "check": name,
        "passed": all_valid,
        "certificates": certs.iter().map(verify::RecurrenceCertificate::to_json).collect::<Vec<_>>(),
    });
    Outcome { json, summary: format!("{name}: onsets {onsets:?}, valid={all_valid}"), code }
}

fn verify_cmd(c: &VerifyCommand) -> Result<Outcome> {
    match c {
        VerifyCommand::Periodicity { m, symbolic, seed, trials } => {
            let mode = if *symbolic {
                PeriodicityMode::Symbolic
            } else {
                PeriodicityMode::Numeric { seed: *seed, trials: *trials }
            };
            let r = verify::check_periodicity(*m, mode)?;
            let summary = format!("periodicity m={m}: {} comparisons, passed={}", r.checked, r.passed());
            Ok(Outcome::check(r.to_json(), summary, r.passed()))
        }
        VerifyCommand::Cylrec { n, m, j, lmax, trials, seed } => {
            let v = Vertex::new(m - 1, *j, 1 - m - j);
            let certs = if *trials == 0 {
                vec![verify::check_cylinder_recurrence(*n, *m, v, *lmax, None)?]
            } else {
                verify::seeded_assignments(&Region::cylinder(*n, *m)?, *seed, *trials)?
                    .iter()
                    .map(|a| verify::check_cylinder_recurrence(*n, *m, v, *lmax, Some(a)))
                    .collect::<Result<_>>()?
            };
            Ok(certificate_outcome("cylrec", certs))
        }
        VerifyCommand::Pleth { n, m, i, j, lmax, symbolic, seed, trials } => {
            let v = Vertex::new(*i, *j, -i - j);
            let r = (m - i) as usize;
            let deg = if r == 0 { 1 } else { binomial(*m as usize, r) };
            let lmax = lmax.unwrap_or_else(|| verify::default_lmax(deg));
            let certs = if *symbolic {
                vec![verify::check_plethysm_recurrence(*n, *m, v, lmax, None)?]
            } else {
                verify::seeded_assignments(&Region::cylinder(*n, *m)?, *seed, *trials)?
                    .iter()
                    .map(|a| verify::check_plethysm_recurrence(*n, *m, v, lmax, Some(a)))
                    .collect::<Result<_>>()?
            };
            Ok(certificate_outcome("pleth", certs))
        }
        VerifyCommand::Groves { t, n, m } => {
            let mut scope = vec![OracleCase::Plane { v: default_apex(*t), t: *t }];
            if let (Some(n), Some(m)) = (n, m) {
                let cyl = Region::cylinder(*n, *m)?;
                for v in cyl.fundamental_domain().expect("finite") {
                    if !cyl.is_boundary(v) && (t + 1 - v.color() as i64).rem_euclid(3) == 0 {
                        scope.push(OracleCase::Cylinder { n: *n, m: *m, v, t: *t });
                    }
                }
            }
            let out = verify::cross_check_grove_oracle(&scope, None)?;
            let passed = out.iter().all(|o| o.matched);
            let summary = format!("grove oracle t={t}: {} cases, passed={passed}", out.len());
            Ok(Outcome::check(
                json!({ "check": "groves", "passed": passed, "cases": out.iter().map(verify::OracleOutcome::to_json).collect::<Vec<_>>() }),
                summary,
                passed,
            ))
        }
        VerifyCommand::Entropy { tmax, vertex, a, b, symbolic_upto } => {
            let r = verify::measure_degree_growth(*a, *b, *vertex, *tmax, *symbolic_upto)?;
            let summary = format!("entropy: degrees {:?}, passed={}", r.degrees, r.passed());
            Ok(Outcome::check(r.to_json(), summary, r.passed()))
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Runs a parsed command.
pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    match &cfg.command {
        Command::Evolve(a) => evolve(a),
        Command::Groves(a) => groves(a),
        Command::Jcoeff(a) => jcoeff(a),
        Command::Qpoly(a) => qpoly(a),
        Command::Network(a) => network(a),
        Command::Verify(c) => verify_cmd(c),
    }
}

/// Sizes the global thread pool from `CUBE_THREADS`, if set.
pub fn init_threads() {
    if let Some(k) = std::env::var("CUBE_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
}

/// Parses, runs and prints; returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
            let _ = write!(if code == EXIT_PASS { &mut *out as &mut dyn Write } else { err }, "{e}");
            return code;
        }
    };
    match execute(&cfg) {
        Ok(o) => {
            let text = match &o.json {
                Value::String(s) => s.clone(),
                v => format!("{}\n", serde_json::to_string_pretty(v).expect("json")),
            };
            let _ = out.write_all(text.as_bytes());
            let _ = writeln!(err, "{}", o.summary);
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                CubeError::Usage(_) => EXIT_USAGE,
                CubeError::WindowTooSmall(_) => EXIT_WINDOW,
                _ => EXIT_FAIL,
            }
        }
    }
}
