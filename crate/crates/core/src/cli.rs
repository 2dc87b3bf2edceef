//! Command-line front end. [`run`] takes the arguments and output streams
//! so that it can be driven from tests.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chowvariety::{Presentation, VarietyRing};
use crate::cubic3fold::{
    int_value, run_verification, Check, CheckStatus, GroupSummary, Scenario, Verification,
    VerifyOptions,
};
use crate::exactlin::{is_prime, rank_mod_p, IntMatrix};
use crate::prelogcx::{build_delta, build_delta_prime, build_rho, build_rho_prime, compute_prelog, BlockMatrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Machine-readable verification report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub scenario_id: String,
    pub checks: Vec<Check>,
    pub summary: GroupSummary,
}

impl Report {
    pub fn new(v: Verification) -> Self {
        Report {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            scenario_id: v.scenario_id,
            checks: v.checks,
            summary: v.summary,
        }
    }

    /// False iff some check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Parser)]
#[command(name = "prelogchow", version, about = "Numerical Chow rings and prelog Chow groups of SNC degenerations")]
pub struct Cli {
    /// Scenario document to use instead of the built-in one.
    #[arg(long, global = true, value_name = "PATH")]
    pub scenario: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generators, socle and graded pieces of a ring.
    Ring {
        name: String,
        /// Only this degree.
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Dimensions and ranks of the maps of the prelog complex.
    Complex {
        /// Degree k of δ(k): ⊕Num^{k-1}(Y_ij) → ⊕Num^k(Y_i).
        #[arg(long)]
        degree: Option<u32>,
        /// Ranks modulo this prime instead of over Q.
        #[arg(long = "char", value_name = "P")]
        characteristic: Option<u64>,
        /// Per-block ranks of every graded piece involved.
        #[arg(long)]
        ranks: bool,
    },
    /// Runs the verification suite.
    Verify {
        /// Writes the JSON report here.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Check ids or id prefixes.
        #[arg(long, num_args = 1..)]
        only: Vec<String>,
        /// Also checks the ranks of δ and ρ in this characteristic.
        #[arg(long = "char", value_name = "P")]
        characteristic: Option<u64>,
    },
    /// Block-rank tables and the expectation registry; `--json` prints the
    /// verification report instead.
    Report {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<i32, UsageError>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn load(cli: &Cli) -> Result<Scenario, UsageError> {
    match &cli.scenario {
        None => Ok(Scenario::builtin()?),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| UsageError(format!("{}: {e}", p.display())))?;
            Ok(Scenario::from_json(&text)?)
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    let sc = load(cli)?;
    match &cli.command {
        Command::Ring { name, degree, json } => cmd_ring(&sc, name, *degree, *json, out),
        Command::Complex {
            degree,
            characteristic,
            ranks,
        } => cmd_complex(&sc, degree.unwrap_or(sc.degree()), *characteristic, *ranks, out),
        Command::Verify {
            json,
            only,
            characteristic,
        } => {
            let opts = VerifyOptions {
                only: only.clone(),
                char_probe: *characteristic,
            };
            cmd_verify(&sc, &opts, json.as_ref(), out)
        }
        Command::Report { json } => cmd_report(&sc, *json, out),
    }
}

fn piece_json(ring: &VarietyRing, d: u32) -> Result<Value, UsageError> {
    let piece = ring.graded_piece(d)?;
    let dual = ring.graded_piece(ring.dim() - d)?;
    let basis: Vec<_> = (0..piece.rank).map(|k| piece.basis_class(k)).collect();
    let dual_basis: Vec<_> = (0..dual.rank).map(|k| dual.basis_class(k)).collect();
    let pairing: Vec<Vec<Value>> = basis
        .iter()
        .map(|b| dual_basis.iter().map(|c| int_value(&ring.pairing(b, c))).collect())
        .collect();
    Ok(json!({
        "degree": d,
        "rank": piece.rank,
        "basis": basis.iter().map(|b| ring.render(b)).collect::<Vec<_>>(),
        "dual_basis": dual_basis.iter().map(|b| ring.render(b)).collect::<Vec<_>>(),
        "pairing": pairing,
    }))
}

fn presentation_text(ring: &VarietyRing) -> String {
    match ring.presentation() {
        Presentation::Socle(s) => s.render(ring.vars()),
        Presentation::Blowup(b) => format!(
            "blow-up of {} along {} with exceptional divisor {}, zeta = {}",
            b.ambient.name(),
            b.center().name(),
            b.exceptional.name(),
            b.zeta.render(b.exceptional.vars())
        ),
    }
}

fn cmd_ring(sc: &Scenario, name: &str, degree: Option<u32>, as_json: bool, out: &mut dyn Write) -> CmdResult {
    let ring = sc.ring(name)?;
    if let Some(d) = degree {
        if d > ring.dim() {
            return Err(UsageError(format!("`{name}` has dimension {}", ring.dim())));
        }
    }
    let degrees: Vec<u32> = match degree {
        Some(d) => vec![d],
        None => (0..=ring.dim()).collect(),
    };
    let pieces = degrees
        .iter()
        .map(|&d| piece_json(ring, d))
        .collect::<Result<Vec<_>, _>>()?;
    if as_json {
        let doc = json!({
            "name": name,
            "dim": ring.dim(),
            "note": ring.note(),
            "generators": ring.vars(),
            "presentation": presentation_text(ring),
            "pieces": pieces,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "{name}: dimension {}", ring.dim())?;
    if !ring.note().is_empty() {
        writeln!(out, "  {}", ring.note())?;
    }
    let gens: Vec<String> = ring.vars().iter().map(|v| format!("{} (deg {})", v.name, v.degree)).collect();
    writeln!(out, "generators: {}", gens.join(", "))?;
    writeln!(out, "presentation: {}", presentation_text(ring))?;
    for p in &pieces {
        writeln!(out, "Num^{}: rank {}", p["degree"], p["rank"])?;
        for (k, b) in p["basis"].as_array().into_iter().flatten().enumerate() {
            writeln!(out, "  b{k} = {}", b.as_str().unwrap_or_default())?;
        }
        if degree.is_some() {
            let dual: Vec<&str> = p["dual_basis"].as_array().into_iter().flatten().filter_map(Value::as_str).collect();
            writeln!(
                out,
                "pairing with Num^{} basis [{}]:",
                ring.dim() - p["degree"].as_u64().unwrap_or(0) as u32,
                dual.join(", ")
            )?;
            for row in p["pairing"].as_array().into_iter().flatten() {
                let cells: Vec<String> = row.as_array().into_iter().flatten().map(|x| format!("{:>6}", x.to_string())).collect();
                writeln!(out, "  [{}]", cells.join(""))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn matrix_rank(m: &IntMatrix, p: Option<u64>) -> Result<usize, UsageError> {
    Ok(match p {
        None => crate::exactlin::rank(m),
        Some(p) => rank_mod_p(m, p)?,
    })
}

fn block_table(out: &mut dyn Write, title: &str, blocks: &[crate::prelogcx::Block]) -> std::io::Result<()> {
    let cells: Vec<String> = blocks.iter().map(|b| format!("{} {}", b.label, b.size)).collect();
    let total: usize = blocks.iter().map(|b| b.size).sum();
    writeln!(out, "  {title:<24} {}  (total {total})", cells.join(", "))
}

fn cmd_complex(sc: &Scenario, k: u32, p: Option<u64>, ranks: bool, out: &mut dyn Write) -> CmdResult {
    if let Some(p) = p {
        if !is_prime(p) {
            return Err(UsageError(format!("{p} is not prime")));
        }
    }
    if k == 0 || k > sc.config().components().first().map_or(0, |c| c.ring.dim()) {
        return Err(UsageError(format!("degree {k} out of range")));
    }
    let cfg = sc.config();
    let field = match p {
        None => "over Q".to_string(),
        Some(p) => format!("mod {p}"),
    };
    let delta = build_delta(cfg, k)?;
    let rho = build_rho(cfg, k)?;
    let delta_p = build_delta_prime(cfg, k)?;
    let rho_p = build_rho_prime(cfg, k - 1)?;
    let maps: [(&str, &BlockMatrix); 4] = [
        ("delta", &delta),
        ("rho", &rho),
        ("delta'", &delta_p),
        ("rho'", &rho_p),
    ];
    writeln!(out, "prelog complex in degree {k}, ranks {field}")?;
    for (name, m) in maps {
        writeln!(
            out,
            "{name:<7} {} x {}, rank {}",
            m.matrix.rows(),
            m.matrix.cols(),
            matrix_rank(&m.matrix, p)?
        )?;
    }
    let result = compute_prelog(cfg, k)?;
    let torsion: Vec<String> = result
        .coker
        .invariant_factors
        .iter()
        .filter(|d| *d != &num_bigint::BigInt::from(1))
        .map(|d| format!("Z/{d}"))
        .collect();
    let mut coker = format!("Z^{}", result.coker.free_rank);
    for t in &torsion {
        coker.push_str(" + ");
        coker.push_str(t);
    }
    writeln!(out, "coker delta: {coker}")?;
    writeln!(out, "ker rho: Z^{}", result.kernel.cols())?;
    writeln!(out, "M: {} x {}, rank {}", result.m.rows(), result.m.cols(), result.prelog_rank)?;
    writeln!(out, "commutativity: {}", result.commutativity)?;
    if ranks {
        writeln!(out, "block ranks:")?;
        block_table(out, &format!("Num^{k}(Y_i)"), &delta.row_blocks)?;
        block_table(out, &format!("Num^{}(Y_ij)", k - 1), &delta.col_blocks)?;
        block_table(out, &format!("Num^{k}(Y_ij)"), &rho.row_blocks)?;
        block_table(out, &format!("Num^{}(Y_ijk)", k - 1), &rho_p.row_blocks)?;
        writeln!(out, "invariant factors of delta: {}", factors(&result.delta_profile.invariant_factors))?;
        writeln!(out, "invariant factors of rho:   {}", factors(&result.rho_profile.invariant_factors))?;
    }
    Ok(EXIT_OK)
}

/// Compact list: ones are counted, other factors listed.
fn factors(fs: &[num_bigint::BigInt]) -> String {
    let ones = fs.iter().filter(|d| **d == num_bigint::BigInt::from(1)).count();
    let mut parts = vec![format!("1 (x{ones})")];
    parts.extend(fs.iter().filter(|d| **d != num_bigint::BigInt::from(1)).map(|d| d.to_string()));
    parts.join(", ")
}

fn status_tag(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "PASS",
        CheckStatus::Fail => "FAIL",
        CheckStatus::Info => "INFO",
    }
}

fn cmd_verify(sc: &Scenario, opts: &VerifyOptions, json_path: Option<&PathBuf>, out: &mut dyn Write) -> CmdResult {
    let report = Report::new(run_verification(sc, opts));
    if let Some(path) = json_path {
        std::fs::write(path, report.to_json() + "\n")
            .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    }
    for c in &report.checks {
        writeln!(out, "{} {:<28} computed {}  expected {}", status_tag(c.status), c.id, c.computed, c.expected)?;
    }
    let failed = report.checks.iter().filter(|c| c.status == CheckStatus::Fail).count();
    writeln!(
        out,
        "{} checks, {} failed; prelog rank {}, saturation index {}",
        report.checks.len(),
        failed,
        report.summary.prelog_rank.map_or("-".into(), |r| r.to_string()),
        report.summary.saturation_index.as_ref().map_or("-".into(), |v| v.to_string()),
    )?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_report(sc: &Scenario, as_json: bool, out: &mut dyn Write) -> CmdResult {
    if as_json {
        let report = Report::new(run_verification(sc, &VerifyOptions::default()));
        writeln!(out, "{}", report.to_json())?;
        return Ok(if report.passed() { EXIT_OK } else { EXIT_FAILED });
    }
    let cfg = sc.config();
    let dim = cfg.components().first().map_or(0, |c| c.ring.dim());
    writeln!(out, "scenario {}", sc.id())?;
    let strata: [(&str, Vec<(String, &VarietyRing)>); 3] = [
        ("Y_i", cfg.components().iter().map(|c| (format!("Y{}", c.index), &c.ring)).collect()),
        ("Y_ij", cfg.pairs().iter().map(|p| (format!("Y{}{}", p.i, p.j), &p.ring)).collect()),
        ("Y_ijk", cfg.triples().iter().map(|t| (format!("Y{}{}{}", t.i, t.j, t.k), &t.ring)).collect()),
    ];
    for (title, rings) in &strata {
        writeln!(out, "ranks of Num^d({title})")?;
        let mut totals = vec![0usize; dim as usize + 1];
        for (label, ring) in rings {
            let mut cells = Vec::new();
            for d in 0..=dim {
                let r = if d <= ring.dim() { ring.rank(d)? } else { 0 };
                totals[d as usize] += r;
                cells.push(format!("{r:>4}"));
            }
            writeln!(out, "  {label:<6}{}  ({})", cells.join(""), ring.name())?;
        }
        let cells: Vec<String> = totals.iter().map(|t| format!("{t:>4}")).collect();
        writeln!(out, "  {:<6}{}", "sum", cells.join(""))?;
    }
    writeln!(out, "expectations")?;
    write!(out, "{}", sc.expectation_table())?;
    Ok(EXIT_OK)
}
