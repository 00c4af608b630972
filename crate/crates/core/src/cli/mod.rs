//! Command-line surface. Every subcommand prints one JSON report on stdout
//! and exits with a documented code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success; for `verdict`, ψ is determined |
//! | 1 | internal failure (solver did not converge, self-check failed) |
//! | 2 | input error (unreadable or invalid file, bad flag, precondition) |
//! | 3 | `verdict`: ψ is undetermined |
//! | 4 | `verdict`: GHZ detection inconclusive |
//! | 5 | theorem-violation anomaly |

pub mod io;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::compat::{
    determinedness_with, rank2_check, Determinedness, SearchOptions, VerdictOptions,
};
use crate::construct::pure_partner_report;
use crate::ghz::{ghz_family, GhzParams};
use crate::qstate::{haar_random_state, random_local_unitary, CMatrix, PureState, SplitMix64, C64};
use crate::rdm::{ptr_tuple, ptr_tuple_pure, rdm_max_distance};
use crate::schmidt::{proof_check, purify};
use crate::Error;
pub use io::{FileError, StateFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNDETERMINED: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;
pub const EXIT_ANOMALY: i32 = 5;

/// Residual bound for the relations checked by `proofcheck` and `sweep`.
pub const RELATION_TOL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(
    name = "rdm-determined",
    version,
    about = "Is a pure state determined by its (n-1)-qubit marginals?"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// GHZ detector tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Master seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random restarts of the feasibility search.
    #[arg(long, global = true, default_value_t = 64)]
    pub restarts: usize,
    /// Output path: the partner state file for `partner`, a directory for
    /// `family`, a copy of the report otherwise.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl Default for Common {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            seed: 0,
            restarts: 64,
            out: None,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print all n (n-1)-qubit reduced density matrices of a state file.
    Rdm { input: PathBuf },
    /// Decide whether a pure state is determined by its marginals.
    Verdict { input: PathBuf },
    /// Build a second pure state with ψ's marginals from a mixed ω sharing them.
    Partner { psi: PathBuf, omega: PathBuf },
    /// Run the verdict on random Haar and rotated GHZ states.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Check every purification relation on a GHZ family member.
    Proofcheck {
        #[command(flatten)]
        ghz: GhzArgs,
        /// Family parameter as `re` or `re,im`.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        z: String,
    },
    /// Write GHZ family members to state files.
    Family {
        #[command(flatten)]
        ghz: GhzArgs,
        /// Family parameters (`re` or `re,im`, repeatable); defaults to 9
        /// real points from −1 to 1.
        #[arg(long = "z", allow_hyphen_values = true)]
        z: Vec<String>,
    },
}

/// `α|0…0⟩ + β|1…1⟩`, given either as `--a`/`--b` or as weight `--p = |α|²`
/// with relative phase `--theta`. Defaults to `p = 0.5`.
#[derive(Args, Debug, Clone)]
pub struct GhzArgs {
    #[arg(long)]
    pub n: usize,
    /// α as `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true, requires = "b", conflicts_with = "p")]
    pub a: Option<String>,
    /// β as `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true, requires = "a")]
    pub b: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
}

impl GhzArgs {
    pub fn params(&self) -> Result<GhzParams, Failure> {
        match (&self.a, &self.b) {
            (Some(a), Some(b)) => Ok(GhzParams::new(
                self.n,
                parse_complex(a)?,
                parse_complex(b)?,
            )?),
            _ => Ok(GhzParams::from_weight(
                self.n,
                self.p.unwrap_or(0.5),
                self.theta,
            )?),
        }
    }
}

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<C64, Failure> {
    let bad = || {
        Failure::input(format!(
            "cannot parse complex number {s:?}; use re or re,im"
        ))
    };
    let mut parts = s.split(',').map(|p| p.trim().parse::<f64>());
    let re = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match parts.next() {
        Some(v) => v.map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(C64::new(re, im))
}

/// A failed command: exit code and message.
#[derive(Debug, Clone)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::TheoremViolation(_) => EXIT_ANOMALY,
        Error::NoConvergence { .. } | Error::Inconsistent(_) => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code_for(&e),
            message: e.to_string(),
        }
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        let code = match &e {
            FileError::Invariant(inner) => exit_code_for(inner),
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Machine-readable outcome of one command.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub subcommand: String,
    pub tool_version: String,
    pub inputs: Vec<InputDigest>,
    pub seed: u64,
    pub restarts: usize,
    pub tol: f64,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub result: Value,
    /// Wall-clock time; the only field that varies between identical runs.
    pub elapsed_ms: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Ctx<'a> {
    argv: Vec<String>,
    common: &'a Common,
    start: Instant,
    inputs: Vec<InputDigest>,
}

impl<'a> Ctx<'a> {
    fn new(argv: Vec<String>, common: &'a Common) -> Self {
        Self {
            argv,
            common,
            start: Instant::now(),
            inputs: Vec::new(),
        }
    }

    fn read(&mut self, path: &Path) -> Result<StateFile, Failure> {
        let (state, bytes) = StateFile::read(path)?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex(&Sha256::digest(&bytes)),
        });
        Ok(state)
    }

    fn finish(self, sub: &str, outcome: Result<(Value, i32), Failure>) -> Report {
        let (result, code, error) = match outcome {
            Ok((v, c)) => (v, c, None),
            Err(f) => (Value::Null, f.code, Some(f.message)),
        };
        Report {
            command: self.argv,
            subcommand: sub.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: self.inputs,
            seed: self.common.seed,
            restarts: self.common.restarts,
            tol: self.common.tol,
            exit_code: code,
            error,
            result,
            elapsed_ms: self.start.elapsed().as_secs_f64() * 1e3,
        }
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn matrix_json(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.dim())
            .map(|r| Value::Array(m.row(r).iter().map(|z| json!([z.re, z.im])).collect()))
            .collect(),
    )
}

fn amps_json(v: &[C64]) -> Value {
    Value::Array(v.iter().map(|z| json!([z.re, z.im])).collect())
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure {
        code: EXIT_INTERNAL,
        message: e.to_string(),
    })
}

/// Echo used when a command is invoked as a library call.
fn echo(parts: &[&str]) -> Vec<String> {
    std::iter::once("rdm-determined")
        .chain(parts.iter().copied())
        .map(String::from)
        .collect()
}

pub fn cmd_rdm(input: &Path, common: &Common) -> Report {
    cmd_rdm_in(
        Ctx::new(echo(&["rdm", &input.display().to_string()]), common),
        input,
    )
}

fn cmd_rdm_in(mut ctx: Ctx, input: &Path) -> Report {
    let outcome = (|| {
        let state = ctx.read(input)?;
        let tuple = match &state {
            StateFile::Pure(p) => ptr_tuple_pure(p)?,
            StateFile::Density(d) => ptr_tuple(d)?,
        };
        let rdms: Vec<Value> = tuple
            .parts()
            .iter()
            .enumerate()
            .map(|(i, part)| json!({ "traced_qubit": i + 1, "matrix": matrix_json(part.matrix()) }))
            .collect();
        Ok((
            json!({
                "kind": state.kind(),
                "n": state.n(),
                "rdms": rdms,
                "consistency_residual": tuple.consistency_residual(),
            }),
            EXIT_OK,
        ))
    })();
    ctx.finish("rdm", outcome)
}

pub fn cmd_verdict(input: &Path, common: &Common) -> Report {
    cmd_verdict_in(
        Ctx::new(echo(&["verdict", &input.display().to_string()]), common),
        input,
    )
}

fn cmd_verdict_in(mut ctx: Ctx, input: &Path) -> Report {
    let common = ctx.common.clone();
    let outcome = (|| {
        let psi = match ctx.read(input)? {
            StateFile::Pure(p) => p,
            StateFile::Density(_) => {
                return Err(Failure::input(
                    "verdict is defined for pure states; got a density matrix",
                ))
            }
        };
        let opts = VerdictOptions {
            tol: common.tol,
            search: SearchOptions {
                restarts: common.restarts,
                seed: common.seed,
                ..SearchOptions::default()
            },
        };
        let v = determinedness_with(&psi, &opts)?;
        let code = if v.anomaly.is_some() {
            EXIT_ANOMALY
        } else {
            match v.verdict {
                Determinedness::Determined => EXIT_OK,
                Determinedness::Undetermined => EXIT_UNDETERMINED,
                Determinedness::Inconclusive => EXIT_INCONCLUSIVE,
            }
        };
        let mut value = to_value(&v)?;
        value["determined"] = json!(v.determined());
        if let Some(w) = &v.witness_family {
            value["witness_family"]["description"] = json!(w.description());
        }
        Ok((value, code))
    })();
    ctx.finish("verdict", outcome)
}

pub fn cmd_partner(psi: &Path, omega: &Path, common: &Common) -> Report {
    let argv = echo(&[
        "partner",
        &psi.display().to_string(),
        &omega.display().to_string(),
    ]);
    cmd_partner_in(Ctx::new(argv, common), psi, omega)
}

fn cmd_partner_in(mut ctx: Ctx, psi_path: &Path, omega_path: &Path) -> Report {
    let out = ctx.common.out.clone();
    let outcome = (|| {
        let psi = match ctx.read(psi_path)? {
            StateFile::Pure(p) => p,
            StateFile::Density(_) => return Err(Failure::input("ψ must be a pure state file")),
        };
        let omega = match ctx.read(omega_path)? {
            StateFile::Density(d) => d,
            StateFile::Pure(p) => p.projector(),
        };
        let rep = pure_partner_report(&psi, &omega)?;
        if let Some(path) = &out {
            StateFile::Pure(rep.partner.clone())
                .write(path)
                .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
        }
        let mut value = to_value(&rep)?;
        value["partner"] = amps_json(rep.partner.amps());
        value["partner_file"] = json!(out.as_ref().map(|p| p.display().to_string()));
        Ok((value, EXIT_OK))
    })();
    ctx.finish("partner", outcome)
}

#[derive(Clone, Debug, Serialize)]
struct SampleOutcome {
    index: usize,
    kind: &'static str,
    seed: u64,
    verdict: Determinedness,
    sup_tmax: f64,
    anomaly: Option<String>,
    rank2: Option<bool>,
    main_constraint: Option<f64>,
    relations_max: Option<f64>,
    flags: Vec<String>,
}

fn run_sample(n: usize, k: usize, seed: u64, common: &Common) -> Result<SampleOutcome, Failure> {
    let opts = VerdictOptions {
        tol: common.tol,
        search: SearchOptions {
            restarts: common.restarts,
            seed,
            ..SearchOptions::default()
        },
    };
    let mut flags = Vec::new();
    if k.is_multiple_of(2) {
        let psi = haar_random_state(n, seed)?;
        let v = determinedness_with(&psi, &opts)?;
        flags.extend(v.anomaly.clone());
        return Ok(SampleOutcome {
            index: k,
            kind: "haar",
            seed,
            verdict: v.verdict,
            sup_tmax: v.numeric_sup_tmax,
            anomaly: v.anomaly,
            rank2: None,
            main_constraint: None,
            relations_max: None,
            flags,
        });
    }
    let mut rng = SplitMix64::new(seed);
    let weight = 0.1 + 0.8 * rng.next_f64();
    let theta = std::f64::consts::TAU * rng.next_f64();
    let params = GhzParams::from_weight(n, weight, theta)?;
    let lu = random_local_unitary(n, &mut rng);
    let psi: PureState = lu.apply(&params.state());
    let v = determinedness_with(&psi, &opts)?;
    flags.extend(v.anomaly.clone());
    if v.verdict == Determinedness::Determined {
        flags.push("rotated GHZ sample judged determined".into());
    }
    let radius = 0.95 * rng.next_f64().sqrt();
    let z = C64::from_polar(radius, std::f64::consts::TAU * rng.next_f64());
    let omega = lu.apply_density(&ghz_family(&params, z)?);
    let rank2 = if n >= 3 {
        Some(rank2_check(&psi, &omega)?)
    } else {
        None
    };
    if rank2 == Some(false) {
        flags.push("family member does not have rank 2".into());
    }
    let pc = proof_check(&purify(&omega)?, &psi)?;
    let relations = pc.relations.max();
    if relations > RELATION_TOL {
        flags.push(format!("purification relations off by {relations:.3e}"));
    }
    if let Some(mc) = pc.main_constraint.filter(|&mc| mc > RELATION_TOL) {
        flags.push(format!("main constraint off by {mc:.3e}"));
    }
    Ok(SampleOutcome {
        index: k,
        kind: "ghz",
        seed,
        verdict: v.verdict,
        sup_tmax: v.numeric_sup_tmax,
        anomaly: v.anomaly,
        rank2,
        main_constraint: pc.main_constraint,
        relations_max: Some(relations),
        flags,
    })
}

pub fn cmd_sweep(n: usize, samples: usize, common: &Common) -> Report {
    let argv = echo(&[
        "sweep",
        "--n",
        &n.to_string(),
        "--samples",
        &samples.to_string(),
    ]);
    cmd_sweep_in(Ctx::new(argv, common), n, samples)
}

fn cmd_sweep_in(ctx: Ctx, n: usize, samples: usize) -> Report {
    let common = ctx.common.clone();
    let outcome = (|| {
        if !(2..=6).contains(&n) {
            return Err(Failure::input(format!(
                "sweep needs 2 ≤ n ≤ 6, got n = {n}"
            )));
        }
        if samples == 0 {
            return Err(Failure::input("samples must be at least 1"));
        }
        // per-sample seeds depend only on (seed, index); collect keeps order
        let results: Vec<SampleOutcome> = (0..samples)
            .into_par_iter()
            .map(|k| run_sample(n, k, SplitMix64::derive(common.seed, k as u64), &common))
            .collect::<Result<_, _>>()?;
        let count = |kind: &str, v: Determinedness| {
            results
                .iter()
                .filter(|s| s.kind == kind && s.verdict == v)
                .count()
        };
        let summary = |kind: &str| {
            json!({
                "count": results.iter().filter(|s| s.kind == kind).count(),
                "determined": count(kind, Determinedness::Determined),
                "undetermined": count(kind, Determinedness::Undetermined),
                "inconclusive": count(kind, Determinedness::Inconclusive),
            })
        };
        let flags: Vec<String> = results
            .iter()
            .flat_map(|s| {
                s.flags
                    .iter()
                    .map(move |f| format!("sample {}: {f}", s.index))
            })
            .collect();
        let anomalies = results.iter().filter(|s| s.anomaly.is_some()).count();
        let max_mc = results
            .iter()
            .filter_map(|s| s.main_constraint)
            .fold(0.0, f64::max);
        let code = if flags.is_empty() {
            EXIT_OK
        } else {
            EXIT_ANOMALY
        };
        Ok((
            json!({
                "n": n,
                "samples": samples,
                "haar": summary("haar"),
                "ghz": summary("ghz"),
                "rank2_pass": results.iter().filter(|s| s.rank2 == Some(true)).count(),
                "max_main_constraint": max_mc,
                "anomalies": anomalies,
                "flags": flags,
                "per_sample": to_value(&results)?,
            }),
            code,
        ))
    })();
    ctx.finish("sweep", outcome)
}

pub fn cmd_proofcheck(ghz: &GhzArgs, z: &str, common: &Common) -> Report {
    let argv = echo(&["proofcheck", "--n", &ghz.n.to_string(), "--z", z]);
    cmd_proofcheck_in(Ctx::new(argv, common), ghz, z)
}

fn cmd_proofcheck_in(ctx: Ctx, ghz: &GhzArgs, z: &str) -> Report {
    let outcome = (|| {
        let params = ghz.params()?;
        let z = parse_complex(z)?;
        let omega = ghz_family(&params, z)?;
        let big_omega = purify(&omega)?;
        let psi = params.state();
        let pc = proof_check(&big_omega, &psi)?;
        let per_qubit: Vec<Value> = pc
            .envs
            .iter()
            .map(|e| json!({ "qubit": e.qubit(), "residuals": e.residuals() }))
            .collect();
        let worst = pc.relations.max().max(pc.main_constraint.unwrap_or(0.0));
        let code = if worst <= RELATION_TOL && pc.lemma1_ok {
            EXIT_OK
        } else {
            EXIT_ANOMALY
        };
        Ok((
            json!({
                "params": params,
                "z": [z.re, z.im],
                "env_dim": big_omega.env_dim(),
                "relations": pc.relations,
                "main_constraint": pc.main_constraint,
                "lemma1_ok": pc.lemma1_ok,
                "max_residual": worst,
                "per_qubit": per_qubit,
            }),
            code,
        ))
    })();
    ctx.finish("proofcheck", outcome)
}

/// Default family grid: 9 real points from −1 to 1.
pub fn default_z_grid() -> Vec<C64> {
    (0..9)
        .map(|k| C64::new(-1.0 + 0.25 * k as f64, 0.0))
        .collect()
}

pub fn cmd_family(ghz: &GhzArgs, z: &[String], common: &Common) -> Report {
    let mut parts = vec!["family".to_string(), "--n".into(), ghz.n.to_string()];
    for v in z {
        parts.push("--z".into());
        parts.push(v.clone());
    }
    let refs: Vec<&str> = parts.iter().map(String::as_str).collect();
    cmd_family_in(Ctx::new(echo(&refs), common), ghz, z)
}

fn cmd_family_in(ctx: Ctx, ghz: &GhzArgs, z: &[String]) -> Report {
    let out = ctx.common.out.clone();
    let outcome = (|| {
        let dir = out.ok_or_else(|| Failure::input("family needs --out DIR"))?;
        let params = ghz.params()?;
        let zs: Vec<C64> = if z.is_empty() {
            default_z_grid()
        } else {
            z.iter()
                .map(|s| parse_complex(s))
                .collect::<Result<_, _>>()?
        };
        std::fs::create_dir_all(&dir)
            .map_err(|e| Failure::input(format!("cannot create {}: {e}", dir.display())))?;
        let write = |name: &str, s: StateFile| -> Result<String, Failure> {
            let p = dir.join(name);
            s.write(&p)
                .map_err(|e| Failure::input(format!("cannot write {}: {e}", p.display())))?;
            Ok(p.display().to_string())
        };
        let psi = params.state();
        let reference = ptr_tuple_pure(&psi)?;
        let ghz_file = write("ghz.json", StateFile::Pure(psi))?;
        let mut members = Vec::new();
        for (k, &zk) in zs.iter().enumerate() {
            let rho = ghz_family(&params, zk)?;
            let dist = rdm_max_distance(&ptr_tuple(&rho)?, &reference)?;
            let purity = rho.purity();
            let file = write(&format!("member_{k:02}.json"), StateFile::Density(rho))?;
            members.push(json!({ "z": [zk.re, zk.im], "file": file, "purity": purity, "rdm_distance": dist }));
        }
        Ok((
            json!({ "params": params, "ghz_file": ghz_file, "members": members }),
            EXIT_OK,
        ))
    })();
    ctx.finish("family", outcome)
}

/// Captured output of one invocation.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let argv: Vec<String> = args
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return Outcome {
                code,
                stdout,
                stderr,
                report: None,
            };
        }
    };
    let common = &cli.common;
    let ctx = Ctx::new(argv, common);
    let report = match &cli.command {
        Command::Rdm { input } => cmd_rdm_in(ctx, input),
        Command::Verdict { input } => cmd_verdict_in(ctx, input),
        Command::Partner { psi, omega } => cmd_partner_in(ctx, psi, omega),
        Command::Sweep { n, samples } => cmd_sweep_in(ctx, *n, *samples),
        Command::Proofcheck { ghz, z } => cmd_proofcheck_in(ctx, ghz, z),
        Command::Family { ghz, z } => cmd_family_in(ctx, ghz, z),
    };
    let mut stderr = report
        .error
        .as_ref()
        .map(|e| format!("error: {e}\n"))
        .unwrap_or_default();
    let stdout = report.to_json() + "\n";
    let copies_report = matches!(
        cli.command,
        Command::Rdm { .. }
            | Command::Verdict { .. }
            | Command::Sweep { .. }
            | Command::Proofcheck { .. }
    );
    let mut code = report.exit_code;
    if let (true, Some(path)) = (copies_report, &common.out) {
        if let Err(e) = std::fs::write(path, &stdout) {
            stderr.push_str(&format!("error: cannot write {}: {e}\n", path.display()));
            if code == EXIT_OK {
                code = EXIT_INPUT;
            }
        }
    }
    Outcome {
        code,
        stdout,
        stderr,
        report: Some(report),
    }
}
