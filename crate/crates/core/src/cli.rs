//! The batch driver behind the `ergolab` binary.
//!
//! Every subcommand reads a plain `key = value` configuration (file plus
//! `--set key=value` overrides), writes CSV and JSON artifacts to the output
//! directory and reports its verdict through the exit code.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::base::{Alpha, RotationSystem, SymbolicSystem};
use crate::coboundary::{
    build_coboundary, default_schedule, recertify, verify_e_membership, CertificateGrids, FiberArc, MembershipGrid,
};
use crate::ergodicity::{
    default_dictionary, isomorphic_extension_test, parse_dictionary, relative_grid, rotation_grid, skew_grid, ue_gap,
    IsoVerdict, TestFunction, UeThresholds, UeVerdict,
};
use crate::error::Error;
use crate::format::sig12;
use crate::lyapunov::{furman_classify, lyapunov_estimates, ClassifyConfig, TrichotomyClass};
use crate::metrics::{fiber_diameter_profile, mean_equicontinuity_modulus, FactorMap, ModulusProfile};
use crate::rng::task_rng;
use crate::skew::{parse_cocycle, serialize_cocycle, Cocycle, FiberSpace, Mat2, RelativeSystem, SkewSystem};
use crate::system::DynamicalSystem;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_NUMERIC: i32 = 70;

#[derive(Parser, Debug)]
#[command(name = "ergolab", version, about = "Batch experiments on strictly ergodic systems")]
pub struct Cli {
    /// Configuration file of `key = value` lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 lets the runtime decide.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Overrides one configuration key; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Besicovitch and Weyl estimates on sampled pairs and the equicontinuity modulus.
    Pseudometric,
    /// Diameters of the fibers of a factor map.
    FiberProfile,
    /// Builds a certified coboundary close to the identity.
    BuildCoboundary,
    /// Recertifies a saved cocycle and tests the relative-product averages.
    VerifyCocycle,
    /// Unique-ergodicity gaps of Birkhoff averages.
    UeTest,
    /// Relative-product test for an isomorphic extension.
    IsoTest,
    /// Lyapunov exponent of a matrix cocycle.
    Lyapunov,
    /// Three-way classification of a matrix cocycle.
    Classify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Pseudometric => "pseudometric",
            Command::FiberProfile => "fiber-profile",
            Command::BuildCoboundary => "build-coboundary",
            Command::VerifyCocycle => "verify-cocycle",
            Command::UeTest => "ue-test",
            Command::IsoTest => "iso-test",
            Command::Lyapunov => "lyapunov",
            Command::Classify => "classify",
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Parse { .. } | Error::Precision { .. } | Error::Unsupported(_) => {
                CliError::Usage(e.to_string())
            }
            Error::SlopeUnderflow(_) | Error::Numeric(_) | Error::Certificate(_) | Error::Io(_) => {
                CliError::Numeric(e.to_string())
            }
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(key: &str, msg: impl fmt::Display) -> CliError {
    CliError::Usage(format!("key `{key}`: {msg}"))
}

/// Key-value configuration; every key read is echoed with its resolved
/// value, and keys never read are rejected.
#[derive(Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
    echo: RefCell<BTreeMap<String, String>>,
}

impl Config {
    /// Parses `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut c = Config::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
            let k = k.trim();
            if k.is_empty() {
                return Err(CliError::Usage(format!("config line {}: empty key", i + 1)));
            }
            if c.values.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(usage(k, "set twice"));
            }
        }
        Ok(c)
    }

    /// Applies one `key=value` override.
    pub fn set(&mut self, kv: &str) -> CliResult<()> {
        let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Usage(format!("override {kv:?} is not key=value")))?;
        if k.trim().is_empty() {
            return Err(CliError::Usage(format!("override {kv:?} has an empty key")));
        }
        self.values.insert(k.trim().to_string(), v.trim().to_string());
        Ok(())
    }

    pub fn optional(&self, key: &str) -> Option<String> {
        let v = self.values.get(key).cloned();
        if let Some(v) = &v {
            self.echo.borrow_mut().insert(key.to_string(), v.clone());
        }
        v
    }

    pub fn string(&self, key: &str, default: &str) -> String {
        let v = self.values.get(key).cloned().unwrap_or_else(|| default.to_string());
        self.echo.borrow_mut().insert(key.to_string(), v.clone());
        v
    }

    pub fn required(&self, key: &str) -> CliResult<String> {
        self.optional(key).ok_or_else(|| usage(key, "is required"))
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> CliResult<T>
    where
        T: fmt::Display,
    {
        match self.values.get(key) {
            None => {
                self.echo.borrow_mut().insert(key.to_string(), default.to_string());
                Ok(default)
            }
            Some(v) => {
                let parsed = parse_number::<T>(v).ok_or_else(|| usage(key, format!("cannot parse {v:?}")))?;
                self.echo.borrow_mut().insert(key.to_string(), v.clone());
                Ok(parsed)
            }
        }
    }

    pub fn list<T: FromStr>(&self, key: &str, default: &str) -> CliResult<Vec<T>> {
        let v = self.string(key, default);
        let out: Vec<T> = v
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| parse_number::<T>(s).ok_or_else(|| usage(key, format!("cannot parse list entry {s:?}"))))
            .collect::<CliResult<_>>()?;
        if out.is_empty() {
            return Err(usage(key, "list is empty"));
        }
        Ok(out)
    }

    pub fn positive<T: FromStr + fmt::Display + PartialOrd + Default>(&self, key: &str, default: T) -> CliResult<T> {
        let v = self.get(key, default)?;
        if !(v > T::default()) {
            return Err(usage(key, "must be positive"));
        }
        Ok(v)
    }

    /// Rejects keys that the command never read.
    pub fn finish(&self) -> CliResult<BTreeMap<String, String>> {
        let echo = self.echo.borrow();
        let unknown: BTreeSet<&String> = self.values.keys().filter(|k| !echo.contains_key(*k)).collect();
        if let Some(k) = unknown.into_iter().next() {
            return Err(usage(k, "unknown for this command"));
        }
        Ok(echo.clone())
    }
}

/// Integers may be written in scientific notation, e.g. `1e4`.
fn parse_number<T: FromStr>(s: &str) -> Option<T> {
    if let Ok(v) = s.parse::<T>() {
        return Some(v);
    }
    let x: f64 = s.parse().ok()?;
    if x.fract() == 0.0 && x.abs() < 1e30 {
        format!("{x:.0}").parse::<T>().ok()
    } else {
        None
    }
}

fn base_from(cfg: &Config) -> CliResult<RotationSystem> {
    let a = cfg.string("alpha", "golden");
    let alpha = Alpha::from_spec(&a).map_err(|e| usage("alpha", e))?;
    RotationSystem::new(alpha).map_err(|e| usage("alpha", e))
}

/// Parses a cocycle spec: `identity`, `identity-projective`, `rotation:b`,
/// `mobius-rotation:phi`, `mobius-diag:l`, `herman:l` or `file:PATH`.
pub fn parse_cocycle_spec(s: &str) -> crate::Result<Cocycle> {
    let num = |v: &str| -> crate::Result<f64> {
        let x: f64 = v.trim().parse().map_err(|_| Error::parse("cocycle", format!("bad number {v:?}")))?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(Error::parse("cocycle", format!("non-finite number {v:?}")))
        }
    };
    let s = s.trim();
    match s {
        "identity" => return Ok(Cocycle::identity(FiberSpace::Circle)),
        "identity-projective" => return Ok(Cocycle::identity(FiberSpace::Projective)),
        _ => {}
    }
    let (kind, arg) = s
        .split_once(':')
        .ok_or_else(|| Error::parse("cocycle", format!("expected kind:argument, got {s:?}")))?;
    match kind {
        "rotation" => Ok(Cocycle::constant_rotation(num(arg)?)),
        "mobius-rotation" => Ok(Cocycle::constant_matrix(Mat2::rotation(num(arg)?))),
        "mobius-diag" | "herman" => {
            let l = num(arg)?;
            if !(l > 0.0) {
                return Err(Error::invalid(format!("{kind} needs a positive parameter, got {l}")));
            }
            Ok(if kind == "herman" { Cocycle::herman(l) } else { Cocycle::constant_matrix(Mat2::diag(l, 1.0 / l)) })
        }
        "file" => parse_cocycle(&std::fs::read_to_string(arg)?),
        _ => Err(Error::parse("cocycle", format!("unknown cocycle kind {kind:?}"))),
    }
}

fn cocycle_from(cfg: &Config, default: &str) -> CliResult<Cocycle> {
    let s = cfg.string("cocycle", default);
    parse_cocycle_spec(&s).map_err(|e| usage("cocycle", e))
}

fn thresholds_from(cfg: &Config) -> CliResult<UeThresholds> {
    let d = UeThresholds::default();
    let t = UeThresholds { pass: cfg.positive("pass", d.pass)?, fail: cfg.positive("fail", d.fail)? };
    if t.pass > t.fail {
        return Err(usage("pass", "must not exceed `fail`"));
    }
    Ok(t)
}

fn functions_from(cfg: &Config, default: &str) -> CliResult<Vec<TestFunction>> {
    let s = cfg.string("functions", default);
    if s == "default" {
        return Ok(default_dictionary());
    }
    parse_dictionary(&s).map_err(|e| usage("functions", e))
}

/// Collected artifacts of one run, written after the computation finishes.
#[derive(Default)]
struct Artifacts {
    files: Vec<(String, String)>,
}

impl Artifacts {
    fn text(&mut self, name: &str, body: String) {
        self.files.push((name.to_string(), body));
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Numeric(e.to_string()))?;
        s.push('\n');
        self.text(name, s);
        Ok(())
    }

    fn write(&self, dir: &Path) -> CliResult<()> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Numeric(format!("cannot create {}: {e}", dir.display())))?;
        for (name, body) in &self.files {
            let p = dir.join(name);
            std::fs::write(&p, body).map_err(|e| CliError::Numeric(format!("cannot write {}: {e}", p.display())))?;
        }
        Ok(())
    }
}

fn csv(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

struct Run<'a> {
    cfg: &'a Config,
    seed: u64,
    command: Command,
    artifacts: Artifacts,
}

impl Run<'_> {
    /// The configuration echo embedded in every JSON report.
    fn echo(&self) -> CliResult<Value> {
        let mut m = serde_json::Map::new();
        m.insert("command".into(), json!(self.command.name()));
        m.insert("seed".into(), json!(self.seed));
        for (k, v) in self.cfg.finish()? {
            m.insert(k, json!(v));
        }
        Ok(Value::Object(m))
    }

    fn report(&mut self, name: &str, mut body: Value) -> CliResult<()> {
        body.as_object_mut().expect("reports are objects").insert("config".into(), self.echo()?);
        self.artifacts.json(name, &body)
    }
}

fn modulus_for<S: DynamicalSystem>(sys: &S, grid: &[f64], pairs: usize, horizon: usize, seed: u64) -> CliResult<ModulusProfile> {
    Ok(mean_equicontinuity_modulus(sys, grid, pairs, horizon, seed)?)
}

fn cmd_pseudometric(run: &mut Run) -> CliResult<i32> {
    let cfg = run.cfg;
    let system = cfg.string("system", "rotation");
    let grid: Vec<f64> = cfg.list("eps_grid", "0.02,0.05,0.1,0.2")?;
    let pairs: usize = cfg.positive("pairs", 100)?;
    let horizon: usize = cfg.positive("horizon", 1000)?;
    let base = base_from(cfg)?;
    let prof = match system.as_str() {
        "rotation" => modulus_for(&base, &grid, pairs, horizon, run.seed)?,
        "sturmian" => modulus_for(&SymbolicSystem::Sturmian(base), &grid, pairs, horizon, run.seed)?,
        "thue-morse" => modulus_for(&SymbolicSystem::ThueMorse, &grid, pairs, horizon, run.seed)?,
        "skew" => {
            let g = cocycle_from(cfg, "identity")?;
            modulus_for(&SkewSystem::new(base, g), &grid, pairs, horizon, run.seed)?
        }
        "relative" => {
            let g = cocycle_from(cfg, "identity")?;
            modulus_for(&RelativeSystem::new(base, g), &grid, pairs, horizon, run.seed)?
        }
        other => return Err(usage("system", format!("unknown system {other:?}"))),
    };
    cfg.finish()?;
    run.artifacts.text(
        "pairs.csv",
        csv(
            "pair_id,d,d_B_hat,d_W_hat,horizon",
            prof.pairs.iter().enumerate().map(|(i, p)| {
                vec![i.to_string(), sig12(p.d), sig12(p.d_b), sig12(p.d_w), prof.horizon.to_string()]
            }),
        ),
    );
    let rows: Vec<Value> = prof
        .rows
        .iter()
        .zip(&prof.worst)
        .map(|(r, w)| json!({"eps": r.eps, "delta_hat": r.delta_hat, "worst_d_b": w}))
        .collect();
    let body = json!({
        "system": system,
        "rows": rows,
        "pair_budget": prof.pair_budget,
        "pairs_evaluated": prof.pairs.len(),
        "horizon": prof.horizon,
    });
    run.report("modulus.json", body)?;
    Ok(EXIT_PASS)
}

fn cmd_fiber_profile(run: &mut Run) -> CliResult<i32> {
    let cfg = run.cfg;
    let factor = cfg.string("factor", "sturmian");
    let samples: usize = cfg.positive("samples", 1000)?;
    let resolution: usize = cfg.get("resolution", 64)?;
    let map = match factor.as_str() {
        "skew" => {
            let space = match cfg.string("space", "circle").as_str() {
                "circle" => FiberSpace::Circle,
                "projective" => FiberSpace::Projective,
                other => return Err(usage("space", format!("unknown fiber space {other:?}"))),
            };
            FactorMap::SkewProjection(space)
        }
        "sturmian" => FactorMap::SturmianCoding { rot: base_from(cfg)?, window: cfg.positive("window", 1000u64)? },
        "thue-morse" => FactorMap::ThueMorseComplement,
        other => return Err(usage("factor", format!("unknown factor map {other:?}"))),
    };
    cfg.finish()?;
    let mut rng = task_rng(run.seed, 0);
    let zs: Vec<f64> = (0..samples).map(|_| rng.gen::<f64>()).collect();
    let prof = fiber_diameter_profile(&map, &zs, resolution)?;
    let sup = prof.samples.iter().map(|s| s.1).fold(0.0, f64::max);
    let first_min = prof.samples.iter().position(|s| s.1 == prof.inf_estimate).unwrap_or(0);
    run.artifacts.text(
        "fiber.csv",
        csv("z,diameter", prof.samples.iter().map(|(z, d)| vec![sig12(*z), sig12(*d)])),
    );
    let body = json!({
        "factor": factor,
        "inf_estimate": prof.inf_estimate,
        "sup_estimate": sup,
        "first_minimiser": first_min,
        "samples": samples,
    });
    run.report("fiber.json", body)?;
    Ok(EXIT_PASS)
}

fn grids_from(cfg: &Config, d: CertificateGrids) -> CliResult<CertificateGrids> {
    Ok(CertificateGrids {
        distance_z: cfg.positive("distance_z", d.distance_z)?,
        distance_y: cfg.positive("distance_y", d.distance_y)?,
        integral_z: cfg.positive("integral_z", d.integral_z)?,
        integral_y: cfg.positive("integral_y", d.integral_y)?,
    })
}

fn unit_interval(cfg: &Config, key: &str, default: f64) -> CliResult<f64> {
    let v: f64 = cfg.get(key, default)?;
    if !(v > 0.0 && v < 1.0) {
        return Err(usage(key, format!("must lie in (0, 1), got {v}")));
    }
    Ok(v)
}

fn cmd_build_coboundary(run: &mut Run) -> CliResult<i32> {
    let cfg = run.cfg;
    let base = base_from(cfg)?;
    let fid = cfg.string("function", "diag-cos");
    let f = TestFunction::parse(&fid).map_err(|e| usage("function", e))?;
    let eps = unit_interval(cfg, "eps", 0.25)?;
    let delta = unit_interval(cfg, "delta", 0.25)?;
    let grids = grids_from(cfg, CertificateGrids::default())?;
    cfg.finish()?;
    let build = match build_coboundary(&base, &f, eps, delta, grids) {
        Ok(b) => b,
        Err(Error::Certificate(m)) => {
            eprintln!("certificate failed: {m}");
            return Ok(EXIT_NEGATIVE);
        }
        Err(e) => return Err(e.into()),
    };
    run.artifacts.text("cocycle.txt", serialize_cocycle(&build.g));
    let passed = build.certificate.passed();
    let body = json!({"certificate": build.certificate, "passed": passed});
    run.report("certificate.json", body)?;
    Ok(if passed { EXIT_PASS } else { EXIT_NEGATIVE })
}

fn cmd_verify_cocycle(run: &mut Run) -> CliResult<i32> {
    let cfg = run.cfg;
    let path = cfg.required("cocycle")?;
    let text = std::fs::read_to_string(&path).map_err(|e| usage("cocycle", format!("cannot read {path}: {e}")))?;
    let g = parse_cocycle(&text).map_err(|e| usage("cocycle", e))?;
    let cert: Option<Value> = match cfg.optional("certificate") {
        None => None,
        Some(p) => {
            let t = std::fs::read_to_string(&p).map_err(|e| usage("certificate", format!("cannot read {p}: {e}")))?;
            let v: Value = serde_json::from_str(&t).map_err(|e| usage("certificate", e))?;
            Some(v.get("certificate").cloned().unwrap_or(v))
        }
    };
    let from_cert = |k: &str| cert.as_ref().and_then(|c| c.get(k)).cloned();
    let cert_f64 = |k: &str| from_cert(k).and_then(|v| v.as_f64());
    let cert_usize = |k: &str| from_cert("grids").and_then(|g| g.get(k).and_then(Value::as_u64)).map(|x| x as usize);

    let alpha_default = from_cert("alpha").and_then(|v| v.as_str().map(str::to_string)).unwrap_or("golden".into());
    let alpha = cfg.string("alpha", &alpha_default);
    let base = RotationSystem::new(Alpha::from_spec(&alpha).map_err(|e| usage("alpha", e))?)
        .map_err(|e| usage("alpha", e))?;
    let fid_default = from_cert("function_id").and_then(|v| v.as_str().map(str::to_string)).unwrap_or("diag-cos".into());
    let fid = cfg.string("function", &fid_default);
    let f = TestFunction::parse(&fid).map_err(|e| usage("function", e))?;
    let eps = unit_interval(cfg, "eps", cert_f64("eps").unwrap_or(0.25))?;
    let delta = unit_interval(cfg, "delta", cert_f64("delta").unwrap_or(0.25))?;
    let v_default = match (cert_f64("v_start"), cert_f64("v_len")) {
        (Some(s), Some(l)) => FiberArc::new(s, l).map(|a| a.centre()).map_err(|e| usage("certificate", e))?,
        _ => 0.0,
    };
    let v_centre: f64 = cfg.get("v_centre", v_default)?;
    let d = CertificateGrids::default();
    let grids = grids_from(
        cfg,
        CertificateGrids {
            distance_z: cert_usize("distance_z").unwrap_or(d.distance_z),
            distance_y: cert_usize("distance_y").unwrap_or(d.distance_y),
            integral_z: cert_usize("integral_z").unwrap_or(d.integral_z),
            integral_y: cert_usize("integral_y").unwrap_or(d.integral_y),
        },
    )?;
    let recheck = cfg.get("recertify", matches!(g, Cocycle::Coboundary(_)))?;
    let default_sched: Vec<String> = default_schedule(&g).iter().map(u128::to_string).collect();
    let schedule: Vec<u128> = cfg.list("schedule", &default_sched.join(","))?;
    let mg = MembershipGrid::default();
    let grid = MembershipGrid {
        z_count: cfg.positive("membership_z", mg.z_count)?,
        y_count: cfg.positive("membership_y", mg.y_count)?,
    };
    cfg.finish()?;

    let recertified = if recheck {
        let (distance, c, dev) = recertify(&g, &f, v_centre, &base, grids)?;
        Some(json!({
            "distance": distance,
            "c": c,
            "integral_deviation": dev,
            "distance_passed": distance < delta,
            "integral_passed": dev < eps,
        }))
    } else {
        None
    };
    let report = verify_e_membership(&g, &f, eps, &base, &schedule, grid)?;
    let cert_ok = recertified
        .as_ref()
        .map_or(true, |r| r["distance_passed"].as_bool() == Some(true) && r["integral_passed"].as_bool() == Some(true));
    run.artifacts.text(
        "membership.csv",
        csv(
            "n,median,deviation",
            report.rows.iter().map(|r| vec![r.n.to_string(), sig12(r.median), sig12(r.deviation)]),
        ),
    );
    let passed = cert_ok && report.member;
    let body = json!({
        "recertified": recertified,
        "membership": report,
        "passed": passed,
    });
    run.report("verify.json", body)?;
    Ok(if passed { EXIT_PASS } else { EXIT_NEGATIVE })
}

fn ue_exit(v: UeVerdict) -> i32 {
    match v {
        UeVerdict::UniquelyErgodicEvidence => EXIT_PASS,
        UeVerdict::NotUniquelyErgodic => EXIT_NEGATIVE,
        UeVerdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn cmd_ue_test(run: &mut Run) -> CliResult<i32> {
    let cfg = run.cfg;
    let system = cfg.string("system", "skew");
    let base = base_from(cfg)?;
    let fs = functions_from(cfg, "default")?;
    let schedule: Vec<usize> = cfg.list("schedule", "100,1000,10000")?;
    let nz: usize = cfg.positive("starts_z", 16)?;
    let thresholds = thresholds_from(cfg)?;
    let report = match system.as_str() {
        "rotation" => ue_gap(&base, &rotation_grid(nz), &fs, &schedule, thresholds)?,
        "skew" => {
            let g = cocycle_from(cfg, "identity")?;
            let ny: usize = cfg.positive("starts_y", 4)?;
            ue_gap(&SkewSystem::new(base, g), &skew_grid(nz, ny), &fs, &schedule, thresholds)?
        }
        "relative" => {
            let g = cocycle_from(cfg, "identity")?;
            let ny: usize = cfg.positive("starts_y", 4)?;
            ue_gap(&RelativeSystem::new(base, g), &relative_grid(nz, ny), &fs, &schedule, thresholds)?
        }
        other => return Err(usage("system", format!("unknown system {other:?}"))),
    };
    cfg.finish()?;
    run.artifacts.text("ue.csv", report.to_csv());
    let code = ue_exit(report.verdict);
    run.report("ue.json", json!({"system": system, "report": report}))?;
    Ok(code)
}

fn cmd_iso_test(run: &mut Run) -> CliResult<i32> {
    let cfg = run.cfg;
    let base = base_from(cfg)?;
    let g = cocycle_from(cfg, "identity")?;
    let fs = functions_from(cfg, "cos:y1-y2,cos:z,diag-cos")?;
    let schedule: Vec<u128> = cfg.list("schedule", "100,1000,10000")?;
    let nz: usize = cfg.positive("starts_z", 8)?;
    let ny: usize = cfg.positive("starts_y", 4)?;
    let thresholds = thresholds_from(cfg)?;
    cfg.finish()?;
    let report = isomorphic_extension_test(&g, &base, &fs, &relative_grid(nz, ny), &schedule, thresholds)?;
    run.artifacts.text("iso.csv", report.ue.to_csv());
    let code = match report.verdict {
        IsoVerdict::IsomorphicEvidence => EXIT_PASS,
        IsoVerdict::NotIsomorphic => EXIT_NEGATIVE,
        IsoVerdict::Inconclusive => EXIT_INCONCLUSIVE,
    };
    run.report("iso.json", json!({"report": report}))?;
    Ok(code)
}

fn cmd_lyapunov(run: &mut Run) -> CliResult<i32> {
    let cfg = run.cfg;
    let base = base_from(cfg)?;
    let rho = cocycle_from(cfg, "herman:2")?;
    let horizon: usize = cfg.positive("horizon", 1000)?;
    let starts: usize = cfg.positive("starts", 1)?;
    cfg.finish()?;
    let est = lyapunov_estimates(&rho, &base, &rotation_grid(starts), horizon)?;
    run.artifacts.text("lyapunov.csv", est.to_csv());
    let body = json!({
        "lambda_hat": est.lambda_hat,
        "spread": est.spread(),
        "horizon": est.horizon,
        "starts": starts,
        "renormalizations": est.renormalizations,
    });
    run.report("lyapunov.json", body)?;
    Ok(EXIT_PASS)
}

fn classify_config(cfg: &Config) -> CliResult<ClassifyConfig> {
    let d = ClassifyConfig::default();
    Ok(ClassifyConfig {
        lambda_horizon: cfg.positive("lambda_horizon", d.lambda_horizon)?,
        lambda_threshold: cfg.positive("lambda_threshold", d.lambda_threshold)?,
        gap_horizon: cfg.positive("gap_horizon", d.gap_horizon)?,
        gap_starts: cfg.positive("gap_starts", d.gap_starts)?,
        gap_threshold: cfg.positive("gap_threshold", d.gap_threshold)?,
        jump_threshold: cfg.positive("jump_threshold", d.jump_threshold)?,
        field_points: cfg.positive("field_points", d.field_points)?,
        pullback: cfg.positive("pullback", d.pullback)?,
        ue_horizon: cfg.get("ue_horizon", d.ue_horizon)?,
        ue_base_points: cfg.positive("ue_base_points", d.ue_base_points)?,
        ue_fiber_points: cfg.positive("ue_fiber_points", d.ue_fiber_points)?,
    })
}

fn cmd_classify(run: &mut Run) -> CliResult<i32> {
    let cfg = run.cfg;
    let base = base_from(cfg)?;
    let rho = cocycle_from(cfg, "herman:2")?;
    let cc = classify_config(cfg)?;
    cfg.finish()?;
    let report = furman_classify(&rho, &base, &cc)?;
    run.artifacts.text(
        "directions.csv",
        csv(
            "z,u_plus,u_minus,contraction_diag,low_confidence",
            report.field.iter().map(|d| {
                vec![sig12(d.z), sig12(d.u_plus), sig12(d.u_minus), sig12(d.contraction_diag), d.low_confidence.to_string()]
            }),
        ),
    );
    let code = match report.assigned_class {
        TrichotomyClass::Undetermined => EXIT_INCONCLUSIVE,
        _ => EXIT_PASS,
    };
    run.report("classify.json", json!({"report": report}))?;
    Ok(code)
}

fn execute(cli: &Cli) -> CliResult<i32> {
    let mut cfg = match &cli.config {
        None => Config::default(),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
            Config::parse(&text)?
        }
    };
    for kv in &cli.set {
        cfg.set(kv)?;
    }
    let mut run = Run { cfg: &cfg, seed: cli.seed, command: cli.command, artifacts: Artifacts::default() };
    let code = match cli.command {
        Command::Pseudometric => cmd_pseudometric(&mut run),
        Command::FiberProfile => cmd_fiber_profile(&mut run),
        Command::BuildCoboundary => cmd_build_coboundary(&mut run),
        Command::VerifyCocycle => cmd_verify_cocycle(&mut run),
        Command::UeTest => cmd_ue_test(&mut run),
        Command::IsoTest => cmd_iso_test(&mut run),
        Command::Lyapunov => cmd_lyapunov(&mut run),
        Command::Classify => cmd_classify(&mut run),
    }?;
    run.artifacts.write(&cli.out)?;
    Ok(code)
}

/// Parses arguments, runs the command on a pool of `--workers` threads and
/// returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("numeric failure: cannot start workers: {e}");
            return EXIT_NUMERIC;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing_and_unknown_keys() {
        let c = Config::parse("# comment\nalpha = golden\n\nhorizon=1e4\n").unwrap();
        assert_eq!(c.string("alpha", "x"), "golden");
        assert_eq!(c.list::<usize>("horizon", "1").unwrap(), vec![10_000]);
        assert!(c.finish().is_ok());
        let c = Config::parse("bogus = 1\n").unwrap();
        match c.finish() {
            Err(CliError::Usage(m)) => assert!(m.contains("bogus")),
            other => panic!("{other:?}"),
        }
        assert!(Config::parse("a = 1\na = 2\n").is_err());
        assert!(Config::parse("no equals sign\n").is_err());
    }

    #[test]
    fn bad_values_name_the_key() {
        let mut c = Config::default();
        c.set("pairs=0").unwrap();
        match c.positive::<usize>("pairs", 100) {
            Err(CliError::Usage(m)) => assert!(m.contains("pairs")),
            other => panic!("{other:?}"),
        }
        c.set("eps=zero").unwrap();
        assert!(matches!(c.get::<f64>("eps", 0.1), Err(CliError::Usage(m)) if m.contains("eps")));
    }

    #[test]
    fn cocycle_specs() {
        assert_eq!(parse_cocycle_spec("identity").unwrap().space(), FiberSpace::Circle);
        assert!(parse_cocycle_spec("herman:2").unwrap().is_matrix_valued());
        assert_eq!(
            parse_cocycle_spec("mobius-diag:2").unwrap(),
            Cocycle::constant_matrix(Mat2::diag(2.0, 0.5))
        );
        assert!(parse_cocycle_spec("mobius-diag:-1").is_err());
        assert!(parse_cocycle_spec("herman:nan").is_err());
        assert!(parse_cocycle_spec("warp:1").is_err());
    }

    #[test]
    fn scientific_integers() {
        assert_eq!(parse_number::<u128>("1e6"), Some(1_000_000));
        assert_eq!(parse_number::<usize>("2.5"), None);
    }
}
