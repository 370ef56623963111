//! Command-line front end: `verify` runs check suites and writes a report,
//! `orbits` prints an orbit decomposition of a projective line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::ffield::{FieldTower, Level, TowerDescription};
use crate::grp::{self, SubgroupSpec};
use crate::projline;
use crate::verify::{self, Budgets, Context, RPolicy, CHECK_IDS};

pub const SCHEMA_VERSION: u64 = 1;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "gl2-restrict", version, about = "Restrictions of mod p representations from GL2(F_q) to GL2(F_p)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run verification checks and write a report.
    Verify(VerifyArgs),
    /// Decompose a projective line into orbits.
    Orbits(OrbitsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    All,
    Sample,
    Auto,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub f: u32,
    #[arg(long, value_enum, default_value = "auto")]
    pub r_policy: PolicyArg,
    /// Explicit values of r; overrides --r-policy.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub r: Vec<i64>,
    /// Comma-separated check ids, or "all".
    #[arg(long, default_value = "all")]
    pub checks: String,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = grp::DEFAULT_ENUM_BUDGET)]
    pub budget_enum: u64,
    #[arg(long, default_value_t = crate::brauer::DEFAULT_HOM_BUDGET)]
    pub budget_hom: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Run checks one at a time and zero the timings, for diffable reports.
    #[arg(long)]
    pub deterministic_order: bool,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OrbitsArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub f: u32,
    /// One of P1(p), P1(p2), P1(q), P1(q2).
    #[arg(long, default_value = "P1(q)")]
    pub space: String,
    /// G_p or G_q.
    #[arg(long, default_value = "G_p")]
    pub acting: String,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A validated `verify` invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub p: u32,
    pub f: u32,
    pub policy: RPolicy,
    pub checks: Vec<&'static str>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub budgets: Budgets,
    pub jobs: Option<usize>,
    pub deterministic: bool,
    pub cache_dir: Option<PathBuf>,
}

pub fn parse_checks(s: &str) -> Result<Vec<&'static str>> {
    if s.trim() == "all" {
        return Ok(CHECK_IDS.to_vec());
    }
    let mut out = Vec::new();
    for id in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let id = CHECK_IDS
            .iter()
            .find(|c| c.eq_ignore_ascii_case(id))
            .ok_or_else(|| Error::Config(format!("unknown check id {id}; known: {}", CHECK_IDS.join(","))))?;
        if !out.contains(id) {
            out.push(*id);
        }
    }
    if out.is_empty() {
        return Err(Error::Config("no checks selected".into()));
    }
    Ok(out)
}

impl RunConfig {
    pub fn from_args(a: &VerifyArgs) -> Result<Self> {
        if a.budget_enum == 0 || a.budget_hom == 0 {
            return Err(Error::Config("budgets must be positive".into()));
        }
        if a.jobs == Some(0) {
            return Err(Error::Config("--jobs must be positive".into()));
        }
        let policy = if a.r.is_empty() {
            match a.r_policy {
                PolicyArg::All => RPolicy::All,
                PolicyArg::Sample => RPolicy::Sample,
                PolicyArg::Auto => RPolicy::Auto,
            }
        } else {
            RPolicy::Explicit(a.r.clone())
        };
        Ok(RunConfig {
            p: a.p,
            f: a.f,
            policy,
            checks: parse_checks(&a.checks)?,
            format: a.format,
            out: a.out.clone(),
            seed: a.seed,
            budgets: Budgets {
                enumeration: a.budget_enum,
                hom: a.budget_hom,
            },
            jobs: a.jobs,
            deterministic: a.deterministic_order,
            cache_dir: a.cache_dir.clone(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Miss,
    Hit,
    Rebuilt,
}

fn cache_path(dir: &Path, p: u32, f: u32) -> PathBuf {
    dir.join(format!("tower-p{p}-f{f}.json"))
}

fn write_cache(path: &Path, desc: &TowerDescription) -> Result<()> {
    let s = serde_json::to_string_pretty(desc).map_err(|e| Error::Cache(e.to_string()))?;
    fs::write(path, s + "\n").map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
}

/// Builds the tower for `(p, f)` and keeps its description under `dir`. A
/// cached description that differs from the fresh construction is replaced.
pub fn cache_tower(dir: &Path, p: u32, f: u32) -> Result<(FieldTower, CacheStatus)> {
    let start = Instant::now();
    let tower = FieldTower::build(p, f)?;
    let fresh = tower.describe();
    fs::create_dir_all(dir).map_err(|e| Error::Cache(format!("{}: {e}", dir.display())))?;
    let path = cache_path(dir, p, f);
    let status = match fs::read_to_string(&path) {
        Err(_) => {
            log::info!("built tower ({p},{f}) in {:?}", start.elapsed());
            write_cache(&path, &fresh)?;
            CacheStatus::Miss
        }
        Ok(text) => match serde_json::from_str::<TowerDescription>(&text) {
            Ok(cached) if cached == fresh => CacheStatus::Hit,
            Ok(_) => {
                log::warn!("cached tower {} disagrees with a fresh build; rewriting", path.display());
                write_cache(&path, &fresh)?;
                CacheStatus::Rebuilt
            }
            Err(e) => {
                log::warn!("cached tower {} is unreadable ({e}); rewriting", path.display());
                write_cache(&path, &fresh)?;
                CacheStatus::Rebuilt
            }
        },
    };
    Ok((tower, status))
}

/// Runs the configured checks and assembles the report.
pub fn run(config: &RunConfig) -> Result<Value> {
    let tower = match &config.cache_dir {
        Some(dir) => cache_tower(dir, config.p, config.f)?.0,
        None => FieldTower::build(config.p, config.f)?,
    };
    let ctx = Context::from_tower(tower, config.budgets, config.seed)?;
    let tasks = verify::plan(&ctx, &config.checks, &config.policy);
    let reports = match config.jobs {
        Some(n) if !config.deterministic => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(|| verify::run_tasks(&ctx, &tasks, false))?,
        _ => verify::run_tasks(&ctx, &tasks, config.deterministic)?,
    };
    let summary = verify::summarize(&reports);
    let mut checks = serde_json::to_value(&reports).map_err(|e| Error::Internal(e.to_string()))?;
    if config.deterministic {
        for c in checks.as_array_mut().into_iter().flatten() {
            c["elapsed_ms"] = json!(0);
        }
    }
    Ok(json!({
        "schema": SCHEMA_VERSION,
        "p": config.p,
        "f": config.f,
        "tower": ctx.tower.describe(),
        "checks": checks,
        "summary": summary,
    }))
}

/// `0` when the report has no FAIL, `1` otherwise.
pub fn exit_code_for(report: &Value) -> i32 {
    match report["summary"]["fail"].as_u64() {
        Some(0) => EXIT_PASS,
        _ => EXIT_FAIL,
    }
}

pub fn parse_space(s: &str) -> Result<Level> {
    match s.replace(' ', "").as_str() {
        "P1(p)" | "p" => Ok(Level::Fp),
        "P1(p2)" | "p2" => Ok(Level::Fp2),
        "P1(q)" | "q" => Ok(Level::Fq),
        "P1(q2)" | "q2" => Ok(Level::Fq2),
        other => Err(Error::Config(format!("unknown space {other}; use P1(p), P1(p2), P1(q) or P1(q2)"))),
    }
}

pub fn parse_acting(s: &str) -> Result<SubgroupSpec> {
    match s.replace(' ', "").as_str() {
        "G_p" | "Gp" | "p" => Ok(SubgroupSpec::GP),
        "G_q" | "Gq" | "q" => Ok(SubgroupSpec::GQ),
        other => Err(Error::Config(format!("unknown acting group {other}; use G_p or G_q"))),
    }
}

pub fn orbits(p: u32, f: u32, acting: SubgroupSpec, space: Level) -> Result<Value> {
    let tower = FieldTower::build(p, f)?;
    let dec = projline::orbit_decomposition(&tower, acting, space)?;
    let mut v = dec.to_json(&tower);
    v["total"] = json!(dec.total());
    Ok(v)
}

fn is_key(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn flatten(path: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let p = if is_key(k) && !path.is_empty() {
                    format!("{path}.{k}")
                } else if is_key(k) {
                    k.clone()
                } else {
                    format!("{path}[{}]", Value::String(k.clone()))
                };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{path}[{i}]"), x, out);
            }
        }
        leaf => out.push(format!("{path}={leaf}")),
    }
}

/// One `path=value` line per leaf, with values as JSON. [`from_text`]
/// inverts it.
pub fn to_text(v: &Value) -> String {
    let mut lines = Vec::new();
    flatten("", v, &mut lines);
    lines.join("\n") + "\n"
}

#[derive(Debug, PartialEq)]
enum Seg {
    Key(String),
    Index(usize),
}

fn parse_path(s: &str) -> Option<(Vec<Seg>, &str)> {
    let mut segs = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    loop {
        match b.get(i)? {
            b'=' => return Some((segs, &s[i + 1..])),
            b'.' => i += 1,
            b'[' if b.get(i + 1) == Some(&b'"') => {
                let mut de = serde_json::Deserializer::from_str(&s[i + 1..]).into_iter::<String>();
                let key = de.next()?.ok()?;
                i += 1 + de.byte_offset();
                if b.get(i) != Some(&b']') {
                    return None;
                }
                i += 1;
                segs.push(Seg::Key(key));
            }
            b'[' => {
                let end = i + s[i..].find(']')?;
                segs.push(Seg::Index(s[i + 1..end].parse().ok()?));
                i = end + 1;
            }
            _ => {
                let end = i + s[i..].find(['.', '[', '='])?;
                segs.push(Seg::Key(s[i..end].to_string()));
                i = end;
            }
        }
    }
}

fn insert(root: &mut Value, segs: &[Seg], leaf: Value) -> Option<()> {
    let Some((first, rest)) = segs.split_first() else {
        *root = leaf;
        return Some(());
    };
    let slot = match first {
        Seg::Key(k) => {
            if root.is_null() {
                *root = Value::Object(Map::new());
            }
            root.as_object_mut()?.entry(k.clone()).or_insert(Value::Null)
        }
        Seg::Index(i) => {
            if root.is_null() {
                *root = Value::Array(Vec::new());
            }
            let a = root.as_array_mut()?;
            if *i >= a.len() {
                a.resize(i + 1, Value::Null);
            }
            &mut a[*i]
        }
    };
    insert(slot, rest, leaf)
}

/// Parses the output of [`to_text`] back into JSON.
pub fn from_text(text: &str) -> Result<Value> {
    let mut root = Value::Null;
    for line in text.lines().filter(|l| !l.is_empty()) {
        let bad = || Error::Config(format!("malformed report line: {line}"));
        let (segs, rest) = parse_path(line).ok_or_else(bad)?;
        let leaf: Value = serde_json::from_str(rest).map_err(|_| bad())?;
        insert(&mut root, &segs, leaf).ok_or_else(bad)?;
    }
    Ok(root)
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n",
        Format::Text => to_text(v),
    }
}

fn emit(text: &str, out: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Config(format!("{}: {e}", path.display()))),
        None => match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Internal(e.to_string())),
            _ => Ok(()),
        },
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) => EXIT_INTERNAL,
        Error::Cache(_) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Verify(a) => {
            let config = RunConfig::from_args(&a)?;
            let report = run(&config)?;
            emit(&render(&report, config.format), &config.out, stdout)?;
            Ok(exit_code_for(&report))
        }
        Command::Orbits(a) => {
            let v = orbits(a.p, a.f, parse_acting(&a.acting)?, parse_space(&a.space)?)?;
            emit(&render(&v, a.format), &a.out, stdout)?;
            Ok(EXIT_PASS)
        }
    }
}

/// Parses `args` (including the program name), runs the command, and returns
/// the exit code. Diagnostics go to `stderr`.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
        }
    };
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| dispatch(cli, stdout)));
    match outcome {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            error_code(&e)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            let _ = writeln!(stderr, "internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trips() {
        let v = json!({
            "a": [1, {"b": "x=y", "weird key": [[], {}]}],
            "c": null,
            "d": {"e.f": [true, 2.5]},
            "s": "[1,2]",
        });
        let t = to_text(&v);
        assert_eq!(from_text(&t).unwrap(), v);
        assert!(t.contains("a[1].b=\"x=y\"\n"));
    }

    #[test]
    fn check_ids_parse() {
        assert_eq!(parse_checks("all").unwrap().len(), CHECK_IDS.len());
        assert_eq!(parse_checks("l1, T1.2,L1").unwrap(), vec!["L1", "T1.2"]);
        assert!(matches!(parse_checks("X9"), Err(Error::Config(_))));
    }

    #[test]
    fn spaces_and_groups_parse() {
        assert_eq!(parse_space("P1(q2)").unwrap(), Level::Fq2);
        assert_eq!(parse_acting("G_q").unwrap(), SubgroupSpec::GQ);
        assert!(parse_space("P2(q)").is_err());
    }

    #[test]
    fn cache_detects_tampering() {
        let dir = tempfile::tempdir().unwrap();
        let (_, s) = cache_tower(dir.path(), 3, 2).unwrap();
        assert_eq!(s, CacheStatus::Miss);
        let first = fs::read_to_string(cache_path(dir.path(), 3, 2)).unwrap();
        let (_, s) = cache_tower(dir.path(), 3, 2).unwrap();
        assert_eq!(s, CacheStatus::Hit);
        assert_eq!(fs::read_to_string(cache_path(dir.path(), 3, 2)).unwrap(), first);

        let mut desc: TowerDescription = serde_json::from_str(&first).unwrap();
        desc.polys.get_mut(&2).unwrap()[0] += 1;
        write_cache(&cache_path(dir.path(), 3, 2), &desc).unwrap();
        let (_, s) = cache_tower(dir.path(), 3, 2).unwrap();
        assert_eq!(s, CacheStatus::Rebuilt);
        assert_eq!(fs::read_to_string(cache_path(dir.path(), 3, 2)).unwrap(), first);

        fs::write(cache_path(dir.path(), 3, 2), "{not json").unwrap();
        assert_eq!(cache_tower(dir.path(), 3, 2).unwrap().1, CacheStatus::Rebuilt);
    }
}
