//! The `fuzzint` command line.
//!
//! Exit codes: 0 when the verdict holds (or evaluation succeeds), 2 when a
//! violation is found or `repro` disagrees with the reference values, 1 for
//! usage and input errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as JsonValue};

use crate::capacity::{validate_capacity, FiniteSpace, RawCapacity, SimpleFunction, Subset};
use crate::error::{Error, Result};
use crate::integral::{eval_integral, eval_integral_grid, IntegralResult};
use crate::laws::{Bindings, Checker, LawId};
use crate::report::{CheckReport, Witness};
use crate::scalar::{Realization, Tolerance, Value};
use crate::schema;
use crate::search::{search, SearchMode, SearchSpec};
use crate::semicopula::{audit_axioms_with, BinaryOp, Semicopula};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "FUZZINT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "fuzzint", version, about = "Seminormed fuzzy integrals on finite spaces")]
pub struct Cli {
    /// Number realization for inputs and arithmetic.
    #[arg(long, global = true, value_enum, default_value_t = RealizationArg::Exact)]
    pub realization: RealizationArg,

    /// Comparison tolerance, used in float realization only.
    #[arg(long, global = true, default_value_t = Tolerance::DEFAULT.0)]
    pub tolerance: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RealizationArg {
    Exact,
    Float,
}

impl From<RealizationArg> for Realization {
    fn from(r: RealizationArg) -> Self {
        match r {
            RealizationArg::Exact => Realization::Exact,
            RealizationArg::Float => Realization::Float,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate I_S(μ, f).
    Eval(EvalArgs),
    /// Audit the semicopula axioms of a binary operator on a grid.
    Axioms(AxiomsArgs),
    /// Check a law on a grid, on random instances, or on one instance file.
    Check(CheckArgs),
    /// Search a rational grid for a counterexample.
    Search(SearchArgs),
    /// Recompute the worked Shilkret counterexample to ∧-commuting.
    Repro(ReproArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub semicopula: String,
    #[arg(long)]
    pub capacity: PathBuf,
    #[arg(long)]
    pub function: PathBuf,
    /// Integrate f·1_A instead of f; A given as comma-separated labels.
    #[arg(long)]
    pub restrict: Option<String>,
    /// Use the grid oracle with this step instead of the exact evaluator.
    #[arg(long)]
    pub grid_step: Option<String>,
}

#[derive(Debug, Args)]
pub struct AxiomsArgs {
    /// meet, join, mean, a semicopula name, or co:<name>.
    #[arg(long)]
    pub op: String,
    #[arg(long, default_value = "1/100")]
    pub grid_step: String,
}

#[derive(Debug, Args)]
pub struct OperatorArgs {
    #[arg(long, default_value = "min")]
    pub semicopula: String,
    /// Second semicopula of the three-operator laws (defaults to --semicopula).
    #[arg(long)]
    pub s2: Option<String>,
    /// Third semicopula of the three-operator laws (defaults to --semicopula).
    #[arg(long)]
    pub s3: Option<String>,
    /// Binary operator for `commuting` and `idempotency`.
    #[arg(long)]
    pub op: Option<String>,
}

impl OperatorArgs {
    fn bindings(&self) -> Result<Bindings> {
        let s = Semicopula::from_name(&self.semicopula)?;
        let mut b = Bindings::new(s);
        if let Some(n) = &self.s2 {
            b.s2 = Some(Semicopula::from_name(n)?);
        }
        if let Some(n) = &self.s3 {
            b.s3 = Some(Semicopula::from_name(n)?);
        }
        if let Some(n) = &self.op {
            b.op = Some(BinaryOp::from_name(n)?);
        }
        Ok(b)
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// shift, three, weak-subadd, restricted-subadd, cor-a, cor-b, cor-c,
    /// luka-dom, maxitivity, commuting or idempotency.
    pub law: String,
    #[command(flatten)]
    pub ops: OperatorArgs,
    /// Grid step for pointwise laws.
    #[arg(long, default_value = "1/100")]
    pub grid_step: String,
    /// Number of random instances for integral-level laws.
    #[arg(long, default_value_t = 1000)]
    pub cases: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest space size drawn by the random suite.
    #[arg(long, default_value_t = 6)]
    pub max_points: usize,
    /// Check this instance (or the witness of a saved report) instead of
    /// random ones.
    #[arg(long)]
    pub instance: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub law: String,
    #[command(flatten)]
    pub ops: OperatorArgs,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub denominator: u32,
    #[arg(long, default_value_t = 100_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct ReproArgs {
    /// μ({b}); it does not enter any attaining term.
    #[arg(long, default_value = "3/10")]
    pub beta: String,
}

/// Validated global settings plus the subcommand to run.
#[derive(Debug)]
pub struct RunConfig {
    pub realization: Realization,
    pub tolerance: Tolerance,
    pub format: Format,
    pub command: Command,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        if !(cli.tolerance.is_finite() && cli.tolerance > 0.0) {
            return Err(Error::Domain(format!(
                "tolerance must be positive, got {}",
                cli.tolerance
            )));
        }
        Ok(RunConfig {
            realization: cli.realization.into(),
            tolerance: Tolerance(cli.tolerance),
            format: cli.format,
            command: cli.command,
        })
    }

    fn checker(&self) -> Checker {
        match self.realization {
            Realization::Exact => Checker::new(Tolerance(0.0)),
            Realization::Float => Checker::new(self.tolerance),
        }
    }

    fn value(&self, s: &str) -> Result<Value> {
        Value::parse(s, self.realization)
    }

    fn require_exact(&self, what: &str) -> Result<()> {
        match self.realization {
            Realization::Exact => Ok(()),
            Realization::Float => Err(Error::Domain(format!("{what} runs in exact realization only"))),
        }
    }
}

/// What a subcommand produced: the rendered report and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::schema(path.display().to_string(), e.to_string()))
}

fn verdict_code(report: &CheckReport) -> i32 {
    if report.holds_on_sample() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

fn emit_report(report: &CheckReport, cfg: &RunConfig) -> String {
    match cfg.format {
        Format::Json => schema::to_text(&schema::report_json(report, cfg.realization)),
        Format::Text => report_text(report),
    }
}

fn witness_text(w: &Witness, out: &mut String) {
    if !w.inputs.is_empty() {
        let inputs: Vec<String> = w.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "witness: {}", inputs.join(", "));
    }
    if let Some(s) = &w.sides {
        let _ = writeln!(out, "lhs: {}\nrhs: {}", s.lhs, s.rhs);
    }
    let _ = writeln!(out, "detail: {}", w.detail);
    if let Some(inst) = &w.instance {
        let _ = writeln!(out, "instance: {}", schema::instance_json(inst));
    }
}

/// One `key: value` line per field.
pub fn report_text(report: &CheckReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "law: {}", report.law_id);
    let _ = writeln!(out, "verdict: {}", report.verdict);
    let _ = writeln!(out, "sample: {}", report.sample_description);
    let _ = writeln!(out, "cases checked: {}", report.cases_checked);
    if !report.complete {
        out.push_str("budget exhausted before the family was covered\n");
    }
    if let Some(w) = &report.witness {
        witness_text(w, &mut out);
    }
    out
}

fn run_eval(a: &EvalArgs, cfg: &RunConfig) -> Result<Outcome> {
    let s = Semicopula::from_name(&a.semicopula)?;
    let mu = schema::parse_capacity(&read(&a.capacity)?, cfg.realization)?;
    let mut f = schema::parse_function(&read(&a.function)?, mu.space(), cfg.realization)?;
    if let Some(key) = &a.restrict {
        let set = mu
            .space()
            .parse_subset(key)
            .map_err(|e| Error::schema("--restrict", e.to_string()))?;
        f = f.restrict(set);
    }
    let r = match &a.grid_step {
        Some(step) => eval_integral_grid(&s, &mu, &f, &cfg.value(step)?)?,
        None => eval_integral(&s, &mu, &f)?,
    };
    let output = match cfg.format {
        Format::Json => schema::to_text(&schema::integral_result_json(&r)),
        Format::Text => format!(
            "{} (argmax t = {}, {})\n",
            r.value,
            r.argmax_threshold,
            r.method.as_str()
        ),
    };
    Ok(Outcome { output, code: EXIT_OK })
}

fn run_axioms(a: &AxiomsArgs, cfg: &RunConfig) -> Result<Outcome> {
    let op = BinaryOp::from_name(&a.op)?;
    let report = audit_axioms_with(&op, &cfg.value(&a.grid_step)?, cfg.checker().tol)?;
    Ok(Outcome {
        output: emit_report(&report, cfg),
        code: verdict_code(&report),
    })
}

fn run_check(a: &CheckArgs, cfg: &RunConfig) -> Result<Outcome> {
    let law: LawId = a.law.parse()?;
    let b = a.ops.bindings()?;
    let checker = cfg.checker();
    let report = if law.is_pointwise() {
        checker.check_pointwise(law, &b, &cfg.value(&a.grid_step)?)?
    } else if let Some(path) = &a.instance {
        let inst = schema::parse_replay_instance(&read(path)?, cfg.realization)?;
        checker.check_instance(law, &b, &inst)?
    } else {
        cfg.require_exact("the random suite")?;
        checker.run_random_suite(law, &b, a.cases, a.seed, a.max_points)?
    };
    Ok(Outcome {
        output: emit_report(&report, cfg),
        code: verdict_code(&report),
    })
}

fn run_search(a: &SearchArgs, cfg: &RunConfig) -> Result<Outcome> {
    cfg.require_exact("search")?;
    let spec = SearchSpec {
        law: a.law.parse()?,
        bindings: a.ops.bindings()?,
        n: a.n,
        denominator: a.denominator,
        budget: a.budget,
        seed: a.seed,
        mode: match a.mode {
            ModeArg::Auto => SearchMode::Auto,
            ModeArg::Exhaustive => SearchMode::Exhaustive,
            ModeArg::Sampled => SearchMode::Sampled,
        },
    };
    let report = search(&spec)?;
    Ok(Outcome {
        output: emit_report(&report, cfg),
        code: verdict_code(&report),
    })
}

/// One recomputed quantity of the worked example.
#[derive(Debug, Clone, PartialEq)]
pub struct ReproLine {
    pub name: &'static str,
    pub expected: Value,
    pub actual: Value,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproReport {
    pub beta: Value,
    pub lines: Vec<ReproLine>,
    /// `I(f ∧ g) < I(f) ∧ I(g)`
    pub strict_failure: bool,
}

impl ReproReport {
    pub fn passed(&self) -> bool {
        self.strict_failure && self.lines.iter().all(|l| l.ok)
    }

    pub fn to_json(&self) -> JsonValue {
        let lines: Vec<JsonValue> = self
            .lines
            .iter()
            .map(|l| {
                json!({
                    "name": l.name,
                    "expected": l.expected.render(),
                    "actual": l.actual.render(),
                    "ok": l.ok,
                })
            })
            .collect();
        json!({
            "beta": self.beta.render(),
            "checks": lines,
            "strict_failure": self.strict_failure,
            "passed": self.passed(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("mu({{b}}) = {}\n", self.beta);
        for l in &self.lines {
            let mark = if l.ok { "ok" } else { "MISMATCH" };
            let _ = writeln!(
                out,
                "{:<14} expected {:<5} got {:<5} {mark}",
                l.name, l.expected, l.actual
            );
        }
        let _ = writeln!(
            out,
            "I(f∧g) < I(f) ∧ I(g): {}",
            if self.strict_failure { "yes" } else { "NO" }
        );
        out.push_str(if self.passed() { "passed\n" } else { "FAILED\n" });
        out
    }
}

/// Shilkret integral (S = Π) on X = {a, b} with μ({a}) = 1/2, μ({b}) = β,
/// f = (1, 2/5), g = (4/5, 3/5). Expects I(f) = 1/2, I(g) = 3/5,
/// I(f ∧ g) = 2/5, so that I(f ∧ g) < I(f) ∧ I(g).
pub fn run_repro(beta: &Value, tol: Tolerance) -> Result<ReproReport> {
    let r = beta.realization();
    let v = |s: &str| Value::parse(s, r);
    let space = FiniteSpace::new(["a", "b"])?;
    let mu = validate_capacity(
        RawCapacity::new(space.clone())
            .set(Subset(1), v("1/2")?)
            .set(Subset(2), beta.clone())
            .set(space.full(), Value::one(r)),
    )?;
    let f = SimpleFunction::new(space.clone(), vec![v("1")?, v("2/5")?])?;
    let g = SimpleFunction::new(space, vec![v("4/5")?, v("3/5")?])?;
    let pi = Semicopula::product();
    let i = |h: &SimpleFunction| -> Result<IntegralResult> { eval_integral(&pi, &mu, h) };
    let (i_f, i_g, i_fg) = (i(&f)?.value, i(&g)?.value, i(&f.meet(&g)?)?.value);
    let mut lines = Vec::new();
    for (name, expected, actual) in [("I(f)", "1/2", &i_f), ("I(g)", "3/5", &i_g), ("I(f∧g)", "2/5", &i_fg)] {
        let expected = v(expected)?;
        lines.push(ReproLine {
            name,
            ok: actual.eq_tol(&expected, tol)?,
            expected,
            actual: actual.clone(),
        });
    }
    let bound = i_f.meet(&i_g)?;
    let strict_failure = i_fg.le_tol(&bound, tol)? && !i_fg.eq_tol(&bound, tol)?;
    Ok(ReproReport {
        beta: beta.clone(),
        lines,
        strict_failure,
    })
}

fn run_repro_cmd(a: &ReproArgs, cfg: &RunConfig) -> Result<Outcome> {
    let tol = cfg.checker().tol;
    let report = run_repro(&cfg.value(&a.beta)?, tol)?;
    let output = match cfg.format {
        Format::Json => schema::to_text(&report.to_json()),
        Format::Text => report.to_text(),
    };
    Ok(Outcome {
        output,
        code: if report.passed() { EXIT_OK } else { EXIT_VIOLATION },
    })
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match &cfg.command {
        Command::Eval(a) => run_eval(a, cfg),
        Command::Axioms(a) => run_axioms(a, cfg),
        Command::Check(a) => run_check(a, cfg),
        Command::Search(a) => run_search(a, cfg),
        Command::Repro(a) => run_repro_cmd(a, cfg),
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Domain(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // a pool may already exist when called twice in one process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses arguments, runs the subcommand and prints its output. Returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = configure_threads()
        .and_then(|_| RunConfig::from_cli(cli))
        .and_then(|cfg| run(&cfg));
    match result {
        Ok(out) => {
            print!("{}", out.output);
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}
