//! Command-line driver: one analysis per invocation, reported as JSON.
//!
//! Exit codes: 0 for a definitive verdict, 1 for an inconclusive one, 2 for
//! usage and evaluation errors.

mod json;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bloch::{compare_norms, little_bloch_check, DiskFunction};
use crate::curve::{geometric_grid, SampledCurve};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::halfnorm::{is_in_small_space_with, weighted_norm_with, Membership, NormOptions, NormStatus, TailOptions};
use crate::linemax::{affine_minorant_of_curve, check_log_convexity, curve_from_lines, mf_lines, LineMaxOptions};
use crate::theorems::{
    theorem3_check_with, verify_f_properties_with, witness_big, witness_small_form, FPropertyOptions,
    Theorem3Options, WitnessForm,
};
use crate::weights::{classify_weight, neglog_curve, ClassificationVerdict, MinorantOptions, Weight};

pub use json::{marked_f64, to_marked_value};

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Parser)]
#[command(name = "hpw", version, about = "Weighted sup-norm spaces on the upper half plane")]
pub struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for curve CSV files.
    #[arg(long, global = true)]
    curves: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether the big and small spaces of a weight are trivial.
    ClassifyWeight(ClassifyArgs),
    /// Weighted sup-norm of f.
    Norm(NormArgs),
    /// Line maxima ln Mf(t) and their convexity.
    Mline(MlineArgs),
    /// Is f in the small space of p?
    Membership(MembershipArgs),
    /// Check ln Mf(t) - a t → -inf for a member f.
    Theorem3(Theorem3Args),
    /// Check the six properties of F(z) = e^{iaz} f(z).
    FProperties(Theorem3Args),
    /// Compare disk Bloch norms with the half-plane weighted norms.
    BlochCompare(BlochArgs),
    /// Print witness functions for a weight.
    Witness(WitnessArgs),
}

#[derive(Debug, Args)]
struct WeightArg {
    /// Weight p(t), an expression in t.
    #[arg(long)]
    p: String,
}

#[derive(Debug, Args)]
struct LineArgs {
    #[arg(long, default_value_t = 2f64.powi(30))]
    x_cap: f64,
    #[arg(long, default_value_t = 1025)]
    line_points: usize,
}

impl LineArgs {
    fn options(&self) -> Result<LineMaxOptions> {
        positive("x-cap", self.x_cap)?;
        at_least_three("line-points", self.line_points)?;
        Ok(LineMaxOptions {
            x_cap: self.x_cap,
            points: self.line_points | 1,
            ..LineMaxOptions::default()
        })
    }
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[command(flatten)]
    weight: WeightArg,
    #[arg(long, default_value_t = 10.0)]
    tail_drop: f64,
    #[arg(long, default_value_t = 50.0)]
    head_drop: f64,
    #[arg(long, default_value_t = 0.01)]
    slope_backoff: f64,
}

#[derive(Debug, Args)]
struct NormArgs {
    /// f(z), an expression in z.
    #[arg(long)]
    f: String,
    #[command(flatten)]
    weight: WeightArg,
    #[arg(long, default_value_t = -20, allow_hyphen_values = true)]
    y_lo_exp: i32,
    #[arg(long, default_value_t = 20)]
    y_hi_exp: i32,
    #[command(flatten)]
    line: LineArgs,
}

#[derive(Debug, Args)]
struct MlineArgs {
    #[arg(long)]
    f: String,
    #[arg(long, default_value_t = 1.0 / 16.0)]
    t_min: f64,
    #[arg(long, default_value_t = 16.0)]
    t_max: f64,
    #[arg(long, default_value_t = 64)]
    points: usize,
    #[arg(long, default_value_t = crate::linemax::DEFAULT_CONVEXITY_TOL)]
    tol_convexity: f64,
    #[command(flatten)]
    line: LineArgs,
}

#[derive(Debug, Args)]
struct MembershipArgs {
    #[arg(long)]
    f: String,
    #[command(flatten)]
    weight: WeightArg,
    /// Largest box is K_c with c = 2^c_max_exp.
    #[arg(long, default_value_t = 24)]
    c_max_exp: i32,
    #[command(flatten)]
    line: LineArgs,
}

#[derive(Debug, Args)]
struct Theorem3Args {
    #[arg(long)]
    f: String,
    #[command(flatten)]
    weight: WeightArg,
    #[arg(long, default_value_t = 1024.0)]
    t_max: f64,
    #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
    d_floor: f64,
    #[arg(long, default_value_t = crate::linemax::DEFAULT_CONVEXITY_TOL)]
    tol_convexity: f64,
    #[command(flatten)]
    line: LineArgs,
}

#[derive(Debug, Args)]
struct BlochArgs {
    /// Disk function f(w).
    #[arg(long, conflicts_with = "f_prime", required_unless_present = "f_prime")]
    f: Option<String>,
    /// Its derivative f'(w), when f itself has no closed form.
    #[arg(long)]
    f_prime: Option<String>,
    /// Skip the little-Bloch assessment.
    #[arg(long)]
    no_little: bool,
}

#[derive(Debug, Args)]
struct WitnessArgs {
    #[command(flatten)]
    weight: WeightArg,
    /// Use e^{i(a+1)z}/(z+i) for the small-space witness.
    #[arg(long)]
    literal_witness: bool,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    /// The JSON report, absent on usage errors.
    pub report: Option<Value>,
    /// Text meant for stderr (or stdout for `--help`).
    pub message: Option<String>,
}

struct Analysis {
    inputs: Value,
    result: Value,
    code: i32,
    curves: Vec<SampledCurve>,
    warnings: Vec<String>,
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Invalid(format!("--{} must be positive and finite, got {}", name, x)))
    }
}

fn at_least_three(name: &str, n: usize) -> Result<()> {
    if n >= 3 {
        Ok(())
    } else {
        Err(Error::Invalid(format!("--{} must be at least 3, got {}", name, n)))
    }
}

fn value<T: Serialize>(x: &T) -> Value {
    to_marked_value(x).expect("report types serialize")
}

fn verdict_code(v: &ClassificationVerdict) -> i32 {
    match v {
        ClassificationVerdict::Inconclusive { .. } => 1,
        _ => 0,
    }
}

fn membership_code(m: Membership) -> i32 {
    match m {
        Membership::Inconclusive => 1,
        _ => 0,
    }
}

fn classify(args: &ClassifyArgs) -> Result<Analysis> {
    positive("tail-drop", args.tail_drop)?;
    positive("head-drop", args.head_drop)?;
    positive("slope-backoff", args.slope_backoff)?;
    let w = Weight::parse(&args.weight.p)?;
    let opts = MinorantOptions {
        tail_drop: args.tail_drop,
        head_drop: args.head_drop,
        slope_backoff: args.slope_backoff,
        ..MinorantOptions::default()
    };
    let c = classify_weight(&w, &opts)?;
    let witness = |v: &ClassificationVerdict, small: bool| {
        v.witness().map(|a| {
            if small {
                witness_small_form(a.a, WitnessForm::Corrected).to_string()
            } else {
                witness_big(a.a, a.b).to_string()
            }
        })
    };
    let mut result = value(&c);
    result["big_space"]["witness_function"] = json!(witness(&c.big_space, false));
    result["small_space"]["witness_function"] = json!(witness(&c.small_space, true));
    Ok(Analysis {
        inputs: json!({"p": args.weight.p, "options": value(&opts)}),
        result,
        code: verdict_code(&c.big_space).max(verdict_code(&c.small_space)),
        curves: vec![neglog_curve(&w)],
        warnings: vec![],
    })
}

fn norm(args: &NormArgs) -> Result<Analysis> {
    if args.y_hi_exp <= args.y_lo_exp {
        return Err(Error::Invalid("--y-hi-exp must exceed --y-lo-exp".into()));
    }
    let f = Expr::parse(&args.f, "z")?;
    let w = Weight::parse(&args.weight.p)?;
    let opts = NormOptions {
        y_lo_exp: args.y_lo_exp,
        y_hi_exp: args.y_hi_exp,
        line: args.line.options()?,
        ..NormOptions::default()
    };
    let n = weighted_norm_with(&f, &w, &opts)?;
    let mut warnings = vec![];
    if n.status == NormStatus::ApproachedAtBoundary {
        warnings.push("supremum approached at the edge of the y-grid; value is a lower bound".into());
    }
    Ok(Analysis {
        inputs: json!({"f": args.f, "p": args.weight.p, "options": value(&opts)}),
        result: value(&n),
        code: if n.status == NormStatus::Truncated { 1 } else { 0 },
        curves: vec![],
        warnings,
    })
}

fn mline(args: &MlineArgs) -> Result<Analysis> {
    positive("t-min", args.t_min)?;
    positive("tol-convexity", args.tol_convexity)?;
    at_least_three("points", args.points)?;
    if args.t_max <= args.t_min {
        return Err(Error::Invalid("--t-max must exceed --t-min".into()));
    }
    let f = Expr::parse(&args.f, "z")?;
    let opts = args.line.options()?;
    let grid = geometric_grid(args.t_min, args.t_max, args.points);
    let lines = mf_lines(&f, &grid, &opts)?;
    let curve = curve_from_lines(&lines, "ln Mf")?;
    let conv = check_log_convexity(&curve, args.tol_convexity);
    let minorant = affine_minorant_of_curve(&curve).ok();
    let mut warnings = vec![];
    let capped = lines.iter().filter(|l| l.status != crate::linemax::LineStatus::Converged).count();
    if capped > 0 {
        warnings.push(format!("{} line(s) did not decay below the threshold before x_cap", capped));
    }
    Ok(Analysis {
        inputs: json!({"f": args.f, "t_min": args.t_min, "t_max": args.t_max, "points": args.points,
            "tol_convexity": args.tol_convexity, "options": value(&opts)}),
        result: json!({"lines": value(&lines), "convexity": value(&conv), "affine_minorant": value(&minorant)}),
        code: if conv.pass { 0 } else { 1 },
        curves: vec![curve],
        warnings,
    })
}

fn membership(args: &MembershipArgs) -> Result<Analysis> {
    if args.c_max_exp < 2 {
        return Err(Error::Invalid("--c-max-exp must be at least 2".into()));
    }
    let f = Expr::parse(&args.f, "z")?;
    let w = Weight::parse(&args.weight.p)?;
    let opts = TailOptions {
        line: args.line.options()?,
        ..TailOptions::default()
    };
    let schedule: Vec<f64> = (1..=args.c_max_exp).map(|k| 2f64.powi(k)).collect();
    let m = is_in_small_space_with(&f, &w, &schedule, &opts)?;
    let sups = SampledCurve::new(
        m.table.iter().map(|r| r.c).collect(),
        m.table.iter().map(|r| r.sup).collect(),
        "tail sup",
    )?;
    Ok(Analysis {
        inputs: json!({"f": args.f, "p": args.weight.p, "schedule": schedule, "options": value(&opts)}),
        result: value(&m),
        code: membership_code(m.in_small_space),
        curves: vec![sups],
        warnings: vec![],
    })
}

fn theorem3_options(args: &Theorem3Args, warnings: &mut Vec<String>) -> Result<Theorem3Options> {
    positive("t-max", args.t_max)?;
    if !args.d_floor.is_finite() || args.d_floor >= 0.0 {
        return Err(Error::Invalid("--d-floor must be negative".into()));
    }
    let exp = args.t_max.log2().round() as i32;
    if 2f64.powi(exp) != args.t_max {
        warnings.push(format!("--t-max rounded to the power of two 2^{}", exp));
    }
    let defaults = Theorem3Options::default();
    if exp < defaults.t_min_exp + 2 {
        return Err(Error::Invalid("--t-max must be at least 1".into()));
    }
    Ok(Theorem3Options {
        t_max_exp: exp,
        d_floor: args.d_floor,
        line: args.line.options()?,
        tail: TailOptions {
            line: args.line.options()?,
            ..TailOptions::default()
        },
        ..defaults
    })
}

fn not_met(inputs: Value, reason: String, warnings: Vec<String>) -> Analysis {
    Analysis {
        inputs,
        result: json!({"status": "hypothesis-not-met", "reason": reason}),
        code: 0,
        curves: vec![],
        warnings,
    }
}

fn theorem3(args: &Theorem3Args) -> Result<Analysis> {
    let mut warnings = vec![];
    let opts = theorem3_options(args, &mut warnings)?;
    let f = Expr::parse(&args.f, "z")?;
    let w = Weight::parse(&args.weight.p)?;
    let inputs = json!({"f": args.f, "p": args.weight.p, "t_max": 2f64.powi(opts.t_max_exp),
        "d_floor": args.d_floor, "options": value(&opts)});
    match theorem3_check_with(&f, &w, &opts) {
        Ok(r) => {
            let mut result = value(&r);
            result["status"] = json!("checked");
            Ok(Analysis {
                inputs,
                result,
                code: if r.diverges_to_minus_inf && r.hypothesis_met { 0 } else { 1 },
                curves: vec![r.ln_mf.clone(), r.d_curve.clone()],
                warnings,
            })
        }
        Err(Error::HypothesisNotMet(reason)) => Ok(not_met(inputs, reason, warnings)),
        Err(e) => Err(e),
    }
}

fn f_properties(args: &Theorem3Args) -> Result<Analysis> {
    let mut warnings = vec![];
    let opts = theorem3_options(args, &mut warnings)?;
    positive("tol-convexity", args.tol_convexity)?;
    let props = FPropertyOptions {
        convexity_tol: args.tol_convexity,
        ..FPropertyOptions::default()
    };
    let f = Expr::parse(&args.f, "z")?;
    let w = Weight::parse(&args.weight.p)?;
    let inputs = json!({"f": args.f, "p": args.weight.p, "t_max": 2f64.powi(opts.t_max_exp),
        "options": value(&opts), "checks": value(&props)});
    match verify_f_properties_with(&f, &w, &opts, &props) {
        Ok(r) => {
            let mut result = value(&r);
            result["status"] = json!("checked");
            Ok(Analysis {
                inputs,
                result,
                code: if r.all_pass { 0 } else { 1 },
                curves: vec![],
                warnings,
            })
        }
        Err(Error::HypothesisNotMet(reason)) => Ok(not_met(inputs, reason, warnings)),
        Err(e) => Err(e),
    }
}

fn bloch(args: &BlochArgs) -> Result<Analysis> {
    let df = match (&args.f, &args.f_prime) {
        (Some(f), _) => DiskFunction::parse(f)?,
        (None, Some(d)) => DiskFunction::from_derivative(Expr::parse(d, "w")?)?,
        (None, None) => return Err(Error::Invalid("one of --f, --f-prime is required".into())),
    };
    let cmp = compare_norms(&df)?;
    let mut code = if cmp.pass { 0 } else { 1 };
    let little = if args.no_little {
        None
    } else {
        let l = little_bloch_check(&df)?;
        if !l.agree || l.disk_verdict == Membership::Inconclusive {
            code = 1;
        }
        Some(l)
    };
    Ok(Analysis {
        inputs: json!({"f": args.f, "f_prime": args.f_prime, "no_little": args.no_little}),
        result: json!({"derivative": df.derivative().to_string(), "comparison": value(&cmp), "little_bloch": value(&little)}),
        code,
        curves: vec![],
        warnings: vec![],
    })
}

fn witness(args: &WitnessArgs) -> Result<Analysis> {
    let w = Weight::parse(&args.weight.p)?;
    let c = classify_weight(&w, &MinorantOptions::default())?;
    let form = if args.literal_witness {
        WitnessForm::Literal
    } else {
        WitnessForm::Corrected
    };
    let big = c.big_space.witness().map(|a| witness_big(a.a, a.b).to_string());
    let small = c.small_space.witness().map(|a| witness_small_form(a.a, form).to_string());
    let mut warnings = vec![];
    if args.literal_witness {
        warnings.push("literal small-space witness e^{i(a+1)z}/(z+i) is not a member for a <= -1/2".into());
    }
    Ok(Analysis {
        inputs: json!({"p": args.weight.p, "literal_witness": args.literal_witness}),
        result: json!({
            "big_space": {"verdict": c.big_space.name(), "affine_witness": value(&c.big_space.witness()), "function": big},
            "small_space": {"verdict": c.small_space.name(), "form": value(&form), "function": small},
        }),
        code: verdict_code(&c.big_space).max(verdict_code(&c.small_space)),
        curves: vec![],
        warnings,
    })
}

fn name_of(cmd: &Command) -> &'static str {
    match cmd {
        Command::ClassifyWeight(_) => "classify-weight",
        Command::Norm(_) => "norm",
        Command::Mline(_) => "mline",
        Command::Membership(_) => "membership",
        Command::Theorem3(_) => "theorem3",
        Command::FProperties(_) => "f-properties",
        Command::BlochCompare(_) => "bloch-compare",
        Command::Witness(_) => "witness",
    }
}

fn execute(cmd: &Command) -> Result<Analysis> {
    match cmd {
        Command::ClassifyWeight(a) => classify(a),
        Command::Norm(a) => norm(a),
        Command::Mline(a) => mline(a),
        Command::Membership(a) => membership(a),
        Command::Theorem3(a) => theorem3(a),
        Command::FProperties(a) => f_properties(a),
        Command::BlochCompare(a) => bloch(a),
        Command::Witness(a) => witness(a),
    }
}

fn file_name(label: &str) -> String {
    let s: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
        .collect();
    let s = s.trim_matches('_').to_string();
    let mut out = String::new();
    for c in s.chars() {
        if !(c == '_' && out.ends_with('_')) {
            out.push(c);
        }
    }
    format!("{}.csv", out)
}

fn write_curves(dir: &Path, prefix: &str, curves: &[SampledCurve]) -> std::io::Result<Vec<Value>> {
    fs::create_dir_all(dir)?;
    curves
        .iter()
        .map(|c| {
            let path = dir.join(format!("{}-{}", prefix, file_name(c.label())));
            c.write_csv(fs::File::create(&path)?)?;
            Ok(json!({"label": c.label(), "path": path.to_string_lossy()}))
        })
        .collect()
}

fn threads() -> usize {
    std::env::var("HPW_THREADS")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(0)
}

fn error_outcome(code: i32, msg: String) -> Outcome {
    Outcome {
        code,
        report: None,
        message: Some(msg),
    }
}

/// Parse `argv` (including the program name) and run one analysis.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return error_outcome(code, e.render().to_string());
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads()).build() {
        Ok(p) => p,
        Err(e) => return error_outcome(2, format!("cannot start worker pool: {}", e)),
    };
    let started = Instant::now();
    let analysis = match pool.install(|| execute(&cli.command)) {
        Ok(a) => a,
        Err(e) => return error_outcome(2, format!("error: {}", e)),
    };
    let elapsed = started.elapsed().as_secs_f64();
    let subcommand = name_of(&cli.command);

    let curves = match &cli.curves {
        Some(dir) => match write_curves(dir, subcommand, &analysis.curves) {
            Ok(v) => Value::Array(v),
            Err(e) => return error_outcome(2, format!("error: cannot write curves: {}", e)),
        },
        None => Value::Array(analysis.curves.iter().map(value).collect()),
    };
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "subcommand": subcommand,
        "inputs": analysis.inputs,
        "result": analysis.result,
        "curves": curves,
        "warnings": analysis.warnings,
        "timing": {"elapsed_seconds": elapsed},
    });
    if let Some(path) = &cli.out {
        let text = serde_json::to_string_pretty(&report).expect("json value") + "\n";
        if let Err(e) = fs::write(path, text) {
            return error_outcome(2, format!("error: cannot write {}: {}", path.display(), e));
        }
    }
    Outcome {
        code: analysis.code,
        report: Some(report),
        message: None,
    }
}

/// Entry point of the `hpw` binary.
pub fn main() -> i32 {
    let args: Vec<std::ffi::OsString> = std::env::args_os().collect();
    let to_stdout = !args.iter().any(|a| a == "--out" || a.to_string_lossy().starts_with("--out="));
    let outcome = run(args);
    if let Some(msg) = &outcome.message {
        if outcome.code == 0 {
            print!("{}", msg);
        } else {
            eprint!("{}", msg);
            if !msg.ends_with('\n') {
                eprintln!();
            }
        }
    }
    if let (Some(report), true) = (&outcome.report, to_stdout) {
        println!("{}", serde_json::to_string_pretty(report).expect("json value"));
    }
    outcome.code
}
