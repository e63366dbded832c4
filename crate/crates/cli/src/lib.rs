//! Command-line front end for the `evweight` library.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error, 3 the
//! requested quantity is undefined for the given evidence.

pub mod hypothesis;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use evweight::belief::{Classification, MassFunction};
use evweight::evidence::{interpret_as_urn_draws, interpret_log10_as_urn_draws, weight_from_mass};
use evweight::frames::{parse_rational, render_labels, Frame, Hypothesis, LogWeight};
use evweight::gfm::{GeneralizedFunctionalModel, ObservationTally};
use evweight::io::model_from_json;
use evweight::models::{BuiltinModel, SurvivalModel};
use evweight::verify::{self, Grid, ModelSet, SuiteReport};
use evweight::{Error, Result};

pub use hypothesis::HypothesisExpr;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNDEFINED: i32 = 3;

pub const DEFAULT_MAX_FOCAL: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "evw", version, about = "Exact weights of evidence from generalized functional models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weight of evidence Pl(H) / Pl(H') for two hypotheses
    Weigh(WeighArgs),
    /// Focal sets and masses of the combined belief function
    Focal(FocalArgs),
    /// Survival-model weight across a range of population sizes
    ScanN(ScanArgs),
    /// Express a weight as a number of consecutive white draws
    Interpret(InterpretArgs),
    /// Run the invariant suites
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct EvidenceArgs {
    /// Built-in model (urn-gfm1, urn-gfm2, survival:N) or path to a JSON model
    #[arg(long)]
    pub model: String,
    /// Observation count per outcome, e.g. white=3; repeatable
    #[arg(long = "tally", value_name = "LABEL=COUNT", value_parser = parse_tally_entry)]
    pub tally: Vec<(String, u32)>,
    /// Count of "live" observations
    #[arg(long)]
    pub live: Option<u32>,
    /// Count of "die" observations
    #[arg(long)]
    pub die: Option<u32>,
}

#[derive(Debug, Args)]
pub struct WeighArgs {
    #[command(flatten)]
    pub evidence: EvidenceArgs,
    /// Hypothesis in favour of which the weight is computed
    #[arg(long = "h", value_name = "EXPR")]
    pub h: String,
    /// Alternative hypothesis
    #[arg(long = "h2", value_name = "EXPR")]
    pub h2: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct FocalArgs {
    #[command(flatten)]
    pub evidence: EvidenceArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 0)]
    pub live: u32,
    #[arg(long, default_value_t = 0)]
    pub die: u32,
    #[arg(long = "h", value_name = "EXPR", default_value = ">=4/5")]
    pub h: String,
    #[arg(long = "h2", value_name = "EXPR", default_value = "=1/5")]
    pub h2: String,
    #[arg(long)]
    pub from: u32,
    /// Last population size; defaults to --from
    #[arg(long)]
    pub to: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub step: u32,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("value").required(true).args(["weight", "log10"])))]
pub struct InterpretArgs {
    /// Exact weight as p/q
    #[arg(long)]
    pub weight: Option<String>,
    /// Base-10 logarithm of the weight
    #[arg(long, allow_negative_numbers = true)]
    pub log10: Option<f64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridArg {
    Small,
    Full,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = GridArg::Small)]
    pub grid: GridArg,
    /// Replace a built-in urn model with a JSON model, e.g. urn-gfm1=path.json
    #[arg(long = "override", value_name = "NAME=PATH", value_parser = parse_override)]
    pub overrides: Vec<(String, PathBuf)>,
}

fn parse_tally_entry(text: &str) -> std::result::Result<(String, u32), String> {
    let (label, count) = text.split_once('=').ok_or_else(|| format!("expected LABEL=COUNT, got {text:?}"))?;
    if label.is_empty() {
        return Err(format!("empty outcome label in {text:?}"));
    }
    let count = count.parse().map_err(|_| format!("bad count in {text:?}"))?;
    Ok((label.to_string(), count))
}

fn parse_override(text: &str) -> std::result::Result<(String, PathBuf), String> {
    let (name, path) = text.split_once('=').ok_or_else(|| format!("expected NAME=PATH, got {text:?}"))?;
    match name {
        "urn-gfm1" | "urn-gfm2" => Ok((name.to_string(), PathBuf::from(path))),
        _ => Err(format!("only urn-gfm1 and urn-gfm2 can be overridden, got {name:?}")),
    }
}

/// Runs a parsed command, writing the report to `out` and diagnostics to
/// `err`; returns the process exit code.
pub fn run(cli: Cli, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let result = match cli.command {
        Command::Weigh(a) => cmd_weigh(&a, out),
        Command::Focal(a) => cmd_focal(&a, out),
        Command::ScanN(a) => cmd_scan_n(&a, out, err),
        Command::Interpret(a) => cmd_interpret(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::FocalLimitExceeded(_)) {
                let _ = writeln!(err, "hint: raise EVW_MAX_FOCAL or use a canned model such as survival:N");
            }
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_undefined_result() {
        EXIT_UNDEFINED
    } else {
        EXIT_INPUT
    }
}

/// Focal-set cap for the generic engine from `EVW_MAX_FOCAL`.
pub fn focal_limit() -> Result<usize> {
    match std::env::var("EVW_MAX_FOCAL") {
        Err(_) => Ok(DEFAULT_MAX_FOCAL),
        Ok(v) => v
            .trim()
            .parse()
            .ok()
            .filter(|&n: &usize| n > 0)
            .ok_or_else(|| Error::InvalidArgument(format!("EVW_MAX_FOCAL must be a positive integer, got {v:?}"))),
    }
}

enum LoadedModel {
    Survival(SurvivalModel),
    Generic(GeneralizedFunctionalModel),
}

impl LoadedModel {
    fn load(reference: &str) -> Result<Self> {
        match reference.parse::<BuiltinModel>() {
            Ok(BuiltinModel::Survival(n)) => return SurvivalModel::new(n).map(LoadedModel::Survival),
            Ok(builtin) => return Ok(LoadedModel::Generic(builtin.gfm())),
            Err(e) if reference.starts_with("survival:") || reference.starts_with("urn-") => return Err(e),
            Err(_) => {}
        }
        let text = std::fs::read_to_string(reference).map_err(|e| {
            Error::InvalidArgument(format!("model {reference:?} is neither a built-in name nor a readable file: {e}"))
        })?;
        model_from_json(&text).map(LoadedModel::Generic)
    }

    fn frame(&self) -> &std::sync::Arc<Frame> {
        match self {
            LoadedModel::Survival(sm) => sm.frame(),
            LoadedModel::Generic(g) => g.theta(),
        }
    }
}

/// The evidence in a form each engine can use.
struct Evidence {
    model: LoadedModel,
    tally: ObservationTally,
}

impl Evidence {
    fn from_args(args: &EvidenceArgs) -> Result<Self> {
        let model = LoadedModel::load(&args.model)?;
        let mut counts: BTreeMap<String, u32> = BTreeMap::new();
        let flags = [("live", args.live), ("die", args.die)];
        let entries = args.tally.iter().cloned().chain(flags.iter().filter_map(|(l, c)| c.map(|c| (l.to_string(), c))));
        for (label, count) in entries {
            let slot = counts.entry(label.clone()).or_default();
            *slot = slot
                .checked_add(count)
                .ok_or_else(|| Error::InvalidArgument(format!("count for {label:?} overflows")))?;
        }
        let tally = ObservationTally::new(counts)?;
        if let LoadedModel::Survival(_) = model {
            if let Some(other) = tally.counts().keys().find(|k| *k != "live" && *k != "die") {
                return Err(Error::UnknownOutcome(other.clone()));
            }
        }
        Ok(Evidence { model, tally })
    }

    fn survival_counts(&self) -> (u32, u32) {
        (self.tally.count("live"), self.tally.count("die"))
    }

    /// The combined belief function (closed form for survival models).
    fn mass(&self) -> Result<MassFunction> {
        match &self.model {
            LoadedModel::Survival(sm) => {
                let (m, n) = self.survival_counts();
                sm.mass(m, n)
            }
            LoadedModel::Generic(g) => Ok(g.observe_tally_bounded(&self.tally, Some(focal_limit()?))?.result),
        }
    }

    fn weight(&self, h: &Hypothesis, h2: &Hypothesis) -> Result<(LogWeight, Classification)> {
        match &self.model {
            LoadedModel::Survival(sm) => {
                let (m, n) = self.survival_counts();
                let class = sm.classification(m, n)?;
                Ok((sm.weight(m, n, h, h2)?, class))
            }
            LoadedModel::Generic(_) => {
                let mass = self.mass()?;
                Ok((weight_from_mass(&mass, h, h2)?, mass.classify()))
            }
        }
    }
}

fn log10_text(w: &LogWeight) -> String {
    match w.log10() {
        Some(x) => format!("{x:.5}"),
        None => "inf".to_string(),
    }
}

fn log10_json(w: &LogWeight) -> serde_json::Value {
    w.log10().map_or(serde_json::Value::Null, |x| json!(x))
}

fn hypothesis_text(h: &Hypothesis) -> String {
    render_labels(&h.labels())
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("cannot write output: {e}"))
}

fn cmd_weigh(args: &WeighArgs, out: &mut impl Write) -> Result<i32> {
    let h_expr: HypothesisExpr = args.h.parse()?;
    let h2_expr: HypothesisExpr = args.h2.parse()?;
    let evidence = Evidence::from_args(&args.evidence)?;
    let frame = evidence.model.frame().clone();
    let h = h_expr.resolve(&frame)?;
    let h2 = h2_expr.resolve(&frame)?;
    let (w, class) = evidence.weight(&h, &h2)?;
    if args.json {
        let report = json!({
            "model": args.evidence.model,
            "tally": evidence.tally.counts(),
            "h": hypothesis_text(&h),
            "h2": hypothesis_text(&h2),
            "weight": w.to_exact_string(),
            "log10": log10_json(&w),
            "classification": class.as_str(),
        });
        writeln!(out, "{report:#}").map_err(io_err)?;
    } else {
        writeln!(out, "weight: {}", w.to_exact_string()).map_err(io_err)?;
        writeln!(out, "log10: {}", log10_text(&w)).map_err(io_err)?;
        writeln!(out, "classification: {class}").map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn cmd_focal(args: &FocalArgs, out: &mut impl Write) -> Result<i32> {
    let evidence = Evidence::from_args(&args.evidence)?;
    let mass = evidence.mass()?;
    let frame = mass.frame().clone();
    let rows: Vec<(Vec<i64>, String)> = mass
        .focal_sets()
        .map(|(set, m)| (set.iter().map(|i| frame.label(i)).collect(), evweight::frames::format_rational(m)))
        .collect();
    let class = mass.classify();
    if args.json {
        let focal: Vec<_> = rows
            .iter()
            .map(|(labels, m)| json!({"set": labels, "label": render_labels(labels), "mass": m}))
            .collect();
        let report = json!({"model": args.evidence.model, "tally": evidence.tally.counts(), "focal": focal, "classification": class.as_str()});
        writeln!(out, "{report:#}").map_err(io_err)?;
    } else {
        for (labels, m) in &rows {
            writeln!(out, "{}\t{m}", render_labels(labels)).map_err(io_err)?;
        }
        writeln!(out, "classification: {class}").map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

/// Consecutive log₁₀ values closer than this count as a plateau.
pub const PLATEAU_TOLERANCE: f64 = 0.01;

fn cmd_scan_n(args: &ScanArgs, out: &mut impl Write, err: &mut impl Write) -> Result<i32> {
    let h_expr: HypothesisExpr = args.h.parse()?;
    let h2_expr: HypothesisExpr = args.h2.parse()?;
    let to = args.to.unwrap_or(args.from);
    if args.from == 0 || to < args.from || args.step == 0 {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= --from <= --to and --step >= 1, got from={} to={to} step={}",
            args.from, args.step
        )));
    }
    if args.live == 0 && args.die == 0 {
        return Err(Error::EmptyTally);
    }
    let mut rows: Vec<(u32, LogWeight, bool)> = Vec::new();
    let mut last_error = None;
    let mut prev_log: Option<f64> = None;
    for n in (args.from..=to).step_by(args.step as usize) {
        if let Some(den) = h_expr.misaligned_with(n).or_else(|| h2_expr.misaligned_with(n)) {
            writeln!(err, "warning: skipping N={n}: {n} not divisible by {den}").map_err(io_err)?;
            last_error = Some(EXIT_INPUT);
            continue;
        }
        let result = SurvivalModel::new(n).and_then(|sm| {
            let h = h_expr.resolve(sm.frame())?;
            let h2 = h2_expr.resolve(sm.frame())?;
            sm.weight(args.live, args.die, &h, &h2)
        });
        match result {
            Ok(w) => {
                let log = w.log10();
                let plateau = matches!((prev_log, log), (Some(a), Some(b)) if (a - b).abs() < PLATEAU_TOLERANCE);
                prev_log = log;
                rows.push((n, w, plateau));
            }
            Err(e) => {
                writeln!(err, "warning: skipping N={n}: {e}").map_err(io_err)?;
                last_error = Some(exit_code(&e));
            }
        }
    }
    if args.json {
        let items: Vec<_> = rows
            .iter()
            .map(|(n, w, p)| json!({"n": n, "weight": w.to_exact_string(), "log10": log10_json(w), "plateau": p}))
            .collect();
        writeln!(out, "{:#}", json!({"rows": items})).map_err(io_err)?;
    } else {
        writeln!(out, "N\tlog10\tplateau").map_err(io_err)?;
        for (n, w, p) in &rows {
            writeln!(out, "{n}\t{}\t{}", log10_text(w), if *p { "plateau" } else { "" }).map_err(io_err)?;
        }
    }
    Ok(match (rows.is_empty(), last_error) {
        (true, Some(code)) => code,
        _ => EXIT_OK,
    })
}

fn cmd_interpret(args: &InterpretArgs, out: &mut impl Write) -> Result<i32> {
    let k = match (&args.weight, args.log10) {
        (Some(text), _) => interpret_as_urn_draws(&LogWeight::Finite(parse_rational(text)?))?,
        (None, Some(x)) => interpret_log10_as_urn_draws(x)?,
        (None, None) => return Err(Error::InvalidArgument("need --weight or --log10".into())),
    };
    if args.json {
        writeln!(out, "{:#}", json!({"draws": k})).map_err(io_err)?;
    } else {
        writeln!(out, "equivalent to {k} consecutive white draws (WW vs BW)").map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs, out: &mut impl Write) -> Result<i32> {
    let mut models = ModelSet::default();
    for (name, path) in &args.overrides {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        let model = model_from_json(&text)?;
        match name.as_str() {
            "urn-gfm1" => models.urn_gfm1 = model,
            _ => models.urn_gfm2 = model,
        }
    }
    let grid = match args.grid {
        GridArg::Small => Grid::Small,
        GridArg::Full => Grid::Full,
    };
    let mut reports = verify::run(grid, &models);
    reports.push(cli_suite());
    let mut failed = false;
    for r in &reports {
        writeln!(out, "{:<14} passed {:>7}  failed {:>5}", r.name, r.passed, r.failed).map_err(io_err)?;
        if let Some(first) = &r.first_failure {
            writeln!(out, "  first counterexample: {first}").map_err(io_err)?;
        }
        failed |= !r.ok();
    }
    writeln!(out, "{}", if failed { "verification FAILED" } else { "all suites passed" }).map_err(io_err)?;
    Ok(if failed { EXIT_VERIFY_FAILED } else { EXIT_OK })
}

/// Grammar and output round trips of this crate.
pub fn cli_suite() -> SuiteReport {
    let mut report = SuiteReport { name: "cli", passed: 0, failed: 0, first_failure: None };
    let mut check = |ok: bool, what: String| {
        if ok {
            report.passed += 1;
        } else {
            report.failed += 1;
            report.first_failure.get_or_insert(what);
        }
    };
    let labels = [-3i64, 0, 1, 7, 250];
    let mut exprs = vec![HypothesisExpr::Set(vec![])];
    for &a in &labels {
        exprs.push(HypothesisExpr::Set(vec![a]));
        for &b in &labels {
            exprs.push(HypothesisExpr::Set(vec![a, b]));
            exprs.push(HypothesisExpr::Interval(a, b));
        }
    }
    for (p, q) in [(0, 1), (1, 5), (4, 5), (1, 1), (-1, 2), (7, 3)] {
        let rate = evweight::frames::rational::ratio(p, q);
        exprs.push(HypothesisExpr::AtLeast(rate.clone()));
        exprs.push(HypothesisExpr::Exactly(rate));
    }
    for e in &exprs {
        let text = e.to_string();
        check(text.parse::<HypothesisExpr>().as_ref() == Ok(e), format!("hypothesis {text:?} does not round-trip"));
    }

    // printed weights re-parse to the computed value
    let urn = BuiltinModel::UrnGfm2.gfm();
    let frame = urn.theta().clone();
    for white in 0..=3u32 {
        for black in 0..=3u32 {
            let Ok(tally) = ObservationTally::new([("white", white), ("black", black)]) else { continue };
            let Ok(report) = urn.observe_tally(&tally) else { continue };
            for &a in frame.labels() {
                for &b in frame.labels() {
                    let h = Hypothesis::singleton(&frame, a).expect("label");
                    let h2 = Hypothesis::singleton(&frame, b).expect("label");
                    if let Ok(LogWeight::Finite(q)) = weight_from_mass(&report.result, &h, &h2) {
                        let printed = LogWeight::Finite(q.clone()).to_exact_string();
                        check(parse_rational(&printed).as_ref() == Ok(&q), format!("weight {printed} does not round-trip"));
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let cli = Cli::try_parse_from(std::iter::once("evw").chain(args.iter().copied())).unwrap();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(cli, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn cli_suite_passes() {
        let r = cli_suite();
        assert!(r.ok() && r.passed > 50, "{r:?}");
    }

    #[test]
    fn weigh_urn_simple() {
        let (code, out, _) = run_args(&["weigh", "--model", "urn-gfm2", "--tally", "white=1", "--h", "{4}", "--h2", "{2}"]);
        assert_eq!(code, 0);
        assert!(out.contains("weight: 2\n"), "{out}");
    }

    #[test]
    fn tally_flags_accumulate() {
        let (code, out, _) = run_args(&["focal", "--model", "survival:4", "--live", "1", "--tally", "live=1"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 5, "{out}");
    }

    #[test]
    fn survival_rejects_foreign_outcomes() {
        let (code, _, err) = run_args(&["focal", "--model", "survival:4", "--tally", "white=1"]);
        assert_eq!(code, 2);
        assert!(err.contains("\"white\""), "{err}");
    }
}
