//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 validation failure,
//! 3 oracle budget exhausted.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::baseline::{naive_multi, two_way_mix_single};
use crate::cf::{ConcFactor, MAX_PRECISION};
use crate::emdp::{self, EmdpConfig, TargetOrder};
use crate::exec::{check_conservation, execute};
use crate::fixtures;
use crate::model::{Plan, TargetSeries};
use crate::oracle::{min_cost_plan, Objective, OracleOutcome, SearchCaps};
use crate::report::document::PlanDocument;
use crate::report::dot::export_dot;
use crate::report::reference::reported_for;
use crate::report::table::{ComparisonTable, RowSource, TableRow};
use crate::series::{self, Family, SeriesSpec};

/// Precision used for decimal targets when `--precision` is not given.
pub const DEFAULT_DECIMAL_PRECISION: u32 = 8;
/// Precision for generated series when `--precision` is not given.
pub const DEFAULT_SERIES_PRECISION: u32 = 5;

#[derive(Debug, Parser)]
#[command(name = "dmfprep", version, about = "Mix-split dilution planning for digital microfluidic biochips")]
struct Cli {
    /// Grid precision d (denominator 2^d) for decimal input, generated series
    /// and the planner's precision limit
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Seed for generated corpora and random series parameters
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the main result here instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Plan a target series and emit the plan document
    Plan(PlanArgs),
    /// Compare planners on fixture series or a generated corpus
    Compare(CompareArgs),
    /// Exact minimum-cost plan for a small instance
    Oracle(OracleArgs),
    /// Replay a plan file and report violations and counts
    Validate(FileArgs),
    /// Generate a target series from a family formula
    GenSeries(GenArgs),
    /// Export a plan file as a Graphviz graph
    ExportDot(FileArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Emdp,
    Twowaymix,
    Naive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Descending,
    Series,
}

#[derive(Debug, Args)]
struct TargetsArg {
    /// Comma-separated CFs ("5/16,0.25,1") or a file containing them
    #[arg(long)]
    targets: String,
}

#[derive(Debug, Args)]
struct PlanArgs {
    #[command(flatten)]
    targets: TargetsArg,
    #[arg(long, value_enum, default_value = "emdp")]
    algorithm: Algorithm,
    /// Target processing order for EMDP
    #[arg(long, value_enum, default_value = "descending")]
    order: OrderArg,
    /// Shorthand for --order descending
    #[arg(long, conflicts_with = "order")]
    reorder: bool,
}

#[derive(Debug, Args)]
struct CapsArgs {
    #[arg(long, default_value_t = 12)]
    max_steps: usize,
    #[arg(long, default_value_t = 6)]
    max_droplets: usize,
    #[arg(long, value_enum, default_value = "samples")]
    objective: ObjectiveArg,
    /// Time budget in seconds
    #[arg(long, default_value_t = 30.0)]
    budget: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    Samples,
    Steps,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    targets: TargetsArg,
    #[command(flatten)]
    caps: CapsArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Fixture series names: ts1, ts2, ts3
    #[arg(long, value_delimiter = ',', conflicts_with = "family")]
    series: Vec<String>,
    /// Generate a corpus from this family instead
    #[arg(long)]
    family: Option<String>,
    /// Series length for generated corpora
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Number of generated series
    #[arg(long, default_value_t = 1)]
    corpus: usize,
    /// Add an oracle row per series (small instances only)
    #[arg(long)]
    with_oracle: bool,
    #[command(flatten)]
    caps: CapsArgs,
}

#[derive(Debug, Args)]
struct FileArgs {
    /// Plan document (JSON)
    #[arg(long)]
    plan: PathBuf,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    ratio: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    n: usize,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Validation(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Validation(m) | Failure::Budget(m) => m,
        }
    }
}

/// Main result plus optional side notes printed to standard output even when
/// the result goes to a file.
#[derive(Debug)]
struct Output {
    body: String,
    notes: Vec<String>,
}

impl Output {
    fn body(body: String) -> Self {
        Output { body, notes: Vec::new() }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(output) => {
            if let Some(path) = &cli.output {
                if let Err(e) = fs::write(path, &output.body) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return 1;
                }
            } else {
                let _ = write!(out, "{}", output.body);
            }
            for note in output.notes {
                let _ = writeln!(out, "{note}");
            }
            0
        }
        Err((failure, partial)) => {
            if let Some(output) = partial {
                let _ = write!(out, "{}", output.body);
            }
            let _ = writeln!(err, "error: {}", failure.message());
            failure.code()
        }
    }
}

/// Runs with the process arguments and standard streams.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

type CmdResult = Result<Output, (Failure, Option<Output>)>;

fn usage(msg: impl Into<String>) -> (Failure, Option<Output>) {
    (Failure::Usage(msg.into()), None)
}

fn dispatch(cli: &Cli) -> CmdResult {
    if let Some(p) = cli.precision {
        if p > MAX_PRECISION {
            return Err(usage(format!("--precision {p} exceeds the maximum of {MAX_PRECISION}")));
        }
    }
    match &cli.command {
        Command::Plan(a) => cmd_plan(cli, a),
        Command::Compare(a) => cmd_compare(cli, a),
        Command::Oracle(a) => cmd_oracle(cli, a),
        Command::Validate(a) => cmd_validate(cli, a),
        Command::GenSeries(a) => cmd_gen(cli, a),
        Command::ExportDot(a) => cmd_dot(a),
    }
}

/// Error in a target list, with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetParseError {
    pub line: usize,
    pub column: usize,
    pub token: String,
    pub reason: String,
}

impl std::fmt::Display for TargetParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}: cannot parse {:?}: {}", self.line, self.column, self.token, self.reason)
    }
}

/// Parses a target list. Separators are commas, semicolons, whitespace and
/// JSON array punctuation; `#` starts a comment.
pub fn parse_targets(text: &str, decimal_precision: u32) -> Result<TargetSeries, TargetParseError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let is_sep = |c: char| c == ',' || c == ';' || c == '[' || c == ']' || c == '"' || c.is_whitespace();
        let mut start = None;
        for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            match (start, is_sep(c)) {
                (None, false) => start = Some(i),
                (Some(s), true) => {
                    let token = &line[s..i];
                    let cf = ConcFactor::parse_with_precision(token, decimal_precision).map_err(|e| {
                        TargetParseError {
                            line: ln + 1,
                            column: line[..s].chars().count() + 1,
                            token: token.to_string(),
                            reason: e.to_string(),
                        }
                    })?;
                    out.push(cf);
                    start = None;
                }
                _ => {}
            }
        }
    }
    Ok(TargetSeries::new(out))
}

fn load_targets(cli: &Cli, arg: &TargetsArg) -> Result<TargetSeries, (Failure, Option<Output>)> {
    let text = if Path::new(&arg.targets).is_file() {
        fs::read_to_string(&arg.targets).map_err(|e| usage(format!("cannot read {}: {e}", arg.targets)))?
    } else {
        arg.targets.clone()
    };
    let targets = parse_targets(&text, cli.precision.unwrap_or(DEFAULT_DECIMAL_PRECISION))
        .map_err(|e| usage(format!("targets: {e}")))?;
    if targets.is_empty() {
        return Err(usage("the target list is empty"));
    }
    if let Some(limit) = cli.precision {
        if let Some(t) = targets.iter().find(|t| t.precision() > limit) {
            return Err(usage(format!("target {t} needs precision {}, above --precision {limit}", t.precision())));
        }
    }
    Ok(targets)
}

fn stats_line(plan: &Plan) -> String {
    execute(plan).stats.to_string()
}

fn plan_output(cli: &Cli, plan: &Plan, algorithm: &str) -> Output {
    let summary = stats_line(plan);
    match cli.format.unwrap_or(Format::Text) {
        Format::Json => {
            let body = PlanDocument::new(plan.clone(), Some(algorithm)).render();
            let notes = if cli.output.is_some() { vec![summary] } else { Vec::new() };
            Output { body, notes }
        }
        Format::Csv => {
            let s = execute(plan).stats;
            Output::body(format!(
                "algorithm,S,B,W,steps,peak\n{algorithm},{},{},{},{},{}\n",
                s.n_sample, s.n_buffer, s.n_waste, s.n_steps, s.peak_storage
            ))
        }
        Format::Text => {
            if cli.output.is_some() {
                // a file always gets the reloadable document
                Output { body: PlanDocument::new(plan.clone(), Some(algorithm)).render(), notes: vec![summary] }
            } else {
                Output::body(summary + "\n")
            }
        }
    }
}

fn cmd_plan(cli: &Cli, a: &PlanArgs) -> CmdResult {
    let targets = load_targets(cli, &a.targets)?;
    let (plan, name) = match a.algorithm {
        Algorithm::Emdp => {
            let order = if a.reorder || a.order == OrderArg::Descending {
                TargetOrder::Descending
            } else {
                TargetOrder::Series
            };
            let config = EmdpConfig {
                order,
                max_precision: cli.precision.unwrap_or(MAX_PRECISION),
                ..EmdpConfig::default()
            };
            (emdp::plan(&targets, &config).map_err(|e| usage(e.to_string()))?, "emdp")
        }
        Algorithm::Twowaymix => {
            if targets.len() != 1 {
                return Err(usage("twowaymix prepares a single target; use --algorithm naive for a series"));
            }
            (two_way_mix_single(targets[0]), "twowaymix")
        }
        Algorithm::Naive => (naive_multi(&targets), "naive"),
    };
    let trace = execute(&plan);
    if !trace.is_valid() {
        let list: Vec<String> = trace.violations.iter().map(|v| v.to_string()).collect();
        return Err((Failure::Validation(format!("planner produced an invalid plan: {}", list.join("; "))), None));
    }
    Ok(plan_output(cli, &plan, name))
}

fn caps_from(a: &CapsArgs, precision: u32) -> Result<(SearchCaps, Objective), (Failure, Option<Output>)> {
    if !(a.budget.is_finite() && a.budget > 0.0) {
        return Err(usage("--budget must be a positive number of seconds"));
    }
    if a.max_steps == 0 || a.max_droplets == 0 {
        return Err(usage("--max-steps and --max-droplets must be positive"));
    }
    let caps = SearchCaps {
        max_steps: a.max_steps,
        max_droplets: a.max_droplets,
        max_precision: precision,
        budget: Duration::from_secs_f64(a.budget),
        ..SearchCaps::default()
    };
    let objective = match a.objective {
        ObjectiveArg::Samples => Objective::Samples,
        ObjectiveArg::Steps => Objective::Steps,
    };
    Ok((caps, objective))
}

fn cmd_oracle(cli: &Cli, a: &OracleArgs) -> CmdResult {
    let targets = load_targets(cli, &a.targets)?;
    let precision = cli.precision.unwrap_or_else(|| targets.max_precision().max(1));
    let (caps, objective) = caps_from(&a.caps, precision)?;
    match min_cost_plan(&targets, caps, objective) {
        OracleOutcome::Found(plan) => Ok(plan_output(cli, &plan, "oracle")),
        OracleOutcome::Infeasible => {
            let verdict = match cli.format.unwrap_or(Format::Text) {
                Format::Json => json!({ "verdict": "infeasible" }).to_string() + "\n",
                Format::Csv => "verdict\ninfeasible\n".to_string(),
                Format::Text => "infeasible within caps\n".to_string(),
            };
            Ok(Output::body(verdict))
        }
        OracleOutcome::Unknown => Err((Failure::Budget("search budget exhausted; verdict unknown".into()), None)),
    }
}

fn read_document(path: &Path) -> Result<PlanDocument, (Failure, Option<Output>)> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    PlanDocument::parse(&text).map_err(|e| (Failure::Validation(format!("{}: {e}", path.display())), None))
}

fn cmd_validate(cli: &Cli, a: &FileArgs) -> CmdResult {
    let doc = read_document(&a.plan)?;
    let trace = execute(&doc.plan);
    let mut problems: Vec<String> = trace.violations.iter().map(|v| v.to_string()).collect();
    if trace.is_valid() {
        if let Err(e) = check_conservation(&trace) {
            problems.push(e.to_string());
        }
        if let Some(recorded) = doc.stats {
            if recorded != trace.stats {
                problems.push(format!("recorded stats [{recorded}] differ from replay [{}]", trace.stats));
            }
        }
    }
    let valid = problems.is_empty();
    let body = match cli.format.unwrap_or(Format::Text) {
        Format::Json => {
            let v = json!({ "valid": valid, "problems": problems, "trace": trace });
            serde_json::to_string_pretty(&v).expect("trace serializes") + "\n"
        }
        Format::Csv => {
            let s = trace.stats;
            format!(
                "valid,S,B,W,steps,peak,violations\n{valid},{},{},{},{},{},{}\n",
                s.n_sample,
                s.n_buffer,
                s.n_waste,
                s.n_steps,
                s.peak_storage,
                problems.len()
            )
        }
        Format::Text => {
            let mut t = if valid { format!("valid: {}\n", trace.stats) } else { "INVALID\n".to_string() };
            for p in &problems {
                t.push_str(&format!("  {p}\n"));
            }
            t
        }
    };
    if valid {
        Ok(Output::body(body))
    } else {
        let n = problems.len();
        Err((Failure::Validation(format!("{n} problem(s) in {}", a.plan.display())), Some(Output::body(body))))
    }
}

fn cmd_dot(a: &FileArgs) -> CmdResult {
    let doc = read_document(&a.plan)?;
    export_dot(&doc.plan).map(Output::body).map_err(|v| {
        let list: Vec<String> = v.iter().map(|v| v.to_string()).collect();
        (Failure::Validation(format!("plan is not executable: {}", list.join("; "))), None)
    })
}

/// Accepts `k/m` or a decimal.
fn parse_real(name: &str, s: &str) -> Result<f64, (Failure, Option<Output>)> {
    let bad = || usage(format!("--{name}: cannot parse {s:?} as a number"));
    if let Some((n, d)) = s.split_once('/') {
        let n: f64 = n.trim().parse().map_err(|_| bad())?;
        let d: f64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0.0 {
            return Err(bad());
        }
        Ok(n / d)
    } else {
        s.trim().parse().map_err(|_| bad())
    }
}

fn gen_family(a: &GenArgs, seed: u64) -> Result<Family, (Failure, Option<Output>)> {
    let get = |name: &str, v: &Option<String>| v.as_deref().map(|s| parse_real(name, s)).transpose();
    let (pa, delta, ratio, b) = (get("a", &a.a)?, get("delta", &a.delta)?, get("ratio", &a.ratio)?, get("b", &a.b)?);
    let fam = match (a.family.as_str(), pa, delta, ratio, b) {
        ("linear", Some(a), Some(delta), _, _) => Family::Linear { a, delta },
        ("harmonic", Some(a), _, _, _) => Family::Harmonic { a },
        ("geometric", Some(a), _, Some(ratio), _) => Family::Geometric { a, ratio },
        ("parabolic", Some(a), _, _, Some(b)) => Family::Parabolic { a, b },
        (name, None, None, None, None) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            series::random_family(name, a.n, &mut rng).map_err(|e| usage(e.to_string()))?
        }
        (name @ ("linear" | "harmonic" | "geometric" | "parabolic"), ..) => {
            return Err(usage(format!("{name}: missing parameters (linear: --a --delta; harmonic: --a; geometric: --a --ratio; parabolic: --a --b)")));
        }
        (name, ..) => return Err(usage(format!("unknown family {name:?}"))),
    };
    Ok(fam)
}

fn cmd_gen(cli: &Cli, a: &GenArgs) -> CmdResult {
    let family = gen_family(a, cli.seed)?;
    let spec = SeriesSpec { family, count: a.n, precision: cli.precision.unwrap_or(DEFAULT_SERIES_PRECISION) };
    let ts = series::generate(&spec).map_err(|e| usage(e.to_string()))?;
    let body = match cli.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string(&ts).expect("series serializes") + "\n",
        Format::Csv => {
            let mut s = "index,cf,value\n".to_string();
            let d = spec.precision;
            for (i, c) in ts.iter().enumerate() {
                s.push_str(&format!("{i},{},{}\n", c.display_over(d), c.to_f64()));
            }
            s
        }
        Format::Text => {
            let cells: Vec<String> = ts.iter().map(|c| c.display_over(spec.precision)).collect();
            cells.join(",") + "\n"
        }
    };
    Ok(Output::body(body))
}

/// Oracle scope: the search is exponential in distinct targets and precision.
fn oracle_in_scope(ts: &TargetSeries) -> bool {
    let mut distinct: Vec<ConcFactor> = ts.iter().copied().filter(|t| !t.is_zero() && !t.is_one()).collect();
    distinct.sort();
    distinct.dedup();
    distinct.len() <= 4 && ts.max_precision() <= 5
}

fn cmd_compare(cli: &Cli, a: &CompareArgs) -> CmdResult {
    let mut corpus: Vec<(String, TargetSeries, bool)> = Vec::new();
    if let Some(fam) = &a.family {
        if a.corpus == 0 || a.n == 0 {
            return Err(usage("--corpus and --n must be positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        let precision = cli.precision.unwrap_or(DEFAULT_SERIES_PRECISION);
        for i in 0..a.corpus {
            let family = series::random_family(fam, a.n, &mut rng).map_err(|e| usage(e.to_string()))?;
            let ts = series::generate(&SeriesSpec { family, count: a.n, precision })
                .map_err(|e| usage(e.to_string()))?;
            corpus.push((format!("{fam}-{i}"), ts, false));
        }
    } else {
        if a.series.is_empty() {
            return Err(usage("give --series ts1,ts2,... or --family"));
        }
        for name in &a.series {
            let ts = fixtures::by_name(name).ok_or_else(|| usage(format!("unknown series {name:?} (known: ts1, ts2, ts3)")))?;
            corpus.push((name.to_ascii_lowercase(), ts, true));
        }
    }

    let mut table = ComparisonTable::default();
    for (name, ts, fixture) in &corpus {
        let e = emdp::plan(ts, &EmdpConfig::default()).map_err(|e| usage(e.to_string()))?;
        let computed = |algo: &str, plan: &Plan| {
            TableRow::computed(name, algo, plan)
                .map_err(|_| (Failure::Validation(format!("{algo} produced an invalid plan for {name}")), None))
        };
        table.push(computed("emdp", &e)?);
        table.push(computed("naive", &naive_multi(ts))?);
        if a.with_oracle {
            if oracle_in_scope(ts) {
                let (caps, objective) = caps_from(&a.caps, ts.max_precision().max(1))?;
                table.push(match min_cost_plan(ts, caps, objective) {
                    OracleOutcome::Found(p) => computed("oracle", &p)?,
                    OracleOutcome::Infeasible => TableRow::missing(name, "oracle", RowSource::Infeasible),
                    OracleOutcome::Unknown => TableRow::missing(name, "oracle", RowSource::Unknown),
                });
            } else {
                table.push(TableRow::missing(name, "oracle", RowSource::Skipped));
            }
        }
        if *fixture {
            for r in reported_for(name) {
                table.push(TableRow::reported(&r));
            }
        }
    }

    let samples = table.sample_reduction("emdp", "naive");
    let waste = table.waste_reduction("emdp", "naive");
    let pct = |r: Option<f64>| r.map_or_else(|| "-".to_string(), |r| format!("{:.1}%", 100.0 * r));
    let body = match cli.format.unwrap_or(Format::Text) {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let series: Vec<_> = corpus.iter().map(|(n, ts, _)| json!({ "name": n, "targets": ts })).collect();
            let v = json!({
                "series": series,
                "rows": table.rows,
                "sample_reduction_vs_naive": samples,
                "waste_reduction_vs_naive": waste,
            });
            serde_json::to_string_pretty(&v).expect("table serializes") + "\n"
        }
        Format::Text => {
            let mut t = String::new();
            for (n, ts, _) in &corpus {
                t.push_str(&format!("{n} = {{{}}}\n", ts.display_common()));
            }
            t.push('\n');
            t.push_str(&table.to_text());
            t.push_str(&format!(
                "\nemdp vs naive: sample droplets {} fewer, waste droplets {} fewer\n",
                pct(samples),
                pct(waste)
            ));
            if corpus.iter().any(|c| c.2) {
                t.push_str("rows marked 'reported' are published figures shown for reference; all other rows are recomputed by replay\n");
            }
            t
        }
    };
    Ok(Output::body(body))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_lists() {
        let ts = parse_targets("5/16, 0.25;1\n# comment\n[\"3/4\"]", 4).unwrap();
        let want: Vec<String> = ["5/16", "1/4", "1", "3/4"].iter().map(|s| s.to_string()).collect();
        assert_eq!(ts.iter().map(|c| c.to_string()).collect::<Vec<_>>(), want);
        let e = parse_targets("1/2,\n1/4, 3/7", 4).unwrap_err();
        assert_eq!((e.line, e.column, e.token.as_str()), (2, 6, "3/7"));
        assert!(parse_targets("  ", 4).unwrap().is_empty());
    }

    #[test]
    fn reals() {
        assert_eq!(parse_real("a", "1/4").unwrap(), 0.25);
        assert_eq!(parse_real("a", "0.5").unwrap(), 0.5);
        assert!(parse_real("a", "1/0").is_err());
        assert!(parse_real("a", "x").is_err());
    }

    #[test]
    fn scope() {
        assert!(oracle_in_scope(&fixtures::ts1()));
        assert!(!oracle_in_scope(&fixtures::ts2()));
    }
}
