//! `sosggm`: periodic boundary laws and gradient Gibbs measures of the SOS
//! model on Cayley trees, from the command line.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sosggm::boundary_law::{residual_di1, BoundaryLaw};
use sosggm::exec::Execution;
use sosggm::ggm::{self, Mode, Pinning};
use sosggm::periodic::{PeriodicSolution, SymmetryFilter};
use sosggm::scan::{self, Figure, ScanFamily, ScanRow};
use sosggm::symmetry::{canonical_form, classify, SymmetryKind};
use sosggm::{Error, Params};

use output::{emit, fmt, fmt_list, json_text, num, nums};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(
    name = "sosggm",
    version,
    about = "Height-periodic gradient Gibbs measures of the SOS model on Cayley trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate periodic boundary laws of one period.
    Solve(SolveArgs),
    /// Count solutions over a range of tau and locate the transitions.
    Scan(ScanArgs),
    /// Emit the data behind a figure as CSV.
    Figure(FigureArgs),
    /// Finite-volume marginals of the gradient measure of one law.
    Ggm(GgmArgs),
    /// Run every solver and self-check at one (k, tau).
    Verify(VerifyArgs),
    /// Report the values of tau where solution counts change.
    Critical(ScanArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Symmetry {
    Mirror,
    Nonmirror,
    /// Alternating-ones 4-cycles.
    Up,
    All,
}

impl From<Symmetry> for SymmetryFilter {
    fn from(s: Symmetry) -> Self {
        match s {
            Symmetry::Mirror => SymmetryFilter::Mirror,
            Symmetry::Nonmirror => SymmetryFilter::NonMirror,
            Symmetry::Up => SymmetryFilter::TypeUp,
            Symmetry::All => SymmetryFilter::All,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Trunc,
}

#[derive(Args)]
struct Common {
    /// Tree order: every vertex has k + 1 neighbours.
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long)]
    format: Option<Format>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    tau: f64,
    #[arg(long)]
    q: usize,
    #[arg(long, value_enum, default_value = "all")]
    symmetry: Symmetry,
    /// Allow 5 < q <= 12 through the generic numeric search.
    #[arg(long)]
    experimental: bool,
    /// Seed grid of the numeric search, per axis.
    #[arg(long, default_value_t = 200)]
    grid: usize,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    q: usize,
    #[arg(long, value_enum, default_value = "all")]
    symmetry: Symmetry,
    #[arg(long)]
    tau_min: f64,
    #[arg(long)]
    tau_max: f64,
    #[arg(long, default_value_t = 300)]
    steps: usize,
}

#[derive(Args)]
struct FigureArgs {
    #[command(flatten)]
    common: Common,
    /// fig1, fig2, fig3 or fig4.
    name: String,
    #[arg(long, default_value_t = 8.0)]
    tau: f64,
    /// Sample points (per window for fig4).
    #[arg(long, default_value_t = 2000)]
    grid: usize,
}

#[derive(Args)]
struct GgmArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    tau: f64,
    #[arg(long)]
    q: usize,
    #[arg(long, value_enum, default_value = "all")]
    symmetry: Symmetry,
    /// Position of the law in the `solve` output.
    #[arg(long, default_value_t = 0)]
    index: usize,
    #[arg(long, default_value_t = 0)]
    radius: u32,
    /// Pin the root in height class s.
    #[arg(long, conflicts_with = "mixed")]
    pinned: Option<usize>,
    /// Sum over the root's height class (default).
    #[arg(long)]
    mixed: bool,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Increment cutoff for `--mode trunc`.
    #[arg(long, default_value_t = 40)]
    trunc: u32,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    tau: f64,
}

enum Failure {
    Usage(String),
    Unwritable(String),
    Oversized(String),
    Verify(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Unwritable(_) => 3,
            Failure::Oversized(_) => 4,
            Failure::Verify(_) | Failure::Other(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m)
            | Failure::Unwritable(m)
            | Failure::Oversized(m)
            | Failure::Verify(m)
            | Failure::Other(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Oversized { .. } => Failure::Oversized(e.to_string()),
            Error::Internal(_) | Error::NotARoot { .. } => Failure::Other(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<output::WriteError> for Failure {
    fn from(e: output::WriteError) -> Self {
        Failure::Unwritable(format!("cannot write {}: {}", e.path.display(), e.source))
    }
}

type Outcome = Result<(), Failure>;

fn configure_threads() -> Outcome {
    let Ok(v) = std::env::var("SOSGGM_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("SOSGGM_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Other(e.to_string()))
}

fn format_or(f: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = f.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::Usage(
            "output format not supported by this command".into(),
        ))
    }
}

fn symmetry_name(kind: SymmetryKind) -> String {
    match kind {
        SymmetryKind::Mirror => "mirror".into(),
        SymmetryKind::TwoMirror(p) => format!("two_mirror:{p}"),
        SymmetryKind::None => "none".into(),
    }
}

fn solution_json(s: &PeriodicSolution) -> Result<Value, Failure> {
    let p = s.params();
    let law = BoundaryLaw::from_word(s);
    Ok(json!({
        "k": p.k(),
        "tau": num(p.tau()),
        "q": s.q(),
        "word": nums(s.word()),
        "symmetry": symmetry_name(classify(s.word()).kind),
        "canonical": nums(&canonical_form(s.word()).word),
        "residual_system": num(s.system_residual()),
        "residual_di1": num(residual_di1(&law)?),
        "branch": s.branch().as_str(),
        "family": s.family().as_str(),
        "experimental": s.experimental(),
    }))
}

fn solve_census(args: &SolveArgs) -> Result<(Params, scan::Census), Failure> {
    let params = Params::new(args.common.k, args.tau)?;
    let census = scan::solve_classes(
        &params,
        args.q,
        args.symmetry.into(),
        args.experimental,
        args.grid,
    )?;
    Ok((params, census))
}

fn cmd_solve(args: SolveArgs) -> Outcome {
    let format = format_or(
        args.common.format,
        Format::Json,
        &[Format::Json, Format::Csv, Format::Text],
    )?;
    let (params, census) = solve_census(&args)?;
    let text = match format {
        Format::Json => {
            let sols = census
                .classes
                .iter()
                .map(solution_json)
                .collect::<Result<Vec<_>, _>>()?;
            json_text(&json!({
                "schema": SCHEMA,
                "k": params.k(),
                "tau": num(params.tau()),
                "q": args.q,
                "raw_count": census.raw.len(),
                "dedup_count": census.classes.len(),
                "solutions": sols,
            }))
        }
        Format::Csv => {
            let mut s =
                String::from("q,branch,family,symmetry,word,canonical,residual_system,residual_di1\n");
            for sol in &census.classes {
                let law = BoundaryLaw::from_word(sol);
                s += &format!(
                    "{},{},{},{},{},{},{},{}\n",
                    sol.q(),
                    sol.branch().as_str(),
                    sol.family().as_str(),
                    symmetry_name(classify(sol.word()).kind),
                    fmt_list(sol.word(), ";"),
                    fmt_list(&canonical_form(sol.word()).word, ";"),
                    fmt(sol.system_residual()),
                    fmt(residual_di1(&law)?),
                );
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "k = {}, tau = {}, q = {}: {} solutions ({} before identification)\n",
                params.k(),
                fmt(params.tau()),
                args.q,
                census.classes.len(),
                census.raw.len()
            );
            for (i, sol) in census.classes.iter().enumerate() {
                s += &format!(
                    "[{i}] ({}) {} {}\n",
                    fmt_list(sol.word(), ", "),
                    sol.family().as_str(),
                    symmetry_name(classify(sol.word()).kind)
                );
            }
            s
        }
    };
    Ok(emit(args.common.out.as_deref(), &text)?)
}

fn families(q: usize, symmetry: Symmetry) -> Result<Vec<ScanFamily>, Failure> {
    let fams = ScanFamily::select(q, symmetry.into());
    if fams.is_empty() {
        return Err(Failure::Usage(format!(
            "no solution branch of period {q} with that symmetry"
        )));
    }
    Ok(fams)
}

fn run_scan(args: &ScanArgs) -> Result<Vec<ScanRow>, Failure> {
    let fams = families(args.q, args.symmetry)?;
    Ok(scan::scan(
        args.common.k,
        &fams,
        args.tau_min,
        args.tau_max,
        args.steps,
        Execution::default(),
    )?)
}

fn row_json(r: &ScanRow) -> Value {
    json!({
        "tau": num(r.tau),
        "q": r.q,
        "branch": r.branch,
        "raw_count": r.raw_count,
        "dedup_count": r.dedup_count,
        "roots": nums(&r.roots),
    })
}

fn cmd_scan(args: ScanArgs) -> Outcome {
    let format = format_or(args.common.format, Format::Csv, &[Format::Csv, Format::Json])?;
    let rows = run_scan(&args)?;
    let text = match format {
        Format::Csv => {
            let mut s = String::from("tau,q,branch,raw_count,dedup_count,roots\n");
            for r in &rows {
                s += &format!(
                    "{},{},{},{},{},{}\n",
                    fmt(r.tau),
                    r.q,
                    r.branch,
                    r.raw_count,
                    r.dedup_count,
                    fmt_list(&r.roots, ";")
                );
            }
            s
        }
        _ => json_text(&json!({
            "schema": SCHEMA,
            "k": args.common.k,
            "rows": rows.iter().map(row_json).collect::<Vec<_>>(),
        })),
    };
    Ok(emit(args.common.out.as_deref(), &text)?)
}

fn cmd_critical(args: ScanArgs) -> Outcome {
    let format = format_or(
        args.common.format,
        Format::Json,
        &[Format::Json, Format::Csv, Format::Text],
    )?;
    let rows = run_scan(&args)?;
    let flagged: Vec<&ScanRow> = rows.iter().filter(|r| r.transition).collect();
    let text = match format {
        Format::Json => json_text(&json!({
            "schema": SCHEMA,
            "k": args.common.k,
            "q": args.q,
            "tau_min": num(args.tau_min),
            "tau_max": num(args.tau_max),
            "transitions": flagged.iter().map(|r| row_json(r)).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("tau,branch,raw_count,dedup_count\n");
            for r in &flagged {
                s += &format!("{},{},{},{}\n", fmt(r.tau), r.branch, r.raw_count, r.dedup_count);
            }
            s
        }
        Format::Text => flagged
            .iter()
            .map(|r| format!("{} at tau = {}\n", r.branch, fmt(r.tau)))
            .collect(),
    };
    Ok(emit(args.common.out.as_deref(), &text)?)
}

fn cmd_figure(args: FigureArgs) -> Outcome {
    let format = format_or(args.common.format, Format::Csv, &[Format::Csv, Format::Json])?;
    let fig: Figure = args.name.parse()?;
    let data = scan::figure(fig, args.common.k, args.tau, args.grid)?;
    let cell = |c: &Option<f64>| c.map(fmt).unwrap_or_default();
    let text = match format {
        Format::Csv => {
            let mut s = data.columns.join(",");
            s.push('\n');
            for row in &data.rows {
                s += &row.iter().map(cell).collect::<Vec<_>>().join(",");
                s.push('\n');
            }
            s
        }
        _ => json_text(&json!({
            "schema": SCHEMA,
            "figure": args.name,
            "columns": data.columns,
            "rows": data.rows.iter().map(|r| r.iter().map(|c| c.map(num).unwrap_or(Value::Null)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })),
    };
    Ok(emit(args.common.out.as_deref(), &text)?)
}

fn cmd_ggm(args: GgmArgs) -> Outcome {
    let format = format_or(args.common.format, Format::Json, &[Format::Json, Format::Csv])?;
    let solve = SolveArgs {
        common: Common {
            k: args.common.k,
            format: None,
            out: None,
        },
        tau: args.tau,
        q: args.q,
        symmetry: args.symmetry,
        experimental: false,
        grid: 200,
    };
    let (params, census) = solve_census(&solve)?;
    let sol = census.classes.get(args.index).ok_or_else(|| {
        Failure::Usage(format!(
            "solution index {} out of range ({} solutions)",
            args.index,
            census.classes.len()
        ))
    })?;
    let law = BoundaryLaw::from_word(sol);
    let pinning = match (args.pinned, args.mixed) {
        (Some(s), _) if s >= law.q() => {
            return Err(Failure::Usage(format!(
                "pinned class {s} must be below q = {}",
                law.q()
            )))
        }
        (Some(s), _) => Pinning::Pinned(s),
        (None, _) => Pinning::Mixed,
    };
    let mode = match args.mode {
        ModeArg::Exact => Mode::ExactClass,
        ModeArg::Trunc => Mode::Truncated(args.trunc),
    };
    let ball = ggm::build_ball(args.common.k, args.radius)?;
    let table = ggm::observed_marginal(&ball, &law, pinning, mode, args.radius)?;
    let tail = match mode {
        Mode::ExactClass => 0.0,
        Mode::Truncated(r) => ggm::tail_bound(&ball, params.theta(), r),
    };
    let text = match format {
        Format::Json => json_text(&json!({
            "schema": SCHEMA,
            "k": params.k(),
            "tau": num(params.tau()),
            "q": sol.q(),
            "word": nums(sol.word()),
            "radius": args.radius,
            "pinning": match pinning { Pinning::Mixed => json!("mixed"), Pinning::Pinned(s) => json!(s) },
            "mode": match mode { Mode::ExactClass => "exact", Mode::Truncated(_) => "trunc" },
            "trunc": match mode { Mode::ExactClass => Value::Null, Mode::Truncated(r) => json!(r) },
            "edges": table.num_edges(),
            "support": table.alphabet(),
            "probs": nums(table.probs()),
            "total": num(table.total()),
            "tail_bound": num(tail),
        })),
        _ => {
            let mut s = (0..table.num_edges())
                .map(|e| format!("e{e}"))
                .collect::<Vec<_>>()
                .join(",");
            s += ",prob\n";
            for row in 0..table.rows() {
                let a = table.assignment(row);
                s += &a.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
                s += &format!(",{}\n", fmt(table.probs()[row]));
            }
            s
        }
    };
    Ok(emit(args.common.out.as_deref(), &text)?)
}

fn cmd_verify(args: VerifyArgs) -> Outcome {
    let format = format_or(args.common.format, Format::Text, &[Format::Text, Format::Json])?;
    let report = scan::verify(args.common.k, args.tau)?;
    let text = match format {
        Format::Json => json_text(&json!({
            "schema": SCHEMA,
            "k": report.k,
            "tau": num(report.tau),
            "passed": report.passed(),
            "counts": report.counts.iter().map(|(n, c)| json!({"branch": n, "count": c})).collect::<Vec<_>>(),
            "items": report.items.iter().map(|i| json!({"name": i.name, "pass": i.pass, "detail": i.detail})).collect::<Vec<_>>(),
        })),
        _ => {
            let mut s = format!("verify k = {}, tau = {}\n", report.k, fmt(report.tau));
            for (n, c) in &report.counts {
                s += &format!("  {n}: {c}\n");
            }
            for i in &report.items {
                s += &format!(
                    "{} {}: {}\n",
                    if i.pass { "ok  " } else { "FAIL" },
                    i.name,
                    i.detail
                );
            }
            s += if report.passed() { "passed\n" } else { "failed\n" };
            s
        }
    };
    emit(args.common.out.as_deref(), &text)?;
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().iter().map(|i| i.name.as_str()).collect();
        Err(Failure::Verify(format!("failed checks: {}", names.join(", "))))
    }
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Figure(a) => cmd_figure(a),
        Command::Ggm(a) => cmd_ggm(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Critical(a) => cmd_critical(a),
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and 0 for --help/--version
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("sosggm: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
