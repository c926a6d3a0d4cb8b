//! Command-line front end: solve one instance, run benchmark grids, or run
//! the verification suites. Machine output is JSON (one record per run);
//! human output is an aligned table.

use crate::bnc::{self, EnabledCuts, SolveStatus, SolverConfig};
use crate::error::{Error, Result};
use crate::instance::{self, Instance};
use crate::report::{aggregate, aggregate_table, AggregateRow, RunRecord};
use crate::verify;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Environment variable supplying the default time limit in seconds.
pub const TIME_LIMIT_ENV: &str = "MPCLP_TIME_LIMIT";

#[derive(Parser, Debug)]
#[command(
    name = "mpclp",
    about = "Branch-and-cut solver for the multiple probabilistic covering location problem",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a single instance and print a run record.
    Solve(SolveArgs),
    /// Run a grid of configurations over a set of instance files.
    Bench(BenchArgs),
    /// Run the property-verification suites.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FormatArg {
    Pmed,
    Native,
}

impl FormatArg {
    fn name(self) -> &'static str {
        match self {
            FormatArg::Pmed => "pmed",
            FormatArg::Native => "native",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum OutputArg {
    Table,
    Json,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Instance file path.
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    format: FormatArg,
    /// Facilities to open (overrides the native file's k field).
    #[arg(long)]
    k: u32,
    /// Correlation weight of the joint coverage model (required for pmed).
    #[arg(long)]
    theta: Option<f64>,
    /// Full-coverage radius (pmed only).
    #[arg(long)]
    r: Option<f64>,
    /// Zero-coverage radius (pmed only).
    #[arg(long = "R")]
    big_r: Option<f64>,
    /// Wall-clock limit in seconds; MPCLP_TIME_LIMIT supplies the default.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Relative gap at which the search may stop (default: prove optimality).
    #[arg(long, default_value_t = 0.0)]
    gap: f64,
    /// Comma-separated cut families: submodular,oa,eoa,ls.
    #[arg(long, default_value = "submodular,eoa,ls")]
    cuts: String,
    /// Reserved for scripting symmetry; the solver itself is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = OutputArg::Table)]
    output: OutputArg,
    /// One log line per node on stderr.
    #[arg(long)]
    verbose: bool,
    /// Zero the wall-time field so identical runs emit identical bytes.
    #[arg(long)]
    stable_json: bool,
    /// Write the root relaxation (static rows) in LP text format.
    #[arg(long)]
    dump_lp: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Glob over instance files, e.g. `data/pmed*.txt`.
    #[arg(long)]
    instances: String,
    #[arg(long, value_enum, default_value_t = FormatArg::Pmed)]
    format: FormatArg,
    /// Grid name; `default` is (r,R) in {(5,20),(10,25)} x theta in
    /// {0.2,0.5,0.8}.
    #[arg(long, default_value = "default")]
    grid: String,
    /// Comma-separated settings: vanilla, enhanced, lifted, full, or raw
    /// `+`-joined cut lists like submodular+oa+ls.
    #[arg(long, default_value = "full")]
    settings: String,
    /// Override the number of facilities for every run.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    time_limit: Option<f64>,
    /// Independent solves run on this many worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t = OutputArg::Table)]
    output: OutputArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    stable_json: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SuiteArg {
    Lemmas,
    Cuts,
    Facets,
    Oracle,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: SuiteArg,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    cases: u64,
    /// Dump generated cuts to stderr while the cut suite runs.
    #[arg(long)]
    verbose: bool,
}

pub fn run_from_env() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let mut out = std::io::stdout();
    run(&args, &mut out)
}

/// Parses and executes; returns the process exit code
/// (0 solved/passed, 2 time limit, 1 error or violation).
pub fn run<W: Write>(args: &[String], out: &mut W) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // Help and version are not errors.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            eprintln!("{e}");
            return 1;
        }
    };
    let code = match cli.cmd {
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
    };
    match code {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn default_time_limit() -> f64 {
    std::env::var(TIME_LIMIT_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(f64::INFINITY)
}

fn load_instance(
    path: &Path,
    format: FormatArg,
    k: Option<u32>,
    theta: Option<f64>,
    r: Option<f64>,
    big_r: Option<f64>,
) -> Result<(Instance, Option<f64>, Option<f64>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    match format {
        FormatArg::Pmed => {
            let g = instance::parse_pmed(&text)?;
            let (r, big_r) = match (r, big_r) {
                (Some(r), Some(big_r)) => (r, big_r),
                _ => {
                    return Err(Error::Config(
                        "pmed instances need --r and --R coverage radii".into(),
                    ))
                }
            };
            let theta = theta.ok_or_else(|| Error::Config("pmed instances need --theta".into()))?;
            let k = k.unwrap_or(g.p_hint as u32);
            let inst = Instance::from_graph(&g, r, big_r, k, theta)?;
            Ok((inst, Some(r), Some(big_r)))
        }
        FormatArg::Native => {
            let mut inst = instance::parse_native(&text)?;
            if let Some(theta) = theta {
                inst = inst.with_theta(theta)?;
            }
            if let Some(k) = k {
                inst = inst.with_k(k)?;
            }
            Ok((inst, None, None))
        }
    }
}

fn cmd_solve<W: Write>(a: &SolveArgs, out: &mut W) -> Result<i32> {
    let (inst, r, big_r) = load_instance(&a.instance, a.format, Some(a.k), a.theta, a.r, a.big_r)?;
    let (inst, _report) = instance::preprocess(&inst);

    if let Some(path) = &a.dump_lp {
        let mut f = std::fs::File::create(path)?;
        bnc::write_root_relaxation(&inst, &mut f)?;
    }

    let names: Vec<&str> = a.cuts.split(',').collect();
    let cfg = SolverConfig {
        time_limit_s: a.time_limit.unwrap_or_else(default_time_limit),
        rel_gap: a.gap,
        enabled_cuts: EnabledCuts::from_names(&names)?,
        verbose: a.verbose,
        ..SolverConfig::default()
    };
    let res = bnc::solve(&inst, &cfg)?;

    let mut rec = RunRecord::from_result(
        a.instance
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| a.instance.display().to_string()),
        a.format.name().to_string(),
        r,
        big_r,
        inst.theta(),
        inst.k(),
        normalize_cuts(&a.cuts),
        inst.variable_count(),
        &res,
    );
    if a.stable_json {
        rec.wall_time_s = 0.0;
    }
    match a.output {
        OutputArg::Table => {
            writeln!(out, "{}", RunRecord::table_header())?;
            writeln!(out, "{}", rec.table_row())?;
        }
        OutputArg::Json => {
            writeln!(out, "{}", serde_json::to_string_pretty(&rec)?)?;
        }
    }
    Ok(match res.status {
        SolveStatus::Optimal => 0,
        SolveStatus::TimeLimit => 2,
    })
}

fn normalize_cuts(list: &str) -> String {
    let mut parts: Vec<String> = list
        .split(',')
        .map(|s| s.trim().to_ascii_lowercase())
        .filter(|s| !s.is_empty())
        .collect();
    parts.sort();
    parts.dedup();
    parts.join(",")
}

fn setting_preset(name: &str) -> Result<(String, EnabledCuts)> {
    let trimmed = name.trim();
    let set = match trimmed.to_ascii_lowercase().as_str() {
        "vanilla" => EnabledCuts::vanilla(),
        "enhanced" => EnabledCuts::enhanced(),
        "lifted" => EnabledCuts::lifted(),
        "full" => EnabledCuts::full(),
        _ => {
            let fams: Vec<&str> = trimmed.split('+').collect();
            let set = EnabledCuts::from_names(&fams)?;
            return Ok((trimmed.to_string(), set));
        }
    };
    Ok((trimmed.to_ascii_lowercase(), set))
}

/// Minimal `*` glob over one path: literal directories, wildcard file names.
fn expand_glob(pattern: &str) -> Result<Vec<PathBuf>> {
    let path = Path::new(pattern);
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    let (dir, file_pat) = match pattern.rfind('/') {
        Some(idx) => (&pattern[..idx], &pattern[idx + 1..]),
        None => (".", pattern),
    };
    let matches_pattern = |name: &str| -> bool {
        // Greedy segment matcher over '*' pieces.
        let parts: Vec<&str> = file_pat.split('*').collect();
        let mut rest = name;
        for (idx, part) in parts.iter().enumerate() {
            if part.is_empty() {
                continue;
            }
            if idx == 0 && !file_pat.starts_with('*') {
                match rest.strip_prefix(part) {
                    Some(r) => rest = r,
                    None => return false,
                }
            } else if idx == parts.len() - 1 && !file_pat.ends_with('*') {
                match rest.strip_suffix(part) {
                    Some(r) => rest = r,
                    None => return false,
                }
            } else {
                match rest.find(part) {
                    Some(at) => rest = &rest[at + part.len()..],
                    None => return false,
                }
            }
        }
        true
    };
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Config(format!("cannot list {dir}: {e}")))?
        .filter_map(|entry| entry.ok())
        .map(|entry| entry.path())
        .filter(|p| p.is_file())
        .filter(|p| {
            p.file_name()
                .map(|n| matches_pattern(&n.to_string_lossy()))
                .unwrap_or(false)
        })
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Config(format!(
            "no instance files match `{pattern}`"
        )));
    }
    Ok(files)
}

struct BenchTask {
    file: PathBuf,
    r: Option<f64>,
    big_r: Option<f64>,
    theta: f64,
    setting: String,
    cuts: EnabledCuts,
}

fn cmd_bench<W: Write>(a: &BenchArgs, out: &mut W) -> Result<i32> {
    let files = expand_glob(&a.instances)?;
    let grid: Vec<(Option<f64>, Option<f64>, f64)> = match a.grid.as_str() {
        "default" => {
            let mut g = Vec::new();
            for (r, big_r) in [(5.0, 20.0), (10.0, 25.0)] {
                for theta in [0.2, 0.5, 0.8] {
                    g.push((Some(r), Some(big_r), theta));
                }
            }
            g
        }
        other => {
            return Err(Error::Config(format!(
                "unknown grid `{other}` (only `default` is defined)"
            )))
        }
    };
    let settings: Vec<(String, EnabledCuts)> = a
        .settings
        .split(',')
        .map(setting_preset)
        .collect::<Result<_>>()?;
    for (_, set) in &settings {
        set.validate()?;
    }

    let mut tasks = Vec::new();
    for file in &files {
        for &(r, big_r, theta) in &grid {
            for (name, cuts) in &settings {
                tasks.push(BenchTask {
                    file: file.clone(),
                    r,
                    big_r,
                    theta,
                    setting: name.clone(),
                    cuts: *cuts,
                });
            }
        }
    }

    type TaskSlot = Option<Result<(usize, RunRecord)>>;
    let time_limit = a.time_limit.unwrap_or_else(default_time_limit);
    let results: Mutex<Vec<TaskSlot>> = Mutex::new((0..tasks.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let jobs = a.jobs.max(1);
    let format = a.format;
    let k_override = a.k;

    std::thread::scope(|scope| {
        for _ in 0..jobs.min(tasks.len().max(1)) {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::SeqCst);
                if idx >= tasks.len() {
                    break;
                }
                let outcome = run_bench_task(&tasks[idx], format, k_override, time_limit);
                results.lock().unwrap()[idx] = Some(outcome);
            });
        }
    });

    let mut records: Vec<(usize, RunRecord)> = Vec::with_capacity(tasks.len());
    for slot in results.into_inner().unwrap() {
        let (size, mut rec) = slot.expect("every task ran")?;
        if a.stable_json {
            rec.wall_time_s = 0.0;
        }
        records.push((size, rec));
    }
    let aggregates: Vec<AggregateRow> = aggregate(&records);

    match a.output {
        OutputArg::Table => {
            writeln!(out, "{}", RunRecord::table_header())?;
            for (_, rec) in &records {
                writeln!(out, "{}", rec.table_row())?;
            }
            writeln!(out)?;
            write!(out, "{}", aggregate_table(&aggregates))?;
        }
        OutputArg::Json => {
            #[derive(serde::Serialize)]
            struct BenchReport<'a> {
                records: Vec<&'a RunRecord>,
                aggregates: &'a [AggregateRow],
            }
            let report = BenchReport {
                records: records.iter().map(|(_, r)| r).collect(),
                aggregates: &aggregates,
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
        }
    }
    Ok(0)
}

fn run_bench_task(
    task: &BenchTask,
    format: FormatArg,
    k_override: Option<u32>,
    time_limit: f64,
) -> Result<(usize, RunRecord)> {
    let (inst, r, big_r) = load_instance(
        &task.file,
        format,
        k_override,
        Some(task.theta),
        task.r,
        task.big_r,
    )?;
    let size = inst.n_locations();
    let (inst, _) = instance::preprocess(&inst);
    let cfg = SolverConfig {
        time_limit_s: time_limit,
        enabled_cuts: task.cuts,
        ..SolverConfig::default()
    };
    let res = bnc::solve(&inst, &cfg)?;
    let rec = RunRecord::from_result(
        task.file
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        format.name().to_string(),
        r,
        big_r,
        inst.theta(),
        inst.k(),
        task.setting.clone(),
        inst.variable_count(),
        &res,
    );
    Ok((size, rec))
}

fn cmd_verify<W: Write>(a: &VerifyArgs, out: &mut W) -> Result<i32> {
    let run_cuts = |verbose: bool| {
        if verbose {
            let mut err = std::io::stderr();
            verify::cut_suite(a.seed, a.cases, Some(&mut err))
        } else {
            verify::cut_suite(a.seed, a.cases, None)
        }
    };
    let mut reports = Vec::new();
    match a.suite {
        SuiteArg::Lemmas => reports.push(verify::lemma_suite(a.seed, a.cases)),
        SuiteArg::Cuts => reports.push(run_cuts(a.verbose)),
        SuiteArg::Facets => reports.push(verify::facet_suite(a.seed, a.cases)),
        SuiteArg::Oracle => reports.push(verify::oracle_suite(a.seed, a.cases)),
        SuiteArg::All => {
            reports.push(verify::lemma_suite(a.seed, a.cases));
            reports.push(run_cuts(a.verbose));
            reports.push(verify::facet_suite(a.seed, a.cases));
            reports.push(verify::oracle_suite(a.seed, a.cases));
        }
    }
    let mut all_ok = true;
    for rep in &reports {
        let verdict = if rep.passed() { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "suite {:<8} {:>8} checks {:>4} violations  {verdict}",
            rep.name, rep.checks, rep.violations
        )?;
        for note in &rep.notes {
            writeln!(out, "    {note}")?;
        }
        all_ok &= rep.passed();
    }
    Ok(if all_ok { 0 } else { 1 })
}
