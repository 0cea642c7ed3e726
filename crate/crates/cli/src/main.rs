use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use vcscheck::checker::{check_bounded, CheckTask, Verdict, DEFAULT_BOUND};
use vcscheck::driver::{
    load_failure_catalog, load_spec_catalog, load_target_matrix, plan_batch, run_batch, write_report,
    BatchInputs, PlanRange, RunOptions, DEFAULT_WINDOW,
};
use vcscheck::ltl::parse_ltl;
use vcscheck::semantics::{load_model, simulate, Domain, FirstChoice, RandomChoice, SimError, TransitionSystem};
use vcscheck::vcs::{generate_vcs_model, Mutant, VcsConfig, FAILURES_FILE, MATRIX_FILE, MODEL_FILE, SPECS_FILE};

#[derive(Parser)]
#[command(name = "vcscheck", version, about = "Bounded model checking with fault-combination batches")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every failure combination in a matrix range against the spec catalog.
    Batch(BatchArgs),
    /// Check one property of a model.
    Check(CheckArgs),
    /// Print a simulated run of a model.
    Simulate(SimulateArgs),
    /// Write the vehicle control system demo bundle.
    GenVcs(GenArgs),
}

#[derive(Args)]
struct BatchArgs {
    #[arg(long)]
    template: PathBuf,
    #[arg(long)]
    failures: PathBuf,
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    specs: PathBuf,
    /// First row, first column, last row, last column (1-based, inclusive).
    #[arg(long, num_args = 4, value_names = ["R1", "C1", "R2", "C2"], conflicts_with_all = ["singles", "full"])]
    range: Option<Vec<usize>>,
    /// Only the single-failure scenarios.
    #[arg(long, conflicts_with = "full")]
    singles: bool,
    /// All single failures and all ordered pairs (the default).
    #[arg(long)]
    full: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    bound: usize,
    /// Budget per (combination, spec) check.
    #[arg(long, default_value_t = 900)]
    timeout: u64,
    /// First step at which an injected failure may be active.
    #[arg(long, default_value_t = DEFAULT_WINDOW.0)]
    window_start: usize,
    /// Last step at which an injected failure may start.
    #[arg(long, default_value_t = DEFAULT_WINDOW.1)]
    window_end: usize,
    #[arg(long, default_value = "report")]
    out: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    model: PathBuf,
    /// Spec name from the spec catalog.
    #[arg(long, required_unless_present = "formula")]
    prop: Option<String>,
    /// Formula text instead of a named spec.
    #[arg(long, conflicts_with = "prop")]
    formula: Option<String>,
    /// Spec catalog; defaults to specs.ltl next to the model.
    #[arg(long)]
    specs: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    bound: usize,
    #[arg(long, default_value_t = 900)]
    timeout: u64,
    /// Also write the counterexample trace here (JSON if the name ends in .json).
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    model: PathBuf,
    #[arg(long)]
    steps: usize,
    /// Random choices from this seed; without it the first choice is taken.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    ecus: Option<usize>,
    #[arg(long)]
    buses: Option<usize>,
    /// 4 units, 1 bus (the default).
    #[arg(long, conflicts_with = "full")]
    desk: bool,
    /// 7 units, 3 buses, 42 failure axes.
    #[arg(long)]
    full: bool,
    /// `none` or `swapped-fallback-priority`.
    #[arg(long, default_value = "none")]
    mutant: String,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Batch(a) => batch(a),
        Command::Check(a) => check(a),
        Command::Simulate(a) => simulate_cmd(a),
        Command::GenVcs(a) => gen_vcs(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> Result<(String, TransitionSystem)> {
    let src = read(path)?;
    let ts = load_model(&src).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    Ok((src, ts))
}

/// Values of the template's `Mode` variable, or every enumeration symbol
/// if there is none.
fn mode_names(ts: &TransitionSystem) -> Vec<String> {
    match ts.var_index("Mode").map(|i| &ts.vars[i].domain) {
        Some(Domain::Enum(syms)) => syms.iter().map(|s| ts.symbol_name(*s).to_string()).collect(),
        _ => ts.symbols.clone(),
    }
}

fn batch(a: BatchArgs) -> Result<u8> {
    let (template, ts) = load(&a.template)?;
    let catalog = load_failure_catalog(&a.failures)?;
    let unresolved = catalog.unresolved(&ts);
    if !unresolved.is_empty() {
        bail!("{}: variables not in the template: {}", a.failures.display(), unresolved.join(", "));
    }
    let modes = mode_names(&ts);
    let modes: Vec<&str> = modes.iter().map(String::as_str).collect();
    let matrix = load_target_matrix(&a.matrix, &catalog, &modes)?;
    let specs = load_spec_catalog(&a.specs, &ts)?;
    for w in &specs.warnings {
        eprintln!("warning: {w}");
    }
    let range = match (&a.range, a.singles) {
        (Some(r), _) => PlanRange::Cells {
            r1: r[0],
            c1: r[1],
            r2: r[2],
            c2: r[3],
        },
        (None, true) => PlanRange::Singles,
        (None, false) => PlanRange::Full,
    };
    let plan = plan_batch(&catalog, &matrix, &specs, range, a.bound)?;
    eprintln!("{} tasks, {} checks", plan.tasks.len(), plan.tasks.iter().map(|t| t.specs.len()).sum::<usize>());
    let opts = RunOptions {
        workers: a.workers,
        timeout: Duration::from_secs(a.timeout),
        window: (a.window_start, a.window_end),
    };
    let inputs = BatchInputs {
        template: &template,
        catalog: &catalog,
        specs: &specs,
    };
    let report = run_batch(&plan, &inputs, &opts);
    write_report(&report, &a.out)?;
    print!("{}", report.summary_table());
    println!("report written to {}", a.out.display());
    Ok(report.exit_code() as u8)
}

fn check(a: CheckArgs) -> Result<u8> {
    let (_, ts) = load(&a.model)?;
    let text = match (&a.prop, &a.formula) {
        (_, Some(f)) => f.clone(),
        (Some(name), None) => {
            let path = a
                .specs
                .clone()
                .unwrap_or_else(|| a.model.with_file_name(SPECS_FILE));
            let catalog = load_spec_catalog(&path, &ts)?;
            let spec = catalog
                .get(name)
                .ok_or_else(|| anyhow!("no spec `{name}` in {}", path.display()))?;
            if spec.formula.contains("{{") {
                bail!("spec `{name}` has placeholders; it only runs inside a batch");
            }
            spec.formula.clone()
        }
        (None, None) => unreachable!("clap requires --prop or --formula"),
    };
    let formula = parse_ltl(&text, &ts)?;
    let task = CheckTask {
        ts: &ts,
        formula: &formula,
        bound: a.bound,
        timeout: Duration::from_secs(a.timeout),
    };
    match check_bounded(&task) {
        Verdict::NoCounterexampleWithinBound(k) => {
            if formula.has_unbounded_liveness() {
                println!("INCONCLUSIVE: no counterexample within bound {k}; the formula has an unbounded F or G");
            } else {
                println!("PASS: no counterexample within bound {k}");
            }
            Ok(0)
        }
        Verdict::Counterexample { trace, step, .. } => {
            println!("VIOLATED at step {step}");
            print!("{}", trace.to_text(&ts));
            if let Some(path) = &a.trace_out {
                let body = if path.extension().is_some_and(|e| e == "json") {
                    trace.to_json(&ts)
                } else {
                    trace.to_text(&ts)
                };
                std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(1)
        }
        Verdict::ModelError { step, detail } => {
            println!("ERROR: model error at step {step}: {detail}");
            Ok(2)
        }
        Verdict::Timeout(d) => {
            println!("TIMEOUT after {} s", d.as_secs());
            Ok(2)
        }
    }
}

fn simulate_cmd(a: SimulateArgs) -> Result<u8> {
    let (_, ts) = load(&a.model)?;
    let result = match a.seed {
        Some(seed) => simulate(&ts, a.steps, &mut RandomChoice::new(seed)),
        None => simulate(&ts, a.steps, &mut FirstChoice),
    };
    let (trace, code) = match result {
        Ok(t) => (t, 0),
        Err(SimError::Model { step, error, prefix }) => {
            eprintln!("model error at step {step}: {error}");
            (prefix, 2)
        }
        Err(e) => bail!(e),
    };
    if a.json {
        println!("{}", trace.to_json(&ts));
    } else {
        print!("{}", trace.to_text(&ts));
    }
    Ok(code)
}

fn gen_vcs(a: GenArgs) -> Result<u8> {
    let mut cfg = if a.full && !a.desk { VcsConfig::full() } else { VcsConfig::desk() };
    if let Some(n) = a.ecus {
        cfg.n_ecus = n;
        cfg.p2p_reach = cfg.p2p_reach.min(n.saturating_sub(1)).max(1);
    }
    if let Some(b) = a.buses {
        cfg.n_buses = b;
    }
    cfg.mutant = a.mutant.parse::<Mutant>().map_err(|e| anyhow!(e))?;
    let bundle = generate_vcs_model(&cfg)?;
    std::fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    for (name, body) in [
        (MODEL_FILE, &bundle.model),
        (FAILURES_FILE, &bundle.failures),
        (MATRIX_FILE, &bundle.matrix),
        (SPECS_FILE, &bundle.specs),
    ] {
        let path = a.out.join(name);
        std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    Ok(0)
}
