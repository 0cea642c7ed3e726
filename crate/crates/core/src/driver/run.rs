use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{mpsc, Arc};
use std::time::{Duration, Instant};

use super::report::{BatchReport, SpecResult, TaskReport, VerdictKind};
use super::{instantiate_model, BatchPlan, BatchTask, FailureCatalog, SpecCatalog};
use crate::checker::{check_bounded, replay_counterexample, CheckTask, Verdict, DEFAULT_TIMEOUT};
use crate::ltl::{parse_ltl, PrefixVerdict};
use crate::semantics::{load_model, TransitionSystem};

pub struct BatchInputs<'a> {
    pub template: &'a str,
    pub catalog: &'a FailureCatalog,
    pub specs: &'a SpecCatalog,
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub workers: usize,
    /// Budget per (combination, spec) unit.
    pub timeout: Duration,
    pub window: (usize, usize),
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            workers: 1,
            timeout: DEFAULT_TIMEOUT,
            window: super::DEFAULT_WINDOW,
        }
    }
}

type Instance = Result<(Arc<TransitionSystem>, Vec<(String, String)>), String>;

/// Check every (task, spec) unit of `plan` on `opts.workers` threads.
/// Units are handed out in plan order and results are merged back into
/// plan order, so the report does not depend on the worker count.
pub fn run_batch(plan: &BatchPlan, inputs: &BatchInputs, opts: &RunOptions) -> BatchReport {
    let started = Instant::now();
    let units: Vec<(usize, usize)> = plan
        .tasks
        .iter()
        .enumerate()
        .flat_map(|(t, task)| (0..task.specs.len()).map(move |k| (t, k)))
        .collect();
    let mut slots: Vec<Vec<Option<SpecResult>>> =
        plan.tasks.iter().map(|t| vec![None; t.specs.len()]).collect();

    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, usize, SpecResult)>();
    std::thread::scope(|scope| {
        for _ in 0..opts.workers.max(1) {
            let tx = tx.clone();
            let next = &next;
            let units = &units;
            scope.spawn(move || {
                let mut cache: Option<(usize, Instance)> = None;
                loop {
                    let u = next.fetch_add(1, Ordering::Relaxed);
                    let Some(&(t, k)) = units.get(u) else { break };
                    let task = &plan.tasks[t];
                    let t0 = Instant::now();
                    let outcome = catch_unwind(AssertUnwindSafe(|| {
                        if cache.as_ref().map(|c| c.0) != Some(t) {
                            cache = Some((t, build_instance(task, inputs, opts)));
                        }
                        let inst = &cache.as_ref().expect("just filled").1;
                        run_unit(task, k, inst, inputs, opts)
                    }));
                    let mut result = outcome.unwrap_or_else(|panic| {
                        cache = None;
                        let msg = panic
                            .downcast_ref::<&str>()
                            .map(|s| s.to_string())
                            .or_else(|| panic.downcast_ref::<String>().cloned())
                            .unwrap_or_else(|| "worker panicked".into());
                        error_result(&inputs.specs.specs[task.specs[k]].name, "", format!("worker crashed: {msg}"))
                    });
                    result.wall_ms = t0.elapsed().as_millis() as u64;
                    if tx.send((t, k, result)).is_err() {
                        break;
                    }
                }
            });
        }
        drop(tx);
        for (t, k, r) in rx {
            slots[t][k] = Some(r);
        }
    });

    let tasks = plan
        .tasks
        .iter()
        .zip(slots)
        .map(|(task, results)| {
            let results: Vec<SpecResult> = results
                .into_iter()
                .map(|r| r.expect("every unit reports"))
                .collect();
            TaskReport {
                row: task.row,
                col: task.col,
                combination: task.combination.to_string(),
                failures: task
                    .combination
                    .axes()
                    .into_iter()
                    .map(|i| inputs.catalog.axis(i).map(|e| e.id.clone()).unwrap_or_default())
                    .collect(),
                target: task.target.to_string(),
                wall_ms: results.iter().map(|r| r.wall_ms).sum(),
                results,
            }
        })
        .collect();
    let bound = plan.tasks.first().map(|t| t.bound).unwrap_or(super::DEFAULT_BOUND);
    BatchReport::new(
        bound,
        opts.window,
        opts.workers.max(1),
        tasks,
        started.elapsed().as_millis() as u64,
    )
}

fn build_instance(task: &BatchTask, inputs: &BatchInputs, opts: &RunOptions) -> Instance {
    let inst = instantiate_model(
        inputs.template,
        inputs.catalog,
        task.combination,
        &task.target,
        opts.window,
        inputs.specs,
        &task.specs,
    )
    .map_err(|e| e.to_string())?;
    let ts = load_model(&inst.source).map_err(|e| format!("instance does not load: {e}"))?;
    Ok((Arc::new(ts), inst.specs))
}

fn error_result(spec: &str, formula: &str, detail: String) -> SpecResult {
    SpecResult {
        spec: spec.to_string(),
        formula: formula.to_string(),
        verdict: VerdictKind::Error,
        trace: None,
        step: None,
        detail: Some(detail),
        wall_ms: 0,
        trace_text: None,
        trace_json: None,
    }
}

fn run_unit(task: &BatchTask, k: usize, inst: &Instance, inputs: &BatchInputs, opts: &RunOptions) -> SpecResult {
    let entry = &inputs.specs.specs[task.specs[k]];
    let (ts, specs) = match inst {
        Ok(i) => i,
        Err(e) => return error_result(&entry.name, "", e.clone()),
    };
    let (name, text) = &specs[k];
    let formula = match parse_ltl(text, ts) {
        Ok(f) => f,
        Err(e) => return error_result(name, text, e.to_string()),
    };
    let check = CheckTask {
        ts,
        formula: &formula,
        bound: task.bound,
        timeout: opts.timeout,
    };
    let mut r = error_result(name, text, String::new());
    r.detail = None;
    match check_bounded(&check) {
        Verdict::NoCounterexampleWithinBound(_) => {
            r.verdict = if entry.unbounded {
                VerdictKind::Inconclusive
            } else {
                VerdictKind::Pass
            };
        }
        Verdict::Counterexample { trace, step, .. } => match replay_counterexample(ts, &trace, &formula) {
            Ok(PrefixVerdict::Violated) => {
                r.verdict = VerdictKind::Violated;
                r.step = Some(step);
                r.trace = Some(format!("cex/{}/{}.trace", task.dir_name(), name));
                r.trace_text = Some(trace.to_text(ts));
                r.trace_json = Some(trace.to_json(ts));
            }
            other => {
                r.detail = Some(format!("counterexample did not replay: {other:?}"));
            }
        },
        Verdict::ModelError { step, detail } => {
            r.step = Some(step);
            r.detail = Some(format!("model error: {detail}"));
        }
        Verdict::Timeout(d) => {
            r.verdict = VerdictKind::Timeout;
            r.detail = Some(format!("no verdict within {} s", d.as_secs()));
        }
    }
    r
}
