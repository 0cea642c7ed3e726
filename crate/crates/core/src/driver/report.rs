use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum VerdictKind {
    Pass,
    Violated,
    Inconclusive,
    Timeout,
    Error,
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VerdictKind::Pass => "PASS",
            VerdictKind::Violated => "VIOLATED",
            VerdictKind::Inconclusive => "INCONCLUSIVE",
            VerdictKind::Timeout => "TIMEOUT",
            VerdictKind::Error => "ERROR",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecResult {
    pub spec: String,
    /// The formula after placeholder substitution.
    pub formula: String,
    pub verdict: VerdictKind,
    /// Counterexample file relative to the report directory.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    /// Step at which the counterexample violates the formula.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub wall_ms: u64,
    #[serde(skip)]
    pub trace_text: Option<String>,
    #[serde(skip)]
    pub trace_json: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskReport {
    pub row: usize,
    pub col: usize,
    pub combination: String,
    pub failures: Vec<String>,
    pub target: String,
    pub results: Vec<SpecResult>,
    /// Sum of the units' wall times.
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub tasks: usize,
    pub units: usize,
    pub pass: usize,
    pub violated: usize,
    pub inconclusive: usize,
    pub timeout: usize,
    pub error: usize,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchReport {
    pub bound: usize,
    pub window: (usize, usize),
    pub workers: usize,
    pub tasks: Vec<TaskReport>,
    pub summary: Summary,
}

impl BatchReport {
    pub(crate) fn new(bound: usize, window: (usize, usize), workers: usize, tasks: Vec<TaskReport>, elapsed_ms: u64) -> Self {
        let mut summary = Summary {
            tasks: tasks.len(),
            elapsed_ms,
            ..Summary::default()
        };
        for r in tasks.iter().flat_map(|t| &t.results) {
            summary.units += 1;
            *match r.verdict {
                VerdictKind::Pass => &mut summary.pass,
                VerdictKind::Violated => &mut summary.violated,
                VerdictKind::Inconclusive => &mut summary.inconclusive,
                VerdictKind::Timeout => &mut summary.timeout,
                VerdictKind::Error => &mut summary.error,
            } += 1;
        }
        BatchReport {
            bound,
            window,
            workers,
            tasks,
            summary,
        }
    }

    /// 2 if any unit errored or timed out, else 1 if any was violated,
    /// else 0.
    pub fn exit_code(&self) -> i32 {
        if self.summary.error + self.summary.timeout > 0 {
            2
        } else if self.summary.violated > 0 {
            1
        } else {
            0
        }
    }

    /// Pretty JSON. Without timing, wall times and the worker count are
    /// zeroed so two runs over the same inputs compare equal byte for
    /// byte.
    pub fn to_json(&self, with_timing: bool) -> String {
        let mut r = self.clone();
        if !with_timing {
            r.workers = 0;
            r.summary.elapsed_ms = 0;
            for t in &mut r.tasks {
                t.wall_ms = 0;
                for u in &mut t.results {
                    u.wall_ms = 0;
                }
            }
        }
        serde_json::to_string_pretty(&r).expect("report serializes") + "\n"
    }

    pub fn summary_table(&self) -> String {
        let s = &self.summary;
        let mut out = String::new();
        writeln!(
            out,
            "{:>4} {:>4}  {:<24} {:<10} {:>4} {:>4} {:>4} {:>4} {:>4} {:>9}  violated",
            "row", "col", "failures", "target", "PASS", "VIOL", "INC", "TO", "ERR", "wall_ms"
        )
        .unwrap();
        for t in &self.tasks {
            let count = |k| t.results.iter().filter(|r| r.verdict == k).count();
            let bad: Vec<&str> = t
                .results
                .iter()
                .filter(|r| r.verdict != VerdictKind::Pass && r.verdict != VerdictKind::Inconclusive)
                .map(|r| r.spec.as_str())
                .collect();
            writeln!(
                out,
                "{:>4} {:>4}  {:<24} {:<10} {:>4} {:>4} {:>4} {:>4} {:>4} {:>9}  {}",
                t.row,
                t.col,
                t.failures.join("+"),
                t.target,
                count(VerdictKind::Pass),
                count(VerdictKind::Violated),
                count(VerdictKind::Inconclusive),
                count(VerdictKind::Timeout),
                count(VerdictKind::Error),
                t.wall_ms,
                bad.join(" ")
            )
            .unwrap();
        }
        writeln!(out).unwrap();
        writeln!(
            out,
            "tasks {}  units {}  PASS {}  VIOLATED {}  INCONCLUSIVE {}  TIMEOUT {}  ERROR {}",
            s.tasks, s.units, s.pass, s.violated, s.inconclusive, s.timeout, s.error
        )
        .unwrap();
        writeln!(
            out,
            "bound {}  window [{}, {}]  workers {}  elapsed {:.1} s",
            self.bound,
            self.window.0,
            self.window.1,
            self.workers,
            s.elapsed_ms as f64 / 1000.0
        )
        .unwrap();
        out
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{path}: {source}")]
pub struct ReportError {
    pub path: PathBuf,
    pub source: std::io::Error,
}

/// Write `report.json`, `summary.txt` and one directory of counterexample
/// traces per combination that has any. Returns the files written.
pub fn write_report(report: &BatchReport, dir: &Path) -> Result<Vec<PathBuf>, ReportError> {
    let mut written = Vec::new();
    let mut put = |path: PathBuf, text: &str| -> Result<(), ReportError> {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|source| ReportError {
                path: parent.to_path_buf(),
                source,
            })?;
        }
        std::fs::write(&path, text).map_err(|source| ReportError {
            path: path.clone(),
            source,
        })?;
        written.push(path);
        Ok(())
    };
    put(dir.join("report.json"), &report.to_json(true))?;
    put(dir.join("summary.txt"), &report.summary_table())?;
    for r in report.tasks.iter().flat_map(|t| &t.results) {
        if let (Some(rel), Some(text)) = (&r.trace, &r.trace_text) {
            let path = dir.join(rel);
            put(path.clone(), text)?;
            if let Some(json) = &r.trace_json {
                put(path.with_extension("json"), json)?;
            }
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_has_no_combination_dirs() {
        let dir = tempfile::tempdir().unwrap();
        let report = BatchReport::new(70, (15, 40), 4, Vec::new(), 3);
        let files = write_report(&report, dir.path()).unwrap();
        assert_eq!(files.len(), 2);
        assert!(!dir.path().join("cex").exists());
        let summary = std::fs::read_to_string(dir.path().join("summary.txt")).unwrap();
        assert!(summary.contains("tasks 0  units 0"));
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn exit_code_precedence() {
        let unit = |v| SpecResult {
            spec: "s".into(),
            formula: "TRUE".into(),
            verdict: v,
            trace: None,
            step: None,
            detail: None,
            wall_ms: 1,
            trace_text: None,
            trace_json: None,
        };
        let task = |vs: Vec<VerdictKind>| TaskReport {
            row: 1,
            col: 0,
            combination: "1".into(),
            failures: vec!["A".into()],
            target: "X".into(),
            results: vs.into_iter().map(unit).collect(),
            wall_ms: 1,
        };
        let r = |vs| BatchReport::new(70, (15, 40), 1, vec![task(vs)], 1);
        assert_eq!(r(vec![VerdictKind::Pass, VerdictKind::Inconclusive]).exit_code(), 0);
        assert_eq!(r(vec![VerdictKind::Pass, VerdictKind::Violated]).exit_code(), 1);
        assert_eq!(r(vec![VerdictKind::Violated, VerdictKind::Timeout]).exit_code(), 2);
        assert_eq!(r(vec![VerdictKind::Error]).exit_code(), 2);
    }
}
