use std::path::Path;
use std::process::{Command, Output};

fn vcscheck(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vcscheck"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn gen(dir: &Path, extra: &[&str]) {
    let mut args = vec!["gen-vcs", "--out", "b"];
    args.extend_from_slice(extra);
    let o = vcscheck(&args, dir);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["vcs.fsm", "failures.csv", "target_modes.csv", "specs.ltl"] {
        assert!(dir.join("b").join(f).exists(), "{f}");
    }
}

const BATCH: &[&str] = &[
    "batch",
    "--template",
    "b/vcs.fsm",
    "--failures",
    "b/failures.csv",
    "--matrix",
    "b/target_modes.csv",
    "--specs",
    "b/specs.ltl",
];

#[test]
fn batch_range_passes_on_the_correct_model() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), &["--desk"]);
    let mut args = BATCH.to_vec();
    args.extend(["--range", "1", "1", "2", "2", "--workers", "2", "--out", "rep"]);
    let o = vcscheck(&args, dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let summary = std::fs::read_to_string(dir.path().join("rep/summary.txt")).unwrap();
    assert!(summary.contains("tasks 4 "), "{summary}");
    assert!(dir.path().join("rep/report.json").exists());
    assert!(!dir.path().join("rep/cex").exists());
}

#[test]
fn batch_on_mutant_exits_one_and_files_traces() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), &["--mutant", "swapped-fallback-priority"]);
    let mut args = BATCH.to_vec();
    args.extend(["--range", "1", "1", "1", "1", "--out", "rep"]);
    let o = vcscheck(&args, dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(dir.path().join("rep/cex/r01_c01/deadline_single.trace").exists());
    assert!(dir.path().join("rep/cex/r01_c01/deadline_single.json").exists());
}

#[test]
fn bad_range_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), &[]);
    let mut args = BATCH.to_vec();
    args.extend(["--range", "1", "1", "99", "2"]);
    let o = vcscheck(&args, dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("outside"));
}

#[test]
fn check_named_and_inline_properties() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), &[]);
    let o = vcscheck(&["check", "b/vcs.fsm", "--prop", "runup_exact"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("PASS"));

    let o = vcscheck(&["check", "b/vcs.fsm", "--prop", "eventually_normal"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("INCONCLUSIVE"));

    let o = vcscheck(
        &["check", "b/vcs.fsm", "--formula", "G Mode = Startup", "--trace-out", "cex.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("VIOLATED at step 15"), "{}", stdout(&o));
    assert!(dir.path().join("cex.json").exists());

    let o = vcscheck(&["check", "b/vcs.fsm", "--prop", "deadline_single"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_prints_requested_steps() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), &[]);
    let o = vcscheck(&["simulate", "b/vcs.fsm", "--steps", "16"], dir.path());
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.matches("step ").count(), 17);
    let last = out.rsplit("step 16").next().unwrap();
    assert!(last.contains("Mode = Normal"));
    let o = vcscheck(&["simulate", "b/vcs.fsm", "--steps", "3", "--seed", "7", "--json"], dir.path());
    assert!(stdout(&o).trim_start().starts_with('{'));
}

#[test]
fn gen_vcs_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let o = vcscheck(&["gen-vcs", "--ecus", "1", "--out", "x"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = vcscheck(&["gen-vcs", "--mutant", "nope", "--out", "x"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}
