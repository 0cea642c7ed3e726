use std::fmt::Write;

use super::policy::{target_mode, Effect};
use super::{ConfigError, Mutant, VcsConfig, INJECT_BEGIN, INJECT_END, MODES};

/// The four files of a demo bundle, as text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VcsBundle {
    pub model: String,
    pub failures: String,
    pub matrix: String,
    pub specs: String,
}

#[derive(Debug, Clone)]
struct Failure {
    id: String,
    var: String,
    kind: &'static str,
    effect: Effect,
}

pub fn generate_vcs_model(cfg: &VcsConfig) -> Result<VcsBundle, ConfigError> {
    cfg.validate()?;
    let failures = failure_list(cfg);
    Ok(VcsBundle {
        model: model_text(cfg, &failures),
        failures: catalog_text(cfg, &failures),
        matrix: matrix_text(cfg, &failures),
        specs: specs_text(cfg),
    })
}

fn failure_list(cfg: &VcsConfig) -> Vec<Failure> {
    let mut out = Vec::new();
    for i in 1..=cfg.n_ecus {
        out.push(Failure {
            id: format!("ECU{i}_OUTAGE"),
            var: format!("F_ECU{i}"),
            kind: "ecu",
            effect: Effect::UnitLost(i),
        });
    }
    for k in 1..=cfg.n_power {
        for what in ["OUT", "UV"] {
            out.push(Failure {
                id: format!("PWR{k}_{what}"),
                var: format!("F_P{k}_{what}"),
                kind: "power",
                effect: Effect::SupplyLost(k),
            });
        }
    }
    for b in 1..=cfg.n_buses {
        out.push(Failure {
            id: format!("BUS{b}_OUTAGE"),
            var: format!("F_BUS{b}"),
            kind: "bus",
            effect: Effect::CommLost,
        });
    }
    for (i, j) in cfg.signals() {
        out.push(Failure {
            id: format!("P2P_{i}_{j}"),
            var: format!("F_P2P_{i}_{j}"),
            kind: "p2p",
            effect: Effect::CommLost,
        });
    }
    out
}

/// Composite indicators: (name, conjuncts).
fn composites(cfg: &VcsConfig) -> Vec<(String, Vec<String>)> {
    vec![
        (
            "CF_DUAL_POWER_OUT".into(),
            vec!["F_P1_OUT".into(), "F_P2_OUT".into()],
        ),
        (
            "CF_PRIMARY_LOST".into(),
            (1..=cfg.primaries()).map(|i| format!("F_ECU{i}")).collect(),
        ),
        (
            "CF_ALL_BUSES".into(),
            (1..=cfg.n_buses).map(|b| format!("F_BUS{b}")).collect(),
        ),
    ]
}

fn supply_down(k: usize) -> String {
    format!("F_P{k}_OUT | F_P{k}_UV")
}

fn model_text(cfg: &VcsConfig, failures: &[Failure]) -> String {
    let n = cfg.n_ecus;
    let states = "{Init, Ready, Active, Passive}";
    let mut m = String::new();
    let w = &mut m;

    let buses = if cfg.n_buses == 1 { "1 bus".to_string() } else { format!("{} buses", cfg.n_buses) };
    writeln!(w, "-- Vehicle control system arbitration demo ({n} units, {buses}).").unwrap();
    writeln!(w, "-- One step stands for a 10 ms processing cycle.").unwrap();
    writeln!(w).unwrap();
    writeln!(w, "MODULE M_GLOBAL").unwrap();
    writeln!(w, "DEFINE").unwrap();
    writeln!(w, "  DEBOUNCE := {};", cfg.debounce_cycles).unwrap();
    writeln!(w, "  READY_HOLD := {};", cfg.ready_hold()).unwrap();
    writeln!(w, "  RUNUP := {};", cfg.runup_steps).unwrap();
    writeln!(w, "  DEADLINE := {};", cfg.mode_switch_deadline).unwrap();
    writeln!(w).unwrap();

    writeln!(w, "MODULE M_ECU (Prev, Fail, FailA, FailB, Global)").unwrap();
    writeln!(w, "VAR").unwrap();
    writeln!(w, "  S : {states};").unwrap();
    writeln!(w, "  Timer : 0..Global.READY_HOLD;").unwrap();
    writeln!(w, "ASSIGN").unwrap();
    writeln!(w, "  init (S) := Init;").unwrap();
    writeln!(w, "  next (S) :=").unwrap();
    writeln!(w, "    case").unwrap();
    writeln!(w, "      Fail : Passive;").unwrap();
    writeln!(w, "      FailA & FailB : Passive;").unwrap();
    writeln!(w, "      S = Passive : Passive;").unwrap();
    writeln!(w, "      S = Init & (Prev = Ready | Prev = Active) : Ready;").unwrap();
    writeln!(w, "      S = Ready & Timer = Global.READY_HOLD : Active;").unwrap();
    writeln!(w, "      TRUE : S;").unwrap();
    writeln!(w, "    esac;").unwrap();
    writeln!(w, "  init (Timer) := 0;").unwrap();
    writeln!(w, "  next (Timer) :=").unwrap();
    writeln!(w, "    case").unwrap();
    writeln!(w, "      S != Ready : 0;").unwrap();
    writeln!(w, "      Timer = Global.READY_HOLD : Timer;").unwrap();
    writeln!(w, "      S = Ready : Timer + 1;").unwrap();
    writeln!(w, "      TRUE : Timer;").unwrap();
    writeln!(w, "    esac;").unwrap();
    writeln!(w).unwrap();

    let signals = cfg.signals();
    let mut params: Vec<String> = (1..=n).map(|i| format!("S{i}")).collect();
    params.extend(signals.iter().map(|(i, j)| format!("D_{i}_{j}")));
    params.push("Global".into());
    writeln!(w, "-- Proxy for all inter-unit signals. A dropped signal keeps its last").unwrap();
    writeln!(w, "-- delivered value; DEBOUNCE consecutive drops latch a comm failure.").unwrap();
    writeln!(w, "MODULE M_BUS ({})", params.join(", ")).unwrap();
    writeln!(w, "VAR").unwrap();
    for (i, j) in &signals {
        writeln!(w, "  Fwd_{i}_{j} : {states};").unwrap();
        writeln!(w, "  Cnt_{i}_{j} : 0..Global.DEBOUNCE;").unwrap();
        writeln!(w, "  Lost_{i}_{j} : boolean;").unwrap();
    }
    writeln!(w, "DEFINE").unwrap();
    let lost: Vec<String> = signals.iter().map(|(i, j)| format!("Lost_{i}_{j}")).collect();
    writeln!(w, "  CommFault := {};", lost.join(" | ")).unwrap();
    writeln!(w, "ASSIGN").unwrap();
    for (i, j) in &signals {
        let d = format!("D_{i}_{j}");
        let s = format!("{i}_{j}");
        writeln!(w, "  init (Fwd_{s}) := Init;").unwrap();
        writeln!(w, "  next (Fwd_{s}) := case {d} : Fwd_{s}; TRUE : S{i}; esac;").unwrap();
        writeln!(w, "  init (Cnt_{s}) := 0;").unwrap();
        writeln!(w, "  next (Cnt_{s}) :=").unwrap();
        writeln!(w, "    case").unwrap();
        writeln!(w, "      !{d} : 0;").unwrap();
        writeln!(w, "      Cnt_{s} = Global.DEBOUNCE : Cnt_{s};").unwrap();
        writeln!(w, "      {d} : Cnt_{s} + 1;").unwrap();
        writeln!(w, "      TRUE : Cnt_{s};").unwrap();
        writeln!(w, "    esac;").unwrap();
        writeln!(w, "  init (Lost_{s}) := FALSE;").unwrap();
        writeln!(w, "  next (Lost_{s}) :=").unwrap();
        writeln!(w, "    case").unwrap();
        writeln!(w, "      Lost_{s} : TRUE;").unwrap();
        writeln!(w, "      {d} & Cnt_{s} + 1 = Global.DEBOUNCE : TRUE;").unwrap();
        writeln!(w, "      TRUE : FALSE;").unwrap();
        writeln!(w, "    esac;").unwrap();
    }
    writeln!(w).unwrap();

    writeln!(w, "MODULE main").unwrap();
    writeln!(w, "VAR").unwrap();
    writeln!(w, "  Global : M_GLOBAL;").unwrap();
    for i in 1..=n {
        let prev = if i == 1 {
            "Ready".to_string()
        } else {
            format!("bus.Fwd_{}_{i}", i - 1)
        };
        writeln!(
            w,
            "  e{i} : M_ECU({prev}, F_ECU{i}, {}, {}, Global);",
            supply_down(1),
            supply_down(2)
        )
        .unwrap();
    }
    let mut args: Vec<String> = (1..=n).map(|i| format!("e{i}.S")).collect();
    args.extend(
        signals
            .iter()
            .map(|(i, j)| format!("F_P2P_{i}_{j} | F_BUS{}", cfg.bus_of(*i))),
    );
    args.push("Global".into());
    writeln!(w, "  bus : M_BUS({});", args.join(", ")).unwrap();
    writeln!(w, "  Mode : {{{}}};", MODES.join(", ")).unwrap();
    writeln!(w, "  Started : boolean;").unwrap();
    writeln!(w, "  PwrLost : boolean;").unwrap();
    for (name, _) in composites(cfg) {
        writeln!(w, "  {name} : boolean;").unwrap();
    }
    let active = |r: std::ops::RangeInclusive<usize>, sep: &str| {
        r.map(|i| format!("e{i}.S = Active")).collect::<Vec<_>>().join(sep)
    };
    let p = cfg.primaries();
    writeln!(w, "DEFINE").unwrap();
    writeln!(w, "  AllActive := {};", active(1..=n, " & ")).unwrap();
    writeln!(w, "  PrimAlive := {};", active(1..=p, " | ")).unwrap();
    writeln!(w, "  BackAlive := {};", active(p + 1..=n, " | ")).unwrap();
    writeln!(w, "  SomeAlive := PrimAlive | BackAlive;").unwrap();
    writeln!(w, "  CommFault := bus.CommFault;").unwrap();
    writeln!(w, "  RunupDone := Started | AllActive;").unwrap();
    writeln!(w, "  CanNormal := AllActive & !CommFault & !PwrLost;").unwrap();
    writeln!(w, "  CanA := PrimAlive & BackAlive & !CommFault & !PwrLost;").unwrap();
    writeln!(w, "  CanB := BackAlive & !PwrLost;").unwrap();
    writeln!(w, "  CanC := SomeAlive & !CF_DUAL_POWER_OUT;").unwrap();
    for mode in MODES {
        writeln!(w, "  OpMode{mode} := Mode = {mode};").unwrap();
    }
    writeln!(w, "ASSIGN").unwrap();
    writeln!(w, "  init (Mode) := Startup;").unwrap();
    writeln!(w, "  next (Mode) :=").unwrap();
    writeln!(w, "    case").unwrap();
    writeln!(w, "      !RunupDone : Startup;").unwrap();
    writeln!(w, "      CanNormal : Normal;").unwrap();
    let arm_a = "      CanA : FallbackA;";
    let arm_b = "      CanB : FallbackB;";
    match cfg.mutant {
        Mutant::None => {
            writeln!(w, "{arm_a}").unwrap();
            writeln!(w, "{arm_b}").unwrap();
        }
        Mutant::SwappedFallbackPriority => {
            writeln!(w, "{arm_b}").unwrap();
            writeln!(w, "{arm_a}").unwrap();
        }
    }
    writeln!(w, "      CanC : FallbackC;").unwrap();
    writeln!(w, "      TRUE : SafeStop;").unwrap();
    writeln!(w, "    esac;").unwrap();
    writeln!(w, "  init (Started) := FALSE;").unwrap();
    writeln!(w, "  next (Started) := Started | AllActive;").unwrap();
    writeln!(w, "  init (PwrLost) := FALSE;").unwrap();
    writeln!(w, "  next (PwrLost) := PwrLost | {} | {};", supply_down(1), supply_down(2)).unwrap();
    for (name, parts) in composites(cfg) {
        writeln!(w, "  init ({name}) := FALSE;").unwrap();
        writeln!(w, "  next ({name}) := {};", parts.join(" & ")).unwrap();
    }
    writeln!(w).unwrap();
    writeln!(w, "{INJECT_BEGIN}").unwrap();
    writeln!(w, "-- Failure variables; the batch driver replaces this region per").unwrap();
    writeln!(w, "-- failure combination. Without injection no failure occurs.").unwrap();
    writeln!(w, "VAR").unwrap();
    for f in failures {
        writeln!(w, "  {} : boolean;", f.var).unwrap();
    }
    writeln!(w, "ASSIGN").unwrap();
    for f in failures {
        writeln!(w, "  init ({}) := FALSE;", f.var).unwrap();
        writeln!(w, "  next ({}) := FALSE;", f.var).unwrap();
    }
    writeln!(w, "{INJECT_END}").unwrap();
    m
}

fn catalog_text(cfg: &VcsConfig, failures: &[Failure]) -> String {
    let mut out = String::from("index,id,variable,kind\n");
    let mut index = 0;
    for f in failures {
        index += 1;
        writeln!(out, "{index},{},{},{}", f.id, f.var, f.kind).unwrap();
    }
    for (name, _) in composites(cfg) {
        index += 1;
        writeln!(out, "{index},{name},{name},composite").unwrap();
    }
    out
}

fn matrix_text(cfg: &VcsConfig, failures: &[Failure]) -> String {
    let n = failures.len();
    let mut out = String::from("first\\second");
    for j in 1..=n {
        write!(out, ",{j}").unwrap();
    }
    out.push('\n');
    for (i, a) in failures.iter().enumerate() {
        write!(out, "{}", i + 1).unwrap();
        for (j, b) in failures.iter().enumerate() {
            let effects = if i == j {
                vec![a.effect]
            } else {
                vec![a.effect, b.effect]
            };
            write!(out, ",{}", target_mode(cfg, &effects).unwrap_or("FATAL")).unwrap();
        }
        out.push('\n');
    }
    out
}

fn specs_text(cfg: &VcsConfig) -> String {
    let runup = cfg.runup_steps;
    let dl = cfg.mode_switch_deadline;
    let est = |x: &str| format!("({x} & Y {x} & Y Y {x})");
    let exactly_one = {
        let names: Vec<String> = MODES.iter().map(|m| format!("OpMode{m}")).collect();
        let mut parts = vec![format!("({})", names.join(" | "))];
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                parts.push(format!("!({} & {})", names[i], names[j]));
            }
        }
        parts.join(" & ")
    };
    let records: Vec<(&str, &str, String, &str)> = vec![
        (
            "mode_unique",
            "all",
            format!("G ({exactly_one})"),
            "exactly one operation-mode indicator holds in every state",
        ),
        (
            "runup",
            "all",
            format!("G[0,{}] Mode = Startup & F[{runup},{runup}] Mode = Normal", runup - 1),
            "normal operation is reached after exactly the run-up phase",
        ),
        (
            "no_return_to_startup",
            "all",
            "G (Mode != Startup -> G Mode != Startup)".into(),
            "the run-up phase is never re-entered",
        ),
        (
            "ordered_degradation",
            "all",
            "G ((Mode = FallbackA -> X (Mode != Normal & Mode != Startup)) & \
             (Mode = FallbackB -> X (Mode = FallbackB | Mode = FallbackC | Mode = SafeStop)) & \
             (Mode = FallbackC -> X (Mode = FallbackC | Mode = SafeStop)))"
                .into(),
            "modes only degrade along Normal, FallbackA, FallbackB, FallbackC, SafeStop",
        ),
        (
            "safestop_absorbing",
            "all",
            "G (Mode = SafeStop -> X Mode = SafeStop)".into(),
            "safe stop is final",
        ),
        (
            "fallback_requires_failure",
            "all",
            "G ((Mode != Normal & Mode != Startup) -> O {{FAIL_A}})".into(),
            "no degraded mode without a preceding failure",
        ),
        (
            "exclusive_fallbacks",
            "single",
            "G !(O OpModeFallbackA & O OpModeFallbackB)".into(),
            "a single failure never activates both fallback A and fallback B",
        ),
        (
            "deadline_single",
            "single",
            format!("G ({} -> F[0,{dl}] Mode = {{{{TARGET_MODE}}}})", est("{{FAIL_A}}")),
            "an established failure leads to the target mode within the deadline",
        ),
        (
            "hold_single",
            "single",
            "G ((Mode = {{TARGET_MODE}} & O {{FAIL_A}}) -> G Mode = {{TARGET_MODE}})".into(),
            "once reached after the failure, the target mode is kept",
        ),
        (
            "deadline_double",
            "double",
            format!(
                "G ((O {} & {}) -> F[0,{dl}] Mode = {{{{TARGET_MODE}}}})",
                est("{{FAIL_A}}"),
                est("{{FAIL_B}}")
            ),
            "once both failures are established the target mode follows within the deadline",
        ),
        (
            "hold_double",
            "double",
            "G ((Mode = {{TARGET_MODE}} & O {{FAIL_A}} & O {{FAIL_B}}) -> G Mode = {{TARGET_MODE}})"
                .into(),
            "once reached after both failures, the target mode is kept",
        ),
        (
            "runup_exact",
            "none",
            format!("G[0,{}] !OpModeNormal & G[{runup},70] OpModeNormal", runup - 1),
            "failure-free: normal from the end of run-up through the bound",
        ),
        (
            "stays_normal",
            "none",
            "G (Mode = Startup | Mode = Normal)".into(),
            "failure-free: no degraded mode is ever entered",
        ),
        (
            "eventually_normal",
            "none",
            "F Mode = Normal".into(),
            "failure-free liveness; unbounded, kept to show the load-time warning",
        ),
    ];
    let mut out = String::from(
        "# Specification catalog for the vehicle control system demo.\n\
         # Placeholders: {{FAIL_A}} and {{FAIL_B}} are the failure variables of a\n\
         # combination, {{TARGET_MODE}} its target mode from the matrix.\n",
    );
    for (name, app, formula, doc) in records {
        write!(out, "\n# {doc}\nspec: {name}\napplicability: {app}\nformula: {formula}\n").unwrap();
    }
    out
}
