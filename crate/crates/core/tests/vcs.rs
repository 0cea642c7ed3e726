//! Behaviour of the generated vehicle control system bundles.

use vcscheck::checker::{check_bounded, CheckTask, Verdict};
use vcscheck::driver::{
    instantiate_model, parse_failure_catalog, parse_spec_catalog, parse_target_matrix, Combination,
    FailureCatalog, FailureKind, SpecCatalog, TargetCell, DEFAULT_WINDOW,
};
use vcscheck::ltl::parse_ltl;
use vcscheck::semantics::{
    load_model, simulate, FirstChoice, RandomChoice, ScriptedChoice, State, Trace, TransitionSystem,
};
use vcscheck::vcs::{generate_vcs_model, VcsBundle, VcsConfig, MODES};

fn show(ts: &TransitionSystem, s: &State, name: &str) -> String {
    ts.show(s, name).unwrap_or_else(|| panic!("no variable {name}"))
}

fn bundle(cfg: &VcsConfig) -> (VcsBundle, TransitionSystem, FailureCatalog) {
    let b = generate_vcs_model(cfg).unwrap();
    let ts = load_model(&b.model).unwrap();
    let cat = parse_failure_catalog(&b.failures).unwrap();
    (b, ts, cat)
}

/// Instance of `combo` with failures allowed to start anywhere in the
/// default window.
fn instance(b: &VcsBundle, cat: &FailureCatalog, combo: Combination) -> TransitionSystem {
    let inst = instantiate_model(
        &b.model,
        cat,
        combo,
        &TargetCell::Fatal,
        DEFAULT_WINDOW,
        &SpecCatalog::default(),
        &[],
    )
    .unwrap();
    load_model(&inst.source).unwrap()
}

fn axis_of(cat: &FailureCatalog, var: &str) -> usize {
    cat.axes().iter().position(|e| e.variable == var).unwrap() + 1
}

#[test]
fn failure_free_runup_reaches_normal_at_15_and_holds() {
    for cfg in [VcsConfig::desk(), VcsConfig::full()] {
        let (_, ts, _) = bundle(&cfg);
        assert_eq!(ts.initial_states().len(), 1);
        let trace = simulate(&ts, 70, &mut FirstChoice).unwrap();
        for (t, s) in trace.states.iter().enumerate() {
            let expected = if t < 15 { "Startup" } else { "Normal" };
            assert_eq!(show(&ts, s, "Mode"), expected, "n_ecus {} step {t}", cfg.n_ecus);
        }
    }
}

#[test]
fn runup_is_deterministic() {
    let (_, ts, _) = bundle(&VcsConfig::desk());
    let a = simulate(&ts, 40, &mut FirstChoice).unwrap();
    let b = simulate(&ts, 40, &mut RandomChoice::new(99)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn mode_indicator_is_unique_everywhere() {
    let (b, ts, _) = bundle(&VcsConfig::desk());
    let specs = parse_spec_catalog(&b.specs, &ts).unwrap();
    let f = parse_ltl(&specs.get("mode_unique").unwrap().formula, &ts).unwrap();
    assert_eq!(
        check_bounded(&CheckTask::new(&ts, &f, 70)),
        Verdict::NoCounterexampleWithinBound(70)
    );
}

#[test]
fn catalog_counts_match_hand_count() {
    // desk: 4 unit outages, 2 supplies x {outage, undervoltage}, 1 bus,
    // and one signal from each unit to the next in the ring.
    let (_, _, desk) = bundle(&VcsConfig::desk());
    assert_eq!(desk.axes().len(), 4 + 4 + 1 + 4);
    assert_eq!(desk.entries.len(), 13 + 3);

    // full: 7 units, 4 power entries, 3 buses, every unit sends to its
    // next four ring neighbours.
    let (_, _, full) = bundle(&VcsConfig::full());
    let count = |k| full.axes().iter().filter(|e| e.kind == k).count();
    assert_eq!(count(FailureKind::Ecu), 7);
    assert_eq!(count(FailureKind::Power), 4);
    assert_eq!(count(FailureKind::Bus), 3);
    assert_eq!(count(FailureKind::P2p), 7 * 4);
    assert_eq!(full.axes().len(), 42);
    assert_eq!(full.entries.len(), 45);
}

#[test]
fn catalog_variables_resolve_in_template() {
    for cfg in [VcsConfig::desk(), VcsConfig::full()] {
        let (_, ts, cat) = bundle(&cfg);
        assert!(cat.unresolved(&ts).is_empty());
    }
}

/// Target modes of the desk bundle restated from the fallback rules:
/// units 1 and 2 form the primary channel, 3 and 4 the backup.
fn desk_oracle(a: &str, b: &str) -> &'static str {
    let supply = |id: &str| id.strip_prefix("PWR").map(|r| r.as_bytes()[0]);
    if let (Some(x), Some(y)) = (supply(a), supply(b)) {
        if x != y {
            return "FATAL";
        }
    }
    if supply(a).is_some() || supply(b).is_some() {
        return "FallbackC";
    }
    let comm = |id: &str| id.starts_with("BUS") || id.starts_with("P2P");
    if comm(a) || comm(b) {
        return "FallbackB";
    }
    let lost: Vec<&str> = [a, b].into_iter().filter(|id| id.starts_with("ECU")).collect();
    let primary = |id: &&&str| **id == "ECU1_OUTAGE" || **id == "ECU2_OUTAGE";
    let prim_lost = lost.iter().filter(primary).count();
    let back_lost = lost.len() - prim_lost;
    if a != b && prim_lost == 2 {
        "FallbackB"
    } else if a != b && back_lost == 2 {
        "FallbackC"
    } else {
        "FallbackA"
    }
}

#[test]
fn desk_matrix_matches_fallback_rules() {
    let (b, _, cat) = bundle(&VcsConfig::desk());
    let m = parse_target_matrix(&b.matrix, &cat, &MODES).unwrap();
    let axes = cat.axes();
    let mut fatal = 0;
    for (i, a) in axes.iter().enumerate() {
        for (j, c) in axes.iter().enumerate() {
            let got = m.get(i + 1, j + 1).to_string();
            assert_eq!(got, desk_oracle(&a.id, &c.id), "{} then {}", a.id, c.id);
            fatal += usize::from(got == "FATAL");
        }
    }
    // two entries per supply, pairs across supplies in both orders
    assert_eq!(fatal, 2 * 2 * 2);
}

/// Run `ts` for 70 steps with `var` true exactly in `active`.
fn directed(ts: &TransitionSystem, var: &str, active: std::ops::Range<usize>) -> Trace {
    simulate(
        ts,
        70,
        &mut ScriptedChoice(|step: usize, s: &State| {
            ts.show(s, var).unwrap() == if active.contains(&step) { "TRUE" } else { "FALSE" }
        }),
    )
    .unwrap()
}

#[test]
fn short_dropout_never_latches() {
    let (b, _, cat) = bundle(&VcsConfig::desk());
    let ts = instance(&b, &cat, Combination::Single(axis_of(&cat, "F_P2P_1_2")));
    for d in 1..3 {
        let trace = directed(&ts, "F_P2P_1_2", 20..20 + d);
        assert_eq!(show(&ts, &trace.states[20], "F_P2P_1_2"), "TRUE");
        for (t, s) in trace.states.iter().enumerate() {
            assert_eq!(show(&ts, s, "bus.Lost_1_2"), "FALSE", "duration {d} step {t}");
            assert_eq!(show(&ts, s, "Mode"), if t < 15 { "Startup" } else { "Normal" });
        }
    }
}

#[test]
fn three_cycle_dropout_latches_on_the_third_step() {
    let (b, _, cat) = bundle(&VcsConfig::desk());
    let ts = instance(&b, &cat, Combination::Single(axis_of(&cat, "F_P2P_1_2")));
    for d in [3, 4, 20] {
        let trace = directed(&ts, "F_P2P_1_2", 20..20 + d);
        for (t, s) in trace.states.iter().enumerate() {
            let latched = t >= 23;
            assert_eq!(
                show(&ts, s, "bus.Lost_1_2"),
                if latched { "TRUE" } else { "FALSE" },
                "duration {d} step {t}"
            );
        }
        // the comm failure is seen one step after the latch
        assert_eq!(show(&ts, &trace.states[23], "Mode"), "Normal");
        assert_eq!(show(&ts, &trace.states[24], "Mode"), "FallbackB");
    }
}

#[test]
fn composites_follow_their_inputs_one_step_late() {
    let (b, _, cat) = bundle(&VcsConfig::desk());
    let pairs = [
        ("F_P1_OUT", "F_P2_OUT", "CF_DUAL_POWER_OUT"),
        ("F_ECU1", "F_ECU2", "CF_PRIMARY_LOST"),
    ];
    for (x, y, cf) in pairs {
        let ts = instance(&b, &cat, Combination::Pair(axis_of(&cat, x), axis_of(&cat, y)));
        let mut seen_true = false;
        for seed in 0..40 {
            let trace = simulate(&ts, 70, &mut RandomChoice::new(seed)).unwrap();
            assert_eq!(show(&ts, &trace.states[0], cf), "FALSE");
            for w in trace.states.windows(2) {
                let both = show(&ts, &w[0], x) == "TRUE" && show(&ts, &w[0], y) == "TRUE";
                let now = show(&ts, &w[1], cf) == "TRUE";
                assert_eq!(now, both, "{cf}");
                seen_true |= now;
            }
        }
        assert!(seen_true, "{cf} never became true in the sample");
    }
}

#[test]
fn all_buses_composite_on_full_bundle() {
    let (b, _, cat) = bundle(&VcsConfig::full());
    let ts = instance(&b, &cat, Combination::Single(axis_of(&cat, "F_BUS1")));
    let trace = directed(&ts, "F_BUS1", 20..70);
    assert!(trace
        .states
        .iter()
        .all(|s| show(&ts, s, "CF_ALL_BUSES") == "FALSE"));
}
