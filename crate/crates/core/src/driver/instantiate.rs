use std::fmt::Write;

use super::specs::substitute;
use super::{Combination, FailureCatalog, SpecCatalog, TargetCell};
use crate::vcs::{INJECT_BEGIN, INJECT_END};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelInstance {
    pub source: String,
    /// (spec name, formula with placeholders substituted)
    pub specs: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("template has no `{INJECT_BEGIN}` ... `{INJECT_END}` region")]
    MissingRegion,
    #[error("failure variable `{0}` is not declared in the injection region")]
    UnresolvedFailure(String),
    #[error("no failure axis {0}")]
    NoSuchAxis(usize),
    #[error("window [{0}, {1}] must satisfy 1 <= start <= end")]
    BadWindow(usize, usize),
    #[error("spec `{0}` uses the target mode but the combination is FATAL")]
    FatalTarget(String),
}

/// Replace the template's injection region with failure generators for
/// `combo`: every other failure variable becomes a constant FALSE, each
/// injected failure starts at most once inside `window` and lasts any
/// number of steps, and the first failure of a pair starts no later than
/// the second.
pub fn instantiate_model(
    template: &str,
    catalog: &FailureCatalog,
    combo: Combination,
    target: &TargetCell,
    window: (usize, usize),
    specs: &SpecCatalog,
    spec_ids: &[usize],
) -> Result<ModelInstance, InstanceError> {
    let (min, max) = window;
    if min == 0 || max < min {
        return Err(InstanceError::BadWindow(min, max));
    }
    let begin = template.find(INJECT_BEGIN).ok_or(InstanceError::MissingRegion)?;
    let end = template[begin..]
        .find(INJECT_END)
        .map(|e| begin + e)
        .ok_or(InstanceError::MissingRegion)?;
    let region = &template[begin..end];

    let axes = catalog.axes();
    for a in &axes {
        let declared = region.lines().any(|l| {
            l.trim()
                .strip_prefix(a.variable.as_str())
                .is_some_and(|rest| rest.trim_start().starts_with(':'))
        });
        if !declared {
            return Err(InstanceError::UnresolvedFailure(a.variable.clone()));
        }
    }
    let var_of = |i: usize| {
        catalog
            .axis(i)
            .map(|e| e.variable.clone())
            .ok_or(InstanceError::NoSuchAxis(i))
    };
    let active: Vec<String> = combo.axes().into_iter().map(var_of).collect::<Result<_, _>>()?;

    let mut g = String::new();
    let w = &mut g;
    writeln!(w, "{INJECT_BEGIN}").unwrap();
    writeln!(w, "-- injected: {}", active.join(" then ")).unwrap();
    writeln!(w, "VAR").unwrap();
    writeln!(w, "  Inj_Clock : 0..{};", max + 1).unwrap();
    for v in &active {
        writeln!(w, "  {v} : boolean;").unwrap();
        writeln!(w, "  Inj_Seen_{} : boolean;", flat(v)).unwrap();
    }
    if active.len() == 2 {
        writeln!(w, "  Inj_Go : boolean;").unwrap();
    }
    writeln!(w, "DEFINE").unwrap();
    writeln!(w, "  Inj_Window := Inj_Clock + 1 >= {min} & Inj_Clock + 1 <= {max};").unwrap();
    for a in &axes {
        if !active.contains(&a.variable) {
            writeln!(w, "  {} := FALSE;", a.variable).unwrap();
        }
    }
    writeln!(w, "ASSIGN").unwrap();
    writeln!(w, "  init (Inj_Clock) := 0;").unwrap();
    writeln!(
        w,
        "  next (Inj_Clock) := case Inj_Clock = {} : Inj_Clock; TRUE : Inj_Clock + 1; esac;",
        max + 1
    )
    .unwrap();
    for v in &active {
        let seen = format!("Inj_Seen_{}", flat(v));
        writeln!(w, "  init ({v}) := FALSE;").unwrap();
        writeln!(w, "  init ({seen}) := FALSE;").unwrap();
        writeln!(w, "  next ({seen}) := {seen} | {v};").unwrap();
    }
    match active.as_slice() {
        [a] => {
            let seen = format!("Inj_Seen_{}", flat(a));
            writeln!(w, "  next ({a}) :=").unwrap();
            writeln!(w, "    case").unwrap();
            writeln!(w, "      {a} : {{TRUE, FALSE}};").unwrap();
            writeln!(w, "      !{seen} & Inj_Window : {{FALSE, TRUE}};").unwrap();
            writeln!(w, "      TRUE : FALSE;").unwrap();
            writeln!(w, "    esac;").unwrap();
        }
        [a, b] => {
            let seen_a = format!("Inj_Seen_{}", flat(a));
            let seen_b = format!("Inj_Seen_{}", flat(b));
            // Inj_Go decides one step ahead whether the first failure
            // starts, so the second can be allowed to start together
            // with it.
            writeln!(w, "  init (Inj_Go) := {{FALSE, TRUE}};").unwrap();
            writeln!(w, "  next (Inj_Go) := case !{seen_a} & !{a} : {{FALSE, TRUE}}; TRUE : FALSE; esac;").unwrap();
            writeln!(w, "  next ({a}) :=").unwrap();
            writeln!(w, "    case").unwrap();
            writeln!(w, "      {a} : {{TRUE, FALSE}};").unwrap();
            writeln!(w, "      !{seen_a} & Inj_Go & Inj_Window : TRUE;").unwrap();
            writeln!(w, "      TRUE : FALSE;").unwrap();
            writeln!(w, "    esac;").unwrap();
            writeln!(w, "  next ({b}) :=").unwrap();
            writeln!(w, "    case").unwrap();
            writeln!(w, "      {b} : {{TRUE, FALSE}};").unwrap();
            writeln!(
                w,
                "      !{seen_b} & Inj_Window & ({a} | {seen_a} | Inj_Go) : {{FALSE, TRUE}};"
            )
            .unwrap();
            writeln!(w, "      TRUE : FALSE;").unwrap();
            writeln!(w, "    esac;").unwrap();
        }
        _ => unreachable!("a combination has one or two failures"),
    }

    let mut source = String::with_capacity(template.len() + g.len());
    source.push_str(&template[..begin]);
    source.push_str(&g);
    source.push_str(&template[end..]);

    let fail_a = active[0].as_str();
    let fail_b = active.get(1).map(String::as_str).unwrap_or("FALSE");
    let mut out_specs = Vec::with_capacity(spec_ids.len());
    for &k in spec_ids {
        let spec = &specs.specs[k];
        let mode = match target {
            TargetCell::Mode(m) => m.as_str(),
            TargetCell::Fatal if spec.uses_target => {
                return Err(InstanceError::FatalTarget(spec.name.clone()))
            }
            TargetCell::Fatal => "",
        };
        out_specs.push((spec.name.clone(), substitute(&spec.formula, fail_a, fail_b, mode)));
    }
    Ok(ModelInstance {
        source,
        specs: out_specs,
    })
}

fn flat(var: &str) -> String {
    var.replace('.', "_")
}

/// Formulas that every instance for `combo` must satisfy up to `bound`;
/// they restate the occurrence assumptions in terms of the failure
/// variables only.
pub fn injection_assertions(
    vars: &[&str],
    window: (usize, usize),
    bound: usize,
) -> Vec<(String, String)> {
    let (min, max) = window;
    let mut out = Vec::new();
    for v in vars {
        out.push((format!("not_before_window_{v}"), format!("G[0,{}] !{v}", min - 1)));
        out.push((format!("at_most_once_{v}"), format!("G (({v} & X !{v}) -> X G !{v})")));
        if max < bound {
            out.push((
                format!("no_start_after_window_{v}"),
                format!("G[{},{bound}] ({v} -> Y {v})", max + 1),
            ));
        }
    }
    if let [a, b] = vars {
        out.push(("ordered_start".into(), format!("G ({b} -> O {a})")));
    }
    out
}
