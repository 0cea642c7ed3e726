use std::path::Path;

use crate::ltl::{parse_ltl, Ltl};
use crate::semantics::{Domain, TransitionSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Applicability {
    /// Failure-free only; not part of batches.
    None,
    Single,
    Double,
    All,
}

impl Applicability {
    pub fn covers_single(self) -> bool {
        matches!(self, Applicability::Single | Applicability::All)
    }

    pub fn covers_double(self) -> bool {
        matches!(self, Applicability::Double | Applicability::All)
    }
}

impl std::str::FromStr for Applicability {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "none" => Applicability::None,
            "single" => Applicability::Single,
            "double" => Applicability::Double,
            "all" => Applicability::All,
            other => return Err(format!("unknown applicability `{other}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecEntry {
    pub name: String,
    pub doc: String,
    pub applicability: Applicability,
    /// Formula text with placeholders left in place.
    pub formula: String,
    pub uses_target: bool,
    /// Contains an F or G without a bound in a position where the bounded
    /// checker can never refute it.
    pub unbounded: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpecCatalog {
    pub specs: Vec<SpecEntry>,
    pub warnings: Vec<String>,
}

impl SpecCatalog {
    pub fn get(&self, name: &str) -> Option<&SpecEntry> {
        self.specs.iter().find(|s| s.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecError {
    #[error("{0}: {1}")]
    Io(String, String),
    #[error("line {0}: {1}")]
    Line(usize, String),
    #[error("spec `{0}`: {1}")]
    Spec(String, String),
}

pub const FAIL_A: &str = "{{FAIL_A}}";
pub const FAIL_B: &str = "{{FAIL_B}}";
pub const TARGET_MODE: &str = "{{TARGET_MODE}}";

/// Replace the three placeholders.
pub fn substitute(text: &str, fail_a: &str, fail_b: &str, target: &str) -> String {
    text.replace(FAIL_A, fail_a)
        .replace(FAIL_B, fail_b)
        .replace(TARGET_MODE, target)
}

pub fn load_spec_catalog(path: &Path, ts: &TransitionSystem) -> Result<SpecCatalog, SpecError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SpecError::Io(path.display().to_string(), e.to_string()))?;
    parse_spec_catalog(&text, ts)
}

/// Records of `spec:`, `applicability:` and `formula:` lines. Comment
/// lines (`#`) directly above a record become its documentation; a
/// formula may continue on indented lines.
pub fn parse_spec_catalog(text: &str, ts: &TransitionSystem) -> Result<SpecCatalog, SpecError> {
    let mut raw: Vec<(usize, String, String, Option<String>, Option<String>)> = Vec::new();
    let mut doc: Vec<String> = Vec::new();
    let mut last_key = "";
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            doc.clear();
            last_key = "";
            continue;
        }
        if let Some(c) = trimmed.strip_prefix('#') {
            doc.push(c.trim().to_string());
            continue;
        }
        if line.starts_with(char::is_whitespace) && last_key == "formula" {
            let rec = raw.last_mut().expect("formula belongs to a record");
            let f = rec.4.as_mut().expect("formula started");
            f.push(' ');
            f.push_str(trimmed);
            continue;
        }
        let Some((key, value)) = trimmed.split_once(':') else {
            return Err(SpecError::Line(lineno, format!("expected `key: value`, found `{trimmed}`")));
        };
        let value = value.trim().to_string();
        match key.trim() {
            "spec" => {
                raw.push((lineno, value, doc.join(" "), None, None));
                doc.clear();
                last_key = "spec";
            }
            k @ ("applicability" | "formula") => {
                let Some(rec) = raw.last_mut() else {
                    return Err(SpecError::Line(lineno, format!("`{k}` before any `spec:`")));
                };
                let slot = if k == "formula" { &mut rec.4 } else { &mut rec.3 };
                if slot.is_some() {
                    return Err(SpecError::Line(lineno, format!("second `{k}` for spec `{}`", rec.1)));
                }
                *slot = Some(value);
                last_key = if k == "formula" { "formula" } else { "" };
            }
            other => return Err(SpecError::Line(lineno, format!("unknown key `{other}`"))),
        }
    }

    let (probe_fail, probe_mode) = probes(ts);
    let mut catalog = SpecCatalog::default();
    for (lineno, name, doc, app, formula) in raw {
        let err = |m: String| SpecError::Spec(name.clone(), m);
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(SpecError::Line(lineno, format!("bad spec name `{name}`")));
        }
        if catalog.get(&name).is_some() {
            return Err(err("defined twice".into()));
        }
        let applicability: Applicability = app
            .ok_or_else(|| err("missing `applicability:`".into()))?
            .parse()
            .map_err(err)?;
        let formula = formula.ok_or_else(|| err("missing `formula:`".into()))?;

        let uses_a = formula.contains(FAIL_A);
        let uses_b = formula.contains(FAIL_B);
        let uses_target = formula.contains(TARGET_MODE);
        let stripped = formula.replace(FAIL_A, "").replace(FAIL_B, "").replace(TARGET_MODE, "");
        if stripped.contains("{{") || stripped.contains("}}") {
            return Err(err("unknown placeholder".into()));
        }
        if applicability == Applicability::None && (uses_a || uses_b || uses_target) {
            return Err(err("placeholders need a failure combination; applicability is none".into()));
        }
        if uses_b && applicability != Applicability::Double {
            return Err(err(format!("{FAIL_B} requires applicability double")));
        }

        let probe = substitute(&formula, &probe_fail, &probe_fail, &probe_mode);
        let parsed: Ltl = parse_ltl(&probe, ts).map_err(|e| err(e.to_string()))?;
        let unbounded = parsed.has_unbounded_liveness();
        if unbounded {
            catalog.warnings.push(format!(
                "spec `{name}` contains an unbounded F or G that bounded checking cannot refute; \
                 it is reported INCONCLUSIVE unless violated"
            ));
        }
        catalog.specs.push(SpecEntry {
            name,
            doc,
            applicability,
            formula,
            uses_target,
            unbounded,
        });
    }
    Ok(catalog)
}

/// A boolean variable and an enumeration symbol of `ts` that stand in for
/// the placeholders when checking that a spec resolves.
fn probes(ts: &TransitionSystem) -> (String, String) {
    let fail = ts
        .vars
        .iter()
        .find(|v| v.domain == Domain::Bool)
        .map(|v| v.name.clone())
        .unwrap_or_else(|| "TRUE".into());
    let mode = ts
        .var_index("Mode")
        .and_then(|i| match &ts.vars[i].domain {
            Domain::Enum(syms) => syms.first().map(|s| ts.symbol_name(*s).to_string()),
            _ => None,
        })
        .or_else(|| ts.symbols.first().cloned())
        .unwrap_or_else(|| "TRUE".into());
    (fail, mode)
}
