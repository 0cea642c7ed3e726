//! State sequences and their two serializations.
//!
//! Text format, one block per step:
//!
//! ```text
//! step 0
//! Mode = Startup
//! e1.S = Init
//!
//! step 1
//! ...
//! ```
//!
//! Names are sorted bytewise within a block. The structured format is a
//! single JSON document `{"loop_back": null, "steps": [{"step": 0, "state":
//! {"name": "value", ...}}, ...]}` with values written as in the model
//! language.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::system::{State, TransitionSystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub states: Vec<State>,
    /// Lasso target; the bounded checker only emits loop-free traces.
    pub loop_back: Option<usize>,
}

impl Trace {
    pub fn new(states: Vec<State>) -> Self {
        Trace {
            states,
            loop_back: None,
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// The suffix starting at step `from`.
    pub fn shifted(&self, from: usize) -> Trace {
        Trace::new(self.states[from.min(self.states.len())..].to_vec())
    }

    pub fn to_text(&self, ts: &TransitionSystem) -> String {
        let mut out = String::new();
        for (i, s) in self.states.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&format!("step {i}\n"));
            for (name, value) in named_values(ts, s) {
                out.push_str(&format!("{name} = {value}\n"));
            }
        }
        out
    }

    pub fn from_text(ts: &TransitionSystem, text: &str) -> Result<Trace, TraceFormatError> {
        let mut blocks: Vec<BTreeMap<String, String>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("step ") {
                let idx: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| TraceFormatError::Syntax(lineno + 1, line.to_string()))?;
                if idx != blocks.len() {
                    return Err(TraceFormatError::StepOrder(idx));
                }
                blocks.push(BTreeMap::new());
                continue;
            }
            let (name, value) = line
                .split_once(" = ")
                .ok_or_else(|| TraceFormatError::Syntax(lineno + 1, line.to_string()))?;
            let block = blocks
                .last_mut()
                .ok_or_else(|| TraceFormatError::Syntax(lineno + 1, line.to_string()))?;
            block.insert(name.trim().to_string(), value.trim().to_string());
        }
        build(ts, blocks, None)
    }

    pub fn to_json(&self, ts: &TransitionSystem) -> String {
        let doc = JsonTrace {
            loop_back: self.loop_back,
            steps: self
                .states
                .iter()
                .enumerate()
                .map(|(step, s)| JsonStep {
                    step,
                    state: named_values(ts, s).into_iter().collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("trace serializes")
    }

    pub fn from_json(ts: &TransitionSystem, text: &str) -> Result<Trace, TraceFormatError> {
        let doc: JsonTrace =
            serde_json::from_str(text).map_err(|e| TraceFormatError::Json(e.to_string()))?;
        for (i, s) in doc.steps.iter().enumerate() {
            if s.step != i {
                return Err(TraceFormatError::StepOrder(s.step));
            }
        }
        build(ts, doc.steps.into_iter().map(|s| s.state).collect(), doc.loop_back)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceFormatError {
    #[error("line {0}: cannot parse `{1}`")]
    Syntax(usize, String),
    #[error("unexpected step number {0}")]
    StepOrder(usize),
    #[error("step {0}: unknown variable `{1}`")]
    UnknownVar(usize, String),
    #[error("step {0}: missing variable `{1}`")]
    MissingVar(usize, String),
    #[error("step {0}: `{2}` is not a value of `{1}`")]
    BadValue(usize, String, String),
    #[error("malformed trace document: {0}")]
    Json(String),
}

#[derive(Serialize, Deserialize)]
struct JsonTrace {
    loop_back: Option<usize>,
    steps: Vec<JsonStep>,
}

#[derive(Serialize, Deserialize)]
struct JsonStep {
    step: usize,
    state: BTreeMap<String, String>,
}

fn named_values(ts: &TransitionSystem, s: &State) -> Vec<(String, String)> {
    let mut pairs: Vec<(String, String)> = ts
        .vars
        .iter()
        .zip(s.values())
        .map(|(info, v)| (info.name.clone(), ts.format_value(*v)))
        .collect();
    pairs.sort();
    pairs
}

fn build(
    ts: &TransitionSystem,
    blocks: Vec<BTreeMap<String, String>>,
    loop_back: Option<usize>,
) -> Result<Trace, TraceFormatError> {
    let mut states = Vec::with_capacity(blocks.len());
    for (step, block) in blocks.into_iter().enumerate() {
        let mut values = Vec::with_capacity(ts.vars.len());
        for (i, info) in ts.vars.iter().enumerate() {
            let text = block
                .get(&info.name)
                .ok_or_else(|| TraceFormatError::MissingVar(step, info.name.clone()))?;
            let v = ts.parse_value(i, text).ok_or_else(|| {
                TraceFormatError::BadValue(step, info.name.clone(), text.clone())
            })?;
            values.push(v);
        }
        if let Some(name) = block.keys().find(|k| ts.var_index(k).is_none()) {
            return Err(TraceFormatError::UnknownVar(step, name.clone()));
        }
        states.push(State(values));
    }
    Ok(Trace { states, loop_back })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::load_model;

    fn ts() -> TransitionSystem {
        load_model(
            "MODULE main VAR m : {Off, On}; t : 0..3; b : boolean;
             ASSIGN init(m) := Off; init(t) := 0; init(b) := TRUE;
             next(m) := On; next(t) := t + 1; next(b) := !b;",
        )
        .unwrap()
    }

    fn sample(ts: &TransitionSystem) -> Trace {
        crate::semantics::simulate(ts, 2, &mut crate::semantics::FirstChoice).unwrap()
    }

    #[test]
    fn text_layout() {
        let ts = ts();
        let text = sample(&ts).to_text(&ts);
        assert!(text.starts_with("step 0\nb = TRUE\nm = Off\nt = 0\n\nstep 1\n"));
    }

    #[test]
    fn text_round_trip() {
        let ts = ts();
        let tr = sample(&ts);
        assert_eq!(Trace::from_text(&ts, &tr.to_text(&ts)).unwrap(), tr);
    }

    #[test]
    fn json_round_trip() {
        let ts = ts();
        let tr = sample(&ts);
        let json = tr.to_json(&ts);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["steps"][2]["state"]["t"], "2");
        assert_eq!(Trace::from_json(&ts, &json).unwrap(), tr);
    }

    #[test]
    fn bad_value_rejected() {
        let ts = ts();
        let err = Trace::from_text(&ts, "step 0\nb = TRUE\nm = Maybe\nt = 0\n").unwrap_err();
        assert!(matches!(err, TraceFormatError::BadValue(0, _, _)));
    }
}
