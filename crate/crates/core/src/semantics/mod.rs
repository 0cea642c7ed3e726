//! Flat synchronous transition systems: elaboration, stepping, simulation
//! and trace formats.

pub mod elaborate;
pub mod expr;
pub mod simulate;
pub mod system;
pub mod trace;
pub(crate) mod typing;
pub mod value;

pub use elaborate::{elaborate, ElabError};
pub use expr::{CExpr, EvalError};
pub use simulate::{simulate, Chooser, FirstChoice, RandomChoice, ScriptedChoice, SimError};
pub use system::{
    EvalOrCompileError, ModelError, Monitor, MonitorKind, State, Successor, TransitionSystem,
    VarInfo, VarKind,
};
pub use trace::{Trace, TraceFormatError};
pub use value::{Domain, SymId, Ty, Value};

use crate::lang::{parse_model, validate_model, Diagnostic};

/// Failure to turn model source into a transition system.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LoadError {
    #[error("syntax error: {0}")]
    Parse(#[from] crate::lang::ParseError),
    #[error("invalid model: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
}

/// Parse, validate and elaborate model source.
pub fn load_model(src: &str) -> Result<TransitionSystem, LoadError> {
    let ast = parse_model(src)?;
    let diags = validate_model(&ast);
    if diags.iter().any(Diagnostic::is_error) {
        return Err(LoadError::Invalid(diags));
    }
    elaborate(&ast).map_err(|e| LoadError::Invalid(e.diagnostics))
}
