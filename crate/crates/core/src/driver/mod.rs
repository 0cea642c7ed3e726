//! Batch driver: loads the failure catalog, target-mode matrix and spec
//! catalog, plans single and double failure scenarios over a matrix range,
//! instantiates the model template per scenario, runs every
//! (scenario, spec) unit on a worker pool and aggregates a deterministic
//! report with counterexamples filed per scenario.

mod catalog;
mod instantiate;
mod matrix;
mod plan;
mod report;
mod run;
mod specs;

pub use catalog::{load_failure_catalog, parse_failure_catalog, CatalogError, FailureCatalog, FailureEntry, FailureKind};
pub use instantiate::{injection_assertions, instantiate_model, InstanceError, ModelInstance};
pub use matrix::{load_target_matrix, parse_target_matrix, MatrixError, TargetCell, TargetModeMatrix};
pub use plan::{plan_batch, BatchPlan, BatchTask, Combination, PlanError, PlanRange};
pub use report::{write_report, BatchReport, SpecResult, Summary, TaskReport, VerdictKind};
pub use run::{run_batch, BatchInputs, RunOptions};
pub use specs::{load_spec_catalog, parse_spec_catalog, substitute, Applicability, SpecCatalog, SpecEntry, SpecError};

/// Bound used by batches unless overridden.
pub const DEFAULT_BOUND: usize = 70;
/// Steps `[first, last]` in which an injected failure may start.
pub const DEFAULT_WINDOW: (usize, usize) = (15, 40);
