use super::{FailureCatalog, SpecCatalog, TargetCell, TargetModeMatrix};

/// Which failures a task injects, as 1-based axis indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Combination {
    Single(usize),
    /// Ordered: the first failure starts no later than the second.
    Pair(usize, usize),
}

impl Combination {
    pub fn axes(&self) -> Vec<usize> {
        match *self {
            Combination::Single(i) => vec![i],
            Combination::Pair(i, j) => vec![i, j],
        }
    }

    pub fn is_single(&self) -> bool {
        matches!(self, Combination::Single(_))
    }
}

impl std::fmt::Display for Combination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Combination::Single(i) => write!(f, "{i}"),
            Combination::Pair(i, j) => write!(f, "{i},{j}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanRange {
    /// Rows `r1..=r2`, columns `c1..=c2`, 1-based.
    Cells { r1: usize, c1: usize, r2: usize, c2: usize },
    Singles,
    /// Every single failure and every ordered pair.
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchTask {
    /// Matrix coordinates; single-failure tasks of a full or singles-only
    /// plan use column 0.
    pub row: usize,
    pub col: usize,
    pub combination: Combination,
    pub target: TargetCell,
    /// Indices into the spec catalog, ascending.
    pub specs: Vec<usize>,
    pub bound: usize,
}

impl BatchTask {
    /// Directory name for this task's counterexamples.
    pub fn dir_name(&self) -> String {
        format!("r{:02}_c{:02}", self.row, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BatchPlan {
    pub tasks: Vec<BatchTask>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlanError {
    #[error("range {r1} {c1} {r2} {c2} is outside the 1..={n} matrix or empty")]
    OutOfBounds { r1: usize, c1: usize, r2: usize, c2: usize, n: usize },
    #[error("matrix has {matrix} axes but the catalog has {catalog}")]
    Mismatch { matrix: usize, catalog: usize },
}

pub fn plan_batch(
    catalog: &FailureCatalog,
    matrix: &TargetModeMatrix,
    specs: &SpecCatalog,
    range: PlanRange,
    bound: usize,
) -> Result<BatchPlan, PlanError> {
    let n = catalog.axes().len();
    if matrix.n != n {
        return Err(PlanError::Mismatch {
            matrix: matrix.n,
            catalog: n,
        });
    }
    let mut cells: Vec<(usize, usize)> = Vec::new();
    match range {
        PlanRange::Cells { r1, c1, r2, c2 } => {
            let ok = |a: usize, b: usize| 1 <= a && a <= b && b <= n;
            if !ok(r1, r2) || !ok(c1, c2) {
                return Err(PlanError::OutOfBounds { r1, c1, r2, c2, n });
            }
            for r in r1..=r2 {
                for c in c1..=c2 {
                    cells.push((r, c));
                }
            }
        }
        PlanRange::Singles => cells.extend((1..=n).map(|i| (i, 0))),
        PlanRange::Full => {
            for r in 1..=n {
                cells.push((r, 0));
                cells.extend((1..=n).map(|c| (r, c)));
            }
        }
    }
    let tasks = cells
        .into_iter()
        .map(|(row, col)| {
            // A failure happens at most once, so the diagonal is the
            // single-failure scenario.
            let combination = if col == 0 || col == row {
                Combination::Single(row)
            } else {
                Combination::Pair(row, col)
            };
            let target = matrix.get(row, if col == 0 { row } else { col }).clone();
            let specs = specs
                .specs
                .iter()
                .enumerate()
                .filter(|(_, s)| {
                    let applies = if combination.is_single() {
                        s.applicability.covers_single()
                    } else {
                        s.applicability.covers_double()
                    };
                    applies && !(target == TargetCell::Fatal && s.uses_target)
                })
                .map(|(k, _)| k)
                .collect();
            BatchTask {
                row,
                col,
                combination,
                target,
                specs,
                bound,
            }
        })
        .collect();
    Ok(BatchPlan { tasks })
}
