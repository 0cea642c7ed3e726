use std::path::Path;

use super::FailureCatalog;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetCell {
    Mode(String),
    /// No target: the combination is not survivable.
    Fatal,
}

impl TargetCell {
    pub fn mode(&self) -> Option<&str> {
        match self {
            TargetCell::Mode(m) => Some(m),
            TargetCell::Fatal => None,
        }
    }
}

impl std::fmt::Display for TargetCell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TargetCell::Mode(m) => write!(f, "{m}"),
            TargetCell::Fatal => write!(f, "FATAL"),
        }
    }
}

/// Rows are the first failure, columns the second; both 1-based over the
/// catalog's injection axes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetModeMatrix {
    pub n: usize,
    cells: Vec<TargetCell>,
}

impl TargetModeMatrix {
    pub fn get(&self, row: usize, col: usize) -> &TargetCell {
        &self.cells[(row - 1) * self.n + (col - 1)]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("{0}: {1}")]
    Io(String, String),
    #[error("matrix is {rows}x{cols} but the catalog has {axes} injection axes")]
    Dimension { rows: usize, cols: usize, axes: usize },
    #[error("line {0}: unknown mode `{1}`")]
    UnknownMode(usize, String),
    #[error("line {0}: {1}")]
    Line(usize, String),
}

pub fn load_target_matrix(
    path: &Path,
    catalog: &FailureCatalog,
    modes: &[&str],
) -> Result<TargetModeMatrix, MatrixError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| MatrixError::Io(path.display().to_string(), e.to_string()))?;
    parse_target_matrix(&text, catalog, modes)
}

/// Comma-separated: a header row `first\second,1,..,N`, then one row per
/// first failure starting with its index. Cells hold a mode name from
/// `modes` or `FATAL`.
pub fn parse_target_matrix(
    text: &str,
    catalog: &FailureCatalog,
    modes: &[&str],
) -> Result<TargetModeMatrix, MatrixError> {
    let axes = catalog.axes().len();
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let Some(((_, header), rows)) = lines.split_first() else {
        return Err(MatrixError::Dimension { rows: 0, cols: 0, axes });
    };
    let cols = header.split(',').count().saturating_sub(1);
    if rows.len() != axes || cols != axes {
        return Err(MatrixError::Dimension {
            rows: rows.len(),
            cols,
            axes,
        });
    }
    let mut cells = Vec::with_capacity(axes * axes);
    for (k, (lineno, line)) in rows.iter().enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != axes + 1 {
            return Err(MatrixError::Dimension {
                rows: rows.len(),
                cols: fields.len() - 1,
                axes,
            });
        }
        if fields[0] != (k + 1).to_string() {
            return Err(MatrixError::Line(
                *lineno,
                format!("row label `{}`, expected {}", fields[0], k + 1),
            ));
        }
        for cell in &fields[1..] {
            cells.push(match *cell {
                "FATAL" => TargetCell::Fatal,
                m if modes.contains(&m) => TargetCell::Mode(m.to_string()),
                m => return Err(MatrixError::UnknownMode(*lineno, m.to_string())),
            });
        }
    }
    Ok(TargetModeMatrix { n: axes, cells })
}
