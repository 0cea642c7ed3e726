use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureKind {
    Ecu,
    Power,
    Bus,
    P2p,
    /// Computed from other failures inside the model; never injected.
    Composite,
}

impl std::str::FromStr for FailureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "ecu" => FailureKind::Ecu,
            "power" => FailureKind::Power,
            "bus" => FailureKind::Bus,
            "p2p" => FailureKind::P2p,
            "composite" => FailureKind::Composite,
            other => return Err(format!("unknown failure kind `{other}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureEntry {
    pub index: usize,
    pub id: String,
    pub variable: String,
    pub kind: FailureKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureCatalog {
    pub entries: Vec<FailureEntry>,
}

impl FailureCatalog {
    /// Injectable entries in file order; the matrix is indexed by these.
    pub fn axes(&self) -> Vec<&FailureEntry> {
        self.entries
            .iter()
            .filter(|e| e.kind != FailureKind::Composite)
            .collect()
    }

    /// Catalog variables that name neither a variable nor a DEFINE of
    /// `ts`.
    pub fn unresolved(&self, ts: &crate::semantics::TransitionSystem) -> Vec<String> {
        self.entries
            .iter()
            .filter(|e| ts.var_index(&e.variable).is_none() && !ts.defines.contains_key(&e.variable))
            .map(|e| e.variable.clone())
            .collect()
    }

    /// Axis by 1-based index.
    pub fn axis(&self, i: usize) -> Option<&FailureEntry> {
        self.axes().get(i.checked_sub(1)?).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("{0}: {1}")]
    Io(String, String),
    #[error("empty catalog")]
    Empty,
    #[error("line {0}: {1}")]
    Line(usize, String),
}

pub fn load_failure_catalog(path: &Path) -> Result<FailureCatalog, CatalogError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CatalogError::Io(path.display().to_string(), e.to_string()))?;
    parse_failure_catalog(&text)
}

/// Comma-separated `index,id,variable,kind` with a header row.
pub fn parse_failure_catalog(text: &str) -> Result<FailureCatalog, CatalogError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let Some((hline, header)) = lines.next() else {
        return Err(CatalogError::Empty);
    };
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols != ["index", "id", "variable", "kind"] {
        return Err(CatalogError::Line(
            hline,
            "expected header `index,id,variable,kind`".into(),
        ));
    }
    let mut entries = Vec::new();
    let mut seen_vars = std::collections::HashSet::new();
    for (lineno, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let err = |m: String| CatalogError::Line(lineno, m);
        if fields.len() != 4 {
            return Err(err(format!("expected 4 fields, found {}", fields.len())));
        }
        let index: usize = fields[0]
            .parse()
            .map_err(|_| err(format!("bad index `{}`", fields[0])))?;
        if index != entries.len() + 1 {
            return Err(err(format!(
                "index {index} out of sequence, expected {}",
                entries.len() + 1
            )));
        }
        let valid_name = |s: &str| {
            !s.is_empty()
                && s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
        };
        if !valid_name(fields[2]) {
            return Err(err(format!("bad variable name `{}`", fields[2])));
        }
        if !seen_vars.insert(fields[2].to_string()) {
            return Err(err(format!("variable `{}` listed twice", fields[2])));
        }
        entries.push(FailureEntry {
            index,
            id: fields[1].to_string(),
            variable: fields[2].to_string(),
            kind: fields[3].parse().map_err(err)?,
        });
    }
    if entries.is_empty() {
        return Err(CatalogError::Empty);
    }
    Ok(FailureCatalog { entries })
}
