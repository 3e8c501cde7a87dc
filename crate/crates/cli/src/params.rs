//! Parameter files: one `name = value` per line, `#` starts a comment.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use leibniz_core::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub line: usize,
    pub name: String,
    pub value: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamsError {
    pub source: String,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParamsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.source, self.line, self.message)
    }
}

impl std::error::Error for ParamsError {}

pub fn parse(source: &str, text: &str) -> Result<Vec<Entry>, ParamsError> {
    let err = |line: usize, message: String| ParamsError {
        source: source.to_string(),
        line,
        message,
    };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((name, value)) = body.split_once('=') else {
            return Err(err(line, format!("expected `name = value`, got {body:?}")));
        };
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(err(line, format!("bad parameter name {name:?}")));
        }
        let value: Scalar = value
            .trim()
            .parse()
            .map_err(|e| err(line, format!("{e}")))?;
        if !seen.insert(name.to_string()) {
            return Err(err(line, format!("{name} given twice")));
        }
        out.push(Entry {
            line,
            name: name.to_string(),
            value,
        });
    }
    Ok(out)
}

pub fn read(path: &Path) -> Result<Vec<Entry>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&path.display().to_string(), &text).map_err(|e| e.to_string())
}

/// Applies every entry through `set`, citing the line on failure.
pub fn apply<E: fmt::Display>(
    path: &Path,
    entries: &[Entry],
    mut set: impl FnMut(&str, Scalar) -> Result<(), E>,
) -> Result<(), String> {
    for e in entries {
        set(&e.name, e.value.clone())
            .map_err(|err| format!("{}:{}: {err}", path.display(), e.line))?;
    }
    Ok(())
}
