//! Text format for scalar structure tables.
//!
//! ```toml
//! dim = 3
//! labels = ["N12", "N23", "N13"]
//!
//! [[brackets]]
//! left = "N12"
//! right = "N23"
//! value = [{ coef = "1", basis = "N13" }]
//! ```
//!
//! Omitted brackets are zero. Writing then reading is the identity.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::StructureTable;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    dim: usize,
    labels: Vec<String>,
    #[serde(default)]
    brackets: Vec<BracketRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BracketRecord {
    left: String,
    right: String,
    value: Vec<Term>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Term {
    coef: String,
    basis: String,
}

pub fn to_string(t: &StructureTable<Scalar>) -> String {
    let file = AlgebraFile {
        dim: t.dim(),
        labels: t.labels().to_vec(),
        brackets: t
            .products()
            .map(|(i, j, v)| BracketRecord {
                left: t.labels()[i].clone(),
                right: t.labels()[j].clone(),
                value: v
                    .iter()
                    .map(|(k, c)| Term {
                        coef: c.to_string(),
                        basis: t.labels()[*k].clone(),
                    })
                    .collect(),
            })
            .collect(),
    };
    toml::to_string(&file).expect("algebra files always serialize")
}

pub fn from_str(text: &str) -> Result<StructureTable<Scalar>> {
    let file: AlgebraFile = toml::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if file.labels.len() != file.dim {
        return Err(Error::Format(format!(
            "field `labels`: {} labels for dim {}",
            file.labels.len(),
            file.dim
        )));
    }
    let mut seen = HashSet::new();
    for l in &file.labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::Format(format!(
                "field `labels`: duplicate label {l:?}"
            )));
        }
    }
    let mut t = StructureTable::new(file.labels);
    let mut done = HashSet::new();
    for (n, b) in file.brackets.iter().enumerate() {
        let at = |field: &str| format!("brackets[{n}].{field}");
        let lookup = |label: &str, field: &str| {
            t.label_index(label)
                .ok_or_else(|| Error::Format(format!("{}: unknown label {label:?}", at(field))))
        };
        let i = lookup(&b.left, "left")?;
        let j = lookup(&b.right, "right")?;
        if !done.insert((i, j)) {
            return Err(Error::Format(format!(
                "{}: bracket [{}, {}] given twice",
                at("left"),
                b.left,
                b.right
            )));
        }
        let mut value = Vec::with_capacity(b.value.len());
        for (m, term) in b.value.iter().enumerate() {
            let k = lookup(&term.basis, &format!("value[{m}].basis"))?;
            let c: Scalar = term
                .coef
                .parse()
                .map_err(|e| Error::Format(format!("{}: {e}", at(&format!("value[{m}].coef")))))?;
            value.push((k, c));
        }
        t.set(i, j, value)?;
    }
    Ok(t)
}
