use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Text(String),
    Dims(Vec<usize>),
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Int(n as i64)
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<Vec<usize>> for Value {
    fn from(v: Vec<usize>) -> Self {
        Value::Dims(v)
    }
}

impl Value {
    fn text(&self) -> String {
        match self {
            Value::Bool(b) => b.to_string(),
            Value::Int(n) => n.to_string(),
            Value::Text(s) => s.clone(),
            Value::Dims(v) => {
                let parts: Vec<String> = v.iter().map(|d| d.to_string()).collect();
                format!("({})", parts.join(","))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

/// Outcome of one command. Verdicts and blocks keep insertion order in text
/// mode; the structured form is a TOML document.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub verdicts: Vec<(String, Value)>,
    pub blocks: Vec<(String, Vec<String>)>,
    pub artifacts: Vec<String>,
    pub error: Option<String>,
    pub exit_code: u8,
}

#[derive(Serialize)]
struct Structured<'a> {
    command: &'a str,
    exit_code: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
    artifacts: &'a [String],
    verdicts: toml::Table,
    blocks: toml::Table,
}

impl Report {
    pub fn new(command: String) -> Self {
        Report {
            command,
            ..Report::default()
        }
    }

    pub fn verdict(&mut self, name: &str, value: impl Into<Value>) {
        self.verdicts.push((name.to_string(), value.into()));
    }

    pub fn block(&mut self, name: &str, lines: Vec<String>) {
        self.blocks.push((name.to_string(), lines));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Structured => self.render_structured(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
        }
        for (name, v) in &self.verdicts {
            let _ = writeln!(out, "{name}: {}", v.text());
        }
        for (name, lines) in &self.blocks {
            let _ = writeln!(out, "{name}:");
            for l in lines {
                let _ = writeln!(out, "  {l}");
            }
        }
        for a in &self.artifacts {
            let _ = writeln!(out, "wrote {a}");
        }
        out
    }

    fn render_structured(&self) -> String {
        let to_value = |v: &Value| toml::Value::try_from(v).expect("verdicts are plain values");
        let verdicts = self
            .verdicts
            .iter()
            .map(|(k, v)| (k.clone(), to_value(v)))
            .collect();
        let blocks = self
            .blocks
            .iter()
            .map(|(k, lines)| {
                let arr = lines
                    .iter()
                    .map(|l| toml::Value::String(l.clone()))
                    .collect();
                (k.clone(), toml::Value::Array(arr))
            })
            .collect();
        let doc = Structured {
            command: &self.command,
            exit_code: self.exit_code,
            error: self.error.as_deref(),
            artifacts: &self.artifacts,
            verdicts,
            blocks,
        };
        toml::to_string(&doc).expect("reports always serialize")
    }
}
