//! Key = value spec files. One binding per line, `#` comments, no sections:
//! values are literals in the grammar of [`crate::literal`]. Every binding
//! remembers where it came from so downstream parse errors can point at a
//! line and column instead of just a key.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone)]
pub struct SpecError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            // flag values and whole-command errors have no file position
            if self.col > 0 {
                write!(f, "flag value, column {}: {}", self.col, self.msg)?;
                return Ok(());
            }
            return write!(f, "{}", self.msg);
        }
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for SpecError {}

/// A raw value plus its position in the file (1-based line, 1-based column
/// of the first value character).
#[derive(Debug, Clone)]
pub struct Binding {
    pub raw: String,
    pub line: usize,
    pub col: usize,
}

impl Binding {
    /// A binding supplied by a command-line flag rather than the file.
    pub fn from_flag(raw: String) -> Binding {
        Binding { raw, line: 0, col: 0 }
    }

    /// Locate a literal-parse error (byte offset into `raw`) in the file.
    pub fn error_at(&self, offset: usize, msg: impl Into<String>) -> SpecError {
        if self.line == 0 {
            return SpecError { line: 0, col: offset + 1, msg: msg.into() };
        }
        SpecError { line: self.line, col: self.col + offset, msg: msg.into() }
    }
}

#[derive(Debug, Default)]
pub struct SpecFile {
    entries: BTreeMap<String, Binding>,
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<SpecFile, SpecError> {
        let mut entries: BTreeMap<String, Binding> = BTreeMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(h) => &raw_line[..h],
                None => raw_line,
            };
            if line.trim().is_empty() {
                continue;
            }
            let eq = line.find('=').ok_or_else(|| SpecError {
                line: line_no,
                col: 1,
                msg: "expected `key = value`".into(),
            })?;
            let key = line[..eq].trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(SpecError {
                    line: line_no,
                    col: 1,
                    msg: format!("bad key {:?}: use lowercase identifiers", key.trim()),
                });
            }
            let after = &line[eq + 1..];
            let trimmed = after.trim_start();
            let col = eq + 1 + (after.len() - trimmed.len()) + 1;
            let value = trimmed.trim_end();
            if value.is_empty() {
                return Err(SpecError {
                    line: line_no,
                    col,
                    msg: format!("key {:?} has an empty value", key),
                });
            }
            if entries
                .insert(key.to_string(), Binding { raw: value.to_string(), line: line_no, col })
                .is_some()
            {
                return Err(SpecError {
                    line: line_no,
                    col: 1,
                    msg: format!("duplicate key {:?}", key),
                });
            }
        }
        Ok(SpecFile { entries })
    }

    /// Override or add a binding from a command-line flag.
    pub fn set_flag(&mut self, key: &str, raw: String) {
        self.entries.insert(key.to_string(), Binding::from_flag(raw));
    }

    pub fn get(&self, key: &str) -> Option<&Binding> {
        self.entries.get(key)
    }

    pub fn require(&self, key: &str) -> Result<&Binding, SpecError> {
        self.entries.get(key).ok_or_else(|| SpecError {
            line: 0,
            col: 0,
            msg: format!("missing required key {:?}", key),
        })
    }

    /// Echo of every binding, for the deterministic report header.
    pub fn echo(&self) -> BTreeMap<String, String> {
        self.entries.iter().map(|(k, b)| (k.clone(), b.raw.clone())).collect()
    }
}
