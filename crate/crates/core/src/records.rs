//! Single-line machine-readable records.
//!
//! Grammar: `record := field (' ' field)*`, `field := key '=' value`, where
//! `key` matches `[A-Za-z_][A-Za-z0-9_]*` and `value` is a nonempty run of
//! printable non-space characters. The first `=` in a field splits key from
//! value.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Record {
    fields: Vec<(String, String)>,
}

fn valid_key(k: &str) -> bool {
    let mut chars = k.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn valid_value(v: &str) -> bool {
    !v.is_empty() && v.chars().all(|c| c.is_ascii_graphic())
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a field. Panics on a malformed key or value, which would be a
    /// programming error in the caller.
    pub fn push(mut self, key: &str, value: impl fmt::Display) -> Self {
        let value = value.to_string();
        assert!(valid_key(key) && valid_value(&value), "bad record field {key}={value:?}");
        self.fields.push((key.to_string(), value));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn fields(&self) -> &[(String, String)] {
        &self.fields
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

impl FromStr for Record {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut fields = Vec::new();
        for tok in s.trim_end_matches('\n').split(' ') {
            let (k, v) = tok.split_once('=').ok_or_else(|| Error::Parse(format!("field without '=': {tok:?}")))?;
            if !valid_key(k) || !valid_value(v) {
                return Err(Error::Parse(format!("malformed field {tok:?}")));
            }
            fields.push((k.to_string(), v.to_string()));
        }
        Ok(Self { fields })
    }
}
