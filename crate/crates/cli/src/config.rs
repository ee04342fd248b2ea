//! Config files: `key = value` settings, spin term lines and symbol lines.
//!
//! ```text
//! # comments run to end of line
//! experiment = quench
//! n = 8
//! t_grid = 0:2:21
//! 1.0 X Y 0        # coeff PAULI_LEFT PAULI_RIGHT bond
//! pi/2 1           # breakpoint value
//! ```
//!
//! A line holding `=` is a setting. Otherwise four tokens make a hamiltonian
//! term on bond `site` (sites `site`, `site + 1`) and two tokens make one
//! piece of a symbol: `value` on `(previous breakpoint, breakpoint]`, the
//! first piece starting at 0. Breakpoints accept `pi` expressions such as
//! `3pi/2`, `2*pi` or `-pi/4`.
//!
//! Every token keeps its source spelling, so [`ConfigFile::serialize`] of a
//! parsed file equals [`normalize`] of its text.

use std::fmt;
use std::str::FromStr;

use entscale_core::spin::Pauli;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("invalid {name}: {message}")]
    Invalid { name: String, message: String },

    #[error("cannot read config {path}: {message}")]
    Io { path: String, message: String },
}

impl ConfigError {
    pub(crate) fn invalid(name: &str, message: impl Into<String>) -> Self {
        ConfigError::Invalid { name: name.to_string(), message: message.into() }
    }
}

/// Keys accepted on a `key = value` line.
pub const KEYS: &[&str] = &[
    "experiment",
    "preset",
    "n",
    "boundary",
    "t_grid",
    "m_list",
    "k_list",
    "n_list",
    "dims",
    "cut",
    "l_max",
    "site",
    "seed",
    "trials",
];

/// A numeric token: the normalized source text and its value.
#[derive(Clone, Debug, PartialEq)]
pub struct Number {
    pub text: String,
    pub value: f64,
}

impl FromStr for Number {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let value = eval_number(s)?;
        Ok(Number { text: s.to_string(), value })
    }
}

/// Real literal with optional `pi` factor: `x`, `pi`, `3pi`, `3*pi`, `pi/2`,
/// `-3*pi/4`, `0.5pi`.
pub fn eval_number(s: &str) -> Result<f64, String> {
    let bad = || format!("`{s}` is not a number");
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return Err(bad());
    }
    let (num, den) = match body.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (body, None),
    };
    let numerator = match num.strip_suffix("pi") {
        Some(coeff) => {
            let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
            let c = if coeff.is_empty() { 1.0 } else { plain_float(coeff).ok_or_else(bad)? };
            c * std::f64::consts::PI
        }
        None => plain_float(num).ok_or_else(bad)?,
    };
    let value = match den {
        Some(d) => {
            let d = plain_float(d).ok_or_else(bad)?;
            if d == 0.0 {
                return Err(format!("`{s}` divides by zero"));
            }
            numerator / d
        }
        None => numerator,
    };
    if !value.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(sign * value)
}

// Rejects `inf`, `nan` and signs, which f64::from_str would take.
fn plain_float(s: &str) -> Option<f64> {
    let ok = !s.is_empty()
        && s.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '-' | '+'))
        && s.starts_with(|c: char| c.is_ascii_digit() || c == '.');
    if ok {
        s.parse().ok()
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TermLine {
    pub coeff: Number,
    pub left: Pauli,
    pub right: Pauli,
    pub site: usize,
    site_text: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolLine {
    pub breakpoint: Number,
    pub value: Number,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Entry {
    Setting { key: String, value: String },
    Term(TermLine),
    Symbol(SymbolLine),
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Setting { key, value } => write!(f, "{key} = {value}"),
            Entry::Term(t) => write!(f, "{} {} {} {}", t.coeff.text, t.left.label(), t.right.label(), t.site_text),
            Entry::Symbol(s) => write!(f, "{} {}", s.breakpoint.text, s.value.text),
        }
    }
}

/// A parsed config file. Entries keep file order and their source line.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    entries: Vec<(usize, Entry)>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = strip_comment(raw);
            if content.trim().is_empty() {
                continue;
            }
            entries.push((line, parse_line(line, content)?));
        }
        let file = Self { entries };
        file.check_duplicates()?;
        Ok(file)
    }

    pub fn read(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::parse(&text)
    }

    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().map(|(_, e)| e)
    }

    /// Value of `key` with the line it came from.
    pub fn setting(&self, key: &str) -> Option<(usize, &str)> {
        self.entries.iter().find_map(|(line, e)| match e {
            Entry::Setting { key: k, value } if k == key => Some((*line, value.as_str())),
            _ => None,
        })
    }

    pub fn terms(&self) -> Vec<(usize, &TermLine)> {
        self.entries
            .iter()
            .filter_map(|(line, e)| match e {
                Entry::Term(t) => Some((*line, t)),
                _ => None,
            })
            .collect()
    }

    pub fn symbol_lines(&self) -> Vec<(usize, &SymbolLine)> {
        self.entries
            .iter()
            .filter_map(|(line, e)| match e {
                Entry::Symbol(s) => Some((*line, s)),
                _ => None,
            })
            .collect()
    }

    /// Sets or replaces a setting, keeping its position when present.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let entry = parse_setting(0, key, value)?;
        match self.entries.iter_mut().find(|(_, e)| matches!(e, Entry::Setting { key: k, .. } if k == key)) {
            Some(slot) => slot.1 = entry,
            None => self.entries.push((0, entry)),
        }
        Ok(())
    }

    /// One entry per line in canonical spacing, comments and blank lines dropped.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (_, e) in &self.entries {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    fn check_duplicates(&self) -> Result<(), ConfigError> {
        let mut seen: Vec<&str> = Vec::new();
        for (line, e) in &self.entries {
            if let Entry::Setting { key, .. } = e {
                if seen.contains(&key.as_str()) {
                    return Err(ConfigError::Syntax { line: *line, column: 1, message: format!("duplicate key `{key}`") });
                }
                seen.push(key);
            }
        }
        Ok(())
    }
}

/// Textual normal form: comments and blank lines removed, settings written
/// `key = value` with all whitespace dropped from the value, data lines with
/// single spaces between tokens.
pub fn normalize(text: &str) -> String {
    let mut out = String::new();
    for raw in text.lines() {
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        match content.split_once('=') {
            Some((k, v)) => {
                let v: String = v.chars().filter(|c| !c.is_whitespace()).collect();
                out.push_str(&format!("{} = {}", k.trim(), v));
            }
            None => out.push_str(&content.split_whitespace().collect::<Vec<_>>().join(" ")),
        }
        out.push('\n');
    }
    out
}

fn strip_comment(raw: &str) -> &str {
    raw.split_once('#').map_or(raw, |(a, _)| a)
}

// 1-based column of `needle` inside `line` (which it borrows from).
fn column_of(line: &str, needle: &str) -> usize {
    needle.as_ptr() as usize - line.as_ptr() as usize + 1
}

fn parse_line(line: usize, content: &str) -> Result<Entry, ConfigError> {
    let syntax = |column: usize, message: String| ConfigError::Syntax { line, column, message };
    if let Some((k, v)) = content.split_once('=') {
        let key = k.trim();
        if key.is_empty() {
            return Err(syntax(1, "missing key before `=`".into()));
        }
        let value: String = v.chars().filter(|c| !c.is_whitespace()).collect();
        return parse_setting(line, key, &value).map_err(|e| match e {
            ConfigError::Syntax { message, .. } => {
                let column = if message.starts_with("unknown key") {
                    column_of(content, key)
                } else {
                    column_of(content, v.trim_start()).min(content.len().max(1))
                };
                syntax(column, message)
            }
            other => other,
        });
    }
    let tokens: Vec<&str> = content.split_whitespace().collect();
    let col = |i: usize| column_of(content, tokens[i]);
    match tokens.len() {
        4 => {
            let coeff: Number = tokens[0].parse().map_err(|m| syntax(col(0), m))?;
            let pauli = |i: usize| {
                tokens[i]
                    .parse::<Pauli>()
                    .map_err(|_| syntax(col(i), format!("Pauli label must be one of I, X, Y, Z, found `{}`", tokens[i])))
            };
            let (left, right) = (pauli(1)?, pauli(2)?);
            let site = tokens[3]
                .parse::<usize>()
                .map_err(|_| syntax(col(3), format!("site index `{}` is not a nonnegative integer", tokens[3])))?;
            Ok(Entry::Term(TermLine { coeff, left, right, site, site_text: tokens[3].to_string() }))
        }
        2 => {
            let breakpoint: Number = tokens[0].parse().map_err(|m| syntax(col(0), m))?;
            let value: Number = tokens[1].parse().map_err(|m| syntax(col(1), m))?;
            Ok(Entry::Symbol(SymbolLine { breakpoint, value }))
        }
        k => Err(syntax(
            1,
            format!("expected `key = value`, a 4-token term line or a 2-token symbol line, found {k} tokens"),
        )),
    }
}

fn parse_setting(line: usize, key: &str, value: &str) -> Result<Entry, ConfigError> {
    let syntax = |message: String| ConfigError::Syntax { line, column: 1, message };
    if !KEYS.contains(&key) {
        return Err(syntax(format!("unknown key `{key}`")));
    }
    if value.is_empty() {
        return Err(syntax(format!("`{key}` has no value")));
    }
    let checked = match key {
        "experiment" => value.parse::<crate::Experiment>().map(drop),
        "preset" | "boundary" => {
            if value.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                Ok(())
            } else {
                Err(format!("`{value}` is not a name"))
            }
        }
        "t_grid" => crate::grid::parse_real_grid(value).map(drop),
        "m_list" | "k_list" | "n_list" | "dims" => crate::grid::parse_int_list(value).map(drop),
        "n" | "cut" | "l_max" | "site" | "trials" => {
            value.parse::<usize>().map(drop).map_err(|_| format!("`{value}` is not a nonnegative integer"))
        }
        "seed" => value.parse::<u64>().map(drop).map_err(|_| format!("`{value}` is not a 64-bit unsigned integer")),
        _ => unreachable!("key list checked above"),
    };
    checked.map_err(syntax)?;
    Ok(Entry::Setting { key: key.to_string(), value: value.to_string() })
}
