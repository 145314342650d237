//! Line-oriented edit scripts.
//!
//! ```text
//! # comment
//! init "abab"          # or: init abab, init 0 1 0 1, init @path/to/file
//! S 4 c                # substitute; symbols are integer codes or single characters
//! I 1 0
//! D 3
//! Q lzlength [i]
//! Q select 2
//! Q contain 3
//! Q recompute
//! ```

use std::fmt;
use std::path::Path;

use dynlz::dynstr::{EditOp, Symbol};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "query", rename_all = "lowercase")]
pub enum Query {
    LzLength { i: Option<usize> },
    Select { k: usize },
    Contain { i: usize },
    Recompute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Edit(EditOp),
    Query(Query),
}

/// A command together with its 1-based source line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub line: usize,
    pub command: Command,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EditScript {
    pub initial: Vec<Symbol>,
    pub commands: Vec<Line>,
}

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

/// An integer code, or else the code point of a single character.
pub fn parse_symbol(tok: &str) -> Option<Symbol> {
    if let Ok(v) = tok.parse::<Symbol>() {
        return Some(v);
    }
    let mut cs = tok.chars();
    match (cs.next(), cs.next()) {
        (Some(c), None) => Some(c as Symbol),
        _ => None,
    }
}

/// Renders a symbol the way [`parse_symbol`] reads it back.
pub fn format_symbol(s: Symbol) -> String {
    match char::from_u32(s) {
        Some(c) if c.is_ascii_alphabetic() || c.is_ascii_punctuation() && c != '#' && c != '"' => c.to_string(),
        _ => s.to_string(),
    }
}

fn literal(s: &str) -> Vec<Symbol> {
    s.chars().map(|c| c as Symbol).collect()
}

fn parse_init(rest: &str, line: usize, base: Option<&Path>) -> Result<Vec<Symbol>, ParseError> {
    let rest = rest.trim();
    if let Some(q) = rest.strip_prefix('"') {
        return match q.strip_suffix('"') {
            Some(body) => Ok(literal(body)),
            None => err(line, "unterminated string literal"),
        };
    }
    if let Some(path) = rest.strip_prefix('@') {
        let p = base.map_or_else(|| Path::new(path).to_path_buf(), |b| b.join(path));
        return match std::fs::read_to_string(&p) {
            Ok(text) => Ok(literal(text.trim_end_matches(['\n', '\r']))),
            Err(e) => err(line, format!("cannot read {}: {e}", p.display())),
        };
    }
    let toks: Vec<&str> = rest.split_whitespace().collect();
    if toks.len() == 1 && toks[0].parse::<Symbol>().is_err() {
        return Ok(literal(toks[0]));
    }
    toks.iter().map(|t| parse_symbol(t).map_or_else(|| err(line, format!("bad symbol {t:?}")), Ok)).collect()
}

fn number(tok: Option<&str>, line: usize, what: &str) -> Result<usize, ParseError> {
    match tok {
        Some(t) => t.parse().or_else(|_| err(line, format!("bad {what} {t:?}"))),
        None => err(line, format!("missing {what}")),
    }
}

fn symbol(tok: Option<&str>, line: usize) -> Result<Symbol, ParseError> {
    match tok {
        Some(t) => parse_symbol(t).map_or_else(|| err(line, format!("bad symbol {t:?}")), Ok),
        None => err(line, "missing symbol"),
    }
}

fn strip_comment(raw: &str) -> &str {
    // `#` inside a quoted literal is data.
    let mut quoted = false;
    for (k, c) in raw.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '#' if !quoted => return &raw[..k],
            _ => {}
        }
    }
    raw
}

impl EditScript {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Self::parse_in(text, None)
    }

    /// Like [`EditScript::parse`], resolving `init @file` relative to `base`.
    pub fn parse_in(text: &str, base: Option<&Path>) -> Result<Self, ParseError> {
        let mut out = EditScript::default();
        let mut seen_init = false;
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = strip_comment(raw).trim();
            if body.is_empty() {
                continue;
            }
            let (head, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
            let mut toks = rest.split_whitespace();
            let command = match head {
                "init" => {
                    if seen_init || !out.commands.is_empty() {
                        return err(line, "init must come first and only once");
                    }
                    seen_init = true;
                    out.initial = parse_init(rest, line, base)?;
                    continue;
                }
                "I" => Command::Edit(EditOp::Insert { pos: number(toks.next(), line, "position")?, sym: symbol(toks.next(), line)? }),
                "D" => Command::Edit(EditOp::Delete { pos: number(toks.next(), line, "position")? }),
                "S" => Command::Edit(EditOp::Substitute { pos: number(toks.next(), line, "position")?, sym: symbol(toks.next(), line)? }),
                "Q" => Command::Query(match toks.next() {
                    Some("lzlength") => Query::LzLength { i: toks.next().map(|t| number(Some(t), line, "index")).transpose()? },
                    Some("select") => Query::Select { k: number(toks.next(), line, "phrase number")? },
                    Some("contain") => Query::Contain { i: number(toks.next(), line, "index")? },
                    Some("recompute") => Query::Recompute,
                    Some(q) => return err(line, format!("unknown query {q:?}")),
                    None => return err(line, "missing query name"),
                }),
                other => return err(line, format!("unknown command {other:?}")),
            };
            if let Some(extra) = toks.next() {
                return err(line, format!("unexpected token {extra:?}"));
            }
            out.commands.push(Line { line, command });
        }
        Ok(out)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Command::Edit(EditOp::Insert { pos, sym }) => write!(f, "I {pos} {}", format_symbol(sym)),
            Command::Edit(EditOp::Delete { pos }) => write!(f, "D {pos}"),
            Command::Edit(EditOp::Substitute { pos, sym }) => write!(f, "S {pos} {}", format_symbol(sym)),
            Command::Query(Query::LzLength { i: None }) => write!(f, "Q lzlength"),
            Command::Query(Query::LzLength { i: Some(i) }) => write!(f, "Q lzlength {i}"),
            Command::Query(Query::Select { k }) => write!(f, "Q select {k}"),
            Command::Query(Query::Contain { i }) => write!(f, "Q contain {i}"),
            Command::Query(Query::Recompute) => write!(f, "Q recompute"),
        }
    }
}

/// Renders an initial string as an `init` line.
pub fn format_init(s: &[Symbol]) -> String {
    let printable = |&c: &Symbol| char::from_u32(c).is_some_and(|c| c.is_ascii_graphic() && c != '"' && c != '#');
    if s.iter().all(printable) && !s.is_empty() {
        format!("init \"{}\"", s.iter().map(|&c| char::from_u32(c).unwrap()).collect::<String>())
    } else {
        let codes: Vec<String> = s.iter().map(|c| c.to_string()).collect();
        format!("init {}", codes.join(" ")).trim_end().to_string()
    }
}

impl fmt::Display for EditScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", format_init(&self.initial))?;
        for l in &self.commands {
            writeln!(f, "{}", l.command)?;
        }
        Ok(())
    }
}
