//! Utterance-keyed file formats.
//!
//! A lattice archive is a sequence of entries, each a `=== <utt-id>` line
//! followed by the machine in AT&T text form and a terminating blank line.
//! A transcript file has one `utt-id w1 w2 …` line per utterance.

use std::collections::HashSet;
use std::sync::Arc as Shared;

use crate::error::{Error, Result};
use crate::fst::Fst;
use crate::semiring::Semiring;
use crate::symbols::SymbolTable;
use crate::text::{numeric_label, parse_lines, write_text};

const HEADER: &str = "=== ";

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeArchive<W: Semiring> {
    entries: Vec<(String, Fst<W>)>,
    ids: HashSet<String>,
}

impl<W: Semiring> Default for LatticeArchive<W> {
    fn default() -> Self {
        LatticeArchive {
            entries: Vec::new(),
            ids: HashSet::new(),
        }
    }
}

impl<W: Semiring> LatticeArchive<W> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends an entry; ids must be unique and free of whitespace.
    pub fn push(&mut self, id: impl Into<String>, fst: Fst<W>) -> Result<()> {
        let id = id.into();
        if id.is_empty() || id.contains(char::is_whitespace) {
            return Err(Error::InvalidArgument(format!("invalid utterance id {id:?}")));
        }
        if !self.ids.insert(id.clone()) {
            return Err(Error::InvalidArgument(format!("duplicate utterance id {id:?}")));
        }
        self.entries.push((id, fst));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Fst<W>)> {
        self.entries.iter().map(|(id, f)| (id.as_str(), f))
    }

    pub fn get(&self, id: &str) -> Option<&Fst<W>> {
        self.entries.iter().find(|(i, _)| i == id).map(|(_, f)| f)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(id, _)| id.as_str())
    }

    pub fn into_entries(self) -> Vec<(String, Fst<W>)> {
        self.entries
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (id, fst) in &self.entries {
            out.push_str(HEADER);
            out.push_str(id);
            out.push('\n');
            out.push_str(&write_text(fst));
            out.push('\n');
        }
        out
    }

    /// Parses an archive. With `symbols`, every label must resolve in the
    /// table and each machine carries it.
    pub fn from_text(text: &str, symbols: Option<&Shared<SymbolTable>>) -> Result<Self> {
        let mut archive = LatticeArchive::new();
        let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
        let mut i = 0;
        while i < lines.len() {
            let (lineno, line) = lines[i];
            if line.trim().is_empty() {
                i += 1;
                continue;
            }
            let id = line
                .strip_prefix(HEADER)
                .map(str::trim)
                .ok_or_else(|| Error::parse(lineno, format!("expected `{HEADER}<utt-id>`, got {line:?}")))?;
            let body_start = i + 1;
            let mut end = body_start;
            while end < lines.len() && !lines[end].1.trim().is_empty() {
                if lines[end].1.starts_with(HEADER) {
                    return Err(Error::parse(lines[end].0, "entry is not terminated by a blank line"));
                }
                end += 1;
            }
            let label = |field: &str, line: usize| {
                let l = numeric_label(field, line)?;
                match symbols {
                    Some(t) if l != 0 && !t.contains_id(l) => {
                        Err(Error::parse(line, format!("label {l} is not in the symbol table")))
                    }
                    _ => Ok(l),
                }
            };
            let fst: Fst<W> = parse_lines(lines[body_start..end].iter().copied(), label)?;
            archive
                .push(id, fst.with_symbols(symbols.cloned()))
                .map_err(|e| Error::parse(lineno, e.to_string()))?;
            i = end;
        }
        Ok(archive)
    }
}

/// One transcript line per utterance; an id alone denotes an empty
/// transcript. Blank lines are skipped and ids must be unique.
pub fn read_transcripts(text: &str) -> Result<Vec<(String, Vec<String>)>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let mut fields = line.split_whitespace();
        let Some(id) = fields.next() else { continue };
        if !seen.insert(id.to_string()) {
            return Err(Error::parse(i + 1, format!("duplicate utterance id {id:?}")));
        }
        out.push((id.to_string(), fields.map(str::to_string).collect()));
    }
    Ok(out)
}

pub fn write_transcripts<S: AsRef<str>>(entries: &[(String, Vec<S>)]) -> String {
    let mut out = String::new();
    for (id, words) in entries {
        out.push_str(id);
        for w in words {
            out.push(' ');
            out.push_str(w.as_ref());
        }
        out.push('\n');
    }
    out
}
