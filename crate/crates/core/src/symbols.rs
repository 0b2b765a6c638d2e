//! Bijection between word strings and integer labels.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fst::{Label, EPSILON};

pub const EPSILON_SYMBOL: &str = "<eps>";

/// Word ↔ label mapping. Label 0 is always `<eps>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTable {
    by_id: BTreeMap<Label, String>,
    by_symbol: HashMap<String, Label>,
}

impl Default for SymbolTable {
    fn default() -> Self {
        Self::new()
    }
}

impl SymbolTable {
    pub fn new() -> Self {
        let mut table = SymbolTable {
            by_id: BTreeMap::new(),
            by_symbol: HashMap::new(),
        };
        table.by_id.insert(EPSILON, EPSILON_SYMBOL.to_string());
        table.by_symbol.insert(EPSILON_SYMBOL.to_string(), EPSILON);
        table
    }

    /// Builds a table holding `words` with ids 1, 2, … in order; duplicates
    /// keep their first id.
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut table = Self::new();
        for w in words {
            table.add_symbol(w.as_ref());
        }
        table
    }

    /// Returns the id of `symbol`, adding it with the next free id if needed.
    pub fn add_symbol(&mut self, symbol: &str) -> Label {
        if let Some(&id) = self.by_symbol.get(symbol) {
            return id;
        }
        let id = self.by_id.keys().next_back().map_or(0, |&k| k + 1);
        self.by_id.insert(id, symbol.to_string());
        self.by_symbol.insert(symbol.to_string(), id);
        id
    }

    /// Inserts an explicit `(symbol, id)` pair. Both must be unused, except
    /// that re-inserting an identical pair is accepted.
    pub fn insert(&mut self, symbol: &str, id: Label) -> Result<()> {
        match (self.by_symbol.get(symbol), self.by_id.get(&id)) {
            (Some(&old), _) if old == id => Ok(()),
            (Some(&old), _) => Err(Error::InvalidArgument(format!(
                "symbol {symbol:?} already has id {old}"
            ))),
            (None, Some(old)) => Err(Error::InvalidArgument(format!(
                "id {id} already maps to {old:?}"
            ))),
            (None, None) => {
                self.by_id.insert(id, symbol.to_string());
                self.by_symbol.insert(symbol.to_string(), id);
                Ok(())
            }
        }
    }

    pub fn find_id(&self, symbol: &str) -> Option<Label> {
        self.by_symbol.get(symbol).copied()
    }

    pub fn find_symbol(&self, id: Label) -> Option<&str> {
        self.by_id.get(&id).map(String::as_str)
    }

    pub fn contains_id(&self, id: Label) -> bool {
        self.by_id.contains_key(&id)
    }

    /// Number of entries including `<eps>`.
    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.len() <= 1
    }

    /// Number of entries other than `<eps>`.
    pub fn num_words(&self) -> usize {
        self.by_id.len() - 1
    }

    /// All `(id, symbol)` pairs in id order, `<eps>` included.
    pub fn iter(&self) -> impl Iterator<Item = (Label, &str)> {
        self.by_id.iter().map(|(&id, s)| (id, s.as_str()))
    }

    /// Non-epsilon ids in increasing order.
    pub fn word_ids(&self) -> impl Iterator<Item = Label> + '_ {
        self.by_id.keys().copied().filter(|&id| id != EPSILON)
    }

    /// Maps words to labels, failing on the first unknown word.
    pub fn encode<S: AsRef<str>>(&self, words: &[S]) -> Result<Vec<Label>> {
        words
            .iter()
            .map(|w| {
                self.find_id(w.as_ref())
                    .ok_or_else(|| Error::UnknownSymbol(w.as_ref().to_string()))
            })
            .collect()
    }

    pub fn decode(&self, labels: &[Label]) -> Result<Vec<String>> {
        labels
            .iter()
            .map(|&l| {
                self.find_symbol(l)
                    .map(str::to_string)
                    .ok_or(Error::UnknownLabel(l))
            })
            .collect()
    }

    /// Parses `symbol<TAB>id` lines. Blank lines are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut table = SymbolTable {
            by_id: BTreeMap::new(),
            by_symbol: HashMap::new(),
        };
        for (n, line) in text.lines().enumerate() {
            let lineno = n + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (Some(sym), Some(id), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(Error::parse(lineno, "expected `symbol<TAB>id`"));
            };
            let id: Label = id
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad symbol id {id:?}")))?;
            table
                .insert(sym, id)
                .map_err(|e| Error::parse(lineno, e.to_string()))?;
        }
        match table.find_symbol(EPSILON) {
            None => table
                .insert(EPSILON_SYMBOL, EPSILON)
                .map_err(|e| Error::parse(0, e.to_string()))?,
            Some(s) if s != EPSILON_SYMBOL => {
                return Err(Error::parse(0, format!("id 0 must be {EPSILON_SYMBOL}, found {s:?}")))
            }
            Some(_) => {}
        }
        Ok(table)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (id, sym) in self.iter() {
            let _ = writeln!(out, "{sym}\t{id}");
        }
        out
    }
}
