//! Back-off n-gram language models.
//!
//! Probabilities are stored in the linear domain; ARPA files carry log10
//! values and grammar FSTs carry natural-log costs. A model's vocabulary
//! always contains `<s>`, `</s>` and `<unk>`; `<s>` is only ever a context.

mod arpa;
mod estimate;
mod grammar;
mod interpolate;

pub use arpa::{read_arpa, write_arpa};
pub use estimate::estimate;
pub use grammar::{apply_word_reward, grammar_sequence_cost, relabel, to_grammar_fst};
pub use interpolate::interpolate;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc as Shared;

use crate::error::{Error, Result};
use crate::fst::Label;
use crate::symbols::SymbolTable;

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
pub const UNK: &str = "<unk>";

/// Probability and back-off weight of one n-gram.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NGramEntry {
    /// `P(last word | preceding words)`; 0 only for the `<s>` unigram.
    pub prob: f64,
    /// Weight applied when backing off from this n-gram as a context;
    /// `None` means 1.
    pub backoff: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NGramModel {
    order: usize,
    vocab: Shared<SymbolTable>,
    entries: HashMap<Vec<Label>, NGramEntry>,
    bos: Label,
    eos: Label,
    unk: Label,
}

impl NGramModel {
    /// An empty model. `vocab` must contain `<s>`, `</s>` and `<unk>`.
    pub fn new(order: usize, vocab: Shared<SymbolTable>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("n-gram order must be at least 1".into()));
        }
        let find = |s: &str| {
            vocab
                .find_id(s)
                .ok_or_else(|| Error::InvalidArgument(format!("vocabulary lacks {s}")))
        };
        let (bos, eos, unk) = (find(BOS)?, find(EOS)?, find(UNK)?);
        Ok(NGramModel {
            order,
            vocab,
            entries: HashMap::new(),
            bos,
            eos,
            unk,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vocab(&self) -> &Shared<SymbolTable> {
        &self.vocab
    }

    pub fn bos(&self) -> Label {
        self.bos
    }

    pub fn eos(&self) -> Label {
        self.eos
    }

    pub fn unk(&self) -> Label {
        self.unk
    }

    pub fn insert(&mut self, ngram: Vec<Label>, entry: NGramEntry) {
        assert!(!ngram.is_empty() && ngram.len() <= self.order);
        self.entries.insert(ngram, entry);
    }

    pub fn entry(&self, ngram: &[Label]) -> Option<&NGramEntry> {
        self.entries.get(ngram)
    }

    pub(crate) fn entry_mut(&mut self, ngram: &[Label]) -> Option<&mut NGramEntry> {
        self.entries.get_mut(ngram)
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    /// Entries sorted by order, then label sequence.
    pub fn sorted_entries(&self) -> Vec<(&Vec<Label>, &NGramEntry)> {
        let mut v: Vec<_> = self.entries.iter().collect();
        v.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(b.0)));
        v
    }

    /// Words that can be predicted: the vocabulary minus `<eps>` and `<s>`.
    pub fn predictable_words(&self) -> Vec<Label> {
        self.vocab.word_ids().filter(|&l| l != self.bos).collect()
    }

    /// Contexts that have at least one explicit continuation, grouped with
    /// those continuations.
    pub fn explicit_contexts(&self) -> BTreeMap<Vec<Label>, Vec<Label>> {
        let mut out: BTreeMap<Vec<Label>, Vec<Label>> = BTreeMap::new();
        for ngram in self.entries.keys() {
            let (w, ctx) = ngram.split_last().unwrap();
            if *w == self.bos {
                continue;
            }
            out.entry(ctx.to_vec()).or_default().push(*w);
        }
        for v in out.values_mut() {
            v.sort_unstable();
        }
        out
    }

    pub fn backoff(&self, context: &[Label]) -> f64 {
        self.entries
            .get(context)
            .and_then(|e| e.backoff)
            .unwrap_or(1.0)
    }

    /// `P(word | history)` through the back-off recursion; only the last
    /// `order − 1` history words are used.
    pub fn prob(&self, history: &[Label], word: Label) -> f64 {
        let keep = history.len().min(self.order - 1);
        let mut ctx = &history[history.len() - keep..];
        let mut scale = 1.0;
        let mut key = Vec::with_capacity(self.order);
        loop {
            key.clear();
            key.extend_from_slice(ctx);
            key.push(word);
            if let Some(e) = self.entries.get(&key) {
                return scale * e.prob;
            }
            if ctx.is_empty() {
                return 0.0;
            }
            scale *= self.backoff(ctx);
            ctx = &ctx[1..];
        }
    }

    pub fn log_prob(&self, history: &[Label], word: Label) -> f64 {
        self.prob(history, word).ln()
    }

    /// Maps words to labels, sending unknown words to `<unk>`.
    pub fn encode<S: AsRef<str>>(&self, words: &[S]) -> Vec<Label> {
        words
            .iter()
            .map(|w| self.vocab.find_id(w.as_ref()).unwrap_or(self.unk))
            .collect()
    }

    /// Natural-log probability of `<s> words </s>`, the `</s>` term included.
    pub fn sentence_log_prob(&self, words: &[Label]) -> f64 {
        let mut history = vec![self.bos];
        let mut total = 0.0;
        for &w in words.iter().chain(std::iter::once(&self.eos)) {
            total += self.log_prob(&history, w);
            history.push(w);
        }
        total
    }

    /// Per-token perplexity over `sentences`, counting one `</s>` per
    /// sentence.
    pub fn perplexity<S: AsRef<str>>(&self, sentences: &[Vec<S>]) -> f64 {
        let mut log_sum = 0.0;
        let mut tokens = 0usize;
        for s in sentences {
            log_sum += self.sentence_log_prob(&self.encode(s));
            tokens += s.len() + 1;
        }
        (-log_sum / tokens as f64).exp()
    }
}
