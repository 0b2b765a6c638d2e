//! Synthetic (reference, transcript, hypothesis lattice) triples.
//!
//! The transcript is the reference passed through a word-level deletion /
//! substitution / insertion channel. The hypothesis is a confusion sausage
//! built from an independent decoder channel: every slot offers the true
//! word with posterior `q` next to `k − 1` distinct wrong words sharing the
//! remaining mass, and a slot is replaced by a single ε arc with
//! probability `d`. Everything is drawn from one seeded stream, so a
//! configuration always yields the same corpus.

use std::sync::Arc as Shared;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fst::{Arc, Fst, Label, EPSILON};
use crate::semiring::{Semiring, Tropical};
use crate::symbols::SymbolTable;

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseConfig {
    pub p_delete: f64,
    pub p_substitute: f64,
    pub p_insert: f64,
    /// Alternatives per hypothesis slot.
    pub k: usize,
    /// Posterior of the true word within its slot.
    pub q: f64,
    /// Probability that the decoder drops a slot.
    pub d: f64,
    pub vocab_size: usize,
    pub min_len: usize,
    pub max_len: usize,
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            p_delete: 0.15,
            p_substitute: 0.15,
            p_insert: 0.0,
            k: 4,
            q: 0.6,
            d: 0.05,
            vocab_size: 50,
            min_len: 8,
            max_len: 15,
            seed: 0,
        }
    }
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        for (name, p) in [
            ("p_delete", self.p_delete),
            ("p_substitute", self.p_substitute),
            ("p_insert", self.p_insert),
            ("q", self.q),
            ("d", self.d),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} = {p} is not a probability"));
            }
        }
        if self.p_delete + self.p_substitute > 1.0 {
            return bad("p_delete + p_substitute exceeds 1".into());
        }
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if self.vocab_size == 0 {
            return bad("the vocabulary must not be empty".into());
        }
        if self.k > self.vocab_size {
            return bad(format!("k = {} exceeds the vocabulary size {}", self.k, self.vocab_size));
        }
        if self.min_len > self.max_len {
            return bad("min_len exceeds max_len".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimUtterance {
    pub id: String,
    pub reference: Vec<String>,
    pub transcript: Vec<String>,
    pub hypothesis: Fst<Tropical>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimCorpus {
    pub symbols: Shared<SymbolTable>,
    pub utterances: Vec<SimUtterance>,
}

/// Vocabulary words are `w001`, `w002`, … padded to a common width.
pub fn vocabulary(size: usize) -> SymbolTable {
    let width = size.to_string().len().max(3);
    SymbolTable::from_words((1..=size).map(|i| format!("w{i:0width$}")))
}

pub fn generate(cfg: &NoiseConfig, count: usize) -> Result<SimCorpus> {
    cfg.validate()?;
    let symbols = Shared::new(vocabulary(cfg.vocab_size));
    let words: Vec<Label> = symbols.word_ids().collect();
    let name = |l: Label| symbols.find_symbol(l).unwrap().to_string();
    let id_width = count.to_string().len().max(4);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut utterances = Vec::with_capacity(count);
    for n in 0..count {
        let len = rng.gen_range(cfg.min_len..=cfg.max_len);
        let reference: Vec<Label> = (0..len).map(|_| words[rng.gen_range(0..words.len())]).collect();

        let mut transcript = Vec::with_capacity(len);
        for &w in &reference {
            let u: f64 = rng.gen();
            if u < cfg.p_delete {
                // dropped
            } else if u < cfg.p_delete + cfg.p_substitute {
                transcript.push(other_word(&mut rng, &words, w));
            } else {
                transcript.push(w);
            }
            if cfg.p_insert > 0.0 && rng.gen_bool(cfg.p_insert) {
                transcript.push(words[rng.gen_range(0..words.len())]);
            }
        }

        let mut hyp = Fst::new();
        hyp.add_states(len + 1);
        hyp.set_start(0);
        hyp.set_final(len, Tropical::one());
        for (i, &w) in reference.iter().enumerate() {
            if cfg.d > 0.0 && rng.gen_bool(cfg.d) {
                hyp.add_arc(i, Arc::new(EPSILON, EPSILON, Tropical::one(), i + 1));
                continue;
            }
            let mut slot = vec![(w, cfg.q)];
            if cfg.k > 1 {
                let pool: Vec<Label> = words.iter().copied().filter(|&x| x != w).collect();
                let picks = sample(&mut rng, pool.len(), cfg.k - 1);
                let shares: Vec<f64> = (0..cfg.k - 1).map(|_| rng.gen::<f64>()).collect();
                let total: f64 = shares.iter().sum();
                for (j, share) in picks.iter().zip(shares) {
                    let p = if total > 0.0 { (1.0 - cfg.q) * share / total } else { 0.0 };
                    slot.push((pool[j], p));
                }
            }
            for (label, p) in slot {
                if p > 0.0 {
                    hyp.add_arc(i, Arc::new(label, label, Tropical(-p.ln()), i + 1));
                }
            }
        }
        hyp.arc_sort();

        utterances.push(SimUtterance {
            id: format!("utt{n:0id_width$}"),
            reference: reference.iter().map(|&l| name(l)).collect(),
            transcript: transcript.iter().map(|&l| name(l)).collect(),
            hypothesis: hyp.with_symbols(Some(symbols.clone())),
        });
    }
    Ok(SimCorpus { symbols, utterances })
}

fn other_word(rng: &mut ChaCha8Rng, words: &[Label], w: Label) -> Label {
    if words.len() == 1 {
        return w;
    }
    let i = rng.gen_range(0..words.len() - 1);
    let x = words[i];
    if x >= w {
        words[i + 1]
    } else {
        x
    }
}
