//! The edit transducer used to align a transcript against a lattice.
//!
//! The costs are not Levenshtein costs: by default every edit is free and a
//! match earns −1, so the cheapest alignment is the one with the most
//! matched words rather than the fewest edits.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc as Shared;

use crate::algo::{check_symbols, linear_labels};
use crate::error::{Error, Result};
use crate::fst::{Arc, Fst, Label, StateId, EPSILON};
use crate::semiring::{Semiring, Tropical};
use crate::symbols::SymbolTable;

/// Costs of the four alignment operations. A match must be strictly cheaper
/// than any edit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EditCosts {
    insertion: f64,
    deletion: f64,
    substitution: f64,
    matching: f64,
}

impl Default for EditCosts {
    /// Free edits, −1 per match.
    fn default() -> Self {
        EditCosts {
            insertion: 0.0,
            deletion: 0.0,
            substitution: 0.0,
            matching: -1.0,
        }
    }
}

impl EditCosts {
    pub fn new(insertion: f64, deletion: f64, substitution: f64, matching: f64) -> Result<Self> {
        let costs = EditCosts {
            insertion,
            deletion,
            substitution,
            matching,
        };
        if [insertion, deletion, substitution, matching]
            .iter()
            .any(|c| !c.is_finite())
        {
            return Err(Error::InvalidEditCosts("costs must be finite".into()));
        }
        // all finite by now
        if matching >= insertion.min(deletion).min(substitution) {
            return Err(Error::InvalidEditCosts(format!(
                "match cost {matching} must be below every edit cost"
            )));
        }
        Ok(costs)
    }

    /// Unit-cost Levenshtein: 1 per edit, 0 per match.
    pub fn levenshtein() -> Self {
        EditCosts {
            insertion: 1.0,
            deletion: 1.0,
            substitution: 1.0,
            matching: 0.0,
        }
    }

    pub fn insertion(&self) -> f64 {
        self.insertion
    }

    pub fn deletion(&self) -> f64 {
        self.deletion
    }

    pub fn substitution(&self) -> f64 {
        self.substitution
    }

    pub fn matching(&self) -> f64 {
        self.matching
    }

    fn pair(&self, from: Label, to: Label) -> f64 {
        if from == to {
            self.matching
        } else {
            self.substitution
        }
    }
}

/// Explicit one-state edit transducer over the words of `vocab`.
///
/// It holds `(|V| + 1)² − 1` arcs: `|V|` insertions `ε:w`, `|V|` deletions
/// `w:ε` and `|V|²` substitutions and matches `wᵢ:wⱼ`.
pub fn build_edit_fst(vocab: &Shared<SymbolTable>, costs: EditCosts) -> Result<Fst<Tropical>> {
    let labels: Vec<Label> = vocab.word_ids().collect();
    if labels.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    Ok(edit_fst_over(&labels, costs).with_symbols(Some(vocab.clone())))
}

/// [`build_edit_fst`] over an explicit label set.
pub(crate) fn edit_fst_over(labels: &[Label], costs: EditCosts) -> Fst<Tropical> {
    let mut e = Fst::new();
    let s = e.add_state();
    e.set_start(s);
    e.set_final(s, Tropical::one());
    for &w in labels {
        e.add_arc(s, Arc::new(EPSILON, w, Tropical(costs.insertion), s));
        e.add_arc(s, Arc::new(w, EPSILON, Tropical(costs.deletion), s));
        for &v in labels {
            e.add_arc(s, Arc::new(w, v, Tropical(costs.pair(w, v)), s));
        }
    }
    e.arc_sort();
    e
}

/// `r ∘ E ∘ h` without building `E`.
///
/// States are (transcript position, lattice state) pairs and the edit arcs
/// are generated as each pair is expanded, so the work is proportional to
/// `|r| × |states of h| × arcs per state` whatever the vocabulary size.
/// `r` must be a linear acceptor and `h` an acyclic acceptor.
pub fn lazy_edit_compose(
    r: &Fst<Tropical>,
    h: &Fst<Tropical>,
    costs: EditCosts,
) -> Result<Fst<Tropical>> {
    let symbols = check_symbols(r, h)?;
    let (words, word_weights, r_final) = linear_labels(r)?;
    if !h.is_acceptor() {
        return Err(Error::NotAcceptor);
    }
    h.require_acyclic()?;

    let mut out = Fst::new().with_symbols(symbols);
    let Some(h_start) = h.start() else {
        return Ok(out);
    };
    let mut ids: HashMap<(usize, StateId), StateId> = HashMap::new();
    let mut queue: VecDeque<((usize, StateId), StateId)> = VecDeque::new();
    let mut intern = |out: &mut Fst<Tropical>, queue: &mut VecDeque<_>, key: (usize, StateId)| {
        *ids.entry(key).or_insert_with(|| {
            let id = out.add_state();
            queue.push_back((key, id));
            id
        })
    };
    let start = intern(&mut out, &mut queue, (0, h_start));
    out.set_start(start);

    while let Some(((i, q), src)) = queue.pop_front() {
        if i == words.len() {
            out.set_final(src, r_final.times(&h.final_weight(q)));
        }
        if i < words.len() {
            let w = words[i];
            let dst = intern(&mut out, &mut queue, (i + 1, q));
            let cost = Tropical(costs.deletion).times(&word_weights[i]);
            out.add_arc(src, Arc::new(w, EPSILON, cost, dst));
        }
        for a in h.arcs(q) {
            if a.olabel == EPSILON {
                let dst = intern(&mut out, &mut queue, (i, a.nextstate));
                out.add_arc(src, Arc::new(EPSILON, EPSILON, a.weight, dst));
                continue;
            }
            let dst = intern(&mut out, &mut queue, (i, a.nextstate));
            let cost = Tropical(costs.insertion).times(&a.weight);
            out.add_arc(src, Arc::new(EPSILON, a.olabel, cost, dst));
            if i < words.len() {
                let w = words[i];
                let dst = intern(&mut out, &mut queue, (i + 1, a.nextstate));
                let cost = Tropical(costs.pair(w, a.olabel))
                    .times(&word_weights[i])
                    .times(&a.weight);
                out.add_arc(src, Arc::new(w, a.olabel, cost, dst));
            }
        }
    }
    let mut out = out.trim();
    out.arc_sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algo::{linear_fst, shortest_path_weight};

    fn vocab(n: usize) -> Shared<SymbolTable> {
        Shared::new(SymbolTable::from_words((0..n).map(|i| format!("w{i}"))))
    }

    #[test]
    fn arc_count_formula() {
        for (n, arcs) in [(1usize, 3usize), (3, 15), (10, 120)] {
            let e = build_edit_fst(&vocab(n), EditCosts::default()).unwrap();
            assert_eq!(e.num_arcs(), arcs);
            assert_eq!(e.num_states(), 1);
        }
    }

    #[test]
    fn single_word_vocabulary() {
        let e = build_edit_fst(&vocab(1), EditCosts::default()).unwrap();
        let arcs = e.arcs(0);
        assert_eq!(arcs[0], Arc::new(0, 1, Tropical(0.0), 0));
        assert_eq!(arcs[1], Arc::new(1, 0, Tropical(0.0), 0));
        assert_eq!(arcs[2], Arc::new(1, 1, Tropical(-1.0), 0));
        assert!(e.final_weight(0).is_one());
    }

    #[test]
    fn default_costs() {
        let e = build_edit_fst(&vocab(3), EditCosts::default()).unwrap();
        for a in e.arcs(0) {
            let expected = if a.ilabel == a.olabel { -1.0 } else { 0.0 };
            assert_eq!(a.weight.0, expected);
        }
    }

    #[test]
    fn empty_vocabulary_is_rejected() {
        let empty = Shared::new(SymbolTable::new());
        assert!(matches!(
            build_edit_fst(&empty, EditCosts::default()),
            Err(Error::EmptyVocabulary)
        ));
    }

    #[test]
    fn costs_are_validated() {
        assert!(EditCosts::new(0.0, 0.0, 0.0, -1.0).is_ok());
        assert!(EditCosts::new(0.0, 0.0, 0.0, 0.0).is_err());
        assert!(EditCosts::new(1.0, -2.0, 1.0, -1.0).is_err());
        assert!(EditCosts::new(f64::NAN, 0.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn lazy_match_and_mismatch() {
        let v = vocab(2);
        let r: Fst<Tropical> = linear_fst(&[1], &v).unwrap();
        let same: Fst<Tropical> = linear_fst(&[1], &v).unwrap();
        let other: Fst<Tropical> = linear_fst(&[2], &v).unwrap();
        let c = lazy_edit_compose(&r, &same, EditCosts::default()).unwrap();
        assert_eq!(shortest_path_weight(&c).unwrap(), Tropical(-1.0));
        let c = lazy_edit_compose(&r, &other, EditCosts::default()).unwrap();
        assert_eq!(shortest_path_weight(&c).unwrap(), Tropical(0.0));
    }

    #[test]
    fn lazy_rejects_nonlinear_transcripts() {
        let v = vocab(2);
        let mut r: Fst<Tropical> = linear_fst(&[1], &v).unwrap();
        r.add_arc(0, Arc::new(2, 2, Tropical(0.0), 1));
        let h: Fst<Tropical> = linear_fst(&[1], &v).unwrap();
        assert!(lazy_edit_compose(&r, &h, EditCosts::default()).is_err());
    }
}
