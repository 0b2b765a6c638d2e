use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc as Shared;

use super::{NGramModel, BOS, EOS, UNK};
use crate::fst::{Arc, Fst, Label, StateId, EPSILON};
use crate::semiring::{Semiring, Tropical};
use crate::symbols::SymbolTable;

/// Builds the grammar acceptor G of a back-off model.
///
/// States are n-gram histories: the empty history, `<s>`, and every explicit
/// n-gram shorter than the model order that can serve as a context. A word
/// with an explicit entry in history `h` gets an arc of cost `−ln P(w|h)` to
/// the longest history state suffixing `h w`; every non-empty history has an
/// ε arc of cost `−ln α(h)` to its longest proper suffix state. Final weights
/// carry `−ln P(</s> | h)` through the full back-off recursion.
///
/// Back-off is modelled with ε arcs rather than failure arcs, so a path may
/// back off even where an explicit entry exists, and after backing off it
/// continues from a shorter history that can make later words cheaper. The
/// tropical shortest path is therefore a lower bound on the model's cost;
/// [`grammar_sequence_cost`] walks G with failure semantics and reproduces
/// the scorer.
pub fn to_grammar_fst(m: &NGramModel) -> Fst<Tropical> {
    let (bos, eos) = (m.bos(), m.eos());
    let max_hist = m.order() - 1;

    let mut histories: BTreeSet<Vec<Label>> = BTreeSet::new();
    histories.insert(Vec::new());
    if max_hist > 0 {
        histories.insert(vec![bos]);
    }
    for (ngram, _) in m.sorted_entries() {
        let ctx = &ngram[..ngram.len() - 1];
        histories.insert(ctx.to_vec());
        if ngram.len() <= max_hist {
            histories.insert(ngram.clone());
        }
    }
    histories.retain(|h| h.last() != Some(&eos) && !h[1.min(h.len())..].contains(&bos));

    let mut fst = Fst::new();
    let mut ids: BTreeMap<Vec<Label>, StateId> = BTreeMap::new();
    // the start history gets state 0
    let start_hist = if max_hist > 0 { vec![bos] } else { Vec::new() };
    ids.insert(start_hist.clone(), fst.add_state());
    for h in &histories {
        if !ids.contains_key(h) {
            ids.insert(h.clone(), fst.add_state());
        }
    }
    fst.set_start(ids[&start_hist]);

    let longest_suffix = |seq: &[Label]| -> StateId {
        let mut s = &seq[seq.len().saturating_sub(max_hist)..];
        loop {
            if let Some(&id) = ids.get(s) {
                return id;
            }
            s = &s[1..];
        }
    };

    let continuations = m.explicit_contexts();
    for (h, &state) in &ids {
        if let Some(words) = continuations.get(h) {
            for &w in words {
                if w == eos || w == bos {
                    continue;
                }
                let p = m.entry(&[&h[..], &[w]].concat()).unwrap().prob;
                if p <= 0.0 {
                    continue;
                }
                let next = longest_suffix(&[&h[..], &[w]].concat());
                fst.add_arc(state, Arc::new(w, w, Tropical(-p.ln()), next));
            }
        }
        if !h.is_empty() {
            let back = longest_suffix(&h[1..]);
            fst.add_arc(state, Arc::new(EPSILON, EPSILON, Tropical(-m.backoff(h).ln()), back));
        }
        let pe = m.prob(h, eos);
        if pe > 0.0 {
            fst.set_final(state, Tropical(-pe.ln()));
        }
    }
    fst.arc_sort();
    fst.with_symbols(Some(m.vocab().clone()))
}

/// Cost of `<s> words </s>` along the path a back-off model takes through
/// `g`: the word arc where one exists, otherwise the ε back-off arc. `None`
/// if the walk gets stuck or ends in a non-final state.
pub fn grammar_sequence_cost(g: &Fst<Tropical>, words: &[Label]) -> Option<f64> {
    let mut s = g.start()?;
    let mut cost = 0.0;
    for &w in words {
        loop {
            if let Some(a) = g.arcs(s).iter().find(|a| a.ilabel == w) {
                cost += a.weight.0;
                s = a.nextstate;
                break;
            }
            let back = g.arcs(s).iter().find(|a| a.ilabel == EPSILON)?;
            cost += back.weight.0;
            s = back.nextstate;
        }
    }
    g.is_final(s).then(|| cost + g.final_weight(s).0)
}

/// Subtracts `reward` from the cost of every arc with a non-ε output label.
/// ε arcs, final weights and the topology are untouched.
pub fn apply_word_reward<W: Semiring>(g: &Fst<W>, reward: f64) -> Fst<W> {
    let mut out = g.clone();
    for s in out.states() {
        for arc in out.arcs_mut(s) {
            if arc.olabel != EPSILON {
                arc.weight = W::new(arc.weight.value() - reward);
            }
        }
    }
    out
}

/// Re-expresses a grammar over another symbol table, e.g. a lattice's.
///
/// Words are matched by spelling. Words of `target` that the grammar does
/// not know are given copies of its `<unk>` arcs; grammar words absent from
/// `target` are dropped, since no lattice path can use them.
pub fn relabel<W: Semiring>(g: &Fst<W>, target: &Shared<SymbolTable>) -> Fst<W> {
    let Some(src) = g.symbols() else {
        return g.clone().with_symbols(Some(target.clone()));
    };
    let unk = src.find_id(UNK);
    let unknown: Vec<Label> = target
        .iter()
        .filter(|&(id, sym)| id != EPSILON && src.find_id(sym).is_none() && sym != BOS && sym != EOS)
        .map(|(id, _)| id)
        .collect();
    let mut out = Fst::new();
    out.add_states(g.num_states());
    if let Some(s) = g.start() {
        out.set_start(s);
    }
    for s in g.states() {
        out.set_final(s, g.final_weight(s));
        for arc in g.arcs(s) {
            let map = |l: Label| -> Vec<Label> {
                if l == EPSILON {
                    return vec![EPSILON];
                }
                let sym = src.find_symbol(l).unwrap_or_default();
                match target.find_id(sym) {
                    Some(t) => vec![t],
                    None if Some(l) == unk => unknown.clone(),
                    None => Vec::new(),
                }
            };
            // grammars are acceptors, so mapping the input tape is enough;
            // output labels follow the same mapping pairwise
            for (i, o) in map(arc.ilabel).into_iter().zip(map(arc.olabel)) {
                out.add_arc(s, Arc::new(i, o, arc.weight, arc.nextstate));
            }
        }
    }
    let mut out = out.trim();
    out.arc_sort();
    out.with_symbols(Some(target.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algo::{compose, linear_fst, shortest_path_weight};
    use crate::lm::{estimate, NGramEntry};

    #[test]
    fn uniform_unigram_costs() {
        let v = Shared::new(SymbolTable::from_words([BOS, EOS, UNK, "a", "b"]));
        let mut m = NGramModel::new(1, v.clone()).unwrap();
        for w in ["a", "b"] {
            m.insert(vec![v.find_id(w).unwrap()], NGramEntry { prob: 0.5, backoff: None });
        }
        let g = to_grammar_fst(&m);
        assert_eq!(g.num_states(), 1);
        assert_eq!(g.num_arcs(), 2);
        for arc in g.arcs(0) {
            assert!((arc.weight.0 - 0.5f64.ln().abs()).abs() < 1e-15);
        }
        assert!(!g.is_final(0)); // P(</s>) = 0
    }

    #[test]
    fn sequence_cost_matches_scorer() {
        let corpus: Vec<Vec<&str>> = vec![
            vec!["a", "b", "c", "a"],
            vec!["b", "c", "c"],
            vec!["c", "a", "b", "b", "a"],
        ];
        let m = estimate(&corpus, 3, 100).unwrap();
        let g = to_grammar_fst(&m);
        for s in [&["a", "b"][..], &["c", "c", "a", "a"], &["b"], &[]] {
            let labels = m.encode(s);
            let lin: Fst<Tropical> = linear_fst(&labels, m.vocab()).unwrap();
            let expect = -m.sentence_log_prob(&labels);
            let walked = grammar_sequence_cost(&g, &labels).unwrap();
            assert!((walked - expect).abs() < 1e-9, "{s:?}: {walked} vs {expect}");
            // ε back-off can only undercut the model
            let w = shortest_path_weight(&compose(&lin, &g).unwrap()).unwrap();
            assert!(w.0 <= expect + 1e-9);
        }
    }

    #[test]
    fn word_arcs_are_deterministic() {
        let corpus: Vec<Vec<&str>> = vec![vec!["a", "b", "a", "a"], vec!["b", "b"]];
        let g = to_grammar_fst(&estimate(&corpus, 3, 100).unwrap());
        for s in g.states() {
            let mut labels: Vec<Label> =
                g.arcs(s).iter().map(|a| a.ilabel).filter(|&l| l != EPSILON).collect();
            let n = labels.len();
            labels.dedup();
            assert_eq!(labels.len(), n);
        }
    }

    #[test]
    fn word_reward_spares_epsilons() {
        let mut g: Fst<Tropical> = Fst::new();
        g.add_states(2);
        g.set_start(0);
        g.set_final(1, Tropical(0.5));
        g.add_arc(0, Arc::new(3, 3, Tropical(5.0), 1));
        g.add_arc(0, Arc::new(0, 0, Tropical(1.2), 1));
        let r = apply_word_reward(&g, 3.0);
        assert_eq!(r.arcs(0)[0].weight, Tropical(2.0));
        assert_eq!(r.arcs(0)[1].weight, Tropical(1.2));
        assert_eq!(r.final_weight(1), Tropical(0.5));
    }

    #[test]
    fn relabel_maps_unknown_words_to_unk() {
        let corpus: Vec<Vec<&str>> = vec![vec!["a", "b"]];
        let m = estimate(&corpus, 2, 100).unwrap();
        let g = to_grammar_fst(&m);
        let lattice_syms = Shared::new(SymbolTable::from_words(["zz", "b", "a"]));
        let g2 = relabel(&g, &lattice_syms);
        let zz = lattice_syms.find_id("zz").unwrap();
        let lin: Fst<Tropical> = linear_fst(&[zz], &lattice_syms).unwrap();
        let w = shortest_path_weight(&compose(&lin, &g2).unwrap()).unwrap();
        let expect = -m.sentence_log_prob(&[m.unk()]);
        assert!((w.0 - expect).abs() < 1e-9);
    }
}
