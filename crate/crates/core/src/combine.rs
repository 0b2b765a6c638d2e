//! Lattice combination: merges a transcript with a hypothesis lattice.
//!
//! The transcript becomes a linear acceptor `R` and the lattice `H` loses
//! its weights. `R ∘ E ∘ H` aligns the two with an edit transducer in which
//! only matches have a (negative) cost, so the cheapest paths are the
//! alignments with the most matched words. Pruning keeps those paths,
//! projection keeps the lattice side of each, and epsilon removal,
//! determinization and minimization produce a compact acceptor. The result
//! collapses onto the transcript where the lattice contains it, drops
//! transcript words the lattice never proposes, and keeps the lattice's
//! alternatives wherever nothing matches.

use std::collections::BTreeSet;
use std::sync::Arc as Shared;

use crate::algo::{
    compose, determinize, linear_chain, minimize, project_output, prune_to_threshold,
    remove_epsilons, scale_weights_to_one,
};
use crate::edit::{edit_fst_over, lazy_edit_compose, EditCosts};
use crate::error::{Error, Result};
use crate::fst::{Fst, Label, EPSILON};
use crate::semiring::{Semiring, Tropical};
use crate::symbols::SymbolTable;

/// Label given to transcript words missing from the symbol table. It lies
/// outside every table, so such words can only be deleted.
pub const UNMATCHABLE: Label = Label::MAX;

/// How `R ∘ E ∘ H` is built.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EditMode {
    /// Edit arcs generated on demand over (position, lattice state) pairs.
    #[default]
    Lazy,
    /// `E` materialized over the utterance's words and composed twice.
    Explicit,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CombineConfig {
    /// Multiplier `t` on the best alignment cost; `1̄` keeps only the
    /// alignments with the most matches.
    pub prune_threshold: Tropical,
    pub edit_costs: EditCosts,
    /// Drop the residual match rewards before determinization.
    pub strip_weights_after_prune: bool,
    pub edit_mode: EditMode,
}

impl Default for CombineConfig {
    fn default() -> Self {
        CombineConfig {
            prune_threshold: Tropical::one(),
            edit_costs: EditCosts::default(),
            strip_weights_after_prune: true,
            edit_mode: EditMode::Lazy,
        }
    }
}

impl CombineConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.prune_threshold.0.is_finite() || self.prune_threshold.0 < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "prune threshold must be finite and at least 0, got {}",
                self.prune_threshold.0
            )));
        }
        EditCosts::new(
            self.edit_costs.insertion(),
            self.edit_costs.deletion(),
            self.edit_costs.substitution(),
            self.edit_costs.matching(),
        )?;
        Ok(())
    }
}

/// Maps transcript words through `symbols`; unknown words become
/// [`UNMATCHABLE`].
pub fn encode_transcript<S: AsRef<str>>(words: &[S], symbols: &SymbolTable) -> Vec<Label> {
    words
        .iter()
        .map(|w| symbols.find_id(w.as_ref()).unwrap_or(UNMATCHABLE))
        .collect()
}

/// Combines a transcript given as words with `hypothesis`, whose symbol
/// table must be attached.
pub fn combine<S: AsRef<str>>(
    transcript: &[S],
    hypothesis: &Fst<Tropical>,
    cfg: &CombineConfig,
) -> Result<Fst<Tropical>> {
    let symbols = hypothesis.symbols().ok_or_else(|| {
        Error::InvalidArgument("the hypothesis lattice has no symbol table".into())
    })?;
    let labels = encode_transcript(transcript, symbols);
    combine_labels(&labels, hypothesis, cfg)
}

/// [`combine`] on an already encoded transcript.
pub fn combine_labels(
    transcript: &[Label],
    hypothesis: &Fst<Tropical>,
    cfg: &CombineConfig,
) -> Result<Fst<Tropical>> {
    cfg.validate()?;
    if transcript.contains(&EPSILON) {
        return Err(Error::UnexpectedEpsilon);
    }
    hypothesis.require_acyclic()?;
    let symbols: Option<Shared<SymbolTable>> = hypothesis.symbols().cloned();

    let h = scale_weights_to_one(&project_output(hypothesis)).trim();
    if h.is_empty() {
        return Err(Error::EmptyLanguage);
    }
    let r: Fst<Tropical> = linear_chain(transcript).with_symbols(symbols.clone());

    let aligned = match cfg.edit_mode {
        EditMode::Lazy => lazy_edit_compose(&r, &h, cfg.edit_costs)?,
        EditMode::Explicit => {
            let mut words: BTreeSet<Label> = transcript.iter().copied().collect();
            for s in h.states() {
                words.extend(h.arcs(s).iter().map(|a| a.olabel).filter(|&l| l != EPSILON));
            }
            let words: Vec<Label> = words.into_iter().collect();
            let e = edit_fst_over(&words, cfg.edit_costs).with_symbols(symbols.clone());
            compose(&compose(&r, &e)?, &h)?
        }
    };
    let pruned = prune_to_threshold(&aligned, cfg.prune_threshold)?;
    let mut lattice = project_output(&pruned);
    if cfg.strip_weights_after_prune {
        lattice = scale_weights_to_one(&lattice);
    }
    let lattice = minimize(&determinize(&remove_epsilons(&lattice)?)?)?;
    Ok(lattice.with_symbols(symbols))
}

/// Puts grammar costs back on a combined lattice: `t ∘ g`.
///
/// Fails with [`Error::NoGrammarPath`] naming `utterance` when no path of
/// `t` is accepted by `g`.
pub fn rescore_with_grammar(
    t: &Fst<Tropical>,
    g: &Fst<Tropical>,
    utterance: &str,
) -> Result<Fst<Tropical>> {
    if !t.is_acceptor() || !g.is_acceptor() {
        return Err(Error::NotAcceptor);
    }
    let out = compose(t, g)?;
    if out.is_empty() {
        return Err(Error::NoGrammarPath {
            utterance: utterance.to_string(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algo::{enumerate_paths, linear_fst};
    use crate::fst::Arc;
    use std::collections::BTreeSet;

    fn table() -> Shared<SymbolTable> {
        Shared::new(SymbolTable::from_words(["the", "sea", "a", "see", "b", "x", "y"]))
    }

    /// Acceptor over the given word strings, one branch per string.
    fn lattice(syms: &Shared<SymbolTable>, strings: &[&str]) -> Fst<Tropical> {
        let mut f = Fst::new().with_symbols(Some(syms.clone()));
        let s = f.add_state();
        f.set_start(s);
        for (i, line) in strings.iter().enumerate() {
            let mut prev = s;
            for w in line.split_whitespace() {
                let next = f.add_state();
                let l = syms.find_id(w).unwrap();
                f.add_arc(prev, Arc::new(l, l, Tropical(i as f64 * 0.5), next));
                prev = next;
            }
            f.set_final(prev, Tropical(0.0));
        }
        f
    }

    fn strings(f: &Fst<Tropical>) -> BTreeSet<String> {
        let syms = f.symbols().unwrap();
        enumerate_paths(f, 10_000)
            .unwrap()
            .paths
            .iter()
            .map(|p| syms.decode(&p.olabels).unwrap().join(" "))
            .collect()
    }

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn full_match_collapses() {
        let syms = table();
        let h = lattice(&syms, &["the sea"]);
        let t = combine(&["the", "sea"], &h, &CombineConfig::default()).unwrap();
        assert_eq!(strings(&t), set(&["the sea"]));
        assert_eq!(t.num_states(), 3);
    }

    #[test]
    fn disjoint_vocabulary_keeps_the_lattice() {
        let syms = table();
        let h = lattice(&syms, &["a", "b"]);
        let t = combine(&["x", "y"], &h, &CombineConfig::default()).unwrap();
        assert_eq!(strings(&t), set(&["a", "b"]));
    }

    #[test]
    fn max_match_paths_win() {
        let syms = table();
        let h = lattice(&syms, &["the sea", "a sea", "the see"]);
        let t = combine(&["the", "sea"], &h, &CombineConfig::default()).unwrap();
        assert_eq!(strings(&t), set(&["the sea"]));
    }

    #[test]
    fn unmatched_transcript_words_are_deleted_and_insertions_kept() {
        let syms = table();
        let h = lattice(&syms, &["the a sea", "the b see"]);
        let t = combine(&["the", "x", "sea"], &h, &CombineConfig::default()).unwrap();
        assert_eq!(strings(&t), set(&["the a sea"]));
    }

    #[test]
    fn oov_words_never_match() {
        let syms = table();
        let h = lattice(&syms, &["a", "b"]);
        let t = combine(&["zebra"], &h, &CombineConfig::default()).unwrap();
        assert_eq!(strings(&t), set(&["a", "b"]));
    }

    #[test]
    fn empty_transcript_keeps_everything() {
        let syms = table();
        let h = lattice(&syms, &["a sea", "the see"]);
        let t = combine::<&str>(&[], &h, &CombineConfig::default()).unwrap();
        assert_eq!(strings(&t), set(&["a sea", "the see"]));
    }

    #[test]
    fn explicit_mode_agrees() {
        let syms = table();
        let h = lattice(&syms, &["the a sea", "the b see", "a"]);
        let cfg = CombineConfig {
            edit_mode: EditMode::Explicit,
            ..Default::default()
        };
        let lazy = combine(&["the", "x", "sea"], &h, &CombineConfig::default()).unwrap();
        let explicit = combine(&["the", "x", "sea"], &h, &cfg).unwrap();
        assert_eq!(lazy, explicit);
    }

    #[test]
    fn output_is_deterministic_unweighted_acceptor() {
        let syms = table();
        let h = lattice(&syms, &["a sea", "b sea", "a see"]);
        let t = combine(&["sea"], &h, &CombineConfig::default()).unwrap();
        assert!(t.is_deterministic());
        for s in t.states() {
            assert!(t.arcs(s).iter().all(|a| a.weight.is_one()));
        }
    }

    #[test]
    fn errors() {
        let syms = table();
        let mut empty = Fst::<Tropical>::new().with_symbols(Some(syms.clone()));
        empty.add_state();
        empty.set_start(0);
        assert!(matches!(
            combine(&["a"], &empty, &CombineConfig::default()),
            Err(Error::EmptyLanguage)
        ));
        let mut cyclic = lattice(&syms, &["a"]);
        cyclic.add_arc(1, Arc::new(1, 1, Tropical(0.0), 0));
        assert!(matches!(
            combine(&["a"], &cyclic, &CombineConfig::default()),
            Err(Error::Cyclic)
        ));
        let bad = CombineConfig {
            prune_threshold: Tropical(-1.0),
            ..Default::default()
        };
        assert!(combine(&["a"], &lattice(&syms, &["a"]), &bad).is_err());
    }

    #[test]
    fn identity_grammar_keeps_weights() {
        let syms = table();
        let t = combine(&["the", "sea"], &lattice(&syms, &["the sea", "a"]), &CombineConfig::default()).unwrap();
        let mut g = Fst::<Tropical>::new().with_symbols(Some(syms.clone()));
        let s = g.add_state();
        g.set_start(s);
        g.set_final(s, Tropical(0.0));
        for l in syms.word_ids() {
            g.add_arc(s, Arc::new(l, l, Tropical(0.0), s));
        }
        let r = rescore_with_grammar(&t, &g, "utt1").unwrap();
        assert_eq!(
            enumerate_paths(&r, 10).unwrap().output_language(),
            enumerate_paths(&t, 10).unwrap().output_language()
        );
    }

    #[test]
    fn grammar_costs_are_added() {
        let syms = table();
        let t: Fst<Tropical> = linear_fst(&[3, 5], &syms).unwrap();
        let mut g: Fst<Tropical> = linear_fst(&[3, 5], &syms).unwrap();
        g.arcs_mut(0)[0].weight = Tropical(1.7);
        g.set_final(2, Tropical(2.5));
        let r = rescore_with_grammar(&t, &g, "u").unwrap();
        let p = enumerate_paths(&r, 10).unwrap();
        assert_eq!(p.len(), 1);
        assert!((p.paths[0].weight.0 - 4.2).abs() < 1e-12);
    }

    #[test]
    fn empty_rescoring_names_the_utterance() {
        let syms = table();
        let t: Fst<Tropical> = linear_fst(&[1], &syms).unwrap();
        let g: Fst<Tropical> = linear_fst(&[2], &syms).unwrap();
        match rescore_with_grammar(&t, &g, "utt-7") {
            Err(Error::NoGrammarPath { utterance }) => assert_eq!(utterance, "utt-7"),
            other => panic!("{other:?}"),
        }
    }
}
