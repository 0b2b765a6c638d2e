use std::collections::{BTreeSet, HashMap};
use std::sync::Arc as Shared;

use super::{NGramEntry, NGramModel, BOS, EOS, UNK};
use crate::error::{Error, Result};
use crate::fst::Label;
use crate::symbols::SymbolTable;

/// Denominators below this are treated as "all mass is explicit" and the
/// context's back-off weight is left at 1.
const MASS_FLOOR: f64 = 1e-15;

/// Linear interpolation `λ·P_in + (1−λ)·P_bg`, re-encoded as a back-off
/// model over the union vocabulary and the union of explicit n-grams.
///
/// Explicit n-grams carry the mixed probability exactly. Back-off weights
/// are chosen so that every context normalizes; for events neither model
/// lists explicitly the re-encoded value is an approximation of the mixture,
/// since a single back-off weight cannot represent two different ones.
///
/// A word missing from one component gets probability 0 from it when
/// predicted and is treated as `<unk>` when it appears in a context. At the
/// endpoints λ = 1 and λ = 0 the corresponding model is returned unchanged.
pub fn interpolate(in_domain: &NGramModel, background: &NGramModel, lambda: f64) -> Result<NGramModel> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidArgument(format!(
            "interpolation weight {lambda} is outside [0, 1]"
        )));
    }
    if lambda == 1.0 {
        return Ok(in_domain.clone());
    }
    if lambda == 0.0 {
        return Ok(background.clone());
    }

    let mut table = SymbolTable::new();
    for special in [BOS, EOS, UNK] {
        table.add_symbol(special);
    }
    for m in [in_domain, background] {
        for (id, sym) in m.vocab().iter() {
            if id != 0 && table.find_id(sym).is_none() {
                table.add_symbol(sym);
            }
        }
    }
    let vocab = Shared::new(table);
    let order = in_domain.order().max(background.order());
    let mut mixed = NGramModel::new(order, vocab.clone())?;

    let components = [(in_domain, lambda), (background, 1.0 - lambda)];
    // union label -> component label (None when the component lacks the word)
    let maps: Vec<Vec<Option<Label>>> = components
        .iter()
        .map(|(m, _)| {
            let top = vocab.iter().map(|(id, _)| id).max().unwrap_or(0) as usize;
            let mut map = vec![None; top + 1];
            for (id, sym) in vocab.iter() {
                map[id as usize] = m.vocab().find_id(sym);
            }
            map
        })
        .collect();
    let mix = |history: &[Label], word: Label| -> f64 {
        components
            .iter()
            .zip(&maps)
            .map(|((m, weight), map)| {
                let Some(w) = map[word as usize] else { return 0.0 };
                let h: Vec<Label> = history
                    .iter()
                    .map(|&l| map[l as usize].unwrap_or(m.unk()))
                    .collect();
                weight * m.prob(&h, w)
            })
            .sum()
    };

    // union of explicit n-grams, in union labels
    let mut ngrams: BTreeSet<(usize, Vec<Label>)> = BTreeSet::new();
    for (m, _) in &components {
        for (ngram, _) in m.sorted_entries() {
            let mapped: Vec<Label> = ngram
                .iter()
                .map(|&l| vocab.find_id(m.vocab().find_symbol(l).unwrap()).unwrap())
                .collect();
            ngrams.insert((mapped.len(), mapped));
        }
    }
    for w in mixed.predictable_words() {
        ngrams.insert((1, vec![w]));
    }

    let bos = mixed.bos();
    let mut continuations: HashMap<Vec<Label>, Vec<Label>> = HashMap::new();
    for (_, ngram) in &ngrams {
        let (&w, ctx) = ngram.split_last().unwrap();
        let prob = if w == bos { 0.0 } else { mix(ctx, w) };
        mixed.insert(ngram.clone(), NGramEntry { prob, backoff: None });
        if w != bos {
            continuations.entry(ctx.to_vec()).or_default().push(w);
        }
    }

    // Back-off weights, shortest contexts first so that the lower-order
    // distribution each context backs off to is already final.
    let mut contexts: Vec<&Vec<Label>> = continuations.keys().filter(|c| !c.is_empty()).collect();
    contexts.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    for ctx in contexts {
        let words = &continuations[ctx];
        let explicit: f64 = words.iter().map(|&w| mixed.entry(&[&ctx[..], &[w]].concat()).unwrap().prob).sum();
        let lower: f64 = words.iter().map(|&w| mixed.prob(&ctx[1..], w)).sum();
        let (num, den) = (1.0 - explicit, 1.0 - lower);
        if den > MASS_FLOOR {
            let alpha = (num / den).max(f64::MIN_POSITIVE);
            if let Some(e) = mixed.entry_mut(ctx) {
                e.backoff = Some(alpha);
            }
        }
    }
    Ok(mixed)
}
