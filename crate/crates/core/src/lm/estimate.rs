use std::collections::HashMap;
use std::sync::Arc as Shared;

use super::{NGramEntry, NGramModel, BOS, EOS, UNK};
use crate::error::{Error, Result};
use crate::fst::Label;
use crate::symbols::SymbolTable;

/// Estimates an interpolated Witten–Bell back-off model.
///
/// The vocabulary keeps the `vocab_cap` most frequent words (ties broken
/// alphabetically); everything else is counted as `<unk>`. Each sentence is
/// wrapped in `<s> … </s>`. For a context `h` seen `c(h)` times with `T(h)`
/// distinct successors,
///
/// ```text
/// P(w | h) = (c(h, w) + T(h) · P(w | h')) / (c(h) + T(h))
/// ```
///
/// where `h'` drops the oldest word and the empty context backs off to the
/// uniform distribution over the predictable vocabulary. Seen n-grams are
/// stored explicitly and `T(h) / (c(h) + T(h))` becomes `h`'s back-off
/// weight, which reproduces the interpolated distribution exactly.
pub fn estimate<S: AsRef<str>>(
    corpus: &[Vec<S>],
    order: usize,
    vocab_cap: usize,
) -> Result<NGramModel> {
    if corpus.is_empty() {
        return Err(Error::InvalidArgument("the training corpus is empty".into()));
    }
    if order == 0 {
        return Err(Error::InvalidArgument("n-gram order must be at least 1".into()));
    }
    if vocab_cap == 0 {
        return Err(Error::InvalidArgument("vocabulary cap must be at least 1".into()));
    }

    let mut freq: HashMap<&str, u64> = HashMap::new();
    for s in corpus {
        for w in s {
            let w = w.as_ref();
            if w == BOS || w == EOS || w == UNK {
                continue;
            }
            *freq.entry(w).or_default() += 1;
        }
    }
    let mut ranked: Vec<(&str, u64)> = freq.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    ranked.truncate(vocab_cap);

    let mut table = SymbolTable::new();
    for special in [BOS, EOS, UNK] {
        table.add_symbol(special);
    }
    for (w, _) in &ranked {
        table.add_symbol(w);
    }
    let vocab = Shared::new(table);
    let mut model = NGramModel::new(order, vocab.clone())?;
    let (bos, eos) = (model.bos(), model.eos());

    // counts of every n-gram up to `order`, keyed by the full n-gram
    let mut counts: HashMap<Vec<Label>, u64> = HashMap::new();
    for s in corpus {
        let mut tokens = vec![bos];
        tokens.extend(model.encode(s));
        tokens.push(eos);
        for end in 1..tokens.len() {
            for n in 1..=order.min(end + 1) {
                *counts.entry(tokens[end + 1 - n..=end].to_vec()).or_default() += 1;
            }
        }
    }
    // c(h) and T(h) per context
    let mut context_stats: HashMap<Vec<Label>, (u64, u64)> = HashMap::new();
    for (ngram, &c) in &counts {
        let st = context_stats.entry(ngram[..ngram.len() - 1].to_vec()).or_default();
        st.0 += c;
        st.1 += 1;
    }

    let words = model.predictable_words();
    let uniform = 1.0 / words.len() as f64;
    let (n0, t0) = context_stats[&Vec::new()];
    for &w in &words {
        let c = counts.get(&vec![w]).copied().unwrap_or(0);
        let p = (c as f64 + t0 as f64 * uniform) / (n0 + t0) as f64;
        model.insert(vec![w], NGramEntry { prob: p, backoff: None });
    }
    if order > 1 {
        model.insert(vec![bos], NGramEntry { prob: 0.0, backoff: None });
    }

    let mut by_order: Vec<Vec<(&Vec<Label>, u64)>> = vec![Vec::new(); order + 1];
    for (ngram, &c) in &counts {
        by_order[ngram.len()].push((ngram, c));
    }
    for n in 2..=order {
        by_order[n].sort();
        for &(ngram, c) in &by_order[n] {
            let (ctx, w) = (&ngram[..n - 1], ngram[n - 1]);
            let (ch, th) = context_stats[ctx];
            let lower = model.prob(&ctx[1..], w);
            let p = (c as f64 + th as f64 * lower) / (ch + th) as f64;
            model.insert(ngram.clone(), NGramEntry { prob: p, backoff: None });
        }
    }
    for (ctx, &(ch, th)) in &context_stats {
        if ctx.is_empty() {
            continue;
        }
        let alpha = th as f64 / (ch + th) as f64;
        model
            .entry_mut(ctx)
            .expect("every context is itself a counted n-gram")
            .backoff = Some(alpha);
    }
    Ok(model)
}
