use anyhow::Context;
use latcomb::algo::prune_to_threshold;
use latcomb::lm::relabel;
use latcomb::{combine as combine_one, rescore_with_grammar, CombineConfig, EditCosts, EditMode, Tropical};

use super::{archive_of, pair};
use crate::args::{CombineArgs, PruneArgs, RescoreArgs};
use crate::batch::Pool;
use crate::{files, Outcome};

pub fn combine(a: &CombineArgs, pool: &Pool) -> anyhow::Result<Outcome> {
    let c = &a.costs;
    let cfg = CombineConfig {
        prune_threshold: Tropical(a.threshold),
        edit_costs: EditCosts::new(c.insertion_cost, c.deletion_cost, c.substitution_cost, c.match_cost)?,
        strip_weights_after_prune: !a.keep_weights,
        edit_mode: if a.explicit_edit { EditMode::Explicit } else { EditMode::Lazy },
    };
    cfg.validate()?;
    let syms = files::symbols(&a.syms)?;
    let lattices = files::archive(&a.lattices, Some(&syms))?;
    let transcripts = files::transcripts(&a.transcripts)?;
    let items = pair(&lattices, &transcripts)?;

    let settled = pool.map(&items, |p| p.id, |p| combine_one(p.words, p.fst, &cfg));
    if settled.aborted {
        return Ok(Outcome { failed_utterances: settled.failed });
    }
    let ids: Vec<&str> = items.iter().map(|p| p.id).collect();
    files::write(&a.out, &archive_of(&ids, settled.ok)?.to_text())?;
    Ok(Outcome { failed_utterances: settled.failed })
}

pub fn prune(a: &PruneArgs, pool: &Pool) -> anyhow::Result<Outcome> {
    if a.threshold.is_nan() || a.threshold < 0.0 {
        anyhow::bail!("--threshold must be at least 0");
    }
    let syms = a.syms.as_deref().map(files::symbols).transpose()?;
    let lattices = files::archive(&a.lattices, syms.as_ref())?;
    let items: Vec<_> = lattices.iter().collect();
    let settled = pool.map(&items, |(id, _)| id, |(_, f)| prune_to_threshold(f, Tropical(a.threshold)));
    if settled.aborted {
        return Ok(Outcome { failed_utterances: settled.failed });
    }
    let ids: Vec<&str> = items.iter().map(|(id, _)| *id).collect();
    files::write(&a.out, &archive_of(&ids, settled.ok)?.to_text())?;
    Ok(Outcome { failed_utterances: settled.failed })
}

pub fn rescore(a: &RescoreArgs, pool: &Pool) -> anyhow::Result<Outcome> {
    let syms = files::symbols(&a.syms)?;
    let lattices = files::archive(&a.lattices, Some(&syms))?;
    let grammar = files::fst(&a.grammar)?;
    let grammar = match &a.grammar_syms {
        Some(p) => relabel(&grammar.with_symbols(Some(files::symbols(p)?)), &syms),
        None => grammar.with_symbols(Some(syms.clone())),
    };
    grammar.validate().context("grammar")?;

    let items: Vec<_> = lattices.iter().collect();
    let settled = pool.map(&items, |(id, _)| id, |(id, t)| rescore_with_grammar(t, &grammar, id));
    if settled.aborted {
        return Ok(Outcome { failed_utterances: settled.failed });
    }
    let ids: Vec<&str> = items.iter().map(|(id, _)| *id).collect();
    files::write(&a.out, &archive_of(&ids, settled.ok)?.to_text())?;
    Ok(Outcome { failed_utterances: settled.failed })
}
