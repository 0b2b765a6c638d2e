use latcomb::algo::count_paths;
use latcomb::combine::encode_transcript;
use latcomb::metrics::{self, expected_wer_auto, lattice_depth};
use latcomb::{write_transcripts, ErrorBreakdown};

use super::pair;
use crate::args::{DepthArgs, ExpectedWerArgs, LatticeRefArgs, MerFilterArgs};
use crate::batch::Pool;
use crate::report::Report;
use crate::{files, Outcome};

fn breakdown_rows(report: &mut Report, id: &str, prefix: &str, b: &ErrorBreakdown) {
    report.ratio(id, prefix, b.wer);
    report.row(id, "substitutions", b.substitutions);
    report.row(id, "deletions", b.deletions);
    report.row(id, "insertions", b.insertions);
    report.row(id, "reference_length", b.reference_length);
}

/// Corpus-level rate: total errors over total reference words.
fn corpus_rate<'a>(all: impl Iterator<Item = &'a ErrorBreakdown>) -> f64 {
    let (errors, words) = all.fold((0, 0), |(e, w), b| (e + b.errors(), w + b.reference_length));
    errors as f64 / words.max(1) as f64
}

pub fn mer_filter(a: &MerFilterArgs) -> anyhow::Result<Outcome> {
    let transcripts = files::transcripts(&a.transcripts)?;
    let decodes = files::transcripts(&a.decodes)?;
    let part = metrics::mer_filter(&transcripts, &decodes, a.threshold)?;

    let select = |ids: &[String]| {
        let keep: std::collections::HashSet<&str> = ids.iter().map(String::as_str).collect();
        let rows: Vec<(String, Vec<String>)> =
            transcripts.iter().filter(|(id, _)| keep.contains(id.as_str())).cloned().collect();
        write_transcripts(&rows)
    };
    files::write(&a.kept, &select(&part.kept))?;
    files::write(&a.dropped, &select(&part.dropped))?;

    let mut report = Report::default();
    for (id, b) in &part.report {
        breakdown_rows(&mut report, id, "mer", b);
        report.row(id, "kept", u8::from(part.kept.contains(id)));
    }
    report.ratio("ALL", "mer", corpus_rate(part.report.iter().map(|(_, b)| b)));
    report.row("ALL", "kept", part.kept.len());
    report.row("ALL", "dropped", part.dropped.len());
    report.emit(a.report.as_deref())?;
    Ok(Outcome::default())
}

pub fn expected_wer(a: &ExpectedWerArgs, pool: &Pool) -> anyhow::Result<Outcome> {
    let c = &a.common;
    let syms = files::symbols(&c.syms)?;
    let lattices = files::archive(&c.lattices, Some(&syms))?;
    let refs = files::transcripts(&c.refs)?;
    let items: Vec<_> = pair(&lattices, &refs)?.into_iter().enumerate().collect();

    let settled = pool.map(&items, |(_, p)| p.id, |(i, p)| {
        let r = encode_transcript(p.words, &syms);
        // a distinct, position-derived stream per utterance keeps results
        // independent of scheduling
        let seed = a.seed.wrapping_add(*i as u64);
        if a.exact {
            let path_count = count_paths(p.fst)?;
            let value = metrics::expected_wer(p.fst, &r, a.cap)?;
            Ok(metrics::ExpectedWer { value, exact: true, path_count })
        } else {
            expected_wer_auto(p.fst, &r, a.cap, a.samples, seed)
        }
    });
    if settled.aborted {
        return Ok(Outcome { failed_utterances: settled.failed });
    }
    let mut report = Report::default();
    let mut sum = 0.0;
    for (i, e) in &settled.ok {
        let id = items[*i].1.id;
        report.ratio(id, "expected_wer", e.value);
        report.row(id, "sampled", u8::from(!e.exact));
        report.row(id, "paths", e.path_count);
        sum += e.value;
    }
    if !settled.ok.is_empty() {
        report.ratio("ALL", "expected_wer", sum / settled.ok.len() as f64);
    }
    report.emit(c.out.as_deref())?;
    Ok(Outcome { failed_utterances: settled.failed })
}

pub fn oracle_wer(a: &LatticeRefArgs, pool: &Pool) -> anyhow::Result<Outcome> {
    let syms = files::symbols(&a.syms)?;
    let lattices = files::archive(&a.lattices, Some(&syms))?;
    let refs = files::transcripts(&a.refs)?;
    let items = pair(&lattices, &refs)?;

    let settled = pool.map(&items, |p| p.id, |p| {
        metrics::oracle_wer(p.fst, &encode_transcript(p.words, &syms))
    });
    if settled.aborted {
        return Ok(Outcome { failed_utterances: settled.failed });
    }
    let mut report = Report::default();
    for (i, b) in &settled.ok {
        breakdown_rows(&mut report, items[*i].id, "oracle_wer", b);
    }
    report.ratio("ALL", "oracle_wer", corpus_rate(settled.ok.iter().map(|(_, b)| b)));
    report.emit(a.out.as_deref())?;
    Ok(Outcome { failed_utterances: settled.failed })
}

pub fn depth(a: &DepthArgs, pool: &Pool) -> anyhow::Result<Outcome> {
    let lattices = files::archive(&a.lattices, None)?;
    let items: Vec<_> = lattices.iter().collect();
    let settled = pool.map(&items, |(id, _)| id, |(_, f)| lattice_depth(*f));
    if settled.aborted {
        return Ok(Outcome { failed_utterances: settled.failed });
    }
    // depth is structural (word arcs per longest-path position); the
    // lattices carry no time marks
    let mut report = Report::default();
    let mut sum = 0.0;
    for (i, s) in &settled.ok {
        let id = items[*i].0;
        report.ratio(id, "structural_depth", s.depth);
        report.row(id, "paths", s.path_count);
        report.row(id, "states", s.states);
        report.row(id, "arcs", s.arcs);
        sum += s.depth;
    }
    if !settled.ok.is_empty() {
        report.ratio("ALL", "structural_depth", sum / settled.ok.len() as f64);
    }
    report.emit(a.out.as_deref())?;
    Ok(Outcome { failed_utterances: settled.failed })
}
