mod convert;
mod lattice;
mod lm;
mod metrics;
mod simulate;

use std::collections::{BTreeSet, HashMap};

use latcomb::{Fst, LatticeArchive, Tropical};

use crate::args::Command;
use crate::batch::Pool;
use crate::files::Transcripts;
use crate::Outcome;

pub fn dispatch(command: &Command, pool: &Pool) -> anyhow::Result<Outcome> {
    match command {
        Command::Combine(a) => lattice::combine(a, pool),
        Command::Prune(a) => lattice::prune(a, pool),
        Command::Rescore(a) => lattice::rescore(a, pool),
        Command::MerFilter(a) => metrics::mer_filter(a),
        Command::ExpectedWer(a) => metrics::expected_wer(a, pool),
        Command::OracleWer(a) => metrics::oracle_wer(a, pool),
        Command::Depth(a) => metrics::depth(a, pool),
        Command::LmTrain(a) => lm::train(a),
        Command::LmInterpolate(a) => lm::interpolate(a),
        Command::LmToFst(a) => lm::to_fst(a),
        Command::WordReward(a) => lm::word_reward(a),
        Command::Simulate(a) => simulate::simulate(a),
        Command::FstConvert(a) => convert::convert(a),
    }
}

/// One lattice with its transcript or reference.
pub struct Paired<'a> {
    pub id: &'a str,
    pub fst: &'a Fst<Tropical>,
    pub words: &'a [String],
}

/// Joins an archive with a transcript file on utterance id, in archive
/// order. The id sets must be identical.
pub fn pair<'a>(archive: &'a LatticeArchive<Tropical>, texts: &'a Transcripts) -> anyhow::Result<Vec<Paired<'a>>> {
    let by_id: HashMap<&str, &[String]> = texts.iter().map(|(id, w)| (id.as_str(), w.as_slice())).collect();
    let lattice_ids: BTreeSet<&str> = archive.ids().collect();
    let text_ids: BTreeSet<&str> = by_id.keys().copied().collect();
    if lattice_ids != text_ids {
        return Err(latcomb::Error::IdMismatch {
            only_first: lattice_ids.difference(&text_ids).map(|s| s.to_string()).collect(),
            only_second: text_ids.difference(&lattice_ids).map(|s| s.to_string()).collect(),
        }
        .into());
    }
    Ok(archive
        .iter()
        .map(|(id, fst)| Paired { id, fst, words: by_id[id] })
        .collect())
}

/// Rebuilds an archive from settled per-utterance results.
pub fn archive_of(ids: &[&str], ok: Vec<(usize, Fst<Tropical>)>) -> anyhow::Result<LatticeArchive<Tropical>> {
    let mut out = LatticeArchive::new();
    for (i, fst) in ok {
        out.push(ids[i], fst)?;
    }
    Ok(out)
}
