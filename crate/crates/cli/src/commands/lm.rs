use anyhow::bail;
use latcomb::lm::{self, apply_word_reward, relabel, to_grammar_fst, write_arpa};

use crate::args::{LmInterpolateArgs, LmToFstArgs, LmTrainArgs, WordRewardArgs};
use crate::{files, Outcome};

pub fn train(a: &LmTrainArgs) -> anyhow::Result<Outcome> {
    let text = files::read(&a.corpus)?;
    let corpus: Vec<Vec<&str>> = text
        .lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>())
        .filter(|s| !s.is_empty())
        .collect();
    let model = lm::estimate(&corpus, a.order, a.vocab_cap)?;
    files::write(&a.out, &write_arpa(&model))?;
    Ok(Outcome::default())
}

pub fn interpolate(a: &LmInterpolateArgs) -> anyhow::Result<Outcome> {
    let in_domain = files::arpa(&a.input)?;
    let background = files::arpa(&a.bg)?;
    let mixed = lm::interpolate(&in_domain, &background, a.lambda)?;
    files::write(&a.out, &write_arpa(&mixed))?;
    Ok(Outcome::default())
}

pub fn to_fst(a: &LmToFstArgs) -> anyhow::Result<Outcome> {
    let model = files::arpa(&a.arpa)?;
    let mut g = to_grammar_fst(&model);
    if let Some(p) = &a.syms {
        g = relabel(&g, &files::symbols(p)?);
    }
    files::write_fst(&a.out, &g)?;
    if let Some(p) = &a.syms_out {
        let table = g.symbols().expect("grammars carry their table");
        files::write(p, &table.to_text())?;
    }
    Ok(Outcome::default())
}

pub fn word_reward(a: &WordRewardArgs) -> anyhow::Result<Outcome> {
    if !a.reward.is_finite() || a.reward < 0.0 {
        bail!("--reward must be a finite non-negative cost, got {}", a.reward);
    }
    let g = files::fst(&a.input)?;
    files::write_fst(&a.out, &apply_word_reward(&g, a.reward))?;
    Ok(Outcome::default())
}
