//! Transcript and lattice quality measures.
//!
//! Word error rates use the reference length as denominator, clamped to at
//! least 1 so an empty reference yields the raw insertion count rather than a
//! division by zero.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algo::{
    backward_distance, count_paths, enumerate_paths, linear_chain, project_output, shortest_path,
};
use crate::edit::{lazy_edit_compose, EditCosts};
use crate::error::{Error, Result};
use crate::fst::{Fst, Label, StateId, EPSILON};
use crate::semiring::{Log, Semiring, Tropical};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorBreakdown {
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
    pub reference_length: usize,
    pub wer: f64,
}

impl ErrorBreakdown {
    pub fn new(substitutions: usize, deletions: usize, insertions: usize, reference_length: usize) -> Self {
        let errors = substitutions + deletions + insertions;
        ErrorBreakdown {
            substitutions,
            deletions,
            insertions,
            reference_length,
            wer: errors as f64 / reference_length.max(1) as f64,
        }
    }

    pub fn errors(&self) -> usize {
        self.substitutions + self.deletions + self.insertions
    }
}

/// Unit-cost Levenshtein alignment. When several alignments are optimal the
/// backtrace prefers match, then substitution, deletion and insertion.
pub fn edit_distance<T: PartialEq>(reference: &[T], hypothesis: &[T]) -> ErrorBreakdown {
    let (n, m) = (reference.len(), hypothesis.len());
    let mut d = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let diag = d[i - 1][j - 1] + usize::from(reference[i - 1] != hypothesis[j - 1]);
            d[i][j] = diag.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    let (mut i, mut j) = (n, m);
    let (mut s, mut del, mut ins) = (0, 0, 0);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 {
            let same = reference[i - 1] == hypothesis[j - 1];
            if d[i][j] == d[i - 1][j - 1] + usize::from(!same) {
                s += usize::from(!same);
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && d[i][j] == d[i - 1][j] + 1 {
            del += 1;
            i -= 1;
        } else {
            ins += 1;
            j -= 1;
        }
    }
    ErrorBreakdown::new(s, del, ins, n)
}

/// Outcome of [`mer_filter`]; ids keep the transcript order.
#[derive(Clone, Debug, PartialEq)]
pub struct MerPartition {
    pub kept: Vec<String>,
    pub dropped: Vec<String>,
    pub report: Vec<(String, ErrorBreakdown)>,
}

/// Keeps the utterances whose matching error rate between transcript
/// (reference) and decode is at most `threshold_percent`.
pub fn mer_filter<S: AsRef<str>>(
    transcripts: &[(String, Vec<S>)],
    decodes: &[(String, Vec<S>)],
    threshold_percent: f64,
) -> Result<MerPartition> {
    if threshold_percent.is_nan() {
        return Err(Error::InvalidArgument("MER threshold is NaN".into()));
    }
    let by_id: HashMap<&str, &[S]> = decodes.iter().map(|(id, w)| (id.as_str(), w.as_slice())).collect();
    let first: BTreeSet<&str> = transcripts.iter().map(|(id, _)| id.as_str()).collect();
    let second: BTreeSet<&str> = by_id.keys().copied().collect();
    if first != second || first.len() != transcripts.len() || second.len() != decodes.len() {
        let dup = |v: &[(String, Vec<S>)]| {
            let mut seen = BTreeSet::new();
            v.iter()
                .filter(|(id, _)| !seen.insert(id.as_str()))
                .map(|(id, _)| format!("{id} (duplicate)"))
                .collect::<Vec<_>>()
        };
        let mut only_first: Vec<String> = first.difference(&second).map(|s| s.to_string()).collect();
        let mut only_second: Vec<String> = second.difference(&first).map(|s| s.to_string()).collect();
        only_first.extend(dup(transcripts));
        only_second.extend(dup(decodes));
        return Err(Error::IdMismatch { only_first, only_second });
    }

    let mut out = MerPartition {
        kept: Vec::new(),
        dropped: Vec::new(),
        report: Vec::new(),
    };
    for (id, words) in transcripts {
        let r: Vec<&str> = words.iter().map(AsRef::as_ref).collect();
        let h: Vec<&str> = by_id[id.as_str()].iter().map(AsRef::as_ref).collect();
        let b = edit_distance(&r, &h);
        // compare in integers scaled by 100 to avoid rounding at the boundary
        if (b.errors() * 100) as f64 <= threshold_percent * b.reference_length.max(1) as f64 {
            out.kept.push(id.clone());
        } else {
            out.dropped.push(id.clone());
        }
        out.report.push((id.clone(), b));
    }
    Ok(out)
}

/// Posterior-weighted mean WER over every path of `lattice`, with
/// posteriors `exp(−w(π)) / Σ exp(−w(π'))` from the lattice's own costs.
pub fn expected_wer<W: Semiring>(lattice: &Fst<W>, reference: &[Label], cap: usize) -> Result<f64> {
    let paths = enumerate_paths(lattice, cap)?;
    if paths.is_empty() {
        return Err(Error::EmptyLanguage);
    }
    let best = paths
        .paths
        .iter()
        .map(|p| p.weight.value())
        .fold(f64::INFINITY, f64::min);
    let mut norm = 0.0;
    let mut acc = 0.0;
    for p in &paths.paths {
        let post = (best - p.weight.value()).exp();
        norm += post;
        acc += post * edit_distance(reference, &p.olabels).wer;
    }
    Ok(acc / norm)
}

/// Monte-Carlo estimate of [`expected_wer`] from `samples` paths drawn from
/// the same posterior, for lattices too large to enumerate.
pub fn expected_wer_sampled<W: Semiring>(
    lattice: &Fst<W>,
    reference: &[Label],
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    let log: Fst<Log> = lattice.map_weights(|w| Log(w.value()));
    let beta = backward_distance(&log)?;
    let start = log.start().ok_or(Error::EmptyLanguage)?;
    if beta[start].is_zero() {
        return Err(Error::EmptyLanguage);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    let mut words = Vec::new();
    for _ in 0..samples {
        words.clear();
        let mut s: StateId = start;
        loop {
            // P(stop) = exp(β(s) − f(s)); P(arc) = exp(β(s) − w − β(next))
            let mut u: f64 = rng.gen();
            let stop = (beta[s].0 - log.final_weight(s).0).exp();
            if u < stop {
                break;
            }
            u -= stop;
            let mut chosen = None;
            for a in log.arcs(s) {
                let p = (beta[s].0 - a.weight.0 - beta[a.nextstate].0).exp();
                if p > 0.0 {
                    chosen = Some(a);
                    if u < p {
                        break;
                    }
                    u -= p;
                }
            }
            // rounding can leave a sliver of mass past the last arc; the last
            // live arc absorbs it
            match chosen {
                Some(a) => {
                    if a.olabel != EPSILON {
                        words.push(a.olabel);
                    }
                    s = a.nextstate;
                }
                None => break,
            }
        }
        total += edit_distance(reference, &words).wer;
    }
    Ok(total / samples as f64)
}

/// Result of [`expected_wer_auto`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpectedWer {
    pub value: f64,
    /// True when every path was enumerated, false for a sampled estimate.
    pub exact: bool,
    pub path_count: u128,
}

/// Exact [`expected_wer`] when the lattice has at most `cap` paths,
/// otherwise [`expected_wer_sampled`].
pub fn expected_wer_auto<W: Semiring>(
    lattice: &Fst<W>,
    reference: &[Label],
    cap: usize,
    samples: usize,
    seed: u64,
) -> Result<ExpectedWer> {
    let path_count = count_paths(lattice)?;
    if path_count <= cap as u128 {
        let value = expected_wer(lattice, reference, cap)?;
        Ok(ExpectedWer { value, exact: true, path_count })
    } else {
        let value = expected_wer_sampled(lattice, reference, samples, seed)?;
        Ok(ExpectedWer { value, exact: false, path_count })
    }
}

/// Best WER reachable by any path, found as the shortest path through
/// `reference ∘ Levenshtein ∘ lattice` with the lattice weights ignored.
pub fn oracle_wer<W: Semiring>(lattice: &Fst<W>, reference: &[Label]) -> Result<ErrorBreakdown> {
    let h: Fst<Tropical> = project_output(lattice)
        .map_weights(|_| Tropical::one())
        .with_symbols(None);
    let r: Fst<Tropical> = linear_chain(reference);
    let aligned = lazy_edit_compose(&r, &h, EditCosts::levenshtein())?;
    let (arcs, _) = shortest_path(&aligned)?.ok_or(Error::EmptyLanguage)?;
    let (mut s, mut d, mut i) = (0, 0, 0);
    for a in arcs {
        match (a.ilabel, a.olabel) {
            (EPSILON, EPSILON) => {}
            (_, EPSILON) => d += 1,
            (EPSILON, _) => i += 1,
            (x, y) if x != y => s += 1,
            _ => {}
        }
    }
    Ok(ErrorBreakdown::new(s, d, i, reference.len()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeStats {
    /// Word arcs per position of the longest path: 1 for a linear lattice,
    /// `k` for a sausage with `k` alternatives in every slot. This is a
    /// structural measure; the lattices carry no time marks.
    pub depth: f64,
    pub path_count: u128,
    pub states: usize,
    pub arcs: usize,
}

/// Structural depth and size of the trimmed lattice.
pub fn lattice_depth<W: Semiring>(lattice: &Fst<W>) -> Result<LatticeStats> {
    let t = lattice.trim();
    if t.is_empty() {
        return Err(Error::EmptyLanguage);
    }
    let order = t.require_acyclic()?;
    // longest accepting path, in arcs, from each state
    let mut longest = vec![0usize; t.num_states()];
    for &s in order.iter().rev() {
        longest[s] = t.arcs(s).iter().map(|a| longest[a.nextstate] + 1).max().unwrap_or(0);
    }
    let start = t.start().unwrap();
    let word_arcs = t
        .states()
        .map(|s| t.arcs(s).iter().filter(|a| a.olabel != EPSILON).count())
        .sum::<usize>();
    let depth = if longest[start] == 0 {
        1.0
    } else {
        word_arcs as f64 / longest[start] as f64
    };
    Ok(LatticeStats {
        depth,
        path_count: count_paths(&t)?,
        states: t.num_states(),
        arcs: t.num_arcs(),
    })
}
