//! Algorithms over [`Fst`]. Every operation is a pure function returning a
//! new machine with arcs sorted by (ilabel, olabel, nextstate).

mod compose;
mod determinize;
mod minimize;
mod paths;
mod prune;
mod rmeps;
mod shortest;

pub use compose::compose;
pub use determinize::determinize;
pub use minimize::minimize;
pub use paths::{count_paths, enumerate_paths, Path, PathSet};
pub use prune::prune_to_threshold;
pub use rmeps::remove_epsilons;
pub use shortest::{backward_distance, forward_distance, shortest_path, shortest_path_weight};

use std::sync::Arc as Shared;

use crate::error::{Error, Result};
use crate::fst::{Arc, Fst, Label, EPSILON};
use crate::semiring::Semiring;
use crate::symbols::SymbolTable;

/// Copies each arc's output label onto its input tape.
pub fn project_output<W: Semiring>(fst: &Fst<W>) -> Fst<W> {
    let mut out = fst.clone();
    for s in out.states() {
        for a in out.arcs_mut(s) {
            a.ilabel = a.olabel;
        }
    }
    out.arc_sort();
    out
}

/// Same topology with every arc and final weight set to `1̄`.
pub fn scale_weights_to_one<W: Semiring>(fst: &Fst<W>) -> Fst<W> {
    fst.map_weights(|_| W::one())
}

/// Linear acceptor of `words` with all weights `1̄`. Every label must be a
/// non-epsilon id of `symbols`.
pub fn linear_fst<W: Semiring>(words: &[Label], symbols: &Shared<SymbolTable>) -> Result<Fst<W>> {
    for &w in words {
        if w == EPSILON {
            return Err(Error::UnexpectedEpsilon);
        }
        if !symbols.contains_id(w) {
            return Err(Error::UnknownLabel(w));
        }
    }
    Ok(linear_chain(words).with_symbols(Some(symbols.clone())))
}

/// [`linear_fst`] without symbol checks.
pub(crate) fn linear_chain<W: Semiring>(words: &[Label]) -> Fst<W> {
    let mut f = Fst::new();
    f.add_states(words.len() + 1);
    f.set_start(0);
    for (i, &w) in words.iter().enumerate() {
        f.add_arc(i, Arc::new(w, w, W::one(), i + 1));
    }
    f.set_final(words.len(), W::one());
    f
}

/// Label sequence of a linear acceptor, together with the machine's total
/// arc weights per position and its final weight.
pub(crate) fn linear_labels<W: Semiring>(fst: &Fst<W>) -> Result<(Vec<Label>, Vec<W>, W)> {
    let not_linear = || Error::InvalidArgument("expected a linear acceptor".into());
    let mut s = fst.start().ok_or(Error::EmptyLanguage)?;
    let mut labels = Vec::new();
    let mut weights = Vec::new();
    let mut seen = vec![false; fst.num_states()];
    loop {
        if seen[s] {
            return Err(not_linear());
        }
        seen[s] = true;
        match fst.arcs(s) {
            [] => break,
            [a] if a.ilabel == a.olabel && a.ilabel != EPSILON && !fst.is_final(s) => {
                labels.push(a.ilabel);
                weights.push(a.weight);
                s = a.nextstate;
            }
            _ => return Err(not_linear()),
        }
    }
    if !fst.is_final(s) {
        return Err(Error::EmptyLanguage);
    }
    Ok((labels, weights, fst.final_weight(s)))
}

pub(crate) fn check_symbols<W: Semiring>(a: &Fst<W>, b: &Fst<W>) -> Result<Option<Shared<SymbolTable>>> {
    match (a.symbols(), b.symbols()) {
        (Some(x), Some(y)) if !Shared::ptr_eq(x, y) && **x != **y => Err(Error::SymbolTableMismatch),
        (Some(x), _) => Ok(Some(x.clone())),
        (None, y) => Ok(y.cloned()),
    }
}
