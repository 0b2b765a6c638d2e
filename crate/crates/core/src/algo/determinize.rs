use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::fst::{Arc, Fst, Label, StateId};
use crate::semiring::Semiring;

type Subset<W> = Vec<(StateId, W)>;

fn key<W: Semiring>(subset: &Subset<W>) -> Vec<(StateId, u64)> {
    // +0.0 and -0.0 must hash alike
    subset
        .iter()
        .map(|(s, w)| (*s, (w.value() + 0.0).to_bits()))
        .collect()
}

/// Weighted subset construction for epsilon-free acyclic acceptors.
///
/// Each result state is a set of input states paired with residual weights;
/// the weight of an arc is the `⊕` of everything reachable on its label and
/// the residuals carry the remainder.
pub fn determinize<W: Semiring>(fst: &Fst<W>) -> Result<Fst<W>> {
    if !fst.is_acceptor() {
        return Err(Error::NotAcceptor);
    }
    if !fst.is_epsilon_free() {
        return Err(Error::NotEpsilonFree);
    }
    fst.require_acyclic()?;

    let mut out = Fst::new().with_symbols(fst.symbols().cloned());
    let Some(start) = fst.start() else {
        return Ok(out);
    };
    let mut ids: HashMap<Vec<(StateId, u64)>, StateId> = HashMap::new();
    let mut queue: VecDeque<(StateId, Subset<W>)> = VecDeque::new();
    let initial = vec![(start, W::one())];
    let s0 = out.add_state();
    ids.insert(key(&initial), s0);
    out.set_start(s0);
    queue.push_back((s0, initial));

    while let Some((src, subset)) = queue.pop_front() {
        let mut final_weight = W::zero();
        let mut by_label: BTreeMap<Label, Vec<(StateId, W)>> = BTreeMap::new();
        for &(q, r) in &subset {
            final_weight = final_weight.plus(&r.times(&fst.final_weight(q)));
            for a in fst.arcs(q) {
                by_label
                    .entry(a.ilabel)
                    .or_default()
                    .push((a.nextstate, r.times(&a.weight)));
            }
        }
        out.set_final(src, final_weight);
        for (label, targets) in by_label {
            let total = targets
                .iter()
                .fold(W::zero(), |acc, (_, w)| acc.plus(w));
            if total.is_zero() {
                continue;
            }
            let mut residuals: BTreeMap<StateId, W> = BTreeMap::new();
            for (p, w) in targets {
                let e = residuals.entry(p).or_insert_with(W::zero);
                *e = e.plus(&w);
            }
            let next: Subset<W> = residuals
                .into_iter()
                .filter(|(_, w)| !w.is_zero())
                .map(|(p, w)| (p, w.divide(&total)))
                .collect();
            let k = key(&next);
            let dst = match ids.get(&k) {
                Some(&d) => d,
                None => {
                    let d = out.add_state();
                    ids.insert(k, d);
                    queue.push_back((d, next));
                    d
                }
            };
            out.add_arc(src, Arc::new(label, label, total, dst));
        }
    }
    let mut out = out.trim();
    out.arc_sort();
    Ok(out)
}
