use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::fst::{Arc, Fst, Label, StateId};
use crate::semiring::Semiring;

/// Removes arcs labeled ε on both tapes while preserving the weighted
/// relation. Fails with [`Error::EpsilonCycle`] if the ε-arcs form a cycle.
pub fn remove_epsilons<W: Semiring>(fst: &Fst<W>) -> Result<Fst<W>> {
    let n = fst.num_states();

    // topological order of the ε-subgraph
    let mut indegree = vec![0usize; n];
    for s in fst.states() {
        for a in fst.arcs(s).iter().filter(|a| a.is_epsilon()) {
            indegree[a.nextstate] += 1;
        }
    }
    let mut queue: VecDeque<StateId> = (0..n).filter(|&s| indegree[s] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(s) = queue.pop_front() {
        order.push(s);
        for a in fst.arcs(s).iter().filter(|a| a.is_epsilon()) {
            indegree[a.nextstate] -= 1;
            if indegree[a.nextstate] == 0 {
                queue.push_back(a.nextstate);
            }
        }
    }
    if order.len() != n {
        return Err(Error::EpsilonCycle);
    }

    // closure[s]: states reachable from s over ε-arcs with the ⊕ of the
    // ε-path weights, s itself included with 1̄
    let mut closure: Vec<BTreeMap<StateId, W>> = vec![BTreeMap::new(); n];
    for &s in order.iter().rev() {
        let mut c = BTreeMap::new();
        c.insert(s, W::one());
        for a in fst.arcs(s).iter().filter(|a| a.is_epsilon()) {
            for (&p, w) in &closure[a.nextstate] {
                let e = c.entry(p).or_insert_with(W::zero);
                *e = e.plus(&a.weight.times(w));
            }
        }
        closure[s] = c;
    }

    let mut out = Fst::new().with_symbols(fst.symbols().cloned());
    out.add_states(n);
    if let Some(s) = fst.start() {
        out.set_start(s);
    }
    for s in fst.states() {
        let mut final_weight = W::zero();
        let mut merged: BTreeMap<(Label, Label, StateId), W> = BTreeMap::new();
        for (&p, d) in &closure[s] {
            final_weight = final_weight.plus(&d.times(&fst.final_weight(p)));
            for a in fst.arcs(p).iter().filter(|a| !a.is_epsilon()) {
                let e = merged
                    .entry((a.ilabel, a.olabel, a.nextstate))
                    .or_insert_with(W::zero);
                *e = e.plus(&d.times(&a.weight));
            }
        }
        out.set_final(s, final_weight);
        for ((il, ol, next), w) in merged {
            out.add_arc(s, Arc::new(il, ol, w, next));
        }
    }
    let mut out = out.trim();
    out.arc_sort();
    Ok(out)
}
