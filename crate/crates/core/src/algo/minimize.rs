use std::collections::HashMap;

use super::backward_distance;
use crate::error::{Error, Result};
use crate::fst::{Arc, Fst, Label, StateId};
use crate::semiring::Semiring;

fn bits<W: Semiring>(w: W) -> u64 {
    (w.value() + 0.0).to_bits()
}

/// Minimizes a deterministic acyclic acceptor.
///
/// Weights are first pushed toward the start state so that states whose
/// weighted suffix languages agree also agree arc-for-arc; states are then
/// merged bottom-up by their (final weight, outgoing arcs) signature. The
/// total weight pushed off the start state is put back on its outgoing arcs
/// and final weight.
pub fn minimize<W: Semiring>(fst: &Fst<W>) -> Result<Fst<W>> {
    if !fst.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    fst.require_acyclic()?;
    let fst = fst.trim();
    let Some(start) = fst.start() else {
        return Ok(fst);
    };
    let potential = backward_distance(&fst)?;
    let order = fst.require_acyclic()?;

    type Signature = (u64, Vec<(Label, u64, usize)>);
    let mut class_of = vec![usize::MAX; fst.num_states()];
    let mut classes: HashMap<Signature, usize> = HashMap::new();
    // representative signature data per class, indexed by class id
    let mut class_final: Vec<W> = Vec::new();
    let mut class_arcs: Vec<Vec<(Label, W, usize)>> = Vec::new();

    for &s in order.iter().rev() {
        let d = potential[s];
        let final_w = fst.final_weight(s).divide(&d);
        let mut arcs: Vec<(Label, W, usize)> = fst
            .arcs(s)
            .iter()
            .map(|a| {
                let w = a.weight.times(&potential[a.nextstate]).divide(&d);
                (a.ilabel, w, class_of[a.nextstate])
            })
            .collect();
        arcs.sort_by_key(|&(l, _, _)| l);
        let sig: Signature = (
            bits(final_w),
            arcs.iter().map(|&(l, w, c)| (l, bits(w), c)).collect(),
        );
        let next_id = classes.len();
        let c = *classes.entry(sig).or_insert_with(|| {
            class_final.push(final_w);
            class_arcs.push(arcs);
            next_id
        });
        class_of[s] = c;
    }

    // number classes breadth-first from the start class
    let start_class = class_of[start];
    let mut remap = vec![usize::MAX; class_final.len()];
    let mut bfs = vec![start_class];
    remap[start_class] = 0;
    let mut i = 0;
    while i < bfs.len() {
        let c = bfs[i];
        i += 1;
        for &(_, _, t) in &class_arcs[c] {
            if remap[t] == usize::MAX {
                remap[t] = bfs.len();
                bfs.push(t);
            }
        }
    }
    let mut out = Fst::new().with_symbols(fst.symbols().cloned());
    out.add_states(bfs.len());
    out.set_start(0);
    let mut has_incoming = vec![false; bfs.len()];
    for &c in &bfs {
        let s: StateId = remap[c];
        out.set_final(s, class_final[c]);
        for &(l, w, t) in &class_arcs[c] {
            out.add_arc(s, Arc::new(l, l, w, remap[t]));
            has_incoming[remap[t]] = true;
        }
    }

    let lead = potential[start];
    if !lead.is_one() {
        let target = if has_incoming[0] {
            // the start class is shared with an inner state; give the start
            // its own copy
            let fresh = out.add_state();
            let arcs = out.arcs(0).to_vec();
            for a in arcs {
                out.add_arc(fresh, a);
            }
            out.set_final(fresh, out.final_weight(0));
            out.set_start(fresh);
            fresh
        } else {
            0
        };
        for a in out.arcs_mut(target) {
            a.weight = lead.times(&a.weight);
        }
        let f = out.final_weight(target);
        if !f.is_zero() {
            out.set_final(target, lead.times(&f));
        }
    }
    out.arc_sort();
    Ok(out)
}
