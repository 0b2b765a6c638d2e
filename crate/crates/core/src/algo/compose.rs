use std::collections::{HashMap, VecDeque};

use super::check_symbols;
use crate::error::Result;
use crate::fst::{Arc, Fst, Label, StateId, EPSILON};
use crate::semiring::Semiring;

/// Weighted composition `a ∘ b`.
///
/// Epsilons are paired through a two-state sequencing filter: between two
/// label-consuming moves, all of `a`'s output-epsilon moves happen before any
/// of `b`'s input-epsilon moves, so every pair of paths is joined by exactly
/// one path of the result. Both machines must carry the same symbol table if
/// either carries one.
pub fn compose<W: Semiring>(a: &Fst<W>, b: &Fst<W>) -> Result<Fst<W>> {
    let symbols = check_symbols(a, b)?;
    let mut out = Fst::new().with_symbols(symbols.clone());
    let (Some(sa), Some(sb)) = (a.start(), b.start()) else {
        return Ok(out);
    };

    // b's arcs grouped by input label for matching
    let b_index: Vec<Vec<Arc<W>>> = b
        .states()
        .map(|s| {
            let mut arcs = b.arcs(s).to_vec();
            arcs.sort_by_key(|x| (x.ilabel, x.olabel, x.nextstate));
            arcs
        })
        .collect();
    let matching = |s: StateId, label: Label| -> &[Arc<W>] {
        let arcs = &b_index[s];
        let lo = arcs.partition_point(|x| x.ilabel < label);
        let hi = arcs.partition_point(|x| x.ilabel <= label);
        &arcs[lo..hi]
    };

    type Key = (StateId, StateId, u8);
    let mut ids: HashMap<Key, StateId> = HashMap::new();
    let mut queue: VecDeque<(Key, StateId)> = VecDeque::new();
    let mut intern = |out: &mut Fst<W>, queue: &mut VecDeque<(Key, StateId)>, key: Key| {
        *ids.entry(key).or_insert_with(|| {
            let id = out.add_state();
            queue.push_back((key, id));
            id
        })
    };
    let start = intern(&mut out, &mut queue, (sa, sb, 0));
    out.set_start(start);

    while let Some(((qa, qb, filter), src)) = queue.pop_front() {
        out.set_final(src, a.final_weight(qa).times(&b.final_weight(qb)));
        for ea in a.arcs(qa) {
            if ea.olabel == EPSILON {
                if filter == 0 {
                    let dst = intern(&mut out, &mut queue, (ea.nextstate, qb, 0));
                    out.add_arc(src, Arc::new(ea.ilabel, EPSILON, ea.weight, dst));
                }
                continue;
            }
            for eb in matching(qb, ea.olabel) {
                let dst = intern(&mut out, &mut queue, (ea.nextstate, eb.nextstate, 0));
                out.add_arc(
                    src,
                    Arc::new(ea.ilabel, eb.olabel, ea.weight.times(&eb.weight), dst),
                );
            }
        }
        for eb in matching(qb, EPSILON) {
            let dst = intern(&mut out, &mut queue, (qa, eb.nextstate, 1));
            out.add_arc(src, Arc::new(EPSILON, eb.olabel, eb.weight, dst));
        }
    }
    let mut out = out.trim();
    out.arc_sort();
    Ok(out)
}
