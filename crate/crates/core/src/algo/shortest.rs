use crate::error::Result;
use crate::fst::{Arc, Fst, StateId};
use crate::semiring::{Semiring, Tropical};

/// `⊕` of all path weights from the start state to each state.
pub fn forward_distance<W: Semiring>(fst: &Fst<W>) -> Result<Vec<W>> {
    let order = fst.require_acyclic()?;
    let mut dist = vec![W::zero(); fst.num_states()];
    let Some(start) = fst.start() else {
        return Ok(dist);
    };
    dist[start] = W::one();
    for s in order {
        if dist[s].is_zero() {
            continue;
        }
        for a in fst.arcs(s) {
            let d = dist[s].times(&a.weight);
            dist[a.nextstate] = dist[a.nextstate].plus(&d);
        }
    }
    Ok(dist)
}

/// `⊕` of all path weights from each state to a final state, final weight
/// included.
pub fn backward_distance<W: Semiring>(fst: &Fst<W>) -> Result<Vec<W>> {
    let order = fst.require_acyclic()?;
    let mut dist = vec![W::zero(); fst.num_states()];
    for &s in order.iter().rev() {
        let mut d = fst.final_weight(s);
        for a in fst.arcs(s) {
            d = d.plus(&a.weight.times(&dist[a.nextstate]));
        }
        dist[s] = d;
    }
    Ok(dist)
}

/// `⊕` over every accepting path; `0̄` when there is none.
pub fn shortest_path_weight<W: Semiring>(fst: &Fst<W>) -> Result<W> {
    let dist = backward_distance(fst)?;
    Ok(fst.start().map_or(W::zero(), |s| dist[s]))
}

/// Cheapest accepting path as its arcs and total weight. Ties go to the
/// arc that sorts first.
pub fn shortest_path(fst: &Fst<Tropical>) -> Result<Option<(Vec<Arc<Tropical>>, Tropical)>> {
    let dist = backward_distance(fst)?;
    let Some(start) = fst.start() else {
        return Ok(None);
    };
    if dist[start].is_zero() {
        return Ok(None);
    }
    let mut path = Vec::new();
    let mut s: StateId = start;
    loop {
        let target = dist[s].0;
        if fst.final_weight(s).0 == target {
            break;
        }
        let best = fst
            .arcs(s)
            .iter()
            .filter(|a| !dist[a.nextstate].is_zero())
            .min_by(|a, b| {
                (a.weight.0 + dist[a.nextstate].0)
                    .total_cmp(&(b.weight.0 + dist[b.nextstate].0))
                    .then((a.ilabel, a.olabel, a.nextstate).cmp(&(b.ilabel, b.olabel, b.nextstate)))
            })
            .expect("a state with finite distance has a way out");
        if fst.final_weight(s).0 <= best.weight.0 + dist[best.nextstate].0 {
            break;
        }
        path.push(*best);
        s = best.nextstate;
    }
    Ok(Some((path, dist[start])))
}
