use super::{backward_distance, forward_distance};
use crate::error::{Error, Result};
use crate::fst::Fst;
use crate::semiring::{Semiring, Tropical};

/// Absorbs rounding differences between the forward+backward route and the
/// shortest-distance route when comparing against the threshold.
const SLACK: f64 = 1e-9;

/// Keeps the states and arcs that lie on some accepting path whose cost is
/// at most `t ⊗ shortest_path_weight`, ties included.
///
/// With `t = 1̄` the result holds exactly the cheapest paths. For larger `t`
/// the result can also contain paths stitched together from kept arcs that
/// individually lie on different cheap paths.
pub fn prune_to_threshold(fst: &Fst<Tropical>, t: Tropical) -> Result<Fst<Tropical>> {
    if t.0.is_nan() || t.0 < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "prune threshold {} is tighter than the best path",
            t.0
        )));
    }
    let alpha = forward_distance(fst)?;
    let beta = backward_distance(fst)?;
    let Some(start) = fst.start() else {
        return Ok(fst.clone());
    };
    let best = beta[start];
    if best.is_zero() {
        return Ok(Fst::new().with_symbols(fst.symbols().cloned()));
    }
    let limit = t.times(&best).0;
    let limit = limit + SLACK * limit.abs().max(1.0);

    let mut out = fst.clone();
    for s in out.states() {
        let a_s = alpha[s].0;
        if a_s.is_infinite() {
            out.arcs_mut(s).clear();
            out.set_final(s, Tropical::zero());
            continue;
        }
        out.arcs_mut(s)
            .retain(|a| a_s + a.weight.0 + beta[a.nextstate].0 <= limit);
        if a_s + out.final_weight(s).0 > limit {
            out.set_final(s, Tropical::zero());
        }
    }
    let mut out = out.trim();
    out.arc_sort();
    Ok(out)
}
