use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fst::{Fst, Label, EPSILON};
use crate::semiring::Semiring;

/// One accepting path with epsilons removed from both label sequences.
#[derive(Clone, Debug, PartialEq)]
pub struct Path<W> {
    pub ilabels: Vec<Label>,
    pub olabels: Vec<Label>,
    pub weight: W,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathSet<W> {
    pub paths: Vec<Path<W>>,
}

impl<W: Semiring> PathSet<W> {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Weighted relation: `⊕` of path weights per (input, output) string pair.
    pub fn relation(&self) -> BTreeMap<(Vec<Label>, Vec<Label>), W> {
        let mut out: BTreeMap<(Vec<Label>, Vec<Label>), W> = BTreeMap::new();
        for p in &self.paths {
            let e = out
                .entry((p.ilabels.clone(), p.olabels.clone()))
                .or_insert_with(W::zero);
            *e = e.plus(&p.weight);
        }
        out
    }

    /// Weighted language over output strings.
    pub fn output_language(&self) -> BTreeMap<Vec<Label>, W> {
        let mut out: BTreeMap<Vec<Label>, W> = BTreeMap::new();
        for p in &self.paths {
            let e = out.entry(p.olabels.clone()).or_insert_with(W::zero);
            *e = e.plus(&p.weight);
        }
        out
    }
}

/// Number of accepting paths, saturating at `u128::MAX`.
pub fn count_paths<W: Semiring>(fst: &Fst<W>) -> Result<u128> {
    let order = fst.require_acyclic()?;
    let mut count = vec![0u128; fst.num_states()];
    for &s in order.iter().rev() {
        let mut c: u128 = u128::from(fst.is_final(s));
        for a in fst.arcs(s) {
            if !a.weight.is_zero() {
                c = c.saturating_add(count[a.nextstate]);
            }
        }
        count[s] = c;
    }
    Ok(fst.start().map_or(0, |s| count[s]))
}

/// Every accepting path, or [`Error::PathCapExceeded`] if there are more
/// than `cap`.
pub fn enumerate_paths<W: Semiring>(fst: &Fst<W>, cap: usize) -> Result<PathSet<W>> {
    if count_paths(fst)? > cap as u128 {
        return Err(Error::PathCapExceeded { cap });
    }
    let mut paths = Vec::new();
    let Some(start) = fst.start() else {
        return Ok(PathSet { paths });
    };
    // explicit stack of (state, next arc index); label stacks mirror the depth
    let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
    let mut weights: Vec<W> = vec![W::one()];
    let mut ilabels: Vec<Label> = Vec::new();
    let mut olabels: Vec<Label> = Vec::new();
    let mut pushed: Vec<(bool, bool)> = Vec::new();
    if fst.is_final(start) {
        paths.push(Path {
            ilabels: Vec::new(),
            olabels: Vec::new(),
            weight: fst.final_weight(start),
        });
    }
    while let Some(&mut (s, ref mut next)) = stack.last_mut() {
        let arcs = fst.arcs(s);
        if *next == arcs.len() {
            stack.pop();
            weights.pop();
            if let Some((pi, po)) = pushed.pop() {
                if pi {
                    ilabels.pop();
                }
                if po {
                    olabels.pop();
                }
            }
            continue;
        }
        let a = arcs[*next];
        *next += 1;
        if a.weight.is_zero() {
            continue;
        }
        let w = weights.last().unwrap().times(&a.weight);
        let pi = a.ilabel != EPSILON;
        let po = a.olabel != EPSILON;
        if pi {
            ilabels.push(a.ilabel);
        }
        if po {
            olabels.push(a.olabel);
        }
        pushed.push((pi, po));
        if fst.is_final(a.nextstate) {
            paths.push(Path {
                ilabels: ilabels.clone(),
                olabels: olabels.clone(),
                weight: w.times(&fst.final_weight(a.nextstate)),
            });
        }
        stack.push((a.nextstate, 0));
        weights.push(w);
    }
    Ok(PathSet { paths })
}
