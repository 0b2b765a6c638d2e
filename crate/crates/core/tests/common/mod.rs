//! Seeded random machines and brute-force oracles shared by the
//! integration tests (and the acceptance suite of the CLI crate).
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use latcomb::algo::{count_paths, enumerate_paths};
use latcomb::combine::UNMATCHABLE;
use latcomb::{Arc, Fst, Label, Semiring, StateId, Tropical, EPSILON};
use rand::seq::SliceRandom;
use rand::Rng;

pub const PATH_CAP: usize = 1 << 16;

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_states: usize,
    pub max_out_arcs: usize,
    /// Labels are drawn from `1..=labels`.
    pub labels: Label,
    pub epsilon_prob: f64,
    pub acceptor: bool,
    /// Integer costs `0..=4` when true, reals in `[0, 3)` otherwise.
    pub integer_weights: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_states: 6,
            max_out_arcs: 3,
            labels: 3,
            epsilon_prob: 0.2,
            acceptor: false,
            integer_weights: true,
        }
    }
}

fn weight<W: Semiring>(rng: &mut impl Rng, shape: &Shape) -> W {
    if shape.integer_weights {
        W::new(rng.gen_range(0..=4) as f64)
    } else {
        W::new(rng.gen_range(0.0..3.0))
    }
}

fn label(rng: &mut impl Rng, shape: &Shape) -> Label {
    if rng.gen_bool(shape.epsilon_prob) {
        EPSILON
    } else {
        rng.gen_range(1..=shape.labels)
    }
}

/// Random acyclic machine whose state ids are shuffled, so nothing can rely
/// on states being numbered in topological order.
pub fn random_acyclic<W: Semiring>(rng: &mut impl Rng, shape: &Shape) -> Fst<W> {
    let n = rng.gen_range(1..=shape.max_states);
    let mut perm: Vec<StateId> = (0..n).collect();
    perm.shuffle(rng);
    let mut f = Fst::new();
    f.add_states(n);
    f.set_start(perm[0]);
    for i in 0..n {
        if i + 1 < n {
            for _ in 0..rng.gen_range(0..=shape.max_out_arcs) {
                let j = rng.gen_range(i + 1..n);
                let il = label(rng, shape);
                let ol = if shape.acceptor { il } else { label(rng, shape) };
                f.add_arc(perm[i], Arc::new(il, ol, weight(rng, shape), perm[j]));
            }
        }
        if i + 1 == n || rng.gen_bool(0.3) {
            f.set_final(perm[i], weight(rng, shape));
        }
    }
    f
}

/// Sausage over labels `1..=labels`: `slots` positions with 1..=`max_alts`
/// distinct alternatives each, unit weights.
pub fn random_sausage(rng: &mut impl Rng, slots: usize, max_alts: usize, labels: Label) -> Fst<Tropical> {
    let mut f = Fst::new();
    f.add_states(slots + 1);
    f.set_start(0);
    f.set_final(slots, Tropical::one());
    let pool: Vec<Label> = (1..=labels).collect();
    for i in 0..slots {
        let k = rng.gen_range(1..=max_alts.min(pool.len()));
        for &l in pool.choose_multiple(rng, k) {
            f.add_arc(i, Arc::new(l, l, Tropical::one(), i + 1));
        }
    }
    f
}

/// Hypothesis for the combiner checks: a sausage or a general acyclic
/// acceptor over labels `1..=5`, with between 1 and 64 paths.
pub fn random_hypothesis(r: &mut impl Rng) -> Fst<Tropical> {
    loop {
        let h = if r.gen_bool(0.5) {
            let slots = r.gen_range(1..=6);
            random_sausage(r, slots, 3, 5)
        } else {
            let shape = Shape {
                acceptor: true,
                labels: 5,
                epsilon_prob: 0.15,
                ..Shape::default()
            };
            random_acyclic(r, &shape)
        };
        let n = count_paths(&h).unwrap();
        if (1..=64).contains(&n) {
            return h;
        }
    }
}

/// Up to 8 words over `1..=7`, so some words never occur in a
/// hypothesis; a few are out of vocabulary altogether.
pub fn random_transcript(r: &mut impl Rng) -> Vec<Label> {
    let len = r.gen_range(0..=8);
    (0..len)
        .map(|_| if r.gen_bool(0.05) { UNMATCHABLE } else { r.gen_range(1..=7) })
        .collect()
}

pub type Relation<W> = BTreeMap<(Vec<Label>, Vec<Label>), W>;

pub fn relation<W: Semiring>(f: &Fst<W>) -> Relation<W> {
    enumerate_paths(f, PATH_CAP).expect("small machine").relation()
}

pub fn language<W: Semiring>(f: &Fst<W>) -> BTreeMap<Vec<Label>, W> {
    enumerate_paths(f, PATH_CAP).expect("small machine").output_language()
}

/// Weighted relation equality: same keys, weights within `tol` (exact when
/// `tol` is 0).
pub fn same_relation<K: Ord + std::fmt::Debug, W: Semiring>(
    a: &BTreeMap<K, W>,
    b: &BTreeMap<K, W>,
    tol: f64,
) -> Result<(), String> {
    // 0̄-weight entries are absent strings
    fn live<K, W: Semiring>(m: &BTreeMap<K, W>) -> Vec<&K> {
        m.iter().filter(|(_, w)| !w.is_zero()).map(|(k, _)| k).collect()
    }
    let (ka, kb) = (live(a), live(b));
    if ka != kb {
        return Err(format!("different supports: {ka:?} vs {kb:?}"));
    }
    for k in ka {
        let (x, y) = (a[k].value(), b[k].value());
        let ok = if tol == 0.0 { x == y } else { (x - y).abs() <= tol * x.abs().max(1.0) };
        if !ok {
            return Err(format!("weight of {k:?}: {x} vs {y}"));
        }
    }
    Ok(())
}

/// Composition by joining the enumerated relations on the middle tape.
pub fn compose_oracle<W: Semiring>(a: &Fst<W>, b: &Fst<W>) -> Relation<W> {
    let ra = relation(a);
    let rb = relation(b);
    let mut by_input: HashMap<&Vec<Label>, Vec<(&Vec<Label>, &W)>> = HashMap::new();
    for ((i, o), w) in &rb {
        by_input.entry(i).or_default().push((o, w));
    }
    let mut out: Relation<W> = BTreeMap::new();
    for ((x, y), wa) in &ra {
        for (z, wb) in by_input.get(y).into_iter().flatten() {
            let e = out.entry((x.clone(), (*z).clone())).or_insert_with(W::zero);
            *e = e.plus(&wa.times(wb));
        }
    }
    out
}

/// Every accepting path as its list of (state, arc index) steps.
pub fn arc_paths<W: Semiring>(f: &Fst<W>) -> Vec<(Vec<(StateId, usize)>, f64)> {
    fn walk<W: Semiring>(
        f: &Fst<W>,
        s: StateId,
        acc: f64,
        trail: &mut Vec<(StateId, usize)>,
        out: &mut Vec<(Vec<(StateId, usize)>, f64)>,
    ) {
        if f.is_final(s) {
            out.push((trail.clone(), acc + f.final_weight(s).value()));
        }
        for (i, a) in f.arcs(s).iter().enumerate() {
            trail.push((s, i));
            walk(f, a.nextstate, acc + a.weight.value(), trail, out);
            trail.pop();
        }
    }
    let mut out = Vec::new();
    if let Some(s) = f.start() {
        walk(f, s, 0.0, &mut Vec::new(), &mut out);
    }
    out
}

/// What arc-level pruning must keep: every path whose arcs all lie on some
/// path within `t` of the best, as a weighted relation.
pub fn prune_oracle(f: &Fst<Tropical>, t: f64) -> Relation<Tropical> {
    let paths = arc_paths(f);
    let best = paths.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let limit = best + t;
    let slack = 1e-9 * limit.abs().max(1.0);
    let good: BTreeSet<(StateId, usize)> = paths
        .iter()
        .filter(|p| p.1 <= limit + slack)
        .flat_map(|p| p.0.iter().copied())
        .collect();
    let end_of = |trail: &[(StateId, usize)]| {
        trail.last().map_or(f.start().unwrap(), |&(s, i)| f.arcs(s)[i].nextstate)
    };
    // a final weight survives where some good path stops
    let good_ends: BTreeSet<StateId> = paths
        .iter()
        .filter(|p| p.1 <= limit + slack)
        .map(|p| end_of(&p.0))
        .collect();
    let mut out: Relation<Tropical> = BTreeMap::new();
    for (trail, w) in &paths {
        if !trail.iter().all(|step| good.contains(step)) || !good_ends.contains(&end_of(trail)) {
            continue;
        }
        let (mut ins, mut outs) = (Vec::new(), Vec::new());
        for &(s, i) in trail {
            let a = f.arcs(s)[i];
            if a.ilabel != EPSILON {
                ins.push(a.ilabel);
            }
            if a.olabel != EPSILON {
                outs.push(a.olabel);
            }
        }
        let e = out.entry((ins, outs)).or_insert_with(Tropical::zero);
        *e = e.plus(&Tropical(*w));
    }
    out
}

/// Length of the longest common subsequence: the most matches any
/// alignment with free insertions, deletions and substitutions can reach.
pub fn lcs(a: &[Label], b: &[Label]) -> usize {
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            d[i][j] = if a[i - 1] == b[j - 1] {
                d[i - 1][j - 1] + 1
            } else {
                d[i - 1][j].max(d[i][j - 1])
            };
        }
    }
    d[a.len()][b.len()]
}

/// Lattice strings sharing the most matches with `transcript`.
pub fn max_match_oracle(transcript: &[Label], h: &Fst<Tropical>) -> BTreeSet<Vec<Label>> {
    let strings: Vec<Vec<Label>> = language(h).into_keys().collect();
    let best = strings.iter().map(|s| lcs(transcript, s)).max().unwrap_or(0);
    strings.into_iter().filter(|s| lcs(transcript, s) == best).collect()
}

/// State count of the minimal deterministic acceptor equivalent to `f`
/// (tropical, exact weights). States are equivalent when their right
/// languages agree after subtracting each language's best weight. Without
/// an initial weight the start state must carry its own best weight, so it
/// needs a private copy when an inner state shares its class and that
/// weight is not 1̄.
pub fn minimal_state_count(f: &Fst<Tropical>) -> usize {
    let t = f.trim();
    let Some(start) = t.start() else { return 0 };
    let mut classes: BTreeMap<Vec<(Vec<Label>, u64)>, usize> = BTreeMap::new();
    let mut start_key = Vec::new();
    let mut start_best = 0.0;
    for q in t.states() {
        let mut sub = t.clone();
        sub.set_start(q);
        let lang = language(&sub);
        let best = lang.values().map(|w| w.0).fold(f64::INFINITY, f64::min);
        let normalized: Vec<(Vec<Label>, u64)> = lang
            .into_iter()
            .map(|(k, w)| (k, (w.0 - best + 0.0).to_bits()))
            .collect();
        if q == start {
            start_key = normalized.clone();
            start_best = best;
        }
        *classes.entry(normalized).or_default() += 1;
    }
    let shared_start = classes[&start_key] > 1 && start_best != 0.0;
    classes.len() + usize::from(shared_start)
}
