//! The mutable vector-backed transducer every algorithm consumes and produces.

use std::collections::VecDeque;
use std::sync::Arc as Shared;

use crate::error::{Error, Result};
use crate::semiring::Semiring;
use crate::symbols::SymbolTable;

pub type Label = u32;
pub type StateId = usize;

/// The empty label, on either tape.
pub const EPSILON: Label = 0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc<W> {
    pub ilabel: Label,
    pub olabel: Label,
    pub weight: W,
    pub nextstate: StateId,
}

impl<W> Arc<W> {
    pub fn new(ilabel: Label, olabel: Label, weight: W, nextstate: StateId) -> Self {
        Arc {
            ilabel,
            olabel,
            weight,
            nextstate,
        }
    }

    pub fn is_epsilon(&self) -> bool {
        self.ilabel == EPSILON && self.olabel == EPSILON
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct State<W> {
    pub arcs: Vec<Arc<W>>,
    /// `W::zero()` for non-final states.
    pub final_weight: W,
}

/// A weighted transducer with an optional shared symbol table that covers
/// both tapes.
#[derive(Clone, Debug, PartialEq)]
pub struct Fst<W: Semiring> {
    states: Vec<State<W>>,
    start: Option<StateId>,
    symbols: Option<Shared<SymbolTable>>,
}

impl<W: Semiring> Default for Fst<W> {
    fn default() -> Self {
        Self::new()
    }
}

impl<W: Semiring> Fst<W> {
    pub fn new() -> Self {
        Fst {
            states: Vec::new(),
            start: None,
            symbols: None,
        }
    }

    pub fn add_state(&mut self) -> StateId {
        self.states.push(State {
            arcs: Vec::new(),
            final_weight: W::zero(),
        });
        self.states.len() - 1
    }

    pub fn add_states(&mut self, n: usize) {
        for _ in 0..n {
            self.add_state();
        }
    }

    pub fn set_start(&mut self, s: StateId) {
        assert!(s < self.states.len(), "start state {s} out of range");
        self.start = Some(s);
    }

    pub fn start(&self) -> Option<StateId> {
        self.start
    }

    pub fn set_final(&mut self, s: StateId, weight: W) {
        self.states[s].final_weight = weight;
    }

    pub fn final_weight(&self, s: StateId) -> W {
        self.states[s].final_weight
    }

    pub fn is_final(&self, s: StateId) -> bool {
        !self.states[s].final_weight.is_zero()
    }

    pub fn add_arc(&mut self, s: StateId, arc: Arc<W>) {
        assert!(
            arc.nextstate < self.states.len(),
            "arc target {} out of range",
            arc.nextstate
        );
        self.states[s].arcs.push(arc);
    }

    pub fn arcs(&self, s: StateId) -> &[Arc<W>] {
        &self.states[s].arcs
    }

    pub fn arcs_mut(&mut self, s: StateId) -> &mut Vec<Arc<W>> {
        &mut self.states[s].arcs
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.states.iter().map(|s| s.arcs.len()).sum()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.states.len()
    }

    pub fn symbols(&self) -> Option<&Shared<SymbolTable>> {
        self.symbols.as_ref()
    }

    pub fn set_symbols(&mut self, symbols: Option<Shared<SymbolTable>>) {
        self.symbols = symbols;
    }

    pub fn with_symbols(mut self, symbols: Option<Shared<SymbolTable>>) -> Self {
        self.symbols = symbols;
        self
    }

    /// True when no state exists or no start state is set.
    pub fn is_empty(&self) -> bool {
        self.start.is_none()
    }

    /// Sorts every state's arcs by (ilabel, olabel, nextstate, weight).
    pub fn arc_sort(&mut self) {
        for st in &mut self.states {
            st.arcs.sort_by(|a, b| {
                (a.ilabel, a.olabel, a.nextstate)
                    .cmp(&(b.ilabel, b.olabel, b.nextstate))
                    .then(a.weight.value().total_cmp(&b.weight.value()))
            });
        }
    }

    pub fn is_acceptor(&self) -> bool {
        self.states
            .iter()
            .all(|s| s.arcs.iter().all(|a| a.ilabel == a.olabel))
    }

    pub fn is_epsilon_free(&self) -> bool {
        self.states
            .iter()
            .all(|s| s.arcs.iter().all(|a| a.ilabel != EPSILON && a.olabel != EPSILON))
    }

    /// Epsilon-free acceptor with at most one arc per (state, label).
    pub fn is_deterministic(&self) -> bool {
        if !self.is_acceptor() || !self.is_epsilon_free() {
            return false;
        }
        self.states.iter().all(|s| {
            let mut labels: Vec<Label> = s.arcs.iter().map(|a| a.ilabel).collect();
            labels.sort_unstable();
            labels.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// All states in topological order, or `None` if there is a cycle.
    pub fn topological_order(&self) -> Option<Vec<StateId>> {
        let n = self.states.len();
        let mut indegree = vec![0usize; n];
        for st in &self.states {
            for a in &st.arcs {
                indegree[a.nextstate] += 1;
            }
        }
        let mut queue: VecDeque<StateId> = (0..n).filter(|&s| indegree[s] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for a in &self.states[s].arcs {
                indegree[a.nextstate] -= 1;
                if indegree[a.nextstate] == 0 {
                    queue.push_back(a.nextstate);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    pub(crate) fn require_acyclic(&self) -> Result<Vec<StateId>> {
        self.topological_order().ok_or(Error::Cyclic)
    }

    /// Checks state references and, when a symbol table is attached, that
    /// every non-epsilon label resolves in it.
    pub fn validate(&self) -> Result<()> {
        if let Some(s) = self.start {
            if s >= self.states.len() {
                return Err(Error::InvalidArgument(format!("start state {s} out of range")));
            }
        }
        for (s, st) in self.states.iter().enumerate() {
            for a in &st.arcs {
                if a.nextstate >= self.states.len() {
                    return Err(Error::InvalidArgument(format!(
                        "arc from state {s} targets missing state {}",
                        a.nextstate
                    )));
                }
                if let Some(syms) = &self.symbols {
                    for l in [a.ilabel, a.olabel] {
                        if !syms.contains_id(l) {
                            return Err(Error::UnknownLabel(l));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn map_weights<V: Semiring>(&self, mut f: impl FnMut(W) -> V) -> Fst<V> {
        Fst {
            states: self
                .states
                .iter()
                .map(|st| State {
                    arcs: st
                        .arcs
                        .iter()
                        .map(|a| Arc::new(a.ilabel, a.olabel, f(a.weight), a.nextstate))
                        .collect(),
                    final_weight: if st.final_weight.is_zero() {
                        V::zero()
                    } else {
                        f(st.final_weight)
                    },
                })
                .collect(),
            start: self.start,
            symbols: self.symbols.clone(),
        }
    }

    /// Removes states that are not on some start→final path, renumbering the
    /// survivors in their original order.
    pub fn trim(&self) -> Fst<W> {
        let n = self.states.len();
        let Some(start) = self.start else {
            return Fst::new().with_symbols(self.symbols.clone());
        };
        let mut access = vec![false; n];
        let mut stack = vec![start];
        access[start] = true;
        while let Some(s) = stack.pop() {
            for a in &self.states[s].arcs {
                if !access[a.nextstate] && !a.weight.is_zero() {
                    access[a.nextstate] = true;
                    stack.push(a.nextstate);
                }
            }
        }
        let mut reverse: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for (s, st) in self.states.iter().enumerate() {
            for a in &st.arcs {
                if !a.weight.is_zero() {
                    reverse[a.nextstate].push(s);
                }
            }
        }
        let mut coaccess = vec![false; n];
        let mut stack: Vec<StateId> = (0..n).filter(|&s| self.is_final(s)).collect();
        for &s in &stack {
            coaccess[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &p in &reverse[s] {
                if !coaccess[p] {
                    coaccess[p] = true;
                    stack.push(p);
                }
            }
        }
        if !(access[start] && coaccess[start]) {
            return Fst::new().with_symbols(self.symbols.clone());
        }
        let mut remap = vec![usize::MAX; n];
        let mut out = Fst::new().with_symbols(self.symbols.clone());
        for s in 0..n {
            if access[s] && coaccess[s] {
                remap[s] = out.add_state();
            }
        }
        for s in 0..n {
            if remap[s] == usize::MAX {
                continue;
            }
            let st = &self.states[s];
            out.set_final(remap[s], st.final_weight);
            for a in &st.arcs {
                if !a.weight.is_zero() && remap[a.nextstate] != usize::MAX {
                    out.states[remap[s]]
                        .arcs
                        .push(Arc::new(a.ilabel, a.olabel, a.weight, remap[a.nextstate]));
                }
            }
        }
        out.start = Some(remap[start]);
        out
    }
}
