//! Complete backtracking search for a region solving one atom, usable with
//! any nop-containing type. Serves as the exactness reference for the
//! polynomial solvers and as the only solver for the hard and open classes.
//!
//! The search assigns interactions to events (the atom's event first, then
//! by descending arc count) and propagates the induced endpoint constraints
//! as a binary CSP over state values; once every event is assigned,
//! remaining two-valued states are branched. Candidate order is fixed, so
//! the first region found is deterministic.

use std::time::{Duration, Instant};

use crate::interaction::{Interaction, NetType};
use crate::region::{Atom, Region, SolverError, Verdict, NOP_FIRST_PRIORITY, TARGET_PRIORITY};
use crate::ts::{EventId, StateId, TransitionSystem};

/// Search limits. Exhaustion of the budget is reported as an error distinct
/// from unsolvability.
#[derive(Debug, Clone, Copy)]
pub struct OracleBudget {
    pub max_nodes: u64,
    pub max_time: Option<Duration>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_nodes: 10_000_000,
            max_time: Some(Duration::from_secs(600)),
        }
    }
}

impl OracleBudget {
    pub fn nodes(max_nodes: u64) -> OracleBudget {
        OracleBudget {
            max_nodes,
            max_time: None,
        }
    }
}

const DOM0: u8 = 1;
const DOM1: u8 = 2;
const BOTH: u8 = 3;

#[inline]
fn singleton_value(dom: u8) -> Option<bool> {
    match dom {
        DOM0 => Some(false),
        DOM1 => Some(true),
        _ => None,
    }
}

/// Bit mask of source values allowed by `i` given the target domain.
#[inline]
fn src_mask(i: Interaction, tgt_dom: u8) -> u8 {
    let mut m = 0;
    for (b, bit) in [(false, DOM0), (true, DOM1)] {
        if let Some(v) = i.apply(b) {
            if tgt_dom & (if v { DOM1 } else { DOM0 }) != 0 {
                m |= bit;
            }
        }
    }
    m
}

/// Bit mask of target values reachable by `i` from the source domain.
#[inline]
fn tgt_mask(i: Interaction, src_dom: u8) -> u8 {
    let mut m = 0;
    for (b, bit) in [(false, DOM0), (true, DOM1)] {
        if src_dom & bit != 0 {
            if let Some(v) = i.apply(b) {
                m |= if v { DOM1 } else { DOM0 };
            }
        }
    }
    m
}

/// Domain values at which `i` is undefined; the inhibited state must take
/// one of them.
#[inline]
fn undef_mask(i: Interaction) -> u8 {
    let mut m = 0;
    if i.apply(false).is_none() {
        m |= DOM0;
    }
    if i.apply(true).is_none() {
        m |= DOM1;
    }
    m
}

struct Search<'a> {
    ts: &'a TransitionSystem,
    tau: NetType,
    budget: OracleBudget,
    deadline: Option<Instant>,
    nodes: u64,
    /// Event assignment; `None` while unassigned.
    sig: Vec<Option<Interaction>>,
    dom: Vec<u8>,
    /// Undo log of `(state, old_dom)` entries.
    trail: Vec<(u32, u8)>,
    /// Arcs incident to each state as indexes into `arcs`.
    incident: Vec<Vec<u32>>,
    arcs: Vec<(StateId, EventId, StateId)>,
    /// Pair of states that must end up with different values, for SSP atoms.
    neq: Option<(StateId, StateId)>,
    /// Events in assignment order.
    order: Vec<EventId>,
    /// Candidate interactions per assignment depth.
    cands: Vec<Vec<Interaction>>,
    /// For each `tau`, whether some interaction maps value `u` to value `v`;
    /// indexed `u * 2 + v`.
    pair_possible: [bool; 4],
}

enum Outcome {
    Exhausted,
    Stopped,
}

impl<'a> Search<'a> {
    fn new(
        ts: &'a TransitionSystem,
        tau: NetType,
        atom: &Atom,
        budget: OracleBudget,
    ) -> Search<'a> {
        let arcs: Vec<(StateId, EventId, StateId)> = ts.arcs().collect();
        let mut incident: Vec<Vec<u32>> = vec![Vec::new(); ts.n_states()];
        for (ix, &(s, _, d)) in arcs.iter().enumerate() {
            incident[s.0 as usize].push(ix as u32);
            if d != s {
                incident[d.0 as usize].push(ix as u32);
            }
        }
        let mut pair_possible = [false; 4];
        for i in tau.iter() {
            for b in [false, true] {
                if let Some(v) = i.apply(b) {
                    pair_possible[usize::from(b) * 2 + usize::from(v)] = true;
                }
            }
        }
        // Atom event first, then the rest by descending arc count.
        let mut rest: Vec<EventId> = ts.events().collect();
        let atom_event = match *atom {
            Atom::Essp(e, _) => Some(e),
            Atom::Ssp(..) => None,
        };
        rest.sort_by_key(|e| {
            (
                std::cmp::Reverse(ts.arcs_of_event(*e).len()),
                e.0,
            )
        });
        let mut order: Vec<EventId> = Vec::with_capacity(ts.n_events());
        let mut cands: Vec<Vec<Interaction>> = Vec::with_capacity(ts.n_events());
        if let Some(e) = atom_event {
            order.push(e);
            cands.push(
                TARGET_PRIORITY
                    .into_iter()
                    .filter(|i| tau.contains(*i) && undef_mask(*i) != 0)
                    .collect(),
            );
        }
        for e in rest {
            if atom_event == Some(e) {
                continue;
            }
            order.push(e);
            cands.push(
                NOP_FIRST_PRIORITY
                    .into_iter()
                    .filter(|i| tau.contains(*i))
                    .collect(),
            );
        }
        Search {
            ts,
            tau,
            budget,
            deadline: budget.max_time.map(|d| Instant::now() + d),
            nodes: 0,
            sig: vec![None; ts.n_events()],
            dom: vec![BOTH; ts.n_states()],
            trail: Vec::new(),
            incident,
            arcs,
            neq: match *atom {
                Atom::Ssp(s, s2) => Some((s, s2)),
                Atom::Essp(..) => None,
            },
            order,
            cands,
            pair_possible,
        }
    }

    fn tick(&mut self) -> Result<(), SolverError> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(SolverError::BudgetExceeded { nodes: self.nodes });
        }
        if self.nodes % 4096 == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() > deadline {
                    return Err(SolverError::BudgetExceeded { nodes: self.nodes });
                }
            }
        }
        Ok(())
    }

    /// Shrinks a domain, recording the old value; false on wipe-out.
    fn shrink(&mut self, s: StateId, mask: u8, queue: &mut Vec<StateId>) -> bool {
        let old = self.dom[s.0 as usize];
        let new = old & mask;
        if new == old {
            return true;
        }
        if new == 0 {
            return false;
        }
        self.trail.push((s.0, old));
        self.dom[s.0 as usize] = new;
        queue.push(s);
        true
    }

    /// Re-tightens both endpoints of one arc whose event is assigned.
    fn revise_arc(&mut self, arc_ix: u32, queue: &mut Vec<StateId>) -> bool {
        let (src, e, dst) = self.arcs[arc_ix as usize];
        let Some(i) = self.sig[e.0 as usize] else {
            // Unassigned event: prune only when both endpoints are fixed and
            // no interaction of the type matches the pair.
            if let (Some(u), Some(v)) = (
                singleton_value(self.dom[src.0 as usize]),
                singleton_value(self.dom[dst.0 as usize]),
            ) {
                return self.pair_possible[usize::from(u) * 2 + usize::from(v)];
            }
            return true;
        };
        let sm = src_mask(i, self.dom[dst.0 as usize]);
        if !self.shrink(src, sm, queue) {
            return false;
        }
        let tm = tgt_mask(i, self.dom[src.0 as usize]);
        self.shrink(dst, tm, queue)
    }

    /// Propagates pending domain changes to a fixpoint.
    fn propagate(&mut self, queue: &mut Vec<StateId>) -> bool {
        while let Some(x) = queue.pop() {
            let incident = std::mem::take(&mut self.incident[x.0 as usize]);
            let mut ok = true;
            for &arc_ix in &incident {
                if !self.revise_arc(arc_ix, queue) {
                    ok = false;
                    break;
                }
            }
            self.incident[x.0 as usize] = incident;
            if !ok {
                return false;
            }
            if let Some((a, b)) = self.neq {
                if x == a || x == b {
                    let (this, other) = if x == a { (a, b) } else { (b, a) };
                    if let Some(v) = singleton_value(self.dom[this.0 as usize]) {
                        let forbid = if v { DOM1 } else { DOM0 };
                        if !self.shrink(other, !forbid & BOTH, queue) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Assigns `i` to `e` and propagates its arcs.
    fn assign(&mut self, e: EventId, i: Interaction, extra: Option<(StateId, u8)>) -> bool {
        self.sig[e.0 as usize] = Some(i);
        let mut queue: Vec<StateId> = Vec::new();
        if let Some((s, mask)) = extra {
            if !self.shrink(s, mask, &mut queue) {
                return false;
            }
        }
        for ix in 0..self.arcs.len() {
            if self.arcs[ix].1 == e {
                if !self.revise_arc(ix as u32, &mut queue) {
                    return false;
                }
            }
        }
        self.propagate(&mut queue)
    }

    fn search_events(
        &mut self,
        depth: usize,
        atom: &Atom,
        on_solution: &mut dyn FnMut(Region) -> bool,
    ) -> Result<Outcome, SolverError> {
        if depth == self.order.len() {
            return self.search_states(0, on_solution);
        }
        let e = self.order[depth];
        let extra = match (depth, atom) {
            (0, &Atom::Essp(_, s)) => Some(s),
            _ => None,
        };
        for ci in 0..self.cands[depth].len() {
            let i = self.cands[depth][ci];
            self.tick()?;
            let trail_mark = self.trail.len();
            let ok = self.assign(e, i, extra.map(|s| (s, undef_mask(i))));
            if ok {
                match self.search_events(depth + 1, atom, on_solution)? {
                    Outcome::Stopped => return Ok(Outcome::Stopped),
                    Outcome::Exhausted => {}
                }
            }
            self.sig[e.0 as usize] = None;
            self.undo_to(trail_mark);
        }
        Ok(Outcome::Exhausted)
    }

    fn search_states(
        &mut self,
        from: usize,
        on_solution: &mut dyn FnMut(Region) -> bool,
    ) -> Result<Outcome, SolverError> {
        match (from..self.dom.len()).find(|&s| self.dom[s] == BOTH) {
            None => {
                let sup: Vec<bool> = self.dom.iter().map(|&d| d == DOM1).collect();
                let sig: Vec<Interaction> = self.sig.iter().map(|s| s.unwrap()).collect();
                let region = Region::new(sup, sig);
                debug_assert!(
                    crate::region::validate_region(self.ts, self.tau, &region).is_ok(),
                    "oracle produced an invalid region"
                );
                if on_solution(region) {
                    Ok(Outcome::Exhausted)
                } else {
                    Ok(Outcome::Stopped)
                }
            }
            Some(s) => {
                for mask in [DOM0, DOM1] {
                    self.tick()?;
                    let trail_mark = self.trail.len();
                    let mut queue = Vec::new();
                    if self.shrink(StateId(s as u32), mask, &mut queue) && self.propagate(&mut queue)
                    {
                        match self.search_states(s + 1, on_solution)? {
                            Outcome::Stopped => return Ok(Outcome::Stopped),
                            Outcome::Exhausted => {}
                        }
                    }
                    self.undo_to(trail_mark);
                }
                Ok(Outcome::Exhausted)
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (s, old) = self.trail.pop().unwrap();
            self.dom[s as usize] = old;
        }
    }
}

fn run_search(
    ts: &TransitionSystem,
    tau: NetType,
    atom: &Atom,
    budget: OracleBudget,
    on_solution: &mut dyn FnMut(Region) -> bool,
) -> Result<bool, (SolverError, u64)> {
    let mut search = Search::new(ts, tau, atom, budget);
    // SSP: seed the disequality once so single-state wipeouts surface early.
    if let Some((a, b)) = search.neq {
        if a == b {
            return Ok(false);
        }
        let mut queue = vec![a, b];
        if !search.propagate(&mut queue) {
            return Ok(true);
        }
    }
    match search.search_events(0, atom, on_solution) {
        Ok(Outcome::Exhausted) => Ok(true),
        Ok(Outcome::Stopped) => Ok(false),
        Err(e) => Err((e, search.nodes)),
    }
}

/// Complete search for one witness region; `Unsolvable` is proven by
/// exhaustion, and running out of budget is a distinct error.
pub fn solve_atom_oracle(
    ts: &TransitionSystem,
    tau: NetType,
    atom: &Atom,
    budget: OracleBudget,
) -> Result<Verdict, SolverError> {
    let mut found: Option<Region> = None;
    match run_search(ts, tau, atom, budget, &mut |r| {
        found = Some(r);
        false
    }) {
        Ok(true) => Ok(Verdict::Unsolvable),
        Ok(false) => Ok(Verdict::Solved(found.expect("stopped only on a solution"))),
        Err((e, _)) => Err(e),
    }
}

/// Enumerates witness regions until `limit` is reached, the space is
/// exhausted, or the budget runs out; on budget exhaustion the regions found
/// so far are returned alongside the error.
pub fn enumerate_atom_regions(
    ts: &TransitionSystem,
    tau: NetType,
    atom: &Atom,
    budget: OracleBudget,
    limit: usize,
) -> Result<Vec<Region>, (Vec<Region>, SolverError)> {
    let mut found: Vec<Region> = Vec::new();
    let result = run_search(ts, tau, atom, budget, &mut |r| {
        found.push(r);
        found.len() < limit
    });
    match result {
        Ok(_) => Ok(found),
        Err((e, _)) => Err((found, e)),
    }
}
