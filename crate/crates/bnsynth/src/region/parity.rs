//! Spanning-tree parities, chord equations and the equation-based atom
//! solver for swap types `{nop,swap}` extended with any of `inp`, `out`,
//! `used`, `free`.

use crate::gf2::{solve_rows, BitVec, Gf2Outcome, Gf2Row, Gf2System};
use crate::interaction::{Interaction, NetType};
use crate::region::{Atom, Region, SolverError, Verdict};
use crate::ts::{EventId, StateId, TransitionSystem};

/// BFS spanning tree of a TS plus, for every state, the per-event occurrence
/// parity along its unique tree path from the initial state.
#[derive(Debug, Clone)]
pub struct ParityIndex {
    /// Parent arc `(parent, event)` per state; `None` for the root.
    pub tree_parent: Vec<Option<(StateId, EventId)>>,
    /// `psi[s]`: event-parity vector of the tree path to `s`.
    pub psi: Vec<BitVec>,
    /// Arcs outside the tree.
    pub chords: Vec<(StateId, EventId, StateId)>,
    n_events: usize,
}

/// Builds the index. Reachability of the TS guarantees the tree spans all
/// states; arcs keep their direction.
pub fn build_parity_index(ts: &TransitionSystem) -> ParityIndex {
    let n = ts.n_states();
    let k = ts.n_events();
    let mut tree_parent: Vec<Option<(StateId, EventId)>> = vec![None; n];
    let mut in_tree = vec![false; n];
    let mut psi: Vec<BitVec> = vec![BitVec::zeros(k); n];
    let root = ts.initial();
    in_tree[root.0 as usize] = true;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(root);
    let mut tree_arc = vec![false; n * k];
    while let Some(s) = queue.pop_front() {
        for e in ts.events() {
            if let Some(d) = ts.delta(s, e) {
                if !in_tree[d.0 as usize] {
                    in_tree[d.0 as usize] = true;
                    tree_parent[d.0 as usize] = Some((s, e));
                    tree_arc[s.0 as usize * k + e.0 as usize] = true;
                    let mut v = psi[s.0 as usize].clone();
                    v.flip(e.0 as usize);
                    psi[d.0 as usize] = v;
                    queue.push_back(d);
                }
            }
        }
    }
    let chords = ts
        .arcs()
        .filter(|(s, e, _)| !tree_arc[s.0 as usize * k + e.0 as usize])
        .collect();
    ParityIndex {
        tree_parent,
        psi,
        chords,
        n_events: k,
    }
}

impl ParityIndex {
    /// Coefficient vector `psi(s) + psi(s2)` as one row.
    fn diff(&self, s: StateId, s2: StateId) -> BitVec {
        let mut v = self.psi[s.0 as usize].clone();
        v.xor_assign(&self.psi[s2.0 as usize]);
        v
    }

    /// One equation per chord `s --e--> s'`:
    /// `rho(e) + sum_e' (psi_s(e') + psi_s'(e')) rho(e') = 0`.
    pub fn chord_rows(&self) -> Vec<Gf2Row> {
        self.chords
            .iter()
            .map(|&(s, e, d)| {
                let mut coeffs = self.diff(s, d);
                coeffs.flip(e.0 as usize);
                Gf2Row { coeffs, rhs: false }
            })
            .collect()
    }
}

/// The chord equations as a named system over the TS's events.
pub fn build_chord_system(ts: &TransitionSystem, index: &ParityIndex) -> Gf2System {
    let mut sys = Gf2System::new(ts.event_names().to_vec());
    for row in index.chord_rows() {
        sys.push_row(row);
    }
    sys
}

/// An event valuation satisfying every chord equation. Lifts to a concrete
/// region for any type containing nop and swap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractRegion {
    pub rho: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("event valuation violates a chord equation")]
pub struct ChordViolation;

/// Lifts an abstract region to a concrete one: the support of a state is the
/// parity of selected events on its tree path (complemented on request), the
/// signature is swap for selected events and nop otherwise.
pub fn abstract_to_region(
    ts: &TransitionSystem,
    index: &ParityIndex,
    abs: &AbstractRegion,
    complement: bool,
) -> Result<Region, ChordViolation> {
    let mut rho_vec = BitVec::zeros(index.n_events);
    for (i, &v) in abs.rho.iter().enumerate() {
        rho_vec.set(i, v);
    }
    for row in index.chord_rows() {
        if row.coeffs.dot(&rho_vec) != row.rhs {
            return Err(ChordViolation);
        }
    }
    let sup: Vec<bool> = ts
        .states()
        .map(|s| index.psi[s.0 as usize].dot(&rho_vec) ^ complement)
        .collect();
    let sig: Vec<Interaction> = abs
        .rho
        .iter()
        .map(|&v| if v { Interaction::Swap } else { Interaction::Nop })
        .collect();
    Ok(Region::new(sup, sig))
}

/// True if `tau` belongs to the swap family this solver handles.
pub fn is_swap_family(tau: NetType) -> bool {
    use Interaction::*;
    let base = NetType::new([Nop, Swap]);
    let opt = NetType::new([Inp, Out, Used, Free]);
    tau.is_superset_of(base) && tau.is_subset_of(base.union(opt))
}

/// Solves one atom for the swap family by augmenting the chord system.
///
/// State separation adds one row forcing different supports. Event
/// inhibition builds, per available inhibiting interaction, a system that
/// pins the event's own parity (1 for inp/out, 0 for used/free) and forces
/// every source of the event to the support opposite the atom state; the
/// complement is then chosen so the inhibitor is applicable, and the
/// inhibited event's signature upgraded from its parity to the inhibitor.
/// Unsatisfiability of every applicable system proves the atom unsolvable.
pub fn solve_atom_gf2(
    ts: &TransitionSystem,
    tau: NetType,
    atom: &Atom,
) -> Result<Verdict, SolverError> {
    let index = build_parity_index(ts);
    solve_atom_gf2_with_index(ts, &index, tau, atom)
}

/// Like [`solve_atom_gf2`] with a precomputed index, for batch callers.
pub fn solve_atom_gf2_with_index(
    ts: &TransitionSystem,
    index: &ParityIndex,
    tau: NetType,
    atom: &Atom,
) -> Result<Verdict, SolverError> {
    if !is_swap_family(tau) {
        return Err(SolverError::WrongFamily(tau));
    }
    let k = ts.n_events();
    let base_rows = index.chord_rows();
    match *atom {
        Atom::Ssp(s, s2) => {
            let mut rows = base_rows;
            rows.push(Gf2Row {
                coeffs: index.diff(s, s2),
                rhs: true,
            });
            match solve_rows(k, rows) {
                Gf2Outcome::Unsatisfiable => Ok(Verdict::Unsolvable),
                Gf2Outcome::Solution(rho) => {
                    let region = abstract_to_region(ts, index, &AbstractRegion { rho }, false)
                        .expect("solution satisfies the chord rows");
                    Ok(Verdict::Solved(region))
                }
            }
        }
        Atom::Essp(e, s) => {
            use Interaction::*;
            for inhibitor in [Inp, Out, Used, Free] {
                if !tau.contains(inhibitor) {
                    continue;
                }
                let own_parity = matches!(inhibitor, Inp | Out);
                let mut rows = base_rows.clone();
                let mut own = BitVec::zeros(k);
                own.set(e.0 as usize, true);
                rows.push(Gf2Row {
                    coeffs: own,
                    rhs: own_parity,
                });
                for &(src, _) in ts.arcs_of_event(e) {
                    rows.push(Gf2Row {
                        coeffs: index.diff(s, src),
                        rhs: true,
                    });
                }
                let rho = match solve_rows(k, rows) {
                    Gf2Outcome::Unsatisfiable => continue,
                    Gf2Outcome::Solution(rho) => rho,
                };
                let abs = AbstractRegion { rho };
                let plain = abstract_to_region(ts, index, &abs, false)
                    .expect("solution satisfies the chord rows");
                // The inhibitor must be undefined at the atom state's value:
                // inp and used at 0, out and free at 1.
                let want_s = matches!(inhibitor, Out | Free);
                let region = if plain.sup(s) == want_s {
                    plain
                } else {
                    abstract_to_region(ts, index, &abs, true).expect("complement stays valid")
                };
                let mut region = region;
                region.sig[e.0 as usize] = inhibitor;
                debug_assert!(crate::region::validate_region(ts, tau, &region).is_ok());
                return Ok(Verdict::Solved(region));
            }
            Ok(Verdict::Unsolvable)
        }
    }
}
