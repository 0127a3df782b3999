//! The O(1) solver for types `{nop}` extended with tests only.
//!
//! Every interaction of such a type preserves a place's value wherever it is
//! defined, so along any arc the support cannot change; reachability then
//! forces constant support. Distinct states are never separable, and an
//! event is inhibitable exactly when a constant support avoids it, which
//! needs the event to be arc-less.

use crate::interaction::{Interaction, NetType};
use crate::region::{Atom, Region, SolverError, Verdict};
use crate::ts::TransitionSystem;

pub fn is_trivial_family(tau: NetType) -> bool {
    use Interaction::*;
    tau.contains(Nop) && tau.is_subset_of(NetType::new([Nop, Used, Free]))
}

pub fn solve_atom_trivial(
    ts: &TransitionSystem,
    tau: NetType,
    atom: &Atom,
) -> Result<Verdict, SolverError> {
    if !is_trivial_family(tau) {
        return Err(SolverError::WrongFamily(tau));
    }
    match *atom {
        Atom::Ssp(..) => Ok(Verdict::Unsolvable),
        Atom::Essp(e, s) => {
            // used-test: support = the endpoints of e's arcs; requires the
            // atom state outside and no arc crossing the boundary.
            if tau.contains(Interaction::Used) {
                let mut sup = vec![false; ts.n_states()];
                for &(src, dst) in ts.arcs_of_event(e) {
                    sup[src.0 as usize] = true;
                    sup[dst.0 as usize] = true;
                }
                if !sup[s.0 as usize] && no_crossing(ts, &sup) {
                    let sig = constant_signature(ts, tau, &sup, e, Interaction::Used);
                    return Ok(Verdict::Solved(Region::new(sup, sig)));
                }
            }
            // free-test: the complement support with the endpoints outside.
            if tau.contains(Interaction::Free) {
                let mut sup = vec![true; ts.n_states()];
                for &(src, dst) in ts.arcs_of_event(e) {
                    sup[src.0 as usize] = false;
                    sup[dst.0 as usize] = false;
                }
                if sup[s.0 as usize] && no_crossing(ts, &sup) {
                    let sig = constant_signature(ts, tau, &sup, e, Interaction::Free);
                    return Ok(Verdict::Solved(Region::new(sup, sig)));
                }
            }
            Ok(Verdict::Unsolvable)
        }
    }
}

fn no_crossing(ts: &TransitionSystem, sup: &[bool]) -> bool {
    ts.arcs()
        .all(|(s, _, d)| sup[s.0 as usize] == sup[d.0 as usize])
}

fn constant_signature(
    ts: &TransitionSystem,
    tau: NetType,
    sup: &[bool],
    target: crate::ts::EventId,
    inhibitor: Interaction,
) -> Vec<Interaction> {
    let _ = tau;
    let _ = sup;
    ts.events()
        .map(|e| if e == target { inhibitor } else { Interaction::Nop })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{enumerate_atoms, validate_region};
    use crate::ts::TsBuilder;

    fn ts(arcs: &[(&str, &str, &str)], initial: &str) -> TransitionSystem {
        let mut b = TsBuilder::new("t");
        b.initial(initial);
        for (s, e, d) in arcs {
            b.arc(s, e, d);
        }
        b.build().unwrap()
    }

    #[test]
    fn ssp_never_solvable() {
        let a = ts(&[("a", "e", "b")], "a");
        let atom = Atom::Ssp(a.state_by_name("a").unwrap(), a.state_by_name("b").unwrap());
        for tau in ["nop", "nop,used", "nop,free", "nop,used,free"] {
            assert_eq!(
                solve_atom_trivial(&a, tau.parse().unwrap(), &atom).unwrap(),
                Verdict::Unsolvable
            );
        }
    }

    #[test]
    fn single_state_ts_has_no_atoms() {
        let a = ts(&[("a", "e", "a")], "a");
        assert!(enumerate_atoms(&a).is_empty());
    }

    #[test]
    fn essp_with_arcs_unsolvable() {
        let a = ts(&[("a", "e", "b")], "a");
        let atom = Atom::Essp(a.event_by_name("e").unwrap(), a.state_by_name("b").unwrap());
        assert_eq!(
            solve_atom_trivial(&a, "nop,used".parse().unwrap(), &atom).unwrap(),
            Verdict::Unsolvable
        );
    }

    #[test]
    fn essp_arcless_event_solvable_with_tests() {
        let mut b = TsBuilder::new("t");
        b.initial("a");
        b.arc("a", "e", "a");
        b.event("ghost");
        let a = b.build().unwrap();
        let atom = Atom::Essp(a.event_by_name("ghost").unwrap(), a.state_by_name("a").unwrap());
        let tau: NetType = "nop,used".parse().unwrap();
        match solve_atom_trivial(&a, tau, &atom).unwrap() {
            Verdict::Solved(r) => {
                validate_region(&a, tau, &r).unwrap();
                assert!(r.solves(&a, &atom));
            }
            Verdict::Unsolvable => panic!("expected solvable"),
        }
        assert_eq!(
            solve_atom_trivial(&a, "nop".parse().unwrap(), &atom).unwrap(),
            Verdict::Unsolvable
        );
    }
}
