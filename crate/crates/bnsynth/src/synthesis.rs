//! End-to-end synthesis: solve all atoms, turn the witness regions into the
//! places of a net, and verify the net's state graph against the input.

use crate::feasibility::{
    decide_feasibility, FeasibilityError, Property, Strategy,
};
use crate::interaction::NetType;
use crate::net::{check_isomorphic, state_graph, BooleanNet, StateGraphError};
use crate::region::{Atom, OracleBudget, Region};
use crate::ts::TransitionSystem;

#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub net: BooleanNet,
    /// The deduplicated regions backing the net's places, in place order.
    pub regions: Vec<Region>,
    /// True when the state graph was expanded and checked isomorphic.
    pub verified: bool,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum SynthesisError {
    #[error("input is not synthesizable for {{{tau}}}; unsolvable: {}", witnesses.join(", "))]
    Infeasible {
        tau: NetType,
        atoms: Vec<Atom>,
        witnesses: Vec<String>,
    },
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
    #[error("verification failed: {0}")]
    Verify(#[from] StateGraphError),
    #[error("synthesized net's state graph is not isomorphic to the input")]
    VerificationFailed,
}

/// Builds the net over a region set: one place per distinct region, flow
/// from the signatures, initially marked where the input's initial state has
/// support 1. Place names are `r0, r1, ...` in canonical atom order.
pub fn net_from_regions(
    ts: &TransitionSystem,
    regions: &[Region],
    name: &str,
) -> (BooleanNet, Vec<Region>) {
    let mut distinct: Vec<Region> = Vec::new();
    for r in regions {
        if !distinct.contains(r) {
            distinct.push(r.clone());
        }
    }
    let place_names: Vec<String> = (0..distinct.len()).map(|i| format!("r{i}")).collect();
    let marking: Vec<bool> = distinct.iter().map(|r| r.sup(ts.initial())).collect();
    let mut net = BooleanNet::new(
        name,
        place_names,
        ts.event_names().to_vec(),
        marking,
    );
    for (p, r) in distinct.iter().enumerate() {
        for e in ts.events() {
            net.set_flow(p, e.0 as usize, r.sig(e));
        }
    }
    (net, distinct)
}

/// Synthesizes a net whose state graph is isomorphic to `ts`, if one exists
/// in the type. `verify` re-expands the result and checks the isomorphism.
pub fn synthesize(
    ts: &TransitionSystem,
    tau: NetType,
    strategy: Strategy,
    budget: OracleBudget,
    verify: bool,
) -> Result<SynthesisResult, SynthesisError> {
    let report = decide_feasibility(ts, tau, Property::Feasibility, strategy, budget)?;
    if !report.feasible {
        let witnesses = report
            .unsolved
            .iter()
            .map(|a| a.describe(ts))
            .collect();
        return Err(SynthesisError::Infeasible {
            tau,
            atoms: report.unsolved,
            witnesses,
        });
    }
    let (net, regions) = net_from_regions(ts, &report.regions, ts.name());
    let verified = if verify {
        if !verify_net(ts, &net)? {
            // Would indicate a solver bug: a full witness set always yields
            // an isomorphic state graph.
            return Err(SynthesisError::VerificationFailed);
        }
        true
    } else {
        false
    };
    Ok(SynthesisResult {
        net,
        regions,
        verified,
    })
}

/// True iff the net's state graph is isomorphic to `ts`. The expansion is
/// capped just above the input size; anything larger cannot match.
pub fn verify_net(ts: &TransitionSystem, net: &BooleanNet) -> Result<bool, StateGraphError> {
    match state_graph(net, ts.n_states() + 1) {
        Ok(sg) => Ok(check_isomorphic(&sg, ts).is_some()),
        Err(StateGraphError::CapExceeded(_)) => Ok(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interaction::Interaction;
    use crate::ts::TsBuilder;

    fn ts(arcs: &[(&str, &str, &str)], initial: &str) -> TransitionSystem {
        let mut b = TsBuilder::new("t");
        b.initial(initial);
        for (s, e, d) in arcs {
            b.arc(s, e, d);
        }
        b.build().unwrap()
    }

    fn synth(a: &TransitionSystem, tau: &str) -> SynthesisResult {
        synthesize(
            a,
            tau.parse().unwrap(),
            Strategy::Auto,
            OracleBudget::default(),
            true,
        )
        .unwrap()
    }

    #[test]
    fn single_arc_round_trip() {
        let a = ts(&[("a", "e", "b")], "a");
        let result = synth(&a, "nop,inp,out");
        assert!(result.verified);
        // The separation and inhibition witnesses coincide here and collapse
        // into a single place.
        assert_eq!(result.net.n_places(), 1);
    }

    #[test]
    fn one_state_loop_yields_zero_place_net() {
        let a = ts(&[("a", "e", "a")], "a");
        let result = synth(&a, "nop");
        assert_eq!(result.net.n_places(), 0);
        assert!(result.verified);
    }

    #[test]
    fn swap_cycle_round_trip() {
        let a = ts(&[("a", "e", "b"), ("b", "e", "a")], "a");
        let result = synth(&a, "nop,swap");
        assert!(result.verified);
        assert_eq!(result.regions.len(), 1);
    }

    #[test]
    fn infeasible_carries_witness_atoms() {
        let a = ts(&[("a", "e", "b"), ("b", "f", "a")], "a");
        let err = synthesize(
            &a,
            "nop,inp".parse().unwrap(),
            Strategy::Auto,
            OracleBudget::default(),
            false,
        )
        .unwrap_err();
        match err {
            SynthesisError::Infeasible { atoms, .. } => assert!(!atoms.is_empty()),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn perturbed_flow_fails_verification() {
        let a = ts(&[("a", "e", "b")], "a");
        let mut result = synth(&a, "nop,inp,out");
        result.net.set_flow(0, 0, Interaction::Swap);
        assert!(!verify_net(&a, &result.net).unwrap());
    }

    #[test]
    fn empty_place_net_vs_two_state_ts() {
        let a = ts(&[("a", "e", "b")], "a");
        let net = BooleanNet::new("n", vec![], vec!["e".into()], vec![]);
        assert!(!verify_net(&a, &net).unwrap());
    }

    #[test]
    fn mirror_consistency() {
        let cases = [
            (vec![("a", "e", "b")], "nop,inp,set"),
            (vec![("a", "e", "b"), ("b", "f", "a")], "nop,res,inp"),
            (vec![("a", "e", "b"), ("b", "e", "a")], "nop,swap,used"),
        ];
        for (arcs, tau_s) in cases {
            let a = ts(&arcs, "a");
            let tau: NetType = tau_s.parse().unwrap();
            let forward = synthesize(&a, tau, Strategy::Auto, OracleBudget::default(), true);
            let mirrored =
                synthesize(&a, tau.mirror(), Strategy::Auto, OracleBudget::default(), true);
            assert_eq!(forward.is_ok(), mirrored.is_ok(), "{tau_s}");
        }
    }
}
