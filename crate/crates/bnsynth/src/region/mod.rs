//! Regions, separation atoms and the atom solvers.
//!
//! A region assigns a boolean support to every state and an interaction to
//! every event such that every arc of the TS maps to an arc of the type
//! template. Regions witness state separation (different support values) and
//! event inhibition (interaction undefined at the state's support value) and
//! become the places of a synthesized net.

mod grow;
mod oracle;
mod parity;
mod trivial;

pub use grow::{grow_support, is_res_family, res_family_signature, solve_atom_res_family};
pub use oracle::{enumerate_atom_regions, solve_atom_oracle, OracleBudget};
pub use parity::{
    abstract_to_region, build_chord_system, build_parity_index, is_swap_family, solve_atom_gf2,
    solve_atom_gf2_with_index, AbstractRegion, ChordViolation, ParityIndex,
};
pub use trivial::{is_trivial_family, solve_atom_trivial};

use std::fmt::Write as _;

use crate::interaction::{Interaction, NetType};
use crate::ts::{EventId, StateId, TransitionSystem};

/// A region of a particular TS, indexed by that TS's state and event ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Region {
    /// Support bit per state index.
    pub sup: Vec<bool>,
    /// Signature per event index.
    pub sig: Vec<Interaction>,
}

impl Region {
    pub fn new(sup: Vec<bool>, sig: Vec<Interaction>) -> Region {
        Region { sup, sig }
    }

    pub fn sup(&self, s: StateId) -> bool {
        self.sup[s.0 as usize]
    }

    pub fn sig(&self, e: EventId) -> Interaction {
        self.sig[e.0 as usize]
    }

    /// The mirrored region: complemented support, mirrored signature. If
    /// `self` is a region for some type, the transform is a region for the
    /// mirrored type solving the same atoms.
    pub fn mirror(&self) -> Region {
        Region {
            sup: self.sup.iter().map(|b| !b).collect(),
            sig: self.sig.iter().map(|i| i.mirror()).collect(),
        }
    }

    /// True if this region witnesses the atom.
    pub fn solves(&self, ts: &TransitionSystem, atom: &Atom) -> bool {
        let _ = ts;
        match *atom {
            Atom::Ssp(s, s2) => self.sup(s) != self.sup(s2),
            Atom::Essp(e, s) => !self.sig(e).defined_on(self.sup(s)),
        }
    }
}

/// A single separation obligation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// Two distinct states to tell apart.
    Ssp(StateId, StateId),
    /// An event to inhibit at a state where it does not occur.
    Essp(EventId, StateId),
}

impl Atom {
    pub fn describe(&self, ts: &TransitionSystem) -> String {
        match *self {
            Atom::Ssp(s, s2) => format!("ssp({}, {})", ts.state_name(s), ts.state_name(s2)),
            Atom::Essp(e, s) => format!("essp({}, {})", ts.event_name(e), ts.state_name(s)),
        }
    }
}

/// All atoms of `ts`: every unordered pair of distinct states and every
/// `(event, state)` pair where the event does not occur at the state.
/// Ordered canonically: SSP atoms first by state indices, then ESSP atoms by
/// `(event, state)` index.
pub fn enumerate_atoms(ts: &TransitionSystem) -> Vec<Atom> {
    let mut out = Vec::new();
    for s in ts.states() {
        for s2 in ts.states() {
            if s.0 < s2.0 {
                out.push(Atom::Ssp(s, s2));
            }
        }
    }
    for e in ts.events() {
        for s in ts.states() {
            if !ts.occurs(s, e) {
                out.push(Atom::Essp(e, s));
            }
        }
    }
    out
}

/// Why a (sup, sig) pair fails to be a region.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegionViolation {
    #[error("support has {got} entries for {want} states")]
    SupSize { got: usize, want: usize },
    #[error("signature has {got} entries for {want} events")]
    SigSize { got: usize, want: usize },
    #[error("event `{event}` has signature `{sig}` outside the type")]
    SigOutsideType { event: String, sig: Interaction },
    #[error("arc {src} --{event}--> {dst} maps to {sig}({sup_src}) which is {problem}")]
    ArcInconsistent {
        src: String,
        event: String,
        dst: String,
        sig: Interaction,
        sup_src: u8,
        problem: String,
    },
}

/// Checks that `(sup, sig)` is a `tau`-region of `ts`: signatures lie in
/// `tau` and every arc maps into the type template.
pub fn validate_region(
    ts: &TransitionSystem,
    tau: NetType,
    region: &Region,
) -> Result<(), RegionViolation> {
    if region.sup.len() != ts.n_states() {
        return Err(RegionViolation::SupSize {
            got: region.sup.len(),
            want: ts.n_states(),
        });
    }
    if region.sig.len() != ts.n_events() {
        return Err(RegionViolation::SigSize {
            got: region.sig.len(),
            want: ts.n_events(),
        });
    }
    for e in ts.events() {
        if !tau.contains(region.sig(e)) {
            return Err(RegionViolation::SigOutsideType {
                event: ts.event_name(e).to_string(),
                sig: region.sig(e),
            });
        }
    }
    for (s, e, d) in ts.arcs() {
        let i = region.sig(e);
        match i.apply(region.sup(s)) {
            None => {
                return Err(RegionViolation::ArcInconsistent {
                    src: ts.state_name(s).to_string(),
                    event: ts.event_name(e).to_string(),
                    dst: ts.state_name(d).to_string(),
                    sig: i,
                    sup_src: u8::from(region.sup(s)),
                    problem: "undefined".to_string(),
                });
            }
            Some(v) if v != region.sup(d) => {
                return Err(RegionViolation::ArcInconsistent {
                    src: ts.state_name(s).to_string(),
                    event: ts.event_name(e).to_string(),
                    dst: ts.state_name(d).to_string(),
                    sig: i,
                    sup_src: u8::from(region.sup(s)),
                    problem: format!("{} instead of {}", u8::from(v), u8::from(region.sup(d))),
                });
            }
            _ => {}
        }
    }
    Ok(())
}

/// All interactions of `tau` consistent with every arc of `e` under the
/// given support. Events without arcs admit all of `tau`.
pub fn signature_candidates(
    ts: &TransitionSystem,
    tau: NetType,
    sup: &[bool],
    e: EventId,
) -> NetType {
    let mut cand = tau;
    for &(s, d) in ts.arcs_of_event(e) {
        for i in cand.iter() {
            if i.apply(sup[s.0 as usize]) != Some(sup[d.0 as usize]) {
                cand = cand.without(i);
            }
        }
        if cand.is_empty() {
            break;
        }
    }
    cand
}

/// Fixed interaction priority for deterministic witness construction: the
/// atom's own event prefers inhibiting interactions, all other events prefer
/// nop.
pub const TARGET_PRIORITY: [Interaction; 8] = [
    Interaction::Inp,
    Interaction::Out,
    Interaction::Used,
    Interaction::Free,
    Interaction::Res,
    Interaction::Set,
    Interaction::Swap,
    Interaction::Nop,
];

pub const NOP_FIRST_PRIORITY: [Interaction; 8] = [
    Interaction::Nop,
    Interaction::Inp,
    Interaction::Out,
    Interaction::Used,
    Interaction::Free,
    Interaction::Res,
    Interaction::Set,
    Interaction::Swap,
];

/// Per-atom solver outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Solved(Region),
    Unsolvable,
}

impl Verdict {
    pub fn region(&self) -> Option<&Region> {
        match self {
            Verdict::Solved(r) => Some(r),
            Verdict::Unsolvable => None,
        }
    }

    pub fn is_solved(&self) -> bool {
        matches!(self, Verdict::Solved(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("type {{{0}}} is outside this solver's family")]
    WrongFamily(NetType),
    #[error("search budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },
}

// ---------------------------------------------------------------------------
// Region text codec
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegionParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("state `{0}` not in the TS")]
    UnknownState(String),
    #[error("event `{0}` not in the TS")]
    UnknownEvent(String),
    #[error("missing sup entry for state `{0}`")]
    MissingSup(String),
    #[error("missing sig entry for event `{0}`")]
    MissingSig(String),
}

/// Serializes a region against its TS:
///
/// ```text
/// region
/// sup <state> <0|1>
/// sig <event> <interaction>
/// ```
pub fn serialize_region(ts: &TransitionSystem, region: &Region) -> String {
    let mut out = String::from("region\n");
    let mut states: Vec<StateId> = ts.states().collect();
    states.sort_by_key(|s| ts.state_name(*s));
    for s in states {
        let _ = writeln!(out, "sup {} {}", ts.state_name(s), u8::from(region.sup(s)));
    }
    let mut events: Vec<EventId> = ts.events().collect();
    events.sort_by_key(|e| ts.event_name(*e));
    for e in events {
        let _ = writeln!(out, "sig {} {}", ts.event_name(e), region.sig(e));
    }
    out
}

pub fn parse_region(ts: &TransitionSystem, input: &str) -> Result<Region, RegionParseError> {
    let mut sup: Vec<Option<bool>> = vec![None; ts.n_states()];
    let mut sig: Vec<Option<Interaction>> = vec![None; ts.n_events()];
    let mut saw_header = false;
    for (lineno, raw) in input.lines().enumerate() {
        let line = match raw.find('#') {
            Some(ix) => raw[..ix].trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        match parts.next().unwrap() {
            "region" => saw_header = true,
            "sup" => {
                let (state, v) = match (parts.next(), parts.next()) {
                    (Some(s), Some(v)) => (s, v),
                    _ => {
                        return Err(RegionParseError::Syntax {
                            line: lineno + 1,
                            msg: "expected `sup <state> <0|1>`".into(),
                        })
                    }
                };
                let id = ts
                    .state_by_name(state)
                    .ok_or_else(|| RegionParseError::UnknownState(state.to_string()))?;
                sup[id.0 as usize] = Some(match v {
                    "0" => false,
                    "1" => true,
                    _ => {
                        return Err(RegionParseError::Syntax {
                            line: lineno + 1,
                            msg: "support value must be 0 or 1".into(),
                        })
                    }
                });
            }
            "sig" => {
                let (event, v) = match (parts.next(), parts.next()) {
                    (Some(e), Some(v)) => (e, v),
                    _ => {
                        return Err(RegionParseError::Syntax {
                            line: lineno + 1,
                            msg: "expected `sig <event> <interaction>`".into(),
                        })
                    }
                };
                let id = ts
                    .event_by_name(event)
                    .ok_or_else(|| RegionParseError::UnknownEvent(event.to_string()))?;
                sig[id.0 as usize] = Some(v.parse().map_err(|e| RegionParseError::Syntax {
                    line: lineno + 1,
                    msg: format!("{e}"),
                })?);
            }
            other => {
                return Err(RegionParseError::Syntax {
                    line: lineno + 1,
                    msg: format!("unknown keyword `{other}`"),
                })
            }
        }
    }
    if !saw_header {
        return Err(RegionParseError::Syntax {
            line: 0,
            msg: "missing `region` header".into(),
        });
    }
    let sup = sup
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| RegionParseError::MissingSup(ts.state_names()[i].clone())))
        .collect::<Result<Vec<bool>, _>>()?;
    let sig = sig
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| RegionParseError::MissingSig(ts.event_names()[i].clone())))
        .collect::<Result<Vec<Interaction>, _>>()?;
    Ok(Region::new(sup, sig))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ts::TsBuilder;

    pub(crate) fn ts(arcs: &[(&str, &str, &str)], initial: &str) -> TransitionSystem {
        let mut b = TsBuilder::new("t");
        b.initial(initial);
        for (s, e, d) in arcs {
            b.arc(s, e, d);
        }
        b.build().unwrap()
    }

    #[test]
    fn atom_enumeration() {
        let a = ts(&[("a", "e", "a")], "a");
        assert!(enumerate_atoms(&a).is_empty());

        let a = ts(&[("a", "e", "b")], "a");
        let atoms = enumerate_atoms(&a);
        assert_eq!(atoms.len(), 2);
        assert_eq!(atoms[0], Atom::Ssp(StateId(0), StateId(1)));
        assert_eq!(atoms[1], Atom::Essp(EventId(0), StateId(1)));

        let a = ts(&[("a", "e", "b"), ("b", "f", "a")], "a");
        let essp = enumerate_atoms(&a)
            .into_iter()
            .filter(|at| matches!(at, Atom::Essp(..)))
            .count();
        // Each of e, f occurs at exactly one of two states.
        assert_eq!(essp, 2);
    }

    #[test]
    fn validate_region_examples() {
        let a = ts(&[("a", "e", "b")], "a");
        let all_nop = Region::new(vec![true, true], vec![Interaction::Nop]);
        assert!(validate_region(&a, "nop".parse().unwrap(), &all_nop).is_ok());

        let r = Region::new(vec![false, false], vec![Interaction::Inp]);
        assert!(matches!(
            validate_region(&a, "nop,inp".parse().unwrap(), &r),
            Err(RegionViolation::ArcInconsistent { .. })
        ));

        let r = Region::new(vec![true, true], vec![Interaction::Swap]);
        assert!(matches!(
            validate_region(&a, "nop,swap".parse().unwrap(), &r),
            Err(RegionViolation::ArcInconsistent { .. })
        ));

        let r = Region::new(vec![true, false], vec![Interaction::Swap]);
        assert!(matches!(
            validate_region(&a, "nop".parse().unwrap(), &r),
            Err(RegionViolation::SigOutsideType { .. })
        ));
    }

    #[test]
    fn signature_candidate_groups() {
        // All e-arcs inside the support.
        let a = ts(&[("a", "e", "b")], "a");
        let cand = signature_candidates(&a, NetType::FULL, &[true, true], EventId(0));
        assert_eq!(cand, NetType::keep_plus());

        // All e-arcs exiting.
        let cand = signature_candidates(&a, NetType::FULL, &[true, false], EventId(0));
        assert_eq!(cand, NetType::exit());

        // Arcs both inside and outside: only nop.
        let a = ts(&[("a", "e", "b"), ("c", "e", "d"), ("a", "f", "c")], "a");
        let sup = [true, true, false, false];
        let cand = signature_candidates(&a, NetType::FULL, &sup, EventId(0));
        assert_eq!(cand, NetType::new([Interaction::Nop]));
    }

    #[test]
    fn region_codec_round_trip() {
        let a = ts(&[("a", "e", "b")], "a");
        let r = Region::new(vec![true, false], vec![Interaction::Inp]);
        let text = serialize_region(&a, &r);
        let back = parse_region(&a, &text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn mirror_transform_preserves_region_property() {
        let a = ts(&[("a", "e", "b"), ("b", "f", "b")], "a");
        let tau: NetType = "nop,res,free".parse().unwrap();
        let r = Region::new(vec![true, false], vec![Interaction::Res, Interaction::Free]);
        validate_region(&a, tau, &r).unwrap();
        validate_region(&a, tau.mirror(), &r.mirror()).unwrap();
    }
}
