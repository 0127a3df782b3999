//! The dedicated hardness construction for the seven classes outside the
//! general scheme: the basic TS over per-clause permutation compartments,
//! its extension, and the loop-enhanced variant, plus the explicit key
//! regions for both directions of the equivalence.

use crate::hardness::cnf::CnfInstance;
use crate::interaction::{Interaction, NetType};
use crate::region::{Region, RegionViolation, NOP_FIRST_PRIORITY};
use crate::ts::{TransitionSystem, TsBuilder};

/// Which of the supported classes a type belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem2Family {
    /// `{nop,inp,free}` or `{nop,inp,used,free}`: uses the basic TS.
    InpTest,
    /// Mirrors `{nop,out,used}` / `{nop,out,used,free}`: same TS, witnesses
    /// mirrored on demand.
    InpTestMirror,
    /// `{nop,set,res}` plus a nonempty test set: uses the loop-enhanced TS.
    SetRes,
}

pub fn theorem2_family(tau: NetType) -> Option<Theorem2Family> {
    use Interaction::*;
    let t = |list: &[Interaction]| NetType::new(list.iter().copied());
    if tau == t(&[Nop, Inp, Free]) || tau == t(&[Nop, Inp, Used, Free]) {
        return Some(Theorem2Family::InpTest);
    }
    if tau == t(&[Nop, Out, Used]) || tau == t(&[Nop, Out, Used, Free]) {
        return Some(Theorem2Family::InpTestMirror);
    }
    let base = t(&[Nop, Set, Res]);
    for omega in [t(&[Used]), t(&[Free]), t(&[Used, Free])] {
        if tau == base.union(omega) {
            return Some(Theorem2Family::SetRes);
        }
    }
    None
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum Theorem2Error {
    #[error("type {{{0}}} is not one of the dedicated hardness classes")]
    WrongFamily(NetType),
    #[error("`{0}` is not a one-in-three model of the instance")]
    NotAModel(String),
    #[error("witness invalid: {0}")]
    InvalidWitness(#[from] RegionViolation),
    #[error("no interaction of {{{tau}}} fits event `{event}` under the witness support")]
    NoSignatureFits { tau: NetType, event: String },
}

#[derive(Debug, Clone)]
pub struct Theorem2Output {
    pub ts: TransitionSystem,
    pub key_event: String,
    pub key_state: String,
}

/// Naming for the construction's own events, `_`-prefixed away from the
/// instance's variable names.
fn gen_name(cnf: &CnfInstance, base: String) -> String {
    let mut name = base;
    while cnf.variables().iter().any(|v| *v == name) {
        name.insert(0, '_');
    }
    name
}

fn helper_name(cnf: &CnfInstance, v: usize) -> String {
    gen_name(cnf, format!("x_{v}"))
}

/// The basic TS: a static center `s_0, s_1, q` plus one nine-state
/// compartment per clause carrying all six permutation paths of the
/// clause's variables.
fn build_basic(cnf: &CnfInstance) -> TsBuilder {
    let m = cnf.n_clauses();
    let k = gen_name(cnf, "k".into());
    let h = gen_name(cnf, "h".into());
    let mut b = TsBuilder::new("hard");
    b.initial("s_0");
    b.arc("s_0", &k, "s_1");
    b.arc("s_0", &h, "q");
    for i in 0..m {
        let t = |j: usize| format!("t_{i}_{j}");
        let clause = cnf.clause(i);
        let x = |c: usize| cnf.variable_name(clause[c]).to_string();
        b.arc("s_0", &gen_name(cnf, format!("r_{i}")), &t(0));
        b.arc("s_1", &gen_name(cnf, format!("r_{i}")), &t(8));
        b.arc("q", &gen_name(cnf, format!("h_{i}")), &t(5));
        b.arc(&t(0), &k, &t(8));
        // The six permutation paths from t0 to t5.
        b.arc(&t(0), &x(0), &t(1));
        b.arc(&t(0), &x(1), &t(7));
        b.arc(&t(0), &x(2), &t(3));
        b.arc(&t(1), &x(1), &t(2));
        b.arc(&t(1), &x(2), &t(4));
        b.arc(&t(2), &x(2), &t(5));
        b.arc(&t(3), &x(0), &t(4));
        b.arc(&t(3), &x(1), &t(6));
        b.arc(&t(4), &x(1), &t(5));
        b.arc(&t(6), &x(0), &t(5));
        b.arc(&t(7), &x(0), &t(2));
        b.arc(&t(7), &x(2), &t(6));
    }
    b
}

/// Adds the extension: the `m`-compartment, one `p`-compartment per clause,
/// and the backward helper arcs inside every clause compartment.
fn extend(cnf: &CnfInstance, b: &mut TsBuilder) {
    let m = cnf.n_clauses();
    let k = gen_name(cnf, "k".into());
    let h = gen_name(cnf, "h".into());
    let a = gen_name(cnf, "a".into());
    let c = gen_name(cnf, "c".into());
    let u = gen_name(cnf, "u".into());
    let v = gen_name(cnf, "v".into());
    b.arc("s_0", &a, "m_0");
    b.arc("m_0", &k, "m_1");
    b.arc("m_0", &c, "m_3");
    b.arc("m_0", &u, "m_4");
    b.arc("m_1", &v, "m_2");
    b.arc("m_3", &k, "m_2");
    b.arc("m_3", &h, "m_4");
    for i in 0..m {
        let p = |j: usize| format!("p_{i}_{j}");
        b.arc("s_0", &gen_name(cnf, format!("a_{i}")), &p(0));
        b.arc(&p(0), &v, &p(1));
        b.arc(&p(0), &gen_name(cnf, format!("h_{i}")), &p(3));
        b.arc(&p(1), &gen_name(cnf, format!("b_{i}")), &p(2));
        b.arc(&p(2), &u, &p(3));
        let t = |j: usize| format!("t_{i}_{j}");
        let clause = cnf.clause(i);
        let hx = |c: usize| helper_name(cnf, clause[c]);
        // Reverse helper arc for every variable arc of the compartment.
        b.arc(&t(1), &hx(0), &t(0));
        b.arc(&t(7), &hx(1), &t(0));
        b.arc(&t(3), &hx(2), &t(0));
        b.arc(&t(2), &hx(1), &t(1));
        b.arc(&t(4), &hx(2), &t(1));
        b.arc(&t(5), &hx(2), &t(2));
        b.arc(&t(4), &hx(0), &t(3));
        b.arc(&t(6), &hx(1), &t(3));
        b.arc(&t(5), &hx(1), &t(4));
        b.arc(&t(5), &hx(0), &t(6));
        b.arc(&t(2), &hx(0), &t(7));
        b.arc(&t(6), &hx(2), &t(7));
    }
}

/// Loop enhancement: every arc additionally loops its event at the target.
fn loop_enhance(ts: &TransitionSystem) -> TransitionSystem {
    let mut b = TsBuilder::new(ts.name());
    b.initial(ts.state_name(ts.initial()));
    for (s, e, d) in ts.arcs() {
        b.arc(ts.state_name(s), ts.event_name(e), ts.state_name(d));
        b.arc(ts.state_name(d), ts.event_name(e), ts.state_name(d));
    }
    b.build().expect("loop enhancement keeps determinism")
}

/// Builds the hardness TS for one of the dedicated classes: the basic TS
/// for the inp-test classes and their mirrors, the loop-enhanced extension
/// for the set/res classes.
pub fn build_theorem2_ts(
    cnf: &CnfInstance,
    tau: NetType,
) -> Result<Theorem2Output, Theorem2Error> {
    let family = theorem2_family(tau).ok_or(Theorem2Error::WrongFamily(tau))?;
    let ts = match family {
        Theorem2Family::InpTest | Theorem2Family::InpTestMirror => {
            build_basic(cnf).build().expect("basic TS is valid")
        }
        Theorem2Family::SetRes => {
            let mut b = build_basic(cnf);
            extend(cnf, &mut b);
            let plus = b.build().expect("extended TS is valid");
            loop_enhance(&plus)
        }
    };
    Ok(Theorem2Output {
        ts,
        key_event: gen_name(cnf, "k".into()),
        key_state: "q".to_string(),
    })
}

/// The explicit region inhibiting the key event at `q` for a given model.
///
/// For the inp-test classes the support collects `s_0` and every source of a
/// model-variable arc, with the key, the `h` bridge and the model variables
/// consuming. For the set/res classes the support additionally keeps `s_1`,
/// the compartment sinks and the upper extension states, the model variables
/// reset, their helpers set, and the extension's reachability events reset;
/// when only `free` is available the whole picture is mirrored in place.
pub fn theorem2_witness(
    cnf: &CnfInstance,
    tau: NetType,
    model: &[usize],
) -> Result<Region, Theorem2Error> {
    let family = theorem2_family(tau).ok_or(Theorem2Error::WrongFamily(tau))?;
    if !cnf.is_one_in_three_model(model) {
        let names: Vec<&str> = model.iter().map(|&v| cnf.variable_name(v)).collect();
        return Err(Theorem2Error::NotAModel(names.join(",")));
    }
    let out = build_theorem2_ts(cnf, tau)?;
    let ts = &out.ts;
    let m = cnf.n_clauses();
    let k = gen_name(cnf, "k".into());
    let h = gen_name(cnf, "h".into());
    // Mirror classes construct in the mirrored type and flip at the end.
    let needs_mirror = match family {
        Theorem2Family::InpTest => false,
        Theorem2Family::InpTestMirror => true,
        Theorem2Family::SetRes => !tau.contains(Interaction::Used),
    };
    let build_tau = if needs_mirror { tau.mirror() } else { tau };

    let mut sup = vec![false; ts.n_states()];
    let mut sig: Vec<Option<Interaction>> = vec![None; ts.n_events()];
    let include = |ts: &TransitionSystem, sup: &mut Vec<bool>, name: &str| {
        sup[ts.state_by_name(name).expect("state exists").0 as usize] = true;
    };
    // Common core: s_0 and the sources of model-variable arcs.
    include(ts, &mut sup, "s_0");
    for &v in model {
        let e = ts.event_by_name(cnf.variable_name(v)).expect("variable event");
        for &(src, _) in ts.arcs_of_event(e) {
            if ts.delta(src, e) == Some(src) {
                continue; // enhancement loops are not sources proper
            }
            sup[src.0 as usize] = true;
        }
    }
    let set_sig = |ts: &TransitionSystem, sig: &mut Vec<Option<Interaction>>, name: &str, i: Interaction| {
        sig[ts.event_by_name(name).expect("event exists").0 as usize] = Some(i);
    };
    match family {
        Theorem2Family::InpTest | Theorem2Family::InpTestMirror => {
            set_sig(ts, &mut sig, &k, Interaction::Inp);
            set_sig(ts, &mut sig, &h, Interaction::Inp);
            for &v in model {
                set_sig(ts, &mut sig, cnf.variable_name(v), Interaction::Inp);
            }
        }
        Theorem2Family::SetRes => {
            include(ts, &mut sup, "s_1");
            for i in 0..m {
                include(ts, &mut sup, &format!("t_{i}_8"));
            }
            for state in ["m_0", "m_1", "m_2", "m_3"] {
                include(ts, &mut sup, state);
            }
            set_sig(ts, &mut sig, &k, Interaction::Used);
            set_sig(ts, &mut sig, &h, Interaction::Res);
            set_sig(ts, &mut sig, &gen_name(cnf, "u".into()), Interaction::Res);
            for i in 0..m {
                set_sig(ts, &mut sig, &gen_name(cnf, format!("a_{i}")), Interaction::Res);
            }
            for &v in model {
                set_sig(ts, &mut sig, cnf.variable_name(v), Interaction::Res);
                set_sig(ts, &mut sig, &helper_name(cnf, v), Interaction::Set);
            }
        }
    }
    // Remaining events: first fitting interaction, nop first.
    let mut region_sig: Vec<Interaction> = Vec::with_capacity(ts.n_events());
    for e in ts.events() {
        match sig[e.0 as usize] {
            Some(i) => region_sig.push(i),
            None => {
                let cand = crate::region::signature_candidates(ts, build_tau, &sup, e);
                let pick = NOP_FIRST_PRIORITY
                    .into_iter()
                    .find(|i| cand.contains(*i))
                    .ok_or_else(|| Theorem2Error::NoSignatureFits {
                        tau: build_tau,
                        event: ts.event_name(e).to_string(),
                    })?;
                region_sig.push(pick);
            }
        }
    }
    let mut region = Region::new(sup, region_sig);
    if needs_mirror {
        // Same TS; the witness transfers through the type isomorphism.
        region = region.mirror();
    }
    crate::region::validate_region(ts, tau, &region)?;
    let ke = ts.event_by_name(&out.key_event).expect("key event");
    let ks = ts.state_by_name(&out.key_state).expect("key state");
    debug_assert!(!region.sig(ke).defined_on(region.sup(ks)));
    Ok(region)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardness::cnf::{
        no_model_instance, one_in_three_bruteforce, tiny_instance,
    };

    #[test]
    fn basic_ts_counts() {
        let cnf = tiny_instance();
        let out = build_theorem2_ts(&cnf, "nop,inp,free".parse().unwrap()).unwrap();
        assert_eq!(out.ts.n_states(), 3 + 9 * 3);
        assert_eq!(out.ts.n_events(), 2 + 3 * 3);
        assert!(out.ts.modesty().modest);

        let cnf = no_model_instance();
        let out = build_theorem2_ts(&cnf, "nop,inp,free".parse().unwrap()).unwrap();
        assert_eq!(out.ts.n_states(), 3 + 9 * 4);
        assert_eq!(out.ts.n_events(), 2 + 3 * 4);
    }

    #[test]
    fn loop_enhanced_counts_and_loops() {
        let cnf = tiny_instance();
        let out = build_theorem2_ts(&cnf, "nop,set,res,used".parse().unwrap()).unwrap();
        assert_eq!(out.ts.n_states(), 8 + 13 * 3);
        // Every non-loop arc has its event looping at the target.
        for (s, e, d) in out.ts.arcs() {
            if s != d {
                assert_eq!(out.ts.delta(d, e), Some(d));
            }
        }
    }

    #[test]
    fn six_permutation_paths_exist() {
        let cnf = tiny_instance();
        let out = build_theorem2_ts(&cnf, "nop,inp,free".parse().unwrap()).unwrap();
        let ts = &out.ts;
        let t0 = ts.state_by_name("t_0_0").unwrap();
        let t5 = ts.state_by_name("t_0_5").unwrap();
        let vars = ["x", "y", "z"];
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        for perm in perms {
            let mut s = t0;
            for &p in &perm {
                let e = ts.event_by_name(vars[p]).unwrap();
                s = ts.delta(s, e).unwrap_or_else(|| panic!("missing {perm:?} at {p}"));
            }
            assert_eq!(s, t5, "{perm:?}");
        }
    }

    #[test]
    fn witnesses_validate_for_all_seven_classes_and_mirrors() {
        let cnf = tiny_instance();
        let model = one_in_three_bruteforce(&cnf).unwrap().unwrap();
        for tau_s in [
            "nop,inp,free",
            "nop,inp,used,free",
            "nop,out,used",
            "nop,out,used,free",
            "nop,set,res,used",
            "nop,set,res,free",
            "nop,set,res,used,free",
        ] {
            let tau: NetType = tau_s.parse().unwrap();
            let out = build_theorem2_ts(&cnf, tau).unwrap();
            let witness = theorem2_witness(&cnf, tau, &model)
                .unwrap_or_else(|e| panic!("{tau_s}: {e}"));
            let ke = out.ts.event_by_name(&out.key_event).unwrap();
            let ks = out.ts.state_by_name(&out.key_state).unwrap();
            assert!(!witness.sig(ke).defined_on(witness.sup(ks)), "{tau_s}");
        }
    }

    #[test]
    fn witness_signature_spot_checks() {
        let cnf = tiny_instance();
        let model = vec![0usize];
        let tau: NetType = "nop,inp,free".parse().unwrap();
        let out = build_theorem2_ts(&cnf, tau).unwrap();
        let w = theorem2_witness(&cnf, tau, &model).unwrap();
        assert_eq!(w.sig(out.ts.event_by_name("k").unwrap()), Interaction::Inp);
        assert_eq!(w.sig(out.ts.event_by_name("x").unwrap()), Interaction::Inp);
        assert_eq!(w.sig(out.ts.event_by_name("y").unwrap()), Interaction::Nop);

        let tau: NetType = "nop,set,res,used".parse().unwrap();
        let out = build_theorem2_ts(&cnf, tau).unwrap();
        let w = theorem2_witness(&cnf, tau, &model).unwrap();
        assert_eq!(w.sig(out.ts.event_by_name("k").unwrap()), Interaction::Used);
        assert_eq!(w.sig(out.ts.event_by_name("x").unwrap()), Interaction::Res);
        assert_eq!(w.sig(out.ts.event_by_name("x_0").unwrap()), Interaction::Set);
    }

    #[test]
    fn wrong_family_rejected() {
        let cnf = tiny_instance();
        assert!(matches!(
            build_theorem2_ts(&cnf, "nop,inp,out".parse().unwrap()),
            Err(Theorem2Error::WrongFamily(_))
        ));
    }

    #[test]
    fn non_model_rejected() {
        let cnf = tiny_instance();
        let err = theorem2_witness(&cnf, "nop,inp,free".parse().unwrap(), &[0, 1]);
        assert!(matches!(err, Err(Theorem2Error::NotAModel(_))));
    }
}
