//! Boolean nets, their firing rule, state-graph expansion, the type template
//! TS, and deterministic isomorphism checking between TSs.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::interaction::{Interaction, NetType};
use crate::ts::{EventId, StateId, TransitionSystem, TsBuilder};

/// A boolean net: every place holds at most one token and every
/// place/transition pair is related by one interaction.
#[derive(Debug, Clone)]
pub struct BooleanNet {
    name: String,
    places: Vec<String>,
    transitions: Vec<String>,
    initial_marking: Vec<bool>,
    /// `flow[p * transitions.len() + t]`; defaults to nop.
    flow: Vec<Interaction>,
}

/// A marking: the set of marked places, bit per place index.
pub type Marking = Vec<bool>;

impl BooleanNet {
    pub fn new(
        name: &str,
        places: Vec<String>,
        transitions: Vec<String>,
        initial_marking: Vec<bool>,
    ) -> BooleanNet {
        assert_eq!(places.len(), initial_marking.len());
        let flow = vec![Interaction::Nop; places.len() * transitions.len()];
        BooleanNet {
            name: name.to_string(),
            places,
            transitions,
            initial_marking,
            flow,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_places(&self) -> usize {
        self.places.len()
    }

    pub fn n_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn place_names(&self) -> &[String] {
        &self.places
    }

    pub fn transition_names(&self) -> &[String] {
        &self.transitions
    }

    pub fn initial_marking(&self) -> &Marking {
        &self.initial_marking
    }

    pub fn set_flow(&mut self, place: usize, transition: usize, i: Interaction) {
        let k = self.transitions.len();
        self.flow[place * k + transition] = i;
    }

    pub fn flow(&self, place: usize, transition: usize) -> Interaction {
        self.flow[place * self.transitions.len() + transition]
    }

    pub fn transition_by_name(&self, name: &str) -> Option<usize> {
        self.transitions.iter().position(|t| t == name)
    }

    /// Fires `t` at `M` if every place permits it; `None` means `t` is not
    /// enabled at `M`.
    pub fn fire(&self, marking: &Marking, t: usize) -> Option<Marking> {
        let mut next = vec![false; self.places.len()];
        for p in 0..self.places.len() {
            next[p] = self.flow(p, t).apply(marking[p])?;
        }
        Some(next)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StateGraphError {
    #[error("state graph exceeds the marking cap of {0}")]
    CapExceeded(usize),
}

/// Canonical text form of a marking: the sorted marked-place list in braces.
pub fn marking_name(net: &BooleanNet, marking: &Marking) -> String {
    let mut names: Vec<&str> = net
        .place_names()
        .iter()
        .enumerate()
        .filter(|(p, _)| marking[*p])
        .map(|(_, n)| n.as_str())
        .collect();
    names.sort_unstable();
    format!("{{{}}}", names.join(","))
}

/// Expands the reachable markings of `net` into a TS by BFS from the initial
/// marking. Aborts with `CapExceeded` once more than `cap` markings appear.
pub fn state_graph(net: &BooleanNet, cap: usize) -> Result<TransitionSystem, StateGraphError> {
    assert!(cap >= 1);
    let mut b = TsBuilder::new(&format!("sg_{}", net.name()));
    let mut index: HashMap<Marking, String> = HashMap::new();
    let m0 = net.initial_marking().clone();
    let m0_name = marking_name(net, &m0);
    b.initial(&m0_name);
    index.insert(m0.clone(), m0_name);
    let mut queue = VecDeque::new();
    queue.push_back(m0);
    while let Some(m) = queue.pop_front() {
        let m_name = index[&m].clone();
        for t in 0..net.n_transitions() {
            if let Some(next) = net.fire(&m, t) {
                let next_name = match index.get(&next) {
                    Some(n) => n.clone(),
                    None => {
                        if index.len() == cap {
                            return Err(StateGraphError::CapExceeded(cap));
                        }
                        let n = marking_name(net, &next);
                        index.insert(next.clone(), n.clone());
                        queue.push_back(next.clone());
                        n
                    }
                };
                b.arc(&m_name, &net.transition_names()[t], &next_name);
            }
        }
        // Transitions that fire nowhere still belong to the event set.
        for t in net.transition_names() {
            b.event(t);
        }
    }
    Ok(b.build().expect("state graph is reachable by construction"))
}

/// The template TS of a net type: states 0 and 1, one arc `s --i--> i(s)`
/// per interaction `i` defined on `s`. The template has no distinguished
/// root, so it skips the reachability check.
pub fn type_template(tau: NetType) -> Result<TransitionSystem, EmptyTypeError> {
    if tau.is_empty() {
        return Err(EmptyTypeError);
    }
    let mut b = TsBuilder::new("template");
    b.initial("0");
    b.state("1");
    for i in tau.iter() {
        for (s, v) in [("0", false), ("1", true)] {
            if let Some(out) = i.apply(v) {
                b.arc(s, i.name(), if out { "1" } else { "0" });
            }
        }
    }
    Ok(b.build_unrooted().expect("template is deterministic"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("the empty type has no template")]
pub struct EmptyTypeError;

/// An event-label-preserving state bijection between two TSs with
/// `initial -> initial`, when one exists.
///
/// Both TSs are deterministic and rooted, so the only candidate mapping is
/// the one propagated from the initial states by parallel BFS; this builds it
/// and verifies bijectivity and arc-set equality.
pub fn check_isomorphic(
    a: &TransitionSystem,
    b: &TransitionSystem,
) -> Option<Vec<(StateId, StateId)>> {
    if a.n_states() != b.n_states() || a.n_arcs() != b.n_arcs() {
        return None;
    }
    // Events must correspond by name.
    let mut event_map: Vec<Option<EventId>> = vec![None; a.n_events()];
    for e in a.events() {
        event_map[e.0 as usize] = b.event_by_name(a.event_name(e));
    }
    let mut map: Vec<Option<StateId>> = vec![None; a.n_states()];
    let mut hit: Vec<bool> = vec![false; b.n_states()];
    map[a.initial().0 as usize] = Some(b.initial());
    hit[b.initial().0 as usize] = true;
    let mut queue = VecDeque::new();
    queue.push_back(a.initial());
    while let Some(s) = queue.pop_front() {
        let s_b = map[s.0 as usize].unwrap();
        // The outgoing event sets must agree exactly.
        for e in a.events() {
            let d_a = a.delta(s, e);
            let d_b = match event_map[e.0 as usize] {
                Some(eb) => b.delta(s_b, eb),
                None => None,
            };
            match (d_a, d_b) {
                (None, None) => {}
                (Some(da), Some(db)) => match map[da.0 as usize] {
                    Some(prev) => {
                        if prev != db {
                            return None;
                        }
                    }
                    None => {
                        if hit[db.0 as usize] {
                            return None;
                        }
                        map[da.0 as usize] = Some(db);
                        hit[db.0 as usize] = true;
                        queue.push_back(da);
                    }
                },
                _ => return None,
            }
        }
        // Events of B that A does not know about must not occur at s_b.
        for eb in b.events() {
            if a.event_by_name(b.event_name(eb)).is_none() && b.delta(s_b, eb).is_some() {
                return None;
            }
        }
    }
    // A is rooted, so every A-state was mapped; equal counts make it onto.
    let pairs: Vec<(StateId, StateId)> = map
        .iter()
        .enumerate()
        .map(|(i, m)| (StateId(i as u32), m.expect("rooted TS maps completely")))
        .collect();
    Some(pairs)
}

// ---------------------------------------------------------------------------
// Net text codec
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

fn nsyntax(line: usize, msg: impl Into<String>) -> NetParseError {
    NetParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// Parses the net format:
///
/// ```text
/// net <name>
/// transitions e1 e2 ...
/// place <name> initial=<0|1> <event>=<interaction> ...
/// ```
///
/// Flow entries omitted from a `place` line default to nop.
pub fn parse_net(input: &str) -> Result<BooleanNet, NetParseError> {
    let mut name: Option<String> = None;
    let mut transitions: Option<Vec<String>> = None;
    let mut places: Vec<(String, bool, Vec<(String, Interaction)>)> = Vec::new();
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
            "net" => {
                if name.is_some() {
                    return Err(nsyntax(lineno + 1, "duplicate `net` header"));
                }
                name = Some(
                    parts
                        .next()
                        .ok_or_else(|| nsyntax(lineno + 1, "expected `net <name>`"))?
                        .to_string(),
                );
            }
            "transitions" => {
                if transitions.is_some() {
                    return Err(nsyntax(lineno + 1, "duplicate `transitions` line"));
                }
                transitions = Some(parts.map(str::to_string).collect());
            }
            "place" => {
                let pname = parts
                    .next()
                    .ok_or_else(|| nsyntax(lineno + 1, "expected `place <name> ...`"))?
                    .to_string();
                let mut initial: Option<bool> = None;
                let mut entries = Vec::new();
                for kv in parts {
                    let (key, value) = kv
                        .split_once('=')
                        .ok_or_else(|| nsyntax(lineno + 1, format!("expected `key=value`, got `{kv}`")))?;
                    if key == "initial" {
                        initial = Some(match value {
                            "0" => false,
                            "1" => true,
                            _ => return Err(nsyntax(lineno + 1, "initial must be 0 or 1")),
                        });
                    } else {
                        let i: Interaction = value
                            .parse()
                            .map_err(|e| nsyntax(lineno + 1, format!("{e}")))?;
                        entries.push((key.to_string(), i));
                    }
                }
                let initial =
                    initial.ok_or_else(|| nsyntax(lineno + 1, "place line lacks `initial=`"))?;
                places.push((pname, initial, entries));
            }
            other => return Err(nsyntax(lineno + 1, format!("unknown keyword `{other}`"))),
        }
    }
    let name = name.ok_or_else(|| nsyntax(0, "missing `net <name>` header"))?;
    let transitions = transitions.ok_or_else(|| nsyntax(0, "missing `transitions` line"))?;
    let place_names: Vec<String> = places.iter().map(|(n, _, _)| n.clone()).collect();
    let marking: Vec<bool> = places.iter().map(|(_, m, _)| *m).collect();
    let mut net = BooleanNet::new(&name, place_names, transitions, marking);
    for (p, (_, _, entries)) in places.iter().enumerate() {
        for (ev, i) in entries {
            let t = net
                .transition_by_name(ev)
                .ok_or_else(|| nsyntax(0, format!("flow references unknown transition `{ev}`")))?;
            net.set_flow(p, t, *i);
        }
    }
    Ok(net)
}

/// Serializes a net; nop flow entries are omitted.
pub fn serialize_net(net: &BooleanNet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "net {}", net.name());
    let _ = writeln!(out, "transitions {}", net.transition_names().join(" "));
    for p in 0..net.n_places() {
        let _ = write!(
            out,
            "place {} initial={}",
            net.place_names()[p],
            u8::from(net.initial_marking()[p])
        );
        for t in 0..net.n_transitions() {
            let i = net.flow(p, t);
            if i != Interaction::Nop {
                let _ = write!(out, " {}={}", net.transition_names()[t], i);
            }
        }
        out.push('\n');
    }
    out
}

/// Restrictions of markings to the canonical sorted-place-set text form plus
/// net name give byte-identical output for equal nets.
#[cfg(test)]
mod tests {
    use super::*;

    fn one_place_net(i: Interaction, marked: bool) -> BooleanNet {
        let mut net = BooleanNet::new(
            "n",
            vec!["p".into()],
            vec!["e".into()],
            vec![marked],
        );
        net.set_flow(0, 0, i);
        net
    }

    #[test]
    fn fire_follows_interaction_table() {
        let net = one_place_net(Interaction::Inp, true);
        assert_eq!(net.fire(&vec![true], 0), Some(vec![false]));
        assert_eq!(net.fire(&vec![false], 0), None);
        let net = one_place_net(Interaction::Swap, false);
        assert_eq!(net.fire(&vec![false], 0), Some(vec![true]));
    }

    #[test]
    fn fire_agrees_with_apply_for_every_interaction() {
        for i in crate::interaction::ALL_INTERACTIONS {
            for b in [false, true] {
                let net = one_place_net(i, b);
                let fired = net.fire(&vec![b], 0).map(|m| m[0]);
                assert_eq!(fired, i.apply(b), "{i} on {b}");
            }
        }
    }

    #[test]
    fn state_graph_single_firing() {
        let net = one_place_net(Interaction::Inp, true);
        let sg = state_graph(&net, 16).unwrap();
        assert_eq!(sg.n_states(), 2);
        let full = sg.state_by_name("{p}").unwrap();
        let empty = sg.state_by_name("{}").unwrap();
        assert_eq!(sg.delta(full, sg.event_by_name("e").unwrap()), Some(empty));
        assert_eq!(sg.initial(), full);
    }

    #[test]
    fn state_graph_nop_loop() {
        let net = one_place_net(Interaction::Nop, true);
        let sg = state_graph(&net, 16).unwrap();
        assert_eq!(sg.n_states(), 1);
        assert_eq!(sg.n_arcs(), 1);
    }

    #[test]
    fn state_graph_swap_alternates() {
        let net = one_place_net(Interaction::Swap, false);
        let sg = state_graph(&net, 16).unwrap();
        assert_eq!(sg.n_states(), 2);
        assert_eq!(sg.n_arcs(), 2);
    }

    #[test]
    fn state_graph_cap() {
        let net = one_place_net(Interaction::Swap, false);
        assert_eq!(
            state_graph(&net, 1).unwrap_err(),
            StateGraphError::CapExceeded(1)
        );
    }

    #[test]
    fn template_examples() {
        let t = type_template("nop".parse().unwrap()).unwrap();
        assert_eq!(t.n_arcs(), 2);
        let s0 = t.state_by_name("0").unwrap();
        let s1 = t.state_by_name("1").unwrap();
        let nop = t.event_by_name("nop").unwrap();
        assert_eq!(t.delta(s0, nop), Some(s0));
        assert_eq!(t.delta(s1, nop), Some(s1));

        let t = type_template("swap".parse().unwrap()).unwrap();
        let swap = t.event_by_name("swap").unwrap();
        assert_eq!(t.delta(t.state_by_name("0").unwrap(), swap), t.state_by_name("1"));
        assert_eq!(t.delta(t.state_by_name("1").unwrap(), swap), t.state_by_name("0"));

        let t = type_template("inp".parse().unwrap()).unwrap();
        assert_eq!(t.n_arcs(), 1);
        assert!(type_template(NetType::EMPTY).is_err());
    }

    fn ts(arcs: &[(&str, &str, &str)], initial: &str) -> TransitionSystem {
        let mut b = TsBuilder::new("t");
        b.initial(initial);
        for (s, e, d) in arcs {
            b.arc(s, e, d);
        }
        b.build().unwrap()
    }

    #[test]
    fn iso_identity_and_renaming() {
        let a = ts(&[("a", "e", "b"), ("b", "f", "a")], "a");
        let m = check_isomorphic(&a, &a).unwrap();
        assert!(m.iter().all(|(x, y)| x.0 == y.0));

        let b = ts(&[("u", "e", "v"), ("v", "f", "u")], "u");
        let m = check_isomorphic(&a, &b).unwrap();
        assert_eq!(m.len(), 2);
        let a0 = a.state_by_name("a").unwrap();
        let pair = m.iter().find(|(x, _)| *x == a0).unwrap();
        assert_eq!(b.state_name(pair.1), "u");
    }

    #[test]
    fn iso_label_mismatch() {
        let a = ts(&[("a", "e", "b")], "a");
        let b = ts(&[("a", "f", "b")], "a");
        assert!(check_isomorphic(&a, &b).is_none());
    }

    #[test]
    fn iso_structure_mismatch() {
        let a = ts(&[("a", "e", "b")], "a");
        let b = ts(&[("a", "e", "a")], "a");
        assert!(check_isomorphic(&a, &b).is_none());
    }

    #[test]
    fn net_codec_round_trip() {
        let mut net = BooleanNet::new(
            "n",
            vec!["r0".into(), "r1".into()],
            vec!["e".into(), "f".into()],
            vec![true, false],
        );
        net.set_flow(0, 0, Interaction::Inp);
        net.set_flow(1, 1, Interaction::Swap);
        let text = serialize_net(&net);
        let back = parse_net(&text).unwrap();
        assert_eq!(serialize_net(&back), text);
        assert_eq!(back.flow(0, 0), Interaction::Inp);
        assert_eq!(back.flow(0, 1), Interaction::Nop);
    }
}
