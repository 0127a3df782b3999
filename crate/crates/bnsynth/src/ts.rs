//! Deterministic, initial-state-rooted labeled transition systems, unions of
//! them, and the joining constructions that merge a union into a single TS.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::interaction::{Interaction, NetType};

/// Index of a state within its owning [`TransitionSystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

/// Index of an event within its owning [`TransitionSystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(pub u32);

/// A deterministic rooted labeled transition system.
///
/// States and events are opaque case-sensitive tokens (no whitespace, no `#`)
/// held in declaration order; the partial transition function is stored as a
/// dense `states x events` table. Construction goes through [`TsBuilder`],
/// which enforces determinism and reachability.
#[derive(Debug, Clone)]
pub struct TransitionSystem {
    name: String,
    states: Vec<String>,
    events: Vec<String>,
    initial: StateId,
    /// `delta[s * n_events + e]`
    delta: Vec<Option<StateId>>,
    /// Arcs `(src, dst)` per event.
    event_arcs: Vec<Vec<(StateId, StateId)>>,
    /// Incoming arcs `(src, event)` per state.
    in_arcs: Vec<Vec<(StateId, EventId)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TsError {
    #[error("state `{state}` has two `{event}`-successors")]
    NonDeterministic { state: String, event: String },
    #[error("state `{0}` is not reachable from the initial state")]
    Unreachable(String),
    #[error("initial state is not declared")]
    UnknownInitial,
    #[error("no initial state given")]
    MissingInitial,
    #[error("invalid identifier `{0}` (whitespace and `#` are not allowed)")]
    BadIdentifier(String),
}

fn check_ident(tok: &str) -> Result<(), TsError> {
    if tok.is_empty() || tok.contains(char::is_whitespace) || tok.contains('#') {
        return Err(TsError::BadIdentifier(tok.to_string()));
    }
    Ok(())
}

/// Incremental constructor for [`TransitionSystem`].
#[derive(Debug, Clone, Default)]
pub struct TsBuilder {
    name: String,
    states: Vec<String>,
    state_ix: HashMap<String, u32>,
    events: Vec<String>,
    event_ix: HashMap<String, u32>,
    initial: Option<String>,
    arcs: Vec<(u32, u32, u32)>,
}

impl TsBuilder {
    pub fn new(name: &str) -> TsBuilder {
        TsBuilder {
            name: name.to_string(),
            ..TsBuilder::default()
        }
    }

    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&ix) = self.state_ix.get(name) {
            return StateId(ix);
        }
        let ix = self.states.len() as u32;
        self.states.push(name.to_string());
        self.state_ix.insert(name.to_string(), ix);
        StateId(ix)
    }

    pub fn event(&mut self, name: &str) -> EventId {
        if let Some(&ix) = self.event_ix.get(name) {
            return EventId(ix);
        }
        let ix = self.events.len() as u32;
        self.events.push(name.to_string());
        self.event_ix.insert(name.to_string(), ix);
        EventId(ix)
    }

    pub fn initial(&mut self, name: &str) -> &mut Self {
        self.state(name);
        self.initial = Some(name.to_string());
        self
    }

    /// Adds `src --event--> dst`, declaring states and the event implicitly.
    pub fn arc(&mut self, src: &str, event: &str, dst: &str) -> &mut Self {
        let s = self.state(src).0;
        let e = self.event(event).0;
        let d = self.state(dst).0;
        self.arcs.push((s, e, d));
        self
    }

    pub fn has_state(&self, name: &str) -> bool {
        self.state_ix.contains_key(name)
    }

    pub fn has_event(&self, name: &str) -> bool {
        self.event_ix.contains_key(name)
    }

    /// Validates determinism and reachability and produces the final TS.
    pub fn build(self) -> Result<TransitionSystem, TsError> {
        for tok in self.states.iter().chain(self.events.iter()) {
            check_ident(tok)?;
        }
        let initial_name = self.initial.ok_or(TsError::MissingInitial)?;
        let initial = StateId(
            *self
                .state_ix
                .get(&initial_name)
                .ok_or(TsError::UnknownInitial)?,
        );
        let n = self.states.len();
        let k = self.events.len();
        let mut delta: Vec<Option<StateId>> = vec![None; n * k];
        for &(s, e, d) in &self.arcs {
            let cell = &mut delta[s as usize * k + e as usize];
            match *cell {
                Some(prev) if prev.0 != d => {
                    return Err(TsError::NonDeterministic {
                        state: self.states[s as usize].clone(),
                        event: self.events[e as usize].clone(),
                    });
                }
                _ => *cell = Some(StateId(d)),
            }
        }
        let ts = TransitionSystem::assemble(
            self.name,
            self.states,
            self.events,
            initial,
            delta,
        );
        // Reachability: BFS from the initial state must visit every state.
        let seen = ts.reachable_from(initial);
        if let Some(bad) = (0..n).find(|&s| !seen[s]) {
            return Err(TsError::Unreachable(ts.states[bad].clone()));
        }
        Ok(ts)
    }

    /// Builds without the reachability check. Used for template TSs that have
    /// no meaningful root.
    pub(crate) fn build_unrooted(self) -> Result<TransitionSystem, TsError> {
        let initial_name = self.initial.ok_or(TsError::MissingInitial)?;
        let initial = StateId(
            *self
                .state_ix
                .get(&initial_name)
                .ok_or(TsError::UnknownInitial)?,
        );
        let n = self.states.len();
        let k = self.events.len();
        let mut delta: Vec<Option<StateId>> = vec![None; n * k];
        for &(s, e, d) in &self.arcs {
            let cell = &mut delta[s as usize * k + e as usize];
            match *cell {
                Some(prev) if prev.0 != d => {
                    return Err(TsError::NonDeterministic {
                        state: self.states[s as usize].clone(),
                        event: self.events[e as usize].clone(),
                    });
                }
                _ => *cell = Some(StateId(d)),
            }
        }
        Ok(TransitionSystem::assemble(
            self.name,
            self.states,
            self.events,
            initial,
            delta,
        ))
    }
}

impl TransitionSystem {
    fn assemble(
        name: String,
        states: Vec<String>,
        events: Vec<String>,
        initial: StateId,
        delta: Vec<Option<StateId>>,
    ) -> TransitionSystem {
        let n = states.len();
        let k = events.len();
        let mut event_arcs: Vec<Vec<(StateId, StateId)>> = vec![Vec::new(); k];
        let mut in_arcs: Vec<Vec<(StateId, EventId)>> = vec![Vec::new(); n];
        for s in 0..n {
            for e in 0..k {
                if let Some(d) = delta[s * k + e] {
                    event_arcs[e].push((StateId(s as u32), d));
                    in_arcs[d.0 as usize].push((StateId(s as u32), EventId(e as u32)));
                }
            }
        }
        TransitionSystem {
            name,
            states,
            events,
            initial,
            delta,
            event_arcs,
            in_arcs,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn n_events(&self) -> usize {
        self.events.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.0 as usize]
    }

    pub fn event_name(&self, e: EventId) -> &str {
        &self.events[e.0 as usize]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn event_names(&self) -> &[String] {
        &self.events
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(|i| StateId(i as u32))
    }

    pub fn event_by_name(&self, name: &str) -> Option<EventId> {
        self.events
            .iter()
            .position(|e| e == name)
            .map(|i| EventId(i as u32))
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len() as u32).map(StateId)
    }

    pub fn events(&self) -> impl Iterator<Item = EventId> {
        (0..self.events.len() as u32).map(EventId)
    }

    #[inline]
    pub fn delta(&self, s: StateId, e: EventId) -> Option<StateId> {
        self.delta[s.0 as usize * self.events.len() + e.0 as usize]
    }

    /// True if `e` occurs at `s`.
    #[inline]
    pub fn occurs(&self, s: StateId, e: EventId) -> bool {
        self.delta(s, e).is_some()
    }

    /// All arcs labeled `e` as `(src, dst)` pairs, in state order.
    pub fn arcs_of_event(&self, e: EventId) -> &[(StateId, StateId)] {
        &self.event_arcs[e.0 as usize]
    }

    /// Incoming arcs of `s` as `(src, event)` pairs.
    pub fn in_arcs(&self, s: StateId) -> &[(StateId, EventId)] {
        &self.in_arcs[s.0 as usize]
    }

    /// All arcs in `(src, event, dst)` order.
    pub fn arcs(&self) -> impl Iterator<Item = (StateId, EventId, StateId)> + '_ {
        let k = self.events.len();
        self.delta.iter().enumerate().filter_map(move |(ix, d)| {
            d.map(|dst| (StateId((ix / k) as u32), EventId((ix % k) as u32), dst))
        })
    }

    pub fn n_arcs(&self) -> usize {
        self.delta.iter().filter(|d| d.is_some()).count()
    }

    fn reachable_from(&self, start: StateId) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        let mut queue = VecDeque::new();
        seen[start.0 as usize] = true;
        queue.push_back(start);
        while let Some(s) = queue.pop_front() {
            for e in self.events() {
                if let Some(d) = self.delta(s, e) {
                    if !seen[d.0 as usize] {
                        seen[d.0 as usize] = true;
                        queue.push_back(d);
                    }
                }
            }
        }
        seen
    }

    /// Structural equality on names: same state set, event set, initial state
    /// and arc set, independent of declaration order.
    pub fn structurally_eq(&self, other: &TransitionSystem) -> bool {
        use std::collections::BTreeSet;
        let states_a: BTreeSet<_> = self.states.iter().collect();
        let states_b: BTreeSet<_> = other.states.iter().collect();
        let events_a: BTreeSet<_> = self.events.iter().collect();
        let events_b: BTreeSet<_> = other.events.iter().collect();
        if states_a != states_b
            || events_a != events_b
            || self.state_name(self.initial) != other.state_name(other.initial)
        {
            return false;
        }
        let arcs = |ts: &TransitionSystem| -> BTreeSet<(String, String, String)> {
            ts.arcs()
                .map(|(s, e, d)| {
                    (
                        ts.state_name(s).to_string(),
                        ts.event_name(e).to_string(),
                        ts.state_name(d).to_string(),
                    )
                })
                .collect()
        };
        arcs(self) == arcs(other)
    }

    /// Computes the modesty flags.
    pub fn modesty(&self) -> ModestyReport {
        let mut simple = true;
        let mut loop_free = true;
        // Parallel arcs: two events with the same ordered (src, dst) pair.
        let mut pair_seen: HashMap<(u32, u32), EventId> = HashMap::new();
        for (s, e, d) in self.arcs() {
            if s == d {
                loop_free = false;
            }
            if let Some(prev) = pair_seen.insert((s.0, d.0), e) {
                if prev != e {
                    simple = false;
                }
            }
        }
        let reduced = self
            .event_arcs
            .iter()
            .all(|arcs| !arcs.is_empty());
        ModestyReport {
            simple,
            loop_free,
            reduced,
            modest: simple && loop_free && reduced,
        }
    }
}

/// Simplicity, loop-freeness and reducedness of a valid TS.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModestyReport {
    pub simple: bool,
    pub loop_free: bool,
    pub reduced: bool,
    pub modest: bool,
}

/// An ordered union of transition systems with pairwise disjoint state sets.
/// Events may be shared between components; component order is significant
/// because the joining numbers its connectors along it.
#[derive(Debug, Clone, Default)]
pub struct TsUnion {
    components: Vec<TransitionSystem>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnionError {
    #[error("state `{0}` occurs in more than one component")]
    StateCollision(String),
}

impl TsUnion {
    pub fn new(components: Vec<TransitionSystem>) -> Result<TsUnion, UnionError> {
        let mut seen: HashMap<&str, ()> = HashMap::new();
        for ts in &components {
            for s in ts.state_names() {
                if seen.insert(s, ()).is_some() {
                    return Err(UnionError::StateCollision(s.clone()));
                }
            }
        }
        Ok(TsUnion { components })
    }

    /// Flattens nested unions; flattening is identity on component order.
    pub fn flatten(unions: Vec<TsUnion>) -> Result<TsUnion, UnionError> {
        TsUnion::new(unions.into_iter().flat_map(|u| u.components).collect())
    }

    pub fn components(&self) -> &[TransitionSystem] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    /// All state names of the union, in component order.
    pub fn state_names(&self) -> impl Iterator<Item = &str> {
        self.components
            .iter()
            .flat_map(|ts| ts.state_names().iter().map(|s| s.as_str()))
    }

    /// Event names of the union, deduplicated, in first-occurrence order.
    pub fn event_names(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        let mut seen: HashMap<&str, ()> = HashMap::new();
        for ts in &self.components {
            for e in ts.event_names() {
                if seen.insert(e, ()).is_none() {
                    out.push(e);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JoinError {
    #[error("type {{{0}}} supports neither joining construction")]
    JoinUndefined(NetType),
    #[error("event `{0}` occurs at every state of the union")]
    PreconditionViolated(String),
    #[error(
        "component `{0}`: initial state lacks the required unique loop pair \
         (exactly one incoming and one outgoing arc, same otherwise-unused event)"
    )]
    PlusShapeViolated(String),
    #[error(transparent)]
    Union(#[from] UnionError),
    #[error(transparent)]
    Ts(#[from] TsError),
}

/// Reserved name prefixes for the joining's generated identifiers.
pub const BOT_PREFIX: &str = "__bot";
pub const ODOT_PREFIX: &str = "__odot";
pub const OMINUS_PREFIX: &str = "__ominus";

/// Which joining construction [`join`] selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinKind {
    /// Connector chain only (`inp` plus an entering interaction available).
    Forward,
    /// Connector chain plus reverse transitions (`swap` plus a test
    /// interaction available and every component initial state carries the
    /// unique loop pair).
    WithReverse,
}

/// Decides which joining construction `tau` admits for `union`, if any.
pub fn join_kind(union: &TsUnion, tau: NetType) -> Result<JoinKind, JoinError> {
    if tau.contains(Interaction::Inp) && !tau.intersect(NetType::enter()).is_empty() {
        return Ok(JoinKind::Forward);
    }
    let test_available = tau.contains(Interaction::Used) || tau.contains(Interaction::Free);
    if tau.contains(Interaction::Swap) && test_available {
        for ts in union.components() {
            if !has_plus_shape(ts) {
                return Err(JoinError::PlusShapeViolated(ts.name().to_string()));
            }
        }
        return Ok(JoinKind::WithReverse);
    }
    Err(JoinError::JoinUndefined(tau))
}

/// True if the initial state has exactly one incoming and one outgoing arc,
/// both labeled with the same event that occurs on no other arc.
fn has_plus_shape(ts: &TransitionSystem) -> bool {
    let s0 = ts.initial();
    let out: Vec<(EventId, StateId)> = ts
        .events()
        .filter_map(|e| ts.delta(s0, e).map(|d| (e, d)))
        .collect();
    let inc = ts.in_arcs(s0);
    if out.len() != 1 || inc.len() != 1 {
        return false;
    }
    let (e_out, _) = out[0];
    let (_, e_in) = inc[0];
    e_out == e_in && ts.arcs_of_event(e_out).len() == 2
}

/// Merges a union into a single TS by chaining fresh connector states and
/// linking each component's initial state to the chain.
///
/// With [`JoinKind::Forward`] the result adds states `__bot0..__botN`, arcs
/// `__boti --__odoti--> initial_i` and `__boti --__ominus(i+1)--> __bot(i+1)`.
/// With [`JoinKind::WithReverse`] each of those arcs additionally gets its
/// reverse under the same event. The union's separation behavior for `tau`
/// is preserved in both cases.
pub fn join(union: &TsUnion, tau: NetType) -> Result<TransitionSystem, JoinError> {
    let kind = join_kind(union, tau)?;
    // Every union event must be missing somewhere, otherwise the joined TS
    // could not inhibit it anywhere and the equivalence breaks.
    for ts in union.components() {
        for e in ts.events() {
            let name = ts.event_name(e);
            let occurs_everywhere = union.components().iter().all(|c| {
                c.event_by_name(name)
                    .map(|ce| c.states().all(|s| c.occurs(s, ce)))
                    .unwrap_or(false)
            });
            if occurs_everywhere {
                return Err(JoinError::PreconditionViolated(name.to_string()));
            }
        }
    }

    let mut b = TsBuilder::new(&format!("join_{}", tau_slug(tau)));
    let n = union.len();
    let bot = |i: usize| format!("{BOT_PREFIX}{i}");
    b.initial(&bot(0));
    // Connector chain: at least __bot0 exists even for an empty union.
    let chain = if n == 0 { 1 } else { n };
    for i in 0..chain {
        b.state(&bot(i));
    }
    for (i, ts) in union.components().iter().enumerate() {
        b.arc(&bot(i), &format!("{ODOT_PREFIX}{i}"), ts.state_name(ts.initial()));
        if kind == JoinKind::WithReverse {
            b.arc(ts.state_name(ts.initial()), &format!("{ODOT_PREFIX}{i}"), &bot(i));
        }
    }
    for i in 1..chain {
        b.arc(&bot(i - 1), &format!("{OMINUS_PREFIX}{i}"), &bot(i));
        if kind == JoinKind::WithReverse {
            b.arc(&bot(i), &format!("{OMINUS_PREFIX}{i}"), &bot(i - 1));
        }
    }
    for ts in union.components() {
        for (s, e, d) in ts.arcs() {
            b.arc(ts.state_name(s), ts.event_name(e), ts.state_name(d));
        }
        // Unused events survive the join.
        for e in ts.events() {
            b.event(ts.event_name(e));
        }
    }
    Ok(b.build()?)
}

fn tau_slug(tau: NetType) -> String {
    tau.iter().map(|i| i.name()).collect::<Vec<_>>().join("_")
}

// ---------------------------------------------------------------------------
// Text codec
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: TsError },
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// Parses the line-oriented TS format:
///
/// ```text
/// ts <name>
/// initial <state>
/// arc <src> <event> <dst>
/// ```
///
/// `#` starts a comment. States are usually declared implicitly by arcs;
/// `state <name>` and `event <name>` lines declare isolated states and
/// arc-less events explicitly so that every valid TS has a textual form.
pub fn parse_ts(input: &str) -> Result<TransitionSystem, ParseError> {
    let (ts, rest) = parse_ts_block(input.lines().enumerate())?;
    if let Some((lineno, tok)) = rest {
        return Err(syntax(lineno + 1, format!("unexpected `{tok}` after TS body")));
    }
    ts.ok_or_else(|| syntax(0, "empty input; expected a `ts <name>` header"))
}

type Lines<'a> = std::iter::Enumerate<std::str::Lines<'a>>;

/// Parses one TS block; returns the TS and, when a `---` separator or other
/// content follows, the offending token for the caller to deal with.
fn parse_ts_block(
    mut lines: Lines<'_>,
) -> Result<(Option<TransitionSystem>, Option<(usize, String)>), ParseError> {
    let mut b: Option<TsBuilder> = None;
    let mut saw_initial = false;
    for (lineno, raw) in &mut lines {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let keyword = parts.next().unwrap();
        match keyword {
            "ts" => {
                if b.is_some() {
                    return Err(syntax(lineno + 1, "duplicate `ts` header"));
                }
                let name = parts
                    .next()
                    .ok_or_else(|| syntax(lineno + 1, "expected `ts <name>`"))?;
                expect_end(lineno, parts)?;
                b = Some(TsBuilder::new(name));
            }
            "initial" => {
                let b = b
                    .as_mut()
                    .ok_or_else(|| syntax(lineno + 1, "`initial` before `ts` header"))?;
                if saw_initial {
                    return Err(syntax(lineno + 1, "duplicate `initial` line"));
                }
                let s = parts
                    .next()
                    .ok_or_else(|| syntax(lineno + 1, "expected `initial <state>`"))?;
                expect_end(lineno, parts)?;
                b.initial(s);
                saw_initial = true;
            }
            "arc" => {
                let b = b
                    .as_mut()
                    .ok_or_else(|| syntax(lineno + 1, "`arc` before `ts` header"))?;
                let (src, ev, dst) = match (parts.next(), parts.next(), parts.next()) {
                    (Some(s), Some(e), Some(d)) => (s, e, d),
                    _ => return Err(syntax(lineno + 1, "expected `arc <src> <event> <dst>`")),
                };
                expect_end(lineno, parts)?;
                b.arc(src, ev, dst);
            }
            "state" => {
                let b = b
                    .as_mut()
                    .ok_or_else(|| syntax(lineno + 1, "`state` before `ts` header"))?;
                let s = parts
                    .next()
                    .ok_or_else(|| syntax(lineno + 1, "expected `state <name>`"))?;
                expect_end(lineno, parts)?;
                b.state(s);
            }
            "event" => {
                let b = b
                    .as_mut()
                    .ok_or_else(|| syntax(lineno + 1, "`event` before `ts` header"))?;
                let e = parts
                    .next()
                    .ok_or_else(|| syntax(lineno + 1, "expected `event <name>`"))?;
                expect_end(lineno, parts)?;
                b.event(e);
            }
            "---" => {
                let ts = finish_block(b, saw_initial)?;
                return Ok((ts, Some((lineno, "---".to_string()))));
            }
            other => {
                return Err(syntax(lineno + 1, format!("unknown keyword `{other}`")));
            }
        }
    }
    Ok((finish_block(b, saw_initial)?, None))
}

fn finish_block(
    b: Option<TsBuilder>,
    saw_initial: bool,
) -> Result<Option<TransitionSystem>, ParseError> {
    match b {
        None => Ok(None),
        Some(b) => {
            if !saw_initial {
                return Err(ParseError::Invalid {
                    line: 0,
                    source: TsError::MissingInitial,
                });
            }
            b.build()
                .map(Some)
                .map_err(|source| ParseError::Invalid { line: 0, source })
        }
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(ix) => line[..ix].trim(),
        None => line.trim(),
    }
}

fn expect_end<'a>(lineno: usize, mut parts: impl Iterator<Item = &'a str>) -> Result<(), ParseError> {
    match parts.next() {
        None => Ok(()),
        Some(extra) => Err(syntax(lineno + 1, format!("trailing token `{extra}`"))),
    }
}

/// Serializes a TS. Arcs are emitted sorted by `(src, event, dst)` names so
/// equal TSs print identically; arc-less events and isolated states get
/// explicit declaration lines.
pub fn serialize_ts(ts: &TransitionSystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ts {}", ts.name());
    let _ = writeln!(out, "initial {}", ts.state_name(ts.initial()));
    let mut arcs: Vec<(&str, &str, &str)> = ts
        .arcs()
        .map(|(s, e, d)| (ts.state_name(s), ts.event_name(e), ts.state_name(d)))
        .collect();
    arcs.sort_unstable();
    let mut states_on_arcs: Vec<&str> = vec![ts.state_name(ts.initial())];
    let mut events_on_arcs: Vec<&str> = Vec::new();
    for &(s, e, d) in &arcs {
        states_on_arcs.push(s);
        states_on_arcs.push(d);
        events_on_arcs.push(e);
    }
    let mut isolated: Vec<&str> = ts
        .state_names()
        .iter()
        .map(String::as_str)
        .filter(|s| !states_on_arcs.contains(s))
        .collect();
    isolated.sort_unstable();
    for s in isolated {
        let _ = writeln!(out, "state {s}");
    }
    let mut unused: Vec<&str> = ts
        .event_names()
        .iter()
        .map(String::as_str)
        .filter(|e| !events_on_arcs.contains(e))
        .collect();
    unused.sort_unstable();
    for e in unused {
        let _ = writeln!(out, "event {e}");
    }
    for (s, e, d) in arcs {
        let _ = writeln!(out, "arc {s} {e} {d}");
    }
    out
}

/// Parses a union file: TS blocks separated by `---` lines.
pub fn parse_union(input: &str) -> Result<TsUnion, ParseError> {
    let mut components = Vec::new();
    let mut remaining = input;
    loop {
        let lines = remaining.lines().enumerate();
        let (ts, sep) = parse_ts_block(lines)?;
        if let Some(ts) = ts {
            components.push(ts);
        }
        match sep {
            None => break,
            Some((lineno, _)) => {
                // Skip past the separator line.
                let mut offset = 0;
                for (i, line) in remaining.lines().enumerate() {
                    offset += line.len() + 1;
                    if i == lineno {
                        break;
                    }
                }
                remaining = if offset >= remaining.len() {
                    ""
                } else {
                    &remaining[offset..]
                };
            }
        }
    }
    TsUnion::new(components).map_err(|e| syntax(0, e.to_string()))
}

pub fn serialize_union(union: &TsUnion) -> String {
    union
        .components()
        .iter()
        .map(serialize_ts)
        .collect::<Vec<_>>()
        .join("---\n")
}
