//! The six-position reduction scheme from cubic monotone one-in-three
//! satisfiability to key-event inhibition, together with the constructive
//! region witnesses that certify the forward direction.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::hardness::cnf::CnfInstance;
use crate::interaction::{Interaction, NetType};
use crate::region::{Region, RegionViolation, NOP_FIRST_PRIORITY};
use crate::ts::{join, JoinError, TransitionSystem, TsBuilder, TsUnion, UnionError};

/// Switch position selecting one of the six reductions. Each position
/// manages a whole collection of net types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Switch {
    Sigma1,
    Sigma2,
    Sigma3,
    Sigma4,
    Sigma5,
    Sigma6,
}

pub const ALL_SWITCHES: [Switch; 6] = [
    Switch::Sigma1,
    Switch::Sigma2,
    Switch::Sigma3,
    Switch::Sigma4,
    Switch::Sigma5,
    Switch::Sigma6,
];

impl Switch {
    pub fn name(self) -> &'static str {
        match self {
            Switch::Sigma1 => "sigma1",
            Switch::Sigma2 => "sigma2",
            Switch::Sigma3 => "sigma3",
            Switch::Sigma4 => "sigma4",
            Switch::Sigma5 => "sigma5",
            Switch::Sigma6 => "sigma6",
        }
    }

    /// The net types this switch position manages.
    pub fn managed_types(self) -> Vec<NetType> {
        use Interaction::*;
        let base: NetType;
        let optional: NetType;
        match self {
            Switch::Sigma1 => {
                base = NetType::new([Nop, Inp, Out]);
                optional = NetType::new([Used, Free]);
            }
            Switch::Sigma2 => {
                base = NetType::new([Nop, Inp, Set]);
                optional = NetType::new([Out, Res, Used, Free]);
            }
            Switch::Sigma3 => {
                base = NetType::new([Nop, Inp, Res, Swap]);
                optional = NetType::new([Used, Free]);
            }
            Switch::Sigma4 => {
                base = NetType::new([Nop, Inp, Set, Swap]);
                optional = NetType::new([Out, Res, Used, Free]);
            }
            Switch::Sigma5 => {
                base = NetType::new([Nop, Set, Swap, Free]);
                optional = NetType::EMPTY;
            }
            Switch::Sigma6 => {
                base = NetType::new([Nop, Set, Swap, Used]);
                optional = NetType::new([Res, Free]);
            }
        }
        let opts: Vec<Interaction> = optional.iter().collect();
        let mut out = Vec::new();
        for mask in 0u8..1 << opts.len() {
            let mut t = base;
            for (i, &o) in opts.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    t = t.with(o);
                }
            }
            out.push(t);
        }
        out.sort();
        out.dedup();
        out
    }

    /// The smallest managed type; used to pick the joining construction,
    /// which is uniform across the position.
    pub fn representative_type(self) -> NetType {
        self.managed_types()[0]
    }

    pub fn manages(self, tau: NetType) -> bool {
        self.managed_types().contains(&tau)
    }

    /// Sign-table entries for the constructed witnesses: the key event, the
    /// model variables, the interface `v` events, the model helpers, and the
    /// type used for `n_0` in the key freezer.
    fn ops(self) -> SwitchOps {
        use Interaction::*;
        match self {
            Switch::Sigma1 => SwitchOps {
                op_k: Inp,
                op_m: Inp,
                op_v: Out,
                op_x: Out,
                op_q: None,
                op_n: Some(Out),
            },
            Switch::Sigma2 => SwitchOps {
                op_k: Inp,
                op_m: Inp,
                op_v: Set,
                op_x: Set,
                op_q: None,
                op_n: Some(Set),
            },
            Switch::Sigma3 => SwitchOps {
                op_k: Inp,
                op_m: Swap,
                op_v: Swap,
                op_x: Res,
                op_q: None,
                op_n: Some(Swap),
            },
            Switch::Sigma4 => SwitchOps {
                op_k: Inp,
                op_m: Swap,
                op_v: Swap,
                op_x: Set,
                op_q: None,
                op_n: Some(Set),
            },
            Switch::Sigma5 => SwitchOps {
                op_k: Free,
                op_m: Swap,
                op_v: Swap,
                op_x: Set,
                op_q: Some(Swap),
                op_n: None,
            },
            Switch::Sigma6 => SwitchOps {
                op_k: Used,
                op_m: Swap,
                op_v: Swap,
                op_x: Set,
                op_q: None,
                op_n: None,
            },
        }
    }

    fn uses_reverse_join(self) -> bool {
        matches!(self, Switch::Sigma5 | Switch::Sigma6)
    }
}

#[derive(Debug, Clone, Copy)]
struct SwitchOps {
    op_k: Interaction,
    op_m: Interaction,
    op_v: Interaction,
    op_x: Interaction,
    op_q: Option<Interaction>,
    op_n: Option<Interaction>,
}

impl FromStr for Switch {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_SWITCHES
            .iter()
            .copied()
            .find(|sw| sw.name() == s)
            .ok_or_else(|| format!("unknown switch `{s}` (expected sigma1..sigma6)"))
    }
}

/// What a union component contributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetKind {
    Head,
    Duplicator,
    KeyFreezer,
    Generator,
    Translator,
    TranslatorFreezer,
}

#[derive(Debug, Clone)]
pub struct GadgetInfo {
    pub kind: GadgetKind,
    pub name: String,
    pub states: usize,
}

#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub switch: Switch,
    pub union: TsUnion,
    pub joined: TransitionSystem,
    pub key_event: String,
    pub key_state: String,
    pub manifest: Vec<GadgetInfo>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ReductionError {
    #[error(transparent)]
    Union(#[from] UnionError),
    #[error(transparent)]
    Join(#[from] JoinError),
    #[error("`{0}` is not a one-in-three model of the instance")]
    NotAModel(String),
    #[error("type {{{0}}} is not managed by {1}")]
    TypeNotManaged(NetType, &'static str),
    #[error("event `{event}` gets `{key_sig}` from the key region but `{ind_sig}` from the indicator")]
    InterfaceMismatch {
        event: String,
        key_sig: Interaction,
        ind_sig: Interaction,
    },
    #[error("witness invalid on `{scope}`: {violation}")]
    InvalidWitness {
        scope: String,
        violation: RegionViolation,
    },
    #[error("no interaction of {{{tau}}} fits event `{event}` under the constructed support")]
    NoSignatureFits { tau: NetType, event: String },
}

// ---------------------------------------------------------------------------
// Naming
// ---------------------------------------------------------------------------

/// Deterministic event naming that never collides with the instance's
/// variable names: generated names get `_`-prefixed until fresh.
struct EventNames<'a> {
    cnf: Option<&'a CnfInstance>,
    blanks: usize,
}

impl<'a> EventNames<'a> {
    fn new(cnf: &'a CnfInstance) -> EventNames<'a> {
        EventNames {
            cnf: Some(cnf),
            blanks: 0,
        }
    }

    /// Naming context without variables, for the instance-independent key
    /// union pieces.
    fn plain_context() -> EventNames<'static> {
        EventNames {
            cnf: None,
            blanks: 0,
        }
    }

    fn variables(&self) -> &[String] {
        self.cnf.map(|c| c.variables()).unwrap_or(&[])
    }

    fn gen(&self, base: String) -> String {
        let mut name = base;
        while self.variables().iter().any(|v| *v == name) {
            name.insert(0, '_');
        }
        name
    }

    fn k(&self) -> String {
        self.gen("k".into())
    }

    fn indexed(&self, prefix: &str, j: usize) -> String {
        self.gen(format!("{prefix}_{j}"))
    }

    fn plain(&self, name: &str) -> String {
        self.gen(name.into())
    }

    fn variable(&self, v: usize) -> String {
        self.cnf.expect("variable naming needs an instance").variable_name(v).to_string()
    }

    /// Helper event of variable `v`.
    fn helper(&self, v: usize) -> String {
        self.gen(format!("x_{v}"))
    }

    fn blank(&mut self) -> String {
        let name = self.gen(format!("__blank{}", self.blanks));
        self.blanks += 1;
        name
    }
}

fn fb(b: &mut TsBuilder, s: &str, e: &str, d: &str) {
    b.arc(s, e, d);
    b.arc(d, e, s);
}

// ---------------------------------------------------------------------------
// Gadget builders
// ---------------------------------------------------------------------------

/// The generator template: four states, the key event on both columns and
/// the two parameter events on the rows. Regions of it tie the parameter
/// events' signatures to the key's.
fn generator_gadget(tag: &str, j: usize, k: &str, a: &str, b_ev: &str) -> TransitionSystem {
    let st = |i: usize| format!("g^{{{tag}}}_{j}_{i}");
    let mut b = TsBuilder::new(&format!("G^{{{tag}}}_{j}"));
    b.initial(&st(0));
    b.arc(&st(0), a, &st(1));
    b.arc(&st(0), k, &st(2));
    b.arc(&st(2), b_ev, &st(3));
    b.arc(&st(1), k, &st(3));
    b.build().expect("generator gadget is valid")
}

/// The head for the first four switch positions: `6m` seven-state rows
/// chained by `r` events, with `c` events synchronizing the row ends. Rows
/// below `3m` carry the `z/v/q` events, the rest the `w/p/y` events.
fn head_gadget(names: &EventNames<'_>, m: usize) -> TransitionSystem {
    let st = |j: usize, i: usize| format!("h_{j}_{i}");
    let k = names.k();
    let mut b = TsBuilder::new("H");
    b.initial(&st(0, 0));
    for j in 0..6 * m {
        let (e1, e2, e3) = if j < 3 * m {
            (
                names.indexed("z", j),
                names.indexed("v", j),
                names.indexed("q", j),
            )
        } else {
            (
                names.indexed("w", j - 3 * m),
                names.indexed("p", j - 3 * m),
                names.indexed("y", j - 3 * m),
            )
        };
        let (z_or_w, v_or_p, q_or_y) = (&e1, &e2, &e3);
        b.arc(&st(j, 0), &k, &st(j, 1));
        b.arc(&st(j, 1), z_or_w, &st(j, 2));
        b.arc(&st(j, 2), v_or_p, &st(j, 3));
        b.arc(&st(j, 3), &k, &st(j, 4));
        b.arc(&st(j, 4), q_or_y, &st(j, 5));
        b.arc(&st(j, 5), z_or_w, &st(j, 6));
    }
    for j in 0..6 * m - 1 {
        b.arc(&st(j, 6), &names.indexed("r", j), &st(j + 1, 0));
        b.arc(&st(j, 6), &names.indexed("c", j), &st(j + 1, 6));
    }
    b.build().expect("head is valid")
}

/// Key freezer piece with the `n_0`/`z_0` bridge.
fn f0_gadget(names: &EventNames<'_>) -> TransitionSystem {
    let st = |i: usize| format!("f_0_{i}");
    let mut b = TsBuilder::new("F_0");
    b.initial(&st(0));
    b.arc(&st(0), &names.k(), &st(1));
    b.arc(&st(1), &names.plain("n_0"), &st(2));
    b.arc(&st(2), &names.indexed("z", 0), &st(3));
    b.arc(&st(3), &names.k(), &st(4));
    b.build().expect("F_0 is valid")
}

fn f1_gadget(names: &EventNames<'_>) -> TransitionSystem {
    let st = |i: usize| format!("f_1_{i}");
    let mut b = TsBuilder::new("F_1");
    b.initial(&st(0));
    b.arc(&st(0), &names.indexed("q", 0), &st(1));
    b.arc(&st(1), &names.k(), &st(2));
    b.build().expect("F_1 is valid")
}

fn f2_gadget(names: &mut EventNames<'_>) -> TransitionSystem {
    let st = |i: usize| format!("f_2_{i}");
    let blank = names.blank();
    let mut b = TsBuilder::new("F_2");
    b.initial(&st(0));
    b.arc(&st(0), &names.plain("n_0"), &st(1));
    b.arc(&st(0), &names.k(), &st(2));
    b.arc(&st(2), &blank, &st(3));
    b.arc(&st(3), &names.k(), &st(1));
    b.build().expect("F_2 is valid")
}

/// One translator TS for the first four switch positions: the key prefix,
/// the two materializer arcs, the forward variable path and the backward
/// helper path.
fn translator_gadget(
    names: &EventNames<'_>,
    sw: Switch,
    i: usize,
    alpha: usize,
) -> TransitionSystem {
    let st = |idx: usize| format!("t_{i}_{alpha}_{idx}");
    let clause = names.cnf.expect("translators need an instance").clause(i);
    let var = |c: usize| names.variable(clause[(alpha + c) % 3]);
    let helper = |c: usize| names.helper(clause[(alpha + c) % 3]);
    let v = names.indexed("v", 3 * i + alpha);
    let w = names.indexed("w", 3 * i + alpha);
    let (xi, theta) = match sw {
        Switch::Sigma3 | Switch::Sigma6 => (&w, &v),
        _ => (&v, &w),
    };
    let mut b = TsBuilder::new(&format!("T_{i}_{alpha}"));
    b.initial(&st(0));
    b.arc(&st(0), &names.k(), &st(1));
    b.arc(&st(1), xi, &st(2));
    b.arc(&st(1), theta, &st(5));
    b.arc(&st(2), &var(0), &st(3));
    b.arc(&st(3), &var(1), &st(4));
    b.arc(&st(4), &var(2), &st(5));
    b.arc(&st(3), &helper(0), &st(2));
    b.arc(&st(4), &helper(1), &st(3));
    b.arc(&st(5), &helper(2), &st(4));
    b.build().expect("translator is valid")
}

/// One translator TS for the last two switch positions: the same variable
/// and helper structure on forward-backward arcs, interleaved with the
/// position's private `a` events, rooted at a uniquely-looped entry state.
fn translator_prime_gadget(
    names: &mut EventNames<'_>,
    sw: Switch,
    i: usize,
    alpha: usize,
) -> TransitionSystem {
    let st = |idx: &str| format!("t'_{i}_{alpha}_{idx}");
    let blank = names.blank();
    let clause = names.cnf.expect("translators need an instance").clause(i);
    let var = |c: usize| names.variable(clause[(alpha + c) % 3]);
    let helper = |c: usize| names.helper(clause[(alpha + c) % 3]);
    let acc = |t: usize| names.indexed("a", 18 * i + 6 * alpha + t);
    let v = names.indexed("v", 3 * i + alpha);
    let w = names.indexed("w", 3 * i + alpha);
    let (xi, theta) = match sw {
        Switch::Sigma3 | Switch::Sigma6 => (&w, &v),
        _ => (&v, &w),
    };
    let s = |idx: usize| st(&idx.to_string());
    let mut b = TsBuilder::new(&format!("T'_{i}_{alpha}"));
    b.initial(&st("s"));
    fb(&mut b, &st("s"), &blank, &s(0));
    fb(&mut b, &s(0), &names.k(), &s(1));
    fb(&mut b, &s(1), xi, &s(2));
    fb(&mut b, &s(1), theta, &s(11));
    fb(&mut b, &s(2), &acc(0), &s(3));
    fb(&mut b, &s(3), &var(0), &s(4));
    fb(&mut b, &s(4), &acc(0), &s(5));
    fb(&mut b, &s(5), &acc(1), &s(6));
    fb(&mut b, &s(6), &var(1), &s(7));
    fb(&mut b, &s(7), &acc(1), &s(8));
    fb(&mut b, &s(8), &acc(2), &s(9));
    fb(&mut b, &s(9), &var(2), &s(10));
    fb(&mut b, &s(10), &acc(2), &s(11));
    fb(&mut b, &s(2), &acc(3), &s(12));
    fb(&mut b, &s(12), &helper(0), &s(13));
    b.arc(&s(14), &helper(0), &s(13));
    fb(&mut b, &s(14), &acc(3), &s(5));
    fb(&mut b, &s(5), &acc(4), &s(15));
    fb(&mut b, &s(15), &helper(1), &s(16));
    b.arc(&s(17), &helper(1), &s(16));
    fb(&mut b, &s(17), &acc(4), &s(8));
    fb(&mut b, &s(8), &acc(5), &s(18));
    fb(&mut b, &s(18), &helper(2), &s(19));
    b.arc(&s(20), &helper(2), &s(19));
    fb(&mut b, &s(20), &acc(5), &s(11));
    b.build().expect("translator' is valid")
}

/// Head piece for the last two switch positions.
fn head_prime_gadget(names: &mut EventNames<'_>, j: usize) -> TransitionSystem {
    let st = |i: usize| format!("h'_{j}_{i}");
    let blank = names.blank();
    let mut b = TsBuilder::new(&format!("H'_{j}"));
    b.initial(&st(5));
    fb(&mut b, &st(0), &names.k(), &st(1));
    fb(&mut b, &st(1), &names.plain("m"), &st(2));
    fb(&mut b, &st(2), &names.indexed("v", j), &st(3));
    fb(&mut b, &st(3), &names.k(), &st(4));
    fb(&mut b, &st(4), &blank, &st(5));
    b.build().expect("H' is valid")
}

/// Duplicator piece providing one `a` event.
fn duplicator_gadget(names: &mut EventNames<'_>, j: usize) -> TransitionSystem {
    let st = |i: usize| format!("d_{j}_{i}");
    let blank = names.blank();
    let z = names.plain("z");
    let p = names.indexed("p", j);
    let mut b = TsBuilder::new(&format!("D_{j}"));
    b.initial(&st(8));
    fb(&mut b, &st(0), &names.k(), &st(1));
    fb(&mut b, &st(1), &p, &st(2));
    // The middle synchronizer: a z pair plus one backward z arc; the only
    // arrangement that keeps the gadget deterministic and rooted at its
    // loop-pair entry state.
    fb(&mut b, &st(2), &z, &st(3));
    b.arc(&st(4), &z, &st(3));
    fb(&mut b, &st(4), &p, &st(5));
    fb(&mut b, &st(5), &names.indexed("a", j), &st(6));
    fb(&mut b, &st(6), &names.k(), &st(7));
    fb(&mut b, &st(7), &blank, &st(8));
    b.build().expect("D is valid")
}

/// Generator piece providing one `w` event.
fn w_generator_gadget(names: &mut EventNames<'_>, j: usize) -> TransitionSystem {
    let st = |i: usize| format!("g_{j}_{i}");
    let blank = names.blank();
    let z = names.plain("z");
    let y = names.indexed("y", j);
    let mut b = TsBuilder::new(&format!("G_{j}"));
    b.initial(&st(8));
    fb(&mut b, &st(0), &names.k(), &st(1));
    fb(&mut b, &st(1), &y, &st(2));
    fb(&mut b, &st(2), &z, &st(3));
    b.arc(&st(4), &z, &st(3));
    fb(&mut b, &st(4), &y, &st(5));
    fb(&mut b, &st(5), &names.indexed("w", j), &st(6));
    fb(&mut b, &st(6), &names.k(), &st(7));
    fb(&mut b, &st(7), &blank, &st(8));
    b.build().expect("G is valid")
}

fn fp0_gadget(names: &mut EventNames<'_>) -> TransitionSystem {
    let st = |i: usize| format!("f'_0_{i}");
    let blank = names.blank();
    let m_ev = names.plain("m");
    let mut b = TsBuilder::new("F'_0");
    b.initial(&st(8));
    fb(&mut b, &st(0), &names.k(), &st(1));
    fb(&mut b, &st(1), &m_ev, &st(2));
    fb(&mut b, &st(2), &names.indexed("q", 0), &st(3));
    fb(&mut b, &st(3), &names.k(), &st(4));
    fb(&mut b, &st(4), &m_ev, &st(5));
    fb(&mut b, &st(5), &names.indexed("q", 1), &st(6));
    fb(&mut b, &st(6), &names.k(), &st(7));
    fb(&mut b, &st(7), &blank, &st(8));
    b.build().expect("F'_0 is valid")
}

fn fp1_gadget(names: &mut EventNames<'_>) -> TransitionSystem {
    let st = |i: usize| format!("f'_1_{i}");
    let blank = names.blank();
    let mut b = TsBuilder::new("F'_1");
    b.initial(&st(5));
    fb(&mut b, &st(0), &names.k(), &st(1));
    fb(&mut b, &st(1), &names.indexed("q", 2), &st(2));
    fb(&mut b, &st(2), &names.indexed("q", 3), &st(3));
    fb(&mut b, &st(3), &names.k(), &st(4));
    fb(&mut b, &st(4), &blank, &st(5));
    b.build().expect("F'_1 is valid")
}

fn fp2_gadget(names: &mut EventNames<'_>) -> TransitionSystem {
    let st = |i: usize| format!("f'_2_{i}");
    let blank = names.blank();
    let z = names.plain("z");
    let mut b = TsBuilder::new("F'_2");
    b.initial(&st(9));
    fb(&mut b, &st(0), &names.k(), &st(1));
    fb(&mut b, &st(1), &names.indexed("q", 2), &st(2));
    fb(&mut b, &st(2), &names.indexed("q", 0), &st(3));
    fb(&mut b, &st(3), &z, &st(4));
    fb(&mut b, &st(4), &names.indexed("q", 1), &st(5));
    fb(&mut b, &st(5), &z, &st(6));
    fb(&mut b, &st(6), &names.indexed("q", 3), &st(7));
    fb(&mut b, &st(7), &names.k(), &st(8));
    fb(&mut b, &st(8), &blank, &st(9));
    b.build().expect("F'_2 is valid")
}

/// Freezer piece for the sixth position, one per variable.
fn b_gadget(names: &mut EventNames<'_>, j: usize) -> TransitionSystem {
    let st = |i: usize| format!("b_{j}_{i}");
    let blank = names.blank();
    let mut b = TsBuilder::new(&format!("B_{j}"));
    b.initial(&st(4));
    fb(&mut b, &st(0), &names.k(), &st(1));
    fb(&mut b, &st(1), &names.helper(j), &st(2));
    fb(&mut b, &st(2), &names.k(), &st(3));
    fb(&mut b, &st(3), &blank, &st(4));
    b.build().expect("B is valid")
}

/// Freezer piece for the fifth position, one per variable.
fn b_prime_gadget(names: &mut EventNames<'_>, j: usize) -> TransitionSystem {
    let st = |i: usize| format!("b'_{j}_{i}");
    let blank = names.blank();
    let mut b = TsBuilder::new(&format!("B'_{j}"));
    b.initial(&st(6));
    fb(&mut b, &st(0), &names.k(), &st(1));
    fb(&mut b, &st(1), &names.indexed("q", 2), &st(2));
    fb(&mut b, &st(2), &names.helper(j), &st(3));
    fb(&mut b, &st(3), &names.indexed("q", 3), &st(4));
    fb(&mut b, &st(4), &names.k(), &st(5));
    fb(&mut b, &st(5), &blank, &st(6));
    b.build().expect("B' is valid")
}

// ---------------------------------------------------------------------------
// Union assembly
// ---------------------------------------------------------------------------

/// Builds the full reduction: the key union followed by the translator
/// union, joined into a single TS with the construction the managed types
/// admit.
pub fn build_reduction(cnf: &CnfInstance, sw: Switch) -> Result<ReductionOutput, ReductionError> {
    let m = cnf.n_clauses();
    let mut names = EventNames::new(cnf);
    let mut components: Vec<TransitionSystem> = Vec::new();
    let mut manifest: Vec<GadgetInfo> = Vec::new();
    let push = |ts: TransitionSystem, kind: GadgetKind, manifest: &mut Vec<GadgetInfo>,
                    components: &mut Vec<TransitionSystem>| {
        manifest.push(GadgetInfo {
            kind,
            name: ts.name().to_string(),
            states: ts.n_states(),
        });
        components.push(ts);
    };

    let key_event = names.k();
    let key_state: String;

    if !sw.uses_reverse_join() {
        key_state = "h_0_6".to_string();
        push(head_gadget(&names, m), GadgetKind::Head, &mut manifest, &mut components);
        for j in 0..6 * m - 1 {
            let c = names.indexed("c", j);
            push(
                generator_gadget("c,c", j, &key_event, &c, &c),
                GadgetKind::Duplicator,
                &mut manifest,
                &mut components,
            );
        }
        push(f0_gadget(&names), GadgetKind::KeyFreezer, &mut manifest, &mut components);
        match sw {
            Switch::Sigma1 | Switch::Sigma2 => {
                push(f1_gadget(&names), GadgetKind::KeyFreezer, &mut manifest, &mut components);
            }
            Switch::Sigma3 => {
                push(f2_gadget(&mut names), GadgetKind::KeyFreezer, &mut manifest, &mut components);
            }
            Switch::Sigma4 => {
                let blank = names.blank();
                push(
                    generator_gadget("n,_", 0, &key_event, &names.plain("n_0"), &blank),
                    GadgetKind::KeyFreezer,
                    &mut manifest,
                    &mut components,
                );
            }
            _ => unreachable!(),
        }
        if matches!(sw, Switch::Sigma3 | Switch::Sigma4) {
            for j in 0..3 * m {
                let blank = names.blank();
                push(
                    generator_gadget("_,q", j, &key_event, &blank, &names.indexed("q", j)),
                    GadgetKind::KeyFreezer,
                    &mut manifest,
                    &mut components,
                );
            }
            for j in 0..3 * m {
                let blank = names.blank();
                push(
                    generator_gadget("_,y", j, &key_event, &blank, &names.indexed("y", j)),
                    GadgetKind::KeyFreezer,
                    &mut manifest,
                    &mut components,
                );
            }
        }
        for i in 0..m {
            for alpha in 0..3 {
                push(
                    translator_gadget(&names, sw, i, alpha),
                    GadgetKind::Translator,
                    &mut manifest,
                    &mut components,
                );
            }
        }
        match sw {
            Switch::Sigma3 => {
                for j in 0..m {
                    let blank = names.blank();
                    push(
                        generator_gadget("_,x", j, &key_event, &blank, &names.helper(j)),
                        GadgetKind::TranslatorFreezer,
                        &mut manifest,
                        &mut components,
                    );
                }
            }
            Switch::Sigma4 => {
                for j in 0..m {
                    let blank = names.blank();
                    push(
                        generator_gadget("x,_", j, &key_event, &names.helper(j), &blank),
                        GadgetKind::TranslatorFreezer,
                        &mut manifest,
                        &mut components,
                    );
                }
            }
            _ => {}
        }
    } else {
        key_state = "h'_0_2".to_string();
        for j in 0..3 * m {
            push(
                head_prime_gadget(&mut names, j),
                GadgetKind::Head,
                &mut manifest,
                &mut components,
            );
        }
        for j in 0..18 * m {
            push(
                duplicator_gadget(&mut names, j),
                GadgetKind::Duplicator,
                &mut manifest,
                &mut components,
            );
        }
        for j in 0..3 * m {
            push(
                w_generator_gadget(&mut names, j),
                GadgetKind::Generator,
                &mut manifest,
                &mut components,
            );
        }
        push(fp0_gadget(&mut names), GadgetKind::KeyFreezer, &mut manifest, &mut components);
        push(fp1_gadget(&mut names), GadgetKind::KeyFreezer, &mut manifest, &mut components);
        push(fp2_gadget(&mut names), GadgetKind::KeyFreezer, &mut manifest, &mut components);
        for i in 0..m {
            for alpha in 0..3 {
                push(
                    translator_prime_gadget(&mut names, sw, i, alpha),
                    GadgetKind::Translator,
                    &mut manifest,
                    &mut components,
                );
            }
        }
        for j in 0..m {
            let gadget = if sw == Switch::Sigma5 {
                b_prime_gadget(&mut names, j)
            } else {
                b_gadget(&mut names, j)
            };
            push(gadget, GadgetKind::TranslatorFreezer, &mut manifest, &mut components);
        }
    }

    let union = TsUnion::new(components)?;
    let joined = join(&union, sw.representative_type())?;
    Ok(ReductionOutput {
        switch: sw,
        union,
        joined,
        key_event,
        key_state,
    manifest,
    })
}

// ---------------------------------------------------------------------------
// Witness construction
// ---------------------------------------------------------------------------

/// A region over named states and events, used while stitching fragments of
/// different union components together.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NamedRegion {
    pub sup: BTreeMap<String, bool>,
    pub sig: BTreeMap<String, Interaction>,
}

impl NamedRegion {
    /// Projects onto one TS, completing unnamed events by the first fitting
    /// interaction of `tau` (nop first). States must all be covered.
    pub fn project(
        &self,
        ts: &TransitionSystem,
        tau: NetType,
    ) -> Result<Region, ReductionError> {
        let sup: Vec<bool> = ts
            .states()
            .map(|s| *self.sup.get(ts.state_name(s)).unwrap_or(&false))
            .collect();
        let mut sig: Vec<Interaction> = Vec::with_capacity(ts.n_events());
        for e in ts.events() {
            let name = ts.event_name(e);
            if let Some(&i) = self.sig.get(name) {
                sig.push(i);
            } else {
                let cand = crate::region::signature_candidates(ts, tau, &sup, e);
                let pick = NOP_FIRST_PRIORITY
                    .into_iter()
                    .find(|i| cand.contains(*i))
                    .ok_or_else(|| ReductionError::NoSignatureFits {
                        tau,
                        event: name.to_string(),
                    })?;
                sig.push(pick);
            }
        }
        Ok(Region::new(sup, sig))
    }
}

/// Validates a named region against every component of a union.
pub fn validate_union_region(
    union: &TsUnion,
    tau: NetType,
    region: &NamedRegion,
) -> Result<(), ReductionError> {
    for ts in union.components() {
        let projected = region.project(ts, tau)?;
        crate::region::validate_region(ts, tau, &projected).map_err(|violation| {
            ReductionError::InvalidWitness {
                scope: ts.name().to_string(),
                violation,
            }
        })?;
    }
    Ok(())
}

fn check_model(cnf: &CnfInstance, model: &[usize]) -> Result<(), ReductionError> {
    if !cnf.is_one_in_three_model(model) {
        let names: Vec<&str> = model.iter().map(|&v| cnf.variable_name(v)).collect();
        return Err(ReductionError::NotAModel(names.join(",")));
    }
    Ok(())
}

fn require_managed(sw: Switch, tau: NetType) -> Result<(), ReductionError> {
    if !sw.manages(tau) {
        return Err(ReductionError::TypeNotManaged(tau, sw.name()));
    }
    Ok(())
}

/// The indicator region of the translator union for a given model: supports
/// from the per-clause state sets selected by the model, signatures from the
/// switch's operation table.
pub fn construct_indicator_region(
    cnf: &CnfInstance,
    sw: Switch,
    tau: NetType,
    model: &[usize],
) -> Result<NamedRegion, ReductionError> {
    require_managed(sw, tau)?;
    check_model(cnf, model)?;
    let names = EventNames::new(cnf);
    let ops = sw.ops();
    let m = cnf.n_clauses();
    let mut region = NamedRegion::default();

    for i in 0..m {
        let clause = cnf.clause(i);
        let alpha = (0..3)
            .find(|&j| model.contains(&clause[j]))
            .expect("checked model hits every clause");
        let beta = (alpha + 1) % 3;
        let gamma = (alpha + 2) % 3;
        let mut include = |state: String| {
            region.sup.insert(state, true);
        };
        match sw {
            Switch::Sigma1 | Switch::Sigma2 | Switch::Sigma4 => {
                for c in 0..3 {
                    include(format!("t_{i}_{c}_0"));
                }
                include(format!("t_{i}_{alpha}_2"));
                for idx in 2..=4 {
                    include(format!("t_{i}_{beta}_{idx}"));
                }
                for idx in 2..=3 {
                    include(format!("t_{i}_{gamma}_{idx}"));
                }
            }
            Switch::Sigma3 => {
                for c in 0..3 {
                    include(format!("t_{i}_{c}_0"));
                }
                for idx in 3..=5 {
                    include(format!("t_{i}_{alpha}_{idx}"));
                }
                include(format!("t_{i}_{beta}_5"));
                for idx in 4..=5 {
                    include(format!("t_{i}_{gamma}_{idx}"));
                }
            }
            Switch::Sigma5 | Switch::Sigma6 => {
                if sw == Switch::Sigma6 {
                    for c in 0..3 {
                        include(format!("t'_{i}_{c}_0"));
                        include(format!("t'_{i}_{c}_1"));
                    }
                }
                for idx in [2, 3, 12, 13] {
                    include(format!("t'_{i}_{alpha}_{idx}"));
                }
                for idx in (2..=9).chain(12..=19) {
                    include(format!("t'_{i}_{beta}_{idx}"));
                }
                for idx in (2..=6).chain(12..=16) {
                    include(format!("t'_{i}_{gamma}_{idx}"));
                }
            }
        }
    }
    // Freezer support.
    match sw {
        Switch::Sigma3 => {
            for j in 0..m {
                region.sup.insert(format!("g^{{_,x}}_{j}_0"), true);
                region.sup.insert(format!("g^{{_,x}}_{j}_1"), true);
            }
        }
        Switch::Sigma4 => {
            for j in 0..m {
                region.sup.insert(format!("g^{{x,_}}_{j}_0"), true);
                region.sup.insert(format!("g^{{x,_}}_{j}_1"), true);
            }
        }
        Switch::Sigma5 => {
            for j in 0..m {
                region.sup.insert(format!("b'_{j}_2"), true);
                region.sup.insert(format!("b'_{j}_3"), true);
            }
        }
        Switch::Sigma6 => {
            for j in 0..m {
                for idx in 0..=4 {
                    region.sup.insert(format!("b_{j}_{idx}"), true);
                }
            }
        }
        _ => {}
    }
    // Signatures.
    region.sig.insert(names.k(), ops.op_k);
    for j in 0..3 * m {
        region.sig.insert(names.indexed("v", j), ops.op_v);
    }
    for &v in model {
        region.sig.insert(names.variable(v), ops.op_m);
        region.sig.insert(names.helper(v), ops.op_x);
    }
    if let Some(op_q) = ops.op_q {
        region.sig.insert(names.indexed("q", 2), op_q);
        region.sig.insert(names.indexed("q", 3), op_q);
    }
    Ok(region)
}

/// The key region of the key union: supports from the fixed per-gadget state
/// sets, signature table entries for the key, interface and freezer events.
pub fn construct_key_region(
    m: usize,
    sw: Switch,
    tau: NetType,
) -> Result<NamedRegion, ReductionError> {
    let names = EventNames::plain_context();
    construct_key_region_named(&names, m, sw, tau)
}

fn construct_key_region_named(
    names: &EventNames<'_>,
    m: usize,
    sw: Switch,
    tau: NetType,
) -> Result<NamedRegion, ReductionError> {
    require_managed(sw, tau)?;
    let ops = sw.ops();
    let mut region = NamedRegion::default();
    if !sw.uses_reverse_join() {
        for j in 0..6 * m {
            region.sup.insert(format!("h_{j}_0"), true);
            region.sup.insert(format!("h_{j}_3"), true);
        }
        for j in 0..6 * m - 1 {
            region.sup.insert(format!("g^{{c,c}}_{j}_0"), true);
            region.sup.insert(format!("g^{{c,c}}_{j}_1"), true);
        }
        for j in 0..3 * m {
            region.sup.insert(format!("g^{{_,q}}_{j}_0"), true);
            region.sup.insert(format!("g^{{_,q}}_{j}_1"), true);
            region.sup.insert(format!("g^{{_,y}}_{j}_0"), true);
            region.sup.insert(format!("g^{{_,y}}_{j}_1"), true);
        }
        for state in [
            "g^{n,_}_0_0",
            "g^{n,_}_0_1",
            "f_0_0",
            "f_0_2",
            "f_0_3",
            "f_1_0",
            "f_1_1",
            "f_2_0",
            "f_2_3",
        ] {
            region.sup.insert(state.to_string(), true);
        }
        region.sig.insert(names.k(), Interaction::Inp);
        for j in 0..3 * m {
            region.sig.insert(names.indexed("v", j), ops.op_v);
        }
        // The `p` and `r` events step from the excluded row interior to the
        // included row anchors, so they take the entering interaction too.
        for j in 0..3 * m {
            region.sig.insert(names.indexed("p", j), ops.op_v);
        }
        for j in 0..6 * m - 1 {
            region.sig.insert(names.indexed("r", j), ops.op_v);
        }
        region
            .sig
            .insert(names.plain("n_0"), ops.op_n.expect("first four switches set op_n"));
    } else {
        let sigma5 = sw == Switch::Sigma5;
        let mut include = |state: String, in_sigma5_set: bool| {
            region.sup.insert(state, in_sigma5_set == sigma5);
        };
        for j in 0..3 * m {
            for i in 0..=5 {
                include(format!("h'_{j}_{i}"), matches!(i, 2 | 5));
            }
        }
        for j in 0..18 * m {
            for i in 0..=8 {
                include(format!("d_{j}_{i}"), matches!(i, 2 | 3 | 4 | 8));
            }
        }
        for j in 0..3 * m {
            for i in 0..=8 {
                include(format!("g_{j}_{i}"), matches!(i, 2 | 3 | 4 | 8));
            }
        }
        for i in 0..=8 {
            include(format!("f'_0_{i}"), matches!(i, 2 | 5 | 8));
        }
        for i in 0..=5 {
            include(format!("f'_1_{i}"), matches!(i, 2 | 5));
        }
        for i in 0..=9 {
            include(format!("f'_2_{i}"), matches!(i, 2 | 5 | 6 | 9));
        }
        region.sig.insert(names.k(), ops.op_k);
        region.sig.insert(names.plain("m"), Interaction::Swap);
        for j in 0..3 * m {
            region.sig.insert(names.indexed("v", j), Interaction::Swap);
            region.sig.insert(names.indexed("y", j), Interaction::Swap);
        }
        for j in 0..18 * m {
            region.sig.insert(names.indexed("p", j), Interaction::Swap);
        }
        for q in 0..4 {
            region.sig.insert(names.indexed("q", q), Interaction::Swap);
        }
        region.sig.insert(names.plain("z"), Interaction::Nop);
    }
    Ok(region)
}

/// Merges the key and indicator regions and extends the result over the
/// joined TS's connector states, yielding a region that inhibits the key
/// event at the key state.
pub fn combine_witness(
    cnf: &CnfInstance,
    reduction: &ReductionOutput,
    tau: NetType,
    model: &[usize],
) -> Result<Region, ReductionError> {
    let sw = reduction.switch;
    require_managed(sw, tau)?;
    check_model(cnf, model)?;
    let names = EventNames::new(cnf);
    let key = construct_key_region_named(&names, cnf.n_clauses(), sw, tau)?;
    let indicator = construct_indicator_region(cnf, sw, tau, model)?;
    let mut merged = key;
    for (state, v) in indicator.sup {
        merged.sup.insert(state, v);
    }
    for (event, i) in indicator.sig {
        if let Some(&prev) = merged.sig.get(&event) {
            if prev != i {
                return Err(ReductionError::InterfaceMismatch {
                    event,
                    key_sig: prev,
                    ind_sig: i,
                });
            }
        }
        merged.sig.insert(event, i);
    }
    // Connector completion: connectors take the key state's support; the
    // chain events stay neutral and each entry event bridges whatever
    // difference remains, using the switch's entering/exiting interactions.
    let key_sup = *merged.sup.get(&reduction.key_state).unwrap_or(&false);
    let (enter, exit) = if sw.uses_reverse_join() {
        (Interaction::Swap, Interaction::Swap)
    } else {
        (sw.ops().op_v, Interaction::Inp)
    };
    for (i, ts) in reduction.union.components().iter().enumerate() {
        merged.sup.insert(format!("__bot{i}"), key_sup);
        let init_sup = *merged
            .sup
            .get(ts.state_name(ts.initial()))
            .unwrap_or(&false);
        let odot = if init_sup == key_sup {
            Interaction::Nop
        } else if init_sup && !key_sup {
            enter
        } else {
            exit
        };
        merged.sig.insert(format!("__odot{i}"), odot);
        if i > 0 {
            merged.sig.insert(format!("__ominus{i}"), Interaction::Nop);
        }
    }
    let region = merged.project(&reduction.joined, tau)?;
    crate::region::validate_region(&reduction.joined, tau, &region).map_err(|violation| {
        ReductionError::InvalidWitness {
            scope: reduction.joined.name().to_string(),
            violation,
        }
    })?;
    Ok(region)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardness::cnf::{one_in_three_bruteforce, six_clause_instance, tiny_instance};

    #[test]
    fn managed_type_counts() {
        assert_eq!(Switch::Sigma1.managed_types().len(), 4);
        assert_eq!(Switch::Sigma2.managed_types().len(), 16);
        assert_eq!(Switch::Sigma3.managed_types().len(), 4);
        assert_eq!(Switch::Sigma4.managed_types().len(), 16);
        assert_eq!(Switch::Sigma5.managed_types().len(), 1);
        assert_eq!(Switch::Sigma6.managed_types().len(), 4);
    }

    #[test]
    fn sigma4_six_clause_census() {
        let cnf = six_clause_instance();
        let red = build_reduction(&cnf, Switch::Sigma4).unwrap();
        assert_eq!(red.union.len(), 98);
        assert!(red.joined.state_by_name("__bot97").is_some());
        assert!(red.joined.state_by_name("__bot98").is_none());
        assert!(red.joined.modesty().modest);
        let head_states: usize = red
            .manifest
            .iter()
            .filter(|g| g.kind == GadgetKind::Head)
            .map(|g| g.states)
            .sum();
        assert_eq!(head_states, 42 * 6);
    }

    #[test]
    fn sigma1_and_sigma2_build_identical_ts() {
        let cnf = tiny_instance();
        let a = build_reduction(&cnf, Switch::Sigma1).unwrap();
        let b = build_reduction(&cnf, Switch::Sigma2).unwrap();
        assert!(a.joined.structurally_eq(&b.joined));
    }

    #[test]
    fn key_atom_is_wellformed() {
        let cnf = tiny_instance();
        for sw in ALL_SWITCHES {
            let red = build_reduction(&cnf, sw).unwrap();
            let k = red.joined.event_by_name(&red.key_event).unwrap();
            let s = red.joined.state_by_name(&red.key_state).unwrap();
            assert!(!red.joined.occurs(s, k), "{sw:?}");
            assert!(red.joined.modesty().modest, "{sw:?}");
        }
    }

    #[test]
    fn witnesses_validate_and_inhibit_for_all_switches() {
        let cnf = tiny_instance();
        let model = one_in_three_bruteforce(&cnf).unwrap().unwrap();
        for sw in ALL_SWITCHES {
            let red = build_reduction(&cnf, sw).unwrap();
            for tau in sw.managed_types() {
                let witness = combine_witness(&cnf, &red, tau, &model)
                    .unwrap_or_else(|e| panic!("{sw:?} {tau}: {e}"));
                let k = red.joined.event_by_name(&red.key_event).unwrap();
                let s = red.joined.state_by_name(&red.key_state).unwrap();
                assert!(
                    !witness.sig(k).defined_on(witness.sup(s)),
                    "{sw:?} {tau} fails to inhibit"
                );
            }
        }
    }

    #[test]
    fn indicator_signature_table_spot_checks() {
        let cnf = tiny_instance();
        let model = vec![0usize];
        let ind =
            construct_indicator_region(&cnf, Switch::Sigma1, "nop,inp,out".parse().unwrap(), &model)
                .unwrap();
        assert_eq!(ind.sig["k"], Interaction::Inp);
        assert_eq!(ind.sig["x"], Interaction::Inp); // the model variable
        let ind =
            construct_indicator_region(&cnf, Switch::Sigma5, "nop,set,swap,free".parse().unwrap(), &model)
                .unwrap();
        assert_eq!(ind.sig["k"], Interaction::Free);
        assert_eq!(ind.sig["x"], Interaction::Swap);
    }

    #[test]
    fn key_region_spot_checks() {
        let key = construct_key_region(3, Switch::Sigma1, "nop,inp,out".parse().unwrap()).unwrap();
        assert_eq!(key.sig["k"], Interaction::Inp);
        assert_eq!(key.sup.get("h_0_6"), None); // outside the support
        assert!(key.sup["h_0_0"]);
        let key = construct_key_region(3, Switch::Sigma6, "nop,set,swap,used".parse().unwrap()).unwrap();
        assert_eq!(key.sig["k"], Interaction::Used);
    }

    #[test]
    fn non_model_is_rejected() {
        let cnf = tiny_instance();
        let red = build_reduction(&cnf, Switch::Sigma1).unwrap();
        let err = combine_witness(&cnf, &red, "nop,inp,out".parse().unwrap(), &[0, 1]);
        assert!(matches!(err, Err(ReductionError::NotAModel(_))));
    }
}
