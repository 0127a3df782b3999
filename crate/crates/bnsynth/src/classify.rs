//! Synthesis-complexity classification of all 256 net types.

use crate::interaction::{Interaction, NetType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComplexityClass {
    PolyTime,
    NpComplete,
    Open,
    OutOfScopeNopFree,
}

impl ComplexityClass {
    pub fn name(self) -> &'static str {
        match self {
            ComplexityClass::PolyTime => "polynomial",
            ComplexityClass::NpComplete => "NP-complete",
            ComplexityClass::Open => "open",
            ComplexityClass::OutOfScopeNopFree => "out-of-scope (nop-free)",
        }
    }
}

/// Classification result: the class, the theorem it rests on, and an input
/// restriction caveat where one applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub class: ComplexityClass,
    /// Which result of the classification the type falls under.
    pub basis: &'static str,
    pub note: Option<&'static str>,
}

fn t(names: &[Interaction]) -> NetType {
    NetType::new(names.iter().copied())
}

fn tau1() -> NetType {
    t(&[Interaction::Nop, Interaction::Inp, Interaction::Out])
}
fn tau2() -> NetType {
    t(&[Interaction::Nop, Interaction::Inp, Interaction::Res, Interaction::Swap])
}
fn tau3() -> NetType {
    t(&[Interaction::Nop, Interaction::Inp, Interaction::Set])
}
fn tau4() -> NetType {
    t(&[Interaction::Nop, Interaction::Set, Interaction::Swap])
}

fn used_free_subsets() -> [NetType; 4] {
    [
        NetType::EMPTY,
        t(&[Interaction::Used]),
        t(&[Interaction::Free]),
        t(&[Interaction::Used, Interaction::Free]),
    ]
}

/// First hardness condition: tau1, tau2 or mirrored tau2 extended with tests.
pub fn hardness_condition_1(tau: NetType) -> bool {
    for base in [tau1(), tau2(), tau2().mirror()] {
        for omega in used_free_subsets() {
            if tau == base.union(omega) {
                return true;
            }
        }
    }
    false
}

/// Second hardness condition: any superset of tau3 or of its mirror.
pub fn hardness_condition_2(tau: NetType) -> bool {
    tau.is_superset_of(tau3()) || tau.is_superset_of(tau3().mirror())
}

/// Third hardness condition: tau4, mirrored tau4 or their union, extended
/// with a nonempty test set.
pub fn hardness_condition_3(tau: NetType) -> bool {
    for base in [tau4(), tau4().mirror(), tau4().union(tau4().mirror())] {
        for omega in used_free_subsets() {
            if !omega.is_empty() && tau == base.union(omega) {
                return true;
            }
        }
    }
    false
}

/// The seven classes whose hardness needs the dedicated construction, plus
/// their mirrors. For the set/res members hardness holds for general TSs
/// only; modest inputs are decidable trivially.
fn extra_hardness(tau: NetType) -> Option<&'static str> {
    use Interaction::*;
    let inp_family = [
        t(&[Nop, Inp, Free]),
        t(&[Nop, Inp, Used, Free]),
        t(&[Nop, Out, Used]),
        t(&[Nop, Out, Used, Free]),
    ];
    if inp_family.contains(&tau) {
        return Some("");
    }
    let set_res = t(&[Nop, Set, Res]);
    for omega in used_free_subsets() {
        if !omega.is_empty() && tau == set_res.union(omega) {
            return Some("general TSs only; modest inputs are feasible iff they have one state");
        }
    }
    None
}

/// The four tractable schemas.
fn poly_schema(tau: NetType) -> bool {
    use Interaction::*;
    let schemas: [(NetType, NetType); 4] = [
        (t(&[Nop, Set]), t(&[Out, Used, Free])),
        (t(&[Nop, Res]), t(&[Inp, Used, Free])),
        (t(&[Nop, Swap]), t(&[Inp, Out, Used, Free])),
        (t(&[Nop]), t(&[Used, Free])),
    ];
    schemas
        .iter()
        .any(|(base, opt)| tau.is_superset_of(*base) && tau.is_subset_of(base.union(*opt)))
}

/// The eight classes left open.
fn open_class(tau: NetType) -> bool {
    use Interaction::*;
    let fixed = [
        t(&[Nop, Inp]),
        t(&[Nop, Inp, Used]),
        t(&[Nop, Out]),
        t(&[Nop, Out, Free]),
        t(&[Nop, Set, Res]),
    ];
    if fixed.contains(&tau) {
        return true;
    }
    let base = t(&[Nop, Swap]);
    for omega in [t(&[Set]), t(&[Res]), t(&[Set, Res])] {
        if tau == base.union(omega) {
            return true;
        }
    }
    false
}

/// Classifies the synthesis complexity of `tau`. Total over all 256 types;
/// nop-free types are reported out of scope rather than guessed.
pub fn classify_type(tau: NetType) -> Classification {
    if !tau.contains(Interaction::Nop) {
        return Classification {
            class: ComplexityClass::OutOfScopeNopFree,
            basis: "nop-free",
            note: None,
        };
    }
    if poly_schema(tau) {
        return Classification {
            class: ComplexityClass::PolyTime,
            basis: "Theorem 3",
            note: None,
        };
    }
    if hardness_condition_1(tau) || hardness_condition_2(tau) || hardness_condition_3(tau) {
        return Classification {
            class: ComplexityClass::NpComplete,
            basis: "Theorem 1",
            note: None,
        };
    }
    if let Some(note) = extra_hardness(tau) {
        return Classification {
            class: ComplexityClass::NpComplete,
            basis: "Theorem 2",
            note: if note.is_empty() { None } else { Some(note) },
        };
    }
    debug_assert!(open_class(tau), "classification must be exhaustive: {tau}");
    Classification {
        class: ComplexityClass::Open,
        basis: "open list",
        note: None,
    }
}

pub fn all_types() -> impl Iterator<Item = NetType> {
    (0..=255u8).map(NetType::from_bits)
}

pub fn nop_types() -> impl Iterator<Item = NetType> {
    all_types().filter(|t| t.contains(Interaction::Nop))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        let c = classify_type("nop,inp,out".parse().unwrap());
        assert_eq!(c.class, ComplexityClass::NpComplete);
        assert_eq!(c.basis, "Theorem 1");

        let c = classify_type("nop,swap".parse().unwrap());
        assert_eq!(c.class, ComplexityClass::PolyTime);

        let c = classify_type("nop,set,res".parse().unwrap());
        assert_eq!(c.class, ComplexityClass::Open);

        let c = classify_type("inp,out".parse().unwrap());
        assert_eq!(c.class, ComplexityClass::OutOfScopeNopFree);
    }

    #[test]
    fn partition_counts() {
        let mut np = 0;
        let mut poly = 0;
        let mut open = 0;
        for tau in nop_types() {
            match classify_type(tau).class {
                ComplexityClass::NpComplete => np += 1,
                ComplexityClass::PolyTime => poly += 1,
                ComplexityClass::Open => open += 1,
                ComplexityClass::OutOfScopeNopFree => unreachable!(),
            }
        }
        assert_eq!((np, poly, open), (84, 36, 8));
    }

    #[test]
    fn main_hardness_conditions_cover_77_disjointly() {
        let mut count = 0;
        for tau in nop_types() {
            let hits = [
                hardness_condition_1(tau),
                hardness_condition_2(tau),
                hardness_condition_3(tau),
            ];
            let n = hits.iter().filter(|h| **h).count();
            assert!(n <= 1, "conditions overlap on {tau}");
            if n == 1 {
                count += 1;
            }
        }
        assert_eq!(count, 77);
    }

    #[test]
    fn mirror_closure() {
        for tau in all_types() {
            assert_eq!(
                classify_type(tau).class,
                classify_type(tau.mirror()).class,
                "mirror mismatch on {tau}"
            );
        }
    }

    #[test]
    fn set_res_classes_carry_the_caveat() {
        let c = classify_type("nop,set,res,used".parse().unwrap());
        assert_eq!(c.class, ComplexityClass::NpComplete);
        assert!(c.note.is_some());
        let c = classify_type("nop,inp,free".parse().unwrap());
        assert_eq!(c.class, ComplexityClass::NpComplete);
        assert_eq!(c.basis, "Theorem 2");
        assert!(c.note.is_none());
    }
}
