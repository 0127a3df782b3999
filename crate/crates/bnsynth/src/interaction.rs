//! The eight boolean place/transition interactions and sets thereof.
//!
//! An interaction is a partial function `{0,1} -> {0,1}` describing how a
//! firing transition affects a boolean place. Exactly eight such partial
//! functions are total enough to be useful (the everywhere-undefined one is
//! excluded), and every net type studied by this crate is a subset of them.

use std::fmt;
use std::str::FromStr;

/// One of the eight partial boolean functions a flow relation can assign to a
/// place/transition pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Interaction {
    Nop = 0,
    Inp = 1,
    Out = 2,
    Set = 3,
    Res = 4,
    Swap = 5,
    Used = 6,
    Free = 7,
}

pub const ALL_INTERACTIONS: [Interaction; 8] = [
    Interaction::Nop,
    Interaction::Inp,
    Interaction::Out,
    Interaction::Set,
    Interaction::Res,
    Interaction::Swap,
    Interaction::Used,
    Interaction::Free,
];

impl Interaction {
    /// Applies the interaction to a place value. `None` encodes "undefined",
    /// which is what makes event/state separation possible in the first place.
    #[inline]
    pub fn apply(self, x: bool) -> Option<bool> {
        match (self, x) {
            (Interaction::Nop, b) => Some(b),
            (Interaction::Inp, true) => Some(false),
            (Interaction::Inp, false) => None,
            (Interaction::Out, false) => Some(true),
            (Interaction::Out, true) => None,
            (Interaction::Set, _) => Some(true),
            (Interaction::Res, _) => Some(false),
            (Interaction::Swap, b) => Some(!b),
            (Interaction::Used, true) => Some(true),
            (Interaction::Used, false) => None,
            (Interaction::Free, false) => Some(false),
            (Interaction::Free, true) => None,
        }
    }

    /// True if `apply` is defined on `x`.
    #[inline]
    pub fn defined_on(self, x: bool) -> bool {
        self.apply(x).is_some()
    }

    /// The involutive renaming that swaps inp with out, set with res and used
    /// with free while fixing nop and swap. Mirroring a whole net type yields
    /// an isomorphic type with identical separation behavior.
    #[inline]
    pub fn mirror(self) -> Interaction {
        match self {
            Interaction::Nop => Interaction::Nop,
            Interaction::Inp => Interaction::Out,
            Interaction::Out => Interaction::Inp,
            Interaction::Set => Interaction::Res,
            Interaction::Res => Interaction::Set,
            Interaction::Swap => Interaction::Swap,
            Interaction::Used => Interaction::Free,
            Interaction::Free => Interaction::Used,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Interaction::Nop => "nop",
            Interaction::Inp => "inp",
            Interaction::Out => "out",
            Interaction::Set => "set",
            Interaction::Res => "res",
            Interaction::Swap => "swap",
            Interaction::Used => "used",
            Interaction::Free => "free",
        }
    }

    pub fn from_index(i: u8) -> Option<Interaction> {
        ALL_INTERACTIONS.get(i as usize).copied()
    }
}

impl fmt::Display for Interaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown interaction `{0}`")]
pub struct ParseInteractionError(pub String);

impl FromStr for Interaction {
    type Err = ParseInteractionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_INTERACTIONS
            .iter()
            .copied()
            .find(|i| i.name() == s)
            .ok_or_else(|| ParseInteractionError(s.to_string()))
    }
}

/// A type of nets: a subset of the eight interactions, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NetType(u8);

impl NetType {
    pub const EMPTY: NetType = NetType(0);
    /// All eight interactions.
    pub const FULL: NetType = NetType(0xff);

    pub fn new<I: IntoIterator<Item = Interaction>>(items: I) -> NetType {
        let mut t = NetType::EMPTY;
        for i in items {
            t = t.with(i);
        }
        t
    }

    /// The type with the given raw bitmask; bit `i` is `ALL_INTERACTIONS[i]`.
    pub fn from_bits(bits: u8) -> NetType {
        NetType(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn contains(self, i: Interaction) -> bool {
        self.0 & (1 << i as u8) != 0
    }

    #[inline]
    pub fn with(self, i: Interaction) -> NetType {
        NetType(self.0 | (1 << i as u8))
    }

    #[inline]
    pub fn without(self, i: Interaction) -> NetType {
        NetType(self.0 & !(1 << i as u8))
    }

    pub fn union(self, other: NetType) -> NetType {
        NetType(self.0 | other.0)
    }

    pub fn intersect(self, other: NetType) -> NetType {
        NetType(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: NetType) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_superset_of(self, other: NetType) -> bool {
        other.is_subset_of(self)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Interaction> {
        ALL_INTERACTIONS
            .into_iter()
            .filter(move |i| self.contains(*i))
    }

    pub fn mirror(self) -> NetType {
        NetType::new(self.iter().map(Interaction::mirror))
    }

    /// Interactions that move a place from 0 to 1.
    pub fn enter() -> NetType {
        NetType::new([Interaction::Out, Interaction::Set, Interaction::Swap])
    }

    /// Interactions that move a place from 1 to 0.
    pub fn exit() -> NetType {
        NetType::new([Interaction::Inp, Interaction::Res, Interaction::Swap])
    }

    /// Interactions that keep a marked place marked.
    pub fn keep_plus() -> NetType {
        NetType::new([Interaction::Nop, Interaction::Set, Interaction::Used])
    }

    /// Interactions that keep an unmarked place unmarked.
    pub fn keep_minus() -> NetType {
        NetType::new([Interaction::Nop, Interaction::Res, Interaction::Free])
    }
}

impl fmt::Display for NetType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            f.write_str(i.name())?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for NetType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseNetTypeError {
    #[error("unknown interaction `{0}`")]
    Unknown(String),
    #[error("duplicate interaction `{0}`")]
    Duplicate(String),
}

impl FromStr for NetType {
    type Err = ParseNetTypeError;

    /// Parses a comma separated interaction list such as `nop,inp,out`.
    /// Order-insensitive; duplicates are rejected.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut t = NetType::EMPTY;
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let i: Interaction = part
                .parse()
                .map_err(|_| ParseNetTypeError::Unknown(part.to_string()))?;
            if t.contains(i) {
                return Err(ParseNetTypeError::Duplicate(part.to_string()));
            }
            t = t.with(i);
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Interaction::*;

    #[test]
    fn apply_matches_interaction_table() {
        // Full 8x2 table, undefined cells included.
        let expect: [(Interaction, Option<bool>, Option<bool>); 8] = [
            (Nop, Some(false), Some(true)),
            (Inp, None, Some(false)),
            (Out, Some(true), None),
            (Set, Some(true), Some(true)),
            (Res, Some(false), Some(false)),
            (Swap, Some(true), Some(false)),
            (Used, None, Some(true)),
            (Free, Some(false), None),
        ];
        for (i, at0, at1) in expect {
            assert_eq!(i.apply(false), at0, "{i} on 0");
            assert_eq!(i.apply(true), at1, "{i} on 1");
        }
    }

    #[test]
    fn mirror_is_involution_and_fixes_nop_swap() {
        for i in ALL_INTERACTIONS {
            assert_eq!(i.mirror().mirror(), i);
        }
        assert_eq!(Nop.mirror(), Nop);
        assert_eq!(Swap.mirror(), Swap);
        assert_eq!(Inp.mirror(), Out);
        assert_eq!(Set.mirror(), Res);
        assert_eq!(Used.mirror(), Free);
    }

    #[test]
    fn mirror_type_examples() {
        let t: NetType = "nop,inp,set".parse().unwrap();
        assert_eq!(t.mirror(), "nop,out,res".parse().unwrap());
        let t: NetType = "nop,swap".parse().unwrap();
        assert_eq!(t.mirror(), t);
        let t: NetType = "nop,inp,used,free".parse().unwrap();
        assert_eq!(t.mirror().mirror(), t);
    }

    #[test]
    fn parse_rejects_duplicates_and_unknown() {
        assert!(matches!(
            "nop,nop".parse::<NetType>(),
            Err(ParseNetTypeError::Duplicate(_))
        ));
        assert!(matches!(
            "nop,bogus".parse::<NetType>(),
            Err(ParseNetTypeError::Unknown(_))
        ));
    }

    #[test]
    fn display_is_canonical_order() {
        let t: NetType = "swap,inp,nop".parse().unwrap();
        assert_eq!(t.to_string(), "nop,inp,swap");
    }

    #[test]
    fn interaction_groups() {
        assert_eq!(NetType::enter(), "out,set,swap".parse().unwrap());
        assert_eq!(NetType::exit(), "inp,res,swap".parse().unwrap());
        assert_eq!(NetType::keep_plus(), "nop,set,used".parse().unwrap());
        assert_eq!(NetType::keep_minus(), "nop,res,free".parse().unwrap());
    }
}
