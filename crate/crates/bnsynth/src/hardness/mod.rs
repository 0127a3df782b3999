//! Hardness-instance generation: the six-position reduction scheme, the
//! dedicated construction for the classes outside it, and the constructive
//! region witnesses both come with.

pub mod cnf;
pub mod scheme;
pub mod theorem2;

pub use cnf::{one_in_three_bruteforce, parse_cnf, serialize_cnf, CnfError, CnfInstance};
pub use scheme::{
    build_reduction, combine_witness, construct_indicator_region, construct_key_region,
    validate_union_region, GadgetInfo, GadgetKind, NamedRegion, ReductionError, ReductionOutput,
    Switch, ALL_SWITCHES,
};
pub use theorem2::{
    build_theorem2_ts, theorem2_family, theorem2_witness, Theorem2Error, Theorem2Family,
    Theorem2Output,
};
