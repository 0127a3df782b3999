//! Boolean Petri net synthesis from labeled transition systems.
//!
//! The crate decides, for any of the 256 boolean net types, whether a given
//! deterministic rooted transition system is the state graph of a net of
//! that type, synthesizes such a net when one exists, classifies every type
//! by the complexity of its synthesis problem, and generates the hardness
//! reduction instances for the intractable types together with verifiable
//! region witnesses.
//!
//! Modules:
//!
//! - [`ts`]: transition systems, unions, joinings, text codec
//! - [`interaction`]: the eight interactions and net types
//! - [`net`]: boolean nets, firing, state graphs, isomorphism
//! - [`classify`]: the complexity classification of all types
//! - [`gf2`]: linear systems over the two-element field
//! - [`region`]: regions, separation atoms, the four atom solvers
//! - [`feasibility`]: property decisions over whole TSs
//! - [`synthesis`]: net construction and verification
//! - [`hardness`]: reduction instance generators and witnesses

pub mod classify;
pub mod feasibility;
pub mod gf2;
pub mod hardness;
pub mod interaction;
pub mod net;
pub mod region;
pub mod synthesis;
pub mod ts;
