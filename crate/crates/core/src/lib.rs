//! Bounded model checking for synchronous finite-state models, with a
//! fault-combination batch driver and a generator for a fail-operational
//! vehicle control system demo.

pub mod lang;
pub mod checker;
pub mod driver;
pub mod ltl;
pub mod semantics;
pub mod vcs;
