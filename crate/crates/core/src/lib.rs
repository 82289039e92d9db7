//! Interactive constraint acquisition.
//!
//! A learner proposes (partial) assignments, an oracle classifies them, and
//! the learner narrows a bias of candidate constraints down to a network
//! equivalent to the one the oracle has in mind.

pub mod acquisition;
pub mod benchmarks;
pub mod model;
pub mod oracle;
pub mod solver;
