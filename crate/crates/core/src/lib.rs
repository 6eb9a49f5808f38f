//! Monotone switching networks for directed st-connectivity.
//!
//! The crate evaluates and verifies switching networks, searches for
//! minimal sound networks on tiny universes, replays reduction certificates
//! between input graphs, and computes the disconnected-path length of
//! directed trees in linear time.

pub mod graphs;
pub mod msn;
pub mod search;
pub mod dplen;
pub mod bounds;
pub mod reduce;
pub mod construct;
pub mod cli;
