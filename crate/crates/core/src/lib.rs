//! Append-only postings lists over a bump-allocated arena.
//!
//! Two representations of the same abstraction — an append-only list of
//! monotonically non-decreasing integers — are provided side by side so they
//! can be compared for space and build speed:
//!
//! * [`fbb::FbbList`]: a linked list of chunks whose capacities follow the
//!   Fibonacci sequence, with each capacity repeated a Fibonacci number of
//!   times.
//! * [`sqa::SqArray`]: an extensible array of geometrically growing segments
//!   reached through a doubling dope vector, which supports O(1) random
//!   access via index arithmetic.
//!
//! Both live entirely inside an [`arena::Arena`], a bump allocator over large
//! fixed-size blocks that never frees, so the exact space consumption of a
//! build is observable down to the unit.
//!
//! The companion modules close the loop for experiments: [`model`] predicts
//! per-list space overhead analytically and must agree with the live
//! structures, [`invert`] builds an in-memory inverted index from a stream of
//! records using either representation, and [`corpus`] generates reproducible
//! synthetic record streams with Zipf-distributed terms.

pub mod arena;
pub mod corpus;
pub mod fbb;
pub mod invert;
pub mod model;
pub mod sqa;

pub use arena::{Arena, ArenaError, ArenaStats, Unit, UnitHandle};
pub use invert::Method;
