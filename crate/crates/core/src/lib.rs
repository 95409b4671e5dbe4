//! Ordered amenable groups and the dynamics of their shift spaces.
//!
//! The crate covers three families of left-orderable amenable groups:
//! the integer lattices ℤ^d, the discrete Heisenberg group and the groups
//! U_{d+1}(ℤ) of integral unipotent upper triangular matrices. For each it
//! provides exact arithmetic, an algebraic past with the induced
//! left-invariant order, an admissible semigroup with finite generator
//! certificates, Følner box diagnostics, shift-space pattern counting and
//! entropy, exact Bernoulli/Markov measure entropies, and constructive
//! witnesses for asymptotic and Li-Yorke pairs in full shifts.
//!
//! Every statement about an infinite object is checked on a finite box and
//! reported with that box attached; nothing here claims a limit.
//!
//! Exhaustive scans run on rayon when the `parallel` feature is enabled
//! (the default). Every scanning entry point has a `*_with` variant taking
//! a [`Strategy`] so both paths can be compared directly.

pub mod entropy;
pub mod error;
pub mod exec;
pub mod folner;
pub mod group;
pub mod order;
pub mod pairs;
pub mod shift;

pub use error::{Error, Result};
pub use exec::Strategy;
pub use group::{FiniteWindow, GroupElement, GroupId};
pub use order::OrderedGroupContext;
