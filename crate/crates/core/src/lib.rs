//! Symbolic workbench for permutation models of set theory: forcing names,
//! automorphism actions, symmetric filters, a decision procedure for forcing
//! over truncated Cohen posets, and the combinatorics of two concrete models.

pub mod action;
pub mod analyzer;
pub mod error;
pub mod forcing;
pub mod hf;
pub mod models;
pub mod name;
pub mod order;
pub mod sexpr;
pub mod suites;

pub use action::{Automorphism, Condition, FilterDesc, GroupDesc, SupportIdeal};
pub use error::{Error, Result};
pub use forcing::{Engine, Formula, TruncatedPoset};
pub use hf::HfSet;
pub use models::BasedFn;
pub use name::Name;
pub use order::{Cut, IndexDomain, OrderPoint, Rational};
