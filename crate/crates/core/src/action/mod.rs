//! Automorphisms of index domains and their action on conditions, together
//! with group and filter descriptions.

pub mod automorphism;
pub mod condition;
pub mod group;
pub mod solve;

pub use automorphism::{apply_point, compose, invert, Automorphism, PlMap, PlainPerm};
pub use condition::{apply_condition, Condition};
pub use group::{
    conjugate_fix, filter_contains, is_tenacious, orbits, FilterDesc, FiniteGroup, GroupDesc,
    Orbit, SupportIdeal, DEFAULT_GROUP_CAP,
};
pub use solve::{find_automorphism, verify_constraints, ConstraintSpec, Movement};
