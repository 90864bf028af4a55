//! Forcing over finite truncations of the Cohen poset.

pub mod engine;
pub mod formula;
pub mod oracle;
pub mod poset;
pub mod symmetry;

pub use engine::{compile, forces, Engine, NodeId};
pub use formula::{pair_seconds, Formula};
pub use oracle::{eval_name, forces_oracle, holds, total_extensions, val, values_at};
pub use poset::{AtomSet, CondBits, GenericSample, TruncatedPoset, MAX_KEYS};
pub use symmetry::{
    check_symmetry_lemma, check_symmetry_lemma_with, conditions_only_action, enumerate_names,
    formula_templates, Counterexample, SymmetryReport, DEFAULT_BUDGET,
};
