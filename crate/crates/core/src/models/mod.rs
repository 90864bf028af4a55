//! Combinatorics of the two concrete models: based functions over a dense
//! order, and sequence codes over a product of rows.

pub mod based;
pub mod codes;

pub use based::{
    a_n_descriptor, eval_based, is_based, product_based, unproduct_based, BasedFamily, BasedFn,
};
pub use codes::{
    code_grid, deinterleave, generic_from_code, interleave, interpret_code, intersect_code_law,
    product_code, unproduct_code, ASCode, SeqCode,
};
