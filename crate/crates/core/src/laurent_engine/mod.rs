//! Exact truncated Laurent series in residue coordinates y_1..y_n over
//! rationals extended by nilpotents, and iterated residues of products of
//! such series in the region |y_1| ≫ … ≫ |y_n|.

pub mod factors;
pub mod jet;
pub mod residue;
pub mod series;
pub mod univariate;

pub use factors::{
    char_series, compose, delta_combination, exp_series, hessian_entry, inv_one_minus_exp,
    jacobian_measure, linear_power, q_factor, weyl_factor, weyl_factor_form, LinearFormY,
};
pub use jet::JetScalar;
pub use residue::{assemble, enlargement_step, iterated_residue, LazyFactor, WindowPlan};
pub use series::{degree, mono, target, target_degree, weight, Mono, NestedLaurent, EXACT, MAX_VARS};
