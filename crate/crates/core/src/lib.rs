//! Exact q-expansion machinery for hypergeometric solutions of the modular
//! Schwarzian equation `{h, tau} = s E4` with parameters `n/m`, `m >= 7`.
//!
//! The pipeline builds the minimal-weight vector-valued modular form from
//! Gauss hypergeometric series, raises its weight to reach `n > m`, forms
//! `h = f1/f2`, and verifies every identity along the way in exact rational
//! arithmetic. All derivatives use `D = q d/dq`.

// Errors carry exact rational residuals.
#![allow(clippy::result_large_err)]

pub mod checks;
pub mod forms;
pub mod hypergeometric;
pub mod numeric;
pub mod series;
pub mod solver;
pub mod vvmf;
