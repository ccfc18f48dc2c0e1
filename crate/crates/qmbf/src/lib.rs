//! Numerical q-calculus special functions for a fixed base q in (0,1):
//! q-exponentials, q-Gamma and q-psi, basic hypergeometric series, the
//! modified q-Bessel functions I_nu^(1) / I_nu^(2) in power-series and
//! Laurent-type representations, and the q-Bessel-Macdonald functions
//! K_nu^(1) / K_nu^(2).
//!
//! The crate also ships an identity-verification engine ([`verify`]) that
//! numerically certifies the recurrences, difference equations, q-Wronskian
//! identities and representation equivalences satisfied by this function
//! family over parameter grids, producing structured residual reports.
//!
//! All evaluations are pure functions of their arguments plus an immutable
//! [`QContext`]; everything is safe to use from multiple threads.

pub mod dd;
pub mod qbessel;
pub mod qcore;
pub mod qhyper;
pub mod qmacdonald;
pub mod verify;

pub use num_complex::Complex64;
pub use qcore::{QContext, QError, Result, SeriesEval};
