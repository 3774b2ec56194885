//! Numerical evaluation of the Kronecker coefficients and of regularized
//! iterated integrals over `[0, 1]`.

pub mod config;
pub mod evaluator;
pub mod kronecker;
pub mod quadrature;
pub mod series;
pub mod zeta;

pub use config::{NumericsConfig, RegMethod, Tau};
pub use evaluator::{Estimate, Evaluator};
pub use kronecker::{f_n_checked, Kronecker};
pub use zeta::zeta;

use num_complex::Complex64;

use crate::error::Result;
use crate::expr::Expression;
use crate::index::Index;

/// `θ(z)` at `τ`.
pub fn theta(z: Complex64, tau: Tau, cfg: &NumericsConfig) -> Result<Complex64> {
    Kronecker::new(tau, cfg)?.theta(z)
}

/// `θ'(0)` at `τ`.
pub fn theta_prime0(tau: Tau, cfg: &NumericsConfig) -> Result<Complex64> {
    Ok(Kronecker::new(tau, cfg)?.theta_prime0())
}

/// `F(α, z)` at `τ`.
pub fn kronecker_f(alpha: Complex64, z: Complex64, tau: Tau, cfg: &NumericsConfig) -> Result<Complex64> {
    Kronecker::new(tau, cfg)?.kronecker_f(alpha, z)
}

/// `f^(n)(z)` at `τ`, with the aliasing check.
pub fn f_n(n: usize, z: Complex64, tau: Tau, cfg: &NumericsConfig) -> Result<Complex64> {
    f_n_checked(&Kronecker::new(tau, cfg)?, n, z)
}

/// One-shot `I(k; τ)` for admissible `k`. Use an [`Evaluator`] to share work
/// between calls.
pub fn emzv_admissible(k: &Index, tau: Tau, cfg: &NumericsConfig) -> Result<Estimate> {
    Evaluator::new(tau, cfg.clone())?.emzv_admissible(k)
}

/// One-shot regularized `I(k; τ)`.
pub fn emzv_regularized(k: &Index, tau: Tau, cfg: &NumericsConfig) -> Result<Estimate> {
    Evaluator::new(tau, cfg.clone())?.emzv_regularized(k)
}

/// One-shot value of an expression in `I`-atoms.
pub fn eval_expression(e: &Expression, tau: Tau, cfg: &NumericsConfig) -> Result<Estimate> {
    Evaluator::new(tau, cfg.clone())?.eval_expression(e)
}
