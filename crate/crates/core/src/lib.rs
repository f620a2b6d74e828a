//! Exact Wiener-chaos expansion of the self-normalized Gaussian sum
//! `F_n = S_n / V_n`, the Stein-Malliavin discrepancy built from it, and
//! Monte Carlo oracles for both.

pub mod asymptotics;
pub mod coefficients;
pub mod error;
pub mod exact;
pub mod hermite;
pub mod moments;
pub mod montecarlo;
pub mod patterns;
pub mod special;
pub mod stein;
pub mod summation;

pub use error::{Error, Result};
