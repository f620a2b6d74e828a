//! Distance bounds `c · sqrt(discrepancy)` and the classical
//! self-normalized Berry-Esseen bound.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::special::gamma_ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distance {
    Kolmogorov,
    Wasserstein,
    TotalVariation,
    FortetMourier,
}

impl Distance {
    pub const ALL: [Distance; 4] = [
        Distance::Kolmogorov,
        Distance::Wasserstein,
        Distance::TotalVariation,
        Distance::FortetMourier,
    ];

    /// Constant in `d(F, Z) <= c sqrt(E(1 - ⟨DF, D(-L)^{-1}F⟩)²)`.
    pub fn stein_constant(self) -> f64 {
        match self {
            Distance::Kolmogorov | Distance::Wasserstein => 1.0,
            Distance::TotalVariation => 2.0,
            Distance::FortetMourier => 4.0,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Distance::Kolmogorov => "kolmogorov",
            Distance::Wasserstein => "wasserstein",
            Distance::TotalVariation => "total_variation",
            Distance::FortetMourier => "fortet_mourier",
        })
    }
}

impl FromStr for Distance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Distance::ALL
            .into_iter()
            .find(|d| d.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown distance {s:?}")))
    }
}

pub fn berry_esseen_bound(discrepancy: f64, distance: Distance) -> Result<f64> {
    if discrepancy.is_nan() || discrepancy < 0.0 {
        return Err(Error::domain(format!(
            "discrepancy must be >= 0, got {discrepancy}"
        )));
    }
    Ok(distance.stein_constant() * discrepancy.sqrt())
}

/// `25 E|Z|^p n^{1-p/2}` with `E|Z|^p = 2^{p/2} Γ((p+1)/2) / √π`.
pub fn classical_bound(n: usize, p: f64) -> Result<f64> {
    if !(p > 2.0 && p <= 3.0) {
        return Err(Error::domain(format!(
            "classical bound needs 2 < p <= 3, got {p}"
        )));
    }
    if n == 0 {
        return Err(Error::domain("classical bound needs n >= 1"));
    }
    // Γ((p+1)/2)/√π = Γ((p+1)/2)/Γ(1/2)
    let abs_moment = 2f64.powf(p / 2.0) * gamma_ratio((p + 1.0) / 2.0, 0.5)?;
    Ok(25.0 * abs_moment * (n as f64).powf(1.0 - p / 2.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub discrepancy: f64,
    pub bound_kolmogorov: f64,
    pub bound_wasserstein: f64,
    pub bound_total_variation: f64,
    pub bound_fortet_mourier: f64,
    pub classical_bound_p3: f64,
    /// `(distance, standard error)`.
    pub empirical_kolmogorov: Option<(f64, f64)>,
    pub empirical_wasserstein: Option<(f64, f64)>,
}

pub fn bound_report(n: usize, discrepancy: f64) -> Result<BoundReport> {
    Ok(BoundReport {
        n,
        discrepancy,
        bound_kolmogorov: berry_esseen_bound(discrepancy, Distance::Kolmogorov)?,
        bound_wasserstein: berry_esseen_bound(discrepancy, Distance::Wasserstein)?,
        bound_total_variation: berry_esseen_bound(discrepancy, Distance::TotalVariation)?,
        bound_fortet_mourier: berry_esseen_bound(discrepancy, Distance::FortetMourier)?,
        classical_bound_p3: classical_bound(n, 3.0)?,
        empirical_kolmogorov: None,
        empirical_wasserstein: None,
    })
}
