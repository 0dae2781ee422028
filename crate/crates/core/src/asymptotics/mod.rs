//! Weak-limit asymptotics: the continuous group-velocity density w(v) of
//! the rescaled position m/t and the time-independent localization
//! profile p∞(m), for both coin families.
//!
//! Everything is parameterized by the eigenbasis amplitudes (g₊, g₁, g₂) of
//! the initial coin state.

use crate::coin::{in_basis, Basis, CoinSpec, CoinState, Family, Spinor};
use crate::error::{Error, Result};
use crate::quadrature::{try_integrate, EndpointSingularity, QuadratureSpec};

pub mod phi;
pub mod rho;

pub use phi::{density_terms, peak_velocity, PhiAsymptotics, PhiDensityTerms};
pub use rho::RhoAsymptotics;

/// Tolerances used for every moment and weight quadrature in this module.
pub(crate) fn moment_quadrature() -> QuadratureSpec {
    QuadratureSpec::default()
        .with_tolerances(1e-12, 1e-15)
        .with_singularity(EndpointSingularity::InverseSqrtBoth)
}

/// How an asymptotic moment was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticMoment {
    pub value: f64,
    pub method: MomentMethod,
}

/// Moduli and coherence factors of (g₊, g₁, g₂).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Weights {
    pub plus: f64,
    pub one: f64,
    pub two: f64,
    /// g₁ḡ₂ + ḡ₁g₂ = 2 Re(g₁ḡ₂)
    pub re12: f64,
    /// 2 Im(g₁ḡ₂)
    pub im12: f64,
    /// 2 Im(g₂ḡ₊)
    pub im2p: f64,
}

impl Weights {
    pub fn new(g: &Spinor) -> Self {
        let c12 = g[1] * g[2].conj();
        let c2p = g[2] * g[0].conj();
        Self {
            plus: g[0].norm_sqr(),
            one: g[1].norm_sqr(),
            two: g[2].norm_sqr(),
            re12: 2.0 * c12.re,
            im12: 2.0 * c12.im,
            im2p: 2.0 * c2p.im,
        }
    }
}

pub(crate) fn check_amplitudes(g: &Spinor) -> Result<()> {
    CoinState::eigen(*g).map(|_| ())
}

/// The weak limit of one walk: continuous density plus localization.
pub trait LimitDistribution: Send + Sync {
    fn spec(&self) -> CoinSpec;

    /// Eigenbasis amplitudes (g₊, g₁, g₂).
    fn amplitudes(&self) -> &Spinor;

    /// Edge of the support of w(v).
    fn peak_velocity(&self) -> f64;

    /// w(v) on the open interval (−v_peak, v_peak).
    fn density(&self, v: f64) -> Result<f64>;

    /// Closed-form ∫ w(v) dv.
    fn continuous_weight(&self) -> f64;

    fn localization(&self, m: i64) -> f64;

    /// Closed-form Σₘ p∞(m).
    fn localization_total(&self) -> f64;

    fn second_moment(&self) -> Result<f64>;

    /// lim ⟨(m/t)ⁿ⟩ = ∫ vⁿ w(v) dv, n ≥ 1.
    fn moment(&self, n: u32) -> Result<AsymptoticMoment>;

    /// ∫ w(v) dv by singular-endpoint quadrature of [`density`](Self::density).
    fn continuous_weight_by_quadrature(&self) -> Result<f64> {
        let vp = self.peak_velocity();
        try_integrate(|v| self.density(v), -vp, vp, &moment_quadrature()).map(|r| r.value)
    }

    /// ∫ vⁿ w(v) dv by direct quadrature of the full density.
    fn moment_by_quadrature(&self, n: u32) -> Result<f64> {
        let vp = self.peak_velocity();
        try_integrate(
            |v| Ok(v.powi(n as i32) * self.density(v)?),
            -vp,
            vp,
            &moment_quadrature(),
        )
        .map(|r| r.value)
    }

    /// Finite-time estimate w(m/t)/t + p∞(m) of p(m, t).
    fn site_prediction(&self, m: i64, t: usize) -> Result<f64> {
        if t == 0 {
            return Err(Error::ZeroSteps);
        }
        let v = m as f64 / t as f64;
        let cont = if v.abs() < self.peak_velocity() {
            self.density(v)? / t as f64
        } else {
            0.0
        };
        Ok(cont + self.localization(m))
    }
}

/// Builds the limit distribution for `state` (either basis) under `spec`.
pub fn limit_distribution(spec: &CoinSpec, state: &CoinState) -> Result<Box<dyn LimitDistribution>> {
    let g = *in_basis(state, spec, Basis::Eigen).amplitudes();
    Ok(match spec.family() {
        Family::Rho => Box::new(RhoAsymptotics::new(spec.parameter(), g)?),
        Family::Phi => Box::new(PhiAsymptotics::new(spec.parameter(), g)?),
    })
}

/// Non-negative square root that absorbs roundoff below zero.
pub(crate) fn clamped_sqrt(x: f64) -> Result<f64> {
    const CLAMP: f64 = 1e-9;
    if x >= 0.0 {
        Ok(x.sqrt())
    } else if x >= -CLAMP {
        Ok(0.0)
    } else {
        Err(Error::NegativeRadicand { value: x })
    }
}
