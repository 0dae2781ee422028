use std::f64::consts::PI;

use crate::coin::{CoinSpec, Spinor};
use crate::error::{Error, Result};
use crate::quadrature::try_integrate;

use super::{check_amplitudes, moment_quadrature, AsymptoticMoment, LimitDistribution, MomentMethod, Weights};

/// Limit distribution of the ρ-family walk for eigenbasis amplitudes g.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoAsymptotics {
    rho: f64,
    g: Spinor,
    w: Weights,
    /// √(1 − ρ²)
    cos_part: f64,
    nu: f64,
}

impl RhoAsymptotics {
    pub fn new(rho: f64, g: Spinor) -> Result<Self> {
        CoinSpec::rho(rho)?;
        check_amplitudes(&g)?;
        let cos_part = (1.0 - rho * rho).sqrt();
        // −(2 − ρ² − 2√(1−ρ²))/ρ² written without cancellation
        let nu = -(rho / (1.0 + cos_part)).powi(2);
        Ok(Self {
            rho,
            g,
            w: Weights::new(&g),
            cos_part,
            nu,
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Base ν of the localization exponential, −1 < ν < 0.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Δ₁(ρ) = (1 + ρ² − √(1−ρ²)) / (2 + 2√(1−ρ²)).
    pub fn delta1(&self) -> f64 {
        (1.0 + self.rho * self.rho - self.cos_part) / (2.0 + 2.0 * self.cos_part)
    }

    /// Δ₂(ρ) = (2 − ρ² − 2√(1−ρ²)) / ρ² = −ν.
    pub fn delta2(&self) -> f64 {
        -self.nu
    }

    /// g₁ḡ₂ + ḡ₁g₂
    pub fn coherence(&self) -> f64 {
        self.w.re12
    }

    /// (√(1−ρ²)/π) ∫ vⁿ / ((1 − v²)√(ρ² − v²)) dv over (−ρ, ρ).
    fn base_integral(&self, n: u32) -> Result<f64> {
        let rho = self.rho;
        let r = try_integrate(
            |v| Ok(v.powi(n as i32) / ((1.0 - v * v) * ((rho - v) * (rho + v)).sqrt())),
            -rho,
            rho,
            &moment_quadrature(),
        )?;
        Ok(self.cos_part / PI * r.value)
    }

    /// O_n(ρ), the state-independent factor of ⟨v^{2n+1}⟩.
    pub fn odd_moment_factor(&self, n: u32) -> Result<f64> {
        Ok(-self.base_integral(2 * n + 2)? / self.rho)
    }

    /// ⟨v^{2n+1}⟩ = O_n(ρ)(g₁ḡ₂ + ḡ₁g₂).
    pub fn odd_moment(&self, n: u32) -> Result<f64> {
        if self.w.re12 == 0.0 {
            return Ok(0.0);
        }
        Ok(self.odd_moment_factor(n)? * self.w.re12)
    }
}

impl LimitDistribution for RhoAsymptotics {
    fn spec(&self) -> CoinSpec {
        CoinSpec::rho(self.rho).expect("validated on construction")
    }

    fn amplitudes(&self) -> &Spinor {
        &self.g
    }

    fn peak_velocity(&self) -> f64 {
        self.rho
    }

    fn density(&self, v: f64) -> Result<f64> {
        let rho = self.rho;
        if !(v.abs() < rho) {
            return Err(Error::OutsideSupport { v, bound: rho });
        }
        let x = v / rho;
        let w = &self.w;
        let bracket = (1.0 - w.two) - w.re12 * x + (w.one + 2.0 * w.two - 1.0) * x * x;
        Ok(self.cos_part * bracket / (PI * (1.0 - v * v) * ((rho - v) * (rho + v)).sqrt()))
    }

    fn continuous_weight(&self) -> f64 {
        let w = &self.w;
        // (√(1−ρ²) − 1)/ρ² = −1/(1 + √(1−ρ²))
        1.0 - w.two + (w.one + 2.0 * w.two - 1.0) / (1.0 + self.cos_part)
    }

    fn localization(&self, m: i64) -> f64 {
        let rho2 = self.rho * self.rho;
        let g = &self.g;
        if m == 0 {
            return self.nu.abs() / rho2 * (self.w.plus + (1.0 - rho2) * self.w.two);
        }
        let coupling = if m > 0 { g[0] + g[2] } else { g[0] - g[2] };
        let pref = (2.0 - 2.0 * rho2) / (rho2 * rho2);
        pref * (self.nu * self.nu).powf(m.unsigned_abs() as f64) * coupling.norm_sqr()
    }

    fn localization_total(&self) -> f64 {
        let w = &self.w;
        w.two - (w.two - w.plus) / (1.0 + self.cos_part)
    }

    fn second_moment(&self) -> Result<f64> {
        Ok((self.w.one + 1.0) * self.delta1() + (self.w.two - 1.0) * self.delta2())
    }

    fn moment(&self, n: u32) -> Result<AsymptoticMoment> {
        match n {
            0 => Err(Error::InvalidArgument("moment order must be at least 1".into())),
            2 => Ok(AsymptoticMoment {
                value: self.second_moment()?,
                method: MomentMethod::ClosedForm,
            }),
            n if n % 2 == 1 => {
                let value = self.odd_moment((n - 1) / 2)?;
                let method = if self.w.re12 == 0.0 {
                    MomentMethod::ClosedForm
                } else {
                    MomentMethod::Quadrature
                };
                Ok(AsymptoticMoment { value, method })
            }
            n => {
                let w = &self.w;
                let rho2 = self.rho * self.rho;
                let value = (1.0 - w.two) * self.base_integral(n)?
                    + (w.one + 2.0 * w.two - 1.0) * self.base_integral(n + 2)? / rho2;
                Ok(AsymptoticMoment {
                    value,
                    method: MomentMethod::Quadrature,
                })
            }
        }
    }
}
