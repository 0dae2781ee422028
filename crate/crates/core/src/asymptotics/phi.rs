use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{LazyLock, RwLock};

use num_complex::Complex64;

use crate::coin::{CoinSpec, Spinor};
use crate::error::{Error, Result};
use crate::quadrature::try_integrate;

use super::{check_amplitudes, clamped_sqrt, moment_quadrature, AsymptoticMoment, LimitDistribution, MomentMethod, Weights};

/// 5 − 2√6, the localization decay base.
const Q: f64 = 0.101_020_514_433_644_2;
const SQRT3: f64 = 1.732_050_807_568_877_2;
const SQRT6: f64 = 2.449_489_742_783_178;

/// η(φ) = √(3 − cos²φ − sinφ·√(9 − cos²φ)) / √6.
pub fn peak_velocity(phi: f64) -> Result<f64> {
    CoinSpec::phi(phi)?;
    Ok(eta(phi.cos(), phi.sin()))
}

// 3 − c² − s√(9 − c²) = 4c² / (2 + s² + s√(8 + s²)), free of cancellation
// as φ → π/2
fn eta(c: f64, s: f64) -> f64 {
    let s2 = s * s;
    (4.0 * c * c / (6.0 * (2.0 + s2 + s * (8.0 + s2).sqrt()))).sqrt()
}

/// Auxiliary functions of the φ-family density at one velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiDensityTerms {
    pub theta: f64,
    pub phi_plus: f64,
    pub phi_minus: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub omega: f64,
    pub xi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Trig {
    c: f64,
    s: f64,
    tan: f64,
    eta: f64,
    /// sinφ·√(1 − cos²φ/9)
    shift: f64,
}

impl Trig {
    fn new(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self {
            c,
            s,
            tan: s / c,
            eta: eta(c, s),
            shift: s * (1.0 - c * c / 9.0).sqrt(),
        }
    }

    fn terms(&self, v: f64) -> Result<PhiDensityTerms> {
        let Trig { c, s, tan, eta, shift } = *self;
        if !(v.abs() < eta) {
            return Err(Error::OutsideSupport { v, bound: eta });
        }
        let gap = (eta - v) * (eta + v);
        let theta = clamped_sqrt(gap * (gap + shift))?;
        let v2 = v * v;
        let base = 9.0 * (1.0 - v2) - (5.0 + 3.0 * v2) * c * c;
        let phi_plus = clamped_sqrt(base + 12.0 * theta * c)?;
        // Φ₊²Φ₋² = 9 sin²φ (9 − cos²φ)(1 − v²)², so Φ₋ needs no subtraction
        let phi_minus = if phi_plus > 0.0 {
            3.0 * s * (9.0 - c * c).sqrt() * (1.0 - v2) / phi_plus
        } else {
            clamped_sqrt(base - 12.0 * theta * c)?
        };
        let lambda_plus = phi_plus + phi_minus;
        let lambda_minus = phi_plus - phi_minus;
        let den = 8.0 * c * c + 3.0 * v2 * s * s;
        let omega = 4.0 * c * ((5.0 - 3.0 * v2) * c * lambda_plus + 3.0 * theta * lambda_minus) / den;
        let xi = 3.0 * SQRT6 * tan * ((v2 + c * c) * lambda_plus - theta * c * lambda_minus) / den;
        Ok(PhiDensityTerms {
            theta,
            phi_plus,
            phi_minus,
            lambda_plus,
            lambda_minus,
            omega,
            xi,
        })
    }
}

/// Θ, Φ±, Λ±, Ω and Ξ at velocity `v`, |v| < η(φ).
pub fn density_terms(phi: f64, v: f64) -> Result<PhiDensityTerms> {
    CoinSpec::phi(phi)?;
    Trig::new(phi).terms(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Basis {
    Lambda,
    Omega,
    Xi,
}

type CacheKey = (u64, u32, Basis);

static BASIS_INTEGRALS: LazyLock<RwLock<HashMap<CacheKey, f64>>> = LazyLock::new(Default::default);

/// Limit distribution of the φ-family walk for eigenbasis amplitudes g.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiAsymptotics {
    phi: f64,
    g: Spinor,
    w: Weights,
    trig: Trig,
}

impl PhiAsymptotics {
    pub fn new(phi: f64, g: Spinor) -> Result<Self> {
        CoinSpec::phi(phi)?;
        check_amplitudes(&g)?;
        Ok(Self {
            phi,
            g,
            w: Weights::new(&g),
            trig: Trig::new(phi),
        })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn eta(&self) -> f64 {
        self.trig.eta
    }

    pub fn terms(&self, v: f64) -> Result<PhiDensityTerms> {
        self.trig.terms(v)
    }

    fn even_coefficients(&self) -> (f64, f64) {
        let w = &self.w;
        (3.0 * w.one + 5.0 * w.two - 2.0, 1.0 - w.one - 2.0 * w.two)
    }

    fn odd_coefficients(&self) -> (f64, f64) {
        let w = &self.w;
        (-SQRT3 * (w.re12 - w.im12 * self.trig.tan), -w.im2p)
    }

    /// The density bracket written literally with complex coherences.
    pub fn bracket_complex(&self, v: f64) -> Result<Complex64> {
        let t = self.terms(v)?;
        let [gp, g1, g2] = self.g;
        let i = Complex64::i();
        let (a, b) = self.even_coefficients();
        let c12 = g1 * g2.conj();
        let mixed = c12 + c12.conj() + i * (c12 - c12.conj()) * self.trig.tan;
        let c2p = g2 * gp.conj();
        Ok(a * t.lambda_plus + b * t.omega - SQRT3 * v * mixed * t.lambda_plus + i * v * (c2p - c2p.conj()) * t.xi)
    }

    /// ∫ vⁿ X / (6π(1 − v²)Θ) dv over (−η, η) for X ∈ {Λ₊, Ω, Ξ}, memoized.
    fn basis_integral(&self, n: u32, basis: Basis) -> Result<f64> {
        let key = (self.phi.to_bits(), n, basis);
        if let Some(&v) = BASIS_INTEGRALS.read().expect("cache lock").get(&key) {
            return Ok(v);
        }
        let eta = self.trig.eta;
        let r = try_integrate(
            |v| {
                let t = self.terms(v)?;
                let x = match basis {
                    Basis::Lambda => t.lambda_plus,
                    Basis::Omega => t.omega,
                    Basis::Xi => t.xi,
                };
                Ok(v.powi(n as i32) * x / (6.0 * PI * (1.0 - v * v) * t.theta))
            },
            -eta,
            eta,
            &moment_quadrature(),
        )?;
        BASIS_INTEGRALS
            .write()
            .expect("cache lock")
            .insert(key, r.value);
        Ok(r.value)
    }

    /// Δ₁(φ) = ∫ v²Λ₊ / (6π(1 − v²)Θ) dv.
    pub fn delta1(&self) -> Result<f64> {
        self.basis_integral(2, Basis::Lambda)
    }

    /// Δ₂(φ) = ∫ v²Ω / (6π(1 − v²)Θ) dv.
    pub fn delta2(&self) -> Result<f64> {
        self.basis_integral(2, Basis::Omega)
    }

    /// ∫ vⁿ w(v) dv from the even (Λ₊, Ω) terms of the density only.
    pub fn even_part_moment(&self, n: u32) -> Result<f64> {
        let (a, b) = self.even_coefficients();
        Ok(a * self.basis_integral(n, Basis::Lambda)? + b * self.basis_integral(n, Basis::Omega)?)
    }

    fn odd_moment(&self, n: u32) -> Result<AsymptoticMoment> {
        let (a, b) = self.odd_coefficients();
        let mut value = 0.0;
        if a != 0.0 {
            value += a * self.basis_integral(n + 1, Basis::Lambda)?;
        }
        if b != 0.0 {
            value += b * self.basis_integral(n + 1, Basis::Xi)?;
        }
        let method = if a == 0.0 && b == 0.0 {
            MomentMethod::ClosedForm
        } else {
            MomentMethod::Quadrature
        };
        Ok(AsymptoticMoment { value, method })
    }
}

impl LimitDistribution for PhiAsymptotics {
    fn spec(&self) -> CoinSpec {
        CoinSpec::phi(self.phi).expect("validated on construction")
    }

    fn amplitudes(&self) -> &Spinor {
        &self.g
    }

    fn peak_velocity(&self) -> f64 {
        self.trig.eta
    }

    fn density(&self, v: f64) -> Result<f64> {
        let t = self.terms(v)?;
        let (a, b) = self.even_coefficients();
        let (oa, ob) = self.odd_coefficients();
        let bracket = a * t.lambda_plus + b * t.omega + v * (oa * t.lambda_plus + ob * t.xi);
        Ok(bracket / (6.0 * PI * (1.0 - v * v) * t.theta))
    }

    fn continuous_weight(&self) -> f64 {
        let w = &self.w;
        SQRT6 - 2.0 + (3.0 - SQRT6) * w.one + Q * w.two
    }

    fn localization(&self, m: i64) -> f64 {
        let g = &self.g;
        if m == 0 {
            return Q * (3.0 * self.w.plus + 2.0 * self.w.two);
        }
        let coupling = if m > 0 { g[0] + g[2] } else { g[0] - g[2] };
        12.0 * (Q * Q).powf(m.unsigned_abs() as f64) * coupling.norm_sqr()
    }

    fn localization_total(&self) -> f64 {
        (SQRT6 - 2.0) * self.w.two + (3.0 - SQRT6) * self.w.plus
    }

    fn second_moment(&self) -> Result<f64> {
        self.even_part_moment(2)
    }

    fn moment(&self, n: u32) -> Result<AsymptoticMoment> {
        match n {
            0 => Err(Error::InvalidArgument("moment order must be at least 1".into())),
            n if n % 2 == 1 => self.odd_moment(n),
            n => Ok(AsymptoticMoment {
                value: self.even_part_moment(n)?,
                method: MomentMethod::Quadrature,
            }),
        }
    }
}
