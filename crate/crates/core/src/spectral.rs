//! Fourier-space solution of the φ-family walk, used as an independent
//! oracle for the simulator and for the closed-form asymptotics.
//!
//! Ũ(k) = Diag(e^{−ik}, 1, e^{ik})·C(φ) has eigenvalues 1, e^{i(φ+ω)} and
//! e^{i(φ−ω)} with cos ω = −(2 + cos k)cosφ/3, ω ∈ [−π, 0].

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::coin::{in_basis, inner, Basis, CoinSpec, CoinState, Spinor, ONE, ZERO};
use crate::error::{Error, Result};
use crate::quadrature::{refine_periodic, PeriodicSpec};

/// Largest t accepted by the amplitude integrals.
pub const ORACLE_MAX_STEPS: usize = 50;

const DEGENERATE_NORM: f64 = 1e-14;

/// ω(k) = −arccos(−(2 + cos k)cosφ/3).
pub fn dispersion(k: f64, phi: f64) -> f64 {
    -(-(2.0 + k.cos()) * phi.cos() / 3.0).clamp(-1.0, 1.0).acos()
}

// 9 − (2 + cos k)²cos²φ as a product of two non-negative factors
fn velocity_radicand(k: f64, phi: f64) -> f64 {
    let c = phi.cos();
    let lower = 6.0 * (0.5 * phi).sin().powi(2) + 2.0 * c * (0.5 * k).sin().powi(2);
    lower * (3.0 + (2.0 + k.cos()) * c)
}

/// dω/dk = cosφ sin k / √(9 − (2 + cos k)²cos²φ); 0 where the root vanishes.
pub fn group_velocity(k: f64, phi: f64) -> f64 {
    let r = velocity_radicand(k, phi);
    if r <= 0.0 {
        return 0.0;
    }
    phi.cos() * k.sin() / r.sqrt()
}

/// d²ω/dk².
pub fn group_velocity_derivative(k: f64, phi: f64) -> f64 {
    let c = phi.cos();
    let r = velocity_radicand(k, phi);
    let (s, ck) = k.sin_cos();
    c * (ck * r - c * c * (2.0 + ck) * s * s) / (r * r.sqrt())
}

/// Eigen-decomposition of Ũ(k).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochSystem {
    pub k: f64,
    pub omega: f64,
    /// (1, e^{i(φ+ω)}, e^{i(φ−ω)})
    pub eigenvalues: [Complex64; 3],
    pub vectors: [Spinor; 3],
}

/// The stationary eigenvector v₁(k); it does not depend on φ.
pub fn stationary_vector(k: f64) -> Spinor {
    let a = (2.0 / (5.0 + k.cos())).sqrt();
    let e = Complex64::cis(k);
    [Complex64::new(a, 0.0), (ONE + e) * (0.5 * a), e * a]
}

/// Squared norm of the unnormalized v₂ (`sign` = +1) or v₃ (`sign` = −1).
pub fn normalization_factor(k: f64, phi: f64, sign: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    let ck = k.cos();
    let root = velocity_radicand(k, phi).sqrt();
    4.0 / 3.0 * c * c * (9.0 - 4.0 * c * c + sign * 2.0 * s * root - ck * ((4.0 + ck) * c * c - sign * s * root))
}

pub fn bloch_eigensystem(k: f64, phi: f64) -> Result<BlochSystem> {
    CoinSpec::phi(phi)?;
    let omega = dispersion(k, phi);
    let c = phi.cos();
    let mut vectors = [stationary_vector(k), [ZERO; 3], [ZERO; 3]];
    for (slot, sign) in [(1, 1.0), (2, -1.0)] {
        let th = phi + sign * omega;
        let back = Complex64::cis(-th);
        let u = [
            (Complex64::cis(-k) + back) * c,
            Complex64::new(omega.cos() + k.cos() * c, 0.0) + Complex64::cis(sign * omega) - Complex64::cis(-(phi + th)),
            (Complex64::cis(k) + back) * c,
        ];
        let n: f64 = u.iter().map(|x| x.norm_sqr()).sum();
        if n < DEGENERATE_NORM {
            return Err(Error::DegenerateNormalization { k });
        }
        let scale = n.sqrt().recip();
        vectors[slot] = u.map(|x| x * scale);
    }
    Ok(BlochSystem {
        k,
        omega,
        eigenvalues: [ONE, Complex64::cis(phi + omega), Complex64::cis(phi - omega)],
        vectors,
    })
}

fn standard_state(phi: f64, psi: &CoinState) -> Result<Spinor> {
    let spec = CoinSpec::phi(phi)?;
    Ok(*in_basis(psi, &spec, Basis::Standard).amplitudes())
}

fn project(sys: &BlochSystem, psi: &Spinor) -> [Complex64; 3] {
    sys.vectors.map(|v| inner(&v, psi))
}

/// fⱼ(k) = ⟨vⱼ(k), ψ_C⟩; `psi` may be given in either basis.
pub fn overlaps(k: f64, phi: f64, psi: &CoinState) -> Result<[Complex64; 3]> {
    let psi = standard_state(phi, psi)?;
    Ok(project(&bloch_eigensystem(k, phi)?, &psi))
}

/// Trapezoid sum over n nodes; when a node hits a degenerate eigenvector
/// the whole grid moves by half a cell.
fn sample_grid<T, F>(n: usize, mut fresh: impl FnMut() -> T, mut add: F) -> Result<T>
where
    F: FnMut(&mut T, f64, f64) -> Result<()>,
{
    let h = TAU / n as f64;
    let weight = h / TAU;
    'offsets: for offset in [0.0, 0.5] {
        let mut acc = fresh();
        for j in 0..n {
            let k = (j as f64 + offset) * h;
            match add(&mut acc, k, weight) {
                Ok(()) => {}
                Err(Error::DegenerateNormalization { .. }) if offset == 0.0 => continue 'offsets,
                Err(e) => return Err(e),
            }
        }
        return Ok(acc);
    }
    unreachable!("the half-cell grid is tried last")
}

fn spinors_gap(a: &[Spinor], b: &[Spinor], spec: &PeriodicSpec) -> (bool, f64) {
    let mut gap = 0.0f64;
    let mut scale = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        for (p, q) in x.iter().zip(y) {
            gap = gap.max((p - q).norm());
            scale = scale.max(q.norm());
        }
    }
    (gap <= spec.abs_tol.max(spec.rel_tol * scale), gap)
}

fn fourier_profile<S>(sites: &[i64], spectrum: S) -> Result<Vec<Spinor>>
where
    S: Fn(f64) -> Result<Spinor>,
{
    let spec = PeriodicSpec::default();
    let (profile, _, _) = refine_periodic(
        &spec,
        |n| {
            sample_grid(
                n,
                || vec![[ZERO; 3]; sites.len()],
                |acc, k, weight| {
                    let s = spectrum(k)?;
                    for (slot, &m) in acc.iter_mut().zip(sites) {
                        let e = Complex64::cis(-(m as f64) * k) * weight;
                        for (a, x) in slot.iter_mut().zip(&s) {
                            *a += e * x;
                        }
                    }
                    Ok(())
                },
            )
        },
        |a: &Vec<Spinor>, b: &Vec<Spinor>| spinors_gap(a, b, &spec),
    )?;
    Ok(profile)
}

fn evolved_spectrum(t: usize, phi: f64, psi: Spinor) -> impl Fn(f64) -> Result<Spinor> {
    move |k| {
        let sys = bloch_eigensystem(k, phi)?;
        let f = project(&sys, &psi);
        let mut s = [ZERO; 3];
        for ((lambda, fj), v) in sys.eigenvalues.iter().zip(f).zip(&sys.vectors) {
            let coeff = lambda.powu(t as u32) * fj;
            for (a, x) in s.iter_mut().zip(v) {
                *a += coeff * x;
            }
        }
        Ok(s)
    }
}

fn check_oracle_budget(t: usize) -> Result<()> {
    if t > ORACLE_MAX_STEPS {
        return Err(Error::OracleRegimeExceeded {
            t,
            max: ORACLE_MAX_STEPS,
        });
    }
    Ok(())
}

/// ψ(m, t) = ∫ e^{−imk} Σⱼ λⱼᵗ fⱼ(k) vⱼ(k) dk/2π.
pub fn amplitude_integral(m: i64, t: usize, phi: f64, psi: &CoinState) -> Result<Spinor> {
    check_oracle_budget(t)?;
    let psi = standard_state(phi, psi)?;
    Ok(fourier_profile(&[m], evolved_spectrum(t, phi, psi))?[0])
}

/// ψ(m, t) for m = −t..=t.
pub fn amplitude_profile(t: usize, phi: f64, psi: &CoinState) -> Result<Vec<Spinor>> {
    check_oracle_budget(t)?;
    let psi = standard_state(phi, psi)?;
    let sites: Vec<i64> = (-(t as i64)..=t as i64).collect();
    fourier_profile(&sites, evolved_spectrum(t, phi, psi))
}

fn stationary_spectrum(psi: Spinor) -> impl Fn(f64) -> Result<Spinor> {
    move |k| {
        let v = stationary_vector(k);
        let f = inner(&v, &psi);
        Ok(v.map(|x| f * x))
    }
}

/// ψ∞(m) = ∫ e^{−imk} f₁(k) v₁(k) dk/2π.
pub fn stationary_amplitude(m: i64, phi: f64, psi: &CoinState) -> Result<Spinor> {
    let psi = standard_state(phi, psi)?;
    Ok(fourier_profile(&[m], stationary_spectrum(psi))?[0])
}

/// ψ∞(m) for m = −m_max..=m_max.
pub fn stationary_profile(m_max: usize, phi: f64, psi: &CoinState) -> Result<Vec<Spinor>> {
    let psi = standard_state(phi, psi)?;
    let sites: Vec<i64> = (-(m_max as i64)..=m_max as i64).collect();
    fourier_profile(&sites, stationary_spectrum(psi))
}

/// lim ⟨(m/t)ⁿ⟩ = ∫ (dω/dk)ⁿ (|f₂|² + (−1)ⁿ|f₃|²) dk/2π.
pub fn limit_moment(n: u32, phi: f64, psi: &CoinState) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("moment order must be at least 1".into()));
    }
    let psi = standard_state(phi, psi)?;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let spec = PeriodicSpec::default();
    let (value, _, _) = refine_periodic(
        &spec,
        |pts| {
            sample_grid(
                pts,
                || 0.0,
                |acc, k, weight| {
                    let f = project(&bloch_eigensystem(k, phi)?, &psi);
                    let v = group_velocity(k, phi);
                    *acc += weight * v.powi(n as i32) * (f[1].norm_sqr() + sign * f[2].norm_sqr());
                    Ok(())
                },
            )
        },
        |a: &f64, b: &f64| {
            let gap = (a - b).abs();
            (gap <= spec.abs_tol.max(spec.rel_tol * b.abs()), gap)
        },
    )?;
    Ok(value)
}

/// k₀ ∈ [0, π), the maximizer of dω/dk on (0, π).
///
/// Uses k₀ = arccos((9 − 5cos²φ − 3sinφ√(9 − cos²φ)) / (4cos²φ)); where
/// that argument reaches 1 (φ = 0) the maximizer is found by golden-section
/// search instead.
pub fn velocity_split_point(phi: f64) -> Result<f64> {
    CoinSpec::phi(phi)?;
    let s = phi.sin();
    let s2 = s * s;
    // the numerator equals 16cos⁴φ / (4 + 5s² + 3s√(8 + s²))
    let arg = 4.0 * (1.0 - s2) / (4.0 + 5.0 * s2 + 3.0 * s * (8.0 + s2).sqrt());
    if arg < 1.0 {
        return Ok(arg.acos());
    }
    Ok(golden_max(|k| group_velocity(k, phi), 0.0, PI))
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if b - a <= 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    0.5 * (a + b)
}
