//! Adaptive Gauss–Kronrod integration with endpoint-singularity
//! substitutions, plus the uniform trapezoidal rule for periodic integrands.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Which endpoints carry an integrable 1/√(distance) singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EndpointSingularity {
    #[default]
    None,
    InverseSqrtBoth,
    InverseSqrtLeft,
    InverseSqrtRight,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub endpoint_singularity: EndpointSingularity,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 4096,
            endpoint_singularity: EndpointSingularity::None,
        }
    }
}

impl QuadratureSpec {
    pub fn with_singularity(mut self, s: EndpointSingularity) -> Self {
        self.endpoint_singularity = s;
        self
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidArgument(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_subdivisions < 8 {
            return Err(Error::InvalidArgument(
                "max_subdivisions must be at least 8".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
}

// 15-point Kronrod abscissae (non-negative half) and weights, with the
// embedded 7-point Gauss weights at the odd-indexed abscissae.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel { a, b, value, error }
}

fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    let mut panels = vec![kronrod15(&f, a, b)];
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if !value.is_finite() {
            return Err(Error::QuadratureFailure {
                subdivisions: panels.len(),
                error_estimate: f64::INFINITY,
            });
        }
        if error <= spec.abs_tol.max(spec.rel_tol * value.abs()) {
            return Ok(QuadResult {
                value,
                error_estimate: error,
            });
        }
        if panels.len() >= spec.max_subdivisions {
            return Err(Error::QuadratureFailure {
                subdivisions: panels.len(),
                error_estimate: error,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // panel cannot be split further in floating point
            return Err(Error::QuadratureFailure {
                subdivisions: panels.len() + 1,
                error_estimate: error,
            });
        }
        panels.push(kronrod15(&f, p.a, mid));
        panels.push(kronrod15(&f, mid, p.b));
    }
}

fn inside(v: f64, a: f64, b: f64) -> f64 {
    if v <= a {
        a.next_up()
    } else if v >= b {
        b.next_down()
    } else {
        v
    }
}

/// Integrates `f` over `(a, b)`.
///
/// With an inverse-square-root endpoint singularity the integrand is first
/// mapped to a bounded one: `v = c + h·sin θ` for both ends, `v = a + L s²`
/// or `v = b − L s²` for one end. `f` is never evaluated at a singular
/// endpoint.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    spec.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "integration bounds must satisfy a < b, got ({a}, {b})"
        )));
    }
    let len = b - a;
    match spec.endpoint_singularity {
        EndpointSingularity::None => adaptive(f, a, b, spec),
        EndpointSingularity::InverseSqrtBoth => {
            let half = 0.5 * len;
            let g = |theta: f64| {
                // distance to the nearer endpoint is 2h·sin²((π/2 − |θ|)/2)
                let gap = 2.0 * half * ((FRAC_PI_2 - theta.abs()) * 0.5).sin().powi(2);
                let v = if theta >= 0.0 { b - gap } else { a + gap };
                f(inside(v, a, b)) * half * theta.cos()
            };
            adaptive(g, -FRAC_PI_2, FRAC_PI_2, spec)
        }
        EndpointSingularity::InverseSqrtLeft => {
            let g = |s: f64| f(inside(a + len * s * s, a, b)) * 2.0 * len * s;
            adaptive(g, 0.0, 1.0, spec)
        }
        EndpointSingularity::InverseSqrtRight => {
            let g = |s: f64| f(inside(b - len * s * s, a, b)) * 2.0 * len * s;
            adaptive(g, 0.0, 1.0, spec)
        }
    }
}

/// Fallible-integrand variant of [`integrate`]: the first error raised by
/// `f` aborts the integration and is returned.
pub fn try_integrate<F: Fn(f64) -> Result<f64>>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let failure = std::cell::RefCell::new(None);
    let res = integrate(
        |x| match f(x) {
            Ok(y) => y,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        a,
        b,
        spec,
    );
    match failure.into_inner() {
        Some(e) => Err(e),
        None => res,
    }
}

/// Grid-doubling controls for the periodic trapezoidal rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicSpec {
    pub initial_points: usize,
    pub max_points: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for PeriodicSpec {
    fn default() -> Self {
        Self {
            initial_points: 1 << 12,
            max_points: 1 << 20,
            rel_tol: 1e-12,
            abs_tol: 1e-14,
        }
    }
}

/// Repeats `estimate(n)` with n doubling from `initial_points` until two
/// successive estimates are within `distance` tolerance.
///
/// `converged(prev, next)` returns whether the pair agrees, and the gap
/// between them. The final estimate, its grid size and last gap are returned.
pub fn refine_periodic<T, E, C>(spec: &PeriodicSpec, mut estimate: E, converged: C) -> Result<(T, usize, f64)>
where
    E: FnMut(usize) -> Result<T>,
    C: Fn(&T, &T) -> (bool, f64),
{
    if spec.initial_points < 2 || spec.max_points < spec.initial_points {
        return Err(Error::InvalidArgument("invalid periodic grid sizes".into()));
    }
    let mut n = spec.initial_points;
    let mut prev = estimate(n)?;
    loop {
        let next_n = n * 2;
        if next_n > spec.max_points {
            let (_, gap) = converged(&prev, &prev);
            return Err(Error::QuadratureFailure {
                subdivisions: n,
                error_estimate: gap,
            });
        }
        let next = estimate(next_n)?;
        let (ok, gap) = converged(&prev, &next);
        if ok {
            return Ok((next, next_n, gap));
        }
        if !gap.is_finite() {
            return Err(Error::QuadratureFailure {
                subdivisions: next_n,
                error_estimate: gap,
            });
        }
        prev = next;
        n = next_n;
    }
}

/// Plain n-point trapezoidal rule for ∫ over one period starting at
/// `start`, nodes at `start + (j + offset)·h`.
pub fn trapezoid_periodic<F: FnMut(f64) -> f64>(mut f: F, start: f64, period: f64, n: usize, offset: f64) -> f64 {
    let h = period / n as f64;
    let sum: f64 = (0..n).map(|j| f(start + (j as f64 + offset) * h)).sum();
    sum * h
}

/// ∫ over one period of a smooth periodic `f`, by the trapezoidal rule
/// with grid doubling.
pub fn integrate_periodic<F: Fn(f64) -> f64>(
    f: F,
    start: f64,
    period: f64,
    spec: &PeriodicSpec,
) -> Result<QuadResult> {
    let (value, _, gap) = refine_periodic(
        spec,
        |n| Ok(trapezoid_periodic(&f, start, period, n, 0.0)),
        |a: &f64, b: &f64| {
            let gap = (a - b).abs();
            (gap <= spec.abs_tol.max(spec.rel_tol * b.abs()), gap)
        },
    )?;
    Ok(QuadResult {
        value,
        error_estimate: gap,
    })
}
