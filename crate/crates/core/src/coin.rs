//! Coin operators of the two walk families and their eigenvector bases.
//!
//! Both families contain the 3×3 Grover coin: the ρ-family at ρ = 1/√3 and
//! the φ-family at φ = 0. Coin states live in the standard basis
//! {|L⟩, |S⟩, |R⟩} or in the basis of coin eigenvectors, where all of the
//! limit-distribution formulas take their simplest form.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt;
use std::sync::LazyLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Three coin amplitudes, ordered (L, S, R) in the standard basis and
/// (+, 1, 2) in the eigenbasis.
pub type Spinor = [Complex64; 3];

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance on Σ|a|² − 1 accepted by [`CoinState::new`].
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Eigenvector-parametrized family C(ρ), ρ ∈ (0, 1).
    Rho,
    /// Eigenvalue-parametrized family C(φ), φ ∈ [0, π/2).
    Phi,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Rho => f.write_str("rho"),
            Family::Phi => f.write_str("phi"),
        }
    }
}

/// A validated choice of coin family and parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinSpec {
    family: Family,
    parameter: f64,
}

impl CoinSpec {
    pub fn new(family: Family, parameter: f64) -> Result<Self> {
        let ok = match family {
            Family::Rho => parameter > 0.0 && parameter < 1.0,
            Family::Phi => (0.0..FRAC_PI_2).contains(&parameter),
        };
        if ok {
            Ok(Self { family, parameter })
        } else {
            Err(Error::ParameterOutOfRange {
                family,
                value: parameter,
            })
        }
    }

    pub fn rho(rho: f64) -> Result<Self> {
        Self::new(Family::Rho, rho)
    }

    pub fn phi(phi: f64) -> Result<Self> {
        Self::new(Family::Phi, phi)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn parameter(&self) -> f64 {
        self.parameter
    }
}

/// A 3×3 unitary coin in the standard basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix([[Complex64; 3]; 3]);

impl CoinMatrix {
    pub fn from_entries(entries: [[Complex64; 3]; 3]) -> Self {
        Self(entries)
    }

    pub fn entries(&self) -> &[[Complex64; 3]; 3] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, x: &Spinor) -> Spinor {
        let m = &self.0;
        [
            m[0][0] * x[0] + m[0][1] * x[1] + m[0][2] * x[2],
            m[1][0] * x[0] + m[1][1] * x[1] + m[1][2] * x[2],
            m[2][0] * x[0] + m[2][1] * x[1] + m[2][2] * x[2],
        ]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = [[ZERO; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.0[j][i].conj();
            }
        }
        Self(out)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = [[ZERO; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..3).map(|l| self.0[i][l] * rhs.0[l][j]).sum();
            }
        }
        Self(out)
    }

    /// max |(C†C − I)ᵢⱼ|
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let id = if i == j { ONE } else { ZERO };
                worst = worst.max((p.0[i][j] - id).norm());
            }
        }
        worst
    }

    /// max |Cᵢⱼ − Dᵢⱼ|
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Standard,
    Eigen,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Standard => f.write_str("standard"),
            Basis::Eigen => f.write_str("eigen"),
        }
    }
}

/// A normalized coin state tagged with the basis its amplitudes refer to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinState {
    amplitudes: Spinor,
    basis: Basis,
}

impl CoinState {
    pub fn new(amplitudes: Spinor, basis: Basis) -> Result<Self> {
        let norm_sqr = norm_sqr(&amplitudes);
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes, basis })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: Spinor, basis: Basis) -> Result<Self> {
        let norm_sqr = norm_sqr(&amplitudes);
        if !(norm_sqr.is_finite() && norm_sqr > 0.0) {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let s = norm_sqr.sqrt().recip();
        Ok(Self {
            amplitudes: amplitudes.map(|a| a * s),
            basis,
        })
    }

    pub fn standard(amplitudes: Spinor) -> Result<Self> {
        Self::new(amplitudes, Basis::Standard)
    }

    pub fn eigen(amplitudes: Spinor) -> Result<Self> {
        Self::new(amplitudes, Basis::Eigen)
    }

    /// Real eigenbasis amplitudes (g₊, g₁, g₂), normalized on the way in.
    pub fn eigen_real(g_plus: f64, g1: f64, g2: f64) -> Result<Self> {
        Self::normalized(
            [g_plus, g1, g2].map(|x| Complex64::new(x, 0.0)),
            Basis::Eigen,
        )
    }

    pub fn amplitudes(&self) -> &Spinor {
        &self.amplitudes
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }
}

pub(crate) fn norm_sqr(x: &Spinor) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum()
}

/// ⟨a|b⟩, antilinear in the first slot.
pub(crate) fn inner(a: &Spinor, b: &Spinor) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Orthonormal coin eigenvectors in the standard basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenBasis {
    /// Eigenvalue +1.
    pub plus: CoinState,
    pub minus1: CoinState,
    pub minus2: CoinState,
    /// Eigenvalues matching (plus, minus1, minus2).
    pub eigenvalues: [Complex64; 3],
}

impl EigenBasis {
    pub fn vectors(&self) -> [&Spinor; 3] {
        [
            self.plus.amplitudes(),
            self.minus1.amplitudes(),
            self.minus2.amplitudes(),
        ]
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The γ-vectors of the φ-family; they do not depend on φ.
static GAMMA_VECTORS: LazyLock<[Spinor; 3]> = LazyLock::new(|| {
    let a = 3f64.sqrt().recip();
    let b = 6f64.sqrt().recip();
    let c = FRAC_1_SQRT_2;
    [
        [real(a), real(a), real(a)],
        [real(b), real(-2.0 * b), real(b)],
        [real(c), ZERO, real(-c)],
    ]
});

fn sigma_vectors(rho: f64) -> [Spinor; 3] {
    let s = (1.0 - rho * rho).sqrt();
    let h = s * FRAC_1_SQRT_2;
    let r = rho * FRAC_1_SQRT_2;
    [
        [real(h), real(rho), real(h)],
        [real(r), real(-s), real(r)],
        [real(FRAC_1_SQRT_2), ZERO, real(-FRAC_1_SQRT_2)],
    ]
}

fn basis_vectors(spec: &CoinSpec) -> [Spinor; 3] {
    match spec.family {
        Family::Rho => sigma_vectors(spec.parameter),
        Family::Phi => *GAMMA_VECTORS,
    }
}

/// The coin matrix of the chosen family.
pub fn build_coin(spec: &CoinSpec) -> CoinMatrix {
    match spec.family {
        Family::Rho => {
            let r = spec.parameter;
            let r2 = r * r;
            let off = real(r * (2.0 - 2.0 * r2).sqrt());
            let corner = real(1.0 - r2);
            let diag = real(-r2);
            CoinMatrix([
                [diag, off, corner],
                [off, real(2.0 * r2 - 1.0), off],
                [corner, off, diag],
            ])
        }
        Family::Phi => {
            let e = Complex64::cis(2.0 * spec.parameter);
            let sixth = 1.0 / 6.0;
            let a = (-ONE - e) * sixth;
            let b = (ONE + e) * (2.0 * sixth);
            let c = (real(5.0) - e) * sixth;
            let d = (ONE - e * 2.0) * (2.0 * sixth);
            CoinMatrix([[a, b, c], [b, d, b], [c, b, a]])
        }
    }
}

pub fn eigenbasis(spec: &CoinSpec) -> EigenBasis {
    let [p, m1, m2] = basis_vectors(spec);
    let eigenvalues = match spec.family {
        Family::Rho => [ONE, -ONE, -ONE],
        Family::Phi => [ONE, -Complex64::cis(2.0 * spec.parameter), -ONE],
    };
    let wrap = |amplitudes| CoinState {
        amplitudes,
        basis: Basis::Standard,
    };
    EigenBasis {
        plus: wrap(p),
        minus1: wrap(m1),
        minus2: wrap(m2),
        eigenvalues,
    }
}

/// Expands eigenbasis amplitudes (g₊, g₁, g₂) in the standard basis.
pub fn to_standard(state: &CoinState, spec: &CoinSpec) -> Result<CoinState> {
    if state.basis == Basis::Standard {
        return Err(Error::BasisMismatch(Basis::Standard));
    }
    let vs = basis_vectors(spec);
    let g = &state.amplitudes;
    let mut out = [ZERO; 3];
    for (gj, v) in g.iter().zip(&vs) {
        for (o, vi) in out.iter_mut().zip(v) {
            *o += gj * vi;
        }
    }
    Ok(CoinState {
        amplitudes: out,
        basis: Basis::Standard,
    })
}

/// Projects a standard-basis state onto the coin eigenvectors.
pub fn to_eigen(state: &CoinState, spec: &CoinSpec) -> Result<CoinState> {
    if state.basis == Basis::Eigen {
        return Err(Error::BasisMismatch(Basis::Eigen));
    }
    let vs = basis_vectors(spec);
    Ok(CoinState {
        amplitudes: vs.map(|v| inner(&v, &state.amplitudes)),
        basis: Basis::Eigen,
    })
}

/// Returns the state in the requested basis, converting only if needed.
pub fn in_basis(state: &CoinState, spec: &CoinSpec, basis: Basis) -> CoinState {
    if state.basis == basis {
        return *state;
    }
    match basis {
        Basis::Standard => to_standard(state, spec),
        Basis::Eigen => to_eigen(state, spec),
    }
    .expect("basis tags checked above")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grover() -> CoinMatrix {
        let t = 1.0 / 3.0;
        let d = real(-t);
        let o = real(2.0 * t);
        CoinMatrix([[d, o, o], [o, d, o], [o, o, d]])
    }

    fn apply_diff(c: &CoinMatrix, v: &Spinor, lambda: Complex64) -> f64 {
        let cv = c.apply(v);
        cv.iter()
            .zip(v)
            .map(|(a, b)| (a - lambda * b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn rho_grover_point() {
        let c = build_coin(&CoinSpec::rho(3f64.sqrt().recip()).unwrap());
        assert!(c.max_abs_diff(&grover()) < 1e-15);
    }

    #[test]
    fn phi_zero_is_grover() {
        let c = build_coin(&CoinSpec::phi(0.0).unwrap());
        assert!(c.max_abs_diff(&grover()) < 1e-15);
    }

    #[test]
    fn rho_half_first_row() {
        let c = build_coin(&CoinSpec::rho(0.5).unwrap());
        let row = c.entries()[0];
        assert!((row[0] - real(-0.25)).norm() < 1e-15);
        assert!((row[1] - real(0.5 * 1.5f64.sqrt())).norm() < 1e-15);
        assert!((row[2] - real(0.75)).norm() < 1e-15);
        let n: f64 = row.iter().map(|x| x.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-15);
    }

    #[test]
    fn boundary_parameters_rejected() {
        for r in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(matches!(
                CoinSpec::rho(r),
                Err(Error::ParameterOutOfRange { family: Family::Rho, .. })
            ));
        }
        for p in [FRAC_PI_2, -1e-3, 2.0, f64::NAN] {
            assert!(matches!(
                CoinSpec::phi(p),
                Err(Error::ParameterOutOfRange { family: Family::Phi, .. })
            ));
        }
        assert!(CoinSpec::phi(0.0).is_ok());
    }

    #[test]
    fn symmetry_of_coins() {
        for spec in [CoinSpec::rho(0.3).unwrap(), CoinSpec::phi(0.9).unwrap()] {
            let c = build_coin(&spec);
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(c.entries()[i][j], c.entries()[j][i]);
                    if spec.family() == Family::Rho {
                        assert_eq!(c.entries()[i][j].im, 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_plus_at_grover_point() {
        let spec = CoinSpec::rho(3f64.sqrt().recip()).unwrap();
        let b = eigenbasis(&spec);
        let s = 3f64.sqrt().recip();
        for a in b.plus.amplitudes() {
            assert!((a - real(s)).norm() < 1e-15);
        }
        assert!(apply_diff(&build_coin(&spec), b.plus.amplitudes(), ONE) < 1e-15);
    }

    #[test]
    fn gamma2_minus_is_antisymmetric() {
        for phi in [0.0, 0.4, 1.2] {
            let spec = CoinSpec::phi(phi).unwrap();
            let b = eigenbasis(&spec);
            let v = b.minus2.amplitudes();
            assert_eq!(v[0], real(FRAC_1_SQRT_2));
            assert_eq!(v[1], ZERO);
            assert_eq!(v[2], real(-FRAC_1_SQRT_2));
            assert_eq!(b.eigenvalues[2], -ONE);
            assert!(apply_diff(&build_coin(&spec), v, -ONE) < 1e-12);
        }
    }

    #[test]
    fn sigma1_minus_at_point_eight() {
        let spec = CoinSpec::rho(0.8).unwrap();
        let b = eigenbasis(&spec);
        assert!(apply_diff(&build_coin(&spec), b.minus1.amplitudes(), -ONE) < 1e-12);
    }

    #[test]
    fn eigen_to_standard_examples() {
        let rho: f64 = 0.35;
        let spec = CoinSpec::rho(rho).unwrap();
        let s = CoinState::eigen([ONE, ZERO, ZERO]).unwrap();
        let std = to_standard(&s, &spec).unwrap();
        let h = ((1.0 - rho * rho) / 2.0).sqrt();
        let want = [h, rho, h];
        for (a, w) in std.amplitudes().iter().zip(want) {
            assert!((a - real(w)).norm() < 1e-15);
        }
        let s = CoinState::eigen([ZERO, ZERO, ONE]).unwrap();
        let std = to_standard(&s, &spec).unwrap();
        let want = [FRAC_1_SQRT_2, 0.0, -FRAC_1_SQRT_2];
        for (a, w) in std.amplitudes().iter().zip(want) {
            assert!((a - real(w)).norm() < 1e-15);
        }
    }

    #[test]
    fn basis_mismatch() {
        let spec = CoinSpec::rho(0.5).unwrap();
        let s = CoinState::standard([ZERO, ONE, ZERO]).unwrap();
        assert_eq!(to_standard(&s, &spec), Err(Error::BasisMismatch(Basis::Standard)));
        let e = to_eigen(&s, &spec).unwrap();
        assert_eq!(to_eigen(&e, &spec), Err(Error::BasisMismatch(Basis::Eigen)));
    }

    #[test]
    fn normalization_checked() {
        let bad = [real(0.9f64.sqrt()), ZERO, ZERO];
        assert!(matches!(
            CoinState::standard(bad),
            Err(Error::NotNormalized { .. })
        ));
        assert!(CoinState::normalized([ZERO; 3], Basis::Eigen).is_err());
    }

    fn spec_strategy() -> impl Strategy<Value = CoinSpec> {
        prop_oneof![
            (1e-3f64..0.999).prop_map(|r| CoinSpec::rho(r).unwrap()),
            (0.0f64..1.5700).prop_map(|p| CoinSpec::phi(p).unwrap()),
        ]
    }

    fn state_strategy() -> impl Strategy<Value = Spinor> {
        proptest::array::uniform3((-1.0f64..1.0, -1.0f64..1.0))
            .prop_filter("non-zero", |a| a.iter().any(|(x, y)| x.abs() + y.abs() > 1e-3))
            .prop_map(|a| a.map(|(x, y)| Complex64::new(x, y)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn coins_are_unitary(spec in spec_strategy()) {
            prop_assert!(build_coin(&spec).unitarity_defect() <= 1e-12);
        }

        #[test]
        fn eigen_equations_hold(spec in spec_strategy()) {
            let c = build_coin(&spec);
            let b = eigenbasis(&spec);
            let vs = b.vectors();
            for (v, l) in vs.iter().zip(b.eigenvalues) {
                prop_assert!(apply_diff(&c, v, l) <= 1e-12);
                prop_assert!((norm_sqr(v) - 1.0).abs() <= 1e-12);
            }
            for i in 0..3 {
                for j in (i + 1)..3 {
                    prop_assert!(inner(vs[i], vs[j]).norm() <= 1e-12);
                }
            }
        }

        #[test]
        fn basis_round_trip(spec in spec_strategy(), amps in state_strategy()) {
            let s = CoinState::normalized(amps, Basis::Standard).unwrap();
            let e = to_eigen(&s, &spec).unwrap();
            prop_assert!((e.norm_sqr() - 1.0).abs() <= 1e-12);
            let back = to_standard(&e, &spec).unwrap();
            for (a, b) in back.amplitudes().iter().zip(s.amplitudes()) {
                prop_assert!((a - b).norm() <= 1e-12);
            }
        }
    }
}
