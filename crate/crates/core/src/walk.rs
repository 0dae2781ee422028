//! Exact finite-time evolution on the integer line.
//!
//! One step applies the coin to every site and then shifts the L component
//! to m − 1 and the R component to m + 1, leaving S in place. In Fourier
//! space (ψ̃(k) = Σₘ e^{imk} ψ(m)) this is Diag(e^{−ik}, 1, e^{ik})·C.

use crate::coin::{in_basis, norm_sqr, Basis, CoinMatrix, CoinSpec, CoinState, Spinor, ZERO};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_STEPS: usize = 100_000;

/// Amplitudes after `t` steps on the sites m ∈ [−t, t], cell index m + t.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    t: usize,
    cells: Vec<Spinor>,
}

impl WalkState {
    pub fn steps(&self) -> usize {
        self.t
    }

    pub fn cells(&self) -> &[Spinor] {
        &self.cells
    }

    /// Amplitudes at site `m`; zero outside the light cone.
    pub fn amplitude(&self, m: i64) -> Spinor {
        let t = self.t as i64;
        if m < -t || m > t {
            [ZERO; 3]
        } else {
            self.cells[(m + t) as usize]
        }
    }

    pub fn total_probability(&self) -> f64 {
        self.cells.iter().map(norm_sqr).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositionDistribution {
    t: usize,
    probabilities: Vec<f64>,
}

impl PositionDistribution {
    pub fn steps(&self) -> usize {
        self.t
    }

    /// p(m, t) for m = −t..=t.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, m: i64) -> f64 {
        let t = self.t as i64;
        if m < -t || m > t {
            0.0
        } else {
            self.probabilities[(m + t) as usize]
        }
    }

    pub fn sites(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let t = self.t as i64;
        self.probabilities
            .iter()
            .enumerate()
            .map(move |(i, &p)| (i as i64 - t, p))
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

/// The walker at the origin with the given coin state.
pub fn initial_state(coin_state: &CoinState, spec: &CoinSpec) -> Result<WalkState> {
    CoinState::new(*coin_state.amplitudes(), coin_state.basis())?;
    let standard = in_basis(coin_state, spec, Basis::Standard);
    Ok(WalkState {
        t: 0,
        cells: vec![*standard.amplitudes()],
    })
}

fn step_into(src: &[Spinor], coin: &CoinMatrix, dst: &mut Vec<Spinor>) {
    dst.clear();
    dst.resize(src.len() + 2, [ZERO; 3]);
    // src index i is site m = i - t; dst index for site m' is m' + t + 1
    for (i, cell) in src.iter().enumerate() {
        let [l, s, r] = coin.apply(cell);
        dst[i][0] += l;
        dst[i + 1][1] += s;
        dst[i + 2][2] += r;
    }
}

pub fn step(state: &WalkState, coin: &CoinMatrix) -> WalkState {
    let mut cells = Vec::with_capacity(state.cells.len() + 2);
    step_into(&state.cells, coin, &mut cells);
    WalkState {
        t: state.t + 1,
        cells,
    }
}

/// `t` steps with the default step budget.
pub fn evolve(initial: WalkState, coin: &CoinMatrix, t: usize) -> Result<WalkState> {
    evolve_with_budget(initial, coin, t, DEFAULT_MAX_STEPS)
}

pub fn evolve_with_budget(initial: WalkState, coin: &CoinMatrix, t: usize, max_steps: usize) -> Result<WalkState> {
    if t > max_steps {
        return Err(Error::StepBudgetExceeded {
            requested: t,
            max: max_steps,
        });
    }
    let final_len = initial.cells.len() + 2 * t;
    let mut cur = initial.cells;
    cur.reserve(final_len.saturating_sub(cur.len()));
    let mut next = Vec::with_capacity(final_len);
    for _ in 0..t {
        step_into(&cur, coin, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(WalkState {
        t: initial.t + t,
        cells: cur,
    })
}

pub fn distribution(state: &WalkState) -> PositionDistribution {
    PositionDistribution {
        t: state.t,
        probabilities: state.cells.iter().map(norm_sqr).collect(),
    }
}

/// Σₘ (m/t)ⁿ p(m, t).
pub fn empirical_moment(dist: &PositionDistribution, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("moment order must be at least 1".into()));
    }
    if dist.t == 0 {
        return Err(Error::ZeroSteps);
    }
    let t = dist.t as f64;
    Ok(dist
        .sites()
        .map(|(m, p)| (m as f64 / t).powi(n as i32) * p)
        .sum())
}

/// Convenience: evolve `coin_state` from the origin for `t` steps.
pub fn simulate(spec: &CoinSpec, coin_state: &CoinState, t: usize) -> Result<WalkState> {
    let coin = crate::coin::build_coin(spec);
    evolve(initial_state(coin_state, spec)?, &coin, t)
}
