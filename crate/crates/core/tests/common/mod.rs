#![allow(dead_code)]

use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use triwalk::{Basis, CoinState, Spinor};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-random point on the unit sphere of C³.
pub fn random_amplitudes(rng: &mut impl Rng) -> Spinor {
    let g: Spinor = std::array::from_fn(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let n = g.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    g.map(|x| x / n)
}

pub fn random_eigen_state(rng: &mut impl Rng) -> CoinState {
    CoinState::new(random_amplitudes(rng), Basis::Eigen).unwrap()
}

pub fn real_state(g: [f64; 3]) -> CoinState {
    CoinState::eigen_real(g[0], g[1], g[2]).unwrap()
}

/// Prints one verdict line past the test harness's output capture.
pub fn report(id: u32, name: &str, passed: bool, detail: &str, started: Instant) {
    let line = format!(
        "criterion {id:>2} {} {name}: {detail} ({:.2} s)\n",
        if passed { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
}
