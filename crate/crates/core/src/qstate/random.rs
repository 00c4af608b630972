//! Reproducible sampling.
//!
//! The generator is SplitMix64: the state advances by the golden-ratio
//! increment `0x9E3779B97F4A7C15` and each output is the state passed through
//! `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
//! z *= 0x94D049BB133111EB; z ^= z >> 31`. Uniform doubles take the top 53
//! bits; Gaussians come from the Box–Muller transform. Identical seeds give
//! identical streams on every platform.

use std::f64::consts::PI;

use super::{LocalUnitary, PureState, C64};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
    const MIX1: u64 = 0xBF58_476D_1CE4_E5B9;
    const MIX2: u64 = 0x94D0_49BB_1331_11EB;

    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(Self::GAMMA);
        Self::mix(self.state)
    }

    /// The output finalizer on its own; used to derive child seeds.
    pub fn mix(mut z: u64) -> u64 {
        z = (z ^ (z >> 30)).wrapping_mul(Self::MIX1);
        z = (z ^ (z >> 27)).wrapping_mul(Self::MIX2);
        z ^ (z >> 31)
    }

    /// Seed for stream `k` derived from `master`.
    pub fn derive(master: u64, k: u64) -> u64 {
        Self::mix(master ^ Self::mix(k.wrapping_add(1).wrapping_mul(Self::GAMMA)))
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Two independent standard normals.
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.next_f64(); // (0, 1]
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        (r * c, r * s)
    }

    pub fn next_complex_gaussian(&mut self) -> C64 {
        let (re, im) = self.next_gaussian_pair();
        C64::new(re, im)
    }
}

/// Haar-distributed pure state: i.i.d. complex Gaussian amplitudes, normalized.
pub fn haar_random_state(n: usize, seed: u64) -> Result<PureState> {
    if n == 0 {
        return Err(Error::QubitCount {
            n,
            requirement: "n ≥ 1 required",
        });
    }
    let mut rng = SplitMix64::new(seed);
    let amps = (0..1usize << n)
        .map(|_| rng.next_complex_gaussian())
        .collect();
    PureState::from_unnormalized(n, amps)
}

/// Independent Haar-random `U(2)` factor on each qubit.
pub fn random_local_unitary(n: usize, rng: &mut SplitMix64) -> LocalUnitary {
    let factors = (0..n)
        .map(|_| {
            let a = rng.next_complex_gaussian();
            let b = rng.next_complex_gaussian();
            let nrm = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (a, b) = (a / nrm, b / nrm);
            let phase = C64::from_polar(1.0, 2.0 * PI * rng.next_f64());
            [
                [a * phase, -b.conj() * phase],
                [b * phase, a.conj() * phase],
            ]
        })
        .collect();
    LocalUnitary::new(factors)
}
