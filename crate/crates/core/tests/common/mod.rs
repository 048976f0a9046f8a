#![allow(dead_code)]

use gaplab_core::equilibrium::c0_constant;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Closed-form `c_{V,I}` for a single GUE interval `[a, b]`.
pub fn gue_c_star(a: f64, b: f64) -> f64 {
    let m0 = if a + b < 0.0 {
        1.5 * (4.0 - a * a).ln() - (4.0 * a.abs()).ln()
    } else if a + b > 0.0 {
        1.5 * (4.0 - b * b).ln() - (4.0 * b.abs()).ln()
    } else {
        1.5 * (4.0 - a * a).ln() - (2.0 * a.abs()).ln()
    };
    c0_constant() + m0
}

pub fn lue_c_vi(_a: f64, b: f64) -> f64 {
    c0_constant() + ((4.0 - b).powf(1.5) * b.sqrt() / 8.0).ln()
}

pub fn jue_c_vi(a: f64, b: f64) -> f64 {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let tail = if b < 0.5 {
        ((1.0 - b) * b).sqrt() / (1.0 - 2.0 * b)
    } else if b == 0.5 || a == 0.5 {
        sqrt_pi / (2.0 * 2f64.sqrt())
    } else if a < 0.5 {
        sqrt_pi / 2f64.sqrt()
    } else {
        ((1.0 - a) * a).sqrt() / (2.0 * a - 1.0)
    };
    c0_constant() + tail.ln()
}

/// Seeded test-instance generator.
pub struct Gen(ChaCha8Rng);

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.0.next_u64() % n as u64) as usize
    }
}

pub struct SigmaInstance {
    pub lambdas: Vec<f64>,
    pub window: Vec<(f64, f64)>,
    pub a: Vec<f64>,
    pub y: Vec<f64>,
}

/// Random instance with `n <= 12` points in `[0, 1]`, at most three window
/// components, `k <= 3`. Half of the `y_j` are planted inside actual gaps so
/// both answers occur often.
pub fn sigma_instance(rng: &mut Gen) -> SigmaInstance {
    let n = 2 + rng.below(11);
    let mut lambdas: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
    lambdas.sort_by(|a, b| a.total_cmp(b));
    let p = 1 + rng.below(3);
    let mut cuts: Vec<f64> = (0..2 * p).map(|_| rng.uniform()).collect();
    cuts.sort_by(|a, b| a.total_cmp(b));
    let window: Vec<(f64, f64)> = cuts.chunks(2).filter(|c| c[1] > c[0]).map(|c| (c[0], c[1])).collect();
    let k = 1 + rng.below(3);
    let mut a = Vec::with_capacity(k);
    let mut y = Vec::with_capacity(k);
    for _ in 0..k {
        if rng.uniform() < 0.5 {
            let i = rng.below(n - 1);
            let gap = lambdas[i + 1] - lambdas[i];
            let aj = gap * rng.range(0.05, 1.1);
            a.push(aj);
            y.push(lambdas[i] + rng.uniform() * (gap - aj).max(gap * 0.05));
        } else {
            a.push(rng.range(0.001, 0.3));
            y.push(rng.uniform());
        }
    }
    SigmaInstance { lambdas, window, a, y }
}
