//! Scalar math shims over `libm` so every build (std or not) evaluates the
//! same transcendental functions bit-for-bit.

pub use core::f64::consts::{LN_2, PI};

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn asin(x: f64) -> f64 {
    libm::asin(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    libm::pow(x, n as f64)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `sin(pi x) / (pi x)` with the removable singularity filled in.
pub fn sinc_pi(x: f64) -> f64 {
    let t = PI * x;
    if abs(t) < 1e-4 {
        let t2 = t * t;
        1.0 - t2 / 6.0 + t2 * t2 / 120.0
    } else {
        sin(t) / t
    }
}

/// Factorial as a float, exact for the small arguments used here.
pub fn factorial(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}

/// Reduces an angle to `[-pi, pi)`.
pub fn reduce_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let r = theta - two_pi * floor(theta / two_pi + 0.5);
    if r >= PI {
        r - two_pi
    } else {
        r
    }
}

/// Even-index Bernoulli numbers B_2, B_4, ..., B_20.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// log of the Glaisher–Kinkelin constant from its defining limit
/// `sum_{k<=N} k log k - (N^2/2 + N/2 + 1/12) log N + N^2/4`, with the
/// Euler–Maclaurin tail in powers of `1/N^2` added back.
pub fn ln_glaisher() -> f64 {
    const N: u32 = 10;
    let nf = N as f64;
    let mut partial = 0.0;
    for k in 2..=N {
        let kf = k as f64;
        partial += kf * ln(kf);
    }
    let ln_n = ln(nf);
    let main = (nf * nf / 2.0 + nf / 2.0 + 1.0 / 12.0) * ln_n - nf * nf / 4.0;
    let mut tail = 0.0;
    for (idx, b) in BERNOULLI_EVEN.iter().enumerate().skip(1) {
        let two_j = 2.0 * (idx as f64 + 1.0);
        tail += b / (two_j * (two_j - 1.0) * (two_j - 2.0) * powi(nf, (two_j - 2.0) as i32));
    }
    partial - main + tail
}

/// `zeta'(-1) = 1/12 - log A`.
pub fn zeta_prime_minus_one() -> f64 {
    1.0 / 12.0 - ln_glaisher()
}

/// The constant `c0 = log(2)/12 + 3 zeta'(-1)` appearing in the sine-kernel
/// large-gap asymptotics.
pub fn c0() -> f64 {
    LN_2 / 12.0 + 3.0 * zeta_prime_minus_one()
}
