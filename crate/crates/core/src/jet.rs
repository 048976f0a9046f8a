//! Truncated Taylor series ("jets") through fourth order.
//!
//! A `Jet` stores `c[k] = f^(k)(x0) / k!`. Arithmetic on jets propagates
//! exact derivatives of closed-form expressions, so the canonical densities
//! get their first four derivatives without finite differences.

use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::math;

pub const ORDER: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub c: [f64; ORDER + 1],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; ORDER + 1];
        c[0] = v;
        Jet { c }
    }

    /// The identity function expanded at `x0`.
    pub fn variable(x0: f64) -> Self {
        let mut c = [0.0; ORDER + 1];
        c[0] = x0;
        c[1] = 1.0;
        Jet { c }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `k`-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> f64 {
        self.c[k] * math::factorial(k as u32)
    }

    pub fn scale(self, s: f64) -> Self {
        let mut c = self.c;
        c.iter_mut().for_each(|v| *v *= s);
        Jet { c }
    }

    pub fn recip(self) -> Self {
        let a = self.c;
        let mut r = [0.0; ORDER + 1];
        r[0] = 1.0 / a[0];
        for k in 1..=ORDER {
            let mut s = 0.0;
            for j in 1..=k {
                s += a[j] * r[k - j];
            }
            r[k] = -s / a[0];
        }
        Jet { c: r }
    }

    pub fn sqrt(self) -> Self {
        let a = self.c;
        let mut r = [0.0; ORDER + 1];
        r[0] = math::sqrt(a[0]);
        for k in 1..=ORDER {
            let mut s = a[k];
            for j in 1..k {
                s -= r[j] * r[k - j];
            }
            r[k] = s / (2.0 * r[0]);
        }
        Jet { c: r }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let mut c = self.c;
        c.iter_mut().zip(rhs.c).for_each(|(a, b)| *a += b);
        Jet { c }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut c = [0.0; ORDER + 1];
        for (k, ck) in c.iter_mut().enumerate() {
            for j in 0..=k {
                *ck += self.c[j] * rhs.c[k - j];
            }
        }
        Jet { c }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Jet) -> Jet {
        self * rhs.recip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_one_plus_x() {
        // sqrt(1 + x) = 1 + x/2 - x^2/8 + x^3/16 - 5x^4/128
        let j = (Jet::constant(1.0) + Jet::variable(0.0)).sqrt();
        let want = [1.0, 0.5, -0.125, 0.0625, -5.0 / 128.0];
        for (a, b) in j.c.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn reciprocal_geometric_series() {
        let j = (Jet::constant(1.0) - Jet::variable(0.0)).recip();
        for v in j.c {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn derivatives_of_cube() {
        let x = Jet::variable(2.0);
        let cube = x * x * x;
        assert_eq!(cube.derivative(0), 8.0);
        assert_eq!(cube.derivative(1), 12.0);
        assert_eq!(cube.derivative(2), 12.0);
        assert_eq!(cube.derivative(3), 6.0);
        assert_eq!(cube.derivative(4), 0.0);
    }
}
