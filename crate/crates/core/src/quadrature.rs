//! Gauss–Legendre rules and an adaptive integrator built on them.

use alloc::vec::Vec;

use crate::math;

/// Gauss–Legendre rule mapped to an interval.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// `m`-point rule on `[-1, 1]`, nodes ascending.
    pub fn new(m: usize) -> Self {
        assert!(m >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = alloc::vec![0.0; m];
        let mut weights = alloc::vec![0.0; m];
        let mf = m as f64;
        for i in 0..m.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_m.
            let mut x = math::cos(math::PI * (i as f64 + 0.75) / (mf + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(m, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(m, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[m - 1 - i] = x;
            weights[i] = w;
            weights[m - 1 - i] = w;
        }
        if m % 2 == 1 {
            nodes[m / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// `m`-point rule on `[a, b]`.
    pub fn on_interval(m: usize, a: f64, b: f64) -> Self {
        let mut rule = Self::new(m);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in rule.nodes.iter_mut().zip(rule.weights.iter_mut()) {
            *x = mid + half * *x;
            *w *= half;
        }
        rule
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite rule: `panels` equal panels of an `m`-point rule on `[a, b]`.
pub fn composite(m: usize, panels: usize, a: f64, b: f64) -> GaussLegendre {
    let base = GaussLegendre::new(m);
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(m * panels);
    let mut weights = Vec::with_capacity(m * panels);
    for p in 0..panels {
        let lo = a + h * p as f64;
        for (x, w) in base.nodes.iter().zip(&base.weights) {
            nodes.push(lo + 0.5 * h * (x + 1.0));
            weights.push(0.5 * h * w);
        }
    }
    GaussLegendre { nodes, weights }
}

const MAX_SPLITS: usize = 100_000;

/// Adaptive bisection on a 20-point Gauss–Legendre rule until each panel's
/// split estimate agrees with its whole-panel estimate to `abs_tol` scaled
/// by the panel's share of the interval, or to rounding level.
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let rule = GaussLegendre::new(20);
    let eval = |lo: f64, hi: f64, f: &mut F| -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * half * f(mid + half * x)).sum()
    };
    let total_len = (b - a).abs();
    let mut stack = alloc::vec![(a, b, eval(a, b, &mut f), 0u32)];
    let mut sum = 0.0;
    let mut splits = 0usize;
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = eval(lo, mid, &mut f);
        let right = eval(mid, hi, &mut f);
        let local_tol = abs_tol * (hi - lo).abs() / total_len;
        let err = (left + right - whole).abs();
        let settled = err <= local_tol || err <= 64.0 * f64::EPSILON * (left + right).abs();
        if settled || !err.is_finite() || depth >= 40 || splits >= MAX_SPLITS {
            sum += left + right;
        } else {
            splits += 1;
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    sum
}
