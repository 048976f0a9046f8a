//! Gap probabilities as determinants.
//!
//! * CUE: `D_n(alpha)`, the probability that no eigenangle falls in the arc
//!   `(-alpha, alpha)`, as an `n x n` Toeplitz determinant with entries
//!   `t_0 = 1 - alpha/pi`, `t_m = -sin(m alpha)/(pi m)`.
//! * Sine process and finite-`n` GUE/LUE/JUE: Fredholm determinants
//!   `det(I - K)` discretized by Gauss–Legendre Nyström.
//!
//! The remaining functions evaluate the quantities compared against the
//! DIKZ expansion and the integral asymptotics of the gap counting argument.

use alloc::vec;
use alloc::vec::Vec;

use crate::equilibrium::{EnsembleSpec, IntervalUnion, MinimizerReport};
use crate::error::{Error, Result};
use crate::gapstats::{gn, RescaleParams};
use crate::linalg;
use crate::math::{self, PI};
use crate::opkernels::{kernel_matrix, WeightedOpBasis};
use crate::quadrature::{self, GaussLegendre};

/// Gauss–Legendre nodes and weights on a gap interval.
#[derive(Clone, Debug, PartialEq)]
pub struct NystromGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
}

impl NystromGrid {
    pub fn new(lo: f64, hi: f64, order: usize) -> Self {
        let rule = GaussLegendre::on_interval(order, lo, hi);
        NystromGrid { nodes: rule.nodes, weights: rule.weights, order }
    }

    /// Concatenated grids of several intervals, for block determinants.
    pub fn union(parts: &[(f64, f64)], order: usize) -> Self {
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for &(lo, hi) in parts {
            if hi > lo {
                let g = Self::new(lo, hi, order);
                nodes.extend(g.nodes);
                weights.extend(g.weights);
            }
        }
        NystromGrid { nodes, weights, order }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `log det(I - W^{1/2} K W^{1/2})` for a row-major kernel matrix on the
    /// nodes. Returns `-inf` if the discretized determinant is not positive.
    pub fn log_det_one_minus(&self, kernel: &[f64]) -> f64 {
        let m = self.len();
        if m == 0 {
            return 0.0;
        }
        let sw: Vec<f64> = self.weights.iter().map(|w| math::sqrt(*w)).collect();
        let mut a = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                let delta = if i == j { 1.0 } else { 0.0 };
                a[i * m + j] = delta - sw[i] * kernel[i * m + j] * sw[j];
            }
        }
        let (sign, log_abs) = linalg::lu_log_det(a, m);
        if sign > 0.0 {
            log_abs
        } else {
            f64::NEG_INFINITY
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=PI).contains(&alpha) {
        return Err(Error::Domain("alpha must lie in [0, pi]"));
    }
    Ok(())
}

/// First row of the CUE gap Toeplitz matrix.
pub fn toeplitz_symbol(n: usize, alpha: f64) -> Vec<f64> {
    let mut row = Vec::with_capacity(n);
    row.push(1.0 - alpha / PI);
    for m in 1..n {
        let mf = m as f64;
        row.push(-math::sin(mf * alpha) / (PI * mf));
    }
    row
}

/// `log D_n(alpha)` by Cholesky factorization of the Toeplitz matrix.
/// `-inf` at `alpha = pi` or when the matrix is numerically singular.
/// Once the smallest eigenvalues approach roundoff, below roughly
/// `log D_n = -100`, the logarithm loses its digits; the probability itself is
/// then still correct to an absolute `1e-40`.
pub fn toeplitz_log_gap_cue(n: usize, alpha: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Argument("n must be positive"));
    }
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Ok(0.0);
    }
    if alpha == PI {
        return Ok(f64::NEG_INFINITY);
    }
    let row = toeplitz_symbol(n, alpha);
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = row[i.abs_diff(j)];
        }
    }
    Ok(linalg::cholesky_log_det(a, n).unwrap_or(f64::NEG_INFINITY))
}

/// `D_n(alpha) = det_{1<=j,k<=n} (1/2pi) int_alpha^{2pi-alpha} e^{i(j-k)theta} dtheta`.
pub fn toeplitz_gap_cue(n: usize, alpha: f64) -> Result<f64> {
    Ok(math::exp(toeplitz_log_gap_cue(n, alpha)?))
}

/// `log D_n(alpha)` by the Durbin recursion, `O(n^2)`.
pub fn toeplitz_log_gap_cue_durbin(n: usize, alpha: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Argument("n must be positive"));
    }
    check_alpha(alpha)?;
    if alpha == PI {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(linalg::toeplitz_log_det_durbin(&toeplitz_symbol(n, alpha)).unwrap_or(f64::NEG_INFINITY))
}

/// `n^2 log cos(alpha/2) - (1/4) log(n sin(alpha/2)) + c0`.
pub fn dikz_log_gap(n: usize, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::Domain("DIKZ expansion needs 0 < alpha < pi"));
    }
    let nf = n as f64;
    Ok(nf * nf * math::ln(math::cos(alpha / 2.0)) - 0.25 * math::ln(nf * math::sin(alpha / 2.0)) + math::c0())
}

/// Sine-kernel Fredholm determinant on `[0, r]`, `log` scale.
pub fn sine_log_gap_fredholm(r: f64, order: usize) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain("interval length must be nonnegative"));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let grid = NystromGrid::new(0.0, r, order.max(1));
    let m = grid.len();
    let mut k = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            k[i * m + j] = math::sinc_pi(grid.nodes[i] - grid.nodes[j]);
        }
    }
    Ok(grid.log_det_one_minus(&k))
}

/// Probability that the sine process has no point in an interval of length `r`.
pub fn sine_gap_fredholm(r: f64, order: usize) -> Result<f64> {
    Ok(math::exp(sine_log_gap_fredholm(r, order)?))
}

/// `-pi^2 r^2 / 8 - (1/4) log(pi r / 2) + c0`.
pub fn sine_log_gap_asymptotic(r: f64) -> f64 {
    -PI * PI * r * r / 8.0 - 0.25 * math::ln(PI * r / 2.0) + math::c0()
}

fn check_inside(spec: &EnsembleSpec, lo: f64, hi: f64) -> Result<()> {
    if spec.in_open_support(lo) && spec.in_open_support(hi) {
        Ok(())
    } else {
        Err(Error::Domain("gap interval must lie strictly inside the support"))
    }
}

/// Exact probability that no eigenvalue of the `n`-point ensemble falls in
/// `[x, x + delta]`, `log` scale.
pub fn finite_n_log_gap(spec: &EnsembleSpec, n: usize, x: f64, delta: f64, order: usize) -> Result<f64> {
    let basis = WeightedOpBasis::new(spec.kind(), n)?;
    if !(delta >= 0.0) {
        return Err(Error::Domain("delta must be nonnegative"));
    }
    check_inside(&basis.spec(), x, x + delta)?;
    if delta == 0.0 {
        return Ok(0.0);
    }
    let grid = NystromGrid::new(x, x + delta, order.max(1));
    Ok(grid.log_det_one_minus(&kernel_matrix(&basis, &grid.nodes)))
}

pub fn finite_n_gap(spec: &EnsembleSpec, n: usize, x: f64, delta: f64, order: usize) -> Result<f64> {
    Ok(math::exp(finite_n_log_gap(spec, n, x, delta, order)?))
}

/// The pair `(lhs, rhs)`: the probability of no eigenvalue in
/// `I1 ∪ I2` and the product of the two separate probabilities.
pub fn negative_correlation_check(
    spec: &EnsembleSpec,
    n: usize,
    i1: (f64, f64),
    i2: (f64, f64),
    order: usize,
) -> Result<(f64, f64)> {
    let basis = WeightedOpBasis::new(spec.kind(), n)?;
    for &(lo, hi) in &[i1, i2] {
        if !(lo <= hi) {
            return Err(Error::Argument("intervals need lo <= hi"));
        }
        check_inside(spec, lo, hi)?;
    }
    let (first, second) = if i1.0 <= i2.0 { (i1, i2) } else { (i2, i1) };
    if first.1 > second.0 {
        return Err(Error::Argument("intervals overlap"));
    }
    let det = |parts: &[(f64, f64)]| -> f64 {
        let grid = NystromGrid::union(parts, order);
        math::exp(grid.log_det_one_minus(&kernel_matrix(&basis, &grid.nodes)))
    };
    let lhs = det(&[first, second]);
    let rhs = det(&[first]) * det(&[second]);
    Ok((lhs, rhs))
}

/// `n D_n((1 + u/log n) G_n(x)/2) / (2 log n)^{1/q - 1/2}`, whose limit is
/// `e^{c0 - x - 2u}`.
pub fn cue_scaling_ratio(n: usize, q: u32, u: f64, x: f64) -> Result<f64> {
    let params = RescaleParams::new(n, q, 1.0)?;
    let l = math::ln(n as f64);
    let alpha = (1.0 + u / l) * gn(&params, x) / 2.0;
    let log_d = toeplitz_log_gap_cue(n, alpha)?;
    let qf = q as f64;
    Ok(math::exp(math::ln(n as f64) + log_d - (1.0 / qf - 0.5) * math::ln(2.0 * l)))
}

/// Both sides of `D_n(w G_n(x)/2) <= e^{-(w-1) log n + 1} D_n(G_n(x)/2)` in
/// log form: `(log lhs, log rhs)`.
pub fn cue_tail_bound(n: usize, q: u32, w: f64, x: f64) -> Result<(f64, f64)> {
    let params = RescaleParams::new(n, q, 1.0)?;
    let half = gn(&params, x) / 2.0;
    let lhs = toeplitz_log_gap_cue(n, w * half)?;
    let base = toeplitz_log_gap_cue(n, half)?;
    Ok((lhs, -(w - 1.0) * math::ln(n as f64) + 1.0 + base))
}

/// `alpha -> log D_n(alpha)` tabulated on a uniform grid and interpolated by
/// local cubics. Immutable once built.
#[derive(Clone, Debug)]
pub struct LogGapTable {
    n: usize,
    lo: f64,
    step: f64,
    values: Vec<f64>,
}

impl LogGapTable {
    pub const POINTS: usize = 400;

    pub fn new(n: usize, lo: f64, hi: f64) -> Result<Self> {
        check_alpha(lo)?;
        check_alpha(hi)?;
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::Argument("alpha grid needs 0 < lo < hi"));
        }
        // one extra point beyond each end keeps the 4-point stencil centred
        let step = (hi - lo) / (Self::POINTS - 1) as f64;
        let start = (lo - step).max(step * 1e-3);
        let step = (hi - start) / Self::POINTS as f64;
        let top = hi + step;
        if top > PI {
            return Err(Error::Domain("alpha grid reaches beyond pi"));
        }
        let values = (0..=Self::POINTS + 1)
            .map(|i| toeplitz_log_gap_cue_durbin(n, start + step * i as f64))
            .collect::<Result<Vec<_>>>()?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NoConvergence("Durbin recursion lost positive definiteness"));
        }
        Ok(LogGapTable { n, lo: start, step, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn range(&self) -> (f64, f64) {
        (self.lo, self.lo + self.step * (self.values.len() - 1) as f64)
    }

    /// Interpolated `log D_n(alpha)`.
    pub fn log_gap(&self, alpha: f64) -> f64 {
        let last = self.values.len() - 1;
        let pos = ((alpha - self.lo) / self.step).clamp(0.0, last as f64);
        let base = (math::floor(pos) as usize).clamp(1, last - 2) - 1;
        let t = pos - base as f64;
        let v = &self.values[base..base + 4];
        // Lagrange weights on nodes 0..3
        let l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
        let l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
        let l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
        let l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
        l0 * v[0] + l1 * v[1] + l2 * v[2] + l3 * v[3]
    }
}

/// `int_I D_n(rho(y)/rho_I * G_n(x)/2) dy`, whose leading behaviour is
/// `M(I) e^{c0 - x} / (n sqrt(2 log n))`.
pub fn integral_lemma_value(
    spec: &EnsembleSpec,
    window: &IntervalUnion,
    report: &MinimizerReport,
    n: usize,
    x: f64,
) -> Result<f64> {
    if n < 50 {
        return Err(Error::Argument("integral lemma evaluation needs n >= 50"));
    }
    window.validate_for(spec)?;
    let params = RescaleParams::new(n, report.q, 1.0)?;
    let half = gn(&params, x) / 2.0;
    let rho_i = report.rho_i;

    let mut rho_max = rho_i;
    for &(lo, hi) in window.intervals() {
        let rule = quadrature::composite(8, 256, lo, hi);
        for &y in rule.nodes.iter().chain([lo, hi].iter()) {
            rho_max = rho_max.max(spec.density(y)?);
        }
    }
    let alpha_max = rho_max / rho_i * half * (1.0 + 1e-9);
    if alpha_max >= PI {
        return Err(Error::Domain("required alpha exceeds pi"));
    }
    let table = LogGapTable::new(n, half, alpha_max.max(half * (1.0 + 1e-6)))?;
    let integrand = |y: f64| -> f64 {
        let r = spec.density(y).unwrap_or(rho_i);
        math::exp(table.log_gap(r / rho_i * half))
    };

    // break each component at the minimizers, where the integrand peaks
    let mut total = 0.0;
    for &(lo, hi) in window.intervals() {
        let mut cuts = vec![lo, hi];
        cuts.extend(report.minimizers().map(|m| m.u).filter(|&u| u > lo && u < hi));
        cuts.sort_by(|a, b| a.total_cmp(b));
        for w in cuts.windows(2) {
            let scale = GaussLegendre::on_interval(40, w[0], w[1]).integrate(integrand).abs();
            total += quadrature::adaptive(integrand, w[0], w[1], 1e-10 * scale.max(1e-300));
        }
    }
    Ok(total)
}

/// `M(I) e^{c0 - x} / (n sqrt(2 log n))`.
pub fn integral_lemma_leading(report: &MinimizerReport, n: usize, x: f64) -> Result<f64> {
    let m_i = report.constants.ok_or(Error::Precondition("report has no constants; run equilibrium::constants"))?.m_i;
    let nf = n as f64;
    Ok(m_i * math::exp(math::c0() - x) / (nf * math::sqrt(2.0 * math::ln(nf))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::analyze;

    #[test]
    fn toeplitz_trivial_values() {
        assert_eq!(toeplitz_gap_cue(7, 0.0).unwrap(), 1.0);
        assert!((toeplitz_gap_cue(1, 1.2).unwrap() - (1.0 - 1.2 / PI)).abs() < 1e-15);
        assert_eq!(toeplitz_gap_cue(5, PI).unwrap(), 0.0);
        assert!(toeplitz_gap_cue(5, -0.1).is_err());
        assert!(toeplitz_gap_cue(5, 3.2).is_err());
    }

    #[test]
    fn durbin_agrees_with_cholesky() {
        for &(n, a) in &[(10usize, 0.3), (100, 0.05), (300, 0.04)] {
            let c = toeplitz_log_gap_cue(n, a).unwrap();
            let d = toeplitz_log_gap_cue_durbin(n, a).unwrap();
            assert!((c - d).abs() < 1e-9 * c.abs().max(1.0), "{n} {a}: {c} {d}");
        }
    }

    #[test]
    fn two_point_cue_gap() {
        // n = 2: det [[t0, t1], [t1, t0]]
        let a = 0.9;
        let t0 = 1.0 - a / PI;
        let t1 = -a.sin() / PI;
        assert!((toeplitz_gap_cue(2, a).unwrap() - (t0 * t0 - t1 * t1)).abs() < 1e-15);
    }

    #[test]
    fn sine_small_interval() {
        assert_eq!(sine_gap_fredholm(0.0, 20).unwrap(), 1.0);
        let p = sine_gap_fredholm(0.01, 20).unwrap();
        assert!((p - 0.99).abs() < 1e-7, "{p}");
        assert!(sine_gap_fredholm(-1.0, 20).is_err());
    }

    #[test]
    fn sine_large_gap_matches_asymptotics() {
        let v = sine_log_gap_fredholm(8.0, 80).unwrap();
        assert!((v - sine_log_gap_asymptotic(8.0)).abs() <= 0.01);
    }

    #[test]
    fn finite_n_trivial_and_edge() {
        assert_eq!(finite_n_gap(&EnsembleSpec::gue(), 100, 0.3, 0.0, 40).unwrap(), 1.0);
        assert!(finite_n_gap(&EnsembleSpec::gue(), 100, 1.9, 0.2, 40).is_err());
    }

    #[test]
    fn negative_correlation_zero_length() {
        let (l, r) = negative_correlation_check(&EnsembleSpec::gue(), 60, (-0.2, -0.1), (0.3, 0.3), 30).unwrap();
        assert!((l - r).abs() < 1e-14);
        assert!(negative_correlation_check(&EnsembleSpec::gue(), 60, (-0.2, 0.1), (0.0, 0.3), 30).is_err());
    }

    #[test]
    fn interpolant_matches_direct() {
        let t = LogGapTable::new(300, 0.02, 0.03).unwrap();
        for i in 0..10 {
            let a = 0.02 + 0.001 * i as f64 + 0.00037;
            let direct = toeplitz_log_gap_cue_durbin(300, a).unwrap();
            assert!((t.log_gap(a) - direct).abs() <= 1e-6 * direct.abs(), "{a}");
        }
    }

    #[test]
    fn integral_lemma_needs_moderate_n() {
        let spec = EnsembleSpec::gue();
        let w = IntervalUnion::single(0.5, 1.0).unwrap();
        let r = analyze(&spec, &w).unwrap();
        assert!(integral_lemma_value(&spec, &w, &r, 10, 0.0).is_err());
    }
}
