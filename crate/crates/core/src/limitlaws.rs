//! The gamma-Gumbel limit law of the `k`-th largest rescaled gap, its
//! Poisson description, and Kolmogorov–Smirnov distances.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Law with density `e^{k(c-x)} / (k-1)! * exp(-e^{c-x})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaGumbel {
    k: u32,
    c: f64,
}

impl GammaGumbel {
    pub fn new(k: u32, c: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Argument("gap order k must be positive"));
        }
        if !c.is_finite() {
            return Err(Error::Argument("shift must be finite"));
        }
        Ok(GammaGumbel { k, c })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        let k = self.k as f64;
        let t = self.c - x;
        k * t - math::ln_gamma(k) - math::exp(t)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        math::exp(self.ln_pdf(x))
    }

    /// `P(Poisson(e^{c-x}) <= k - 1)`.
    pub fn cdf(&self, x: f64) -> f64 {
        let ln_mean = self.c - x;
        let s: f64 = (0..self.k).map(|j| poisson_pmf_ln_mean(ln_mean, j)).sum();
        s.min(1.0)
    }

    /// `P(Poisson(e^{c-x}) >= k)` through the regularized incomplete gamma
    /// function, without going through [`GammaGumbel::cdf`].
    pub fn survival(&self, x: f64) -> f64 {
        regularized_gamma_p(self.k as f64, math::exp(self.c - x))
    }
}

/// `e^{-mean} mean^j / j!`, evaluated in log space.
pub fn poisson_pmf(mean: f64, j: u32) -> f64 {
    if mean == 0.0 {
        return if j == 0 { 1.0 } else { 0.0 };
    }
    poisson_pmf_ln_mean(math::ln(mean), j)
}

fn poisson_pmf_ln_mean(ln_mean: f64, j: u32) -> f64 {
    let jf = j as f64;
    math::exp(-math::exp(ln_mean) + jf * ln_mean - math::ln_gamma(jf + 1.0))
}

/// Regularized lower incomplete gamma `P(a, x)`: the series for
/// `x < a + 1`, the Lentz continued fraction for `Q` otherwise.
pub fn regularized_gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let log_prefactor = a * math::ln(x) - x - math::ln_gamma(a);
    if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..1000 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        (sum * math::exp(log_prefactor)).min(1.0)
    } else {
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..1000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        let q = math::exp(log_prefactor) * h;
        (1.0 - q).max(0.0)
    }
}

fn sorted(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::Argument("empty sample"));
    }
    if samples.iter().any(|v| v.is_nan()) {
        return Err(Error::Argument("sample contains NaN"));
    }
    let mut v = samples.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    Ok(v)
}

/// `sup_x |F_N(x) - F(x)|` over the jump points of the empirical CDF,
/// comparing `F` with both one-sided limits of `F_N` (repeated values form
/// one jump).
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    let v = sorted(samples)?;
    let n = v.len() as f64;
    let mut d = 0.0f64;
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j + 1 < v.len() && v[j + 1] == v[i] {
            j += 1;
        }
        let f = cdf(v[i]);
        d = d.max(f - i as f64 / n).max((j + 1) as f64 / n - f);
        i = j + 1;
    }
    Ok(d.clamp(0.0, 1.0))
}

/// Two-sample statistic `sup_x |F_N(x) - G_M(x)|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    let a = sorted(a)?;
    let b = sorted(b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Asymptotic Kolmogorov tail `P(K > lambda) = 2 sum (-1)^{j-1} e^{-2 j^2 lambda^2}`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = math::exp(-2.0 * jf * jf * lambda * lambda);
        s += if j % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// Rejection threshold for the two-sample statistic at level `alpha`, from
/// the leading term of the Kolmogorov tail.
pub fn ks_two_sample_critical(n: usize, m: usize, alpha: f64) -> f64 {
    let c = math::sqrt(-math::ln(alpha / 2.0) / 2.0);
    let (n, m) = (n as f64, m as f64);
    c * math::sqrt((n + m) / (n * m))
}

/// Empirical CDF values `i / N` at the sorted sample points.
pub fn empirical_cdf(samples: &[f64]) -> Result<Vec<(f64, f64)>> {
    let v = sorted(samples)?;
    let n = v.len() as f64;
    Ok(v.into_iter().enumerate().map(|(i, x)| (x, (i + 1) as f64 / n)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn pdf_and_cdf_at_zero() {
        let g = GammaGumbel::new(1, 0.0).unwrap();
        let inv_e = (-1.0f64).exp();
        assert!((g.pdf(0.0) - inv_e).abs() < 1e-16);
        assert!((g.cdf(0.0) - inv_e).abs() < 1e-16);
        assert!(GammaGumbel::new(0, 0.0).is_err());
    }

    #[test]
    fn gumbel_case() {
        let g = GammaGumbel::new(1, 0.7).unwrap();
        for x in [-3.0, -0.2, 0.7, 2.0, 9.0] {
            assert!((g.cdf(x) - (-(0.7f64 - x).exp()).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn far_tails_do_not_overflow() {
        let g = GammaGumbel::new(3, 0.0).unwrap();
        assert_eq!(g.pdf(-800.0), 0.0);
        assert_eq!(g.cdf(-800.0), 0.0);
        assert!((g.cdf(800.0) - 1.0).abs() < 1e-15);
        assert!(g.ln_pdf(-40.0).is_finite());
    }

    #[test]
    fn poisson_examples() {
        assert_eq!(poisson_pmf(0.0, 0), 1.0);
        assert_eq!(poisson_pmf(0.0, 3), 0.0);
        assert!((poisson_pmf(1.0, 1) - (-1.0f64).exp()).abs() < 1e-16);
        let s: f64 = (0..=50).map(|j| poisson_pmf(2.0, j)).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn incomplete_gamma_matches_poisson_tail() {
        for k in 1..6u32 {
            for mean in [0.01, 0.5, 1.0, 3.0, 7.5, 20.0] {
                let head: f64 = (0..k).map(|j| poisson_pmf(mean, j)).sum();
                let p = regularized_gamma_p(k as f64, mean);
                assert!((1.0 - head - p).abs() < 1e-13, "k={k} mean={mean}");
            }
        }
    }

    #[test]
    fn ks_examples() {
        let std_uniform = |x: f64| x.clamp(0.0, 1.0);
        assert!((ks_distance(&[0.5], std_uniform).unwrap() - 0.5).abs() < 1e-15);
        assert!(ks_distance(&[], std_uniform).is_err());
        let d = ks_distance(&[5.0, 6.0], |_| 1.0).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
        let grid: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        assert!(ks_distance(&grid, std_uniform).unwrap() <= 0.0005 + 1e-12);
    }

    #[test]
    fn ks_ties_form_one_jump() {
        let d = ks_distance(&[0.5, 0.5], |x: f64| x.clamp(0.0, 1.0)).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn two_sample_examples() {
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), 1.0);
        let d = ks_two_sample(&[1.0, 3.0], &[2.0, 4.0]).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
        let c = ks_two_sample_critical(100_000, 100_000, 1e-3);
        assert!((c - 1.94947 * (2.0f64 / 1e5).sqrt()).abs() < 1e-6);
    }

    #[test]
    fn kolmogorov_tail_reference() {
        // classical 5% point
        assert!((kolmogorov_survival(1.3581) - 0.05).abs() < 1e-4);
        assert_eq!(kolmogorov_survival(0.0), 1.0);
    }

    #[test]
    fn empirical_cdf_steps() {
        let e = empirical_cdf(&[3.0, 1.0]).unwrap();
        assert_eq!(e, vec![(1.0, 0.5), (3.0, 1.0)]);
    }
}
