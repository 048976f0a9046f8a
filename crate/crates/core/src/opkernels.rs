//! Orthonormal functions `phi_j = p_{j,n} e^{-nV/2}` for the three canonical
//! weights, the finite-`n` correlation kernel built from them, and the
//! residuals of its bulk sine-kernel expansion.
//!
//! The recurrences run on the weighted functions themselves. A running
//! scale exponent keeps the pair of current values inside `[1e-150, 1e150]`,
//! so the Gaussian and exponential prefactors never underflow on their own.

use alloc::vec;
use alloc::vec::Vec;

use crate::equilibrium::{mu_mass, EnsembleKind, EnsembleSpec};
use crate::error::{Error, Result};
use crate::math::{self, PI};

const BIG: f64 = 1e150;
const SMALL: f64 = 1e-150;

/// Orthonormal basis for the weight `e^{-nV}` of a canonical ensemble.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedOpBasis {
    kind: EnsembleKind,
    n: usize,
}

impl WeightedOpBasis {
    pub fn new(kind: EnsembleKind, n: usize) -> Result<Self> {
        if kind == EnsembleKind::Custom {
            return Err(Error::Argument("kernels exist only for the canonical ensembles"));
        }
        if n == 0 {
            return Err(Error::Argument("n must be positive"));
        }
        Ok(WeightedOpBasis { kind, n })
    }

    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spec(&self) -> EnsembleSpec {
        EnsembleSpec::canonical(self.kind)
    }

    /// Whether `x` lies where the weight is nonzero.
    pub fn in_domain(&self, x: f64) -> bool {
        match self.kind {
            EnsembleKind::Gue => x.is_finite(),
            EnsembleKind::Lue => x >= 0.0 && x.is_finite(),
            _ => (0.0..=1.0).contains(&x),
        }
    }

    /// `phi_0(x), ..., phi_{count-1}(x)`; zeros outside the domain.
    pub fn values(&self, x: f64, count: usize) -> Vec<f64> {
        let mut out = vec![0.0; count];
        if count == 0 || !self.in_domain(x) {
            return out;
        }
        let nf = self.n as f64;
        match self.kind {
            EnsembleKind::Gue => {
                let t = x * math::sqrt(nf / 2.0);
                let norm = math::powf(nf / 2.0, 0.25);
                // h_0 = pi^{-1/4} e^{-t^2/2}, h_{j+1} = sqrt(2/(j+1)) t h_j - sqrt(j/(j+1)) h_{j-1}
                let log0 = -0.5 * t * t - 0.25 * math::ln(PI) + math::ln(norm);
                run_recurrence(&mut out, log0, 1.0, math::sqrt(2.0) * t, |j, prev, cur| {
                    let jf = j as f64;
                    math::sqrt(2.0 / (jf + 1.0)) * t * cur - math::sqrt(jf / (jf + 1.0)) * prev
                });
            }
            EnsembleKind::Lue => {
                let t = nf * x;
                // l_0 = e^{-t/2}, (j+1) L_{j+1} = (2j+1-t) L_j - j L_{j-1}; sign (-1)^j
                // makes the leading coefficient positive
                let log0 = -0.5 * t + 0.5 * math::ln(nf);
                run_recurrence(&mut out, log0, 1.0, -(1.0 - t), |j, prev, cur| {
                    let jf = j as f64;
                    -((2.0 * jf + 1.0 - t) * cur) / (jf + 1.0) - jf * prev / (jf + 1.0)
                });
            }
            _ => {
                let s = 2.0 * x - 1.0;
                let mut p0 = 1.0;
                let mut p1 = s;
                for (j, o) in out.iter_mut().enumerate() {
                    let jf = j as f64;
                    let pj = match j {
                        0 => 1.0,
                        1 => s,
                        _ => {
                            let p2 = ((2.0 * jf - 1.0) * s * p1 - (jf - 1.0) * p0) / jf;
                            p0 = p1;
                            p1 = p2;
                            p2
                        }
                    };
                    *o = math::sqrt(2.0 * jf + 1.0) * pj;
                }
            }
        }
        out
    }
}

/// Fills `out` from a two-term recurrence `next = step(j, prev, cur)` that
/// produces element `j + 1`, with `out[0] = e^{log0}` and
/// `out[1] = e^{log0} * first`. Values are carried as mantissas times
/// `e^{scale}`.
fn run_recurrence<F>(out: &mut [f64], log0: f64, zeroth: f64, first: f64, step: F)
where
    F: Fn(usize, f64, f64) -> f64,
{
    let mut scale = log0;
    let mut cur = zeroth;
    out[0] = cur * math::exp(scale);
    if out.len() == 1 {
        return;
    }
    let mut next = first;
    for j in 1..out.len() {
        let prev = cur;
        cur = next;
        out[j] = cur * math::exp(scale);
        if j + 1 < out.len() {
            next = step(j, prev, cur);
            let m = next.abs().max(cur.abs());
            if m > BIG || (m < SMALL && m > 0.0) {
                let shift = math::ln(m);
                let f = math::exp(-shift);
                cur *= f;
                next *= f;
                scale += shift;
            }
        }
    }
}

/// `phi_j(x)` for `0 <= j <= n`.
pub fn weighted_op(basis: &WeightedOpBasis, j: usize, x: f64) -> Result<f64> {
    if j > basis.n {
        return Err(Error::Index { limit: basis.n, got: j });
    }
    Ok(basis.values(x, j + 1)[j])
}

/// `K_n(x, y) = sum_{j<n} phi_j(x) phi_j(y)`.
pub fn cd_kernel(basis: &WeightedOpBasis, x: f64, y: f64) -> f64 {
    let px = basis.values(x, basis.n);
    if x == y {
        return px.iter().map(|v| v * v).sum();
    }
    let py = basis.values(y, basis.n);
    px.iter().zip(&py).map(|(a, b)| a * b).sum()
}

/// Kernel matrix `K_n(x_i, x_j)` on a set of nodes.
pub fn kernel_matrix(basis: &WeightedOpBasis, nodes: &[f64]) -> Vec<f64> {
    let m = nodes.len();
    let phis: Vec<Vec<f64>> = nodes.iter().map(|&x| basis.values(x, basis.n)).collect();
    let mut k = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let v: f64 = phis[i].iter().zip(&phis[j]).map(|(a, b)| a * b).sum();
            k[i * m + j] = v;
            k[j * m + i] = v;
        }
    }
    k
}

/// Residuals of the rescaled kernel
/// `K^ = K_n(x0 + xi/(n rho), x0 + eta/(n rho)) / (n rho)`, with
/// `rho = rho(x0)`, against the sine kernel and against the sine kernel
/// plus its explicit `1/n` correction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SineResidual {
    pub rescaled_kernel: f64,
    pub leading: f64,
    pub second_order: f64,
}

pub fn sine_residual(basis: &WeightedOpBasis, x0: f64, xi: f64, eta: f64) -> Result<SineResidual> {
    let spec = basis.spec();
    let rho = spec.density(x0)?;
    let drho = spec.derivative(x0, 1)?;
    let (a0, b0) = spec.support();
    let nf = basis.n as f64;
    let scale = nf * rho;
    let x = x0 + xi / scale;
    let y = x0 + eta / scale;
    if !spec.in_open_support(x) || !spec.in_open_support(y) {
        return Err(Error::Domain("rescaled points leave the support"));
    }
    let k_hat = cd_kernel(basis, x, y) / scale;
    let leading = k_hat - math::sinc_pi(xi - eta);

    let cos_diff = math::cos(PI * (xi - eta));
    let drift = drho / (2.0 * rho * rho) * (xi + eta) * cos_diff;
    // 2 pi n mu([x0, b0]) reduced mod 2 pi before adding the xi + eta phase
    let turns = nf * mu_mass(&spec, x0)?;
    let phase = 2.0 * PI * (turns - math::floor(turns)) - PI * (xi + eta);
    let edge = (b0 - a0) / (4.0 * PI * rho * (b0 - x0) * (x0 - a0)) * math::cos(math::reduce_angle(phase));
    let second_order = leading - (drift - edge) / nf;
    Ok(SineResidual { rescaled_kernel: k_hat, leading, second_order })
}
