//! Equilibrium densities, minimizer classification on a bulk window, and the
//! constants that pin down the limiting gap law.
//!
//! For a window `I` (finite union of closed intervals inside the open
//! support) the largest gaps concentrate where the density is smallest. The
//! order `q` at which `rho` leaves its infimum and the Taylor coefficients
//! `d_u` at those minimizers enter both the rescaling and the shift `c_{V,I}`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::math::{self, PI};
use crate::quadrature;

/// Which eigenvalue law a density belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnsembleKind {
    Gue,
    Lue,
    Jue,
    Custom,
}

impl EnsembleKind {
    pub fn name(self) -> &'static str {
        match self {
            EnsembleKind::Gue => "gue",
            EnsembleKind::Lue => "lue",
            EnsembleKind::Jue => "jue",
            EnsembleKind::Custom => "custom",
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type DensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// `(x, k) -> rho^(k)(x)` for `k` in `1..=4`.
pub type DerivativeFn = Arc<dyn Fn(f64, usize) -> f64 + Send + Sync>;

#[derive(Clone)]
struct CustomDensity {
    density: DensityFn,
    derivatives: Option<DerivativeFn>,
}

#[derive(Clone, Copy)]
enum Edge {
    Left,
    Right,
}

/// An equilibrium density together with its support.
#[derive(Clone)]
pub struct EnsembleSpec {
    kind: EnsembleKind,
    support: (f64, f64),
    custom: Option<CustomDensity>,
}

impl fmt::Debug for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EnsembleSpec").field("kind", &self.kind).field("support", &self.support).finish()
    }
}

impl EnsembleSpec {
    /// Semicircle on `[-2, 2]`.
    pub fn gue() -> Self {
        Self::canonical(EnsembleKind::Gue)
    }

    /// Marchenko–Pastur (square case) on `[0, 4]`.
    pub fn lue() -> Self {
        Self::canonical(EnsembleKind::Lue)
    }

    /// Arcsine law on `[0, 1]`.
    pub fn jue() -> Self {
        Self::canonical(EnsembleKind::Jue)
    }

    pub fn canonical(kind: EnsembleKind) -> Self {
        let support = match kind {
            EnsembleKind::Gue => (-2.0, 2.0),
            EnsembleKind::Lue => (0.0, 4.0),
            EnsembleKind::Jue => (0.0, 1.0),
            EnsembleKind::Custom => panic!("custom densities need an evaluator"),
        };
        EnsembleSpec { kind, support, custom: None }
    }

    /// A user density on `support`. Without `derivatives`, derivatives are
    /// estimated by Richardson-extrapolated central differences.
    pub fn custom(support: (f64, f64), density: DensityFn, derivatives: Option<DerivativeFn>) -> Result<Self> {
        if !(support.0 < support.1) || !support.0.is_finite() || !support.1.is_finite() {
            return Err(Error::Argument("custom support must be a finite nondegenerate interval"));
        }
        Ok(EnsembleSpec { kind: EnsembleKind::Custom, support, custom: Some(CustomDensity { density, derivatives }) })
    }

    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn in_open_support(&self, x: f64) -> bool {
        x > self.support.0 && x < self.support.1
    }

    /// `rho(x)`; errors outside the open support.
    pub fn density(&self, x: f64) -> Result<f64> {
        if !self.in_open_support(x) {
            return Err(Error::Domain("density evaluated outside the open support"));
        }
        Ok(self.density_unchecked(x))
    }

    pub(crate) fn density_unchecked(&self, x: f64) -> f64 {
        match self.kind {
            EnsembleKind::Gue => math::sqrt(4.0 - x * x) / (2.0 * PI),
            EnsembleKind::Lue => math::sqrt((4.0 - x) / x) / (2.0 * PI),
            EnsembleKind::Jue => 1.0 / (PI * math::sqrt(x * (1.0 - x))),
            EnsembleKind::Custom => (self.custom.as_ref().expect("custom evaluator").density)(x),
        }
    }

    /// `rho(a0 + s)` or `rho(b0 - s)`, written so the distance `s` to the
    /// edge is never recovered by cancellation.
    fn density_at_edge_offset(&self, s: f64, edge: Edge) -> f64 {
        let (a0, b0) = self.support;
        match (self.kind, edge) {
            (EnsembleKind::Gue, _) => math::sqrt(s * (4.0 - s)) / (2.0 * PI),
            (EnsembleKind::Lue, Edge::Left) => math::sqrt((4.0 - s) / s) / (2.0 * PI),
            (EnsembleKind::Lue, Edge::Right) => math::sqrt(s / (4.0 - s)) / (2.0 * PI),
            (EnsembleKind::Jue, _) => 1.0 / (PI * math::sqrt(s * (1.0 - s))),
            (EnsembleKind::Custom, Edge::Left) => self.density_unchecked(a0 + s),
            (EnsembleKind::Custom, Edge::Right) => self.density_unchecked(b0 - s),
        }
    }

    /// Taylor jet of a canonical density at `x`.
    fn canonical_jet(&self, x: f64) -> Jet {
        let v = Jet::variable(x);
        let c = Jet::constant;
        match self.kind {
            EnsembleKind::Gue => (c(4.0) - v * v).sqrt().scale(1.0 / (2.0 * PI)),
            EnsembleKind::Lue => ((c(4.0) - v) / v).sqrt().scale(1.0 / (2.0 * PI)),
            EnsembleKind::Jue => (v * (c(1.0) - v)).sqrt().recip().scale(1.0 / PI),
            EnsembleKind::Custom => unreachable!(),
        }
    }

    /// `rho^(k)(x)` for `k` in `1..=4`.
    pub fn derivative(&self, x: f64, k: usize) -> Result<f64> {
        if !(1..=4).contains(&k) {
            return Err(Error::Index { limit: 4, got: k });
        }
        if !self.in_open_support(x) {
            return Err(Error::Domain("derivative evaluated outside the open support"));
        }
        match &self.custom {
            None => Ok(self.canonical_jet(x).derivative(k)),
            Some(CustomDensity { derivatives: Some(d), .. }) => Ok(d(x, k)),
            Some(CustomDensity { density, derivatives: None }) => {
                richardson_derivative(density.as_ref(), x, k, self.support)
            }
        }
    }
}

fn central_difference(f: &dyn Fn(f64) -> f64, x: f64, k: usize, h: f64) -> f64 {
    match k {
        1 => (f(x + h) - f(x - h)) / (2.0 * h),
        2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
        3 => (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h),
        _ => (f(x + 2.0 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h)) / (h * h * h * h),
    }
}

/// Central differences at `h, h/2, h/4` followed by three Richardson levels
/// (the stencils have even error expansions).
fn richardson_derivative(f: &dyn Fn(f64) -> f64, x: f64, k: usize, support: (f64, f64)) -> Result<f64> {
    let width = support.1 - support.0;
    let room = (x - support.0).min(support.1 - x) / 2.5;
    let h = (1e-3 * width).min(room);
    if !(h > 0.0) {
        return Err(Error::Domain("no room for finite differences"));
    }
    let mut table = [[0.0f64; 3]; 3];
    for (level, row) in table.iter_mut().enumerate() {
        row[0] = central_difference(f, x, k, h / (1u32 << level) as f64);
    }
    for col in 1..3 {
        let factor = math::powi(4.0, col as i32);
        for row in col..3 {
            table[row][col] = (factor * table[row][col - 1] - table[row - 1][col - 1]) / (factor - 1.0);
        }
    }
    let best = table[2][2];
    let prev = table[1][1];
    let scale = 1.0f64.max(best.abs());
    if !best.is_finite() || (best - prev).abs() > 1e-6 * scale {
        return Err(Error::Precision("Richardson extrapolation did not settle"));
    }
    Ok(best)
}

/// A finite union of disjoint closed intervals, strictly ordered.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::Argument("interval union must contain at least one interval"));
        }
        let mut prev_hi = f64::NEG_INFINITY;
        for &(lo, hi) in &intervals {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::Argument("interval endpoints must be finite"));
            }
            if !(lo < hi) {
                return Err(Error::Argument("each interval needs lo < hi"));
            }
            if !(lo > prev_hi) {
                return Err(Error::Argument("intervals must be disjoint and increasing"));
            }
            prev_hi = hi;
        }
        Ok(IntervalUnion { intervals })
    }

    pub fn single(lo: f64, hi: f64) -> Result<Self> {
        Self::new(alloc::vec![(lo, hi)])
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// Checks that the closure sits inside the open support.
    pub fn validate_for(&self, spec: &EnsembleSpec) -> Result<()> {
        let (a0, b0) = spec.support();
        let first = self.intervals[0].0;
        let last = self.intervals[self.intervals.len() - 1].1;
        if first > a0 && last < b0 {
            Ok(())
        } else {
            Err(Error::Domain("interval union must lie strictly inside the support"))
        }
    }

    /// Closed-interval membership.
    pub fn contains(&self, x: f64) -> bool {
        self.component_of(x).is_some()
    }

    pub fn component_of(&self, x: f64) -> Option<usize> {
        self.intervals.iter().position(|&(lo, hi)| x >= lo && x <= hi)
    }

    /// Membership in the interior of the union.
    pub fn contains_interior(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| x > lo && x < hi)
    }

    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum()
    }

    /// All endpoints in increasing order.
    pub fn endpoints(&self) -> Vec<f64> {
        self.intervals.iter().flat_map(|&(lo, hi)| [lo, hi]).collect()
    }
}

/// A point where `rho` attains its infimum over the window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimizer {
    pub u: f64,
    /// Order of the first nonvanishing derivative.
    pub q_u: u32,
    /// `|rho^(q_u)(u) / q_u!|`.
    pub d_u: f64,
    pub on_boundary: bool,
}

/// Constants derived from a [`MinimizerReport`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapConstants {
    pub m_i: f64,
    pub s_i: f64,
    pub c_vi: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimizerReport {
    pub rho_i: f64,
    pub q: u32,
    /// Minimizers of top order on the boundary of the window.
    pub boundary: Vec<Minimizer>,
    /// Minimizers of top order in the interior of the window.
    pub interior: Vec<Minimizer>,
    pub constants: Option<GapConstants>,
}

impl MinimizerReport {
    /// `sum_A d^{-1/q} + 2 sum_B d^{-1/q}`.
    pub fn weighted_inverse_sum(&self) -> f64 {
        let qinv = 1.0 / self.q as f64;
        let a: f64 = self.boundary.iter().map(|m| math::powf(m.d_u, -qinv)).sum();
        let b: f64 = self.interior.iter().map(|m| math::powf(m.d_u, -qinv)).sum();
        a + 2.0 * b
    }

    pub fn minimizers(&self) -> impl Iterator<Item = &Minimizer> {
        self.boundary.iter().chain(self.interior.iter())
    }

    pub fn constants(&self) -> Option<GapConstants> {
        self.constants
    }

    /// `c0 + log(M(I) S(I) / 4)`, an independent route to `c_{V,I}`.
    pub fn c_vi_from_mass(&self) -> Option<f64> {
        self.constants.map(|c| math::c0() + math::ln(c.m_i * c.s_i / 4.0))
    }
}

const GRID_POINTS: usize = 10_000;
const TIE_RTOL: f64 = 1e-12;
const ORDER_TOL: f64 = 1e-9;

/// Locates the global minimizers of `rho` on the closure of `window` and
/// classifies them by order. Constants are left unset.
pub fn classify_minimizers(spec: &EnsembleSpec, window: &IntervalUnion) -> Result<MinimizerReport> {
    window.validate_for(spec)?;
    let mut candidates: Vec<(f64, f64, bool)> = Vec::new();
    for &(lo, hi) in window.intervals() {
        candidates.push((lo, spec.density_unchecked(lo), true));
        candidates.push((hi, spec.density_unchecked(hi), true));
        let h = (hi - lo) / GRID_POINTS as f64;
        let grid: Vec<f64> = (0..=GRID_POINTS).map(|i| spec.density_unchecked(lo + h * i as f64)).collect();
        for i in 1..GRID_POINTS {
            if grid[i] <= grid[i - 1] && grid[i] <= grid[i + 1] {
                let u = refine_interior_minimum(spec, lo + h * (i - 1) as f64, lo + h * (i + 1) as f64)?;
                let near_edge = (u - lo).abs() <= 1e-9 * (hi - lo) || (hi - u).abs() <= 1e-9 * (hi - lo);
                let dup = candidates.iter().any(|c| !c.2 && (c.0 - u).abs() <= 1e-9 * (hi - lo));
                if !near_edge && !dup {
                    candidates.push((u, spec.density_unchecked(u), false));
                }
            }
        }
    }
    let rho_i = candidates.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let tol = ORDER_TOL * rho_i.max(1.0);
    let mut found = Vec::new();
    for &(u, value, on_boundary) in &candidates {
        if (value - rho_i).abs() > TIE_RTOL * rho_i {
            continue;
        }
        let mut order = None;
        for k in 1..=4usize {
            let der = spec.derivative(u, k)?;
            if der.abs() > tol {
                order = Some((k as u32, der.abs() / math::factorial(k as u32)));
                break;
            }
        }
        let (q_u, d_u) = order.ok_or(Error::UnsupportedDegeneracy { at: u })?;
        if !on_boundary && q_u % 2 == 1 {
            return Err(Error::Precision("interior minimizer with odd vanishing order"));
        }
        found.push(Minimizer { u, q_u, d_u, on_boundary });
    }
    let q = found.iter().map(|m| m.q_u).max().ok_or(Error::NoConvergence("no minimizer found"))?;
    let mut boundary: Vec<Minimizer> = found.iter().copied().filter(|m| m.q_u == q && m.on_boundary).collect();
    let mut interior: Vec<Minimizer> = found.iter().copied().filter(|m| m.q_u == q && !m.on_boundary).collect();
    boundary.sort_by(|a, b| a.u.total_cmp(&b.u));
    interior.sort_by(|a, b| a.u.total_cmp(&b.u));
    Ok(MinimizerReport { rho_i, q, boundary, interior, constants: None })
}

/// Pins an interior local minimum bracketed by `[lo, hi]` down to a root of
/// `rho'` by bisection, falling back to golden-section search on `rho` when
/// the derivative does not change sign across the bracket.
fn refine_interior_minimum(spec: &EnsembleSpec, lo: f64, hi: f64) -> Result<f64> {
    let dlo = spec.derivative(lo, 1)?;
    let dhi = spec.derivative(hi, 1)?;
    if dlo < 0.0 && dhi > 0.0 {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if spec.derivative(mid, 1)? < 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        return Ok(0.5 * (a + b));
    }
    let inv_phi = (math::sqrt(5.0) - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    while (b - a).abs() > 1e-12 * (1.0 + a.abs()) {
        if spec.density_unchecked(c) <= spec.density_unchecked(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
    }
    Ok(0.5 * (a + b))
}

/// Fills `M(I)`, `S(I)` and `c_{V,I}` into a classification report.
pub fn constants(report: &MinimizerReport) -> MinimizerReport {
    let q = report.q as f64;
    let shape = math::gamma(1.0 / q) / q;
    let sum = report.weighted_inverse_sum();
    let m_i = sum * math::powf(report.rho_i, 1.0 / q) * shape;
    let s_i = 2.0 * PI * report.rho_i;
    let c_vi = math::c0() + math::ln(PI / 2.0 * shape * sum * math::powf(report.rho_i, 1.0 + 1.0 / q));
    let mut out = report.clone();
    out.constants = Some(GapConstants { m_i, s_i, c_vi });
    out
}

/// Classification followed by [`constants`].
pub fn analyze(spec: &EnsembleSpec, window: &IntervalUnion) -> Result<MinimizerReport> {
    Ok(constants(&classify_minimizers(spec, window)?))
}

/// `c0 = log(2)/12 + 3 zeta'(-1)`.
pub fn c0_constant() -> f64 {
    math::c0()
}

/// Equilibrium mass to the right of `x0`: `int_{x0}^{b0} rho`.
pub fn mu_mass(spec: &EnsembleSpec, x0: f64) -> Result<f64> {
    if !spec.in_open_support(x0) {
        return Err(Error::Domain("mu_mass needs a point in the open support"));
    }
    let (a0, b0) = spec.support();
    let mid = 0.5 * (a0 + b0);
    if x0 >= mid {
        return Ok(mass_to_right_edge(spec, x0));
    }
    Ok(mass_to_right_edge(spec, mid) + mass_from_left_edge(spec, mid) - mass_from_left_edge(spec, x0))
}

/// `int_x^{b0} rho` with `x = b0 - t^2`, which absorbs square-root behaviour
/// at the edge.
fn mass_to_right_edge(spec: &EnsembleSpec, x: f64) -> f64 {
    let b0 = spec.support().1;
    quadrature::adaptive(|t| 2.0 * t * spec.density_at_edge_offset(t * t, Edge::Right), 0.0, math::sqrt(b0 - x), 1e-14)
}

/// `int_{a0}^x rho` with `x = a0 + t^2`.
fn mass_from_left_edge(spec: &EnsembleSpec, x: f64) -> f64 {
    let a0 = spec.support().0;
    quadrature::adaptive(|t| 2.0 * t * spec.density_at_edge_offset(t * t, Edge::Left), 0.0, math::sqrt(x - a0), 1e-14)
}

pub fn total_mass(spec: &EnsembleSpec) -> f64 {
    let (a0, b0) = spec.support();
    let mid = 0.5 * (a0 + b0);
    mass_from_left_edge(spec, mid) + mass_to_right_edge(spec, mid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn density_values() {
        assert!(close(EnsembleSpec::gue().density(0.0).unwrap(), 1.0 / PI, 1e-15));
        assert!(close(EnsembleSpec::jue().density(0.5).unwrap(), 2.0 / PI, 1e-15));
        assert!(close(EnsembleSpec::lue().density(2.0).unwrap(), 0.159_154_943_091_895_35, 1e-15));
    }

    #[test]
    fn density_rejects_edges() {
        assert!(EnsembleSpec::gue().density(2.0).is_err());
        assert!(EnsembleSpec::lue().density(0.0).is_err());
        assert!(EnsembleSpec::jue().density(1.5).is_err());
    }

    #[test]
    fn normalization() {
        for spec in [EnsembleSpec::gue(), EnsembleSpec::lue(), EnsembleSpec::jue()] {
            assert!(close(total_mass(&spec), 1.0, 1e-10), "{:?}", spec.kind());
        }
    }

    #[test]
    fn mass_to_the_right() {
        assert!(close(mu_mass(&EnsembleSpec::gue(), 0.0).unwrap(), 0.5, 1e-13));
        assert!(close(mu_mass(&EnsembleSpec::jue(), 0.5).unwrap(), 0.5, 1e-13));
        // semicircle CDF: (1/2pi)(x sqrt(4-x^2)/2 + 2 asin(x/2)) + 1/2
        let cdf = |x: f64| (x * (4.0 - x * x).sqrt() / 2.0 + 2.0 * (x / 2.0).asin()) / (2.0 * PI) + 0.5;
        let m = mu_mass(&EnsembleSpec::gue(), 1.0).unwrap();
        assert!(close(m, 1.0 - cdf(1.0), 1e-13));
        assert!(close(m, 0.195_501_109_477_885_1, 1e-12), "{m}");
        assert!(mu_mass(&EnsembleSpec::gue(), 2.5).is_err());
    }

    #[test]
    fn gue_half_to_one() {
        let r = classify_minimizers(&EnsembleSpec::gue(), &IntervalUnion::single(0.5, 1.0).unwrap()).unwrap();
        assert_eq!(r.q, 1);
        assert_eq!(r.boundary.len(), 1);
        assert!(r.interior.is_empty());
        assert_eq!(r.boundary[0].u, 1.0);
        assert!(close(r.rho_i, 3f64.sqrt() / (2.0 * PI), 1e-15));
        assert!(close(r.boundary[0].d_u, 1.0 / (2.0 * PI * 3f64.sqrt()), 1e-14));
    }

    #[test]
    fn jue_symmetric_window() {
        let r = classify_minimizers(&EnsembleSpec::jue(), &IntervalUnion::single(0.25, 0.75).unwrap()).unwrap();
        assert_eq!(r.q, 2);
        assert!(r.boundary.is_empty());
        assert_eq!(r.interior.len(), 1);
        assert!(close(r.interior[0].u, 0.5, 1e-12));
        assert!(close(r.interior[0].d_u, 4.0 / PI, 1e-10));
    }

    #[test]
    fn gue_symmetric_window_has_two_boundary_minimizers() {
        let r = classify_minimizers(&EnsembleSpec::gue(), &IntervalUnion::single(-1.0, 1.0).unwrap()).unwrap();
        assert_eq!(r.q, 1);
        let us: Vec<f64> = r.boundary.iter().map(|m| m.u).collect();
        assert_eq!(us, alloc::vec![-1.0, 1.0]);
        assert!(close(r.rho_i, 3f64.sqrt() / (2.0 * PI), 1e-15));
    }

    #[test]
    fn constants_match_closed_forms() {
        let c0 = c0_constant();
        let r = analyze(&EnsembleSpec::gue(), &IntervalUnion::single(0.5, 1.0).unwrap()).unwrap();
        let want = c0 + 1.5 * 3f64.ln() - 4f64.ln();
        assert!(close(r.constants.unwrap().c_vi, want, 1e-12));

        let r = analyze(&EnsembleSpec::jue(), &IntervalUnion::single(0.25, 0.75).unwrap()).unwrap();
        let want = c0 + (PI.sqrt() / 2f64.sqrt()).ln();
        assert!(close(r.constants.unwrap().c_vi, want, 1e-12));

        let r = analyze(&EnsembleSpec::lue(), &IntervalUnion::single(1.0, 2.0).unwrap()).unwrap();
        assert!(close(r.constants.unwrap().c_vi, c0 + 0.5f64.ln(), 1e-12));
        assert!(close(r.c_vi_from_mass().unwrap(), r.constants.unwrap().c_vi, 1e-12));
    }

    #[test]
    fn window_validation() {
        assert!(IntervalUnion::new(alloc::vec![]).is_err());
        assert!(IntervalUnion::new(alloc::vec![(0.3, 0.2)]).is_err());
        assert!(IntervalUnion::new(alloc::vec![(0.1, 0.3), (0.3, 0.5)]).is_err());
        let w = IntervalUnion::single(3.0, 4.0).unwrap();
        assert!(classify_minimizers(&EnsembleSpec::gue(), &w).is_err());
        let w = IntervalUnion::single(-2.0, 0.0).unwrap();
        assert!(w.validate_for(&EnsembleSpec::gue()).is_err());
    }

    #[test]
    fn custom_without_derivatives_matches_builtin() {
        let custom =
            EnsembleSpec::custom((-2.0, 2.0), Arc::new(|x: f64| math::sqrt(4.0 - x * x) / (2.0 * PI)), None).unwrap();
        let w = IntervalUnion::single(-0.3, 1.4).unwrap();
        let a = analyze(&EnsembleSpec::gue(), &w).unwrap();
        let b = analyze(&custom, &w).unwrap();
        assert_eq!(a.q, b.q);
        assert!(close(a.boundary[0].d_u, b.boundary[0].d_u, 1e-8));
        assert!(close(a.constants.unwrap().c_vi, b.constants.unwrap().c_vi, 1e-8));
    }

    #[test]
    fn flat_density_is_unsupported() {
        let flat = EnsembleSpec::custom((0.0, 1.0), Arc::new(|_| 1.0), None).unwrap();
        let w = IntervalUnion::single(0.2, 0.4).unwrap();
        assert!(matches!(classify_minimizers(&flat, &w), Err(Error::UnsupportedDegeneracy { .. })));
    }
}
