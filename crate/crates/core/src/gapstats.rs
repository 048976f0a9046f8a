//! Gaps on a window, their rescaling to the `tau` variables, exceedance
//! counts, and two independent membership tests for the box union
//! `Sigma_k(a_1, ..., a_k)`.
//!
//! Eigenvalue indices are 0-based throughout: index `i` names the gap
//! `lambda[i + 1] - lambda[i]`.

use alloc::vec::Vec;

use crate::equilibrium::IntervalUnion;
use crate::error::{Error, Result};
use crate::math;

/// A recorded gap `lambda[index + 1] - lambda[index]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gap {
    pub index: usize,
    pub value: f64,
}

/// Gaps whose two endpoints lie in the window, largest first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GapList {
    gaps: Vec<Gap>,
    same_component: Vec<usize>,
}

impl GapList {
    /// Sorted descending by value; equal values keep ascending index order.
    pub fn gaps(&self) -> &[Gap] {
        &self.gaps
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    /// The `k`-th largest gap, `k >= 1`.
    pub fn kth_largest(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.gaps.get(i)).map(|g| g.value)
    }

    /// `Lambda(I)`: indices with both endpoints in the window, ascending.
    pub fn lambda(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = self.gaps.iter().map(|g| g.index).collect();
        idx.sort_unstable();
        idx
    }

    /// `Lambda~(I)`: indices with both endpoints in the same component.
    pub fn lambda_tilde(&self) -> &[usize] {
        &self.same_component
    }

    pub fn components_respected(&self) -> bool {
        self.gaps.len() == self.same_component.len()
    }
}

/// Extracts the gaps of a sorted spectrum whose endpoints both lie in `window`
/// (closed intervals).
pub fn extract_gaps(eigenvalues: &[f64], window: &IntervalUnion) -> GapList {
    let comp: Vec<Option<usize>> = eigenvalues.iter().map(|&x| window.component_of(x)).collect();
    let mut gaps = Vec::new();
    let mut same_component = Vec::new();
    for i in 0..eigenvalues.len().saturating_sub(1) {
        if let (Some(c0), Some(c1)) = (comp[i], comp[i + 1]) {
            gaps.push(Gap { index: i, value: eigenvalues[i + 1] - eigenvalues[i] });
            if c0 == c1 {
                same_component.push(i);
            }
        }
    }
    gaps.sort_by(|a, b| b.value.total_cmp(&a.value).then(a.index.cmp(&b.index)));
    GapList { gaps, same_component }
}

/// Parameters of the affine map between a gap `m` and its rescaled value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RescaleParams {
    n: usize,
    q: u32,
    s_i: f64,
}

impl RescaleParams {
    pub fn new(n: usize, q: u32, s_i: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Argument("rescaling needs n >= 3"));
        }
        if q == 0 {
            return Err(Error::Argument("q must be positive"));
        }
        if !(s_i > 0.0 && s_i.is_finite()) {
            return Err(Error::Argument("S(I) must be positive"));
        }
        Ok(RescaleParams { n, q, s_i })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn s_i(&self) -> f64 {
        self.s_i
    }

    fn log_n(&self) -> f64 {
        math::ln(self.n as f64)
    }

    fn shift_coefficient(&self) -> f64 {
        let q = self.q as f64;
        (3.0 * q - 8.0) / (2.0 * q)
    }
}

/// `G_n(x) = sqrt(32 log n)/n + (3q-8)/(2q) log(2 log n)/(n sqrt(2 log n))
///           + 4x/(n sqrt(2 log n))`.
pub fn gn(params: &RescaleParams, x: f64) -> f64 {
    let n = params.n as f64;
    let l = params.log_n();
    let s = math::sqrt(2.0 * l);
    math::sqrt(32.0 * l) / n + params.shift_coefficient() * math::ln(2.0 * l) / (n * s) + 4.0 * x / (n * s)
}

/// The unique `tau` with `G_n(tau) = S(I) m`.
pub fn rescale_gap(params: &RescaleParams, m: f64) -> f64 {
    let n = params.n as f64;
    let l = params.log_n();
    (params.s_i * m * n * math::sqrt(2.0 * l) - 8.0 * l - params.shift_coefficient() * math::ln(2.0 * l)) / 4.0
}

/// Rescaled gaps of a list, in the list's (descending) order.
pub fn rescale_all(params: &RescaleParams, gaps: &GapList) -> Vec<f64> {
    gaps.gaps.iter().map(|g| rescale_gap(params, g.value)).collect()
}

/// `#{tau >= x}`.
pub fn exceedance_count(taus: &[f64], x: f64) -> usize {
    taus.iter().filter(|&&t| t >= x).count()
}

pub const SIGMA_DIRECT_MAX_K: usize = 6;

fn check_sigma_args(a: &[f64], y: &[f64]) -> Result<()> {
    if a.len() != y.len() {
        return Err(Error::Argument("a and y must have equal length"));
    }
    if a.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Argument("gap thresholds must be positive"));
    }
    Ok(())
}

/// Decides `(y_1..y_k) in Sigma_k(a_1..a_k)` from the definition: some
/// assignment of distinct `i_j in Lambda(I)` has
/// `lambda[i_j] < y_j < lambda[i_j + 1] - a_j` for every `j`.
pub fn sigma_contains_direct(lambdas: &[f64], window: &IntervalUnion, a: &[f64], y: &[f64]) -> Result<bool> {
    check_sigma_args(a, y)?;
    let k = a.len();
    if k > SIGMA_DIRECT_MAX_K {
        return Err(Error::Size { limit: SIGMA_DIRECT_MAX_K, got: k });
    }
    let admissible = extract_gaps(lambdas, window).lambda();
    // candidates[j]: indices whose open box coordinate contains y_j
    let candidates: Vec<Vec<usize>> = (0..k)
        .map(|j| admissible.iter().copied().filter(|&i| lambdas[i] < y[j] && y[j] < lambdas[i + 1] - a[j]).collect())
        .collect();
    fn assign(j: usize, candidates: &[Vec<usize>], used: &mut Vec<usize>) -> bool {
        if j == candidates.len() {
            return true;
        }
        for &i in &candidates[j] {
            if !used.contains(&i) {
                used.push(i);
                if assign(j + 1, candidates, used) {
                    return true;
                }
                used.pop();
            }
        }
        false
    }
    Ok(assign(0, &candidates, &mut Vec::with_capacity(k)))
}

/// Decides the same membership through three checkable conditions on the
/// points `y_j`, the closed windows `[y_j, y_j + a_j]`, and the segments
/// between consecutive points of `{y_j} ∪ ∂I`. Only valid when every gap
/// with both endpoints in `I` stays within one component.
pub fn sigma_contains_conditions(lambdas: &[f64], window: &IntervalUnion, a: &[f64], y: &[f64]) -> Result<bool> {
    check_sigma_args(a, y)?;
    if !extract_gaps(lambdas, window).components_respected() {
        return Err(Error::Precondition("a gap with endpoints in I straddles two components"));
    }
    let k = y.len();

    // (i)
    if !y.iter().all(|&v| window.contains_interior(v)) {
        return Ok(false);
    }
    for l in 0..k {
        for j in l + 1..k {
            if y[l] <= y[j] + a[j] && y[j] <= y[l] + a[l] {
                return Ok(false);
            }
        }
    }

    // (ii)
    let hits = |lo: f64, hi: f64| lambdas.iter().any(|&x| x >= lo && x <= hi);
    if (0..k).any(|j| hits(y[j], y[j] + a[j])) {
        return Ok(false);
    }

    // (iii)
    let mut merged: Vec<(f64, bool)> = y.iter().map(|&v| (v, false)).collect();
    merged.extend(window.endpoints().into_iter().map(|v| (v, true)));
    merged.sort_by(|p, q| p.0.total_cmp(&q.0));
    for w in merged.windows(2) {
        let (lo, lo_is_endpoint) = w[0];
        let (hi, hi_is_endpoint) = w[1];
        if lo_is_endpoint && hi_is_endpoint {
            continue;
        }
        if !hits(lo, hi) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn gaps_on_single_window() {
        let w = IntervalUnion::single(0.3, 0.95).unwrap();
        let g = extract_gaps(&[0.1, 0.4, 0.45, 0.9], &w);
        assert_eq!(g.len(), 2);
        assert_eq!(g.gaps()[0].index, 2);
        assert!((g.gaps()[0].value - 0.45).abs() < 1e-15);
        assert_eq!(g.gaps()[1].index, 1);
        assert!((g.gaps()[1].value - 0.05).abs() < 1e-15);
        assert_eq!(g.kth_largest(1), Some(g.gaps()[0].value));
        assert_eq!(g.kth_largest(3), None);
    }

    #[test]
    fn gaps_on_union() {
        let w = IntervalUnion::new(vec![(0.0, 0.3), (0.5, 1.0)]).unwrap();
        // both 0.2 and 0.6 lie in I, so the straddling pair is a gap of
        // Lambda(I) but not of Lambda~(I)
        let g = extract_gaps(&[0.1, 0.2, 0.6, 0.7], &w);
        assert_eq!(g.lambda(), vec![0, 1, 2]);
        assert_eq!(g.lambda_tilde(), &[0, 2]);
        assert!((g.gaps()[0].value - 0.4).abs() < 1e-12);
        assert!(g.gaps()[1..].iter().all(|x| (x.value - 0.1).abs() < 1e-12));

        let g = extract_gaps(&[0.1, 0.2, 0.4, 0.6, 0.7], &w);
        assert_eq!(g.lambda(), vec![0, 3]);
        assert!(g.components_respected());
        let g = extract_gaps(&[0.1, 0.29, 0.55], &w);
        assert_eq!(g.lambda(), vec![0, 1]);
        assert_eq!(g.lambda_tilde(), &[0]);
        assert!(!g.components_respected());
    }

    #[test]
    fn empty_when_no_pair_fits() {
        let w = IntervalUnion::single(0.3, 0.35).unwrap();
        assert!(extract_gaps(&[0.1, 0.32, 0.9], &w).is_empty());
    }

    #[test]
    fn gn_cancellation_and_special_tau() {
        let p = RescaleParams::new(1000, 1, 1.3).unwrap();
        let l = (1000f64).ln();
        let x = -(3.0 - 8.0) * (2.0 * l).ln() / 8.0;
        assert!((gn(&p, x) - (32.0 * l).sqrt() / 1000.0).abs() < 1e-17);
        let m = (32.0 * l).sqrt() / (1000.0 * 1.3);
        assert!((rescale_gap(&p, m) - 5.0 / 8.0 * (2.0 * l).ln()).abs() < 1e-12);
    }

    #[test]
    fn rescale_params_validation() {
        assert!(RescaleParams::new(2, 1, 1.0).is_err());
        assert!(RescaleParams::new(10, 0, 1.0).is_err());
        assert!(RescaleParams::new(10, 1, 0.0).is_err());
    }

    #[test]
    fn exceedance_examples() {
        assert_eq!(exceedance_count(&[], 0.0), 0);
        assert_eq!(exceedance_count(&[1.0, 0.5, -0.2], 0.0), 2);
        assert_eq!(exceedance_count(&[0.7], 0.7), 1);
    }

    #[test]
    fn sigma_direct_examples() {
        let w = IntervalUnion::single(0.0, 1.0).unwrap();
        assert!(sigma_contains_direct(&[0.1, 0.9], &w, &[0.3], &[0.2]).unwrap());
        assert!(!sigma_contains_direct(&[0.1, 0.9], &w, &[0.3], &[0.7]).unwrap());
        assert!(!sigma_contains_direct(&[0.1, 0.9], &w, &[0.1, 0.1], &[0.2, 0.5]).unwrap());
        assert!(sigma_contains_direct(&[0.1, 0.4, 0.9], &w, &[0.1, 0.1], &[0.2, 0.5]).unwrap());
        assert!(matches!(sigma_contains_direct(&[0.1, 0.9], &w, &[0.1; 7], &[0.2; 7]), Err(Error::Size { .. })));
    }

    #[test]
    fn sigma_conditions_examples() {
        let w = IntervalUnion::single(0.0, 1.0).unwrap();
        assert!(sigma_contains_conditions(&[0.1, 0.9], &w, &[0.3], &[0.2]).unwrap());
        assert!(!sigma_contains_conditions(&[0.1, 0.4, 0.9], &w, &[0.3], &[0.2]).unwrap());
        assert!(!sigma_contains_conditions(&[0.1, 0.9], &w, &[0.3], &[0.0]).unwrap());
        let u = IntervalUnion::new(vec![(0.0, 0.3), (0.5, 1.0)]).unwrap();
        assert!(matches!(
            sigma_contains_conditions(&[0.1, 0.29, 0.55], &u, &[0.01], &[0.2]),
            Err(Error::Precondition(_))
        ));
    }
}
