//! Exact samplers for the beta = 2 Hermite, Laguerre and Jacobi eigenvalue
//! laws with weights `exp(-n V)`, plus dense-matrix samplers used to
//! cross-check them at small `n`.
//!
//! Scaling: the Hermite tridiagonal model has joint density proportional to
//! `Delta^2 exp(-sum l^2 / 2)`; dividing by `sqrt(n)` turns the weight into
//! `exp(-n sum l^2 / 2)`. The Laguerre bidiagonal model gives
//! `Delta^2 exp(-sum l)` and dividing by `n` gives `exp(-n sum l)`. The
//! Jacobi model lives on `[-2, 2]` and is mapped affinely onto `[0, 1]`.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rand_distr::{Beta, Distribution, Gamma, StandardNormal};

use crate::equilibrium::EnsembleKind;
use crate::error::{Error, Result};
use crate::linalg;
use crate::math;

/// One sorted eigenvalue configuration with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumSample {
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    pub ensemble: EnsembleKind,
    pub seed: u64,
    pub replica_index: u64,
}

/// Symmetric tridiagonal matrix stored as its two diagonals.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::Argument("tridiagonal matrix needs n >= 1 and n - 1 off-diagonals"));
        }
        Ok(TridiagonalMatrix { diag, offdiag })
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }
}

/// All eigenvalues, ascending.
pub fn eigvals_sym_tridiag(m: &TridiagonalMatrix) -> Result<Vec<f64>> {
    linalg::tridiagonal_eigenvalues(&m.diag, &m.offdiag)
}

/// Keys the random stream of one replica. Streams for different replica
/// indices are independent ChaCha8 streams under the same seed, so replicas
/// can be generated in any order or on any worker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReplicaKey {
    pub seed: u64,
    pub replica: u64,
}

impl ReplicaKey {
    pub fn new(seed: u64, replica: u64) -> Self {
        ReplicaKey { seed, replica }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.replica);
        rng
    }
}

/// sqrt of a Gamma(shape, 1) variate, i.e. chi with `2 shape` degrees of
/// freedom divided by sqrt(2).
fn half_chi<R: RngCore>(shape: f64, rng: &mut R) -> f64 {
    let g: f64 = Gamma::new(shape, 1.0).expect("positive shape").sample(rng);
    math::sqrt(g)
}

fn normal<R: RngCore>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

fn gue_tridiagonal<R: RngCore>(n: usize, rng: &mut R) -> TridiagonalMatrix {
    let diag = (0..n).map(|_| normal(rng)).collect();
    let offdiag = (1..n).map(|k| half_chi((n - k) as f64, rng)).collect();
    TridiagonalMatrix { diag, offdiag }
}

fn lue_tridiagonal<R: RngCore>(n: usize, rng: &mut R) -> TridiagonalMatrix {
    // lower bidiagonal B: diag chi_{2(n-i)}, subdiag chi_{2(n-1-i)}, both / sqrt 2
    let d: Vec<f64> = (0..n).map(|i| half_chi((n - i) as f64, rng)).collect();
    let e: Vec<f64> = (0..n.saturating_sub(1)).map(|i| half_chi((n - 1 - i) as f64, rng)).collect();
    let diag = (0..n).map(|i| d[i] * d[i] + if i > 0 { e[i - 1] * e[i - 1] } else { 0.0 }).collect();
    let offdiag = (0..n.saturating_sub(1)).map(|i| d[i] * e[i]).collect();
    TridiagonalMatrix { diag, offdiag }
}

/// Beta variate on `[-1, 1]` with density proportional to
/// `(1 - x)^(s-1) (1 + x)^(t-1)`.
fn symmetric_beta<R: RngCore>(s: f64, t: f64, rng: &mut R) -> f64 {
    let y: f64 = Beta::new(t, s).expect("positive parameters").sample(rng);
    2.0 * y - 1.0
}

/// Jacobi matrix on `[-2, 2]` from independent Verblunsky-type coefficients
/// (Killip–Nenciu), for weight `(2 - x)^a (2 + x)^b` with `a = b = 0` and
/// beta = 2.
fn jue_tridiagonal<R: RngCore>(n: usize, rng: &mut R) -> TridiagonalMatrix {
    const A: f64 = 0.0;
    const B: f64 = 0.0;
    let beta = 2.0;
    let len = 2 * n - 1;
    // alpha[k + 1] stores alpha_k for k = -1 ..= 2n-1
    let mut alpha = vec![0.0; len + 2];
    alpha[0] = -1.0;
    alpha[len + 1] = -1.0;
    for k in 0..len {
        let kf = k as f64;
        let nf = n as f64;
        let value = if k % 2 == 0 {
            let base = (2.0 * nf - kf - 2.0) * beta / 4.0;
            symmetric_beta(base + A + 1.0, base + B + 1.0, rng)
        } else {
            let s = (2.0 * nf - kf - 3.0) * beta / 4.0 + A + B + 2.0;
            let t = (2.0 * nf - kf - 1.0) * beta / 4.0;
            symmetric_beta(s, t, rng)
        };
        alpha[k + 1] = value;
    }
    // alpha_{-2} only ever meets the factor 1 + alpha_{-1} = 0
    let at = |k: isize| if k < -1 { 0.0 } else { alpha[(k + 1) as usize] };
    let mut diag = Vec::with_capacity(n);
    let mut offdiag = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n as isize {
        let b = (1.0 - at(2 * k - 1)) * at(2 * k) - (1.0 + at(2 * k - 1)) * at(2 * k - 2);
        diag.push(b);
        if (k as usize) + 1 < n {
            let prod = (1.0 - at(2 * k - 1)) * (1.0 - at(2 * k) * at(2 * k)) * (1.0 + at(2 * k + 1));
            offdiag.push(math::sqrt(prod.max(0.0)));
        }
    }
    TridiagonalMatrix { diag, offdiag }
}

fn has_ties(sorted: &[f64]) -> bool {
    sorted.windows(2).any(|w| w[0] >= w[1])
}

/// Runs `draw` once, and once more if the spectrum contains ties.
fn with_tie_retry<F>(key: ReplicaKey, mut draw: F) -> Result<Vec<f64>>
where
    F: FnMut(&mut ChaCha8Rng) -> Result<Vec<f64>>,
{
    let mut rng = key.rng();
    for _ in 0..2 {
        let ev = draw(&mut rng)?;
        if !has_ties(&ev) {
            return Ok(ev);
        }
    }
    Err(Error::RepeatedTies { replica: key.replica })
}

fn finish(kind: EnsembleKind, n: usize, key: ReplicaKey, eigenvalues: Vec<f64>) -> SpectrumSample {
    SpectrumSample { n, eigenvalues, ensemble: kind, seed: key.seed, replica_index: key.replica }
}

fn require_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Argument("matrix size must be positive"))
    } else {
        Ok(())
    }
}

/// GUE spectrum with weight `exp(-n sum l^2 / 2)`.
pub fn sample_gue(n: usize, key: ReplicaKey) -> Result<SpectrumSample> {
    require_n(n)?;
    let scale = 1.0 / math::sqrt(n as f64);
    let ev = with_tie_retry(key, |rng| {
        let t = gue_tridiagonal(n, rng);
        let mut ev = eigvals_sym_tridiag(&t)?;
        ev.iter_mut().for_each(|v| *v *= scale);
        Ok(ev)
    })?;
    Ok(finish(EnsembleKind::Gue, n, key, ev))
}

/// LUE spectrum with weight `exp(-n sum l)` on `l >= 0`.
pub fn sample_lue(n: usize, key: ReplicaKey) -> Result<SpectrumSample> {
    require_n(n)?;
    let scale = 1.0 / n as f64;
    let ev = with_tie_retry(key, |rng| {
        let t = lue_tridiagonal(n, rng);
        let mut ev = eigvals_sym_tridiag(&t)?;
        ev.iter_mut().for_each(|v| *v = (*v * scale).max(0.0));
        Ok(ev)
    })?;
    Ok(finish(EnsembleKind::Lue, n, key, ev))
}

/// JUE spectrum with flat weight on `[0, 1]`.
pub fn sample_jue(n: usize, key: ReplicaKey) -> Result<SpectrumSample> {
    require_n(n)?;
    let ev = with_tie_retry(key, |rng| {
        let t = jue_tridiagonal(n, rng);
        let mut ev = eigvals_sym_tridiag(&t)?;
        ev.iter_mut().for_each(|v| *v = ((*v + 2.0) / 4.0).clamp(0.0, 1.0));
        Ok(ev)
    })?;
    Ok(finish(EnsembleKind::Jue, n, key, ev))
}

/// Tridiagonal sampler for a canonical kind.
pub fn sample(kind: EnsembleKind, n: usize, key: ReplicaKey) -> Result<SpectrumSample> {
    match kind {
        EnsembleKind::Gue => sample_gue(n, key),
        EnsembleKind::Lue => sample_lue(n, key),
        EnsembleKind::Jue => sample_jue(n, key),
        EnsembleKind::Custom => Err(Error::Argument("custom densities cannot be sampled")),
    }
}

pub const DENSE_MAX_N: usize = 64;

/// Complex `n x n` matrix held as its real `2n x 2n` embedding
/// `[[Re, -Im], [Im, Re]]`; products and adjoints commute with the embedding.
struct Embedded {
    n: usize,
    m: Vec<f64>,
}

impl Embedded {
    fn dim(&self) -> usize {
        2 * self.n
    }

    /// Complex Ginibre matrix with `E|z|^2 = 1`.
    fn ginibre<R: RngCore>(n: usize, rng: &mut R) -> Self {
        let d = 2 * n;
        let mut m = vec![0.0; d * d];
        let s = core::f64::consts::FRAC_1_SQRT_2;
        for i in 0..n {
            for j in 0..n {
                let re = s * normal(rng);
                let im = s * normal(rng);
                m[i * d + j] = re;
                m[(i + n) * d + j + n] = re;
                m[(i + n) * d + j] = im;
                m[i * d + j + n] = -im;
            }
        }
        Embedded { n, m }
    }

    /// `self * self^T`, i.e. the embedding of `Z Z^*`.
    fn gram(&self) -> Vec<f64> {
        let d = self.dim();
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..=i {
                let s: f64 = (0..d).map(|k| self.m[i * d + k] * self.m[j * d + k]).sum();
                out[i * d + j] = s;
                out[j * d + i] = s;
            }
        }
        out
    }
}

fn gue_dense<R: RngCore>(n: usize, rng: &mut R) -> Vec<f64> {
    let d = 2 * n;
    let mut m = vec![0.0; d * d];
    let s = core::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        let v = normal(rng);
        m[i * d + i] = v;
        m[(i + n) * d + i + n] = v;
        for j in i + 1..n {
            let re = s * normal(rng);
            let im = s * normal(rng);
            // H = A + iB, A symmetric, B antisymmetric; embedding [[A, -B], [B, A]]
            for (r, c, val) in [(i, j, re), (j, i, re)] {
                m[r * d + c] = val;
                m[(r + n) * d + c + n] = val;
            }
            for (r, c, val) in [(i, j, im), (j, i, -im)] {
                m[(r + n) * d + c] = val;
                m[r * d + c + n] = -val;
            }
        }
    }
    m
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
fn cholesky_factor(a: &[f64], d: usize) -> Result<Vec<f64>> {
    let mut l = vec![0.0; d * d];
    for j in 0..d {
        let mut s = a[j * d + j];
        for k in 0..j {
            s -= l[j * d + k] * l[j * d + k];
        }
        if !(s > 0.0) {
            return Err(Error::NoConvergence("Wishart sum not positive definite"));
        }
        let ljj = math::sqrt(s);
        l[j * d + j] = ljj;
        for i in j + 1..d {
            let mut s = a[i * d + j];
            for k in 0..j {
                s -= l[i * d + k] * l[j * d + k];
            }
            l[i * d + j] = s / ljj;
        }
    }
    Ok(l)
}

/// `L^{-1} A L^{-T}` for lower-triangular `L`.
fn congruence_inverse(l: &[f64], a: &[f64], d: usize) -> Vec<f64> {
    // X = L^{-1} A (forward substitution per column)
    let mut x = a.to_vec();
    for col in 0..d {
        for i in 0..d {
            let mut s = x[i * d + col];
            for k in 0..i {
                s -= l[i * d + k] * x[k * d + col];
            }
            x[i * d + col] = s / l[i * d + i];
        }
    }
    // Y = X L^{-T}, i.e. Y^T = L^{-1} X^T; solve row by row
    let mut y = x.clone();
    for row in 0..d {
        for j in 0..d {
            let mut s = y[row * d + j];
            for k in 0..j {
                s -= l[j * d + k] * y[row * d + k];
            }
            y[row * d + j] = s / l[j * d + j];
        }
    }
    // symmetrize away rounding
    for i in 0..d {
        for j in 0..i {
            let v = 0.5 * (y[i * d + j] + y[j * d + i]);
            y[i * d + j] = v;
            y[j * d + i] = v;
        }
    }
    y
}

/// Every eigenvalue of the real embedding appears twice; keep one per pair.
fn halve_doubled(ev: Vec<f64>) -> Vec<f64> {
    ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

/// Dense-matrix sampler: Hermitian Gaussian (GUE), complex Wishart (LUE),
/// or the complex MANOVA quotient `(W1 + W2)^{-1} W1` (JUE). Eigenvalues are
/// computed from the real symmetric embedding.
pub fn sample_dense(kind: EnsembleKind, n: usize, key: ReplicaKey) -> Result<SpectrumSample> {
    require_n(n)?;
    if n > DENSE_MAX_N {
        return Err(Error::Size { limit: DENSE_MAX_N, got: n });
    }
    let d = 2 * n;
    let ev = match kind {
        EnsembleKind::Gue => with_tie_retry(key, |rng| {
            let m = gue_dense(n, rng);
            let ev = halve_doubled(linalg::symmetric_eigenvalues(m, d)?);
            let s = 1.0 / math::sqrt(n as f64);
            Ok(ev.into_iter().map(|v| v * s).collect())
        })?,
        EnsembleKind::Lue => with_tie_retry(key, |rng| {
            let w = Embedded::ginibre(n, rng).gram();
            let ev = halve_doubled(linalg::symmetric_eigenvalues(w, d)?);
            Ok(ev.into_iter().map(|v| (v / n as f64).max(0.0)).collect())
        })?,
        EnsembleKind::Jue => with_tie_retry(key, |rng| {
            let w1 = Embedded::ginibre(n, rng).gram();
            let w2 = Embedded::ginibre(n, rng).gram();
            let sum: Vec<f64> = w1.iter().zip(&w2).map(|(a, b)| a + b).collect();
            let l = cholesky_factor(&sum, d)?;
            let c = congruence_inverse(&l, &w1, d);
            let ev = halve_doubled(linalg::symmetric_eigenvalues(c, d)?);
            Ok(ev.into_iter().map(|v| v.clamp(0.0, 1.0)).collect())
        })?,
        EnsembleKind::Custom => return Err(Error::Argument("custom densities cannot be sampled")),
    };
    Ok(finish(kind, n, key, ev))
}
