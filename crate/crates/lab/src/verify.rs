//! Named numerical verification suites with regression-locked tolerances.

use std::f64::consts::PI;

use gaplab_core::detengine::{
    dikz_log_gap, finite_n_gap, integral_lemma_leading, integral_lemma_value, negative_correlation_check,
    toeplitz_gap_cue, toeplitz_log_gap_cue,
};
use gaplab_core::equilibrium::{analyze, mu_mass};
use gaplab_core::gapstats::{extract_gaps, sigma_contains_conditions, sigma_contains_direct};
use gaplab_core::opkernels::{sine_residual, WeightedOpBasis};
use gaplab_core::{EnsembleKind, EnsembleSpec, IntervalUnion};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::LabResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Kernel,
    Dikz,
    CueCompare,
    IntegralLemma,
    Negcorr,
    SigmaEquiv,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Kernel, Suite::Dikz, Suite::CueCompare, Suite::IntegralLemma, Suite::Negcorr, Suite::SigmaEquiv];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kernel => "kernel",
            Suite::Dikz => "dikz",
            Suite::CueCompare => "cue-compare",
            Suite::IntegralLemma => "integral-lemma",
            Suite::Negcorr => "negcorr",
            Suite::SigmaEquiv => "sigma-equiv",
        }
    }
}

/// One measured quantity. `pass` is `None` for rows printed for context only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub expected: String,
    pub pass: Option<bool>,
}

impl Check {
    fn within(name: impl Into<String>, measured: f64, lo: f64, hi: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            expected: format!("in [{lo}, {hi}]"),
            pass: Some(lo <= measured && measured <= hi),
        }
    }

    fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check { name: name.into(), measured, expected: format!("<= {bound:.6e}"), pass: Some(measured <= bound) }
    }

    fn less_than(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check { name: name.into(), measured, expected: format!("< {bound:.6e}"), pass: Some(measured < bound) }
    }

    fn info(name: impl Into<String>, measured: f64) -> Self {
        Check { name: name.into(), measured, expected: "-".into(), pass: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass != Some(false))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.pass == Some(false))
    }

    pub fn table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut s = format!("suite {}\n", self.suite.name());
        for c in &self.checks {
            let verdict = match c.pass {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "info",
            };
            s.push_str(&format!("  {:<width$}  {:>24.16e}  {:<28}  {verdict}\n", c.name, c.measured, c.expected));
        }
        s
    }
}

pub fn run(suite: Suite) -> LabResult<Report> {
    let checks = match suite {
        Suite::Kernel => kernel()?,
        Suite::Dikz => dikz()?,
        Suite::CueCompare => cue_compare()?,
        Suite::IntegralLemma => integral_lemma()?,
        Suite::Negcorr => negcorr()?,
        Suite::SigmaEquiv => sigma_equiv()?,
    };
    Ok(Report { suite, checks })
}

/// Point whose upper equilibrium mass equals that of `0.3` under GUE.
pub fn matched_bulk_point(kind: EnsembleKind) -> LabResult<f64> {
    let target = mu_mass(&EnsembleSpec::gue(), 0.3)?;
    let spec = EnsembleSpec::canonical(kind);
    let (mut lo, mut hi) = spec.support();
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mu_mass(&spec, mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn kernel() -> LabResult<Vec<Check>> {
    let mut out = Vec::new();
    for kind in [EnsembleKind::Gue, EnsembleKind::Lue, EnsembleKind::Jue] {
        let x0 = matched_bulk_point(kind)?;
        let mut second = Vec::new();
        let mut leading = Vec::new();
        for n in [100usize, 200, 400] {
            let r = sine_residual(&WeightedOpBasis::new(kind, n)?, x0, 0.0, 0.0)?;
            let nf = n as f64;
            out.push(Check::at_most(
                format!("{} n^2 second-order n={n}", kind.name()),
                nf * nf * r.second_order.abs(),
                0.2,
            ));
            second.push(r.second_order.abs());
            leading.push(r.leading.abs());
        }
        out.push(Check::within(format!("{} second-order 100/200", kind.name()), second[0] / second[1], 3.0, 5.0));
        out.push(Check::within(format!("{} leading 200/400", kind.name()), leading[1] / leading[2], 1.6, 2.4));
    }
    Ok(out)
}

fn dikz_alpha(n: usize, f: f64) -> f64 {
    let nf = n as f64;
    f * (32.0 * nf.ln()).sqrt() / nf
}

fn dikz_error(n: usize, alpha: f64) -> LabResult<f64> {
    Ok((toeplitz_log_gap_cue(n, alpha)? - dikz_log_gap(n, alpha)?).abs())
}

fn dikz() -> LabResult<Vec<Check>> {
    let mut out = Vec::new();
    for n in [100usize, 200, 400] {
        for f in [0.8, 1.0, 1.2] {
            let a = dikz_alpha(n, f);
            let bound = 1.0 / (n as f64 * (a / 2.0).sin());
            out.push(Check::at_most(format!("error n={n} f={f}"), dikz_error(n, a)?, bound));
        }
    }
    for n in [100usize, 200] {
        for f in [0.8, 1.0, 1.2] {
            let a = dikz_alpha(n, f);
            out.push(Check::at_most(
                format!("err(2n)/err(n) fixed alpha n={n} f={f}"),
                dikz_error(2 * n, a)? / dikz_error(n, a)?,
                0.7,
            ));
            let fixed_product = dikz_error(2 * n, a / 2.0)? / dikz_error(n, a)?;
            out.push(Check::info(format!("err(2n)/err(n) fixed n*alpha n={n} f={f}"), fixed_product));
        }
    }
    Ok(out)
}

/// Gap sizes `f sqrt(log n)/n` used by the CUE comparison.
pub const CUE_COMPARE_F: [f64; 5] = [0.5, 1.125, 1.75, 2.375, 3.0];

fn cue_compare() -> LabResult<Vec<Check>> {
    let spec = EnsembleSpec::gue();
    let (n, x) = (200usize, 0.3);
    let nf = n as f64;
    let rho = spec.density(x)?;
    let mut out = Vec::new();
    for f in CUE_COMPARE_F {
        let d = f * nf.ln().sqrt() / nf;
        let fin = finite_n_gap(&spec, n, x, d / rho, 60)?;
        let cue = toeplitz_gap_cue(n, PI * d)?;
        out.push(Check::at_most(format!("relative f={f}"), (fin - cue).abs() / cue, 0.02));
        out.push(Check::info(format!("absolute f={f}"), (fin - cue).abs()));
        let mass = mu_mass(&spec, x)? - mu_mass(&spec, x + d / rho)?;
        let matched = toeplitz_gap_cue(n, PI * mass)?;
        out.push(Check::info(format!("mass-matched relative f={f}"), (fin - matched).abs() / matched));
    }
    Ok(out)
}

fn integral_lemma() -> LabResult<Vec<Check>> {
    let spec = EnsembleSpec::gue();
    let w = IntervalUnion::single(0.5, 1.0)?;
    let report = analyze(&spec, &w)?;
    let ratio = |n: usize| -> LabResult<f64> {
        Ok(integral_lemma_value(&spec, &w, &report, n, 0.0)? / integral_lemma_leading(&report, n, 0.0)?)
    };
    let (r500, r1000) = (ratio(500)?, ratio(1000)?);
    Ok(vec![
        Check::within("ratio n=500", r500, 0.5, 1.5),
        Check::info("ratio n=1000", r1000),
        Check::less_than("|ratio-1| n=1000 vs n=500", (r1000 - 1.0).abs(), (r500 - 1.0).abs()),
    ])
}

/// Seeded uniform generator for randomized suites.
struct Uniform(ChaCha8Rng);

impl Uniform {
    fn new(seed: u64) -> Self {
        Uniform(ChaCha8Rng::seed_from_u64(seed))
    }

    fn next(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next()
    }

    fn below(&mut self, n: usize) -> usize {
        (self.0.next_u64() % n as u64) as usize
    }
}

pub const NEGCORR_PAIRS: usize = 100;

fn negcorr() -> LabResult<Vec<Check>> {
    let spec = EnsembleSpec::gue();
    let mut rng = Uniform::new(0x6e65_6763);
    let mut worst = f64::NEG_INFINITY;
    let mut violations = 0usize;
    for _ in 0..NEGCORR_PAIRS {
        let l1 = rng.range(0.01, 0.4);
        let l2 = rng.range(0.01, 0.4);
        let gap = rng.range(0.0, 0.5);
        let lo = rng.range(-1.9, 1.9 - l1 - l2 - gap);
        let i1 = (lo, lo + l1);
        let i2 = (lo + l1 + gap, lo + l1 + gap + l2);
        let (lhs, rhs) = negative_correlation_check(&spec, 100, i1, i2, 40)?;
        worst = worst.max(lhs / rhs);
        let holds = lhs <= rhs * (1.0 + 1e-10);
        if !holds {
            violations += 1;
        }
    }
    let (lhs, rhs) = negative_correlation_check(&spec, 100, (-0.5, -0.45), (0.45, 0.5), 40)?;
    Ok(vec![
        Check::at_most("violations of lhs <= rhs(1+1e-10)", violations as f64, 0.0),
        Check::info("max lhs/rhs", worst),
        Check::within("lhs/rhs far pair", lhs / rhs, 0.99765268 - 1e-7, 0.99765268 + 1e-7),
    ])
}

pub const SIGMA_INSTANCES: usize = 100_000;

struct SigmaInstance {
    lambdas: Vec<f64>,
    window: Vec<(f64, f64)>,
    a: Vec<f64>,
    y: Vec<f64>,
}

/// Random instance with at most 12 points in `[0, 1]`, at most three window
/// components and `k <= 3`. Half of the `y_j` are planted inside actual
/// gaps so that both answers occur often.
fn sigma_instance(rng: &mut Uniform) -> SigmaInstance {
    let n = 2 + rng.below(11);
    let mut lambdas: Vec<f64> = (0..n).map(|_| rng.next()).collect();
    lambdas.sort_by(f64::total_cmp);
    let p = 1 + rng.below(3);
    let mut cuts: Vec<f64> = (0..2 * p).map(|_| rng.next()).collect();
    cuts.sort_by(f64::total_cmp);
    let window = cuts.chunks(2).filter(|c| c[1] > c[0]).map(|c| (c[0], c[1])).collect();
    let k = 1 + rng.below(3);
    let (mut a, mut y) = (Vec::with_capacity(k), Vec::with_capacity(k));
    for _ in 0..k {
        if rng.next() < 0.5 {
            let i = rng.below(n - 1);
            let gap = lambdas[i + 1] - lambdas[i];
            let aj = gap * rng.range(0.05, 1.1);
            a.push(aj);
            y.push(lambdas[i] + rng.next() * (gap - aj).max(gap * 0.05));
        } else {
            a.push(rng.range(0.001, 0.3));
            y.push(rng.next());
        }
    }
    SigmaInstance { lambdas, window, a, y }
}

fn sigma_equiv() -> LabResult<Vec<Check>> {
    let mut rng = Uniform::new(0x7369_676d);
    let (mut tested, mut mismatches, mut members) = (0usize, 0usize, 0usize);
    while tested < SIGMA_INSTANCES {
        let SigmaInstance { lambdas, window: parts, a, y } = sigma_instance(&mut rng);
        let Ok(window) = IntervalUnion::new(parts) else { continue };
        if !extract_gaps(&lambdas, &window).components_respected() {
            continue;
        }
        let direct = sigma_contains_direct(&lambdas, &window, &a, &y)?;
        let conditions = sigma_contains_conditions(&lambdas, &window, &a, &y)?;
        tested += 1;
        members += usize::from(direct);
        mismatches += usize::from(direct != conditions);
    }
    Ok(vec![
        Check::info("instances", tested as f64),
        Check::info("members", members as f64),
        Check::at_most("mismatches", mismatches as f64, 0.0),
    ])
}
