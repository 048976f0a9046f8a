//! Monte Carlo experiments on the largest rescaled gaps.

use std::time::Instant;

use gaplab_core::ensembles::{sample, ReplicaKey};
use gaplab_core::equilibrium::{analyze, GapConstants};
use gaplab_core::gapstats::{exceedance_count, extract_gaps, rescale_all, RescaleParams};
use gaplab_core::limitlaws::{ks_distance, GammaGumbel};
use gaplab_core::IntervalUnion;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{LabError, LabResult};

/// Constants of the window that enter the rescaling and the limit law.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WindowConstants {
    pub q: u32,
    pub rho_i: f64,
    pub m_i: f64,
    pub s_i: f64,
    pub c_vi: f64,
}

/// Everything one replica contributes.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplicaOutcome {
    /// All rescaled gaps inside the window, largest first.
    pub taus: Vec<f64>,
    /// `tau_k` for each entry of `k_list`, `None` when the replica has fewer gaps.
    pub tau_k: Vec<Option<f64>>,
    /// `#{tau >= x}` for each entry of `x_list`.
    pub counts: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExceedanceRow {
    pub x: f64,
    pub mean_count: f64,
    pub var_count: f64,
    pub theory_mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KsRow {
    pub k: u32,
    pub samples: usize,
    pub missing: usize,
    /// `None` when every replica was missing this gap.
    pub ks: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub constants: WindowConstants,
    pub replicas: Vec<ReplicaOutcome>,
    pub exceedance: Vec<ExceedanceRow>,
    pub ks: Vec<KsRow>,
    pub version: &'static str,
    pub wall_time_secs: f64,
}

impl ExperimentResult {
    /// Non-missing `tau_k` values in replica order.
    pub fn tau_samples(&self, k: u32) -> Vec<f64> {
        match self.config.k_list.iter().position(|&j| j == k) {
            Some(i) => self.replicas.iter().filter_map(|r| r.tau_k[i]).collect(),
            None => Vec::new(),
        }
    }

    pub fn limit_law(&self, k: u32) -> LabResult<GammaGumbel> {
        Ok(GammaGumbel::new(k, self.constants.c_vi)?)
    }

    pub fn ks_for(&self, k: u32) -> Option<f64> {
        self.ks.iter().find(|r| r.k == k).and_then(|r| r.ks)
    }

    pub fn exceedance_at(&self, x: f64) -> Option<&ExceedanceRow> {
        self.exceedance.iter().find(|r| r.x == x)
    }
}

pub fn window_constants(config: &ExperimentConfig) -> LabResult<(IntervalUnion, WindowConstants)> {
    let window = config.validate()?;
    let report = analyze(&config.ensemble.spec(), &window)?;
    let GapConstants { m_i, s_i, c_vi } =
        report.constants.ok_or_else(|| LabError::Config("the window has no gap constants".into()))?;
    let c = WindowConstants { q: report.q, rho_i: report.rho_i, m_i, s_i, c_vi };
    Ok((window, c))
}

fn run_replica(
    config: &ExperimentConfig,
    window: &IntervalUnion,
    params: &RescaleParams,
    replica: u64,
) -> LabResult<ReplicaOutcome> {
    let s = sample(config.ensemble.kind(), config.n, ReplicaKey::new(config.seed, replica))?;
    let gaps = extract_gaps(&s.eigenvalues, window);
    let taus = rescale_all(params, &gaps);
    let tau_k = config.k_list.iter().map(|&k| taus.get(k as usize - 1).copied()).collect();
    let counts = config.x_list.iter().map(|&x| exceedance_count(&taus, x) as u32).collect();
    Ok(ReplicaOutcome { taus, tau_k, counts })
}

/// Splits `0..total` into `parts` contiguous ranges of near-equal length.
fn shards(total: u64, parts: usize) -> Vec<std::ops::Range<u64>> {
    let parts = (parts as u64).clamp(1, total.max(1));
    let (base, extra) = (total / parts, total % parts);
    let mut start = 0;
    (0..parts)
        .map(|i| {
            let len = base + u64::from(i < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

fn mean_var(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = if n > 1.0 { values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var)
}

pub fn run_experiment(config: &ExperimentConfig) -> LabResult<ExperimentResult> {
    let start = Instant::now();
    let (window, constants) = window_constants(config)?;
    let params = RescaleParams::new(config.n, constants.q, constants.s_i)?;

    let ranges = shards(config.replicas, config.workers);
    let per_shard: Vec<LabResult<Vec<ReplicaOutcome>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|range| {
                let (window, params) = (&window, &params);
                scope.spawn(move || range.map(|r| run_replica(config, window, params, r)).collect())
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("replica worker panicked")).collect()
    });
    let mut replicas = Vec::with_capacity(config.replicas as usize);
    for shard in per_shard {
        replicas.extend(shard?);
    }

    let exceedance = config
        .x_list
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let (mean_count, var_count) = mean_var(replicas.iter().map(|r| f64::from(r.counts[i])));
            ExceedanceRow { x, mean_count, var_count, theory_mean: (constants.c_vi - x).exp() }
        })
        .collect();

    let mut ks = Vec::with_capacity(config.k_list.len());
    for (i, &k) in config.k_list.iter().enumerate() {
        let samples: Vec<f64> = replicas.iter().filter_map(|r| r.tau_k[i]).collect();
        let law = GammaGumbel::new(k, constants.c_vi)?;
        let d = if samples.is_empty() { None } else { Some(ks_distance(&samples, |t| law.cdf(t))?) };
        ks.push(KsRow { k, samples: samples.len(), missing: replicas.len() - samples.len(), ks: d });
    }

    Ok(ExperimentResult {
        config: config.clone(),
        constants,
        replicas,
        exceedance,
        ks,
        version: env!("CARGO_PKG_VERSION"),
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub ks_tau1: Option<f64>,
}

/// KS distance of `tau_1` to its limit law for each `n`.
pub fn convergence_sweep(template: &ExperimentConfig, n_list: &[usize]) -> LabResult<Vec<SweepRow>> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LabError::Config("n_list must be nonempty and strictly increasing".into()));
    }
    let mut config = template.clone();
    if !config.k_list.contains(&1) {
        config.k_list.insert(0, 1);
    }
    n_list
        .iter()
        .map(|&n| {
            config.n = n;
            let r = run_experiment(&config)?;
            Ok(SweepRow { n, ks_tau1: r.ks_for(1) })
        })
        .collect()
}
