use gaplab::config::{Ensemble, ExperimentConfig};
use gaplab::harness::{convergence_sweep, run_experiment, window_constants, ExperimentResult};
use gaplab::output::write_result;
use gaplab::LabError;
use gaplab_core::equilibrium::c0_constant;
use gaplab_core::gapstats::exceedance_count;
use proptest::prelude::*;

fn config(ensemble: Ensemble, interval: &str, n: usize, replicas: u64, workers: usize) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(ensemble, n, replicas, interval.parse().unwrap());
    c.workers = workers;
    c.seed = 11;
    c
}

fn same_numbers(a: &ExperimentResult, b: &ExperimentResult) -> bool {
    a.replicas == b.replicas && a.exceedance == b.exceedance && a.ks == b.ks && a.constants == b.constants
}

#[test]
fn single_replica_identical_across_runs_and_workers() {
    let one = run_experiment(&config(Ensemble::Gue, "0.5:1", 80, 1, 1)).unwrap();
    let again = run_experiment(&config(Ensemble::Gue, "0.5:1", 80, 1, 1)).unwrap();
    let four = run_experiment(&config(Ensemble::Gue, "0.5:1", 80, 1, 4)).unwrap();
    assert!(same_numbers(&one, &again));
    assert!(same_numbers(&one, &four));
}

#[test]
fn written_files_independent_of_worker_count() {
    let (d1, d4) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let r1 = run_experiment(&config(Ensemble::Jue, "0.25:0.75", 60, 13, 1)).unwrap();
    let r4 = run_experiment(&config(Ensemble::Jue, "0.25:0.75", 60, 13, 4)).unwrap();
    let f1 = write_result(&r1, d1.path(), true).unwrap();
    let f4 = write_result(&r4, d4.path(), true).unwrap();
    assert_eq!(f1.len(), 6);
    for (a, b) in f1.iter().zip(&f4) {
        assert_eq!(a.file_name(), b.file_name());
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap(), "{a:?}");
    }
}

#[test]
fn counts_agree_with_tau_lists() {
    let r = run_experiment(&config(Ensemble::Lue, "1:2", 100, 20, 3)).unwrap();
    let xs = &r.config.x_list;
    assert!(xs.windows(2).all(|w| w[0] < w[1]));
    for rep in &r.replicas {
        assert!(rep.taus.windows(2).all(|w| w[0] >= w[1]));
        for (i, &x) in xs.iter().enumerate() {
            assert_eq!(rep.counts[i] as usize, exceedance_count(&rep.taus, x));
        }
        assert!(rep.counts.windows(2).all(|w| w[0] >= w[1]));
        for (j, &k) in r.config.k_list.iter().enumerate() {
            assert_eq!(rep.tau_k[j], rep.taus.get(k as usize - 1).copied());
        }
    }
    for row in &r.exceedance {
        assert!((row.theory_mean - (r.constants.c_vi - row.x).exp()).abs() < 1e-15 * row.theory_mean.max(1.0));
    }
    for row in &r.ks {
        let d = row.ks.unwrap();
        assert!(d > 0.0 && d <= 1.0);
        assert_eq!(row.samples + row.missing, 20);
    }
}

#[test]
fn short_windows_record_missing_gaps() {
    let mut c = config(Ensemble::Gue, "0.5:0.52", 60, 30, 2);
    c.k_list = vec![1, 5];
    let r = run_experiment(&c).unwrap();
    let k5 = &r.ks[1];
    assert!(k5.missing > 0);
    assert_eq!(k5.samples, r.tau_samples(5).len());
    for rep in &r.replicas {
        assert_eq!(rep.tau_k[1].is_none(), rep.taus.len() < 5);
        if rep.taus.is_empty() {
            assert!(rep.counts.iter().all(|&c| c == 0));
        }
    }
}

#[test]
fn gue_window_constant() {
    let (_, c) = window_constants(&config(Ensemble::Gue, "0.5:1", 100, 1, 1)).unwrap();
    let want = c0_constant() + 1.5 * 3f64.ln() - 4f64.ln();
    assert!((c.c_vi - want).abs() < 1e-12);
    assert_eq!(c.q, 1);
    let (_, j) = window_constants(&config(Ensemble::Jue, "0.25:0.75", 100, 1, 1)).unwrap();
    assert_eq!(j.q, 2);
}

#[test]
fn invalid_configs_rejected() {
    let bad = |c: ExperimentConfig| matches!(run_experiment(&c), Err(LabError::Config(_)));
    assert!(bad(config(Ensemble::Gue, "3:4", 100, 1, 1)));
    assert!(bad(config(Ensemble::Lue, "-1:1", 100, 1, 1)));
    assert!(bad(config(Ensemble::Gue, "0.5:1", 49, 1, 1)));
    assert!(bad(config(Ensemble::Gue, "0.5:1", 100, 0, 1)));
}

#[test]
fn sweep_shape() {
    let c = config(Ensemble::Gue, "0.5:1", 50, 10, 2);
    let rows = convergence_sweep(&c, &[50, 80, 120]).unwrap();
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let d = row.ks_tau1.unwrap();
        assert!(d > 0.0 && d <= 1.0);
    }
    assert!(convergence_sweep(&c, &[80, 50]).is_err());
    assert!(convergence_sweep(&c, &[]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn seed_and_config_determine_result(seed in any::<u64>(), workers in 2usize..6, replicas in 1u64..9) {
        let mut c = config(Ensemble::Gue, "-0.4:0.3", 50, replicas, 1);
        c.seed = seed;
        let a = run_experiment(&c).unwrap();
        c.workers = workers;
        let b = run_experiment(&c).unwrap();
        prop_assert!(same_numbers(&a, &b));
    }
}
