use gaplab_core::ensembles::{sample, sample_dense, ReplicaKey};
use gaplab_core::equilibrium::mu_mass;
use gaplab_core::limitlaws::{ks_two_sample, ks_two_sample_critical};
use gaplab_core::{EnsembleKind, EnsembleSpec};

const KINDS: [EnsembleKind; 3] = [EnsembleKind::Gue, EnsembleKind::Lue, EnsembleKind::Jue];

fn columns(kind: EnsembleKind, n: usize, reps: u64, dense: bool) -> Vec<Vec<f64>> {
    let picks = [0, n / 2, n - 1];
    let mut cols = vec![Vec::with_capacity(reps as usize); picks.len()];
    for r in 0..reps {
        // distinct seeds keep the two samples independent
        let s = if dense {
            sample_dense(kind, n, ReplicaKey::new(1_000_003, r)).unwrap()
        } else {
            sample(kind, n, ReplicaKey::new(17, r)).unwrap()
        };
        for (c, &i) in cols.iter_mut().zip(&picks) {
            c.push(s.eigenvalues[i]);
        }
    }
    cols
}

#[test]
fn dense_and_tridiagonal_laws_agree() {
    let reps = 100_000u64;
    let crit = ks_two_sample_critical(reps as usize, reps as usize, 1e-3);
    for kind in KINDS {
        for n in [2usize, 4, 8] {
            let a = columns(kind, n, reps, false);
            let b = columns(kind, n, reps, true);
            for (x, y) in a.iter().zip(&b) {
                let d = ks_two_sample(x, y).unwrap();
                assert!(d < crit, "{kind:?} n={n} d={d} crit={crit}");
            }
        }
    }
}

#[test]
fn bulk_density_at_n_400() {
    let n = 400usize;
    let reps = 100u64;
    for kind in KINDS {
        let spec = EnsembleSpec::canonical(kind);
        let (a0, b0) = spec.support();
        let (lo, hi) = (a0 + 0.15 * (b0 - a0), b0 - 0.15 * (b0 - a0));
        let bins = 14usize;
        let width = (hi - lo) / bins as f64;
        let mut counts = vec![0usize; bins];
        for r in 0..reps {
            let s = sample(kind, n, ReplicaKey::new(5, r)).unwrap();
            for &x in &s.eigenvalues {
                if x >= lo && x < hi {
                    counts[(((x - lo) / width) as usize).min(bins - 1)] += 1;
                }
            }
        }
        for (i, &c) in counts.iter().enumerate() {
            let (l, h) = (lo + width * i as f64, lo + width * (i + 1) as f64);
            let expected = mu_mass(&spec, l).unwrap() - mu_mass(&spec, h).unwrap();
            let observed = c as f64 / (n as f64 * reps as f64);
            assert!((observed - expected).abs() <= 0.05 * expected, "{kind:?} bin {i}: {observed} vs {expected}");
        }
    }
}
