//! On-disk form of experiment results.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use gaplab_core::limitlaws::empirical_cdf;
use serde::Serialize;

use crate::config::{Ensemble, IntervalSpec};
use crate::error::{LabError, LabResult};
use crate::harness::{ExceedanceRow, ExperimentResult, KsRow, WindowConstants};

/// Float format for every CSV cell: 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `bytes` to `path` through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> LabResult<()> {
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    let io = |e| LabError::io(path.display().to_string(), e);
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(bytes).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    fs::rename(&tmp, path).map_err(io)
}

/// Serializes rows as CSV with a header line.
pub fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> LabResult<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| LabError::Format(e.to_string()))
}

#[derive(Serialize)]
struct ConfigEcho<'a> {
    ensemble: Ensemble,
    n: usize,
    replicas: u64,
    interval: &'a IntervalSpec,
    k_list: &'a [u32],
    x_list: &'a [f64],
    seed: u64,
}

/// Contents of `summary.json`. Wall time and worker count are left out so
/// that equal seeds give equal files.
#[derive(Serialize)]
pub struct Summary<'a> {
    version: &'a str,
    config: ConfigEcho<'a>,
    constants: &'a WindowConstants,
    exceedance: &'a [ExceedanceRow],
    ks: &'a [KsRow],
}

impl<'a> Summary<'a> {
    pub fn new(r: &'a ExperimentResult) -> Self {
        let c = &r.config;
        Summary {
            version: r.version,
            config: ConfigEcho {
                ensemble: c.ensemble,
                n: c.n,
                replicas: c.replicas,
                interval: &c.interval,
                k_list: &c.k_list,
                x_list: &c.x_list,
                seed: c.seed,
            },
            constants: &r.constants,
            exceedance: &r.exceedance,
            ks: &r.ks,
        }
    }
}

pub fn taus_csv(r: &ExperimentResult) -> LabResult<Vec<u8>> {
    let rows = r.replicas.iter().enumerate().flat_map(|(i, rep)| {
        r.config
            .k_list
            .iter()
            .zip(&rep.tau_k)
            .map(move |(k, t)| vec![i.to_string(), k.to_string(), t.map(fmt_f64).unwrap_or_default()])
    });
    csv_bytes(&["replica", "k", "tau"], rows)
}

pub fn exceedance_csv(r: &ExperimentResult) -> LabResult<Vec<u8>> {
    let rows = r
        .exceedance
        .iter()
        .map(|e| vec![fmt_f64(e.x), fmt_f64(e.mean_count), fmt_f64(e.var_count), fmt_f64(e.theory_mean)]);
    csv_bytes(&["x", "mean_count", "var_count", "theory_mean"], rows)
}

pub fn cdf_csv(r: &ExperimentResult, k: u32) -> LabResult<Vec<u8>> {
    let law = r.limit_law(k)?;
    let samples = r.tau_samples(k);
    let points = if samples.is_empty() { Vec::new() } else { empirical_cdf(&samples)? };
    let rows = points.into_iter().map(|(t, f)| vec![fmt_f64(t), fmt_f64(f), fmt_f64(law.cdf(t))]);
    csv_bytes(&["tau", "empirical_cdf", "theory_cdf"], rows)
}

/// Writes the result files into `dir` and returns their paths.
pub fn write_result(r: &ExperimentResult, dir: &Path, emit_cdf: bool) -> LabResult<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir.display().to_string(), e))?;
    let mut files = vec![
        ("summary.json".to_string(), {
            let mut s = serde_json::to_vec_pretty(&Summary::new(r))?;
            s.push(b'\n');
            s
        }),
        ("taus.csv".to_string(), taus_csv(r)?),
        ("exceedance.csv".to_string(), exceedance_csv(r)?),
    ];
    if emit_cdf {
        for &k in &r.config.k_list {
            files.push((format!("cdf_k{k}.csv"), cdf_csv(r, k)?));
        }
    }
    let mut written = Vec::with_capacity(files.len());
    for (name, bytes) in files {
        let path = dir.join(name);
        write_atomic(&path, &bytes)?;
        written.push(path);
    }
    Ok(written)
}
