use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::ExperimentConfig;
use super::output::{aggregate_rows, write_rows_csv, Aggregate, ExperimentOutput, Row};
use super::experiments;
use crate::error::{Error, Result};
use crate::rng::{grid_stream_id, stream, SimRng};

/// Replica scheduler: a bounded worker pool, one RNG stream per
/// (point, replica) derived from the master seed, results in replica order.
pub struct Runner {
    seed: u64,
    pool: rayon::ThreadPool,
    rows: Vec<Row>,
    streams: Vec<(usize, usize, u64)>,
}

impl Runner {
    pub fn new(seed: u64, workers: Option<usize>) -> Result<Self> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(w) = workers {
            b = b.num_threads(w.max(1));
        }
        let pool = b.build().map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
        Ok(Self { seed, pool, rows: Vec::new(), streams: Vec::new() })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Runs `f` for replicas 0..count of grid point `point`.
    pub fn replicate<T, F>(&mut self, point: usize, count: usize, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&mut SimRng, usize) -> Result<T> + Sync,
    {
        let seed = self.seed;
        let ids: Vec<u64> = (0..count).map(|r| grid_stream_id(point as u64, r as u64)).collect();
        self.streams.extend(ids.iter().enumerate().map(|(r, &id)| (point, r, id)));
        self.pool.install(|| {
            ids.par_iter()
                .enumerate()
                .map(|(r, &id)| f(&mut stream(seed, id), r))
                .collect()
        })
    }

    pub fn push(&mut self, point: usize, label: &str, replica: usize, key: &str, value: f64) {
        self.rows.push(Row { point, label: label.to_string(), replica, key: key.to_string(), value });
    }

    /// Adds every (key, value) of each replica in order.
    pub fn push_all(&mut self, point: usize, label: &str, per_replica: &[Vec<(&str, f64)>]) {
        for (r, kv) in per_replica.iter().enumerate() {
            for &(k, v) in kv {
                self.push(point, label, r, k, v);
            }
        }
    }

    pub fn finish(self, experiment: &str, summary: BTreeMap<String, f64>, notes: Vec<String>) -> Result<ExperimentOutput> {
        let points = aggregate_rows(&self.rows, self.seed)?;
        Ok(ExperimentOutput {
            rows: self.rows,
            aggregate: Aggregate { experiment: experiment.to_string(), points, summary, notes },
            streams: self.streams,
        })
    }
}

/// Runs a registered experiment in memory.
pub fn execute(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    experiments::dispatch(config)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicaStream {
    pub point: usize,
    pub replica: usize,
    pub stream: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub code_version: String,
    /// Stream ids are `point << 32 | replica`, fed to ChaCha8 seeded with the
    /// master seed.
    pub replica_streams: Vec<ReplicaStream>,
    pub wall_time_secs: f64,
    /// sha256 of each output file (file name → hex digest).
    pub digests: BTreeMap<String, String>,
    pub output_dir: PathBuf,
}

pub const RESULTS_FILE: &str = "results.csv";
pub const AGGREGATE_FILE: &str = "aggregate.json";
pub const MANIFEST_FILE: &str = "manifest.json";

fn sha256_file(path: &Path) -> Result<String> {
    Ok(hex::encode(Sha256::digest(std::fs::read(path)?)))
}

fn write_outputs(out: &ExperimentOutput, dir: &Path) -> Result<BTreeMap<String, String>> {
    std::fs::create_dir_all(dir)?;
    let results = dir.join(RESULTS_FILE);
    write_rows_csv(&out.rows, std::fs::File::create(&results)?)?;
    let agg = dir.join(AGGREGATE_FILE);
    std::fs::write(&agg, serde_json::to_string_pretty(&out.aggregate)? + "\n")?;
    let mut digests = BTreeMap::new();
    digests.insert(RESULTS_FILE.to_string(), sha256_file(&results)?);
    digests.insert(AGGREGATE_FILE.to_string(), sha256_file(&agg)?);
    Ok(digests)
}

/// Runs the experiment and writes results.csv, aggregate.json and
/// manifest.json into the resolved output directory.
pub fn run_experiment(config: &ExperimentConfig) -> Result<(RunManifest, ExperimentOutput)> {
    let dir = config.resolved_output_dir();
    run_into(config, &dir)
}

fn run_into(config: &ExperimentConfig, dir: &Path) -> Result<(RunManifest, ExperimentOutput)> {
    let start = Instant::now();
    let out = execute(config)?;
    let digests = write_outputs(&out, dir)?;
    let manifest = RunManifest {
        config: config.clone(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        replica_streams: out
            .streams
            .iter()
            .map(|&(point, replica, stream)| ReplicaStream { point, replica, stream })
            .collect(),
        wall_time_secs: start.elapsed().as_secs_f64(),
        digests,
        output_dir: dir.to_path_buf(),
    };
    std::fs::write(dir.join(MANIFEST_FILE), serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok((manifest, out))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub matches: bool,
    /// file → (recorded digest, recomputed digest)
    pub files: BTreeMap<String, (String, String)>,
}

/// Re-runs the manifest's config into `scratch` and compares output digests.
pub fn verify_manifest(manifest_path: &Path, scratch: &Path) -> Result<VerifyReport> {
    let manifest: RunManifest = serde_json::from_str(&std::fs::read_to_string(manifest_path)?)?;
    let out = execute(&manifest.config)?;
    let digests = write_outputs(&out, scratch)?;
    let mut files = BTreeMap::new();
    let mut matches = true;
    for (name, recorded) in &manifest.digests {
        let now = digests.get(name).cloned().unwrap_or_default();
        matches &= &now == recorded;
        files.insert(name.clone(), (recorded.clone(), now));
    }
    Ok(VerifyReport { matches, files })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn replicas_are_ordered_and_seeded() {
        let mut r = Runner::new(5, Some(2)).unwrap();
        let a: Vec<u64> = r.replicate(1, 8, |rng, _| Ok(rng.random())).unwrap();
        let mut r2 = Runner::new(5, Some(1)).unwrap();
        let b: Vec<u64> = r2.replicate(1, 8, |rng, _| Ok(rng.random())).unwrap();
        assert_eq!(a, b);
        let c: Vec<u64> = r2.replicate(2, 8, |rng, _| Ok(rng.random())).unwrap();
        assert_ne!(a, c);
        let idx: Vec<usize> = r2.replicate(0, 5, |_, i| Ok(i)).unwrap();
        assert_eq!(idx, vec![0, 1, 2, 3, 4]);
    }
}
