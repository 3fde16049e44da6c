use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::stats::{bootstrap_ci, median};
use crate::error::Result;
use crate::rng::{grid_stream_id, stream};

/// One per-replica measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub point: usize,
    pub label: String,
    pub replica: usize,
    pub key: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointAggregate {
    pub point: usize,
    pub label: String,
    pub key: String,
    pub count: usize,
    pub mean: f64,
    pub stderr: f64,
    pub median: f64,
    pub ci95: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub experiment: String,
    pub points: Vec<PointAggregate>,
    /// Experiment-level statistics (slopes, KS and TV distances, targets).
    pub summary: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl Aggregate {
    pub fn get(&self, key: &str) -> Option<f64> {
        self.summary.get(key).copied()
    }

    pub fn point(&self, point: usize, key: &str) -> Option<&PointAggregate> {
        self.points.iter().find(|p| p.point == point && p.key == key)
    }
}

/// Rows plus aggregate of one experiment run, before anything is written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub rows: Vec<Row>,
    pub aggregate: Aggregate,
    /// (point, replica, stream id) for every replica stream used.
    pub streams: Vec<(usize, usize, u64)>,
}

/// Bootstrap streams live on a point index no experiment uses.
const BOOTSTRAP_POINT: u64 = u32::MAX as u64;

/// Per (point, key) mean, stderr, median and bootstrap 95% CI of the mean, in
/// order of first appearance.
pub fn aggregate_rows(rows: &[Row], seed: u64) -> Result<Vec<PointAggregate>> {
    let mut order: Vec<(usize, String, String)> = Vec::new();
    let mut groups: BTreeMap<(usize, String), Vec<f64>> = BTreeMap::new();
    for r in rows {
        let k = (r.point, r.key.clone());
        if !groups.contains_key(&k) {
            order.push((r.point, r.label.clone(), r.key.clone()));
        }
        groups.entry(k).or_default().push(r.value);
    }
    let mut out = Vec::with_capacity(order.len());
    for (idx, (point, label, key)) in order.into_iter().enumerate() {
        let v = &groups[&(point, key.clone())];
        let (mean, stderr) = crate::metric::mean_stderr(v);
        let mut rng = stream(seed, grid_stream_id(BOOTSTRAP_POINT, idx as u64));
        let ci95 = if v.len() > 1 {
            bootstrap_ci(v, |s| s.iter().sum::<f64>() / s.len() as f64, 1000, 0.95, &mut rng)?
        } else {
            (mean, mean)
        };
        out.push(PointAggregate { point, label, key, count: v.len(), mean, stderr, median: median(v)?, ci95 });
    }
    Ok(out)
}

pub fn write_rows_csv<W: Write>(rows: &[Row], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
