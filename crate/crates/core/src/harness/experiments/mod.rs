use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::output::ExperimentOutput;
use super::run::Runner;
use crate::error::{Error, Result};

mod dynamics;
mod limits;
mod oracles;
mod scaling;

pub const EXPERIMENTS: [&str; 12] = [
    "susceptibility-scaling",
    "diameter-bound",
    "component-scaling",
    "distance-scaling",
    "entrance-boundary",
    "universality-check",
    "tilted-oracle",
    "mc-vs-nr",
    "dynamic-trackers",
    "size-biased-check",
    "rescaling-identity",
    "limit-bridge",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentInfo {
    pub name: &'static str,
    pub description: &'static str,
}

pub fn registered() -> Vec<ExperimentInfo> {
    let d = |name, description| ExperimentInfo { name, description };
    vec![
        d(EXPERIMENTS[0], "n^-delta s2* on barely subcritical configuration models against mu_d/lambda0"),
        d(EXPERIMENTS[1], "maximum component diameter against 6 n^delta log n, barely subcritical"),
        d(EXPERIMENTS[2], "median largest critical component size and its log-log slope in n"),
        d(EXPERIMENTS[3], "median two-point distance in the largest critical component and its slope"),
        d(EXPERIMENTS[4], "open half-edge susceptibilities at t_n, blob parameters and the modified-process coupling"),
        d(EXPERIMENTS[5], "two-point distances of blob super graphs against the tilted p-tree proxy"),
        d(EXPERIMENTS[6], "tilted p-tree sampler and birthday p-trees against exact enumeration"),
        d(EXPERIMENTS[7], "multiplicative coalescent partitions against the rank-one partition law"),
        d(EXPERIMENTS[8], "pairing-process trackers s1, s2, s_dw against their closed forms"),
        d(EXPERIMENTS[9], "size-biased reordering deviation on barely subcritical snapshots"),
        d(EXPERIMENTS[10], "largest excursion lengths under the two rescaled parameterizations"),
        d(EXPERIMENTS[11], "largest critical component and surplus against the thinned Levy limit"),
    ]
}

/// Config with every default filled in.
pub fn default_config(name: &str) -> Result<ExperimentConfig> {
    let c = match name {
        "susceptibility-scaling" | "diameter-bound" | "component-scaling" | "distance-scaling" => {
            scaling::defaults(name)
        }
        "entrance-boundary" | "dynamic-trackers" | "size-biased-check" => dynamics::defaults(name),
        "tilted-oracle" | "mc-vs-nr" => oracles::defaults(name),
        "universality-check" | "rescaling-identity" | "limit-bridge" => limits::defaults(name),
        _ => return Err(unknown(name)),
    };
    Ok(c)
}

fn unknown(name: &str) -> Error {
    Error::UnknownExperiment { name: name.to_string(), registered: EXPERIMENTS.join(", ") }
}

/// Missing fields and params take the experiment defaults.
fn resolve(cfg: &ExperimentConfig) -> Result<ExperimentConfig> {
    let d = default_config(&cfg.experiment)?;
    let mut r = cfg.clone();
    r.replicas = r.replicas.or(d.replicas);
    r.n = r.n.or(d.n);
    r.tau = r.tau.or(d.tau);
    r.lambda = r.lambda.or(d.lambda);
    r.delta = r.delta.or(d.delta);
    r.truncation = r.truncation.or(d.truncation);
    for (k, v) in d.params {
        r.params.entry(k).or_insert(v);
    }
    Ok(r)
}

pub(crate) fn dispatch(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let cfg = resolve(cfg)?;
    let mut runner = Runner::new(cfg.seed, cfg.workers)?;
    let (summary, notes) = match cfg.experiment.as_str() {
        "susceptibility-scaling" => scaling::susceptibility(&cfg, &mut runner)?,
        "diameter-bound" => scaling::diameter(&cfg, &mut runner)?,
        "component-scaling" => scaling::components(&cfg, &mut runner, false)?,
        "distance-scaling" => scaling::components(&cfg, &mut runner, true)?,
        "entrance-boundary" => dynamics::entrance(&cfg, &mut runner)?,
        "dynamic-trackers" => dynamics::trackers(&cfg, &mut runner)?,
        "size-biased-check" => dynamics::size_biased(&cfg, &mut runner)?,
        "tilted-oracle" => oracles::tilted(&cfg, &mut runner)?,
        "mc-vs-nr" => oracles::mc_vs_nr(&cfg, &mut runner)?,
        "universality-check" => limits::universality(&cfg, &mut runner)?,
        "rescaling-identity" => limits::rescaling(&cfg, &mut runner)?,
        "limit-bridge" => limits::bridge(&cfg, &mut runner)?,
        other => return Err(unknown(other)),
    };
    runner.finish(&cfg.experiment, summary, notes)
}

pub(crate) type Summary = (std::collections::BTreeMap<String, f64>, Vec<String>);

/// Splits `total` into `parts` near-equal batch sizes.
pub(crate) fn batches(total: usize, parts: usize) -> Vec<usize> {
    let parts = parts.max(1);
    (0..parts).map(|i| total / parts + usize::from(i < total % parts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete() {
        assert_eq!(registered().len(), 12);
        for name in EXPERIMENTS {
            let c = default_config(name).unwrap();
            assert_eq!(c.experiment, name);
            assert!(c.replicas.is_some());
        }
        match dispatch(&ExperimentConfig::new("nope")) {
            Err(Error::UnknownExperiment { registered, .. }) => assert_eq!(registered.split(", ").count(), 12),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(batches(10, 3), vec![4, 3, 3]);
    }
}
