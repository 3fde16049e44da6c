//! Samplers against exact enumeration on small instances.

use std::collections::BTreeMap;

use super::{batches, Summary};
use crate::dynamic::{mc_partition, simulate_mc};
use crate::error::{domain, Result};
use crate::harness::config::ExperimentConfig;
use crate::harness::run::Runner;
use crate::harness::stats::tv_empirical;
use crate::rank_one::oracle::{edge_mask, nr_partition_law, pcon_oracle, ptree_law};
use crate::rank_one::{sample_ptree, ProbVector, Route, TiltedSampler};

pub(super) fn defaults(name: &str) -> ExperimentConfig {
    let c = ExperimentConfig::new(name).with_replicas(10);
    match name {
        "tilted-oracle" => c
            .with_param("m", vec![3, 4])
            .with_param("a", vec![0.5, 1.0])
            .with_param("samples", 100_000)
            .with_param("route", "lemma45")
            .with_param("ptree_p", vec![0.4, 0.3, 0.2, 0.1])
            .with_param("ptree_samples", 1_000_000),
        _ => c.with_param("masses", vec![1.0, 2.0, 3.0]).with_param("t", 0.1).with_param("runs", 100_000),
    }
}

fn merge<K: Ord>(parts: Vec<BTreeMap<K, u64>>) -> BTreeMap<K, u64> {
    let mut out = BTreeMap::new();
    for p in parts {
        for (k, c) in p {
            *out.entry(k).or_insert(0) += c;
        }
    }
    out
}

/// Replicas are batches of the requested sample count; TV is computed on
/// the pooled counts and per batch.
pub(super) fn tilted(cfg: &ExperimentConfig, run: &mut Runner) -> Result<Summary> {
    let ms = cfg.usize_list_param("m", &[3, 4])?;
    let avals = cfg.f64_list_param("a", &[0.5, 1.0])?;
    let samples = cfg.usize_param("samples", 100_000)?;
    let route: Route = serde_json::from_value(serde_json::Value::String(cfg.str_param("route", "lemma45")?.into()))?;
    let parts = batches(samples, cfg.replicas.unwrap());
    let mut summary = BTreeMap::new();
    let mut pt = 0;
    for &m in &ms {
        if !(2..=6).contains(&m) {
            return domain(format!("m = {m} outside the enumerable range 2..=6"));
        }
        let p = ProbVector::uniform(m)?;
        for &a in &avals {
            let exact: BTreeMap<u32, f64> = pcon_oracle(&p, a)?.into_iter().collect();
            let res = run.replicate(pt, parts.len(), |rng, r| {
                let mut s = TiltedSampler::new(p.clone(), a, route)?;
                let mut counts = BTreeMap::new();
                for _ in 0..parts[r] {
                    let g = s.sample(rng)?.graph;
                    let mask = edge_mask(&g).ok_or_else(|| crate::Error::Verification("sample is not simple".into()))?;
                    *counts.entry(mask).or_insert(0u64) += 1;
                }
                Ok((counts, s.stats))
            })?;
            let lab = format!("m={m},a={a}");
            for (r, (c, st)) in res.iter().enumerate() {
                run.push(pt, &lab, r, "tv_batch", tv_empirical(c, &exact)?);
                run.push(pt, &lab, r, "acceptance_rate", st.acceptance_rate());
            }
            let pooled = merge(res.into_iter().map(|x| x.0).collect());
            summary.insert(format!("{lab}.tv"), tv_empirical(&pooled, &exact)?);
            summary.insert(format!("{lab}.outcomes"), exact.len() as f64);
            pt += 1;
        }
    }
    let pp = ProbVector::new(cfg.f64_list_param("ptree_p", &[0.4, 0.3, 0.2, 0.1])?)?;
    let pn = cfg.usize_param("ptree_samples", 1_000_000)?;
    if pn > 0 {
        if pp.len() > 6 {
            return domain("ptree_p supports at most 6 vertices");
        }
        let exact = ptree_law(&pp);
        let parts = batches(pn, cfg.replicas.unwrap());
        let res = run.replicate(pt, parts.len(), |rng, r| {
            let mut counts = BTreeMap::new();
            for _ in 0..parts[r] {
                *counts.entry(sample_ptree(&pp, rng).parent).or_insert(0u64) += 1;
            }
            Ok(counts)
        })?;
        let lab = format!("ptree,m={}", pp.len());
        for (r, c) in res.iter().enumerate() {
            run.push(pt, &lab, r, "tv_batch", tv_empirical(c, &exact)?);
        }
        let pooled = merge(res);
        summary.insert("ptree.tv".into(), tv_empirical(&pooled, &exact)?);
        summary.insert("ptree.trees".into(), exact.len() as f64);
    }
    Ok((summary, vec![format!("route {route:?}; TV summaries use pooled counts")]))
}

pub(super) fn mc_vs_nr(cfg: &ExperimentConfig, run: &mut Runner) -> Result<Summary> {
    let x = cfg.f64_list_param("masses", &[1.0, 2.0, 3.0])?;
    let t = cfg.f64_param("t", 0.1)?;
    let runs = cfg.usize_param("runs", 100_000)?;
    let exact = nr_partition_law(&x, t)?;
    let parts = batches(runs, cfg.replicas.unwrap());
    let res = run.replicate(0, parts.len(), |rng, r| {
        let mut counts = BTreeMap::new();
        for _ in 0..parts[r] {
            let h = simulate_mc(&x, t, rng)?;
            *counts.entry(mc_partition(x.len(), &h, t)).or_insert(0u64) += 1;
        }
        Ok(counts)
    })?;
    let lab = format!("t={t}");
    for (r, c) in res.iter().enumerate() {
        run.push(0, &lab, r, "tv_batch", tv_empirical(c, &exact)?);
    }
    let pooled = merge(res);
    let mut summary = BTreeMap::new();
    summary.insert("tv".into(), tv_empirical(&pooled, &exact)?);
    summary.insert("partitions".into(), exact.len() as f64);
    Ok((summary, Vec::new()))
}
