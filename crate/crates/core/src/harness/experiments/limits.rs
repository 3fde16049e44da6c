//! Limit-object experiments: excursion rescaling, the component-size bridge
//! and blob universality.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::Distribution;

use super::{batches, Summary};
use crate::degrees::{exponents, percolation_probability, quantile_sequence};
use crate::error::{domain, Result};
use crate::graph::{components_and_stats, percolate, sample_cm, ComponentOptions, MultiGraph};
use crate::harness::config::ExperimentConfig;
use crate::harness::run::Runner;
use crate::harness::stats::ks_two_sample;
use crate::limit::{approx_g_infinity, component_size_limit, rescaled_excursion_law, ThetaSeq};
use crate::metric::{assemble_supergraph, blob_functionals, MeasuredMetricSpace, SuperGraphSpec};

pub(super) fn defaults(name: &str) -> ExperimentConfig {
    let c = ExperimentConfig::new(name);
    match name {
        "universality-check" => c
            .with_replicas(200)
            .with_param("m", vec![500, 1000, 2000])
            .with_param("gamma", 0.2)
            .with_param("beta_k", 10)
            .with_param("beta_power", 0.4)
            .with_param("beta_sq", 0.5)
            .with_param("pairs", 20),
        "rescaling-identity" => {
            let mut c = c
                .with_replicas(10)
                .with_param("theta", vec![1.0, 0.5])
                .with_param("eta1", 2.0)
                .with_param("eta2", 1.0)
                .with_param("samples", 10_000)
                .with_param("horizon", 200.0);
            c.lambda = Some(0.0);
            c
        }
        _ => {
            let mut c = c
                .with_replicas(400)
                .with_n(vec![100_000])
                .with_param("scale", 1.0)
                .with_param("draws", 10_000)
                .with_param("batches", 10)
                .with_param("horizon", 50.0)
                .with_param("keep_tail", false)
                .with_param("sensitivity", true);
            c.tau = Some(3.5);
            c.lambda = Some(0.0);
            c.truncation = Some(100);
            c
        }
    }
}

/// β_i ∝ i^{-power}, i ≤ k, scaled to Σβ² = sq.
pub(crate) fn power_beta(k: usize, power: f64, sq: f64) -> Result<Vec<f64>> {
    if k == 0 || !(sq > 0.0 && sq < 1.0) {
        return domain("need k >= 1 and 0 < sum of squares < 1");
    }
    let raw: Vec<f64> = (1..=k).map(|i| (i as f64).powf(-power)).collect();
    let s = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(raw.iter().map(|x| x / s * sq.sqrt()).collect())
}

/// Two-point blobs glued along the tilted p-tree proxy, compared on the same
/// superstructure and the same sampled point pairs.
pub(super) fn universality(cfg: &ExperimentConfig, run: &mut Runner) -> Result<Summary> {
    let ms = cfg.usize_list_param("m", &[500, 1000, 2000])?;
    let gamma = cfg.f64_param("gamma", 0.2)?;
    let beta = power_beta(
        cfg.usize_param("beta_k", 10)?,
        cfg.f64_param("beta_power", 0.4)?,
        cfg.f64_param("beta_sq", 0.5)?,
    )?;
    let pairs = cfg.usize_param("pairs", 20)?.max(1);
    let blob = MeasuredMetricSpace::from_graph(&MultiGraph::from_edges(2, [(0, 1)])?, vec![0.5, 0.5])?;
    let mut summary = BTreeMap::new();
    let mut rels = Vec::new();
    for (pt, &m) in ms.iter().enumerate() {
        let res = run.replicate(pt, cfg.replicas.unwrap(), |rng, _| {
            let g = approx_g_infinity(&beta, gamma, m, rng)?;
            let p = g.p.as_slice().to_vec();
            let blobs = vec![blob.clone(); m];
            let bf = blob_functionals(&blobs[..1], &[1.0], 10, 0, rng)?;
            let b = bf.b;
            let spec = SuperGraphSpec::with_random_junctions(blobs, p, g.sample.graph.canonical_edges(), rng);
            let bl = assemble_supergraph(&spec)?;
            let smp = g.p.sampler();
            let (mut sb, mut sg) = (0.0, 0.0);
            for _ in 0..pairs {
                let x = smp.sample(rng);
                let y = smp.sample(rng);
                let (px, py) = (rng.random_range(0..2), rng.random_range(0..2));
                sg += g.space.dist(x, y);
                sb += bl.dist(2 * x + px, 2 * y + py) * g.sigma / (b + 1.0);
            }
            let k = pairs as f64;
            Ok(vec![
                ("blob_stat", sb / k),
                ("proxy_stat", sg / k),
                ("difference", (sb - sg) / k),
                ("surplus", g.sample.surplus.len() as f64),
                ("B", b),
                ("sigma", g.sigma),
                ("a", g.a),
            ])
        })?;
        let lab = format!("m={m}");
        run.push_all(pt, &lab, &res);
        let mean = |i: usize| res.iter().map(|kv| kv[i].1).sum::<f64>() / res.len() as f64;
        let (bl, gp, diff) = (mean(0), mean(1), mean(2));
        let sd = (res.iter().map(|kv| (kv[2].1 - diff).powi(2)).sum::<f64>() / (res.len() as f64 - 1.0).max(1.0)).sqrt();
        let rel = (bl - gp).abs() / gp;
        summary.insert(format!("{lab}.blob_stat"), bl);
        summary.insert(format!("{lab}.proxy_stat"), gp);
        summary.insert(format!("{lab}.relative_difference"), rel);
        summary.insert(format!("{lab}.relative_stderr"), sd / (res.len() as f64).sqrt() / gp);
        summary.insert(format!("{lab}.mean_surplus"), mean(3));
        rels.push(rel);
    }
    summary.insert("relative_first".into(), rels[0]);
    summary.insert("relative_last".into(), *rels.last().unwrap());
    let decreasing = rels.last().unwrap() < &rels[0];
    summary.insert("decreasing".into(), f64::from(u8::from(decreasing)));
    let notes = vec!["statistic: mean distance between two measure-distributed points, blob side scaled by sigma(p)/(B+1)".into()];
    Ok((summary, notes))
}

pub(super) fn rescaling(cfg: &ExperimentConfig, run: &mut Runner) -> Result<Summary> {
    let theta = ThetaSeq::new(cfg.f64_list_param("theta", &[1.0, 0.5])?)?;
    let lambda = cfg.lambda.unwrap();
    let eta1 = cfg.f64_param("eta1", 2.0)?;
    let eta2 = cfg.f64_param("eta2", 1.0)?;
    let horizon = cfg.f64_param("horizon", 200.0)?;
    let parts = batches(cfg.usize_param("samples", 10_000)?, cfg.replicas.unwrap());
    let res = run.replicate(0, parts.len(), |rng, r| {
        rescaled_excursion_law(&theta, lambda, eta1, eta2, parts[r], horizon, rng)
    })?;
    let lab = format!("eta1={eta1},eta2={eta2}");
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for (r, (l, rt)) in res.into_iter().enumerate() {
        let m = |v: &[f64]| v.iter().sum::<f64>() / v.len().max(1) as f64;
        run.push(0, &lab, r, "direct_mean", m(&l));
        run.push(0, &lab, r, "rescaled_mean", m(&rt));
        left.extend(l);
        right.extend(rt);
    }
    let ks = ks_two_sample(&left, &right)?;
    let mut summary = BTreeMap::new();
    summary.insert("ks".into(), ks.distance);
    summary.insert("ks_critical_1".into(), ks.critical_1);
    summary.insert("ks_critical_5".into(), ks.critical_5);
    summary.insert("ks_p_value".into(), ks.p_value);
    summary.insert("samples_per_side".into(), left.len() as f64);
    Ok((summary, vec!["direct: xi(eta1 theta, eta2 lambda) on [0, T/eta1]; rescaled: xi(theta, eta2 lambda/eta1^2)/eta1 on [0, T]".into()]))
}

pub(super) fn bridge(cfg: &ExperimentConfig, run: &mut Runner) -> Result<Summary> {
    let tau = cfg.tau.unwrap();
    let ex = exponents(tau)?;
    let lambda = cfg.lambda.unwrap();
    let k = cfg.truncation.unwrap();
    let ns = cfg.n.clone().unwrap();
    let &[n] = ns.as_slice() else {
        return domain("limit-bridge takes a single n");
    };
    let seq = quantile_sequence(n, tau, cfg.f64_param("scale", 1.0)?)?;
    let (mu, nu) = (seq.mean(), seq.nu());
    let wp = percolation_probability(&seq.d, lambda, ex.eta)?;
    let nf = n as f64;
    let graph = run.replicate(0, cfg.replicas.unwrap(), |rng, _| {
        let g = percolate(&sample_cm(&seq.d, rng)?, wp.p, rng)?;
        let (comps, _) = components_and_stats(&g, None, &ComponentOptions::sizes_only(), rng)?;
        Ok(vec![("largest_scaled", comps[0].size as f64 * nf.powf(-ex.rho)), ("surplus", comps[0].surplus as f64)])
    })?;
    let glab = format!("graph,n={n}");
    run.push_all(0, &glab, &graph);
    let sizes: Vec<f64> = graph.iter().map(|kv| kv[0].1).collect();
    let surplus = graph.iter().map(|kv| kv[1].1).sum::<f64>() / graph.len() as f64;

    let draws = cfg.usize_param("draws", 10_000)?;
    let parts = batches(draws, cfg.usize_param("batches", 10)?);
    let horizon = cfg.f64_param("horizon", 50.0)?;
    let keep_tail = cfg.bool_param("keep_tail", false)?;
    let mut levels = vec![k];
    if cfg.bool_param("sensitivity", true)? {
        levels.push(2 * k);
    }
    let mut summary = BTreeMap::new();
    for (i, &kk) in levels.iter().enumerate() {
        let theta = ThetaSeq::from_degrees(&seq.d, ex.alpha, kk, keep_tail)?;
        let pt = i + 1;
        let res = run.replicate(pt, parts.len(), |rng, r| {
            let mut out = Vec::with_capacity(parts[r]);
            for _ in 0..parts[r] {
                let d = component_size_limit(&theta, lambda, mu, nu, horizon, rng)?;
                out.push((d.size, d.marks as f64));
            }
            Ok(out)
        })?;
        let lab = format!("limit,K={kk}");
        for (r, batch) in res.iter().enumerate() {
            let m = batch.len().max(1) as f64;
            run.push(pt, &lab, r, "size_mean", batch.iter().map(|x| x.0).sum::<f64>() / m);
            run.push(pt, &lab, r, "marks_mean", batch.iter().map(|x| x.1).sum::<f64>() / m);
        }
        let lim: Vec<f64> = res.iter().flatten().map(|x| x.0).collect();
        let marks = res.iter().flatten().map(|x| x.1).sum::<f64>() / lim.len() as f64;
        let ks = ks_two_sample(&sizes, &lim)?;
        let key = if i == 0 { String::new() } else { format!("K={kk}.") };
        summary.insert(format!("{key}ks"), ks.distance);
        summary.insert(format!("{key}ks_critical_5"), ks.critical_5);
        summary.insert(format!("{key}ks_p_value"), ks.p_value);
        summary.insert(format!("{key}marks_mean"), marks);
        summary.insert(format!("{key}surplus_ratio"), surplus / marks);
    }
    summary.insert("surplus_mean".into(), surplus);
    summary.insert("truncation".into(), k as f64);
    summary.insert("mu".into(), mu);
    summary.insert("nu".into(), nu);
    let notes = vec![
        "theta_i = n^-alpha d_i from the finite sequence; mu and nu are the finite-n values".into(),
        format!("keep_tail = {keep_tail}; the K={} row is the truncation sensitivity check", 2 * k),
    ];
    Ok((summary, notes))
}
