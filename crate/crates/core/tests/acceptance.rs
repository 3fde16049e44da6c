//! Acceptance run: each criterion executes its registered experiment with
//! default settings (seed 1) and prints one PASS/FAIL line.

use std::time::Instant;

use heavytail_core::harness::{default_config, execute, Aggregate, ExperimentConfig};

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(cfg: ExperimentConfig) -> (Aggregate, f64) {
    let t = Instant::now();
    let out = execute(&cfg).unwrap_or_else(|e| panic!("{}: {e}", cfg.experiment));
    (out.aggregate, t.elapsed().as_secs_f64())
}

fn defaults(name: &str) -> ExperimentConfig {
    default_config(name).unwrap().with_seed(1)
}

fn get(a: &Aggregate, key: &str) -> f64 {
    a.get(key).unwrap_or_else(|| panic!("{}: missing summary key {key}", a.experiment))
}

fn tilted_oracle() -> Outcome {
    let (a, secs) = run(defaults("tilted-oracle"));
    let keys = ["m=3,a=0.5.tv", "m=3,a=1.tv", "m=4,a=0.5.tv", "m=4,a=1.tv"];
    let tvs: Vec<f64> = keys.iter().map(|k| get(&a, k)).collect();
    let worst = tvs.iter().cloned().fold(0.0, f64::max);
    Outcome {
        pass: worst < 0.02 && secs < 300.0,
        detail: format!("max TV {worst:.4} over m in {{3,4}}, a in {{0.5,1}}; {secs:.1}s"),
    }
}

fn ptree_law() -> Outcome {
    let (a, _) = run(defaults("tilted-oracle").with_param("m", Vec::<usize>::new()));
    let tv = get(&a, "ptree.tv");
    let trees = get(&a, "ptree.trees");
    Outcome { pass: tv < 0.02 && trees == 64.0, detail: format!("TV {tv:.4} over {trees} rooted trees") }
}

fn susceptibility() -> Outcome {
    let (a, secs) = run(defaults("susceptibility-scaling"));
    let (first, last) = (get(&a, "ratio_first"), get(&a, "ratio_last"));
    let toward = (last - 1.0).abs() < (first - 1.0).abs();
    Outcome {
        pass: toward && (0.8..=1.2).contains(&last) && secs < 1800.0,
        detail: format!("ratio {first:.4} -> {last:.4}; {secs:.1}s"),
    }
}

fn diameter() -> Outcome {
    let cfg = defaults("diameter-bound");
    let reps = cfg.replicas.unwrap();
    let (a, _) = run(cfg);
    let v = get(&a, "n=100000.violations");
    Outcome { pass: v == 0.0 && reps == 100, detail: format!("{v}/{reps} violations") }
}

fn slope(name: &str, key: &str, target: f64, tol: f64) -> Outcome {
    let (a, secs) = run(defaults(name));
    let s = get(&a, key);
    let se = get(&a, &format!("{key}_stderr"));
    Outcome {
        pass: (s - target).abs() <= tol,
        detail: format!("slope {s:.4} (stderr {se:.4}), target {target} ± {tol}; {secs:.1}s"),
    }
}

fn limit_bridge() -> Outcome {
    let (a, _) = run(defaults("limit-bridge"));
    let (ks, crit) = (get(&a, "ks"), get(&a, "ks_critical_5"));
    let ratio = get(&a, "surplus_ratio");
    Outcome {
        pass: ks < crit && (ratio - 1.0).abs() <= 0.2,
        detail: format!("KS {ks:.4} vs 5% critical {crit:.4}; surplus/marks mean ratio {ratio:.3}"),
    }
}

fn rescaling() -> Outcome {
    let (a, _) = run(defaults("rescaling-identity"));
    let (ks, crit) = (get(&a, "ks"), get(&a, "ks_critical_1"));
    Outcome { pass: ks < crit, detail: format!("KS {ks:.4} vs 1% critical {crit:.4}") }
}

fn mc_vs_nr() -> Outcome {
    let (a, _) = run(defaults("mc-vs-nr"));
    let tv = get(&a, "tv");
    Outcome { pass: tv < 0.02, detail: format!("TV {tv:.4}") }
}

fn trackers() -> Outcome {
    let cfg = defaults("dynamic-trackers");
    let reps = cfg.replicas.unwrap();
    let (a, _) = run(cfg);
    let f = get(&a, "n=100000.pass_fraction");
    Outcome { pass: f >= 0.95 && reps >= 100, detail: format!("within bound on {:.0}% of {reps} runs", 100.0 * f) }
}

fn universality() -> Outcome {
    let (a, _) = run(defaults("universality-check"));
    let (first, last) = (get(&a, "m=500.relative_difference"), get(&a, "m=2000.relative_difference"));
    Outcome {
        pass: last < 0.10 && last < first,
        detail: format!("relative difference {first:.4} at m=500 -> {last:.4} at m=2000"),
    }
}

fn coupling() -> Outcome {
    let (a, _) = run(defaults("entrance-boundary").with_replicas(100));
    let fr: Vec<(String, f64)> =
        a.summary.iter().filter(|(k, _)| k.ends_with("coupling_fraction")).map(|(k, &v)| (k.clone(), v)).collect();
    Outcome {
        pass: !fr.is_empty() && fr.iter().all(|(_, v)| *v == 1.0),
        detail: fr.iter().map(|(k, v)| format!("{k} {v}")).collect::<Vec<_>>().join(", "),
    }
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("tilted sampler matches the connected-graph law", tilted_oracle),
        ("birthday p-trees match the p-tree law", ptree_law),
        ("susceptibility ratio approaches its target", susceptibility),
        ("maximum diameter stays below the bound", diameter),
        ("largest component grows like n^0.6", || slope("component-scaling", "size_slope", 0.6, 0.08)),
        ("typical distances grow like n^0.2", || slope("distance-scaling", "distance_slope", 0.2, 0.1)),
        ("largest component and surplus match the Levy limit", limit_bridge),
        ("rescaled excursion laws agree", rescaling),
        ("multiplicative coalescent matches rank-one partitions", mc_vs_nr),
        ("pairing trackers follow closed forms", trackers),
        ("blob super graph approaches the tilted proxy", universality),
        ("original graph sits inside the modified graph", coupling),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("{} {:>2}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
