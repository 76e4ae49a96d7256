//! The ten acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always show up in
//! `cargo test` output. Exits non-zero if any criterion fails. Every
//! tolerance and runtime budget is pinned below.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use stable_looptrees::dissection::{dual_tree, from_dual, gh_gap_check, sample_boltzmann, Dissection};
use stable_looptrees::excursion_metric::JumpPath;
use stable_looptrees::experiments::{laplace_estimate, Experiment, LAPLACE_LAMBDAS};
use stable_looptrees::gw_tree::{
    all_plane_trees, decode_tree, for_each_descent, sample_conditioned_tree, stable_offspring, Genealogy,
    LukasiewiczPath, OffspringLaw, PlaneTree, Variant,
};
use stable_looptrees::looptree::{build_loop_prime, loop_gh_bound, loop_prime_distance, LoopPrimeMetric};
use stable_looptrees::metric_analysis::bfs_distances;
use stable_looptrees::rng::stream;
use stable_looptrees::stable_law::{beta_root, laplace_transform, StableParams, DEFAULT_TOL, DEFAULT_TRUNCATION};

const SEED: u64 = 20_240_601;
const ROUNDOFF: f64 = 1e-9;

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: impl Into<String>) -> Outcome {
    Outcome { pass, summary: summary.into() }
}

/// A size-`n` tree from the generic law with index drawn in `[1.1, 1.9]`.
fn random_tree(stream_index: u64, max_n: usize) -> PlaneTree {
    let mut rng = stream(SEED, stream_index);
    let alpha = rng.random_range(1.1..1.9);
    let n = rng.random_range(1..=max_n);
    let law = stable_offspring(alpha, Variant::Generic).unwrap();
    sample_conditioned_tree(&law, n, &mut rng).unwrap()
}

fn loop_prime_matches_bfs(tree: &PlaneTree) -> bool {
    let path = tree.encode();
    let metric = LoopPrimeMetric::new(&path);
    let graph = build_loop_prime(tree);
    (0..tree.size()).all(|i| {
        let bfs = bfs_distances(graph.graph(), i).unwrap();
        (0..tree.size()).all(|j| metric.distance(i, j) == bfs[j] as i64)
    })
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for n in 1..=8 {
        for tree in all_plane_trees(n) {
            if !loop_prime_matches_bfs(&tree) {
                return outcome(false, format!("mismatch on {:?}", tree.children_counts()));
            }
            let path = tree.encode();
            let graph = build_loop_prime(&tree);
            for i in 0..n {
                let bfs = bfs_distances(graph.graph(), i).unwrap();
                if (0..n).any(|j| loop_prime_distance(&path, i, j) != bfs[j] as i64) {
                    return outcome(false, format!("path formula mismatch on {:?}", tree.children_counts()));
                }
            }
            checked += 1;
        }
    }
    for r in 0..300 {
        let tree = random_tree(1_000 + r, 200);
        if !loop_prime_matches_bfs(&tree) {
            return outcome(false, format!("mismatch on random tree {r}"));
        }
        // The descent-based single-pair formula on a few pairs as well.
        let path = tree.encode();
        let metric = LoopPrimeMetric::new(&path);
        let mut rng = stream(SEED, 5_000 + r);
        for _ in 0..20 {
            let (i, j) = (rng.random_range(0..tree.size()), rng.random_range(0..tree.size()));
            if loop_prime_distance(&path, i, j) != metric.distance(i, j) {
                return outcome(false, format!("single-pair formula mismatch on random tree {r}"));
            }
        }
    }
    outcome(true, format!("{checked} small trees exhaustively and 300 random trees, exact"))
}

/// `Σ (children - index)` over strict ancestors of `j`, from an explicit
/// depth-first traversal of the children counts.
fn descent_sums_by_traversal(tree: &PlaneTree) -> Vec<i64> {
    let counts = tree.children_counts();
    let mut sums = vec![0i64; counts.len()];
    // Stack of (vertex, next child index).
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for v in 0..counts.len() {
        if let Some(&(p, i)) = stack.last() {
            sums[v] = sums[p] + (counts[p] - i) as i64;
        }
        if let Some(top) = stack.last_mut() {
            top.1 += 1;
        }
        stack.push((v, 0));
        while let Some(&(u, i)) = stack.last() {
            if i == counts[u] {
                stack.pop();
            } else {
                break;
            }
        }
    }
    sums
}

fn criterion_2() -> Outcome {
    for r in 0..10_000 {
        let tree = random_tree(20_000 + r, 400);
        let path = tree.encode();
        let values = path.values();
        let depths = tree.depths();
        let oracle = descent_sums_by_traversal(&tree);
        let genealogy = Genealogy::new(&path);
        let mut ok = true;
        for_each_descent(&path, |j, descent| {
            let sum: i64 = descent.iter().map(|&(_, x)| x).sum();
            ok &= sum == depths[j] as i64 + values[j] && sum == oracle[j];
            ok
        });
        let probe = r as usize % tree.size();
        ok &= genealogy.descent(probe).iter().map(|&(_, x)| x).sum::<i64>() == oracle[probe];
        if !ok {
            return outcome(false, format!("identity fails on random tree {r}"));
        }
    }
    outcome(true, "10000 random trees, every vertex, exact")
}

fn criterion_3() -> Outcome {
    let (mut lower_checked, mut upper_checked) = (0usize, 0usize);
    for r in 0..100 {
        let mut rng = stream(SEED, 40_000 + r);
        let alpha = rng.random_range(1.1..1.9);
        let law = stable_offspring(alpha, Variant::Generic).unwrap();
        let n = 10_000;
        let tree = sample_conditioned_tree(&law, n, &mut rng).unwrap();
        let lpath = tree.encode();
        let w = lpath.values();
        let scale = law.scaling(n as f64);
        let path = JumpPath::new(&lpath, scale).unwrap();
        let parents = tree.parents();
        for _ in 0..200 {
            // Lower bound: s ≺ r ≺ t along the ancestral line of t.
            let t = rng.random_range(0..n);
            let mut line = vec![t];
            while let Some(p) = parents[*line.last().unwrap()] {
                line.push(p);
            }
            if line.len() >= 3 {
                let ri = rng.random_range(1..line.len() - 1);
                let si = rng.random_range(ri + 1..line.len());
                let (s, r) = (line[si], line[ri]);
                // x_r^t = min_{r<l≤t} W_l - W_r, by a direct scan.
                let x = (w[r + 1..=t].iter().min().unwrap() - w[r]) as f64 / scale;
                let delta = tree.children_counts()[r] as f64 / scale;
                if (path.x(r, t).unwrap() - x).abs() > ROUNDOFF {
                    return outcome(false, format!("x_r^t disagrees on path {r}"));
                }
                if path.looptree_distance(s, t) < x.min(delta - x) - ROUNDOFF {
                    return outcome(false, format!("lower bound fails on path {r} at ({s},{r},{t})"));
                }
                lower_checked += 1;
            }
            // Upper bound for s < t.
            let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
            let (s, t) = (a.min(b), a.max(b));
            if s < t {
                let x_s = (w[s] + tree.children_counts()[s] as i64) as f64 / scale;
                let x_t_left = w[t] as f64 / scale;
                let inf = *w[s + 1..=t].iter().min().unwrap() as f64 / scale;
                if path.looptree_distance(s, t) > x_s + x_t_left - 2.0 * inf + ROUNDOFF {
                    return outcome(false, format!("upper bound fails on path {r} at ({s},{t})"));
                }
                upper_checked += 1;
            }
        }
    }
    outcome(
        true,
        format!("100 paths of 10^4 steps, {lower_checked} lower and {upper_checked} upper triples, tolerance {ROUNDOFF:e}"),
    )
}

fn criterion_4() -> Outcome {
    let mut worst_loop: f64 = 0.0;
    for n in 1..=8 {
        for tree in all_plane_trees(n) {
            worst_loop = worst_loop.max(loop_gh_bound(&tree).unwrap());
        }
    }
    for r in 0..300 {
        worst_loop = worst_loop.max(loop_gh_bound(&random_tree(60_000 + r, 200)).unwrap());
    }
    let law = stable_offspring(1.5, Variant::NoUnary).unwrap();
    let mut violations = 0;
    let mut worst_slack = f64::NEG_INFINITY;
    for r in 0..200 {
        let mut rng = stream(SEED, 70_000 + r);
        let leaves = rng.random_range(3..=300);
        let d = sample_boltzmann(&law, leaves, &mut rng).unwrap();
        let check = gh_gap_check(&d).unwrap();
        worst_slack = worst_slack.max(check.observed - (check.height as f64 + 2.0));
        if !check.bound_ok {
            violations += 1;
        }
    }
    outcome(
        worst_loop <= 2.0 && violations == 0,
        format!(
            "Loop vs Loop' worst bound {worst_loop} (limit 2); dissections: {violations} of 200 above H+2, \
             worst observed - (H+2) = {worst_slack}"
        ),
    )
}

const LAPLACE_DRAWS: usize = 1_000_000;
const LAPLACE_SE: f64 = 4.0;

fn criterion_5() -> Outcome {
    let mut worst: f64 = 0.0;
    for (a, alpha) in [1.2, 1.5, 1.8].into_iter().enumerate() {
        let params = StableParams::new(alpha).unwrap();
        for (l, &lambda) in LAPLACE_LAMBDAS.iter().enumerate() {
            let first = ((a * 8 + l) as u64) << 32;
            let (mean, se) = laplace_estimate(params, lambda, LAPLACE_DRAWS, SEED, first);
            worst = worst.max((mean - laplace_transform(params, 1.0, lambda)).abs() / se);
        }
    }
    outcome(worst <= LAPLACE_SE, format!("worst deviation {worst:.3} standard errors (limit {LAPLACE_SE})"))
}

/// Root of `Σ (-β)^n / ((n-α) n!)` by grid scan, through the identity
/// `Σ (-β)^n / ((n-α) n!) = β^α (Γ(-α) - ∫_β^∞ x^{-α-1} e^{-x} dx)`, with
/// the integral done by Simpson's rule after `x = β e^u`.
fn beta_by_grid_scan(alpha: f64) -> f64 {
    let gamma_neg = statrs::function::gamma::gamma(-alpha);
    let upper = |beta: f64| {
        let top = (60.0 / beta).ln();
        let steps = 4000;
        let h = top / steps as f64;
        let f = |u: f64| {
            let x = beta * u.exp();
            x.powf(-alpha) * (-x).exp()
        };
        let mut s = f(0.0) + f(top);
        for i in 1..steps {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        s * h / 3.0
    };
    let g = |beta: f64| gamma_neg - upper(beta);
    let step = 1e-4;
    let mut prev = g(step);
    let mut b = step;
    while b < 1.0 {
        let next = g(b + step);
        if prev < 0.0 && next >= 0.0 {
            return b + step / 2.0;
        }
        prev = next;
        b += step;
    }
    f64::NAN
}

const MAX_JUMP_REL: f64 = 0.05;
const BETA_ORACLE_TOL: f64 = 1e-3;

fn criterion_6() -> Outcome {
    let mut worst_beta: f64 = 0.0;
    for alpha in [1.05, 1.2, 1.5, 1.8, 1.95] {
        let params = StableParams::new(alpha).unwrap();
        let beta = beta_root(params, DEFAULT_TRUNCATION, DEFAULT_TOL).unwrap();
        worst_beta = worst_beta.max((beta - beta_by_grid_scan(alpha)).abs());
    }
    let report = Experiment::MaxJump.run(&Experiment::MaxJump.defaults()).unwrap();
    let rel = (report.statistic - report.target).abs() / report.target;
    outcome(
        report.pass && rel <= MAX_JUMP_REL && worst_beta <= BETA_ORACLE_TOL,
        format!(
            "mean max jump {:.4} vs {:.4} (relative error {rel:.4}, limit {MAX_JUMP_REL}); \
             beta vs grid scan worst {worst_beta:.2e} (limit {BETA_ORACLE_TOL:e})",
            report.statistic, report.target
        ),
    )
}

const DIMENSION_TOL: f64 = 0.15;

fn criterion_7() -> Outcome {
    let config = Experiment::Dimension.defaults();
    assert_eq!((config.alpha, config.n, config.replicates, config.tolerance), (1.5, 1_000_000, 20, DIMENSION_TOL));
    let report = Experiment::Dimension.run(&config).unwrap();
    outcome(
        report.pass,
        format!("slope {:.4} vs 1.5 +- {DIMENSION_TOL} ({})", report.statistic, report.details["fit"]["stderr"]),
    )
}

fn criterion_8() -> Outcome {
    let circle = Experiment::InterpolationCircle.run(&Experiment::InterpolationCircle.defaults()).unwrap();
    let crt_config = Experiment::InterpolationCrt.defaults();
    assert_eq!((crt_config.n, crt_config.replicates, crt_config.tolerance), (100_000, 50, 0.05));
    let crt = Experiment::InterpolationCrt.run(&crt_config).unwrap();
    let c = &circle.checks;
    outcome(
        circle.pass && crt.pass,
        format!(
            "alpha 1.05: median max jump {:.4} (> 0.9), median GH bound {:.4} (< 0.1); \
             alpha 1.95: mean ratio {:.4} (0.5 +- 0.05, stderr {:.4})",
            c[0].statistic, c[1].statistic, crt.statistic, crt.details["ratio_stderr"].as_f64().unwrap_or(f64::NAN)
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut trees = 0;
    for n in 1..=8 {
        for tree in all_plane_trees(n) {
            if decode_tree(&tree.encode()).unwrap() != tree {
                return outcome(false, format!("decode(encode) fails on {:?}", tree.children_counts()));
            }
            trees += 1;
        }
    }
    for r in 0..500 {
        let tree = random_tree(80_000 + r, 2000);
        let path = LukasiewiczPath::new(tree.encode().steps().to_vec()).unwrap();
        if decode_tree(&path).unwrap() != tree {
            return outcome(false, format!("decode(encode) fails on random tree {r}"));
        }
    }
    // Every tree without unary vertices and with at most 7 leaves.
    let mut dissections = 0;
    for n in 1..=13 {
        for tree in all_plane_trees(n) {
            let counts = tree.children_counts();
            let leaves = counts.iter().filter(|&&c| c == 0).count();
            if counts.contains(&1) || !(2..=7).contains(&leaves) {
                continue;
            }
            let d = from_dual(&tree).unwrap();
            if dual_tree(&d) != tree {
                return outcome(false, format!("phi(phi^-1) fails on {counts:?}"));
            }
            dissections += 1;
        }
    }
    let law = stable_offspring(1.5, Variant::NoUnary).unwrap();
    for r in 0..200 {
        let mut rng = stream(SEED, 90_000 + r);
        let d = sample_boltzmann(&law, rng.random_range(8..=500), &mut rng).unwrap();
        if from_dual(&dual_tree(&d)).unwrap() != d {
            return outcome(false, format!("phi^-1(phi) fails on random dissection {r}"));
        }
    }
    outcome(
        true,
        format!("{trees} small trees and 500 random ones; {dissections} small dissections and 200 random ones"),
    )
}

const BOLTZMANN_SAMPLES: usize = 100_000;
const BOLTZMANN_P: f64 = 0.01;

/// Chi-square p-value of `sample_boltzmann(law, 3)` against the enumeration
/// of the square: the empty dissection is one face of degree 4, each
/// diagonal splits it into two triangles.
fn square_p_value(law: &OffspringLaw, stream_index: u64) -> f64 {
    let outcomes = [vec![], vec![(0, 2)], vec![(1, 3)]];
    let weights = [law.prob(3), law.prob(2).powi(2), law.prob(2).powi(2)];
    let total: f64 = weights.iter().sum();
    let mut counts = [0usize; 3];
    let mut rng = stream(SEED, stream_index);
    for _ in 0..BOLTZMANN_SAMPLES {
        let d = sample_boltzmann(law, 3, &mut rng).unwrap();
        let k = outcomes.iter().position(|c| Dissection::new(4, c.clone()).unwrap() == d).unwrap();
        counts[k] += 1;
    }
    let support: Vec<usize> = (0..3).filter(|&k| weights[k] > 0.0).collect();
    if support.iter().map(|&k| counts[k]).sum::<usize>() != BOLTZMANN_SAMPLES {
        return 0.0;
    }
    let stat: f64 = support
        .iter()
        .map(|&k| {
            let expected = BOLTZMANN_SAMPLES as f64 * weights[k] / total;
            (counts[k] as f64 - expected).powi(2) / expected
        })
        .sum();
    ChiSquared::new((support.len() - 1) as f64).unwrap().sf(stat)
}

fn criterion_10() -> Outcome {
    let laws = [
        ("uniform on {0,2}", OffspringLaw::from_probabilities(vec![0.5, 0.0, 0.5]).unwrap()),
        ("{0,2,3}", OffspringLaw::from_probabilities(vec![0.6, 0.0, 0.2, 0.2]).unwrap()),
        ("stable 1.5 without unary", stable_offspring(1.5, Variant::NoUnary).unwrap()),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, (name, law)) in laws.iter().enumerate() {
        let p = square_p_value(law, 100_000 + i as u64);
        pass &= p > BOLTZMANN_P;
        parts.push(format!("{name}: p = {p:.3}"));
    }
    outcome(pass, format!("{} (each > {BOLTZMANN_P}, {BOLTZMANN_SAMPLES} samples)", parts.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 10] = [
        ("exact Loop' distance oracle", criterion_1, 60),
        ("descent identity", criterion_2, 60),
        ("path distance bounds", criterion_3, 120),
        ("Gromov-Hausdorff sandwiches", criterion_4, 300),
        ("Laplace transform of the driver", criterion_5, 120),
        ("largest jump law", criterion_6, 600),
        ("volume growth dimension", criterion_7, 900),
        ("interpolation limits", criterion_8, 900),
        ("bijection round trips", criterion_9, 60),
        ("Boltzmann exactness", criterion_10, 120),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let pass = result.pass && in_time;
        failures += usize::from(!pass);
        println!(
            "{} criterion {:>2} {name}: {} [{:.1}s of {budget}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            result.summary,
            elapsed.as_secs_f64()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
