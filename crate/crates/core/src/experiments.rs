//! Monte-Carlo pipelines behind `looptree experiment`.
//!
//! Replicate `r` always draws from `rng::stream(seed, r)`, so reports do not
//! depend on the number of worker threads.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::statistics::{Data, Median, Statistics};

use crate::dissection::{dual_tree, gh_gap_check, sample_boltzmann};
use crate::excursion_metric::JumpPath;
use crate::gw_tree::{stable_offspring, ConditionedSampler, OffspringLaw, Variant};
use crate::looptree::{build_loop_prime, loop_gh_bound};
use crate::metric_analysis::{
    ball_volume_profile, crt_comparator_tree, dimension_estimate, log_spaced_radii, BallProfile, CircleMetric,
    Metric,
};
use crate::rng::stream;
use crate::stable_law::{beta_root, expected_max_jump, laplace_transform, StableParams, StableSampler};
use crate::stable_law::{DEFAULT_TOL, DEFAULT_TRUNCATION};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Dimension,
    InterpolationCircle,
    InterpolationCrt,
    MaxJump,
    GhSandwich,
    LaplaceCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::Dimension,
        Experiment::InterpolationCircle,
        Experiment::InterpolationCrt,
        Experiment::MaxJump,
        Experiment::GhSandwich,
        Experiment::LaplaceCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Dimension => "dimension",
            Experiment::InterpolationCircle => "interpolation-circle",
            Experiment::InterpolationCrt => "interpolation-crt",
            Experiment::MaxJump => "max-jump",
            Experiment::GhSandwich => "gh-sandwich",
            Experiment::LaplaceCheck => "laplace-check",
        }
    }

    /// Defaults reproducing the desk-scale checks. `n` is the tree size,
    /// except for `gh-sandwich` (largest number of leaves) and
    /// `laplace-check` (number of draws per `λ`).
    pub fn defaults(self) -> ExperimentConfig {
        let base = |alpha, n, replicates, tolerance| ExperimentConfig {
            alpha,
            n,
            replicates,
            seed: 1,
            window: None,
            tolerance,
            k_min: None,
        };
        match self {
            Experiment::Dimension => base(1.5, 1_000_000, 20, 0.15),
            Experiment::InterpolationCircle => base(1.05, 100_000, 50, 0.1),
            Experiment::InterpolationCrt => ExperimentConfig { k_min: Some(CRT_K_MIN), ..base(1.95, 100_000, 50, 0.05) },
            Experiment::MaxJump => base(1.5, 100_000, 500, 0.05),
            Experiment::GhSandwich => base(1.5, 300, 200, 0.0),
            Experiment::LaplaceCheck => base(1.5, 1_000_000, 1, 4.0),
        }
    }

    pub fn run(self, config: &ExperimentConfig) -> Result<Report> {
        config.validate()?;
        match self {
            Experiment::Dimension => dimension(config),
            Experiment::InterpolationCircle => interpolation_circle(config),
            Experiment::InterpolationCrt => interpolation_crt(config),
            Experiment::MaxJump => max_jump(config),
            Experiment::GhSandwich => gh_sandwich(config),
            Experiment::LaplaceCheck => laplace_check(config),
        }
    }
}

impl std::str::FromStr for Experiment {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown experiment {s:?}")))
    }
}

/// Smallest positive offspring count of the law used by `interpolation-crt`.
pub const CRT_K_MIN: u64 = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub alpha: f64,
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
    /// Radius window of the dimension fit; `None` picks
    /// `[2 n^{1/(2α)}, n^{1/α} / 4]`.
    pub window: Option<(f64, f64)>,
    pub tolerance: f64,
    /// Offspring law `μ_k ∝ k^{-1-α}` for `k ≥ k_min`; `None` is the
    /// generic law (`k_min = 1`, or 2 for dissections).
    pub k_min: Option<u64>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        StableParams::new(self.alpha)?;
        if self.n < 2 {
            return Err(Error::InvalidArgument(format!("--n must be at least 2, got {}", self.n)));
        }
        if self.replicates == 0 {
            return Err(Error::InvalidArgument("--replicates must be positive".into()));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::InvalidArgument(format!("--tolerance must be non-negative, got {}", self.tolerance)));
        }
        if let Some((lo, hi)) = self.window {
            if !(lo > 0.0 && hi > lo) {
                return Err(Error::EmptyWindow(lo, hi));
            }
        }
        Ok(())
    }

    fn law(&self) -> Result<OffspringLaw> {
        match self.k_min {
            Some(k) => OffspringLaw::power_law(self.alpha, k),
            None => stable_offspring(self.alpha, Variant::Generic),
        }
    }
}

/// One pass/fail criterion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub statistic: f64,
    pub target: f64,
    pub tolerance: f64,
    /// `abs`: `|statistic - target| ≤ tolerance`; `rel`: the same divided
    /// by `|target|`; `below` / `above`: `statistic` compared to `target`.
    pub rule: &'static str,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, statistic: f64, target: f64, tolerance: f64, rule: &'static str) -> Self {
        let pass = match rule {
            "abs" => (statistic - target).abs() <= tolerance,
            "rel" => (statistic - target).abs() <= tolerance * target.abs(),
            "below" => statistic < target,
            "above" => statistic > target,
            _ => unreachable!("unknown rule {rule}"),
        };
        Check { name: name.into(), statistic, target, tolerance, rule, pass }
    }
}

/// Plot data: named columns of numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub experiment: Experiment,
    pub config: ExperimentConfig,
    /// Mirrors the first check.
    pub statistic: f64,
    pub target: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub details: serde_json::Value,
    #[serde(skip)]
    pub series: Vec<Series>,
}

impl Report {
    fn new(
        experiment: Experiment,
        config: &ExperimentConfig,
        checks: Vec<Check>,
        details: serde_json::Value,
        series: Vec<Series>,
    ) -> Self {
        let first = &checks[0];
        Report {
            experiment,
            config: config.clone(),
            statistic: first.statistic,
            target: first.target,
            tolerance: first.tolerance,
            pass: checks.iter().all(|c| c.pass),
            checks,
            details,
            series,
        }
    }
}

fn dimension(cfg: &ExperimentConfig) -> Result<Report> {
    let law = cfg.law()?;
    let sampler = ConditionedSampler::new(&law, cfg.n)?;
    let n = cfg.n as f64;
    let window = cfg.window.unwrap_or((2.0 * n.powf(0.5 / cfg.alpha), n.powf(1.0 / cfg.alpha) / 4.0));
    let radii = log_spaced_radii(window.0, window.1, 16);
    // One uniform center in each of `replicates` independent trees. Volume
    // growth fluctuates a lot from one tree to the next at this size, so a
    // single tree with many centers would mostly measure that tree.
    let profiles = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(cfg.seed, r as u64);
            let tree = sampler.sample(&mut rng)?;
            let graph = build_loop_prime(&tree);
            ball_volume_profile(graph.graph(), rng.random_range(0..cfg.n), &radii)
        })
        .collect::<Result<Vec<BallProfile>>>()?;
    let fit = dimension_estimate(&profiles, window)?;
    let checks = vec![Check::new("slope", fit.slope, cfg.alpha, cfg.tolerance, "abs")];
    let details = serde_json::json!({ "fit": fit, "scaling": law.scaling(n), "trees": cfg.replicates });
    Ok(Report::new(Experiment::Dimension, cfg, checks, details, vec![profiles_series(&profiles)]))
}

fn profiles_series(profiles: &[BallProfile]) -> Series {
    let rows = profiles
        .iter()
        .enumerate()
        .flat_map(|(tree, p)| {
            p.radii.iter().zip(&p.counts).map(move |(&r, &c)| vec![tree as f64, p.center as f64, r as f64, c as f64])
        })
        .collect();
    Series { name: "profiles".into(), columns: vec!["tree", "center", "r", "count"], rows }
}

/// Upper bound on the Gromov–Hausdorff distance between the looptree of
/// `path` and the circle of length one, from the correspondence matching
/// time `t` with the point at arc length `t` block by block.
///
/// Times are cut into `blocks` runs of consecutive vertices with
/// representatives `r_b` (the first time of each run). For `t, t'` in
/// blocks `a, b` and circle points in the matching arcs, the distortion is at
/// most `|d(r_a, r_b) - d_C(a, b)|` plus twice the largest `d(t, r_b)` over
/// vertex times, plus `2/m` for the arcs and `4/B` for times between
/// vertices (each within `2/B` of the previous vertex by the upper bound
/// `d(s, t) ≤ X_s + X_{t-} - 2 I_s^t`).
pub fn circle_gh_bound(path: &JumpPath, blocks: usize) -> f64 {
    circle_gh_bounds(path, blocks).upper
}

/// Both sides of the Gromov–Hausdorff estimate against the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CircleBounds {
    pub upper: f64,
    /// Half the smallest possible gap between the looptree diameter and ½.
    /// The representatives pin the diameter within `2ρ + 4/B`, with `ρ` the
    /// largest distance from a time to its block representative.
    pub lower: f64,
}

/// See [`circle_gh_bound`].
pub fn circle_gh_bounds(path: &JumpPath, blocks: usize) -> CircleBounds {
    let n = path.len();
    let m = blocks.clamp(3, n.max(3)).min(n);
    let start = |b: usize| b * n / m;
    let radius = (0..m)
        .into_par_iter()
        .map(|b| (start(b)..start(b + 1)).map(|t| path.looptree_distance(start(b), t)).fold(0.0, f64::max))
        .reduce(|| 0.0, f64::max);
    let circle = CircleMetric::new(m.max(3)).expect("at least three blocks");
    let (pairs, diameter) = (0..m)
        .into_par_iter()
        .map(|a| {
            (a + 1..m).fold((0.0, 0.0), |(err, diam): (f64, f64), b| {
                let d = path.looptree_distance(start(a), start(b));
                (err.max((d - circle.dist(a, b)).abs()), diam.max(d))
            })
        })
        .reduce(|| (0.0, 0.0), |x, y| (x.0.max(y.0), x.1.max(y.1)));
    let slack = 2.0 * radius + 4.0 / path.scale();
    let gap = (diameter - 0.5).max(0.5 - (diameter + slack)).max(0.0);
    CircleBounds { upper: (pairs + slack + 2.0 / m as f64) / 2.0, lower: gap / 2.0 }
}

/// Blocks used by [`circle_gh_bound`] in `interpolation-circle`.
pub const CIRCLE_BLOCKS: usize = 1000;

fn interpolation_circle(cfg: &ExperimentConfig) -> Result<Report> {
    let law = cfg.law()?;
    let sampler = ConditionedSampler::new(&law, cfg.n)?;
    let scale = law.scaling(cfg.n as f64);
    let rows = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let path = sampler.sample_path(&mut stream(cfg.seed, r as u64))?;
            let jp = JumpPath::new(&path, scale)?;
            let bounds = circle_gh_bounds(&jp, CIRCLE_BLOCKS);
            Ok(vec![r as f64, jp.max_jump(), bounds.upper, bounds.lower])
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let jumps: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let bounds: Vec<f64> = rows.iter().map(|r| r[2]).collect();
    let median_jump = Data::new(jumps.clone()).median();
    let median_gh = Data::new(bounds.clone()).median();
    let checks = vec![
        Check::new("median max jump", median_jump, 0.9, 0.0, "above"),
        Check::new("median GH bound to the unit circle", median_gh, cfg.tolerance, 0.0, "below"),
    ];
    let details = serde_json::json!({
        "scaling": scale,
        "blocks": CIRCLE_BLOCKS,
        "mean_max_jump": jumps.iter().mean(),
        "max_gh_bound": bounds.iter().copied().fold(0.0, f64::max),
        "median_gh_lower_bound": Data::new(rows.iter().map(|r| r[3]).collect::<Vec<f64>>()).median(),
        "expected_max_jump": expected_max_jump(StableParams::new(cfg.alpha)?),
    });
    let series = Series { name: "replicates".into(), columns: vec!["replicate", "max_jump", "gh_bound", "gh_lower_bound"], rows };
    Ok(Report::new(Experiment::InterpolationCircle, cfg, checks, details, vec![series]))
}

/// Mean of `d(0, U) / X_U` over `draws` uniform vertex times `U` with
/// `X_U > 0` (only the last vertex has `X_U = 0`).
pub fn root_distance_ratio<R: Rng + ?Sized>(path: &JumpPath, draws: usize, rng: &mut R) -> f64 {
    let n = path.len();
    let mut total = 0.0;
    let mut taken = 0;
    while taken < draws {
        let u = rng.random_range(0..n);
        let x = path.value(u);
        if x > 0.0 {
            total += path.distance_from_root(u) / x;
            taken += 1;
        }
    }
    total / draws as f64
}

/// Uniform draws per path in `interpolation-crt`.
pub const RATIO_DRAWS: usize = 1000;

fn interpolation_crt(cfg: &ExperimentConfig) -> Result<Report> {
    let law = cfg.law()?;
    let sampler = ConditionedSampler::new(&law, cfg.n)?;
    let scale = law.scaling(cfg.n as f64);
    let rows = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(cfg.seed, r as u64);
            let path = sampler.sample_path(&mut rng)?;
            let jp = JumpPath::new(&path, scale)?;
            let ratio = root_distance_ratio(&jp, RATIO_DRAWS, &mut rng);
            let height = (0..cfg.n).map(|v| jp.genealogy().depth(v)).max().unwrap_or(0);
            // Mean distance to the root in half the comparator tree, next to
            // the looptree's, over the same number of uniform points.
            let comparator = crt_comparator_tree(cfg.n, &mut rng)?;
            let (mut loop_mean, mut tree_mean) = (0.0, 0.0);
            for _ in 0..RATIO_DRAWS {
                loop_mean += jp.distance_from_root(rng.random_range(0..cfg.n));
                tree_mean += comparator.dist(0, rng.random_range(0..cfg.n)) / 2.0;
            }
            let k = RATIO_DRAWS as f64;
            Ok(vec![r as f64, ratio, height as f64 / scale, loop_mean / k, tree_mean / k])
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let ratios: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let mean_ratio = ratios.iter().mean();
    let checks = vec![Check::new("mean d(0,U)/X_U", mean_ratio, 0.5, cfg.tolerance, "abs")];
    let details = serde_json::json!({
        "scaling": scale,
        "k_min": cfg.k_min.unwrap_or(1),
        "draws_per_path": RATIO_DRAWS,
        "ratio_stderr": ratios.iter().std_dev() / (ratios.len() as f64).sqrt(),
        "mean_height_over_scale": rows.iter().map(|r| r[2]).mean(),
        "mean_root_distance": rows.iter().map(|r| r[3]).mean(),
        "mean_root_distance_half_comparator": rows.iter().map(|r| r[4]).mean(),
    });
    let series = Series {
        name: "replicates".into(),
        columns: vec!["replicate", "ratio", "height_over_scale", "root_distance", "half_comparator_root_distance"],
        rows,
    };
    Ok(Report::new(Experiment::InterpolationCrt, cfg, checks, details, vec![series]))
}

fn max_jump(cfg: &ExperimentConfig) -> Result<Report> {
    let law = cfg.law()?;
    let sampler = ConditionedSampler::new(&law, cfg.n)?;
    let scale = law.scaling(cfg.n as f64);
    let rows = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let path = sampler.sample_path(&mut stream(cfg.seed, r as u64))?;
            // The largest jump of the rescaled path is the largest offspring
            // count over the scale.
            Ok(vec![r as f64, (path.max_step() + 1) as f64 / scale])
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let jumps: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let params = StableParams::new(cfg.alpha)?;
    let beta = beta_root(params, DEFAULT_TRUNCATION, DEFAULT_TOL)?;
    let expected = expected_max_jump(params);
    let mean = jumps.iter().mean();
    let checks = vec![Check::new("mean max jump", mean, expected, cfg.tolerance, "rel")];
    let details = serde_json::json!({
        "beta": beta,
        "scaling": scale,
        "stderr": jumps.iter().std_dev() / (jumps.len() as f64).sqrt(),
    });
    let series = Series { name: "replicates".into(), columns: vec!["replicate", "max_jump"], rows };
    Ok(Report::new(Experiment::MaxJump, cfg, checks, details, vec![series]))
}

fn gh_sandwich(cfg: &ExperimentConfig) -> Result<Report> {
    let law = match cfg.k_min {
        Some(k) => OffspringLaw::power_law(cfg.alpha, k.max(2))?,
        None => stable_offspring(cfg.alpha, Variant::NoUnary)?,
    };
    let max_leaves = cfg.n.max(3);
    let rows = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(cfg.seed, r as u64);
            let leaves = rng.random_range(3..=max_leaves);
            let d = sample_boltzmann(&law, leaves, &mut rng)?;
            let check = gh_gap_check(&d)?;
            let loop_bound = loop_gh_bound(&dual_tree(&d))?;
            Ok(vec![
                r as f64,
                leaves as f64,
                check.height as f64,
                check.observed,
                f64::from(u8::from(check.bound_ok)),
                loop_bound,
            ])
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let violations = rows.iter().filter(|r| r[4] == 0.0).count();
    let worst_slack = rows.iter().map(|r| r[3] - (r[2] + 2.0)).fold(f64::NEG_INFINITY, f64::max);
    let worst_loop = rows.iter().map(|r| r[5]).fold(0.0, f64::max);
    let checks = vec![
        Check::new("dissection bound violations", violations as f64, 0.0, cfg.tolerance, "abs"),
        Check::new("largest Loop vs Loop' bound", worst_loop, 2.0, 0.0, "abs").or_below(),
    ];
    let details = serde_json::json!({ "worst_observed_minus_bound": worst_slack });
    let series = Series {
        name: "dissections".into(),
        columns: vec!["replicate", "leaves", "height", "observed", "bound_ok", "loop_gh_bound"],
        rows,
    };
    Ok(Report::new(Experiment::GhSandwich, cfg, checks, details, vec![series]))
}

impl Check {
    /// Turns an `abs` check against `target` into `statistic ≤ target`.
    fn or_below(mut self) -> Self {
        self.rule = "at-most";
        self.pass = self.statistic <= self.target;
        self
    }
}

/// Draws per parallel chunk in `laplace-check`.
const LAPLACE_CHUNK: usize = 1 << 16;

/// Monte-Carlo mean and standard error of `exp(-λ X_1)` from `draws`
/// samples, chunked over substreams `first_stream, first_stream + 1, ...`.
pub fn laplace_estimate(params: StableParams, lambda: f64, draws: usize, seed: u64, first_stream: u64) -> (f64, f64) {
    let sampler = StableSampler::new(params);
    let chunks = draws.div_ceil(LAPLACE_CHUNK);
    let (sum, sum_sq) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(seed, first_stream + c as u64);
            let len = LAPLACE_CHUNK.min(draws - c * LAPLACE_CHUNK);
            (0..len).fold((0.0, 0.0), |(s, q), _| {
                let y = (-lambda * sampler.sample_unit(&mut rng)).exp();
                (s + y, q + y * y)
            })
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let k = draws as f64;
    let mean = sum / k;
    let var = (sum_sq / k - mean * mean).max(0.0) * k / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// `λ` values of `laplace-check`.
pub const LAPLACE_LAMBDAS: [f64; 3] = [0.1, 0.5, 1.0];

fn laplace_check(cfg: &ExperimentConfig) -> Result<Report> {
    let params = StableParams::new(cfg.alpha)?;
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for (i, &lambda) in LAPLACE_LAMBDAS.iter().enumerate() {
        let (mean, se) = laplace_estimate(params, lambda, cfg.n, cfg.seed, (i as u64) << 32);
        let exact = laplace_transform(params, 1.0, lambda);
        let z = (mean - exact) / se;
        checks.push(Check::new(&format!("standard errors off at lambda = {lambda}"), z, 0.0, cfg.tolerance, "abs"));
        rows.push(vec![lambda, mean, se, exact, z]);
    }
    let series = Series { name: "lambdas".into(), columns: vec!["lambda", "estimate", "stderr", "exact", "z"], rows };
    Ok(Report::new(Experiment::LaplaceCheck, cfg, checks, serde_json::json!({}), vec![series]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(e: Experiment) -> ExperimentConfig {
        ExperimentConfig { n: 2000, replicates: 12, ..e.defaults() }
    }

    #[test]
    fn names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
            assert_eq!(serde_json::to_value(e).unwrap(), e.name());
        }
        assert!("nope".parse::<Experiment>().is_err());
    }

    #[test]
    fn validation_catches_bad_configs() {
        let good = Experiment::MaxJump.defaults();
        assert!(good.validate().is_ok());
        assert!(ExperimentConfig { alpha: 2.0, ..good.clone() }.validate().is_err());
        assert!(ExperimentConfig { replicates: 0, ..good.clone() }.validate().is_err());
        assert!(ExperimentConfig { window: Some((5.0, 1.0)), ..good }.validate().is_err());
    }

    #[test]
    fn reports_are_reproducible() {
        let cfg = small(Experiment::MaxJump);
        let a = Experiment::MaxJump.run(&cfg).unwrap();
        let b = Experiment::MaxJump.run(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.series[0].rows.len(), 12);
        let other = Experiment::MaxJump.run(&ExperimentConfig { seed: 2, ..cfg }).unwrap();
        assert_ne!(a.statistic, other.statistic);
    }

    #[test]
    fn small_runs_of_every_pipeline() {
        for e in Experiment::ALL {
            let cfg = match e {
                Experiment::GhSandwich => ExperimentConfig { n: 40, replicates: 5, ..e.defaults() },
                Experiment::LaplaceCheck => ExperimentConfig { n: 100_000, ..e.defaults() },
                Experiment::Dimension => ExperimentConfig { n: 20_000, replicates: 10, ..e.defaults() },
                _ => small(e),
            };
            let report = e.run(&cfg).unwrap();
            assert_eq!(report.experiment, e);
            assert!(!report.checks.is_empty());
            assert!(report.statistic.is_finite(), "{e:?}");
            let json = serde_json::to_value(&report).unwrap();
            assert!(json.get("pass").is_some());
            assert!(report.series.iter().all(|s| s.rows.iter().all(|r| r.len() == s.columns.len())));
        }
    }

    #[test]
    fn circle_bound_of_a_single_loop_is_small() {
        // A root with many leaf children is a single cycle; rescaled by its
        // length it is within a few blocks of the unit circle.
        let n = 2001;
        let mut steps = vec![-1i64; n];
        steps[0] = n as i64 - 2;
        let path = crate::gw_tree::LukasiewiczPath::new(steps).unwrap();
        let jp = JumpPath::new(&path, (n - 1) as f64).unwrap();
        let bound = circle_gh_bound(&jp, 200);
        assert!(bound < 0.02, "{bound}");
        let both = circle_gh_bounds(&jp, 200);
        assert!(both.lower <= both.upper && both.lower < 0.01);
    }
}
