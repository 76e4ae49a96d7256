//! Finite metric spaces: graphs and BFS, correspondence bounds on the
//! Gromov–Hausdorff distance, reference spaces, and volume-growth fits.

use std::collections::VecDeque;
use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::gw_tree::{ConditionedSampler, Genealogy, LukasiewiczPath, OffspringLaw};
use crate::{Error, Result};

/// Simple undirected graph in compressed adjacency form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Graph {
    /// Builds the simple graph spanned by `edges`; loops and repeated edges
    /// are dropped.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for (u, v) in edges {
            assert!(u < vertex_count && v < vertex_count, "edge ({u}, {v}) out of range");
            if u != v {
                pairs.push((u as u32, v as u32));
                pairs.push((v as u32, u as u32));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut offsets = vec![0usize; vertex_count + 1];
        for &(u, _) in &pairs {
            offsets[u as usize + 1] += 1;
        }
        for v in 0..vertex_count {
            offsets[v + 1] += offsets[v];
        }
        Graph { offsets, targets: pairs.into_iter().map(|(_, v)| v).collect() }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of (simple) edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.vertex_count())
            .flat_map(|u| self.neighbors(u).iter().map(move |&v| (u, v as usize)))
            .filter(|(u, v)| u < v)
            .collect()
    }
}

const UNREACHED: u32 = u32::MAX;

/// BFS from `source`, stopping at distance `limit`; unreached vertices keep
/// `u32::MAX`.
fn bfs_truncated(graph: &Graph, source: usize, limit: u32) -> Vec<u32> {
    let mut dist = vec![UNREACHED; graph.vertex_count()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source as u32);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        if du == limit {
            continue;
        }
        for &v in graph.neighbors(u as usize) {
            if dist[v as usize] == UNREACHED {
                dist[v as usize] = du + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Unit-length shortest-path distances from `source`.
pub fn bfs_distances(graph: &Graph, source: usize) -> Result<Vec<u32>> {
    let dist = bfs_truncated(graph, source, UNREACHED);
    match dist.iter().position(|&d| d == UNREACHED) {
        Some(v) => Err(Error::Disconnected(v)),
        None => Ok(dist),
    }
}

/// Distance rows from each source, computed in parallel.
pub fn bfs_metric(graph: &Graph, sources: &[usize]) -> Result<Vec<Vec<u32>>> {
    sources.par_iter().map(|&s| bfs_distances(graph, s)).collect()
}

/// The full graph metric as a dense matrix.
pub fn graph_metric(graph: &Graph) -> Result<FiniteMetric> {
    let n = graph.vertex_count();
    let sources: Vec<usize> = (0..n).collect();
    let rows = bfs_metric(graph, &sources)?;
    Ok(FiniteMetric { n, d: rows.into_iter().flatten().map(f64::from).collect() })
}

/// A metric on `0..len()`.
pub trait Metric {
    fn len(&self) -> usize;
    fn dist(&self, i: usize, j: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn diameter(&self) -> f64 {
        let n = self.len();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| self.dist(i, j)).fold(0.0, f64::max)
    }
}

impl<M: Metric + ?Sized> Metric for &M {
    fn len(&self) -> usize {
        (**self).len()
    }
    fn dist(&self, i: usize, j: usize) -> f64 {
        (**self).dist(i, j)
    }
}

/// Dense distance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetric {
    n: usize,
    d: Vec<f64>,
}

impl FiniteMetric {
    /// Row-major `n × n` matrix; checks the diagonal, symmetry and signs.
    /// The triangle inequality costs `O(n³)` and is checked separately by
    /// [`FiniteMetric::check_triangle`].
    pub fn new(n: usize, d: Vec<f64>) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::InvalidArgument(format!("{} entries for {n} points", d.len())));
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(Error::InvalidArgument(format!("d({i}, {i}) = {}", d[i * n + i])));
            }
            for j in 0..i {
                let (a, b) = (d[i * n + j], d[j * n + i]);
                if a != b || !(a >= 0.0) {
                    return Err(Error::InvalidArgument(format!("d({i}, {j}) = {a} but d({j}, {i}) = {b}")));
                }
            }
        }
        Ok(FiniteMetric { n, d })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..i {
                let v = f(i, j);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Self::new(n, d)
    }

    pub fn of<M: Metric>(metric: &M) -> Self {
        Self::from_fn(metric.len(), |i, j| metric.dist(i, j)).expect("a Metric yields a valid matrix")
    }

    /// First triple violating the triangle inequality beyond `tol`.
    pub fn check_triangle(&self, tol: f64) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.dist(i, k) > self.dist(i, j) + self.dist(j, k) + tol {
                        return Err(Error::InvalidArgument(format!("triangle inequality fails at ({i}, {j}, {k})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        FiniteMetric { n: self.n, d: self.d.iter().map(|x| x * factor).collect() }
    }

    pub fn write_matrix_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.dist(i, j).to_string()).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// `i,j,d` rows for `i < j`.
    pub fn write_triplets_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "i,j,d")?;
        for i in 0..self.n {
            for j in i + 1..self.n {
                writeln!(w, "{i},{j},{}", self.dist(i, j))?;
            }
        }
        Ok(())
    }
}

impl Metric for FiniteMetric {
    fn len(&self) -> usize {
        self.n
    }
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }
}

/// Half the distortion of `corr`, an upper bound on the Gromov–Hausdorff
/// distance between `x` and `y`.
pub fn gh_upper_bound<X: Metric + Sync, Y: Metric + Sync>(corr: &[(usize, usize)], x: &X, y: &Y) -> Result<f64> {
    let mut seen_x = vec![false; x.len()];
    let mut seen_y = vec![false; y.len()];
    for &(a, b) in corr {
        if a >= x.len() || b >= y.len() {
            return Err(Error::InvalidArgument(format!("pair ({a}, {b}) out of range")));
        }
        seen_x[a] = true;
        seen_y[b] = true;
    }
    let uncovered = |seen: &[bool]| seen.iter().enumerate().filter(|(_, &s)| !s).map(|(i, _)| i).collect::<Vec<_>>();
    let (left, right) = (uncovered(&seen_x), uncovered(&seen_y));
    if !left.is_empty() || !right.is_empty() {
        return Err(Error::NotACorrespondence { left, right });
    }
    let distortion = corr
        .par_iter()
        .enumerate()
        .map(|(k, &(a, b))| {
            corr[k + 1..].iter().map(|&(c, e)| (x.dist(a, c) - y.dist(b, e)).abs()).fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(distortion / 2.0)
}

/// `|diam X - diam Y| / 2`, a lower bound on the Gromov–Hausdorff distance.
pub fn diameter_lower_bound<X: Metric, Y: Metric>(x: &X, y: &Y) -> f64 {
    (x.diameter() - y.diameter()).abs() / 2.0
}

/// `m` equally spaced points on a circle of length one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircleMetric {
    m: usize,
}

impl CircleMetric {
    pub fn new(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidArgument(format!("a circle needs at least 3 points, got {m}")));
        }
        Ok(CircleMetric { m })
    }
}

impl Metric for CircleMetric {
    fn len(&self) -> usize {
        self.m
    }
    fn dist(&self, i: usize, j: usize) -> f64 {
        let k = i.abs_diff(j);
        k.min(self.m - k) as f64 / self.m as f64
    }
}

pub fn circle_metric(m: usize) -> Result<FiniteMetric> {
    Ok(FiniteMetric::of(&CircleMetric::new(m)?))
}

/// Tree distance `(h_i + h_j - 2 h_{i∧j}) / scale` between the vertices of
/// a plane tree, answered in constant time.
#[derive(Clone, Debug)]
pub struct HeightMetric {
    genealogy: Genealogy,
    scale: f64,
}

impl HeightMetric {
    pub fn new(path: &LukasiewiczPath, scale: f64) -> Self {
        HeightMetric { genealogy: Genealogy::new(path), scale }
    }

    pub fn graph_distance(&self, i: usize, j: usize) -> usize {
        let m = self.genealogy.junction(i, j).ancestor;
        self.genealogy.depth(i) + self.genealogy.depth(j) - 2 * self.genealogy.depth(m)
    }
}

impl Metric for HeightMetric {
    fn len(&self) -> usize {
        self.genealogy.len()
    }
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.graph_distance(i, j) as f64 / self.scale
    }
}

/// Critical geometric offspring law, `μ_k = 2^{-k-1}` (variance 2),
/// truncated where the remaining mass is below double precision.
pub fn geometric_law() -> OffspringLaw {
    let mut probs: Vec<f64> = (0..=60).map(|k| 0.5f64.powi(k + 1)).collect();
    probs[0] += 0.5f64.powi(61);
    OffspringLaw::from_probabilities(probs).expect("geometric law is critical")
}

/// Height metric of a size-`m` geometric Galton–Watson tree scaled by
/// `1/√m`. As `m` grows it approximates the tree coded by `√2·e`, with `e`
/// the normalized Brownian excursion, which is the limit of the stable
/// looptrees as `α ↑ 2` up to the factor ½.
pub fn crt_comparator_tree<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<HeightMetric> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("comparator needs at least 2 points, got {m}")));
    }
    let tree = ConditionedSampler::new(&geometric_law(), m)?.sample(rng)?;
    Ok(HeightMetric::new(&tree.encode(), (m as f64).sqrt()))
}

/// Dense version of [`crt_comparator_tree`].
pub fn crt_comparator<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<FiniteMetric> {
    Ok(FiniteMetric::of(&crt_comparator_tree(m, rng)?))
}

/// Ball sizes around one center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallProfile {
    pub center: usize,
    pub radii: Vec<u32>,
    pub counts: Vec<u64>,
}

/// Number of vertices within each radius of `center`, from one BFS cut at
/// the largest radius.
pub fn ball_volume_profile(graph: &Graph, center: usize, radii: &[u32]) -> Result<BallProfile> {
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("radii must increase".into()));
    }
    let limit = radii.last().copied().unwrap_or(0);
    let dist = bfs_truncated(graph, center, limit);
    let mut hist = vec![0u64; limit as usize + 1];
    for d in dist.into_iter().filter(|&d| d != UNREACHED) {
        hist[d as usize] += 1;
    }
    for r in 1..hist.len() {
        hist[r] += hist[r - 1];
    }
    Ok(BallProfile { center, radii: radii.to_vec(), counts: radii.iter().map(|&r| hist[r as usize]).collect() })
}

/// Profiles from many centers, in parallel.
pub fn ball_volume_profiles(graph: &Graph, centers: &[usize], radii: &[u32]) -> Result<Vec<BallProfile>> {
    centers.par_iter().map(|&c| ball_volume_profile(graph, c, radii)).collect()
}

/// About `count` integer radii spread geometrically over `[lo, hi]`.
pub fn log_spaced_radii(lo: f64, hi: f64, count: usize) -> Vec<u32> {
    let (lo, hi) = (lo.max(1.0), hi.max(1.0));
    let mut radii: Vec<u32> = (0..count)
        .map(|k| {
            let t = if count > 1 { k as f64 / (count - 1) as f64 } else { 0.0 };
            (lo * (hi / lo).powf(t)).round() as u32
        })
        .collect();
    radii.dedup();
    radii
}

/// Least-squares slope of `log count` against `log r`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionFit {
    pub slope: f64,
    /// Standard error of the pooled regression; points from one center are
    /// correlated, so treat it as a lower bound on the real uncertainty.
    pub stderr: f64,
    pub window: (f64, f64),
    pub centers: usize,
    pub points: usize,
}

/// Minimum number of centers [`dimension_estimate`] accepts.
pub const MIN_CENTERS: usize = 10;

pub fn dimension_estimate(profiles: &[BallProfile], window: (f64, f64)) -> Result<DimensionFit> {
    if profiles.len() < MIN_CENTERS {
        return Err(Error::InvalidArgument(format!(
            "{} centers given, at least {MIN_CENTERS} needed",
            profiles.len()
        )));
    }
    let (lo, hi) = window;
    let points: Vec<(f64, f64)> = profiles
        .iter()
        .flat_map(|p| p.radii.iter().zip(&p.counts))
        .filter(|(&r, _)| r as f64 >= lo && r as f64 <= hi && r > 0)
        .map(|(&r, &c)| ((r as f64).ln(), (c as f64).ln()))
        .collect();
    let distinct_x = {
        let mut xs: Vec<u64> = points.iter().map(|p| p.0.to_bits()).collect();
        xs.sort_unstable();
        xs.dedup();
        xs.len()
    };
    if distinct_x < 2 || points.len() < 3 {
        return Err(Error::EmptyWindow(lo, hi));
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let ssr: f64 = points.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    let stderr = (ssr / (k - 2.0) / sxx).sqrt();
    Ok(DimensionFit { slope, stderr, window, centers: profiles.len(), points: points.len() })
}

/// `center,r,count` rows.
pub fn write_profiles_csv<W: Write>(profiles: &[BallProfile], w: &mut W) -> Result<()> {
    writeln!(w, "center,r,count")?;
    for p in profiles {
        for (r, c) in p.radii.iter().zip(&p.counts) {
            writeln!(w, "{},{r},{c}", p.center)?;
        }
    }
    Ok(())
}
