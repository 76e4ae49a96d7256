//! The looptree pseudo-distance of a jump path, evaluated exactly on a
//! rescaled Lukasiewicz path.
//!
//! A path of `n` steps becomes a càdlàg function on `[0, 1]`: just before
//! time `k/n` it sits at `W_k / B`, at `k/n` it jumps by `ΔW_k / B` (the
//! number of children of vertex `k`), and it then drifts linearly down to
//! `W_{k+1} / B`. Every descent quantity is then an integer divided by `B`:
//! for an ancestor `s` of `t`, `x_s^t = (min_{s<l≤t} W_l - W_s) / B`, one
//! less than the discrete position, and `x_t^t = Δ_t`. Distances are
//! computed in these integer units and divided by `B` at the end, so they
//! scale exactly with `1/B`.

use std::io::Write;

use crate::gw_tree::{Genealogy, LukasiewiczPath};
use crate::metric_analysis::Metric;
use crate::{Error, Result};

/// A rescaled Lukasiewicz path with the genealogy needed for distances.
#[derive(Clone, Debug)]
pub struct JumpPath {
    n: usize,
    scale: f64,
    times: Vec<f64>,
    values: Vec<f64>,
    jumps: Vec<f64>,
    genealogy: Genealogy,
    from_root: Vec<i64>,
}

/// `δ(a, b)` on a cycle of length `len`, all in integer units.
fn cycle_distance(a: i64, b: i64, len: i64) -> i64 {
    let d = (a - b).abs();
    d.min(len - d)
}

/// Time `k/n`, value `W_k/B` and jump `ΔW_k/B` (zero at the final time).
pub fn rescale(path: &LukasiewiczPath, scale: f64) -> Result<JumpPath> {
    JumpPath::new(path, scale)
}

impl JumpPath {
    pub fn new(path: &LukasiewiczPath, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {scale}")));
        }
        let n = path.len();
        let genealogy = Genealogy::new(path);
        let w = genealogy.values();
        let times = (0..=n).map(|k| k as f64 / n as f64).collect();
        let values = w.iter().map(|&v| v as f64 / scale).collect();
        let jumps = (0..=n).map(|k| if k < n { genealogy.children(k) as f64 / scale } else { 0.0 }).collect();
        let mut from_root = vec![0i64; n];
        for v in 1..n {
            let p = genealogy.parent(v).expect("non-root vertex");
            from_root[v] = from_root[p] + cycle_distance(0, genealogy.position(v) - 1, genealogy.children(p));
        }
        Ok(JumpPath { n, scale, times, values, jumps, genealogy, from_root })
    }

    /// Number of vertex times `0, 1/n, ..., (n-1)/n`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// `W_k / B` for `k = 0..=n`: the level just before each jump.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn jumps(&self) -> &[f64] {
        &self.jumps
    }

    pub fn genealogy(&self) -> &Genealogy {
        &self.genealogy
    }

    /// `X_{k/n-}`.
    pub fn left_limit(&self, k: usize) -> f64 {
        self.values[k]
    }

    /// `X_{k/n}`, after the jump.
    pub fn value(&self, k: usize) -> f64 {
        self.values[k] + self.jumps[k]
    }

    pub fn max_jump(&self) -> f64 {
        self.jumps.iter().copied().fold(0.0, f64::max)
    }

    /// `s ≼ t` in the genealogical order.
    pub fn is_ancestor(&self, s: usize, t: usize) -> bool {
        self.genealogy.is_ancestor(s, t)
    }

    /// `I_s^t = inf_{[s, t]} X` for `s ≤ t`.
    pub fn inf_between(&self, s: usize, t: usize) -> f64 {
        assert!(s <= t);
        if s == t {
            self.value(s)
        } else {
            self.genealogy.min_value(s + 1, t) as f64 / self.scale
        }
    }

    fn x_units(&self, s: usize, t: usize) -> i64 {
        if s == t {
            self.genealogy.children(s)
        } else {
            self.genealogy.min_value(s + 1, t) - self.genealogy.values()[s]
        }
    }

    /// `x_s^t = I_s^t - X_{s-}` when `s ≼ t`.
    pub fn x(&self, s: usize, t: usize) -> Option<f64> {
        self.is_ancestor(s, t).then(|| self.x_units(s, t) as f64 / self.scale)
    }

    /// `u_s^t = x_s^t / Δ_s` when `s ≼ t` and `s` is a jump time.
    pub fn u(&self, s: usize, t: usize) -> Option<f64> {
        let delta = self.genealogy.children(s);
        (delta > 0 && self.is_ancestor(s, t)).then(|| self.x_units(s, t) as f64 / delta as f64)
    }

    /// `B · d(s, t)`, an integer.
    pub fn distance_units(&self, s: usize, t: usize) -> i64 {
        if s == t {
            return 0;
        }
        let g = &self.genealogy;
        let jn = g.junction(s, t);
        let m = jn.ancestor;
        let side = |v: usize, child: Option<usize>| match child {
            Some(c) => (g.position(c) - 1, self.from_root[v] - self.from_root[c]),
            None => (g.children(m), 0),
        };
        let (xs, ds) = side(s, jn.toward_first);
        let (xt, dt) = side(t, jn.toward_second);
        cycle_distance(xs, xt, g.children(m)) + ds + dt
    }

    /// `d(s, t) = δ_{s∧t}(x_{s∧t}^s, x_{s∧t}^t) + d₀(s∧t, s) + d₀(s∧t, t)`.
    pub fn looptree_distance(&self, s: usize, t: usize) -> f64 {
        self.distance_units(s, t) as f64 / self.scale
    }

    /// `d(0, t) = Σ_{s ≼ t} Δ_s min(u_s^t, 1 - u_s^t)`, summed along the
    /// ancestral line in floating point.
    pub fn distance_from_root(&self, t: usize) -> f64 {
        let g = &self.genealogy;
        let mut total = 0.0;
        let mut v = t;
        while let Some(p) = g.parent(v) {
            let delta = g.children(p) as f64;
            let u = (g.position(v) - 1) as f64 / delta;
            total += delta * u.min(1.0 - u);
            v = p;
        }
        total / self.scale
    }

    /// Number of loops whose `δ` term enters `d(s, t)`: the junction loop
    /// and one per strict ancestor below it on each side. The continuous
    /// cycles are one unit shorter than the discrete `Loop′` cycles, so
    /// `|B · d(s, t) - d_{Loop′}(s, t)|` is at most this count.
    pub fn crossed_loops(&self, s: usize, t: usize) -> usize {
        if s == t {
            return 0;
        }
        let g = &self.genealogy;
        let m = g.junction(s, t).ancestor;
        let below = |v: usize| (g.depth(v) - g.depth(m)).saturating_sub(1);
        1 + below(s) + below(t)
    }

    /// `time,value,jump` rows.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "time,value,jump")?;
        for k in 0..=self.n {
            writeln!(w, "{},{},{}", self.times[k], self.values[k], self.jumps[k])?;
        }
        Ok(())
    }
}

impl Metric for JumpPath {
    fn len(&self) -> usize {
        self.n
    }
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.looptree_distance(i, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gw_tree::{all_plane_trees, sample_conditioned_tree, stable_offspring, PlaneTree, Variant};
    use crate::looptree::LoopPrimeMetric;
    use crate::rng::stream;
    use proptest::prelude::*;
    use rand::Rng;

    fn sample_path(alpha: f64, n: usize, seed: u64) -> LukasiewiczPath {
        let law = stable_offspring(alpha, Variant::Generic).unwrap();
        sample_conditioned_tree(&law, n, &mut stream(seed, 0)).unwrap().encode()
    }

    #[test]
    fn rescale_example() {
        let path = PlaneTree::new(vec![2, 2, 0, 0, 0]).unwrap().encode();
        let j = rescale(&path, 1.0).unwrap();
        assert_eq!(j.values(), &[0.0, 1.0, 2.0, 1.0, 0.0, -1.0]);
        assert_eq!(j.times(), &[0.0, 0.2, 0.4, 0.6, 0.8, 1.0]);
        assert_eq!(j.jumps(), &[2.0, 2.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(j.value(1), 3.0);
        assert_eq!(j.max_jump(), 2.0);
        assert_eq!(j.looptree_distance(3, 3), 0.0);
        assert_eq!(j.distance_from_root(0), 0.0);
        assert!(rescale(&path, 0.0).is_err());
    }

    #[test]
    fn max_jump_is_the_largest_offspring_count() {
        let path = sample_path(1.5, 500, 1);
        let j = rescale(&path, 7.0).unwrap();
        assert_eq!(j.max_jump(), (path.max_step() + 1) as f64 / 7.0);
        let small = LukasiewiczPath::new(vec![0, 6, 1, -1, -1, -1, -1, -1, -1, -1, -1]).unwrap();
        let j = rescale(&small, 10.0).unwrap();
        assert_eq!(j.max_jump(), 0.7);
    }

    #[test]
    fn doubling_the_scale_halves_distances() {
        let path = sample_path(1.5, 300, 2);
        let a = rescale(&path, 5.0).unwrap();
        let b = rescale(&path, 10.0).unwrap();
        let mut rng = stream(2, 1);
        for _ in 0..500 {
            let (s, t) = (rng.random_range(0..300), rng.random_range(0..300));
            assert_eq!(b.looptree_distance(s, t), a.looptree_distance(s, t) / 2.0);
        }
        assert_eq!(b.values()[17], a.values()[17] / 2.0);
    }

    #[test]
    fn ancestor_case_is_a_descent_sum() {
        for t in all_plane_trees(7) {
            let path = t.encode();
            let j = rescale(&path, 1.0).unwrap();
            for s in 0..7 {
                for e in s..7 {
                    if j.is_ancestor(s, e) {
                        let direct: f64 = (s..=e)
                            .filter(|&r| j.is_ancestor(s, r) && j.is_ancestor(r, e))
                            .map(|r| {
                                let (x, delta) = (j.x(r, e).unwrap(), j.jumps()[r]);
                                x.min(delta - x)
                            })
                            .sum();
                        assert_eq!(j.looptree_distance(s, e), direct, "{t:?} {s} {e}");
                    }
                }
            }
        }
    }

    #[test]
    fn close_to_loop_prime_up_to_crossed_loops() {
        for seed in 0..20 {
            let path = sample_path(1.5, 300, seed);
            let j = rescale(&path, 1.0).unwrap();
            let lp = LoopPrimeMetric::new(&path);
            for s in (0..300).step_by(7) {
                for t in 0..300 {
                    let gap = (j.distance_units(s, t) - lp.distance(s, t)).unsigned_abs() as usize;
                    assert!(gap <= j.crossed_loops(s, t));
                }
            }
        }
    }

    #[test]
    fn root_distance_formulas_agree() {
        for seed in 0..100 {
            let path = sample_path(1.6, 200, 100 + seed);
            let j = rescale(&path, 3.3).unwrap();
            for t in 0..200 {
                assert!((j.distance_from_root(t) - j.looptree_distance(0, t)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn csv_export() {
        let path = PlaneTree::new(vec![1, 0]).unwrap().encode();
        let mut out = Vec::new();
        rescale(&path, 2.0).unwrap().write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "time,value,jump\n0,0,0.5\n0.5,0,0\n1,-0.5,0\n");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn pseudo_metric_axioms(seed in any::<u64>(), n in 2usize..200) {
            let path = sample_path(1.3, n, seed);
            let j = rescale(&path, 1.0).unwrap();
            let mut rng = stream(seed, 9);
            for _ in 0..100 {
                let [a, b, c]: [usize; 3] = std::array::from_fn(|_| rng.random_range(0..n));
                prop_assert_eq!(j.distance_units(a, a), 0);
                prop_assert_eq!(j.distance_units(a, b), j.distance_units(b, a));
                prop_assert!(j.distance_units(a, c) <= j.distance_units(a, b) + j.distance_units(b, c));
            }
        }
    }
}
