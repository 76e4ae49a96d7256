//! Dissections of polygons, their dual trees, Boltzmann sampling and the
//! comparison with `Loop(τ)`.
//!
//! The polygon `P_N` has vertices `0..N` counterclockwise and root side
//! `(0, 1)`. Internally vertex `v` gets the interval coordinate
//! `(v + N - 1) mod N`, which puts the root side at `(N - 1, 0)` and turns
//! every other side or chord into a proper subinterval `[a, b]` of
//! `[0, N - 1]`. Dual tree vertices are the edges of the dissection other
//! than the root side, each standing for the face it cuts off away from the
//! root; a face with `k` sides thus becomes a vertex with `k - 1` children,
//! and side `(p, p + 1)` becomes the `p`-th leaf.

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::gw_tree::{cyclic_shift, tree_stats, OffspringLaw, PlaneTree};
use crate::looptree::build_loop;
use crate::metric_analysis::{gh_upper_bound, graph_metric, Graph};
use crate::special::ln_gamma;
use crate::{Error, Result};

/// A dissection of `P_{n_sides}` by non-crossing chords.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDissection")]
pub struct Dissection {
    n_sides: usize,
    chords: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
struct RawDissection {
    n_sides: usize,
    chords: Vec<(usize, usize)>,
}

impl TryFrom<RawDissection> for Dissection {
    type Error = Error;
    fn try_from(raw: RawDissection) -> Result<Self> {
        Dissection::new(raw.n_sides, raw.chords)
    }
}

impl Dissection {
    /// Validates and normalizes the chords to sorted pairs `(i, j)`, `i < j`.
    pub fn new(n_sides: usize, chords: Vec<(usize, usize)>) -> Result<Self> {
        if n_sides < 3 {
            return Err(Error::InvalidDissection(format!("a polygon needs 3 sides, got {n_sides}")));
        }
        let mut normalized = Vec::with_capacity(chords.len());
        for (i, j) in chords {
            let (a, b) = (i.min(j), i.max(j));
            if b >= n_sides {
                return Err(Error::InvalidDissection(format!("chord ({i}, {j}) leaves P_{n_sides}")));
            }
            if b - a < 2 || (a == 0 && b == n_sides - 1) {
                return Err(Error::InvalidDissection(format!("({i}, {j}) is not a diagonal")));
            }
            normalized.push((a, b));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidDissection(format!("chord {:?} is repeated", w[0])));
        }
        check_crossings(&normalized)?;
        Ok(Dissection { n_sides, chords: normalized })
    }

    pub fn n_sides(&self) -> usize {
        self.n_sides
    }

    pub fn chords(&self) -> &[(usize, usize)] {
        &self.chords
    }

    /// Sides then chords, as polygon-vertex pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n_sides;
        (0..n).map(|v| (v, (v + 1) % n)).chain(self.chords.iter().copied()).collect()
    }

    /// The dissection as a graph with unit edges.
    pub fn graph(&self) -> Graph {
        Graph::from_edges(self.n_sides, self.edges())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "n_sides": self.n_sides, "chords": self.chords })
    }

    /// Polygon on the unit circle with its chords; vertex `v` sits at angle
    /// `2πv / N`.
    pub fn to_svg(&self) -> String {
        let n = self.n_sides;
        let point = |v: usize| {
            let a = TAU * v as f64 / n as f64;
            (400.0 + 380.0 * a.cos(), 400.0 - 380.0 * a.sin())
        };
        let mut svg = String::from("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\">\n");
        let outline: Vec<String> = (0..n).map(|v| {
            let (x, y) = point(v);
            format!("{x:.3},{y:.3}")
        }).collect();
        svg.push_str(&format!(
            "<polygon points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n",
            outline.join(" ")
        ));
        for &(i, j) in &self.chords {
            let ((x1, y1), (x2, y2)) = (point(i), point(j));
            svg.push_str(&format!(
                "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"steelblue\" stroke-width=\"1\"/>\n"
            ));
        }
        svg.push_str("</svg>\n");
        svg
    }
}

/// Intervals sorted by left end ascending, right end descending, scanned
/// with a stack of open intervals.
fn check_crossings(chords: &[(usize, usize)]) -> Result<()> {
    let mut order: Vec<(usize, usize)> = chords.to_vec();
    order.sort_unstable_by_key(|&(a, b)| (a, std::cmp::Reverse(b)));
    let mut open: Vec<(usize, usize)> = Vec::new();
    for &(c, d) in &order {
        while open.last().is_some_and(|&(_, b)| b <= c) {
            open.pop();
        }
        if let Some(&(a, b)) = open.last() {
            if d > b {
                return Err(Error::CrossingChords(a, b, c, d));
            }
        }
        open.push((c, d));
    }
    Ok(())
}

/// The dual tree of `d`.
pub fn dual_tree(d: &Dissection) -> PlaneTree {
    dual_tree_with_edges(d).0
}

/// The dual tree together with the dissection edge of every tree vertex
/// (the root side for the root).
pub fn dual_tree_with_edges(d: &Dissection) -> (PlaneTree, Vec<(usize, usize)>) {
    let n = d.n_sides;
    let to_interval = |v: usize| (v + n - 1) % n;
    let to_vertex = |p: usize| (p + 1) % n;
    // Right ends of the chords leaving each interval coordinate, ascending.
    let mut reach: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(i, j) in &d.chords {
        let (a, b) = (to_interval(i).min(to_interval(j)), to_interval(i).max(to_interval(j)));
        reach[a].push(b);
    }
    for r in reach.iter_mut() {
        r.sort_unstable();
    }
    let mut counts = Vec::new();
    let mut edges = Vec::new();
    // Depth-first: emit the face below (a, b), then its children in order.
    let mut stack = vec![(0usize, n - 1)];
    while let Some((a, b)) = stack.pop() {
        edges.push((to_vertex(a), to_vertex(b)));
        if b == a + 1 {
            counts.push(0);
            continue;
        }
        let mut kids = Vec::new();
        let mut cur = a;
        while cur < b {
            let limit = if cur == a { b - 1 } else { b };
            let at = reach[cur].partition_point(|&e| e <= limit);
            let next = if at > 0 { reach[cur][at - 1] } else { cur + 1 };
            kids.push((cur, next));
            cur = next;
        }
        counts.push(kids.len());
        stack.extend(kids.into_iter().rev());
    }
    let edges = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
    (PlaneTree::new(counts).expect("dual of a dissection is a tree"), edges)
}

/// The dissection whose dual tree is `tree`.
pub fn from_dual(tree: &PlaneTree) -> Result<Dissection> {
    let counts = tree.children_counts();
    if let Some(v) = counts.iter().position(|&c| c == 1) {
        return Err(Error::UnaryVertex(v));
    }
    let leaves = counts.iter().filter(|&&c| c == 0).count();
    if leaves < 2 {
        return Err(Error::InvalidDissection("the tree needs at least two leaves".into()));
    }
    let n = leaves + 1;
    let size = tree.size();
    let mut subtree = vec![1usize; size];
    let parents = tree.parents();
    for v in (1..size).rev() {
        subtree[parents[v].expect("non-root")] += subtree[v];
    }
    // leaves_before[v] = number of leaves among vertices 0..v.
    let mut leaves_before = vec![0usize; size + 1];
    for v in 0..size {
        leaves_before[v + 1] = leaves_before[v] + usize::from(counts[v] == 0);
    }
    let to_vertex = |p: usize| (p + 1) % n;
    let chords = (1..size)
        .filter(|&v| counts[v] > 0)
        .map(|v| (to_vertex(leaves_before[v]), to_vertex(leaves_before[v + subtree[v]])))
        .collect();
    Dissection::new(n, chords)
}

/// Exact sample of the Boltzmann dissection of `P_{n_leaves + 1}` with face
/// weights `μ_{deg - 1}`, that is of the dual of a `μ`-Galton–Watson tree
/// conditioned to have `n_leaves` leaves.
///
/// The internal vertices of such a tree have children counts `k_1, ..., k_I`
/// with `Σ (k_i - 1) = n_leaves - 1`. Drawing them as a renewal sequence
/// from `μ(· | k ≥ 1)` stopped when the running sum reaches `n_leaves - 1`,
/// interleaving `n_leaves` zeros uniformly and applying the cycle lemma
/// yields a tree `τ` with `I` internal vertices with probability
/// proportional to `Π μ_{k_i} / (1 - μ_0)^I · (n_leaves + I) / C(n_leaves + I, I)`.
/// Accepting with probability proportional to
/// `(1 - μ_0)^I C(n_leaves + I, I) / (n_leaves + I)` corrects this to the
/// target `μ_0^{n_leaves} Π μ_{k_i}`.
pub fn sample_boltzmann<R: Rng + ?Sized>(law: &OffspringLaw, n_leaves: usize, rng: &mut R) -> Result<Dissection> {
    from_dual(&sample_leaf_conditioned(law, n_leaves, rng)?)
}

/// Attempts allowed to [`sample_boltzmann`].
pub const BOLTZMANN_RETRY_CAP: u64 = 1_000_000;

/// Galton–Watson tree conditioned on its number of leaves (law without
/// unary vertices).
pub fn sample_leaf_conditioned<R: Rng + ?Sized>(law: &OffspringLaw, n_leaves: usize, rng: &mut R) -> Result<PlaneTree> {
    if !law.forbids_unary() {
        return Err(Error::InvalidLaw("leaf-conditioned sampling needs mu_1 = 0".into()));
    }
    if n_leaves < 2 {
        return Err(Error::InvalidArgument(format!("a dissection needs at least 2 leaves, got {n_leaves}")));
    }
    let target = n_leaves - 1;
    let q = 1.0 - law.mu0();
    let log_weight = |i: usize| {
        let total = (n_leaves + i) as f64;
        ln_gamma(total + 1.0) - ln_gamma(i as f64 + 1.0) - ln_gamma(n_leaves as f64 + 1.0) + i as f64 * q.ln()
            - total.ln()
    };
    let max_log = (1..=target).map(log_weight).fold(f64::NEG_INFINITY, f64::max);
    let mut internal: Vec<usize> = Vec::new();
    for _ in 0..BOLTZMANN_RETRY_CAP {
        internal.clear();
        let mut sum = 0;
        while sum < target {
            let k = loop {
                let k = law.sample(rng) as usize;
                if k > 0 {
                    break k;
                }
            };
            internal.push(k);
            sum += k - 1;
        }
        if sum != target {
            continue;
        }
        let accept = (log_weight(internal.len()) - max_log).exp();
        if rng.random::<f64>() >= accept {
            continue;
        }
        let total = n_leaves + internal.len();
        let mut is_internal = vec![false; total];
        is_internal[..internal.len()].fill(true);
        is_internal.shuffle(rng);
        let mut next = internal.iter();
        let mut steps: Vec<i64> = is_internal
            .into_iter()
            .map(|b| if b { *next.next().expect("counted") as i64 - 1 } else { -1 })
            .collect();
        cyclic_shift(&mut steps);
        return PlaneTree::new(steps.into_iter().map(|s| (s + 1) as usize).collect());
    }
    Err(Error::RetryCapExceeded { cap: BOLTZMANN_RETRY_CAP })
}

/// Outcome of [`gh_gap_check`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapCheck {
    pub bound_ok: bool,
    /// Half the distortion of the edge-sharing correspondence.
    pub observed: f64,
    /// Height of the dual tree.
    pub height: usize,
}

/// Compares the dissection graph with `Loop(τ)` of its dual tree through
/// the correspondence pairing a polygon vertex with every Loop vertex
/// (dissection edge) it lies on, and checks `observed ≤ height + 2`.
pub fn gh_gap_check(d: &Dissection) -> Result<GapCheck> {
    let (tree, edges) = dual_tree_with_edges(d);
    let loop_graph = build_loop(&tree);
    let corr: Vec<(usize, usize)> = edges
        .iter()
        .enumerate()
        .skip(1)
        .flat_map(|(v, &(a, b))| [(a, v - 1), (b, v - 1)])
        .collect();
    let polygon = graph_metric(&d.graph())?;
    let looptree = graph_metric(loop_graph.graph())?;
    let observed = gh_upper_bound(&corr, &polygon, &looptree)?;
    let height = tree_stats(&tree).height;
    Ok(GapCheck { bound_ok: observed <= height as f64 + 2.0, observed, height })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gw_tree::{all_plane_trees, stable_offspring, Variant};
    use crate::rng::stream;

    fn dis(n: usize, chords: &[(usize, usize)]) -> Dissection {
        Dissection::new(n, chords.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(matches!(Dissection::new(6, vec![(0, 3), (1, 4)]), Err(Error::CrossingChords(0, 3, 1, 4))));
        assert!(Dissection::new(6, vec![(0, 3), (3, 5), (0, 2)]).is_ok());
        assert!(Dissection::new(5, vec![(0, 1)]).is_err());
        assert!(Dissection::new(5, vec![(0, 4)]).is_err());
        assert!(Dissection::new(5, vec![(0, 7)]).is_err());
        assert!(Dissection::new(5, vec![(0, 2), (2, 0)]).is_err());
        assert!(Dissection::new(2, vec![]).is_err());
        let json = r#"{"n_sides":6,"chords":[[1,4],[0,3]]}"#;
        assert!(serde_json::from_str::<Dissection>(json).is_err());
    }

    #[test]
    fn square_duals() {
        assert_eq!(dual_tree(&dis(4, &[])).children_counts(), &[3, 0, 0, 0]);
        // Walking the root face counterclockwise from vertex 1, the diagonal
        // (1, 3) comes first, so the triangle it cuts off is the first child.
        assert_eq!(dual_tree(&dis(4, &[(1, 3)])).children_counts(), &[2, 2, 0, 0, 0]);
        assert_eq!(dual_tree(&dis(4, &[(0, 2)])).children_counts(), &[2, 0, 2, 0, 0]);
    }

    #[test]
    fn octagon_has_seven_leaves() {
        let d = dis(8, &[(1, 4), (1, 5), (5, 7), (2, 4)]);
        let t = dual_tree(&d);
        assert_eq!(tree_stats(&t).leaves, 7);
        // One tree vertex per side or chord.
        assert_eq!(t.size(), 8 + 4);
    }

    #[test]
    fn round_trips_exhaustively() {
        // Trees without unary vertices and with k leaves have at most 2k - 1
        // vertices; there are little Schroeder many of them.
        let mut per_leaves = [0usize; 8];
        for size in 1..=13 {
            for t in all_plane_trees(size) {
                let leaves = tree_stats(&t).leaves;
                if t.children_counts().contains(&1) || leaves < 2 {
                    assert!(from_dual(&t).is_err());
                    continue;
                }
                if leaves > 7 {
                    continue;
                }
                per_leaves[leaves] += 1;
                let d = from_dual(&t).unwrap();
                assert_eq!(d.n_sides(), leaves + 1);
                let internal = t.size() - leaves;
                assert_eq!(d.edges().len(), d.n_sides() + internal - 1);
                assert_eq!(dual_tree(&d), t);
            }
        }
        assert_eq!(per_leaves[2..], [1, 3, 11, 45, 197, 903]);
    }

    #[test]
    fn svg_and_json() {
        let d = dis(4, &[(1, 3)]);
        let svg = d.to_svg();
        assert_eq!(svg.matches("<line").count(), 1);
        assert!(svg.contains("<polygon"));
        assert_eq!(d.to_json().to_string(), r#"{"n_sides":4,"chords":[[1,3]]}"#);
        let back: Dissection = serde_json::from_value(d.to_json()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn boltzmann_samples_have_the_right_size() {
        let law = stable_offspring(1.5, Variant::NoUnary).unwrap();
        let mut rng = stream(5, 0);
        for n_leaves in [2, 3, 10, 120] {
            let d = sample_boltzmann(&law, n_leaves, &mut rng).unwrap();
            let t = dual_tree(&d);
            assert_eq!(tree_stats(&t).leaves, n_leaves);
            assert_eq!(from_dual(&t).unwrap(), d);
        }
        let generic = stable_offspring(1.5, Variant::Generic).unwrap();
        assert!(sample_boltzmann(&generic, 5, &mut rng).is_err());
    }

    #[test]
    fn gap_examples() {
        let check = gh_gap_check(&dis(4, &[])).unwrap();
        assert!(check.bound_ok && check.observed <= 2.0);
        let law = stable_offspring(1.5, Variant::NoUnary).unwrap();
        let mut rng = stream(6, 0);
        for _ in 0..10 {
            let d = sample_boltzmann(&law, 60, &mut rng).unwrap();
            assert!(gh_gap_check(&d).unwrap().bound_ok);
        }
    }
}
