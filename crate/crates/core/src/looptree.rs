//! Discrete looptrees `Loop(τ)` and `Loop′(τ)`, and the exact `Loop′`
//! distance read off the Lukasiewicz path.
//!
//! `Loop(τ)` replaces every vertex `u` by a cycle whose length is the degree
//! of `u` and glues neighbouring cycles at one point per tree edge, so its
//! vertices are the edges of `τ`. The edge leading to vertex `v ≥ 1` is
//! graph vertex `v - 1`. The cycle of `u` lists its parent edge (unless `u`
//! is the root) followed by its child edges from left to right; a cycle of
//! length two is a single edge and a cycle of length one adds nothing.
//!
//! `Loop′(τ)` lives on the vertices of `τ`: consecutive siblings are joined,
//! and so is every vertex to its first and last child (twice when the child
//! is unique).

use std::io::Write;

use serde::Serialize;

use crate::gw_tree::{Genealogy, LukasiewiczPath, PlaneTree};
use crate::metric_analysis::{gh_upper_bound, graph_metric, Graph, Metric};
use crate::Result;

/// Which tree object a graph vertex stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Origin {
    /// `Loop′`: the tree vertex itself.
    Vertex(usize),
    /// `Loop`: corner `k` of the cycle of tree vertex `u`, that is, the edge
    /// from `u` to its `k`-th child counted from 0 at the root and from 1
    /// elsewhere (corner 0 of a non-root cycle is its parent edge).
    Corner(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoopKind {
    Loop,
    LoopPrime,
}

/// A discrete looptree with its edge multiplicities and origin map.
#[derive(Clone, Debug)]
pub struct LoopGraph {
    kind: LoopKind,
    graph: Graph,
    edges: Vec<(usize, usize)>,
    origin: Vec<Origin>,
}

impl LoopGraph {
    fn new(kind: LoopKind, vertex_count: usize, mut edges: Vec<(usize, usize)>, origin: Vec<Origin>) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        let graph = Graph::from_edges(vertex_count, edges.iter().copied());
        LoopGraph { kind, graph, edges, origin }
    }

    pub fn kind(&self) -> LoopKind {
        self.kind
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Edges counted with multiplicity.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted edges `(u, v)`, `u ≤ v`, repeated according to multiplicity.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        let key = (u.min(v), u.max(v));
        let lo = self.edges.partition_point(|&e| e < key);
        let hi = self.edges.partition_point(|&e| e <= key);
        hi - lo
    }

    /// The simple graph that BFS runs on.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        self.graph.neighbors(v)
    }

    pub fn origin(&self) -> &[Origin] {
        &self.origin
    }

    /// One `u v` line per edge and per unit of multiplicity.
    pub fn write_edge_list<W: Write>(&self, w: &mut W) -> Result<()> {
        for (u, v) in &self.edges {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }

    pub fn origin_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind,
            "vertex_count": self.vertex_count(),
            "origin": self.origin,
        })
    }
}

/// `Loop(τ)`.
pub fn build_loop(tree: &PlaneTree) -> LoopGraph {
    let n = tree.size();
    if n == 1 {
        return LoopGraph::new(LoopKind::Loop, 1, Vec::new(), vec![Origin::Corner(0, 0)]);
    }
    let children = tree.children();
    let mut origin = vec![Origin::Corner(0, 0); n - 1];
    let mut edges = Vec::new();
    let mut cycle = Vec::new();
    for (u, kids) in children.iter().enumerate() {
        cycle.clear();
        if u > 0 {
            cycle.push(u - 1);
        }
        let first_corner = cycle.len();
        for (k, &c) in kids.iter().enumerate() {
            origin[c - 1] = Origin::Corner(u, first_corner + k);
            cycle.push(c - 1);
        }
        match cycle.len() {
            0 | 1 => {}
            2 => edges.push((cycle[0], cycle[1])),
            len => edges.extend((0..len).map(|k| (cycle[k], cycle[(k + 1) % len]))),
        }
    }
    LoopGraph::new(LoopKind::Loop, n - 1, edges, origin)
}

/// `Loop′(τ)`.
pub fn build_loop_prime(tree: &PlaneTree) -> LoopGraph {
    let n = tree.size();
    let mut edges = Vec::with_capacity(2 * n);
    for (u, kids) in tree.children().iter().enumerate() {
        if let (Some(&first), Some(&last)) = (kids.first(), kids.last()) {
            edges.push((u, first));
            edges.push((u, last));
            edges.extend(kids.windows(2).map(|w| (w[0], w[1])));
        }
    }
    LoopGraph::new(LoopKind::LoopPrime, n, edges, (0..n).map(Origin::Vertex).collect())
}

/// Pairs `(tree vertex, Loop vertex)`: every non-root vertex with the edge
/// to its parent, and the root with the edges to its first and last child.
/// Its distortion is at most 4.
pub fn natural_correspondence(tree: &PlaneTree) -> Vec<(usize, usize)> {
    let n = tree.size();
    if n == 1 {
        return vec![(0, 0)];
    }
    let mut corr: Vec<(usize, usize)> = (1..n).map(|v| (v, v - 1)).collect();
    let kids = &tree.children()[0];
    corr.push((0, kids[0] - 1));
    corr.push((0, kids[kids.len() - 1] - 1));
    corr
}

/// Half the distortion of [`natural_correspondence`] between `Loop′(τ)` and
/// `Loop(τ)`, from exact all-pairs BFS.
pub fn loop_gh_bound(tree: &PlaneTree) -> Result<f64> {
    let prime = graph_metric(build_loop_prime(tree).graph())?;
    let plain = graph_metric(build_loop(tree).graph())?;
    gh_upper_bound(&natural_correspondence(tree), &prime, &plain)
}

/// `δ_{n,k}(a, b)` on a cycle of `len` points.
fn cycle_distance(a: i64, b: i64, len: i64) -> i64 {
    let d = (a - b).abs();
    d.min(len - d)
}

/// Exact `Loop′(τ)` distances, in `O(1)` per query after `O(n log n)`
/// preprocessing.
///
/// With `D(v)` the distance from the root to `v` along the ancestral line,
/// accumulated one loop at a time, a pair `i, j` with most recent common
/// ancestor `m` and children `c_i, c_j` of `m` toward them is at distance
/// `δ_m(x_i, x_j) + D(i) - D(c_i) + D(j) - D(c_j)`; the terms belonging to a
/// side where `m` is the vertex itself vanish, with `x = 0` there.
#[derive(Clone, Debug)]
pub struct LoopPrimeMetric {
    genealogy: Genealogy,
    from_root: Vec<i64>,
}

impl LoopPrimeMetric {
    pub fn new(path: &LukasiewiczPath) -> Self {
        let genealogy = Genealogy::new(path);
        let mut from_root = vec![0i64; genealogy.len()];
        for v in 1..genealogy.len() {
            let p = genealogy.parent(v).expect("non-root vertex");
            let step = cycle_distance(0, genealogy.position(v), genealogy.children(p) + 1);
            from_root[v] = from_root[p] + step;
        }
        LoopPrimeMetric { genealogy, from_root }
    }

    pub fn genealogy(&self) -> &Genealogy {
        &self.genealogy
    }

    pub fn distance(&self, i: usize, j: usize) -> i64 {
        let g = &self.genealogy;
        let jn = g.junction(i, j);
        let m = jn.ancestor;
        let side = |v: usize, child: Option<usize>| match child {
            Some(c) => (g.position(c), self.from_root[v] - self.from_root[c]),
            None => (0, 0),
        };
        let (xi, di) = side(i, jn.toward_first);
        let (xj, dj) = side(j, jn.toward_second);
        cycle_distance(xi, xj, g.children(m) + 1) + di + dj
    }

    /// `Σ_{i ≼ k ≺ j} δ_{n,k}(0, x_{n,k}^j)` by walking the descent of `j`;
    /// requires `i` to be an ancestor of `j`.
    pub fn ancestor_formula(&self, i: usize, j: usize) -> i64 {
        let g = &self.genealogy;
        assert!(g.is_ancestor(i, j), "{i} is not an ancestor of {j}");
        let mut total = 0;
        let mut v = j;
        while v != i {
            let p = g.parent(v).expect("i is an ancestor");
            total += cycle_distance(0, g.position(v), g.children(p) + 1);
            v = p;
        }
        total
    }
}

impl Metric for LoopPrimeMetric {
    fn len(&self) -> usize {
        self.genealogy.len()
    }
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.distance(i, j) as f64
    }
}

/// One-off `Loop′` distance straight from the path, in `O(n)`.
pub fn loop_prime_distance(path: &LukasiewiczPath, i: usize, j: usize) -> i64 {
    let values = path.values();
    let children = |k: usize| values[k + 1] - values[k] + 1;
    let di = crate::gw_tree::descent(path, i);
    let dj = crate::gw_tree::descent(path, j);
    // Common prefix of the two descents: strict common ancestors.
    let shared = di.iter().zip(&dj).take_while(|(a, b)| a.0 == b.0 && a.1 == b.1).count();
    let (m, xi, xj, rest_i, rest_j) = if i == j {
        return 0;
    } else if di.iter().any(|&(k, _)| k == j) {
        let at = di.iter().position(|&(k, _)| k == j).expect("present");
        (j, di[at].1, 0, &di[at + 1..], &dj[dj.len()..])
    } else if dj.iter().any(|&(k, _)| k == i) {
        let at = dj.iter().position(|&(k, _)| k == i).expect("present");
        (i, 0, dj[at].1, &di[di.len()..], &dj[at + 1..])
    } else {
        let m = di[shared].0;
        (m, di[shared].1, dj[shared].1, &di[shared + 1..], &dj[shared + 1..])
    };
    let branch = |rest: &[(usize, i64)]| rest.iter().map(|&(k, x)| cycle_distance(0, x, children(k) + 1)).sum::<i64>();
    cycle_distance(xi, xj, children(m) + 1) + branch(rest_i) + branch(rest_j)
}

/// SVG drawing of `Loop(τ)` as tangent circles: vertex `u` becomes a circle
/// of circumference proportional to its degree, and the circle of a child
/// touches the circle of its parent at the point reserved for that edge.
pub fn layout_svg(tree: &PlaneTree) -> String {
    use std::f64::consts::TAU;
    let n = tree.size();
    let children = tree.children();
    let radius = |u: usize| {
        let degree = children[u].len() + usize::from(u > 0);
        degree.max(1) as f64 / TAU
    };
    let mut center = vec![(0.0f64, 0.0f64); n];
    // Angle, seen from the center of u, of the point where u meets its parent.
    let mut up_angle = vec![std::f64::consts::FRAC_PI_2; n];
    for u in 0..n {
        let kids = &children[u];
        let slots = kids.len() + usize::from(u > 0);
        let r = radius(u);
        for (k, &c) in kids.iter().enumerate() {
            let corner = k + usize::from(u > 0);
            let angle = up_angle[u] + TAU * corner as f64 / slots.max(1) as f64;
            let (px, py) = (center[u].0 + r * angle.cos(), center[u].1 + r * angle.sin());
            let rc = radius(c);
            center[c] = (px + rc * angle.cos(), py + rc * angle.sin());
            up_angle[c] = angle + std::f64::consts::PI;
        }
    }
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for u in 0..n {
        let r = radius(u);
        x0 = x0.min(center[u].0 - r);
        y0 = y0.min(center[u].1 - r);
        x1 = x1.max(center[u].0 + r);
        y1 = y1.max(center[u].1 + r);
    }
    let size = 800.0;
    let scale = size / (x1 - x0).max(y1 - y0);
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"-10 -10 {} {}\">\n",
        size + 20.0,
        size + 20.0
    );
    for u in 0..n {
        svg.push_str(&format!(
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n",
            (center[u].0 - x0) * scale,
            (y1 - center[u].1) * scale,
            radius(u) * scale
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
