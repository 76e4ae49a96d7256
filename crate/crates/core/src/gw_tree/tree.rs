use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A plane tree given by the number of children of each vertex, vertices
/// listed in depth-first (lexicographic) order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTree")]
pub struct PlaneTree {
    children_counts: Vec<usize>,
}

#[derive(Deserialize)]
struct RawTree {
    children_counts: Vec<usize>,
}

impl TryFrom<RawTree> for PlaneTree {
    type Error = Error;
    fn try_from(raw: RawTree) -> Result<Self> {
        PlaneTree::new(raw.children_counts)
    }
}

impl PlaneTree {
    pub fn new(children_counts: Vec<usize>) -> Result<Self> {
        let n = children_counts.len();
        if n == 0 {
            return Err(Error::InvalidTree("a tree has at least one vertex".into()));
        }
        let mut w: i64 = 0;
        for (k, &c) in children_counts.iter().enumerate() {
            w += c as i64 - 1;
            if w < 0 && k + 1 < n {
                return Err(Error::InvalidTree(format!("the encoding closes after {} of {n} vertices", k + 1)));
            }
        }
        if w != -1 {
            return Err(Error::InvalidTree(format!("children counts sum to {}, expected {}", w + n as i64, n - 1)));
        }
        Ok(PlaneTree { children_counts })
    }

    pub(crate) fn from_counts_unchecked(children_counts: Vec<usize>) -> Self {
        debug_assert!(PlaneTree::new(children_counts.clone()).is_ok());
        PlaneTree { children_counts }
    }

    pub fn single_vertex() -> Self {
        PlaneTree { children_counts: vec![0] }
    }

    pub fn children_counts(&self) -> &[usize] {
        &self.children_counts
    }

    pub fn size(&self) -> usize {
        self.children_counts.len()
    }

    /// The Lukasiewicz path of the tree.
    pub fn encode(&self) -> LukasiewiczPath {
        encode_tree(self)
    }

    /// Parent of every vertex (`None` for the root).
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parents = vec![None; self.size()];
        // Stack of (vertex, children still to attach).
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for (v, &c) in self.children_counts.iter().enumerate() {
            while let Some(top) = stack.last_mut() {
                if top.1 == 0 {
                    stack.pop();
                } else {
                    top.1 -= 1;
                    parents[v] = Some(top.0);
                    break;
                }
            }
            stack.push((v, c));
        }
        parents
    }

    /// Children lists, in order.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut children: Vec<Vec<usize>> = self.children_counts.iter().map(|&c| Vec::with_capacity(c)).collect();
        for (v, p) in self.parents().into_iter().enumerate() {
            if let Some(p) = p {
                children[p].push(v);
            }
        }
        children
    }

    /// Depth of every vertex.
    pub fn depths(&self) -> Vec<usize> {
        let parents = self.parents();
        let mut depth = vec![0; self.size()];
        for v in 1..self.size() {
            depth[v] = depth[parents[v].expect("non-root")] + 1;
        }
        depth
    }
}

/// Size, number of leaves and height of a tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TreeStats {
    pub size: usize,
    pub leaves: usize,
    pub height: usize,
}

pub fn tree_stats(tree: &PlaneTree) -> TreeStats {
    TreeStats {
        size: tree.size(),
        leaves: tree.children_counts.iter().filter(|&&c| c == 0).count(),
        height: tree.depths().into_iter().max().unwrap_or(0),
    }
}

/// Integer walk with steps `k_u - 1`: `W_0 = 0`, `W_k ≥ 0` for `k < n`,
/// `W_n = -1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPath")]
pub struct LukasiewiczPath {
    steps: Vec<i64>,
}

#[derive(Deserialize)]
struct RawPath {
    steps: Vec<i64>,
}

impl TryFrom<RawPath> for LukasiewiczPath {
    type Error = Error;
    fn try_from(raw: RawPath) -> Result<Self> {
        LukasiewiczPath::new(raw.steps)
    }
}

impl LukasiewiczPath {
    pub fn new(steps: Vec<i64>) -> Result<Self> {
        let n = steps.len();
        if n == 0 {
            return Err(Error::InvalidPath("empty path".into()));
        }
        let mut w = 0;
        for (k, &s) in steps.iter().enumerate() {
            if s < -1 {
                return Err(Error::InvalidPath(format!("step {k} is {s} < -1")));
            }
            w += s;
            if w < 0 && k + 1 < n {
                return Err(Error::InvalidPath(format!("W_{} = {w} is negative", k + 1)));
            }
        }
        if w != -1 {
            return Err(Error::InvalidPath(format!("path ends at {w}, not -1")));
        }
        Ok(LukasiewiczPath { steps })
    }

    /// Number of vertices `n` of the coded tree (the path has `n + 1` values).
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[i64] {
        &self.steps
    }

    /// `W_0, ..., W_n`.
    pub fn values(&self) -> Vec<i64> {
        let mut values = Vec::with_capacity(self.steps.len() + 1);
        let mut w = 0;
        values.push(0);
        for &s in &self.steps {
            w += s;
            values.push(w);
        }
        values
    }

    /// `ΔW_i = W_{i+1} - W_i + 1`, the number of children of vertex `i`.
    pub fn children(&self, i: usize) -> usize {
        (self.steps[i] + 1) as usize
    }

    /// Largest step.
    pub fn max_step(&self) -> i64 {
        self.steps.iter().copied().max().unwrap_or(-1)
    }
}

pub fn encode_tree(tree: &PlaneTree) -> LukasiewiczPath {
    LukasiewiczPath { steps: tree.children_counts.iter().map(|&c| c as i64 - 1).collect() }
}

pub fn decode_tree(path: &LukasiewiczPath) -> Result<PlaneTree> {
    PlaneTree::new(path.steps.iter().map(|&s| (s + 1) as usize).collect())
}

/// Rotate a step sequence summing to `-1` to the unique cyclic shift whose
/// partial sums stay non-negative until the last step: start right after the
/// first index where the partial sums reach their minimum.
pub fn cyclic_shift(steps: &mut [i64]) {
    debug_assert_eq!(steps.iter().sum::<i64>(), -1);
    let mut w = 0;
    let mut best = i64::MAX;
    let mut at = 0;
    for (k, &s) in steps.iter().enumerate() {
        w += s;
        if w < best {
            best = w;
            at = k + 1;
        }
    }
    steps.rotate_left(at % steps.len());
}

/// Every plane tree with `n` vertices, in lexicographic order of their
/// children counts. There are Catalan(n - 1) of them.
pub fn all_plane_trees(n: usize) -> Vec<PlaneTree> {
    fn extend(prefix: &mut Vec<usize>, w: i64, n: usize, out: &mut Vec<PlaneTree>) {
        let remaining = n - prefix.len();
        if remaining == 0 {
            if w == -1 {
                out.push(PlaneTree { children_counts: prefix.clone() });
            }
            return;
        }
        if w < 0 {
            return;
        }
        // The remaining vertices can lower the walk by at most `remaining`.
        for c in 0..remaining {
            let next = w + c as i64 - 1;
            if next + 1 > (remaining - 1) as i64 {
                break;
            }
            prefix.push(c);
            extend(prefix, next, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        extend(&mut Vec::with_capacity(n), 0, n, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn encode_example() {
        let tree = PlaneTree::new(vec![2, 2, 0, 0, 0]).unwrap();
        assert_eq!(tree.encode().values(), vec![0, 1, 2, 1, 0, -1]);
        assert_eq!(PlaneTree::single_vertex().encode().values(), vec![0, -1]);
    }

    #[test]
    fn stats_examples() {
        assert_eq!(tree_stats(&PlaneTree::single_vertex()), TreeStats { size: 1, leaves: 1, height: 0 });
        let tree = PlaneTree::new(vec![2, 2, 0, 0, 0]).unwrap();
        assert_eq!(tree_stats(&tree), TreeStats { size: 5, leaves: 3, height: 2 });
    }

    #[test]
    fn rejects_invalid_encodings() {
        assert!(PlaneTree::new(vec![]).is_err());
        assert!(PlaneTree::new(vec![1, 0, 0]).is_err());
        assert!(PlaneTree::new(vec![2, 0]).is_err());
        assert!(LukasiewiczPath::new(vec![0, -2, 1]).is_err());
        assert!(LukasiewiczPath::new(vec![-1, 0]).is_err());
    }

    #[test]
    fn catalan_counts() {
        let counts: Vec<usize> = (1..=9).map(|n| all_plane_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42, 132, 429, 1430]);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let tree = PlaneTree::new(vec![3, 0, 1, 0, 0]).unwrap();
        let json = serde_json::to_string(&tree).unwrap();
        assert_eq!(json, r#"{"children_counts":[3,0,1,0,0]}"#);
        assert_eq!(serde_json::from_str::<PlaneTree>(&json).unwrap(), tree);
        assert!(serde_json::from_str::<PlaneTree>(r#"{"children_counts":[1]}"#).is_err());
        let path = tree.encode();
        let json = serde_json::to_string(&path).unwrap();
        assert_eq!(json, r#"{"steps":[2,-1,0,-1,-1]}"#);
        assert_eq!(serde_json::from_str::<LukasiewiczPath>(&json).unwrap(), path);
    }

    #[test]
    fn parents_and_children() {
        let tree = PlaneTree::new(vec![2, 2, 0, 0, 0]).unwrap();
        assert_eq!(tree.parents(), vec![None, Some(0), Some(1), Some(1), Some(0)]);
        assert_eq!(tree.children(), vec![vec![1, 4], vec![2, 3], vec![], vec![], vec![]]);
    }

    proptest! {
        #[test]
        fn cyclic_shift_yields_valid_path(raw in prop::collection::vec(0usize..4, 1..40)) {
            // Force the sum of steps to -1 by appending zeros.
            let mut counts = raw;
            let total: usize = counts.iter().sum();
            while counts.len() < total + 1 {
                counts.push(0);
            }
            let extra = counts.len() - 1 - total;
            if let Some(last) = counts.last_mut() { *last += extra; }
            let mut steps: Vec<i64> = counts.iter().map(|&c| c as i64 - 1).collect();
            prop_assert_eq!(steps.iter().sum::<i64>(), -1);
            cyclic_shift(&mut steps);
            prop_assert!(LukasiewiczPath::new(steps).is_ok());
        }
    }
}
