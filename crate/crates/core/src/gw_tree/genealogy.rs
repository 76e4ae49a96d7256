use crate::rmq::SparseTable;

use super::LukasiewiczPath;

/// Ancestral structure of a Lukasiewicz path.
///
/// Vertex `j` descends from `i` iff `i ≤ j` and `min_{i≤m≤j} W_m = W_i`. The
/// parent of `j` is the last `p < j` with `W_p ≤ W_j`, and the child `c` of
/// `i` on the way to `j` is the first argmin of `W` on `(i, j]`. For such a
/// child, `x_{n,i}^j = W_c - W_i + 1` depends on `c` alone, so it is stored
/// once per vertex as [`Genealogy::position`].
#[derive(Clone, Debug)]
pub struct Genealogy {
    values: Vec<i64>,
    parent: Vec<u32>,
    position: Vec<u32>,
    depth: Vec<u32>,
    rmq: SparseTable,
}

const NONE: u32 = u32::MAX;

impl Genealogy {
    pub fn new(path: &LukasiewiczPath) -> Self {
        let values = path.values();
        let n = path.len();
        let mut parent = vec![NONE; n];
        let mut position = vec![0; n];
        let mut depth = vec![0; n];
        let mut stack: Vec<u32> = Vec::new();
        for j in 0..n {
            while let Some(&top) = stack.last() {
                if values[top as usize] > values[j] {
                    stack.pop();
                } else {
                    break;
                }
            }
            if let Some(&p) = stack.last() {
                parent[j] = p;
                position[j] = (values[j] - values[p as usize] + 1) as u32;
                depth[j] = depth[p as usize] + 1;
            }
            stack.push(j as u32);
        }
        let rmq = SparseTable::new(&values[..n]);
        Genealogy { values, parent, position, depth, rmq }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// `W_0, ..., W_n`.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn parent(&self, j: usize) -> Option<usize> {
        let p = self.parent[j];
        (p != NONE).then_some(p as usize)
    }

    /// `x_{n,p}^j` for the parent `p` of `j` (zero at the root).
    pub fn position(&self, j: usize) -> i64 {
        self.position[j] as i64
    }

    pub fn depth(&self, j: usize) -> usize {
        self.depth[j] as usize
    }

    /// Number of children `ΔW_j`.
    pub fn children(&self, j: usize) -> i64 {
        self.values[j + 1] - self.values[j] + 1
    }

    /// `min_{lo ≤ m ≤ hi} W_m` for `hi < n`.
    pub fn min_value(&self, lo: usize, hi: usize) -> i64 {
        self.rmq.min(lo, hi)
    }

    pub fn is_ancestor(&self, i: usize, j: usize) -> bool {
        i <= j && self.rmq.min(i, j) == self.values[i]
    }

    /// Most recent common ancestor of `i` and `j`, with the children of it
    /// leading to `i` and to `j` (`None` when the ancestor is the vertex
    /// itself).
    pub fn junction(&self, i: usize, j: usize) -> Junction {
        if i == j {
            return Junction { ancestor: i, toward_first: None, toward_second: None };
        }
        let (a, b, swapped) = if i < j { (i, j, false) } else { (j, i, true) };
        let c = self.rmq.argmin(a, b);
        let m = if c == a { a } else { self.parent[c] as usize };
        let toward_b = Some(self.rmq.argmin(m + 1, b));
        let toward_a = (m != a).then(|| self.rmq.argmin(m + 1, a));
        let (toward_first, toward_second) = if swapped { (toward_b, toward_a) } else { (toward_a, toward_b) };
        Junction { ancestor: m, toward_first, toward_second }
    }

    /// Strict ancestors of `j` in increasing order, with `x_{n,k}^j`.
    pub fn descent(&self, j: usize) -> Vec<(usize, i64)> {
        let mut out = Vec::with_capacity(self.depth(j));
        let mut v = j;
        while let Some(p) = self.parent(v) {
            out.push((p, self.position(v)));
            v = p;
        }
        out.reverse();
        out
    }
}

/// See [`Genealogy::junction`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Junction {
    pub ancestor: usize,
    pub toward_first: Option<usize>,
    pub toward_second: Option<usize>,
}

/// Strict ancestors of `j` with `x_{n,k}^j`, straight from the path.
pub fn descent(path: &LukasiewiczPath, j: usize) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for_each_descent(path, |k, stack| {
        if k == j {
            out = stack.to_vec();
        }
        k < j
    });
    out
}

/// Left-to-right monotone-stack sweep: calls `visit(j, descent of j)` for
/// `j = 0, 1, ...` until `visit` returns `false`. The stack holds the
/// ancestors of the current vertex, each paired with the position of the
/// branch leading to it, so the whole sweep runs in `O(n)` besides the work
/// done by `visit`.
pub fn for_each_descent<F>(path: &LukasiewiczPath, mut visit: F)
where
    F: FnMut(usize, &[(usize, i64)]) -> bool,
{
    let values = path.values();
    let mut stack: Vec<(usize, i64)> = Vec::new();
    for j in 0..path.len() {
        while let Some(&(top, _)) = stack.last() {
            if values[top] > values[j] {
                stack.pop();
            } else {
                break;
            }
        }
        if let Some(top) = stack.last_mut() {
            top.1 = values[j] - values[top.0] + 1;
        }
        if !visit(j, &stack) {
            return;
        }
        stack.push((j, 0));
    }
}
