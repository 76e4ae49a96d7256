//! Sparse-table range-minimum queries returning the first position of the
//! minimum.

#[derive(Clone, Debug)]
pub(crate) struct SparseTable {
    values: Vec<i64>,
    levels: Vec<Vec<u32>>,
}

impl SparseTable {
    pub(crate) fn new(values: &[i64]) -> Self {
        let n = values.len();
        let mut levels: Vec<Vec<u32>> = vec![(0..n as u32).collect()];
        let mut width = 1;
        while 2 * width <= n {
            let prev = levels.last().unwrap();
            let next: Vec<u32> = (0..=n - 2 * width)
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + width]);
                    if values[a as usize] <= values[b as usize] {
                        a
                    } else {
                        b
                    }
                })
                .collect();
            levels.push(next);
            width *= 2;
        }
        SparseTable { values: values.to_vec(), levels }
    }

    /// First index of the minimum over the inclusive range `[lo, hi]`.
    pub(crate) fn argmin(&self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo <= hi && hi < self.values.len());
        let len = hi - lo + 1;
        let k = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let a = self.levels[k][lo] as usize;
        let b = self.levels[k][hi + 1 - (1 << k)] as usize;
        if self.values[a] <= self.values[b] {
            a
        } else {
            b
        }
    }

    pub(crate) fn min(&self, lo: usize, hi: usize) -> i64 {
        self.values[self.argmin(lo, hi)]
    }
}
