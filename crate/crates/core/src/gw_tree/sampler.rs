use std::collections::BTreeMap;

use rand::Rng;

use super::law::OffspringLaw;
use super::tree::{cyclic_shift, LukasiewiczPath, PlaneTree};
use crate::fft::Convolver;
use crate::{Error, Result};

/// How [`ConditionedSampler`] produces the step sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SamplingMethod {
    /// Rejection for small sizes, convolution above.
    #[default]
    Auto,
    /// Draw `n` i.i.d. offspring numbers until they sum to `n - 1`.
    Rejection,
    /// Split the target sum recursively using convolution powers of the law.
    Convolution,
}

/// Sizes up to which [`SamplingMethod::Auto`] uses rejection.
const AUTO_REJECTION_MAX: usize = 256;

/// Exact sampler for a Galton–Watson tree conditioned to have `n` vertices.
///
/// Both methods produce `n` i.i.d. offspring numbers conditioned on summing
/// to `n - 1` and then rotate the steps to the unique cyclic shift that is a
/// Lukasiewicz path (cycle lemma), which yields the conditioned law exactly.
///
/// The convolution method precomputes the laws of the partial sums over the
/// `O(log n)` distinct block sizes met when halving `[0, n)` recursively, then
/// samples top-down: a block of size `m = m₁ + m₂` with sum `r` gives its
/// first half the sum `a` with probability proportional to
/// `P(S_{m₁} = a) P(S_{m₂} = r - a)`. Values above `n - 1` never matter, so
/// every table is truncated there. The tables are shared by all samples, and
/// one sample costs `O(n log n)`.
#[derive(Clone, Debug)]
pub struct ConditionedSampler {
    n: usize,
    retry_cap: u64,
    inner: Inner,
}

#[derive(Clone, Debug)]
enum Inner {
    Single,
    Rejection { cdf: Vec<f64> },
    Convolution { tables: BTreeMap<usize, Vec<f64>> },
}

impl ConditionedSampler {
    pub fn new(law: &OffspringLaw, n: usize) -> Result<Self> {
        Self::with_method(law, n, SamplingMethod::Auto)
    }

    pub fn with_method(law: &OffspringLaw, n: usize, method: SamplingMethod) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("tree size must be at least 1".into()));
        }
        let retry_cap = 10_000 * law.scaling(n as f64).ceil().max(1.0) as u64;
        if n == 1 {
            return Ok(ConditionedSampler { n, retry_cap, inner: Inner::Single });
        }
        let nu: Vec<f64> = (0..n as u64).map(|k| law.prob(k)).collect();
        let sizes = block_sizes(n);
        let mut convolver = Convolver::new();
        let masks = support_masks(&nu, &sizes, &mut convolver);
        let (m1, m2) = (n / 2, n - n / 2);
        let attainable = match &masks {
            None => true,
            Some(masks) => (0..n).any(|a| masks[&m1][a] && masks[&m2][n - 1 - a]),
        };
        if !attainable {
            return Err(Error::Unattainable { n });
        }
        let method = match method {
            SamplingMethod::Auto if n <= AUTO_REJECTION_MAX => SamplingMethod::Rejection,
            SamplingMethod::Auto => SamplingMethod::Convolution,
            m => m,
        };
        let inner = match method {
            SamplingMethod::Rejection => {
                let mut acc = 0.0;
                let cdf = nu
                    .iter()
                    .map(|p| {
                        acc += p;
                        acc
                    })
                    .collect();
                Inner::Rejection { cdf }
            }
            _ => {
                let mut tables: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
                tables.insert(1, nu);
                for &m in sizes.iter().filter(|&&m| m > 1 && m < n) {
                    let half = m / 2;
                    let mut p = convolver.convolve(&tables[&half], &tables[&(m - half)], n);
                    let mask = masks.as_ref().map(|masks| &masks[&m]);
                    for (a, v) in p.iter_mut().enumerate() {
                        if *v < 0.0 || mask.is_some_and(|mask| !mask[a]) {
                            *v = 0.0;
                        }
                    }
                    tables.insert(m, p);
                }
                Inner::Convolution { tables }
            }
        };
        Ok(ConditionedSampler { n, retry_cap, inner })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Children counts (minus one) of a conditioned tree.
    pub fn sample_path<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<LukasiewiczPath> {
        let tree = self.sample(rng)?;
        Ok(tree.encode())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PlaneTree> {
        let n = self.n;
        let mut counts = vec![0usize; n];
        let found = match &self.inner {
            Inner::Single => return Ok(PlaneTree::single_vertex()),
            Inner::Rejection { cdf } => (0..self.retry_cap).any(|_| rejection_attempt(cdf, &mut counts, rng)),
            Inner::Convolution { tables } => {
                (0..self.retry_cap).any(|_| convolution_attempt(tables, &mut counts, rng))
            }
        };
        if !found {
            return Err(Error::RetryCapExceeded { cap: self.retry_cap });
        }
        let mut steps: Vec<i64> = counts.into_iter().map(|c| c as i64 - 1).collect();
        cyclic_shift(&mut steps);
        Ok(PlaneTree::from_counts_unchecked(steps.into_iter().map(|s| (s + 1) as usize).collect()))
    }
}

/// A conditioned tree of size `n`.
pub fn sample_conditioned_tree<R: Rng + ?Sized>(law: &OffspringLaw, n: usize, rng: &mut R) -> Result<PlaneTree> {
    ConditionedSampler::new(law, n)?.sample(rng)
}

/// One round of i.i.d. draws; the sum can only grow, so a round stops as
/// soon as it exceeds `n - 1` (draws past the table all do).
fn rejection_attempt<R: Rng + ?Sized>(cdf: &[f64], counts: &mut [usize], rng: &mut R) -> bool {
    let n = counts.len();
    let mut sum = 0;
    for slot in counts.iter_mut() {
        let u: f64 = rng.random();
        let k = cdf.partition_point(|&c| c <= u);
        sum += k;
        if sum > n - 1 {
            return false;
        }
        *slot = k;
    }
    sum == n - 1
}

fn convolution_attempt<R: Rng + ?Sized>(
    tables: &BTreeMap<usize, Vec<f64>>,
    counts: &mut [usize],
    rng: &mut R,
) -> bool {
    let n = counts.len();
    let mut stack = vec![(0usize, n, n - 1)];
    while let Some((offset, size, target)) = stack.pop() {
        if size == 1 {
            if tables[&1][target] <= 0.0 {
                return false;
            }
            counts[offset] = target;
            continue;
        }
        let half = size / 2;
        let (left, right) = (&tables[&half], &tables[&(size - half)]);
        let total: f64 = (0..=target).map(|a| left[a] * right[target - a]).sum();
        if !(total > 0.0) {
            return false;
        }
        let u = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut pick = None;
        for a in 0..=target {
            let w = left[a] * right[target - a];
            acc += w;
            if w > 0.0 {
                pick = Some(a);
                if u < acc {
                    break;
                }
            }
        }
        let a = pick.expect("positive total has a positive term");
        stack.push((offset, half, a));
        stack.push((offset + half, size - half, target - a));
    }
    true
}

/// Every block size met when `[0, n)` is halved recursively.
fn block_sizes(n: usize) -> Vec<usize> {
    let mut sizes = std::collections::BTreeSet::new();
    let mut frontier = vec![n];
    while let Some(m) = frontier.pop() {
        if sizes.insert(m) && m > 1 {
            frontier.push(m / 2);
            frontier.push(m - m / 2);
        }
    }
    sizes.into_iter().collect()
}

/// Exact supports of the partial-sum laws, or `None` when every value in
/// `[0, n)` is reachable for every block size (the law charges 0 and 1).
fn support_masks(
    nu: &[f64],
    sizes: &[usize],
    convolver: &mut Convolver,
) -> Option<BTreeMap<usize, Vec<bool>>> {
    if nu[0] > 0.0 && nu.get(1).is_some_and(|&p| p > 0.0) {
        return None;
    }
    let n = nu.len();
    let mut masks: BTreeMap<usize, Vec<bool>> = BTreeMap::new();
    masks.insert(1, nu.iter().map(|&p| p > 0.0).collect());
    for &m in sizes.iter().filter(|&&m| m > 1) {
        let half = m / 2;
        let as_f64 = |mask: &Vec<bool>| mask.iter().map(|&b| b as u8 as f64).collect::<Vec<_>>();
        // Pair counts are integers at most n, far above the rounding error.
        let counts = convolver.convolve(&as_f64(&masks[&half]), &as_f64(&masks[&(m - half)]), n);
        masks.insert(m, counts.iter().map(|&c| c > 0.5).collect());
    }
    Some(masks)
}
