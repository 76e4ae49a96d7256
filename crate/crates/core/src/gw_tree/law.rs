use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::special::{gamma, zeta_tail};
use crate::{Error, Result};

/// Which small offspring counts carry mass in the built-in power-law family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `μ_k = θ k^{-1-α}` for every `k ≥ 1`.
    Generic,
    /// `μ_1 = 0`: support `{0, 2, 3, ...}`, the dissection family.
    NoUnary,
}

impl Variant {
    fn first_positive(self) -> u64 {
        match self {
            Variant::Generic => 1,
            Variant::NoUnary => 2,
        }
    }
}

#[derive(Clone, Debug)]
enum Kind {
    /// `μ_k = θ k^{-1-α}` for `k ≥ k_min`, `μ_0 = 1 - Σ`, nothing in between.
    PowerLaw { theta: f64, k_min: u64, mu0: f64 },
    Table { probs: Vec<f64> },
}

/// A critical offspring distribution.
#[derive(Clone, Debug)]
pub struct OffspringLaw {
    kind: Kind,
    alpha: f64,
    tail_constant: f64,
    table: OnceLock<StepTable>,
}

/// Prefix length of the inverse-CDF table used by [`OffspringLaw::sample`].
pub const DEFAULT_CUTOFF: usize = 1 << 20;

/// The built-in heavy-tailed family `μ_k = θ k^{-1-α}`.
pub fn stable_offspring(alpha: f64, variant: Variant) -> Result<OffspringLaw> {
    OffspringLaw::power_law(alpha, variant.first_positive())
}

impl OffspringLaw {
    /// `μ_k = θ k^{-1-α}` for `k ≥ k_min`, with `θ` fixed by criticality and
    /// `μ_0` by normalization; `μ_1 .. μ_{k_min - 1}` vanish.
    pub fn power_law(alpha: f64, k_min: u64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::InvalidAlpha(alpha));
        }
        if k_min == 0 {
            return Err(Error::InvalidLaw("k_min must be at least 1".into()));
        }
        let theta = 1.0 / zeta_tail(alpha, k_min);
        let mu0 = 1.0 - theta * zeta_tail(1.0 + alpha, k_min);
        if !(mu0 > 0.0 && mu0 < 1.0) {
            return Err(Error::InvalidLaw(format!("criticality forces mu_0 = {mu0}")));
        }
        Ok(OffspringLaw {
            kind: Kind::PowerLaw { theta, k_min, mu0 },
            alpha,
            tail_constant: theta / alpha,
            table: OnceLock::new(),
        })
    }

    /// A finitely supported critical law, given as `μ_0, μ_1, ...`.
    ///
    /// Such a law has finite variance, so it is recorded with `alpha = 2` and
    /// tail constant zero.
    pub fn from_probabilities(probs: Vec<f64>) -> Result<Self> {
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidLaw("probabilities must lie in [0, 1]".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidLaw(format!("probabilities sum to {total}")));
        }
        let mean: f64 = probs.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        if (mean - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidLaw(format!("mean is {mean}, not 1")));
        }
        if probs.first().copied().unwrap_or(0.0) == 0.0 {
            return Err(Error::InvalidLaw("a critical law other than the Dirac mass at 1 needs mu_0 > 0".into()));
        }
        Ok(OffspringLaw { kind: Kind::Table { probs }, alpha: 2.0, tail_constant: 0.0, table: OnceLock::new() })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The constant `c` with `μ([k, ∞)) ~ c k^{-α}`.
    pub fn tail_constant(&self) -> f64 {
        self.tail_constant
    }

    pub fn forbids_unary(&self) -> bool {
        self.prob(1) == 0.0
    }

    pub fn mu0(&self) -> f64 {
        self.prob(0)
    }

    /// `μ_k`.
    pub fn prob(&self, k: u64) -> f64 {
        match &self.kind {
            Kind::PowerLaw { theta, k_min, mu0 } => {
                if k == 0 {
                    *mu0
                } else if k < *k_min {
                    0.0
                } else {
                    theta * (k as f64).powf(-1.0 - self.alpha)
                }
            }
            Kind::Table { probs } => probs.get(k as usize).copied().unwrap_or(0.0),
        }
    }

    /// `μ([k, ∞))`.
    pub fn tail_mass(&self, k: u64) -> f64 {
        match &self.kind {
            Kind::PowerLaw { theta, k_min, mu0 } => match k {
                0 => 1.0,
                k if k <= *k_min => 1.0 - mu0,
                k => theta * zeta_tail(1.0 + self.alpha, k),
            },
            Kind::Table { probs } => probs.iter().skip(k as usize).sum(),
        }
    }

    /// Largest `k` with `μ_k > 0`, if the support is finite.
    pub fn support_max(&self) -> Option<u64> {
        match &self.kind {
            Kind::PowerLaw { .. } => None,
            Kind::Table { probs } => probs.iter().rposition(|&p| p > 0.0).map(|k| k as u64),
        }
    }

    /// Variance of the law (infinite for the heavy-tailed family).
    pub fn variance(&self) -> f64 {
        match &self.kind {
            Kind::PowerLaw { .. } => f64::INFINITY,
            Kind::Table { probs } => probs.iter().enumerate().map(|(k, p)| (k as f64 - 1.0).powi(2) * p).sum(),
        }
    }

    /// The normalization `B_n` under which `W_{⌊nt⌋} / B_n` converges to the
    /// normalized excursion of the stable process with Laplace exponent
    /// `λ^α`: `(c |Γ(1-α)| n)^{1/α}` for the heavy-tailed family, and
    /// `σ (n/2)^{1/2}` for finite-variance laws.
    pub fn scaling(&self, n: f64) -> f64 {
        match &self.kind {
            Kind::PowerLaw { .. } => {
                let a = self.alpha;
                let abs_gamma = gamma(2.0 - a) / (a - 1.0);
                (self.tail_constant * abs_gamma * n).powf(1.0 / a)
            }
            Kind::Table { .. } => (self.variance() * n / 2.0).sqrt(),
        }
    }

    /// One draw from the law.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.table.get_or_init(|| StepTable::new(self, DEFAULT_CUTOFF)).sample(self, rng)
    }
}

/// Inverse-CDF table on `[0, cutoff)` with an exact rejection sampler for the
/// power-law tail beyond it.
#[derive(Clone, Debug)]
struct StepTable {
    cdf: Vec<f64>,
}

impl StepTable {
    fn new(law: &OffspringLaw, cutoff: usize) -> Self {
        let len = match law.support_max() {
            Some(m) => (m as usize + 1).min(cutoff),
            None => cutoff,
        };
        let mut cdf = Vec::with_capacity(len);
        let mut acc = 0.0;
        for k in 0..len {
            acc += law.prob(k as u64);
            cdf.push(acc);
        }
        if law.support_max().is_some() {
            *cdf.last_mut().unwrap() = 1.0;
        }
        StepTable { cdf }
    }

    fn sample<R: Rng + ?Sized>(&self, law: &OffspringLaw, rng: &mut R) -> u64 {
        let u: f64 = rng.random();
        // Most draws land on the first few values.
        for k in 0..self.cdf.len().min(8) {
            if u < self.cdf[k] {
                return k as u64;
            }
        }
        let k = self.cdf.partition_point(|&c| c <= u);
        if k < self.cdf.len() {
            return k as u64;
        }
        self.sample_tail(law.alpha, self.cdf.len() as u64, rng)
    }

    /// Exact draw from `k ↦ k^{-1-α}` on `k ≥ from`: propose `⌈Y⌉` with `Y`
    /// Pareto on `[from - 1, ∞)` and accept with the likelihood ratio, which
    /// is at most one.
    fn sample_tail<R: Rng + ?Sized>(&self, alpha: f64, from: u64, rng: &mut R) -> u64 {
        let base = (from - 1) as f64;
        loop {
            let u: f64 = 1.0 - rng.random::<f64>();
            let y = base * u.powf(-1.0 / alpha);
            let k = y.ceil().min(9.0e18) as u64;
            let kf = k as f64;
            let cell = (kf - 1.0).powf(-alpha) - kf.powf(-alpha);
            let accept = alpha * kf.powf(-1.0 - alpha) / cell;
            if rng.random::<f64>() < accept {
                return k;
            }
        }
    }
}
