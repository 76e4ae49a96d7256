//! Spectrally positive α-stable law with Laplace exponent `λ^α`, i.e.
//! `E[exp(-λ X_t)] = exp(t λ^α)`.

use std::f64::consts::PI;

use rand::Rng;

use crate::special::gamma;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StableParams {
    alpha: f64,
}

impl StableParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 1.0 && alpha < 2.0 {
            Ok(StableParams { alpha })
        } else {
            Err(Error::InvalidAlpha(alpha))
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Precomputed constants of the Chambers–Mallows–Stuck transform with skewness
/// one, rescaled so that the Laplace transform is `exp(λ^α)` at time one.
#[derive(Clone, Copy, Debug)]
pub struct StableSampler {
    alpha: f64,
    shift: f64,
    factor: f64,
}

impl StableSampler {
    pub fn new(params: StableParams) -> Self {
        let a = params.alpha;
        let tan = (PI * a / 2.0).tan();
        let shift = tan.atan() / a;
        let skew_scale = (1.0 + tan * tan).powf(1.0 / (2.0 * a));
        // S_α(σ, 1, 0) has E[exp(-λX)] = exp(-σ^α λ^α / cos(πα/2)); cos < 0 here.
        let sigma = (PI * a / 2.0).cos().abs().powf(1.0 / a);
        StableSampler { alpha: a, shift, factor: skew_scale * sigma }
    }

    /// One draw of `X_1`.
    pub fn sample_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let a = self.alpha;
        let v = PI * (rng.random::<f64>() - 0.5);
        let w = -(1.0 - rng.random::<f64>()).ln();
        let av = a * (v + self.shift);
        let lead = av.sin() / v.cos().powf(1.0 / a);
        let tail = ((v - av).cos() / w).powf((1.0 - a) / a);
        self.factor * lead * tail
    }

    /// One draw of `X_t`, using `X_t = t^{1/α} X_1` in law.
    pub fn sample<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> f64 {
        t.powf(1.0 / self.alpha) * self.sample_unit(rng)
    }
}

/// One draw of `X_t`.
pub fn sample_increment<R: Rng + ?Sized>(params: StableParams, t: f64, rng: &mut R) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("time must be positive, got {t}")));
    }
    Ok(StableSampler::new(params).sample(t, rng))
}

/// Density of the Lévy measure, `α(α-1)/Γ(2-α) r^{-α-1}`.
pub fn levy_density(params: StableParams, r: f64) -> f64 {
    let a = params.alpha;
    a * (a - 1.0) / gamma(2.0 - a) * r.powf(-a - 1.0)
}

/// Lévy measure of `[r, ∞)`.
pub fn levy_tail(params: StableParams, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let a = params.alpha;
    Ok((a - 1.0) / gamma(2.0 - a) * r.powf(-a))
}

/// Default tolerance of [`beta_root`].
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default hard cap on the number of series terms.
pub const DEFAULT_TRUNCATION: usize = 200;

/// `f(β) = Σ_{n≥0} (-1)^n β^n / ((n-α) n!)`, stopping once a term drops below
/// `tol / 10` or after `truncation` terms.
pub fn beta_series(alpha: f64, beta: f64, truncation: usize, tol: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = 1.0; // (-β)^n / n!
    for n in 0..truncation {
        let term = power / (n as f64 - alpha);
        sum += term;
        if n > 0 && term.abs() < tol / 10.0 {
            break;
        }
        power *= -beta / (n + 1) as f64;
    }
    sum
}

/// Root in `(0, 1)` of [`beta_series`], by bisection.
pub fn beta_root(params: StableParams, truncation: usize, tol: f64) -> Result<f64> {
    if truncation < 20 || !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need truncation >= 20 and tol > 0, got {truncation} and {tol}"
        )));
    }
    let f = |b: f64| beta_series(params.alpha, b, truncation, tol);
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let (f_lo, f_hi) = (f(lo), f(hi));
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::NoSignChange { lo, hi });
    }
    loop {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() <= tol && hi - lo <= tol {
            return Ok(mid);
        }
        if hi - lo <= f64::EPSILON {
            return Ok(mid);
        }
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Expected largest jump of the normalized excursion, `Γ(1-1/α) β`.
pub fn expected_max_jump(params: StableParams) -> f64 {
    let beta = beta_root(params, DEFAULT_TRUNCATION, DEFAULT_TOL).expect("series root exists for alpha in (1,2)");
    gamma(1.0 - 1.0 / params.alpha) * beta
}

/// The Laplace transform `E[exp(-λ X_t)] = exp(t λ^α)`.
pub fn laplace_transform(params: StableParams, t: f64, lambda: f64) -> f64 {
    (t * lambda.powf(params.alpha)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn params(a: f64) -> StableParams {
        StableParams::new(a).unwrap()
    }

    #[test]
    fn rejects_alpha_outside_open_interval() {
        for a in [1.0, 2.0, 0.5, 2.5, f64::NAN] {
            assert!(StableParams::new(a).is_err());
        }
    }

    #[test]
    fn rejects_nonpositive_time_and_radius() {
        let mut rng = stream(1, 0);
        assert!(sample_increment(params(1.5), 0.0, &mut rng).is_err());
        assert!(sample_increment(params(1.5), -1.0, &mut rng).is_err());
        assert!(levy_tail(params(1.5), 0.0).is_err());
    }

    #[test]
    fn levy_tail_at_one_and_scaling() {
        let p = params(1.5);
        let at_one = levy_tail(p, 1.0).unwrap();
        assert!((at_one - 0.5 / gamma(0.5)).abs() < 1e-15);
        assert!((levy_tail(p, 2.0).unwrap() - at_one * 2f64.powf(-1.5)).abs() < 1e-15);
        for r in [0.1, 0.7, 3.0, 1e4] {
            let scaled = levy_tail(p, r).unwrap() * r.powf(1.5);
            assert!(((scaled - at_one) / at_one).abs() < 1e-12);
        }
    }

    #[test]
    fn laplace_transform_at_one_half() {
        // 10^6 draws, three standard errors.
        let p = params(1.5);
        let sampler = StableSampler::new(p);
        let mut rng = stream(11, 0);
        let n = 1_000_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let e = (-0.5 * sampler.sample_unit(&mut rng)).exp();
            s += e;
            s2 += e * e;
        }
        let mean = s / n as f64;
        let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
        let target = laplace_transform(p, 1.0, 0.5);
        assert!((mean - target).abs() < 3.0 * se, "{mean} vs {target} (se {se})");
    }

    #[test]
    fn heavier_tail_for_smaller_alpha() {
        let quantile = |a: f64| {
            let sampler = StableSampler::new(params(a));
            let mut rng = stream(5, 0);
            let mut xs: Vec<f64> = (0..1_000_000).map(|_| sampler.sample_unit(&mut rng)).collect();
            let k = (0.999 * xs.len() as f64) as usize;
            *xs.select_nth_unstable_by(k, |a, b| a.total_cmp(b)).1
        };
        assert!(quantile(1.2) > quantile(1.8));
    }

    #[test]
    fn beta_root_brackets_sign_change() {
        let p = params(1.5);
        let b = beta_root(p, DEFAULT_TRUNCATION, DEFAULT_TOL).unwrap();
        assert!(b > 0.0 && b < 1.0);
        let f = |x: f64| beta_series(1.5, x, DEFAULT_TRUNCATION, DEFAULT_TOL);
        assert!(f(b).abs() <= DEFAULT_TOL);
        assert!(f(b - DEFAULT_TOL) < 0.0 || f(b + DEFAULT_TOL) > 0.0);
        assert!(f(b - 1e-6) < 0.0 && f(b + 1e-6) > 0.0);
    }

    #[test]
    fn beta_root_input_validation() {
        assert!(beta_root(params(1.5), 10, 1e-10).is_err());
        assert!(beta_root(params(1.5), 50, 0.0).is_err());
    }

    #[test]
    fn expected_max_jump_endpoints_and_monotonicity() {
        let values: Vec<f64> = (0..=18).map(|i| expected_max_jump(params(1.05 + 0.05 * i as f64))).collect();
        assert!(values.iter().all(|&v| v > 0.0 && v < 1.0));
        assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
        assert!(values[0] > 0.9, "{}", values[0]);
        assert!(*values.last().unwrap() < 0.4, "{}", values.last().unwrap());
        assert!(expected_max_jump(params(1.999)) < 0.1);
        let near_one = expected_max_jump(params(1.001));
        let near_two = expected_max_jump(params(1.999));
        assert!(near_one > values[0] && near_two < values[18]);
    }
}
