//! Special functions not covered by `statrs`.

pub use statrs::function::gamma::{gamma, ln_gamma};

/// Bernoulli numbers B_2, B_4, ..., B_12.
const BERNOULLI: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

/// Tail of the Riemann zeta series, `sum_{k >= from} k^{-s}` for `s > 1`.
///
/// Sums the first terms directly and finishes with Euler–Maclaurin, which
/// is accurate to roughly machine precision once the start index is past 16.
pub fn zeta_tail(s: f64, from: u64) -> f64 {
    assert!(s > 1.0, "zeta_tail needs s > 1");
    let from = from.max(1);
    let start = from.max(16);
    let mut direct = 0.0;
    for k in (from..start).rev() {
        direct += (k as f64).powf(-s);
    }
    let n = start as f64;
    let mut em = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // Derivative factor s(s+1)...(s+2j-2) / (2j)! times B_2j n^{-s-2j+1}.
    let mut rising = s;
    let mut fact = 2.0;
    let mut power = n.powf(-s - 1.0);
    for (j, b) in BERNOULLI.iter().enumerate() {
        em += b / fact * rising * power;
        let a = (2 * j + 1) as f64;
        rising *= (s + a) * (s + a + 1.0);
        fact *= (a + 2.0) * (a + 3.0);
        power /= n * n;
    }
    direct + em
}

/// Riemann zeta function for real `s > 1`.
pub fn zeta(s: f64) -> f64 {
    zeta_tail(s, 1)
}
