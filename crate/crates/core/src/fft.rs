//! Linear convolution of real sequences through one complex FFT pair.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

pub(crate) struct Convolver {
    planner: FftPlanner<f64>,
}

impl Convolver {
    pub(crate) fn new() -> Self {
        Convolver { planner: FftPlanner::new() }
    }

    /// First `len` terms of the convolution `a * b`.
    ///
    /// Both inputs are packed into one complex signal `a + ib`; the two
    /// spectra are separated using conjugate symmetry.
    pub(crate) fn convolve(&mut self, a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
        let a = &a[..a.len().min(len)];
        let b = &b[..b.len().min(len)];
        if a.is_empty() || b.is_empty() {
            return vec![0.0; len];
        }
        if a.len().min(b.len()) <= 32 {
            return direct(a, b, len);
        }
        let size = (a.len() + b.len() - 1).next_power_of_two();
        let mut buf = vec![Complex64::new(0.0, 0.0); size];
        for (z, &x) in buf.iter_mut().zip(a) {
            z.re = x;
        }
        for (z, &y) in buf.iter_mut().zip(b) {
            z.im = y;
        }
        self.planner.plan_fft_forward(size).process(&mut buf);
        let mut prod = vec![Complex64::new(0.0, 0.0); size];
        for k in 0..size {
            let zk = buf[k];
            let zc = buf[(size - k) % size].conj();
            let fa = (zk + zc) * 0.5;
            let fb = (zk - zc) * Complex64::new(0.0, -0.5);
            prod[k] = fa * fb;
        }
        self.planner.plan_fft_inverse(size).process(&mut prod);
        let scale = 1.0 / size as f64;
        let mut out: Vec<f64> = prod.iter().take(len).map(|z| z.re * scale).collect();
        out.resize(len, 0.0);
        out
    }
}

fn direct(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len.saturating_sub(i)) {
            out[i + j] += x * y;
        }
    }
    out
}
