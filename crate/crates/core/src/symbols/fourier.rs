use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};

/// Cosine coefficients `a_0..a_K` of an even 2π-periodic function.
#[derive(Clone, Debug, Serialize)]
pub struct Coefficients {
    pub a: Vec<f64>,
    /// `C` in `|a_k| ≤ C/k²`, measured on `K/2 < k ≤ K`.
    pub decay_const: f64,
    /// `Σ_{k>K} C/k² ≤ C/K`.
    pub tail_bound: f64,
}

impl Coefficients {
    pub fn k(&self) -> usize {
        self.a.len() - 1
    }
}

/// Cosine analysis of an even function sampled on an `8K`-point grid.
pub fn fourier_coefficients(f: impl Fn(f64) -> f64, k: usize) -> Result<Coefficients> {
    if k < 256 || !k.is_power_of_two() {
        return Err(Error::Invalid(format!("K = {k} must be a power of two ≥ 256")));
    }
    let m = 8 * k;
    let mut buf: Vec<Complex64> =
        (0..m).map(|j| Complex64::new(f(2.0 * PI * j as f64 / m as f64), 0.0)).collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let mut a = Vec::with_capacity(k + 1);
    a.push(buf[0].re / m as f64);
    for c in &buf[1..=k] {
        a.push(2.0 * c.re / m as f64);
    }
    let decay_const = (k / 2 + 1..=k).map(|j| a[j].abs() * (j * j) as f64).fold(0.0, f64::max);
    Ok(Coefficients { tail_bound: decay_const / k as f64, decay_const, a })
}

/// `Σ_{k≥1} a_k sin(kt)` summed directly.
pub fn conjugate_series(a: &[f64], t: f64) -> f64 {
    a.iter().enumerate().skip(1).map(|(k, v)| v * (k as f64 * t).sin()).sum()
}

/// `Σ_{k≥0} a_k cos(kt)` summed directly.
pub fn cosine_series(a: &[f64], t: f64) -> f64 {
    a.iter().enumerate().map(|(k, v)| v * (k as f64 * t).cos()).sum()
}

/// Conjugate function tabulated on a fine uniform grid by one inverse FFT and read back
/// with four-point Lagrange interpolation.
#[derive(Clone, Debug)]
pub struct ConjugateTable {
    values: Vec<f64>,
}

/// Default table size.
pub const TABLE_SIZE: usize = 1 << 20;

impl ConjugateTable {
    pub fn new(a: &[f64], size: usize) -> Self {
        let size = size.max(4 * a.len()).next_power_of_two();
        let mut buf = vec![Complex64::new(0.0, 0.0); size];
        for (k, v) in a.iter().enumerate().skip(1) {
            buf[k] = Complex64::new(*v, 0.0);
        }
        FftPlanner::new().plan_fft_inverse(size).process(&mut buf);
        Self { values: buf.iter().map(|c| c.im).collect() }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.values.len();
        let u = t.rem_euclid(2.0 * PI) * n as f64 / (2.0 * PI);
        let i = u.floor();
        let x = u - i;
        let i = i as usize % n;
        let at = |j: isize| self.values[(i as isize + j).rem_euclid(n as isize) as usize];
        let (p0, p1, p2, p3) = (at(-1), at(0), at(1), at(2));
        // Lagrange weights for nodes -1, 0, 1, 2
        let w0 = -x * (x - 1.0) * (x - 2.0) / 6.0;
        let w1 = (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0;
        let w2 = -(x + 1.0) * x * (x - 2.0) / 2.0;
        let w3 = (x + 1.0) * x * (x - 1.0) / 6.0;
        w0 * p0 + w1 * p1 + w2 * p2 + w3 * p3
    }
}

/// Periodic conjugate (Hilbert) transform of uniform samples `v_j = g(2πj/n)`:
/// multiplies the `k`-th Fourier mode by `-i sign(k)`.
pub fn conjugate_samples(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut buf: Vec<Complex64> = v.iter().map(|x| Complex64::new(*x, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        let m = if k == 0 || 2 * k == n {
            Complex64::new(0.0, 0.0)
        } else if 2 * k < n {
            Complex64::new(0.0, -1.0)
        } else {
            Complex64::new(0.0, 1.0)
        };
        *c *= m;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf.iter().map(|c| c.re / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cos3() {
        let c = fourier_coefficients(|t| (3.0 * t).cos(), 512).unwrap();
        for (k, v) in c.a.iter().enumerate() {
            let want = if k == 3 { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-10, "a_{k} = {v}");
        }
        let t = 0.7;
        assert!((conjugate_series(&c.a, t) - (3.0 * t).sin()).abs() < 1e-10);
    }

    #[test]
    fn constant_has_zero_conjugate() {
        let c = fourier_coefficients(|_| 2.5, 256).unwrap();
        assert!((c.a[0] - 2.5).abs() < 1e-14);
        for t in [0.1, 1.0, 3.0] {
            assert!(conjugate_series(&c.a, t).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_k() {
        assert!(fourier_coefficients(|t| t.cos(), 100).is_err());
        assert!(fourier_coefficients(|t| t.cos(), 128).is_err());
    }

    #[test]
    fn table_matches_direct_sum() {
        let c = fourier_coefficients(|t| (-(t.cos())).exp(), 1024).unwrap();
        let tab = ConjugateTable::new(&c.a, 1 << 16);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let t: f64 = rng.gen_range(-PI..PI);
            assert!((tab.eval(t) - conjugate_series(&c.a, t)).abs() < 1e-12);
        }
    }

    #[test]
    fn hilbert_of_samples() {
        let n = 256;
        let v: Vec<f64> = (0..n).map(|j| (5.0 * 2.0 * PI * j as f64 / n as f64).cos()).collect();
        let h = conjugate_samples(&v);
        for (j, x) in h.iter().enumerate() {
            assert!((x - (5.0 * 2.0 * PI * j as f64 / n as f64).sin()).abs() < 1e-12);
        }
    }
}
