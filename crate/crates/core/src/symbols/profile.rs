use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Point from which `f` is flattened so that its even 2π-periodic extension is C² at π.
pub const WARP_START: f64 = 2.0 * PI / 3.0;

/// The profile `f` built from sequences `(h_n)`, `(c_n)`.
///
/// A step function `φ` with `∫_0^{c_n} φ = h_n` is integrated three times:
/// `f_L(t) = π^{-3} ∫_0^t (t-u)^3 φ(u) du`, in closed form as a sum of quartics.
/// Then `f = f_L ∘ τ` where `τ(t) = t` up to [`WARP_START`] and afterwards bends to
/// meet π with zero slope and curvature. Since `τ(t) ≤ t`, the bounds `f(c_n) ≤ h_n`
/// survive, and `f'(π) = f''(π) = 0` makes the periodic extension C².
#[derive(Clone, Debug, Serialize)]
pub struct ProfileFunction {
    /// `h_0 = π, h_1, ..., h_N`
    pub h_targets: Vec<f64>,
    /// `c_0 = π, c_1, ..., c_N`
    pub c_knots: Vec<f64>,
    /// Value of `φ` on `(c_{j+1}, c_j]`, and finally on `(0, c_N]`.
    pub step_levels: Vec<f64>,
    seg_lo: Vec<f64>,
    seg_hi: Vec<f64>,
}

impl ProfileFunction {
    pub fn from_sequences(h: &[f64], c: &[f64]) -> Result<Self> {
        if h.is_empty() || h.len() != c.len() {
            return Err(Error::Invalid("h and c must be nonempty and of equal length".into()));
        }
        let mut hs = vec![PI];
        hs.extend_from_slice(h);
        let mut cs = vec![PI];
        cs.extend_from_slice(c);
        for w in hs.windows(2).chain(cs.windows(2)) {
            if !(w[1] < w[0]) {
                return Err(Error::Invalid("h_n and c_n must be strictly decreasing and below π".into()));
            }
        }
        if !(hs[hs.len() - 1] > 0.0) || !(cs[cs.len() - 1] > 0.0) {
            return Err(Error::Invalid("h_n and c_n must be positive".into()));
        }
        let n = h.len();
        let mut step_levels = Vec::with_capacity(n + 1);
        let mut seg_lo = Vec::with_capacity(n + 1);
        let mut seg_hi = Vec::with_capacity(n + 1);
        for j in 0..n {
            step_levels.push((hs[j] - hs[j + 1]) / (cs[j] - cs[j + 1]));
            seg_lo.push(cs[j + 1]);
            seg_hi.push(cs[j]);
        }
        step_levels.push(hs[n] / cs[n]);
        seg_lo.push(0.0);
        seg_hi.push(cs[n]);
        Ok(Self { h_targets: hs, c_knots: cs, step_levels, seg_lo, seg_hi })
    }

    /// `∫_0^x φ` for the step function.
    pub fn step_integral(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for ((lo, hi), v) in self.seg_lo.iter().zip(&self.seg_hi).zip(&self.step_levels) {
            if x > *lo {
                acc += v * (x.min(*hi) - lo);
            }
        }
        acc
    }

    /// The step function itself at `u ∈ (0, π]`.
    pub fn step(&self, u: f64) -> f64 {
        for ((lo, hi), v) in self.seg_lo.iter().zip(&self.seg_hi).zip(&self.step_levels) {
            if u > *lo && u <= *hi {
                return *v;
            }
        }
        0.0
    }

    /// `f_L(t)` for `t ∈ [0, π]`, before the warp.
    pub fn eval_unwarped(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for ((lo, hi), v) in self.seg_lo.iter().zip(&self.seg_hi).zip(&self.step_levels) {
            if t > *lo {
                let a = t - lo;
                let b = (t - hi).max(0.0);
                let a2 = a * a;
                let b2 = b * b;
                acc += v * (a2 * a2 - b2 * b2);
            }
        }
        acc / (4.0 * PI * PI * PI)
    }

    /// `f_L''(t)`, which is continuous because `φ` is bounded.
    pub fn second_derivative_unwarped(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for ((lo, hi), v) in self.seg_lo.iter().zip(&self.seg_hi).zip(&self.step_levels) {
            if t > *lo {
                let a = t - lo;
                let b = (t - hi).max(0.0);
                acc += v * (a * a - b * b);
            }
        }
        3.0 * acc / (PI * PI * PI)
    }

    /// `f(t)` for any real t (even and 2π-periodic).
    pub fn eval(&self, t: f64) -> f64 {
        self.eval_unwarped(warp(reduce_abs(t)))
    }

    /// Smallest `t ∈ [0, π]` with `f(t) ≥ y`, by bisection.
    pub fn inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if y >= self.eval(PI) {
            return PI;
        }
        let (mut lo, mut hi) = (0.0, PI);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}

/// `|t|` reduced to `[0, π]`.
pub fn reduce_abs(t: f64) -> f64 {
    let r = t.rem_euclid(2.0 * PI);
    if r > PI {
        2.0 * PI - r
    } else {
        r
    }
}

/// `τ` on `[0, π]`.
pub fn warp(t: f64) -> f64 {
    if t <= WARP_START {
        return t;
    }
    let w = PI - WARP_START;
    let x = ((t - WARP_START) / w).min(1.0);
    WARP_START + w * (0.5 * x + (PI * x).sin() / (2.0 * PI))
}
