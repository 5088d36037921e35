//! Finite-grid stand-ins for limits: tail trends and block-maximum envelopes.

use serde::Serialize;

/// Three-valued outcome of an asymptotic check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Holds {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Rising,
    Falling,
    Flat,
    Mixed,
}

/// Margin used by the Orlicz tail-trend test, in log-ratio units.
pub const TAIL_MARGIN: f64 = 1e-3;

/// Classifies the last half of `y`.
///
/// Flat: every tail value within `margin` of the first tail value.
/// Rising/Falling: net change beyond `margin` with no step reversing by more than `margin`.
pub fn tail_trend(y: &[f64], margin: f64) -> Trend {
    if y.len() < 2 {
        return Trend::Mixed;
    }
    let tail = &y[y.len() / 2..];
    let first = tail[0];
    let last = tail[tail.len() - 1];
    if tail.iter().all(|v| (v - first).abs() <= margin) {
        return Trend::Flat;
    }
    let up = tail.windows(2).all(|w| w[1] - w[0] >= -margin);
    let down = tail.windows(2).all(|w| w[1] - w[0] <= margin);
    if up && last - first > margin {
        Trend::Rising
    } else if down && first - last > margin {
        Trend::Falling
    } else {
        Trend::Mixed
    }
}

fn block_maxima(y: &[f64], blocks: usize) -> Option<Vec<f64>> {
    let tail = &y[y.len() / 2..];
    if blocks == 0 || tail.len() < blocks {
        return None;
    }
    let mut out = Vec::with_capacity(blocks);
    for b in 0..blocks {
        let lo = b * tail.len() / blocks;
        let hi = (b + 1) * tail.len() / blocks;
        let m = tail[lo..hi].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        out.push(m);
    }
    Some(out)
}

/// Decides "y tends to minus infinity (or at least keeps decreasing)" from a sequence
/// ordered toward the limit. Uses the maxima of consecutive tail blocks, i.e. a limsup
/// envelope, so isolated dips do not count as progress.
///
/// Holds when every block maximum drops by more than `delta`; fails when the last block
/// maximum is not below the first by `delta`.
pub fn envelope_decreasing(y: &[f64], blocks: usize, delta: f64) -> (Holds, Vec<f64>) {
    let Some(m) = block_maxima(y, blocks) else {
        return (Holds::Inconclusive, Vec::new());
    };
    let verdict = if m.windows(2).all(|w| w[1] < w[0] - delta) {
        Holds::Holds
    } else if m[m.len() - 1] >= m[0] - delta {
        Holds::Fails
    } else {
        Holds::Inconclusive
    };
    (verdict, m)
}

/// Mirror of [`envelope_decreasing`]: fails when every block maximum rises by more than
/// `delta`, holds when the last block maximum stays within `delta` of the first.
pub fn envelope_bounded(y: &[f64], blocks: usize, delta: f64) -> (Holds, Vec<f64>) {
    let Some(m) = block_maxima(y, blocks) else {
        return (Holds::Inconclusive, Vec::new());
    };
    let verdict = if m.windows(2).all(|w| w[1] > w[0] + delta) {
        Holds::Fails
    } else if m[m.len() - 1] <= m[0] + delta {
        Holds::Holds
    } else {
        Holds::Inconclusive
    };
    (verdict, m)
}

/// Ordinary least squares of `y` on `x`; returns (slope, intercept, r2).
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
        syy += (b - my) * (b - my);
    }
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (slope, my - slope * mx, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trends() {
        let flat = vec![1.0; 10];
        assert_eq!(tail_trend(&flat, 1e-3), Trend::Flat);
        let up: Vec<f64> = (0..10).map(|i| i as f64).collect();
        assert_eq!(tail_trend(&up, 1e-3), Trend::Rising);
        let down: Vec<f64> = up.iter().map(|v| -v).collect();
        assert_eq!(tail_trend(&down, 1e-3), Trend::Falling);
        let zig: Vec<f64> = (0..10).map(|i| (i % 2) as f64).collect();
        assert_eq!(tail_trend(&zig, 1e-3), Trend::Mixed);
    }

    #[test]
    fn envelopes() {
        let down: Vec<f64> = (0..12).map(|i| -(i as f64)).collect();
        assert_eq!(envelope_decreasing(&down, 3, 0.1).0, Holds::Holds);
        assert_eq!(envelope_decreasing(&vec![0.5; 12], 3, 0.1).0, Holds::Fails);
        let up: Vec<f64> = (0..12).map(|i| i as f64).collect();
        assert_eq!(envelope_bounded(&up, 3, 0.1).0, Holds::Fails);
        assert_eq!(envelope_bounded(&down, 3, 0.1).0, Holds::Holds);
    }

    #[test]
    fn fit_line() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 1.5 * v - 2.0).collect();
        let (s, c, r2) = linear_fit(&x, &y);
        assert!((s - 1.5).abs() < 1e-12 && (c + 2.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
    }
}
