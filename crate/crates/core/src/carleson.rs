//! Empirical pullback measures: Carleson functions, dyadic windows, Luecking sums.
//!
//! A sample keeps, for every boundary point `t_i`, the polar data of `φ*(e^{it_i})` as
//! `(angle, depth)` with `depth = 1 - |φ*|`. A Carleson window `W(ξ, h)` holds the
//! points with `depth ≤ h` and angle within `h` of `ξ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symbols::Symbol;
use crate::trend::linear_fit;

/// Windows must expect at least this many points: `h ≥ RESOLUTION_COUNT / n`.
pub const RESOLUTION_COUNT: f64 = 10.0;
/// Points used in fits need ten times that count.
pub const FIT_COUNT: u64 = 100;
/// Depth under which a boundary value counts as unimodular.
pub const SATURATION: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct BoundarySample {
    pub n_points: usize,
    /// `None` for the equispaced grid `t_i = 2π(i + 1/2)/n`.
    pub seed: Option<u64>,
    /// Only points with `depth ≤ max_depth` are kept.
    pub max_depth: f64,
    /// Sorted ascending, in `(-π, π]`.
    pub angle: Vec<f64>,
    pub depth: Vec<f64>,
    /// Kept points with `depth ≤ SATURATION`.
    pub saturated: usize,
}

impl BoundarySample {
    pub fn kept(&self) -> usize {
        self.angle.len()
    }

    /// Fraction of all samples that are numerically on the circle.
    pub fn saturated_fraction(&self) -> f64 {
        self.saturated as f64 / self.n_points as f64
    }

    pub fn value(&self, i: usize) -> Complex64 {
        Complex64::from_polar(1.0 - self.depth[i], self.angle[i])
    }
}

fn reduce_angle(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Evaluates `symbol` at `n_points` boundary points and keeps those with
/// `depth ≤ max_depth`. Random sampling redraws points that land in the excluded
/// neighbourhood of a singularity.
pub fn sample_boundary(symbol: &Symbol, n_points: usize, seed: Option<u64>, max_depth: f64) -> Result<BoundarySample> {
    if n_points < 10_000 {
        return Err(Error::Invalid(format!("n_points = {n_points} is below 10^4")));
    }
    if !(max_depth > 0.0 && max_depth <= 1.0) {
        return Err(Error::Invalid(format!("max_depth = {max_depth} outside (0, 1]")));
    }
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let mut saturated = 0;
    let mut push = |l: Complex64| {
        let depth = -l.re.exp_m1();
        if depth <= max_depth {
            if depth <= SATURATION {
                saturated += 1;
            }
            pts.push((reduce_angle(l.im), depth));
        }
    };
    match seed {
        None => {
            for i in 0..n_points {
                let t = 2.0 * PI * (i as f64 + 0.5) / n_points as f64;
                let t = if t > PI { t - 2.0 * PI } else { t };
                // the grid never comes within 10⁻¹² of 0 for any feasible n
                if let Some(l) = symbol.boundary_log(t) {
                    push(l);
                }
            }
        }
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            for _ in 0..n_points {
                let l = loop {
                    let t: f64 = rng.gen_range(-PI..PI);
                    if let Some(l) = symbol.boundary_log(t) {
                        break l;
                    }
                };
                push(l);
            }
        }
    }
    pts.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let (angle, depth) = pts.into_iter().unzip();
    Ok(BoundarySample { n_points, seed, max_depth, angle, depth, saturated })
}

#[derive(Clone, Debug, Serialize)]
pub struct CarlesonProfile {
    pub h: Vec<f64>,
    pub rho: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Points in the maximizing window.
    pub counts: Vec<u64>,
    /// Candidate window positions (points with `depth ≤ h`).
    pub n_centers: Vec<usize>,
    pub n_points: usize,
    /// Angular half-width of the windows in units of `h`.
    pub width: f64,
}

impl CarlesonProfile {
    /// CSV with columns `h,rho,stderr,n_points`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("h,rho,stderr,n_points\n");
        for i in 0..self.h.len() {
            s.push_str(&format!("{},{},{},{}\n", self.h[i], self.rho[i], self.stderr[i], self.n_points));
        }
        s
    }

    /// Indices whose window count is at least `min_count`.
    pub fn usable(&self, min_count: u64) -> Vec<usize> {
        (0..self.h.len()).filter(|&i| self.counts[i] >= min_count && self.rho[i] > 0.0).collect()
    }

    /// Smallest height with an interpretable estimate.
    pub fn resolution_floor(&self) -> f64 {
        RESOLUTION_COUNT / self.n_points as f64
    }
}

#[derive(Clone, Debug)]
pub struct RhoOptions {
    /// Bootstrap replicates with Poisson(1) weights; 0 disables error bars.
    pub bootstrap: usize,
    pub seed: u64,
    /// Angular half-width in units of h (1 for the standard window).
    pub width: f64,
}

impl Default for RhoOptions {
    fn default() -> Self {
        Self { bootstrap: 16, seed: 0, width: 1.0 }
    }
}

/// `n` log-spaced heights in `[lo, hi]`.
pub fn h_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    crate::orlicz::log_grid(lo, hi, n)
}

/// Default heights: 40 log-spaced points in `[10⁻⁴, 0.5]`.
pub fn default_h_grid() -> Vec<f64> {
    h_grid(1e-4, 0.5, 40)
}

/// Largest count of angles (sorted, in a circle of length 2π) inside any arc of length
/// `span`, with an arc starting at every sample.
fn arc_max(a: &[f64], span: f64) -> u64 {
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let mut best = 0;
    let mut j = 0;
    for i in 0..m {
        if j < i {
            j = i;
        }
        while j < i + m {
            let aj = if j < m { a[j] } else { a[j - m] + 2.0 * PI };
            if aj - a[i] <= span {
                j += 1;
            } else {
                break;
            }
        }
        best = best.max(j - i);
    }
    best as u64
}

fn arc_max_weighted(a: &[f64], w: &[u8], span: f64) -> u64 {
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let mut best = 0;
    let mut run = 0u64;
    let mut j = 0;
    for i in 0..m {
        if j < i {
            j = i;
            run = 0;
        }
        while j < i + m {
            let aj = if j < m { a[j] } else { a[j - m] + 2.0 * PI };
            if aj - a[i] <= span {
                run += w[if j < m { j } else { j - m }] as u64;
                j += 1;
            } else {
                break;
            }
        }
        best = best.max(run);
        if j > i {
            run -= w[i] as u64;
        }
    }
    best
}

fn subsample(sample: &BoundarySample, h: f64) -> Vec<f64> {
    sample.angle.iter().zip(&sample.depth).filter(|(_, d)| **d <= h).map(|(a, _)| *a).collect()
}

/// Raw count of the fullest window `W(ξ, h)` with angular half-width `width·h`, with no
/// resolution check.
pub fn window_sup(sample: &BoundarySample, h: f64, width: f64) -> u64 {
    arc_max(&subsample(sample, h), 2.0 * width * h)
}

/// `ρ(h) = sup_ξ m_φ(W(ξ, h))` for every height in `h_grid`.
pub fn rho_profile(sample: &BoundarySample, h_grid: &[f64], opts: &RhoOptions) -> Result<CarlesonProfile> {
    let n = sample.n_points as f64;
    for &h in h_grid {
        if !(h * n >= RESOLUTION_COUNT) {
            return Err(Error::Resolution(format!("h = {h} is below the resolution floor {}", RESOLUTION_COUNT / n)));
        }
        if h > 1.0 || h > sample.max_depth {
            return Err(Error::Invalid(format!("h = {h} exceeds the sampled depth {}", sample.max_depth)));
        }
    }
    let mut counts = Vec::with_capacity(h_grid.len());
    let mut n_centers = Vec::with_capacity(h_grid.len());
    for &h in h_grid {
        let sub = subsample(sample, h);
        n_centers.push(sub.len());
        counts.push(arc_max(&sub, 2.0 * opts.width * h));
    }
    let rho: Vec<f64> = counts.iter().map(|c| *c as f64 / n).collect();

    let mut stderr = vec![0.0; h_grid.len()];
    if opts.bootstrap > 1 {
        let pois = Poisson::new(1.0).expect("valid rate");
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9_7f4a_7c15);
        let m = sample.kept();
        // one weight vector per replicate, shared by every height
        let weights: Vec<Vec<u8>> = (0..opts.bootstrap)
            .map(|_| (0..m).map(|_| (pois.sample(&mut rng) as u64).min(255) as u8).collect())
            .collect();
        let b = opts.bootstrap as f64;
        for (k, &h) in h_grid.iter().enumerate() {
            let idx: Vec<u32> = (0..m as u32).filter(|&i| sample.depth[i as usize] <= h).collect();
            let a: Vec<f64> = idx.iter().map(|&i| sample.angle[i as usize]).collect();
            let (mut sum, mut sum2) = (0.0, 0.0);
            for w in &weights {
                let ww: Vec<u8> = idx.iter().map(|&i| w[i as usize]).collect();
                let r = arc_max_weighted(&a, &ww, 2.0 * opts.width * h) as f64 / n;
                sum += r;
                sum2 += r * r;
            }
            let mean = sum / b;
            stderr[k] = ((sum2 / b - mean * mean).max(0.0) * b / (b - 1.0)).sqrt();
        }
    }
    Ok(CarlesonProfile {
        h: h_grid.to_vec(),
        rho,
        stderr,
        counts,
        n_centers,
        n_points: sample.n_points,
        width: opts.width,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Correction {
    None,
    /// Fit `log ρ + θ log log(1/h)` instead of `log ρ`.
    LogPower(f64),
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentFit {
    pub alpha: f64,
    pub intercept: f64,
    pub r2: f64,
    /// Heights actually used.
    pub h_used: Vec<f64>,
}

/// Least-squares slope of `log ρ (+ θ log log 1/h)` against `log h` over the points in
/// `range` whose window count reaches [`FIT_COUNT`].
pub fn fit_exponent(profile: &CarlesonProfile, correction: Correction, range: Option<(f64, f64)>) -> Result<ExponentFit> {
    let (lo, hi) = range.unwrap_or((0.0, 1.0));
    let idx: Vec<usize> = profile
        .usable(FIT_COUNT)
        .into_iter()
        .filter(|&i| profile.h[i] >= lo * (1.0 - 1e-12) && profile.h[i] <= hi * (1.0 + 1e-12) && profile.h[i] < 1.0)
        .collect();
    if idx.len() < 8 {
        return Err(Error::Resolution(format!("only {} resolved heights in the fit range, need 8", idx.len())));
    }
    let x: Vec<f64> = idx.iter().map(|&i| profile.h[i].ln()).collect();
    let y: Vec<f64> = idx
        .iter()
        .map(|&i| {
            let base = profile.rho[i].ln();
            match correction {
                Correction::None => base,
                Correction::LogPower(theta) => base + theta * (1.0 / profile.h[i]).ln().ln(),
            }
        })
        .collect();
    let (alpha, intercept, r2) = linear_fit(&x, &y);
    Ok(ExponentFit { alpha, intercept, r2, h_used: idx.iter().map(|&i| profile.h[i]).collect() })
}

/// Fit on synthetic data, for callers that already hold `(h, ρ)` pairs.
pub fn fit_exponent_raw(h: &[f64], rho: &[f64], correction: Correction) -> (f64, f64) {
    let x: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = h
        .iter()
        .zip(rho)
        .map(|(h, r)| match correction {
            Correction::None => r.ln(),
            Correction::LogPower(theta) => r.ln() + theta * (1.0 / h).ln().ln(),
        })
        .collect();
    let (a, _, r2) = linear_fit(&x, &y);
    (a, r2)
}

/// `m[n][j] = m_φ(W_{n,j})` with
/// `W_{n,j} = {1 - 2^{-n} ≤ |z| < 1, 2πj/2^n ≤ arg z < 2π(j+1)/2^n}`.
#[derive(Clone, Debug, Serialize)]
pub struct DyadicMeasure {
    pub depth: usize,
    /// `masses[n-1][j]` for level n.
    pub masses: Vec<Vec<f64>>,
    pub counts: Vec<Vec<u64>>,
    pub n_points: usize,
}

impl DyadicMeasure {
    pub fn mass(&self, n: usize, j: usize) -> f64 {
        self.masses[n - 1][j]
    }

    /// CSV with columns `n,j,mass`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,j,mass\n");
        for (lvl, row) in self.masses.iter().enumerate() {
            for (j, m) in row.iter().enumerate() {
                s.push_str(&format!("{},{},{}\n", lvl + 1, j, m));
            }
        }
        s
    }

    pub fn max_at(&self, n: usize) -> f64 {
        self.masses[n - 1].iter().cloned().fold(0.0, f64::max)
    }
}

pub fn dyadic_measures(sample: &BoundarySample, depth: usize) -> Result<DyadicMeasure> {
    if depth == 0 || depth > 40 || (1u64 << depth) as f64 > sample.n_points as f64 / 100.0 {
        return Err(Error::Invalid(format!(
            "depth {depth} too deep for {} samples (need 2^depth ≤ n/100)",
            sample.n_points
        )));
    }
    if sample.max_depth < 0.5 {
        return Err(Error::Invalid("dyadic windows need samples kept down to depth 1/2".into()));
    }
    let mut counts: Vec<Vec<u64>> = (1..=depth).map(|n| vec![0u64; 1 << n]).collect();
    for (a, d) in sample.angle.iter().zip(&sample.depth) {
        if !(*d > 0.0) || *d > 0.5 {
            continue;
        }
        let u = a.rem_euclid(2.0 * PI) / (2.0 * PI);
        for n in 1..=depth {
            if *d > 0.5f64.powi(n as i32) {
                break;
            }
            let cells = 1usize << n;
            let j = ((u * cells as f64) as usize).min(cells - 1);
            counts[n - 1][j] += 1;
        }
    }
    let n = sample.n_points as f64;
    let masses = counts.iter().map(|row| row.iter().map(|c| *c as f64 / n).collect()).collect();
    Ok(DyadicMeasure { depth, masses, counts, n_points: sample.n_points })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convergence {
    Converging,
    Diverging,
    Inconclusive,
}

/// Below/above these the last three tail ratios call convergence/divergence.
pub const CONVERGING_RATIO: f64 = 0.95;
pub const DIVERGING_RATIO: f64 = 1.05;

#[derive(Clone, Debug, Serialize)]
pub struct LueckingSums {
    pub p: f64,
    /// `T_n = Σ_j 2^{np/2} m[n][j]^{p/2}`
    pub level_terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// `T_n / T_{n-1}` for `n = 2..=N`.
    pub tail_ratios: Vec<f64>,
    pub verdict: Convergence,
}

pub fn luecking_partial_sums(dm: &DyadicMeasure, p: f64) -> Result<LueckingSums> {
    if !(p > 0.0) {
        return Err(Error::Invalid(format!("p = {p} must be positive")));
    }
    let mut level_terms = Vec::with_capacity(dm.depth);
    for (lvl, row) in dm.masses.iter().enumerate() {
        let n = (lvl + 1) as f64;
        let scale = (n * p / 2.0 * 2f64.ln()).exp();
        level_terms.push(row.iter().map(|m| scale * m.powf(p / 2.0)).sum::<f64>());
    }
    let mut partial_sums = Vec::with_capacity(dm.depth);
    let mut acc = 0.0;
    for t in &level_terms {
        acc += t;
        partial_sums.push(acc);
    }
    let tail_ratios: Vec<f64> = level_terms
        .windows(2)
        .map(|w| if w[0] == 0.0 { if w[1] == 0.0 { 0.0 } else { f64::INFINITY } } else { w[1] / w[0] })
        .collect();
    let last: Vec<f64> = tail_ratios.iter().rev().take(3).cloned().collect();
    let verdict = if last.len() < 3 {
        Convergence::Inconclusive
    } else if last.iter().all(|r| *r < CONVERGING_RATIO) {
        Convergence::Converging
    } else if last.iter().all(|r| *r > DIVERGING_RATIO) {
        Convergence::Diverging
    } else {
        Convergence::Inconclusive
    };
    Ok(LueckingSums { p, level_terms, partial_sums, tail_ratios, verdict })
}
