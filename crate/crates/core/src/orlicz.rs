//! Orlicz functions evaluated through `L(s) = log Ψ(e^s)`.
//!
//! Every ratio `Ψ(Ax)/Ψ(x)^k` becomes `L(s + log A) - k L(s)`, so checks run far past
//! the point where `Ψ` itself leaves the double range.

use std::f64::consts::E;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::trend::{linear_fit, tail_trend, Holds, Trend, TAIL_MARGIN};

/// Smallest `s` accepted by [`OrliczFunction::eval_log`].
pub const MIN_S: f64 = -700.0;

/// `log(e^y - 1)` for `y > 0`.
pub fn log_expm1(y: f64) -> f64 {
    if y > 1.0 {
        y + (-(-y).exp()).ln_1p()
    } else {
        y.exp_m1().ln()
    }
}

/// `log(1 + e^s)`.
pub fn log1p_exp(s: f64) -> f64 {
    if s > 0.0 {
        s + (-s).exp().ln_1p()
    } else {
        s.exp().ln_1p()
    }
}

/// `log(e^a + e^b)`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LogForm {
    /// `x^{log log x}`
    LogLog,
    /// `x^{log log log x}`
    LogLogLog,
}

/// How a piecewise function is filled in between knots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Interp {
    /// Linear in `(log x, log Ψ)`.
    LogLog,
    /// Linear in `(x, Ψ)`.
    LinearX,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Power(f64),
    /// `e^{x^α} - 1`
    ExpPower(f64),
    /// `e^{(log(x+1))^α} - 1`
    ExpLogPower(f64),
    /// `e^x - 1`
    ExpX,
    LogExponent(LogForm),
    /// `exp(log x · log log log x)`
    ExplicitProduct,
    Piecewise {
        /// `(log x_i, log Ψ(x_i))`
        knots: Vec<(f64, f64)>,
        interp: Interp,
        /// Power continued past the last knot.
        tail_exponent: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrliczFunction {
    pub kind: Kind,
    /// Below this x the function is the chord to the origin.
    pub domain_floor: f64,
}

impl OrliczFunction {
    pub fn power(p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::Invalid(format!("power exponent {p} < 1 is not convex")));
        }
        Ok(Self { kind: Kind::Power(p), domain_floor: 0.0 })
    }

    pub fn exp_power(alpha: f64) -> Result<Self> {
        if !(alpha >= 1.0) {
            return Err(Error::Invalid(format!("exp_power exponent {alpha} < 1")));
        }
        Ok(Self { kind: Kind::ExpPower(alpha), domain_floor: 0.0 })
    }

    pub fn exp_log_power(alpha: f64) -> Result<Self> {
        if !(alpha >= 2.0) {
            return Err(Error::Invalid(format!("exp_log_power exponent {alpha} < 2")));
        }
        Ok(Self { kind: Kind::ExpLogPower(alpha), domain_floor: 0.0 })
    }

    pub fn exp_x() -> Self {
        Self { kind: Kind::ExpX, domain_floor: 0.0 }
    }

    /// `x^{log log x}` above `x = e`, where it equals 1; linear below.
    pub fn loglog() -> Self {
        Self { kind: Kind::LogExponent(LogForm::LogLog), domain_floor: E }
    }

    /// `x^{log log log x}` above `x = e^e`, where it equals 1; linear below.
    pub fn logloglog() -> Self {
        Self { kind: Kind::LogExponent(LogForm::LogLogLog), domain_floor: E.exp() }
    }

    pub fn explicit_product() -> Self {
        Self { kind: Kind::ExplicitProduct, domain_floor: E.exp() }
    }

    /// Piecewise function from knots given in log coordinates `(log x, log Ψ)`.
    ///
    /// Convexity is checked: log-log slopes must be nondecreasing and at least 1, and for
    /// [`Interp::LinearX`] the chord slopes in `x` must be nondecreasing.
    pub fn piecewise_log(knots: Vec<(f64, f64)>, interp: Interp) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Invalid("piecewise function needs at least two knots".into()));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) || !(w[1].1 > w[0].1) {
                return Err(Error::Invalid("knots must be strictly increasing in x and Ψ".into()));
            }
        }
        if knots.iter().any(|k| !k.0.is_finite() || !k.1.is_finite()) {
            return Err(Error::Invalid("non-finite knot".into()));
        }
        let slopes: Vec<f64> =
            knots.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
        let last = knots[knots.len() - 1];
        let tail_exponent = match interp {
            Interp::LogLog => {
                if slopes[0] < 1.0 - 1e-12 {
                    return Err(Error::Construction("first log-log slope below 1".into()));
                }
                for w in slopes.windows(2) {
                    if w[1] < w[0] - 1e-12 {
                        return Err(Error::Construction("log-log slopes decrease".into()));
                    }
                }
                slopes[slopes.len() - 1]
            }
            Interp::LinearX => {
                // log of the chord slope (Ψ_{i+1} - Ψ_i)/(x_{i+1} - x_i)
                let chords: Vec<f64> = knots
                    .windows(2)
                    .map(|w| w[0].1 + log_expm1(w[1].1 - w[0].1) - w[0].0 - log_expm1(w[1].0 - w[0].0))
                    .collect();
                if chords[0] < knots[0].1 - knots[0].0 - 1e-12 {
                    return Err(Error::Construction("first chord flatter than the origin chord".into()));
                }
                for w in chords.windows(2) {
                    if w[1] < w[0] - 1e-12 {
                        return Err(Error::Construction("chord slopes decrease".into()));
                    }
                }
                // the continuation x ↦ Ψ_last (x/x_last)^q must leave the last knot at
                // least as steeply as the last chord
                let tangent = (chords[chords.len() - 1] - last.1 + last.0).exp();
                slopes[slopes.len() - 1].max(tangent)
            }
        };
        Ok(Self {
            domain_floor: knots[0].0.exp(),
            kind: Kind::Piecewise { knots, interp, tail_exponent },
        })
    }

    /// Piecewise function from `(x, Ψ(x))` pairs.
    pub fn piecewise(points: &[(f64, f64)], interp: Interp) -> Result<Self> {
        if points.iter().any(|p| !(p.0 > 0.0) || !(p.1 > 0.0)) {
            return Err(Error::Invalid("piecewise knots must be positive".into()));
        }
        Self::piecewise_log(points.iter().map(|p| (p.0.ln(), p.1.ln())).collect(), interp)
    }

    pub fn label(&self) -> String {
        match &self.kind {
            Kind::Power(p) => format!("power:{p}"),
            Kind::ExpPower(a) => format!("exp_power:{a}"),
            Kind::ExpLogPower(a) => format!("exp_log_power:{a}"),
            Kind::ExpX => "exp_x".into(),
            Kind::LogExponent(LogForm::LogLog) => "loglog".into(),
            Kind::LogExponent(LogForm::LogLogLog) => "logloglog".into(),
            Kind::ExplicitProduct => "explicit_product".into(),
            Kind::Piecewise { knots, interp, .. } => {
                format!("piecewise[{} knots, {:?}]", knots.len(), interp)
            }
        }
    }

    /// `L(s) = log Ψ(e^s)`.
    pub fn eval_log(&self, s: f64) -> Result<f64> {
        if !s.is_finite() || s < MIN_S {
            return Err(Error::Domain(format!("s = {s} is outside the representable domain")));
        }
        let v = match &self.kind {
            Kind::Power(p) => p * s,
            Kind::ExpPower(a) => log_expm1((a * s).exp()),
            Kind::ExpLogPower(a) => log_expm1(log1p_exp(s).powf(*a)),
            Kind::ExpX => log_expm1(s.exp()),
            Kind::LogExponent(LogForm::LogLog) => {
                if s <= 1.0 {
                    s - 1.0
                } else {
                    s * s.ln()
                }
            }
            Kind::LogExponent(LogForm::LogLogLog) | Kind::ExplicitProduct => {
                if s <= E {
                    s - E
                } else {
                    s * s.ln().ln()
                }
            }
            Kind::Piecewise { knots, interp, tail_exponent } => {
                piecewise_eval(knots, *interp, *tail_exponent, s)
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!("log Ψ(e^{s}) is not representable")))
        }
    }

    /// `Ψ(x)`, possibly `inf` when it leaves the double range.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Ok(0.0);
        }
        if !(x > 0.0) {
            return Err(Error::Domain(format!("x = {x} is negative")));
        }
        Ok(self.eval_log(x.ln())?.exp())
    }

    /// `s = log Ψ^{-1}(e^{ly})` by bisection on `L`.
    pub fn inverse_log(&self, ly: f64) -> Result<f64> {
        if !ly.is_finite() {
            return Err(Error::Domain(format!("log y = {ly} is not finite")));
        }
        let below = |s: f64| self.eval_log(s).map(|v| v < ly).unwrap_or(false);
        let mut lo = -1.0;
        while !below(lo) {
            lo = 2.0 * lo - 1.0;
            if lo < MIN_S {
                if below(MIN_S) {
                    lo = MIN_S;
                    break;
                }
                return Err(Error::Domain(format!("log y = {ly} below the evaluable range")));
            }
        }
        let mut hi = 1.0;
        while below(hi) {
            hi = 2.0 * hi + 1.0;
            if hi > 1e6 {
                return Err(Error::Domain(format!("log y = {ly} above the evaluable range")));
            }
        }
        // `below` is false past the representable range, which keeps hi valid there.
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if below(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (el, eh) = (self.eval_log(lo), self.eval_log(hi));
        Ok(match (el, eh) {
            (Ok(a), Ok(b)) if (a - ly).abs() < (b - ly).abs() => lo,
            (Ok(_), Err(_)) => lo,
            _ => hi,
        })
    }

    /// `Ψ^{-1}(y)`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Err(Error::Domain(format!("inverse needs y > 0, got {y}")));
        }
        Ok(self.inverse_log(y.ln())?.exp())
    }

    /// Largest log-knot of a piecewise function.
    pub fn last_knot_log(&self) -> Option<f64> {
        match &self.kind {
            Kind::Piecewise { knots, .. } => knots.last().map(|k| k.0),
            _ => None,
        }
    }
}

fn piecewise_eval(knots: &[(f64, f64)], interp: Interp, tail: f64, s: f64) -> f64 {
    let first = knots[0];
    let last = knots[knots.len() - 1];
    if s <= first.0 {
        return first.1 + (s - first.0);
    }
    if s >= last.0 {
        return last.1 + tail * (s - last.0);
    }
    let i = knots.partition_point(|k| k.0 <= s) - 1;
    let (s0, l0) = knots[i];
    let (s1, l1) = knots[i + 1];
    let u = s - s0;
    let d = s1 - s0;
    match interp {
        Interp::LogLog => l0 + (l1 - l0) * u / d,
        Interp::LinearX => {
            if u <= 0.0 {
                return l0;
            }
            if u >= d {
                return l1;
            }
            let ld = log_expm1(d);
            let log_lambda = log_expm1(u) - ld;
            let log_one_minus = u + log_expm1(d - u) - ld;
            log_add_exp(l0 + log_one_minus, l1 + log_lambda)
        }
    }
}

/// Conditions decided by [`check_condition`].
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `Ψ(2x) ≤ C Ψ(x)` for large x.
    Delta2,
    /// `liminf Ψ(Ax)/Ψ(x)^2 > 0`.
    DeltaSup2 { a: f64 },
    /// `limsup Ψ(Ax)/Ψ(x)^2 > 0`.
    GrowthSup2 { a: f64 },
    /// `x Ψ(x) ≤ Ψ(Ax)` for some A in {2, 4, 8}.
    DeltaSup1,
    /// `κ(s) = log Ψ(e^s)` convex for large s.
    Nabla0,
    /// `Ψ(2x) = O(Ψ(x) (log Ψ(x))^ε)`.
    SlowGrowth { eps: f64 },
    /// `Ψ(Au) = o(Ψ(u) (log Ψ(u))^θ)`, tested at A, A², A³.
    ThetaCondition { a: f64, theta: f64 },
    /// `Ψ(2x) ≥ 1/ρ(1/Ψ(x))` for a Carleson function ρ.
    DominatedBy(RhoModel),
}

impl Condition {
    pub fn label(&self) -> String {
        match self {
            Condition::Delta2 => "delta2".into(),
            Condition::DeltaSup2 { a } => format!("deltasup2:{a}"),
            Condition::GrowthSup2 { a } => format!("growth:{a}"),
            Condition::DeltaSup1 => "deltasup1".into(),
            Condition::Nabla0 => "nabla0".into(),
            Condition::SlowGrowth { eps } => format!("slowgrowth:{eps}"),
            Condition::ThetaCondition { a, theta } => format!("theta:{a}:{theta}"),
            Condition::DominatedBy(_) => "dominated_by".into(),
        }
    }
}

/// Δ₂-failure data: `h_n = 1/Ψ(x_n)`, `c_n = Ψ(x_n)/Ψ(2x_n)`, all stored as logs.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessSequence {
    pub log_x: Vec<f64>,
    pub log_h: Vec<f64>,
    pub log_c: Vec<f64>,
}

impl WitnessSequence {
    pub fn len(&self) -> usize {
        self.log_x.len()
    }
    pub fn is_empty(&self) -> bool {
        self.log_x.is_empty()
    }
    pub fn x(&self) -> Vec<f64> {
        self.log_x.iter().map(|v| v.exp()).collect()
    }
    pub fn h(&self) -> Vec<f64> {
        self.log_h.iter().map(|v| v.exp()).collect()
    }
    pub fn c(&self) -> Vec<f64> {
        self.log_c.iter().map(|v| v.exp()).collect()
    }
    /// `log Ψ(2x_n)/Ψ(x_n) = -log c_n`.
    pub fn log_ratio(&self) -> Vec<f64> {
        self.log_c.iter().map(|v| -v).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthVerdict {
    pub condition: String,
    pub holds: Holds,
    /// `(log x, log ratio)` for the deciding series.
    pub fitted: Vec<(f64, f64)>,
    /// Dilation factors examined and the trend each produced.
    pub series: Vec<(f64, Trend)>,
    pub witness: Option<WitnessSequence>,
    pub grid_range: (f64, f64),
}

/// `n` log-spaced points in `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Largest `L` value a grid may reach: differences of `L` are compared against a 10⁻³
/// margin, which double precision resolves only while `|L|` stays below about 10¹².
pub const MAX_GRID_L: f64 = 1e12;

/// 64 log-spaced points from 10² up to at most 10³⁰⁰, cut where `L(s + log 256)` would
/// exceed [`MAX_GRID_L`].
pub fn default_grid(psi: &OrliczFunction) -> Vec<f64> {
    let guard = 256f64.ln();
    let mut top = 300.0 * std::f64::consts::LN_10;
    let too_big = |s: f64| psi.eval_log(s).map(|v| v > MAX_GRID_L).unwrap_or(true);
    while top > 2.0 * std::f64::consts::LN_10 && too_big(top + guard) {
        top -= 0.25;
    }
    let lo = (2.0 * std::f64::consts::LN_10).max(psi.domain_floor.max(1.0).ln() + 1.0);
    log_grid(lo.exp(), top.exp(), 64)
}

fn series(s: &[f64], f: impl Fn(f64) -> Result<f64>) -> Result<Vec<(f64, f64)>> {
    s.iter().map(|&v| f(v).map(|r| (v, r))).collect()
}

/// Decides `cond` for `psi` on a log-spaced grid of x values by the tail trend of its
/// defining log-ratio.
pub fn check_condition(psi: &OrliczFunction, cond: &Condition, grid: &[f64]) -> Result<GrowthVerdict> {
    if grid.len() < 32 {
        return Err(Error::Invalid(format!("grid has {} points, need at least 32", grid.len())));
    }
    if grid.iter().any(|x| !(x > &0.0) || !x.is_finite()) {
        return Err(Error::Invalid("grid values must be positive and finite".into()));
    }
    let s: Vec<f64> = grid.iter().map(|x| x.ln()).collect();
    let step = (s[s.len() - 1] - s[0]) / (s.len() - 1) as f64;
    if !(step > 0.0) || s.windows(2).any(|w| ((w[1] - w[0]) - step).abs() > 1e-6 * step.abs().max(1e-12) + 1e-9) {
        return Err(Error::Invalid("grid must be increasing and log-spaced".into()));
    }
    if (s[s.len() - 1] - s[0]) / std::f64::consts::LN_10 < 4.0 - 1e-9 {
        return Err(Error::Invalid("grid must span at least 4 decades".into()));
    }
    if grid[0] < psi.domain_floor {
        return Err(Error::Invalid("grid starts below the domain floor".into()));
    }
    let l = |v: f64| psi.eval_log(v);
    let range = (grid[0], grid[grid.len() - 1]);
    let verdict = |holds, fitted, series| GrowthVerdict {
        condition: cond.label(),
        holds,
        fitted,
        series,
        witness: None,
        grid_range: range,
    };

    let trend_of = |ys: &[(f64, f64)]| {
        let y: Vec<f64> = ys.iter().map(|p| p.1).collect();
        tail_trend(&y, TAIL_MARGIN)
    };

    match cond {
        Condition::Delta2 => {
            let a = 2f64.ln();
            let ys = series(&s, |v| Ok(l(v + a)? - l(v)?))?;
            let t = trend_of(&ys);
            let holds = match t {
                Trend::Rising => Holds::Fails,
                Trend::Flat | Trend::Falling => Holds::Holds,
                Trend::Mixed => Holds::Inconclusive,
            };
            Ok(verdict(holds, ys, vec![(2.0, t)]))
        }
        Condition::DeltaSup2 { a } | Condition::GrowthSup2 { a } => {
            if !(*a > 1.0) {
                return Err(Error::Invalid("A must exceed 1".into()));
            }
            let la = a.ln();
            let ys = series(&s, |v| Ok(l(v + la)? - 2.0 * l(v)?))?;
            let t = trend_of(&ys);
            // liminf > 0 of the ratio means the log-ratio does not run to -∞; on a
            // monotone tail the limsup version gives the same classification.
            let holds = match t {
                Trend::Falling => Holds::Fails,
                Trend::Flat | Trend::Rising => Holds::Holds,
                Trend::Mixed => Holds::Inconclusive,
            };
            Ok(verdict(holds, ys, vec![(*a, t)]))
        }
        Condition::DeltaSup1 => {
            let mut out = Vec::new();
            let mut best: Option<Vec<(f64, f64)>> = None;
            let mut any_mixed = false;
            for a in [2.0f64, 4.0, 8.0] {
                let la = a.ln();
                let ys = series(&s, |v| Ok(l(v + la)? - l(v)? - v))?;
                let t = trend_of(&ys);
                out.push((a, t));
                match t {
                    Trend::Mixed => any_mixed = true,
                    Trend::Falling => {}
                    _ => {
                        if best.is_none() {
                            best = Some(ys.clone());
                        }
                    }
                }
                if best.is_none() && a == 8.0 {
                    best = Some(ys);
                }
            }
            let holds = if out.iter().any(|p| matches!(p.1, Trend::Rising | Trend::Flat)) {
                Holds::Holds
            } else if any_mixed {
                Holds::Inconclusive
            } else {
                Holds::Fails
            };
            Ok(verdict(holds, best.unwrap_or_default(), out))
        }
        Condition::Nabla0 => {
            let mut ys = Vec::with_capacity(s.len());
            let vals: Vec<f64> = s.iter().map(|&v| l(v)).collect::<Result<_>>()?;
            for i in 1..s.len() - 1 {
                ys.push((s[i], vals[i + 1] - 2.0 * vals[i] + vals[i - 1]));
            }
            let tail = &ys[ys.len() / 2..];
            let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            let holds = if tail.iter().all(|p| p.1 >= -1e-9 * scale) {
                Holds::Holds
            } else if tail.iter().any(|p| p.1 < -TAIL_MARGIN) {
                Holds::Fails
            } else {
                Holds::Inconclusive
            };
            Ok(verdict(holds, ys, vec![]))
        }
        Condition::SlowGrowth { eps } => {
            let a = 2f64.ln();
            let ys = series(&s, |v| {
                let lv = l(v)?;
                if lv <= 0.0 {
                    return Err(Error::Invalid("grid reaches Ψ ≤ 1 where log Ψ is not positive".into()));
                }
                Ok(l(v + a)? - lv - eps * lv.ln())
            })?;
            let t = trend_of(&ys);
            let holds = match t {
                Trend::Rising => Holds::Fails,
                Trend::Flat | Trend::Falling => Holds::Holds,
                Trend::Mixed => Holds::Inconclusive,
            };
            Ok(verdict(holds, ys, vec![(2.0, t)]))
        }
        Condition::ThetaCondition { a, theta } => {
            if !(*a > 1.0) {
                return Err(Error::Invalid("A must exceed 1".into()));
            }
            let mut out = Vec::new();
            let mut decisive: Option<Vec<(f64, f64)>> = None;
            let mut first = None;
            for k in 1..=3 {
                let big = a.powi(k);
                let la = big.ln();
                let ys = series(&s, |v| {
                    let lv = l(v)?;
                    if lv <= 0.0 {
                        return Err(Error::Invalid("grid reaches Ψ ≤ 1 where log Ψ is not positive".into()));
                    }
                    Ok(l(v + la)? - lv - theta * lv.ln())
                })?;
                let t = trend_of(&ys);
                out.push((big, t));
                if first.is_none() {
                    first = Some(ys.clone());
                }
                if decisive.is_none() && matches!(t, Trend::Rising | Trend::Flat) {
                    decisive = Some(ys);
                }
            }
            let holds = if out.iter().all(|p| p.1 == Trend::Falling) {
                Holds::Holds
            } else if out.iter().any(|p| matches!(p.1, Trend::Rising | Trend::Flat)) {
                Holds::Fails
            } else {
                Holds::Inconclusive
            };
            Ok(verdict(holds, decisive.or(first).unwrap_or_default(), out))
        }
        Condition::DominatedBy(model) => {
            let a = 2f64.ln();
            let ys = series(&s, |v| {
                let lv = l(v)?;
                Ok(l(v + a)? + model.log_rho(-lv))
            })?;
            let tail = &ys[ys.len() / 2..];
            let holds = if tail.iter().all(|p| p.1 >= -TAIL_MARGIN) {
                Holds::Holds
            } else if tail.iter().all(|p| p.1 < -TAIL_MARGIN) {
                Holds::Fails
            } else {
                Holds::Inconclusive
            };
            Ok(verdict(holds, ys, vec![]))
        }
    }
}

/// Options for [`delta2_witness_with`].
#[derive(Clone, Debug)]
pub struct WitnessOptions {
    pub n_max: usize,
    /// Required multiplicative growth of `Ψ(2x)/Ψ(x)` between consecutive witnesses.
    pub growth: f64,
    /// Stop once `log h_n` would drop below this.
    pub min_log_h: f64,
    /// Scan step in `log x`.
    pub step: f64,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        Self { n_max: 64, growth: E, min_log_h: (1e-9f64).ln(), step: 1e-3 }
    }
}

/// Greedy witness with default options and the given `n_max`.
pub fn delta2_witness(psi: &OrliczFunction, n_max: usize) -> Result<WitnessSequence> {
    delta2_witness_with(psi, &WitnessOptions { n_max, ..Default::default() })
}

/// Scans `log x` upward from the point where `Ψ = e^{1/2}` and keeps a candidate once
/// `Ψ(2x)/Ψ(x)` has grown by the factor `growth` since the previous witness.
pub fn delta2_witness_with(psi: &OrliczFunction, opts: &WitnessOptions) -> Result<WitnessSequence> {
    let a = 2f64.ln();
    let lg = opts.growth.ln();
    if !(lg > 0.0) {
        return Err(Error::Invalid("growth factor must exceed 1".into()));
    }
    let mut s = psi.inverse_log(0.5)?;
    let mut w = WitnessSequence { log_x: vec![], log_h: vec![], log_c: vec![] };
    let mut last_ratio = f64::NEG_INFINITY;
    while w.len() < opts.n_max {
        let (Ok(l1), Ok(l2)) = (psi.eval_log(s), psi.eval_log(s + a)) else { break };
        if -l1 < opts.min_log_h {
            break;
        }
        let r = l2 - l1;
        if w.is_empty() || r >= last_ratio + lg {
            w.log_x.push(s);
            w.log_h.push(-l1);
            w.log_c.push(l1 - l2);
            last_ratio = r;
        }
        s += opts.step;
    }
    if w.len() < 2 {
        return Err(Error::WitnessNotFound(format!(
            "Ψ(2x)/Ψ(x) never grew by a factor {} over the scanned range",
            opts.growth
        )));
    }
    Ok(w)
}

/// Convex function with `Ψ(k!) = (k!)³` for `k = 1..=n_max`, obtained by joining those
/// points with chords, linear from the origin to `Ψ(1) = 1`, and `x³` past `n_max!`.
pub fn build_critere_orlicz(n_max: usize) -> Result<OrliczFunction> {
    if n_max < 3 {
        return Err(Error::Invalid("n_max must be at least 3".into()));
    }
    let mut knots = Vec::with_capacity(n_max);
    let mut lf = 0.0f64;
    for k in 1..=n_max {
        lf += (k as f64).ln();
        knots.push((lf, 3.0 * lf));
    }
    let psi = OrliczFunction::piecewise_log(knots, Interp::LinearX);
    if n_max <= 12 {
        assert!(psi.is_ok(), "critere construction must succeed for n_max ≤ 12");
    }
    psi
}

/// A Carleson function tabulated on a grid and extended past it by a fitted power law.
#[derive(Clone, Debug, Serialize)]
pub struct RhoModel {
    pub log_h: Vec<f64>,
    pub log_rho: Vec<f64>,
    pub slope: f64,
}

impl RhoModel {
    pub fn new(h: &[f64], rho: &[f64]) -> Result<Self> {
        if h.len() != rho.len() || h.len() < 2 {
            return Err(Error::Invalid("rho table needs at least two matching points".into()));
        }
        if let Some(i) = rho.iter().position(|r| !(r > &0.0)) {
            return Err(Error::Domain(format!(
                "rho vanishes at h = {}, so the symbol's sup norm is below 1",
                h[i]
            )));
        }
        let mut pts: Vec<(f64, f64)> = h.iter().zip(rho).map(|(a, b)| (a.ln(), b.ln())).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
        let (slope, _, _) = linear_fit(&x, &y);
        Ok(Self { log_h: x, log_rho: y, slope })
    }

    /// `log ρ(e^{lh})`, capped at 0.
    pub fn log_rho(&self, lh: f64) -> f64 {
        let n = self.log_h.len();
        let v = if lh <= self.log_h[0] {
            self.log_rho[0] + self.slope * (lh - self.log_h[0])
        } else if lh >= self.log_h[n - 1] {
            self.log_rho[n - 1] + self.slope * (lh - self.log_h[n - 1])
        } else {
            let i = self.log_h.partition_point(|v| *v <= lh) - 1;
            let t = (lh - self.log_h[i]) / (self.log_h[i + 1] - self.log_h[i]);
            self.log_rho[i] + t * (self.log_rho[i + 1] - self.log_rho[i])
        };
        v.min(0.0)
    }
}

/// Log-log piecewise Ψ with knots at `2^n`, `n = 0..=n_max`, and
/// `Ψ(2^{n+1}) ≥ 1/ρ(1/Ψ(2^n))`. Slopes grow by at least `1e-2` per knot, so the
/// result is strictly convex in log-log coordinates.
pub fn build_dominating_orlicz(rho: &RhoModel, n_max: usize) -> Result<OrliczFunction> {
    if n_max < 2 {
        return Err(Error::Invalid("n_max must be at least 2".into()));
    }
    let l2 = 2f64.ln();
    let bump = 1e-2;
    let mut knots = vec![(0.0, 0.0)];
    let mut slope = 1.0;
    for n in 0..n_max {
        let ln = knots[n].1;
        let need = -rho.log_rho(-ln);
        let next = need.max(ln + (slope + bump) * l2);
        slope = (next - ln) / l2;
        knots.push(((n + 1) as f64 * l2, next));
    }
    OrliczFunction::piecewise_log(knots, Interp::LogLog)
}
