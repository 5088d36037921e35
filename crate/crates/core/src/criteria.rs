//! Compactness and Schatten-type predicates read off an estimated Carleson function.
//!
//! Every predicate turns a little-oh statement into a sequence `y_k` ordered toward
//! `h → 0` and applies a block-maximum envelope test from [`crate::trend`]. The margin
//! is `δ = max(0.02, 2·σ)` with `σ` the median relative bootstrap error of the points
//! in the tail, so sampling noise alone cannot produce a verdict.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::carleson::{fit_exponent, CarlesonProfile, Correction, RESOLUTION_COUNT};
use crate::error::{Error, Result};
use crate::orlicz::OrliczFunction;
use crate::trend::{envelope_bounded, envelope_decreasing, Holds};

/// Number of tail blocks in the envelope tests.
pub const BLOCKS: usize = 3;
/// Smallest margin, in log units.
pub const MIN_DELTA: f64 = 0.02;
/// Profiles must span this many decades of resolved heights.
pub const MIN_DECADES: f64 = 2.0;

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub criterion: String,
    pub params: Map<String, Value>,
    pub holds: Holds,
    /// `[h, log ratio]` pairs, ordered toward `h → 0`.
    pub evidence: Vec<[f64; 2]>,
    pub note: String,
}

impl Verdict {
    fn new(criterion: &str, params: Value, holds: Holds, evidence: Vec<[f64; 2]>, note: String) -> Self {
        let params = match params {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        Self { criterion: criterion.to_string(), params, holds, evidence, note }
    }

    fn unresolved(criterion: &str, params: Value, note: String) -> Self {
        Self::new(criterion, params, Holds::Inconclusive, Vec::new(), note)
    }
}

/// Resolved points of a profile ordered toward `h → 0`: `(h, ρ, relative error)`.
fn resolved(profile: &CarlesonProfile) -> Vec<(f64, f64, f64)> {
    let mut pts: Vec<(f64, f64, f64)> = profile
        .usable(RESOLUTION_COUNT as u64)
        .into_iter()
        .map(|i| (profile.h[i], profile.rho[i], profile.stderr[i] / profile.rho[i]))
        .collect();
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    pts
}

fn span_ok(pts: &[(f64, f64, f64)]) -> std::result::Result<(), String> {
    if pts.len() < 2 * BLOCKS {
        return Err(format!("only {} resolved heights", pts.len()));
    }
    let decades = (pts[0].0 / pts[pts.len() - 1].0).log10();
    if decades < MIN_DECADES - 1e-9 {
        return Err(format!("resolved heights span {decades:.2} decades, need {MIN_DECADES}"));
    }
    Ok(())
}

/// Margin for a set of points: twice the median relative error over the tail half.
fn margin(pts: &[(f64, f64, f64)]) -> f64 {
    let mut s: Vec<f64> = pts[pts.len() / 2..].iter().map(|p| p.2).collect();
    s.sort_by(f64::total_cmp);
    let med = if s.is_empty() { 0.0 } else { s[s.len() / 2] };
    MIN_DELTA.max(2.0 * med)
}

fn evidence(h: &[f64], y: &[f64]) -> Vec<[f64; 2]> {
    h.iter().zip(y).map(|(a, b)| [*a, *b]).collect()
}

/// Compactness on H²: `ρ(h) = o(h)`.
///
/// Holds when the envelope of `log(ρ/h)` keeps falling; fails when it stays level.
pub fn maccluer_h2(profile: &CarlesonProfile) -> Verdict {
    let name = "maccluer_h2";
    let pts = resolved(profile);
    if let Err(e) = span_ok(&pts) {
        return Verdict::unresolved(name, json!({}), e);
    }
    let delta = margin(&pts);
    let h: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let y: Vec<f64> = pts.iter().map(|p| (p.1 / p.0).ln()).collect();
    let (holds, env) = envelope_decreasing(&y, BLOCKS, delta);
    Verdict::new(
        name,
        json!({ "delta": delta }),
        holds,
        evidence(&h, &y),
        format!("log(rho/h) tail block maxima {env:?}"),
    )
}

/// Extension `ρ = C h^α (log 1/h)^{-θ}` of the resolved profile to smaller heights.
///
/// With `alpha = None` both `α` and `C` come from a least-squares fit over the whole
/// profile. With a fixed `α`, `C` is the median over the lowest resolved decade, so the
/// model joins the data where it ends.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Extension {
    pub theta: f64,
    pub alpha: Option<f64>,
    /// Extend down to this height, in half-decade steps.
    pub h_min: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HpsiOptions {
    pub a_grid: Vec<f64>,
    pub extension: Option<Extension>,
}

impl Default for HpsiOptions {
    fn default() -> Self {
        Self { a_grid: vec![2.0, 4.0, 8.0, 16.0, 256.0], extension: None }
    }
}

/// Compactness on `H^Ψ`: `ρ(h)·Ψ(A·Ψ⁻¹(1/h)) → 0` for every `A` in the grid.
///
/// Computed as `log ρ + L(log Ψ⁻¹(1/h) + log A)` with `L(s) = log Ψ(e^s)`. Heights where
/// `Ψ⁻¹(1/h)·A` falls outside the range where Ψ is defined (the last knot of a
/// piecewise Ψ) are dropped and counted in the note. Compactness on `H^Ψ` implies it on
/// H², so a failing [`maccluer_h2`] fails this too.
pub fn hpsi_compactness(profile: &CarlesonProfile, psi: &OrliczFunction, opts: &HpsiOptions) -> Result<Verdict> {
    let name = "hpsi_compactness";
    for a in [2.0, 4.0, 8.0] {
        if !opts.a_grid.iter().any(|v| (v - a).abs() < 1e-12) {
            return Err(Error::Invalid("A grid must contain 2, 4 and 8".into()));
        }
    }
    if opts.a_grid.iter().any(|a| !(*a > 1.0)) {
        return Err(Error::Invalid("every A must exceed 1".into()));
    }
    let mut params = json!({ "psi": psi.label(), "a_grid": opts.a_grid });
    let pts = resolved(profile);
    if let Err(e) = span_ok(&pts) {
        return Ok(Verdict::unresolved(name, params, e));
    }
    let delta = margin(&pts);
    params["delta"] = json!(delta);
    let mut h: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let mut log_rho: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let mut notes = Vec::new();

    if let Some(ext) = opts.extension {
        let (alpha, intercept) = match ext.alpha {
            None => {
                let fit = fit_exponent(profile, Correction::LogPower(ext.theta), None)?;
                (fit.alpha, fit.intercept)
            }
            Some(a) => {
                let end = h[h.len() - 1];
                let mut c: Vec<f64> = pts
                    .iter()
                    .filter(|p| p.0 <= 10.0 * end * (1.0 + 1e-12))
                    .map(|p| p.1.ln() - a * p.0.ln() + ext.theta * (1.0 / p.0).ln().ln())
                    .collect();
                c.sort_by(f64::total_cmp);
                (a, c[c.len() / 2])
            }
        };
        let step = 10f64.powf(-0.5);
        let mut hh = h[h.len() - 1] * step;
        let mut added = 0;
        while hh >= ext.h_min * (1.0 - 1e-12) {
            h.push(hh);
            log_rho.push(intercept + alpha * hh.ln() - ext.theta * (1.0 / hh).ln().ln());
            hh *= step;
            added += 1;
        }
        params["extension"] =
            json!({ "theta": ext.theta, "h_min": ext.h_min, "alpha": alpha, "alpha_fixed": ext.alpha.is_some() });
        notes.push(format!("{added} heights from the model rho = C h^{alpha:.4} (log 1/h)^-{}", ext.theta));
    }

    let limit = psi.last_knot_log();
    let mut s = Vec::with_capacity(h.len());
    for hh in &h {
        s.push(psi.inverse_log(-hh.ln())?);
    }

    let mut evidence_out = Vec::new();
    let mut witness = None;
    let mut all_hold = true;
    let mut any_fail = false;
    let mut per_a = Map::new();
    for &a in &opts.a_grid {
        let la = a.ln();
        let mut hs = Vec::new();
        let mut y = Vec::new();
        let mut dropped = 0;
        for k in 0..h.len() {
            if limit.is_some_and(|l| s[k] + la > l) {
                dropped += 1;
                continue;
            }
            hs.push(h[k]);
            y.push(log_rho[k] + psi.eval_log(s[k] + la)?);
        }
        if dropped > 0 {
            notes.push(format!("A = {a}: {dropped} heights beyond the last knot dropped"));
        }
        let (v, _) = if hs.len() >= 2 * BLOCKS { envelope_decreasing(&y, BLOCKS, delta) } else { (Holds::Inconclusive, vec![]) };
        per_a.insert(format!("{a}"), json!(v));
        if v != Holds::Holds {
            all_hold = false;
        }
        if v == Holds::Fails && witness.is_none() {
            witness = Some(a);
            any_fail = true;
            evidence_out = evidence(&hs, &y);
        }
        if evidence_out.is_empty() || (witness.is_none() && all_hold) {
            evidence_out = evidence(&hs, &y);
        }
    }
    params["per_a"] = Value::Object(per_a);

    let h2 = maccluer_h2(profile);
    let mut holds = if any_fail {
        Holds::Fails
    } else if all_hold {
        Holds::Holds
    } else {
        Holds::Inconclusive
    };
    if h2.holds == Holds::Fails {
        holds = Holds::Fails;
        if witness.is_none() {
            evidence_out = h2.evidence.clone();
        }
        notes.push("not compact on H2".into());
    } else if h2.holds == Holds::Inconclusive && holds == Holds::Holds {
        holds = Holds::Inconclusive;
        notes.push("H2 compactness unresolved".into());
    }
    if let Some(a) = witness {
        params["witness_a"] = json!(a);
    }
    Ok(Verdict::new(name, params, holds, evidence_out, notes.join("; ")))
}

/// α-Carleson: `ρ(h) ≲ h^α`, read as "`log(ρ/h^α)` has no upward trend".
pub fn alpha_carleson(profile: &CarlesonProfile, alpha: f64) -> Verdict {
    let name = "alpha_carleson";
    let params = json!({ "alpha": alpha });
    let pts = resolved(profile);
    if pts.len() < 2 * BLOCKS {
        return Verdict::unresolved(name, params, format!("only {} resolved heights", pts.len()));
    }
    let delta = margin(&pts);
    let h: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.1.ln() - alpha * p.0.ln()).collect();
    let (holds, env) = envelope_bounded(&y, BLOCKS, delta);
    let sup = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut params = params;
    params["delta"] = json!(delta);
    params["log_sup"] = json!(sup);
    Verdict::new(name, params, holds, evidence(&h, &y), format!("tail block maxima {env:?}"))
}

/// Necessary condition for `C_φ ∈ S_p`: `ρ(h) = o(h / (log 1/h)^{2/p})`.
///
/// A failure rules out membership; holding proves nothing about it.
pub fn schatten_decay(profile: &CarlesonProfile, p: f64) -> Verdict {
    let name = "schatten_decay";
    let params = json!({ "p": p, "delta_exponent": 2.0 / p });
    let pts = resolved(profile);
    if let Err(e) = span_ok(&pts) {
        return Verdict::unresolved(name, params, e);
    }
    let delta = margin(&pts);
    let h: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let y: Vec<f64> = pts.iter().map(|q| (q.1 / q.0).ln() + 2.0 / p * (1.0 / q.0).ln().ln()).collect();
    let (holds, env) = envelope_decreasing(&y, BLOCKS, delta);
    let mut params = params;
    params["delta"] = json!(delta);
    Verdict::new(
        name,
        params,
        holds,
        evidence(&h, &y),
        format!("necessary condition only; tail block maxima {env:?}"),
    )
}
