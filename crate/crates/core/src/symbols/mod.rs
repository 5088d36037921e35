//! Analytic self-maps of the disk, exposed through boundary values `φ*(e^{it})`.

pub mod conformal;
pub mod fourier;
pub mod profile;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::orlicz::OrliczFunction;
pub use fourier::{conjugate_samples, conjugate_series, fourier_coefficients, Coefficients, ConjugateTable};
pub use profile::ProfileFunction;

/// Default truncation of the cosine series.
pub const DEFAULT_K: usize = 4096;
/// Largest series tail accepted before sampling a general symbol.
pub const MAX_TAIL: f64 = 1e-6;
/// Boundary points this close to `t = 0` are excluded.
pub const SINGULAR_GAP: f64 = 1e-12;

/// `M(z) Φ(z)` with `M(z) = exp(-(1+z)/(1-z))` and `Φ = exp(-F)`, `Re F = f` on the circle.
#[derive(Clone, Debug)]
pub struct GeneralSymbol {
    pub profile: ProfileFunction,
    pub coeffs: Coefficients,
    table: ConjugateTable,
}

impl GeneralSymbol {
    pub fn conjugate(&self, t: f64) -> f64 {
        self.table.eval(t)
    }

    /// `max t²|(Hf)'(t)|` over `t ∈ [10⁻³, 10⁻¹]` by centered differences; small values
    /// mean the inner factor's spin dominates the conjugate near the singular point.
    pub fn hf_derivative_diagnostic(&self) -> f64 {
        let mut worst = 0.0f64;
        let d = 1e-6;
        for i in 0..=200 {
            let t = 1e-3 * 100f64.powf(i as f64 / 200.0);
            let der = (self.conjugate(t + d) - self.conjugate(t - d)) / (2.0 * d);
            worst = worst.max(t * t * der.abs());
        }
        worst
    }
}

/// Outer function with prescribed boundary modulus `h = 1 - 1/Ψ(a)` on a uniform grid.
#[derive(Clone, Debug, Serialize)]
pub struct OuterSymbol {
    pub log_h: Vec<f64>,
    /// Conjugate of `log h` on the same grid.
    pub conj: Vec<f64>,
    /// Largest boundary modulus on the sample; 1 only if `a` is unbounded there.
    pub sup_modulus: f64,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum Symbol {
    Identity,
    Constant(Complex64),
    General(Box<GeneralSymbol>),
    PhiTheta { theta: f64, eps: f64 },
    Lens { eps: f64 },
    Outer(Box<OuterSymbol>),
}

impl Symbol {
    pub fn label(&self) -> String {
        match self {
            Symbol::Identity => "identity".into(),
            Symbol::Constant(c) => format!("const:{}{:+}i", c.re, c.im),
            Symbol::General(g) => format!("general[{} knots, K={}]", g.profile.c_knots.len() - 1, g.coeffs.k()),
            Symbol::PhiTheta { theta, eps } => format!("phi-theta:{theta} (eps={eps})"),
            Symbol::Lens { eps } => format!("lens (eps={eps})"),
            Symbol::Outer(o) => format!("outer[{} samples]", o.log_h.len()),
        }
    }

    /// `log φ*(e^{it})`: real part `log|φ*|`, imaginary part an argument (not reduced).
    /// `None` on the excluded neighbourhood of the singular point.
    pub fn boundary_log(&self, t: f64) -> Option<Complex64> {
        match self {
            Symbol::Identity => Some(Complex64::new(0.0, t)),
            Symbol::Constant(c) => Some(c.ln()),
            Symbol::General(g) => {
                let r = t.rem_euclid(2.0 * PI);
                if r < SINGULAR_GAP || 2.0 * PI - r < SINGULAR_GAP {
                    return None;
                }
                // (1 + e^{it})/(1 - e^{it}) = i cot(t/2)
                let spin = 1.0 / (0.5 * t).tan();
                Some(Complex64::new(-g.profile.eval(t), -spin - g.conjugate(t)))
            }
            Symbol::PhiTheta { theta, eps } => {
                let v = conformal::chain_boundary(t, *eps)?;
                Some(-f_theta(v, *theta))
            }
            Symbol::Lens { eps } => {
                let v = conformal::chain_boundary(t, *eps)?;
                Some(-v.sqrt())
            }
            Symbol::Outer(o) => {
                let m = o.log_h.len();
                let j = ((t.rem_euclid(2.0 * PI) * m as f64 / (2.0 * PI)).round() as usize) % m;
                Some(Complex64::new(o.log_h[j], o.conj[j]))
            }
        }
    }

    pub fn boundary(&self, t: f64) -> Option<Complex64> {
        self.boundary_log(t).map(|l| l.exp())
    }

    /// `φ(z)` for `|z| < 1`.
    pub fn interior(&self, z: Complex64) -> Option<Complex64> {
        if z.norm() >= 1.0 {
            return None;
        }
        match self {
            Symbol::Identity => Some(z),
            Symbol::Constant(c) => Some(*c),
            Symbol::General(g) => {
                let mut f = Complex64::new(0.0, 0.0);
                for a in g.coeffs.a.iter().rev() {
                    f = f * z + a;
                }
                Some((-(1.0 + z) / (1.0 - z) - f).exp())
            }
            Symbol::PhiTheta { theta, eps } => Some((-f_theta(conformal::chain(z, *eps), *theta)).exp()),
            Symbol::Lens { eps } => Some((-conformal::chain(z, *eps).sqrt()).exp()),
            Symbol::Outer(o) => {
                let m = o.log_h.len();
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, lh) in o.log_h.iter().enumerate() {
                    let u = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64);
                    acc += (u + z) / (u - z) * lh;
                }
                Some((acc / m as f64).exp())
            }
        }
    }
}

/// `f_θ(v) = v (-log v)^θ`.
pub fn f_theta(v: Complex64, theta: f64) -> Complex64 {
    if v == Complex64::new(0.0, 0.0) {
        return v;
    }
    v * (-v.ln()).powf(theta)
}

/// `exp(-f_θ ∘ g)` on `V_ε`; needs `0 < ε ≤ e^{-2θ}` so that `Re f_θ > 0` there.
pub fn phi_theta_symbol(theta: f64, eps: Option<f64>) -> Result<Symbol> {
    if !(theta > 0.0) {
        return Err(Error::Invalid(format!("theta = {theta} must be positive")));
    }
    let max = (-2.0 * theta).exp();
    let eps = eps.unwrap_or(max);
    if !(eps > 0.0 && eps <= max) {
        return Err(Error::Invalid(format!("eps = {eps} outside (0, e^(-2θ)] = (0, {max}]")));
    }
    Ok(Symbol::PhiTheta { theta, eps })
}

/// `exp(-g^{1/2})` with `g` onto `V_ε`.
pub fn lens_symbol(eps: f64) -> Result<Symbol> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Invalid(format!("lens eps = {eps} outside (0, 1)")));
    }
    Ok(Symbol::Lens { eps })
}

/// General construction from a profile; refuses truncations whose tail exceeds
/// [`MAX_TAIL`].
pub fn general_symbol(profile: ProfileFunction, k: usize) -> Result<Symbol> {
    let coeffs = fourier_coefficients(|t| profile.eval(t), k)?;
    if coeffs.tail_bound >= MAX_TAIL {
        return Err(Error::Construction(format!(
            "series tail bound {:e} is not below {MAX_TAIL:e}",
            coeffs.tail_bound
        )));
    }
    let table = ConjugateTable::new(&coeffs.a, fourier::TABLE_SIZE);
    Ok(Symbol::General(Box::new(GeneralSymbol { profile, coeffs, table })))
}

/// Outer function with `|φ*| = 1 - 1/Ψ(a)` from samples `a_j = a(2πj/m)`.
///
/// Needs `a ≥ Ψ^{-1}(2)`, i.e. `h ≥ 1/2`. The empirical means of `Ψ(A a)` for
/// `A ∈ {2, 4, 8}` are checked for finiteness; failures become warnings.
pub fn outer_symbol(a: &[f64], psi: &OrliczFunction) -> Result<Symbol> {
    if a.len() < 16 {
        return Err(Error::Invalid("outer symbol needs at least 16 samples".into()));
    }
    let floor = psi.inverse_log(2f64.ln())?.exp();
    let mut log_h = Vec::with_capacity(a.len());
    for (j, v) in a.iter().enumerate() {
        if !(*v >= floor * (1.0 - 1e-12)) {
            return Err(Error::Invalid(format!("a[{j}] = {v} is below Ψ^(-1)(2) = {floor}")));
        }
        let l = psi.eval_log(v.ln())?;
        log_h.push((-(-l).exp()).ln_1p());
    }
    let mut warnings = Vec::new();
    for big in [2.0f64, 4.0, 8.0] {
        let mut lse = f64::NEG_INFINITY;
        let mut ok = true;
        for v in a {
            match psi.eval_log(v.ln() + big.ln()) {
                Ok(l) => lse = crate::orlicz::log_add_exp(lse, l),
                Err(_) => ok = false,
            }
        }
        let log_mean = lse - (a.len() as f64).ln();
        if !ok || log_mean > 700.0 {
            warnings.push(format!("mean of Ψ({big}·a) is not finite in double precision"));
        }
    }
    let conj = conjugate_samples(&log_h);
    let sup_modulus = log_h.iter().cloned().fold(f64::NEG_INFINITY, f64::max).exp();
    Ok(Symbol::Outer(Box::new(OuterSymbol { log_h, conj, sup_modulus, warnings })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn exp_x_general() -> Symbol {
        let x: Vec<f64> = (1..=20).map(|k| k as f64).collect();
        let h: Vec<f64> = x.iter().map(|v| 1.0 / v.exp_m1()).collect();
        let c: Vec<f64> = x.iter().map(|v| v.exp_m1() / (2.0 * v).exp_m1()).collect();
        general_symbol(ProfileFunction::from_sequences(&h, &c).unwrap(), DEFAULT_K).unwrap()
    }

    #[test]
    fn cayley_quotient_on_circle_is_imaginary() {
        for i in 1..1000 {
            let t = 2.0 * PI * i as f64 / 1000.0;
            let z = Complex64::from_polar(1.0, t);
            let q = (1.0 + z) / (1.0 - z);
            assert!(q.re.abs() < 1e-9);
            assert!((q.im - 1.0 / (0.5 * t).tan()).abs() < 1e-9 * q.im.abs().max(1.0));
        }
    }

    #[test]
    fn general_boundary_modulus() {
        let s = exp_x_general();
        let Symbol::General(g) = &s else { unreachable!() };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let t: f64 = rng.gen_range(-PI..PI);
            let v = s.boundary(t).unwrap();
            assert!((v.norm() - (-g.profile.eval(t)).exp()).abs() < 1e-9);
        }
        assert!(s.boundary(0.0).is_none());
    }

    #[test]
    fn general_interior_in_disk() {
        let s = exp_x_general();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..10_000 {
            let r: f64 = rng.gen::<f64>().sqrt() * 0.995;
            let z = Complex64::from_polar(r, rng.gen_range(-PI..PI));
            assert!(s.interior(z).unwrap().norm() < 1.0);
        }
    }

    #[test]
    fn general_series_tail_is_small() {
        let s = exp_x_general();
        let Symbol::General(g) = &s else { unreachable!() };
        assert!(g.coeffs.tail_bound < MAX_TAIL);
        assert!(g.hf_derivative_diagnostic().is_finite());
    }

    #[test]
    fn phi_theta_properties() {
        let s = phi_theta_symbol(2.0, None).unwrap();
        assert!(phi_theta_symbol(2.0, Some(0.5)).is_err());
        for i in 1..20_000 {
            let t = -PI + 2.0 * PI * i as f64 / 20_000.0;
            if t.abs() < 1e-9 {
                continue;
            }
            assert!(s.boundary(t).unwrap().norm() < 1.0, "t = {t}");
        }
        // radial limit agrees with the boundary formula
        for t in [0.5, 2.0, -1.0] {
            let a = s.interior(Complex64::from_polar(1.0 - 1e-10, t)).unwrap();
            assert!((a - s.boundary(t).unwrap()).norm() < 1e-5);
        }
    }

    #[test]
    fn lens_on_diameter() {
        // f(z) = z^{1/2} on the imaginary axis: Re = Im = sqrt(t/2)
        for t in [0.01, 0.2, 1.0] {
            let v = Complex64::new(0.0, t).sqrt();
            assert!((v.re - (t / 2.0).sqrt()).abs() < 1e-14 && (v.im - (t / 2.0).sqrt()).abs() < 1e-14);
        }
        let s = lens_symbol(0.25).unwrap();
        let mut sup = 0.0f64;
        for i in 1..100_000 {
            let t = -PI + 2.0 * PI * i as f64 / 100_000.0;
            if let Some(v) = s.boundary(t) {
                assert!(v.norm() < 1.0);
                sup = sup.max(v.norm());
            }
        }
        assert!(sup > 1.0 - 1e-2);
        assert!(lens_symbol(1.5).is_err());
    }

    #[test]
    fn outer_constant_and_mean_value() {
        let psi = OrliczFunction::power(2.0).unwrap();
        let a4 = psi.inverse(4.0).unwrap();
        let s = outer_symbol(&vec![a4; 64], &psi).unwrap();
        let v = s.interior(Complex64::new(0.0, 0.0)).unwrap();
        assert!((v.norm() - 0.75).abs() < 1e-12);
        // non-constant modulus: φ(0) = exp(mean log h)
        let m = 256;
        let a: Vec<f64> = (0..m).map(|j| 3.0 + (2.0 * PI * j as f64 / m as f64).cos()).collect();
        let s = outer_symbol(&a, &psi).unwrap();
        let mean: f64 = a.iter().map(|x| (1.0 - 1.0 / (x * x)).ln()).sum::<f64>() / m as f64;
        let v = s.interior(Complex64::new(0.0, 0.0)).unwrap();
        assert!((v - Complex64::new(mean.exp(), 0.0)).norm() < 1e-12);
        for j in 0..m {
            let t = 2.0 * PI * j as f64 / m as f64;
            assert!((s.boundary(t).unwrap().norm() - (1.0 - 1.0 / (a[j] * a[j]))).abs() < 1e-12);
        }
        assert!(outer_symbol(&vec![1.0; 32], &psi).is_err());
    }

    #[test]
    fn every_symbol_bounded_by_one() {
        let syms = vec![
            Symbol::Identity,
            Symbol::Constant(Complex64::new(0.5, 0.1)),
            exp_x_general(),
            phi_theta_symbol(0.5, None).unwrap(),
            lens_symbol(0.25).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for s in syms {
            for _ in 0..100_000 {
                let t: f64 = rng.gen_range(0.0..2.0 * PI);
                if let Some(v) = s.boundary(t) {
                    assert!(v.norm() <= 1.0 + 1e-12, "{}", s.label());
                }
            }
        }
    }
}
