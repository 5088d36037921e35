//! Conformal map `g` from the disk onto `V_ε = {Re z > 0, |z| < ε}` with `g(1) = 0`.
//!
//! `z ↦ w = i(1+z)/(1-z)` sends the disk to the upper half-plane and 1 to ∞;
//! `w ↦ ζ` with `ζ + 1/ζ = -2w`, `|ζ| < 1`, sends it onto the upper half-disk and ∞ to 0;
//! finally `g = -iεζ`. Near 1 this gives `g(z) ≈ ε(1-z)/4`, so `g'(1) = -ε/4`.

use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn joukowski_inverse(w: Complex64) -> Complex64 {
    // both roots of ζ² + 2wζ + 1 multiply to 1; invert the larger one for stability
    let r = (w * w - 1.0).sqrt();
    let r1 = -w + r;
    let r2 = -w - r;
    let big = if r1.norm_sqr() >= r2.norm_sqr() { r1 } else { r2 };
    1.0 / big
}

/// `g(z)` for `|z| < 1`.
pub fn chain(z: Complex64, eps: f64) -> Complex64 {
    let w = I * (1.0 + z) / (1.0 - z);
    -I * eps * joukowski_inverse(w)
}

/// Boundary value `g(e^{it})`, or `None` within 10⁻¹² of `t = 0`.
///
/// On the circle `w = -cot(t/2)` is real. For `|w| ≤ 1` the limit from the upper
/// half-plane is the point `-w + i√(1-w²)` of the upper unit semicircle; for `|w| > 1`
/// it is the real root inside (-1, 1).
pub fn chain_boundary(t: f64, eps: f64) -> Option<Complex64> {
    let r = t.rem_euclid(2.0 * std::f64::consts::PI);
    if r < 1e-12 || 2.0 * std::f64::consts::PI - r < 1e-12 {
        return None;
    }
    let w = -1.0 / (0.5 * t).tan();
    let zeta = if w.abs() <= 1.0 {
        Complex64::new(-w, (1.0 - w * w).max(0.0).sqrt())
    } else {
        let s = (w * w - 1.0).sqrt();
        Complex64::new(1.0 / (-w - w.signum() * s), 0.0)
    };
    Some(-I * eps * zeta)
}

/// Inverse of [`chain`] on `V_ε`.
pub fn chain_inverse(v: Complex64, eps: f64) -> Complex64 {
    let zeta = I * v / eps;
    let w = -0.5 * (zeta + 1.0 / zeta);
    (w - I) / (w + I)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn normalization_at_one() {
        let eps = 0.25;
        let z = Complex64::new(1.0 - 1e-7, 0.0);
        let g = chain(z, eps);
        assert!(g.norm() < 1e-7);
        let d = (g - chain(Complex64::new(1.0 - 2e-7, 0.0), eps)) / 1e-7;
        // g(1 - δ) ≈ εδ/4, so the quotient tends to -ε/4 times -1
        assert!((d + Complex64::new(eps / 4.0, 0.0)).norm() < 1e-5, "{d}");
    }

    #[test]
    fn round_trip_interior() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for eps in [0.25, (-4.0f64).exp()] {
            for _ in 0..10_000 {
                let r: f64 = rng.gen::<f64>().sqrt() * 0.999;
                let a: f64 = rng.gen_range(-PI..PI);
                let z = Complex64::from_polar(r, a);
                let v = chain(z, eps);
                assert!(v.re > 0.0 && v.norm() < eps);
                let back = chain_inverse(v, eps);
                assert!((back - z).norm() < 1e-10, "{z} -> {v} -> {back}");
            }
        }
    }

    #[test]
    fn boundary_lands_on_boundary_of_half_disk() {
        let eps = 0.3;
        for i in 1..100_000 {
            let t = 2.0 * PI * i as f64 / 100_000.0;
            let v = chain_boundary(t, eps).unwrap();
            let dist = v.re.abs().min((v.norm() - eps).abs());
            assert!(dist < 1e-8 && v.re > -1e-12 && v.norm() <= eps + 1e-12, "t = {t}: {v}");
        }
        assert!(chain_boundary(0.0, eps).is_none());
    }

    #[test]
    fn boundary_is_radial_limit() {
        let eps = 0.25;
        for t in [0.3, 1.0, 2.5, 3.1, -0.7, -2.9] {
            let inner = chain(Complex64::from_polar(1.0 - 1e-9, t), eps);
            let b = chain_boundary(t, eps).unwrap();
            assert!((inner - b).norm() < 1e-6, "t = {t}");
        }
    }
}
