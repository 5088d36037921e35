//! Estimator checks against symbols whose pullback measure is known.

use std::time::Instant;

use complab::carleson::{
    dyadic_measures, fit_exponent, h_grid, luecking_partial_sums, rho_profile, sample_boundary, window_sup,
    Convergence, Correction, RhoOptions,
};
use complab::symbols::{lens_symbol, phi_theta_symbol, Symbol};

#[test]
fn identity_matches_arc_length() {
    let t0 = Instant::now();
    let s = sample_boundary(&Symbol::Identity, 1 << 20, None, 1.0).unwrap();
    let p = rho_profile(&s, &h_grid(1e-3, 0.3, 40), &RhoOptions::default()).unwrap();
    for (h, r) in p.h.iter().zip(&p.rho) {
        let want = h / std::f64::consts::PI;
        assert!((r / want - 1.0).abs() < 0.02, "h = {h}: {r} vs {want}");
    }
    assert!(p.rho.windows(2).all(|w| w[1] >= w[0]));
    let fit = fit_exponent(&p, Correction::None, None).unwrap();
    assert!((fit.alpha - 1.0).abs() < 0.05);
    eprintln!("identity: {:?}", t0.elapsed());
}

#[test]
fn distorted_windows_are_comparable() {
    let s = sample_boundary(&Symbol::Identity, 1 << 18, None, 1.0).unwrap();
    for h in [1e-3, 1e-2, 0.1] {
        let a = window_sup(&s, h, 1.0) as f64;
        let b = window_sup(&s, h, 2.0) as f64;
        assert!(b / a >= 1.0 && b / a <= 3.0, "h = {h}: {}", b / a);
    }
}

#[test]
fn refined_grid_agrees_at_shared_heights() {
    let sym = lens_symbol(0.25).unwrap();
    let s = sample_boundary(&sym, 1 << 18, Some(5), 1.0).unwrap();
    let opts = RhoOptions::default();
    let coarse = rho_profile(&s, &h_grid(1e-3, 0.5, 6), &opts).unwrap();
    let fine = rho_profile(&s, &h_grid(1e-3, 0.5, 11), &opts).unwrap();
    for (i, h) in coarse.h.iter().enumerate() {
        let j = fine.h.iter().position(|x| (x / h - 1.0).abs() < 1e-12).unwrap();
        let tol = 3.0 * coarse.stderr[i].max(fine.stderr[j]) + 1e-15;
        assert!((coarse.rho[i] - fine.rho[j]).abs() <= tol);
    }
}

#[test]
fn bootstrap_error_shrinks_with_sample_size() {
    let sym = lens_symbol(0.25).unwrap();
    let h = [0.01, 0.03, 0.1];
    let opts = RhoOptions { bootstrap: 32, ..RhoOptions::default() };
    let small = rho_profile(&sample_boundary(&sym, 1 << 18, None, 1.0).unwrap(), &h, &opts).unwrap();
    let large = rho_profile(&sample_boundary(&sym, 1 << 20, None, 1.0).unwrap(), &h, &opts).unwrap();
    for k in 0..h.len() {
        // n quadruples, so the error should halve
        let q = small.stderr[k] / large.stderr[k];
        assert!(q > 1.0 && q < 4.0, "h = {}: ratio {q}", h[k]);
    }
}

#[test]
fn lens_is_two_carleson() {
    let sym = lens_symbol(0.25).unwrap();
    let s = sample_boundary(&sym, 1 << 22, None, 1.0).unwrap();
    assert!(s.saturated_fraction() <= 1e-3);
    let p = rho_profile(&s, &h_grid(1e-4, 1e-1, 13), &RhoOptions::default()).unwrap();
    let fit = fit_exponent(&p, Correction::None, Some((1e-4, 1e-1))).unwrap();
    eprintln!("lens fit {fit:?} counts {:?}", p.counts);
    assert!((fit.alpha - 2.0).abs() < 0.1, "{}", fit.alpha);
}

#[test]
fn dyadic_tables() {
    let sym = lens_symbol(0.25).unwrap();
    let s = sample_boundary(&sym, 1 << 20, None, 1.0).unwrap();
    let dm = dyadic_measures(&s, 10).unwrap();
    for n in 1..=10usize {
        // row sum equals the annulus mass counted directly
        let direct = s.depth.iter().filter(|d| **d > 0.0 && **d <= 0.5f64.powi(n as i32)).count() as f64;
        let row: f64 = dm.masses[n - 1].iter().sum();
        assert!((row - direct / s.n_points as f64).abs() < 1e-12);
        if n < 10 {
            for j in 0..1 << n {
                assert!(dm.mass(n, j) >= dm.mass(n + 1, 2 * j) + dm.mass(n + 1, 2 * j + 1) - 1e-15);
            }
        }
        let h = 0.5f64.powi(n as i32);
        let cap = window_sup(&s, h, std::f64::consts::PI) as f64 / s.n_points as f64;
        assert!(dm.max_at(n) <= cap + 1e-15, "level {n}");
    }
    assert!(dm.masses.iter().all(|r| r.iter().sum::<f64>() <= 1.0));
    let l = luecking_partial_sums(&dm, 2.0).unwrap();
    eprintln!("lens luecking {:?}", l.tail_ratios);
    assert_eq!(l.verdict, Convergence::Converging);
    assert!(dyadic_measures(&s, 14).is_err());
}

#[test]
fn phi_theta_log_corrected_slope() {
    let sym = phi_theta_symbol(2.0, None).unwrap();
    let s = sample_boundary(&sym, 1 << 22, None, 1.0).unwrap();
    let p = rho_profile(&s, &h_grid(1e-5, 1e-1, 17), &RhoOptions::default()).unwrap();
    let fit = fit_exponent(&p, Correction::LogPower(2.0), Some((1e-5, 1e-2))).unwrap();
    eprintln!("phi-theta fit {fit:?} counts {:?}", p.counts);
    assert!((fit.alpha - 1.0).abs() < 0.1);
    let dm = dyadic_measures(&s, 12).unwrap();
    let l4 = luecking_partial_sums(&dm, 4.0).unwrap();
    let l1 = luecking_partial_sums(&dm, 1.0).unwrap();
    eprintln!("p=4 {:?}\np=1 {:?}", l4.tail_ratios, l1.tail_ratios);
    assert_eq!(l4.verdict, Convergence::Converging);
    assert_ne!(l1.verdict, Convergence::Converging);
}
