use complab::orlicz::{
    build_critere_orlicz, check_condition, default_grid, delta2_witness_with, Condition, OrliczFunction,
    WitnessOptions,
};
use complab::trend::Holds::{self, Fails as F, Holds as H};

fn catalog() -> Vec<(&'static str, OrliczFunction)> {
    vec![
        ("x^2", OrliczFunction::power(2.0).unwrap()),
        ("e^x-1", OrliczFunction::exp_x()),
        ("e^(log(x+1))^2-1", OrliczFunction::exp_log_power(2.0).unwrap()),
        ("x^loglog", OrliczFunction::loglog()),
        ("x^logloglog", OrliczFunction::logloglog()),
        ("explicit product", OrliczFunction::explicit_product()),
    ]
}

fn conditions() -> Vec<Condition> {
    vec![
        Condition::Delta2,
        Condition::DeltaSup2 { a: 2.0 },
        Condition::DeltaSup1,
        Condition::SlowGrowth { eps: 0.5 },
        Condition::ThetaCondition { a: 2.0, theta: 1.0 },
    ]
}

// Derived by hand from L(s) = log Ψ(e^s) with a = log A:
//   x²:           L = 2s
//   e^x - 1:      L ≈ e^s
//   e^{log²}:     L ≈ s²
//   x^{loglog}:   L = s log s
//   x^{logloglog} and the explicit product: L = s log log s
const TRUTH: [[Holds; 5]; 6] = [
    [H, F, F, H, H],
    [F, H, H, F, F],
    [F, F, H, F, F],
    [F, F, F, F, F],
    [F, F, F, H, H],
    [F, F, F, H, H],
];

#[test]
fn classification_table_matches_hand_derivation() {
    for (i, (name, psi)) in catalog().into_iter().enumerate() {
        let grid = default_grid(&psi);
        for (j, cond) in conditions().iter().enumerate() {
            let v = check_condition(&psi, cond, &grid).unwrap();
            assert!(!v.fitted.is_empty());
            assert_eq!(v.holds, TRUTH[i][j], "{name} / {}: {:?}", cond.label(), v.series);
        }
    }
}

#[test]
fn delta_sup1_excludes_delta2() {
    for (name, psi) in catalog().into_iter().chain([("critere", build_critere_orlicz(8).unwrap())]) {
        let grid = default_grid(&psi);
        let d1 = check_condition(&psi, &Condition::DeltaSup1, &grid).unwrap();
        let d2 = check_condition(&psi, &Condition::Delta2, &grid).unwrap();
        if d1.holds == H {
            assert_eq!(d2.holds, F, "{name}");
        }
    }
}

#[test]
fn exp_log_power_witness_beats_every_power_of_c() {
    // h_n = o(c_n^N): log h_n / log c_n must keep growing past N = 8
    let psi = OrliczFunction::exp_log_power(2.0).unwrap();
    let opts = WitnessOptions { n_max: 40, min_log_h: -2000.0, ..Default::default() };
    let w = delta2_witness_with(&psi, &opts).unwrap();
    let q: Vec<f64> = w.log_h.iter().zip(&w.log_c).map(|(h, c)| h / c).collect();
    assert!(q.windows(2).all(|p| p[1] > p[0]));
    assert!(*q.last().unwrap() > 8.0, "{q:?}");
    // c_n behaves like x_n^{-2 log 2}
    for (lx, lc) in w.log_x.iter().zip(&w.log_c).skip(3) {
        assert!((lc / lx + 2.0 * 2f64.ln()).abs() < 0.3);
    }
}
