use num_complex::Complex64;

use nigwh::applications::{cramer_constant, risk_neutral_drift, ruin_report, PerpetualPut};
use nigwh::{NigParams, Precision};

const R: f64 = 0.01;
const K: f64 = 100.0;

fn cramer_set() -> NigParams {
    NigParams::new(-1.0, 2.0, 1.0, 1.5).unwrap()
}

fn put_params() -> NigParams {
    NigParams::new(-1.0, 0.25, 1.0, risk_neutral_drift(-1.0, 0.25, 1.0, R).unwrap()).unwrap()
}

fn put(n: usize) -> PerpetualPut {
    PerpetualPut::new(&put_params(), R, K, n, Precision::new(500)).unwrap()
}

#[test]
fn mixture_tail_follows_the_cramer_asymptote() {
    let report = ruin_report(&cramer_set(), 15, Precision::new(500)).unwrap();
    let ratio = |x: f64| report.me_value(x).unwrap() / report.asymptotic(x);
    // the excess over 1 is the subleading mixture terms, decaying at rate eta_2 - gamma
    let comps = report.me_approx.as_ref().unwrap().components();
    let (w1, eta1) = comps[0];
    for x in [20.0, 50.0, 80.0] {
        let tail: f64 = comps[1..].iter().map(|&(w, eta)| w * (-(eta - eta1) * x).exp()).sum();
        let predicted = w1 / report.c - 1.0 + tail / report.c;
        assert!((ratio(x) - 1.0 - predicted).abs() < 1e-12, "x = {x}");
    }
    assert!((ratio(50.0) - 1.0).abs() < 2e-6);
    assert!((ratio(55.0) - 1.0).abs() < 1e-6);
    assert!((report.me_value(0.0).unwrap() - 1.0).abs() < 1e-14);
    let values: Vec<f64> = (0..40).map(|i| report.me_value(i as f64 * 0.5).unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn leading_mixture_weight_is_the_cramer_constant() {
    let exact = cramer_constant(&cramer_set()).unwrap();
    let report = ruin_report(&cramer_set(), 15, Precision::new(500)).unwrap();
    let (w, eta) = report.me_approx.unwrap().components()[0];
    assert!((w - exact.c).abs() < 1e-10);
    assert!((eta - exact.gamma).abs() < 1e-15);
}

#[test]
fn second_parameter_set_cramer_constant() {
    let edge_set = NigParams::new(-1.0, 2.0, 0.5, 4.0).unwrap();
    let report = cramer_constant(&edge_set).unwrap();
    assert!((report.gamma - 0.5).abs() < 1e-15);
    assert!((report.c - 0.58036339013109773).abs() < 1e-14, "{}", report.c);
}

#[test]
fn risk_neutral_drift_makes_the_discounted_price_a_martingale() {
    let p = put_params();
    let psi1 = p.laplace_exponent(Complex64::new(1.0, 0.0)).re;
    assert!((psi1 - R).abs() < 1e-15);
    // the rounded drift is good to the quoted digits only
    let rounded = NigParams::new(-1.0, 0.25, 1.0, 0.723914).unwrap();
    assert!((rounded.laplace_exponent(Complex64::new(1.0, 0.0)).re - R).abs() < 1e-6);
    assert!(risk_neutral_drift(1.0, 1.0, 1.0, R).is_err());
}

#[test]
fn low_order_put_matches_quoted_value() {
    let v = put(3).value(150.0);
    assert!((v - 83.990865).abs() < 5e-7, "{v}");
}

#[test]
fn deep_in_the_money_put_is_intrinsic() {
    let v = put(75).value(5.0);
    assert!((v - 95.0).abs() < 5e-7, "{v}");
}

#[test]
fn put_is_monotone_in_spot_and_strike() {
    let p = put_params();
    let spots = [5.0, 25.0, 50.0, 75.0, 100.0, 125.0, 150.0];
    let low = PerpetualPut::new(&p, R, K, 11, Precision::new(200)).unwrap();
    let high = PerpetualPut::new(&p, R, 1.2 * K, 11, Precision::new(200)).unwrap();
    let values: Vec<f64> = spots.iter().map(|&a| low.value(a)).collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
    for &a in &spots {
        assert!(high.value(a) > low.value(a));
    }
}

#[test]
fn put_values_stabilize_as_order_grows() {
    let limit = put(75);
    for a0 in [75.0, 100.0, 150.0] {
        let errs: Vec<f64> = [3, 5, 7, 9, 11]
            .iter()
            .map(|&n| (put(n).value(a0) - limit.value(a0)).abs())
            .collect();
        assert!(errs.windows(2).all(|w| w[1] <= w[0]), "A0 = {a0}: {errs:?}");
        assert!(errs[4] < 1e-6, "A0 = {a0}: {errs:?}");
    }
}
