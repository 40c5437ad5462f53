use num_complex::Complex64;
use proptest::prelude::*;

use nigwh::distributions::exact_factor;
use nigwh::factorization::Side;
use nigwh::nig::zeta_roots;
use nigwh::NigParams;

fn params() -> impl Strategy<Value = (NigParams, f64)> {
    (-2.0..2.0f64, 0.2..2.0f64, 0.1..4.0f64, -2.0..2.0f64, 0.05..5.0f64)
        .prop_map(|(theta, sigma, kappa, mu, q)| (NigParams::new(theta, sigma, kappa, mu).unwrap(), q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn characteristic_roots_bracket_zero((p, _) in params()) {
        let (rho, rho_hat) = p.characteristic_roots();
        prop_assert!(rho_hat < 0.0 && 0.0 < rho);
        // both are zeros of 1 - 2 kappa theta z - kappa sigma^2 z^2
        for r in [rho, rho_hat] {
            let v = 1.0 - 2.0 * p.kappa * p.theta * r - p.kappa * p.sigma * p.sigma * r * r;
            prop_assert!(v.abs() < 1e-12 * (1.0 + r * r));
        }
    }

    #[test]
    fn solving_roots_satisfy_the_equation((p, q) in params()) {
        let roots = zeta_roots(&p, q).unwrap();
        for (z, solves) in [(roots.zeta, roots.zeta_solves), (roots.zeta_hat, roots.zeta_hat_solves)] {
            if solves {
                prop_assert!(z.im == 0.0 && z.re >= roots.rho_hat && z.re <= roots.rho);
                let psi = p.laplace_exponent(z).re;
                prop_assert!((psi - q).abs() < 1e-9 * q.max(1.0), "psi = {}, q = {}", psi, q);
            }
        }
    }

    #[test]
    fn factors_multiply_to_the_killed_transform((p, q) in params(), t in -1.0..1.0f64) {
        let z = Complex64::new(0.0, t);
        let lhs = exact_factor(&p, q, Side::Plus, z).unwrap() * exact_factor(&p, q, Side::Minus, z).unwrap();
        let rhs = q / (q - p.laplace_exponent(z));
        prop_assert!((lhs - rhs).norm() < 1e-8, "{} vs {}", lhs, rhs);
    }
}
