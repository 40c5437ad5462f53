//! The NIG process: Laplace exponent, distinguished roots and case labels.
//!
//! Parameterization `(theta, sigma, kappa, mu)`: Brownian motion with drift
//! `theta` and volatility `sigma`, subordinated by an inverse Gaussian process
//! with unit mean rate and variance rate `kappa`, plus a linear drift `mu`.
//! The Laplace exponent is
//!
//! ```text
//! psi(z) = 1/kappa - (1/kappa) sqrt(1 - 2 kappa theta z - kappa sigma^2 z^2) + mu z
//! ```
//!
//! analytic on the plane cut along `(-inf, rho_hat] U [rho, inf)`.

use num_complex::Complex64;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::bigfloat::{BigComplex, Precision};
use crate::error::{Error, Result};

/// Process parameters `(theta, sigma, kappa, mu)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NigParams {
    pub theta: f64,
    pub sigma: f64,
    pub kappa: f64,
    pub mu: f64,
}

impl NigParams {
    pub fn new(theta: f64, sigma: f64, kappa: f64, mu: f64) -> Result<Self> {
        let p = NigParams {
            theta,
            sigma,
            kappa,
            mu,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta.is_finite() && self.mu.is_finite()) {
            return Err(Error::InvalidParams("theta and mu must be finite".into()));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::InvalidParams("sigma must be finite and > 0".into()));
        }
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::InvalidParams("kappa must be finite and > 0".into()));
        }
        Ok(())
    }

    /// `p(z) = 1 - 2 kappa theta z - kappa sigma^2 z^2`.
    fn quadratic(&self, z: Complex64) -> Complex64 {
        1.0 - 2.0 * self.kappa * self.theta * z - self.kappa * self.sigma * self.sigma * z * z
    }

    /// Laplace exponent with the principal square-root branch.
    pub fn laplace_exponent(&self, z: Complex64) -> Complex64 {
        let k = self.kappa;
        1.0 / k - self.quadratic(z).sqrt() / k + self.mu * z
    }

    /// First derivative of the Laplace exponent.
    pub fn laplace_exponent_derivative(&self, z: Complex64) -> Complex64 {
        (self.theta + self.sigma * self.sigma * z) / self.quadratic(z).sqrt() + self.mu
    }

    /// `E[X_1] = theta + mu`.
    pub fn mean(&self) -> f64 {
        self.theta + self.mu
    }

    /// `Var[X_1] = sigma^2 + kappa theta^2`.
    pub fn variance(&self) -> f64 {
        self.sigma * self.sigma + self.kappa * self.theta * self.theta
    }

    /// Zeros `(rho, rho_hat)` of `p`, `rho_hat < 0 < rho`.
    pub fn characteristic_roots(&self) -> (f64, f64) {
        let s2 = self.sigma * self.sigma;
        let disc = (self.theta * self.theta + s2 / self.kappa).sqrt();
        // rho * rho_hat = -1 / (kappa sigma^2); take the root without cancellation first
        let product = -1.0 / (self.kappa * s2);
        if self.theta <= 0.0 {
            let rho = (-self.theta + disc) / s2;
            (rho, product / rho)
        } else {
            let rho_hat = (-self.theta - disc) / s2;
            (product / rho_hat, rho_hat)
        }
    }

    /// High-precision `(rho, rho_hat)`.
    pub fn characteristic_roots_big(&self, prec: Precision) -> (Float, Float) {
        let theta = prec.float(self.theta);
        let s2 = Float::with_val(prec.bits(), prec.float(self.sigma).square_ref());
        let kappa = prec.float(self.kappa);
        let disc =
            (Float::with_val(prec.bits(), theta.square_ref()) + Float::with_val(prec.bits(), &s2 / &kappa)).sqrt();
        let product = -(prec.one() / (Float::with_val(prec.bits(), &kappa * &s2)));
        if self.theta <= 0.0 {
            let rho = (Float::with_val(prec.bits(), -&theta) + &disc) / &s2;
            let rho_hat = Float::with_val(prec.bits(), &product / &rho);
            (rho, rho_hat)
        } else {
            let rho_hat = (Float::with_val(prec.bits(), -&theta) - &disc) / &s2;
            let rho = Float::with_val(prec.bits(), &product / &rho_hat);
            (rho, rho_hat)
        }
    }
}

/// Tolerances used when deciding whether roots are real or coincide with `rho`, `rho_hat`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative tolerance declaring `zeta = rho` (case III) or `zeta_hat = rho_hat` (case C).
    pub classification: f64,
    /// Relative tolerance on the imaginary part of a root to call it real.
    pub imaginary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            classification: 1e-12,
            imaginary: 1e-12,
        }
    }
}

/// The roots `rho, rho_hat` of `p` and `zeta, zeta_hat` of the associated quadratic `p = r^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub rho: f64,
    pub rho_hat: f64,
    #[serde(with = "complex_serde")]
    pub zeta: Complex64,
    #[serde(with = "complex_serde")]
    pub zeta_hat: Complex64,
    pub d: f64,
    pub zeta_solves: bool,
    pub zeta_hat_solves: bool,
}

pub(crate) mod complex_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        Repr { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let r = Repr::deserialize(d)?;
        Ok(Complex64::new(r.re, r.im))
    }
}

/// Discriminant `d = theta^2 + mu^2 - 2 theta mu (q kappa - 1) + q sigma^2 (2 - q kappa)`.
pub fn discriminant(p: &NigParams, q: f64) -> f64 {
    let qk = q * p.kappa;
    p.theta * p.theta + p.mu * p.mu - 2.0 * p.theta * p.mu * (qk - 1.0) + q * p.sigma * p.sigma * (2.0 - qk)
}

fn check_rate(q: f64) -> Result<()> {
    if !(q.is_finite() && q >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "killing rate must be finite and >= 0, got {q}"
        )));
    }
    Ok(())
}

/// Raw quadratic roots `(zeta, zeta_hat)` before any solvability check.
///
/// At `q = 0` the roots are `{0, -2(theta + mu)/(kappa mu^2 + sigma^2)}` with the
/// zero root assigned to `zeta` when `theta + mu > 0`.
pub fn quadratic_roots(p: &NigParams, q: f64) -> (Complex64, Complex64) {
    let denom = p.kappa * p.mu * p.mu + p.sigma * p.sigma;
    if q == 0.0 {
        let other = Complex64::new(-2.0 * (p.theta + p.mu) / denom, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        return if p.theta + p.mu > 0.0 {
            (zero, other)
        } else {
            (other, zero)
        };
    }
    let d = discriminant(p, q);
    let centre = (-p.theta - p.mu + p.kappa * p.mu * q) / denom;
    if d >= 0.0 {
        let half_width = d.sqrt() / denom;
        // the smaller-magnitude root comes from the product q (kappa q - 2) / denom
        let product = q * (p.kappa * q - 2.0) / denom;
        let (zeta, zeta_hat) = if centre >= 0.0 {
            let big = centre + half_width;
            (big, if big != 0.0 { product / big } else { centre - half_width })
        } else {
            let big = centre - half_width;
            (product / big, big)
        };
        (Complex64::new(zeta, 0.0), Complex64::new(zeta_hat, 0.0))
    } else {
        let sd = (-d).sqrt() / denom;
        (Complex64::new(centre, sd), Complex64::new(centre, -sd))
    }
}

/// Locates `rho, rho_hat, zeta, zeta_hat` and decides which of the quadratic roots solve `psi(z) = q`.
pub fn zeta_roots(p: &NigParams, q: f64) -> Result<RootSet> {
    zeta_roots_with(p, q, &Tolerances::default())
}

pub fn zeta_roots_with(p: &NigParams, q: f64, tol: &Tolerances) -> Result<RootSet> {
    p.validate()?;
    check_rate(q)?;
    let (rho, rho_hat) = p.characteristic_roots();
    let (zeta, zeta_hat) = quadratic_roots(p, q);
    let d = if q == 0.0 {
        (p.theta + p.mu).powi(2)
    } else {
        discriminant(p, q)
    };
    Ok(RootSet {
        rho,
        rho_hat,
        zeta,
        zeta_hat,
        d,
        zeta_solves: is_solution_with(p, q, zeta, tol),
        zeta_hat_solves: is_solution_with(p, q, zeta_hat, tol),
    })
}

/// Whether `z0` (one of `zeta`, `zeta_hat`) solves `psi(z) = q`.
///
/// `z0` solves iff it is real, lies in `[rho_hat, 0) U (0, rho]`, `d > 0` and
/// `q - 1/kappa <= mu z0`.
pub fn is_solution(p: &NigParams, q: f64, z0: Complex64) -> bool {
    is_solution_with(p, q, z0, &Tolerances::default())
}

pub fn is_solution_with(p: &NigParams, q: f64, z0: Complex64, tol: &Tolerances) -> bool {
    let scale = z0.norm().max(1.0);
    if z0.im.abs() > tol.imaginary * scale {
        return false;
    }
    let x = z0.re;
    if x == 0.0 {
        return false;
    }
    let d = if q == 0.0 {
        (p.theta + p.mu).powi(2)
    } else {
        discriminant(p, q)
    };
    if d <= 0.0 {
        return false;
    }
    let (rho, rho_hat) = p.characteristic_roots();
    let slack = tol.classification;
    if x > rho + slack * rho.abs().max(1.0) || x < rho_hat - slack * rho_hat.abs().max(1.0) {
        return false;
    }
    let lhs = q - 1.0 / p.kappa;
    let rhs = p.mu * x;
    lhs <= rhs + slack * lhs.abs().max(rhs.abs()).max(1.0)
}

/// Case for `zeta`: I (not a solution), II (solution), III (`zeta = rho`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlusCase {
    I,
    II,
    III,
}

/// Case for `zeta_hat`: A (not a solution), B (solution), C (`zeta_hat = rho_hat`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MinusCase {
    A,
    B,
    C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseLabel {
    pub plus_case: PlusCase,
    pub minus_case: MinusCase,
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}-{:?}", self.plus_case, self.minus_case)
    }
}

fn coincides(root: Complex64, edge: f64, tol: &Tolerances) -> bool {
    let scale = edge.abs().max(1.0);
    root.im.abs() <= tol.imaginary * root.norm().max(1.0) && (root.re - edge).abs() <= tol.classification * scale
}

pub fn classify_case(p: &NigParams, q: f64) -> Result<CaseLabel> {
    classify_case_with(p, q, &Tolerances::default())
}

pub fn classify_case_with(p: &NigParams, q: f64, tol: &Tolerances) -> Result<CaseLabel> {
    let roots = zeta_roots_with(p, q, tol)?;
    Ok(classify_roots(&roots, tol))
}

pub fn classify_roots(roots: &RootSet, tol: &Tolerances) -> CaseLabel {
    let plus_case = if coincides(roots.zeta, roots.rho, tol) {
        PlusCase::III
    } else if roots.zeta_solves {
        PlusCase::II
    } else {
        PlusCase::I
    };
    let minus_case = if coincides(roots.zeta_hat, roots.rho_hat, tol) {
        MinusCase::C
    } else if roots.zeta_hat_solves {
        MinusCase::B
    } else {
        MinusCase::A
    };
    CaseLabel { plus_case, minus_case }
}

/// `Phi_q(z) = psi'(z) / (q - psi(z))`, the logarithmic derivative of `q / (q - psi(z))`.
pub fn phi_q(p: &NigParams, q: f64, z: Complex64) -> Result<Complex64> {
    p.validate()?;
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::InvalidParams(format!("phi_q needs q > 0, got {q}")));
    }
    let den = q - p.laplace_exponent(z);
    if den.norm() <= f64::MIN_POSITIVE || den.norm() <= 1e-300 * q {
        return Err(Error::Pole(format!("q - psi(z) vanishes at z = {z}")));
    }
    Ok(p.laplace_exponent_derivative(z) / den)
}

/// High-precision quadratic roots `(zeta, zeta_hat)`, following the same `q = 0` convention.
pub fn quadratic_roots_big(p: &NigParams, q: f64, prec: Precision) -> (BigComplex, BigComplex) {
    let bits = prec.bits();
    let theta = prec.float(p.theta);
    let mu = prec.float(p.mu);
    let kappa = prec.float(p.kappa);
    let sigma = prec.float(p.sigma);
    let qb = prec.float(q);
    let s2 = Float::with_val(bits, sigma.square_ref());
    let denom = Float::with_val(bits, &kappa * &mu) * &mu + &s2;
    if q == 0.0 {
        let sum = Float::with_val(bits, &theta + &mu);
        let other = BigComplex::from_real(Float::with_val(bits, -2 * sum) / &denom);
        let zero = BigComplex::zero(prec);
        return if p.theta + p.mu > 0.0 {
            (zero, other)
        } else {
            (other, zero)
        };
    }
    let qk = Float::with_val(bits, &qb * &kappa);
    let qk_m1 = Float::with_val(bits, &qk - 1u32);
    let two_m_qk = Float::with_val(bits, 2u32 - &qk);
    let d = Float::with_val(bits, theta.square_ref()) + Float::with_val(bits, mu.square_ref())
        - Float::with_val(bits, &theta * &mu) * 2u32 * &qk_m1
        + Float::with_val(bits, &qb * &s2) * &two_m_qk;
    let centre = (Float::with_val(bits, -&theta) - &mu + Float::with_val(bits, &qk * &mu)) / &denom;
    if !d.is_sign_negative() {
        let sd = d.sqrt() / &denom;
        (
            BigComplex::from_real(Float::with_val(bits, &centre + &sd)),
            BigComplex::from_real(Float::with_val(bits, &centre - &sd)),
        )
    } else {
        let sd = Float::with_val(bits, -d).sqrt() / &denom;
        (
            BigComplex::new(centre.clone(), sd.clone()),
            BigComplex::new(centre, -sd),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signed_case() -> (NigParams, f64) {
        (NigParams::new(-1.0, 1.0, 16.0, 7.0 / 32.0).unwrap(), 19.0 / 64.0)
    }

    #[test]
    fn laplace_exponent_vanishes_at_zero() {
        let (p, _) = signed_case();
        assert_eq!(p.laplace_exponent(Complex64::new(0.0, 0.0)), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn derivative_at_zero_is_mean() {
        let p = NigParams::new(0.3, 0.7, 2.0, -0.4).unwrap();
        let h = 1e-6;
        let fd = (p.laplace_exponent(Complex64::new(h, 0.0)) - p.laplace_exponent(Complex64::new(-h, 0.0))) / (2.0 * h);
        assert!((fd.re - p.mean()).abs() < 1e-8);
        assert!((p.laplace_exponent_derivative(Complex64::new(0.0, 0.0)).re - p.mean()).abs() < 1e-15);
    }

    #[test]
    fn risk_neutral_option_parameters() {
        let p = NigParams::new(-1.0, 0.25, 1.0, 0.723914).unwrap();
        let v = p.laplace_exponent(Complex64::new(1.0, 0.0));
        assert!((v.re - 0.01).abs() < 1e-6, "{v}");
    }

    #[test]
    fn characteristic_roots_examples() {
        let (p, _) = signed_case();
        let (rho, rho_hat) = p.characteristic_roots();
        assert!((rho - (1.0 + 17f64.sqrt() / 4.0)).abs() < 1e-15);
        assert!(rho_hat < 0.0);
        let sym = NigParams::new(0.0, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(sym.characteristic_roots(), (1.0, -1.0));
        for z in [rho, rho_hat] {
            assert!(p.quadratic(Complex64::new(z, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn big_roots_agree_with_machine_roots() {
        let p = NigParams::new(2.5, 0.3, 0.7, 1.0).unwrap();
        let (rho, rho_hat) = p.characteristic_roots();
        let (br, brh) = p.characteristic_roots_big(Precision::new(50));
        assert!((br.to_f64() - rho).abs() < 1e-14 * rho.abs());
        assert!((brh.to_f64() - rho_hat).abs() < 1e-14 * rho_hat.abs());
    }

    #[test]
    fn signed_case_roots_and_case() {
        let (p, q) = signed_case();
        let r = zeta_roots(&p, q).unwrap();
        assert!((r.zeta.re - 1.805903).abs() < 1e-6);
        assert!((r.zeta_hat.re - 0.256043).abs() < 1e-6);
        assert!(r.zeta_solves);
        assert!(!r.zeta_hat_solves);
        let label = classify_case(&p, q).unwrap();
        assert_eq!(
            label,
            CaseLabel {
                plus_case: PlusCase::II,
                minus_case: MinusCase::A
            }
        );
    }

    #[test]
    fn gamma_case_roots_coincide() {
        let p = NigParams::new(-0.4, 1.3, 2.0, 0.0).unwrap();
        let r = zeta_roots(&p, 0.5).unwrap();
        assert!((r.zeta.re - r.rho).abs() < 1e-14);
        assert!((r.zeta_hat.re - r.rho_hat).abs() < 1e-14);
        let label = classify_case(&p, 0.5).unwrap();
        assert_eq!(
            label,
            CaseLabel {
                plus_case: PlusCase::III,
                minus_case: MinusCase::C
            }
        );
    }

    #[test]
    fn q_zero_roots() {
        let cramer_set = NigParams::new(-1.0, 2.0, 1.0, 1.5).unwrap();
        let r = zeta_roots(&cramer_set, 0.0).unwrap();
        assert_eq!(r.zeta.re, 0.0);
        assert!((r.zeta_hat.re + 0.16).abs() < 1e-15);
        assert!(r.zeta_hat_solves);

        let edge_set = NigParams::new(-1.0, 2.0, 0.5, 4.0).unwrap();
        let label = classify_case(&edge_set, 0.0).unwrap();
        assert_eq!(label.minus_case, MinusCase::C);
        let r = zeta_roots(&edge_set, 0.0).unwrap();
        assert!((r.zeta_hat.re - r.rho_hat).abs() < 1e-15);
    }

    #[test]
    fn zero_is_never_a_solution() {
        let (p, q) = signed_case();
        assert!(!is_solution(&p, q, Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn phi_q_at_zero() {
        let p = NigParams::new(-1.0, 1.0, 187.0 / 64.0, -4.0).unwrap();
        let v = phi_q(&p, 1.0, Complex64::new(0.0, 0.0)).unwrap();
        assert!((v.re + 5.0).abs() < 1e-15);
    }

    #[test]
    fn phi_q_matches_finite_difference_of_log() {
        let p = NigParams::new(-1.0, 1.0, 187.0 / 64.0, -4.0).unwrap();
        let q = 1.0;
        let f = |z: f64| (q / (q - p.laplace_exponent(Complex64::new(z, 0.0)))).ln();
        let h = 1e-6;
        let z = 0.01;
        let fd = (f(z + h) - f(z - h)) / (2.0 * h);
        let v = phi_q(&p, q, Complex64::new(z, 0.0)).unwrap();
        assert!((fd.re - v.re).abs() < 1e-7 * v.re.abs().max(1.0), "{fd} vs {v}");
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(NigParams::new(0.0, 0.0, 1.0, 0.0).is_err());
        assert!(NigParams::new(0.0, 1.0, -1.0, 0.0).is_err());
        assert!(NigParams::new(f64::NAN, 1.0, 1.0, 0.0).is_err());
        let p = NigParams::new(0.0, 1.0, 1.0, 0.0).unwrap();
        assert!(zeta_roots(&p, -1.0).is_err());
    }
}
