//! Negative moments `m_k = int x^{-k} tau(dx)` of a Thorin measure in closed form.
//!
//! The continuous part is reduced by partial fractions to integrals
//! `L_j = int_R^inf x^{-j} / sqrt((x - C)(x - R)) dx` and single-pole integrals
//! `int_R^inf dx / ((x - J) sqrt((x - C)(x - R)))`, all evaluated exactly. The
//! recursions mix terms of alternating sign, so everything runs at a caller
//! supplied [`Precision`].

use rug::{Float, Integer};

use crate::bigfloat::{BigComplex, Precision};
use crate::error::{Error, Result};
use crate::factorization::{is_ggc, BigThorinForm, SpectralMeasure};

fn check_roots(c: &Float, r: &Float) -> Result<()> {
    if !r.is_sign_positive() || r.is_zero() || c >= r {
        return Err(Error::Domain(format!(
            "need C < R with R > 0, got C = {}, R = {}",
            c.to_f64(),
            r.to_f64()
        )));
    }
    Ok(())
}

/// `L_1, ..., L_kmax` for `Q(x) = (x - C)(x - R)`, integrated over `(R, inf)`.
///
/// With `a = C R` and `b = -(C + R)`: for `C < 0`,
/// `L_1 = (atan(b / (2 sqrt(-a))) + pi/2) / sqrt(-a)`; for `0 < C < R`,
/// `L_1 = ln((sqrt R + sqrt C) / (sqrt R - sqrt C)) / sqrt(a)`. Then `L_2 = -1/a - b L_1 / (2a)`,
/// `L_k = -(2k - 3) b L_{k-1} / (2 (k - 1) a) - (k - 2) L_{k-2} / ((k - 1) a)`.
pub fn stieltjes_power_integrals(kmax: usize, c: &Float, r: &Float) -> Result<Vec<Float>> {
    check_roots(c, r)?;
    let bits = c.prec().max(r.prec());
    let a = Float::with_val(bits, c * r);
    let b = -Float::with_val(bits, c + r);
    let mut out = Vec::with_capacity(kmax);
    if kmax == 0 {
        return Ok(out);
    }
    let l1 = if c.is_zero() {
        Float::with_val(bits, 2u32) / r
    } else if c.is_sign_negative() {
        let sqrt_neg_a = Float::with_val(bits, -&a).sqrt();
        let half_pi = Float::with_val(bits, rug::float::Constant::Pi) / 2u32;
        let ratio = Float::with_val(bits, &b / (Float::with_val(bits, &sqrt_neg_a * 2u32)));
        (ratio.atan() + &half_pi) / &sqrt_neg_a
    } else {
        let (sc, sr) = (Float::with_val(bits, c.sqrt_ref()), Float::with_val(bits, r.sqrt_ref()));
        let ratio = Float::with_val(bits, &sr + &sc) / Float::with_val(bits, &sr - &sc);
        ratio.ln() / Float::with_val(bits, a.sqrt_ref())
    };
    out.push(l1);
    if kmax >= 2 {
        let l2 =
            -(Float::with_val(bits, 1) / &a) - Float::with_val(bits, &b * &out[0]) / Float::with_val(bits, &a * 2u32);
        out.push(l2);
    }
    for k in 3..=kmax {
        let kf = k as u32;
        let t1 = Float::with_val(bits, &b * &out[k - 2]) * (2 * kf - 3) / (Float::with_val(bits, &a * (2 * (kf - 1))));
        let t2 = Float::with_val(bits, &out[k - 3] * (kf - 2)) / (Float::with_val(bits, &a * (kf - 1)));
        out.push(-t1 - t2);
    }
    Ok(out)
}

/// `int_R^inf x^{-k} / sqrt((x - C)(x - R)) dx` in machine precision.
pub fn stieltjes_power_integral(k: usize, c: f64, r: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("k must be >= 1".into()));
    }
    let prec = Precision::new(40 + k as u32);
    let all = stieltjes_power_integrals(k, &prec.float(c), &prec.float(r))?;
    Ok(all[k - 1].to_f64())
}

/// `int_R^inf dx / ((x - J) sqrt((x - C)(x - R)))` for real `J < R`, via the shift `x -> x + J`.
pub fn pole_integral_real_big(j: &Float, c: &Float, r: &Float) -> Result<Float> {
    let bits = c.prec().max(r.prec()).max(j.prec());
    let cs = Float::with_val(bits, c - j);
    let rs = Float::with_val(bits, r - j);
    if !(rs.is_sign_positive() && !rs.is_zero()) {
        return Err(Error::Domain(format!(
            "pole {} must lie below the support, C = {}, R = {}",
            j.to_f64(),
            c.to_f64(),
            r.to_f64()
        )));
    }
    Ok(stieltjes_power_integrals(1, &cs, &rs)?.remove(0))
}

pub fn pole_integral_real(j: f64, c: f64, r: f64) -> Result<f64> {
    let prec = Precision::new(40);
    Ok(pole_integral_real_big(&prec.float(j), &prec.float(c), &prec.float(r))?.to_f64())
}

/// `int_R^inf dx / ((x - D) sqrt((x - C)(x - R)))` for non-real `D`, via the Euler substitution.
pub fn pole_integral_complex_big(d: &BigComplex, c: &Float, r: &Float) -> Result<BigComplex> {
    if d.im.is_zero() {
        return Err(Error::Domain("pole must have a nonzero imaginary part".into()));
    }
    check_roots(c, r)?;
    let bits = d.prec().max(c.prec());
    // r+- = -D +- sqrt((D - C)(D - R))
    let disc = (&(d - c) * &(d - r)).sqrt();
    let neg_d = -d;
    let r_plus = &neg_d + &disc;
    let r_minus = &neg_d - &disc;
    let upper = BigComplex::from_real(-(Float::with_val(bits, c + r) / 2u32));
    let lower = BigComplex::from_real(Float::with_val(bits, -r));
    let log_sum = &(&(&upper - &r_plus).ln() + &(&lower - &r_minus).ln())
        - &(&(&upper - &r_minus).ln() + &(&lower - &r_plus).ln());
    let two = BigComplex::from_real(Float::with_val(bits, 2));
    Ok(&(&two / &(&r_plus - &r_minus)) * &log_sum)
}

pub fn pole_integral_complex(d: num_complex::Complex64, c: f64, r: f64) -> Result<num_complex::Complex64> {
    let prec = Precision::new(40);
    Ok(pole_integral_complex_big(&BigComplex::from_c64(prec, d), &prec.float(c), &prec.float(r))?.to_c64())
}

/// Partial fractions of `(A x + B) / (x^k (x - D)(x - E))`:
/// `sum_{j=1}^k a1[k - j] / x^j + (a21 x + a20) / ((x - D)(x - E))`.
#[derive(Clone, Debug)]
pub struct PartialFractionCoeffs {
    /// `a_{1,0}, ..., a_{1,k-1}`.
    pub a1: Vec<BigComplex>,
    pub a20: BigComplex,
    pub a21: BigComplex,
}

/// The Laurent coefficients `a_{1,j}` for `j = 0..len`, using `a_{1,-1} = -A`,
/// `a_{1,0} = B/(DE)` and `a_{1,j} = (a_{1,j-1}(D + E) - a_{1,j-2}) / (DE)`.
fn laurent_sequence(
    a: &BigComplex,
    b: &BigComplex,
    d: &BigComplex,
    e: &BigComplex,
    len: usize,
) -> Result<Vec<BigComplex>> {
    let de = d * e;
    if de.re.is_zero() && de.im.is_zero() {
        return Err(Error::Domain("partial fractions need nonzero poles".into()));
    }
    let sum = d + e;
    let inv_de = de.recip();
    let mut prev = -a; // a_{1,-1}
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return Ok(out);
    }
    let mut cur = b * &inv_de;
    out.push(cur.clone());
    for _ in 1..len {
        let next = &(&(&cur * &sum) - &prev) * &inv_de;
        prev = cur;
        cur = next;
        out.push(cur.clone());
    }
    Ok(out)
}

fn tail_coefficients(a: &BigComplex, a1: &[BigComplex], sum: &BigComplex) -> (BigComplex, BigComplex) {
    let k = a1.len();
    let last = &a1[k - 1];
    let before = if k >= 2 { a1[k - 2].clone() } else { -a };
    let a21 = -last;
    let a20 = &(last * sum) - &before;
    (a20, a21)
}

pub fn partial_fraction_coeffs(
    a: &BigComplex,
    b: &BigComplex,
    d: &BigComplex,
    e: &BigComplex,
    k: usize,
) -> Result<PartialFractionCoeffs> {
    if k == 0 {
        return Err(Error::Domain("k must be >= 1".into()));
    }
    let is_zero = |z: &BigComplex| z.re.is_zero() && z.im.is_zero();
    if is_zero(a) && is_zero(b) {
        return Err(Error::Domain("numerator A x + B vanishes identically".into()));
    }
    let a1 = laurent_sequence(a, b, d, e, k)?;
    let (a20, a21) = tail_coefficients(a, &a1, &(d + e));
    Ok(PartialFractionCoeffs { a1, a20, a21 })
}

/// Negative moments and the derived cumulants and raw moments.
#[derive(Clone, Debug)]
pub struct MomentSequence {
    pub prec: Precision,
    /// `m_1..m_K`.
    pub m: Vec<Float>,
    /// `kappa_k = (k - 1)! m_k`.
    pub kappa_cum: Vec<Float>,
    /// `mu_0 = 1, mu_1, ..., mu_K`.
    pub mu_raw: Vec<Float>,
    /// Inf of the Thorin support.
    pub radius: f64,
    /// Whether the underlying Thorin measure is positive.
    pub ggc: bool,
}

impl MomentSequence {
    /// Wraps negative moments of a positive measure supported in `[radius, inf)`.
    pub fn from_negative_moments(m: Vec<Float>, prec: Precision, radius: f64) -> Self {
        let mut seq = MomentSequence {
            prec,
            m,
            kappa_cum: Vec::new(),
            mu_raw: Vec::new(),
            radius,
            ggc: true,
        };
        seq.fill();
        seq
    }

    pub fn k_max(&self) -> usize {
        self.m.len()
    }

    fn fill(&mut self) {
        let bits = self.prec.bits();
        let mut fact = Float::with_val(bits, 1);
        self.kappa_cum = Vec::with_capacity(self.m.len());
        for (i, mk) in self.m.iter().enumerate() {
            if i > 0 {
                fact *= i as u32;
            }
            self.kappa_cum.push(Float::with_val(bits, mk * &fact));
        }
        self.mu_raw = cumulants_to_raw(&self.kappa_cum, self.prec);
    }

    pub fn m_f64(&self) -> Vec<f64> {
        self.m.iter().map(Float::to_f64).collect()
    }

    pub fn cumulants_f64(&self) -> Vec<f64> {
        self.kappa_cum.iter().map(Float::to_f64).collect()
    }

    pub fn raw_moments_f64(&self) -> Vec<f64> {
        self.mu_raw.iter().map(Float::to_f64).collect()
    }
}

/// Raw moments `mu_0..mu_K` from cumulants `kappa_1..kappa_K`:
/// `mu_k = sum_{j=1}^k C(k-1, j-1) kappa_j mu_{k-j}`.
pub fn cumulants_to_raw(kappa: &[Float], prec: Precision) -> Vec<Float> {
    let bits = prec.bits();
    let mut mu = vec![Float::with_val(bits, 1)];
    for k in 1..=kappa.len() {
        let mut s = Float::with_val(bits, 0);
        for j in 1..=k {
            let binom = Integer::from(Integer::binomial_u((k - 1) as u32, (j - 1) as u32));
            s += Float::with_val(bits, &kappa[j - 1] * &mu[k - j]) * &binom;
        }
        mu.push(s);
    }
    mu
}

/// Cumulants `kappa_1..kappa_K` from raw moments `mu_0 = 1, mu_1..mu_K`.
pub fn raw_to_cumulants(mu: &[Float], prec: Precision) -> Vec<Float> {
    let bits = prec.bits();
    let k_max = mu.len().saturating_sub(1);
    let mut kappa: Vec<Float> = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut s = mu[k].clone();
        for j in 1..k {
            let binom = Integer::from(Integer::binomial_u((k - 1) as u32, (j - 1) as u32));
            s -= Float::with_val(bits, &kappa[j - 1] * &mu[k - j]) * &binom;
        }
        kappa.push(s);
    }
    kappa
}

/// Fills `mu_raw` (and `kappa_cum`) of a sequence from its `m`.
pub fn cumulants_to_moments(seq: &MomentSequence) -> MomentSequence {
    let mut out = seq.clone();
    out.fill();
    out
}

/// Digits lost to cancellation in the Laurent recursion when poles sit closer to 0 than the edge.
fn extra_digits(form: &BigThorinForm, k_max: usize) -> u32 {
    let edge = form.edge.to_f64();
    let mut worst: f64 = 1.0;
    for p in &form.poles {
        let modulus = p.abs().to_f64();
        if modulus > 0.0 && modulus < edge {
            worst = worst.max(edge / modulus);
        }
    }
    for (loc, _) in &form.atoms {
        let l = loc.to_f64().abs();
        if l > 0.0 && l < edge {
            worst = worst.max(edge / l);
        }
    }
    (k_max as f64 * worst.log10()).ceil() as u32 + 20
}

/// `m_1..m_kmax` of the Thorin measure of `m` at precision `prec`.
pub fn negative_moments(m: &SpectralMeasure, k_max: usize, prec: Precision) -> Result<MomentSequence> {
    let thorin = m.to_thorin();
    let probe = thorin.thorin_form_big(Precision::new(30))?;
    let work = Precision::new(prec.digits() + extra_digits(&probe, k_max));
    let form = thorin.thorin_form_big(work)?;
    let values = moments_of_form(&form, k_max)?;
    let bits = prec.bits();
    let m_vals = values.into_iter().map(|v| Float::with_val(bits, v)).collect();
    let mut seq = MomentSequence::from_negative_moments(m_vals, prec, thorin.radius());
    seq.ggc = is_ggc(&thorin);
    Ok(seq)
}

/// Single negative moment `m_k` in machine precision.
pub fn negative_moment(m: &SpectralMeasure, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("k must be >= 1".into()));
    }
    let seq = negative_moments(m, k, Precision::new(40))?;
    Ok(seq.m[k - 1].to_f64())
}

fn moments_of_form(form: &BigThorinForm, k_max: usize) -> Result<Vec<Float>> {
    let prec = form.prec;
    let bits = prec.bits();
    let mut out: Vec<Float> = (0..k_max).map(|_| prec.zero()).collect();
    for (loc, w) in &form.atoms {
        let inv = Float::with_val(bits, loc.recip_ref());
        let mut pw = inv.clone();
        for slot in out.iter_mut() {
            *slot += Float::with_val(bits, w * &pw);
            pw *= &inv;
        }
    }
    if !form.has_density {
        return Ok(out);
    }
    // poles sitting exactly at 0 become extra powers of x
    let is_zero = |z: &BigComplex| z.re.is_zero() && z.im.is_zero();
    let zero_poles = form.poles.iter().filter(|p| is_zero(p)).count();
    let poles: Vec<&BigComplex> = form.poles.iter().filter(|p| !is_zero(p)).collect();
    let shift = zero_poles;
    let l = stieltjes_power_integrals(k_max + shift, &form.lower, &form.edge)?;
    let a = BigComplex::from_real(form.a_coef.clone());
    let b = BigComplex::from_real(form.b_coef.clone());
    match poles.len() {
        0 => {
            for k in 1..=k_max {
                let kk = k + shift;
                let mut v = Float::with_val(bits, &form.b_coef * &l[kk - 1]);
                if !form.a_coef.is_zero() {
                    if kk < 2 {
                        return Err(Error::Domain("moment integral diverges".into()));
                    }
                    v += Float::with_val(bits, &form.a_coef * &l[kk - 2]);
                }
                out[k - 1] += v;
            }
        }
        1 => {
            let d = poles[0];
            if !d.im.is_zero() {
                return Err(Error::Unsupported("a single complex pole".into()));
            }
            let dr = &d.re;
            let jd = pole_integral_real_big(dr, &form.lower, &form.edge)?;
            let inv = Float::with_val(bits, dr.recip_ref());
            // 1/(x - D) = -sum_m x^m / D^{m+1}; g_m are the Laurent coefficients of (A x + B)/(x - D)
            let mut g = Vec::with_capacity(k_max + shift);
            let mut inv_pow = inv.clone(); // D^{-(m+1)}
            let mut prev_inv_pow = Float::with_val(bits, 1); // D^{-m}
            for _ in 0..(k_max + shift) {
                let gm = -(Float::with_val(bits, &form.b_coef * &inv_pow)
                    + Float::with_val(bits, &form.a_coef * &prev_inv_pow));
                g.push(gm);
                prev_inv_pow = inv_pow.clone();
                inv_pow *= &inv;
            }
            // g_0 has no A term
            g[0] = -Float::with_val(bits, &form.b_coef * &inv);
            let ad_b = Float::with_val(bits, &form.a_coef * dr) + &form.b_coef;
            let mut d_pow = Float::with_val(bits, 1);
            for _ in 0..shift {
                d_pow *= dr;
            }
            for k in 1..=k_max {
                let kk = k + shift;
                d_pow *= dr;
                let mut v = Float::with_val(bits, &ad_b / &d_pow) * &jd;
                for j in 1..=kk {
                    v += Float::with_val(bits, &g[kk - j] * &l[j - 1]);
                }
                out[k - 1] += v;
            }
        }
        2 => {
            let (d, e) = (poles[0], poles[1]);
            let a1 = laurent_sequence(&a, &b, d, e, k_max + shift)?;
            let sum = d + e;
            let complex_pair = !d.im.is_zero();
            let equal = d == e;
            // pole integrals are independent of k
            let (jd, je) = if complex_pair {
                (Some(pole_integral_complex_big(d, &form.lower, &form.edge)?), None)
            } else if equal {
                let cs = Float::with_val(bits, &form.lower - &d.re);
                let rs = Float::with_val(bits, &form.edge - &d.re);
                let ls = stieltjes_power_integrals(2, &cs, &rs)?;
                (
                    Some(BigComplex::from_real(ls[0].clone())),
                    Some(BigComplex::from_real(ls[1].clone())),
                )
            } else {
                (
                    Some(BigComplex::from_real(pole_integral_real_big(
                        &d.re,
                        &form.lower,
                        &form.edge,
                    )?)),
                    Some(BigComplex::from_real(pole_integral_real_big(
                        &e.re,
                        &form.lower,
                        &form.edge,
                    )?)),
                )
            };
            let jd = jd.expect("pole integral");
            for k in 1..=k_max {
                let kk = k + shift;
                let (a20, a21) = tail_coefficients(&a, &a1[..kk], &sum);
                let mut acc = BigComplex::zero(prec);
                for j in 1..=kk {
                    acc = &acc + &a1[kk - j].scale(&l[j - 1]);
                }
                let rem = if complex_pair {
                    // r/(x - D) + conj(r)/(x - conj D), r = (a21 D + a20)/(D - conj D)
                    let r = &(&(&a21 * d) + &a20) / &(d - &d.conj());
                    let t = &r * &jd;
                    BigComplex::from_real(Float::with_val(bits, &t.re * 2u32))
                } else if equal {
                    // (a21 x + a20)/(x - D)^2 = a21/(x - D) + (a21 D + a20)/(x - D)^2
                    let je = je.as_ref().expect("second integral");
                    &(&a21 * &jd) + &(&(&(&a21 * d) + &a20) * je)
                } else {
                    let je = je.as_ref().expect("second integral");
                    let rd = &(&(&a21 * d) + &a20) / &(d - e);
                    let re = &(&(&a21 * e) + &a20) / &(e - d);
                    &(&rd * &jd) + &(&re * je)
                };
                acc = &acc + &rem;
                out[k - 1] += &acc.re;
            }
        }
        _ => return Err(Error::Unsupported("more than two poles".into())),
    }
    Ok(out)
}

/// `(k - 1)!` as a float.
pub fn factorial(k: u32, prec: Precision) -> Float {
    let f = Integer::from(Integer::factorial(k));
    prec.float(&f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::{omega_measure, thorin_measure, Side};
    use crate::nig::NigParams;
    use crate::quadrature::TanhSinh;
    use num_complex::Complex64;

    fn quad_l(k: i32, c: f64, r: f64) -> f64 {
        TanhSinh::default()
            .integrate_half_line(r, |x, off| x.powi(-k) / ((x - c) * off).sqrt())
            .unwrap()
    }

    #[test]
    fn l1_symmetric_roots() {
        let v = stieltjes_power_integral(1, -1.0, 1.0).unwrap();
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn l_k_against_quadrature() {
        for k in 1..=6 {
            let v = stieltjes_power_integral(k, -2.0, 1.0).unwrap();
            let q = quad_l(k as i32, -2.0, 1.0);
            assert!((v - q).abs() < 1e-12 * v, "k={k}: {v} vs {q}");
        }
    }

    #[test]
    fn rejects_bad_roots() {
        assert!(stieltjes_power_integral(1, 1.5, 1.0).is_err());
        assert!(stieltjes_power_integral(1, -0.5, -1.0).is_err());
        assert!(pole_integral_real(1.5, -1.0, 1.0).is_err());
        assert!(pole_integral_real(1.0, -1.0, 1.0).is_err());
        assert!(pole_integral_complex(Complex64::new(0.3, 0.0), -1.0, 1.0).is_err());
    }

    #[test]
    fn pole_below_lower_root() {
        for j in [-1.0, -3.0] {
            let v = pole_integral_real(j, -1.0, 1.0).unwrap();
            let q = TanhSinh::default()
                .integrate_half_line(1.0, |x, off| 1.0 / ((x - j) * ((x + 1.0) * off).sqrt()))
                .unwrap();
            assert!((v - q).abs() < 1e-12 * v, "J={j}: {v} vs {q}");
        }
    }

    #[test]
    fn real_pole_against_quadrature() {
        assert!(
            (pole_integral_real(0.0, -1.0, 1.0).unwrap() - stieltjes_power_integral(1, -1.0, 1.0).unwrap()).abs()
                < 1e-16
        );
        let v = pole_integral_real(-0.5, -1.0, 1.0).unwrap();
        let q = TanhSinh::default()
            .integrate_half_line(1.0, |x, off| 1.0 / ((x + 0.5) * ((x + 1.0) * off).sqrt()))
            .unwrap();
        assert!((v - q).abs() < 1e-12 * v);
    }

    #[test]
    fn complex_pole_against_quadrature() {
        let d = Complex64::new(0.3, 0.4);
        let v = pole_integral_complex(d, -1.0, 1.0).unwrap();
        let q = TanhSinh::default()
            .integrate_half_line_complex(1.0, |x, off| 1.0 / ((x - d) * ((x + 1.0) * off).sqrt()))
            .unwrap();
        assert!((v - q).norm() < 1e-12 * v.norm(), "{v} vs {q}");
        let vc = pole_integral_complex(d.conj(), -1.0, 1.0).unwrap();
        assert!((vc - v.conj()).norm() < 1e-15);
        assert!((v + vc).im.abs() < 1e-15);
    }

    fn eval_identity(a: Complex64, b: Complex64, d: Complex64, e: Complex64, k: usize) {
        let p = Precision::new(40);
        let bc = |z: Complex64| BigComplex::from_c64(p, z);
        let pf = partial_fraction_coeffs(&bc(a), &bc(b), &bc(d), &bc(e), k).unwrap();
        for x in [2.0, 3.0, 5.0, 7.0, 11.0] {
            // evaluate both sides at high precision; the expansion cancels heavily in doubles
            let xb = bc(Complex64::new(x, 0.0));
            let den = &(&xb - &bc(d)) * &(&xb - &bc(e));
            let mut xk = bc(Complex64::new(1.0, 0.0));
            for _ in 0..k {
                xk = &xk * &xb;
            }
            let lhs = &(&(&bc(a) * &xb) + &bc(b)) / &(&xk * &den);
            let mut rhs = &(&(&pf.a21 * &xb) + &pf.a20) / &den;
            let mut xj = bc(Complex64::new(1.0, 0.0));
            for j in 1..=k {
                xj = &xj * &xb;
                rhs = &rhs + &(&pf.a1[k - j] / &xj);
            }
            let (l, r) = (lhs.to_c64(), rhs.to_c64());
            assert!((l - r).norm() < 1e-14 * l.norm(), "k={k} x={x}: {l} vs {r}");
        }
    }

    #[test]
    fn partial_fractions_reproduce_rational_function() {
        let c = Complex64::new;
        for k in 1..=6 {
            eval_identity(c(0.7, 0.0), c(-1.3, 0.0), c(0.4, 0.0), c(-0.9, 0.0), k);
            eval_identity(c(0.0, 0.0), c(2.0, 0.0), c(0.5, 0.25), c(0.5, -0.25), k);
            eval_identity(c(1.5, 0.0), c(0.2, 0.0), c(-0.6, 0.0), c(-0.6, 0.0), k);
        }
    }

    #[test]
    fn partial_fractions_base_values() {
        let p = Precision::new(30);
        let r = |x: f64| BigComplex::from_c64(p, Complex64::new(x, 0.0));
        let pf = partial_fraction_coeffs(&r(2.0), &r(3.0), &r(0.5), &r(-0.25), 2).unwrap();
        let de = 0.5 * -0.25;
        assert!((pf.a1[0].to_c64().re - 3.0 / de).abs() < 1e-12);
        assert!((pf.a1[1].to_c64().re - (2.0 / de + 3.0 * 0.25 / (de * de))).abs() < 1e-12);
        assert!(partial_fraction_coeffs(&r(0.0), &r(0.0), &r(0.5), &r(-0.25), 2).is_err());
        assert!(partial_fraction_coeffs(&r(1.0), &r(0.0), &r(0.0), &r(-0.25), 2).is_err());
    }

    #[test]
    fn half_atom_moments() {
        let p = NigParams::new(-0.4, 1.3, 2.0, 0.0).unwrap();
        let m = omega_measure(&p, 0.5, Side::Plus).unwrap();
        let (rho, _) = p.characteristic_roots();
        for k in 1..=5 {
            let v = negative_moment(&m, k).unwrap();
            assert!((v - 0.5 * rho.powi(-(k as i32))).abs() < 1e-15 * v);
        }
    }

    #[test]
    fn first_cumulant_identity() {
        let p = NigParams::new(-1.0, 1.0, 187.0 / 64.0, -4.0).unwrap();
        let prec = Precision::new(50);
        let plus = negative_moments(&thorin_measure(&p, 1.0, Side::Plus).unwrap(), 2, prec).unwrap();
        let minus = negative_moments(&thorin_measure(&p, 1.0, Side::Minus).unwrap(), 2, prec).unwrap();
        let k1 = plus.kappa_cum[0].to_f64() - minus.kappa_cum[0].to_f64();
        assert!((k1 + 5.0).abs() < 1e-14, "{k1}");
        let k2 = plus.kappa_cum[1].to_f64() + minus.kappa_cum[1].to_f64();
        assert!((k2 - 28.921875).abs() < 1e-12, "{k2}");
    }

    #[test]
    fn gamma_moments_from_cumulants() {
        let prec = Precision::new(30);
        let (alpha, beta) = (2.5, 4.0);
        let m: Vec<Float> = (1..=4).map(|k| prec.float(alpha / f64::powi(beta, k))).collect();
        let seq = MomentSequence::from_negative_moments(m, prec, beta);
        let mu = seq.raw_moments_f64();
        assert_eq!(mu[0], 1.0);
        assert!((mu[1] - alpha / beta).abs() < 1e-15);
        assert!((mu[2] - alpha * (alpha + 1.0) / (beta * beta)).abs() < 1e-15);
        let back = raw_to_cumulants(&seq.mu_raw, prec);
        for (x, y) in back.iter().zip(&seq.kappa_cum) {
            assert!((x.to_f64() - y.to_f64()).abs() < 1e-15 * y.to_f64().abs());
        }
        let zero = MomentSequence::from_negative_moments(vec![prec.zero(); 3], prec, 1.0);
        assert!(zero.raw_moments_f64()[1..].iter().all(|&v| v == 0.0));
    }
}
