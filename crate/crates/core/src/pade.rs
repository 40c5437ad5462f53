//! `[n-1/n]` Padé approximants and the finite mixtures read off their poles.

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::bigfloat::{BigComplex, Precision};
use crate::distributions::{ExponentialMixture, GammaConvolution};
use crate::error::{Error, Result};
use crate::moments::MomentSequence;

/// What the Taylor coefficients describe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PadeSource {
    /// Derivative of a cumulant generating function, `c_k = m_{k+1}`.
    CgfDeriv,
    /// A moment generating function, `c_k = mu_k / k!`.
    Mgf,
}

#[derive(Clone, Debug)]
pub struct PadeApproximant {
    /// `a_0..a_{n-1}`.
    pub numer: Vec<Float>,
    /// `b_0 = 1, b_1..b_n`.
    pub denom: Vec<Float>,
    pub n: usize,
    pub source: PadeSource,
    pub prec: Precision,
}

impl PadeApproximant {
    pub fn eval(&self, z: &BigComplex) -> BigComplex {
        &horner(&self.numer, z) / &horner(&self.denom, z)
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        let zb = BigComplex::from_real(self.prec.float(z));
        self.eval(&zb).re.to_f64()
    }
}

fn horner(coeffs: &[Float], z: &BigComplex) -> BigComplex {
    let bits = z.prec();
    let mut acc = BigComplex::from_real(Float::with_val(bits, 0));
    for c in coeffs.iter().rev() {
        acc = &(&acc * z) + c;
    }
    acc
}

/// Value and derivative of `sum coeffs[k] z^k`.
fn horner_with_derivative(coeffs: &[Float], z: &BigComplex) -> (BigComplex, BigComplex) {
    let bits = z.prec();
    let mut p = BigComplex::from_real(Float::with_val(bits, 0));
    let mut dp = p.clone();
    for c in coeffs.iter().rev() {
        dp = &(&dp * z) + &p;
        p = &(&p * z) + c;
    }
    (p, dp)
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
fn solve_linear(mut a: Vec<Vec<Float>>, mut b: Vec<Float>, prec: Precision) -> Result<Vec<Float>> {
    let n = b.len();
    let bits = prec.bits();
    let mut scale = prec.zero();
    for row in &a {
        for x in row {
            let ax = Float::with_val(bits, x.abs_ref());
            if ax > scale {
                scale = ax;
            }
        }
    }
    let tiny = Float::with_val(bits, &scale * prec.pow10(-(prec.digits() as i32 - 10)));
    for col in 0..n {
        let mut best = col;
        let mut best_abs = Float::with_val(bits, a[col][col].abs_ref());
        for row in (col + 1)..n {
            let v = Float::with_val(bits, a[row][col].abs_ref());
            if v > best_abs {
                best = row;
                best_abs = v;
            }
        }
        if best_abs <= tiny {
            return Err(Error::SingularSystem {
                n,
                digits: prec.digits(),
            });
        }
        a.swap(col, best);
        b.swap(col, best);
        for row in (col + 1)..n {
            let factor = Float::with_val(bits, &a[row][col] / &a[col][col]);
            if factor.is_zero() {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            let pivot_row = &upper[col];
            for j in col..n {
                let t = Float::with_val(bits, &factor * &pivot_row[j]);
                lower[0][j] -= t;
            }
            let t = Float::with_val(bits, &factor * &b[col]);
            b[row] -= t;
        }
    }
    let mut x: Vec<Float> = (0..n).map(|_| prec.zero()).collect();
    for i in (0..n).rev() {
        let mut s = b[i].clone();
        for j in (i + 1)..n {
            s -= Float::with_val(bits, &a[i][j] * &x[j]);
        }
        x[i] = s / &a[i][i];
    }
    Ok(x)
}

/// `[n-1/n]` approximant from `c_0..c_{2n-1}`; further coefficients are ignored.
///
/// The denominator solves `sum_{i=1}^n b_i c_{n+j-i} = -c_{n+j}` for `j = 0..n-1`
/// and the numerator is `a_j = c_j + sum_{k=1}^j b_k c_{j-k}`.
pub fn pade_n_minus_1_n(c: &[Float], n: usize, source: PadeSource, prec: Precision) -> Result<PadeApproximant> {
    if n == 0 {
        return Err(Error::Domain("Padé order must be >= 1".into()));
    }
    if c.len() < 2 * n {
        return Err(Error::Domain(format!(
            "need {} Taylor coefficients, got {}",
            2 * n,
            c.len()
        )));
    }
    let bits = prec.bits();
    let cf: Vec<Float> = c.iter().take(2 * n).map(|x| Float::with_val(bits, x)).collect();
    // unknowns ordered b_n, ..., b_1 so the matrix is the Hankel matrix [c_{i+j}]
    let matrix: Vec<Vec<Float>> = (0..n).map(|i| (0..n).map(|j| cf[i + j].clone()).collect()).collect();
    let rhs: Vec<Float> = (0..n).map(|i| -cf[n + i].clone()).collect();
    let sol = solve_linear(matrix, rhs, prec)?;
    let mut denom = Vec::with_capacity(n + 1);
    denom.push(prec.one());
    for i in 1..=n {
        denom.push(sol[n - i].clone());
    }
    let numer = (0..n)
        .map(|j| {
            let mut a = cf[j].clone();
            for k in 1..=j {
                a += Float::with_val(bits, &denom[k] * &cf[j - k]);
            }
            a
        })
        .collect();
    Ok(PadeApproximant {
        numer,
        denom,
        n,
        source,
        prec,
    })
}

/// Starting points on circles whose radii follow the Newton polygon of `|coeffs|`.
fn initial_guesses(coeffs: &[Float], prec: Precision) -> Vec<BigComplex> {
    let n = coeffs.len() - 1;
    let logs: Vec<f64> = coeffs
        .iter()
        .map(|c| {
            if c.is_zero() {
                f64::NEG_INFINITY
            } else {
                Float::with_val(64, c.abs_ref()).ln().to_f64()
            }
        })
        .collect();
    // upper convex hull of (k, log|c_k|)
    let mut hull: Vec<usize> = Vec::new();
    for k in 0..=n {
        if logs[k] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let (i, j) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (j as f64 - i as f64) * (logs[k] - logs[i]) - (k as f64 - i as f64) * (logs[j] - logs[i]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    let mut out = Vec::with_capacity(n);
    let two_pi = std::f64::consts::TAU;
    let offset = 0.7;
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        let m = j - i;
        let log_r = (logs[i] - logs[j]) / m as f64;
        let r = prec.float(log_r).exp();
        for t in 0..m {
            let angle = two_pi * t as f64 / m as f64 + two_pi * i as f64 / n as f64 + offset;
            let re = Float::with_val(prec.bits(), &r * angle.cos());
            let im = Float::with_val(prec.bits(), &r * angle.sin());
            out.push(BigComplex::new(re, im));
        }
    }
    out
}

/// Aberth-Ehrlich sweeps until every relative correction falls below `tol`
/// or stops improving. Returns whether the tolerance was met.
fn aberth(coeffs: &[Float], roots: &mut [BigComplex], tol: &Float, max_iter: usize) -> bool {
    let n = roots.len();
    let bits = roots[0].prec();
    let one = BigComplex::from_real(Float::with_val(bits, 1));
    let mut done = vec![false; n];
    let mut last = vec![f64::INFINITY; n];
    for _ in 0..max_iter {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = horner_with_derivative(coeffs, &roots[i]);
            if p.re.is_zero() && p.im.is_zero() {
                done[i] = true;
                continue;
            }
            let ratio = &p / &dp;
            let mut s = BigComplex::from_real(Float::with_val(bits, 0));
            for j in 0..n {
                if j != i {
                    s = &s + &(&roots[i] - &roots[j]).recip();
                }
            }
            let w = &ratio / &(&one - &(&ratio * &s));
            if !(w.re.is_finite() && w.im.is_finite()) {
                all = false;
                continue;
            }
            roots[i] = &roots[i] - &w;
            let size = roots[i].abs();
            let rel = Float::with_val(bits, w.abs() / &size);
            let rel_f = rel.to_f64();
            if rel <= *tol || (rel_f < 1e-3 * tol.to_f64().sqrt().max(1e-300) && rel_f >= last[i]) {
                done[i] = true;
            } else {
                all = false;
            }
            last[i] = rel_f;
        }
        if all {
            return true;
        }
    }
    done.iter().all(|&d| d)
}

/// All roots of `sum q[k] z^k` (coefficients in ascending order).
///
/// Seeds from the Newton polygon, converges at a reduced precision and then
/// polishes at the full working precision.
pub fn polynomial_roots(q: &[Float], prec: Precision) -> Result<Vec<BigComplex>> {
    let mut coeffs: Vec<Float> = q.iter().map(|x| Float::with_val(prec.bits(), x)).collect();
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    if coeffs[0].is_zero() {
        return Err(Error::Domain("polynomial vanishes at the origin".into()));
    }
    if n == 1 {
        let root = -Float::with_val(prec.bits(), &coeffs[0] / &coeffs[1]);
        return Ok(vec![BigComplex::from_real(root)]);
    }
    let coarse = Precision::new((prec.digits() / 4).clamp(30, prec.digits()));
    let coarse_coeffs: Vec<Float> = coeffs.iter().map(|c| coarse.float(c)).collect();
    let mut roots = initial_guesses(&coarse_coeffs, coarse);
    aberth(
        &coarse_coeffs,
        &mut roots,
        &coarse.pow10(-(coarse.digits() as i32) / 2),
        2000,
    );
    let mut fine: Vec<BigComplex> = roots
        .iter()
        .map(|z| BigComplex::new(prec.float(&z.re), prec.float(&z.im)))
        .collect();
    let tol = prec.pow10(-(prec.digits() as i32 - 10));
    if !aberth(&coeffs, &mut fine, &tol, 200) {
        return Err(Error::Convergence(format!(
            "root finder did not converge at {} digits",
            prec.digits()
        )));
    }
    // residual check relative to the size of the terms
    let bound = prec.pow10(-(prec.digits() as i32) / 2);
    for z in &fine {
        let value = horner(&coeffs, z).abs();
        let modulus = z.abs();
        let abs_coeffs: Vec<Float> = coeffs
            .iter()
            .map(|c| Float::with_val(prec.bits(), c.abs_ref()))
            .collect();
        let size = horner(&abs_coeffs, &BigComplex::from_real(modulus)).re;
        if value > Float::with_val(prec.bits(), &bound * &size) {
            return Err(Error::Convergence(format!(
                "root {} leaves residual {}",
                z,
                value.to_f64()
            )));
        }
    }
    Ok(fine)
}

/// Real parts of roots whose imaginary parts are below `10^{-P/2}` relative; fails otherwise.
fn real_roots(roots: Vec<BigComplex>, prec: Precision) -> Result<Vec<Float>> {
    let tol = prec.pow10(-(prec.digits() as i32) / 2);
    roots
        .into_iter()
        .map(|z| {
            if z.is_real_within(&tol) {
                Ok(z.re)
            } else {
                Err(Error::Convergence(format!("denominator root {z} is not real")))
            }
        })
        .collect()
}

fn residues(pade: &PadeApproximant) -> Result<Vec<(Float, Float)>> {
    let prec = pade.prec;
    let mut poles = real_roots(polynomial_roots(&pade.denom, prec)?, prec)?;
    poles.sort_by(|a, b| a.partial_cmp(b).expect("finite poles"));
    Ok(poles
        .into_iter()
        .map(|beta| {
            let z = BigComplex::from_real(beta.clone());
            let p = horner(&pade.numer, &z).re;
            let (_, dq) = horner_with_derivative(&pade.denom, &z);
            let r = -(p / dq.re);
            (beta, r)
        })
        .collect())
}

/// Gamma convolution whose CGF derivative is the `[n-1/n]` approximant of `sum m_{k+1} z^k`.
pub fn gamma_convolution_from_cgf(mom: &MomentSequence, n: usize, radius: f64) -> Result<GammaConvolution> {
    if !mom.ggc {
        return Err(Error::NotGgc);
    }
    if mom.m.len() < 2 * n {
        return Err(Error::Domain(format!(
            "need {} negative moments, got {}",
            2 * n,
            mom.m.len()
        )));
    }
    let pade = pade_n_minus_1_n(&mom.m, n, PadeSource::CgfDeriv, mom.prec)?;
    let comps = residues(&pade)?;
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    for (i, (b, a)) in comps.into_iter().enumerate() {
        if !a.is_sign_positive() || a.is_zero() {
            return Err(Error::NonPositiveResidue {
                index: i,
                value: a.to_f64(),
            });
        }
        check_radius(&b, radius)?;
        alpha.push(a);
        beta.push(b);
    }
    Ok(GammaConvolution::from_big(alpha, beta))
}

/// Exponential mixture whose MGF is the `[n-1/n]` approximant of `sum mu_k z^k / k!`.
pub fn exp_mixture_from_mgf(mom: &MomentSequence, n: usize, radius: f64) -> Result<ExponentialMixture> {
    if mom.mu_raw.len() < 2 * n {
        return Err(Error::Domain(format!(
            "need {} raw moments, got {}",
            2 * n,
            mom.mu_raw.len()
        )));
    }
    let prec = mom.prec;
    let mut fact = prec.one();
    let c: Vec<Float> = mom
        .mu_raw
        .iter()
        .take(2 * n)
        .enumerate()
        .map(|(k, mu)| {
            if k > 0 {
                fact *= k as u32;
            }
            Float::with_val(prec.bits(), mu / &fact)
        })
        .collect();
    let pade = pade_n_minus_1_n(&c, n, PadeSource::Mgf, prec)?;
    let comps = residues(&pade)?;
    let mut omega = Vec::with_capacity(n);
    let mut eta = Vec::with_capacity(n);
    for (i, (e, r)) in comps.into_iter().enumerate() {
        let w = r / &e;
        if !w.is_sign_positive() || w.is_zero() {
            return Err(Error::NegativeWeight {
                index: i,
                value: w.to_f64(),
            });
        }
        check_radius(&e, radius)?;
        omega.push(w);
        eta.push(e);
    }
    Ok(ExponentialMixture::from_big(omega, eta))
}

fn check_radius(pole: &Float, radius: f64) -> Result<()> {
    if pole.to_f64() < radius * (1.0 - 1e-8) {
        return Err(Error::Convergence(format!(
            "pole {} lies inside the radius of convergence {radius}",
            pole.to_f64()
        )));
    }
    Ok(())
}
