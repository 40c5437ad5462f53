//! Independent checks: Monte Carlo extrema, a quadrature moment oracle and the
//! cumulant identity `kappa_k(X_e) = kappa_k(S) + (-1)^k kappa_k(-I)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, InverseGaussian, StandardNormal};
use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::bigfloat::Precision;
use crate::error::{Error, Result};
use crate::factorization::{thorin_measure, Side, SpectralMeasure};
use crate::moments::{negative_moments, MomentSequence};
use crate::nig::{self, NigParams};
use crate::pade::{exp_mixture_from_mgf, gamma_convolution_from_cgf};
use crate::quadrature::TanhSinh;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub step: f64,
    pub n_paths: usize,
    pub seed: u64,
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidParams(format!("step must be > 0, got {}", self.step)));
        }
        if self.n_paths == 0 {
            return Err(Error::InvalidParams("need at least one path".into()));
        }
        Ok(())
    }
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            step: 1e-2,
            n_paths: 10_000,
            seed: 1,
        }
    }
}

/// One draw of `X_dt = theta U + sigma sqrt(U) N + mu dt`, `U` inverse Gaussian with mean `dt`, variance `kappa dt`.
pub fn sample_nig_increment<R: Rng + ?Sized>(p: &NigParams, dt: f64, rng: &mut R) -> f64 {
    let shape = dt * dt / p.kappa;
    let ig = InverseGaussian::new(dt, shape).expect("positive inverse Gaussian parameters");
    let u: f64 = ig.sample(rng);
    let n: f64 = StandardNormal.sample(rng);
    p.theta * u + p.sigma * u.sqrt() * n + p.mu * dt
}

/// `(S_e, -I_e)` per path. Each path has its own ChaCha stream, so results do not depend on threading.
pub fn simulate_extrema(p: &NigParams, q: f64, cfg: &McConfig) -> Result<Vec<(f64, f64)>> {
    p.validate()?;
    cfg.validate()?;
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::Domain(format!("killing rate must be > 0, got {q}")));
    }
    let horizon = Exp::new(q).map_err(|e| Error::InvalidParams(e.to_string()))?;
    let shape = cfg.step * cfg.step / p.kappa;
    let full_step = InverseGaussian::new(cfg.step, shape).map_err(|e| Error::InvalidParams(e.to_string()))?;
    Ok((0..cfg.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let t: f64 = horizon.sample(&mut rng);
            let steps = (t / cfg.step).floor() as u64;
            let rest = t - steps as f64 * cfg.step;
            let (mut x, mut hi, mut lo) = (0.0f64, 0.0f64, 0.0f64);
            for _ in 0..steps {
                let u: f64 = full_step.sample(&mut rng);
                let n: f64 = StandardNormal.sample(&mut rng);
                x += p.theta * u + p.sigma * u.sqrt() * n + p.mu * cfg.step;
                hi = hi.max(x);
                lo = lo.min(x);
            }
            if rest > 0.0 {
                x += sample_nig_increment(p, rest, &mut rng);
                hi = hi.max(x);
                lo = lo.min(x);
            }
            (hi, -lo)
        })
        .collect())
}

/// Empirical CDF of sorted `samples` at each grid point.
pub fn empirical_cdf(sorted: &[f64], grid: &[f64]) -> Vec<f64> {
    let n = sorted.len() as f64;
    grid.iter()
        .map(|&x| sorted.partition_point(|&s| s <= x) as f64 / n)
        .collect()
}

/// Empirical CDFs of `S_e(q)` and `-I_e(q)` on `grid`.
pub fn simulate_extrema_cdf(p: &NigParams, q: f64, cfg: &McConfig, grid: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let paths = simulate_extrema(p, q, cfg)?;
    let mut sup: Vec<f64> = paths.iter().map(|s| s.0).collect();
    let mut inf: Vec<f64> = paths.iter().map(|s| s.1).collect();
    sup.sort_by(f64::total_cmp);
    inf.sort_by(f64::total_cmp);
    Ok((empirical_cdf(&sup, grid), empirical_cdf(&inf, grid)))
}

/// Kolmogorov distance between the empirical law of `samples` and a continuous CDF.
pub fn kolmogorov_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// `m_k` by tanh-sinh quadrature of the (signed) Thorin density plus the atoms.
pub fn quadrature_moment_oracle(m: &SpectralMeasure, k: usize, rule: &TanhSinh) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("k must be >= 1".into()));
    }
    let form = m.to_thorin().thorin_form();
    let atoms: f64 = form.atoms.iter().map(|&(loc, w)| w * loc.powi(-(k as i32))).sum();
    let continuous = form.integrate(rule, |x, f| f * x.powi(-(k as i32)))?;
    Ok(atoms + continuous)
}

/// `d^k/dz^k log(q / (q - psi(z)))` at 0 for `k = 1..k_max`, from the Taylor
/// series of `sqrt(1 - 2 kappa theta z - kappa sigma^2 z^2)` and `log(1 - psi/q)`.
pub fn killed_cumulants_series(p: &NigParams, q: f64, k_max: usize, prec: Precision) -> Result<Vec<Float>> {
    p.validate()?;
    if !(q > 0.0) {
        return Err(Error::Domain(format!("killing rate must be > 0, got {q}")));
    }
    let bits = prec.bits();
    let (theta, sigma, kappa, mu, qf) = (
        prec.float(p.theta),
        prec.float(p.sigma),
        prec.float(p.kappa),
        prec.float(p.mu),
        prec.float(q),
    );
    let a1 = -Float::with_val(bits, &kappa * &theta) * 2u32;
    let a2 = -Float::with_val(bits, &kappa * Float::with_val(bits, sigma.square_ref()));
    // square-root series s with s^2 = 1 + a1 z + a2 z^2
    let mut s = vec![prec.one()];
    for n in 1..=k_max {
        let mut v = match n {
            1 => a1.clone(),
            2 => a2.clone(),
            _ => prec.zero(),
        };
        for k in 1..n {
            v -= Float::with_val(bits, &s[k] * &s[n - k]);
        }
        s.push(v / 2u32);
    }
    // h = 1 - psi/q, psi_n = -s_n / kappa (+ mu for n = 1)
    let mut h = vec![prec.one()];
    for (n, sn) in s.iter().enumerate().skip(1) {
        let mut psi = -Float::with_val(bits, sn / &kappa);
        if n == 1 {
            psi += &mu;
        }
        h.push(-(psi / &qf));
    }
    // l = log h via n l_n = n h_n - sum_{k<n} k l_k h_{n-k}
    let mut l = vec![prec.zero()];
    for n in 1..=k_max {
        let mut v = Float::with_val(bits, &h[n] * n as u32);
        for k in 1..n {
            v -= Float::with_val(bits, &l[k] * &h[n - k]) * k as u32;
        }
        l.push(v / n as u32);
    }
    let mut fact = prec.one();
    let mut out = Vec::with_capacity(k_max);
    for (n, ln) in l.iter().enumerate().skip(1) {
        fact *= n as u32;
        out.push(-Float::with_val(bits, ln * &fact));
    }
    Ok(out)
}

/// Same derivatives by the Cauchy integral on a circle inside the analyticity disc, in doubles.
pub fn killed_cumulants_contour(p: &NigParams, q: f64, k_max: usize) -> Result<Vec<f64>> {
    p.validate()?;
    if !(q > 0.0) {
        return Err(Error::Domain(format!("killing rate must be > 0, got {q}")));
    }
    let roots = nig::zeta_roots(p, q)?;
    let nearest = [roots.rho, roots.rho_hat.abs(), roots.zeta.norm(), roots.zeta_hat.norm()]
        .into_iter()
        .filter(|&r| r > 0.0)
        .fold(f64::INFINITY, f64::min);
    let r = 0.5 * nearest;
    let n_points = 128;
    let values: Vec<Complex64> = (0..n_points)
        .map(|j| {
            let z = Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / n_points as f64);
            (q / (q - p.laplace_exponent(z))).ln()
        })
        .collect();
    let mut out = Vec::with_capacity(k_max);
    let mut fact = 1.0;
    for k in 1..=k_max {
        fact *= k as f64;
        let mut s = Complex64::new(0.0, 0.0);
        for (j, v) in values.iter().enumerate() {
            let angle = -std::f64::consts::TAU * (k * j) as f64 / n_points as f64;
            s += v * Complex64::from_polar(1.0, angle);
        }
        out.push((s / n_points as f64).re * fact / r.powi(k as i32));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct CumulantRow {
    pub k: usize,
    /// Derivative of `log(q / (q - psi))` at 0.
    pub psi: Float,
    pub exact: Float,
    pub gamma: Option<Float>,
    pub mixture: Option<Float>,
}

/// Signed sum `kappa_k(plus) + (-1)^k kappa_k(minus)`.
fn combine(plus: &Float, minus: &Float, k: usize) -> Float {
    let m = Float::with_val(minus.prec(), minus);
    if k % 2 == 0 {
        Float::with_val(plus.prec(), plus + &m)
    } else {
        Float::with_val(plus.prec(), plus - &m)
    }
}

/// Rows `k = 1..k_max` of the cumulant identity for the exact factors and the
/// order-`n` gamma-convolution and exponential-mixture approximations.
/// The gamma column is empty when either Thorin measure is signed.
pub fn cumulant_identity_table(
    p: &NigParams,
    q: f64,
    k_max: usize,
    n: usize,
    prec: Precision,
) -> Result<Vec<CumulantRow>> {
    if n > 0 && k_max > 2 * n - 1 {
        return Err(Error::Domain(format!("k_max = {k_max} exceeds 2n - 1 = {}", 2 * n - 1)));
    }
    let psi = killed_cumulants_series(p, q, k_max, prec)?;
    let plus_m = thorin_measure(p, q, Side::Plus)?;
    let minus_m = thorin_measure(p, q, Side::Minus)?;
    let depth = k_max.max(2 * n);
    let plus = negative_moments(&plus_m, depth, prec)?;
    let minus = negative_moments(&minus_m, depth, prec)?;
    let (mut g_col, mut e_col) = (None, None);
    if n > 0 {
        let gp = approx_gamma(&plus, n, plus_m.radius())?;
        let gm = approx_gamma(&minus, n, minus_m.radius())?;
        if let (Some(gp), Some(gm)) = (gp, gm) {
            g_col = Some((gp.cumulants(k_max), gm.cumulants(k_max)));
        }
        let ep = exp_mixture_from_mgf(&plus, n, plus_m.radius())?;
        let em = exp_mixture_from_mgf(&minus, n, minus_m.radius())?;
        e_col = Some((ep.cumulants(k_max), em.cumulants(k_max)));
    }
    Ok((1..=k_max)
        .map(|k| CumulantRow {
            k,
            psi: psi[k - 1].clone(),
            exact: combine(&plus.kappa_cum[k - 1], &minus.kappa_cum[k - 1], k),
            gamma: g_col.as_ref().map(|(a, b)| combine(&a[k - 1], &b[k - 1], k)),
            mixture: e_col.as_ref().map(|(a, b)| combine(&a[k - 1], &b[k - 1], k)),
        })
        .collect())
}

fn approx_gamma(seq: &MomentSequence, n: usize, radius: f64) -> Result<Option<crate::distributions::GammaConvolution>> {
    match gamma_convolution_from_cgf(seq, n, radius) {
        Ok(g) => Ok(Some(g)),
        Err(Error::NotGgc) => Ok(None),
        Err(e) => Err(e),
    }
}
