//! Approximating distributions, exact Wiener-Hopf factors and CDF recovery.

use num_complex::Complex64;
use rayon::prelude::*;
use rug::Float;

use crate::bigfloat::Precision;
use crate::error::{Error, Result};
use crate::factorization::{thorin_measure, Side, SpectralMeasure, ThorinForm};
use crate::moments::raw_to_cumulants;
use crate::nig::NigParams;
use crate::quadrature::TanhSinh;

/// `prod (1 - z/beta_i)^{-alpha_i}`, parameters kept at the precision they were built with.
#[derive(Clone, Debug)]
pub struct GammaConvolution {
    pub alpha: Vec<Float>,
    pub beta: Vec<Float>,
}

impl GammaConvolution {
    pub fn from_big(alpha: Vec<Float>, beta: Vec<Float>) -> Self {
        assert_eq!(alpha.len(), beta.len());
        GammaConvolution { alpha, beta }
    }

    /// Builds from `(alpha_i, beta_i)` pairs.
    pub fn new(components: &[(f64, f64)]) -> Result<Self> {
        let prec = Precision::new(20);
        for &(a, b) in components {
            if !(a > 0.0 && b > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "gamma component ({a}, {b}) must be positive"
                )));
            }
        }
        Ok(GammaConvolution {
            alpha: components.iter().map(|c| prec.float(c.0)).collect(),
            beta: components.iter().map(|c| prec.float(c.1)).collect(),
        })
    }

    pub fn components(&self) -> Vec<(f64, f64)> {
        self.alpha
            .iter()
            .zip(&self.beta)
            .map(|(a, b)| (a.to_f64(), b.to_f64()))
            .collect()
    }

    pub fn min_rate(&self) -> f64 {
        self.beta.iter().map(Float::to_f64).fold(f64::INFINITY, f64::min)
    }

    /// `kappa_1..kappa_kmax`, `kappa_k = (k-1)! sum alpha_i beta_i^{-k}`.
    pub fn cumulants(&self, k_max: usize) -> Vec<Float> {
        let bits = self.alpha.first().map_or(64, Float::prec);
        let mut out = Vec::with_capacity(k_max);
        let mut fact = Float::with_val(bits, 1);
        let mut pw: Vec<Float> = self.beta.iter().map(|b| Float::with_val(bits, b.recip_ref())).collect();
        let inv: Vec<Float> = pw.clone();
        for k in 1..=k_max {
            if k > 1 {
                fact *= (k - 1) as u32;
            }
            let mut s = Float::with_val(bits, 0);
            for (a, p) in self.alpha.iter().zip(&pw) {
                s += Float::with_val(bits, a * p);
            }
            out.push(s * &fact);
            for (p, i) in pw.iter_mut().zip(&inv) {
                *p *= i;
            }
        }
        out
    }
}

/// `sum omega_i eta_i / (eta_i - z)`.
#[derive(Clone, Debug)]
pub struct ExponentialMixture {
    pub omega: Vec<Float>,
    pub eta: Vec<Float>,
}

impl ExponentialMixture {
    pub fn from_big(omega: Vec<Float>, eta: Vec<Float>) -> Self {
        assert_eq!(omega.len(), eta.len());
        ExponentialMixture { omega, eta }
    }

    /// Builds from `(omega_i, eta_i)` pairs; weights must sum to one.
    pub fn new(components: &[(f64, f64)]) -> Result<Self> {
        let prec = Precision::new(20);
        for &(w, e) in components {
            if !(w > 0.0 && e > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "mixture component ({w}, {e}) must be positive"
                )));
            }
        }
        let total: f64 = components.iter().map(|c| c.0).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams(format!("mixture weights sum to {total}")));
        }
        Ok(ExponentialMixture {
            omega: components.iter().map(|c| prec.float(c.0)).collect(),
            eta: components.iter().map(|c| prec.float(c.1)).collect(),
        })
    }

    pub fn components(&self) -> Vec<(f64, f64)> {
        self.omega
            .iter()
            .zip(&self.eta)
            .map(|(w, e)| (w.to_f64(), e.to_f64()))
            .collect()
    }

    /// Raw moments `mu_0..mu_kmax`, `mu_k = k! sum omega_i eta_i^{-k}`.
    pub fn raw_moments(&self, k_max: usize) -> Vec<Float> {
        let bits = self.omega.first().map_or(64, Float::prec);
        let inv: Vec<Float> = self.eta.iter().map(|e| Float::with_val(bits, e.recip_ref())).collect();
        let mut pw: Vec<Float> = inv.iter().map(|_| Float::with_val(bits, 1)).collect();
        let mut fact = Float::with_val(bits, 1);
        let mut out = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            if k > 0 {
                fact *= k as u32;
                for (p, i) in pw.iter_mut().zip(&inv) {
                    *p *= i;
                }
            }
            let mut s = Float::with_val(bits, 0);
            for (w, p) in self.omega.iter().zip(&pw) {
                s += Float::with_val(bits, w * p);
            }
            out.push(s * &fact);
        }
        out
    }

    pub fn cumulants(&self, k_max: usize) -> Vec<Float> {
        let bits = self.omega.first().map_or(64, Float::prec);
        let digits = ((bits.saturating_sub(32)) as f64 / std::f64::consts::LOG2_10) as u32;
        raw_to_cumulants(&self.raw_moments(k_max), Precision::new(digits))
    }
}

/// `prod (1 - z/beta_i)^{-alpha_i}` inside the strip `Re z < min beta_i`.
pub fn gc_mgf(g: &GammaConvolution, z: Complex64) -> Result<Complex64> {
    if z.re >= g.min_rate() {
        return Err(Error::Domain(format!(
            "Re z = {} is outside the convergence strip",
            z.re
        )));
    }
    Ok(gc_mgf_continued(g, z))
}

/// Analytic continuation of [`gc_mgf`] off the ray `[min beta, inf)`, principal powers.
pub fn gc_mgf_continued(g: &GammaConvolution, z: Complex64) -> Complex64 {
    let mut log = Complex64::new(0.0, 0.0);
    for (a, b) in g.components() {
        log -= a * (1.0 - z / b).ln();
    }
    log.exp()
}

pub fn me_mgf(e: &ExponentialMixture, z: Complex64) -> Result<Complex64> {
    let mut s = Complex64::new(0.0, 0.0);
    for (w, eta) in e.components() {
        let d = eta - z;
        if d == Complex64::new(0.0, 0.0) {
            return Err(Error::Pole(format!("z = {z} hits a mixture rate")));
        }
        s += w * eta / d;
    }
    Ok(s)
}

/// `sum omega_i (1 - e^{-eta_i x})`, zero for `x <= 0`.
pub fn me_cdf(e: &ExponentialMixture, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    e.components().iter().map(|&(w, eta)| -w * (-eta * x).exp_m1()).sum()
}

/// `sum omega_i eta_i e^{-eta_i x}`.
pub fn me_density(e: &ExponentialMixture, x: f64) -> f64 {
    e.components().iter().map(|&(w, eta)| w * eta * (-eta * x).exp()).sum()
}

/// Tail `1 - F(x) = sum omega_i e^{-eta_i x}`.
pub fn me_survival(e: &ExponentialMixture, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    e.components().iter().map(|&(w, eta)| w * (-eta * x).exp()).sum()
}

/// MGF of a Wiener-Hopf factor evaluated by quadrature against its Thorin measure.
///
/// For the plus side this is `E[e^{z S}]`, for the minus side `E[e^{z I}]`.
#[derive(Clone, Debug)]
pub struct WienerHopfFactor {
    pub side: Side,
    pub measure: SpectralMeasure,
    form: ThorinForm,
    rule: TanhSinh,
    radius: f64,
}

impl WienerHopfFactor {
    pub fn new(p: &NigParams, q: f64, side: Side) -> Result<Self> {
        Self::with_rule(p, q, side, TanhSinh::default())
    }

    pub fn with_rule(p: &NigParams, q: f64, side: Side, rule: TanhSinh) -> Result<Self> {
        let measure = thorin_measure(p, q, side)?;
        Ok(Self::from_measure(measure, rule))
    }

    pub fn from_measure(measure: SpectralMeasure, rule: TanhSinh) -> Self {
        let thorin = measure.to_thorin();
        let form = thorin.thorin_form();
        let radius = thorin.radius();
        WienerHopfFactor {
            side: thorin.side,
            measure: thorin,
            form,
            rule,
            radius,
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `int log(u / (u - w)) tau(du)` in the Thorin variable `w`, skipping atoms at `skip`.
    pub fn thorin_exponent(&self, w: Complex64, skip: Option<f64>) -> Result<Complex64> {
        if w.im == 0.0 && w.re >= self.radius && skip.is_none() {
            return Err(Error::Branch(format!(
                "w = {} lies on the support ray [{}, inf)",
                w.re, self.radius
            )));
        }
        let mut total = Complex64::new(0.0, 0.0);
        for &(loc, weight) in &self.form.atoms {
            if skip.is_some_and(|s| (s - loc).abs() <= 1e-12 * loc.abs()) {
                continue;
            }
            total += weight * (Complex64::new(loc, 0.0) / (loc - w)).ln();
        }
        if self.form.has_density {
            let form = &self.form;
            total += self.rule.integrate_half_line_complex(form.edge, |u, off| {
                let f = form.density_offset(u, off);
                if f == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                // u - w with the edge offset kept exact when w sits on the edge
                let gap = if w.im == 0.0 && w.re == form.edge {
                    Complex64::new(off, 0.0)
                } else {
                    u - w
                };
                (Complex64::new(u, 0.0) / gap).ln() * f
            })?;
        }
        Ok(total)
    }

    /// `log E[e^{zS}]` (plus) or `log E[e^{zI}]` (minus).
    pub fn log_mgf(&self, z: Complex64) -> Result<Complex64> {
        let w = match self.side {
            Side::Plus => z,
            Side::Minus => -z,
        };
        self.thorin_exponent(w, None)
    }

    pub fn mgf(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.log_mgf(z)?.exp())
    }

    /// `E[e^{-s Y}]` for the nonnegative variable `Y = S` or `Y = -I`.
    pub fn laplace(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.thorin_exponent(-s, None)?.exp())
    }
}

/// `E[e^{zS}]` (plus) or `E[e^{zI}]` (minus) for the process killed at rate `q`.
pub fn exact_factor(p: &NigParams, q: f64, side: Side, z: Complex64) -> Result<Complex64> {
    WienerHopfFactor::new(p, q, side)?.mgf(z)
}

/// Fixed-Talbot node count. Roundoff grows like `e^{0.4 M}` in double precision,
/// truncation falls like `10^{-0.6 M}`; 24 balances them near `1e-12`.
pub const TALBOT_NODES: usize = 24;
const TALBOT_CHECK_NODES: usize = 18;
const CDF_SLACK: f64 = 1e-6;

fn talbot<F: Fn(Complex64) -> Result<Complex64>>(laplace: &F, t: f64, m: usize) -> Result<f64> {
    let r = 2.0 * m as f64 / (5.0 * t);
    let transform = |s: Complex64| -> Result<Complex64> { Ok(laplace(s)? / s) };
    let mut sum = 0.5 * (transform(Complex64::new(r, 0.0))? * (r * t).exp()).re;
    let pi = std::f64::consts::PI;
    for k in 1..m {
        let theta = k as f64 * pi / m as f64;
        let cot = theta.cos() / theta.sin();
        let s = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        let term = (s * t).exp() * transform(s)? * Complex64::new(1.0, sigma);
        sum += term.re;
    }
    Ok(r / m as f64 * sum)
}

/// CDF of a nonnegative variable from its MGF `z -> E[e^{zY}]`, by fixed-Talbot inversion of `E[e^{-sY}]/s`.
pub fn laplace_invert_cdf<F>(mgf: F, x_grid: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let laplace = |s: Complex64| mgf(-s);
    x_grid
        .par_iter()
        .map(|&x| {
            if x <= 0.0 {
                return Ok(0.0);
            }
            let v = talbot(&laplace, x, TALBOT_NODES)?;
            let check = talbot(&laplace, x, TALBOT_CHECK_NODES)?;
            if !v.is_finite() || (v - check).abs() > CDF_SLACK {
                return Err(Error::Convergence(format!(
                    "Talbot inversion at x = {x} disagrees across node counts ({v} vs {check})"
                )));
            }
            if !(-CDF_SLACK..=1.0 + CDF_SLACK).contains(&v) {
                return Err(Error::Convergence(format!(
                    "inverted CDF value {v} at x = {x} is outside [0, 1]"
                )));
            }
            Ok(v.clamp(0.0, 1.0))
        })
        .collect()
}

/// CDF of `S` (plus) or `-I` (minus) by inverting the exact factor.
pub fn exact_cdf(factor: &WienerHopfFactor, x_grid: &[f64]) -> Result<Vec<f64>> {
    laplace_invert_cdf(|z| factor.laplace(-z), x_grid)
}
