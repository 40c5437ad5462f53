//! Ruin asymptotics under Cramér's condition and perpetual put prices.

use num_complex::Complex64;
use serde::Serialize;

use crate::bigfloat::Precision;
use crate::distributions::{me_survival, ExponentialMixture, WienerHopfFactor};
use crate::error::{Error, Result};
use crate::factorization::{thorin_measure, Side};
use crate::moments::negative_moments;
use crate::nig::{self, NigParams};
use crate::pade::exp_mixture_from_mgf;

/// Tolerance on `psi(1) = r` before a quote carries a risk-neutrality warning.
pub const RISK_NEUTRAL_TOL: f64 = 1e-5;

/// `R(x) ~ C e^{-gamma x}` for the ultimate ruin probability `P(-I_inf > x)`.
#[derive(Clone, Debug, Serialize)]
pub struct RuinReport {
    pub gamma: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(skip)]
    pub me_approx: Option<ExponentialMixture>,
}

impl RuinReport {
    pub fn asymptotic(&self, x: f64) -> f64 {
        self.c * (-self.gamma * x).exp()
    }

    /// `sum omega_i e^{-eta_i x}` from the attached mixture.
    pub fn me_value(&self, x: f64) -> Option<f64> {
        self.me_approx.as_ref().map(|e| me_survival(e, x))
    }
}

fn check_drift(p: &NigParams) -> Result<()> {
    p.validate()?;
    if p.theta + p.mu <= 0.0 {
        return Err(Error::Domain(format!(
            "ruin is certain: theta + mu = {} must be positive",
            p.theta + p.mu
        )));
    }
    Ok(())
}

/// Cramér exponent `gamma = -zeta_hat(0)` and constant `C = exp(int log(u / (u - gamma)) tau_0^-(du))`,
/// the atom at `gamma` left out.
pub fn cramer_constant(p: &NigParams) -> Result<RuinReport> {
    check_drift(p)?;
    let roots = nig::zeta_roots(p, 0.0)?;
    let gamma = -roots.zeta_hat.re;
    if roots.zeta_hat.im != 0.0 || gamma <= 0.0 {
        return Err(Error::Domain("Cramér's condition fails: no negative real root".into()));
    }
    let factor = WienerHopfFactor::new(p, 0.0, Side::Minus)?;
    let exponent = factor.thorin_exponent(Complex64::new(gamma, 0.0), Some(gamma))?;
    Ok(RuinReport {
        gamma,
        c: exponent.re.exp(),
        me_approx: None,
    })
}

/// Cramér report with the `n`-term mixture approximation of `-I_inf` attached.
pub fn ruin_report(p: &NigParams, n: usize, prec: Precision) -> Result<RuinReport> {
    let mut report = cramer_constant(p)?;
    let m = thorin_measure(p, 0.0, Side::Minus)?;
    let seq = negative_moments(&m, 2 * n, prec)?;
    report.me_approx = Some(exp_mixture_from_mgf(&seq, n, m.radius())?);
    Ok(report)
}

/// `(C e^{-gamma x}, sum omega_i e^{-eta_i x})`.
pub fn ruin_probability(p: &NigParams, x: f64, n: usize, prec: Precision) -> Result<(f64, f64)> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("initial capital must be positive, got {x}")));
    }
    let report = ruin_report(p, n, prec)?;
    let me = report.me_value(x).expect("mixture attached");
    Ok((report.asymptotic(x), me))
}

#[derive(Clone, Debug, Serialize)]
pub struct OptionQuote {
    /// `C = E[e^{I_{e(r)}}]`.
    pub c_factor: f64,
    /// Exercise boundary `K C`.
    pub boundary: f64,
    pub value: f64,
    pub n: usize,
    pub a0: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Prices perpetual puts for several spot prices from one mixture approximation.
#[derive(Clone, Debug)]
pub struct PerpetualPut {
    pub c_factor: f64,
    pub strike: f64,
    pub n: usize,
    pub mixture: ExponentialMixture,
    pub warnings: Vec<String>,
}

impl PerpetualPut {
    pub fn new(p: &NigParams, r: f64, strike: f64, n: usize, prec: Precision) -> Result<Self> {
        p.validate()?;
        if !(r > 0.0) {
            return Err(Error::Domain(format!("interest rate must be positive, got {r}")));
        }
        if !(strike > 0.0) {
            return Err(Error::Domain(format!("strike must be positive, got {strike}")));
        }
        let (rho, _) = p.characteristic_roots();
        if rho <= 1.0 {
            return Err(Error::Domain(format!("psi(1) is infinite: rho = {rho} <= 1")));
        }
        let mut warnings = Vec::new();
        let psi1 = p.laplace_exponent(Complex64::new(1.0, 0.0)).re;
        if (psi1 - r).abs() > RISK_NEUTRAL_TOL {
            warnings.push(format!(
                "psi(1) = {psi1} differs from r = {r}; prices are not risk neutral"
            ));
        }
        let factor = WienerHopfFactor::new(p, r, Side::Minus)?;
        let c_factor = factor.mgf(Complex64::new(1.0, 0.0))?.re;
        let m = thorin_measure(p, r, Side::Minus)?;
        let seq = negative_moments(&m, 2 * n, prec)?;
        let mixture = exp_mixture_from_mgf(&seq, n, m.radius())?;
        Ok(PerpetualPut {
            c_factor,
            strike,
            n,
            mixture,
            warnings,
        })
    }

    /// `E[(K C - A0 e^{-E_n})^+] / C` in closed form.
    pub fn value(&self, a0: f64) -> f64 {
        let (c, k) = (self.c_factor, self.strike);
        let comps = self.mixture.components();
        let log_ratio = (c * k / a0).ln();
        if log_ratio < 0.0 {
            // (C/A0)^eta K^(eta+1) = K (CK/A0)^eta, kept in log form for large rates
            comps
                .iter()
                .map(|&(w, eta)| w * k * (eta * log_ratio).exp() / (1.0 + eta))
                .sum()
        } else {
            comps.iter().map(|&(w, eta)| w * (k - a0 / c * eta / (1.0 + eta))).sum()
        }
    }

    pub fn quote(&self, a0: f64) -> Result<OptionQuote> {
        if !(a0 > 0.0) {
            return Err(Error::Domain(format!("spot price must be positive, got {a0}")));
        }
        Ok(OptionQuote {
            c_factor: self.c_factor,
            boundary: self.strike * self.c_factor,
            value: self.value(a0),
            n: self.n,
            a0,
            warnings: self.warnings.clone(),
        })
    }
}

/// Drift `mu` that makes `psi(1) = r`, i.e. `e^{-rt} e^{X_t}` a martingale.
pub fn risk_neutral_drift(theta: f64, sigma: f64, kappa: f64, r: f64) -> Result<f64> {
    let disc = 1.0 - 2.0 * kappa * theta - kappa * sigma * sigma;
    if !(kappa > 0.0 && sigma > 0.0) || !(disc > 0.0) {
        return Err(Error::Domain(format!(
            "psi(1) is infinite for theta = {theta}, sigma = {sigma}, kappa = {kappa}"
        )));
    }
    Ok(r - (1.0 - disc.sqrt()) / kappa)
}

pub fn perpetual_put(p: &NigParams, r: f64, strike: f64, a0: f64, n: usize, prec: Precision) -> Result<OptionQuote> {
    PerpetualPut::new(p, r, strike, n, prec)?.quote(a0)
}
