//! Spectral measures of the Wiener-Hopf factors.
//!
//! The supremum factor has Levy density `pi+(x) = (1/x) int e^{-xu} omega+(du)`
//! for `x > 0`, and the infimum factor `pi-(x) = (1/x) int e^{-xu} omega-(du)`
//! for `x < 0`. The measures `omega+-` are built from three density families
//! (`Mu`, `Nu`, `Lambda`) and a few Dirac atoms, chosen by the [`CaseLabel`].
//! The Thorin measure of the supremum is `omega+`; that of the negated
//! infimum is `-(omega-)` pushed forward by `x -> -x`.
//!
//! Internally every measure is stored in its Thorin frame, where the
//! continuous part is
//!
//! ```text
//! f(x) = (A x + B) / (prod_i (x - p_i) sqrt((x - C)(x - R)))   on (R, inf)
//! ```
//!
//! with `C < 0 < R`.

use num_complex::Complex64;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::bigfloat::{BigComplex, Precision};
use crate::error::{Error, Result};
use crate::nig::{self, CaseLabel, MinusCase, NigParams, PlusCase, RootSet, Tolerances};
use crate::quadrature::TanhSinh;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

/// Which density formula carries the continuous part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    /// `a (b u - c) / (pi (u - zeta)(u - zeta_hat) sqrt((u - rho)(u - rho_hat)))`
    Mu,
    /// `a b / (pi (u - zeta_hat) sqrt(...))`
    Nu,
    /// `a b / (pi (u - zeta) sqrt(...))`
    Lambda,
    /// No continuous part.
    AtomsOnly,
}

/// Frame of a measure: `Omega` keeps the minus side on the negative axis,
/// `Thorin` mirrors it to the positive axis with signs flipped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Omega,
    Thorin,
}

/// Dirac atom `sign * weight * delta_location`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
    pub sign: i8,
}

impl Atom {
    pub fn signed_weight(&self) -> f64 {
        self.sign as f64 * self.weight
    }
}

/// Where an atom sits, so it can be recomputed at high precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum AtomSite {
    Zeta,
    ZetaHat,
    Rho,
    RhoHat,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
struct AtomSpec {
    site: AtomSite,
    /// signed weight in the Thorin frame
    weight: f64,
}

/// A signed measure on a half-line: a density family plus atoms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralMeasure {
    pub family: Family,
    pub side: Side,
    pub orientation: Orientation,
    pub case: CaseLabel,
    pub params: NigParams,
    pub q: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// `rho` (plus) or `rho_hat` (minus), in the omega frame.
    pub support_edge: f64,
    /// `rho_hat` (plus) or `rho` (minus), in the omega frame.
    pub far_root: f64,
    /// `zeta` when the family carries it.
    #[serde(with = "option_complex")]
    pub pole1: Option<Complex64>,
    /// `zeta_hat` when the family carries it.
    #[serde(with = "option_complex")]
    pub pole2: Option<Complex64>,
    /// Atoms in the frame given by `orientation`.
    pub atoms: Vec<Atom>,
    /// Multiplier applied to the continuous part (`-1` for the negative half of a Jordan pair).
    pub scale: f64,
    /// Restriction of the continuous part, in the frame given by `orientation`.
    pub window: Option<(f64, f64)>,
    #[serde(skip)]
    atom_specs: Vec<AtomSpec>,
}

mod option_complex {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        z.map(|z| Repr { re: z.re, im: z.im }).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
        Ok(Option::<Repr>::deserialize(d)?.map(|r| Complex64::new(r.re, r.im)))
    }
}

/// Machine-precision Thorin-frame description of the continuous part and atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct ThorinForm {
    pub a_coef: f64,
    pub b_coef: f64,
    /// `C`, the far root of the square root.
    pub lower: f64,
    /// `R`, the support edge.
    pub edge: f64,
    pub poles: Vec<Complex64>,
    /// `(location, signed weight)`.
    pub atoms: Vec<(f64, f64)>,
    pub scale: f64,
    pub window: Option<(f64, f64)>,
    pub has_density: bool,
}

/// High-precision counterpart of [`ThorinForm`] (no window: full measures only).
#[derive(Clone, Debug)]
pub struct BigThorinForm {
    pub prec: Precision,
    pub a_coef: Float,
    pub b_coef: Float,
    pub lower: Float,
    pub edge: Float,
    pub poles: Vec<BigComplex>,
    pub atoms: Vec<(Float, Float)>,
    pub has_density: bool,
}

/// `a = 1/(sigma kappa^{3/2} (mu^2 + sigma^2/kappa))`, `b = theta mu kappa + (q kappa - 1) sigma^2`,
/// `c = mu - theta (q kappa - 1)`.
pub fn abc_constants(p: &NigParams, q: f64) -> (f64, f64, f64) {
    let (theta, sigma, kappa, mu) = (p.theta, p.sigma, p.kappa, p.mu);
    let a = 1.0 / (sigma * kappa.powf(1.5) * (mu * mu + sigma * sigma / kappa));
    let b = theta * mu * kappa + (q * kappa - 1.0) * sigma * sigma;
    let c = mu - theta * (q * kappa - 1.0);
    (a, b, c)
}

/// Exact `(b, c)` from rational parameters.
pub fn bc_rational(
    theta: &Rational,
    sigma: &Rational,
    kappa: &Rational,
    mu: &Rational,
    q: &Rational,
) -> (Rational, Rational) {
    let qk_m1 = Rational::from(q * kappa) - 1u32;
    let b = Rational::from(theta * mu) * kappa + Rational::from(&qk_m1 * sigma) * sigma;
    let c = mu - Rational::from(theta * &qk_m1);
    (b, c)
}

/// High-precision `(a, b, c)`.
pub fn abc_constants_big(p: &NigParams, q: f64, prec: Precision) -> (Float, Float, Float) {
    let bits = prec.bits();
    let theta = prec.float(p.theta);
    let sigma = prec.float(p.sigma);
    let kappa = prec.float(p.kappa);
    let mu = prec.float(p.mu);
    let qb = prec.float(q);
    let s2 = Float::with_val(bits, sigma.square_ref());
    let k32 = Float::with_val(bits, kappa.sqrt_ref()) * &kappa;
    let inner = Float::with_val(bits, mu.square_ref()) + Float::with_val(bits, &s2 / &kappa);
    let a = prec.one() / (Float::with_val(bits, &sigma * &k32) * inner);
    let qk_m1 = Float::with_val(bits, &qb * &kappa) - 1u32;
    let b = Float::with_val(bits, &theta * &mu) * &kappa + Float::with_val(bits, &qk_m1 * &s2);
    let c = Float::with_val(bits, &mu - Float::with_val(bits, &theta * &qk_m1));
    (a, b, c)
}

fn family_for(label: CaseLabel) -> Family {
    match (label.plus_case, label.minus_case) {
        (PlusCase::III, MinusCase::C) => Family::AtomsOnly,
        (PlusCase::III, _) => Family::Nu,
        (_, MinusCase::C) => Family::Lambda,
        _ => Family::Mu,
    }
}

fn mirror_atom(a: Atom) -> Atom {
    Atom {
        location: -a.location,
        weight: a.weight,
        sign: -a.sign,
    }
}

fn check_rate_side(p: &NigParams, q: f64, side: Side) -> Result<()> {
    if !(q.is_finite() && q >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "killing rate must be finite and >= 0, got {q}"
        )));
    }
    if q == 0.0 {
        let drift = p.theta + p.mu;
        match side {
            Side::Plus if drift >= 0.0 => {
                return Err(Error::Domain(format!(
                    "the overall supremum is infinite: theta + mu = {drift} must be negative"
                )))
            }
            Side::Minus if drift <= 0.0 => {
                return Err(Error::Domain(format!(
                    "the overall infimum is infinite: theta + mu = {drift} must be positive"
                )))
            }
            _ => {}
        }
    }
    Ok(())
}

/// The measure `omega+` or `omega-`, selected by case.
pub fn omega_measure(p: &NigParams, q: f64, side: Side) -> Result<SpectralMeasure> {
    omega_measure_with(p, q, side, &Tolerances::default())
}

pub fn omega_measure_with(p: &NigParams, q: f64, side: Side, tol: &Tolerances) -> Result<SpectralMeasure> {
    p.validate()?;
    check_rate_side(p, q, side)?;
    let roots = nig::zeta_roots_with(p, q, tol)?;
    let case = nig::classify_roots(&roots, tol);
    Ok(build(p, q, side, case, &roots))
}

fn build(p: &NigParams, q: f64, side: Side, case: CaseLabel, roots: &RootSet) -> SpectralMeasure {
    let family = family_for(case);
    let (a, b, c) = abc_constants(p, q);
    // at q = 0 the solving root carries a unit atom, including when it meets the branch point
    let edge_weight = if q == 0.0 { 1.0 } else { 0.5 };
    let mut atom_specs = Vec::new();
    match side {
        Side::Plus => match case.plus_case {
            PlusCase::I => {}
            PlusCase::II => atom_specs.push(AtomSpec {
                site: AtomSite::Zeta,
                weight: 1.0,
            }),
            PlusCase::III => {
                let site = if q == 0.0 { AtomSite::Zeta } else { AtomSite::Rho };
                atom_specs.push(AtomSpec {
                    site,
                    weight: edge_weight,
                })
            }
        },
        // omega- carries -delta; the Thorin frame flips the sign
        Side::Minus => match case.minus_case {
            MinusCase::A => {}
            MinusCase::B => atom_specs.push(AtomSpec {
                site: AtomSite::ZetaHat,
                weight: 1.0,
            }),
            MinusCase::C => {
                let site = if q == 0.0 { AtomSite::ZetaHat } else { AtomSite::RhoHat };
                atom_specs.push(AtomSpec {
                    site,
                    weight: edge_weight,
                })
            }
        },
    }
    let (pole1, pole2) = match family {
        Family::Mu => (Some(roots.zeta), Some(roots.zeta_hat)),
        Family::Nu => (None, Some(roots.zeta_hat)),
        Family::Lambda => (Some(roots.zeta), None),
        Family::AtomsOnly => (None, None),
    };
    let (support_edge, far_root) = match side {
        Side::Plus => (roots.rho, roots.rho_hat),
        Side::Minus => (roots.rho_hat, roots.rho),
    };
    let mut m = SpectralMeasure {
        family,
        side,
        orientation: Orientation::Omega,
        case,
        params: *p,
        q,
        a,
        b,
        c,
        support_edge,
        far_root,
        pole1,
        pole2,
        atoms: Vec::new(),
        scale: 1.0,
        window: None,
        atom_specs,
    };
    m.atoms = m.frame_atoms();
    m
}

/// The Thorin measure: `omega+` for the plus side, mirrored and negated `omega-` for the minus side.
pub fn thorin_measure(p: &NigParams, q: f64, side: Side) -> Result<SpectralMeasure> {
    Ok(omega_measure(p, q, side)?.to_thorin())
}

pub fn thorin_measure_with(p: &NigParams, q: f64, side: Side, tol: &Tolerances) -> Result<SpectralMeasure> {
    Ok(omega_measure_with(p, q, side, tol)?.to_thorin())
}

/// Radius of convergence of the CGF representation.
pub fn radius_of_convergence(p: &NigParams, q: f64, side: Side) -> Result<f64> {
    Ok(thorin_measure(p, q, side)?.radius())
}

impl SpectralMeasure {
    fn mirror_sign(&self) -> f64 {
        match (self.side, self.orientation) {
            (Side::Minus, Orientation::Omega) => -1.0,
            _ => 1.0,
        }
    }

    fn site_value(&self, site: AtomSite) -> f64 {
        match site {
            AtomSite::Zeta => self.pole_or_root(true),
            AtomSite::ZetaHat => self.pole_or_root(false),
            AtomSite::Rho => match self.side {
                Side::Plus => self.support_edge,
                Side::Minus => self.far_root,
            },
            AtomSite::RhoHat => match self.side {
                Side::Plus => self.far_root,
                Side::Minus => self.support_edge,
            },
        }
    }

    fn pole_or_root(&self, zeta: bool) -> f64 {
        let (z, zh) = nig::quadratic_roots(&self.params, self.q);
        if zeta {
            z.re
        } else {
            zh.re
        }
    }

    fn frame_atoms(&self) -> Vec<Atom> {
        let omega = self.atom_specs.iter().map(|spec| {
            // omega- carries negative atoms
            let sign = if self.side == Side::Plus { 1 } else { -1 };
            Atom {
                location: self.site_value(spec.site),
                weight: spec.weight,
                sign,
            }
        });
        match self.orientation {
            Orientation::Omega => omega.collect(),
            Orientation::Thorin => omega.map(mirror_atom).collect(),
        }
    }

    /// Same measure seen in the Thorin frame.
    pub fn to_thorin(&self) -> SpectralMeasure {
        self.reframe(Orientation::Thorin)
    }

    /// Same measure seen in the omega frame.
    pub fn to_omega(&self) -> SpectralMeasure {
        self.reframe(Orientation::Omega)
    }

    fn reframe(&self, orientation: Orientation) -> SpectralMeasure {
        let mut m = self.clone();
        if m.orientation == orientation {
            return m;
        }
        if m.side == Side::Minus {
            m.window = m.window.map(|(lo, hi)| (-hi, -lo));
            m.atoms = m.atoms.iter().copied().map(mirror_atom).collect();
        }
        m.orientation = orientation;
        m
    }

    /// Infimum of the Thorin-frame support: `R` of the CGF representation.
    pub fn radius(&self) -> f64 {
        let t = self.thorin_form();
        let mut r = t.edge;
        for &(loc, w) in &t.atoms {
            if w != 0.0 && loc < r {
                r = loc;
            }
        }
        r
    }

    /// Thorin-frame description in machine precision.
    pub fn thorin_form(&self) -> ThorinForm {
        let (a, b, c) = (self.a, self.b, self.c);
        let pi = std::f64::consts::PI;
        let plus = self.side == Side::Plus;
        let (a_coef, b_coef) = match self.family {
            Family::Mu => (a * b / pi, if plus { -a * c / pi } else { a * c / pi }),
            Family::Nu | Family::Lambda => (0.0, a * b / pi),
            Family::AtomsOnly => (0.0, 0.0),
        };
        let flip = |z: Complex64| if plus { z } else { -z };
        let poles: Vec<Complex64> = [self.pole1, self.pole2].into_iter().flatten().map(flip).collect();
        let (edge, lower) = if plus {
            (self.support_edge, self.far_root)
        } else {
            (-self.support_edge, -self.far_root)
        };
        let s = self.mirror_sign();
        let window = self.window.map(|(lo, hi)| if s < 0.0 { (-hi, -lo) } else { (lo, hi) });
        let atoms = self
            .atoms
            .iter()
            .map(|at| (s * at.location, s * at.signed_weight()))
            .collect();
        ThorinForm {
            a_coef,
            b_coef,
            lower,
            edge,
            poles,
            atoms,
            scale: self.scale,
            window,
            has_density: self.family != Family::AtomsOnly && self.scale != 0.0,
        }
    }

    /// Thorin-frame description recomputed at high precision from the parameters.
    pub fn thorin_form_big(&self, prec: Precision) -> Result<BigThorinForm> {
        if self.window.is_some() || self.scale != 1.0 {
            return Err(Error::Unsupported("high-precision form of a Jordan half".into()));
        }
        let bits = prec.bits();
        let (a, b, c) = abc_constants_big(&self.params, self.q, prec);
        let pi = prec.pi();
        let plus = self.side == Side::Plus;
        let ab_pi = Float::with_val(bits, &a * &b) / &pi;
        let ac_pi = Float::with_val(bits, &a * &c) / &pi;
        let (a_coef, b_coef) = match self.family {
            Family::Mu => (ab_pi, if plus { -ac_pi } else { ac_pi }),
            Family::Nu | Family::Lambda => (prec.zero(), ab_pi),
            Family::AtomsOnly => (prec.zero(), prec.zero()),
        };
        let (rho, rho_hat) = self.params.characteristic_roots_big(prec);
        let (zeta, zeta_hat) = nig::quadratic_roots_big(&self.params, self.q, prec);
        let flip = |z: &BigComplex| if plus { z.clone() } else { -z };
        let mut poles = Vec::new();
        if self.pole1.is_some() {
            poles.push(flip(&zeta));
        }
        if self.pole2.is_some() {
            poles.push(flip(&zeta_hat));
        }
        let (edge, lower) = if plus {
            (rho.clone(), rho_hat.clone())
        } else {
            (Float::with_val(bits, -&rho_hat), Float::with_val(bits, -&rho))
        };
        let atoms = self
            .atom_specs
            .iter()
            .map(|spec| {
                let omega_loc = match spec.site {
                    AtomSite::Zeta => zeta.re.clone(),
                    AtomSite::ZetaHat => zeta_hat.re.clone(),
                    AtomSite::Rho => rho.clone(),
                    AtomSite::RhoHat => rho_hat.clone(),
                };
                let loc = if plus { omega_loc } else { -omega_loc };
                (loc, prec.float(spec.weight))
            })
            .collect();
        Ok(BigThorinForm {
            prec,
            a_coef,
            b_coef,
            lower,
            edge,
            poles,
            atoms,
            has_density: self.family != Family::AtomsOnly,
        })
    }

    /// Continuous density at `u` in the measure's own frame (zero off the support).
    pub fn density(&self, u: f64) -> f64 {
        let t = self.thorin_form();
        let s = self.mirror_sign();
        let x = s * u;
        if x <= t.edge {
            return 0.0;
        }
        s * t.density_offset(x, x - t.edge)
    }

    /// Total variation of the continuous part and atoms, by quadrature.
    pub fn total_variation(&self, rule: &TanhSinh) -> Result<f64> {
        let t = self.thorin_form();
        let atoms: f64 = t.atoms.iter().map(|&(_, w)| w.abs()).sum();
        if !t.has_density {
            return Ok(atoms);
        }
        Ok(atoms + t.integrate(rule, |_, f| f.abs())?)
    }
}

impl ThorinForm {
    /// Density at `x` given the offset `x - R` (computed accurately by the caller).
    pub fn density_offset(&self, x: f64, offset: f64) -> f64 {
        if !self.has_density || offset <= 0.0 {
            return 0.0;
        }
        if let Some((lo, hi)) = self.window {
            // near the edge x itself may round below it; the offset is what counts there
            if (lo > self.edge && x < lo) || x > hi {
                return 0.0;
            }
        }
        let mut den = Complex64::new(1.0, 0.0);
        for p in &self.poles {
            den *= x - p;
        }
        let root = ((x - self.lower) * offset).sqrt();
        self.scale * (self.a_coef * x + self.b_coef) / (den.re * root)
    }

    pub fn density(&self, x: f64) -> f64 {
        self.density_offset(x, x - self.edge)
    }

    /// `int g(x, f(x)) dx` over the continuous support, splitting at the window edges.
    pub fn integrate<G: FnMut(f64, f64) -> f64>(&self, rule: &TanhSinh, mut g: G) -> Result<f64> {
        if !self.has_density {
            return Ok(0.0);
        }
        match self.window {
            None => rule.integrate_half_line(self.edge, |x, off| {
                let f = self.density_offset(x, off);
                if f == 0.0 {
                    0.0
                } else {
                    g(x, f)
                }
            }),
            Some((lo, hi)) => {
                let lo = lo.max(self.edge);
                if hi <= lo {
                    return Ok(0.0);
                }
                if hi.is_infinite() {
                    if lo == self.edge {
                        return rule.integrate_half_line(self.edge, |x, off| {
                            let f = self.density_offset(x, off);
                            if f == 0.0 {
                                0.0
                            } else {
                                g(x, f)
                            }
                        });
                    }
                    // a smooth tail starting inside the support
                    return rule.integrate_half_line(lo, |x, _| {
                        let f = self.density_offset(x, x - self.edge);
                        if f == 0.0 {
                            0.0
                        } else {
                            g(x, f)
                        }
                    });
                }
                let half = 0.5 * (hi - lo);
                let mid = 0.5 * (hi + lo);
                rule.integrate(|n| {
                    let x = mid + half * n.x;
                    let off = if lo == self.edge {
                        half * n.one_plus_x
                    } else {
                        x - self.edge
                    };
                    let f = self.density_offset(x, off);
                    if f == 0.0 {
                        0.0
                    } else {
                        half * g(x, f)
                    }
                })
            }
        }
    }
}

/// Jordan decomposition of a signed measure into its positive and negative halves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JordanPair {
    pub positive_part: SpectralMeasure,
    /// Stored as a positive measure: the original is `positive_part - negative_part`.
    pub negative_part: SpectralMeasure,
    /// Sign change of the linear numerator, `c/b` in the omega frame, when it exists.
    pub crossover: Option<f64>,
}

impl JordanPair {
    pub fn negative_is_empty(&self) -> bool {
        self.negative_part.scale == 0.0 && self.negative_part.atoms.is_empty()
    }
}

/// Splits `m` at the sign change of its numerator and routes atoms by sign.
pub fn jordan_decomposition(m: &SpectralMeasure) -> JordanPair {
    let t = m.thorin_form();
    let own = m.mirror_sign();
    // density in own frame = own * scale * (A x + B) / positive, x = own * u
    let sign_mult = own * m.scale;
    let mut pos = m.clone();
    let mut neg = m.clone();
    pos.atoms = m.atoms.iter().copied().filter(|a| a.sign > 0).collect();
    neg.atoms = m
        .atoms
        .iter()
        .copied()
        .filter(|a| a.sign < 0)
        .map(|a| Atom { sign: 1, ..a })
        .collect();
    pos.atom_specs.clear();
    neg.atom_specs.clear();

    let (lo, hi) = t.window.unwrap_or((t.edge, f64::INFINITY));
    let lo = lo.max(t.edge);
    // the numerator b u - c changes sign at c/b in the omega frame
    let root = match m.family {
        Family::Mu if m.b != 0.0 => Some(if m.side == Side::Plus { m.c / m.b } else { -m.c / m.b }),
        _ => None,
    };
    let crossover = root.map(|x| own * x);
    let sign_at = |x: f64| (sign_mult * (t.a_coef * x + t.b_coef)).signum();

    // windows in the Thorin frame, then map to the own frame
    let mut pos_window: Option<(f64, f64)> = None;
    let mut neg_window: Option<(f64, f64)> = None;
    if t.has_density && m.family != Family::AtomsOnly && hi > lo {
        match root {
            Some(x0) if x0 > lo && x0 < hi => {
                let left = (lo, x0);
                let right = (x0, hi);
                let probe = if hi.is_finite() {
                    0.5 * (x0 + hi)
                } else {
                    x0 + 1.0 + x0.abs()
                };
                if sign_at(probe) > 0.0 {
                    pos_window = Some(right);
                    neg_window = Some(left);
                } else {
                    pos_window = Some(left);
                    neg_window = Some(right);
                }
            }
            _ => {
                let probe = if hi.is_finite() {
                    0.5 * (lo + hi)
                } else {
                    lo + 1.0 + lo.abs()
                };
                let s = sign_at(probe);
                if s > 0.0 {
                    pos_window = Some((lo, hi));
                } else if s < 0.0 {
                    neg_window = Some((lo, hi));
                }
            }
        }
    }
    let to_own = |w: (f64, f64)| if own < 0.0 { (-w.1, -w.0) } else { w };
    match pos_window {
        Some(w) => pos.window = Some(to_own(w)),
        None => pos.scale = 0.0,
    }
    match neg_window {
        Some(w) => {
            neg.window = Some(to_own(w));
            neg.scale = -m.scale;
        }
        None => neg.scale = 0.0,
    }
    if pos.scale == 0.0 {
        pos.window = None;
    }
    if neg.scale == 0.0 {
        neg.window = None;
    }
    JordanPair {
        positive_part: pos,
        negative_part: neg,
        crossover,
    }
}

/// Whether the Thorin measure is positive, i.e. the extremum is a generalized gamma convolution.
pub fn is_ggc(m: &SpectralMeasure) -> bool {
    jordan_decomposition(&m.to_thorin()).negative_is_empty()
}

/// Levy density of the factor: `(1/x) int e^{-x u} omega(du)` in the omega frame.
pub fn levy_density(m: &SpectralMeasure, x: f64, rule: &TanhSinh) -> Result<f64> {
    let expected_positive = m.side == Side::Plus;
    if x == 0.0 || !x.is_finite() || (x > 0.0) != expected_positive {
        return Err(Error::Domain(format!(
            "x = {x} lies on the wrong side for the {:?} factor",
            m.side
        )));
    }
    // in the Thorin frame both sides read (1/|x|) int e^{-|x| y} tau(dy)
    let t = m.to_thorin().thorin_form();
    let ax = x.abs();
    let atoms: f64 = t.atoms.iter().map(|&(loc, w)| w * (-ax * loc).exp()).sum();
    let cont = t.integrate(rule, |y, f| (-ax * y).exp() * f)?;
    Ok((atoms + cont) / ax)
}
