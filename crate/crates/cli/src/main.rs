//! `nigwh`: Wiener-Hopf factors of NIG processes from the command line.

mod format;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use nigwh::applications::{cramer_constant, risk_neutral_drift, ruin_report, PerpetualPut};
use nigwh::bigfloat::parse_rational;
use nigwh::distributions::{exact_cdf, gc_mgf, laplace_invert_cdf, me_cdf, WienerHopfFactor};
use nigwh::factorization::{bc_rational, is_ggc, omega_measure_with, thorin_measure_with, Orientation, Side};
use nigwh::moments::{negative_moments, MomentSequence};
use nigwh::nig::{classify_roots, zeta_roots_with};
use nigwh::pade::{exp_mixture_from_mgf, gamma_convolution_from_cgf};
use nigwh::quadrature::TanhSinh;
use nigwh::validation::{cumulant_identity_table, simulate_extrema_cdf, McConfig};
use nigwh::{Float, NigParams, Precision, Rational, Tolerances};

use format::NumberFormat;

const EXIT_INTERNAL: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "nigwh",
    version,
    about = "Wiener-Hopf factorization of the normal inverse Gaussian process"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Working precision in decimal digits for moments and Pade constructions.
    #[arg(long, global = true, env = "NIGWH_PRECISION", default_value_t = Precision::DEFAULT_DIGITS,
          value_parser = clap::value_parser!(u32).range(50..))]
    precision: u32,

    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    output: Option<Format>,

    /// Print every carried digit instead of 17 significant digits.
    #[arg(long, global = true)]
    full: bool,

    /// Relative tolerance for declaring zeta = rho (case III / C).
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_classification: f64,

    /// Relative tolerance on Im(zeta) for treating the roots as real.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_imaginary: f64,

    /// Tanh-sinh step for quadrature against Thorin measures.
    #[arg(long, global = true, default_value_t = 1.0 / 128.0)]
    quad_step: f64,

    /// Tanh-sinh truncation digits.
    #[arg(long, global = true, default_value_t = 60)]
    quad_digits: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Plus,
    Minus,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Plus => Side::Plus,
            SideArg::Minus => Side::Minus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// Gamma convolution from the cumulant series.
    Gc,
    /// Exponential mixture from the moment series.
    Me,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CdfMethod {
    Me,
    Gc,
    Exact,
    Mc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Frame {
    Thorin,
    Omega,
}

/// NIG parameters; decimals and `p/q` rationals are parsed exactly.
#[derive(Args, Debug, Clone)]
struct ParamArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    theta: String,
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    sigma: String,
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    kappa: String,
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    mu: String,
}

#[derive(Args, Debug, Clone)]
struct KilledArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Killing rate of the exponential horizon.
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    q: String,
}

#[derive(Args, Debug, Clone)]
struct McArgs {
    #[arg(long, default_value_t = 10_000)]
    paths: usize,
    /// Time step of the discretized path.
    #[arg(long, default_value_t = 1e-2)]
    step: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Roots rho, rho_hat of the Levy exponent and zeta, zeta_hat of psi(z) = q.
    Roots(KilledArgs),
    /// Case label, the constants b and c, and whether each factor is a GGC.
    Classify(KilledArgs),
    /// Thorin (or omega) measures of both factors.
    Factors {
        #[command(flatten)]
        args: KilledArgs,
        #[arg(long, value_enum, default_value_t = Frame::Thorin)]
        frame: Frame,
    },
    /// Exact moments m_k, cumulants and raw moments of one factor.
    Moments {
        #[command(flatten)]
        args: KilledArgs,
        #[arg(long, value_enum, default_value_t = SideArg::Plus)]
        side: SideArg,
        /// Highest order.
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
    },
    /// Pade-based gamma-convolution or exponential-mixture approximation.
    Pade {
        #[command(flatten)]
        args: KilledArgs,
        #[arg(long, value_enum, default_value_t = SideArg::Plus)]
        side: SideArg,
        #[arg(long, value_enum, default_value_t = Kind::Me)]
        kind: Kind,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// CDF of S (plus) or -I (minus) on a grid.
    Cdf {
        #[command(flatten)]
        args: KilledArgs,
        #[arg(long, value_enum, default_value_t = SideArg::Plus)]
        side: SideArg,
        #[arg(long, value_enum, default_value_t = CdfMethod::Me)]
        method: CdfMethod,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// `start:stop:step`, both ends included.
        #[arg(long, default_value = "0:0.05:0.001", value_parser = parse_grid)]
        grid: Grid,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Cramer exponent and constant for ultimate ruin, with the mixture approximation.
    Ruin {
        #[command(flatten)]
        params: ParamArgs,
        /// Initial capital; omit for the constants only.
        #[arg(long)]
        x: Option<f64>,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Perpetual American put price.
    Option {
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        theta: String,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        sigma: String,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        kappa: String,
        #[arg(long, allow_hyphen_values = true, value_parser = rational, required_unless_present = "risk_neutral", conflicts_with = "risk_neutral")]
        mu: Option<String>,
        /// Choose mu so that psi(1) = r.
        #[arg(long)]
        risk_neutral: bool,
        #[arg(long)]
        r: f64,
        #[arg(long = "K")]
        strike: f64,
        #[arg(long = "A0")]
        a0: f64,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Cumulant identity table: psi column, exact factors, GC and ME approximations.
    Check {
        #[command(flatten)]
        args: KilledArgs,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Highest order; defaults to min(9, 2n - 1).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Empirical CDFs of S and -I from simulated paths.
    Mc {
        #[command(flatten)]
        args: KilledArgs,
        #[arg(long, default_value = "0:0.05:0.001", value_parser = parse_grid)]
        grid: Grid,
        #[command(flatten)]
        mc: McArgs,
    },
}

/// Rejects malformed numbers at parse time so they surface as usage errors.
fn rational(s: &str) -> Result<String, String> {
    parse_rational(s).map(|_| s.to_string()).map_err(|e| e.to_string())
}

#[derive(Clone, Debug)]
struct Grid(Vec<f64>);

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(format!("expected start:stop:step, got '{s}'"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(format!("grid needs step > 0 and stop >= start, got '{s}'"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(format!("grid has {count} points, more than 10^6"));
    }
    Ok(Grid((0..count).map(|i| start + i as f64 * step).collect()))
}

#[derive(Debug)]
enum CliError {
    Core(nigwh::Error),
    Usage(String),
    Io(std::io::Error),
}

impl From<nigwh::Error> for CliError {
    fn from(e: nigwh::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn report(&self) -> (u8, Value) {
        match self {
            CliError::Core(e) => {
                let code = if e.is_domain() { EXIT_DOMAIN } else { EXIT_INTERNAL };
                (code, json!({ "error": e.kind(), "message": e.to_string() }))
            }
            CliError::Usage(m) => (EXIT_USAGE, json!({ "error": "usage", "message": m })),
            CliError::Io(e) => (EXIT_INTERNAL, json!({ "error": "io", "message": e.to_string() })),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parameters parsed exactly, with their double-precision image.
struct Model {
    exact: [Rational; 4],
    params: NigParams,
}

impl Model {
    fn parse(theta: &str, sigma: &str, kappa: &str, mu: &str) -> CliResult<Self> {
        let exact = [
            parse_rational(theta)?,
            parse_rational(sigma)?,
            parse_rational(kappa)?,
            parse_rational(mu)?,
        ];
        let [t, s, k, m] = exact.each_ref().map(|r| r.to_f64());
        Ok(Model {
            params: NigParams::new(t, s, k, m)?,
            exact,
        })
    }

    fn from_args(a: &ParamArgs) -> CliResult<Self> {
        Self::parse(&a.theta, &a.sigma, &a.kappa, &a.mu)
    }
}

struct Killed {
    model: Model,
    q_exact: Rational,
    q: f64,
}

impl Killed {
    fn from_args(a: &KilledArgs) -> CliResult<Self> {
        let model = Model::from_args(&a.params)?;
        let q_exact = parse_rational(&a.q)?;
        let q = q_exact.to_f64();
        Ok(Killed { model, q_exact, q })
    }

    fn p(&self) -> &NigParams {
        &self.model.params
    }
}

struct Ctx {
    fmt: NumberFormat,
    prec: Precision,
    tol: Tolerances,
    rule: TanhSinh,
    output: Option<Format>,
}

impl Ctx {
    fn format(&self, default: Format) -> Format {
        self.output.unwrap_or(default)
    }

    fn json(&self, mut v: Value) -> String {
        self.fmt.stringify(&mut v);
        let mut s = serde_json::to_string_pretty(&v).expect("JSON values always serialize");
        s.push('\n');
        s
    }
}

fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn run(cli: Cli) -> CliResult<String> {
    let g = &cli.global;
    if !(g.quad_step > 0.0 && g.quad_step <= 1.0) {
        return Err(CliError::Usage(format!(
            "--quad-step must lie in (0, 1], got {}",
            g.quad_step
        )));
    }
    if !(g.tol_classification >= 0.0 && g.tol_imaginary >= 0.0) {
        return Err(CliError::Usage("tolerances must be nonnegative".into()));
    }
    let ctx = Ctx {
        fmt: NumberFormat { full: g.full },
        prec: Precision::new(g.precision),
        tol: Tolerances {
            classification: g.tol_classification,
            imaginary: g.tol_imaginary,
        },
        rule: TanhSinh::new(g.quad_step, g.quad_digits),
        output: g.output,
    };
    match &cli.command {
        Command::Roots(a) => roots(&ctx, &Killed::from_args(a)?),
        Command::Classify(a) => classify(&ctx, &Killed::from_args(a)?),
        Command::Factors { args, frame } => factors(&ctx, &Killed::from_args(args)?, *frame),
        Command::Moments { args, side, k } => moments(&ctx, &Killed::from_args(args)?, (*side).into(), *k as usize),
        Command::Pade { args, side, kind, n } => {
            pade(&ctx, &Killed::from_args(args)?, (*side).into(), *kind, *n as usize)
        }
        Command::Cdf {
            args,
            side,
            method,
            n,
            grid,
            mc,
        } => cdf(
            &ctx,
            &Killed::from_args(args)?,
            (*side).into(),
            *method,
            *n as usize,
            &grid.0,
            mc,
        ),
        Command::Ruin { params, x, n } => ruin(&ctx, &Model::from_args(params)?, *x, *n as usize),
        Command::Option {
            theta,
            sigma,
            kappa,
            mu,
            risk_neutral: _,
            r,
            strike,
            a0,
            n,
        } => {
            let mu = match mu {
                Some(m) => m.clone(),
                None => {
                    let t = parse_rational(theta)?.to_f64();
                    let s = parse_rational(sigma)?.to_f64();
                    let k = parse_rational(kappa)?.to_f64();
                    format!("{:e}", risk_neutral_drift(t, s, k, *r)?)
                }
            };
            let model = Model::parse(theta, sigma, kappa, &mu)?;
            option(&ctx, &model, *r, *strike, *a0, *n as usize)
        }
        Command::Check { args, n, k } => {
            let n = *n as usize;
            check(&ctx, &Killed::from_args(args)?, n, k.unwrap_or((2 * n - 1).min(9)))
        }
        Command::Mc { args, grid, mc } => mc_cdf(&ctx, &Killed::from_args(args)?, &grid.0, mc),
    }
}

fn roots(ctx: &Ctx, k: &Killed) -> CliResult<String> {
    let r = zeta_roots_with(k.p(), k.q, &ctx.tol)?;
    let f = &ctx.fmt;
    Ok(match ctx.format(Format::Json) {
        Format::Json => ctx.json(json!({
            "rho": r.rho,
            "rho_hat": r.rho_hat,
            "zeta": complex_json(r.zeta),
            "zeta_hat": complex_json(r.zeta_hat),
            "d": r.d,
            "zeta_solves": r.zeta_solves,
            "zeta_hat_solves": r.zeta_hat_solves,
        })),
        Format::Csv => csv(
            &["quantity", "re", "im"],
            [
                ("rho", Complex64::new(r.rho, 0.0)),
                ("rho_hat", Complex64::new(r.rho_hat, 0.0)),
                ("zeta", r.zeta),
                ("zeta_hat", r.zeta_hat),
                ("d", Complex64::new(r.d, 0.0)),
            ]
            .map(|(name, z)| vec![name.to_string(), f.f64(z.re), f.f64(z.im)]),
        ),
    })
}

fn classify(ctx: &Ctx, k: &Killed) -> CliResult<String> {
    let roots = zeta_roots_with(k.p(), k.q, &ctx.tol)?;
    let label = classify_roots(&roots, &ctx.tol);
    let [theta, sigma, kappa, mu] = &k.model.exact;
    let (b, c) = bc_rational(theta, sigma, kappa, mu, &k.q_exact);
    let ratio = if b == 0 { None } else { Some(Rational::from(&c / &b)) };
    let plus = thorin_measure_with(k.p(), k.q, Side::Plus, &ctx.tol)?;
    let minus = thorin_measure_with(k.p(), k.q, Side::Minus, &ctx.tol)?;
    let (gp, gm) = (is_ggc(&plus), is_ggc(&minus));
    let ratio_text = ratio.as_ref().map(|r| r.to_string());
    Ok(match ctx.format(Format::Json) {
        Format::Json => ctx.json(json!({
            "case": label.to_string(),
            "b": b.to_string(),
            "c": c.to_string(),
            "c_over_b": ratio_text,
            "is_ggc_plus": gp,
            "is_ggc_minus": gm,
            "is_ggc": gp && gm,
        })),
        Format::Csv => csv(
            &["case", "b", "c", "c_over_b", "is_ggc_plus", "is_ggc_minus", "is_ggc"],
            [vec![
                label.to_string(),
                b.to_string(),
                c.to_string(),
                ratio_text.unwrap_or_default(),
                gp.to_string(),
                gm.to_string(),
                (gp && gm).to_string(),
            ]],
        ),
    })
}

fn factors(ctx: &Ctx, k: &Killed, frame: Frame) -> CliResult<String> {
    let measure = |side| match frame {
        Frame::Thorin => thorin_measure_with(k.p(), k.q, side, &ctx.tol),
        Frame::Omega => omega_measure_with(k.p(), k.q, side, &ctx.tol),
    };
    let (plus, minus) = (measure(Side::Plus)?, measure(Side::Minus)?);
    let entry = |m: &nigwh::factorization::SpectralMeasure| -> CliResult<Value> {
        let mut v = serde_json::to_value(m).map_err(|e| CliError::Io(e.into()))?;
        v["radius"] = json!(m.radius());
        v["is_ggc"] = json!(is_ggc(m));
        Ok(v)
    };
    let f = &ctx.fmt;
    Ok(match ctx.format(Format::Json) {
        Format::Json => ctx.json(json!({ "plus": entry(&plus)?, "minus": entry(&minus)? })),
        Format::Csv => {
            // one row per atom plus one summary row per side
            let mut rows = Vec::new();
            for (name, m) in [("plus", &plus), ("minus", &minus)] {
                let mirrored = m.side == Side::Minus && m.orientation == Orientation::Thorin;
                let edge = if mirrored { -m.support_edge } else { m.support_edge };
                rows.push(vec![
                    name.into(),
                    "continuous".into(),
                    format!("{:?}", m.family),
                    f.f64(edge),
                    f.f64(m.scale),
                ]);
                for a in &m.atoms {
                    rows.push(vec![
                        name.into(),
                        "atom".into(),
                        String::new(),
                        f.f64(a.location),
                        f.f64(a.signed_weight()),
                    ]);
                }
            }
            csv(&["side", "part", "family", "location", "weight"], rows)
        }
    })
}

fn factor_moments(ctx: &Ctx, k: &Killed, side: Side, k_max: usize) -> CliResult<(MomentSequence, f64)> {
    let m = thorin_measure_with(k.p(), k.q, side, &ctx.tol)?;
    let seq = negative_moments(&m, k_max, ctx.prec)?;
    Ok((seq, m.radius()))
}

fn moments(ctx: &Ctx, k: &Killed, side: Side, k_max: usize) -> CliResult<String> {
    let (seq, radius) = factor_moments(ctx, k, side, k_max)?;
    let f = &ctx.fmt;
    let rows: Vec<Vec<String>> = (0..k_max)
        .map(|i| {
            vec![
                (i + 1).to_string(),
                f.big(&seq.m[i]),
                f.big(&seq.kappa_cum[i]),
                f.big(&seq.mu_raw[i + 1]),
            ]
        })
        .collect();
    Ok(match ctx.format(Format::Csv) {
        Format::Csv => csv(&["k", "m_k", "kappa_k", "mu_k"], rows),
        Format::Json => ctx.json(json!({
            "side": side,
            "radius": radius,
            "ggc": seq.ggc,
            "rows": rows.iter().map(|r| json!({ "k": r[0].parse::<u64>().unwrap_or(0), "m": r[1], "kappa": r[2], "mu": r[3] })).collect::<Vec<_>>(),
        })),
    })
}

fn pade(ctx: &Ctx, k: &Killed, side: Side, kind: Kind, n: usize) -> CliResult<String> {
    let (seq, radius) = factor_moments(ctx, k, side, 2 * n)?;
    let (weights, rates): (Vec<Float>, Vec<Float>) = match kind {
        Kind::Gc => {
            let g = gamma_convolution_from_cgf(&seq, n, radius)?;
            (g.alpha, g.beta)
        }
        Kind::Me => {
            let e = exp_mixture_from_mgf(&seq, n, radius)?;
            (e.omega, e.eta)
        }
    };
    let f = &ctx.fmt;
    let (wname, rname) = match kind {
        Kind::Gc => ("alpha", "beta"),
        Kind::Me => ("omega", "eta"),
    };
    Ok(match ctx.format(Format::Json) {
        Format::Json => ctx.json(json!({
            "kind": match kind { Kind::Gc => "gc", Kind::Me => "me" },
            "side": side,
            "n": n,
            "precision": ctx.prec.digits(),
            "components": weights.iter().zip(&rates)
                .map(|(w, r)| json!({ wname: f.exact(w), rname: f.exact(r) }))
                .collect::<Vec<_>>(),
        })),
        Format::Csv => csv(
            &["i", wname, rname],
            weights
                .iter()
                .zip(&rates)
                .enumerate()
                .map(|(i, (w, r))| vec![(i + 1).to_string(), f.exact(w), f.exact(r)]),
        ),
    })
}

fn cdf(ctx: &Ctx, k: &Killed, side: Side, method: CdfMethod, n: usize, grid: &[f64], mc: &McArgs) -> CliResult<String> {
    let values = match method {
        CdfMethod::Me => {
            let (seq, radius) = factor_moments(ctx, k, side, 2 * n)?;
            let e = exp_mixture_from_mgf(&seq, n, radius)?;
            grid.iter().map(|&x| me_cdf(&e, x)).collect()
        }
        CdfMethod::Gc => {
            let (seq, radius) = factor_moments(ctx, k, side, 2 * n)?;
            let g = gamma_convolution_from_cgf(&seq, n, radius)?;
            laplace_invert_cdf(|z| gc_mgf(&g, z), grid)?
        }
        CdfMethod::Exact => {
            let factor = WienerHopfFactor::with_rule(k.p(), k.q, side, ctx.rule.clone())?;
            exact_cdf(&factor, grid)?
        }
        CdfMethod::Mc => {
            let cfg = McConfig {
                step: mc.step,
                n_paths: mc.paths,
                seed: mc.seed,
            };
            let (sup, inf) = simulate_extrema_cdf(k.p(), k.q, &cfg, grid)?;
            match side {
                Side::Plus => sup,
                Side::Minus => inf,
            }
        }
    };
    let f = &ctx.fmt;
    Ok(match ctx.format(Format::Csv) {
        Format::Csv => csv(
            &["x", "F"],
            grid.iter().zip(&values).map(|(&x, &v)| vec![f.f64(x), f.f64(v)]),
        ),
        Format::Json => ctx.json(json!({
            "side": side,
            "points": grid.iter().zip(&values).map(|(&x, &v)| json!({ "x": x, "F": v })).collect::<Vec<_>>(),
        })),
    })
}

fn ruin(ctx: &Ctx, model: &Model, x: Option<f64>, n: usize) -> CliResult<String> {
    let p = &model.params;
    let report = match x {
        Some(_) => ruin_report(p, n, ctx.prec)?,
        None => cramer_constant(p)?,
    };
    if let Some(x) = x {
        if !(x > 0.0) {
            return Err(nigwh::Error::Domain(format!("initial capital must be positive, got {x}")).into());
        }
    }
    let approx = x.and_then(|x| report.me_value(x));
    let asymptotic = x.map(|x| report.asymptotic(x));
    let f = &ctx.fmt;
    Ok(match ctx.format(Format::Json) {
        Format::Json => ctx.json(json!({
            "gamma": report.gamma,
            "C": report.c,
            "x": x,
            "n": x.map(|_| n),
            "asymptotic": asymptotic,
            "me": approx,
        })),
        Format::Csv => {
            let opt = |v: Option<f64>| v.map(|v| f.f64(v)).unwrap_or_default();
            csv(
                &["gamma", "C", "x", "n", "asymptotic", "me"],
                [vec![
                    f.f64(report.gamma),
                    f.f64(report.c),
                    opt(x),
                    x.map(|_| n.to_string()).unwrap_or_default(),
                    opt(asymptotic),
                    opt(approx),
                ]],
            )
        }
    })
}

fn option(ctx: &Ctx, model: &Model, r: f64, strike: f64, a0: f64, n: usize) -> CliResult<String> {
    let put = PerpetualPut::new(&model.params, r, strike, n, ctx.prec)?;
    let quote = put.quote(a0)?;
    for w in &quote.warnings {
        eprintln!("warning: {w}");
    }
    let f = &ctx.fmt;
    Ok(match ctx.format(Format::Json) {
        Format::Json => {
            let mut v = serde_json::to_value(&quote).map_err(|e| CliError::Io(e.into()))?;
            v["mu"] = json!(model.params.mu);
            ctx.json(v)
        }
        Format::Csv => csv(
            &["a0", "value", "c_factor", "boundary", "n", "mu"],
            [vec![
                f.f64(a0),
                f.f64(quote.value),
                f.f64(quote.c_factor),
                f.f64(quote.boundary),
                n.to_string(),
                f.f64(model.params.mu),
            ]],
        ),
    })
}

fn check(ctx: &Ctx, k: &Killed, n: usize, k_max: usize) -> CliResult<String> {
    let rows = cumulant_identity_table(k.p(), k.q, k_max, n, ctx.prec)?;
    let f = &ctx.fmt;
    let opt = |v: &Option<Float>| v.as_ref().map(|x| f.big(x)).unwrap_or_default();
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                f.big(&r.psi),
                f.big(&r.exact),
                opt(&r.gamma),
                opt(&r.mixture),
            ]
        })
        .collect();
    Ok(match ctx.format(Format::Csv) {
        Format::Csv => csv(&["k", "psi", "exact", "gc", "me"], table),
        Format::Json => ctx.json(json!({
            "n": n,
            "precision": ctx.prec.digits(),
            "rows": table.iter().map(|r| json!({
                "k": r[0].parse::<u64>().unwrap_or(0),
                "psi": r[1],
                "exact": r[2],
                "gc": if r[3].is_empty() { Value::Null } else { json!(r[3]) },
                "me": if r[4].is_empty() { Value::Null } else { json!(r[4]) },
            })).collect::<Vec<_>>(),
        })),
    })
}

fn mc_cdf(ctx: &Ctx, k: &Killed, grid: &[f64], mc: &McArgs) -> CliResult<String> {
    let cfg = McConfig {
        step: mc.step,
        n_paths: mc.paths,
        seed: mc.seed,
    };
    let (sup, inf) = simulate_extrema_cdf(k.p(), k.q, &cfg, grid)?;
    let f = &ctx.fmt;
    Ok(match ctx.format(Format::Csv) {
        Format::Csv => csv(
            &["x", "F_sup", "F_neg_inf"],
            grid.iter()
                .zip(sup.iter().zip(&inf))
                .map(|(&x, (&s, &i))| vec![f.f64(x), f.f64(s), f.f64(i)]),
        ),
        Format::Json => ctx.json(json!({
            "paths": mc.paths,
            "step": mc.step,
            "seed": mc.seed,
            "points": grid.iter().zip(sup.iter().zip(&inf))
                .map(|(&x, (&s, &i))| json!({ "x": x, "F_sup": s, "F_neg_inf": i }))
                .collect::<Vec<_>>(),
        })),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            // the rendered message without the trailing usage/help hints, on one line
            let rendered = e.render().to_string();
            let message: Vec<&str> = rendered
                .lines()
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            let message = message.join(" ");
            eprintln!(
                "{}",
                json!({ "error": "usage", "message": message.trim_start_matches("error: ") })
            );
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let result = run(cli).and_then(|out| {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(out.as_bytes())?;
        stdout.flush()?;
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (code, body) = e.report();
            eprintln!("{body}");
            ExitCode::from(code)
        }
    }
}
