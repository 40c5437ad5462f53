//! Tanh-sinh (double exponential) quadrature on `(-1, 1)`.
//!
//! Nodes carry the complements `1 - x` and `1 + x` computed without
//! cancellation, so integrands with endpoint singularities can be evaluated
//! right up to the endpoints.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default step size.
pub const DEFAULT_STEP: f64 = 1.0 / 128.0;
/// Default precision target in decimal digits (weights below `10^-p` are dropped).
pub const DEFAULT_DIGITS: u32 = 60;

/// A quadrature node on `(-1, 1)`.
#[derive(Clone, Copy, Debug)]
pub struct Node {
    pub x: f64,
    pub one_minus_x: f64,
    pub one_plus_x: f64,
    pub weight: f64,
}

/// Precomputed tanh-sinh rule.
#[derive(Clone, Debug)]
pub struct TanhSinh {
    h: f64,
    nodes: Vec<Node>,
}

impl TanhSinh {
    pub fn new(h: f64, digits: u32) -> Self {
        assert!(h > 0.0 && h <= 1.0, "step must lie in (0, 1]");
        let cutoff = 10f64.powi(-(digits.min(300) as i32));
        let half_pi = std::f64::consts::FRAC_PI_2;
        let mut nodes = Vec::new();
        let mut k = 0usize;
        loop {
            let t = k as f64 * h;
            let s = half_pi * t.sinh();
            let e = (-2.0 * s).exp();
            let one_minus_x = 2.0 * e / (1.0 + e);
            let weight = h * half_pi * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
            if weight < cutoff || one_minus_x < f64::MIN_POSITIVE {
                break;
            }
            let x = (1.0 - e) / (1.0 + e);
            let one_plus_x = 2.0 / (1.0 + e);
            nodes.push(Node {
                x,
                one_minus_x,
                one_plus_x,
                weight,
            });
            if k > 0 {
                nodes.push(Node {
                    x: -x,
                    one_minus_x: one_plus_x,
                    one_plus_x: one_minus_x,
                    weight,
                });
            }
            k += 1;
        }
        TanhSinh { h, nodes }
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// `sum w_j f(node_j)`; fails if the integrand is not finite at a node.
    pub fn integrate<F: FnMut(&Node) -> f64>(&self, mut f: F) -> Result<f64> {
        let mut sum = 0.0;
        for node in &self.nodes {
            let v = f(node);
            if !v.is_finite() {
                return Err(Error::NonFinite(node.x));
            }
            sum += node.weight * v;
        }
        Ok(sum)
    }

    pub fn integrate_complex<F: FnMut(&Node) -> Complex64>(&self, mut f: F) -> Result<Complex64> {
        let mut sum = Complex64::new(0.0, 0.0);
        for node in &self.nodes {
            let v = f(node);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite(node.x));
            }
            sum += node.weight * v;
        }
        Ok(sum)
    }

    /// `int_edge^inf g(u) du` through `u = 2 edge / (t + 1)`.
    ///
    /// The integrand receives `(u, u - edge)` with the offset computed exactly
    /// from the node complement, so an integrable singularity at `edge` is fine.
    pub fn integrate_half_line<F: FnMut(f64, f64) -> f64>(&self, edge: f64, mut g: F) -> Result<f64> {
        assert!(edge > 0.0, "half-line quadrature needs a positive edge");
        self.integrate(|n| {
            let (u, offset, jac) = half_line_point(edge, n);
            if jac == 0.0 {
                return 0.0;
            }
            g(u, offset) * jac
        })
    }

    /// `int_a^b f(u) du` for finite `a < b`; nodes near either end are placed from that end.
    pub fn integrate_interval<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> Result<f64> {
        assert!(
            a.is_finite() && b.is_finite() && a < b,
            "interval must be finite and nonempty"
        );
        let half = 0.5 * (b - a);
        self.integrate(|n| {
            let u = if n.x < 0.0 {
                a + half * n.one_plus_x
            } else {
                b - half * n.one_minus_x
            };
            f(u) * half
        })
    }

    pub fn integrate_half_line_complex<F: FnMut(f64, f64) -> Complex64>(
        &self,
        edge: f64,
        mut g: F,
    ) -> Result<Complex64> {
        assert!(edge > 0.0, "half-line quadrature needs a positive edge");
        self.integrate_complex(|n| {
            let (u, offset, jac) = half_line_point(edge, n);
            if jac == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            g(u, offset) * jac
        })
    }
}

impl Default for TanhSinh {
    fn default() -> Self {
        TanhSinh::new(DEFAULT_STEP, DEFAULT_DIGITS)
    }
}

fn half_line_point(edge: f64, n: &Node) -> (f64, f64, f64) {
    let u = 2.0 * edge / n.one_plus_x;
    let offset = edge * n.one_minus_x / n.one_plus_x;
    let jac = 2.0 * edge / (n.one_plus_x * n.one_plus_x);
    if !u.is_finite() || !jac.is_finite() {
        // the far end u -> inf: integrands decay at least like u^-2, so the product vanishes
        return (f64::INFINITY, f64::INFINITY, 0.0);
    }
    (u, offset, jac)
}

/// One-shot tanh-sinh quadrature of `f` over `(-1, 1)`.
pub fn tanh_sinh_quadrature<F: FnMut(f64) -> f64>(mut f: F, h: f64, digits: u32) -> Result<f64> {
    TanhSinh::new(h, digits).integrate(|n| f(n.x))
}
