//! Adaptive composite Gauss-Legendre quadrature.
//!
//! Each panel is integrated with a fixed open rule and compared against the
//! same rule applied to its two halves. Panels whose halves agree to within a
//! width-proportional share of the tolerance are accepted, the rest are
//! bisected in order of decreasing discrepancy. Endpoints are never sampled, which matters for integrands like
//! `sin^(2n+2a) z` whose derivatives blow up at `0` and `pi`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Per-panel rule order.
pub const PANEL_ORDER: usize = 15;
/// Default node budget before giving up.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;
const INITIAL_PANELS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub nodes_used: usize,
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// computed by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_ORDER))
}

fn apply_rule<F: Fn(f64) -> f64>(rule: &(Vec<f64>, Vec<f64>), f: &F, lo: f64, hi: f64) -> f64 {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    rule.0
        .iter()
        .zip(&rule.1)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Single-panel `order`-point Gauss-Legendre estimate.
pub fn fixed_panel<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, order: usize) -> f64 {
    apply_rule(&gauss_legendre(order), &f, lo, hi)
}

/// Adaptive integral of `f` over `(lo, hi)` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadratureResult> {
    integrate_with_budget(f, lo, hi, tol, DEFAULT_NODE_BUDGET)
}

pub fn integrate_with_budget<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    node_budget: usize,
) -> Result<QuadratureResult> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(domain(format!("bad integration interval ({lo}, {hi})")));
    }
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let rule = panel_rule();
    let length = hi - lo;
    let mut nodes_used = 0usize;
    let mut value = 0.0;
    let mut error = 0.0;
    let mut magnitude = 0.0;

    // Panels that failed the local test, refined largest discrepancy first.
    let mut pending: BinaryHeap<Panel> = BinaryHeap::new();
    let mut visit =
        |a: f64, b: f64, coarse: f64, nodes_used: &mut usize| -> Result<Option<Panel>> {
            let mid = 0.5 * (a + b);
            let left = apply_rule(rule, &f, a, mid);
            let right = apply_rule(rule, &f, mid, b);
            *nodes_used += 2 * PANEL_ORDER;
            let fine = left + right;
            if !fine.is_finite() {
                return Err(domain(format!("integrand not finite on ({a}, {b})")));
            }
            let diff = (fine - coarse).abs();
            let unsplittable = mid <= a || mid >= b;
            if diff <= tol * (b - a) / length || unsplittable {
                value += fine;
                error += diff;
                magnitude += left.abs() + right.abs();
                return Ok(None);
            }
            Ok(Some(Panel {
                a,
                b,
                left,
                right,
                diff,
            }))
        };

    let step = length / INITIAL_PANELS as f64;
    for i in 0..INITIAL_PANELS {
        let a = lo + step * i as f64;
        let b = if i + 1 == INITIAL_PANELS {
            hi
        } else {
            a + step
        };
        let coarse = apply_rule(rule, &f, a, b);
        nodes_used += PANEL_ORDER;
        pending.extend(visit(a, b, coarse, &mut nodes_used)?);
    }

    while let Some(panel) = pending.pop() {
        if nodes_used >= node_budget {
            pending.push(panel);
            let rest: f64 = pending.iter().map(|p| p.left + p.right).sum();
            let rest_err: f64 = pending.iter().map(|p| p.diff).sum();
            return Err(Error::NonConvergence {
                best_estimate: value + rest,
                abs_error_estimate: error + rest_err,
                nodes_used,
            });
        }
        let mid = 0.5 * (panel.a + panel.b);
        pending.extend(visit(panel.a, mid, panel.left, &mut nodes_used)?);
        pending.extend(visit(mid, panel.b, panel.right, &mut nodes_used)?);
    }

    Ok(QuadratureResult {
        value,
        abs_error_estimate: error + 64.0 * f64::EPSILON * magnitude,
        nodes_used,
    })
}

struct Panel {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    diff: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.diff
            .total_cmp(&other.diff)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// `int_{-inf}^{inf} g(x) / (1 + x^2) dx`, computed on `(0, pi)` through
/// `x = cot z`, for which `dx / (1 + x^2) = -dz`.
pub fn integrate_real_line<G: Fn(f64) -> f64>(g: G, tol: f64) -> Result<QuadratureResult> {
    integrate(|z: f64| g(z.cos() / z.sin()), 0.0, PI, tol)
}
