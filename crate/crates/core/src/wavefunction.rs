//! Normalized bound states `R_n(z)`.
//!
//! For `z` in `(0, pi)`, `(1 + cot^2 z)^(-(1-beta_n)/2) = sin^(n+a) z`, so
//!
//! ```text
//! R_n(z) = (1/K_n) exp(-alpha_n z / 2) sin^(n+a) z P_n(cot z)
//! ```
//!
//! with `P_n = K_n C_n` the exact Rodrigues polynomial. No extra sign is
//! applied: the leading coefficient of `P_n` already carries `(-1)^(n-1)`,
//! which is the sign of the square-well limit `(-1)^(n-1) sqrt(2/pi) sin nz`.

use std::f64::consts::PI;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::exactalg::{parse_rational, to_f64, DensePolynomial, Rational};
use crate::quadrature::{integrate, integrate_real_line, QuadratureResult};
use crate::rodrigues::{arccot, level_params, rodrigues_general, LevelParams};

/// Where the normalization constant came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormSource {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundState {
    pub level: LevelParams,
    pub poly: DensePolynomial,
    /// `1/K_n`.
    pub norm: f64,
    pub sign: i8,
    pub norm_source: NormSource,
    /// `K_n` from quadrature, always computed.
    pub k_numeric: f64,
    #[serde(skip)]
    cache: FloatCache,
}

#[derive(Debug, Clone, Default)]
struct FloatCache {
    p: Vec<f64>,
    dp: Vec<f64>,
    d2p: Vec<f64>,
    a: f64,
    b: f64,
    exponent: f64,
    alpha: f64,
    epsilon: f64,
}

fn horner(c: &[f64], x: f64) -> f64 {
    crate::exactalg::horner(c, x)
}

fn check_open(z: f64) -> Result<()> {
    if z > 0.0 && z < PI {
        Ok(())
    } else {
        Err(domain(format!("z = {z} outside (0, pi)")))
    }
}

impl FloatCache {
    fn new(level: &LevelParams, poly: &DensePolynomial) -> Self {
        let dp = poly.derivative();
        Self {
            p: poly.to_f64_coeffs(),
            d2p: dp.derivative().to_f64_coeffs(),
            dp: dp.to_f64_coeffs(),
            a: to_f64(&level.a),
            b: to_f64(&level.b),
            exponent: to_f64(&level.n_plus_a()),
            alpha: to_f64(&level.alpha_n),
            epsilon: to_f64(&level.epsilon_n),
        }
    }

    /// `exp(-alpha z/2) sin^(n+a) z`.
    fn envelope(&self, z: f64) -> f64 {
        (-0.5 * self.alpha * z + self.exponent * z.sin().ln()).exp()
    }

    fn unnormalized(&self, z: f64) -> f64 {
        self.envelope(z) * horner(&self.p, z.cos() / z.sin())
    }
}

impl BoundState {
    pub fn n(&self) -> u32 {
        self.level.n
    }

    /// `K_n` actually used.
    pub fn k(&self) -> f64 {
        1.0 / self.norm
    }

    pub fn energy(&self) -> f64 {
        self.cache.epsilon
    }

    /// `R_n(z)`.
    pub fn eval(&self, z: f64) -> Result<f64> {
        eval_r(self, z)
    }

    /// `K_n R_n(z)`, the unnormalized wave function.
    pub fn eval_unnormalized(&self, z: f64) -> Result<f64> {
        check_open(z)?;
        Ok(self.sign as f64 * self.cache.unnormalized(z))
    }

    /// `C_n(x) = P_n(x) / K_n`.
    pub fn c_poly_eval(&self, x: f64) -> f64 {
        self.norm * horner(&self.cache.p, x)
    }

    fn same_potential(&self, other: &BoundState) -> bool {
        self.level.a == other.level.a && self.level.b == other.level.b
    }
}

/// `K_n` for `a = 0` in closed form:
/// `sqrt((n!)^2 n^3 (1 - exp(-2 pi b/n)) / (4 b (b^2 + n^4)))`.
pub fn normalization_closed_a0(n: u32, b: f64) -> Result<f64> {
    if n < 1 {
        return Err(domain("level index must be >= 1"));
    }
    if !(b > 0.0) {
        return Err(domain(format!("closed-form K_n needs b > 0, got {b}")));
    }
    let nf = n as f64;
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let num = fact * fact * nf.powi(3) * -(-2.0 * PI * b / nf).exp_m1();
    let den = 4.0 * b * (b * b + nf.powi(4));
    Ok((num / den).sqrt())
}

/// `K_n` by quadrature of the unnormalized density. `tol` is relative to the
/// size of the integral.
fn numeric_k(cache: &FloatCache, tol: f64) -> Result<QuadratureResult> {
    let density = |z: f64| cache.unnormalized(z).powi(2);
    let crude = integrate(density, 0.0, PI, f64::MAX.sqrt()).map(|r| r.value)?;
    let mut r = integrate(density, 0.0, PI, tol * crude.abs().max(f64::MIN_POSITIVE))?;
    r.value = r.value.sqrt();
    Ok(r)
}

/// Assembles `R_n` for rational `(a, b)`. For `a = 0` the closed-form `K_n`
/// is used; the quadrature value is kept alongside in `k_numeric`.
pub fn build_state(n: u32, a: &Rational, b: &Rational, tol: f64) -> Result<BoundState> {
    let level = level_params(n, a, b)?;
    let poly = rodrigues_general(&level.weight(), level.m());
    let cache = FloatCache::new(&level, &poly);
    let k_numeric = numeric_k(&cache, tol)?.value;
    let (k, norm_source) = if a.is_zero() {
        (normalization_closed_a0(n, cache.b)?, NormSource::ClosedForm)
    } else {
        (k_numeric, NormSource::Quadrature)
    };
    Ok(BoundState {
        level,
        poly,
        norm: 1.0 / k,
        sign: 1,
        norm_source,
        k_numeric,
        cache,
    })
}

/// `R_n(z)`.
pub fn eval_r(s: &BoundState, z: f64) -> Result<f64> {
    check_open(z)?;
    Ok(s.sign as f64 * s.norm * s.cache.unnormalized(z))
}

/// `(R, R', R'')` by the chain rule, with `d(cot z)/dz = -csc^2 z`.
pub fn eval_r_derivatives(s: &BoundState, z: f64) -> Result<(f64, f64, f64)> {
    check_open(z)?;
    let c = &s.cache;
    let (sin, cos) = z.sin_cos();
    let x = cos / sin;
    let csc2 = 1.0 / (sin * sin);

    // envelope E = exp(-alpha z/2) sin^p z, E'/E = g, g' = -p csc^2 z
    let e = c.envelope(z);
    let g = -0.5 * c.alpha + c.exponent * x;
    let dg = -c.exponent * csc2;
    let de = e * g;
    let d2e = e * (g * g + dg);

    // Q(z) = P(cot z)
    let (p, dp, d2p) = (horner(&c.p, x), horner(&c.dp, x), horner(&c.d2p, x));
    let q = p;
    let dq = -csc2 * dp;
    let d2q = 2.0 * csc2 * x * dp + csc2 * csc2 * d2p;

    let scale = s.sign as f64 * s.norm;
    Ok((
        scale * e * q,
        scale * (de * q + e * dq),
        scale * (d2e * q + 2.0 * de * dq + e * d2q),
    ))
}

/// `R'' + (2b cot z - a(a+1) csc^2 z + energy) R` at an arbitrary trial energy.
pub fn schrodinger_residual_at_energy(s: &BoundState, z: f64, energy: f64) -> Result<f64> {
    let (r, _, d2r) = eval_r_derivatives(s, z)?;
    let c = &s.cache;
    let (sin, cos) = z.sin_cos();
    let coupling = 2.0 * c.b * cos / sin - c.a * (c.a + 1.0) / (sin * sin) + energy;
    Ok(d2r + coupling * r)
}

/// `R'' + (2b cot z - a(a+1) csc^2 z + epsilon_n) R`.
pub fn schrodinger_residual(s: &BoundState, z: f64) -> Result<f64> {
    schrodinger_residual_at_energy(s, z, s.cache.epsilon)
}

/// `int_0^pi R_n R_n' dz`.
pub fn overlap(s1: &BoundState, s2: &BoundState, tol: f64) -> Result<f64> {
    if !s1.same_potential(s2) {
        return Err(domain("overlap requires states of the same potential"));
    }
    let f = |z: f64| eval_r(s1, z).unwrap_or(0.0) * eval_r(s2, z).unwrap_or(0.0);
    Ok(integrate(f, 0.0, PI, tol)?.value)
}

/// `sqrt(w(x)) C_n(x)` evaluated directly in `x`.
fn xspace_factor(s: &BoundState, x: f64) -> f64 {
    let c = &s.cache;
    let beta = 1.0 - c.exponent;
    let log_sqrt_w = 0.5 * ((beta - 1.0) * (x * x).ln_1p() - c.alpha * arccot(x));
    let v = s.sign as f64 * log_sqrt_w.exp() * s.c_poly_eval(x);
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

/// `int dx/s(x) sqrt(w_n) C_n sqrt(w_n') C_n'` over the real line.
pub fn overlap_xspace(s1: &BoundState, s2: &BoundState, tol: f64) -> Result<f64> {
    if !s1.same_potential(s2) {
        return Err(domain("overlap requires states of the same potential"));
    }
    let g = |x: f64| xspace_factor(s1, x) * xspace_factor(s2, x);
    Ok(integrate_real_line(g, tol)?.value)
}

/// Overlap matrix `G[i][j] = <R_i|R_j>`, filled by scoped worker threads.
pub fn overlap_matrix(states: &[BoundState], tol: f64) -> Result<Vec<Vec<f64>>> {
    let k = states.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    let values: Vec<Result<f64>> = std::thread::scope(|scope| {
        let handles: Vec<_> = pairs
            .iter()
            .map(|&(i, j)| scope.spawn(move || overlap(&states[i], &states[j], tol)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("overlap worker panicked"))
            .collect()
    });
    let mut g = vec![vec![0.0; k]; k];
    for (&(i, j), v) in pairs.iter().zip(values) {
        let v = v?;
        g[i][j] = v;
        g[j][i] = v;
    }
    Ok(g)
}

/// Number of sign changes of `R_n` over `grid_points` interior points.
pub fn count_sign_changes(s: &BoundState, grid_points: usize) -> usize {
    let values: Vec<f64> = open_grid(grid_points)
        .into_iter()
        .map(|z| s.cache.unnormalized(z))
        .filter(|v| *v != 0.0)
        .collect();
    values
        .windows(2)
        .filter(|w| w[0].signum() != w[1].signum())
        .count()
}

/// `points` equally spaced interior points `pi i / (points + 1)`.
pub fn open_grid(points: usize) -> Vec<f64> {
    (1..=points)
        .map(|i| PI * i as f64 / (points + 1) as f64)
        .collect()
}

/// `(-1)^(n-1) sqrt(2/pi) sin(nz)`.
pub fn square_well_state(n: u32, z: f64) -> f64 {
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    sign * (2.0 / PI).sqrt() * (n as f64 * z).sin()
}

pub const LIMIT_GRID_POINTS: usize = 1000;

/// Max-norm distance between `R_n` at `a = b = eps` and the square-well state.
pub fn square_well_limit_error(n: u32, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(domain("eps must be positive"));
    }
    let e = parse_rational(&format!("{eps:e}"))?;
    let s = build_state(n, &e, &e, 1e-12)?;
    open_grid(LIMIT_GRID_POINTS)
        .into_iter()
        .map(|z| Ok((eval_r(&s, z)? - square_well_state(n, z)).abs()))
        .try_fold(0.0f64, |m, d: Result<f64>| Ok(m.max(d?)))
}

/// Zero-angular-momentum radial ground state `U_1(r) = R_1(r)/r`.
pub fn radial_ground_state(r: f64, a: f64, b: f64) -> Result<f64> {
    check_open(r)?;
    let (alpha, k1) = ground_state_constants(a, b)?;
    let r1 = (-0.5 * alpha * r + (1.0 + a) * r.sin().ln()).exp() / k1;
    Ok(r1 / r)
}

/// `(alpha_1, K_1)` for float parameters.
pub fn ground_state_constants(a: f64, b: f64) -> Result<(f64, f64)> {
    if !(a > -0.5) || !(b > 0.0) {
        return Err(domain("ground state needs a > -1/2 and b > 0"));
    }
    let alpha = 2.0 * b / (1.0 + a);
    let k1 = if a == 0.0 {
        normalization_closed_a0(1, b)?
    } else {
        let density = |z: f64| (-alpha * z + (2.0 + 2.0 * a) * z.sin().ln()).exp();
        integrate(density, 0.0, PI, 1e-13)?.value.sqrt()
    };
    Ok((alpha, k1))
}
