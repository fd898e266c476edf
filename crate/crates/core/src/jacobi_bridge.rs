//! Jacobi polynomials with complex parameters and the imaginary-argument
//! correspondence with the `C_n` polynomials.
//!
//! The map `gamma = beta - 1 - i alpha/2`, `delta = beta - 1 + i alpha/2` gives
//! `gamma + delta + 2 = 2 beta` and `i(gamma - delta) = alpha`. Substituting
//! `y = i x` into the standard Jacobi equation
//!
//! ```text
//! (1 - y^2) P'' + (delta - gamma - (gamma + delta + 2) y) P' + m(m + gamma + delta + 1) P = 0
//! ```
//!
//! shows that `Q(x) = P_m(i x)` satisfies
//!
//! ```text
//! (1 + x^2) Q'' + (-alpha + 2 beta x) Q' - m(2 beta + m - 1) Q = 0,
//! ```
//!
//! which is the `C_m` equation with `x -> -x`. The variant with both the
//! `i(gamma - delta)` term and the eigenvalue term sign-flipped is evaluated as
//! well, but only reported.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{format_rational, to_f64, Rational};
use crate::rodrigues::{level_params, rodrigues_general, WeightSpec};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexJacobiParams {
    pub gamma: Complex64,
    pub delta: Complex64,
    pub conjugate_pair: bool,
}

impl ComplexJacobiParams {
    pub fn new(gamma: Complex64, delta: Complex64) -> Self {
        Self {
            gamma,
            delta,
            conjugate_pair: gamma == delta.conj(),
        }
    }

    pub fn real(gamma: f64, delta: f64) -> Self {
        Self::new(gamma.into(), delta.into())
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.delta, self.gamma)
    }

    fn shifted(&self, k: f64) -> Self {
        Self::new(self.gamma + k, self.delta + k)
    }

    /// `beta = (gamma + delta + 2)/2`.
    pub fn beta(&self) -> Complex64 {
        (self.gamma + self.delta + 2.0) / 2.0
    }

    /// `alpha = i(gamma - delta)`.
    pub fn alpha(&self) -> Complex64 {
        I * (self.gamma - self.delta)
    }
}

/// `(beta - 1 - i alpha/2, beta - 1 + i alpha/2)`.
pub fn cplx_params(w: &WeightSpec) -> ComplexJacobiParams {
    let beta = to_f64(&w.beta);
    let alpha = to_f64(&w.alpha);
    let re = beta - 1.0;
    ComplexJacobiParams {
        gamma: Complex64::new(re, -alpha / 2.0),
        delta: Complex64::new(re, alpha / 2.0),
        conjugate_pair: true,
    }
}

const DEGENERATE: f64 = 1e-13;

/// `P_m^(gamma,delta)(y)` by the three-term recurrence.
pub fn jacobi_eval(params: &ComplexJacobiParams, m: u32, y: Complex64) -> Result<Complex64> {
    let (g, d) = (params.gamma, params.delta);
    let p0 = Complex64::new(1.0, 0.0);
    if m == 0 {
        return Ok(p0);
    }
    let p1 = (g - d) / 2.0 + (g + d + 2.0) * y / 2.0;
    let (mut prev, mut cur) = (p0, p1);
    let s = g + d;
    for k in 2..=m {
        let k = k as f64;
        let c = 2.0 * k + s;
        let den = 2.0 * k * (k + s) * (c - 2.0);
        if den.norm() < DEGENERATE {
            return Err(Error::DegenerateParameters(format!(
                "recurrence denominator vanishes at degree {k} for gamma={g}, delta={d}"
            )));
        }
        let a1 = (c - 1.0) * (c * (c - 2.0) * y + g * g - d * d);
        let a2 = 2.0 * (k + g - 1.0) * (k + d - 1.0) * c;
        let next = (a1 * cur - a2 * prev) / den;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `k`-th derivative of `P_m` via
/// `d/dy P_m^(g,d) = (m + g + d + 1)/2 P_{m-1}^(g+1,d+1)`.
pub fn jacobi_derivative(
    params: &ComplexJacobiParams,
    m: u32,
    k: u32,
    y: Complex64,
) -> Result<Complex64> {
    if k > m {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let s = params.gamma + params.delta;
    let factor = (1..=k).fold(Complex64::new(1.0, 0.0), |acc, j| {
        acc * (m as f64 + s + j as f64) / 2.0
    });
    Ok(factor * jacobi_eval(&params.shifted(k as f64), m - k, y)?)
}

/// `Q(x) = P_m(sigma i x)` and its first two `x`-derivatives.
fn q_with_derivatives(
    params: &ComplexJacobiParams,
    m: u32,
    x: f64,
    sigma: f64,
) -> Result<(Complex64, Complex64, Complex64)> {
    let y = I * sigma * x;
    let q = jacobi_eval(params, m, y)?;
    let dq = I * sigma * jacobi_derivative(params, m, 1, y)?;
    let d2q = -jacobi_derivative(params, m, 2, y)?;
    Ok((q, dq, d2q))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeResidualReport {
    /// Against the complexified equation in the form
    /// `(1+x^2)Q'' + i(gamma - delta - i(gamma+delta+2)x)Q' + m(m+gamma+delta+1)Q`.
    pub max_abs_residual_quoted_form: f64,
    /// Against the new equation `(1+x^2)Q'' + 2(alpha/2 + beta x)Q' - m(2 beta + m - 1)Q`.
    pub max_abs_residual_eq_newpol: f64,
    /// Against the equation obtained by substituting `y = i x` into the
    /// standard Jacobi equation, which `Q` satisfies identically.
    pub max_abs_residual_transformed: f64,
    /// Largest `|Q|`, `|Q'|`, `|Q''|` seen, for judging the residuals.
    pub scale: f64,
}

pub fn complexified_ode_residual(
    params: &ComplexJacobiParams,
    m: u32,
    probe_points: &[f64],
) -> Result<OdeResidualReport> {
    let (g, d) = (params.gamma, params.delta);
    let mf = m as f64;
    let jacobi_lambda = mf * (mf + g + d + 1.0);
    let beta = params.beta();
    let alpha = params.alpha();
    let newpol_lambda = -mf * (2.0 * beta + mf - 1.0);

    let mut report = OdeResidualReport {
        max_abs_residual_quoted_form: 0.0,
        max_abs_residual_eq_newpol: 0.0,
        max_abs_residual_transformed: 0.0,
        scale: 0.0,
    };
    for &x in probe_points {
        let (q, dq, d2q) = q_with_derivatives(params, m, x, 1.0)?;
        let s = 1.0 + x * x;
        let quoted = s * d2q + I * (g - d - I * (g + d + 2.0) * x) * dq + jacobi_lambda * q;
        let newpol = s * d2q + 2.0 * (alpha / 2.0 + beta * x) * dq + newpol_lambda * q;
        let transformed = s * d2q + (I * (d - g) + (g + d + 2.0) * x) * dq - jacobi_lambda * q;
        report.max_abs_residual_quoted_form =
            report.max_abs_residual_quoted_form.max(quoted.norm());
        report.max_abs_residual_eq_newpol = report.max_abs_residual_eq_newpol.max(newpol.norm());
        report.max_abs_residual_transformed =
            report.max_abs_residual_transformed.max(transformed.norm());
        report.scale = report.scale.max(q.norm()).max(dq.norm()).max(d2q.norm());
    }
    Ok(report)
}

/// Least-squares constant `c` minimising `sum |target - c basis|^2`, and the
/// relative residual `||target - c basis|| / ||target||`.
pub fn fit_constant(target: &[Complex64], basis: &[Complex64]) -> (Complex64, f64) {
    let num: Complex64 = basis.iter().zip(target).map(|(p, t)| p.conj() * t).sum();
    let den: f64 = basis.iter().map(|p| p.norm_sqr()).sum();
    let c = if den > 0.0 {
        num / den
    } else {
        Complex64::new(0.0, 0.0)
    };
    let res: f64 = basis
        .iter()
        .zip(target)
        .map(|(p, t)| (t - c * p).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let norm: f64 = target.iter().map(|t| t.norm_sqr()).sum::<f64>().sqrt();
    let rel = if norm > 0.0 { res / norm } else { 0.0 };
    (c, rel)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstantJson {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeReport {
    pub n: u32,
    pub a: String,
    pub b: String,
    pub sigma: i8,
    pub constant: ConstantJson,
    pub relative_residual: f64,
    /// Relative residual of the losing argument sign.
    pub other_sigma_residual: f64,
    pub quoted_form_residual: f64,
    pub newpol_residual: f64,
    pub transformed_residual: f64,
    /// `|gamma + delta + 2 - 2 beta|`.
    pub identity_sum_error: f64,
    /// `|i(gamma - delta) - alpha|`.
    pub identity_difference_error: f64,
}

/// Fits `K_n C_n(x) ~ c P_{n-1}^(gamma,delta)(i sigma x)` for both signs and
/// keeps the better one.
pub fn proportionality_probe(
    n: u32,
    a: &Rational,
    b: &Rational,
    sample_xs: &[f64],
) -> Result<ProbeReport> {
    let level = level_params(n, a, b)?;
    let w = level.weight();
    let poly = rodrigues_general(&w, level.m());
    let params = cplx_params(&w);
    let m = level.m();

    let target: Vec<Complex64> = sample_xs.iter().map(|&x| poly.eval_f64(x).into()).collect();
    let mut fits = Vec::with_capacity(2);
    for sigma in [1.0, -1.0] {
        let basis = sample_xs
            .iter()
            .map(|&x| jacobi_eval(&params, m, I * sigma * x))
            .collect::<Result<Vec<_>>>()?;
        let (c, rel) = fit_constant(&target, &basis);
        fits.push((sigma, c, rel));
    }
    // ties go to sigma = +1
    let (best, other) = if fits[1].2 < fits[0].2 {
        (fits[1], fits[0])
    } else {
        (fits[0], fits[1])
    };
    let ode = complexified_ode_residual(&params, m, sample_xs)?;
    let beta = to_f64(&w.beta);
    let alpha = to_f64(&w.alpha);
    Ok(ProbeReport {
        n,
        a: format_rational(a),
        b: format_rational(b),
        sigma: best.0 as i8,
        constant: ConstantJson {
            re: best.1.re,
            im: best.1.im,
        },
        relative_residual: best.2,
        other_sigma_residual: other.2,
        quoted_form_residual: ode.max_abs_residual_quoted_form,
        newpol_residual: ode.max_abs_residual_eq_newpol,
        transformed_residual: ode.max_abs_residual_transformed,
        identity_sum_error: (params.gamma + params.delta + 2.0 - 2.0 * beta).norm(),
        identity_difference_error: (I * (params.gamma - params.delta) - alpha).norm(),
    })
}

/// Default sample abscissae for the probe.
pub fn default_samples() -> Vec<f64> {
    (0..25).map(|i| -3.0 + 0.25 * i as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn params_examples() {
        let p = cplx_params(&WeightSpec::new(int(0), int(0)));
        assert_eq!((p.gamma, p.delta), (c(-1.0, 0.0), c(-1.0, 0.0)));
        let p = cplx_params(&WeightSpec::new(int(-1), int(1)));
        assert_eq!(p.gamma, c(-2.0, -0.5));
        assert_eq!(p.delta, c(-2.0, 0.5));
        assert!(p.conjugate_pair);
        assert_eq!(p.beta(), c(-1.0, 0.0));
        assert_eq!(p.alpha(), c(1.0, 0.0));
    }

    #[test]
    fn eval_examples() {
        let p = ComplexJacobiParams::new(c(0.3, 1.0), c(-2.0, 0.1));
        assert_eq!(jacobi_eval(&p, 0, c(0.7, -0.2)).unwrap(), c(1.0, 0.0));
        let legendre = ComplexJacobiParams::real(0.0, 0.0);
        let y = c(0.37, 0.0);
        assert!((jacobi_eval(&legendre, 1, y).unwrap() - y).norm() < 1e-16);

        // P_1(ix) at w = (-1, 1): -i(x + 1/2)
        let p = cplx_params(&WeightSpec::new(int(-1), int(1)));
        for x in [-1.0, 0.0, 0.5, 2.0] {
            let v = jacobi_eval(&p, 1, I * x).unwrap();
            assert!((v - (-I) * (x + 0.5)).norm() < 1e-15);
        }
    }

    #[test]
    fn degenerate_recurrence() {
        let p = cplx_params(&WeightSpec::new(int(0), int(0)));
        assert!(jacobi_eval(&p, 1, c(0.4, 0.0)).is_ok());
        assert!(matches!(
            jacobi_eval(&p, 2, c(0.4, 0.0)),
            Err(Error::DegenerateParameters(_))
        ));
    }

    #[test]
    fn ode_residual_m1_hand_check() {
        let p = cplx_params(&WeightSpec::new(int(-1), int(1)));
        let xs = [-2.0, -0.5, 0.0, 1.0, 3.0];
        let r = complexified_ode_residual(&p, 1, &xs).unwrap();
        assert!(r.max_abs_residual_transformed < 1e-12);
        // the quoted form leaves 4ix behind, the new equation leaves -2i
        assert!((r.max_abs_residual_quoted_form - 12.0).abs() < 1e-12);
        assert!(r.max_abs_residual_eq_newpol > 0.1);

        let r0 = complexified_ode_residual(&p, 0, &xs).unwrap();
        assert_eq!(r0.max_abs_residual_quoted_form, 0.0);
        assert_eq!(r0.max_abs_residual_eq_newpol, 0.0);
        assert_eq!(r0.max_abs_residual_transformed, 0.0);
    }

    #[test]
    fn probe_ground_state_is_exact() {
        let r = proportionality_probe(1, &int(0), &int(1), &default_samples()).unwrap();
        assert_eq!(r.relative_residual, 0.0);
        assert_eq!(r.other_sigma_residual, 0.0);
        assert_eq!((r.constant.re, r.constant.im), (1.0, 0.0));
    }

    #[test]
    fn probe_second_level() {
        // -2x + 1 = c (-i)(sigma x + 1/2) holds exactly for sigma = -1, c = 2i.
        let r = proportionality_probe(2, &int(0), &int(1), &default_samples()).unwrap();
        assert_eq!(r.sigma, -1);
        assert!(r.relative_residual < 1e-15);
        assert!(r.other_sigma_residual > 0.1);
        assert!((r.constant.re).abs() < 1e-15 && (r.constant.im - 2.0).abs() < 1e-14);
    }

    #[test]
    fn fit_is_scale_invariant() {
        let target: Vec<Complex64> = [1.0, -2.0, 0.5, 3.0].iter().map(|&v| c(v, 0.0)).collect();
        let basis = vec![c(0.3, 1.0), c(-1.0, 0.2), c(0.0, 0.7), c(2.0, -1.0)];
        let (_, r1) = fit_constant(&target, &basis);
        let scaled: Vec<Complex64> = target.iter().map(|t| t * -7.5).collect();
        let (_, r2) = fit_constant(&scaled, &basis);
        assert!((r1 - r2).abs() < 1e-14);
    }

    #[test]
    fn report_json_shape() {
        let r = proportionality_probe(3, &rat(1, 4), &int(1), &default_samples()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "n",
            "a",
            "b",
            "sigma",
            "relative_residual",
            "quoted_form_residual",
            "newpol_residual",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v["constant"]["re"].is_number() && v["constant"]["im"].is_number());
        assert_eq!(v["a"], "1/4");
    }
}
