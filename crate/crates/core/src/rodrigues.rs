//! Rodrigues construction of the polynomials `K_n C_n(x)` and the exact
//! Sturm-Liouville checks around them.
//!
//! With `s(x) = 1 + x^2` and `w(x) = (1+x^2)^(beta-1) exp(-alpha arccot x)`,
//! the logarithmic derivative of the weight is the rational function
//!
//! ```text
//! w'(x) / w(x) = (2(beta-1)x + alpha) / (1 + x^2)
//! ```
//!
//! so `d^j/dx^j (w s^k) = w s^(k-j) P_j(x)` for polynomials obeying
//!
//! ```text
//! P_0 = 1,   P_{j+1} = (2(beta-1+k-j)x + alpha) P_j + (1+x^2) P_j'
//! ```
//!
//! and every step stays inside exact polynomial arithmetic.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::exactalg::{int, rat, serde_rational, to_f64, DensePolynomial, Rational};

/// `s(x) = 1 + x^2`.
pub fn s_poly() -> DensePolynomial {
    DensePolynomial::from_ratios(&[(1, 1), (0, 1), (1, 1)])
}

/// Parameters `(beta, alpha)` of the weight `w^(beta,alpha)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSpec {
    #[serde(with = "serde_rational")]
    pub beta: Rational,
    #[serde(with = "serde_rational")]
    pub alpha: Rational,
}

impl WeightSpec {
    pub fn new(beta: Rational, alpha: Rational) -> Self {
        Self { beta, alpha }
    }

    /// Numerator and denominator of `w'/w`: `(2(beta-1)x + alpha, 1 + x^2)`.
    pub fn log_derivative(&self) -> (DensePolynomial, DensePolynomial) {
        let num = DensePolynomial::new(vec![self.alpha.clone(), int(2) * (&self.beta - int(1))]);
        (num, s_poly())
    }

    pub fn eval(&self, x: f64) -> f64 {
        weight_eval(self, x)
    }
}

/// Per-level symbols fixed by the three matching conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelParams {
    pub n: u32,
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub b: Rational,
    #[serde(with = "serde_rational")]
    pub beta_n: Rational,
    #[serde(with = "serde_rational")]
    pub alpha_n: Rational,
    #[serde(with = "serde_rational")]
    pub epsilon_n: Rational,
}

impl LevelParams {
    pub fn weight(&self) -> WeightSpec {
        WeightSpec::new(self.beta_n.clone(), self.alpha_n.clone())
    }

    /// Polynomial index `m = n - 1`.
    pub fn m(&self) -> u32 {
        self.n - 1
    }

    /// `n + a`, the exponent of `sin z` in the wave function.
    pub fn n_plus_a(&self) -> Rational {
        int(self.n as i64) + &self.a
    }

    /// `-alpha(1-beta) + 2b`; vanishes for a consistent level.
    pub fn first_condition(&self) -> Rational {
        -(&self.alpha_n * (int(1) - &self.beta_n)) + int(2) * &self.b
    }

    /// `(alpha/2)^2 - (1-beta)^2 + epsilon`; vanishes for a consistent level.
    pub fn second_condition(&self) -> Rational {
        let half = &self.alpha_n / int(2);
        let one_minus = int(1) - &self.beta_n;
        &half * &half - &one_minus * &one_minus + &self.epsilon_n
    }

    /// Constant term `-beta(1-beta) - a(a+1)` of the reduced polynomial equation.
    pub fn reduced_constant_term(&self) -> Rational {
        reduced_constant_term(&self.beta_n, &self.a)
    }

    /// `-m(2 beta + m - 1)` with `m = n - 1`.
    pub fn eigenvalue(&self) -> Rational {
        hypergeometric_eigenvalue(&self.beta_n, self.m())
    }
}

/// `-beta(1-beta) - a(a+1)`.
pub fn reduced_constant_term(beta: &Rational, a: &Rational) -> Rational {
    -(beta * (int(1) - beta)) - a * (a + int(1))
}

/// `-m(2 beta + m - 1)`, the constant coefficient of the new equation.
pub fn hypergeometric_eigenvalue(beta: &Rational, m: u32) -> Rational {
    let m = int(m as i64);
    -(&m * (int(2) * beta + &m - int(1)))
}

fn check_domain(n: u32, a: &Rational, b: &Rational) -> Result<()> {
    if n < 1 {
        return Err(domain(format!("level index must be >= 1, got {n}")));
    }
    if *a <= rat(-1, 2) {
        return Err(domain(format!("a must exceed -1/2, got {a}")));
    }
    if !b.is_positive() {
        return Err(domain(format!("b must be positive, got {b}")));
    }
    Ok(())
}

/// Solves the matching conditions for level `n`:
/// `beta_n = 1 - (n+a)`, `alpha_n = 2b/(n+a)`, `epsilon_n = (n+a)^2 - b^2/(n+a)^2`.
pub fn level_params(n: u32, a: &Rational, b: &Rational) -> Result<LevelParams> {
    check_domain(n, a, b)?;
    let na = int(n as i64) + a;
    if na.is_zero() {
        return Err(domain("n + a vanishes"));
    }
    let na2 = &na * &na;
    let level = LevelParams {
        n,
        a: a.clone(),
        b: b.clone(),
        beta_n: int(1) - &na,
        alpha_n: int(2) * b / &na,
        epsilon_n: &na2 - b * b / &na2,
    };
    assert!(level.first_condition().is_zero());
    assert!(level.second_condition().is_zero());
    assert_eq!(level.reduced_constant_term(), level.eigenvalue());
    Ok(level)
}

/// `(1/w) d^m/dx^m (w s^m)` for an arbitrary weight.
pub fn rodrigues_general(w: &WeightSpec, m: u32) -> DensePolynomial {
    let s = s_poly();
    let mut p = DensePolynomial::one();
    for j in 0..m {
        let remaining = int((m - j) as i64);
        let factor = DensePolynomial::new(vec![
            w.alpha.clone(),
            int(2) * (&w.beta - int(1) + remaining),
        ]);
        p = &(&factor * &p) + &(&s * &p.derivative());
    }
    p
}

/// `K_n C_n^(beta_n, alpha_n)(x)`: the Rodrigues derivative of order `n - 1`
/// without the `1/K_n` prefactor.
pub fn rodrigues_poly(n: u32, a: &Rational, b: &Rational) -> Result<DensePolynomial> {
    let level = level_params(n, a, b)?;
    Ok(rodrigues_general(&level.weight(), level.m()))
}

/// `(1+x^2) p'' + 2(alpha/2 + beta x) p' - m(2 beta + m - 1) p`.
pub fn hypergeometric_residual(p: &DensePolynomial, w: &WeightSpec, m: u32) -> DensePolynomial {
    let d1 = p.derivative();
    let d2 = d1.derivative();
    let drift = DensePolynomial::new(vec![w.alpha.clone(), int(2) * &w.beta]);
    let lambda = hypergeometric_eigenvalue(&w.beta, m);
    let lhs = &(&s_poly() * &d2) + &(&drift * &d1);
    &lhs + &p.scale(&lambda)
}

/// Both routes to the eigenvalue constant `lambda_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaConsistency {
    /// `K_1 F_1(x) = (1/w) d(s w)/dx`, linear in `x`.
    pub k1_f1: DensePolynomial,
    /// `-m (K_1 F_1' + (m-1)/2 s'')`.
    pub from_first_polynomial: Rational,
    /// `-m(2 beta + m - 1)` as it appears in the new equation.
    pub from_equation: Rational,
}

impl LambdaConsistency {
    pub fn holds(&self) -> bool {
        self.from_first_polynomial == self.from_equation
    }
}

pub fn lambda_consistency(w: &WeightSpec, m: u32) -> LambdaConsistency {
    // (1/w)(s w)' = s' + s (w'/w), and s cancels the kernel's denominator.
    let s = s_poly();
    let (kernel_num, kernel_den) = w.log_derivative();
    debug_assert_eq!(kernel_den, s);
    let k1_f1 = &s.derivative() + &kernel_num;
    let slope = k1_f1.derivative().coeff(0);
    let s2 = s.derivative().derivative().coeff(0);
    let mm = int(m as i64);
    let from_first_polynomial = -(&mm * (slope + (&mm - int(1)) / int(2) * s2));
    LambdaConsistency {
        k1_f1,
        from_first_polynomial,
        from_equation: hypergeometric_eigenvalue(&w.beta, m),
    }
}

/// Inverse cotangent on the branch with range `(0, pi)`.
pub fn arccot(x: f64) -> f64 {
    f64::atan2(1.0, x)
}

/// `(1+x^2)^(beta-1) exp(-alpha arccot x)`.
pub fn weight_eval(w: &WeightSpec, x: f64) -> f64 {
    weight_eval_f64(to_f64(&w.beta), to_f64(&w.alpha), x)
}

pub fn weight_eval_f64(beta: f64, alpha: f64, x: f64) -> f64 {
    ((beta - 1.0) * (x * x).ln_1p() - alpha * arccot(x)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryLimit {
    Zero,
    Finite,
    Divergent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub limit_at_plus_inf: BoundaryLimit,
    pub limit_at_minus_inf: BoundaryLimit,
}

impl BoundaryReport {
    pub fn vanishes(&self) -> bool {
        self.limit_at_plus_inf == BoundaryLimit::Zero
            && self.limit_at_minus_inf == BoundaryLimit::Zero
    }
}

/// Classifies `lim w(x)s(x) = (1+x^2)^beta exp(-alpha arccot x)` at both
/// infinities. The exponential tends to `1` and `exp(-alpha pi)`, so only the
/// sign of `beta` matters.
pub fn boundary_product_report(w: &WeightSpec) -> BoundaryReport {
    let limit = if w.beta.is_negative() {
        BoundaryLimit::Zero
    } else if w.beta.is_zero() {
        BoundaryLimit::Finite
    } else {
        BoundaryLimit::Divergent
    };
    BoundaryReport {
        limit_at_plus_inf: limit,
        limit_at_minus_inf: limit,
    }
}

/// Leading coefficient of `rodrigues_poly(n, a, b)` predicted by the
/// recurrence: `prod_{j=0}^{n-2} -(2a + 2 + j)`.
pub fn predicted_leading_coefficient(n: u32, a: &Rational) -> Rational {
    (0..n.saturating_sub(1)).fold(Rational::one(), |acc, j| {
        acc * -(int(2) * a + int(2) + int(j as i64))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_rational;

    fn w(beta: (i64, i64), alpha: (i64, i64)) -> WeightSpec {
        WeightSpec::new(rat(beta.0, beta.1), rat(alpha.0, alpha.1))
    }

    #[test]
    fn level_params_examples() {
        let l = level_params(1, &int(0), &int(1)).unwrap();
        assert_eq!((l.beta_n, l.alpha_n, l.epsilon_n), (int(0), int(2), int(0)));

        let l = level_params(2, &int(0), &int(1)).unwrap();
        assert_eq!(
            (l.beta_n, l.alpha_n, l.epsilon_n),
            (int(-1), int(1), rat(15, 4))
        );

        let l = level_params(1, &rat(1, 4), &int(1)).unwrap();
        assert_eq!(l.beta_n, rat(-1, 4));
        assert_eq!(l.alpha_n, rat(8, 5));
        assert_eq!(l.epsilon_n, rat(369, 400));
    }

    #[test]
    fn level_params_domain() {
        assert!(level_params(0, &int(0), &int(1)).is_err());
        assert!(level_params(1, &rat(-1, 2), &int(1)).is_err());
        assert!(level_params(1, &int(0), &int(0)).is_err());
        assert!(level_params(1, &int(0), &int(-1)).is_err());
        assert!(level_params(1, &rat(-49, 100), &rat(1, 100)).is_ok());
    }

    #[test]
    fn rodrigues_examples() {
        for (a, b) in [
            (int(0), int(1)),
            (rat(1, 4), int(1)),
            (rat(7, 3), rat(1, 9)),
        ] {
            assert_eq!(rodrigues_poly(1, &a, &b).unwrap(), DensePolynomial::one());
        }
        assert_eq!(
            rodrigues_poly(2, &int(0), &int(1)).unwrap(),
            DensePolynomial::from_ratios(&[(1, 1), (-2, 1)])
        );
        assert_eq!(
            rodrigues_poly(3, &int(0), &int(1)).unwrap(),
            DensePolynomial::from_ratios(&[(-14, 9), (-4, 1), (6, 1)])
        );
    }

    #[test]
    fn kernel_matches_weight_log_derivative() {
        let ws = [w((-1, 1), (1, 1)), w((3, 2), (-2, 3)), w((-5, 4), (8, 5))];
        for spec in &ws {
            let (num, den) = spec.log_derivative();
            for &x in &[-2.5, -0.3, 0.0, 0.7, 3.1] {
                let h = 1e-5;
                let fd = (spec.eval(x + h).ln() - spec.eval(x - h).ln()) / (2.0 * h);
                let kernel = num.eval_f64(x) / den.eval_f64(x);
                assert!((fd - kernel).abs() < 1e-8, "{fd} vs {kernel}");
            }
        }
    }

    #[test]
    fn residual_examples() {
        let p = rodrigues_poly(2, &int(0), &int(1)).unwrap();
        assert!(hypergeometric_residual(&p, &w((-1, 1), (1, 1)), 1).is_zero());
        assert!(hypergeometric_residual(&DensePolynomial::one(), &w((3, 7), (-2, 1)), 0).is_zero());
        assert_eq!(
            hypergeometric_residual(&DensePolynomial::x(), &w((0, 1), (0, 1)), 2),
            DensePolynomial::from_ratios(&[(0, 1), (-2, 1)])
        );
    }

    #[test]
    fn general_rodrigues_solves_general_equation() {
        for spec in [w((3, 2), (-2, 3)), w((5, 1), (7, 2)), w((-9, 4), (1, 3))] {
            for m in 0..8 {
                let p = rodrigues_general(&spec, m);
                assert!(hypergeometric_residual(&p, &spec, m).is_zero());
            }
        }
    }

    #[test]
    fn lambda_examples() {
        let l = lambda_consistency(&w((-1, 1), (1, 1)), 1);
        assert!(l.holds());
        assert_eq!(l.from_equation, int(2));
        assert_eq!(l.k1_f1, DensePolynomial::from_ratios(&[(1, 1), (-2, 1)]));

        let l = lambda_consistency(&w((2, 3), (5, 1)), 0);
        assert_eq!(
            (l.from_first_polynomial.clone(), l.from_equation.clone()),
            (int(0), int(0))
        );

        let l = lambda_consistency(&w((1, 1), (0, 1)), 3);
        assert!(l.holds());
        assert_eq!(l.from_equation, int(-12));
    }

    #[test]
    fn weight_examples() {
        let spec = w((7, 3), (3, 2));
        assert!((spec.eval(0.0) - (-1.5 * std::f64::consts::FRAC_PI_2).exp()).abs() < 1e-15);
        for x in [-40.0, -1.0, 0.0, 0.3, 1e3] {
            assert!((w((1, 1), (0, 1)).eval(x) - 1.0).abs() < 1e-15);
        }
        let v = w((0, 1), (2, 1)).eval(1.0);
        assert!((v - 0.103_940).abs() < 1e-6, "{v}");
        assert!((v - 0.5 * (-std::f64::consts::FRAC_PI_2).exp()).abs() < 1e-15);
    }

    #[test]
    fn weight_continuous_across_origin() {
        let spec = w((-2, 1), (5, 2));
        let left = spec.eval(-1e-12);
        let right = spec.eval(1e-12);
        assert!((left - right).abs() < 1e-10 * left);
        // The principal branch jumps by pi here.
        let principal = |x: f64| (1.0 / x).atan();
        assert!((principal(-1e-12) - principal(1e-12)).abs() > 3.0);
        assert!((arccot(-1e-12) - arccot(1e-12)).abs() < 1e-11);
    }

    #[test]
    fn boundary_examples() {
        use BoundaryLimit::*;
        let r = boundary_product_report(&w((-1, 1), (1, 1)));
        assert_eq!((r.limit_at_plus_inf, r.limit_at_minus_inf), (Zero, Zero));
        let r = boundary_product_report(&w((0, 1), (1, 1)));
        assert_eq!(
            (r.limit_at_plus_inf, r.limit_at_minus_inf),
            (Finite, Finite)
        );
        let r = boundary_product_report(&w((1, 2), (0, 1)));
        assert_eq!(
            (r.limit_at_plus_inf, r.limit_at_minus_inf),
            (Divergent, Divergent)
        );
    }

    #[test]
    fn ground_state_boundary_corner() {
        // beta_1 = -a, so the product fails to vanish for a <= 0.
        let a = parse_rational("-1/4").unwrap();
        let l = level_params(1, &a, &int(1)).unwrap();
        assert_eq!(
            boundary_product_report(&l.weight()).limit_at_plus_inf,
            BoundaryLimit::Divergent
        );
        let l = level_params(1, &int(0), &int(1)).unwrap();
        assert_eq!(
            boundary_product_report(&l.weight()).limit_at_plus_inf,
            BoundaryLimit::Finite
        );
        let l = level_params(2, &int(0), &int(1)).unwrap();
        assert!(boundary_product_report(&l.weight()).vanishes());
    }

    #[test]
    fn leading_coefficient_n5() {
        for a in [int(0), rat(1, 4), rat(3, 2)] {
            let p = rodrigues_poly(5, &a, &int(1)).unwrap();
            let two = int(2);
            let expected = int(4)
                * (int(1) + &a)
                * (&two * &a + int(3))
                * (int(2) + &a)
                * (&two * &a + int(5));
            assert_eq!(p.leading_coefficient().unwrap(), &expected);
            assert_eq!(predicted_leading_coefficient(5, &a), expected);
        }
    }

    #[test]
    fn a_reflection_leaves_centrifugal_coefficient() {
        for a in [rat(1, 4), rat(3, 2), rat(-1, 3), int(5)] {
            let reflected = int(-1) - &a;
            assert_eq!(&a * (&a + int(1)), &reflected * (&reflected + int(1)));
            let beta = rat(-7, 5);
            assert_eq!(
                reduced_constant_term(&beta, &a),
                reduced_constant_term(&beta, &reflected)
            );
        }
    }

    #[test]
    fn level_serializes_as_fraction_strings() {
        let l = level_params(2, &rat(1, 4), &int(1)).unwrap();
        let v = serde_json::to_value(&l).unwrap();
        assert_eq!(v["beta_n"], "-5/4");
        assert_eq!(v["alpha_n"], "8/9");
        assert_eq!(v["a"], "1/4");
    }
}
