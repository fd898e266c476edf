//! The potential, its two Taylor-regime surrogates, and the energy ladder.
//!
//! Everything here is plain `f64`; the exact energies live in
//! [`crate::rodrigues::LevelParams`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    pub a: f64,
    pub b: f64,
}

impl PotentialParams {
    /// Validated constructor: `a > -1/2`, `b > 0`.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > -0.5) {
            return Err(domain(format!("a must exceed -1/2, got {a}")));
        }
        if !(b > 0.0) {
            return Err(domain(format!("b must be positive, got {b}")));
        }
        Ok(Self { a, b })
    }

    /// Unchecked constructor, for degenerate probes such as `a = b = 0`.
    pub const fn raw(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    /// Centrifugal-like coefficient `a(a+1)`.
    pub fn centrifugal(&self) -> f64 {
        self.a * (self.a + 1.0)
    }
}

/// Energy unit `hbar^2 / (2 m d^2)` together with the length scale `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitScale {
    pub hbar2_over_2md2: f64,
    pub d: f64,
}

impl UnitScale {
    pub fn new(hbar2_over_2md2: f64, d: f64) -> Result<Self> {
        if !(hbar2_over_2md2 > 0.0) || !(d > 0.0) {
            return Err(domain("unit scale components must be positive"));
        }
        Ok(Self { hbar2_over_2md2, d })
    }

    /// `y = z d`.
    pub fn to_length(&self, z: f64) -> f64 {
        z * self.d
    }

    /// `V(y) = v(y/d) hbar^2/(2 m d^2)`.
    pub fn potential_at(&self, p: &PotentialParams, y: f64) -> Result<f64> {
        Ok(potential(p, y / self.d)? * self.hbar2_over_2md2)
    }
}

/// `v(z) = -2b cot z + a(a+1) csc^2 z` on `(0, pi)`.
pub fn potential(p: &PotentialParams, z: f64) -> Result<f64> {
    if !(z > 0.0 && z < PI) {
        return Err(domain(format!("z = {z} outside (0, pi)")));
    }
    let (s, c) = z.sin_cos();
    Ok(-2.0 * p.b * c / s + p.centrifugal() / (s * s))
}

/// Small-z surrogate `-2b/z + a(a+1)/z^2`.
pub fn coulomb_approx(p: &PotentialParams, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(domain(format!("z = {z} must be positive")));
    }
    Ok(-2.0 * p.b / z + p.centrifugal() / (z * z))
}

/// Intermediate-region surrogate `2b z/3 + a(a+1) z^2/36`.
pub fn linear_ho_approx(p: &PotentialParams, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(domain(format!("z = {z} must be positive")));
    }
    Ok(2.0 * p.b / 3.0 * z + p.centrifugal() / 36.0 * z * z)
}

/// `epsilon_n = (n+a)^2 - b^2/(n+a)^2`.
pub fn energy(n: u32, p: &PotentialParams) -> Result<f64> {
    if n < 1 {
        return Err(domain("level index must be >= 1"));
    }
    let na = n as f64 + p.a;
    let na2 = na * na;
    Ok(na2 - p.b * p.b / na2)
}

/// `E_n = epsilon_n hbar^2/(2 m d^2)`.
pub fn dimensionful_energy(n: u32, p: &PotentialParams, u: &UnitScale) -> Result<f64> {
    Ok(energy(n, p)? * u.hbar2_over_2md2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Coulomb,
    LinearHo,
}

impl Regime {
    /// Presentation defaults for the comparison interval.
    pub fn default_interval(self) -> (f64, f64) {
        match self {
            Regime::Coulomb => (0.0, 0.3),
            Regime::LinearHo => (0.8, 2.2),
        }
    }

    pub fn approx(self, p: &PotentialParams, z: f64) -> Result<f64> {
        match self {
            Regime::Coulomb => coulomb_approx(p, z),
            Regime::LinearHo => linear_ho_approx(p, z),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaylorReport {
    pub max_rel_err: f64,
    pub interval: (f64, f64),
}

pub const TAYLOR_GRID_POINTS: usize = 200;

/// Maximal relative error `|v - approx| / |v|` over a uniform grid on the
/// interval. An open left endpoint at `0` is nudged inward. A one-point
/// interval samples only that point. Points where both `v` and the surrogate
/// vanish contribute zero.
pub fn taylor_validation(
    p: &PotentialParams,
    regime: Regime,
    interval: Option<(f64, f64)>,
) -> Result<TaylorReport> {
    let (lo, hi) = interval.unwrap_or_else(|| regime.default_interval());
    if !(lo <= hi) || hi >= PI || hi <= 0.0 {
        return Err(domain(format!("bad interval ({lo}, {hi})")));
    }
    let grid: Vec<f64> = if lo == hi {
        vec![lo]
    } else {
        let lo_eff = if lo <= 0.0 { hi * 1e-3 } else { lo };
        (0..TAYLOR_GRID_POINTS)
            .map(|i| lo_eff + (hi - lo_eff) * i as f64 / (TAYLOR_GRID_POINTS - 1) as f64)
            .collect()
    };
    let mut max_rel_err: f64 = 0.0;
    for z in grid {
        let v = potential(p, z)?;
        let s = regime.approx(p, z)?;
        let diff = (v - s).abs();
        let rel = if diff == 0.0 { 0.0 } else { diff / v.abs() };
        max_rel_err = max_rel_err.max(rel);
    }
    Ok(TaylorReport {
        max_rel_err,
        interval: (lo, hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    const FIG: PotentialParams = PotentialParams::raw(0.25, 1.0);

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn potential_examples() {
        assert!(close(
            potential(&PotentialParams::raw(0.0, 1.0), FRAC_PI_2).unwrap(),
            0.0,
            1e-15
        ));
        assert!(close(
            potential(&FIG, FRAC_PI_2).unwrap(),
            5.0 / 16.0,
            1e-15
        ));
        assert!(close(
            potential(&FIG, FRAC_PI_4).unwrap(),
            -11.0 / 8.0,
            1e-14
        ));
        assert!(potential(&FIG, 0.0).is_err());
        assert!(potential(&FIG, PI).is_err());
        assert!(potential(&FIG, -1.0).is_err());
    }

    #[test]
    fn approximant_examples() {
        assert_eq!(
            coulomb_approx(&PotentialParams::raw(0.0, 1.0), 1.0).unwrap(),
            -2.0
        );
        assert!(close(
            coulomb_approx(&FIG, 0.5).unwrap(),
            -11.0 / 4.0,
            1e-15
        ));
        assert_eq!(
            coulomb_approx(&PotentialParams::raw(0.0, 0.0), 0.7).unwrap(),
            0.0
        );
        assert!(coulomb_approx(&FIG, 0.0).is_err());

        assert!(close(
            linear_ho_approx(&PotentialParams::raw(0.0, 1.5), 1.0).unwrap(),
            1.0,
            1e-15
        ));
        assert!(close(
            linear_ho_approx(&FIG, 3.0).unwrap(),
            2.0 + 5.0 / 64.0,
            1e-15
        ));
        assert_eq!(
            linear_ho_approx(&PotentialParams::raw(0.0, 0.0), 2.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn energy_examples() {
        let p = PotentialParams::raw(0.0, 1.0);
        assert_eq!(energy(1, &p).unwrap(), 0.0);
        assert_eq!(energy(2, &p).unwrap(), 3.75);
        assert!(close(
            energy(3, &FIG).unwrap(),
            169.0 / 16.0 - 16.0 / 169.0,
            1e-15
        ));
        assert!(energy(0, &p).is_err());
    }

    #[test]
    fn dimensionful_examples() {
        let p = PotentialParams::raw(0.0, 1.0);
        let u2 = UnitScale::new(2.0, 0.5).unwrap();
        assert_eq!(dimensionful_energy(1, &p, &u2).unwrap(), 0.0);
        assert_eq!(dimensionful_energy(2, &p, &u2).unwrap(), 7.5);
        let u1 = UnitScale::new(1.0, 1.0).unwrap();
        assert_eq!(
            dimensionful_energy(5, &FIG, &u1).unwrap(),
            energy(5, &FIG).unwrap()
        );
        assert!(UnitScale::new(0.0, 1.0).is_err());
        assert_eq!(u2.to_length(2.0), 1.0);
        assert!(close(
            u2.potential_at(&FIG, 0.25 * PI).unwrap(),
            2.0 * 5.0 / 16.0,
            1e-14
        ));
    }

    #[test]
    fn params_validation() {
        assert!(PotentialParams::new(-0.5, 1.0).is_err());
        assert!(PotentialParams::new(0.0, 0.0).is_err());
        assert!(PotentialParams::new(f64::NAN, 1.0).is_err());
        assert!(PotentialParams::new(-0.49, 0.1).is_ok());
    }

    #[test]
    fn taylor_examples() {
        // worst at z = 0.1, where v - approx ~ 2bz/3 + a(a+1)/3
        let r = taylor_validation(&FIG, Regime::Coulomb, Some((0.01, 0.1))).unwrap();
        assert!(
            (r.max_rel_err - 0.014_979_878).abs() < 1e-8,
            "{}",
            r.max_rel_err
        );
        let r = taylor_validation(&FIG, Regime::Coulomb, Some((0.01, 0.06))).unwrap();
        assert!(r.max_rel_err < 0.01, "{}", r.max_rel_err);

        let z0 = 1.3;
        for regime in [Regime::Coulomb, Regime::LinearHo] {
            let r = taylor_validation(&FIG, regime, Some((z0, z0))).unwrap();
            let v = potential(&FIG, z0).unwrap();
            let expected = (v - regime.approx(&FIG, z0).unwrap()).abs() / v.abs();
            assert_eq!(r.max_rel_err, expected);
        }

        let zero = PotentialParams::raw(0.0, 0.0);
        for regime in [Regime::Coulomb, Regime::LinearHo] {
            assert_eq!(
                taylor_validation(&zero, regime, None).unwrap().max_rel_err,
                0.0
            );
        }
    }

    #[test]
    fn endpoint_divergence() {
        assert!(potential(&FIG, 1e-6).unwrap() > 1e6);
        assert!(potential(&FIG, PI - 1e-6).unwrap() > 1e6);
    }

    #[test]
    fn coulomb_singular_parts_cancel() {
        for p in [FIG, PotentialParams::raw(1.5, 3.0)] {
            let g = |z: f64| z * z * (potential(&p, z).unwrap() - coulomb_approx(&p, z).unwrap());
            let (g3, g4) = (g(1e-3).abs(), g(1e-4).abs());
            assert!(g4 < g3, "{g3} {g4}");
            assert!(g3 < 1e-2);
        }
    }

    #[test]
    fn square_well_ladder_limit() {
        let p = PotentialParams::raw(1e-8, 1e-8);
        for n in 1..=10 {
            assert!((energy(n, &p).unwrap() - (n * n) as f64).abs() < 1e-6);
        }
    }
}
