//! Casimir free energy and pressure between two parallel ideal-metal plates
//! at nonzero temperature.
//!
//! The production path sums the closed thermal series
//!
//! ```text
//! F(z, T) = -(k_B T / 4π z²) · B(τ),
//! B(τ)    = ζ(3)/2 + Σ_{n≥1} e^{-τn} / (n² (1 - e^{-τn})) · (1/n + τ / (1 - e^{-τn}))
//! τ       = 4π z k_B T / (ħ c)
//! ```
//!
//! and an independent brute-force route sums the Matsubara frequencies with
//! the wave-vector integral done numerically ([`free_energy_pp_oracle`]).
//! All quantities are SI.

use thiserror::Error;

use crate::constants::{SI, ZETA_3};
use crate::quadrature::{Integrator, QuadratureError};

/// Smallest τ accepted by the closed series. The term count grows like 1/τ.
pub const TAU_MIN: f64 = 1e-3;

/// A series term below this fraction of the running bracket ends the sum.
pub const SERIES_REL_CUTOFF: f64 = 1e-12;

/// Hard cap on closed-series terms.
pub const SERIES_MAX_TERMS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhysicsError {
    #[error("separation must be positive and finite, got {0:e} m")]
    InvalidSeparation(f64),
    #[error("temperature must be non-negative and finite, got {0} K")]
    InvalidTemperature(f64),
    #[error(
        "tau = {tau:e} is below {tau_min:e}: the thermal series converges too slowly here; \
         use the zero-temperature asymptote or the Matsubara oracle"
    )]
    SlowConvergence { tau: f64, tau_min: f64 },
    #[error("thermal series did not reach the cutoff within {terms} terms at tau = {tau:e}")]
    SeriesCapExceeded { tau: f64, terms: usize },
    #[error(
        "Matsubara sum not converged within l_max = {l_max} (tail bound {tail_bound:e}, \
         partial value {:e} J/m^2)", .partial.value
    )]
    OracleNotConverged {
        partial: FreeEnergyAreal,
        tail_bound: f64,
        l_max: usize,
    },
    #[error("oracle temperature must be positive, got {0} K")]
    OracleNeedsTemperature(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// A validated (separation, temperature) evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPoint {
    separation: f64,
    temperature: f64,
    tau: f64,
}

impl ThermalPoint {
    pub fn new(separation: f64, temperature: f64) -> Result<Self, PhysicsError> {
        let tau = tau(separation, temperature)?;
        Ok(ThermalPoint {
            separation,
            temperature,
            tau,
        })
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// T_eff with k_B T_eff = ħc / (2z); τ = 2π T / T_eff.
    pub fn effective_temperature(&self) -> f64 {
        SI.hbar_c() / (2.0 * self.separation * SI.boltzmann)
    }
}

/// Free energy per unit area of two plates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEnergyAreal {
    /// J/m².
    pub value: f64,
    /// The dimensionless bracket B(τ); `None` on the zero-temperature path.
    pub bracket: Option<f64>,
    /// Series terms (or Matsubara frequencies) summed.
    pub terms_used: usize,
}

fn check_separation(z: f64) -> Result<(), PhysicsError> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(PhysicsError::InvalidSeparation(z))
    }
}

fn check_temperature(t: f64) -> Result<(), PhysicsError> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(PhysicsError::InvalidTemperature(t))
    }
}

/// τ = 4π z k_B T / (ħ c).
pub fn tau(z: f64, t: f64) -> Result<f64, PhysicsError> {
    check_separation(z)?;
    check_temperature(t)?;
    Ok(tau_unchecked(z, t))
}

fn tau_unchecked(z: f64, t: f64) -> f64 {
    4.0 * std::f64::consts::PI * z * SI.boltzmann * t / SI.hbar_c()
}

/// Checks that `(z, t)` is inside the domain of the closed series (or is the
/// T = 0 limit).
pub fn check_domain(z: f64, t: f64) -> Result<(), PhysicsError> {
    let tau = tau(z, t)?;
    if t > 0.0 && tau < TAU_MIN {
        return Err(PhysicsError::SlowConvergence {
            tau,
            tau_min: TAU_MIN,
        });
    }
    Ok(())
}

/// Zero-temperature ideal-metal free energy, -π²ħc / (720 z³).
pub fn zero_temperature_free_energy(z: f64) -> f64 {
    -std::f64::consts::PI.powi(2) * SI.hbar_c() / (720.0 * z.powi(3))
}

/// Zero-temperature ideal-metal pressure, -π²ħc / (240 z⁴).
pub fn zero_temperature_pressure(z: f64) -> f64 {
    -std::f64::consts::PI.powi(2) * SI.hbar_c() / (240.0 * z.powi(4))
}

struct SeriesSums {
    bracket: f64,
    // τ·B'(τ)
    tau_slope: f64,
    terms: usize,
}

/// Sums B(τ) and τ·dB/dτ together. With x = e^{-τn}, u = 1/(1-x) the n-th
/// term is x·u/n³ + τ·x·u²/n² and its τ-derivative is -τ·x·(1+x)·u³/n.
fn thermal_series(tau: f64) -> Result<SeriesSums, PhysicsError> {
    let mut bracket = ZETA_3 / 2.0;
    let mut tau_slope = 0.0;
    for n in 1..=SERIES_MAX_TERMS {
        let nf = n as f64;
        let x = (-tau * nf).exp();
        // 1 - e^{-τn} without cancellation at small τn
        let one_minus_x = -(-tau * nf).exp_m1();
        let u = 1.0 / one_minus_x;
        let term = x * u / (nf * nf) * (1.0 / nf + tau * u);
        bracket += term;
        tau_slope -= tau * tau * x * (1.0 + x) * u * u * u / nf;
        if term < SERIES_REL_CUTOFF * bracket {
            return Ok(SeriesSums {
                bracket,
                tau_slope,
                terms: n,
            });
        }
    }
    Err(PhysicsError::SeriesCapExceeded {
        tau,
        terms: SERIES_MAX_TERMS,
    })
}

/// The bracket B(τ) and the number of series terms summed.
pub fn thermal_bracket(tau: f64) -> Result<(f64, usize), PhysicsError> {
    if !tau.is_finite() || tau < TAU_MIN {
        return Err(PhysicsError::SlowConvergence {
            tau,
            tau_min: TAU_MIN,
        });
    }
    let sums = thermal_series(tau)?;
    Ok((sums.bracket, sums.terms))
}

/// Free energy per unit area of two ideal-metal plates a distance `z` apart
/// at temperature `t`.
///
/// `t = 0` takes the dedicated zero-temperature path. For `t > 0` the closed
/// thermal series is summed; τ below [`TAU_MIN`] is rejected.
pub fn free_energy_pp(z: f64, t: f64) -> Result<FreeEnergyAreal, PhysicsError> {
    check_domain(z, t)?;
    Ok(free_energy_unchecked(z, t))
}

/// Domain must already be validated by [`check_domain`].
pub(crate) fn free_energy_unchecked(z: f64, t: f64) -> FreeEnergyAreal {
    if t == 0.0 {
        return FreeEnergyAreal {
            value: zero_temperature_free_energy(z),
            bracket: None,
            terms_used: 0,
        };
    }
    let tau = tau_unchecked(z, t);
    // τ ≥ TAU_MIN terminates well inside the cap
    let sums = thermal_series(tau).expect("series converges for tau >= TAU_MIN");
    FreeEnergyAreal {
        value: -SI.boltzmann * t / (4.0 * std::f64::consts::PI * z * z) * sums.bracket,
        bracket: Some(sums.bracket),
        terms_used: sums.terms,
    }
}

/// Casimir pressure P = -∂F/∂z, negative for attraction.
///
/// Differentiating F = -(k_B T / 4π z²)·B(τ) with τ ∝ z gives
/// P = -(k_B T / 4π z³)·(2B - τB').
pub fn pressure_pp(z: f64, t: f64) -> Result<f64, PhysicsError> {
    check_domain(z, t)?;
    Ok(pressure_unchecked(z, t))
}

pub(crate) fn pressure_unchecked(z: f64, t: f64) -> f64 {
    if t == 0.0 {
        return zero_temperature_pressure(z);
    }
    let tau = tau_unchecked(z, t);
    let sums = thermal_series(tau).expect("series converges for tau >= TAU_MIN");
    -SI.boltzmann * t / (4.0 * std::f64::consts::PI * z.powi(3))
        * (2.0 * sums.bracket - sums.tau_slope)
}

/// Brute-force free energy: the Matsubara sum
///
/// ```text
/// F = (k_B T / 4π z²) Σ'_l ∫_{τl}^∞ y ln(1 - e^{-y}) dy
/// ```
///
/// with the logarithm left unexpanded and each integral done by adaptive
/// quadrature to relative accuracy `quad_tol`. The l = 0 term is halved.
/// The sum stops once a geometric bound on the remaining frequencies falls
/// below `quad_tol` of the running total; if that does not happen within
/// `l_max` frequencies the partial sum is returned inside the error.
pub fn free_energy_pp_oracle(
    z: f64,
    t: f64,
    l_max: usize,
    quad_tol: f64,
) -> Result<FreeEnergyAreal, PhysicsError> {
    check_separation(z)?;
    check_temperature(t)?;
    if t == 0.0 {
        return Err(PhysicsError::OracleNeedsTemperature(t));
    }
    let tau = tau_unchecked(z, t);
    let prefactor = SI.boltzmann * t / (4.0 * std::f64::consts::PI * z * z);
    let integrator = Integrator {
        rel_tol: quad_tol,
        abs_tol: 0.0,
        max_subdivisions: 2000,
    };

    let mut sum = 0.0;
    let mut l = 0usize;
    loop {
        let lower = tau * l as f64;
        let term = matsubara_integral(&integrator, lower)?;
        sum += if l == 0 { 0.5 * term } else { term };

        let tail = matsubara_tail_bound(tau, l + 1);
        let partial = FreeEnergyAreal {
            value: prefactor * sum,
            bracket: Some(-sum),
            terms_used: l + 1,
        };
        if tail <= quad_tol * sum.abs() {
            return Ok(partial);
        }
        if l >= l_max {
            return Err(PhysicsError::OracleNotConverged {
                partial,
                tail_bound: tail,
                l_max,
            });
        }
        l += 1;
    }
}

/// ∫_{lower}^∞ y ln(1 - e^{-y}) dy, truncated where e^{-y} is far below
/// double precision relative to the integral.
fn matsubara_integral(integrator: &Integrator, lower: f64) -> Result<f64, QuadratureError> {
    let integrand = |y: f64| {
        if y <= 0.0 {
            0.0
        } else {
            y * (-(-y).exp()).ln_1p()
        }
    };
    let offsets = [0.0, 0.25, 1.0, 3.0, 8.0, 20.0, 45.0, 80.0];
    let points: Vec<f64> = offsets.iter().map(|o| lower + o).collect();
    Ok(integrator.integrate_partitioned(integrand, &points)?.value)
}

/// Upper bound on Σ_{l ≥ m} |∫_{τl}^∞ y ln(1 - e^{-y}) dy|.
///
/// |ln(1 - e^{-y})| ≤ e^{-y}/(1 - e^{-y}), so each term is at most
/// (τl + 1) e^{-τl} / (1 - e^{-τm}); the remaining sums are geometric.
fn matsubara_tail_bound(tau: f64, m: usize) -> f64 {
    let x = (-tau).exp();
    let one_minus_x = -(-tau).exp_m1();
    let mf = m as f64;
    let xm = (-tau * mf).exp();
    let geometric = xm / one_minus_x;
    let weighted = xm * (mf - (mf - 1.0) * x) / (one_minus_x * one_minus_x);
    let denom = -(-tau * mf).exp_m1();
    (tau * weighted + geometric) / denom
}

#[cfg(test)]
mod tests {
    use super::*;

    const UM: f64 = 1e-6;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(UM, 0.0).unwrap(), 0.0);
        let t1 = tau(UM, 300.0).unwrap();
        // 4π·1e-6·1.380649e-23·300 / (1.054571817e-34·299792458)
        assert!((t1 - 1.646_332_447_197_895).abs() < 1e-12);
        assert_eq!(tau(2.0 * UM, 300.0).unwrap(), 2.0 * t1);
    }

    #[test]
    fn tau_rejects_bad_input() {
        assert!(matches!(
            tau(0.0, 300.0),
            Err(PhysicsError::InvalidSeparation(_))
        ));
        assert!(matches!(
            tau(-UM, 300.0),
            Err(PhysicsError::InvalidSeparation(_))
        ));
        assert!(matches!(
            tau(UM, -1.0),
            Err(PhysicsError::InvalidTemperature(_))
        ));
        assert!(matches!(
            tau(f64::NAN, 1.0),
            Err(PhysicsError::InvalidSeparation(_))
        ));
    }

    #[test]
    fn thermal_point_effective_temperature() {
        let p = ThermalPoint::new(1.5 * UM, 300.0).unwrap();
        let via_teff = 2.0 * std::f64::consts::PI * 300.0 / p.effective_temperature();
        assert!(rel(via_teff, p.tau()) < 1e-14);
    }

    #[test]
    fn free_energy_ratios_match_matsubara_oracle() {
        // frozen from a 30-digit evaluation of the Matsubara sum with the log unexpanded
        let f1 = free_energy_pp(UM, 300.0).unwrap().value;
        let f15 = free_energy_pp(1.5 * UM, 300.0).unwrap().value;
        let f2 = free_energy_pp(2.0 * UM, 300.0).unwrap().value;
        assert!((f15 / f1 - 0.312_280_998_712_6).abs() < 1e-10);
        assert!((f2 / f1 - 0.143_142_916_650_4).abs() < 1e-10);
    }

    #[test]
    fn high_temperature_bracket() {
        let (b, _) = thermal_bracket(10.0).unwrap();
        assert!(rel(b, ZETA_3 / 2.0) < 1e-3);
        assert!(b > ZETA_3 / 2.0);
    }

    #[test]
    fn slow_convergence_below_tau_min() {
        // τ = 1e-4 at 300 K means z ≈ 6e-11 m
        let z = 1e-4 / tau(1.0, 300.0).unwrap();
        match free_energy_pp(z, 300.0) {
            Err(PhysicsError::SlowConvergence { tau, tau_min }) => {
                assert!(tau < tau_min);
            }
            other => panic!("expected slow convergence, got {other:?}"),
        }
        assert!(pressure_pp(z, 300.0).is_err());
    }

    #[test]
    fn zero_temperature_path() {
        let f = free_energy_pp(UM, 0.0).unwrap();
        assert_eq!(f.bracket, None);
        assert_eq!(f.value, zero_temperature_free_energy(UM));
        assert_eq!(pressure_pp(UM, 0.0).unwrap(), zero_temperature_pressure(UM));
    }

    #[test]
    fn oracle_l0_term_is_half_zeta3() {
        match free_energy_pp_oracle(UM, 300.0, 0, 1e-12) {
            Err(PhysicsError::OracleNotConverged { partial, l_max, .. }) => {
                assert_eq!(l_max, 0);
                let expected =
                    -SI.boltzmann * 300.0 / (4.0 * std::f64::consts::PI * UM * UM) * ZETA_3 / 2.0;
                assert!(rel(partial.value, expected) < 1e-11);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn oracle_rejects_zero_temperature() {
        assert!(matches!(
            free_energy_pp_oracle(UM, 0.0, 10, 1e-10),
            Err(PhysicsError::OracleNeedsTemperature(_))
        ));
    }

    #[test]
    fn tail_bound_dominates_actual_tail() {
        let tau = 0.7;
        let integrator = Integrator::with_rel_tol(1e-13);
        let actual: f64 = (5..200)
            .map(|l| {
                matsubara_integral(&integrator, tau * l as f64)
                    .unwrap()
                    .abs()
            })
            .sum();
        let bound = matsubara_tail_bound(tau, 5);
        assert!(bound >= actual);
        assert!(bound < 10.0 * actual);
    }

    #[test]
    fn pressure_derivative_by_finite_difference_of_bracket() {
        for &tau in &[0.01, 0.5, 1.6, 7.0] {
            let h = 1e-5 * tau;
            let (bp, _) = thermal_bracket(tau + h).unwrap();
            let (bm, _) = thermal_bracket(tau - h).unwrap();
            let fd = tau * (bp - bm) / (2.0 * h);
            let exact = thermal_series(tau).unwrap().tau_slope;
            assert!(rel(exact, fd) < 1e-7, "tau {tau}: {exact} vs {fd}");
        }
    }
}
