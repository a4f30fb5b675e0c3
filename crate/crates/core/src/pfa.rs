//! Lens–plate Casimir forces in the proximity force approximation.
//!
//! [`force_general`] integrates the plate–plate pressure over the projection
//! of an arbitrary axisymmetric profile. The closed forms express the force
//! through the plate–plate free energy F_pp:
//!
//! ```text
//! perfect, full:        2πR F(a) − 2π(R−D) F(D+a) − 2π ∫_a^{D+a} F(z) dz
//! perfect, simplified:  2πR F(a)
//! bubble:               2π(R−R1) F(a+D1) + 2πR1 F(a)
//! pit:                  2π(R−R1) F(a) + 2πR1 F(a+D1)
//! ```
//!
//! Forces are signed: negative values attract.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::geometry::{GeometryError, LensProfile, LensSurface, ProfileKind};
use crate::plates::{check_domain, free_energy_unchecked, pressure_unchecked, PhysicsError};
use crate::quadrature::{geometric_breakpoints, Integrator, QuadratureError};

/// Default relative tolerance of the PFA quadratures.
pub const DEFAULT_QUAD_TOL: f64 = 1e-9;

/// The simplified formula is flagged once a/R reaches this value.
pub const SIMPLIFIED_MAX_SEPARATION_RATIO: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PfaError {
    #[error(transparent)]
    Physics(#[from] PhysicsError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("PFA quadrature failed: {0}")]
    Quadrature(#[from] QuadratureError),
    #[error("invalid {name}: {value:e}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("{method} formula does not apply to a {profile} profile")]
    ProfileMismatch {
        method: ForceMethod,
        profile: ProfileKind,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ForceMethod {
    /// Pressure integrated over the projected lens area.
    GeneralQuadrature,
    /// Perfect sphere, all three terms of the integrated-by-parts form.
    PerfectFull,
    /// Perfect sphere, leading term 2πR F(a).
    PerfectSimplified,
    Bubble,
    Pit,
}

impl ForceMethod {
    pub fn name(&self) -> &'static str {
        match self {
            ForceMethod::GeneralQuadrature => "quadrature",
            ForceMethod::PerfectFull => "full",
            ForceMethod::PerfectSimplified => "simplified",
            ForceMethod::Bubble => "bubble",
            ForceMethod::Pit => "pit",
        }
    }
}

impl fmt::Display for ForceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Attached when a formula is used outside its stated range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Applicability {
    /// a/R is not small enough for the simplified formula.
    SeparationNotSmall { ratio: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceResult {
    /// Signed force in newtons; negative is attraction.
    pub value: f64,
    pub method: ForceMethod,
    /// Closest separation a, m.
    pub separation: f64,
    /// Temperature, K.
    pub temperature: f64,
    pub warning: Option<Applicability>,
}

impl ForceResult {
    pub fn magnitude(&self) -> f64 {
        self.value.abs()
    }

    pub fn is_attractive(&self) -> bool {
        self.value < 0.0
    }
}

fn require(name: &'static str, value: f64, ok: bool) -> Result<(), PfaError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(PfaError::InvalidParameter { name, value })
    }
}

fn free_energy(z: f64, t: f64) -> f64 {
    free_energy_unchecked(z, t).value
}

fn result(value: f64, method: ForceMethod, a: f64, t: f64) -> ForceResult {
    ForceResult {
        value,
        method,
        separation: a,
        temperature: t,
        warning: None,
    }
}

/// Force on `profile` at closest separation `a` by integrating the
/// plate–plate pressure, F = 2π ∫ ρ P(z(ρ), T) dρ, over the lens projection.
pub fn force_general(
    profile: &LensProfile,
    a: f64,
    t: f64,
    quad_tol: f64,
) -> Result<ForceResult, PfaError> {
    check_domain(a, t)?;
    let value = integrate_over_profile(profile, a, quad_tol, |z| pressure_unchecked(z, t))?;
    Ok(result(value, ForceMethod::GeneralQuadrature, a, t))
}

/// 2π ∫ ρ K(z(ρ)) dρ for an arbitrary pressure kernel `K`.
///
/// The partition splits at the seam of an imperfection and refines
/// geometrically outward from the scale √(2Ra) over which the gap doubles.
pub fn integrate_over_profile<K>(
    profile: &LensProfile,
    a: f64,
    quad_tol: f64,
    kernel: K,
) -> Result<f64, PfaError>
where
    K: Fn(f64) -> f64,
{
    require("quadrature tolerance", quad_tol, quad_tol > 0.0)?;
    let surface = LensSurface::new(profile, a)?;
    let extent = surface.extent();
    let scale = (2.0 * profile.radius() * a).sqrt();

    let mut points = match surface.seam() {
        Some(seam) => {
            let mut p = geometric_breakpoints(0.0, seam, scale);
            p.pop();
            p.extend(geometric_breakpoints(seam, extent, scale));
            p
        }
        None => geometric_breakpoints(0.0, extent, scale),
    };
    points.dedup();

    let integrator = Integrator::with_rel_tol(quad_tol);
    let estimate = integrator
        .integrate_partitioned(|rho| rho * kernel(surface.height_unchecked(rho)), &points)?;
    Ok(2.0 * PI * estimate.value)
}

/// Perfect lens of radius `r` and thickness `d`, keeping all three terms.
pub fn force_perfect_full(a: f64, t: f64, r: f64, d: f64) -> Result<ForceResult, PfaError> {
    force_perfect_full_with_tol(a, t, r, d, DEFAULT_QUAD_TOL)
}

pub fn force_perfect_full_with_tol(
    a: f64,
    t: f64,
    r: f64,
    d: f64,
    quad_tol: f64,
) -> Result<ForceResult, PfaError> {
    check_domain(a, t)?;
    require("lens radius R", r, r > 0.0)?;
    require("lens thickness D", d, d > 0.0 && d <= 2.0 * r)?;
    require("quadrature tolerance", quad_tol, quad_tol > 0.0)?;

    let leading = 2.0 * PI * r * free_energy(a, t);
    // exactly zero for a hemisphere
    let rim = if d == r {
        0.0
    } else {
        -2.0 * PI * (r - d) * free_energy(d + a, t)
    };
    let points = geometric_breakpoints(a, d + a, a);
    let integral = Integrator::with_rel_tol(quad_tol)
        .integrate_partitioned(|z| free_energy(z, t), &points)?
        .value;
    Ok(result(
        leading + rim - 2.0 * PI * integral,
        ForceMethod::PerfectFull,
        a,
        t,
    ))
}

/// Perfect lens, leading term only: 2πR F(a).
pub fn force_perfect_simplified(a: f64, t: f64, r: f64) -> Result<ForceResult, PfaError> {
    check_domain(a, t)?;
    require("lens radius R", r, r > 0.0)?;
    let mut out = result(
        2.0 * PI * r * free_energy(a, t),
        ForceMethod::PerfectSimplified,
        a,
        t,
    );
    let ratio = a / r;
    if ratio >= SIMPLIFIED_MAX_SEPARATION_RATIO {
        out.warning = Some(Applicability::SeparationNotSmall { ratio });
    }
    Ok(out)
}

/// Lens of radius `r` with a bubble of radius `r1` and thickness `d1` at the
/// point of closest approach.
pub fn force_bubble(a: f64, t: f64, r: f64, r1: f64, d1: f64) -> Result<ForceResult, PfaError> {
    check_domain(a, t)?;
    require("lens radius R", r, r > 0.0)?;
    require("bubble radius R1", r1, r1 >= 0.0)?;
    require("bubble thickness D1", d1, d1 >= 0.0)?;
    let value = 2.0 * PI * (r - r1) * free_energy(a + d1, t) + 2.0 * PI * r1 * free_energy(a, t);
    Ok(result(value, ForceMethod::Bubble, a, t))
}

/// Lens of radius `r` with a pit of radius `r1` and depth `d1`.
pub fn force_pit(a: f64, t: f64, r: f64, r1: f64, d1: f64) -> Result<ForceResult, PfaError> {
    check_domain(a, t)?;
    require("lens radius R", r, r > 0.0)?;
    require("pit radius R1", r1, r1 >= 0.0)?;
    require("pit depth D1", d1, d1 >= 0.0)?;
    let value = 2.0 * PI * (r - r1) * free_energy(a, t) + 2.0 * PI * r1 * free_energy(a + d1, t);
    Ok(result(value, ForceMethod::Pit, a, t))
}

/// The closed form matching the profile kind: simplified for a perfect lens,
/// bubble or pit otherwise.
pub fn force_closed_form(profile: &LensProfile, a: f64, t: f64) -> Result<ForceResult, PfaError> {
    let r = profile.radius();
    match (profile.kind(), profile.imperfection()) {
        (ProfileKind::Bubble, Some(cap)) => force_bubble(a, t, r, cap.radius, cap.depth),
        (ProfileKind::Pit, Some(cap)) => force_pit(a, t, r, cap.radius, cap.depth),
        _ => force_perfect_simplified(a, t, r),
    }
}

/// Computes the force on `profile` with an explicit method, rejecting
/// imperfection formulas applied to the wrong kind of profile.
pub fn force_with_method(
    profile: &LensProfile,
    method: ForceMethod,
    a: f64,
    t: f64,
    quad_tol: f64,
) -> Result<ForceResult, PfaError> {
    let r = profile.radius();
    let mismatch = || PfaError::ProfileMismatch {
        method,
        profile: profile.kind(),
    };
    match method {
        ForceMethod::GeneralQuadrature => force_general(profile, a, t, quad_tol),
        ForceMethod::PerfectFull => {
            force_perfect_full_with_tol(a, t, r, profile.thickness(), quad_tol)
        }
        ForceMethod::PerfectSimplified => force_perfect_simplified(a, t, r),
        ForceMethod::Bubble | ForceMethod::Pit => {
            let expected = if method == ForceMethod::Bubble {
                ProfileKind::Bubble
            } else {
                ProfileKind::Pit
            };
            if profile.kind() != expected {
                return Err(mismatch());
            }
            force_closed_form(profile, a, t)
        }
    }
}

/// Force normalised by the simplified perfect-sphere force of the same R.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioCurve {
    pub separations: Vec<f64>,
    pub ratios: Vec<f64>,
    pub profile: LensProfile,
}

pub fn ratio_at(profile: &LensProfile, a: f64, t: f64) -> Result<f64, PfaError> {
    match profile.kind() {
        ProfileKind::Perfect => Err(PfaError::ProfileMismatch {
            method: ForceMethod::PerfectSimplified,
            profile: ProfileKind::Perfect,
        }),
        _ => {
            let force = force_closed_form(profile, a, t)?;
            let reference = force_perfect_simplified(a, t, profile.radius())?;
            Ok(force.value / reference.value)
        }
    }
}

pub fn ratio_curve(
    profile: &LensProfile,
    separations: &[f64],
    t: f64,
) -> Result<RatioCurve, PfaError> {
    let ratios = separations
        .iter()
        .map(|&a| ratio_at(profile, a, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RatioCurve {
        separations: separations.to_vec(),
        ratios,
        profile: *profile,
    })
}
