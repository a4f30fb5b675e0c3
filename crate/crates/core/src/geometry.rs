//! Axisymmetric lens surfaces: a perfect sphere, or a sphere carrying a
//! spherical-cap bubble or pit centred on the point of closest approach.
//!
//! Heights are measured from the plate plane `z = 0`; `a` is the shortest
//! lens–plate separation. For a pit the closest points form the circle
//! `ρ = r` rather than the apex.

use std::fmt;

use thiserror::Error;

/// Radius measurement error of a centimeter-size lens, m.
pub const DEFAULT_RADIUS_ERROR: f64 = 0.05e-2;

/// Smallest imperfection footprint diameter allowed by the surface spec, m.
pub const MIN_FOOTPRINT_DIAMETER: f64 = 30e-6;

/// Largest imperfection footprint diameter allowed by the surface spec, m.
pub const MAX_FOOTPRINT_DIAMETER: f64 = 1.2e-3;

/// Imperfections must be shallow compared with the lens: `D1 < this · R`.
pub const MAX_DEPTH_TO_RADIUS: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("lens curvature radius must be positive, got {0:e} m")]
    InvalidRadius(f64),
    #[error("lens thickness must satisfy 0 < D <= R (D = {thickness:e} m, R = {radius:e} m)")]
    InvalidThickness { thickness: f64, radius: f64 },
    #[error("invalid imperfection: {0}")]
    InvalidImperfection(String),
    #[error("degenerate imperfection: 2*R1*D1 - D1^2 = {0:e} m^2 (need D1 <= R1 and a positive footprint)")]
    DegenerateImperfection(f64),
    #[error("imperfection footprint radius {footprint:e} m exceeds the lens extent {extent:e} m")]
    FootprintExceedsLens { footprint: f64, extent: f64 },
    #[error("a perfect lens has no imperfection geometry")]
    NoImperfection,
    #[error("radial coordinate {rho:e} m outside [0, {extent:e}] m")]
    RadiusOutOfRange { rho: f64, extent: f64 },
    #[error("separation must be positive, got {0:e} m")]
    InvalidSeparation(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileKind {
    Perfect,
    Bubble,
    Pit,
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileKind::Perfect => "perfect",
            ProfileKind::Bubble => "bubble",
            ProfileKind::Pit => "pit",
        })
    }
}

/// A spherical-cap surface imperfection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Imperfection {
    /// Curvature radius R1 of the cap, m.
    pub radius: f64,
    /// Cap thickness (bubble) or depth (pit) D1, m.
    pub depth: f64,
}

/// Lens surface profile. Construct through [`LensProfile::perfect`],
/// [`LensProfile::bubble`] or [`LensProfile::pit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensProfile {
    kind: ProfileKind,
    radius: f64,
    thickness: f64,
    imperfection: Option<Imperfection>,
}

fn positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

impl LensProfile {
    pub fn perfect(radius: f64, thickness: f64) -> Result<Self, GeometryError> {
        if !positive(radius) {
            return Err(GeometryError::InvalidRadius(radius));
        }
        if !positive(thickness) || thickness > radius {
            return Err(GeometryError::InvalidThickness { thickness, radius });
        }
        Ok(LensProfile {
            kind: ProfileKind::Perfect,
            radius,
            thickness,
            imperfection: None,
        })
    }

    /// A perfect hemispherical lens (D = R).
    pub fn hemisphere(radius: f64) -> Result<Self, GeometryError> {
        Self::perfect(radius, radius)
    }

    /// A bubble of curvature radius `cap_radius` and thickness `cap_depth`.
    /// `cap_radius` may be larger (flattening) or smaller (sharpening) than
    /// the lens radius.
    pub fn bubble(
        radius: f64,
        thickness: f64,
        cap_radius: f64,
        cap_depth: f64,
    ) -> Result<Self, GeometryError> {
        Self::with_imperfection(
            ProfileKind::Bubble,
            radius,
            thickness,
            cap_radius,
            cap_depth,
        )
    }

    /// A concave pit; requires `cap_radius < radius`.
    pub fn pit(
        radius: f64,
        thickness: f64,
        cap_radius: f64,
        cap_depth: f64,
    ) -> Result<Self, GeometryError> {
        Self::with_imperfection(ProfileKind::Pit, radius, thickness, cap_radius, cap_depth)
    }

    fn with_imperfection(
        kind: ProfileKind,
        radius: f64,
        thickness: f64,
        cap_radius: f64,
        cap_depth: f64,
    ) -> Result<Self, GeometryError> {
        let base = Self::perfect(radius, thickness)?;
        if !positive(cap_radius) {
            return Err(GeometryError::InvalidImperfection(format!(
                "curvature radius R1 must be positive, got {cap_radius:e} m"
            )));
        }
        if !positive(cap_depth) || cap_depth >= MAX_DEPTH_TO_RADIUS * radius {
            return Err(GeometryError::InvalidImperfection(format!(
                "depth D1 must satisfy 0 < D1 < {MAX_DEPTH_TO_RADIUS:e}*R, got {cap_depth:e} m"
            )));
        }
        if kind == ProfileKind::Pit && cap_radius >= radius {
            return Err(GeometryError::InvalidImperfection(format!(
                "pit curvature radius R1 = {cap_radius:e} m must be below R = {radius:e} m"
            )));
        }
        Ok(LensProfile {
            kind,
            imperfection: Some(Imperfection {
                radius: cap_radius,
                depth: cap_depth,
            }),
            ..base
        })
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    /// Mean lens curvature radius R, m.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Lens thickness D, m.
    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    pub fn imperfection(&self) -> Option<Imperfection> {
        self.imperfection
    }

    /// Radius √(2RD − D²) of the lens projection onto the plate.
    pub fn lateral_extent(&self) -> f64 {
        let (r, d) = (self.radius, self.thickness);
        (d * (2.0 * r - d)).sqrt()
    }
}

/// Derived footprint quantities of an imperfection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImperfectionGeometry {
    /// Footprint radius r, from r² = 2·R1·D1 − D1².
    pub footprint_radius: f64,
    /// r², kept exactly as computed to avoid a square-root round trip.
    pub footprint_radius_sq: f64,
    /// Lens sagitta over the footprint in the small-sagitta form d = r²/(2R).
    pub sagitta: f64,
    /// Exact lens sagitta R − √(R² − r²).
    pub sagitta_exact: f64,
    /// Bubble: |d − D1| (flattening or sharpening); pit: d + D1.
    pub offset: f64,
    /// Whether 2r lies within the optical surface specification.
    pub spec_ok: bool,
}

/// Sagitta of a sphere of radius `radius` at lateral distance `rho`,
/// in a form free of cancellation at small `rho`.
fn sagitta(radius: f64, rho: f64) -> f64 {
    rho * rho / (radius + ((radius - rho) * (radius + rho)).sqrt())
}

pub fn derive_geometry(profile: &LensProfile) -> Result<ImperfectionGeometry, GeometryError> {
    let cap = profile.imperfection.ok_or(GeometryError::NoImperfection)?;
    let (r1, d1) = (cap.radius, cap.depth);
    let r_sq = 2.0 * r1 * d1 - d1 * d1;
    if r_sq <= 0.0 || d1 > r1 {
        return Err(GeometryError::DegenerateImperfection(r_sq));
    }
    let footprint = r_sq.sqrt();
    let extent = profile.lateral_extent();
    if footprint >= extent {
        return Err(GeometryError::FootprintExceedsLens { footprint, extent });
    }

    let big_r = profile.radius;
    let d = r_sq / (2.0 * big_r);
    let offset = match profile.kind {
        ProfileKind::Pit => d + d1,
        _ => (d - d1).abs(),
    };
    let diameter = 2.0 * footprint;
    Ok(ImperfectionGeometry {
        footprint_radius: footprint,
        footprint_radius_sq: r_sq,
        sagitta: d,
        sagitta_exact: sagitta(big_r, footprint),
        offset,
        spec_ok: (MIN_FOOTPRINT_DIAMETER..=MAX_FOOTPRINT_DIAMETER).contains(&diameter),
    })
}

/// A lens profile placed at closest separation `a` from the plate, with the
/// footprint geometry precomputed for repeated height evaluation.
#[derive(Debug, Clone, Copy)]
pub struct LensSurface {
    profile: LensProfile,
    separation: f64,
    geometry: Option<ImperfectionGeometry>,
}

impl LensSurface {
    pub fn new(profile: &LensProfile, separation: f64) -> Result<Self, GeometryError> {
        if !positive(separation) {
            return Err(GeometryError::InvalidSeparation(separation));
        }
        let geometry = match profile.kind {
            ProfileKind::Perfect => None,
            _ => Some(derive_geometry(profile)?),
        };
        Ok(LensSurface {
            profile: *profile,
            separation,
            geometry,
        })
    }

    pub fn profile(&self) -> &LensProfile {
        &self.profile
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn geometry(&self) -> Option<&ImperfectionGeometry> {
        self.geometry.as_ref()
    }

    /// Radius where the imperfection meets the lens body, if any.
    pub fn seam(&self) -> Option<f64> {
        self.geometry.map(|g| g.footprint_radius)
    }

    pub fn extent(&self) -> f64 {
        self.profile.lateral_extent()
    }

    /// Height of the surface above the plate at radial distance `rho`.
    pub fn height(&self, rho: f64) -> Result<f64, GeometryError> {
        let extent = self.extent();
        if !(0.0..=extent).contains(&rho) {
            return Err(GeometryError::RadiusOutOfRange { rho, extent });
        }
        Ok(self.height_unchecked(rho))
    }

    pub(crate) fn height_unchecked(&self, rho: f64) -> f64 {
        match self.geometry {
            Some(g) if rho <= g.footprint_radius => self.cap_height(rho),
            Some(_) => self.body_height(rho),
            None => self.separation + sagitta(self.profile.radius, rho),
        }
    }

    /// Imperfection branch.
    ///
    /// Bubble: z = R1 + a − √(R1² − ρ²).
    /// Pit:    z = a + D1 − R1 + √(R1² − ρ²), rewritten with
    ///         √(R1² − r²) = R1 − D1 so that z(r) = a exactly.
    pub(crate) fn cap_height(&self, rho: f64) -> f64 {
        let a = self.separation;
        let cap = self.profile.imperfection.expect("imperfect profile");
        match self.profile.kind {
            ProfileKind::Pit => {
                let g = self.geometry.expect("imperfect profile");
                let root = ((cap.radius - rho) * (cap.radius + rho)).sqrt();
                let r = g.footprint_radius;
                a + (r - rho) * (r + rho) / (root + cap.radius - cap.depth)
            }
            _ => a + sagitta(cap.radius, rho),
        }
    }

    /// Lens-body branch, offset so that it meets the imperfection at ρ = r.
    ///
    /// Bubble: z = R + D1 − s + a − √(R² − ρ²).
    /// Pit:    z = R + a − s − √(R² − ρ²).
    /// Here s = R − √(R² − r²) is the exact sagitta.
    pub(crate) fn body_height(&self, rho: f64) -> f64 {
        let a = self.separation;
        let big_r = self.profile.radius;
        let g = self.geometry.expect("imperfect profile");
        let r = g.footprint_radius;
        let at_seam = (big_r * big_r - g.footprint_radius_sq).sqrt();
        let here = ((big_r - rho) * (big_r + rho)).sqrt();
        // factored so the rise is exactly zero at the seam
        let rise = (rho - r) * (rho + r) / (at_seam + here);
        match self.profile.kind {
            ProfileKind::Pit => a + rise,
            _ => a + self.profile.imperfection.expect("imperfect profile").depth + rise,
        }
    }
}

/// Height z(ρ) of the lens surface above the plate.
pub fn profile_height(profile: &LensProfile, rho: f64, a: f64) -> Result<f64, GeometryError> {
    LensSurface::new(profile, a)?.height(rho)
}

/// Limits of the optical surface specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalSpec {
    pub min_footprint_diameter: f64,
    pub max_footprint_diameter: f64,
    /// Absolute error ΔR of the lens radius measurement.
    pub radius_error: f64,
}

impl Default for OpticalSpec {
    fn default() -> Self {
        OpticalSpec {
            min_footprint_diameter: MIN_FOOTPRINT_DIAMETER,
            max_footprint_diameter: MAX_FOOTPRINT_DIAMETER,
            radius_error: DEFAULT_RADIUS_ERROR,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecCheck {
    pub name: &'static str,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpecReport {
    pub checks: Vec<SpecCheck>,
}

impl SpecReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SpecCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn validate_spec(profile: &LensProfile) -> SpecReport {
    validate_spec_with(profile, &OpticalSpec::default())
}

pub fn validate_spec_with(profile: &LensProfile, spec: &OpticalSpec) -> SpecReport {
    let Some(cap) = profile.imperfection else {
        return SpecReport::default();
    };
    let mut checks = Vec::with_capacity(4);
    match derive_geometry(profile) {
        Ok(g) => {
            let diameter = 2.0 * g.footprint_radius;
            checks.push(SpecCheck {
                name: "footprint_diameter_min",
                value: diameter,
                limit: spec.min_footprint_diameter,
                passed: diameter >= spec.min_footprint_diameter,
            });
            checks.push(SpecCheck {
                name: "footprint_diameter_max",
                value: diameter,
                limit: spec.max_footprint_diameter,
                passed: diameter <= spec.max_footprint_diameter,
            });
        }
        Err(_) => checks.push(SpecCheck {
            name: "footprint_defined",
            value: 2.0 * cap.radius * cap.depth - cap.depth * cap.depth,
            limit: 0.0,
            passed: false,
        }),
    }
    checks.push(SpecCheck {
        name: "depth_below_radius_error",
        value: cap.depth,
        limit: spec.radius_error,
        passed: cap.depth < spec.radius_error,
    });
    SpecReport { checks }
}
