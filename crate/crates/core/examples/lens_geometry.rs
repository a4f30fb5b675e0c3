//! Footprint geometry, surface heights and the optical-spec report for the
//! three model imperfections on a 15 cm lens.
//!
//! ```bash
//! cargo run -p casimir-pfa --example lens_geometry
//! ```

use casimir_pfa::figure::imperfection_profiles;
use casimir_pfa::geometry::{derive_geometry, validate_spec, LensSurface};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = 1e-6;
    for profile in imperfection_profiles() {
        let cap = profile.imperfection().expect("imperfect profile");
        let g = derive_geometry(&profile)?;
        println!(
            "{} R1 = {} cm, D1 = {} um",
            profile.kind(),
            cap.radius * 100.0,
            cap.depth * 1e6
        );
        println!(
            "  2r = {:.3} mm, d = {:.3} um, offset = {:.3} um, within spec: {}",
            2.0 * g.footprint_radius * 1e3,
            g.sagitta * 1e6,
            g.offset * 1e6,
            g.spec_ok
        );

        let surface = LensSurface::new(&profile, a)?;
        let r = g.footprint_radius;
        for rho in [0.0, 0.5 * r, r, 1.5 * r, 3.0 * r] {
            println!(
                "  z({:.3} mm) = {:.4} um",
                rho * 1e3,
                surface.height(rho)? * 1e6
            );
        }
        for check in validate_spec(&profile).checks {
            println!(
                "  [{}] {} = {:.3e} (limit {:.3e})",
                if check.passed { "ok" } else { "FAIL" },
                check.name,
                check.value,
                check.limit
            );
        }
    }
    Ok(())
}
