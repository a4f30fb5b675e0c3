//! The general PFA, the pressure integrated over the actual lens surface,
//! against the closed forms for perfect, bubble and pit profiles.
//!
//! ```bash
//! cargo run -p casimir-pfa --example general_pfa
//! ```

use casimir_pfa::figure::imperfection_profiles;
use casimir_pfa::geometry::LensProfile;
use casimir_pfa::pfa::{force_closed_form, force_general, force_perfect_full};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = 300.0;
    let tol = 1e-10;
    let perfect = LensProfile::hemisphere(0.15)?;
    let mut profiles = vec![perfect];
    profiles.extend(imperfection_profiles());

    for profile in &profiles {
        println!("{} lens", profile.kind());
        for a_um in [1.0, 2.0, 3.0] {
            let a = a_um * 1e-6;
            let general = force_general(profile, a, t, tol)?;
            let closed = match profile.imperfection() {
                Some(_) => force_closed_form(profile, a, t)?,
                None => force_perfect_full(a, t, profile.radius(), profile.thickness())?,
            };
            println!(
                "  a = {a_um} um: quadrature {:.9e} N, {} {:.9e} N, rel. diff {:.2e}",
                general.magnitude(),
                closed.method,
                closed.magnitude(),
                ((general.value - closed.value) / closed.value).abs()
            );
        }
    }
    Ok(())
}
