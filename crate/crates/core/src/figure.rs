//! Force ratios for the three model imperfections on a 15 cm lens:
//! a flattening bubble (R1 = 25 cm, D1 = 0.5 μm), a sharpening bubble
//! (R1 = 5 cm, D1 = 1 μm) and a pit (R1 = 12 cm, D1 = 1 μm), each normalised
//! by the simplified perfect-sphere force, over 1–3 μm at 300 K.

use crate::geometry::LensProfile;
use crate::pfa::{ratio_at, PfaError};

pub const LENS_RADIUS: f64 = 0.15;
pub const TEMPERATURE: f64 = 300.0;

/// Grid in units of 10 nm: 1.00 μm to 3.00 μm in 0.05 μm steps.
const GRID_START_10NM: u32 = 100;
const GRID_STEP_10NM: u32 = 5;
const GRID_POINTS: u32 = 41;

pub const CSV_HEADER: &str = "a_um,ratio_line1,ratio_line2,ratio_line3";

/// The three imperfect lenses, hemispherical (D = R).
pub fn imperfection_profiles() -> [LensProfile; 3] {
    let r = LENS_RADIUS;
    [
        LensProfile::bubble(r, r, 0.25, 0.5e-6).expect("valid bubble"),
        LensProfile::bubble(r, r, 0.05, 1e-6).expect("valid bubble"),
        LensProfile::pit(r, r, 0.12, 1e-6).expect("valid pit"),
    ]
}

/// Separations in metres, parsed from exact decimals.
pub fn separations() -> Vec<f64> {
    (0..GRID_POINTS)
        .map(|i| {
            let tens_of_nm = GRID_START_10NM + i * GRID_STEP_10NM;
            format!("{tens_of_nm}e-8").parse().expect("decimal literal")
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    /// Separation in micrometres.
    pub a_um: f64,
    pub ratios: [f64; 3],
}

pub fn rows(temperature: f64) -> Result<Vec<Row>, PfaError> {
    let profiles = imperfection_profiles();
    separations()
        .into_iter()
        .enumerate()
        .map(|(i, a)| {
            let mut ratios = [0.0; 3];
            for (slot, profile) in ratios.iter_mut().zip(&profiles) {
                *slot = ratio_at(profile, a, temperature)?;
            }
            let tens_of_nm = GRID_START_10NM + i as u32 * GRID_STEP_10NM;
            Ok(Row {
                a_um: tens_of_nm as f64 / 100.0,
                ratios,
            })
        })
        .collect()
}
