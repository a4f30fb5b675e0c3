//! Thermal Casimir force between a plane plate and a large spherical lens
//! whose surface carries a bubble or a pit near the point of closest
//! approach, in the proximity force approximation.
//!
//! * [`plates`]: ideal-metal plate–plate free energy and pressure at
//!   temperature T, with a brute-force Matsubara cross-check.
//! * [`geometry`]: perfect, bubble and pit lens profiles and the optical
//!   surface specification.
//! * [`pfa`]: general PFA quadrature over a profile and the closed-form
//!   lens forces.
//! * [`metrology`]: combining random and systematic measurement errors.
//! * [`figure`]: the three model imperfections and their force-ratio curves.
//! * [`cli`]: the `casimir-pfa` command line.
//!
//! ```
//! use casimir_pfa::pfa::{force_bubble, force_perfect_simplified};
//!
//! let (a, t, r) = (1e-6, 300.0, 0.15);
//! let bubble = force_bubble(a, t, r, 0.25, 0.5e-6).unwrap();
//! let perfect = force_perfect_simplified(a, t, r).unwrap();
//! let ratio = bubble.value / perfect.value;
//! assert!((ratio - 1.458).abs() < 2e-3);
//! ```

pub mod cli;
pub mod constants;
pub mod figure;
pub mod geometry;
pub mod metrology;
pub mod pfa;
pub mod plates;
pub mod quadrature;
pub mod units;

pub use geometry::{derive_geometry, profile_height, LensProfile, ProfileKind};
pub use pfa::{ForceMethod, ForceResult, RatioCurve};
pub use plates::{free_energy_pp, pressure_pp, FreeEnergyAreal, ThermalPoint};
