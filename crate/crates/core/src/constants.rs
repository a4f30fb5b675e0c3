//! SI physical constants (CODATA 2018) and the mathematical constants used by
//! the thermal series.

/// The three constants entering the ideal-metal Casimir free energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Boltzmann constant k_B, J/K.
    pub boltzmann: f64,
    /// Reduced Planck constant ħ, J·s.
    pub reduced_planck: f64,
    /// Speed of light in vacuum c, m/s.
    pub light_speed: f64,
}

impl PhysicalConstants {
    /// CODATA 2018 values. k_B and c are exact in the 2019 SI; ħ = h/2π with
    /// h exact, stored here to the 10 significant digits CODATA publishes.
    pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
        boltzmann: 1.380_649e-23,
        reduced_planck: 1.054_571_817e-34,
        light_speed: 299_792_458.0,
    };

    /// ħc in J·m.
    pub fn hbar_c(&self) -> f64 {
        self.reduced_planck * self.light_speed
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

/// Constants used throughout the crate.
pub const SI: PhysicalConstants = PhysicalConstants::CODATA_2018;

/// Apéry's constant ζ(3).
pub const ZETA_3: f64 = 1.202_056_903_159_594;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_si() {
        assert_eq!(PhysicalConstants::default(), SI);
        assert!((SI.hbar_c() - 3.161_526_771_56e-26).abs() < 1e-35);
    }

    #[test]
    fn zeta3_matches_partial_sum() {
        // Σ 1/n³ with the Euler–Maclaurin tail 1/(2N²) + ...
        let n_max = 100_000u64;
        let partial: f64 = (1..=n_max).rev().map(|n| 1.0 / (n as f64).powi(3)).sum();
        let n = n_max as f64;
        let tail = 1.0 / (2.0 * n * n) - 1.0 / (2.0 * n.powi(3)) + 1.0 / (4.0 * n.powi(4));
        assert!((partial + tail - ZETA_3).abs() < 1e-15);
    }
}
