//! Plate–plate free energy and pressure at room temperature, with the closed
//! thermal series checked against the brute-force Matsubara sum.
//!
//! ```bash
//! cargo run -p casimir-pfa --example plate_free_energy
//! ```

use casimir_pfa::plates::{
    free_energy_pp, free_energy_pp_oracle, pressure_pp, zero_temperature_free_energy, ThermalPoint,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = 300.0;
    println!(
        "{:>6} {:>8} {:>14} {:>14} {:>14} {:>10}",
        "z_um", "tau", "F_pp J/m2", "P N/m2", "F(T=0) J/m2", "oracle"
    );
    for z_um in [0.5, 1.0, 1.5, 2.0, 3.0, 5.0] {
        let z = z_um * 1e-6;
        let point = ThermalPoint::new(z, t)?;
        let f = free_energy_pp(z, t)?;
        let p = pressure_pp(z, t)?;
        let oracle = free_energy_pp_oracle(z, t, 10_000, 1e-12)?;
        println!(
            "{:>6.2} {:>8.4} {:>14.6e} {:>14.6e} {:>14.6e} {:>10.1e}",
            z_um,
            point.tau(),
            f.value,
            p,
            zero_temperature_free_energy(z),
            ((f.value - oracle.value) / oracle.value).abs()
        );
    }
    Ok(())
}
