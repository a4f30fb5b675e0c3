//! Closed-form lens–plate forces with a bubble or a pit, compared with the
//! perfect-sphere formulas.
//!
//! ```bash
//! cargo run -p casimir-pfa --example imperfection_forces
//! ```

use casimir_pfa::pfa::{force_bubble, force_perfect_full, force_perfect_simplified, force_pit};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (t, r) = (300.0, 0.15);
    println!(
        "{:>5} {:>13} {:>13} {:>13} {:>13} {:>13}",
        "a_um", "simplified N", "full N", "bubble25 N", "bubble5 N", "pit12 N"
    );
    for a_um in [1.0, 1.5, 2.0, 2.5, 3.0] {
        let a = a_um * 1e-6;
        let simplified = force_perfect_simplified(a, t, r)?;
        let full = force_perfect_full(a, t, r, r)?;
        let flat = force_bubble(a, t, r, 0.25, 0.5e-6)?;
        let sharp = force_bubble(a, t, r, 0.05, 1e-6)?;
        let pit = force_pit(a, t, r, 0.12, 1e-6)?;
        println!(
            "{:>5.1} {:>13.5e} {:>13.5e} {:>13.5e} {:>13.5e} {:>13.5e}",
            a_um,
            simplified.magnitude(),
            full.magnitude(),
            flat.magnitude(),
            sharp.magnitude(),
            pit.magnitude()
        );
    }
    Ok(())
}
