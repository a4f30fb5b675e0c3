//! Combining systematic constituents and random error into a total
//! experimental error, in all three regimes.
//!
//! ```bash
//! cargo run -p casimir-pfa --example error_budget
//! ```

use casimir_pfa::metrology::{
    combine_systematic, select_rule, total_error, ErrorBudget, Interpolation, QTable, Systematic,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // three relative constituents in percent, k = 1.1 at J = 3, β = 0.95
    let components = [0.12, 0.10, 0.09];
    let delta_s = combine_systematic(&components, 1.1)?;
    println!(
        "systematic: sum {:.4}, 1.1*rms {:.4} -> {:.4} %",
        components.iter().sum::<f64>(),
        1.1 * components.iter().map(|c| c * c).sum::<f64>().sqrt(),
        delta_s
    );

    for s_mean in [0.5, 0.1, 0.02] {
        let (r, rule) = select_rule(delta_s, s_mean)?;
        println!("s = {s_mean}: r = {r:.2} -> {rule}");
    }

    // systematic error dominating: the total is the systematic error
    let mut budget = ErrorBudget::new(0.04, Systematic::Combined(0.19), 0.019);
    budget.measured_value = Some(100.0);
    let out = total_error(&budget)?;
    println!(
        "Delta_s = 0.19 %, Delta_r = 0.04 %: {} gives Delta_t = {} %",
        out.rule, out.total
    );

    // blend regime with a user-supplied q table
    let mut q_table = QTable::new(Interpolation::Linear);
    q_table.insert(0.95, 1.0, 0.71)?;
    q_table.insert(0.95, 8.0, 0.81)?;
    let mut blend = ErrorBudget::new(0.1, Systematic::Components(components.to_vec()), 0.1);
    blend.q_table = q_table;
    let out = total_error(&blend)?;
    println!(
        "r = {:.2}: {} gives Delta_t = {:.4} (<= {:.4})",
        out.ratio,
        out.rule,
        out.total,
        blend.random_error + out.systematic
    );
    Ok(())
}
