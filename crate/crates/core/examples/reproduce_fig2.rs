//! Force ratios for the three model imperfections, 1–3 μm at 300 K.
//! Pass a path to write the CSV instead of printing it.
//!
//! ```bash
//! cargo run -p casimir-pfa --example reproduce_fig2 [-- ratios.csv]
//! ```

use std::io::Write;

fn main() {
    let mut args = vec!["casimir-pfa".to_string(), "reproduce-fig2".to_string()];
    if let Some(path) = std::env::args().nth(1) {
        args.push("--out".into());
        args.push(path);
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = casimir_pfa::cli::run(args, &mut out, &mut std::io::stderr());
    out.flush().ok();
    std::process::exit(code);
}
