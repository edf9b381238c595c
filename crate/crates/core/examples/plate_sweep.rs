//! eps-sweep towards the plate over transverse foundation:
//! (alpha, beta) = (0, 4), i.e. gamma = 2, delta = 1, unit pressure on
//! k = (2 pi, 0).
//!
//!     cargo run --release --example plate_sweep > plate.csv

use winkler_limit::convergence::{count_increases, default_eps};
use winkler_limit::{run_sweep, Mode, StackParameters, SweepOptions, C64};

fn main() -> winkler_limit::Result<()> {
    let params = StackParameters::unit().with_exponents(0.0, 4.0);
    let load = [Mode::pressure([1, 0], C64::new(1.0, 0.0))];
    let report = run_sweep(&params, &load, &default_eps(), SweepOptions::default())?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    print!("{}", report.to_csv_string());
    eprintln!(
        "increases in err_h1: {}, rate {:?}",
        count_increases(&report.errors_h1_film),
        report.rate_estimate
    );
    Ok(())
}
