//! eps-sweep of the 3D solution towards the membrane over in-plane
//! foundation: (alpha, beta) = (0, 2), one eigenstrain mode k = (2 pi, 0).
//!
//!     cargo run --release --example membrane_sweep > membrane.csv

use winkler_limit::convergence::{count_increases, default_eps};
use winkler_limit::{run_sweep, Mode, StackParameters, SweepOptions, C64};

fn main() -> winkler_limit::Result<()> {
    let params = StackParameters::unit().with_exponents(0.0, 2.0);
    let load = [Mode::eigenstrain([1, 0], 0, 0, C64::new(1.0, 0.0))];
    let report = run_sweep(&params, &load, &default_eps(), SweepOptions::default())?;
    print!("{}", report.to_csv_string());
    eprintln!(
        "increases in err_h1: {}, rate {:?}, worst stationarity {:.2e}",
        count_increases(&report.errors_h1_film),
        report.rate_estimate,
        report.stationarity.iter().cloned().fold(0.0, f64::max)
    );
    Ok(())
}
