//! One Fourier mode of the rescaled 3D problem: through-thickness profile,
//! energy and stationarity residual.
//!
//!     cargo run --example solve_single_mode [eps]

use winkler_limit::solver3d::{energy, load_constant, stationarity_residual};
use winkler_limit::{solve3d, Mode, StackParameters, ThicknessMesh, C64};

fn main() -> winkler_limit::Result<()> {
    let eps: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.125);
    let params = StackParameters::unit().with_exponents(0.0, 2.0);
    let load = [Mode::eigenstrain([1, 0], 0, 0, C64::new(1.0, 0.0))];
    let mesh = ThicknessMesh::for_stack(&params, 16)?;

    let field = solve3d(&params, eps, &load, &mesh)?;
    let stat = stationarity_residual(&field, &params, eps, &load)?;
    println!("eps = {eps}, regime = {}", params.exponents().regime);
    println!("energy = {:.12e}  (constant part {:.6})", energy(&field, &params, eps, &load)?, load_constant(&params, &load));
    println!("stationarity = {:.3e} (l2 {:.3e})", stat.normalized, stat.l2);
    println!();
    println!("{:>8} {:>24} {:>24}", "x3", "u1", "u3");
    let phys = field.physical();
    for (x, u) in mesh.nodes().iter().zip(&phys.modes[0].u).step_by(2) {
        println!("{x:>8.4} {:>11.3e}{:+.3e}i {:>11.3e}{:+.3e}i", u[0].re, u[0].im, u[2].re, u[2].im);
    }
    Ok(())
}
