//! Regime map on a 21 x 21 grid over [-3, 3]^2, as CSV on stdout.
//!
//!     cargo run --example phase_diagram                  # (alpha, beta) plane
//!     cargo run --example phase_diagram -- gamma-delta   # (gamma, delta) plane
//!     cargo run --example phase_diagram -- --ascii       # picture, y upward
//!
//! With a 0.3 step the (alpha, beta) grid never lands on the lines
//! `beta - alpha = 2` (membrane) or `alpha = -1` (gamma = delta); the
//! (gamma, delta) grid contains both.

use winkler_limit::{phase_grid, Plane, Regime};

fn letter(r: Regime) -> char {
    match r {
        Regime::Slender => 's',
        Regime::Persistent3D => '=',
        Regime::Rigid => 'R',
        Regime::MembraneInPlaneFoundation => 'M',
        Regime::PlateTransverseFoundation => 'P',
        Regime::OutOfScope => '.',
    }
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let plane = if args.iter().any(|a| a == "gamma-delta") {
        Plane::GammaDelta
    } else {
        Plane::AlphaBeta
    };
    let n = 21;
    let grid = phase_grid(plane, n, -3.0, 3.0);
    let (xn, yn) = match plane {
        Plane::AlphaBeta => ("alpha", "beta"),
        Plane::GammaDelta => ("gamma", "delta"),
    };
    if args.iter().any(|a| a == "--ascii") {
        for j in (0..n).rev() {
            let row: String = (0..n).map(|i| letter(grid[i * n + j].2.regime)).collect();
            println!("{yn}={:+.1} {row}", grid[j].1);
        }
        println!("{xn} from -3.0 (left) to 3.0 (right)");
        println!("legend: s slender, = persistent 3D, R rigid, M membrane, P plate, . out of scope");
        return;
    }
    print!("{}", winkler_limit::regime::phase_csv(&grid));
}
