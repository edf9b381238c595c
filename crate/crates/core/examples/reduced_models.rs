//! Closed-form limit models per mode, and their reconstruction as 3D fields.
//!
//!     cargo run --example reduced_models

use winkler_limit::reduced::{reconstruct_limit_field, solve_membrane_mode, solve_plate_mode};
use winkler_limit::{limit_coefficients, Mode, StackParameters, ThicknessMesh, C64};

fn main() -> winkler_limit::Result<()> {
    let membrane = StackParameters::unit().with_exponents(0.0, 2.0);
    let c = limit_coefficients(&membrane)?;
    println!("membrane over in-plane foundation, K_in = {}", c.k_in);
    for n in 0..4 {
        let m = Mode::eigenstrain([n, 0], 0, 0, C64::new(1.0, 0.0));
        let s = solve_membrane_mode(&c, &membrane, &m)?;
        println!("  n = {n}: zeta_1 = {:.6e}{:+.6e}i", s.zeta[0].re, s.zeta[0].im);
    }

    let plate = StackParameters::unit().with_exponents(0.0, 4.0);
    let c = limit_coefficients(&plate)?;
    println!("plate over transverse foundation, D = {:.6}, K_tr = {:.6}", c.bending, c.k_tr);
    let mut sols = Vec::new();
    for n in 0..4 {
        let m = Mode::pressure([n, 0], C64::new(1.0, 0.0));
        let s = solve_plate_mode(&c, &plate, &m)?;
        println!("  n = {n}: zeta_3 = {:.6e}", s.zeta[2].re);
        sols.push(s);
    }

    // Kirchhoff-Love profile of the n = 1 mode through the stack
    let mesh = ThicknessMesh::for_stack(&plate, 4)?;
    let f = reconstruct_limit_field(&sols[1..2], &plate, &mesh);
    println!("  n = 1 reconstructed: x3, Im u1, Re u3");
    for (x, u) in mesh.nodes().iter().zip(&f.modes[0].u) {
        println!("    {x:>6.3} {:>10.4e} {:>10.4e}", u[0].im, u[2].re);
    }
    Ok(())
}
