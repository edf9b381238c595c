//! Exponents, regime and closed-form limit coefficients for a few stacks.
//!
//!     cargo run --example classify

use winkler_limit::{derive_exponents, limit_coefficients, StackParameters};

fn main() -> winkler_limit::Result<()> {
    // film with lambda = 2, mu = 1: c1 = c2 = 1, c3 = 2
    let film = StackParameters {
        lambda_f: 2.0,
        mu_f: 1.0,
        ..StackParameters::unit()
    };
    let c = limit_coefficients(&film)?;
    println!("lambda_f=2, mu_f=1: c1={} c2={} c3={}", c.c1, c.c2, c.c3);

    // a bonding layer four times softer than the film (same Poisson ratio)
    let soft = StackParameters {
        rho_e: 0.25,
        ..StackParameters::unit()
    };
    let c = limit_coefficients(&soft)?;
    println!("mu_f/mu_b=4, h_f=h_b=1: ell_in={} ell_tr={:.6}", c.ell_in, c.ell_tr);

    println!();
    println!("{:>6} {:>6} {:>6} {:>6}  regime", "alpha", "beta", "gamma", "delta");
    for (a, b) in [(0.0, 2.0), (0.0, 4.0), (-0.5, 3.5), (0.0, 0.0), (-1.0, 1.0), (-2.0, 1.0), (1.0, 7.0)] {
        let e = derive_exponents(a, b);
        let warn: Vec<String> = e.warnings().iter().map(|w| w.to_string()).collect();
        println!(
            "{a:>6} {b:>6} {:>6} {:>6}  {}{}",
            e.gamma,
            e.delta,
            e.regime,
            if warn.is_empty() { String::new() } else { format!("  ({})", warn.join("; ")) }
        );
    }
    Ok(())
}
