//! The compensator `omega(x, alpha)`, its normalized form `Omega` and the
//! constants `G`, `K` around the degenerate exponent `alpha = -1`.

use periodlab::specfun::{omega, omega_big, script_g, script_k};

fn main() -> periodlab::Result<()> {
    println!("{:>8} {:>8} {:>14} {:>14} {:>14}", "x", "alpha", "omega", "Omega", "K");
    for x in [2.0, 10.0, 1e6] {
        for alpha in [-1.5, -1.01, -1.0, -0.99, 0.0, 1.0] {
            println!(
                "{x:>8.0e} {alpha:>8} {:>14.8} {:>14.8} {:>14.8}",
                omega(x, alpha),
                omega_big(x, alpha)?,
                script_k(alpha)?
            );
        }
    }
    for alpha in [-1.5, -0.5, 0.0, 2.0] {
        println!("G({alpha}) = {:.12}", script_g(alpha)?);
    }
    Ok(())
}
