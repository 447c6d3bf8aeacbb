//! `x^{2m+1} F[f](x) / (a b_m Omega(x, alpha + 2m))` along `10 .. 1e8`, for the
//! model input with `m = 0` and a zero-momentum combination with `m = 1`.

use periodlab::asymptotics::{calibrated_family, compensator_trace, Schedule};

fn main() -> periodlab::Result<()> {
    let xs = Schedule::at_infinity().growing();
    for (m, alpha) in [(0, -1.05), (0, -1.0), (0, -0.95), (1, -3.0)] {
        let fit = compensator_trace(calibrated_family(alpha, m)?, 1.0, alpha, m, &xs)?;
        println!("m = {m}, alpha = {alpha}");
        for (x, r) in &fit.ratio_trace {
            println!("  {x:>10.3e}  {r:.6}");
        }
        println!("  final deviation {:.4e}, monotone {}", fit.final_deviation(), fit.monotone_toward_one());
    }
    Ok(())
}
