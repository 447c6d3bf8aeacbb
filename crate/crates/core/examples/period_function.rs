//! Period and period derivative of three centers, by quadrature, by the
//! integral operator and by finite differences.

use periodlab::families::{loud_center, power_center, LoudParams, PowerParams};
use periodlab::period::{period, period_derivative, period_derivative_fd, period_direct};

fn main() -> periodlab::Result<()> {
    let centers = [
        power_center(PowerParams::new(0.0, 2.0)?)?,
        power_center(PowerParams::new(-1.0 / 3.0, 2.0)?)?,
        loud_center(LoudParams::new(-1.0, 2.0)?)?,
    ];
    for c in &centers {
        println!("{} (h0 = {:.6})", c.label(), c.h0());
        for frac in [0.1, 0.5, 0.9, 0.99] {
            let h = frac * c.h0();
            println!(
                "  h = {h:.5}: T = {:.10} / {:.10}, T' = {:.10} / {:.10}",
                period(c, h)?,
                period_direct(c, h)?,
                period_derivative(c, h)?,
                period_derivative_fd(c, h)?
            );
        }
    }
    Ok(())
}
