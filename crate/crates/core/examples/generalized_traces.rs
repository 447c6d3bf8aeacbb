//! `x (L_nu o F)[f](x) / Omega(x, -1)` for `nu = (2)` and an input with
//! `L_(2)[f] = x / (1 + x^2)`; both operator orders are evaluated.

use periodlab::asymptotics::{l2_preimage_of_model, verify_compensator_asymptotics_gen, Schedule};
use periodlab::operators::ExponentTuple;

fn main() -> periodlab::Result<()> {
    let nu = ExponentTuple::new(vec![2.0]);
    let xs = Schedule { start: 10.0, ratio: 10.0, points: 6 }.growing();
    let fit = verify_compensator_asymptotics_gen(&nu, l2_preimage_of_model(), 1.0, -1.0, 0, &xs)?;
    for (x, r) in &fit.ratio_trace {
        println!("{x:>10.1e}  {r:.6}");
    }
    println!("largest gap between L o F and F o L: {:.2e}", fit.route_gap.unwrap_or(f64::NAN));
    Ok(())
}
