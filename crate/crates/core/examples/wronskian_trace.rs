//! The finite-energy Wronskian criterion trace for the Loud center `(-1, 2)`
//! with `nu = (0)`, `m = 0`: it should settle to a nonzero limit as `z -> 1`.

use periodlab::families::{loud_center, LoudParams};
use periodlab::operators::ExponentTuple;
use periodlab::period::{natural_weight, wronskian_criterion_trace};

fn main() -> periodlab::Result<()> {
    let c = loud_center(LoudParams::new(-1.0, 2.0)?)?;
    let zs: Vec<f64> = (1..=7).map(|k| 1.0 - 10f64.powi(-k)).collect();
    let trace = wronskian_criterion_trace(&c, &ExponentTuple::new(vec![0.0]), natural_weight(c.h0()), 0, -1.0, &zs)?;
    for p in trace {
        println!("1 - z = {:.0e}: {:.8}", 1.0 - p.z, p.value);
    }
    Ok(())
}
