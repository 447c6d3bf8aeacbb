//! The power-family root `p1` and the zero of `D -> L(1 - p1, (D, 2))`.

use periodlab::families::{find_p1, loud_find_l_root, loud_l_at_boundary, power_f};

fn main() -> periodlab::Result<()> {
    let p1 = find_p1()?;
    println!("p1 = {p1:.10}, f(p1) = {:.2e}", power_f(p1)?);
    let root = loud_find_l_root()?;
    println!("L root at F = 2: {root:.12}");
    let h = 1e-4;
    let slope = (loud_l_at_boundary(-1.0 + h, 2.0)? - loud_l_at_boundary(-1.0 - h, 2.0)?) / (2.0 * h);
    println!("dL/dD at D = -1: {slope:.10}");
    Ok(())
}
