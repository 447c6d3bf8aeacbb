//! Numerical quantifiers of `h0 - V` at both ends of the annulus and of the
//! rescaled family at `z = 1`, next to their closed forms.

use periodlab::asymptotics::{estimate_quantifier, Boundary, QuantifierConfig, Schedule};
use periodlab::families::{loud_center, loud_nu, loud_xi_closed_form, power_boundary_quantifiers, power_center, LoudParams, PowerParams};
use periodlab::operators::ExponentTuple;
use periodlab::period::boundary_quantifier;

fn main() -> periodlab::Result<()> {
    let cfg = QuantifierConfig::default();
    let sched = Schedule::near_boundary();
    for (q, p) in [(0.0, 2.0), (-1.0 / 3.0, 1.0), (-1.0 / 3.0, 2.0)] {
        let params = PowerParams::new(q, p)?;
        let c = power_center(params)?;
        let (h0, ann) = (c.h0(), c.annulus());
        let gap = |x: f64| Ok(h0 - c.v(x)?);
        let l = estimate_quantifier(gap, Boundary::Left(ann.x_left), &sched, &cfg)?;
        let r = estimate_quantifier(gap, Boundary::Right(ann.x_right), &sched, &cfg)?;
        let closed = power_boundary_quantifiers(params)?;
        println!(
            "({q:.4}, {p}): left {:.6} ({}), right {:.6} ({})",
            l.alpha_hat, closed.beta_left, r.alpha_hat, closed.beta_right
        );
        let xi = boundary_quantifier(&c, &ExponentTuple::empty(), &sched, &cfg)?;
        println!("  quantifier of the rescaled family at z = 1: {:.6}", xi.alpha_hat);
    }
    let f = 2.0;
    let loud = loud_center(LoudParams::new(-1.0, f)?)?;
    let xi = boundary_quantifier(&loud, &ExponentTuple::new(vec![loud_nu(f)]), &sched, &cfg)?;
    println!("Loud (-1, 2): xi = {:.6} (closed form {})", xi.alpha_hat, loud_xi_closed_form(f).xi);
    Ok(())
}
