//! Randomized checks of the operator identities, worst error per identity.

use periodlab::experiments::identity_suite;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let mut worst: Vec<(&str, f64)> = Vec::new();
    for c in identity_suite(seed, 5) {
        match worst.iter_mut().find(|w| w.0 == c.identity) {
            Some(w) => w.1 = w.1.max(c.rel_err),
            None => worst.push((c.identity, c.rel_err)),
        }
    }
    for (name, e) in worst {
        println!("{name:<28} {e:.2e}");
    }
}
