//! Chaotic trajectory from the reference initial state, plus a nearby
//! twin to show sensitive dependence on initial conditions.
//!
//! cargo run --example simulate

use glv_dynamics::{integrate, Glv, IntegrationConfig, SystemParams, REFERENCE_INITIAL_STATE};

fn main() -> glv_dynamics::Result<()> {
    let glv = Glv::linear(SystemParams::CHAOTIC)?;
    let cfg = IntegrationConfig::new(0.005, 300.0).with_record_every(200);
    let a = integrate(&glv, &REFERENCE_INITIAL_STATE, &cfg)?;
    let mut twin = REFERENCE_INITIAL_STATE;
    twin[0] += 1e-3;
    let b = integrate(&glv, &twin, &cfg)?;

    println!("{:>7} {:>10} {:>10} {:>10} {:>12}", "t", "x1", "x2", "x3", "separation");
    for ((t, x), y) in a.iter().zip(&b.states).step_by(5) {
        let sep = x.iter().zip(y).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
        println!("{t:>7.1} {:>10.6} {:>10.6} {:>10.6} {sep:>12.3e}", x[0], x[1], x[2]);
    }

    let (lo, hi) = (0..3).fold(([f64::MAX; 3], [f64::MIN; 3]), |(mut lo, mut hi), i| {
        for v in a.component(i) {
            lo[i] = lo[i].min(v);
            hi[i] = hi[i].max(v);
        }
        (lo, hi)
    });
    println!("range x1 [{:.3}, {:.3}]  x2 [{:.3}, {:.3}]  x3 [{:.3}, {:.3}]", lo[0], hi[0], lo[1], hi[1], lo[2], hi[2]);
    Ok(())
}
