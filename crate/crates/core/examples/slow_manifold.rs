//! Slow-manifold residual along the attractor.
//!
//! cargo run --example slow_manifold

use glv_dynamics::analysis::{slow_manifold_polynomial, slow_manifold_residual};
use glv_dynamics::{integrate, Glv, IntegrationConfig, SystemParams, REFERENCE_INITIAL_STATE};

fn main() -> glv_dynamics::Result<()> {
    let params = SystemParams::CHAOTIC;
    let glv = Glv::linear(params)?;
    let traj = integrate(&glv, &REFERENCE_INITIAL_STATE, &IntegrationConfig::new(0.005, 50.0).with_record_every(1000))?;
    println!("{:>5} {:>10} {:>12} {:>12}", "t", "lambda", "residual", "quadratic");
    for (t, x) in traj.iter() {
        let x = [x[0], x[1], x[2]];
        match slow_manifold_residual(&params, &x) {
            Ok(s) => println!(
                "{t:>5.1} {:>10.5} {:>12.5e} {:>12.5e}",
                s.fast_eigenvalue,
                s.residual,
                slow_manifold_polynomial(&params, &x, s.fast_eigenvalue)
            ),
            Err(e) => println!("{t:>5.1} {e}"),
        }
    }
    Ok(())
}
