//! Holling type II and III variants.
//!
//! cargo run --example holling

use glv_dynamics::{integrate, Glv, IntegrationConfig, ModelKind, SystemParams, REFERENCE_INITIAL_STATE};

fn main() -> glv_dynamics::Result<()> {
    let ht2 = Glv::new(ModelKind::HollingII, SystemParams::HOLLING_II)?;
    let traj = integrate(&ht2, &[1.78, 0.502, 1.01], &IntegrationConfig::new(0.005, 1000.0).with_record_every(200))?;
    let (t, x) = traj.last().expect("non-empty");
    println!("Holling II at t = {t}: ({:.6}, {:.6}, {:.6})", x[0], x[1], x[2]);

    let ht3 = Glv::new(ModelKind::HollingIII, SystemParams::HOLLING_III)?;
    match integrate(&ht3, &REFERENCE_INITIAL_STATE, &IntegrationConfig::new(0.005, 1000.0)) {
        Ok(traj) => println!("Holling III stays bounded over {} samples", traj.len()),
        Err(e) => println!("Holling III: {e}"),
    }
    Ok(())
}
