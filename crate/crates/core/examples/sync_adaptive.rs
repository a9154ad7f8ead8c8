//! Adaptive synchronization with unknown p and q, under both update laws.
//!
//! cargo run --release --example sync_adaptive

use glv_dynamics::sync::{adaptive_experiment, AdaptiveState, CoupledState, SyncGains, UpdateLaw};
use glv_dynamics::{IntegrationConfig, SystemParams};

fn main() -> glv_dynamics::Result<()> {
    let params = SystemParams::CHAOTIC;
    let s0 = AdaptiveState::new(CoupledState::new([4.0, 1.4, 1.41], [1.0, 1.414]), 3.9, 4.0);
    let cfg = IntegrationConfig::new(0.005, 500.0).with_record_every(200);
    for law in [UpdateLaw::Lyapunov, UpdateLaw::Literal] {
        let out = adaptive_experiment(&params, &SyncGains::new(0.0038, 2.0), law, &s0, &cfg)?;
        println!("update law {law}:");
        let n = out.errors.len();
        for i in [0, n / 10, n / 2, n - 1] {
            let e = out.errors[i];
            println!(
                "  t = {:>5.0}  e2 = {:+.3e}  e3 = {:+.3e}  P = {:.4}  Q = {:.4}  L = {:.5}",
                out.trajectory.times[i], e.e2, e.e3, out.p_history[i], out.q_history[i], out.lyapunov_history[i]
            );
        }
        println!("  largest L increase between samples {:+.2e}", out.max_lyapunov_increase());
    }
    Ok(())
}
