//! Active-control synchronization: a gain pair satisfying the sufficient
//! conditions, and the very weak published pair for comparison.
//!
//! cargo run --release --example sync_active

use glv_dynamics::sync::{active_experiment, CoupledState, SyncGains};
use glv_dynamics::{IntegrationConfig, SystemParams, REFERENCE_INITIAL_STATE};

fn main() -> glv_dynamics::Result<()> {
    let params = SystemParams::CHAOTIC;
    let s0 = CoupledState::new(REFERENCE_INITIAL_STATE, [1.0, 1.414]);
    for (gains, t_end) in [(SyncGains::new(1.0, 5.0), 100.0), (SyncGains::new(0.000024, 1.345), 5000.0)] {
        let cfg = IntegrationConfig::new(0.01, t_end).with_record_every(100);
        let out = active_experiment(&params, &gains, &s0, &cfg)?;
        println!("gains ({}, {}):", gains.mu1, gains.mu2);
        println!(
            "  conditions hold: {}  margins ({:+.4}, {:+.4})",
            out.condition.holds, out.condition.margins[0], out.condition.margins[1]
        );
        for w in &out.warnings {
            println!("  warning: {w}");
        }
        let n = out.errors.len();
        for i in [0, n / 4, n / 2, n - 1] {
            let e = out.errors[i];
            println!("  t = {:>7.1}  e2 = {:+.3e}  e3 = {:+.3e}", out.trajectory.times[i], e.e2, e.e3);
        }
        if out.condition.holds {
            println!("  envelope ratio {:.6}", out.envelope_ratio(1e-10));
        }
    }
    Ok(())
}
