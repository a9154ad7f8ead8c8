//! Linear feedback stabilization of the axial equilibrium (1, 1 + r, 0).
//!
//! cargo run --example stabilize

use glv_dynamics::analysis::equilibria;
use glv_dynamics::control::{stabilize_experiment, validate_gains, FeedbackGains};
use glv_dynamics::{IntegrationConfig, SystemParams, REFERENCE_INITIAL_STATE};

fn main() -> glv_dynamics::Result<()> {
    let params = SystemParams::CHAOTIC;
    let target = equilibria(&params)[1];

    for g in [FeedbackGains::new(1.0, 1.0, 1.0), FeedbackGains::new(3.0, 2.0, 1.0), FeedbackGains::new(10.0, 5.0, 5.0)] {
        let rep = validate_gains(&params, &g);
        println!(
            "gains {:?}: valid {} margins [{:+.4}, {:+.4}, {:+.4}]",
            g.as_array(),
            rep.valid,
            rep.margins[0],
            rep.margins[1],
            rep.margins[2]
        );
    }

    let gains = FeedbackGains::new(10.0, 5.0, 5.0);
    let cfg = IntegrationConfig::new(0.005, 200.0);
    let out = stabilize_experiment(&params, &gains, &target, &REFERENCE_INITIAL_STATE, &cfg)?;
    for (t, e) in out.trajectory.times.iter().zip(&out.error_norms).step_by(200).take(8) {
        println!("t = {t:>5.1}  |x - X1| = {e:.3e}");
    }
    println!("final error {:.3e}, below 1e-6 from t = {:?}", out.final_error, out.converged_at);
    println!("monotone decay over the second half: {}", out.decays_monotonically(0.5));
    Ok(())
}
