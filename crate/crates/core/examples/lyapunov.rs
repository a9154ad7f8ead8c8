//! Lyapunov spectrum by Benettin's method, checked against the orbit
//! average of the divergence (the exponents must sum to it).
//!
//! cargo run --release --example lyapunov

use glv_dynamics::analysis::{lyapunov_spectrum, mean_divergence, LyapunovConfig};
use glv_dynamics::{ModelKind, SystemParams, REFERENCE_INITIAL_STATE};

fn main() -> glv_dynamics::Result<()> {
    let cfg = LyapunovConfig {
        t_total: 2000.0,
        ..LyapunovConfig::default()
    };
    for (name, params) in [
        ("chaotic set", SystemParams::CHAOTIC),
        ("spectrum reference set", SystemParams::SPECTRUM_REFERENCE),
    ] {
        let spec = lyapunov_spectrum(ModelKind::Linear, &params, &REFERENCE_INITIAL_STATE, &cfg)?;
        let div = mean_divergence(&params, &REFERENCE_INITIAL_STATE, &cfg)?;
        println!("{name}: (p, q, r) = ({}, {}, {})", params.p, params.q, params.r);
        println!("  exponents       {:+.5} {:+.5} {:+.5}", spec.exponents[0], spec.exponents[1], spec.exponents[2]);
        println!("  sum             {:+.5}", spec.sum());
        println!("  <div H>         {div:+.5}");
        println!("  tail spread L1  {:.2e}", spec.tail_spread(0.2));
    }
    Ok(())
}
