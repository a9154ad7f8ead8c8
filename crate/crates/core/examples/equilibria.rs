//! The five equilibria and their linear stability.
//!
//! cargo run --example equilibria

use glv_dynamics::analysis::{classify, equilibria, is_feasible, EQUILIBRIUM_LABELS};
use glv_dynamics::SystemParams;

fn main() {
    let params = SystemParams::CHAOTIC;
    for (label, point) in EQUILIBRIUM_LABELS.iter().zip(equilibria(&params)) {
        let feasible = if is_feasible(&point) { "feasible" } else { "outside the octant" };
        println!("{label} ({feasible})");
        println!("{}\n", classify(&params, &point));
    }
}
