//! Equilibria and their stability, Lyapunov spectra, the slow-manifold
//! residual and the existence/uniqueness contraction constant.

pub mod eigen;
mod equilibria;
pub mod lyapunov;
mod slow_manifold;

pub use equilibria::{
    classify, equilibria, is_feasible, Classification, StabilityReport, EQUILIBRIUM_LABELS, MARGINAL_TOLERANCE,
};
pub use lyapunov::{benettin, lyapunov_spectrum, mean_divergence, orbit_average, LyapunovConfig, LyapunovSpectrum};
pub use slow_manifold::{
    fast_eigenvalue, left_eigenvector, slow_manifold_polynomial, slow_manifold_residual, SlowManifoldSample,
};

use crate::error::{Error, Result};
use crate::models::SystemParams;

/// Lipschitz-type contraction constant on the box `max |x_i| <= bound` over
/// a time interval of length `horizon`:
///
/// `K = T max(1 + 2M + 2rM + 4pM², 1 + 2M, q + 2pM²)`.
pub fn contraction_constant(params: &SystemParams, bound: f64, horizon: f64) -> Result<f64> {
    if !(bound > 0.0 && horizon > 0.0) {
        return Err(Error::invalid("contraction bounds", "M and T must be positive"));
    }
    let SystemParams { p, q, r, .. } = *params;
    let m = bound;
    let rates = [
        1.0 + 2.0 * m + 2.0 * r * m + 4.0 * p * m * m,
        1.0 + 2.0 * m,
        q + 2.0 * p * m * m,
    ];
    Ok(horizon * rates.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// Whether the solution is unique on that interval (`K < 1`).
pub fn is_contraction(constant: f64) -> bool {
    constant < 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn contraction_constant_examples() {
        let p = SystemParams::CHAOTIC;
        // branches at M = 1: 1+2+4+4*2.9851 = 18.9404, 3, 3+2*2.9851 = 8.9702
        let k = contraction_constant(&p, 1.0, 0.01).unwrap();
        assert_abs_diff_eq!(k, 0.189404, epsilon = 1e-12);
        assert!(is_contraction(k));

        let boundary = contraction_constant(&p, 1.0, 1.0 / 18.9404).unwrap();
        assert_abs_diff_eq!(boundary, 1.0, epsilon = 1e-12);

        let tiny = contraction_constant(&p, 5.0, 1e-12).unwrap();
        assert!(tiny < 1e-9);

        assert!(contraction_constant(&p, 0.0, 1.0).is_err());
    }
}
