//! Slow-manifold residual of the linear-response model.
//!
//! With `λ` the fast (most negative real) eigenvalue of `J(x)`, the left fast
//! eigenvector is taken in cofactor form
//!
//! ```text
//! Z = ( (b-λ)(e-λ),  x1 (e-λ),  p x1² (b-λ) ),   b = -1 + x1,  e = -q + p x1²
//! ```
//!
//! i.e. the cross product of the last two columns of `J - λI`. A point lies
//! on the slow manifold when `x' · Z = 0`.

use crate::error::{Error, Result};
use crate::models::{linear_field, linear_jacobian, State3, SystemParams};

use super::eigen::eigenvalues;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlowManifoldSample {
    pub point: State3,
    pub fast_eigenvalue: f64,
    pub residual: f64,
}

/// Most negative real eigenvalue of the Jacobian at `point`.
pub fn fast_eigenvalue(params: &SystemParams, point: &State3) -> Result<f64> {
    eigenvalues(&linear_jacobian(params, point))
        .iter()
        .filter(|z| z.im == 0.0)
        .map(|z| z.re)
        .min_by(f64::total_cmp)
        .ok_or(Error::NoRealEigenvalue)
}

/// Unnormalized left eigenvector of `J(point)` for eigenvalue `lambda`.
pub fn left_eigenvector(params: &SystemParams, point: &State3, lambda: f64) -> [f64; 3] {
    let mut a = linear_jacobian(params, point);
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= lambda;
    }
    // columns 2 and 3 of (J - λI); the result is orthogonal to every column
    let u = [a[0][1], a[1][1], a[2][1]];
    let v = [a[0][2], a[1][2], a[2][2]];
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

pub fn slow_manifold_residual(params: &SystemParams, point: &State3) -> Result<SlowManifoldSample> {
    let lambda = fast_eigenvalue(params, point)?;
    let z = left_eigenvector(params, point, lambda);
    let flow = linear_field(params, point);
    let residual = flow.iter().zip(&z).map(|(a, b)| a * b).sum();
    Ok(SlowManifoldSample {
        point: *point,
        fast_eigenvalue: lambda,
        residual,
    })
}

/// The residual expanded as a quadratic in `lambda`:
/// `f1 λ² - (f1 (b + e) + f2 x1 + f3 p x1²) λ + b e x1 (1 + r x1)`.
pub fn slow_manifold_polynomial(params: &SystemParams, point: &State3, lambda: f64) -> f64 {
    let SystemParams { p, q, r, .. } = *params;
    let [x1, _, _] = *point;
    let [f1, f2, f3] = linear_field(params, point);
    let b = -1.0 + x1;
    let e = -q + p * x1 * x1;
    let linear = -(f1 * (b + e) + f2 * x1 + f3 * p * x1 * x1);
    let constant = b * e * x1 * (1.0 + r * x1);
    (f1 * lambda + linear) * lambda + constant
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::equilibria;
    use approx::assert_abs_diff_eq;

    const P: SystemParams = SystemParams::CHAOTIC;

    #[test]
    fn equilibrium_has_zero_residual() {
        let x2 = equilibria(&P)[2];
        let s = slow_manifold_residual(&P, &x2).unwrap();
        assert!(s.residual.abs() < 1e-12, "{}", s.residual);
    }

    #[test]
    fn left_eigenvector_annihilates_shifted_jacobian() {
        let x = [1.2, 0.8, 0.9];
        let lambda = fast_eigenvalue(&P, &x).unwrap();
        let z = left_eigenvector(&P, &x, lambda);
        let j = linear_jacobian(&P, &x);
        for col in 0..3 {
            let v: f64 = (0..3).map(|k| z[k] * j[k][col]).sum::<f64>() - lambda * z[col];
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn on_prey_axis_both_forms_agree() {
        let x = [1.0, 0.0, 0.0];
        let s = slow_manifold_residual(&P, &x).unwrap();
        assert_abs_diff_eq!(s.fast_eigenvalue, -0.0149, epsilon = 1e-12);
        let poly = slow_manifold_polynomial(&P, &x, s.fast_eigenvalue);
        assert_abs_diff_eq!(s.residual, poly, epsilon = 1e-8);
    }
}
