//! The three-species generalized Lotka–Volterra vector fields.
//!
//! State `x = (x1, x2, x3)` holds prey, middle-predator and top-predator
//! densities. All quantities are dimensionless. Three functional responses
//! are available:
//!
//! ```text
//! Linear      x1' = x1 (1 - x2 + r x1 - p x3 x1)
//!             x2' = x2 (-1 + x1)
//!             x3' = x3 (-q + p x1^2)
//!
//! HollingII   x1' = x1 - x1 x2 / (x1 + d) + r x1^2 - p x1^2 x3
//!             x2' = -x2 + x1 x2 / (x1 + d)
//!             x3' = -q x3 + p x3 x1^2
//!
//! HollingIII  x1' = x1 - x1 x2 + r x1^2 - p x1^2 x3 / (x1^2 + d)
//!             x2' = -x2 + x1 x2
//!             x3' = -q x3 + p x1^2 x3 / (x1^2 + d)
//! ```
//!
//! Negative components are accepted: two of the closed-form equilibria lie
//! outside the positive octant.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{Linearized, VectorField};

pub type State3 = [f64; 3];
pub type Matrix3 = [[f64; 3]; 3];

/// Initial condition used for the reference attractor runs.
pub const REFERENCE_INITIAL_STATE: State3 = [1.0023, 1.0589, 0.6503];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Prey / top-predator coupling.
    pub p: f64,
    /// Top-predator mortality.
    pub q: f64,
    /// Prey self-growth.
    pub r: f64,
    /// Half-saturation constant, read only by the Holling variants.
    #[serde(default)]
    pub d: f64,
}

impl SystemParams {
    /// The chaotic parameter set used throughout (p, q, r) = (2.9851, 3, 2).
    pub const CHAOTIC: SystemParams = SystemParams::new(2.9851, 3.0, 2.0);
    /// Parameter set of the published three-exponent spectrum.
    pub const SPECTRUM_REFERENCE: SystemParams = SystemParams::new(2.0451, 2.129, 2.0);
    pub const HOLLING_II: SystemParams = SystemParams {
        p: 2.514,
        q: 2.9089,
        r: 2.1990507,
        d: 0.00198,
    };
    pub const HOLLING_III: SystemParams = SystemParams {
        p: 7.34,
        q: 2.0,
        r: 0.507,
        d: 3.198,
    };

    pub const fn new(p: f64, q: f64, r: f64) -> Self {
        SystemParams { p, q, r, d: 0.0 }
    }

    pub const fn with_saturation(mut self, d: f64) -> Self {
        self.d = d;
        self
    }

    pub fn validate(&self, kind: ModelKind) -> Result<()> {
        for (name, v) in [("p", self.p), ("q", self.q), ("r", self.r)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid("params", format!("{name} must be positive, got {v}")));
            }
        }
        if kind != ModelKind::Linear && !(self.d.is_finite() && self.d > 0.0) {
            return Err(Error::invalid(
                "params",
                format!("d must be positive for {kind}, got {}", self.d),
            ));
        }
        if !(self.d.is_finite() && self.d >= 0.0) {
            return Err(Error::invalid("params", format!("d must be nonnegative, got {}", self.d)));
        }
        Ok(())
    }
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams::CHAOTIC
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum ModelKind {
    #[default]
    #[serde(rename = "linear")]
    Linear,
    #[serde(rename = "ht2")]
    HollingII,
    #[serde(rename = "ht3")]
    HollingIII,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Linear => "linear",
            ModelKind::HollingII => "ht2",
            ModelKind::HollingIII => "ht3",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(ModelKind::Linear),
            "ht2" | "holling2" => Ok(ModelKind::HollingII),
            "ht3" | "holling3" => Ok(ModelKind::HollingIII),
            other => Err(Error::invalid("model", format!("unknown model kind `{other}`"))),
        }
    }
}

fn saturating_denominator(value: f64, what: &str) -> Result<f64> {
    if value == 0.0 || !value.is_finite() {
        Err(Error::Domain(format!("{what} denominator is {value}")))
    } else {
        Ok(value)
    }
}

/// Linear-response field; kept separate so hot loops avoid the kind dispatch.
#[inline]
pub fn linear_field(params: &SystemParams, x: &State3) -> State3 {
    let SystemParams { p, q, r, .. } = *params;
    let [x1, x2, x3] = *x;
    [
        x1 * (1.0 - x2 + r * x1 - p * x3 * x1),
        x2 * (-1.0 + x1),
        x3 * (-q + p * x1 * x1),
    ]
}

#[inline]
pub fn linear_jacobian(params: &SystemParams, x: &State3) -> Matrix3 {
    let SystemParams { p, q, r, .. } = *params;
    let [x1, x2, x3] = *x;
    [
        [1.0 - x2 + 2.0 * r * x1 - 2.0 * p * x1 * x3, -x1, -p * x1 * x1],
        [x2, -1.0 + x1, 0.0],
        [2.0 * p * x1 * x3, 0.0, -q + p * x1 * x1],
    ]
}

pub fn vector_field(kind: ModelKind, params: &SystemParams, x: &State3) -> Result<State3> {
    let SystemParams { p, q, r, d } = *params;
    let [x1, x2, x3] = *x;
    match kind {
        ModelKind::Linear => Ok(linear_field(params, x)),
        ModelKind::HollingII => {
            let den = saturating_denominator(x1 + d, "x1 + d")?;
            let uptake = x1 * x2 / den;
            Ok([
                x1 - uptake + r * x1 * x1 - p * x1 * x1 * x3,
                -x2 + uptake,
                -q * x3 + p * x3 * x1 * x1,
            ])
        }
        ModelKind::HollingIII => {
            let den = saturating_denominator(x1 * x1 + d, "x1^2 + d")?;
            let predation = p * x1 * x1 * x3 / den;
            Ok([
                x1 - x1 * x2 + r * x1 * x1 - predation,
                -x2 + x1 * x2,
                -q * x3 + predation,
            ])
        }
    }
}

pub fn jacobian(kind: ModelKind, params: &SystemParams, x: &State3) -> Result<Matrix3> {
    let SystemParams { p, q, r, d } = *params;
    let [x1, x2, x3] = *x;
    match kind {
        ModelKind::Linear => Ok(linear_jacobian(params, x)),
        ModelKind::HollingII => {
            let den = saturating_denominator(x1 + d, "x1 + d")?;
            // d/dx1 [x1 / (x1 + d)] = d / (x1 + d)^2
            let slope = d / (den * den);
            Ok([
                [
                    1.0 - x2 * slope + 2.0 * r * x1 - 2.0 * p * x1 * x3,
                    -x1 / den,
                    -p * x1 * x1,
                ],
                [x2 * slope, -1.0 + x1 / den, 0.0],
                [2.0 * p * x1 * x3, 0.0, -q + p * x1 * x1],
            ])
        }
        ModelKind::HollingIII => {
            let den = saturating_denominator(x1 * x1 + d, "x1^2 + d")?;
            let g = x1 * x1 / den;
            let slope = 2.0 * x1 * d / (den * den);
            Ok([
                [1.0 - x2 + 2.0 * r * x1 - p * x3 * slope, -x1, -p * g],
                [x2, -1.0 + x1, 0.0],
                [p * x3 * slope, 0.0, -q + p * g],
            ])
        }
    }
}

/// Divergence of the linear-response field.
pub fn divergence(params: &SystemParams, x: &State3) -> f64 {
    let SystemParams { p, q, r, .. } = *params;
    let [x1, x2, x3] = *x;
    -q - x2 + (2.0 * r + 1.0 + p * x1 - 2.0 * p * x3) * x1
}

/// Pointwise volume contraction test: `(2r + 1 + p x1 - 2p x3) x1 < q + x2`.
pub fn is_dissipative_at(params: &SystemParams, x: &State3) -> bool {
    let SystemParams { p, q, r, .. } = *params;
    let [x1, x2, x3] = *x;
    (2.0 * r + 1.0 + p * x1 - 2.0 * p * x3) * x1 < q + x2
}

/// A GLV model bound to its parameters, usable by the integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Glv {
    pub kind: ModelKind,
    pub params: SystemParams,
}

impl Glv {
    pub fn new(kind: ModelKind, params: SystemParams) -> Result<Self> {
        params.validate(kind)?;
        Ok(Glv { kind, params })
    }

    pub fn linear(params: SystemParams) -> Result<Self> {
        Self::new(ModelKind::Linear, params)
    }
}

impl VectorField for Glv {
    fn dim(&self) -> usize {
        3
    }

    fn eval(&self, x: &[f64], dx: &mut [f64]) -> Result<()> {
        let s = [x[0], x[1], x[2]];
        let v = match self.kind {
            ModelKind::Linear => linear_field(&self.params, &s),
            kind => vector_field(kind, &self.params, &s)?,
        };
        dx.copy_from_slice(&v);
        Ok(())
    }
}

impl Linearized for Glv {
    fn jacobian(&self, x: &[f64], jac: &mut [f64]) -> Result<()> {
        let m = jacobian(self.kind, &self.params, &[x[0], x[1], x[2]])?;
        for (row, chunk) in m.iter().zip(jac.chunks_exact_mut(3)) {
            chunk.copy_from_slice(row);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const P: SystemParams = SystemParams::CHAOTIC;

    #[test]
    fn origin_is_fixed_for_every_kind() {
        assert_eq!(vector_field(ModelKind::Linear, &P, &[0.0; 3]).unwrap(), [0.0; 3]);
        let ht = P.with_saturation(0.5);
        assert_eq!(vector_field(ModelKind::HollingII, &ht, &[0.0; 3]).unwrap(), [0.0; 3]);
        assert_eq!(vector_field(ModelKind::HollingIII, &ht, &[0.0; 3]).unwrap(), [0.0; 3]);
    }

    #[test]
    fn axial_equilibrium_has_zero_flow() {
        let v = vector_field(ModelKind::Linear, &P, &[1.0, 3.0, 0.0]).unwrap();
        assert_eq!(v, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn linear_field_at_unit_state() {
        // Term by term at x = (1, 1, 1):
        // x1' = 1 * (1 - 1 + 2 - 2.9851) = -0.9851
        // x2' = 1 * (-1 + 1) = 0
        // x3' = 1 * (-3 + 2.9851) = -0.0149
        let v = vector_field(ModelKind::Linear, &P, &[1.0, 1.0, 1.0]).unwrap();
        assert_relative_eq!(v[0], -0.9851, epsilon = 1e-15);
        assert_eq!(v[1], 0.0);
        assert_relative_eq!(v[2], -0.0149, epsilon = 1e-15);
    }

    #[test]
    fn jacobian_at_axial_equilibrium() {
        let j = jacobian(ModelKind::Linear, &P, &[1.0, 3.0, 0.0]).unwrap();
        let expected = [[2.0, -1.0, -2.9851], [3.0, 0.0, 0.0], [0.0, 0.0, -0.0149]];
        for (row, want) in j.iter().zip(expected.iter()) {
            for (a, b) in row.iter().zip(want.iter()) {
                assert_relative_eq!(a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn jacobian_at_origin_is_diagonal() {
        let params = SystemParams::new(1.3, 0.7, 4.0);
        let j = jacobian(ModelKind::Linear, &params, &[0.0; 3]).unwrap();
        assert_eq!(j, [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -0.7]]);
    }

    #[test]
    fn divergence_examples() {
        assert_eq!(divergence(&P, &[0.0; 3]), -3.0);
        assert_relative_eq!(divergence(&P, &[1.0, 3.0, 0.0]), 1.9851, epsilon = 1e-12);
        assert!(is_dissipative_at(&P, &[0.0; 3]));
        assert!(!is_dissipative_at(&P, &[1.0, 3.0, 0.0]));
    }

    #[test]
    fn holling_denominator_zero_is_a_domain_error() {
        let ht = P.with_saturation(1.0);
        assert!(matches!(
            vector_field(ModelKind::HollingII, &ht, &[-1.0, 1.0, 1.0]),
            Err(Error::Domain(_))
        ));
        let neg = SystemParams { d: -4.0, ..P };
        assert!(matches!(
            jacobian(ModelKind::HollingIII, &neg, &[2.0, 1.0, 1.0]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn holling_ii_uptake_saturates_monotonically() {
        let x: State3 = [1.0, 1.0, 1.0];
        let mut last = f64::INFINITY;
        for d in [1.0, 0.5, 0.1, 0.01, 1e-3, 1e-6] {
            let gap = (x[0] * x[1] / (x[0] + d) - x[1]).abs();
            assert!(gap < last);
            last = gap;
        }
        assert!(last < 1e-5);
    }

    #[test]
    fn params_validation() {
        assert!(P.validate(ModelKind::Linear).is_ok());
        assert!(P.validate(ModelKind::HollingII).is_err());
        assert!(SystemParams::new(0.0, 1.0, 1.0).validate(ModelKind::Linear).is_err());
        assert!(SystemParams::HOLLING_III.validate(ModelKind::HollingIII).is_ok());
    }

    #[test]
    fn kind_round_trips_through_str() {
        for kind in [ModelKind::Linear, ModelKind::HollingII, ModelKind::HollingIII] {
            assert_eq!(kind.as_str().parse::<ModelKind>().unwrap(), kind);
        }
        assert!("cubic".parse::<ModelKind>().is_err());
    }
}
