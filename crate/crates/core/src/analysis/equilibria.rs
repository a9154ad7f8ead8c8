use std::fmt;

use num_complex::Complex64;

use super::eigen::{characteristic_polynomial, cubic_roots};
use crate::models::{linear_jacobian, State3, SystemParams};

/// Real parts closer to zero than this are treated as marginal.
pub const MARGINAL_TOLERANCE: f64 = 1e-9;

pub const EQUILIBRIUM_LABELS: [&str; 5] = ["X0", "X1", "X2", "X3", "X4"];

/// The five closed-form equilibria of the linear-response model, in order:
/// trivial, axial, planar, and the two with negative prey.
pub fn equilibria(params: &SystemParams) -> [State3; 5] {
    let SystemParams { p, q, r, .. } = *params;
    let s = (q / p).sqrt();
    let root_pq = (p * q).sqrt();
    [
        [0.0, 0.0, 0.0],
        [1.0, 1.0 + r, 0.0],
        [s, 0.0, (1.0 + r * s) / root_pq],
        [-1.0 / r, 0.0, 0.0],
        [-s, 0.0, (-1.0 + r * s) / root_pq],
    ]
}

/// True when every component is nonnegative.
pub fn is_feasible(point: &State3) -> bool {
    point.iter().all(|&v| v >= 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    StableNode,
    StableFocusNode,
    Saddle,
    UnstableFocus,
    UnstableNode,
    Marginal,
}

impl Classification {
    pub fn from_eigenvalues(eigenvalues: &[Complex64]) -> Self {
        if eigenvalues.iter().any(|z| z.re.abs() < MARGINAL_TOLERANCE) {
            return Classification::Marginal;
        }
        let complex = eigenvalues.iter().any(|z| z.im != 0.0);
        let negative = eigenvalues.iter().filter(|z| z.re < 0.0).count();
        match (negative, complex) {
            (n, false) if n == eigenvalues.len() => Classification::StableNode,
            (n, true) if n == eigenvalues.len() => Classification::StableFocusNode,
            (0, true) => Classification::UnstableFocus,
            (0, false) => Classification::UnstableNode,
            _ => Classification::Saddle,
        }
    }

    pub fn is_stable(self) -> bool {
        matches!(self, Classification::StableNode | Classification::StableFocusNode)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::StableNode => "stable-node",
            Classification::StableFocusNode => "stable-focus-node",
            Classification::Saddle => "saddle",
            Classification::UnstableFocus => "unstable-focus",
            Classification::UnstableNode => "unstable-node",
            Classification::Marginal => "marginal",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub point: State3,
    /// `(c2, c1, c0)` of `λ³ + c2 λ² + c1 λ + c0`.
    pub char_poly: [f64; 3],
    pub eigenvalues: [Complex64; 3],
    pub classification: Classification,
}

impl StabilityReport {
    pub fn is_stable(&self) -> bool {
        self.classification.is_stable()
    }
}

impl fmt::Display for StabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x1, x2, x3] = self.point;
        let [c2, c1, c0] = self.char_poly;
        writeln!(f, "point          ({x1:.6}, {x2:.6}, {x3:.6})")?;
        writeln!(f, "char poly      λ³ + ({c2:.6})λ² + ({c1:.6})λ + ({c0:.6})")?;
        let ev: Vec<String> = self
            .eigenvalues
            .iter()
            .map(|z| {
                if z.im == 0.0 {
                    format!("{:.6}", z.re)
                } else {
                    format!("{:.6}{:+.6}i", z.re, z.im)
                }
            })
            .collect();
        writeln!(f, "eigenvalues    {}", ev.join(", "))?;
        write!(f, "classification {}", self.classification)
    }
}

/// Linear stability of the linear-response model at `point`.
pub fn classify(params: &SystemParams, point: &State3) -> StabilityReport {
    let jac = linear_jacobian(params, point);
    let char_poly = characteristic_polynomial(&jac);
    let eigenvalues = cubic_roots(&char_poly);
    StabilityReport {
        point: *point,
        char_poly,
        eigenvalues,
        classification: Classification::from_eigenvalues(&eigenvalues),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{vector_field, ModelKind};
    use approx::assert_abs_diff_eq;

    const P: SystemParams = SystemParams::CHAOTIC;

    #[test]
    fn closed_form_points_are_equilibria() {
        for params in [P, SystemParams::SPECTRUM_REFERENCE, SystemParams::new(0.4, 5.0, 0.1)] {
            for x in equilibria(&params) {
                let v = vector_field(ModelKind::Linear, &params, &x).unwrap();
                assert!(v.iter().all(|c| c.abs() < 1e-12), "{x:?} -> {v:?}");
            }
        }
    }

    #[test]
    fn axial_and_planar_points() {
        let eq = equilibria(&P);
        assert_eq!(eq[0], [0.0; 3]);
        assert_eq!(eq[1], [1.0, 3.0, 0.0]);
        assert_abs_diff_eq!(eq[2][0], 1.002493, epsilon = 5e-7);
        assert_eq!(eq[2][1], 0.0);
        // (1 + 2 * 1.0024927) / sqrt(8.9553)
        assert_abs_diff_eq!(eq[2][2], 1.0041585, epsilon = 5e-7);
        assert_eq!(
            eq.iter().map(is_feasible).collect::<Vec<_>>(),
            [true, true, true, false, false]
        );
    }

    #[test]
    fn origin_is_always_a_saddle() {
        for q in [0.5, 3.0, 7.0] {
            let params = SystemParams::new(1.7, q, 0.3);
            let rep = classify(&params, &[0.0; 3]);
            assert_eq!(rep.classification, Classification::Saddle);
            let re: Vec<f64> = rep.eigenvalues.iter().map(|z| z.re).collect();
            let mut want = vec![1.0, -1.0, -q];
            want.sort_by(|a, b| b.total_cmp(a));
            for (a, b) in re.iter().zip(&want) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn axial_report() {
        let rep = classify(&P, &[1.0, 3.0, 0.0]);
        let [c2, c1, c0] = rep.char_poly;
        assert_abs_diff_eq!(c2, -1.9851, epsilon = 1e-12);
        assert_abs_diff_eq!(c1, 2.9702, epsilon = 1e-12);
        assert_abs_diff_eq!(c0, 0.0447, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.eigenvalues[0].re, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(rep.eigenvalues[0].im, 2f64.sqrt(), epsilon = 1e-10);
        assert_abs_diff_eq!(rep.eigenvalues[2].re, -0.0149, epsilon = 1e-12);
        assert_eq!(rep.classification, Classification::Saddle);
    }

    #[test]
    fn planar_point_is_a_saddle_focus() {
        // x2-row of the Jacobian is (0, -1 + sqrt(q/p), 0), so one eigenvalue is +0.002493
        let rep = classify(&P, &equilibria(&P)[2]);
        let real: Vec<_> = rep.eigenvalues.iter().filter(|z| z.im == 0.0).collect();
        assert_eq!(real.len(), 1);
        assert_abs_diff_eq!(real[0].re, (3.0f64 / 2.9851).sqrt() - 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.eigenvalues[1].re, -0.5, epsilon = 1e-3);
        assert_abs_diff_eq!(rep.eigenvalues[1].im.abs(), 4.216, epsilon = 1e-3);
        assert_eq!(rep.classification, Classification::Saddle);
    }

    #[test]
    fn classification_table() {
        let c = |v: &[(f64, f64)]| {
            Classification::from_eigenvalues(&v.iter().map(|&(a, b)| Complex64::new(a, b)).collect::<Vec<_>>())
        };
        assert_eq!(c(&[(-1.0, 0.0), (-2.0, 0.0), (-3.0, 0.0)]), Classification::StableNode);
        assert_eq!(c(&[(-1.0, 0.0), (-2.0, 1.0), (-2.0, -1.0)]), Classification::StableFocusNode);
        assert_eq!(c(&[(1.0, 0.0), (2.0, 1.0), (2.0, -1.0)]), Classification::UnstableFocus);
        assert_eq!(c(&[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]), Classification::UnstableNode);
        assert_eq!(c(&[(1.0, 0.0), (-2.0, 0.0), (3.0, 0.0)]), Classification::Saddle);
        assert_eq!(c(&[(-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)]), Classification::Marginal);
    }
}
