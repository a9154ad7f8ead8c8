//! Lyapunov spectra by the Benettin method.
//!
//! The state is integrated together with `n` tangent vectors under the
//! variational equations `V' = J(x) V`. Every `renorm_interval` the tangent
//! frame is re-orthonormalized with modified Gram–Schmidt and the logarithms
//! of the column norms are accumulated. Exponents are the accumulated logs
//! divided by the measured time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{check_state, Linearized, Rk4, VectorField};
use crate::models::{divergence, Glv, ModelKind, State3, SystemParams};

/// Tangent columns shorter than this abort the run.
pub const DEGENERATE_NORM: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovConfig {
    pub step: f64,
    /// Measured time after the transient.
    pub t_total: f64,
    pub transient: f64,
    pub renorm_interval: f64,
}

impl Default for LyapunovConfig {
    fn default() -> Self {
        LyapunovConfig {
            step: 0.005,
            t_total: 5000.0,
            transient: 200.0,
            renorm_interval: 1.0,
        }
    }
}

impl LyapunovConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("step", self.step),
            ("t_total", self.t_total),
            ("renorm_interval", self.renorm_interval),
        ];
        for (what, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(what, format!("must be positive, got {v}")));
            }
        }
        if !(self.transient.is_finite() && self.transient >= 0.0) {
            return Err(Error::invalid("transient", "must be nonnegative"));
        }
        if self.renorm_interval < self.step || self.renorm_interval > self.t_total {
            return Err(Error::invalid(
                "renorm_interval",
                "must lie between the step and the total time",
            ));
        }
        Ok(())
    }

    /// `(transient steps, steps per renormalization, renormalizations)`.
    pub fn schedule(&self) -> (u64, u64, u64) {
        let block = ((self.renorm_interval / self.step).round() as u64).max(1);
        let blocks = ((self.t_total / (block as f64 * self.step)).round() as u64).max(1);
        ((self.transient / self.step).round() as u64, block, blocks)
    }

    /// Time actually covered by the measurement.
    pub fn measured_time(&self) -> f64 {
        let (_, block, blocks) = self.schedule();
        (block * blocks) as f64 * self.step
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovSpectrum {
    /// Final estimates, sorted descending.
    pub exponents: Vec<f64>,
    /// `(time since the transient, running estimates)` after each renormalization.
    pub history: Vec<(f64, Vec<f64>)>,
    pub config: LyapunovConfig,
}

impl LyapunovSpectrum {
    pub fn sum(&self) -> f64 {
        self.exponents.iter().sum()
    }

    pub fn largest(&self) -> f64 {
        self.exponents[0]
    }

    /// Largest spread (max - min) of any running estimate over the last
    /// `fraction` of the history.
    pub fn tail_spread(&self, fraction: f64) -> f64 {
        let n = self.history.len();
        let start = n - ((n as f64 * fraction).ceil() as usize).clamp(1, n);
        let tail = &self.history[start..];
        (0..self.exponents.len())
            .map(|i| {
                let (lo, hi) = tail.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, v)| {
                    (lo.min(v[i]), hi.max(v[i]))
                });
                hi - lo
            })
            .fold(0.0, f64::max)
    }
}

/// State plus row-major `n x n` tangent frame (columns are tangent vectors).
struct Variational<'a, F: ?Sized> {
    field: &'a F,
    n: usize,
    jac: std::cell::RefCell<Vec<f64>>,
}

impl<F: Linearized + ?Sized> VectorField for Variational<'_, F> {
    fn dim(&self) -> usize {
        self.n + self.n * self.n
    }

    fn eval(&self, y: &[f64], dy: &mut [f64]) -> Result<()> {
        let n = self.n;
        let (x, frame) = y.split_at(n);
        let (dx, dframe) = dy.split_at_mut(n);
        self.field.eval(x, dx)?;
        let mut jac = self.jac.borrow_mut();
        self.field.jacobian(x, &mut jac)?;
        for i in 0..n {
            let row = &jac[i * n..(i + 1) * n];
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += row[k] * frame[k * n + j];
                }
                dframe[i * n + j] = acc;
            }
        }
        Ok(())
    }
}

/// Modified Gram–Schmidt on the columns of a row-major `n x n` frame.
/// Returns the norms removed from each column.
pub fn orthonormalize_columns(frame: &mut [f64], n: usize, time: f64) -> Result<Vec<f64>> {
    let mut norms = vec![0.0; n];
    for j in 0..n {
        for i in 0..j {
            let dot: f64 = (0..n).map(|k| frame[k * n + i] * frame[k * n + j]).sum();
            for k in 0..n {
                frame[k * n + j] -= dot * frame[k * n + i];
            }
        }
        let norm = (0..n).map(|k| frame[k * n + j].powi(2)).sum::<f64>().sqrt();
        if norm.is_nan() || norm < DEGENERATE_NORM {
            return Err(Error::DegenerateFrame { time, column: j, norm });
        }
        for k in 0..n {
            frame[k * n + j] /= norm;
        }
        norms[j] = norm;
    }
    Ok(norms)
}

/// Full Lyapunov spectrum of `field` along the orbit from `x0`.
///
/// `initial_frame`, when given, holds `n` tangent vectors; they are
/// orthonormalized before use. The identity frame is used otherwise.
pub fn benettin<F: Linearized + ?Sized>(
    field: &F,
    x0: &[f64],
    config: &LyapunovConfig,
    initial_frame: Option<&[Vec<f64>]>,
) -> Result<LyapunovSpectrum> {
    config.validate()?;
    let n = field.dim();
    if x0.len() != n || x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("initial state", format!("expected {n} finite components")));
    }
    let (transient, block, blocks) = config.schedule();
    let h = config.step;

    let mut y = vec![0.0; n + n * n];
    y[..n].copy_from_slice(x0);
    let mut rk = Rk4::new(n);
    for s in 1..=transient {
        rk.step(field, &mut y[..n], h)?;
        check_state(&y[..n], s as f64 * h)?;
    }

    {
        let frame = &mut y[n..];
        match initial_frame {
            Some(vectors) => {
                if vectors.len() != n || vectors.iter().any(|v| v.len() != n) {
                    return Err(Error::invalid("initial frame", format!("expected {n} vectors of length {n}")));
                }
                for (j, v) in vectors.iter().enumerate() {
                    for k in 0..n {
                        frame[k * n + j] = v[k];
                    }
                }
                orthonormalize_columns(frame, n, 0.0)?;
            }
            None => {
                for j in 0..n {
                    frame[j * n + j] = 1.0;
                }
            }
        }
    }

    let augmented = Variational {
        field,
        n,
        jac: std::cell::RefCell::new(vec![0.0; n * n]),
    };
    let mut rk = Rk4::new(augmented.dim());
    let mut sums = vec![0.0; n];
    let mut history = Vec::with_capacity(blocks as usize);
    let t0 = transient as f64 * h;
    for b in 1..=blocks {
        for s in 1..=block {
            rk.step(&augmented, &mut y, h)?;
            let t = t0 + ((b - 1) * block + s) as f64 * h;
            check_state(&y[..n], t)?;
        }
        let elapsed = (b * block) as f64 * h;
        let norms = orthonormalize_columns(&mut y[n..], n, t0 + elapsed)?;
        for (acc, norm) in sums.iter_mut().zip(&norms) {
            *acc += norm.ln();
        }
        history.push((elapsed, sums.iter().map(|s| s / elapsed).collect()));
    }

    let total = (blocks * block) as f64 * h;
    let mut exponents: Vec<f64> = sums.iter().map(|s| s / total).collect();
    exponents.sort_by(|a, b| b.total_cmp(a));
    Ok(LyapunovSpectrum {
        exponents,
        history,
        config: *config,
    })
}

/// Three-exponent spectrum of a GLV model.
pub fn lyapunov_spectrum(
    kind: ModelKind,
    params: &SystemParams,
    x0: &State3,
    config: &LyapunovConfig,
) -> Result<LyapunovSpectrum> {
    let glv = Glv::new(kind, *params)?;
    benettin(&glv, x0, config, None)
}

/// Time average of `observable` over the same window the Benettin run measures.
///
/// The integral is carried as an extra RK4 component so the quadrature is
/// fourth-order, like the orbit itself.
pub fn orbit_average<F, G>(field: &F, x0: &[f64], config: &LyapunovConfig, observable: G) -> Result<f64>
where
    F: VectorField + ?Sized,
    G: Fn(&[f64]) -> f64,
{
    config.validate()?;
    let n = field.dim();
    let (transient, block, blocks) = config.schedule();
    let h = config.step;
    let mut x = x0.to_vec();
    let mut rk = Rk4::new(n);
    for s in 1..=transient {
        rk.step(field, &mut x, h)?;
        check_state(&x, s as f64 * h)?;
    }
    struct WithIntegral<'a, F: ?Sized, G> {
        field: &'a F,
        observable: G,
    }
    impl<F: VectorField + ?Sized, G: Fn(&[f64]) -> f64> VectorField for WithIntegral<'_, F, G> {
        fn dim(&self) -> usize {
            self.field.dim() + 1
        }
        fn eval(&self, y: &[f64], dy: &mut [f64]) -> Result<()> {
            let n = self.field.dim();
            self.field.eval(&y[..n], &mut dy[..n])?;
            dy[n] = (self.observable)(&y[..n]);
            Ok(())
        }
    }
    let augmented = WithIntegral { field, observable };
    let mut y = x;
    y.push(0.0);
    let mut rk = Rk4::new(n + 1);
    let steps = block * blocks;
    for s in 1..=steps {
        rk.step(&augmented, &mut y, h)?;
        check_state(&y[..n], (transient + s) as f64 * h)?;
    }
    Ok(y[n] / (steps as f64 * h))
}

/// Orbit average of the linear-model divergence; equals the exponent sum.
pub fn mean_divergence(params: &SystemParams, x0: &State3, config: &LyapunovConfig) -> Result<f64> {
    let glv = Glv::linear(*params)?;
    orbit_average(&glv, x0, config, |x| divergence(params, &[x[0], x[1], x[2]]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::from_fn;
    use approx::assert_abs_diff_eq;

    struct Diagonal(Vec<f64>);

    impl VectorField for Diagonal {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn eval(&self, x: &[f64], dx: &mut [f64]) -> Result<()> {
            for ((d, a), xi) in dx.iter_mut().zip(&self.0).zip(x) {
                *d = a * xi;
            }
            Ok(())
        }
    }

    impl Linearized for Diagonal {
        fn jacobian(&self, _: &[f64], jac: &mut [f64]) -> Result<()> {
            let n = self.0.len();
            jac.fill(0.0);
            for i in 0..n {
                jac[i * n + i] = self.0[i];
            }
            Ok(())
        }
    }

    fn short() -> LyapunovConfig {
        LyapunovConfig {
            step: 0.01,
            t_total: 50.0,
            transient: 0.0,
            renorm_interval: 0.5,
        }
    }

    #[test]
    fn linear_flow_exponents_are_its_rates() {
        let field = Diagonal(vec![0.3, -1.0, -2.5]);
        let spec = benettin(&field, &[1.0, 1.0, 1.0], &short(), None).unwrap();
        for (got, want) in spec.exponents.iter().zip([0.3, -1.0, -2.5]) {
            // RK4 reproduces exp(a h) to O((a h)^5)
            assert_abs_diff_eq!(got, &want, epsilon = 1e-7);
        }
        assert_eq!(spec.history.len(), 100);
    }

    #[test]
    fn rotated_frame_gives_same_rates() {
        let field = Diagonal(vec![0.2, -0.7]);
        let c = 0.6f64;
        let frame = vec![vec![c, (1.0 - c * c).sqrt()], vec![-(1.0 - c * c).sqrt(), c]];
        let spec = benettin(&field, &[1.0, 1.0], &short(), Some(&frame)).unwrap();
        // the leading column starts with projection c on the growing axis
        assert_abs_diff_eq!(spec.exponents[0], 0.2 + c.ln() / 50.0, epsilon = 1e-6);
        assert_abs_diff_eq!(spec.sum(), -0.5, epsilon = 1e-9);
    }

    #[test]
    fn collapsing_frame_is_reported() {
        let field = Diagonal(vec![-800.0]);
        let cfg = LyapunovConfig {
            step: 1e-3,
            t_total: 2.0,
            transient: 0.0,
            renorm_interval: 1.0,
        };
        assert!(matches!(
            benettin(&field, &[1.0], &cfg, None),
            Err(Error::DegenerateFrame { column: 0, .. })
        ));
    }

    #[test]
    fn orbit_average_of_constant_observable() {
        let zero = from_fn(2, |_, dx: &mut [f64]| dx.fill(0.0));
        let avg = orbit_average(&zero, &[1.0, 2.0], &short(), |x| x[0] + x[1]).unwrap();
        assert_abs_diff_eq!(avg, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn mgs_produces_orthonormal_columns() {
        let mut m = vec![2.0, 1.0, 0.0, 0.0, 3.0, 1.0, 1.0, 0.0, 4.0];
        let norms = orthonormalize_columns(&mut m, 3, 0.0).unwrap();
        assert_abs_diff_eq!(norms[0], 5f64.sqrt(), epsilon = 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| m[k * 3 + i] * m[k * 3 + j]).sum();
                assert_abs_diff_eq!(dot, if i == j { 1.0 } else { 0.0 }, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn bad_configs() {
        let mut cfg = short();
        cfg.renorm_interval = 100.0;
        assert!(cfg.validate().is_err());
        cfg = short();
        cfg.step = -1.0;
        assert!(cfg.validate().is_err());
    }
}
