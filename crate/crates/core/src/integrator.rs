//! Fixed-step classical Runge–Kutta integration with trajectory recording.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::SystemParams;

/// Any component beyond this magnitude aborts the integration.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

/// An autonomous vector field `x' = f(x)` on `R^dim`.
pub trait VectorField {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64], dx: &mut [f64]) -> Result<()>;
}

/// A vector field with an analytic Jacobian, stored row-major in `jac`.
pub trait Linearized: VectorField {
    fn jacobian(&self, x: &[f64], jac: &mut [f64]) -> Result<()>;
}

impl<T: VectorField + ?Sized> VectorField for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn eval(&self, x: &[f64], dx: &mut [f64]) -> Result<()> {
        (**self).eval(x, dx)
    }
}

impl<T: Linearized + ?Sized> Linearized for &T {
    fn jacobian(&self, x: &[f64], jac: &mut [f64]) -> Result<()> {
        (**self).jacobian(x, jac)
    }
}

/// Adapts a closure into a [`VectorField`].
pub struct FnField<F> {
    dim: usize,
    f: F,
}

pub fn from_fn<F>(dim: usize, f: F) -> FnField<F>
where
    F: Fn(&[f64], &mut [f64]),
{
    FnField { dim, f }
}

impl<F> VectorField for FnField<F>
where
    F: Fn(&[f64], &mut [f64]),
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64], dx: &mut [f64]) -> Result<()> {
        (self.f)(x, dx);
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationConfig {
    /// Time step `h`.
    pub step: f64,
    pub t_end: f64,
    /// Record every n-th step.
    pub record_every: usize,
    /// Time integrated but not recorded.
    pub transient: f64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        IntegrationConfig {
            step: 0.005,
            t_end: 1000.0,
            record_every: 1,
            transient: 0.0,
        }
    }
}

impl IntegrationConfig {
    pub fn new(step: f64, t_end: f64) -> Self {
        IntegrationConfig {
            step,
            t_end,
            ..Default::default()
        }
    }

    pub fn with_transient(mut self, transient: f64) -> Self {
        self.transient = transient;
        self
    }

    pub fn with_record_every(mut self, record_every: usize) -> Self {
        self.record_every = record_every;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::invalid("step", format!("must be positive, got {}", self.step)));
        }
        if !(self.transient.is_finite() && self.transient >= 0.0) {
            return Err(Error::invalid(
                "transient",
                format!("must be nonnegative, got {}", self.transient),
            ));
        }
        if !(self.t_end.is_finite() && self.t_end > self.transient) {
            return Err(Error::invalid(
                "t_end",
                format!("must exceed transient ({}), got {}", self.transient, self.t_end),
            ));
        }
        if self.record_every == 0 {
            return Err(Error::invalid("record_every", "must be at least 1"));
        }
        Ok(())
    }

    /// Step indices `(first recorded, last)`.
    pub fn step_range(&self) -> (u64, u64) {
        (
            (self.transient / self.step).round() as u64,
            (self.t_end / self.step).round() as u64,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub model: String,
    pub params: Option<SystemParams>,
    pub config: IntegrationConfig,
}

/// Time-stamped states on a uniform grid of spacing `step * record_every`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, Vec::len)
    }

    pub fn last(&self) -> Option<(f64, &[f64])> {
        Some((*self.times.last()?, self.states.last()?.as_slice()))
    }

    pub fn component(&self, index: usize) -> impl Iterator<Item = f64> + '_ {
        self.states.iter().map(move |s| s[index])
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.times.iter().copied().zip(self.states.iter().map(Vec::as_slice))
    }
}

/// Reusable RK4 stage buffers.
#[derive(Debug, Clone)]
pub struct Rk4 {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    stage: Vec<f64>,
}

impl Rk4 {
    pub fn new(dim: usize) -> Self {
        Rk4 {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            stage: vec![0.0; dim],
        }
    }

    /// Advances `x` in place by one step of size `h`.
    pub fn step<F: VectorField + ?Sized>(&mut self, f: &F, x: &mut [f64], h: f64) -> Result<()> {
        let half = 0.5 * h;
        f.eval(x, &mut self.k1)?;
        for ((s, xi), k) in self.stage.iter_mut().zip(x.iter()).zip(&self.k1) {
            *s = xi + half * k;
        }
        f.eval(&self.stage, &mut self.k2)?;
        for ((s, xi), k) in self.stage.iter_mut().zip(x.iter()).zip(&self.k2) {
            *s = xi + half * k;
        }
        f.eval(&self.stage, &mut self.k3)?;
        for ((s, xi), k) in self.stage.iter_mut().zip(x.iter()).zip(&self.k3) {
            *s = xi + h * k;
        }
        f.eval(&self.stage, &mut self.k4)?;
        let sixth = h / 6.0;
        for (i, xi) in x.iter_mut().enumerate() {
            *xi += sixth * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
        Ok(())
    }
}

/// One classical RK4 step from `x`.
pub fn rk4_step<F: VectorField + ?Sized>(f: &F, x: &[f64], h: f64) -> Result<Vec<f64>> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::invalid("step", format!("must be positive, got {h}")));
    }
    let mut out = x.to_vec();
    Rk4::new(x.len()).step(f, &mut out, h)?;
    check_state(&out, h)?;
    Ok(out)
}

pub(crate) fn check_state(x: &[f64], time: f64) -> Result<()> {
    for &v in x {
        if !v.is_finite() {
            return Err(Error::NonFinite { time });
        }
        if v.abs() > DIVERGENCE_LIMIT {
            return Err(Error::Diverged {
                time,
                magnitude: v.abs(),
            });
        }
    }
    Ok(())
}

fn check_initial(x0: &[f64], dim: usize) -> Result<()> {
    if x0.len() != dim {
        return Err(Error::invalid(
            "initial state",
            format!("expected {dim} components, got {}", x0.len()),
        ));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("initial state", "components must be finite"));
    }
    Ok(())
}

/// Integrates without storing, handing each recorded sample to `observe`.
/// Returns the final state.
pub fn integrate_with<F, O>(f: &F, x0: &[f64], config: &IntegrationConfig, mut observe: O) -> Result<Vec<f64>>
where
    F: VectorField + ?Sized,
    O: FnMut(f64, &[f64]),
{
    config.validate()?;
    check_initial(x0, f.dim())?;
    let (first, last) = config.step_range();
    let every = config.record_every as u64;
    let h = config.step;
    let mut rk = Rk4::new(x0.len());
    let mut x = x0.to_vec();
    if first == 0 {
        observe(0.0, &x);
    }
    for n in 1..=last {
        rk.step(f, &mut x, h)?;
        let t = n as f64 * h;
        check_state(&x, t)?;
        if n >= first && (n - first) % every == 0 {
            observe(t, &x);
        }
    }
    Ok(x)
}

/// Integrates `f` from `x0` and records the trajectory.
pub fn integrate<F: VectorField + ?Sized>(f: &F, x0: &[f64], config: &IntegrationConfig) -> Result<Trajectory> {
    let mut times = Vec::new();
    let mut states = Vec::new();
    integrate_with(f, x0, config, |t, x| {
        times.push(t);
        states.push(x.to_vec());
    })?;
    Ok(Trajectory {
        times,
        states,
        meta: TrajectoryMeta {
            model: "custom".to_string(),
            params: None,
            config: *config,
        },
    })
}
