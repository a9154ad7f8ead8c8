//! One function per subcommand. Each returns the CSV body, a human report
//! and any warnings; nothing here touches the filesystem.

use std::fmt::Write;

use super::config::{Command, RunConfig};
use super::csv::CsvBuffer;
use crate::analysis::{
    classify, equilibria, is_feasible, lyapunov_spectrum, mean_divergence, LyapunovConfig, EQUILIBRIUM_LABELS,
};
use crate::control::{stabilize_experiment, FeedbackGains};
use crate::error::{Error, Result};
use crate::integrator::{integrate, IntegrationConfig};
use crate::models::{Glv, ModelKind, SystemParams};
use crate::sync::{
    active_experiment, adaptive_experiment, conditional_lyapunov_spectrum, AdaptiveState, CoupledState, SyncGains,
};

/// Separation above which two paired runs count as decorrelated.
pub const SEPARATION_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunOutput {
    pub csv: String,
    pub report: String,
    pub warnings: Vec<String>,
}

pub fn execute(cfg: &RunConfig) -> Result<RunOutput> {
    match cfg.command {
        Command::Simulate => simulate(cfg),
        Command::Lyapunov if cfg.coupled => lyapunov_coupled(cfg),
        Command::Lyapunov => lyapunov(cfg),
        Command::Equilibria => equilibria_report(cfg),
        Command::Stabilize => stabilize(cfg),
        Command::SyncActive => sync_active(cfg),
        Command::SyncAdaptive => sync_adaptive(cfg),
    }
}

fn require_linear(cfg: &RunConfig) -> Result<()> {
    if cfg.model != ModelKind::Linear {
        return Err(Error::invalid(
            "model",
            format!("{} supports only the linear model, got {}", cfg.command, cfg.model),
        ));
    }
    Ok(())
}

fn sync_gains(cfg: &RunConfig) -> Result<SyncGains> {
    match cfg.gains.as_deref() {
        Some([m1, m2]) => Ok(SyncGains::new(*m1, *m2)),
        other => Err(Error::invalid("gains", format!("expected two gains mu1,mu2, got {other:?}"))),
    }
}

fn lyapunov_config(int: &IntegrationConfig, renorm_interval: f64) -> Result<LyapunovConfig> {
    int.validate()?;
    Ok(LyapunovConfig {
        step: int.step,
        t_total: int.t_end - int.transient,
        transient: int.transient,
        renorm_interval,
    })
}

fn simulate(cfg: &RunConfig) -> Result<RunOutput> {
    let glv = Glv::new(cfg.model, cfg.params)?;
    let a = integrate(&glv, &cfg.x0, &cfg.integration)?;
    let SystemParams { p, q, r, d } = cfg.params;
    let mut report = format!("model {} (p={p}, q={q}, r={r}, d={d})\nsamples {}\n", cfg.model, a.len());
    let csv = match cfg.x0_pair {
        None => {
            let mut csv = CsvBuffer::with_header(&["t", "x1", "x2", "x3"]);
            for (t, x) in a.iter() {
                csv.row(&[t, x[0], x[1], x[2]]);
            }
            csv
        }
        Some(x0b) => {
            let b = integrate(&glv, &x0b, &cfg.integration)?;
            let mut csv = CsvBuffer::with_header(&["t", "x1", "x2", "x3", "x1b", "x2b", "x3b", "separation"]);
            let mut t_sep = None;
            for ((t, x), y) in a.iter().zip(&b.states) {
                let sep = x.iter().zip(y).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
                if t_sep.is_none() && sep > SEPARATION_THRESHOLD {
                    t_sep = Some(t);
                }
                csv.row(&[t, x[0], x[1], x[2], y[0], y[1], y[2], sep]);
            }
            match t_sep {
                Some(t) => writeln!(report, "separation exceeds {SEPARATION_THRESHOLD} at t = {t}"),
                None => writeln!(report, "separation stays below {SEPARATION_THRESHOLD}"),
            }
            .ok();
            csv
        }
    };
    if let Some((t, x)) = a.last() {
        writeln!(report, "final state at t = {t}: ({:.9}, {:.9}, {:.9})", x[0], x[1], x[2]).ok();
    }
    Ok(RunOutput {
        csv: csv.into_string(),
        report,
        warnings: Vec::new(),
    })
}

fn history_csv(history: &[(f64, Vec<f64>)], n: usize, every: usize) -> String {
    let names: Vec<String> = (1..=n).map(|i| format!("L{i}")).collect();
    let mut header = vec!["t"];
    header.extend(names.iter().map(String::as_str));
    let mut csv = CsvBuffer::with_header(&header);
    let last = history.len().saturating_sub(1);
    for (i, (t, est)) in history.iter().enumerate() {
        if (i + 1) % every != 0 && i != last {
            continue;
        }
        let mut sorted = est.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let mut row = vec![*t];
        row.extend(sorted);
        csv.row(&row);
    }
    csv.into_string()
}

fn lyapunov(cfg: &RunConfig) -> Result<RunOutput> {
    let lc = lyapunov_config(&cfg.integration, cfg.renorm_interval)?;
    let spec = lyapunov_spectrum(cfg.model, &cfg.params, &cfg.x0, &lc)?;
    let mut report = String::new();
    let ex = &spec.exponents;
    write!(
        report,
        "lyapunov exponents: {:+.6} {:+.6} {:+.6}  sum {:+.6}",
        ex[0],
        ex[1],
        ex[2],
        spec.sum()
    )
    .ok();
    if cfg.model == ModelKind::Linear {
        let div = mean_divergence(&cfg.params, &cfg.x0, &lc)?;
        write!(report, "  mean divergence {div:+.6}").ok();
    }
    report.push('\n');
    Ok(RunOutput {
        csv: history_csv(&spec.history, 3, cfg.integration.record_every),
        report,
        warnings: Vec::new(),
    })
}

fn lyapunov_coupled(cfg: &RunConfig) -> Result<RunOutput> {
    require_linear(cfg)?;
    let gains = sync_gains(cfg)?;
    let lc = lyapunov_config(&cfg.integration, cfg.renorm_interval)?;
    let s0 = CoupledState::new(cfg.x0, cfg.response_x0.unwrap_or([1.0, 1.414]));
    let cs = conditional_lyapunov_spectrum(&cfg.params, &gains, &s0, &lc)?;
    let ex = &cs.spectrum.exponents;
    let mut report = format!(
        "conditional lyapunov exponents: {}\n",
        ex.iter().map(|v| format!("{v:+.6}")).collect::<Vec<_>>().join(" ")
    );
    report.push_str(&cs.comparison_table());
    let mut warnings = Vec::new();
    if ex.iter().any(|v| *v >= 0.0) {
        warnings.push("not all conditional exponents are negative".to_string());
    }
    Ok(RunOutput {
        csv: history_csv(&cs.spectrum.history, 5, cfg.integration.record_every),
        report,
        warnings,
    })
}

fn equilibria_report(cfg: &RunConfig) -> Result<RunOutput> {
    require_linear(cfg)?;
    cfg.params.validate(ModelKind::Linear)?;
    let mut csv = CsvBuffer::with_header(&[
        "label",
        "x1",
        "x2",
        "x3",
        "feasible",
        "c2",
        "c1",
        "c0",
        "re1",
        "im1",
        "re2",
        "im2",
        "re3",
        "im3",
        "classification",
    ]);
    let mut report = String::new();
    for (label, point) in EQUILIBRIUM_LABELS.iter().zip(equilibria(&cfg.params)) {
        let rep = classify(&cfg.params, &point);
        let feasible = is_feasible(&point);
        let mut fields = vec![label.to_string()];
        fields.extend(point.iter().map(|v| super::csv::number(*v)));
        fields.push(feasible.to_string());
        fields.extend(rep.char_poly.iter().map(|v| super::csv::number(*v)));
        for z in rep.eigenvalues {
            fields.push(super::csv::number(z.re));
            fields.push(super::csv::number(z.im));
        }
        fields.push(rep.classification.to_string());
        csv.raw_row(&fields);

        if feasible {
            writeln!(report, "{label} (feasible)\n{rep}\n").ok();
        } else {
            writeln!(
                report,
                "{label} ({:.6}, {:.6}, {:.6}) outside the positive octant\n",
                point[0], point[1], point[2]
            )
            .ok();
        }
    }
    Ok(RunOutput {
        csv: csv.into_string(),
        report,
        warnings: Vec::new(),
    })
}

fn stabilize(cfg: &RunConfig) -> Result<RunOutput> {
    require_linear(cfg)?;
    let gains = match cfg.gains.as_deref() {
        Some([a, b, c]) => FeedbackGains::new(*a, *b, *c),
        other => return Err(Error::invalid("gains", format!("expected three gains, got {other:?}"))),
    };
    let target = cfg.target.unwrap_or(equilibria(&cfg.params)[1]);
    let out = stabilize_experiment(&cfg.params, &gains, &target, &cfg.x0, &cfg.integration)?;
    let mut csv = CsvBuffer::with_header(&["t", "x1", "x2", "x3", "err_norm"]);
    for ((t, x), e) in out.trajectory.iter().zip(&out.error_norms) {
        csv.row(&[t, x[0], x[1], x[2], *e]);
    }
    let g = out.gain_report;
    let mut report = format!(
        "gain inequalities {} (margins {:+.6}, {:+.6}, {:+.6})\nfinal error {:.6e}: {}\n",
        if g.valid { "satisfied" } else { "violated" },
        g.margins[0],
        g.margins[1],
        g.margins[2],
        out.final_error,
        if out.converged() { "converged" } else { "not converged" },
    );
    if let Some(t) = out.converged_at {
        writeln!(report, "error first below tolerance at t = {t}").ok();
    }
    Ok(RunOutput {
        csv: csv.into_string(),
        report,
        warnings: out.warnings,
    })
}

fn sync_active(cfg: &RunConfig) -> Result<RunOutput> {
    require_linear(cfg)?;
    let gains = sync_gains(cfg)?;
    let s0 = CoupledState::new(cfg.x0, cfg.response_x0.unwrap_or([1.0, 1.414]));
    let out = active_experiment(&cfg.params, &gains, &s0, &cfg.integration)?;
    let mut csv = CsvBuffer::with_header(&["t", "x1d", "x2d", "x3d", "x2r", "x3r", "e2", "e3"]);
    for ((t, s), e) in out.trajectory.iter().zip(&out.errors) {
        csv.row(&[t, s[0], s[1], s[2], s[3], s[4], e.e2, e.e3]);
    }
    let mut report = format!(
        "sync conditions {} (margins {:+.6}, {:+.6})\nfinal error {:.6e}: {}\n",
        if out.condition.holds { "hold" } else { "violated" },
        out.condition.margins[0],
        out.condition.margins[1],
        out.final_error,
        if out.synchronized() { "synchronized" } else { "not synchronized" },
    );
    if let Some(t) = out.converged_at {
        writeln!(report, "error first below tolerance at t = {t}").ok();
    }
    Ok(RunOutput {
        csv: csv.into_string(),
        report,
        warnings: out.warnings,
    })
}

fn sync_adaptive(cfg: &RunConfig) -> Result<RunOutput> {
    require_linear(cfg)?;
    let gains = sync_gains(cfg)?;
    let [p0, q0] = cfg.estimates_x0.unwrap_or([3.9, 4.0]);
    let s0 = AdaptiveState::new(CoupledState::new(cfg.x0, cfg.response_x0.unwrap_or([1.0, 1.414])), p0, q0);
    let out = adaptive_experiment(&cfg.params, &gains, cfg.update_law, &s0, &cfg.integration)?;
    let mut csv = CsvBuffer::with_header(&["t", "x1d", "x2d", "x3d", "x2r", "x3r", "e2", "e3", "P", "Q", "Lyap"]);
    for (i, (t, s)) in out.trajectory.iter().enumerate() {
        let e = out.errors[i];
        csv.row(&[t, s[0], s[1], s[2], s[3], s[4], e.e2, e.e3, s[5], s[6], out.lyapunov_history[i]]);
    }
    let last = out.errors.last().copied();
    let mut report = format!("update law {}\n", out.law);
    if let Some(e) = last {
        writeln!(
            report,
            "final errors e2 {:+.6e} e3 {:+.6e}; estimates P {:.6} Q {:.6}",
            e.e2,
            e.e3,
            out.p_history.last().unwrap_or(&f64::NAN),
            out.q_history.last().unwrap_or(&f64::NAN)
        )
        .ok();
    }
    writeln!(report, "largest Lyapunov-function increase per sample {:+.3e}", out.max_lyapunov_increase()).ok();
    writeln!(
        report,
        "{}",
        if out.final_error < crate::sync::SYNC_TOLERANCE { "synchronized" } else { "not synchronized" }
    )
    .ok();
    Ok(RunOutput {
        csv: csv.into_string(),
        report,
        warnings: Vec::new(),
    })
}
