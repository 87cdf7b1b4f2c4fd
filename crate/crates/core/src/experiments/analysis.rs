use log::warn;
use thiserror::Error;

use super::probe::RunRecord;
use super::sweep::SweepResult;
use crate::shell::{ExtremalClass, ExtremalTag};

/// Least-squares line through `(log ε, log D)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    /// Fitted slope.
    pub p: f64,
    /// Fitted `log C`.
    pub intercept: f64,
    pub r_squared: f64,
    /// `log D − (intercept + p log ε)` per used point.
    pub residuals: Vec<f64>,
    /// `(ε, D)` pairs that entered the fit.
    pub points: Vec<(f64, f64)>,
    /// Epsilons left out (zero distance or failed run).
    pub excluded: Vec<f64>,
}

impl ExponentFit {
    pub fn prefactor(&self) -> f64 {
        self.intercept.exp()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("exponent fit refused: {usable} usable points, need at least 3")]
    Refused { usable: usize },
}

/// Ordinary least squares of `log d` against `log ε`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<ExponentFit, FitError> {
    let mut used = Vec::new();
    let mut excluded = Vec::new();
    for &(eps, d) in points {
        if eps > 0.0 && d > 0.0 && eps.is_finite() && d.is_finite() {
            used.push((eps, d));
        } else {
            warn!("excluding point eps = {eps:e}, distance = {d:e} from exponent fit");
            excluded.push(eps);
        }
    }
    if used.len() < 3 {
        return Err(FitError::Refused { usable: used.len() });
    }
    let xs: Vec<f64> = used.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = used.iter().map(|p| p.1.ln()).collect();
    let m = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / m;
    let ybar = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let syy: f64 = ys.iter().map(|y| (y - ybar).powi(2)).sum();
    let p = sxy / sxx;
    let intercept = ybar - p * xbar;
    let residuals: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - (intercept + p * x)).collect();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(ExponentFit { p, intercept, r_squared, residuals, points: used, excluded })
}

/// Fits `sup_distance ~ C ε^p` over the successful runs of a sweep.
pub fn fit_exponent(sweep: &SweepResult) -> Result<ExponentFit, FitError> {
    let mut points = Vec::new();
    let mut failed = Vec::new();
    for entry in &sweep.entries {
        match &entry.outcome {
            Ok(r) => points.push((entry.epsilon, r.sup_distance)),
            Err(_) => failed.push(entry.epsilon),
        }
    }
    let mut fit = fit_power_law(&points)?;
    fit.excluded.extend(failed);
    Ok(fit)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainRow {
    pub t: f64,
    /// `|I(ω) − I(Pω)|`.
    pub shell_gap: f64,
    /// `|I(ω) − I(P*ω)|`.
    pub pstar_gap: f64,
    /// `|I(P*ω₀) − I(P*ω(t))|`.
    pub pstar_drift: f64,
    pub shell_gap_ratio: f64,
    pub pstar_gap_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub rows: Vec<ChainRow>,
    /// Times where `pstar_drift > multiple · ε`.
    pub flagged: Vec<f64>,
    pub multiple: f64,
    /// `max_t |I(ω(t)) − I(ω₀)|`.
    pub casimir_drift: f64,
    pub max_shell_gap_ratio: f64,
    pub max_pstar_gap_ratio: f64,
    pub max_pstar_drift: f64,
}

fn gap_ratio(gap: f64, perp: f64) -> f64 {
    if perp > 0.0 {
        gap / perp
    } else if gap <= 1e-12 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Tracks the three gaps of the Casimir argument along a run.
pub fn inequality_chain_monitor(record: &RunRecord, multiple: f64) -> ChainReport {
    let first = record.samples.first();
    let i0 = first.map_or(0.0, |s| s.casimir_i);
    let pstar0 = first.map_or(0.0, |s| s.casimir_i_pstar);
    let mut rows = Vec::with_capacity(record.samples.len());
    let mut flagged = Vec::new();
    let mut casimir_drift = 0.0f64;
    for s in &record.samples {
        let shell_gap = (s.casimir_i - s.casimir_i_shell).abs();
        let pstar_gap = (s.casimir_i - s.casimir_i_pstar).abs();
        let pstar_drift = (pstar0 - s.casimir_i_pstar).abs();
        casimir_drift = casimir_drift.max((s.casimir_i - i0).abs());
        if pstar_drift > multiple * record.epsilon {
            flagged.push(s.t);
        }
        rows.push(ChainRow {
            t: s.t,
            shell_gap,
            pstar_gap,
            pstar_drift,
            shell_gap_ratio: gap_ratio(shell_gap, s.perp_norm),
            pstar_gap_ratio: gap_ratio(pstar_gap, s.perp_norm),
        });
    }
    let max_of = |f: fn(&ChainRow) -> f64| rows.iter().map(f).fold(0.0f64, f64::max);
    ChainReport {
        max_shell_gap_ratio: max_of(|r| r.shell_gap_ratio),
        max_pstar_gap_ratio: max_of(|r| r.pstar_gap_ratio),
        max_pstar_drift: max_of(|r| r.pstar_drift),
        rows,
        flagged,
        multiple,
        casimir_drift,
    }
}

/// Default slack on the exponent floors.
pub const DEFAULT_EXPONENT_DELTA: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyVerdict {
    pub pass: bool,
    pub observed_p: f64,
    pub required_p: f64,
    pub tag: ExtremalTag,
}

/// Non-extremal angles need `p ≥ 1 − δ`; extremal ones need `p ≥ ½ − δ`.
/// The observed slope is recorded either way.
pub fn theorem_consistency(fit: &ExponentFit, cls: &ExtremalClass, delta: f64) -> ConsistencyVerdict {
    let floor = match cls.tag {
        ExtremalTag::NonExtremal => 1.0,
        ExtremalTag::Extremal => 0.5,
    };
    let required_p = floor - delta;
    ConsistencyVerdict { pass: fit.p >= required_p, observed_p: fit.p, required_p, tag: cls.tag }
}
