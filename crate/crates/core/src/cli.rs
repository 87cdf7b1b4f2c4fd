//! `simulate`, `sweep` and `verify` commands. Each returns a process exit code.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{error, info, warn};
use serde_json::json;

use crate::experiments::{
    fit_exponent, inequality_chain_monitor, run_stability_probe, sweep_epsilon, theorem_consistency,
    ProbeError, RunRecord, DEFAULT_EXPONENT_DELTA,
};
use crate::io::{format_float, write_checkpoint, write_diagnostics, RunConfig, CSV_SCHEMA_VERSION};
use crate::shell::{classify_extremal, DEFAULT_EXTREMAL_TOL};
use crate::spectral::inverse_transform;
use crate::verify::verify_and_report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_BLOWUP: i32 = 2;
pub const EXIT_FIT_REFUSED: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

/// Multiple of ε above which the phase-stripped Casimir drift is flagged.
const CHAIN_FLAG_MULTIPLE: f64 = 100.0;

pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const CHECKPOINT_FILE: &str = "final.w2s";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const CONFIG_ECHO_FILE: &str = "config.json";
pub const FIT_SUMMARY_CSV: &str = "fit_summary.csv";
pub const FIT_SUMMARY_TXT: &str = "fit_summary.txt";

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

fn load(config: &Path, overrides: &Overrides) -> Result<RunConfig, i32> {
    let mut cfg = RunConfig::load(config).map_err(|e| {
        error!("{e}");
        eprintln!("config error: {e}");
        EXIT_CONFIG
    })?;
    if let Some(out) = &overrides.out {
        cfg.output_dir = out.clone();
    }
    if let Some(w) = overrides.workers {
        if w == 0 {
            eprintln!("config error: --workers must be >= 1");
            return Err(EXIT_CONFIG);
        }
        cfg.workers = w;
    }
    Ok(cfg)
}

fn io_fail(what: &str, e: impl std::fmt::Display) -> i32 {
    eprintln!("error writing {what}: {e}");
    EXIT_CONFIG
}

fn record_summary(record: &RunRecord) -> serde_json::Value {
    let chain = inequality_chain_monitor(record, CHAIN_FLAG_MULTIPLE);
    json!({
        "completed": record.completed,
        "last_finite_t": record.samples.last().map(|s| s.t),
        "samples": record.samples.len(),
        "sup_distance": record.sup_distance,
        "initial_distance": record.initial_distance(),
        "drift_energy": record.drifts.energy,
        "drift_enstrophy": record.drifts.enstrophy,
        "drift_casimir_I": record.drifts.casimir_i,
        "sqrt2_ratio": record.sqrt2_ratio,
        "chi_active": record.chi_active,
        "cfl_violations": record.cfl_violations,
        "chain_max_shell_gap_ratio": chain.max_shell_gap_ratio,
        "chain_max_pstar_drift": chain.max_pstar_drift,
        "chain_flagged_times": chain.flagged.len(),
    })
}

/// Writes the CSV, checkpoint, config echo and manifest for one run.
fn write_run(dir: &Path, cfg: &RunConfig, record: &RunRecord, status: &str, wall: f64) -> Result<(), i32> {
    fs::create_dir_all(dir).map_err(|e| io_fail("output directory", e))?;
    write_diagnostics(dir.join(DIAGNOSTICS_FILE), &record.samples).map_err(|e| io_fail(DIAGNOSTICS_FILE, e))?;
    write_checkpoint(&inverse_transform(&record.final_state), dir.join(CHECKPOINT_FILE))
        .map_err(|e| io_fail(CHECKPOINT_FILE, e))?;
    fs::write(dir.join(CONFIG_ECHO_FILE), cfg.to_json()).map_err(|e| io_fail(CONFIG_ECHO_FILE, e))?;
    let manifest = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "csv_schema": CSV_SCHEMA_VERSION,
        "status": status,
        "wall_time_s": wall,
        "epsilon": record.epsilon,
        "theta": record.theta,
        "horizon": record.horizon,
        "observer_stride": record.observer_stride,
        "config": cfg,
        "run": record_summary(record),
    });
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(dir.join(MANIFEST_FILE), text).map_err(|e| io_fail(MANIFEST_FILE, e))?;
    Ok(())
}

pub fn cmd_simulate(config: &Path, overrides: &Overrides) -> i32 {
    let cfg = match load(config, overrides) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let start = Instant::now();
    let outcome = run_stability_probe(cfg.theta, &cfg.perturbation_spec(), &cfg.solver, cfg.grid());
    let wall = start.elapsed().as_secs_f64();
    let dir = cfg.output_dir.clone();
    match outcome {
        Ok(record) => {
            info!("simulate finished: sup distance {:e}", record.sup_distance);
            match write_run(&dir, &cfg, &record, "ok", wall) {
                Ok(()) => EXIT_OK,
                Err(code) => code,
            }
        }
        Err(ProbeError::BlowUp { report, partial }) => {
            eprintln!("blow-up: {report}");
            match write_run(&dir, &cfg, &partial, "blow_up", wall) {
                Ok(()) => EXIT_BLOWUP,
                Err(code) => code,
            }
        }
        Err(ProbeError::Invalid(e)) => {
            eprintln!("config error: {e}");
            EXIT_CONFIG
        }
    }
}

pub fn cmd_sweep(config: &Path, overrides: &Overrides) -> i32 {
    let cfg = match load(config, overrides) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if cfg.epsilons.len() < 3 {
        eprintln!("fit refused: sweep has {} epsilons, need at least 3", cfg.epsilons.len());
        return EXIT_FIT_REFUSED;
    }
    let start = Instant::now();
    let sweep = match sweep_epsilon(
        cfg.theta,
        &cfg.epsilons,
        &cfg.perturbation_spec(),
        &cfg.solver,
        cfg.grid(),
        cfg.workers,
    ) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("config error: {e}");
            return EXIT_CONFIG;
        }
    };
    let wall = start.elapsed().as_secs_f64();
    if let Err(e) = fs::create_dir_all(&cfg.output_dir) {
        return io_fail("output directory", e);
    }
    for (i, entry) in sweep.entries.iter().enumerate() {
        let dir = cfg.output_dir.join(format!("eps_{i:02}_{:.6e}", entry.epsilon));
        let mut run_cfg = cfg.clone();
        run_cfg.perturbation.epsilon = entry.epsilon;
        run_cfg.epsilons.clear();
        run_cfg.output_dir = dir.clone();
        let written = match &entry.outcome {
            Ok(record) => write_run(&dir, &run_cfg, record, "ok", wall),
            Err(failure) => {
                warn!("eps = {:e} failed: {}", entry.epsilon, failure.message);
                match &failure.partial {
                    Some(partial) => write_run(&dir, &run_cfg, partial, "blow_up", wall),
                    None => Ok(()),
                }
            }
        };
        if let Err(code) = written {
            return code;
        }
    }

    let class = classify_extremal(cfg.theta, DEFAULT_EXTREMAL_TOL).expect("theta validated");
    let fit = match fit_exponent(&sweep) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            let _ = fs::write(cfg.output_dir.join(FIT_SUMMARY_TXT), format!("{e}\n"));
            return EXIT_FIT_REFUSED;
        }
    };
    let verdict = theorem_consistency(&fit, &class, DEFAULT_EXPONENT_DELTA);
    let tag = if class.is_extremal() { "extremal" } else { "non_extremal" };
    let csv = format!(
        "theta,class,p,prefactor,r_squared,required_p,verdict,points,excluded,failures,monotone\n{},{},{},{},{},{},{},{},{},{},{}\n",
        format_float(cfg.theta),
        tag,
        format_float(fit.p),
        format_float(fit.prefactor()),
        format_float(fit.r_squared),
        format_float(verdict.required_p),
        if verdict.pass { "pass" } else { "fail" },
        fit.points.len(),
        fit.excluded.len(),
        sweep.failures(),
        sweep.monotone_in_epsilon(),
    );
    if let Err(e) = fs::write(cfg.output_dir.join(FIT_SUMMARY_CSV), csv) {
        return io_fail(FIT_SUMMARY_CSV, e);
    }
    let mut text = format!(
        "theta = {:.6} ({tag}, nearest extremal angle {:.6}, gap {:.3e})\n\
         fitted sup-distance ~ C eps^p: p = {:.4}, C = {:.4e}, r^2 = {:.6}\n\
         consistency floor p >= {:.2}: {}\n\
         horizon T = {}, dt = {}, observer stride = {}, n = {}\n\
         sweep wall time {:.1} s\n",
        cfg.theta,
        class.nearest,
        class.gap,
        fit.p,
        fit.prefactor(),
        fit.r_squared,
        verdict.required_p,
        if verdict.pass { "PASS" } else { "FAIL" },
        cfg.solver.t_final,
        cfg.solver.dt,
        cfg.solver.observer_stride,
        cfg.n,
        wall,
    );
    for (eps, d) in &fit.points {
        text.push_str(&format!("  eps = {eps:.6e}  sup distance = {d:.6e}\n"));
    }
    if !fit.excluded.is_empty() {
        text.push_str(&format!("warning: excluded epsilons {:?}\n", fit.excluded));
    }
    if let Err(e) = fs::write(cfg.output_dir.join(FIT_SUMMARY_TXT), &text) {
        return io_fail(FIT_SUMMARY_TXT, e);
    }
    print!("{text}");
    EXIT_OK
}

/// Runs the static battery; an optional config supplies the grid size.
pub fn cmd_verify(config: Option<&Path>, n_override: Option<usize>) -> i32 {
    let mut n = 64;
    if let Some(path) = config {
        match RunConfig::load(path) {
            Ok(cfg) => n = cfg.n,
            Err(e) => {
                eprintln!("config error: {e}");
                return EXIT_CONFIG;
            }
        }
    }
    if let Some(o) = n_override {
        if crate::spectral::GridSpec::new(o).is_err() {
            eprintln!("config error: grid size {o} must be even and >= 16");
            return EXIT_CONFIG;
        }
        n = o;
    }
    match verify_and_report(n) {
        Ok(()) => EXIT_OK,
        Err(name) => {
            eprintln!("verification failed: {name}");
            EXIT_VERIFY_FAILED
        }
    }
}
