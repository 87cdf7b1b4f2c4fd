//! Acceptance gate. Prints one `[PASS]`/`[FAIL]` line per criterion and fails
//! at the end if any criterion failed.
//!
//! Run with `cargo test -p firstshell --test acceptance -- --nocapture`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, FRAC_PI_8, PI};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use firstshell::dynamics::{integrate, tendency, NoObserver, SolverConfig};
use firstshell::experiments::{
    effective_workers, fit_exponent, run_stability_probe, shell_state, sweep_epsilon, theorem_consistency,
    PerturbationSpec, RunRecord, DEFAULT_EXPONENT_DELTA,
};
use firstshell::invariants::{
    chi, quadrature_grid, quartic_profile, quartic_profile_prime, quartic_profile_quadrature,
    quartic_profile_second, spectral_gap_identity, CutoffSpec,
};
use firstshell::shell::{classify_extremal, project_shell, shell_distance, DEFAULT_EXTREMAL_TOL};
use firstshell::spectral::{
    forward_transform, inner_product, inverse_transform, l2_norm, GridSpec, RealField, SpectralField,
};
use firstshell::verify::{bisect_roots, random_trig_field};

const SEED: u64 = 20240613;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn report(tag: &str, name: &str, budget: Option<Duration>, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut out = run();
    let elapsed = start.elapsed();
    if let Some(limit) = budget {
        if elapsed > limit {
            out.pass = false;
            out.detail.push_str(&format!("; over runtime budget {:.0?}", limit));
        }
    }
    let mark = if out.pass { "PASS" } else { "FAIL" };
    println!("[{mark}] {tag} {name}: {} ({:.2?})", out.detail, elapsed);
    out.pass
}

fn closed_form() -> Outcome {
    let g = quadrature_grid(64).unwrap();
    let worst = (0..100)
        .map(|i| {
            let theta = FRAC_PI_2 * i as f64 / 99.0;
            let exact = quartic_profile(theta);
            (quartic_profile_quadrature(theta, &g) - exact).abs() / exact
        })
        .fold(0.0f64, f64::max);
    let anchors = [
        (0.0, 1.5 * PI * PI),
        (FRAC_PI_4, 2.25 * PI * PI),
        (FRAC_PI_8, 15.0 * PI * PI / 8.0),
    ];
    let anchor_err = anchors
        .iter()
        .map(|&(t, v)| (quartic_profile(t) - v).abs() / v)
        .fold(0.0f64, f64::max);
    outcome(
        worst < 1e-12 && anchor_err <= 4.0 * f64::EPSILON,
        format!("max rel quadrature error {worst:.2e}, anchor rel error {anchor_err:.1e}"),
    )
}

fn profile_roots() -> Outcome {
    // bracket slightly past the endpoints so roots at 0 and π/2 are interior
    let roots = bisect_roots(quartic_profile_prime, -0.05, FRAC_PI_2 + 0.05, 61, 1e-13);
    let expected = [0.0, FRAC_PI_4, FRAC_PI_2];
    let located = roots.len() == 3
        && roots.iter().zip(expected).all(|(r, e)| (r - e).abs() < 1e-10);
    let curvature_err = expected
        .iter()
        .map(|&t| (quartic_profile_second(t).abs() - 6.0 * PI * PI).abs())
        .fold(0.0f64, f64::max);
    outcome(
        located && curvature_err < 1e-10,
        format!("roots {roots:.12?}, max ||F''| - 6π²| = {curvature_err:.1e}"),
    )
}

fn steady_shell() -> Outcome {
    let g = GridSpec::new(64).unwrap();
    let mut worst_tendency = 0.0f64;
    let mut worst_motion = 0.0f64;
    for theta in [0.0, FRAC_PI_6, FRAC_PI_4] {
        let s = shell_state(theta, g);
        worst_tendency = worst_tendency.max(l2_norm(&tendency(&s, 0.0).unwrap()));
        let run = integrate(&s, &SolverConfig::new(1e-2, 10.0), &mut NoObserver).unwrap();
        worst_motion = worst_motion.max(l2_norm(&run.state.difference(&s).unwrap()));
    }
    outcome(
        worst_tendency < 1e-10 && worst_motion < 1e-9,
        format!("max ‖N(ω)‖ = {worst_tendency:.2e}, max ‖ω(10) − ω(0)‖ = {worst_motion:.2e}"),
    )
}

fn conservation(record: &Result<RunRecord, String>) -> Outcome {
    let r = match record {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("run failed: {e}")),
    };
    let d = r.drifts;
    outcome(
        r.completed && d.energy < 1e-4 && d.enstrophy < 1e-4 && d.casimir_i < 1e-4 && !r.chi_active,
        format!(
            "drifts energy {:.2e}, enstrophy {:.2e}, I {:.2e}; chi_active {}; cfl violations {}",
            d.energy, d.enstrophy, d.casimir_i, r.chi_active, r.cfl_violations
        ),
    )
}

fn sqrt2_bound(record: &Result<RunRecord, String>) -> Outcome {
    let r = match record {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("run failed: {e}")),
    };
    let bound = 2f64.sqrt() + 0.01;
    outcome(r.sqrt2_ratio <= bound, format!("max ‖P⊥ω(t)‖/‖P⊥ω₀‖ = {:.6} (bound {bound:.6})", r.sqrt2_ratio))
}

/// Shell part with amplitudes in `[0.5, 1.5]` plus an off-shell part of L²
/// norm in `[0.5, 1.5]`.
fn oracle_field(grid: GridSpec, rng: &mut ChaCha8Rng) -> SpectralField {
    let mut modes = Vec::new();
    for (k1, k2) in [(1, 0), (0, 1)] {
        let amp: f64 = rng.random_range(0.5..1.5);
        let phase: f64 = rng.random_range(0.0..2.0 * PI);
        modes.push((k1, k2, Complex64::from_polar(0.5 * amp, phase)));
    }
    let shell = SpectralField::from_modes(grid, &modes).unwrap();
    let raw = random_trig_field(grid, rng.random(), 4);
    let perp = raw.filtered(|k1, k2| k1 * k1 + k2 * k2 != 1);
    let target: f64 = rng.random_range(0.5..1.5);
    shell.sum(&perp.scaled(target / l2_norm(&perp))).unwrap()
}

/// `‖s − α cos(x+μ) − β cos(y+λ)‖` minimized over a 1024² phase grid and
/// refined by repeated local zooms; the final value is a real-space quadrature.
fn brute_distance(s: &SpectralField, alpha: f64, beta: f64) -> f64 {
    let g = s.grid();
    let n = g.n();
    let field = inverse_transform(s);
    let values = field.values();
    let area = g.cell_area();
    let mut cx = 0.0;
    let mut sx = 0.0;
    let mut cy = 0.0;
    let mut sy = 0.0;
    for j in 0..n {
        for i in 0..n {
            let (x, y) = g.point(i, j);
            let w = values[j * n + i] * area;
            cx += w * x.cos();
            sx += w * x.sin();
            cy += w * y.cos();
            sy += w * y.sin();
        }
    }
    let norm_sq = field.integrate(|w| w * w);
    let unit = 2.0 * PI * PI;
    let objective = |mu: f64, lam: f64| {
        norm_sq - 2.0 * alpha * (cx * mu.cos() - sx * mu.sin()) - 2.0 * beta * (cy * lam.cos() - sy * lam.sin())
            + unit * (alpha * alpha + beta * beta)
    };

    const COARSE: usize = 1024;
    let h = 2.0 * PI / COARSE as f64;
    let table: Vec<(f64, f64)> = (0..COARSE).map(|i| ((i as f64 * h).cos(), (i as f64 * h).sin())).collect();
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for (il, &(cl, sl)) in table.iter().enumerate() {
        let y_part = -2.0 * beta * (cy * cl - sy * sl);
        for (im, &(cm, sm)) in table.iter().enumerate() {
            let v = norm_sq - 2.0 * alpha * (cx * cm - sx * sm) + y_part + unit * (alpha * alpha + beta * beta);
            if v < best.0 {
                best = (v, im as f64 * h, il as f64 * h);
            }
        }
    }
    let (_, mut mu, mut lam) = best;
    let mut width = h;
    for _ in 0..14 {
        let mut local = (objective(mu, lam), mu, lam);
        for a in -10..=10 {
            for b in -10..=10 {
                let (m, l) = (mu + width * a as f64 / 10.0, lam + width * b as f64 / 10.0);
                let v = objective(m, l);
                if v < local.0 {
                    local = (v, m, l);
                }
            }
        }
        (mu, lam) = (local.1, local.2);
        width /= 5.0;
    }
    let target = RealField::from_fn(g, |x, y| alpha * (x + mu).cos() + beta * (y + lam).cos()).unwrap();
    let sum_sq: f64 = values.iter().zip(target.values()).map(|(a, b)| (a - b).powi(2)).sum();
    (sum_sq * area).sqrt()
}

fn distance_oracle() -> Outcome {
    let g = GridSpec::new(32).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let s = oracle_field(g, &mut rng);
        let alpha: f64 = rng.random_range(-1.5..1.5);
        let beta: f64 = rng.random_range(-1.5..1.5);
        let closed = shell_distance(&s, alpha, beta);
        let brute = brute_distance(&s, alpha.abs(), beta.abs());
        worst = worst.max((closed - brute).abs());
    }
    outcome(worst < 1e-8, format!("50 fields, max |closed − brute| = {worst:.2e}"))
}

fn exponent_sweeps() -> Outcome {
    let g = GridSpec::new(128).unwrap();
    let solver = SolverConfig::new(2e-3, 10.0);
    let eps = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
    let template = PerturbationSpec::random_smooth(SEED, eps[0]);
    let workers = effective_workers(std::thread::available_parallelism().map_or(1, |n| n.get()));
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, theta, p_floor, r2_floor) in
        [("π/6", FRAC_PI_6, 0.9, 0.98), ("π/4", FRAC_PI_4, 0.45, 0.95), ("0", 0.0, 0.45, 0.95)]
    {
        let sweep = match sweep_epsilon(theta, &eps, &template, &solver, g, workers) {
            Ok(s) => s,
            Err(e) => {
                pass = false;
                parts.push(format!("θ={label}: sweep error {e}"));
                continue;
            }
        };
        match fit_exponent(&sweep) {
            Ok(fit) => {
                let cls = classify_extremal(theta, DEFAULT_EXTREMAL_TOL).unwrap();
                let verdict = theorem_consistency(&fit, &cls, DEFAULT_EXPONENT_DELTA);
                let ok = fit.p >= p_floor && fit.r_squared >= r2_floor && sweep.failures() == 0;
                pass &= ok;
                parts.push(format!(
                    "θ={label} ({:?}): p = {:.4}, r² = {:.5}, C = {:.3e}, verdict {}",
                    verdict.tag,
                    fit.p,
                    fit.r_squared,
                    fit.prefactor(),
                    if verdict.pass { "consistent" } else { "inconsistent" }
                ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("θ={label}: {e}"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn property_suites() -> Outcome {
    let g = GridSpec::new(32).unwrap();
    let spec = CutoffSpec::default();
    let mut failures = Vec::new();
    let (mut round_trip, mut parseval, mut hermitian) = (0.0f64, 0.0f64, 0.0f64);
    let (mut idempotence, mut pythagoras) = (0.0f64, 0.0f64);
    let mut sandwich_ok = true;
    for seed in 0..60u64 {
        let s = random_trig_field(g, SEED ^ seed, 8);
        let real = inverse_transform(&s);
        let back = forward_transform(&real);
        let scale = l2_norm(&s);
        round_trip = round_trip.max(l2_norm(&back.difference(&s).unwrap()) / scale);
        let quad = real.integrate(|w| w * w);
        parseval = parseval.max((quad - scale * scale).abs() / (scale * scale));
        for (idx, c) in back.coeffs().iter().enumerate() {
            let conj = back.coeffs()[g.conjugate_index(idx)];
            hermitian = hermitian.max((c - conj.conj()).norm());
        }

        let p = project_shell(&s);
        idempotence = idempotence.max(l2_norm(&project_shell(&p).difference(&p).unwrap()));
        let perp = s.difference(&p).unwrap();
        let split = l2_norm(&p).powi(2) + l2_norm(&perp).powi(2);
        pythagoras = pythagoras.max((split - scale * scale).abs() / (scale * scale));
        pythagoras = pythagoras.max(inner_product(&p, &perp).unwrap().abs() / (scale * scale));

        let gap = spectral_gap_identity(&s).unwrap();
        sandwich_ok &= gap.consistent() && gap.sandwich_holds(1e-12);
    }
    if round_trip >= 1e-12 {
        failures.push("round trip");
    }
    if parseval >= 1e-12 {
        failures.push("Parseval");
    }
    if hermitian != 0.0 {
        failures.push("Hermitian");
    }
    if idempotence != 0.0 || pythagoras >= 1e-12 {
        failures.push("projection");
    }
    if !sandwich_ok {
        failures.push("gap sandwich");
    }
    let plateau = chi(0.5, &spec) == 1.0 && chi(3.0, &spec) == 0.0 && chi(-0.5, &spec) == 1.0;
    if !plateau {
        failures.push("chi plateau");
    }
    outcome(
        failures.is_empty(),
        format!(
            "60 fields: round trip {round_trip:.1e}, Parseval {parseval:.1e}, Hermitian {hermitian:.1e}, \
             idempotence {idempotence:.1e}, Pythagoras {pythagoras:.1e}, sandwich {sandwich_ok}, \
             chi plateau {plateau}{}",
            if failures.is_empty() { String::new() } else { format!("; failed: {}", failures.join(", ")) }
        ),
    )
}

#[test]
fn acceptance() {
    let mut results = Vec::new();
    results.push(report("AC1", "quartic profile closed form", Some(Duration::from_secs(5)), closed_form));
    results.push(report("AC2", "profile critical points", Some(Duration::from_secs(1)), profile_roots));
    results.push(report("AC3", "steady shell", Some(Duration::from_secs(30)), steady_shell));

    let mut record = Err("not run".to_string());
    results.push(report("AC4", "conservation", None, || {
        record = run_stability_probe(
            FRAC_PI_6,
            &PerturbationSpec::random_smooth(SEED, 1e-2),
            &SolverConfig::new(2e-3, 10.0),
            GridSpec::new(128).unwrap(),
        )
        .map_err(|e| e.to_string());
        conservation(&record)
    }));
    results.push(report("AC5", "perp growth bound", None, || sqrt2_bound(&record)));

    results.push(report("AC6", "distance oracle", Some(Duration::from_secs(60)), distance_oracle));
    results.push(report("AC7", "exponent sweeps", None, exponent_sweeps));
    results.push(report("AC8", "property suites", Some(Duration::from_secs(30)), property_suites));

    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
