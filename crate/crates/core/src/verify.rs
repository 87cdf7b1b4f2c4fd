//! Static self-test battery: closed forms, root locations, spectral
//! identities, projection properties and a brute-force distance oracle.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dynamics::tendency;
use crate::experiments::shell_state;
use crate::invariants::{
    chi, quadrature_grid, quartic_profile, quartic_profile_prime, quartic_profile_quadrature,
    quartic_profile_second, spectral_gap_identity, CutoffSpec,
};
use crate::shell::{perp_norm, project_shell, shell_distance, shell_split_norms};
use crate::spectral::{inner_product, inverse_transform, l2_norm, GridSpec, SpectralField};

/// Random trigonometric polynomial with Gaussian coefficients on
/// `max(|k₁|,|k₂|) ≤ kmax`. Shell and off-shell parts are both of order one.
pub fn random_trig_field(grid: GridSpec, seed: u64, kmax: i64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut modes = Vec::new();
    for k2 in 0..=kmax {
        for k1 in -kmax..=kmax {
            if k2 == 0 && k1 <= 0 {
                continue;
            }
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            modes.push((k1, k2, Complex64::new(re, im) * 0.3));
        }
    }
    SpectralField::from_modes(grid, &modes).expect("kmax below Nyquist")
}

/// Zeros of `f` on `[lo, hi]` found by scanning `intervals` cells for sign
/// changes and bisecting each to `tol`.
pub fn bisect_roots(f: impl Fn(f64) -> f64, lo: f64, hi: f64, intervals: usize, tol: f64) -> Vec<f64> {
    let h = (hi - lo) / intervals as f64;
    let mut roots = Vec::new();
    for i in 0..intervals {
        let (mut a, mut b) = (lo + i as f64 * h, lo + (i + 1) as f64 * h);
        let (mut fa, fb) = (f(a), f(b));
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa * fb > 0.0 || fb == 0.0 {
            continue;
        }
        while b - a > tol {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if fa * fm < 0.0 {
                b = m;
            } else {
                a = m;
                fa = fm;
            }
        }
        roots.push(0.5 * (a + b));
    }
    roots
}

/// Distance to `S^{α,β}` by direct search over the phases `(μ, λ)`.
///
/// Inner products with `cos`/`sin` modes are taken by grid quadrature, the
/// phase plane is scanned on a `coarse × coarse` lattice, and the best cell is
/// refined by repeated zooming. Independent of the closed form in
/// [`shell_distance`].
pub fn brute_force_shell_distance(s: &SpectralField, alpha: f64, beta: f64, coarse: usize) -> f64 {
    let real = inverse_transform(s);
    let grid = s.grid();
    let n = grid.n();
    let (mut cx, mut sx, mut cy, mut sy, mut norm_sq, mut g_sq) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for (idx, &w) in real.values().iter().enumerate() {
        let (x, y) = grid.point(idx % n, idx / n);
        cx += w * x.cos();
        sx += w * x.sin();
        cy += w * y.cos();
        sy += w * y.sin();
        norm_sq += w * w;
        g_sq += (alpha * x.cos() + beta * y.cos()).powi(2);
    }
    let area = grid.cell_area();
    let (cx, sx, cy, sy, norm_sq, g_sq) = (cx * area, sx * area, cy * area, sy * area, norm_sq * area, g_sq * area);
    // ∫ s·cos(x+μ) = cos μ ∫ s cos x − sin μ ∫ s sin x; the two target modes
    // are orthogonal so ‖g‖² does not depend on the phases
    let x_part = |mu: f64| alpha * (mu.cos() * cx - mu.sin() * sx);
    let y_part = |lam: f64| beta * (lam.cos() * cy - lam.sin() * sy);
    let dist_sq = |mu: f64, lam: f64| norm_sq - 2.0 * (x_part(mu) + y_part(lam)) + g_sq;

    let step = 2.0 * PI / coarse as f64;
    let xs: Vec<f64> = (0..coarse).map(|i| x_part(i as f64 * step)).collect();
    let ys: Vec<f64> = (0..coarse).map(|j| y_part(j as f64 * step)).collect();
    let (mut best, mut bi, mut bj) = (f64::INFINITY, 0, 0);
    for (j, yv) in ys.iter().enumerate() {
        for (i, xv) in xs.iter().enumerate() {
            let d = norm_sq - 2.0 * (xv + yv) + g_sq;
            if d < best {
                best = d;
                bi = i;
                bj = j;
            }
        }
    }
    let (mut mu, mut lam) = (bi as f64 * step, bj as f64 * step);
    let mut width = step;
    for _ in 0..12 {
        let m = 10;
        let (mut bmu, mut blam) = (mu, lam);
        for a in -m..=m {
            for b in -m..=m {
                let (tm, tl) = (mu + a as f64 * width / m as f64, lam + b as f64 * width / m as f64);
                let d = dist_sq(tm, tl);
                if d < best {
                    best = d;
                    bmu = tm;
                    blam = tl;
                }
            }
        }
        mu = bmu;
        lam = blam;
        width /= 5.0;
    }
    best.max(0.0).sqrt()
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, pass: bool, detail: String) -> CheckResult {
    CheckResult { name, pass, detail }
}

/// Runs every static check; `n` is the grid for the field-based checks.
pub fn run_verification(n: usize) -> Vec<CheckResult> {
    let grid = GridSpec::new(n).unwrap_or_else(|_| GridSpec::new(64).unwrap());
    let mut out = Vec::new();

    // closed form vs quadrature over 100 angles
    let qgrid = quadrature_grid(64).expect("64 is valid");
    let worst = (0..100)
        .map(|i| {
            let t = FRAC_PI_2 * i as f64 / 99.0;
            (quartic_profile_quadrature(t, &qgrid) - quartic_profile(t)).abs() / quartic_profile(t)
        })
        .fold(0.0f64, f64::max);
    out.push(check("quartic_quadrature", worst < 1e-12, format!("max rel err {worst:.2e}")));

    let pi2 = PI * PI;
    let exact = quartic_profile(0.0) == 1.5 * pi2
        && (quartic_profile(FRAC_PI_4) - 2.25 * pi2).abs() <= 4.0 * f64::EPSILON * pi2
        && (quartic_profile(PI / 8.0) - 15.0 * pi2 / 8.0).abs() <= 4.0 * f64::EPSILON * pi2;
    out.push(check("quartic_closed_values", exact, "F(0), F(π/4), F(π/8)".into()));

    let roots = bisect_roots(quartic_profile_prime, -0.05, FRAC_PI_2 + 0.05, 61, 1e-14);
    let expected = [0.0, FRAC_PI_4, FRAC_PI_2];
    let roots_ok = roots.len() == 3
        && roots.iter().zip(expected).all(|(r, e)| (r - e).abs() < 1e-10)
        && roots.iter().all(|&r| (quartic_profile_second(r).abs() - 6.0 * pi2).abs() < 1e-10);
    out.push(check("derivative_roots", roots_ok, format!("roots {roots:?}")));

    let spec = CutoffSpec::default();
    out.push(check(
        "cutoff_plateau",
        chi(0.5, &spec) == 1.0 && chi(3.0, &spec) == 0.0 && chi(1.5, &spec) == 0.5,
        "χ(0.5)=1, χ(3)=0, χ(1.5)=1/2".into(),
    ));

    let fields: Vec<SpectralField> = (0..50).map(|seed| random_trig_field(grid, seed, 6)).collect();
    let gap_ok = fields.iter().all(|s| {
        let g = spectral_gap_identity(s).expect("zero mean");
        g.consistent() && g.sandwich_holds(1e-12)
    });
    out.push(check("spectral_gap_sandwich", gap_ok, "50 random fields".into()));

    let mut proj_err = 0.0f64;
    for s in &fields {
        let (p, q, full) = shell_split_norms(s);
        proj_err = proj_err.max((p * p + q * q - full * full).abs() / (full * full));
        let ps = project_shell(s);
        proj_err = proj_err.max(l2_norm(&project_shell(&ps).difference(&ps).unwrap()));
        let perp = s.difference(&ps).unwrap();
        proj_err = proj_err.max(inner_product(&ps, &perp).unwrap().abs() / (full * full));
        proj_err = proj_err.max((perp_norm(s) - l2_norm(&perp)).abs() / full);
    }
    out.push(check("projection_properties", proj_err < 1e-12, format!("max err {proj_err:.2e}")));

    let mut dist_err = 0.0f64;
    for (i, s) in fields.iter().take(10).enumerate() {
        let t = 0.1 + 0.13 * i as f64;
        let (a, b) = (1.3 * t.cos(), 1.3 * t.sin());
        dist_err = dist_err.max((shell_distance(s, a, b) - brute_force_shell_distance(s, a, b, 256)).abs());
    }
    out.push(check("distance_oracle", dist_err < 1e-8, format!("max abs err {dist_err:.2e}")));

    let mut steady = 0.0f64;
    for t in [0.0, PI / 6.0, FRAC_PI_4] {
        let s = shell_state(t, grid);
        steady = steady.max(l2_norm(&tendency(&s, 0.0).expect("zero mean")));
    }
    out.push(check("steady_shell", steady < 1e-10, format!("max tendency norm {steady:.2e}")));
    out
}

/// Prints a pass/fail table; returns the name of the first failing check.
pub fn print_report(results: &[CheckResult], elapsed: std::time::Duration) -> Option<&'static str> {
    println!("{:<24} {:<6} detail", "check", "result");
    for r in results {
        println!("{:<24} {:<6} {}", r.name, if r.pass { "PASS" } else { "FAIL" }, r.detail);
    }
    println!("elapsed {:.2} s", elapsed.as_secs_f64());
    results.iter().find(|r| !r.pass).map(|r| r.name)
}

/// Runs and reports; `Err` carries the first failing check.
pub fn verify_and_report(n: usize) -> Result<(), &'static str> {
    let start = Instant::now();
    let results = run_verification(n);
    match print_report(&results, start.elapsed()) {
        Some(name) => Err(name),
        None => Ok(()),
    }
}
