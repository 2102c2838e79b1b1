//! Acceptance criteria 1-12. Prints one line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use ptmetric::dynamics::{
    asymptotic_sp, closed_form_snapshot, expectation, linspace, rotated_frame_check, NumericSetup,
};
use ptmetric::lindblad::{compare_steady_state, integrate, model_lindblad_config, DensityMatrix};
use ptmetric::linalg::pauli;
use ptmetric::metric::{
    build_metric, build_metric_unbroken, build_similarity_broken, build_similarity_ep,
    classify_regime, eigenstate_overlap, verify_pseudo_hermiticity, MetricBuildOptions,
    SpectralRegime, EP_BAND,
};
use ptmetric::model::{
    closed_metric, discriminant, hamiltonian, initial_state, regime_from_d, ModelParams,
    PreparedState,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const REGIMES: [SpectralRegime; 3] = [
    SpectralRegime::UnbrokenSymmetric,
    SpectralRegime::BrokenSymmetric,
    SpectralRegime::ExceptionalPoint,
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn sign(rng: &mut ChaCha8Rng) -> f64 {
    if rng.gen_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

/// Random model in the given regime. Broken-phase draws use `η > 1` when
/// `positive_broken` is set.
fn random_params(rng: &mut ChaCha8Rng, regime: SpectralRegime, positive_broken: bool) -> ModelParams {
    let s = sign(rng) * rng.gen_range(0.3..2.0);
    let rho = rng.gen_range(-2.0..2.0);
    let eta = match regime {
        SpectralRegime::UnbrokenSymmetric => rng.gen_range(-0.95..0.95),
        SpectralRegime::BrokenSymmetric => {
            let e = rng.gen_range(1.05..3.0);
            if positive_broken {
                e
            } else {
                sign(rng) * e
            }
        }
        SpectralRegime::ExceptionalPoint => sign(rng),
    };
    let mp = ModelParams::from_eta(eta, s, rho).unwrap();
    assert_eq!(mp.regime(), regime, "eta={eta} s={s} rho={rho}");
    mp
}

fn random_state(rng: &mut ChaCha8Rng) -> PreparedState {
    PreparedState::new(rng.gen_range(-2.0..2.0), rng.gen_range(-PI..PI)).unwrap()
}

fn eta_model(eta: f64, s: f64) -> ModelParams {
    ModelParams::from_eta(eta, s, 0.0).unwrap()
}

fn within_budget(start: Instant, secs: f64) -> (bool, String) {
    let el = start.elapsed().as_secs_f64();
    (el < secs, format!("{el:.2} s of {secs} s"))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = [0.0_f64; 3];
    let mut errors = 0;
    for (k, regime) in REGIMES.into_iter().enumerate() {
        for _ in 0..1000 {
            let mp = random_params(&mut rng, regime, false);
            let h = hamiltonian(&mp);
            let opts = MetricBuildOptions::for_model(&mp);
            let s = match regime {
                SpectralRegime::UnbrokenSymmetric => build_metric_unbroken(&h, opts.tol).map(|m| m.s().clone()),
                SpectralRegime::BrokenSymmetric => build_similarity_broken(&h, &opts),
                SpectralRegime::ExceptionalPoint => build_similarity_ep(&h, &opts),
            };
            match s {
                Ok(s) => worst[k] = worst[k].max(verify_pseudo_hermiticity(&h, &s)),
                Err(_) => errors += 1,
            }
        }
    }
    let (fast, time) = within_budget(start, 5.0);
    let max = worst.iter().copied().fold(0.0, f64::max);
    outcome(
        errors == 0 && max <= 1e-9 && fast,
        format!(
            "pseudo-Hermiticity residual max {max:.2e} (unbroken {:.2e}, broken {:.2e}, EP {:.2e}), {errors} construction errors, {time}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = [0.0_f64; 3];
    let mut errors = 0;
    for (k, regime) in REGIMES.into_iter().enumerate() {
        for _ in 0..1000 {
            let mp = random_params(&mut rng, regime, false);
            let h = hamiltonian(&mp);
            match build_metric(&h, &MetricBuildOptions::for_model(&mp)) {
                Ok(m) => {
                    let a = m.trace_normalized();
                    let b = closed_metric(&mp).trace_normalized();
                    worst[k] = worst[k].max((&a - &b).norm() / b.norm());
                }
                Err(_) => errors += 1,
            }
        }
    }
    let (fast, time) = within_budget(start, 5.0);
    let max = worst.iter().copied().fold(0.0, f64::max);
    outcome(
        errors == 0 && max <= 1e-8 && fast,
        format!(
            "general vs closed-form metric, relative deviation max {max:.2e} (unbroken {:.2e}, broken {:.2e}, EP {:.2e}), {errors} errors, {time}",
            worst[0], worst[1], worst[2]
        ),
    )
}

/// Survival probability in the broken phase with the time argument of the
/// overlap amplitude scaled by `k` (`k = 1` or `2`).
fn broken_sp_variant(mp: &ModelParams, ps: &PreparedState, t: f64, k: f64) -> f64 {
    let eta = mp.eta();
    let kappa = (eta * eta - 1.0).sqrt();
    let lam = mp.s * kappa;
    let (p, phi) = (ps.p, ps.phi);
    let a = (1.0 + p * p) * eta + 2.0 * p * phi.sin();
    let b = kappa * (1.0 - p * p);
    let n0 = 1.0 / a;
    let nt = 1.0 / (a * (2.0 * lam * t).cosh() + b * (2.0 * lam * t).sinh());
    let amp = a * (k * lam * t).cosh() + b * (k * lam * t).sinh();
    n0 * nt * amp * amp
}

struct OracleRun {
    outcome: Outcome,
    sq_dev: f64,
    norm_dev: f64,
    snapshots: usize,
}

fn criterion_3() -> OracleRun {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = [0.0_f64; 3];
    let mut errors = Vec::new();
    let (mut sq_dev, mut norm_dev, mut snapshots) = (0.0_f64, 0.0_f64, 0);
    let (mut cosh1, mut cosh2) = (0.0_f64, 0.0_f64);
    for (k, regime) in REGIMES.into_iter().enumerate() {
        for _ in 0..100 {
            let mp = random_params(&mut rng, regime, true);
            let ps = random_state(&mut rng);
            let t = rng.gen_range(0.0..10.0);
            let setup = match NumericSetup::for_model(&mp, &ps) {
                Ok(s) => s,
                Err(e) => {
                    errors.push(format!("{regime}: {e}"));
                    continue;
                }
            };
            let (num, closed) = match (setup.snapshot(t), closed_form_snapshot(&mp, &ps, t)) {
                (Ok(a), Ok(b)) => (a, b),
                (a, b) => {
                    errors.push(format!("{regime}: {:?} / {:?}", a.err(), b.err()));
                    continue;
                }
            };
            for (x, y) in [
                (num.sx, closed.sx),
                (num.sy, closed.sy),
                (num.sz, closed.sz),
                (num.ur_gap, closed.ur_gap),
                (num.sp, closed.sp),
            ] {
                worst[k] = worst[k].max((x - y).abs());
            }
            if regime == SpectralRegime::BrokenSymmetric {
                cosh1 = cosh1.max((num.sp - broken_sp_variant(&mp, &ps, t, 1.0)).abs());
                cosh2 = cosh2.max((num.sp - broken_sp_variant(&mp, &ps, t, 2.0)).abs());
            }
            // Criterion 4 runs on the same snapshots.
            let state = setup.state_at(t).unwrap();
            for sj in pauli() {
                let sq = expectation(&state, &setup.metric, &(&sj * &sj)).unwrap();
                sq_dev = sq_dev.max((sq - 1.0).abs());
            }
            norm_dev = norm_dev.max((num.bloch_norm() - 1.0).abs());
            snapshots += 1;
        }
    }
    let (fast, time) = within_budget(start, 10.0);
    let max = worst.iter().copied().fold(0.0, f64::max);
    let matched = if cosh1 <= 1e-7 && cosh2 > 1e-7 {
        "cosh(λt)"
    } else if cosh2 <= 1e-7 && cosh1 > 1e-7 {
        "cosh(2λt)"
    } else {
        "neither uniquely"
    };
    OracleRun {
        outcome: outcome(
            errors.is_empty() && max <= 1e-7 && fast,
            format!(
                "numeric vs closed form, max |Δ| {max:.2e} (unbroken {:.2e}, broken η>1 {:.2e}, EP {:.2e}); survival amplitude matched {matched} (dev {cosh1:.1e} vs {cosh2:.1e}); {} errors{}; {time}",
                worst[0],
                worst[1],
                worst[2],
                errors.len(),
                errors.first().map(|e| format!(" e.g. {e}")).unwrap_or_default()
            ),
        ),
        sq_dev,
        norm_dev,
        snapshots,
    }
}

fn criterion_4(run: &OracleRun) -> Outcome {
    outcome(
        run.snapshots == 300 && run.sq_dev <= 1e-10 && run.norm_dev <= 1e-9,
        format!(
            "on {} snapshots: max |⟨σ_j²⟩-1| {:.2e}, max ||⟨σ⟩|-1| {:.2e}",
            run.snapshots, run.sq_dev, run.norm_dev
        ),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let etas = [0.0, 0.5, 0.9, 1.0, 1.1, SQRT_2, 2.0];
    let phis = linspace(-PI, PI, 50);
    let ps = linspace(-3.0, 3.0, 50);
    let mut min = f64::INFINITY;
    let mut errors = 0;
    let mut count = 0;
    for eta in etas {
        let mp = eta_model(eta, 1.0);
        let base = NumericSetup::for_model(&mp, &PreparedState::new(1.0, 0.0).unwrap()).unwrap();
        for &phi in &phis {
            for &p in &ps {
                let st = PreparedState::new(p, phi).unwrap();
                let psi0 = match ptmetric::dynamics::evolve(&base.h, &base.metric, &initial_state(&st), 0.0) {
                    Ok(v) => v,
                    Err(_) => {
                        errors += 1;
                        continue;
                    }
                };
                let setup = NumericSetup {
                    state0: st,
                    psi0,
                    ..base.clone()
                };
                for t in [0.0, 1.0, 5.0] {
                    match setup.snapshot(t) {
                        Ok(s) => min = min.min(s.ur_gap),
                        Err(_) => errors += 1,
                    }
                    count += 1;
                }
            }
        }
    }
    let (fast, time) = within_budget(start, 30.0);
    outcome(
        errors == 0 && min >= -1e-9 && fast,
        format!("min UR gap {min:.2e} over {count} points, {errors} errors, {time}"),
    )
}

fn criterion_6() -> Outcome {
    let ps = PreparedState::new(1.0, PI).unwrap();
    let mut worst = 0.0_f64;
    let mut errors = 0;
    for eta in [0.5, 1.0, SQRT_2] {
        let setup = NumericSetup::for_model(&eta_model(eta, 1.0), &ps).unwrap();
        for t in linspace(0.0, 10.0, 20) {
            match setup.state_at(t).and_then(|st| rotated_frame_check(&st, &setup.metric)) {
                Ok((vx, vy, _)) => worst = worst.max((vx - 1.0).abs()).max((vy - 1.0).abs()),
                Err(_) => errors += 1,
            }
        }
    }
    outcome(
        errors == 0 && worst <= 1e-8,
        format!("max |Δ²σ_x'-1|, |Δ²σ_y'-1| = {worst:.2e} over 60 points, {errors} errors"),
    )
}

/// `|η|/√(1-η²+η⁴)`, evaluated independently of the library.
fn overlap_oracle(eta: f64) -> f64 {
    let a = eta.abs();
    if a < 1.0 {
        0.0
    } else if a == 1.0 {
        1.0
    } else {
        a / (a.powi(4) - a * a + 1.0).sqrt()
    }
}

fn metric_overlap(eta: f64) -> Result<f64, ptmetric::Error> {
    let mp = eta_model(eta, 1.0);
    let h = hamiltonian(&mp);
    eigenstate_overlap(&h, &build_metric(&h, &MetricBuildOptions::for_model(&mp))?)
}

fn criterion_7() -> Outcome {
    // Frozen from the closed form at η = √2: √2/√3.
    const OVERLAP_SQRT2: f64 = 0.816_496_580_927_726;
    assert!((overlap_oracle(SQRT_2) - OVERLAP_SQRT2).abs() < 1e-15);
    let points = [(0.5, 0.0), (1.0, 1.0), (SQRT_2, OVERLAP_SQRT2)];
    let mut parts = Vec::new();
    let mut pass = true;
    for (eta, want) in points {
        match metric_overlap(eta) {
            Ok(v) => {
                let ok = (v - want).abs() <= 1e-10;
                pass &= ok;
                parts.push(format!("η={eta:.4}: {v:.3e} (want {want:.6})"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("η={eta:.4}: error {e}"));
            }
        }
    }
    let (mut curve_unbroken, mut curve_broken) = (0.0_f64, 0.0_f64);
    for eta in linspace(0.0, 3.0, 301) {
        let dev = match metric_overlap(eta) {
            Ok(v) => (v - overlap_oracle(eta)).abs(),
            Err(_) => f64::INFINITY,
        };
        if eta.abs() > 1.0 {
            curve_broken = curve_broken.max(dev);
        } else {
            curve_unbroken = curve_unbroken.max(dev);
        }
    }
    pass &= curve_unbroken.max(curve_broken) <= 1e-8;
    outcome(
        pass,
        format!(
            "metric overlap {}; curve on [0,3] max dev |η|≤1 {curve_unbroken:.1e}, |η|>1 {curve_broken:.3}",
            parts.join(", ")
        ),
    )
}

fn criterion_8() -> Outcome {
    // [broken, EP]
    let mut devs = [0.0_f64; 2];
    let mut errors = 0;
    for phi in linspace(-PI, PI, 13) {
        for p in linspace(-2.0, 2.0, 9) {
            let ps = PreparedState::new(p, phi).unwrap();
            for (mp, k) in [
                (eta_model(SQRT_2, 1.0), 0),
                (eta_model(SQRT_2, -1.0), 0),
                (eta_model(1.0, 1.0), 1),
                (eta_model(1.0, -1.0), 1),
            ] {
                match (closed_form_snapshot(&mp, &ps, 50.0), asymptotic_sp(&mp, &ps)) {
                    (Ok(s), Ok(lim)) => devs[k] = devs[k].max((s.sp - lim).abs()),
                    _ => errors += 1,
                }
            }
        }
    }
    let sp_inf = |eta: f64, s: f64, phi: f64, p: f64| {
        asymptotic_sp(&eta_model(eta, s), &PreparedState::new(p, phi).unwrap()).unwrap()
    };
    let q = SQRT_2 - 1.0;
    let literal_plus = sp_inf(SQRT_2, 1.0, FRAC_PI_2, q);
    let literal_minus = sp_inf(SQRT_2, 1.0, -FRAC_PI_2, -q);
    let corrected = sp_inf(SQRT_2, 1.0, -FRAC_PI_2, q);
    let ep_max = sp_inf(1.0, 1.0, -FRAC_PI_2, 1.0);
    let ep_max_neg_s = sp_inf(1.0, -1.0, -FRAC_PI_2, 1.0);
    let [broken_dev, ep_dev] = devs;
    let maxima_ok = (literal_plus - 1.0).abs() <= 1e-6
        && (literal_minus - 1.0).abs() <= 1e-6
        && (ep_max - 1.0).abs() <= 1e-6
        && (ep_max_neg_s - 1.0).abs() <= 1e-6;
    outcome(
        errors == 0 && broken_dev <= 1e-6 && ep_dev <= 1e-6 && maxima_ok,
        format!(
            "SP(50) vs limit: broken {broken_dev:.1e}, EP {ep_dev:.1e}; η=√2 maxima at ±(π/2, √2-1): {literal_plus:.6}, {literal_minus:.6} (at (-π/2, √2-1): {corrected:.6}); η=1 at (-π/2, 1): {ep_max:.6} (s=-1: {ep_max_neg_s:.6}); {errors} errors"
        ),
    )
}

fn criterion_9() -> Outcome {
    let ps = PreparedState::new(1.0, PI).unwrap();
    let h = 1e-4;
    let mut parts = Vec::new();
    let mut pass = true;
    for (label, eta) in [("broken", SQRT_2), ("EP", 1.0)] {
        let setup = NumericSetup::for_model(&eta_model(eta, 1.0), &ps).unwrap();
        let at = setup.snapshot(20.0).unwrap();
        let (a, b) = (setup.snapshot(20.0 - h).unwrap(), setup.snapshot(20.0 + h).unwrap());
        let rate = (0..3)
            .map(|j| ((b.bloch()[j] - a.bloch()[j]) / (2.0 * h)).abs())
            .fold(0.0, f64::max);
        let ok = at.ur_gap <= 1e-6 && rate <= 1e-6;
        pass &= ok;
        parts.push(format!("{label}: UR(20) {:.2e}, max |d⟨σ_j⟩/dt| {rate:.2e}", at.ur_gap));
    }
    let mp = eta_model(0.5, 1.0);
    let period = PI / ptmetric::model::derive(&mp).lambda;
    let setup = NumericSetup::for_model(&mp, &ps).unwrap();
    let mut per = 0.0_f64;
    for t in linspace(0.0, 10.0, 20) {
        let d = setup.snapshot(t + period).unwrap().ur_gap - setup.snapshot(t).unwrap().ur_gap;
        per = per.max(d.abs());
    }
    pass &= per <= 1e-8;
    parts.push(format!("unbroken UR(t+π/λ)-UR(t) max {per:.1e}"));
    outcome(pass, parts.join("; "))
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let mp = ModelParams::new(SQRT_2, 1.0, FRAC_PI_2).unwrap();
    let cfg = model_lindblad_config(&mp);
    let grid = linspace(0.0, 30.0, 301);
    let mut parts = Vec::new();
    let mut agree = true;
    for phi in [FRAC_PI_4, -FRAC_PI_4] {
        let ps = PreparedState::new(1.0, phi).unwrap();
        let trace = NumericSetup::for_model(&mp, &ps).unwrap().trace(&grid).unwrap();
        let rho0 = DensityMatrix::pure(&initial_state(&ps)).unwrap();
        let lb = integrate(&cfg, &rho0, &grid, cfg.default_dt_max()).unwrap();
        let (ok, dev) = compare_steady_state(&trace, &lb, 15.0, 5e-2).unwrap();
        agree &= ok;
        let m = trace.snapshots.last().unwrap().bloch();
        let l = lb.last().unwrap();
        parts.push(format!(
            "φ={phi:+.4}: max dev {dev:.3} (metric ({:.3},{:.3},{:.3}), Lindblad ({:.3},{:.3},{:.3}) at t=30)",
            m[0], m[1], m[2], l.sx, l.sy, l.sz
        ));
    }
    // Error at dt and dt/2 against a dt/4 reference.
    let ps = PreparedState::new(1.0, FRAC_PI_4).unwrap();
    let rho0 = DensityMatrix::pure(&initial_state(&ps)).unwrap();
    let short = linspace(0.0, 5.0, 11);
    let run = |dt: f64| integrate(&cfg, &rho0, &short, dt).unwrap();
    let (c1, c2, c4) = (run(0.1), run(0.05), run(0.025));
    let err = |a: &[ptmetric::lindblad::BlochSample]| {
        a.iter()
            .zip(&c4)
            .map(|(x, y)| (x.sx - y.sx).abs().max((x.sy - y.sy).abs()).max((x.sz - y.sz).abs()))
            .fold(0.0, f64::max)
    };
    let ratio = err(&c1) / err(&c2);
    let order_ok = (ratio - 16.0).abs() <= 4.0;
    let (fast, time) = within_budget(start, 30.0);
    outcome(
        agree && order_ok && fast,
        format!("{}; step-halving error ratio {ratio:.2}; {time}", parts.join("; ")),
    )
}

fn criterion_11() -> Outcome {
    let start = Instant::now();
    let thetas = linspace(-PI, PI, 200);
    // s/r = 0 makes the Hamiltonian diagonal with s = 0, outside the model.
    let ratios = linspace(0.01, 2.0, 200);
    let mut mismatches = Vec::new();
    let mut count = 0;
    let mut check = |theta: f64, sr: f64| {
        let mp = ModelParams::new(1.0, sr, theta).unwrap();
        let want = regime_from_d(discriminant(theta, sr));
        let got = classify_regime(&hamiltonian(&mp), EP_BAND);
        if got.as_ref() != Ok(&want) {
            mismatches.push(format!("θ={theta:.4} s/r={sr:.4}: {got:?} vs {want}"));
        }
        count += 1;
    };
    for &theta in &thetas {
        for &sr in &ratios {
            check(theta, sr);
        }
    }
    // Points on the exceptional line s/r = |sin θ|.
    let mut ep_points = 0;
    for &theta in &thetas {
        let sr = theta.sin().abs();
        if sr > 0.01 {
            check(theta, sr);
            ep_points += 1;
        }
    }
    let (fast, time) = within_budget(start, 10.0);
    outcome(
        mismatches.is_empty() && fast,
        format!(
            "{} mismatches over {count} points ({ep_points} on d = 0){}; {time}",
            mismatches.len(),
            mismatches.first().map(|m| format!(", first {m}")).unwrap_or_default()
        ),
    )
}

const CLI_CONFIGS: [(&str, &str); 8] = [
    ("phase-diagram", "theta_count = 40\ns_over_r_count = 30\n"),
    ("ur-grid", "eta = 0.5\ns = 1\nphi_count = 15\np_count = 15\nt = 1\n"),
    ("time-trace", "eta = sqrt(2)\ns = 1\np = 1\nphi = pi\nt_max = 10\nt_count = 50\n"),
    ("sp-surface", "eta = sqrt(2)\ns = 1\nphi_count = 15\np_count = 15\n"),
    ("sp-surface", "eta = 1\ns = 1\nmode = time\nphi = -pi/2\np_count = 8\nt_max = 10\nt_count = 20\n"),
    ("overlap-curve", "eta_count = 61\n"),
    ("lindblad-compare", "r = sqrt(2)\ns = 1\ntheta = pi/2\np = 1\nphi = pi/4\nt_max = 20\nt_count = 81\n"),
    ("single-point", "eta = sqrt(2)\ns = 1\nphi = -pi/2\np = sqrt(2) - 1\nt = 3\n"),
];

fn run_cli(scenario: &str, config: &Path, out: &Path, threads: usize) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_ptmetric"))
        .arg(scenario)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .arg("--threads")
        .arg(threads.to_string())
        .output()
        .map_err(|e| e.to_string())?;
    if status.status.success() {
        Ok(())
    } else {
        Err(format!(
            "{scenario} exited with {:?}: {}",
            status.status.code(),
            String::from_utf8_lossy(&status.stderr).trim()
        ))
    }
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn criterion_12() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let mut failures = Vec::new();
    let mut files = 0;
    for (k, (scenario, body)) in CLI_CONFIGS.iter().enumerate() {
        let cfg = tmp.path().join(format!("{k}.cfg"));
        std::fs::write(&cfg, format!("scenario = {scenario}\n{body}")).unwrap();
        let runs: Vec<_> = [(1, 1), (2, 1), (3, 4)]
            .into_iter()
            .map(|(n, threads)| {
                let out = tmp.path().join(format!("{k}-{n}"));
                run_cli(scenario, &cfg, &out, threads).map(|_| dir_bytes(&out))
            })
            .collect();
        match (&runs[0], &runs[1], &runs[2]) {
            (Ok(a), Ok(b), Ok(c)) => {
                files += a.len();
                if a.len() != 2 {
                    failures.push(format!("{scenario}: expected data + manifest, got {}", a.len()));
                }
                if a != b {
                    failures.push(format!("{scenario}: repeated runs differ"));
                }
                if a != c {
                    failures.push(format!("{scenario}: thread count changes output"));
                }
            }
            _ => {
                for r in &runs {
                    if let Err(e) = r {
                        failures.push(e.clone());
                    }
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} scenario configs, {files} files byte-identical across repeated runs and thread counts{}",
            CLI_CONFIGS.len(),
            failures.first().map(|f| format!("; {} failures, first: {f}", failures.len())).unwrap_or_default()
        ),
    )
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    results.push((1, "pseudo-Hermiticity", criterion_1()));
    results.push((2, "closed-form metrics", criterion_2()));
    let oracle = criterion_3();
    let norm = criterion_4(&oracle);
    results.push((3, "oracle equivalence", oracle.outcome));
    results.push((4, "normalization identities", norm));
    results.push((5, "UR nonnegativity", criterion_5()));
    results.push((6, "rotated-frame saturation", criterion_6()));
    results.push((7, "eigenstate overlap", criterion_7()));
    results.push((8, "asymptotic survival", criterion_8()));
    results.push((9, "steady-state uncertainty", criterion_9()));
    results.push((10, "Lindblad agreement", criterion_10()));
    results.push((11, "regime classification", criterion_11()));
    results.push((12, "CLI determinism", criterion_12()));

    let mut failed = 0;
    for (n, name, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} [{tag}] {name}: {}", o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
