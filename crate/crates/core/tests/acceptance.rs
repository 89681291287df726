//! One line per acceptance criterion, `PASS criterion N: …` or
//! `FAIL criterion N: …`; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use pcmq_core::bounds::{
    log_spaced, m1_worst_case, m2_worst_case, scaling_slope_fit, two_sided_estimate,
    DEFAULT_THRESHOLD,
};
use pcmq_core::combinatorics::verify_all;
use pcmq_core::frames::fibonacci_sphere_frame;
use pcmq_core::limit_error::{
    limiting_error, monte_carlo_limit, reduced_integral, rotation_invariance_check, Method,
    MonteCarloConfig, Parity, DEFAULT_TOL,
};
use pcmq_core::quantization::{quantize_and_reconstruct, wnh_mse, QuantScheme, SignalSpec};
use pcmq_core::special_fn::{asymptotic_estimate, bessel_j};

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn identity_suites() -> Verdict {
    let start = Instant::now();
    let reports = match verify_all(30) {
        Ok(r) => r,
        Err(e) => return verdict(false, format!("error: {e}")),
    };
    let secs = start.elapsed().as_secs_f64();
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.name.as_str())
        .collect();
    let cases: usize = reports.iter().map(|r| r.cases).sum();
    verdict(
        failed.is_empty() && secs < 30.0,
        format!(
            "{} suites, {cases} cases, failing {failed:?}, {secs:.2}s (limit 30s)",
            reports.len()
        ),
    )
}

fn worst_case_constants() -> Verdict {
    let m1 = m1_worst_case(2).map(|b| b.value);
    let m2 = m2_worst_case(1).map(|b| b.value);
    match (m1, m2) {
        (Ok(m1), Ok(m2)) => verdict(
            (m1 - 0.138).abs() <= 0.002 && (m2 - 0.02).abs() <= 0.005,
            format!("min M1(·,2) = {m1:.6} (0.138 ± 0.002), min M2(·,1) = {m2:.6} (0.02 ± 0.005)"),
        ),
        (a, b) => verdict(false, format!("error: {a:?} {b:?}")),
    }
}

fn bessel_envelope() -> Verdict {
    let xs = [0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0];
    let mut points = 0;
    let mut violations = Vec::new();
    for i in 1..=12 {
        let order = i as f64 / 2.0;
        for &x in &xs {
            let (j, env) = match (bessel_j(order, x), asymptotic_estimate(order, x)) {
                (Ok(j), Ok(env)) => (j, env),
                (a, b) => return verdict(false, format!("J_{order}({x}): {a:?} {b:?}")),
            };
            points += 1;
            if !env.contains(&j) {
                violations.push(format!("J_{order}({x}) excess {:.3e}", env.excess(&j)));
            }
        }
    }
    verdict(
        violations.is_empty(),
        format!(
            "{points} grid points, {} violations {violations:?}",
            violations.len()
        ),
    )
}

fn dual_method() -> Verdict {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for n in 1..=3 {
        for parity in [Parity::Even, Parity::Odd] {
            for &ratio in &[10.25, 25.375, 100.25] {
                let a = reduced_integral(ratio, 1.0, n, parity, Method::Quadrature, DEFAULT_TOL);
                let b = reduced_integral(ratio, 1.0, n, parity, Method::BesselSeries, DEFAULT_TOL);
                match (a, b) {
                    (Ok(a), Ok(b)) => {
                        let rel = (a.value - b.value).abs() / a.value.abs();
                        worst = worst.max(rel);
                        if rel > 1e-6 {
                            failures.push(format!("n={n} {parity:?} R={ratio}: {rel:.2e}"));
                        }
                    }
                    (a, b) => failures.push(format!("n={n} {parity:?} R={ratio}: {a:?} {b:?}")),
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        failures.is_empty() && secs < 60.0,
        format!("18 pairs, worst relative gap {worst:.2e} (limit 1e-6), {secs:.2}s (limit 60s) {failures:?}"),
    )
}

fn sandwich() -> Verdict {
    let mut cases = Vec::new();
    for n in [2u32, 3] {
        for eps in [0.25, 0.3, 0.375, 0.5] {
            cases.push((Parity::Even, n, eps));
        }
    }
    for n in [1u32, 2] {
        for eps in [1.0 / 6.0, 0.25, 1.0 / 3.0] {
            cases.push((Parity::Odd, n, eps));
        }
    }
    let mut checked = 0;
    let mut violations = Vec::new();
    for &(parity, n, eps) in &cases {
        for base in [100.0, 1000.0] {
            let r = base + eps;
            match two_sided_estimate(r, 1.0, n, parity, DEFAULT_THRESHOLD) {
                Ok(s) => {
                    checked += 1;
                    if !s.holds {
                        violations.push(format!(
                            "{parity:?} n={n} R={r}: {:.4e} ≤ {:.4e} ≤ {:.4e} fails",
                            s.lower, s.integral, s.upper
                        ));
                    }
                }
                Err(e) => violations.push(format!("{parity:?} n={n} R={r}: {e}")),
            }
        }
    }
    verdict(
        violations.is_empty(),
        format!(
            "{checked} points, {} violations {violations:?}",
            violations.len()
        ),
    )
}

fn slopes() -> Verdict {
    let start = Instant::now();
    let ks = log_spaced(100, 1000, 12);
    let mut parts = Vec::new();
    let mut ok = true;
    for (d, eps) in [(3usize, 0.25), (4, 0.375), (5, 0.25)] {
        let expected = (d as f64 + 1.0) / 2.0;
        match scaling_slope_fit(d, 1.0, eps, &ks) {
            Ok(fit) => {
                ok &= (fit.slope - expected).abs() <= 0.05;
                parts.push(format!("d={d}: {:.4} (want {expected} ± 0.05)", fit.slope));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("d={d}: {e}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        ok && secs < 300.0,
        format!("{}, {secs:.2}s (limit 300s)", parts.join(", ")),
    )
}

fn frame_limit() -> Verdict {
    let delta = 0.1;
    let count = 200_000;
    let scheme = QuantScheme::new(delta).unwrap();
    let frame = fibonacci_sphere_frame(count).unwrap();
    let rms = wnh_mse(3, count, scheme).unwrap().sqrt();
    let mut ok = true;
    let mut parts = Vec::new();
    for ratio in [5.03, 20.3] {
        let x = SignalSpec::along(&[1.0, 2.0, 3.0], ratio * delta, scheme).unwrap();
        let e = quantize_and_reconstruct(&x, &frame, scheme).unwrap().error;
        let limit = limiting_error(&x, scheme, Method::Quadrature, DEFAULT_TOL)
            .unwrap()
            .value;
        let gap = (e - limit).abs() / limit;
        let factor = e / rms;
        ok &= gap <= 0.05 && factor >= 10.0;
        parts.push(format!(
            "R={ratio}: E={e:.4e} limit={limit:.4e} gap {:.2}% (≤ 5%), E/√WNH = {factor:.2} (≥ 10)",
            100.0 * gap
        ));
    }
    verdict(ok, parts.join("; "))
}

fn rotations() -> Verdict {
    let scheme = QuantScheme::new(1.0).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [3usize, 4, 5] {
        let dir: Vec<f64> = (1..=d).map(|i| i as f64).collect();
        let x = SignalSpec::along(&dir, 12.4, scheme).unwrap();
        match rotation_invariance_check(&x, scheme, 5, 17, Method::Quadrature, DEFAULT_TOL) {
            Ok(dev) => {
                ok &= dev <= 1e-6;
                parts.push(format!("d={d}: {dev:.2e}"));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("d={d}: {e}"));
            }
        }
        // the vector-valued estimator sees the rotation directly; it only has
        // to agree within its own noise
        let cfg = MonteCarloConfig {
            samples: 400_000,
            batches: 8,
            seed: 23,
        };
        let quad = limiting_error(&x, scheme, Method::Quadrature, DEFAULT_TOL)
            .unwrap()
            .value;
        let mc = monte_carlo_limit(&x, scheme, &cfg).unwrap();
        ok &= (mc.value - quad).abs() <= 4.0 * mc.error_estimate;
    }
    verdict(
        ok,
        format!(
            "max relative spread over 5 rotations (≤ 1e-6): {}",
            parts.join(", ")
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("identity suites to 30", identity_suites),
        ("worst-case M1, M2", worst_case_constants),
        ("Bessel envelope grid", bessel_envelope),
        ("dual-method agreement", dual_method),
        ("two-sided estimate grid", sandwich),
        ("rate slopes", slopes),
        ("finite frame vs limit and WNH", frame_limit),
        ("rotation invariance", rotations),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.passed {
            failed += 1;
        }
        println!(
            "{} criterion {}: {name}: {}",
            if v.passed { "PASS" } else { "FAIL" },
            i + 1,
            v.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
