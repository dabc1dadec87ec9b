//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p mopo-squeeze --test acceptance`.

use std::f64::consts::PI;
use std::process::Command;

use mopo::bogoliubov::{coefficients, unitarity_residuals};
use mopo::dispersion::derived_scales;
use mopo::materials::PPLN;
use mopo::phase_matching::poling_period;
use mopo::spectra::{
    opo_spectrum, optimal_phase, spectrum_general, spectrum_optimized, spectrum_universal,
    squeezing_bandwidth,
};
use mopo::{
    Branch, DerivedScales, MaterialDatabase, Model, QuadratureSetting, TuningConfiguration,
    THRESHOLD_GAIN,
};
use mopo_cli::figures::{self, FigureName, FigureOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Tolerances, one block per criterion.
const C1_ABS_TOL: f64 = 1e-6;
const C2_GRID_POINTS: usize = 10_000;
#[allow(clippy::approx_constant)]
const C2_NEAR_THRESHOLD_GAIN: f64 = 1.5707;
const C2_BANDWIDTH_TARGET: f64 = 2.72;
const C2_BANDWIDTH_TOL: f64 = 0.01;
const C3_SMALL_EPS_REL_TOL: f64 = 0.02;
const C3_LARGE_EPS_REL_TOL: f64 = 0.10;
const C4_SAMPLES: usize = 10_000;
const C4_TOL: f64 = 1e-12;
const C5_SAMPLES: usize = 1000;
const C5_TOL: f64 = 1e-10;
const C6_TARGET_NM: f64 = 368.0;
const C6_TOL_NM: f64 = 3.0;
const C7_TARGET_RAD_S: f64 = 1e10;
const C7_FACTOR: f64 = 2.0;
const C7_GVM_RATIO: f64 = 100.0;
const C8_INNER: f64 = 5.0;
const C8_INNER_REL_TOL: f64 = 0.01;
const C8_OUTER: f64 = 15.0;
const C8_OUTER_REL_TOL: f64 = 0.05;
const C9_SAMPLES: usize = 100;
const C9_EQUALITY_TOL: f64 = 1e-10;
const C10_MAX_EPS: f64 = 0.1;
const C10_MAX_OMEGA_BAR: f64 = 0.3;
const C10_REL_TOL: f64 = 0.05;

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn reference(g: f64) -> (TuningConfiguration, DerivedScales) {
    let t = figures::reference_tuning(MaterialDatabase::bundled())
        .unwrap()
        .with_gain(g)
        .unwrap();
    let s = derived_scales(&t).unwrap();
    (t, s)
}

fn fixed_sigma(g: f64, omega_tilde: f64, model: Model) -> f64 {
    let (t, s) = reference(g);
    spectrum_general(
        &t,
        &s,
        &QuadratureSetting::fixed(&t),
        s.denormalized(omega_tilde),
        model,
    )
    .unwrap()
}

fn c1_zero_frequency_at_g1() -> Outcome {
    let value = fixed_sigma(1.0, 0.0, Model::Linearized);
    let expected = (1.0 - 1f64.sin()) / (1.0 + 1f64.sin());
    let err = (value - expected).abs();
    outcome(
        err < C1_ABS_TOL,
        format!(
            "Sigma(0) = {value:.10}, (1 - sin 1)/(1 + sin 1) = {expected:.10}, |diff| = {err:.1e}"
        ),
    )
}

fn c2_shot_noise_crossing() -> Outcome {
    let mut details = Vec::new();
    let mut passed = true;
    for g in [1.0, 1.5] {
        let (t, s) = reference(g);
        let setting = QuadratureSetting::fixed(&t);
        let predicted = squeezing_bandwidth(g, &s).unwrap() / s.omega_gvs;
        let upper = 5.0;
        let step = upper / (C2_GRID_POINTS - 1) as f64;
        let sigma = |x: f64| {
            spectrum_general(&t, &s, &setting, s.denormalized(x), Model::Linearized).unwrap() - 1.0
        };
        let mut crossing = None;
        let mut prev = sigma(0.0);
        for k in 1..C2_GRID_POINTS {
            let x = k as f64 * step;
            let cur = sigma(x);
            if prev < 0.0 && cur >= 0.0 {
                crossing = Some((x - step, x));
                break;
            }
            prev = cur;
        }
        match crossing {
            Some((a, b)) => {
                let ok = predicted >= a - step && predicted <= b + step;
                passed &= ok;
                details.push(format!(
                    "g={g}: change in [{a:.5}, {b:.5}], predicted {predicted:.5}"
                ));
            }
            None => {
                passed = false;
                details.push(format!("g={g}: no crossing below {upper}"));
            }
        }
    }
    let (_, s) = reference(C2_NEAR_THRESHOLD_GAIN);
    let near = squeezing_bandwidth(C2_NEAR_THRESHOLD_GAIN, &s).unwrap() / s.omega_gvs;
    passed &= (near - C2_BANDWIDTH_TARGET).abs() <= C2_BANDWIDTH_TOL;
    details.push(format!(
        "g={C2_NEAR_THRESHOLD_GAIN}: bandwidth {near:.4} Omega_gvs"
    ));
    outcome(passed, details.join("; "))
}

fn c3_near_threshold_law() -> Outcome {
    let mut passed = true;
    let mut details = Vec::new();
    for (eps, tol) in [
        (0.02, C3_SMALL_EPS_REL_TOL),
        (0.05, C3_SMALL_EPS_REL_TOL),
        (0.1, C3_SMALL_EPS_REL_TOL),
        (0.3, C3_LARGE_EPS_REL_TOL),
    ] {
        let exact = fixed_sigma(THRESHOLD_GAIN - eps, 0.0, Model::Exact);
        let law = eps * eps / 4.0;
        let rel = (exact - law).abs() / law;
        passed &= rel < tol;
        details.push(format!("eps={eps}: rel {rel:.2e}"));
    }
    outcome(passed, details.join(", "))
}

fn c4_reciprocity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..C4_SAMPLES {
        let g = rng.gen_range(0.0..THRESHOLD_GAIN - 1e-6);
        let x = rng.gen_range(-30.0..30.0);
        let p = spectrum_universal(g, x, Branch::Squeeze)
            * spectrum_universal(g, x, Branch::Antisqueeze);
        worst = worst.max((p - 1.0).abs());
    }
    outcome(
        worst < C4_TOL,
        format!("max |S+ * S- - 1| = {worst:.2e} over {C4_SAMPLES} points"),
    )
}

fn c5_unitarity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (base, s) = reference(0.0);
    let mut worst: f64 = 0.0;
    for _ in 0..C5_SAMPLES {
        let g = rng.gen_range(0.0..1.55);
        let x = rng.gen_range(-20.0..20.0);
        let t = base
            .clone()
            .with_gain(g)
            .unwrap()
            .with_pump_phase(rng.gen_range(-PI..PI));
        let w = s.denormalized(x);
        for model in [Model::Exact, Model::Linearized] {
            let plus = coefficients(&t, &s, w, model).unwrap();
            let minus = coefficients(&t, &s, -w, model).unwrap();
            worst = worst.max(unitarity_residuals(&plus, &minus).max());
        }
    }
    outcome(
        worst < C5_TOL,
        format!("max residual {worst:.2e} over {C5_SAMPLES} samples x 2 models"),
    )
}

fn c6_poling_period() -> Outcome {
    let m = MaterialDatabase::bundled().get(PPLN).unwrap();
    let lambda = poling_period(m, 800e-9, 1600e-9, 1).unwrap() * 1e9;
    outcome(
        (lambda - C6_TARGET_NM).abs() <= C6_TOL_NM,
        format!("Lambda = {lambda:.3} nm"),
    )
}

fn c7_time_scales() -> Outcome {
    let (_, s) = reference(0.0);
    let in_window =
        s.omega_gvs >= C7_TARGET_RAD_S / C7_FACTOR && s.omega_gvs <= C7_TARGET_RAD_S * C7_FACTOR;
    let t = figures::build(
        FigureName::Fig5,
        &FigureOptions::default(),
        MaterialDatabase::bundled(),
    )
    .unwrap()
    .remove(0)
    .table;
    let gvs = t.column("omega_gvs").unwrap();
    let gvm = t.column("omega_gvm").unwrap();
    let min_ratio = gvs
        .iter()
        .zip(&gvm)
        .filter(|(_, m)| m.is_finite())
        .map(|(s, m)| m / s)
        .fold(f64::INFINITY, f64::min);
    let non_degenerate = gvm.iter().filter(|m| m.is_finite()).count();
    outcome(
        in_window && min_ratio >= C7_GVM_RATIO && non_degenerate + 1 == gvm.len(),
        format!(
            "Omega_gvs = {:.4e} rad/s; min |Omega_gvm|/Omega_gvs = {min_ratio:.1} over {non_degenerate} non-degenerate tunings",
            s.omega_gvs
        ),
    )
}

fn c8_exact_vs_linearized() -> Outcome {
    let mut worst_inner: f64 = 0.0;
    let mut worst_outer: f64 = 0.0;
    for g in [0.5, 1.0, 1.5, 1.55] {
        let (t, s) = reference(g);
        let setting = QuadratureSetting::fixed(&t);
        for k in -1500..=1500 {
            let x = k as f64 * 0.01;
            let w = s.denormalized(x);
            let exact = spectrum_general(&t, &s, &setting, w, Model::Exact).unwrap();
            let linear = spectrum_general(&t, &s, &setting, w, Model::Linearized).unwrap();
            let rel = (exact - linear).abs() / linear;
            if x.abs() <= C8_INNER {
                worst_inner = worst_inner.max(rel);
            }
            if x.abs() <= C8_OUTER {
                worst_outer = worst_outer.max(rel);
            }
        }
    }
    outcome(
        worst_inner < C8_INNER_REL_TOL && worst_outer < C8_OUTER_REL_TOL,
        format!("max rel diff {worst_inner:.2e} (|x|<=5), {worst_outer:.2e} (|x|<=15)"),
    )
}

fn c9_optimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (base, s) = reference(0.0);
    let mut worst_gap: f64 = 0.0;
    let mut worst_eq: f64 = 0.0;
    for _ in 0..C9_SAMPLES {
        let g = rng.gen_range(0.0..1.55);
        let x = rng.gen_range(-10.0..10.0);
        let phase = rng.gen_range(-PI..PI);
        let t = base.clone().with_gain(g).unwrap();
        let w = s.denormalized(x);
        for model in [Model::Exact, Model::Linearized] {
            let best = spectrum_optimized(&t, &s, w, model).unwrap();
            let any = spectrum_general(
                &t,
                &s,
                &QuadratureSetting::new(phase, 0.0, Branch::Squeeze),
                w,
                model,
            )
            .unwrap();
            worst_gap = worst_gap.max(best - any);
            let opt = optimal_phase(&t, &s, w, model).unwrap();
            let at_opt = spectrum_general(
                &t,
                &s,
                &QuadratureSetting::new(opt, 0.0, Branch::Squeeze),
                w,
                model,
            )
            .unwrap();
            worst_eq = worst_eq.max((at_opt - best).abs());
        }
    }
    let mut max_opt: f64 = 0.0;
    for g in [0.5, 1.0, 1.5, 1.55] {
        let (t, s) = reference(g);
        for k in -2000..=2000 {
            let w = s.denormalized(k as f64 * 0.01);
            for model in [Model::Exact, Model::Linearized] {
                max_opt = max_opt.max(spectrum_optimized(&t, &s, w, model).unwrap());
            }
        }
    }
    outcome(
        worst_gap <= 0.0 && worst_eq < C9_EQUALITY_TOL && max_opt <= 1.0,
        format!(
            "max(optimized - general) = {worst_gap:.2e}, |general(opt) - optimized| <= {worst_eq:.2e}, max optimized = {max_opt:.6}"
        ),
    )
}

fn c10_opo_correspondence() -> Outcome {
    let mut worst = (0.0f64, 0.0, 0.0);
    for i in 1..=20 {
        let eps = C10_MAX_EPS * i as f64 / 20.0;
        for k in -30..=30 {
            let w = C10_MAX_OMEGA_BAR * k as f64 / 30.0;
            let law = 0.25 * (eps * eps + w * w);
            let rel = (opo_spectrum(1.0 - eps, w) - law).abs() / law;
            if rel > worst.0 {
                worst = (rel, eps, w);
            }
        }
    }
    outcome(
        worst.0 < C10_REL_TOL,
        format!(
            "max rel deviation {:.4} at eps={}, Omega_bar={}",
            worst.0, worst.1, worst.2
        ),
    )
}

fn c11_cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_mopo-squeeze");
    let dir = tempfile::tempdir().unwrap();
    let mut tables = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let status = Command::new(bin)
            .args(["figure", "fig2", "--out"])
            .arg(&out)
            .output()
            .unwrap()
            .status;
        if !status.success() {
            return outcome(false, format!("figure fig2 exited with {status}"));
        }
        tables.push(std::fs::read(out.join("fig2.tsv")).unwrap());
    }
    let identical = tables[0] == tables[1];
    let selfcheck = Command::new(bin).arg("selfcheck").output().unwrap();
    outcome(
        identical && selfcheck.status.success(),
        format!(
            "fig2 tables identical: {identical} ({} bytes); selfcheck exit {}",
            tables[0].len(),
            selfcheck.status.code().unwrap_or(-1)
        ),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("zero-frequency squeezing at g = 1", c1_zero_frequency_at_g1),
        ("shot-noise crossing", c2_shot_noise_crossing),
        ("near-threshold law", c3_near_threshold_law),
        ("reciprocity", c4_reciprocity),
        ("unitarity", c5_unitarity),
        ("poling period", c6_poling_period),
        ("time scales", c7_time_scales),
        ("exact vs linearized", c8_exact_vs_linearized),
        ("optimality", c9_optimality),
        ("cavity OPO correspondence", c10_opo_correspondence),
        ("CLI determinism and selfcheck", c11_cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.passed {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
