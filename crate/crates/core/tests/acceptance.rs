//! Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use xyzchain::analysis::{
    concurrence_zero_t, critical_temperature, monotonicity_scan, CriticalTemperature, ScanConfig,
};
use xyzchain::cli::{max_oracle_deviation, verify_samples};
use xyzchain::concurrence::{
    branch_candidates, concurrence, concurrence_xxx, concurrence_xxz, concurrence_xy_anisotropic,
    concurrence_xy_isotropic,
};
use xyzchain::model::{derive_params, Couplings};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const XXX_TC: f64 = 0.910_239_226_626_837_3; // 1/ln 3
const XY_TC: f64 = 0.567_296_328_553_255_5; // 1/(2 ln(1+√2))

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c_of(c: &Couplings, kt: f64) -> f64 {
    concurrence(c, kt).expect("valid point").value
}

fn tc(c: &Couplings) -> CriticalTemperature {
    critical_temperature(c, 0.01, 5.0).expect("valid bracket")
}

fn oracle_equivalence() -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let started = Instant::now();
    let (worst, _) = pool.install(|| max_oracle_deviation(&verify_samples(10_000, 42))).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    check(
        worst <= 1e-9 && elapsed < Duration::from_secs(10),
        format!("max deviation {worst:.3e} over 10000 samples in {:.2} s", elapsed.as_secs_f64()),
    )
}

fn ising_zero() -> Outcome {
    let mut worst: f64 = 0.0;
    for jz in [-2.0, -1.0, 1.0, 2.0] {
        for kt in [0.01, 0.1, 1.0, 10.0] {
            worst = worst.max(c_of(&Couplings::ising(jz), kt));
        }
    }
    check(worst == 0.0, format!("max C = {worst}"))
}

fn xxx_critical_point() -> Outcome {
    let found = tc(&Couplings::xxx(1.0));
    let ferro = tc(&Couplings::xxx(-1.0));
    let ferro_max = (1..=500).map(|i| c_of(&Couplings::xxx(-1.0), 0.01 * f64::from(i))).fold(0.0, f64::max);
    let err = found.value().map_or(f64::INFINITY, |t| (t - XXX_TC).abs());
    check(
        err <= 1e-6 && ferro == CriticalTemperature::Never && ferro_max == 0.0,
        format!("Tc = {found:?} (error {err:.2e}); ferromagnet Tc = {ferro:?}, max C = {ferro_max}"),
    )
}

fn xy_critical_point() -> Outcome {
    let found = tc(&Couplings::xy(1.0, 1.0));
    let err = found.value().map_or(f64::INFINITY, |t| (t - XY_TC).abs());
    let mut asym: f64 = 0.0;
    for i in 1..=100 {
        let j = 0.05 * f64::from(i);
        for k in 1..=50 {
            let kt = 0.02 * f64::from(k);
            asym = asym.max((c_of(&Couplings::xy(j, j), kt) - c_of(&Couplings::xy(-j, -j), kt)).abs());
        }
    }
    check(
        err <= 1e-6 && asym <= 1e-12,
        format!("Tc = {found:?} (error {err:.2e}); max |C(J) - C(-J)| = {asym:e}"),
    )
}

fn anisotropy_orderings() -> Outcome {
    let at = |d: f64, kt: f64| c_of(&Couplings::from_delta_sigma(d, 1.0, 0.0).unwrap(), kt);
    let low: Vec<f64> = [0.3, 0.6, 0.8].iter().map(|&d| at(d, 0.1)).collect();
    let high: Vec<f64> = [1.2, 1.4, 1.7].iter().map(|&d| at(d, 0.3)).collect();
    let tcs: Vec<Option<f64>> = [1.2, 1.4, 1.7]
        .iter()
        .map(|&d| tc(&Couplings::from_delta_sigma(d, 1.0, 0.0).unwrap()).value())
        .collect();
    let decreasing = low.windows(2).all(|w| w[1] < w[0]);
    let increasing = high.windows(2).all(|w| w[1] > w[0]);
    let tc_increasing = tcs.iter().all(Option::is_some) && tcs.windows(2).all(|w| w[1] > w[0]);
    check(
        decreasing && increasing && tc_increasing,
        format!("C(0.3,0.6,0.8; kt=0.1) = {low:?}; C(1.2,1.4,1.7; kt=0.3) = {high:?}; Tc = {tcs:?}"),
    )
}

fn zero_manifold() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let delta: f64 = rng.gen_range(-5.0..5.0);
        let sigma: f64 = rng.gen_range(-5.0..5.0);
        let c = Couplings::from_delta_sigma(delta, sigma, (delta.abs() - sigma.abs()) / 2.0).unwrap();
        for kt in [0.01, 0.1, 1.0, 10.0] {
            worst = worst.max(c_of(&c, kt));
        }
        worst = worst.max(concurrence_zero_t(&c).unwrap());
    }
    let mut edges: f64 = 0.0;
    for d in [-4.0, 4.0] {
        let c = Couplings::from_delta_sigma(d, 2.0, 1.0).unwrap();
        for kt in [0.01, 0.05, 0.1, 1.0, 10.0] {
            edges = edges.max(c_of(&c, kt));
        }
    }
    check(
        worst <= 1e-12 && edges == 0.0,
        format!("max C on 100 random manifold points = {worst:e}; at Sigma=2, jz=1, Delta=+-4: {edges}"),
    )
}

fn monotonicity() -> Outcome {
    let desk = ScanConfig::desk_scale();
    let started = Instant::now();
    let report = monotonicity_scan(&desk).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    let wide = monotonicity_scan(&ScanConfig::symmetric(50.0, 5.0)).map_err(|e| e.to_string())?;
    check(
        report.violations.is_empty() && wide.violations.is_empty() && elapsed < Duration::from_secs(300),
        format!(
            "{} points, {} violations, max dC/dkT {:e}, {:.2} s; wide grid {} points, {} violations",
            report.total_points,
            report.violations.len(),
            report.max_derivative,
            elapsed.as_secs_f64(),
            wide.total_points,
            wide.violations.len()
        ),
    )
}

fn branch_continuity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut worst_gap = 0.0;
    for _ in 0..1000 {
        let delta: f64 = rng.gen_range(-5.0..5.0);
        let sigma: f64 = rng.gen_range(-5.0..5.0);
        let kt: f64 = rng.gen_range(0.02..5.0);
        let eps: f64 = rng.gen_range(-1e-8..1e-8);
        // places the point at 2α − (|β| − |γ|) = eps
        let jz = (delta.abs() - sigma.abs()) / 2.0 + 2.0 * kt * eps;
        let c = Couplings::from_delta_sigma(delta, sigma, jz).unwrap();
        let p = derive_params(&c, kt).unwrap();
        let (c1, c2) = branch_candidates(&p);
        if (c1 - c2).abs() > worst {
            worst = (c1 - c2).abs();
            worst_gap = 2.0 * p.alpha - (p.beta.abs() - p.gamma.abs());
        }
    }
    check(
        worst <= 1e-9,
        format!("max |C1 - C2| = {worst:.3e} (at 2a-(|b|-|g|) = {worst_gap:.3e}) over 1000 points within 1e-8"),
    )
}

fn zero_temperature_limits() -> Outcome {
    let cases = [
        ("unique singlet", Couplings::xxx(1.0)),
        ("triplet-degenerate", Couplings::xxx(-1.0)),
        ("Phi-degenerate XXZ", Couplings::xxz(0.5, -2.0)),
        ("on-manifold", Couplings::from_delta_sigma(4.0, 2.0, 1.0).unwrap()),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, c) in cases {
        let limit = concurrence_zero_t(&c).unwrap();
        let cold = c_of(&c, 1e-3);
        ok &= (cold - limit).abs() <= 5e-3;
        parts.push(format!("{name}: C(1e-3) = {cold:.6}, limit = {limit:.6}"));
    }
    check(ok, parts.join("; "))
}

fn special_cases() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = [0.0f64; 4];
    for _ in 0..1000 {
        let a: f64 = rng.gen_range(-5.0..5.0);
        let b: f64 = rng.gen_range(-5.0..5.0);
        let kt: f64 = rng.gen_range(0.02..5.0);
        let diffs = [
            concurrence_xy_isotropic(a, kt).unwrap().value - c_of(&Couplings::xy(a, a), kt),
            concurrence_xy_anisotropic(a, b, kt).unwrap().value - c_of(&Couplings::xy(a, b), kt),
            concurrence_xxx(a, kt).unwrap().value - c_of(&Couplings::xxx(a), kt),
            concurrence_xxz(a, b, kt).unwrap().value - c_of(&Couplings::xxz(a, b), kt),
        ];
        for (w, d) in worst.iter_mut().zip(diffs) {
            *w = w.max(d.abs());
        }
    }
    check(
        worst.iter().all(|&w| w <= 1e-12),
        format!(
            "max deviation: XY iso {:e}, XY aniso {:e}, XXX {:e}, XXZ {:e}",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("ising separable", ising_zero),
        ("xxx critical point", xxx_critical_point),
        ("xy isotropic critical point", xy_critical_point),
        ("anisotropy orderings", anisotropy_orderings),
        ("zero-entanglement manifold", zero_manifold),
        ("monotonicity scan", monotonicity),
        ("branch continuity", branch_continuity),
        ("zero-temperature limits", zero_temperature_limits),
        ("special-case degeneration", special_cases),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
