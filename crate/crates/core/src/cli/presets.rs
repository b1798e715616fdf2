//! Sweep presets reproducing the data behind each published figure.

use crate::analysis::{SweepSpec, SweepVariable};
use crate::cli::csv::fmt_sig;
use crate::model::Couplings;

/// One series of a preset; `label` distinguishes series in the CSV `var`
/// column (`kt@anisotropy=1.2`).
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub spec: SweepSpec,
}

pub const PRESET_NAMES: [&str; 8] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"];

const KT_FROM: f64 = 0.01;
const KT_TO: f64 = 2.0;
const KT_STEPS: usize = 200;
const FIG5_6_KTS: [f64; 5] = [0.05, 0.1, 0.2, 0.4, 0.8];
const PROBABILITY_KTS: [f64; 2] = [0.4, 0.8];

fn kt_sweep(base: Couplings, steps: usize) -> SweepSpec {
    SweepSpec {
        variable: SweepVariable::KT,
        start: KT_FROM,
        stop: KT_TO,
        steps,
        base,
        kt: KT_FROM,
    }
}

fn xy_anisotropy_series(deltas: &[f64]) -> Vec<Series> {
    deltas
        .iter()
        .map(|&d| Series {
            label: format!("anisotropy={}", fmt_sig(d)),
            // Σ = 1, so Δ = δ
            spec: kt_sweep(Couplings::from_delta_sigma(d, 1.0, 0.0).expect("finite"), KT_STEPS),
        })
        .collect()
}

/// Δ-sweep at Σ = 2, jz = 1 (manifold at Δ = ±4).
fn delta_family(kts: &[f64]) -> Vec<Series> {
    let base = Couplings::from_delta_sigma(0.0, 2.0, 1.0).expect("finite");
    kts.iter()
        .map(|&kt| Series {
            label: format!("kt={}", fmt_sig(kt)),
            spec: SweepSpec {
                variable: SweepVariable::Delta,
                start: -8.0,
                stop: 8.0,
                steps: 321,
                base,
                kt,
            },
        })
        .collect()
}

/// jz-sweep at Δ = 7, Σ = 1 (manifold at jz = 3).
fn jz_family(kts: &[f64]) -> Vec<Series> {
    let base = Couplings::from_delta_sigma(7.0, 1.0, 0.0).expect("finite");
    kts.iter()
        .map(|&kt| Series {
            label: format!("kt={}", fmt_sig(kt)),
            spec: SweepSpec {
                variable: SweepVariable::Jz,
                start: -10.0,
                stop: 10.0,
                steps: 401,
                base,
                kt,
            },
        })
        .collect()
}

/// kt-sweeps at `count` evenly spaced values of `set` over `[lo, hi]`, the
/// surface panels accompanying the fixed-kt families.
fn surface(lo: f64, hi: f64, count: i32, name: &str, set: impl Fn(f64) -> Couplings) -> Vec<Series> {
    (0..count)
        .map(|i| {
            let x = (lo * f64::from(count - 1 - i) + hi * f64::from(i)) / f64::from(count - 1);
            Series {
                label: format!("{name}={}", fmt_sig(x)),
                spec: kt_sweep(set(x), 100),
            }
        })
        .collect()
}

/// Series for a named preset, or `None` if the name is unknown. `fig5a` and
/// `fig6a` are accepted as aliases of the probability presets `fig7`/`fig8`.
pub fn preset(name: &str) -> Option<Vec<Series>> {
    let series = match name {
        "fig1" => xy_anisotropy_series(&[0.3, 0.6, 0.8]),
        "fig2" => xy_anisotropy_series(&[1.2, 1.4, 1.7]),
        "fig3" => [1.5, 1.0, 0.5]
            .iter()
            .map(|&j| Series {
                label: format!("j={}", fmt_sig(j)),
                spec: kt_sweep(Couplings::xxx(j), KT_STEPS),
            })
            .collect(),
        "fig4" => (0..=40)
            .map(|i| {
                // J from −2 to 2 in steps of 0.1, exact at the nodes
                let j = f64::from(i - 20) / 10.0;
                Series {
                    label: format!("j={}", fmt_sig(j)),
                    spec: kt_sweep(Couplings::xxz(j, -0.5), 100),
                }
            })
            .collect(),
        "fig5" => {
            let mut series = surface(-8.0, 8.0, 33, "delta", |d| {
                Couplings::from_delta_sigma(d, 2.0, 1.0).expect("finite")
            });
            series.extend(delta_family(&FIG5_6_KTS));
            series
        }
        "fig6" => {
            let mut series = surface(-10.0, 10.0, 41, "jz", |jz| {
                Couplings::from_delta_sigma(7.0, 1.0, jz).expect("finite")
            });
            series.extend(jz_family(&FIG5_6_KTS));
            series
        }
        "fig7" | "fig5a" => delta_family(&PROBABILITY_KTS),
        "fig8" | "fig6a" => jz_family(&PROBABILITY_KTS),
        _ => return None,
    };
    Some(series)
}
