//! Studies built on the closed forms: critical temperatures, the
//! zero-temperature limit, parameter sweeps, the zero-entanglement manifold and
//! the scan over couplings for a positive `dC/d(kT)`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::concurrence::{concurrence, Branch};
use crate::error::{check_finite, check_kt, Error, Result};
use crate::model::{bell_probabilities, spectral, BellProbabilities, Couplings, DensityMatrix4};
use crate::oracle;

/// Number of coarse cells scanned (from the hot end) before bisecting.
pub const TC_SCAN_CELLS: usize = 256;
/// Absolute bisection tolerance on `kt`.
pub const TC_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalTemperature {
    /// Largest `kt` in the bracket at which the raw concurrence crosses zero.
    Found(f64),
    /// The raw concurrence is never positive in the bracket.
    Never,
    /// Still entangled at the top of the bracket.
    AboveBracket,
}

impl CriticalTemperature {
    pub fn value(self) -> Option<f64> {
        match self {
            CriticalTemperature::Found(t) => Some(t),
            _ => None,
        }
    }
}

fn raw_concurrence(c: &Couplings, kt: f64) -> Result<f64> {
    Ok(concurrence(c, kt)?.raw)
}

/// Critical temperature of `c` inside `[kt_lo, kt_hi]`.
///
/// The raw (unclamped) concurrence is scanned downward from `kt_hi` over
/// [`TC_SCAN_CELLS`] equal cells; the first cell where it turns positive is
/// bisected to [`TC_TOLERANCE`].
pub fn critical_temperature(c: &Couplings, kt_lo: f64, kt_hi: f64) -> Result<CriticalTemperature> {
    c.validate()?;
    if !(kt_lo.is_finite() && kt_hi.is_finite() && kt_lo > 0.0 && kt_lo < kt_hi) {
        return Err(Error::InvalidBracket { lo: kt_lo, hi: kt_hi });
    }
    let n = TC_SCAN_CELLS;
    let node = |i: usize| lerp(kt_lo, kt_hi, i, n);

    let mut hot = kt_hi;
    let mut hot_raw = raw_concurrence(c, hot)?;
    if hot_raw > 0.0 {
        return Ok(CriticalTemperature::AboveBracket);
    }
    for i in (0..n).rev() {
        let cold = node(i);
        let cold_raw = raw_concurrence(c, cold)?;
        if cold_raw > 0.0 {
            // invariant: raw(lo) > 0 >= raw(hi)
            let (mut lo, mut hi) = (cold, hot);
            while hi - lo > TC_TOLERANCE {
                let mid = 0.5 * (lo + hi);
                if raw_concurrence(c, mid)? > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(CriticalTemperature::Found(0.5 * (lo + hi)));
        }
        hot = cold;
        hot_raw = cold_raw;
    }
    debug_assert!(hot_raw <= 0.0);
    Ok(CriticalTemperature::Never)
}

/// `kt → 0⁺` limit of the concurrence, from the ground level of `H`.
///
/// A non-degenerate ground level is a single Bell state, so the limit is 1.
/// Otherwise the limit state is the equal mixture of the degenerate Bell
/// projectors, whose concurrence is taken from the Wootters oracle.
pub fn concurrence_zero_t(c: &Couplings) -> Result<f64> {
    let ground = spectral(c)?.ground_states();
    if ground.len() == 1 {
        return Ok(1.0);
    }
    let weight = 1.0 / ground.len() as f64;
    let mut rho = [[0.0; 4]; 4];
    for state in &ground {
        let p = state.projector();
        for i in 0..4 {
            for j in 0..4 {
                rho[i][j] += weight * p[i][j];
            }
        }
    }
    oracle::wootters(&DensityMatrix4::from_matrix(rho)?)
}

/// Signed distance `2jz − (|Δ| − |Σ|)` to the surface on which the thermal
/// state is separable at every temperature.
pub fn zero_manifold_distance(c: &Couplings) -> f64 {
    2.0 * c.jz - (c.delta().abs() - c.sigma().abs())
}

/// Central difference `(C(kt + h) − C(kt − h)) / 2h` of the clamped concurrence.
pub fn temperature_derivative(c: &Couplings, kt: f64, h: f64) -> Result<f64> {
    check_finite(h, "h")?;
    if h <= 0.0 {
        return Err(Error::InvalidGrid(format!("finite-difference step h must be > 0 (got {h})")));
    }
    check_kt(kt - h)?;
    let up = concurrence(c, kt + h)?.value;
    let down = concurrence(c, kt - h)?.value;
    Ok((up - down) / (2.0 * h))
}

/// `i`-th of `n + 1` evenly spaced nodes from `a` to `b`, exact at both ends
/// and at any node that is representable.
fn lerp(a: f64, b: f64, i: usize, n: usize) -> f64 {
    (a * (n - i) as f64 + b * i as f64) / n as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepVariable {
    Delta,
    Sigma,
    Jz,
    Jx,
    Jy,
    KT,
    /// `δ = Δ/Σ` at fixed `Σ` and `jz`.
    AnisotropyDelta,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Delta => "delta",
            SweepVariable::Sigma => "sigma",
            SweepVariable::Jz => "jz",
            SweepVariable::Jx => "jx",
            SweepVariable::Jy => "jy",
            SweepVariable::KT => "kt",
            SweepVariable::AnisotropyDelta => "anisotropy",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "delta" => SweepVariable::Delta,
            "sigma" => SweepVariable::Sigma,
            "jz" => SweepVariable::Jz,
            "jx" => SweepVariable::Jx,
            "jy" => SweepVariable::Jy,
            "kt" => SweepVariable::KT,
            "anisotropy" | "aniso" => SweepVariable::AnisotropyDelta,
            other => return Err(Error::InvalidSweep(format!("unknown sweep variable `{other}`"))),
        })
    }
}

/// One-dimensional sweep: `variable` runs over `steps` evenly spaced values
/// in `[start, stop]`, everything else is taken from `base` and `kt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub base: Couplings,
    pub kt: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        check_finite(self.start, "start")?;
        check_finite(self.stop, "stop")?;
        if self.start >= self.stop {
            return Err(Error::InvalidSweep(format!(
                "start ({}) must be below stop ({})",
                self.start, self.stop
            )));
        }
        if self.steps < 2 {
            return Err(Error::InvalidSweep(format!("steps must be >= 2 (got {})", self.steps)));
        }
        self.base.validate()?;
        match self.variable {
            SweepVariable::KT => {
                if self.start <= 0.0 {
                    return Err(Error::NonPositiveTemperature(self.start));
                }
            }
            _ => check_kt(self.kt)?,
        }
        if self.variable == SweepVariable::AnisotropyDelta && self.base.sigma() == 0.0 {
            return Err(Error::InvalidSweep("anisotropy sweep needs sigma != 0".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..self.steps).map(|i| lerp(self.start, self.stop, i, n)).collect()
    }

    /// Couplings and temperature at one value of the swept variable.
    pub fn point(&self, value: f64) -> Result<(Couplings, f64)> {
        let b = &self.base;
        let (delta, sigma) = (b.delta(), b.sigma());
        let c = match self.variable {
            SweepVariable::Delta => Couplings::from_delta_sigma(value, sigma, b.jz)?,
            SweepVariable::Sigma => Couplings::from_delta_sigma(delta, value, b.jz)?,
            SweepVariable::AnisotropyDelta => {
                Couplings::from_delta_sigma(value * sigma, sigma, b.jz)?
            }
            SweepVariable::Jz => Couplings::new(b.jx, b.jy, value)?,
            SweepVariable::Jx => Couplings::new(value, b.jy, b.jz)?,
            SweepVariable::Jy => Couplings::new(b.jx, value, b.jz)?,
            SweepVariable::KT => *b,
        };
        let kt = if self.variable == SweepVariable::KT { value } else { self.kt };
        Ok((c, kt))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub value: f64,
    pub concurrence: f64,
    pub branch: Branch,
    pub probabilities: BellProbabilities,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub variable: SweepVariable,
    pub records: Vec<SweepRecord>,
}

/// Evaluates a single grid point of a sweep.
pub fn sweep_point(spec: &SweepSpec, value: f64) -> Result<SweepRecord> {
    let (c, kt) = spec.point(value)?;
    let r = concurrence(&c, kt)?;
    Ok(SweepRecord {
        value,
        concurrence: r.value,
        branch: r.branch,
        probabilities: bell_probabilities(&c, kt)?,
    })
}

/// Evaluates every grid point of `spec` (in parallel) and returns the records
/// in grid order.
pub fn sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let records = spec
        .values()
        .into_par_iter()
        .map(|v| {
            sweep_point(spec, v).map_err(|e| e.at(format!("{}={v}", spec.variable)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        variable: spec.variable,
        records,
    })
}

/// Grid for [`monotonicity_scan`]: every `(jx, jy, jz)` on a cubic lattice
/// with spacing `step` over `[range_lo, range_hi]`, at each of `kt_samples`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub range_lo: f64,
    pub range_hi: f64,
    pub step: f64,
    pub kt_samples: Vec<f64>,
    /// Central-difference half-width.
    pub h: f64,
    /// Derivatives above this are reported.
    pub threshold: f64,
}

pub const DEFAULT_SCAN_KTS: [f64; 5] = [0.1, 0.3, 0.6, 1.0, 2.0];
pub const DEFAULT_SCAN_H: f64 = 1e-4;
pub const DEFAULT_SCAN_THRESHOLD: f64 = 1e-7;

impl ScanConfig {
    /// Symmetric range `[-half_width, half_width]` with the default
    /// temperatures, step `h` and threshold.
    pub fn symmetric(half_width: f64, step: f64) -> Self {
        ScanConfig {
            range_lo: -half_width,
            range_hi: half_width,
            step,
            kt_samples: DEFAULT_SCAN_KTS.to_vec(),
            h: DEFAULT_SCAN_H,
            threshold: DEFAULT_SCAN_THRESHOLD,
        }
    }

    /// `[-2, 2]` in steps of 0.05 (81³ coupling triples).
    pub fn desk_scale() -> Self {
        ScanConfig::symmetric(2.0, 0.05)
    }

    /// `[-2, 2]` in steps of 0.01 (401³ coupling triples).
    pub fn full_scale() -> Self {
        ScanConfig::symmetric(2.0, 0.01)
    }

    pub fn validate(&self) -> Result<()> {
        for (v, name) in [
            (self.range_lo, "range"),
            (self.range_hi, "range"),
            (self.step, "step"),
            (self.h, "h"),
            (self.threshold, "threshold"),
        ] {
            check_finite(v, name)?;
        }
        if self.step <= 0.0 {
            return Err(Error::InvalidGrid(format!("step must be > 0 (got {})", self.step)));
        }
        if self.range_lo > self.range_hi {
            return Err(Error::InvalidGrid(format!(
                "range lower end {} above upper end {}",
                self.range_lo, self.range_hi
            )));
        }
        if self.h <= 0.0 {
            return Err(Error::InvalidGrid(format!("h must be > 0 (got {})", self.h)));
        }
        if self.threshold < 0.0 {
            return Err(Error::InvalidGrid(format!("threshold must be >= 0 (got {})", self.threshold)));
        }
        if self.kt_samples.is_empty() {
            return Err(Error::InvalidGrid("no temperatures to sample".into()));
        }
        for &kt in &self.kt_samples {
            check_finite(kt, "kt")?;
            if kt - self.h <= 0.0 {
                return Err(Error::InvalidGrid(format!(
                    "every kt must exceed h = {} (got {kt})",
                    self.h
                )));
            }
        }
        Ok(())
    }

    /// Coupling values along one axis of the lattice.
    pub fn axis(&self) -> Vec<f64> {
        let span = self.range_hi - self.range_lo;
        let cells = (span / self.step + 1e-9).floor() as usize;
        if cells == 0 {
            return vec![self.range_lo];
        }
        let last = self.range_lo + cells as f64 * self.step;
        let end = if (last - self.range_hi).abs() <= 1e-9 * self.step {
            self.range_hi
        } else {
            last
        };
        (0..=cells).map(|i| lerp(self.range_lo, end, i, cells)).collect()
    }

    pub fn total_points(&self) -> usize {
        self.axis().len().pow(3) * self.kt_samples.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub couplings: Couplings,
    pub kt: f64,
    pub derivative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub axis_len: usize,
    pub total_points: usize,
    /// Largest derivative seen anywhere on the grid.
    pub max_derivative: f64,
    pub violations: Vec<Violation>,
}

/// Checks the sign of `dC/d(kT)` over the whole grid. Slices of constant `jx`
/// run in parallel; violations come back in lattice order (jx, jy, jz, kt).
pub fn monotonicity_scan(config: &ScanConfig) -> Result<ScanReport> {
    config.validate()?;
    let axis = config.axis();
    let slices = axis
        .par_iter()
        .map(|&jx| {
            let mut found = Vec::new();
            let mut max_d = f64::NEG_INFINITY;
            for &jy in &axis {
                for &jz in &axis {
                    let c = Couplings { jx, jy, jz };
                    for &kt in &config.kt_samples {
                        let d = temperature_derivative(&c, kt, config.h)
                            .map_err(|e| e.at(format!("{c} kt={kt}")))?;
                        max_d = max_d.max(d);
                        if d > config.threshold {
                            found.push(Violation {
                                couplings: c,
                                kt,
                                derivative: d,
                            });
                        }
                    }
                }
            }
            Ok((max_d, found))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut max_derivative = f64::NEG_INFINITY;
    let mut violations = Vec::new();
    for (m, v) in slices {
        max_derivative = max_derivative.max(m);
        violations.extend(v);
    }
    Ok(ScanReport {
        config: config.clone(),
        axis_len: axis.len(),
        total_points: axis.len().pow(3) * config.kt_samples.len(),
        max_derivative,
        violations,
    })
}
