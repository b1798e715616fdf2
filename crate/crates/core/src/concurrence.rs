//! Closed-form Wootters concurrence of the XYZ thermal state.
//!
//! The general formula picks one of two branches depending on the sign of
//! `2α − (|β| − |γ|)`. The special-case models (XY, XXX, XXZ) have their own
//! reduced formulas, written out separately rather than delegating to the
//! general one, so the degeneration tests compare two independent paths.
//!
//! Every ratio is evaluated after factoring out the largest exponential, so
//! the results stay finite for any `|J|/kt` that [`derive_params`] accepts.

use std::fmt;

use crate::error::Result;
use crate::model::{derive_params, Couplings, ThermalParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `2α > |β| − |γ|`: the Ψ pair carries the largest weight.
    C1,
    /// `2α ≤ |β| − |γ|`: the Φ pair carries the largest weight.
    C2,
}

impl Branch {
    pub fn select(alpha: f64, beta: f64, gamma: f64) -> Branch {
        if 2.0 * alpha > beta.abs() - gamma.abs() {
            Branch::C1
        } else {
            Branch::C2
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Branch::C1 => "C1",
            Branch::C2 => "C2",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceResult {
    /// `max(0, raw)`, always in `[0, 1]`.
    pub value: f64,
    pub branch: Branch,
    /// Branch value before clamping; it changes sign at the critical
    /// temperature, which the clamped value cannot show.
    pub raw: f64,
}

impl ConcurrenceResult {
    fn new(raw: f64, branch: Branch) -> Self {
        ConcurrenceResult {
            value: raw.max(0.0),
            branch,
            raw,
        }
    }
}

/// Square roots of the eigenvalues of `ρρ̃` for the thermal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqrtEigenvalues {
    /// `e^{−α}(cosh β + sinh β)/Z`
    pub li_plus: f64,
    /// `e^{−α}(cosh β − sinh β)/Z`
    pub li_minus: f64,
    /// `e^{α}(cosh γ + sinh γ)/Z`
    pub lii_plus: f64,
    /// `e^{α}(cosh γ − sinh γ)/Z`
    pub lii_minus: f64,
    /// The same four values in decreasing order.
    pub sorted: [f64; 4],
}

impl SqrtEigenvalues {
    /// `max(0, λ1 − λ2 − λ3 − λ4)` straight from the definition.
    pub fn wootters_value(&self) -> f64 {
        let [l1, l2, l3, l4] = self.sorted;
        (l1 - l2 - l3 - l4).max(0.0)
    }
}

pub fn sqrt_eigenvalues(c: &Couplings, kt: f64) -> Result<SqrtEigenvalues> {
    let p = derive_params(c, kt)?;
    // e^{x}/Z evaluated as e^{x − ln Z}
    let scaled = |x: f64| (x - p.ln_z).exp();
    let li_plus = scaled(-p.alpha + p.beta);
    let li_minus = scaled(-p.alpha - p.beta);
    let lii_plus = scaled(p.alpha + p.gamma);
    let lii_minus = scaled(p.alpha - p.gamma);
    let mut sorted = [li_plus, li_minus, lii_plus, lii_minus];
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(SqrtEigenvalues {
        li_plus,
        li_minus,
        lii_plus,
        lii_minus,
        sorted,
    })
}

/// Raw `C1` and `C2` (both branches, unclamped) at the given parameters.
pub fn branch_candidates(p: &ThermalParams) -> (f64, f64) {
    let (a, b, g) = (p.alpha, p.beta.abs(), p.gamma.abs());
    let m = (a + g).max(-a + b);
    // 2e^{−m} times e^{α}e^{±|γ|} and e^{−α}e^{±|β|}
    let psi_hi = (a + g - m).exp();
    let psi_lo = (a - g - m).exp();
    let phi_hi = (-a + b - m).exp();
    let phi_lo = (-a - b - m).exp();
    let den = psi_hi + psi_lo + phi_hi + phi_lo;
    let c1 = (psi_hi - psi_lo - phi_hi - phi_lo) / den;
    let c2 = (phi_hi - phi_lo - psi_hi - psi_lo) / den;
    (c1, c2)
}

pub fn concurrence_from_params(p: &ThermalParams) -> ConcurrenceResult {
    let branch = Branch::select(p.alpha, p.beta, p.gamma);
    let (c1, c2) = branch_candidates(p);
    let raw = match branch {
        Branch::C1 => c1,
        Branch::C2 => c2,
    };
    ConcurrenceResult::new(raw, branch)
}

/// General two-branch concurrence of the XYZ thermal state.
pub fn concurrence(c: &Couplings, kt: f64) -> Result<ConcurrenceResult> {
    Ok(concurrence_from_params(&derive_params(c, kt)?))
}

/// Isotropic XY model `jx = jy = j`, `jz = 0`:
/// `max{0, (sinh(|j|/2kt) − 1)/(cosh(j/2kt) + 1)}`.
pub fn concurrence_xy_isotropic(j: f64, kt: f64) -> Result<ConcurrenceResult> {
    let p = derive_params(&Couplings::xy(j, j), kt)?;
    let x = (j / (2.0 * kt)).abs();
    // numerator and denominator multiplied by 2e^{−x}
    let e1 = (-x).exp();
    let e2 = (-2.0 * x).exp();
    let raw = (1.0 - e2 - 2.0 * e1) / (1.0 + e2 + 2.0 * e1);
    Ok(ConcurrenceResult::new(raw, Branch::select(0.0, 0.0, p.gamma)))
}

/// XY model with arbitrary `jx`, `jy` and `jz = 0`. The region `|δ| < 1`
/// (equivalently `jx·jy > 0`) uses `(sinh|γ| − cosh β)/(cosh γ + cosh β)`,
/// the rest `(sinh|β| − cosh γ)/(cosh γ + cosh β)`.
pub fn concurrence_xy_anisotropic(jx: f64, jy: f64, kt: f64) -> Result<ConcurrenceResult> {
    let p = derive_params(&Couplings::xy(jx, jy), kt)?;
    let (b, g) = (p.beta.abs(), p.gamma.abs());
    let m = b.max(g);
    let cosh_b = ((b - m).exp() + (-b - m).exp()) / 2.0;
    let cosh_g = ((g - m).exp() + (-g - m).exp()) / 2.0;
    let den = cosh_g + cosh_b;
    // |δ| < 1 without dividing by Σ, which may be zero
    let (raw, branch) = if p.delta.abs() < p.sigma.abs() {
        let sinh_g = ((g - m).exp() - (-g - m).exp()) / 2.0;
        ((sinh_g - cosh_b) / den, Branch::C1)
    } else {
        let sinh_b = ((b - m).exp() - (-b - m).exp()) / 2.0;
        ((sinh_b - cosh_g) / den, Branch::C2)
    };
    Ok(ConcurrenceResult::new(raw, branch))
}

/// XXX model `jx = jy = jz = j`: zero for a ferromagnet, otherwise
/// `(1 − 3e^{−4α})/(1 + 3e^{−4α})`.
pub fn concurrence_xxx(j: f64, kt: f64) -> Result<ConcurrenceResult> {
    let p = derive_params(&Couplings::xxx(j), kt)?;
    let alpha = p.alpha;
    if j > 0.0 {
        let e = (-4.0 * alpha).exp();
        Ok(ConcurrenceResult::new((1.0 - 3.0 * e) / (1.0 + 3.0 * e), Branch::C1))
    } else {
        // triplet ground level: −cosh 2α/(cosh 2α + e^{−2α}) with α ≤ 0
        let e = (4.0 * alpha).exp();
        Ok(ConcurrenceResult::new(-(1.0 + e) / (3.0 + e), Branch::C2))
    }
}

/// XXZ model `jx = jy = j`: zero when `2α ≤ −|γ|`, otherwise
/// `(e^{2α} sinh|γ| − 1)/(e^{2α} cosh γ + 1)`.
pub fn concurrence_xxz(j: f64, jz: f64, kt: f64) -> Result<ConcurrenceResult> {
    let p = derive_params(&Couplings::xxz(j, jz), kt)?;
    let two_alpha = 2.0 * p.alpha;
    let g = p.gamma.abs();
    if two_alpha > -g {
        // multiplied through by 2e^{−(2α + |γ|)}
        let s = (-(two_alpha + g)).exp();
        let e = (-2.0 * g).exp();
        let raw = (1.0 - e - 2.0 * s) / (1.0 + e + 2.0 * s);
        Ok(ConcurrenceResult::new(raw, Branch::C1))
    } else {
        // Φ± ground pair: −cosh γ/(cosh γ + e^{−2α}), scaled by e^{2α}
        let hi = (two_alpha + g).exp();
        let lo = (two_alpha - g).exp();
        let raw = -(hi + lo) / (hi + lo + 2.0);
        Ok(ConcurrenceResult::new(raw, Branch::C2))
    }
}
