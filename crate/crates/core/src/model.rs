//! The two-qubit XYZ Heisenberg model: couplings, the Bell-basis spectrum and
//! the closed-form canonical (Gibbs) state.
//!
//! Temperatures are always passed as `kt` in the same energy units as the
//! couplings (Boltzmann's constant is fixed to 1). Exponentials are evaluated
//! relative to the largest Boltzmann exponent, so `|J|/kt` can go far beyond
//! the ~710 limit of a bare `exp`.

use std::fmt;

use crate::error::{check_finite, check_kt, Error, Result};

/// Dense 4×4 real matrix in the standard basis `{|00⟩, |01⟩, |10⟩, |11⟩}`.
pub type Mat4 = [[f64; 4]; 4];

/// Absolute tolerance used to call two Bell-state energies degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Exchange constants of `H = Jx/4 σxσx + Jy/4 σyσy + Jz/4 σzσz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
}

impl Couplings {
    pub fn new(jx: f64, jy: f64, jz: f64) -> Result<Self> {
        let c = Couplings { jx, jy, jz };
        c.validate()?;
        Ok(c)
    }

    /// Builds couplings from `Δ = jx − jy`, `Σ = jx + jy` and `jz`.
    pub fn from_delta_sigma(delta: f64, sigma: f64, jz: f64) -> Result<Self> {
        check_finite(delta, "delta")?;
        check_finite(sigma, "sigma")?;
        Couplings::new((sigma + delta) / 2.0, (sigma - delta) / 2.0, jz)
    }

    /// Isotropic Heisenberg chain, `jx = jy = jz = j`.
    pub fn xxx(j: f64) -> Self {
        Couplings { jx: j, jy: j, jz: j }
    }

    pub fn xxz(j: f64, jz: f64) -> Self {
        Couplings { jx: j, jy: j, jz }
    }

    pub fn xy(jx: f64, jy: f64) -> Self {
        Couplings { jx, jy, jz: 0.0 }
    }

    pub fn ising(jz: f64) -> Self {
        Couplings { jx: 0.0, jy: 0.0, jz }
    }

    pub fn validate(&self) -> Result<()> {
        check_finite(self.jx, "jx")?;
        check_finite(self.jy, "jy")?;
        check_finite(self.jz, "jz")
    }

    /// `Δ = jx − jy`
    pub fn delta(&self) -> f64 {
        self.jx - self.jy
    }

    /// `Σ = jx + jy`
    pub fn sigma(&self) -> f64 {
        self.jx + self.jy
    }

    /// Swaps `jx` and `jy`, which flips the sign of `Δ`.
    pub fn swapped(&self) -> Self {
        Couplings {
            jx: self.jy,
            jy: self.jx,
            jz: self.jz,
        }
    }
}

impl fmt::Display for Couplings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(jx={}, jy={}, jz={})", self.jx, self.jy, self.jz)
    }
}

/// Anisotropy `δ = Δ/Σ`; it has no value on the `Σ = 0` line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Anisotropy {
    Defined(f64),
    Undefined,
}

impl Anisotropy {
    pub fn value(self) -> Option<f64> {
        match self {
            Anisotropy::Defined(v) => Some(v),
            Anisotropy::Undefined => None,
        }
    }
}

impl fmt::Display for Anisotropy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Anisotropy::Defined(v) => write!(f, "{v}"),
            Anisotropy::Undefined => f.write_str("undefined"),
        }
    }
}

/// Dimensionless quantities of the model at one temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalParams {
    pub delta: f64,
    pub sigma: f64,
    pub anisotropy: Anisotropy,
    /// `jz / 4kt`
    pub alpha: f64,
    /// `Δ / 4kt`
    pub beta: f64,
    /// `Σ / 4kt`
    pub gamma: f64,
    /// Natural log of the partition function. `Z` itself overflows long
    /// before the state does, so this is the stored form.
    pub ln_z: f64,
    pub kt: f64,
}

impl ThermalParams {
    /// Partition function `Z = 2(e^{−α} cosh β + e^{α} cosh γ)`; may be `inf`
    /// at very low temperature even though [`ThermalParams::ln_z`] is finite.
    pub fn z(&self) -> f64 {
        self.ln_z.exp()
    }

    /// Boltzmann exponents `−λ_X/kt` in [`BellState::ALL`] order.
    pub(crate) fn bell_exponents(&self) -> [f64; 4] {
        let (a, b, g) = (self.alpha, self.beta, self.gamma);
        [-a - b, -a + b, a - g, a + g]
    }

    /// Boltzmann weights scaled by `e^{−max exponent}` and their sum.
    pub(crate) fn scaled_weights(&self) -> ([f64; 4], f64) {
        let x = self.bell_exponents();
        let m = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w = x.map(|xi| (xi - m).exp());
        (w, w.iter().sum())
    }
}

pub fn derive_params(c: &Couplings, kt: f64) -> Result<ThermalParams> {
    c.validate()?;
    check_kt(kt)?;
    let delta = c.delta();
    let sigma = c.sigma();
    let anisotropy = if sigma == 0.0 {
        Anisotropy::Undefined
    } else {
        Anisotropy::Defined(delta / sigma)
    };
    let scale = 4.0 * kt;
    let alpha = c.jz / scale;
    let beta = delta / scale;
    let gamma = sigma / scale;
    if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
        return Err(Error::OverflowGuard);
    }
    let mut params = ThermalParams {
        delta,
        sigma,
        anisotropy,
        alpha,
        beta,
        gamma,
        ln_z: 0.0,
        kt,
    };
    let x = params.bell_exponents();
    let m = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = x.iter().map(|xi| (xi - m).exp()).sum();
    params.ln_z = m + sum.ln();
    if !params.ln_z.is_finite() {
        return Err(Error::OverflowGuard);
    }
    Ok(params)
}

/// Hamiltonian in the standard basis. It only has entries on the diagonal
/// and the anti-diagonal.
pub fn hamiltonian_matrix(c: &Couplings) -> Result<Mat4> {
    c.validate()?;
    let zz = c.jz / 4.0;
    let outer = c.delta() / 4.0;
    let inner = c.sigma() / 4.0;
    Ok([
        [zz, 0.0, 0.0, outer],
        [0.0, -zz, inner, 0.0],
        [0.0, inner, -zz, 0.0],
        [outer, 0.0, 0.0, zz],
    ])
}

/// The four Bell states, which diagonalize the XYZ Hamiltonian for every
/// choice of couplings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    pub fn vector(self) -> [f64; 4] {
        let h = FRAC_1_SQRT_2;
        match self {
            BellState::PhiPlus => [h, 0.0, 0.0, h],
            BellState::PhiMinus => [h, 0.0, 0.0, -h],
            BellState::PsiPlus => [0.0, h, h, 0.0],
            BellState::PsiMinus => [0.0, h, -h, 0.0],
        }
    }

    /// `|X⟩⟨X|`
    pub fn projector(self) -> Mat4 {
        let v = self.vector();
        let mut p = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                p[i][j] = v[i] * v[j];
            }
        }
        p
    }

    pub fn label(self) -> &'static str {
        match self {
            BellState::PhiPlus => "phi_plus",
            BellState::PhiMinus => "phi_minus",
            BellState::PsiPlus => "psi_plus",
            BellState::PsiMinus => "psi_minus",
        }
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellState::PhiPlus => "Φ+",
            BellState::PhiMinus => "Φ−",
            BellState::PsiPlus => "Ψ+",
            BellState::PsiMinus => "Ψ−",
        })
    }
}

/// Closed-form Hamiltonian eigenvalues attached to each Bell state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDecomp {
    pub lambda_phi_plus: f64,
    pub lambda_phi_minus: f64,
    pub lambda_psi_plus: f64,
    pub lambda_psi_minus: f64,
}

impl SpectralDecomp {
    pub fn energy(&self, state: BellState) -> f64 {
        match state {
            BellState::PhiPlus => self.lambda_phi_plus,
            BellState::PhiMinus => self.lambda_phi_minus,
            BellState::PsiPlus => self.lambda_psi_plus,
            BellState::PsiMinus => self.lambda_psi_minus,
        }
    }

    /// Levels in ascending energy; ties keep [`BellState::ALL`] order.
    pub fn levels(&self) -> [(BellState, f64); 4] {
        let mut levels = BellState::ALL.map(|s| (s, self.energy(s)));
        levels.sort_by(|a, b| a.1.total_cmp(&b.1));
        levels
    }

    pub fn ground_energy(&self) -> f64 {
        self.levels()[0].1
    }

    /// Every Bell state within [`DEGENERACY_TOL`] of the lowest energy.
    pub fn ground_states(&self) -> Vec<BellState> {
        let e0 = self.ground_energy();
        self.levels()
            .iter()
            .filter(|(_, e)| e - e0 <= DEGENERACY_TOL)
            .map(|&(s, _)| s)
            .collect()
    }

    pub fn trace(&self) -> f64 {
        self.lambda_phi_plus + self.lambda_phi_minus + self.lambda_psi_plus + self.lambda_psi_minus
    }
}

pub fn spectral(c: &Couplings) -> Result<SpectralDecomp> {
    c.validate()?;
    let (delta, sigma) = (c.delta(), c.sigma());
    Ok(SpectralDecomp {
        lambda_phi_plus: (c.jz + delta) / 4.0,
        lambda_phi_minus: (c.jz - delta) / 4.0,
        lambda_psi_plus: (-c.jz + sigma) / 4.0,
        lambda_psi_minus: (-c.jz - sigma) / 4.0,
    })
}

/// A two-qubit density matrix with real entries in the standard basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4 {
    entries: Mat4,
}

impl DensityMatrix4 {
    /// Accepts a matrix that is finite, symmetric to 1e−12 and has unit
    /// trace to 1e−12. Positivity is checked where it matters (the Wootters
    /// oracle), since it needs an eigendecomposition.
    pub fn from_matrix(entries: Mat4) -> Result<Self> {
        if entries.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput("density matrix"));
        }
        let asym = max_asymmetry(&entries);
        if asym > 1e-12 {
            return Err(Error::NotSymmetric(asym));
        }
        let tr: f64 = (0..4).map(|i| entries[i][i]).sum();
        if (tr - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        Ok(DensityMatrix4 { entries })
    }

    pub(crate) fn from_matrix_unchecked(entries: Mat4) -> Self {
        DensityMatrix4 { entries }
    }

    /// `|ψ⟩⟨ψ|` for a real, normalized state vector.
    pub fn pure(psi: [f64; 4]) -> Result<Self> {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = psi[i] * psi[j];
            }
        }
        DensityMatrix4::from_matrix(m)
    }

    pub fn maximally_mixed() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 0.25;
        }
        DensityMatrix4 { entries: m }
    }

    pub fn entries(&self) -> &Mat4 {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.entries[i][i]).sum()
    }

    /// `⟨X|ρ|X⟩`
    pub fn bell_population(&self, state: BellState) -> f64 {
        let v = state.vector();
        let mut acc = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                acc += v[i] * self.entries[i][j] * v[j];
            }
        }
        acc
    }
}

pub(crate) fn max_asymmetry(m: &Mat4) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            worst = worst.max((m[i][j] - m[j][i]).abs());
        }
    }
    worst
}

/// Closed-form canonical state `e^{−H/kt}/Z` in the standard basis.
pub fn thermal_state(c: &Couplings, kt: f64) -> Result<DensityMatrix4> {
    let params = derive_params(c, kt)?;
    let ([phi_p, phi_m, psi_p, psi_m], sum) = params.scaled_weights();
    let norm = 2.0 * sum;
    // e^{−α}cosh β / Z and e^{−α}sinh β / Z in weight form
    let outer_diag = (phi_p + phi_m) / norm;
    let outer_off = (phi_p - phi_m) / norm;
    let inner_diag = (psi_p + psi_m) / norm;
    let inner_off = (psi_p - psi_m) / norm;
    Ok(DensityMatrix4::from_matrix_unchecked([
        [outer_diag, 0.0, 0.0, outer_off],
        [0.0, inner_diag, inner_off, 0.0],
        [0.0, inner_off, inner_diag, 0.0],
        [outer_off, 0.0, 0.0, outer_diag],
    ]))
}

/// Thermal populations of the four Bell eigenstates, `e^{−λ_X/kt}/Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellProbabilities {
    pub phi_plus: f64,
    pub phi_minus: f64,
    pub psi_plus: f64,
    pub psi_minus: f64,
}

impl BellProbabilities {
    pub fn get(&self, state: BellState) -> f64 {
        match state {
            BellState::PhiPlus => self.phi_plus,
            BellState::PhiMinus => self.phi_minus,
            BellState::PsiPlus => self.psi_plus,
            BellState::PsiMinus => self.psi_minus,
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.phi_plus, self.phi_minus, self.psi_plus, self.psi_minus]
    }

    pub fn sum(&self) -> f64 {
        self.as_array().iter().sum()
    }

    pub fn dominant(&self) -> BellState {
        let p = self.as_array();
        let mut best = 0;
        for i in 1..4 {
            if p[i] > p[best] {
                best = i;
            }
        }
        BellState::ALL[best]
    }
}

pub fn bell_probabilities(c: &Couplings, kt: f64) -> Result<BellProbabilities> {
    let params = derive_params(c, kt)?;
    let ([phi_plus, phi_minus, psi_plus, psi_minus], sum) = params.scaled_weights();
    Ok(BellProbabilities {
        phi_plus: phi_plus / sum,
        phi_minus: phi_minus / sum,
        psi_plus: psi_plus / sum,
        psi_minus: psi_minus / sum,
    })
}
