//! Brute-force reference path for the closed forms.
//!
//! Nothing here uses the Bell-basis structure of the model: the Gibbs state
//! comes from a numerical eigendecomposition of `H`, and the concurrence from
//! the Wootters procedure applied to an arbitrary real density matrix. This
//! path is slow but independent, and every closed form is checked against it.

use crate::error::{check_kt, Error, Result};
use crate::model::{hamiltonian_matrix, max_asymmetry, Couplings, DensityMatrix4, Mat4};

/// Off-diagonal magnitude below which the Jacobi iteration stops.
pub const JACOBI_TOL: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues smaller than this (in magnitude, when negative) are treated as
/// rounding noise and clamped to zero.
pub const PSD_TOL: f64 = 1e-9;

/// Eigendecomposition `A = V diag(w) Vᵀ`, eigenvalues ascending, eigenvectors
/// stored as the columns of `eigenvectors`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem4 {
    pub eigenvalues: [f64; 4],
    pub eigenvectors: Mat4,
}

impl EigenSystem4 {
    pub fn eigenvector(&self, k: usize) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| self.eigenvectors[i][k])
    }

    /// `V diag(f(w)) Vᵀ`
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Mat4 {
        self.rebuild(self.eigenvalues.map(f))
    }

    /// `V diag(values) Vᵀ`
    pub fn rebuild(&self, fw: [f64; 4]) -> Mat4 {
        let v = &self.eigenvectors;
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in i..4 {
                let s: f64 = (0..4).map(|k| v[i][k] * fw[k] * v[j][k]).sum();
                out[i][j] = s;
                out[j][i] = s;
            }
        }
        out
    }
}

/// Cyclic Jacobi eigensolver for real symmetric 4×4 matrices.
///
/// Pivots are visited in the fixed order (0,1), (0,2), …, (2,3), so identical
/// input always produces bit-identical output.
pub fn symmetric_eigen(a: &Mat4) -> Result<EigenSystem4> {
    if a.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput("matrix"));
    }
    let asym = max_asymmetry(a);
    if asym > 1e-12 {
        return Err(Error::NotSymmetric(asym));
    }
    let mut m = *a;
    // symmetrize exactly so rotations see one value per pair
    for i in 0..4 {
        for j in (i + 1)..4 {
            let avg = 0.5 * (m[i][j] + m[j][i]);
            m[i][j] = avg;
            m[j][i] = avg;
        }
    }
    let mut v = identity();
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_max(&m) <= JACOBI_TOL {
            converged = true;
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_max(&m) > JACOBI_TOL {
        return Err(Error::NoConvergence(JACOBI_MAX_SWEEPS));
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| m[i][i].total_cmp(&m[j][j]));
    let eigenvalues = order.map(|k| m[k][k]);
    let mut eigenvectors = [[0.0; 4]; 4];
    for (col, &k) in order.iter().enumerate() {
        for row in 0..4 {
            eigenvectors[row][col] = v[row][k];
        }
    }
    Ok(EigenSystem4 {
        eigenvalues,
        eigenvectors,
    })
}

fn identity() -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

fn off_diagonal_max(m: &Mat4) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                worst = worst.max(m[i][j].abs());
            }
        }
    }
    worst
}

/// One Jacobi rotation annihilating `m[p][q]`.
fn rotate(m: &mut Mat4, v: &mut Mat4, p: usize, q: usize) {
    let apq = m[p][q];
    if apq == 0.0 {
        return;
    }
    let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    m[p][p] -= t * apq;
    m[q][q] += t * apq;
    m[p][q] = 0.0;
    m[q][p] = 0.0;
    for r in 0..4 {
        if r != p && r != q {
            let (arp, arq) = (m[r][p], m[r][q]);
            m[r][p] = c * arp - s * arq;
            m[p][r] = m[r][p];
            m[r][q] = s * arp + c * arq;
            m[q][r] = m[r][q];
        }
    }
    for row in v.iter_mut() {
        let (vp, vq) = (row[p], row[q]);
        row[p] = c * vp - s * vq;
        row[q] = s * vp + c * vq;
    }
}

/// `e^{−H/kt}/Tr e^{−H/kt}` via the numerical spectrum of `H`.
pub fn gibbs_state_numeric(c: &Couplings, kt: f64) -> Result<DensityMatrix4> {
    check_kt(kt)?;
    let h = hamiltonian_matrix(c)?;
    let eig = symmetric_eigen(&h)?;
    // eigenvalues ascending, so the first exponent is the largest
    let shift = -eig.eigenvalues[0] / kt;
    let weights = eig.eigenvalues.map(|w| (-w / kt - shift).exp());
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::OverflowGuard);
    }
    let z: f64 = weights.iter().sum();
    let rho = eig.rebuild(weights.map(|w| w / z));
    Ok(DensityMatrix4::from_matrix_unchecked(rho))
}

/// `(σy⊗σy) ρ* (σy⊗σy)` for a real `ρ`.
pub fn spin_flip(rho: &DensityMatrix4) -> Mat4 {
    spin_flip_matrix(rho.entries())
}

// σy⊗σy = antidiag(−1, 1, 1, −1)
const FLIP_SIGN: [f64; 4] = [1.0, -1.0, -1.0, 1.0];

fn spin_flip_matrix(m: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = FLIP_SIGN[i] * FLIP_SIGN[j] * m[3 - i][3 - j];
        }
    }
    out
}

/// Principal square root of a positive semidefinite matrix, clamping
/// eigenvalues in `[−PSD_TOL, 0)` to zero.
pub fn sqrt_psd(m: &Mat4) -> Result<Mat4> {
    let eig = symmetric_eigen(m)?;
    if eig.eigenvalues[0] < -PSD_TOL {
        return Err(Error::NotPositiveSemidefinite(eig.eigenvalues[0]));
    }
    Ok(eig.map_spectrum(|w| w.max(0.0).sqrt()))
}

/// The four Wootters `λ_i` in decreasing order: square roots of the
/// eigenvalues of `ρρ̃`.
///
/// They are taken as the singular values of `√ρ √ρ̃` rather than as square
/// roots of the eigenvalues of `√ρ ρ̃ √ρ`. Both give the same numbers in exact
/// arithmetic, but the square root of an eigenvalue carrying ~1e−16 of
/// rounding becomes ~1e−8, while the singular values keep their ~1e−16 error.
pub fn wootters_lambdas(rho: &DensityMatrix4) -> Result<[f64; 4]> {
    let sqrt_rho = sqrt_psd(rho.entries())?;
    // flipping commutes with the square root: √ρ̃ = flip(√ρ)
    let sqrt_flipped = spin_flip_matrix(&sqrt_rho);
    let mut lambdas = singular_values(&mat_mul(&sqrt_rho, &sqrt_flipped))?;
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok(lambdas)
}

/// Concurrence `max{0, λ1 − λ2 − λ3 − λ4}` of an arbitrary real two-qubit state.
pub fn wootters(rho: &DensityMatrix4) -> Result<f64> {
    let [l1, l2, l3, l4] = wootters_lambdas(rho)?;
    Ok((l1 - l2 - l3 - l4).max(0.0))
}

pub(crate) fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// One-sided (Hestenes) Jacobi SVD; returns the singular values unsorted.
fn singular_values(a: &Mat4) -> Result<[f64; 4]> {
    // work on columns: u[k] is column k of a
    let mut u = [[0.0; 4]; 4];
    for (k, col) in u.iter_mut().enumerate() {
        for i in 0..4 {
            col[i] = a[i][k];
        }
    }
    let dot = |x: &[f64; 4], y: &[f64; 4]| -> f64 { (0..4).map(|i| x[i] * y[i]).sum() };
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..3 {
            for q in (p + 1)..4 {
                let alpha = dot(&u[p], &u[p]);
                let beta = dot(&u[q], &u[q]);
                let gamma = dot(&u[p], &u[q]);
                if gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..4 {
                    let (xp, xq) = (u[p][i], u[q][i]);
                    u[p][i] = c * xp - s * xq;
                    u[q][i] = s * xp + c * xq;
                }
            }
        }
        if !rotated {
            return Ok(u.map(|col| dot(&col, &col).sqrt()));
        }
    }
    Err(Error::NoConvergence(JACOBI_MAX_SWEEPS))
}
