//! Pure two-qubit states and the negativity-based entanglement monotone
//! `ℳ = 1 − 𝒩_max(ρ_r)/𝒩_max(ρ_pure)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{eigenvalues_hermitian, ComplexMatrix, HermitianOperator};
use crate::qubit::negativity_max;
use crate::states::DensityMatrix;

/// `𝒩_max` of any pure single-qubit state (`|P⃗| = 1`).
pub const PURE_NEGATIVITY_MAX: f64 = 0.125;

/// Normalisation slack accepted on input; the stored amplitudes are renormalised.
pub const NORM_TOLERANCE: f64 = 1e-8;

/// Amplitudes in the basis order `|00⟩, |01⟩, |10⟩, |11⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitPureState {
    amps: [Complex64; 4],
}

impl TwoQubitPureState {
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sq });
        }
        let s = norm_sq.sqrt();
        Ok(TwoQubitPureState { amps: amps.map(|a| a / s) })
    }

    pub fn from_parts(re: [f64; 4], im: [f64; 4]) -> Result<Self> {
        Self::new([0, 1, 2, 3].map(|k| Complex64::new(re[k], im[k])))
    }

    /// `cos α |00⟩ + sin α |11⟩`.
    pub fn schmidt(alpha: f64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        TwoQubitPureState { amps: [Complex64::new(alpha.cos(), 0.0), z, z, Complex64::new(alpha.sin(), 0.0)] }
    }

    /// Computational basis state `|ab⟩`.
    pub fn basis(a: usize, b: usize) -> Self {
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        amps[2 * (a & 1) + (b & 1)] = Complex64::new(1.0, 0.0);
        TwoQubitPureState { amps }
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    /// `(U ⊗ V)|ψ⟩` for 2×2 matrices `u`, `v`.
    pub fn apply_local(&self, u: &ComplexMatrix, v: &ComplexMatrix) -> Result<Self> {
        if u.dim() != 2 || v.dim() != 2 {
            return Err(Error::DimMismatch { left: 2, right: u.dim().max(v.dim()) });
        }
        let uv = u.kron(v);
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = (0..4).map(|j| uv.get(i, j) * self.amps[j]).sum();
        }
        Self::new(out)
    }
}

/// Partial trace over the other qubit.
pub fn reduced_density(psi: &TwoQubitPureState, subsystem: usize) -> Result<DensityMatrix> {
    let a = &psi.amps;
    // coefficient matrix c[i][j] = ⟨ij|ψ⟩
    let c = |i: usize, j: usize| a[2 * i + j];
    let m = match subsystem {
        0 => ComplexMatrix::from_fn(2, |i, k| (0..2).map(|j| c(i, j) * c(k, j).conj()).sum()),
        1 => ComplexMatrix::from_fn(2, |j, l| (0..2).map(|i| c(i, j) * c(i, l).conj()).sum()),
        other => return Err(Error::InvalidSubsystem(other)),
    };
    DensityMatrix::new(HermitianOperator::new(m)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotoneValue {
    pub m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub reduced_bloch_norm: f64,
    pub n_max_reduced: f64,
    pub monotone: f64,
}

/// Full report using the reduced state of `subsystem`.
pub fn entanglement_report(psi: &TwoQubitPureState, subsystem: usize) -> Result<EntanglementReport> {
    let rho = reduced_density(psi, subsystem)?;
    let spectrum = eigenvalues_hermitian(rho.op())?;
    let reduced_bloch_norm = (spectrum.max() - spectrum.min()).clamp(0.0, 1.0);
    let n_max_reduced = negativity_max(reduced_bloch_norm)?.value;
    let monotone = (1.0 - n_max_reduced / PURE_NEGATIVITY_MAX).clamp(0.0, 1.0);
    Ok(EntanglementReport { reduced_bloch_norm, n_max_reduced, monotone })
}

pub fn monotone(psi: &TwoQubitPureState) -> Result<MonotoneValue> {
    Ok(MonotoneValue { m: entanglement_report(psi, 0)?.monotone })
}
