//! States, observables and qubit projectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{eigenvalues_hermitian, pauli_dot, sigma_x, sigma_y, sigma_z, trace_with, HermitianOperator};
use crate::tol;

/// Qubit polarisation vector `P⃗` with `|P⃗| ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector([f64; 3]);

impl BlochVector {
    pub fn new(p: [f64; 3]) -> Result<Self> {
        let norm = norm3(p);
        if !norm.is_finite() || norm > 1.0 + tol::NUM {
            return Err(Error::UnphysicalBloch { norm });
        }
        Ok(BlochVector(p))
    }

    pub fn zero() -> Self {
        BlochVector([0.0; 3])
    }

    /// `r · m̂`, for `r ∈ [0, 1]`.
    pub fn along(m: &Direction, r: f64) -> Result<Self> {
        let v = m.as_array();
        Self::new([r * v[0], r * v[1], r * v[2]])
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm3(self.0)
    }

    pub fn dot(&self, m: &Direction) -> f64 {
        dot3(self.0, m.0)
    }
}

/// Unit 3-vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction([f64; 3]);

impl Direction {
    /// Normalises `m`; its norm must lie in `[1e-6, 1e6]`.
    pub fn new(m: [f64; 3]) -> Result<Self> {
        let norm = norm3(m);
        if !(1e-6..=1e6).contains(&norm) {
            return Err(Error::InvalidDirection { norm });
        }
        Ok(Direction([m[0] / norm, m[1] / norm, m[2] / norm]))
    }

    pub fn x() -> Self {
        Direction([1.0, 0.0, 0.0])
    }

    pub fn y() -> Self {
        Direction([0.0, 1.0, 0.0])
    }

    pub fn z() -> Self {
        Direction([0.0, 0.0, 1.0])
    }

    /// Point on the unit sphere from polar angle `theta` (from +z) and azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Direction([theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()])
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        dot3(self.0, other.0)
    }

    pub fn flipped(&self) -> Self {
        Direction([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl std::ops::Neg for Direction {
    type Output = Direction;
    fn neg(self) -> Direction {
        self.flipped()
    }
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    dot3(v, v).sqrt()
}

pub(crate) fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Dichotomic qubit outcome label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn from_value(v: i32) -> Result<Self> {
        match v {
            1 => Ok(Outcome::Plus),
            -1 => Ok(Outcome::Minus),
            other => Err(Error::InvalidOutcome(other)),
        }
    }

    pub fn value(self) -> i32 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn sign(self) -> f64 {
        self.value() as f64
    }

    pub fn flipped(self) -> Self {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }
}

/// Unit-trace positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
}

impl DensityMatrix {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let diag = validate_density(&op)?;
        if !diag.passed {
            return Err(Error::NotADensity(format!(
                "trace residual {:e}, min eigenvalue {:e}",
                diag.trace_residual, diag.min_eigenvalue
            )));
        }
        Ok(DensityMatrix { op })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix { op: HermitianOperator::identity(dim).scale(1.0 / dim as f64) }
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }
}

/// `ρ = ½(1 + σ⃗·P⃗)`.
pub fn density_from_bloch(p: &BlochVector) -> DensityMatrix {
    let v = p.as_array();
    let sp = pauli_dot([0.5 * v[0], 0.5 * v[1], 0.5 * v[2]]);
    DensityMatrix { op: &HermitianOperator::identity(2).scale(0.5) + &sp }
}

/// Inverse of [`density_from_bloch`]: `P_i = Tr(ρ σ_i)`.
pub fn bloch_from_density(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimMismatch { left: rho.dim(), right: 2 });
    }
    let p = [
        trace_with(&sigma_x(), rho.op())?,
        trace_with(&sigma_y(), rho.op())?,
        trace_with(&sigma_z(), rho.op())?,
    ];
    // renormalise PSD round-off just above the sphere
    let n = norm3(p);
    if n > 1.0 && n <= 1.0 + tol::CHECK {
        return BlochVector::new([p[0] / n, p[1] / n, p[2] / n]);
    }
    BlochVector::new(p)
}

/// `π_a = ½(1 + a σ⃗·m̂)`.
pub fn projector_from_direction(m: &Direction, a: Outcome) -> HermitianOperator {
    let h = 0.5 * a.sign();
    let v = m.as_array();
    let half_id = HermitianOperator::identity(2).scale(0.5);
    &half_id + &pauli_dot([h * v[0], h * v[1], h * v[2]])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityDiagnostic {
    pub trace_residual: f64,
    pub min_eigenvalue: f64,
    pub hermiticity_residual: f64,
    pub passed: bool,
}

/// Trace, positivity and Hermiticity report for a candidate density operator.
pub fn validate_density(op: &HermitianOperator) -> Result<DensityDiagnostic> {
    let trace_residual = (op.trace() - 1.0).abs();
    let min_eigenvalue = eigenvalues_hermitian(op)?.min();
    let hermiticity_residual = op.construction_residual();
    let passed =
        trace_residual <= tol::CHECK && min_eigenvalue >= -tol::CHECK && hermiticity_residual <= tol::LOOSE;
    Ok(DensityDiagnostic { trace_residual, min_eigenvalue, hermiticity_residual, passed })
}

/// Observable with its spectral resolution `A = Σ aᵢ πᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    op: HermitianOperator,
    resolution: Vec<(f64, HermitianOperator)>,
    direction: Option<Direction>,
}

impl Observable {
    /// Builds an observable from `(outcome, projector)` pairs. The projectors
    /// must be idempotent, mutually orthogonal and resolve the identity.
    pub fn new(resolution: Vec<(f64, HermitianOperator)>) -> Result<Self> {
        let Some((_, first)) = resolution.first() else {
            return Err(Error::InvalidObservable("empty resolution".into()));
        };
        let dim = first.dim();
        let mut sum = HermitianOperator::zeros(dim);
        let mut op = HermitianOperator::zeros(dim);
        for (i, (a, p)) in resolution.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::DimMismatch { left: dim, right: p.dim() });
            }
            let residual = p.idempotency_residual();
            if residual > tol::CHECK {
                return Err(Error::NotAProjector { residual });
            }
            for (_, q) in &resolution[i + 1..] {
                let overlap = p.matrix().try_mul(q.matrix())?.max_abs();
                if overlap > tol::CHECK {
                    return Err(Error::InvalidObservable(format!("projectors overlap ({overlap:e})")));
                }
            }
            sum = &sum + p;
            op = &op + &p.scale(*a);
        }
        let completeness = sum.max_diff(&HermitianOperator::identity(dim));
        if completeness > tol::CHECK {
            return Err(Error::InvalidObservable(format!("projectors do not sum to identity ({completeness:e})")));
        }
        Ok(Observable { op, resolution, direction: None })
    }

    /// `σ⃗·m̂` resolved as `(+1, π₊), (−1, π₋)`.
    pub fn qubit(m: Direction) -> Self {
        let resolution: Vec<_> =
            Outcome::BOTH.iter().map(|&a| (a.sign(), projector_from_direction(&m, a))).collect();
        Observable { op: pauli_dot(m.as_array()), resolution, direction: Some(m) }
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn resolution(&self) -> &[(f64, HermitianOperator)] {
        &self.resolution
    }

    pub fn projector(&self, k: usize) -> &HermitianOperator {
        &self.resolution[k].1
    }

    pub fn outcome_value(&self, k: usize) -> f64 {
        self.resolution[k].0
    }

    pub fn outcome_count(&self) -> usize {
        self.resolution.len()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Bloch direction, for qubit observables built with [`Observable::qubit`].
    pub fn direction(&self) -> Option<&Direction> {
        self.direction.as_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::ComplexMatrix;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn herm(rows: [[f64; 2]; 2]) -> HermitianOperator {
        HermitianOperator::new(ComplexMatrix::from_fn(2, |i, j| Complex64::new(rows[i][j], 0.0))).unwrap()
    }

    #[test]
    fn density_from_bloch_examples() {
        let mixed = density_from_bloch(&BlochVector::zero());
        assert!(mixed.op().approx_eq(&HermitianOperator::identity(2).scale(0.5), 0.0));

        let up = density_from_bloch(&BlochVector::new([0.0, 0.0, 1.0]).unwrap());
        assert!(up.op().approx_eq(&HermitianOperator::diag(&[1.0, 0.0]), 0.0));

        let s = FRAC_1_SQRT_2;
        let tilted = density_from_bloch(&BlochVector::new([s, 0.0, s]).unwrap());
        let expected = herm([[0.5 * (1.0 + s), 0.5 * s], [0.5 * s, 0.5 * (1.0 - s)]]);
        assert!(tilted.op().approx_eq(&expected, 1e-15));
        let back = bloch_from_density(&tilted).unwrap().as_array();
        assert!((back[0] - s).abs() < 1e-12 && back[1].abs() < 1e-12 && (back[2] - s).abs() < 1e-12);
    }

    #[test]
    fn unphysical_bloch_is_rejected() {
        assert_eq!(BlochVector::new([0.8, 0.8, 0.0]).unwrap_err().code(), "unphysical-bloch");
        assert!(BlochVector::new([1.0 + 1e-13, 0.0, 0.0]).is_ok());
    }

    #[test]
    fn direction_normalises_and_guards() {
        let d = Direction::new([0.0, 3.0, 4.0]).unwrap();
        assert!((norm3(d.as_array()) - 1.0).abs() < 1e-15);
        assert_eq!(Direction::new([0.0, 0.0, 1e-7]).unwrap_err().code(), "invalid-direction");
        assert_eq!(Direction::new([1e7, 0.0, 0.0]).unwrap_err().code(), "invalid-direction");
    }

    #[test]
    fn projector_examples() {
        let zp = projector_from_direction(&Direction::z(), Outcome::Plus);
        assert!(zp.approx_eq(&HermitianOperator::diag(&[1.0, 0.0]), 0.0));

        let xm = projector_from_direction(&Direction::x(), Outcome::Minus);
        assert!(xm.approx_eq(&herm([[0.5, -0.5], [-0.5, 0.5]]), 0.0));

        let flipped = projector_from_direction(&-Direction::z(), Outcome::Plus);
        assert!(flipped.approx_eq(&HermitianOperator::diag(&[0.0, 1.0]), 0.0));
        assert_eq!(flipped, projector_from_direction(&Direction::z(), Outcome::Minus));
    }

    #[test]
    fn validate_density_examples() {
        let d = validate_density(&HermitianOperator::identity(2).scale(0.5)).unwrap();
        assert!(d.passed);
        assert!((d.min_eigenvalue - 0.5).abs() < 1e-15);

        let d = validate_density(&HermitianOperator::diag(&[1.0, 0.0])).unwrap();
        assert!(d.passed);
        assert_eq!(d.min_eigenvalue, 0.0);

        let d = validate_density(&HermitianOperator::diag(&[1.5, -0.5])).unwrap();
        assert!(!d.passed);
        assert_eq!(d.min_eigenvalue, -0.5);
        assert_eq!(DensityMatrix::new(HermitianOperator::diag(&[1.5, -0.5])).unwrap_err().code(), "not-a-density");
    }

    #[test]
    fn outcome_labels() {
        assert_eq!(Outcome::from_value(-1).unwrap(), Outcome::Minus);
        assert_eq!(Outcome::from_value(0).unwrap_err().code(), "invalid-outcome");
        assert_eq!(Outcome::Plus.flipped().value(), -1);
    }

    #[test]
    fn observable_validation() {
        let zp = HermitianOperator::diag(&[1.0, 0.0, 0.0]);
        let rest = HermitianOperator::diag(&[0.0, 1.0, 1.0]);
        let obs = Observable::new(vec![(2.0, zp.clone()), (-1.0, rest.clone())]).unwrap();
        assert!(obs.op().approx_eq(&HermitianOperator::diag(&[2.0, -1.0, -1.0]), 0.0));

        let err = Observable::new(vec![(1.0, zp.clone())]).unwrap_err();
        assert_eq!(err.code(), "invalid-observable");
        let err = Observable::new(vec![(1.0, zp.clone()), (2.0, zp.clone()), (0.0, rest)]).unwrap_err();
        assert_eq!(err.code(), "invalid-observable");
        let err = Observable::new(vec![(1.0, zp.scale(2.0))]).unwrap_err();
        assert_eq!(err.code(), "not-a-projector");
    }

    #[test]
    fn qubit_observable_resolution() {
        let m = Direction::new([1.0, -2.0, 0.5]).unwrap();
        let obs = Observable::qubit(m);
        let rebuilt = Observable::new(obs.resolution().to_vec()).unwrap();
        assert!(rebuilt.op().approx_eq(&pauli_dot(m.as_array()), 1e-12));
    }
}
