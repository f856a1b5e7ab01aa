//! Dense complex matrices sized for few-level quantum systems.
//!
//! Everything here is a small value type: matrices are stored row-major in a
//! flat `Vec`, every operation allocates a fresh result, and nothing is ever
//! mutated after construction. Dimensions in practice are 2 to 16.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// Square complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::BadShape { rows: dim, len: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        ComplexMatrix { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { dim, data }
    }

    /// Diagonal matrix with real entries.
    pub fn diag(values: &[f64]) -> Self {
        Self::from_fn(values.len(), |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Builds a matrix from separate real and imaginary row lists.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let dim = re.len();
        if im.len() != dim || re.iter().chain(im.iter()).any(|row| row.len() != dim) {
            let len = re.iter().map(Vec::len).sum::<usize>();
            return Err(Error::BadShape { rows: dim, len });
        }
        let data = re
            .iter()
            .zip(im)
            .flat_map(|(r, i)| r.iter().zip(i).map(|(&a, &b)| Complex64::new(a, b)))
            .collect();
        Self::new(dim, data)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.dim + j] = z;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        ComplexMatrix { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Entrywise max-norm distance.
    pub fn max_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        check_dims(self.dim, rhs.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        check_dims(self.dim, rhs.dim)?;
        Ok(ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() })
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        check_dims(self.dim, rhs.dim)?;
        Ok(ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() })
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.try_mul(rhs)?.try_sub(&rhs.try_mul(self)?)
    }

    /// Kronecker product.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (n, m) = (self.dim, rhs.dim);
        Self::from_fn(n * m, |i, j| self.get(i / m, j / m) * rhs.get(i % m, j % m))
    }

    /// `½(M + M†)` together with the max-norm of the anti-Hermitian part that was dropped.
    pub fn hermitian_part(&self) -> (Self, f64) {
        let n = self.dim;
        let mut out = Self::zeros(n);
        let mut residual = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                let b = self.get(j, i).conj();
                out.set(i, j, (a + b) * 0.5);
                residual = residual.max(((a - b) * 0.5).norm());
            }
        }
        (out, residual)
    }

    pub fn to_json(&self) -> MatrixJson {
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..self.dim).map(|i| (0..self.dim).map(|j| f(&self.get(i, j))).collect()).collect()
        };
        MatrixJson { dim: self.dim, re: rows(|z| z.re), im: rows(|z| z.im) }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimMismatch { left, right })
    }
}

/// Wire format `{"dim": n, "re": [[...]], "im": [[...]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let m = ComplexMatrix::from_parts(&self.re, &self.im)?;
        check_dims(self.dim, m.dim())?;
        Ok(m)
    }
}

/// A Hermitian operator. The stored matrix is exactly Hermitian; the
/// anti-Hermitian residue removed at construction is kept for diagnostics.
#[derive(Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    residual: f64,
}

impl HermitianOperator {
    /// Replaces `m` with its Hermitian part; fails when the discarded part exceeds 1e-9.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, tol::LOOSE)
    }

    pub fn with_tolerance(m: ComplexMatrix, max_residual: f64) -> Result<Self> {
        let (matrix, residual) = m.hermitian_part();
        if residual > max_residual {
            return Err(Error::NonHermitian { residual });
        }
        Ok(HermitianOperator { matrix, residual })
    }

    /// Hermitian part of `m` without the residual check. Only for
    /// expressions that are Hermitian up to rounding by construction.
    pub(crate) fn hermitize(m: ComplexMatrix) -> Self {
        let (matrix, residual) = m.hermitian_part();
        HermitianOperator { matrix, residual }
    }

    pub fn identity(dim: usize) -> Self {
        HermitianOperator { matrix: ComplexMatrix::identity(dim), residual: 0.0 }
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianOperator { matrix: ComplexMatrix::zeros(dim), residual: 0.0 }
    }

    pub fn diag(values: &[f64]) -> Self {
        HermitianOperator { matrix: ComplexMatrix::diag(values), residual: 0.0 }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Anti-Hermitian max-norm discarded when this value was built.
    pub fn construction_residual(&self) -> f64 {
        self.residual
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix.get(i, j)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianOperator { matrix: self.matrix.scale(s), residual: self.residual * s.abs() }
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        self.matrix.max_diff(&other.matrix)
    }

    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        self.dim() == other.dim() && self.max_diff(other) <= eps
    }

    /// Max-norm of `M² − M`.
    pub fn idempotency_residual(&self) -> f64 {
        let sq = self.matrix.try_mul(&self.matrix).expect("square matrix");
        sq.max_diff(&self.matrix)
    }

    pub fn is_projector(&self, eps: f64) -> bool {
        self.idempotency_residual() <= eps
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        Ok(HermitianOperator::hermitize(self.matrix.try_add(&rhs.matrix)?))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        Ok(HermitianOperator::hermitize(self.matrix.try_sub(&rhs.matrix)?))
    }

    /// Max-norm of `[self, other]`.
    pub fn commutator_norm(&self, other: &Self) -> Result<f64> {
        Ok(self.matrix.commutator(&other.matrix)?.max_abs())
    }

    pub fn to_json(&self) -> MatrixJson {
        self.matrix.to_json()
    }
}

impl fmt::Debug for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: Self) -> HermitianOperator {
        self.try_add(rhs).expect("dimension mismatch in operator addition")
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: Self) -> HermitianOperator {
        self.try_sub(rhs).expect("dimension mismatch in operator subtraction")
    }
}

impl Mul<&HermitianOperator> for f64 {
    type Output = HermitianOperator;
    fn mul(self, rhs: &HermitianOperator) -> HermitianOperator {
        rhs.scale(self)
    }
}

pub fn sigma_x() -> HermitianOperator {
    let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    HermitianOperator { matrix: ComplexMatrix { dim: 2, data: vec![z, o, o, z] }, residual: 0.0 }
}

pub fn sigma_y() -> HermitianOperator {
    let (i, z) = (Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0));
    HermitianOperator { matrix: ComplexMatrix { dim: 2, data: vec![z, -i, i, z] }, residual: 0.0 }
}

pub fn sigma_z() -> HermitianOperator {
    HermitianOperator::diag(&[1.0, -1.0])
}

/// `σ⃗·v` for a real 3-vector.
pub fn pauli_dot(v: [f64; 3]) -> HermitianOperator {
    let m = ComplexMatrix {
        dim: 2,
        data: vec![
            Complex64::new(v[2], 0.0),
            Complex64::new(v[0], -v[1]),
            Complex64::new(v[0], v[1]),
            Complex64::new(-v[2], 0.0),
        ],
    };
    HermitianOperator { matrix: m, residual: 0.0 }
}

/// Anticommutator over two: `½(ab + ba)`.
pub fn symmetrized_product(a: &HermitianOperator, b: &HermitianOperator) -> Result<HermitianOperator> {
    let ab = a.matrix.try_mul(&b.matrix)?;
    let ba = b.matrix.try_mul(&a.matrix)?;
    Ok(HermitianOperator::hermitize(ab.try_add(&ba)?.scale(0.5)))
}

/// `Re Tr(ρ a)`; the imaginary part must vanish to 1e-9.
pub fn trace_with(a: &HermitianOperator, rho: &HermitianOperator) -> Result<f64> {
    check_dims(a.dim(), rho.dim())?;
    let n = a.dim();
    let mut t = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            t += rho.get(i, j) * a.get(j, i);
        }
    }
    if t.im.abs() > tol::LOOSE {
        return Err(Error::NonHermitianTrace { imag: t.im });
    }
    Ok(t.re)
}

pub fn tensor(a: &HermitianOperator, b: &HermitianOperator) -> HermitianOperator {
    HermitianOperator { matrix: a.matrix.kron(&b.matrix), residual: a.residual.max(b.residual) }
}

/// Eigenvalues of a Hermitian operator in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Eigen-decomposition: ascending spectrum and unitary whose columns are the eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub spectrum: Spectrum,
    pub vectors: ComplexMatrix,
}

impl Eigen {
    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lambda = ComplexMatrix::diag(self.spectrum.eigenvalues());
        self.vectors
            .try_mul(&lambda)
            .and_then(|vl| vl.try_mul(&self.vectors.adjoint()))
            .expect("square factors")
    }
}

const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

pub fn eigenvalues_hermitian(a: &HermitianOperator) -> Result<Spectrum> {
    Ok(eigh(a)?.spectrum)
}

/// Cyclic Jacobi diagonalisation with complex 2×2 unitary rotations.
pub fn eigh(a: &HermitianOperator) -> Result<Eigen> {
    let n = a.dim();
    let mut m = a.matrix.clone();
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_OFF_TOL * m.frobenius().max(1.0);

    let off_norm = |m: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&m);
        if off <= threshold {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::EigNoConvergence { sweeps, off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (m.get(i, i).re, i)).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let vectors = ComplexMatrix::from_fn(n, |i, j| v.get(i, pairs[j].1));
    Ok(Eigen { spectrum: Spectrum { eigenvalues: pairs.into_iter().map(|(e, _)| e).collect() }, vectors })
}

// Zeroes m[p][q] with J = diag-phase · real rotation; m ← J†mJ, v ← vJ.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m.get(p, q);
    let mag = apq.norm();
    if mag < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / mag;
    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = m.dim;
    for k in 0..n {
        let akp = m.get(k, p);
        let akq = m.get(k, q);
        m.set(k, p, akp * jpp + akq * jqp);
        m.set(k, q, akp * jpq + akq * jqq);
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * jpp + vkq * jqp);
        v.set(k, q, vkp * jpq + vkq * jqq);
    }
    for k in 0..n {
        let apk = m.get(p, k);
        let aqk = m.get(q, k);
        m.set(p, k, jpp.conj() * apk + jqp.conj() * aqk);
        m.set(q, k, jpq.conj() * apk + jqq.conj() * aqk);
    }
    m.set(p, q, Complex64::new(0.0, 0.0));
    m.set(q, p, Complex64::new(0.0, 0.0));
    let dp = m.get(p, p).re;
    let dq = m.get(q, q).re;
    m.set(p, p, Complex64::new(dp, 0.0));
    m.set(q, q, Complex64::new(dq, 0.0));
}
