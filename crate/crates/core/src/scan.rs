//! Seeded parameter sweeps and Monte Carlo estimates.
//!
//! Every random sample `i` draws from its own ChaCha8 stream (`seed`, stream
//! `i`), so results do not depend on how the work is split across threads.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::operator::{ComplexMatrix, HermitianOperator};
use crate::pseudo::{spectral_audit, weyl_pseudo_projection};
use crate::qubit::{
    negativity_special, pair_classical_radius, pair_entries, triple_classical_radius, triple_weyl_entries,
    PairConstraint, PairGeometry, TripleGeometry,
};
use crate::states::{BlochVector, Direction};
use crate::tol;

pub const PRNG_NAME: &str = "ChaCha8 (rand_chacha 0.3); seed_from_u64(seed), stream = sample index";

pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_direction<R: Rng>(rng: &mut R) -> Direction {
    loop {
        let v: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
        if let Ok(d) = Direction::new(v) {
            return d;
        }
    }
}

/// Uniform in the Bloch ball: radius `u^{1/3}`, isotropic direction.
pub fn random_bloch<R: Rng>(rng: &mut R) -> BlochVector {
    let m = random_direction(rng);
    let r: f64 = rng.gen::<f64>().cbrt();
    BlochVector::along(&m, r.min(1.0)).expect("radius at most 1")
}

/// Haar-random unitary: Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> =
            (0..dim).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        for q in &cols {
            let overlap: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= overlap * qi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// `U D U†` where `D` selects the basis indices in `keep`.
fn projector_in_basis(u: &ComplexMatrix, keep: &[usize]) -> HermitianOperator {
    let dim = u.dim();
    let m = ComplexMatrix::from_fn(dim, |i, j| keep.iter().map(|&k| u.get(i, k) * u.get(j, k).conj()).sum());
    HermitianOperator::new(m).expect("projector is Hermitian")
}

/// Projector onto a Haar-random subspace of the given rank.
pub fn haar_projector<R: Rng>(rng: &mut R, dim: usize, rank: usize) -> HermitianOperator {
    let u = random_unitary(rng, dim);
    projector_in_basis(&u, &(0..rank).collect::<Vec<_>>())
}

/// Two projectors diagonal in a shared random eigenbasis.
pub fn commuting_projectors<R: Rng>(rng: &mut R, dim: usize, r1: usize, r2: usize) -> (HermitianOperator, HermitianOperator) {
    let u = random_unitary(rng, dim);
    let mut idx: Vec<usize> = (0..dim).collect();
    idx.shuffle(rng);
    let a = projector_in_basis(&u, &idx[..r1]);
    idx.shuffle(rng);
    let b = projector_in_basis(&u, &idx[..r2]);
    (a, b)
}

/// Unit vector orthogonal to `u`.
fn orthogonal_to(u: [f64; 3]) -> [f64; 3] {
    let pick = if u[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = pick[0] * u[0] + pick[1] * u[1] + pick[2] * u[2];
    let v = [pick[0] - d * u[0], pick[1] - d * u[1], pick[2] - d * u[2]];
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn axis_of(p: &BlochVector) -> [f64; 3] {
    Direction::new(p.as_array()).map(|d| d.as_array()).unwrap_or([0.0, 0.0, 1.0])
}

/// Directions `θ` apart, symmetric about `P⃗` so that `P⃗ ∥ m̂₁ + m̂₂`.
pub fn pair_aligned_with(p: &BlochVector, theta: f64) -> PairGeometry {
    let u = axis_of(p);
    let v = orthogonal_to(u);
    let (s, c) = (0.5 * theta).sin_cos();
    let m1 = Direction::new([c * u[0] + s * v[0], c * u[1] + s * v[1], c * u[2] + s * v[2]]).expect("unit");
    let m2 = Direction::new([c * u[0] - s * v[0], c * u[1] - s * v[1], c * u[2] - s * v[2]]).expect("unit");
    PairGeometry::new(*p, m1, m2)
}

/// Mutually orthogonal triple with `P⃗ ∥ m̂₁ + m̂₂ + m̂₃`.
pub fn orthogonal_triple_aligned_with(p: &BlochVector) -> TripleGeometry {
    let u = axis_of(p);
    let a = orthogonal_to(u);
    let b = cross(u, a);
    let (k1, k2) = (1.0 / 3f64.sqrt(), (2.0f64 / 3.0).sqrt());
    let m = [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0].map(|phi: f64| {
        let (s, c) = phi.sin_cos();
        Direction::new([0, 1, 2].map(|i| k1 * u[i] + k2 * (c * a[i] + s * b[i]))).expect("unit")
    });
    TripleGeometry::new(*p, m)
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub num: f64,
    pub loose: f64,
    pub check: f64,
    pub classical_eps: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub prng: &'static str,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
}

impl Metadata {
    /// With `deterministic`, the timestamp is omitted so output is byte-stable.
    pub fn new(classical_eps: f64, deterministic: bool) -> Self {
        let generated_unix = (!deterministic).then(|| {
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
        });
        Metadata {
            tool: "pseudoprob",
            version: env!("CARGO_PKG_VERSION"),
            prng: PRNG_NAME,
            tolerances: Tolerances { num: tol::NUM, loose: tol::LOOSE, check: tol::CHECK, classical_eps },
            generated_unix,
        }
    }
}

/// A row that can also be written as CSV.
pub trait CsvRow {
    fn header() -> Vec<&'static str>;
    fn fields(&self) -> Vec<String>;
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanResult<R> {
    pub kind: &'static str,
    pub params: Value,
    pub rows: Vec<R>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Value>,
    pub metadata: Metadata,
}

impl<R: CsvRow> ScanResult<R> {
    pub fn to_csv(&self) -> String {
        let mut out = R::header().join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.fields().join(","));
            out.push('\n');
        }
        out
    }
}

/// Shortest decimal that round-trips to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegativityRow {
    pub theta: f64,
    pub negativity: f64,
}

impl CsvRow for NegativityRow {
    fn header() -> Vec<&'static str> {
        vec!["theta", "negativity"]
    }
    fn fields(&self) -> Vec<String> {
        vec![fmt_f64(self.theta), fmt_f64(self.negativity)]
    }
}

/// Smallest margin kept from 0 and π when a θ range is clipped.
pub const THETA_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct NegativitySweep {
    pub rows: Vec<NegativityRow>,
    /// Whether the requested range had to be pulled inside `(0, π)`.
    pub clipped: bool,
}

/// Aligned-geometry negativity on `steps` evenly spaced angles from
/// `theta_min` to `theta_max` inclusive.
pub fn scan_negativity(pnorm: f64, theta_min: f64, theta_max: f64, steps: usize) -> Result<NegativitySweep> {
    if steps < 2 {
        return Err(Error::OutOfRange(format!("steps = {steps}, need at least 2")));
    }
    if !(theta_min.is_finite() && theta_max.is_finite()) || theta_min > theta_max {
        return Err(Error::OutOfRange(format!("theta range [{theta_min}, {theta_max}] is empty")));
    }
    let lo = theta_min.clamp(THETA_MARGIN, PI - THETA_MARGIN);
    let hi = theta_max.clamp(THETA_MARGIN, PI - THETA_MARGIN);
    let clipped = lo != theta_min || hi != theta_max;
    let rows = (0..steps)
        .map(|k| {
            let theta = lo + (hi - lo) * k as f64 / (steps - 1) as f64;
            Ok(NegativityRow { theta, negativity: negativity_special(pnorm, theta)? })
        })
        .collect::<Result<_>>()?;
    Ok(NegativitySweep { rows, clipped })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    OrthogonalPair,
    OrthogonalTriple,
    FreePair,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::OrthogonalPair => "orthogonal-pair",
            Family::OrthogonalTriple => "orthogonal-triple",
            Family::FreePair => "free-pair",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionRow {
    pub family: &'static str,
    pub samples: usize,
    pub critical_radius: f64,
    pub radius_fraction: f64,
    pub euclidean_volume_fraction: f64,
    pub euclidean_volume_fraction_stderr: f64,
    pub euclidean_volume_fraction_analytic: f64,
    pub nonclassical_fraction: f64,
}

impl CsvRow for RegionRow {
    fn header() -> Vec<&'static str> {
        vec![
            "family",
            "samples",
            "critical_radius",
            "radius_fraction",
            "euclidean_volume_fraction",
            "euclidean_volume_fraction_stderr",
            "euclidean_volume_fraction_analytic",
            "nonclassical_fraction",
        ]
    }
    fn fields(&self) -> Vec<String> {
        vec![
            self.family.to_string(),
            self.samples.to_string(),
            fmt_f64(self.critical_radius),
            fmt_f64(self.radius_fraction),
            fmt_f64(self.euclidean_volume_fraction),
            fmt_f64(self.euclidean_volume_fraction_stderr),
            fmt_f64(self.euclidean_volume_fraction_analytic),
            fmt_f64(self.nonclassical_fraction),
        ]
    }
}

fn min_entry(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Fraction of the Bloch ball that is classical for every geometry in
/// `family`, estimated from `samples` uniform states. The critical radius
/// comes from deterministic bisection; sampling only affects the volume estimate.
///
/// For [`Family::FreePair`] each state is tested against aligned pairs on a
/// grid of `geometry_grid` angles `θ_k = πk/(G+1)`; the reported critical
/// radius is the smallest `|P⃗|` that grid can expose, `cos(θ_G/2)`, which
/// tends to zero as the grid is refined.
pub fn classical_region(family: Family, samples: usize, seed: u64, geometry_grid: usize, eps: f64) -> Result<RegionRow> {
    if samples == 0 {
        return Err(Error::OutOfRange("samples must be at least 1".into()));
    }
    if family == Family::FreePair && geometry_grid == 0 {
        return Err(Error::OutOfRange("geometry grid must have at least 1 angle".into()));
    }
    let grid: Vec<f64> = (1..=geometry_grid).map(|k| PI * k as f64 / (geometry_grid + 1) as f64).collect();
    let critical_radius = match family {
        Family::OrthogonalPair => pair_classical_radius(PairConstraint::Orthogonal),
        Family::OrthogonalTriple => triple_classical_radius(),
        Family::FreePair => (0.5 * grid[grid.len() - 1]).cos(),
    };

    let classical: usize = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i as u64);
            let p = random_bloch(&mut rng);
            let ok = match family {
                Family::OrthogonalPair => min_entry(&pair_entries(&pair_aligned_with(&p, PI / 2.0))) >= -eps,
                Family::OrthogonalTriple => min_entry(&triple_weyl_entries(&orthogonal_triple_aligned_with(&p))) >= -eps,
                Family::FreePair => grid.iter().all(|&t| min_entry(&pair_entries(&pair_aligned_with(&p, t))) >= -eps),
            };
            usize::from(ok)
        })
        .sum();

    let n = samples as f64;
    let f = classical as f64 / n;
    Ok(RegionRow {
        family: family.name(),
        samples,
        critical_radius,
        radius_fraction: critical_radius,
        euclidean_volume_fraction: f,
        euclidean_volume_fraction_stderr: (f * (1.0 - f) / n).sqrt(),
        euclidean_volume_fraction_analytic: critical_radius.powi(3),
        nonclassical_fraction: 1.0 - f,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub index: usize,
    pub min_eig: f64,
    pub commutator_norm: f64,
    pub violation: bool,
}

impl CsvRow for SpectrumRow {
    fn header() -> Vec<&'static str> {
        vec!["index", "min_eig", "commutator_norm", "violation"]
    }
    fn fields(&self) -> Vec<String> {
        vec![self.index.to_string(), fmt_f64(self.min_eig), fmt_f64(self.commutator_norm), self.violation.to_string()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumSummary {
    pub pairs: usize,
    pub noncommuting: usize,
    pub violations: usize,
}

/// Commutator norm above which a pair counts as non-commuting.
pub const COMMUTING_THRESHOLD: f64 = 1e-6;

/// A non-commuting pair must give `min_eig < -NEGATIVE_SLACK`.
pub const NEGATIVE_SLACK: f64 = 1e-14;

/// Commuting pairs may dip this far below zero through rounding.
pub const COMMUTING_FLOOR: f64 = 1e-12;

/// Minimum eigenvalue of `½{P, Q}` for random projector pairs of ranks
/// `(r1, r2)` in dimension `dim`. With `commuting`, pairs share an eigenbasis.
pub fn spectrum_scan(
    dim: usize,
    ranks: (usize, usize),
    pairs: usize,
    seed: u64,
    commuting: bool,
) -> Result<(Vec<SpectrumRow>, SpectrumSummary)> {
    if !(2..=16).contains(&dim) {
        return Err(Error::OutOfRange(format!("dim = {dim} not in [2, 16]")));
    }
    let (r1, r2) = ranks;
    if !(1..=dim).contains(&r1) || !(1..=dim).contains(&r2) {
        return Err(Error::OutOfRange(format!("ranks ({r1}, {r2}) not in [1, {dim}]")));
    }
    let rows: Vec<SpectrumRow> = (0..pairs)
        .into_par_iter()
        .map(|index| {
            let mut rng = rng_for(seed, index as u64);
            let (a, b) = if commuting {
                commuting_projectors(&mut rng, dim, r1, r2)
            } else {
                (haar_projector(&mut rng, dim, r1), haar_projector(&mut rng, dim, r2))
            };
            let audit = spectral_audit(&weyl_pseudo_projection(&[a, b])?)?;
            let violation = if audit.commutator_norm > COMMUTING_THRESHOLD {
                audit.min_eig >= -NEGATIVE_SLACK
            } else {
                audit.min_eig < -COMMUTING_FLOOR
            };
            Ok(SpectrumRow { index, min_eig: audit.min_eig, commutator_norm: audit.commutator_norm, violation })
        })
        .collect::<Result<_>>()?;
    let summary = SpectrumSummary {
        pairs,
        noncommuting: rows.iter().filter(|r| r.commutator_norm > COMMUTING_THRESHOLD).count(),
        violations: rows.iter().filter(|r| r.violation).count(),
    };
    Ok((rows, summary))
}
