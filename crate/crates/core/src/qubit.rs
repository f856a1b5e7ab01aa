//! Closed-form qubit pseudo-probabilities, classicality radii and the
//! aligned-geometry negativity curve.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::ComplexMatrix;
use crate::pseudo::{OrderingRecipe, PseudoProjection};
use crate::scheme::Scheme;
use crate::states::{density_from_bloch, projector_from_direction, BlochVector, Direction, Observable, Outcome};

/// Symmetric coplanar triple: `ẑ` and `ẑ` rotated by ±120° in the x–z plane.
pub fn coplanar120() -> [Direction; 3] {
    let t = 2.0 * PI / 3.0;
    [Direction::z(), Direction::from_angles(t, 0.0), Direction::from_angles(t, PI)]
}

pub fn orthogonal_triple() -> [Direction; 3] {
    [Direction::x(), Direction::y(), Direction::z()]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry {
    pub p: BlochVector,
    pub m1: Direction,
    pub m2: Direction,
}

impl PairGeometry {
    pub fn new(p: BlochVector, m1: Direction, m2: Direction) -> Self {
        PairGeometry { p, m1, m2 }
    }

    /// Directions `θ` apart, placed symmetrically about `ẑ` in the x–z plane,
    /// with `P⃗ = |P⃗| ẑ ∥ m̂₁ + m̂₂`.
    pub fn aligned(pnorm: f64, theta: f64) -> Result<Self> {
        let h = 0.5 * theta;
        let m1 = Direction::new([h.sin(), 0.0, h.cos()])?;
        let m2 = Direction::new([-h.sin(), 0.0, h.cos()])?;
        Ok(PairGeometry { p: BlochVector::along(&Direction::z(), pnorm)?, m1, m2 })
    }

    /// Angle between the directions, in `[0, π]`.
    pub fn theta(&self) -> f64 {
        self.m1.dot(&self.m2).clamp(-1.0, 1.0).acos()
    }
}

/// Four pair entries `¼(1 + a₁a₂ m̂₁·m̂₂ + P⃗·(a₁m̂₁ + a₂m̂₂))`, canonical order.
pub fn pair_entries(g: &PairGeometry) -> [f64; 4] {
    let c12 = g.m1.dot(&g.m2);
    let (p1, p2) = (g.p.dot(&g.m1), g.p.dot(&g.m2));
    let mut out = [0.0; 4];
    for (k, slot) in out.iter_mut().enumerate() {
        let a1 = Outcome::BOTH[k / 2].sign();
        let a2 = Outcome::BOTH[k % 2].sign();
        *slot = 0.25 * (1.0 + a1 * a2 * c12 + a1 * p1 + a2 * p2);
    }
    out
}

pub fn pair_scheme_closed(g: &PairGeometry) -> Result<Scheme> {
    Scheme::from_entries(
        vec![Observable::qubit(g.m1), Observable::qubit(g.m2)],
        pair_entries(g).to_vec(),
        OrderingRecipe::Weyl,
        density_from_bloch(&g.p),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairConstraint {
    Orthogonal,
}

/// Radius below which every orthogonal pair gives a non-negative scheme.
/// Found by bisection on the worst geometry `P⃗ ∥ m̂₁ + m̂₂`.
pub fn pair_classical_radius(constraint: PairConstraint) -> f64 {
    match constraint {
        PairConstraint::Orthogonal => bisect_radius(|r| {
            let g = PairGeometry::aligned(r, FRAC_PI_2).expect("r in [0, 1]");
            min_of(&pair_entries(&g))
        }),
    }
}

/// Radius below which the Weyl scheme for mutually orthogonal triples is
/// non-negative. Worst geometry `P⃗ ∥ m̂₁ + m̂₂ + m̂₃`.
pub fn triple_classical_radius() -> f64 {
    let dirs = orthogonal_triple();
    let diag = Direction::new([1.0, 1.0, 1.0]).expect("non-zero");
    bisect_radius(|r| {
        let g = TripleGeometry::new(BlochVector::along(&diag, r).expect("r in [0, 1]"), dirs);
        min_of(&triple_weyl_entries(&g))
    })
}

fn min_of(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::INFINITY, f64::min)
}

// Largest r in [0, 1] with min_entry(r) ≥ 0, assuming min_entry decreases in r.
fn bisect_radius(min_entry: impl Fn(f64) -> f64) -> f64 {
    if min_entry(1.0) >= 0.0 {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if min_entry(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleGeometry {
    pub p: BlochVector,
    pub m: [Direction; 3],
}

impl TripleGeometry {
    pub fn new(p: BlochVector, m: [Direction; 3]) -> Self {
        TripleGeometry { p, m }
    }
}

/// The three hermitized orderings `Π⁽¹⁾ = ½(π₁π₂π₃ + π₃π₂π₁)`,
/// `Π⁽²⁾ = ½(π₃π₁π₂ + π₂π₁π₃)`, `Π⁽³⁾ = ½(π₂π₃π₁ + π₁π₃π₂)`.
pub fn triple_units(g: &TripleGeometry, a: [Outcome; 3]) -> [PseudoProjection; 3] {
    let p: Vec<_> = g.m.iter().zip(a).map(|(m, a)| projector_from_direction(m, a)).collect();
    let prod = |i: usize, j: usize, k: usize| -> ComplexMatrix {
        p[i].matrix().try_mul(p[j].matrix()).and_then(|x| x.try_mul(p[k].matrix())).expect("2x2")
    };
    let unit = |first: ComplexMatrix, second: ComplexMatrix, index: usize| {
        let op = crate::operator::HermitianOperator::hermitize(first.try_add(&second).expect("2x2").scale(0.5));
        PseudoProjection::from_parts(op, p.clone(), OrderingRecipe::Unit(index))
    };
    [unit(prod(0, 1, 2), prod(2, 1, 0), 0), unit(prod(2, 0, 1), prod(1, 0, 2), 1), unit(prod(1, 2, 0), prod(0, 2, 1), 2)]
}

/// Weyl-ordered triple entries, canonical order:
/// `⅛(1 + P⃗·Σaᵢm̂ᵢ + Σ_{i<j} aᵢaⱼ m̂ᵢ·m̂ⱼ + ⅓ a₁a₂a₃ Σ_cyclic (P⃗·m̂ᵢ)(m̂ⱼ·m̂ₖ))`.
pub fn triple_weyl_entries(g: &TripleGeometry) -> [f64; 8] {
    let m = &g.m;
    let pm = [g.p.dot(&m[0]), g.p.dot(&m[1]), g.p.dot(&m[2])];
    let d01 = m[0].dot(&m[1]);
    let d02 = m[0].dot(&m[2]);
    let d12 = m[1].dot(&m[2]);
    let cyclic = pm[0] * d12 + pm[1] * d02 + pm[2] * d01;
    let mut out = [0.0; 8];
    for (k, slot) in out.iter_mut().enumerate() {
        let a = [Outcome::BOTH[k >> 2].sign(), Outcome::BOTH[(k >> 1) & 1].sign(), Outcome::BOTH[k & 1].sign()];
        let linear = a[0] * pm[0] + a[1] * pm[1] + a[2] * pm[2];
        let pairs = a[0] * a[1] * d01 + a[0] * a[2] * d02 + a[1] * a[2] * d12;
        let triple = a[0] * a[1] * a[2] * cyclic / 3.0;
        *slot = 0.125 * (1.0 + linear + pairs + triple);
    }
    out
}

pub fn triple_scheme_weyl_closed(g: &TripleGeometry) -> Result<Scheme> {
    Scheme::from_entries(
        g.m.iter().map(|&m| Observable::qubit(m)).collect(),
        triple_weyl_entries(g).to_vec(),
        OrderingRecipe::Weyl,
        density_from_bloch(&g.p),
    )
}

fn check_pnorm(pnorm: f64) -> Result<()> {
    if (0.0..=1.0).contains(&pnorm) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("|P| = {pnorm} not in [0, 1]")))
    }
}

/// `½(|P⃗| cos(θ/2) − cos²(θ/2))` without clamping.
pub fn negativity_special_signed(pnorm: f64, theta: f64) -> f64 {
    let c = (0.5 * theta).cos();
    0.5 * (pnorm * c - c * c)
}

/// Negativity of the pair scheme in the aligned geometry `P⃗ ∥ m̂₁ + m̂₂`.
pub fn negativity_special(pnorm: f64, theta: f64) -> Result<f64> {
    check_pnorm(pnorm)?;
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::OutOfRange(format!("theta = {theta} not in (0, pi)")));
    }
    Ok(negativity_special_signed(pnorm, theta).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegativityMax {
    pub value: f64,
    pub theta_star: f64,
}

/// `𝒩_max = |P⃗|²/8`, reached at `θ* = 2 arccos(|P⃗|/2)`.
pub fn negativity_max(pnorm: f64) -> Result<NegativityMax> {
    check_pnorm(pnorm)?;
    Ok(NegativityMax { value: pnorm * pnorm / 8.0, theta_star: 2.0 * (0.5 * pnorm).acos() })
}

/// Golden-section maximisation of the aligned negativity over `θ ∈ [0, π]`.
/// The signed expression is unimodal in `θ`, so it is maximised before clamping.
pub fn maximize_negativity_numeric(pnorm: f64) -> Result<NegativityMax> {
    check_pnorm(pnorm)?;
    let f = |t: f64| negativity_special_signed(pnorm, t);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0f64, PI);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > 1e-12 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    let theta = 0.5 * (a + b);
    Ok(NegativityMax { value: f(theta).max(0.0), theta_star: theta })
}

/// Smallest `θ` at which the aligned negativity becomes positive, or `None`
/// when it stays zero on `(0, π)`.
pub fn negativity_onset(pnorm: f64) -> Result<Option<f64>> {
    check_pnorm(pnorm)?;
    if pnorm == 0.0 {
        return Ok(None);
    }
    // positive exactly where |P| − cos(θ/2) > 0, which increases with θ
    let g = |t: f64| pnorm - (0.5 * t).cos();
    if g(0.0) >= 0.0 {
        return Ok(Some(0.0));
    }
    let (mut lo, mut hi) = (0.0f64, PI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::HermitianOperator;
    use crate::pseudo::weyl_pseudo_projection;
    use crate::scheme::{build_scheme, marginal, negativity};
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    const PPP: [Outcome; 3] = [Outcome::Plus; 3];

    #[test]
    fn pair_closed_examples() {
        let g = PairGeometry::new(BlochVector::new([0.0, 0.0, 1.0]).unwrap(), Direction::z(), Direction::x());
        let e = pair_entries(&g);
        for (a, b) in e.iter().zip([0.5, 0.5, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        // brute force: Tr(ρ · ½{π_a1, π_a2}) entry by entry
        let rho = density_from_bloch(&g.p);
        for (k, &value) in e.iter().enumerate() {
            let pa = projector_from_direction(&g.m1, Outcome::BOTH[k / 2]);
            let pb = projector_from_direction(&g.m2, Outcome::BOTH[k % 2]);
            let sym = crate::operator::symmetrized_product(&pa, &pb).unwrap();
            assert!((crate::operator::trace_with(&sym, rho.op()).unwrap() - value).abs() < 1e-15);
        }

        let mixed = PairGeometry::new(BlochVector::zero(), Direction::y(), Direction::x());
        assert!(pair_entries(&mixed).iter().all(|&p| (p - 0.25).abs() < 1e-16));

        let aligned = PairGeometry::aligned(1.0, FRAC_PI_2).unwrap();
        let e = pair_entries(&aligned);
        assert!((e[3] - 0.25 * (1.0 - SQRT_2)).abs() < 1e-15);
        let s = pair_scheme_closed(&aligned).unwrap();
        assert!((negativity(&s) - (SQRT_2 - 1.0) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn aligned_geometry_has_requested_angle() {
        let g = PairGeometry::aligned(0.3, 1.1).unwrap();
        assert!((g.theta() - 1.1).abs() < 1e-12);
        let sum = [g.m1.as_array()[0] + g.m2.as_array()[0], g.m1.as_array()[2] + g.m2.as_array()[2]];
        assert!(sum[0].abs() < 1e-15 && sum[1] > 0.0);
    }

    #[test]
    fn orthogonal_pair_radius() {
        let r = pair_classical_radius(PairConstraint::Orthogonal);
        assert!((r - FRAC_1_SQRT_2).abs() < 1e-12);
        let inside = pair_entries(&PairGeometry::aligned(FRAC_1_SQRT_2 - 1e-6, FRAC_PI_2).unwrap());
        assert!(min_of(&inside) >= 0.0);
        let outside = pair_entries(&PairGeometry::aligned(FRAC_1_SQRT_2 + 1e-6, FRAC_PI_2).unwrap());
        assert!(min_of(&outside) < 0.0);
    }

    #[test]
    fn triple_units_examples() {
        let same = TripleGeometry::new(BlochVector::zero(), [Direction::z(); 3]);
        let zp = projector_from_direction(&Direction::z(), Outcome::Plus);
        for u in triple_units(&same, PPP) {
            assert!(u.op().approx_eq(&zp, 1e-15));
        }

        let g = TripleGeometry::new(BlochVector::zero(), coplanar120());
        let units = triple_units(&g, PPP);
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert!(units[i].op().max_diff(units[j].op()) > 1e-3);
            }
        }
        let mean = crate::pseudo::combine(&units, &[1.0 / 3.0; 3]).unwrap();
        let projs: Vec<HermitianOperator> = units[0].generators().to_vec();
        assert!(mean.op().approx_eq(weyl_pseudo_projection(&projs).unwrap().op(), 1e-12));

        // cyclic relabelling of the directions permutes the set of units
        let m = coplanar120();
        let rotated = TripleGeometry::new(BlochVector::zero(), [m[1], m[2], m[0]]);
        let r_units = triple_units(&rotated, PPP);
        for u in &r_units {
            assert!(units.iter().any(|v| v.op().max_diff(u.op()) < 1e-12));
        }
    }

    #[test]
    fn triple_closed_examples() {
        let e = triple_weyl_entries(&TripleGeometry::new(BlochVector::zero(), coplanar120()));
        for (k, p) in e.iter().enumerate() {
            let expected = if k == 0 || k == 7 { -1.0 / 16.0 } else { 3.0 / 16.0 };
            assert!((p - expected).abs() < 1e-15);
        }
        let e = triple_weyl_entries(&TripleGeometry::new(BlochVector::zero(), orthogonal_triple()));
        assert!(e.iter().all(|&p| (p - 0.125).abs() < 1e-16));

        let diag = Direction::new([1.0, 1.0, 1.0]).unwrap();
        let r3 = 1.0 / 3f64.sqrt();
        for (delta, negative) in [(1e-6, true), (-1e-6, false)] {
            let g = TripleGeometry::new(BlochVector::along(&diag, r3 + delta).unwrap(), orthogonal_triple());
            assert_eq!(min_of(&triple_weyl_entries(&g)) < 0.0, negative);
        }
        assert!((triple_classical_radius() - r3).abs() < 1e-12);
    }

    #[test]
    fn triple_closed_matches_matrix_pipeline() {
        let p = BlochVector::new([0.2, -0.5, 0.4]).unwrap();
        let m = [Direction::new([1.0, 0.2, 0.0]).unwrap(), Direction::new([0.3, -1.0, 0.5]).unwrap(), Direction::y()];
        let g = TripleGeometry::new(p, m);
        let closed = triple_scheme_weyl_closed(&g).unwrap();
        let obs: Vec<Observable> = m.iter().map(|&d| Observable::qubit(d)).collect();
        let matrix = build_scheme(&density_from_bloch(&p), &obs, &OrderingRecipe::Weyl).unwrap();
        for (a, b) in closed.entries().iter().zip(matrix.entries()) {
            assert!((a - b).abs() < 1e-12);
        }
        // marginal over the third observable reproduces the pair formula
        let pair = marginal(&closed, &[0, 1]).unwrap();
        let direct = pair_entries(&PairGeometry::new(p, m[0], m[1]));
        for (a, b) in pair.entries().iter().zip(direct) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn negativity_special_examples() {
        let n = negativity_special(1.0, FRAC_PI_2).unwrap();
        assert!((n - (SQRT_2 - 1.0) / 4.0).abs() < 1e-15);
        assert!((n - 0.103553).abs() < 1e-6);
        assert_eq!(negativity_special(0.5, 2.0 * 0.6f64.acos()).unwrap(), 0.0);
        for t in [0.1, 1.0, 2.0, 3.1] {
            assert_eq!(negativity_special(0.0, t).unwrap(), 0.0);
        }
        assert!(negativity_special(1.2, 1.0).is_err());
        assert_eq!(negativity_special(0.5, 0.0).unwrap_err().code(), "out-of-range");
        assert!(negativity_special(0.5, PI).is_err());

        let aligned = pair_scheme_closed(&PairGeometry::aligned(0.8, 1.7).unwrap()).unwrap();
        assert!((negativity(&aligned) - negativity_special(0.8, 1.7).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn negativity_max_examples() {
        let m = negativity_max(1.0).unwrap();
        assert_eq!(m.value, 0.125);
        assert!((m.theta_star - 2.0 * PI / 3.0).abs() < 1e-15);
        assert_eq!(negativity_max(0.0).unwrap().value, 0.0);
        assert_eq!(negativity_max(0.5).unwrap().value, 0.03125);

        let numeric = maximize_negativity_numeric(1.0).unwrap();
        assert!((numeric.value - 0.125).abs() < 1e-12);
        assert!((numeric.theta_star - 2.0 * PI / 3.0).abs() < 1e-6);

        // grid cross-check at |P| = 0.5
        let grid_max = (1..20_000)
            .map(|k| negativity_special(0.5, PI * k as f64 / 20_000.0).unwrap())
            .fold(0.0, f64::max);
        assert!((grid_max - 0.03125).abs() < 1e-7);
    }

    #[test]
    fn onset_matches_half_angle_condition() {
        let onset = negativity_onset(0.9).unwrap().unwrap();
        assert!((onset - 2.0 * 0.9f64.acos()).abs() < 1e-12);
        assert_eq!(negativity_onset(1.0).unwrap(), Some(0.0));
        assert_eq!(negativity_onset(0.0).unwrap(), None);
    }
}
