//! Pseudo-projections: Hermitian representatives of joint-outcome indicators
//! built from ordered products of eigen-projectors.
//!
//! For `N` projectors every ordering `σ` gives a unit pseudo-projection
//! `½(π_σ1 ⋯ π_σN + h.c.)`. An ordering and its reversal give the same
//! operator, so there are at most `N!/2` of them ("ordering classes"). The
//! Weyl-ordered operator is the average over all `N!` orderings.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{eigenvalues_hermitian, symmetrized_product, ComplexMatrix, HermitianOperator};
use crate::tol;

pub const MAX_GENERATORS: usize = 8;

/// How the orderings of a projector list are weighted.
///
/// Serialises as `"weyl"`, `{"unit": k}` or `{"weights": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderingRecipe {
    Weyl,
    Unit(usize),
    Weights(Vec<f64>),
}

impl OrderingRecipe {
    /// Checks the recipe against `count` available unit pseudo-projections.
    pub fn validate(&self, count: usize) -> Result<()> {
        match self {
            OrderingRecipe::Weyl => Ok(()),
            OrderingRecipe::Unit(k) if *k < count => Ok(()),
            OrderingRecipe::Unit(k) => {
                Err(Error::InvalidRecipe(format!("unit index {k} out of range for {count} unit pseudo-projections")))
            }
            OrderingRecipe::Weights(w) => validate_weights(w, count),
        }
    }
}

fn validate_weights(w: &[f64], count: usize) -> Result<()> {
    if w.len() != count {
        return Err(Error::InvalidConvexWeights(format!("expected {count} weights, got {}", w.len())));
    }
    if let Some(bad) = w.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::InvalidConvexWeights(format!("weight {bad} is negative or not finite")));
    }
    let sum: f64 = w.iter().sum();
    if (sum - 1.0).abs() > tol::NUM {
        return Err(Error::InvalidConvexWeights(format!("weights sum to {sum}, not 1")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PseudoProjection {
    op: HermitianOperator,
    generators: Vec<HermitianOperator>,
    recipe: OrderingRecipe,
}

impl PseudoProjection {
    pub(crate) fn from_parts(op: HermitianOperator, generators: Vec<HermitianOperator>, recipe: OrderingRecipe) -> Self {
        PseudoProjection { op, generators, recipe }
    }

    /// A plain projector viewed as a single-generator pseudo-projection.
    pub fn from_projector(p: HermitianOperator) -> Result<Self> {
        check_projectors(std::slice::from_ref(&p), 1)?;
        Ok(PseudoProjection { op: p.clone(), generators: vec![p], recipe: OrderingRecipe::Weyl })
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn generators(&self) -> &[HermitianOperator] {
        &self.generators
    }

    pub fn recipe(&self) -> &OrderingRecipe {
        &self.recipe
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }
}

fn check_projectors(projs: &[HermitianOperator], min: usize) -> Result<()> {
    let n = projs.len();
    if n < min {
        return Err(Error::TooFewProjectors { n, min });
    }
    if n > MAX_GENERATORS {
        return Err(Error::OrderingExplosion { n });
    }
    let dim = projs[0].dim();
    for p in projs {
        if p.dim() != dim {
            return Err(Error::DimMismatch { left: dim, right: p.dim() });
        }
        let residual = p.idempotency_residual();
        if residual > tol::CHECK {
            return Err(Error::NotAProjector { residual });
        }
    }
    Ok(())
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = vec![perm.clone()];
    loop {
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).expect("successor exists");
        perm.swap(i - 1, j);
        perm[i..].reverse();
        out.push(perm.clone());
    }
}

/// One representative per {ordering, reversed ordering} pair, in lexicographic
/// order of the first member seen. There are `n!/2` for `n ≥ 2` and one for `n = 1`.
pub fn ordering_classes(n: usize) -> Vec<Vec<usize>> {
    permutations(n)
        .into_iter()
        .filter(|p| {
            let rev: Vec<usize> = p.iter().rev().copied().collect();
            *p <= rev
        })
        .collect()
}

/// `½(Π_σ + Π_σ†)` for the product taken in the order `perm`.
pub fn hermitized_ordering(projs: &[HermitianOperator], perm: &[usize]) -> Result<HermitianOperator> {
    let mut prod: ComplexMatrix = projs[perm[0]].matrix().clone();
    for &k in &perm[1..] {
        prod = prod.try_mul(projs[k].matrix())?;
    }
    Ok(HermitianOperator::hermitize(prod))
}

/// Distinct unit pseudo-projections of `projs`, in order of their first
/// generating permutation.
pub fn unit_pseudo_projections(projs: &[HermitianOperator]) -> Result<Vec<PseudoProjection>> {
    check_projectors(projs, 2)?;
    let ordered: Vec<HermitianOperator> = permutations(projs.len())
        .par_iter()
        .map(|perm| hermitized_ordering(projs, perm))
        .collect::<Result<_>>()?;

    let mut distinct: Vec<HermitianOperator> = Vec::new();
    for op in ordered {
        if !distinct.iter().any(|d| d.max_diff(&op) <= tol::DEDUP) {
            distinct.push(op);
        }
    }
    Ok(distinct
        .into_iter()
        .enumerate()
        .map(|(k, op)| PseudoProjection { op, generators: projs.to_vec(), recipe: OrderingRecipe::Unit(k) })
        .collect())
}

/// Average of the hermitized products over all `N!` orderings.
pub fn weyl_pseudo_projection(projs: &[HermitianOperator]) -> Result<PseudoProjection> {
    check_projectors(projs, 2)?;
    weyl_unchecked(projs)
}

fn weyl_unchecked(projs: &[HermitianOperator]) -> Result<PseudoProjection> {
    if projs.len() == 2 {
        let op = symmetrized_product(&projs[0], &projs[1])?;
        return Ok(PseudoProjection { op, generators: projs.to_vec(), recipe: OrderingRecipe::Weyl });
    }
    let perms = permutations(projs.len());
    let terms: Vec<HermitianOperator> =
        perms.par_iter().map(|perm| hermitized_ordering(projs, perm)).collect::<Result<_>>()?;
    let mut sum = ComplexMatrix::zeros(projs[0].dim());
    for t in &terms {
        sum = sum.try_add(t.matrix())?;
    }
    let op = HermitianOperator::hermitize(sum.scale(1.0 / perms.len() as f64));
    Ok(PseudoProjection { op, generators: projs.to_vec(), recipe: OrderingRecipe::Weyl })
}

/// Pseudo-projection for `projs` under `recipe`, where unit indices and
/// weights refer to [`ordering_classes`] rather than to deduplicated values.
/// This keeps a recipe meaningful across every outcome tuple of a scheme,
/// including tuples whose projectors happen to commute. Accepts `N = 1`.
pub fn pseudo_projection_by_class(projs: &[HermitianOperator], recipe: &OrderingRecipe) -> Result<PseudoProjection> {
    check_projectors(projs, 1)?;
    let n = projs.len();
    let classes = ordering_classes(n);
    recipe.validate(classes.len())?;
    if n == 1 {
        return Ok(PseudoProjection { op: projs[0].clone(), generators: projs.to_vec(), recipe: recipe.clone() });
    }
    let op = match recipe {
        OrderingRecipe::Weyl => return weyl_unchecked(projs),
        OrderingRecipe::Unit(k) => hermitized_ordering(projs, &classes[*k])?,
        OrderingRecipe::Weights(w) => {
            let mut sum = ComplexMatrix::zeros(projs[0].dim());
            for (perm, &wk) in classes.iter().zip(w) {
                if wk != 0.0 {
                    sum = sum.try_add(&hermitized_ordering(projs, perm)?.matrix().scale(wk))?;
                }
            }
            HermitianOperator::hermitize(sum)
        }
    };
    Ok(PseudoProjection { op, generators: projs.to_vec(), recipe: recipe.clone() })
}

/// Convex combination `Σ wᵢ Πᵢ` of pseudo-projections over the same generators.
pub fn combine(units: &[PseudoProjection], weights: &[f64]) -> Result<PseudoProjection> {
    if units.is_empty() {
        return Err(Error::InvalidConvexWeights("no pseudo-projections to combine".into()));
    }
    validate_weights(weights, units.len())?;
    let dim = units[0].dim();
    let mut sum = ComplexMatrix::zeros(dim);
    for (u, &w) in units.iter().zip(weights) {
        sum = sum.try_add(&u.op.matrix().scale(w))?;
    }
    Ok(PseudoProjection {
        op: HermitianOperator::hermitize(sum),
        generators: units[0].generators.clone(),
        recipe: OrderingRecipe::Weights(weights.to_vec()),
    })
}

/// OR of two outcomes: `π_A + π_B − ½{π_A, π_B}`.
pub fn disjunction_operator(pa: &HermitianOperator, pb: &HermitianOperator) -> Result<HermitianOperator> {
    check_projectors(&[pa.clone(), pb.clone()], 2)?;
    let both = symmetrized_product(pa, pb)?;
    pa.try_add(pb)?.try_sub(&both)
}

/// NOT of a joint outcome: `1 − Π`.
pub fn negation_operator(pp: &PseudoProjection) -> HermitianOperator {
    &HermitianOperator::identity(pp.dim()) - pp.op()
}

/// Max-norm of `(1 − Π)Π`. Vanishes only when `Π` is a true projection; reported, never corrected.
pub fn negation_residual(pp: &PseudoProjection) -> f64 {
    let n = negation_operator(pp);
    n.matrix().try_mul(pp.op().matrix()).expect("same dimension").max_abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralAudit {
    pub min_eig: f64,
    pub commutator_norm: f64,
    pub is_true_projection: bool,
}

pub fn spectral_audit(pp: &PseudoProjection) -> Result<SpectralAudit> {
    let min_eig = eigenvalues_hermitian(pp.op())?.min();
    let gens = pp.generators();
    let mut commutator_norm = 0.0f64;
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            commutator_norm = commutator_norm.max(gens[i].commutator_norm(&gens[j])?);
        }
    }
    Ok(SpectralAudit { min_eig, commutator_norm, is_true_projection: pp.op().is_projector(tol::CHECK) })
}
