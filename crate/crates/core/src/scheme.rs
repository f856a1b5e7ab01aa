//! Pseudo-probability schemes: the full table of joint pseudo-probabilities
//! of a set of observables in a given state.
//!
//! Joint outcomes are stored densely in canonical order: row-major over the
//! per-observable outcome indices, with each observable's outcomes in the
//! order of its resolution (`+1` before `−1` for qubit observables).

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::operator::{trace_with, HermitianOperator};
use crate::pseudo::{ordering_classes, pseudo_projection_by_class, OrderingRecipe, MAX_GENERATORS};
use crate::states::{DensityMatrix, Observable};
use crate::tol;

#[derive(Debug, Clone, PartialEq)]
pub struct Scheme {
    observables: Vec<Observable>,
    entries: Vec<f64>,
    recipe: OrderingRecipe,
    state: DensityMatrix,
}

impl Scheme {
    /// Wraps precomputed entries; checks shape, normalisation and the sanity range.
    pub(crate) fn from_entries(
        observables: Vec<Observable>,
        entries: Vec<f64>,
        recipe: OrderingRecipe,
        state: DensityMatrix,
    ) -> Result<Self> {
        let expected: usize = observables.iter().map(Observable::outcome_count).product();
        assert_eq!(entries.len(), expected, "entry count must match the joint outcome space");
        if let Some(&value) = entries.iter().find(|p| !(-1.0..=2.0).contains(*p)) {
            return Err(Error::EntryOutOfBounds { value });
        }
        let total: f64 = entries.iter().sum();
        assert!((total - 1.0).abs() <= tol::CHECK, "scheme entries sum to {total}");
        Ok(Scheme { observables, entries, recipe, state })
    }

    pub fn observables(&self) -> &[Observable] {
        &self.observables
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn recipe(&self) -> &OrderingRecipe {
        &self.recipe
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn outcome_counts(&self) -> Vec<usize> {
        self.observables.iter().map(Observable::outcome_count).collect()
    }

    /// Outcome-index tuple of the `k`-th entry.
    pub fn tuple(&self, k: usize) -> Vec<usize> {
        index_to_tuple(k, &self.outcome_counts())
    }

    /// Canonical position of an outcome-index tuple.
    pub fn index_of(&self, tuple: &[usize]) -> usize {
        tuple_to_index(tuple, &self.outcome_counts())
    }

    /// Entry for an outcome-index tuple.
    pub fn entry(&self, tuple: &[usize]) -> f64 {
        self.entries[self.index_of(tuple)]
    }

    /// Outcome values (eigenvalues) for an outcome-index tuple.
    pub fn outcome_values(&self, tuple: &[usize]) -> Vec<f64> {
        tuple.iter().zip(&self.observables).map(|(&k, o)| o.outcome_value(k)).collect()
    }

    pub fn to_report(&self, eps: f64) -> SchemeReport {
        let observables = self
            .observables
            .iter()
            .map(|o| match o.direction() {
                Some(m) => ObservableReport::Qubit { m: m.as_array() },
                None => ObservableReport::General {
                    outcomes: (0..o.outcome_count()).map(|k| o.outcome_value(k)).collect(),
                },
            })
            .collect();
        let entries = (0..self.len())
            .map(|k| {
                let a = self.outcome_values(&self.tuple(k)).into_iter().map(label_value).collect();
                EntryReport { a, p: self.entries[k] }
            })
            .collect();
        SchemeReport {
            observables,
            recipe: self.recipe.clone(),
            entries,
            negativity: negativity(self),
            classical: classify(self, eps).classical,
        }
    }
}

fn index_to_tuple(mut k: usize, counts: &[usize]) -> Vec<usize> {
    let mut t = vec![0; counts.len()];
    for (slot, &c) in t.iter_mut().zip(counts).rev() {
        *slot = k % c;
        k /= c;
    }
    t
}

fn tuple_to_index(tuple: &[usize], counts: &[usize]) -> usize {
    tuple.iter().zip(counts).fold(0, |acc, (&t, &c)| acc * c + t)
}

/// Integral outcome values print as JSON integers.
fn label_value(v: f64) -> Value {
    if v.fract() == 0.0 && v.abs() < 9.0e15 {
        Value::from(v as i64)
    } else {
        Value::from(v)
    }
}

/// JSON form: `{"observables":[{"m":[..]},...], "recipe":..., "entries":[{"a":[..],"p":..}], "negativity":.., "classical":..}`.
#[derive(Debug, Clone, Serialize)]
pub struct SchemeReport {
    pub observables: Vec<ObservableReport>,
    pub recipe: OrderingRecipe,
    pub entries: Vec<EntryReport>,
    pub negativity: f64,
    pub classical: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ObservableReport {
    Qubit { m: [f64; 3] },
    General { outcomes: Vec<f64> },
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryReport {
    pub a: Vec<Value>,
    pub p: f64,
}

/// `𝒫(a₁,…,a_N) = Tr(ρ Π(a₁,…,a_N))` for every joint outcome, with `Π` built
/// from the outcome projectors under `recipe`. Unit indices and weights in
/// the recipe refer to ordering classes (see [`ordering_classes`]).
pub fn build_scheme(rho: &DensityMatrix, observables: &[Observable], recipe: &OrderingRecipe) -> Result<Scheme> {
    let n = observables.len();
    if n == 0 {
        return Err(Error::TooFewProjectors { n, min: 1 });
    }
    if n > MAX_GENERATORS {
        return Err(Error::OrderingExplosion { n });
    }
    for o in observables {
        if o.dim() != rho.dim() {
            return Err(Error::DimMismatch { left: rho.dim(), right: o.dim() });
        }
    }
    recipe.validate(ordering_classes(n).len())?;

    let counts: Vec<usize> = observables.iter().map(Observable::outcome_count).collect();
    let total: usize = counts.iter().product();
    let entries: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|k| {
            let tuple = index_to_tuple(k, &counts);
            let projs: Vec<HermitianOperator> =
                tuple.iter().zip(observables).map(|(&t, o)| o.projector(t).clone()).collect();
            let pp = pseudo_projection_by_class(&projs, recipe)?;
            trace_with(pp.op(), rho.op())
        })
        .collect::<Result<_>>()?;

    Scheme::from_entries(observables.to_vec(), entries, recipe.clone(), rho.clone())
}

/// Sums out every observable not listed in `keep`.
pub fn marginal(s: &Scheme, keep: &[usize]) -> Result<Scheme> {
    if keep.is_empty() {
        return Err(Error::InvalidSubset("no observables kept".into()));
    }
    let n = s.observables.len();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&k| k >= n) {
        return Err(Error::InvalidSubset(format!("index {bad} out of range for {n} observables")));
    }

    let counts = s.outcome_counts();
    let kept_counts: Vec<usize> = kept.iter().map(|&k| counts[k]).collect();
    let mut entries = vec![0.0; kept_counts.iter().product()];
    for (k, &p) in s.entries.iter().enumerate() {
        let tuple = index_to_tuple(k, &counts);
        let sub: Vec<usize> = kept.iter().map(|&i| tuple[i]).collect();
        entries[tuple_to_index(&sub, &kept_counts)] += p;
    }
    let observables = kept.iter().map(|&k| s.observables[k].clone()).collect();
    Scheme::from_entries(observables, entries, s.recipe.clone(), s.state.clone())
}

/// `𝒩 = ½(Σ|𝒫| − 1)`, clamped at zero.
pub fn negativity(s: &Scheme) -> f64 {
    let abs_sum: f64 = s.entries.iter().map(|p| p.abs()).sum();
    let n = 0.5 * (abs_sum - 1.0);
    assert!(n >= -tol::CHECK, "negativity {n} below zero: scheme is not normalised");
    n.max(0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub classical: bool,
    /// `(outcome-index tuple, value)`, most negative first.
    pub negative_entries: Vec<(Vec<usize>, f64)>,
}

/// A scheme is classical iff no entry is below `-eps`.
pub fn classify(s: &Scheme, eps: f64) -> Classification {
    let mut negative_entries: Vec<(Vec<usize>, f64)> =
        s.entries.iter().enumerate().filter(|(_, &p)| p < -eps).map(|(k, &p)| (s.tuple(k), p)).collect();
    negative_entries.sort_by(|a, b| a.1.total_cmp(&b.1));
    Classification { classical: negative_entries.is_empty(), negative_entries }
}

/// Disjoint blocks of canonical entry indices covering the event space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Normalises block order (each block ascending, blocks by first element)
    /// and checks that the blocks partition `0..n`.
    pub fn new(mut blocks: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidSubset("empty block".into()));
            }
            b.sort_unstable();
            for &e in b.iter() {
                if e >= n || std::mem::replace(&mut seen[e], true) {
                    return Err(Error::InvalidSubset(format!("event {e} repeated or out of range")));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidSubset("blocks do not cover the event space".into()));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Partition { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Restricted-growth string: block number of each event.
    pub fn rgs(&self) -> Vec<usize> {
        let n = self.blocks.iter().map(Vec::len).sum();
        let mut out = vec![0; n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &e in block {
                out[e] = b;
            }
        }
        out
    }

    pub fn block_sums(&self, entries: &[f64]) -> Vec<f64> {
        self.blocks.iter().map(|b| b.iter().map(|&e| entries[e]).sum()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoarseGraining {
    pub partition: Partition,
    pub block_count: usize,
    /// Number of distinct partitions reaching `block_count`.
    pub maximizer_count: u64,
}

pub const MAX_PARTITION_EVENTS: usize = 16;

/// Finest partition of the event space whose blocks all have non-negative
/// total pseudo-probability (to `-1e-10`).
///
/// The maximum block count is found exactly by dynamic programming over
/// subsets. When several partitions reach it, the chosen one minimises, in
/// order: the largest block size, the total pseudo-probability inside merged
/// (non-singleton) blocks, and the restricted-growth string.
pub fn minimal_coarse_graining(s: &Scheme) -> Result<CoarseGraining> {
    let n = s.len();
    if n > MAX_PARTITION_EVENTS {
        return Err(Error::PartitionSearchTooLarge { n });
    }
    let entries = s.entries();
    let full = (1usize << n) - 1;

    let mut sums = vec![0.0f64; full + 1];
    for mask in 1..=full {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + entries[low];
    }
    let feasible = |mask: usize| sums[mask] >= -tol::CLASSICAL_EPS;

    // best[mask]: max feasible blocks partitioning mask (-1 = impossible)
    let mut best = vec![-1i32; full + 1];
    let mut count = vec![0u64; full + 1];
    best[0] = 0;
    count[0] = 1;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut sub = rest;
        loop {
            let block = sub | low;
            let remainder = mask ^ block;
            if feasible(block) && best[remainder] >= 0 {
                let b = best[remainder] + 1;
                if b > best[mask] {
                    best[mask] = b;
                    count[mask] = count[remainder];
                } else if b == best[mask] {
                    count[mask] = count[mask].saturating_add(count[remainder]);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }

    let mut chosen: Option<(SelectionKey, Vec<usize>)> = None;
    let mut stack = Vec::new();
    enumerate_maximizers(full, &best, &feasible, &mut stack, &mut |blocks| {
        let key = SelectionKey::new(blocks, entries, n);
        if chosen.as_ref().is_none_or(|(k, _)| key.better_than(k)) {
            chosen = Some((key, blocks.to_vec()));
        }
    });
    let (_, masks) = chosen.expect("the whole event space is a feasible block");
    let blocks = masks.iter().map(|&m| (0..n).filter(|&e| m >> e & 1 == 1).collect()).collect();
    let partition = Partition::new(blocks, n)?;
    Ok(CoarseGraining { block_count: partition.len(), partition, maximizer_count: count[full] })
}

fn enumerate_maximizers(
    mask: usize,
    best: &[i32],
    feasible: &dyn Fn(usize) -> bool,
    stack: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if mask == 0 {
        visit(stack);
        return;
    }
    let low = mask & mask.wrapping_neg();
    let rest = mask ^ low;
    let mut sub = rest;
    loop {
        let block = sub | low;
        let remainder = mask ^ block;
        if feasible(block) && best[remainder] >= 0 && best[remainder] + 1 == best[mask] {
            stack.push(block);
            enumerate_maximizers(remainder, best, feasible, stack, visit);
            stack.pop();
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
}

struct SelectionKey {
    largest: u32,
    merged_mass: f64,
    rgs: Vec<usize>,
}

impl SelectionKey {
    fn new(blocks: &[usize], entries: &[f64], n: usize) -> Self {
        let mut sorted = blocks.to_vec();
        sorted.sort_by_key(|m| m.trailing_zeros());
        let mut rgs = vec![0; n];
        for (b, m) in sorted.iter().enumerate() {
            for (e, slot) in rgs.iter_mut().enumerate() {
                if m >> e & 1 == 1 {
                    *slot = b;
                }
            }
        }
        let largest = blocks.iter().map(|m| m.count_ones()).max().unwrap_or(0);
        let merged_mass = blocks
            .iter()
            .filter(|m| m.count_ones() > 1)
            .map(|&m| (0..n).filter(|&e| m >> e & 1 == 1).map(|e| entries[e]).sum::<f64>())
            .sum();
        SelectionKey { largest, merged_mass, rgs }
    }

    fn better_than(&self, other: &SelectionKey) -> bool {
        if self.largest != other.largest {
            return self.largest < other.largest;
        }
        if (self.merged_mass - other.merged_mass).abs() > tol::NUM {
            return self.merged_mass < other.merged_mass;
        }
        self.rgs < other.rgs
    }
}
