//! Successive minima of positive definite forms.
//!
//! The form is LLL-reduced first, then the ball of the current radius is
//! enumerated completely (see [`enumerate`] for how floating point is kept
//! out of the certificate). The radius starts at the smallest diagonal entry
//! of the reduced Gram and doubles until enough independent vectors turn up;
//! it is capped at the `i`-th smallest reduced diagonal entry, where `i`
//! independent vectors are guaranteed to exist.

pub mod enumerate;
pub mod lll;
pub mod oracle;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{QForm, FORMAT_VERSION};
use crate::linalg::{canonical_sign, int_serde, IntVector, RankTracker};
use crate::scalars::{Rational, Scalar};

pub use lll::{default_delta, is_lll_reduced, lll_reduce, LllOutcome};
pub use oracle::brute_force_minima;

use enumerate::{ExactEvaluator, Pruning};

/// Knobs shared by everything that enumerates.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Maximum number of search-tree nodes per enumeration.
    pub budget: u64,
    /// Worker threads; 1 runs on the calling thread.
    pub workers: usize,
    pub delta: Rational,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: 10_000_000_000, workers: 1, delta: default_delta() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimaReport {
    pub format_version: u32,
    /// `λ₁², …, λ_i²`.
    pub minima_squared: Vec<Scalar>,
    /// Linearly independent vectors attaining the minima.
    #[serde(
        serialize_with = "int_serde::serialize_vecs",
        deserialize_with = "int_serde::deserialize_vecs"
    )]
    pub witnesses: Vec<IntVector>,
    /// Radius of the last (exhaustively searched) ball.
    pub enumeration_radius: Scalar,
    pub node_count: u64,
}

impl MinimaReport {
    pub fn lambda1_squared(&self) -> &Scalar {
        &self.minima_squared[0]
    }
}

/// A vector together with its exact form value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortVector {
    #[serde(with = "int_serde")]
    pub vector: IntVector,
    pub norm: Scalar,
}

/// Sorts by value, then by the canonical (first nonzero coordinate
/// positive) representative in lexicographic order.
fn sort_short(v: &mut [ShortVector]) {
    v.sort_by(|a, b| match a.norm.compare(&b.norm).expect("single radicand") {
        Ordering::Equal => a.vector.cmp(&b.vector),
        o => o,
    });
}

struct Prepared {
    lll: LllOutcome,
    pruning: Pruning,
    evaluator: ExactEvaluator,
}

impl Prepared {
    fn new(f: &QForm, opts: &SearchOptions) -> Result<Self> {
        let lll = lll_reduce(f, &opts.delta)?;
        let pruning = Pruning::new(&lll.reduced);
        let evaluator = ExactEvaluator::new(&lll.reduced);
        Ok(Prepared { lll, pruning, evaluator })
    }

    /// Every vector (up to sign) of value at most `radius`, in original
    /// coordinates, sorted.
    fn ball(&self, radius: &Scalar, opts: &SearchOptions) -> Result<(Vec<ShortVector>, u64)> {
        let e = enumerate::enumerate(&self.pruning, &self.evaluator, radius, opts.budget, opts.workers)?;
        let u = &self.lll.change;
        let mut out: Vec<ShortVector> = e
            .vectors
            .into_iter()
            .map(|(y, norm)| {
                let y: IntVector = y.into_iter().map(Into::into).collect();
                ShortVector { vector: canonical_sign(u.mul_vec(&y)), norm }
            })
            .collect();
        sort_short(&mut out);
        Ok((out, e.nodes))
    }
}

/// Exact `λ₁², …, λ_count²` with independent witnesses.
pub fn successive_minima(f: &QForm, count: usize, opts: &SearchOptions) -> Result<MinimaReport> {
    if count == 0 || count > f.dim() {
        return Err(Error::InvalidParameter(format!(
            "count must lie in 1..={}, got {count}",
            f.dim()
        )));
    }
    let prep = Prepared::new(f, opts)?;
    let mut diag: Vec<Scalar> = (0..f.dim()).map(|i| prep.lll.reduced.entry(i, i).clone()).collect();
    diag.sort_by(|a, b| a.compare(b).expect("single radicand"));
    let cap = diag[count - 1].clone();
    let mut radius = diag[0].clone();
    let mut nodes = 0u64;
    loop {
        let (vectors, n) = prep.ball(&radius, opts)?;
        nodes += n;
        let mut tracker = RankTracker::new();
        let mut minima = Vec::new();
        let mut witnesses = Vec::new();
        for sv in vectors {
            if tracker.insert(&sv.vector) {
                minima.push(sv.norm);
                witnesses.push(sv.vector);
                if minima.len() == count {
                    break;
                }
            }
        }
        if minima.len() == count {
            return Ok(MinimaReport {
                format_version: FORMAT_VERSION,
                minima_squared: minima,
                witnesses,
                enumeration_radius: radius,
                node_count: nodes,
            });
        }
        if radius >= cap {
            return Err(Error::Verification(format!(
                "ball of radius {radius} holds fewer than {count} independent vectors"
            )));
        }
        radius = (&radius * &Scalar::int(2)).min(cap.clone());
    }
}

/// All nonzero vectors (up to sign) with value at most `bound`, sorted by
/// value and then lexicographically.
pub fn shortest_vectors(f: &QForm, bound: &Scalar, opts: &SearchOptions) -> Result<Vec<ShortVector>> {
    let sig = f.signature();
    if !sig.is_positive_definite() {
        return Err(Error::NotPositiveDefinite(sig));
    }
    if bound.sign() <= 0 {
        return Ok(Vec::new());
    }
    Ok(Prepared::new(f, opts)?.ball(bound, opts)?.0)
}

/// For a unimodular positive definite form of dimension `b ≥ 2`, checks
/// `λ₁² < (2/3)·b`. Other forms pass vacuously.
pub fn upper_bound_tripwire(f: &QForm, lambda1_squared: &Scalar) -> Result<()> {
    let b = f.dim();
    if b < 2 || !f.is_positive_definite() || f.determinant().abs() != Scalar::one() {
        return Ok(());
    }
    let limit = Scalar::ratio(2 * b as i64, 3);
    if *lambda1_squared < limit {
        Ok(())
    } else {
        Err(Error::Verification(format!(
            "λ₁² = {lambda1_squared} violates λ₁² < {limit} for a unimodular form of rank {b}"
        )))
    }
}
