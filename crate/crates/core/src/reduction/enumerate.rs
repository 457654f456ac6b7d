//! Fincke–Pohst enumeration with floating-point guidance and exact
//! acceptance.
//!
//! The search tree is pruned with `f64` Gram–Schmidt data, but the pruning
//! radius is inflated by a relative slack of `2⁻²⁰` plus an absolute slack
//! of `2⁻³⁰`. The `f64` coefficients come from the exact decomposition
//! (each correctly rounded), and on an LLL-reduced basis every partial sum is
//! a short sum of terms bounded by the radius, so accumulated rounding stays
//! many orders of magnitude below the slack. Every leaf that survives is then
//! evaluated exactly and kept only if its exact value is within the radius.
//! The float side can therefore only produce extra candidates, never lose
//! one.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::QForm;
use crate::scalars::{Rational, Scalar};

use super::lll::gram_schmidt;

const RELATIVE_SLACK: f64 = 1.0 / (1u64 << 20) as f64;
const ABSOLUTE_SLACK: f64 = 1.0 / (1u64 << 30) as f64;

/// Exact evaluation of a (possibly `Q(√d)`-valued) Gram on integer vectors,
/// with the Gram scaled to integer matrices `A + B·√d` over a common
/// denominator.
#[derive(Clone, Debug)]
pub(crate) struct ExactEvaluator {
    den: BigInt,
    rational: IntPart,
    irrational: Option<(IntPart, u64)>,
}

#[derive(Clone, Debug)]
enum IntPart {
    Small(Vec<Vec<i64>>),
    Big(Vec<Vec<BigInt>>),
}

impl IntPart {
    fn new(m: Vec<Vec<BigInt>>) -> Self {
        let small: Option<Vec<Vec<i64>>> =
            m.iter().map(|r| r.iter().map(|x| x.to_i64()).collect()).collect();
        match small {
            Some(s) => IntPart::Small(s),
            None => IntPart::Big(m),
        }
    }

    fn eval(&self, y: &[i64]) -> BigInt {
        match self {
            IntPart::Small(a) => eval_small(a, y).unwrap_or_else(|| eval_big_i64(a, y)),
            IntPart::Big(a) => {
                let mut acc = BigInt::from(0);
                for (i, row) in a.iter().enumerate() {
                    if y[i] == 0 {
                        continue;
                    }
                    let mut s = BigInt::from(0);
                    for (j, x) in row.iter().enumerate() {
                        if y[j] != 0 {
                            s += x * y[j];
                        }
                    }
                    acc += s * y[i];
                }
                acc
            }
        }
    }
}

fn eval_small(a: &[Vec<i64>], y: &[i64]) -> Option<BigInt> {
    let mut acc: i128 = 0;
    for (i, row) in a.iter().enumerate() {
        if y[i] == 0 {
            continue;
        }
        let mut s: i128 = 0;
        for (j, &x) in row.iter().enumerate() {
            if y[j] != 0 {
                s = s.checked_add((x as i128).checked_mul(y[j] as i128)?)?;
            }
        }
        acc = acc.checked_add(s.checked_mul(y[i] as i128)?)?;
    }
    Some(BigInt::from(acc))
}

fn eval_big_i64(a: &[Vec<i64>], y: &[i64]) -> BigInt {
    let mut acc = BigInt::from(0);
    for (i, row) in a.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            acc += BigInt::from(x) * y[i] * y[j];
        }
    }
    acc
}

impl ExactEvaluator {
    pub(crate) fn new(f: &QForm) -> Self {
        let n = f.dim();
        let mut rats: Vec<&Rational> = Vec::new();
        let mut parts = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let (a, b) = match f.entry(i, j) {
                    Scalar::Rational(r) => (r.clone(), Rational::zero()),
                    Scalar::Quad(q) => (q.a.clone(), q.b.clone()),
                };
                parts.push((a, b));
            }
        }
        for (a, b) in &parts {
            rats.push(a);
            rats.push(b);
        }
        let den = crate::scalars::common_denominator(rats);
        let scale = |r: &Rational| r.numer() * (&den / r.denom());
        let a: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| scale(&parts[i * n + j].0)).collect()).collect();
        let irrational = f.radicand().map(|d| {
            let b: Vec<Vec<BigInt>> =
                (0..n).map(|i| (0..n).map(|j| scale(&parts[i * n + j].1)).collect()).collect();
            (IntPart::new(b), d)
        });
        ExactEvaluator { den, rational: IntPart::new(a), irrational }
    }

    pub(crate) fn value(&self, y: &[i64]) -> Scalar {
        let den = Rational::from_integer(self.den.clone());
        let a = Scalar::from(Rational::from_integer(self.rational.eval(y)) / &den);
        match &self.irrational {
            None => a,
            Some((b, d)) => {
                let b = Rational::from_integer(b.eval(y)) / &den;
                a + Scalar::from(b) * Scalar::sqrt_int(*d)
            }
        }
    }
}

/// Float data for the search tree, derived from the exact decomposition
/// `q(y) = Σ_i B_i·(y_i + Σ_{j>i} μ_ji·y_j)²`.
#[derive(Clone, Debug)]
pub(crate) struct Pruning {
    // mu[j][i] for j > i
    mu: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl Pruning {
    pub(crate) fn new(reduced: &QForm) -> Self {
        let (mu, b) = gram_schmidt(reduced);
        Pruning {
            mu: mu.iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect(),
            b: b.iter().map(Scalar::to_f64).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Enumeration {
    /// Vectors up to sign (highest nonzero coordinate positive), in the
    /// coordinates of the reduced basis, with exact values.
    pub vectors: Vec<(Vec<i64>, Scalar)>,
    pub nodes: u64,
}

struct Search<'a> {
    pruning: &'a Pruning,
    evaluator: &'a ExactEvaluator,
    radius: &'a Scalar,
    radius_f: f64,
    budget: u64,
    nodes: &'a AtomicU64,
    exhausted: &'a AtomicBool,
}

impl Search<'_> {
    fn tick(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.budget {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn interval(&self, level: usize, y: &[i64], partial: f64) -> Option<(i64, i64, f64)> {
        let n = y.len();
        let mut c = 0.0;
        for j in level + 1..n {
            c -= self.pruning.mu[j][level] * y[j] as f64;
        }
        let rem = self.radius_f - partial;
        if rem < 0.0 {
            return None;
        }
        let w = (rem / self.pruning.b[level]).sqrt() + ABSOLUTE_SLACK;
        let lo = (c - w).ceil();
        let hi = (c + w).floor();
        if lo > hi {
            return None;
        }
        Some((lo as i64, hi as i64, c))
    }

    fn descend(
        &self,
        level: usize,
        y: &mut [i64],
        partial: f64,
        upper_zero: bool,
        out: &mut Vec<(Vec<i64>, Scalar)>,
    ) {
        let Some((mut lo, hi, c)) = self.interval(level, y, partial) else {
            return;
        };
        if upper_zero {
            lo = lo.max(0);
        }
        for v in lo..=hi {
            if !self.tick() {
                return;
            }
            let t = v as f64 - c;
            let p = partial + self.pruning.b[level] * t * t;
            if p > self.radius_f {
                continue;
            }
            y[level] = v;
            if level == 0 {
                if upper_zero && v == 0 {
                    continue;
                }
                let value = self.evaluator.value(y);
                if value <= *self.radius {
                    out.push((y.to_vec(), value));
                }
            } else {
                self.descend(level - 1, y, p, upper_zero && v == 0, out);
            }
            if self.exhausted.load(Ordering::Relaxed) {
                break;
            }
        }
        y[level] = 0;
    }
}

/// All nonzero `y` (up to sign) with `q(y) ≤ radius`, where `q` is the
/// reduced Gram that `pruning` and `evaluator` were built from.
pub(crate) fn enumerate(
    pruning: &Pruning,
    evaluator: &ExactEvaluator,
    radius: &Scalar,
    budget: u64,
    workers: usize,
) -> Result<Enumeration> {
    let n = pruning.b.len();
    if radius.sign() <= 0 || n == 0 {
        return Ok(Enumeration { vectors: Vec::new(), nodes: 0 });
    }
    let r = radius.to_f64();
    let nodes = AtomicU64::new(0);
    let exhausted = AtomicBool::new(false);
    let search = Search {
        pruning,
        evaluator,
        radius,
        radius_f: r * (1.0 + RELATIVE_SLACK) + ABSOLUTE_SLACK,
        budget,
        nodes: &nodes,
        exhausted: &exhausted,
    };
    let top = n - 1;
    let zeros = vec![0i64; n];
    let Some((lo, hi, c)) = search.interval(top, &zeros, 0.0) else {
        return Ok(Enumeration { vectors: Vec::new(), nodes: 0 });
    };
    let lo = lo.max(0);
    let run_top = |v: i64| -> Vec<(Vec<i64>, Scalar)> {
        let mut out = Vec::new();
        if !search.tick() {
            return out;
        }
        let t = v as f64 - c;
        let p = search.pruning.b[top] * t * t;
        if p > search.radius_f {
            return out;
        }
        let mut y = vec![0i64; n];
        y[top] = v;
        if top == 0 {
            if v != 0 {
                let value = evaluator.value(&y);
                if value <= *radius {
                    out.push((y, value));
                }
            }
        } else {
            search.descend(top - 1, &mut y, p, v == 0, &mut out);
        }
        out
    };
    let chunks: Vec<Vec<(Vec<i64>, Scalar)>> = if workers > 1 && hi > lo {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
        pool.install(|| (lo..=hi).into_par_iter().map(run_top).collect())
    } else {
        (lo..=hi).map(run_top).collect()
    };
    let total = nodes.load(Ordering::Relaxed);
    if exhausted.load(Ordering::Relaxed) {
        return Err(Error::BudgetExceeded { nodes: total.min(budget) });
    }
    Ok(Enumeration { vectors: chunks.into_iter().flatten().collect(), nodes: total })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(f: &QForm, r: i64) -> Enumeration {
        enumerate(&Pruning::new(f), &ExactEvaluator::new(f), &Scalar::int(r), u64::MAX, 1).unwrap()
    }

    #[test]
    fn identity_shell_counts() {
        let f = QForm::from_int_rows(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(run(&f, 1).vectors.len(), 3);
        // norm 1: 3, norm 2: 6 (up to sign)
        assert_eq!(run(&f, 2).vectors.len(), 9);
        assert!(run(&f, 2).vectors.iter().all(|(y, v)| {
            let s: i64 = y.iter().map(|x| x * x).sum();
            Scalar::int(s) == *v
        }));
    }

    #[test]
    fn parallel_matches_serial() {
        let f = QForm::from_int_rows(&[vec![3, 1, 0], vec![1, 4, -1], vec![0, -1, 5]]).unwrap();
        let p = Pruning::new(&f);
        let e = ExactEvaluator::new(&f);
        let a = enumerate(&p, &e, &Scalar::int(20), u64::MAX, 1).unwrap();
        let b = enumerate(&p, &e, &Scalar::int(20), u64::MAX, 4).unwrap();
        assert_eq!(a.vectors, b.vectors);
        assert_eq!(a.nodes, b.nodes);
    }

    #[test]
    fn budget_is_enforced() {
        let f = QForm::from_int_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        let err = enumerate(&Pruning::new(&f), &ExactEvaluator::new(&f), &Scalar::int(100), 5, 1);
        assert!(matches!(err, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn evaluator_handles_quadratic_entries() {
        let s2 = Scalar::sqrt_int(2);
        let f = QForm::new(vec![
            vec![Scalar::int(2), s2.clone()],
            vec![s2.clone(), Scalar::ratio(7, 3)],
        ])
        .unwrap();
        let e = ExactEvaluator::new(&f);
        let y = [2i64, -1];
        let expect = f.evaluate(&[Scalar::int(2), Scalar::int(-1)]).unwrap();
        assert_eq!(e.value(&y), expect);
    }
}
