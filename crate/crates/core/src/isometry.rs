//! Isometry testing for definite lattices, and random automorphisms of
//! `I_{n,1}`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{sign_reverse_int, standard_form, QForm};
use crate::lattice::classify;
use crate::linalg::{int_serde, IntMatrix, IntVector};
use crate::reduction::{lll_reduce, shortest_vectors, successive_minima, SearchOptions};
use crate::scalars::{Rational, Scalar};

/// `map` satisfies `mapᵀ·source·map = target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryWitness {
    pub map: IntMatrix,
    pub source: QForm,
    pub target: QForm,
}

impl IsometryWitness {
    pub fn verify(&self) -> bool {
        self.map.is_unimodular()
            && self.source.congruent(&self.map).is_ok_and(|g| g == self.target)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum IsometryOutcome {
    Isometric(IsometryWitness),
    /// A cheap invariant differs, or the search was exhaustive.
    NotIsometric { reason: String },
    /// The node budget ran out before the search finished.
    Inconclusive { nodes: u64 },
}

impl IsometryOutcome {
    pub fn witness(&self) -> Option<&IsometryWitness> {
        match self {
            IsometryOutcome::Isometric(w) => Some(w),
            _ => None,
        }
    }
}

const MAX_RANK: usize = 24;

fn not_isometric(reason: impl Into<String>) -> Result<IsometryOutcome> {
    Ok(IsometryOutcome::NotIsometric { reason: reason.into() })
}

/// Decides whether two positive definite integral forms are congruent over
/// `ℤ`.
///
/// After cheap invariants (dimension, determinant, parity, minimum, short
/// vector counts), the LLL-reduced basis of `b` is matched vector by vector
/// against short vectors of `a` with the same norms and inner products.
pub fn is_isometric(a: &QForm, b: &QForm, opts: &SearchOptions) -> Result<IsometryOutcome> {
    for f in [a, b] {
        let sig = f.signature();
        if !sig.is_positive_definite() {
            return Err(Error::NotPositiveDefinite(sig));
        }
        if !f.is_integral() {
            return Err(Error::NotIntegral);
        }
    }
    if a.dim() != b.dim() {
        return not_isometric(format!("dimensions differ: {} vs {}", a.dim(), b.dim()));
    }
    let n = a.dim();
    if n > MAX_RANK {
        return Err(Error::InvalidParameter(format!("isometry search is limited to rank {MAX_RANK}")));
    }
    if a.determinant() != b.determinant() {
        return not_isometric(format!("determinants differ: {} vs {}", a.determinant(), b.determinant()));
    }
    let (ca, cb) = (classify(a), classify(b));
    if ca.parity != cb.parity {
        return not_isometric(format!("parity differs: {:?} vs {:?}", ca.parity, cb.parity));
    }
    let ma = successive_minima(a, 1, opts)?;
    let mb = successive_minima(b, 1, opts)?;
    if ma.minima_squared != mb.minima_squared {
        return not_isometric(format!(
            "minima differ: {} vs {}",
            ma.minima_squared[0], mb.minima_squared[0]
        ));
    }

    let red = lll_reduce(b, &opts.delta)?;
    let target = red.reduced.integer_gram().expect("integral");
    let target: Vec<Vec<i64>> = small(&target)?;
    let top = target.iter().enumerate().map(|(i, r)| r[i]).max().expect("n ≥ 1");
    let bound = Scalar::int(top);
    let short_a = shortest_vectors(a, &bound, opts)?;
    let short_b = shortest_vectors(b, &bound, opts)?;
    let norms = |s: &[crate::reduction::ShortVector]| s.iter().map(|v| v.norm.clone()).collect::<Vec<_>>();
    if norms(&short_a) != norms(&short_b) {
        return not_isometric(format!("short vector counts differ below norm {top}"));
    }

    let ga = small(&a.integer_gram().expect("integral"))?;
    let mut candidates: Vec<Candidate> = Vec::new();
    for sv in &short_a {
        let x: Vec<i64> = sv.vector.iter().map(|c| c.to_i64().expect("small coordinates")).collect();
        let norm = sv.norm.as_rational().and_then(|r| r.numer().to_i64()).expect("integral norm");
        for sign in [1i64, -1] {
            let x: Vec<i64> = x.iter().map(|c| sign * c).collect();
            let ax = (0..n).map(|i| (0..n).map(|j| ga[i][j] * x[j]).sum()).collect();
            candidates.push(Candidate { x, ax, norm });
        }
    }
    let pools: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..candidates.len()).filter(|&c| candidates[c].norm == target[i][i]).collect())
        .collect();

    let mut search = Backtrack {
        candidates: &candidates,
        pools: &pools,
        target: &target,
        chosen: Vec::with_capacity(n),
        nodes: 0,
        budget: opts.budget,
    };
    match search.run() {
        Some(true) => {
            let cols: Vec<IntVector> = search
                .chosen
                .iter()
                .map(|&c| candidates[c].x.iter().map(|&v| BigInt::from(v)).collect())
                .collect();
            let x = IntMatrix::from_columns(&cols);
            let map = x.mul(&unimodular_inverse(&red.change));
            let witness = IsometryWitness { map, source: a.clone(), target: b.clone() };
            if !witness.verify() {
                return Err(Error::Verification("isometry witness fails its congruence".into()));
            }
            Ok(IsometryOutcome::Isometric(witness))
        }
        Some(false) => not_isometric("exhaustive search found no isometry"),
        None => Ok(IsometryOutcome::Inconclusive { nodes: search.nodes }),
    }
}

fn small(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    m.to_i64_rows().ok_or_else(|| Error::InvalidParameter("Gram entries too large".into()))
}

struct Candidate {
    x: Vec<i64>,
    ax: Vec<i64>,
    norm: i64,
}

struct Backtrack<'a> {
    candidates: &'a [Candidate],
    pools: &'a [Vec<usize>],
    target: &'a [Vec<i64>],
    chosen: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Backtrack<'_> {
    /// `Some(found)` when the search finished, `None` when the budget ran out.
    fn run(&mut self) -> Option<bool> {
        let i = self.chosen.len();
        if i == self.target.len() {
            return Some(true);
        }
        for &c in &self.pools[i] {
            // The first image only needs one sign: −1 is always an isometry.
            if i == 0 && self.candidates[c].x.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            let y = &self.candidates[c].x;
            let fits = self.chosen.iter().enumerate().all(|(j, &p)| {
                let ip: i64 = self.candidates[p].ax.iter().zip(y).map(|(a, b)| a * b).sum();
                ip == self.target[j][i]
            });
            if !fits {
                continue;
            }
            self.chosen.push(c);
            match self.run() {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
            self.chosen.pop();
        }
        Some(false)
    }
}

/// Inverse of an integer matrix with determinant `±1`.
pub(crate) fn unimodular_inverse(m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = (0..n).map(|j| Rational::from_integer(m[(i, j)].clone())).collect();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("invertible");
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot) {
                    *x = &*x - &(&f * y);
                }
            }
        }
    }
    let rows = a
        .into_iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|x| {
                    assert!(x.is_integer(), "matrix is not unimodular");
                    x.numer().clone()
                })
                .collect()
        })
        .collect();
    IntMatrix::from_rows(rows)
}

/// One generator of the automorphism words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    /// Swap two of the first `n` (positive) coordinates.
    Transposition { i: usize, j: usize },
    SignFlip { i: usize },
    /// `x ↦ x − 2·Q(x, r)/q(r)·r` with `q(r) ∈ {±1, ±2}`.
    Reflection {
        #[serde(with = "int_serde")]
        r: IntVector,
    },
}

impl Generator {
    /// The generator as a matrix acting on `ℤⁿ⁺¹`.
    pub fn matrix(&self, n: usize) -> Result<IntMatrix> {
        let dim = n + 1;
        let bad = |what: String| Err(Error::InvalidParameter(format!("{what} is not a generator of Aut(I_{{{n},1}})")));
        let mut m = IntMatrix::identity(dim);
        match self {
            Generator::Transposition { i, j } => {
                if *i >= n || *j >= n || i == j {
                    return bad(format!("transposition ({i} {j})"));
                }
                m[(*i, *i)] = BigInt::zero();
                m[(*j, *j)] = BigInt::zero();
                m[(*i, *j)] = BigInt::one();
                m[(*j, *i)] = BigInt::one();
            }
            Generator::SignFlip { i } => {
                if *i >= dim {
                    return bad(format!("sign flip {i}"));
                }
                m[(*i, *i)] = BigInt::from(-1);
            }
            Generator::Reflection { r } => {
                let g = lorentz_signs(n);
                if r.len() != dim {
                    return bad("reflection of the wrong length".into());
                }
                let qr: BigInt = r.iter().zip(&g).map(|(x, s)| x * x * s).sum();
                if !matches!(qr.abs().to_u8(), Some(1 | 2)) {
                    return bad(format!("reflection with q(r) = {qr}"));
                }
                // M = I − (2/q(r))·r·(G r)ᵀ, and 2/q(r) is an integer.
                let c = BigInt::from(2) / &qr;
                for a in 0..dim {
                    for b in 0..dim {
                        m[(a, b)] -= &c * &r[a] * &r[b] * g[b];
                    }
                }
            }
        }
        Ok(m)
    }
}

fn lorentz_signs(n: usize) -> Vec<i64> {
    let mut g = vec![1i64; n + 1];
    g[n] = -1;
    g
}

/// An integral isometry of `I_{n,1}` with the word that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LorentzAutomorphism {
    pub n: usize,
    pub matrix: IntMatrix,
    pub word: Vec<Generator>,
}

impl LorentzAutomorphism {
    pub fn identity(n: usize) -> Self {
        LorentzAutomorphism { n, matrix: IntMatrix::identity(n + 1), word: Vec::new() }
    }

    pub fn from_word(n: usize, word: Vec<Generator>) -> Result<Self> {
        let mut matrix = IntMatrix::identity(n + 1);
        for g in &word {
            matrix = matrix.mul(&g.matrix(n)?);
        }
        let a = LorentzAutomorphism { n, matrix, word };
        if !a.verify() {
            return Err(Error::Verification("word does not preserve q_{n,1}".into()));
        }
        Ok(a)
    }

    /// `Mᵀ·G·M = G` and `det M = ±1`.
    pub fn verify(&self) -> bool {
        let q = standard_form(self.n, 1).expect("n ≥ 1");
        self.matrix.is_unimodular() && q.congruent(&self.matrix).is_ok_and(|g| g == q)
    }

    pub fn apply(&self, x: &[BigInt]) -> IntVector {
        self.matrix.mul_vec(x)
    }
}

/// A product of `word_length` random generators, reproducible from `seed`.
pub fn random_automorphism(n: usize, seed: u64, word_length: usize) -> Result<LorentzAutomorphism> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let signs = lorentz_signs(n);
    let word = (0..word_length)
        .map(|_| match rng.gen_range(0..3) {
            0 if n >= 2 => {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                Generator::Transposition { i, j }
            }
            1 => Generator::SignFlip { i: rng.gen_range(0..=n) },
            _ => loop {
                let r: Vec<i64> = (0..=n).map(|_| rng.gen_range(-2..=2)).collect();
                let qr: i64 = r.iter().zip(&signs).map(|(x, s)| x * x * s).sum();
                if matches!(qr.abs(), 1 | 2) {
                    break Generator::Reflection { r: r.into_iter().map(BigInt::from).collect() };
                }
            },
        })
        .collect();
    LorentzAutomorphism::from_word(n, word)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub minima_before: Vec<Scalar>,
    pub minima_after: Vec<Scalar>,
    pub points_checked: usize,
    /// A point `x` with `SR(q, v)(x) ≠ SR(q, Mv)(Mx)`, if one turned up.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<Vec<String>>,
    pub passed: bool,
}

/// Compares `λ₁, λ₂` of `SR(q_{n,1}, v)` and `SR(q_{n,1}, Mv)`, and checks
/// `SR(q, v)(x) = SR(q, Mv)(Mx)` on `points` random `x`.
pub fn orbit_invariance_check(
    n: usize,
    v: &[BigInt],
    m: &LorentzAutomorphism,
    points: usize,
    seed: u64,
    opts: &SearchOptions,
) -> Result<OrbitReport> {
    if m.n != n || !m.verify() {
        return Err(Error::InvalidParameter("automorphism does not match I_{n,1}".into()));
    }
    let q = standard_form(n, 1)?;
    let mv = m.apply(v);
    let before = sign_reverse_int(&q, v)?;
    let after = sign_reverse_int(&q, &mv)?;
    let count = 2.min(n + 1);
    let minima_before = successive_minima(&before, count, opts)?.minima_squared;
    let minima_after = successive_minima(&after, count, opts)?.minima_squared;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatch = None;
    for _ in 0..points {
        let x: IntVector = (0..=n).map(|_| BigInt::from(rng.gen_range(-5i64..=5))).collect();
        if before.evaluate_int(&x)? != after.evaluate_int(&m.apply(&x))? {
            mismatch = Some(x.iter().map(|c| c.to_string()).collect());
            break;
        }
    }
    let passed = minima_before == minima_after && mismatch.is_none();
    Ok(OrbitReport { minima_before, minima_after, points_checked: points, mismatch, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ivec;

    fn e8() -> QForm {
        QForm::from_int_rows(&[
            vec![2, -1, 0, 0, 0, 0, 0, 0],
            vec![-1, 2, -1, 0, 0, 0, 0, 0],
            vec![0, -1, 2, -1, 0, 0, 0, -1],
            vec![0, 0, -1, 2, -1, 0, 0, 0],
            vec![0, 0, 0, -1, 2, -1, 0, 0],
            vec![0, 0, 0, 0, -1, 2, -1, 0],
            vec![0, 0, 0, 0, 0, -1, 2, 0],
            vec![0, 0, -1, 0, 0, 0, 0, 2],
        ])
        .unwrap()
    }

    #[test]
    fn planted_isometry_is_found() {
        let a = QForm::from_int_rows(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]).unwrap();
        let u = IntMatrix::from_i64_rows(&[vec![1, 2, 0], vec![0, 1, -3], vec![0, 0, 1]]);
        let b = a.congruent(&u).unwrap();
        let out = is_isometric(&a, &b, &SearchOptions::default()).unwrap();
        assert!(out.witness().unwrap().verify());
    }

    #[test]
    fn parity_mismatch() {
        let out = is_isometric(&standard_form(8, 0).unwrap(), &e8(), &SearchOptions::default()).unwrap();
        match out {
            IsometryOutcome::NotIsometric { reason } => assert!(reason.contains("parity"), "{reason}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn different_minima() {
        let c = QForm::from_int_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        let d = QForm::from_int_rows(&[vec![1, 0], vec![0, 6]]).unwrap();
        assert!(matches!(
            is_isometric(&c, &d, &SearchOptions::default()).unwrap(),
            IsometryOutcome::NotIsometric { .. }
        ));
    }

    #[test]
    fn exhausted_budget_is_inconclusive() {
        let candidates = [Candidate { x: vec![1], ax: vec![2], norm: 2 }];
        let mut search = Backtrack {
            candidates: &candidates,
            pools: &[vec![0]],
            target: &[vec![2]],
            chosen: vec![],
            nodes: 0,
            budget: 0,
        };
        assert_eq!(search.run(), None);
        search.budget = 1;
        search.nodes = 0;
        assert_eq!(search.run(), Some(true));
    }

    #[test]
    fn automorphism_words() {
        assert_eq!(random_automorphism(5, 1, 0).unwrap().matrix, IntMatrix::identity(6));
        let flip = LorentzAutomorphism::from_word(3, vec![Generator::SignFlip { i: 0 }]).unwrap();
        assert_eq!(flip.matrix, IntMatrix::from_i64_rows(&[
            vec![-1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1],
        ]));
        let refl = LorentzAutomorphism::from_word(3, vec![Generator::Reflection { r: ivec(&[1, 1, 0, 1]) }]).unwrap();
        assert!(refl.verify());
        assert_ne!(refl.matrix, IntMatrix::identity(4));
        for seed in 0..20 {
            let m = random_automorphism(8, seed, 10).unwrap();
            assert!(m.verify());
            assert_eq!(m.word.len(), 10);
            let replay = LorentzAutomorphism::from_word(8, m.word.clone()).unwrap();
            assert_eq!(replay, m);
        }
    }

    #[test]
    fn bad_reflection_is_rejected() {
        // q(r) = 3 does not give an integral isometry.
        let bad = Generator::Reflection { r: ivec(&[1, 1, 1, 0]) };
        assert!(LorentzAutomorphism::from_word(3, vec![bad]).is_err());
    }

    #[test]
    fn orbit_check_on_e8_witness() {
        let v = ivec(&[1, 1, 1, 1, 1, 1, 1, 1, 3]);
        let m = random_automorphism(8, 7, 10).unwrap();
        let r = orbit_invariance_check(8, &v, &m, 100, 3, &SearchOptions::default()).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.minima_before, vec![Scalar::int(1), Scalar::int(2)]);
    }

    #[test]
    fn unimodular_inverse_round_trip() {
        let u = IntMatrix::from_i64_rows(&[vec![2, 3], vec![1, 2]]);
        assert_eq!(u.mul(&unimodular_inverse(&u)), IntMatrix::identity(2));
    }
}
