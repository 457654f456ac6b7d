//! Quadratic forms as exact Gram matrices, and the sign-reversal procedure.
//!
//! A form `q` is stored through its Gram matrix `G`, so `q(x) = xᵀGx` and the
//! polarization is `Q(x, y) = xᵀGy = ¼(q(x+y) − q(x−y))`.
//!
//! Sign reversal takes a form with exactly one negative direction and a
//! vector `v` with `q(v) < 0`, keeps `q` on `v^⊥` and negates it on `ℝv`:
//!
//! ```text
//! SR(q, v)(x) = q(x⁺) − q(x⁻),   x⁻ = (Q(x, v) / q(v))·v,   x⁺ = x − x⁻
//!             = q(x) − 2·Q(x, v)² / q(v)
//! ```
//!
//! which is the rank-one Gram update `G − 2·(Gv)(Gv)ᵀ / q(v)`.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{scalar_det, to_scalars, IntMatrix};
use crate::scalars::{common_denominator, Rational, Scalar};

pub const FORMAT_VERSION: u32 = 1;

/// Inertia of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub positives: usize,
    pub negatives: usize,
    pub zeros: usize,
}

impl Signature {
    pub fn new(positives: usize, negatives: usize, zeros: usize) -> Self {
        Signature { positives, negatives, zeros }
    }

    pub fn dim(&self) -> usize {
        self.positives + self.negatives + self.zeros
    }

    pub fn is_positive_definite(&self) -> bool {
        self.negatives == 0 && self.zeros == 0
    }

    /// One negative direction, nondegenerate.
    pub fn is_index_one(&self) -> bool {
        self.negatives == 1 && self.zeros == 0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positives, self.negatives, self.zeros)
    }
}

/// A symmetric bilinear form given by its exact Gram matrix.
///
/// Signature and determinant are computed lazily and cached.
#[derive(Clone)]
pub struct QForm {
    gram: Vec<Vec<Scalar>>,
    radicand: Option<u64>,
    signature: OnceLock<Signature>,
    determinant: OnceLock<Scalar>,
}

impl QForm {
    pub fn new(gram: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::EmptyForm);
        }
        if gram.iter().any(|row| row.len() != n) {
            return Err(Error::NotSquare);
        }
        let mut radicand = None;
        for i in 0..n {
            for j in 0..n {
                if let Some(d) = gram[i][j].radicand() {
                    match radicand {
                        None => radicand = Some(d),
                        Some(r) if r != d => {
                            return Err(Error::RadicandMismatch { left: r, right: d })
                        }
                        _ => {}
                    }
                }
                if j > i && gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        if let Some(d) = radicand {
            crate::scalars::QuadExt::sqrt(d)?;
        }
        Ok(QForm { gram, radicand, signature: OnceLock::new(), determinant: OnceLock::new() })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        QForm::new(rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect())
    }

    pub fn from_int_matrix(m: &IntMatrix) -> Result<Self> {
        QForm::new(m.to_rows().iter().map(|r| to_scalars(r)).collect())
    }

    pub fn diagonal(entries: &[Scalar]) -> Result<Self> {
        let n = entries.len();
        let mut gram = vec![vec![Scalar::zero(); n]; n];
        for (i, e) in entries.iter().enumerate() {
            gram[i][i] = e.clone();
        }
        QForm::new(gram)
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Scalar>] {
        &self.gram
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.gram[i][j]
    }

    /// The radicand `d` when some entry lies in `Q(√d) \ Q`.
    pub fn radicand(&self) -> Option<u64> {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.radicand.is_none()
    }

    pub fn is_integral(&self) -> bool {
        self.gram.iter().flatten().all(Scalar::is_integer)
    }

    /// The Gram matrix as integers, if every entry is an integer.
    pub fn integer_gram(&self) -> Option<IntMatrix> {
        let rows = self
            .gram
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| match x {
                        Scalar::Rational(q) if q.is_integer() => Some(q.numer().clone()),
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(IntMatrix::from_rows(rows))
    }

    /// For a rational Gram, the least `D > 0` with `D·G` integral, together
    /// with `D·G`.
    pub fn integral_scaling(&self) -> Option<(BigInt, IntMatrix)> {
        let rationals: Vec<&Rational> =
            self.gram.iter().flatten().map(Scalar::as_rational).collect::<Option<_>>()?;
        let den = common_denominator(rationals.iter().copied());
        let n = self.dim();
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let r = rationals[i * n + j];
                m[(i, j)] = r.numer() * (&den / r.denom());
            }
        }
        Some((den, m))
    }

    pub fn gram_times(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.gram
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .filter(|(g, v)| !g.is_zero() && !v.is_zero())
                    .fold(Scalar::zero(), |acc, (g, v)| acc + g * v)
            })
            .collect()
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: len });
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[Scalar]) -> Result<Scalar> {
        self.polarize(x, x)
    }

    pub fn evaluate_int(&self, x: &[BigInt]) -> Result<Scalar> {
        self.evaluate(&to_scalars(x))
    }

    pub fn polarize(&self, x: &[Scalar], y: &[Scalar]) -> Result<Scalar> {
        self.check_dim(x.len())?;
        self.check_dim(y.len())?;
        let gy = self.gram_times(y);
        Ok(x.iter()
            .zip(&gy)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(Scalar::zero(), |acc, (a, b)| acc + a * b))
    }

    pub fn polarize_int(&self, x: &[BigInt], y: &[BigInt]) -> Result<Scalar> {
        self.polarize(&to_scalars(x), &to_scalars(y))
    }

    /// Exact inertia by symmetric congruence elimination.
    pub fn signature(&self) -> Signature {
        *self.signature.get_or_init(|| congruence_inertia(&self.gram))
    }

    pub fn determinant(&self) -> Scalar {
        self.determinant.get_or_init(|| scalar_det(&self.gram)).clone()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature().is_positive_definite()
    }

    /// `Uᵀ·G·U`: the form in the basis given by the columns of `u`.
    pub fn congruent(&self, u: &IntMatrix) -> Result<QForm> {
        self.check_dim(u.rows())?;
        let cols: Vec<Vec<Scalar>> = u.columns().iter().map(|c| to_scalars(c)).collect();
        let g_cols: Vec<Vec<Scalar>> = cols.iter().map(|c| self.gram_times(c)).collect();
        let m = u.cols();
        let mut gram = vec![vec![Scalar::zero(); m]; m];
        for i in 0..m {
            for j in i..m {
                let v = cols[i]
                    .iter()
                    .zip(&g_cols[j])
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Scalar::zero(), |acc, (a, b)| acc + a * b);
                gram[j][i] = v.clone();
                gram[i][j] = v;
            }
        }
        QForm::new(gram)
    }

    pub fn scaled(&self, c: &Scalar) -> Result<QForm> {
        QForm::new(self.gram.iter().map(|r| r.iter().map(|x| x * c).collect()).collect())
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        self.gram.iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect()
    }
}

impl PartialEq for QForm {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram
    }
}

impl Eq for QForm {}

impl fmt::Debug for QForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QForm").field("gram", &self.gram).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct QFormRepr {
    #[serde(default = "default_version")]
    format_version: u32,
    dim: usize,
    gram: Vec<Vec<Scalar>>,
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

impl Serialize for QForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QFormRepr { format_version: FORMAT_VERSION, dim: self.dim(), gram: self.gram.clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = QFormRepr::deserialize(d)?;
        if repr.dim != repr.gram.len() {
            return Err(D::Error::custom(format!(
                "dim is {} but gram has {} rows",
                repr.dim,
                repr.gram.len()
            )));
        }
        // Normalize Q(√d) entries with zero irrational part.
        let gram = repr
            .gram
            .into_iter()
            .map(|r| r.into_iter().map(|x| &x + &Scalar::zero()).collect())
            .collect();
        QForm::new(gram).map_err(D::Error::custom)
    }
}

fn congruence_inertia(gram: &[Vec<Scalar>]) -> Signature {
    let n = gram.len();
    let mut a: Vec<Vec<Scalar>> = gram.to_vec();
    let mut sig = Signature::new(0, 0, 0);
    for k in 0..n {
        // Bring a nonzero diagonal entry to position k.
        let pivot = match (k..n).find(|&i| !a[i][i].is_zero()) {
            Some(i) => Some(i),
            None => {
                let pair = (k..n)
                    .flat_map(|i| (k..n).map(move |j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero());
                pair.map(|(i, j)| {
                    // Replace e_i by e_i + e_j: new diagonal is 2·a_ij.
                    for c in k..n {
                        let t = &a[i][c] + &a[j][c];
                        a[i][c] = t;
                    }
                    for r in k..n {
                        let t = &a[r][i] + &a[r][j];
                        a[r][i] = t;
                    }
                    i
                })
            }
        };
        let Some(p) = pivot else {
            sig.zeros = n - k;
            return sig;
        };
        a.swap(p, k);
        for row in a.iter_mut() {
            row.swap(p, k);
        }
        let piv = a[k][k].clone();
        if piv.sign() > 0 {
            sig.positives += 1;
        } else {
            sig.negatives += 1;
        }
        let inv = piv.recip();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] * &inv;
            for j in k + 1..n {
                if !a[k][j].is_zero() {
                    let t = &f * &a[k][j];
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
        for i in k + 1..n {
            a[i][k] = Scalar::zero();
            a[k][i] = Scalar::zero();
        }
    }
    sig
}

/// The diagonal form `x₁² + … + x_p² − x_{p+1}² − … − x_{p+q}²`.
pub fn standard_form(p: usize, q: usize) -> Result<QForm> {
    if p + q == 0 {
        return Err(Error::EmptyForm);
    }
    let mut entries = vec![Scalar::one(); p];
    entries.resize(p + q, Scalar::int(-1));
    QForm::diagonal(&entries)
}

pub fn evaluate(f: &QForm, x: &[Scalar]) -> Result<Scalar> {
    f.evaluate(x)
}

pub fn polarize(f: &QForm, x: &[Scalar], y: &[Scalar]) -> Result<Scalar> {
    f.polarize(x, y)
}

pub fn signature(f: &QForm) -> Signature {
    f.signature()
}

/// Sign reversal of `f` along `v`. The result is positive definite and has
/// the same absolute determinant as `f`.
pub fn sign_reverse(f: &QForm, v: &[Scalar]) -> Result<QForm> {
    f.check_dim(v.len())?;
    if v.iter().all(Scalar::is_zero) {
        return Err(Error::ZeroVector);
    }
    let qv = f.evaluate(v)?;
    if qv.sign() >= 0 {
        return Err(Error::NonNegativeDirection { norm: qv.to_string() });
    }
    let sig = f.signature();
    if !sig.is_index_one() {
        return Err(Error::NotIndexOne(sig));
    }
    let gv = f.gram_times(v);
    let factor = Scalar::int(-2) / &qv;
    let n = f.dim();
    let mut gram = f.gram.clone();
    for i in 0..n {
        if gv[i].is_zero() {
            continue;
        }
        let fi = &factor * &gv[i];
        for j in 0..n {
            if !gv[j].is_zero() {
                gram[i][j] = &gram[i][j] + &(&fi * &gv[j]);
            }
        }
    }
    QForm::new(gram)
}

pub fn sign_reverse_int(f: &QForm, v: &[BigInt]) -> Result<QForm> {
    sign_reverse(f, &to_scalars(v))
}

/// `1/(2πe)` to 17 decimal places.
const INV_TWO_PI_E: (i64, i64) = (5_854_983_152_431_917, 100_000_000_000_000_000);

/// Rational approximation of `n/(2πe)`, the growth rate of the minimum of the
/// Conway–Thompson lattices. A reference line for reports only; it is not a
/// certified bound for any particular `n`.
pub fn ct_bound(n: usize) -> Rational {
    Rational::from_integer(n as i64) * Rational::new(INV_TWO_PI_E.0, INV_TWO_PI_E.1)
}
