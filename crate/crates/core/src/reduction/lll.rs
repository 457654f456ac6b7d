//! LLL reduction of positive definite Gram matrices.
//!
//! Rational Grams are scaled to integers and reduced with the all-integer
//! Gram-matrix variant of LLL (Cohen, *A Course in Computational Algebraic
//! Number Theory*, Alg. 2.6.7), which never leaves `ℤ`. Grams over `Q(√d)`
//! are first reduced through a rational approximation, then finished with a
//! textbook LLL pass in exact `Q(√d)` arithmetic. Either way the output is
//! re-checked exactly before it is returned.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::forms::QForm;
use crate::linalg::IntMatrix;
use crate::scalars::{Rational, Scalar};

pub fn default_delta() -> Rational {
    Rational::new(99, 100)
}

#[derive(Clone, Debug)]
pub struct LllOutcome {
    /// Unimodular `U`; the reduced basis vectors are its columns.
    pub change: IntMatrix,
    /// `Uᵀ·G·U`.
    pub reduced: QForm,
}

pub fn lll_reduce(f: &QForm, delta: &Rational) -> Result<LllOutcome> {
    if *delta <= Rational::new(1, 4) || *delta >= Rational::one() {
        return Err(Error::InvalidParameter(format!("LLL delta must lie in (1/4, 1), got {delta}")));
    }
    let sig = f.signature();
    if !sig.is_positive_definite() {
        return Err(Error::NotPositiveDefinite(sig));
    }
    let change = match f.integral_scaling() {
        Some((_, g)) => integral_lll(&g, delta).expect("positive definite Gram"),
        None => {
            let approx = approximate_gram(f);
            let u0 = integral_lll(&approx, delta).unwrap_or_else(|| IntMatrix::identity(f.dim()));
            let g0 = f.congruent(&u0)?;
            let u1 = field_lll(&g0, delta);
            u0.mul(&u1)
        }
    };
    let reduced = f.congruent(&change)?;
    if !is_lll_reduced(&reduced, delta) {
        return Err(Error::Verification("LLL output fails the exact Lovász check".into()));
    }
    Ok(LllOutcome { change, reduced })
}

/// `floor(2^40 · g_ij)`: a symmetric integer matrix close to a scaled `G`.
fn approximate_gram(f: &QForm) -> IntMatrix {
    let scale = Scalar::from(Rational::from_integer(BigInt::from(1u64 << 40)));
    let n = f.dim();
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = (f.entry(i, j) * &scale).floor();
        }
    }
    m
}

/// Gram–Schmidt data `(μ, B)` of a Gram matrix, exactly.
pub(crate) fn gram_schmidt(g: &QForm) -> (Vec<Vec<Scalar>>, Vec<Scalar>) {
    let n = g.dim();
    let mut mu = vec![vec![Scalar::zero(); n]; n];
    let mut b = vec![Scalar::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut s = g.entry(i, j).clone();
            for l in 0..j {
                if !mu[j][l].is_zero() && !mu[i][l].is_zero() {
                    s = s - &mu[j][l] * &mu[i][l] * &b[l];
                }
            }
            mu[i][j] = s / &b[j];
        }
        let mut s = g.entry(i, i).clone();
        for l in 0..i {
            if !mu[i][l].is_zero() {
                s = s - &mu[i][l] * &mu[i][l] * &b[l];
            }
        }
        b[i] = s;
        mu[i][i] = Scalar::one();
    }
    (mu, b)
}

/// Exact check of size reduction (`|μ_ij| ≤ ½`) and the Lovász condition
/// `B_k ≥ (δ − μ²_{k,k−1})·B_{k−1}`.
pub fn is_lll_reduced(g: &QForm, delta: &Rational) -> bool {
    let (mu, b) = gram_schmidt(g);
    let half = Scalar::ratio(1, 2);
    let delta = Scalar::from(delta.clone());
    for i in 0..g.dim() {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return false;
            }
        }
        if i > 0 {
            let rhs = (&delta - &mu[i][i - 1] * &mu[i][i - 1]) * &b[i - 1];
            if b[i] < rhs {
                return false;
            }
        }
    }
    true
}

/// All-integer LLL on an integral positive definite Gram matrix. Returns
/// `None` if the input turns out not to be positive definite.
pub(crate) fn integral_lll(gram: &IntMatrix, delta: &Rational) -> Option<IntMatrix> {
    let n = gram.rows();
    if n == 0 {
        return Some(IntMatrix::identity(0));
    }
    let (dp, dq) = (delta.numer().clone(), delta.denom().clone());
    let mut st = IntegralLll {
        g: gram.to_rows(),
        h: IntMatrix::identity(n).to_rows(),
        d: vec![BigInt::zero(); n + 1],
        lam: vec![vec![BigInt::zero(); n]; n],
    };
    // 1-based d: d[0] = 1, d[i + 1] belongs to basis vector i.
    st.d[0] = BigInt::from(1);
    st.d[1] = st.g[0][0].clone();
    if !st.d[1].is_positive() {
        return None;
    }
    let mut k = 1;
    let mut kmax = 0;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = st.g[k][j].clone();
                for i in 0..j {
                    u = (&st.d[i + 1] * &u - &st.lam[k][i] * &st.lam[j][i]) / &st.d[i];
                }
                if j < k {
                    st.lam[k][j] = u;
                } else {
                    if !u.is_positive() {
                        return None;
                    }
                    st.d[k + 1] = u;
                }
            }
        }
        st.reduce(k, k - 1);
        // d_{k−2}, d_{k−1}, d_k in 1-based terms are d[k−1], d[k], d[k+1].
        let lhs = &dq * &st.d[k + 1] * &st.d[k - 1];
        let l = &st.lam[k][k - 1];
        let rhs = &dp * &st.d[k] * &st.d[k] - &dq * l * l;
        if lhs < rhs {
            st.swap(k, kmax);
            k = k.saturating_sub(1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                st.reduce(k, l);
            }
            k += 1;
        }
    }
    Some(IntMatrix::from_columns(&st.h))
}

struct IntegralLll {
    g: Vec<Vec<BigInt>>,
    // h[k] is basis vector k in original coordinates.
    h: Vec<Vec<BigInt>>,
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
}

impl IntegralLll {
    fn reduce(&mut self, k: usize, l: usize) {
        let dl = &self.d[l + 1];
        let two_lam: BigInt = &self.lam[k][l] * 2;
        if two_lam.abs() <= *dl {
            return;
        }
        // Nearest integer to λ/d_l.
        let q = (two_lam + dl).div_floor(&(dl * 2));
        let n = self.g.len();
        let old_kl = self.g[k][l].clone();
        let old_kk = self.g[k][k].clone();
        for j in 0..n {
            if j != k {
                let t = &q * &self.g[l][j];
                self.g[k][j] -= t;
                self.g[j][k] = self.g[k][j].clone();
            }
        }
        self.g[k][k] = old_kk - &q * &old_kl * 2 + &q * &q * &self.g[l][l];
        for c in 0..n {
            let t = &q * &self.h[l][c];
            self.h[k][c] -= t;
        }
        let t = &q * &self.d[l + 1];
        self.lam[k][l] -= t;
        for i in 0..l {
            let t = &q * &self.lam[l][i];
            self.lam[k][i] -= t;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.h.swap(k, k - 1);
        self.g.swap(k, k - 1);
        for row in self.g.iter_mut() {
            row.swap(k, k - 1);
        }
        for j in 0..k - 1 {
            let t = self.lam[k][j].clone();
            self.lam[k][j] = std::mem::replace(&mut self.lam[k - 1][j], t);
        }
        let lambda = self.lam[k][k - 1].clone();
        let dk = self.d[k + 1].clone();
        let dk1 = self.d[k].clone();
        let dk2 = self.d[k - 1].clone();
        let b = (&dk2 * &dk + &lambda * &lambda) / &dk1;
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&dk * &self.lam[i][k - 1] - &lambda * &t) / &dk1;
            self.lam[i][k - 1] = (&b * &t + &lambda * &self.lam[i][k]) / &dk;
        }
        self.d[k] = b;
    }
}

/// Textbook LLL over the exact scalar field, recomputing Gram–Schmidt data
/// after every basis change. Only used to finish an almost-reduced basis.
fn field_lll(g: &QForm, delta: &Rational) -> IntMatrix {
    let n = g.dim();
    let delta = Scalar::from(delta.clone());
    let mut gram: Vec<Vec<Scalar>> = g.gram().to_vec();
    let mut u = IntMatrix::identity(n);
    let mut k = 1;
    while k < n {
        let form = QForm::new(gram.clone()).expect("symmetric");
        let (mut mu, b) = gram_schmidt(&form);
        for j in (0..k).rev() {
            let q = (&mu[k][j] + &Scalar::ratio(1, 2)).floor();
            if q.is_zero() {
                continue;
            }
            let qs = Scalar::from(q.clone());
            // b_k ← b_k − q·b_j
            for i in 0..=j {
                mu[k][i] = &mu[k][i] - &(&qs * &mu[j][i]);
            }
            let old_kj = gram[k][j].clone();
            let old_kk = gram[k][k].clone();
            for c in 0..n {
                if c != k {
                    let t = &qs * &gram[j][c];
                    gram[k][c] = &gram[k][c] - &t;
                    gram[c][k] = gram[k][c].clone();
                }
            }
            gram[k][k] = old_kk - Scalar::int(2) * &qs * &old_kj + &qs * &qs * &gram[j][j];
            for r in 0..n {
                let t = &q * &u[(r, j)];
                u[(r, k)] -= t;
            }
        }
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &b[k - 1];
        if b[k] < rhs {
            gram.swap(k, k - 1);
            for row in gram.iter_mut() {
                row.swap(k, k - 1);
            }
            for r in 0..n {
                let t = u[(r, k)].clone();
                u[(r, k)] = std::mem::replace(&mut u[(r, k - 1)], t);
            }
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    u
}
