//! Hermite normal form over the integers and integer kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::linalg::{IntMatrix, IntVector};

/// Row-style Hermite normal form.
///
/// Returns `(H, V)` with `V·M = H`, `V` unimodular, and `H` in row echelon
/// form: pivots positive, entries above each pivot reduced into
/// `[0, pivot)`, zero rows at the bottom.
pub fn row_hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.to_rows();
    let mut v = IntMatrix::identity(rows).to_rows();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        for i in pivot_row + 1..rows {
            if h[i][col].is_zero() {
                continue;
            }
            let a = h[pivot_row][col].clone();
            let b = h[i][col].clone();
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let bg = &b / &g;
            let ag = &a / &g;
            combine_rows(&mut h, pivot_row, i, &x, &y, &bg, &ag);
            combine_rows(&mut v, pivot_row, i, &x, &y, &bg, &ag);
        }
        if h[pivot_row][col].is_zero() {
            continue;
        }
        if h[pivot_row][col].is_negative() {
            negate_row(&mut h[pivot_row]);
            negate_row(&mut v[pivot_row]);
        }
        let p = h[pivot_row][col].clone();
        for i in 0..pivot_row {
            let q = h[i][col].div_floor(&p);
            if !q.is_zero() {
                sub_multiple(&mut h, i, pivot_row, &q);
                sub_multiple(&mut v, i, pivot_row, &q);
            }
        }
        pivot_row += 1;
    }
    (IntMatrix::from_rows(h), IntMatrix::from_rows(v))
}

// (row_p, row_i) <- (x·row_p + y·row_i, −(b/g)·row_p + (a/g)·row_i), a 2×2
// transform of determinant one.
fn combine_rows(
    m: &mut [Vec<BigInt>],
    p: usize,
    i: usize,
    x: &BigInt,
    y: &BigInt,
    bg: &BigInt,
    ag: &BigInt,
) {
    for c in 0..m[p].len() {
        let rp = m[p][c].clone();
        let ri = m[i][c].clone();
        m[p][c] = x * &rp + y * &ri;
        m[i][c] = ag * &ri - bg * &rp;
    }
}

fn negate_row(row: &mut [BigInt]) {
    for x in row.iter_mut() {
        *x = -&*x;
    }
}

fn sub_multiple(m: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    for c in 0..m[target].len() {
        let t = q * &m[source][c];
        m[target][c] -= t;
    }
}

/// Canonical basis of the lattice spanned by the given columns: the column
/// Hermite normal form with zero columns dropped.
pub fn hnf_columns(generators: &IntMatrix) -> IntMatrix {
    let (h, _) = row_hnf(&generators.transpose());
    let rows: Vec<IntVector> = h.to_rows().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    IntMatrix::from_columns(&rows)
}

/// Canonical basis (as columns) of `{x ∈ ℤⁿ : c·x = 0}` for a nonzero
/// integer functional `c`.
pub fn functional_kernel(c: &[BigInt]) -> IntMatrix {
    let n = c.len();
    let column = IntMatrix::from_columns(&[c.to_vec()]);
    let (_, v) = row_hnf(&column);
    // V·c = (g, 0, …, 0)ᵀ, so rows 1.. of V are kernel vectors and together
    // with row 0 form a unimodular matrix; they therefore span the kernel.
    let kernel: Vec<IntVector> = (1..n).map(|i| v.row(i).to_vec()).collect();
    if kernel.is_empty() {
        return IntMatrix::zeros(n, 0);
    }
    hnf_columns(&IntMatrix::from_columns(&kernel))
}
