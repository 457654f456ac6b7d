#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use unimod::linalg::{ivec, IntMatrix, IntVector};
use unimod::QForm;

pub fn leech_witness() -> IntVector {
    let mut t: Vec<i64> = (3..=47).step_by(2).collect();
    t.extend([51, 145]);
    ivec(&t)
}

pub fn e8_witness() -> IntVector {
    ivec(&[1, 1, 1, 1, 1, 1, 1, 1, 3])
}

/// Symmetric, entries in [−5, 5] off the diagonal, made definite by
/// diagonal dominance.
pub fn random_definite_gram(rng: &mut ChaCha8Rng, n: usize) -> QForm {
    let mut g = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..i {
            let x = rng.gen_range(-5..=5);
            g[i][j] = x;
            g[j][i] = x;
        }
    }
    for i in 0..n {
        let off: i64 = (0..n).filter(|&j| j != i).map(|j| g[i][j].abs()).sum();
        g[i][i] = off + rng.gen_range(1..=5);
    }
    QForm::from_int_rows(&g).unwrap()
}

/// A product of `len` elementary matrices `I ± E_ij`.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, len: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n < 2 {
        return u;
    }
    for _ in 0..len {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let mut e = IntMatrix::identity(n);
        e[(i, j)] = BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 });
        u = u.mul(&e);
    }
    u
}
