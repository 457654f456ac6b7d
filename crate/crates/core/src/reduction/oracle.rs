//! Brute-force successive minima over a coordinate box.
//!
//! Deliberately shares nothing with the enumerator: no reduction, its own
//! evaluation and its own rank test. Used to cross-check small cases.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forms::{QForm, FORMAT_VERSION};
use crate::scalars::{Rational, Scalar};

use super::MinimaReport;

/// Minima among all integer vectors with every `|x_i| ≤ box_radius`. These
/// are upper bounds in general and the true minima once the box is large
/// enough; deciding that is up to the caller.
pub fn brute_force_minima(f: &QForm, box_radius: i64, count: usize) -> Result<MinimaReport> {
    let n = f.dim();
    if count == 0 || count > n {
        return Err(Error::InvalidParameter(format!("count must lie in 1..={n}, got {count}")));
    }
    let (den, gram) = f.integral_scaling().ok_or(Error::NotRational)?;
    let g = gram.to_i64_rows().ok_or_else(|| Error::InvalidParameter("Gram entries too large".into()))?;
    let side = 2 * box_radius + 1;
    let total = (side as u64).checked_pow(n as u32).ok_or_else(|| {
        Error::InvalidParameter("box too large".into())
    })?;

    let mut found: Vec<(i128, Vec<i64>)> = Vec::new();
    let mut x = vec![-box_radius; n];
    for _ in 0..total {
        if first_nonzero_positive(&x) {
            found.push((value(&g, &x), x.clone()));
        }
        for c in x.iter_mut().rev() {
            if *c < box_radius {
                *c += 1;
                break;
            }
            *c = -box_radius;
        }
    }
    found.sort();

    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut minima = Vec::new();
    let mut witnesses = Vec::new();
    for (q, v) in &found {
        let big: Vec<BigInt> = v.iter().map(|&c| BigInt::from(c)).collect();
        let mut trial = basis.clone();
        trial.push(big.clone());
        if rank(trial) > basis.len() {
            basis.push(big.clone());
            minima.push(Scalar::from(Rational::new(*q, den.clone())));
            witnesses.push(big);
            if minima.len() == count {
                break;
            }
        }
    }
    if minima.len() < count {
        return Err(Error::Verification("box holds too few independent vectors".into()));
    }
    let radius = minima.last().cloned().expect("count ≥ 1");
    Ok(MinimaReport {
        format_version: FORMAT_VERSION,
        minima_squared: minima,
        witnesses,
        enumeration_radius: radius,
        node_count: total,
    })
}

fn first_nonzero_positive(x: &[i64]) -> bool {
    x.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
}

fn value(g: &[Vec<i64>], x: &[i64]) -> i128 {
    let mut s = 0i128;
    for i in 0..x.len() {
        for j in 0..x.len() {
            s += g[i][j] as i128 * x[i] as i128 * x[j] as i128;
        }
    }
    s
}

/// Rank by fraction-free elimination.
fn rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            let a = rows[r][c].clone();
            let b = rows[i][c].clone();
            for k in 0..cols {
                rows[i][k] = &a * &rows[i][k] - &b * &rows[r][k];
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::standard_form;

    #[test]
    fn identity_box_one() {
        let r = brute_force_minima(&standard_form(3, 0).unwrap(), 1, 3).unwrap();
        assert_eq!(r.minima_squared, vec![Scalar::one(); 3]);
    }

    #[test]
    fn small_gram() {
        let f = QForm::from_int_rows(&[vec![4, 1], vec![1, 1]]).unwrap();
        let r = brute_force_minima(&f, 4, 2).unwrap();
        assert_eq!(r.minima_squared, vec![Scalar::int(1), Scalar::int(3)]);
    }

    #[test]
    fn rational_entries() {
        let f = QForm::diagonal(&[Scalar::ratio(1, 3), Scalar::ratio(1, 2)]).unwrap();
        let r = brute_force_minima(&f, 2, 2).unwrap();
        assert_eq!(r.minima_squared, vec![Scalar::ratio(1, 3), Scalar::ratio(1, 2)]);
    }

    #[test]
    fn rank_helper() {
        let v = |a: &[i64]| a.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(rank(vec![v(&[1, 2]), v(&[2, 4])]), 1);
        assert_eq!(rank(vec![v(&[1, 2]), v(&[2, 5])]), 2);
    }
}
