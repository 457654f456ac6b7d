//! Integer lattices inside an ambient form: orthogonal complements, direct
//! sums, the `ℤv ⊕ v^⊥` splitting check, and classification.

pub mod hnf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::QForm;
use crate::linalg::{content, IntMatrix, IntVector};
use crate::scalars::{common_denominator, Rational, Scalar};

/// A sublattice of `(ℤⁿ, ambient)` given by an integer column basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SublatticeBasis {
    pub ambient: QForm,
    pub basis: IntMatrix,
    pub induced_gram: QForm,
}

impl SublatticeBasis {
    pub fn new(ambient: QForm, basis: IntMatrix) -> Result<Self> {
        let induced_gram = ambient.congruent(&basis)?;
        Ok(SublatticeBasis { ambient, basis, induced_gram })
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// Ambient coordinates of a vector given in sublattice coordinates.
    pub fn embed(&self, coords: &[BigInt]) -> IntVector {
        self.basis.mul_vec(coords)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    #[serde(rename = "even")]
    Even,
    #[serde(rename = "odd")]
    Odd,
    #[serde(rename = "n/a")]
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Definiteness {
    Positive,
    Negative,
    Indefinite,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeClass {
    pub parity: Parity,
    pub determinant: Scalar,
    pub unimodular: bool,
    pub definiteness: Definiteness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingCertificate {
    /// `q(v)`.
    pub norm: Scalar,
    /// `det[v | basis(v^⊥)]`; `±1` exactly when `ℤv ⊕ v^⊥ = ℤⁿ`.
    #[serde(with = "bigint_string")]
    pub index_det: BigInt,
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

fn check_primitive(v: &[BigInt]) -> Result<()> {
    let g = content(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !g.is_one() {
        return Err(Error::NotPrimitive { gcd: g.to_string() });
    }
    Ok(())
}

/// Integer functional `x ↦ Q(x, v)`, scaled to clear denominators.
fn pairing_functional(ambient: &QForm, v: &[BigInt]) -> Result<IntVector> {
    if !ambient.is_rational() {
        return Err(Error::NotRational);
    }
    let gv = ambient.gram_times(&crate::linalg::to_scalars(v));
    let rats: Vec<&Rational> = gv.iter().map(|x| x.as_rational().expect("rational Gram")).collect();
    let den = common_denominator(rats.iter().copied());
    Ok(rats.iter().map(|r| r.numer() * (&den / r.denom())).collect())
}

/// The sublattice `{x ∈ ℤⁿ : Q(x, v) = 0}`, with a canonical (Hermite normal
/// form) basis.
pub fn orthogonal_complement(ambient: &QForm, v: &[BigInt]) -> Result<SublatticeBasis> {
    if v.len() != ambient.dim() {
        return Err(Error::DimensionMismatch { expected: ambient.dim(), found: v.len() });
    }
    check_primitive(v)?;
    let c = pairing_functional(ambient, v)?;
    if c.iter().all(Zero::is_zero) {
        return Err(Error::InvalidParameter(
            "vector lies in the radical of the ambient form; its complement is everything".into(),
        ));
    }
    let basis = hnf::functional_kernel(&c);
    SublatticeBasis::new(ambient.clone(), basis)
}

/// Block-diagonal sum `a ⊕ b`.
pub fn direct_sum(a: &QForm, b: &QForm) -> Result<QForm> {
    let n = a.dim() + b.dim();
    let mut gram = vec![vec![Scalar::zero(); n]; n];
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            gram[i][j] = a.entry(i, j).clone();
        }
    }
    let o = a.dim();
    for i in 0..b.dim() {
        for j in 0..b.dim() {
            gram[o + i][o + j] = b.entry(i, j).clone();
        }
    }
    QForm::new(gram)
}

pub fn classify(f: &QForm) -> LatticeClass {
    let parity = if !f.is_integral() {
        Parity::NotApplicable
    } else if (0..f.dim()).all(|i| {
        f.entry(i, i).as_rational().is_some_and(|r| r.numer().is_even())
    }) {
        Parity::Even
    } else {
        Parity::Odd
    };
    let determinant = f.determinant();
    let unimodular = determinant.abs() == Scalar::one();
    let sig = f.signature();
    let definiteness = if sig.zeros > 0 {
        Definiteness::Degenerate
    } else if sig.negatives == 0 {
        Definiteness::Positive
    } else if sig.positives == 0 {
        Definiteness::Negative
    } else {
        Definiteness::Indefinite
    };
    LatticeClass { parity, determinant, unimodular, definiteness }
}

/// Computes `v^⊥` and checks that `ℤv ⊕ v^⊥` is all of `ℤⁿ`.
pub fn splitting_witness(
    ambient: &QForm,
    v: &[BigInt],
) -> Result<(SublatticeBasis, SplittingCertificate)> {
    let complement = orthogonal_complement(ambient, v)?;
    let norm = ambient.evaluate_int(v)?;
    let mut cols = vec![v.to_vec()];
    cols.extend(complement.basis.columns());
    let index_det = IntMatrix::from_columns(&cols).det();
    if norm.abs() != Scalar::one() || !index_det.abs().is_one() {
        return Err(Error::SplittingNotDirect {
            norm: norm.to_string(),
            index_det: index_det.to_string(),
        });
    }
    Ok((complement, SplittingCertificate { norm, index_det }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::standard_form;
    use crate::linalg::ivec;

    fn e8_witness() -> IntVector {
        ivec(&[1, 1, 1, 1, 1, 1, 1, 1, 3])
    }

    #[test]
    fn complement_of_time_axis_is_euclidean() {
        let q = standard_form(4, 1).unwrap();
        let c = orthogonal_complement(&q, &ivec(&[0, 0, 0, 0, 1])).unwrap();
        assert_eq!(c.rank(), 4);
        assert_eq!(c.induced_gram, standard_form(4, 0).unwrap());
    }

    #[test]
    fn e8_complement_classification() {
        let q = standard_form(8, 1).unwrap();
        let c = orthogonal_complement(&q, &e8_witness()).unwrap();
        assert_eq!(c.rank(), 8);
        let class = classify(&c.induced_gram);
        assert_eq!(class.parity, Parity::Even);
        assert_eq!(class.determinant, Scalar::one());
        assert!(class.unimodular);
        assert_eq!(class.definiteness, Definiteness::Positive);
    }

    #[test]
    fn complement_errors() {
        let q = standard_form(2, 1).unwrap();
        assert!(matches!(
            orthogonal_complement(&q, &ivec(&[2, 0, 2])),
            Err(Error::NotPrimitive { .. })
        ));
        assert!(matches!(orthogonal_complement(&q, &ivec(&[0, 0, 0])), Err(Error::ZeroVector)));
        assert!(matches!(
            orthogonal_complement(&q, &ivec(&[0, 1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn induced_gram_is_integral_and_symmetric() {
        let q = standard_form(5, 1).unwrap();
        let c = orthogonal_complement(&q, &ivec(&[1, 2, 0, 1, 1, 3])).unwrap();
        assert!(c.induced_gram.is_integral());
        assert_eq!(c.induced_gram, c.ambient.congruent(&c.basis).unwrap());
        assert_eq!(hnf::hnf_columns(&c.basis), c.basis);
    }

    #[test]
    fn direct_sums() {
        let a = QForm::from_int_rows(&[vec![1]]).unwrap();
        let b = QForm::from_int_rows(&[vec![-1]]).unwrap();
        assert_eq!(direct_sum(&a, &b).unwrap(), standard_form(1, 1).unwrap());
    }

    #[test]
    fn classify_examples() {
        let i41 = classify(&standard_form(4, 1).unwrap());
        assert_eq!(i41.parity, Parity::Odd);
        assert_eq!(i41.determinant, Scalar::int(-1));
        assert!(i41.unimodular);
        assert_eq!(i41.definiteness, Definiteness::Indefinite);

        let two = classify(&QForm::from_int_rows(&[vec![2]]).unwrap());
        assert_eq!(two.parity, Parity::Even);
        assert_eq!(two.determinant, Scalar::int(2));
        assert!(!two.unimodular);
        assert_eq!(two.definiteness, Definiteness::Positive);

        let half = QForm::new(vec![vec![Scalar::ratio(1, 2)]]).unwrap();
        assert_eq!(classify(&half).parity, Parity::NotApplicable);
    }

    #[test]
    fn splitting_checks() {
        let q = standard_form(3, 1).unwrap();
        let (_, cert) = splitting_witness(&q, &ivec(&[0, 0, 0, 1])).unwrap();
        assert!(cert.index_det.abs().is_one());

        let q81 = standard_form(8, 1).unwrap();
        let (comp, cert) = splitting_witness(&q81, &e8_witness()).unwrap();
        assert_eq!(comp.rank(), 8);
        assert!(cert.index_det.abs().is_one());

        // q(v) = −2: ℤv ⊕ v^⊥ has index 2 in ℤ⁴.
        let err = splitting_witness(&q, &ivec(&[1, 1, 0, 2])).unwrap_err();
        assert!(matches!(err, Error::SplittingNotDirect { .. }), "{err}");
    }
}
