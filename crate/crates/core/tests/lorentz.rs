mod common;

use proptest::prelude::*;

use unimod::forms::{sign_reverse, standard_form};
use unimod::lorentz::{build_frame, deform_and_measure, deformed_line_rational, PlaneFrame};
use unimod::reduction::{shortest_vectors, SearchOptions};
use unimod::{Rational, Scalar};

use common::e8_witness;

fn opts() -> SearchOptions {
    SearchOptions::default()
}

fn e8_frame() -> PlaneFrame {
    build_frame(8, &e8_witness(), &opts()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Only the line matters, not the vector spanning it.
    #[test]
    fn reversal_depends_on_the_line_only(j in 0i64..180, c in 1i64..6) {
        let frame = e8_frame();
        let line = deformed_line_rational(&frame, &Rational::new(j, 256)).unwrap();
        let scaled: Vec<Scalar> = line.iter().map(|x| x.clone() * Scalar::ratio(c, 7)).collect();
        let q = standard_form(8, 1).unwrap();
        prop_assert_eq!(sign_reverse(&q, &line).unwrap(), sign_reverse(&q, &scaled).unwrap());
    }

    /// Measured λ₁² sits between the proven lower bound and the value on `v`.
    #[test]
    fn measured_minimum_respects_the_bounds(j in 0i64..180) {
        let frame = e8_frame();
        let r = Rational::new(j, 256);
        let line = deformed_line_rational(&frame, &r).unwrap();
        let report = deform_and_measure(&frame, &line, &opts()).unwrap();
        prop_assert!(report.certified);
        prop_assert!(report.lambda1_squared >= report.guaranteed_bound_squared);
        prop_assert_eq!(report.determinant, Scalar::one());
        let t = report.s_squared.clone();
        let on_v = (t.clone() + t.recip()) * Scalar::ratio(1, 2);
        prop_assert_eq!(report.deformed_gram.evaluate_int(&frame.v).unwrap(), on_v.clone());
        prop_assert!(report.lambda1_squared <= on_v);
    }
}

/// Without deformation every vector of norm below `k` is a multiple of `v`.
#[test]
fn undeformed_short_vectors_are_multiples_of_v() {
    let frame = e8_frame();
    let q = standard_form(8, 1).unwrap();
    let f = sign_reverse(&q, &unimod::linalg::to_scalars(&frame.v)).unwrap();
    let below_k = Scalar::int(frame.k as i64) - Scalar::ratio(1, 2);
    let list = shortest_vectors(&f, &below_k, &opts()).unwrap();
    assert_eq!(list.len(), 1);
    assert_eq!(list[0].norm, Scalar::one());
    assert_eq!(list[0].vector, frame.v);
}
