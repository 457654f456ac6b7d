//! Values computed once by the exact pipeline and frozen here.

mod common;

use unimod::lorentz::{build_frame, deform_and_measure, deformed_line, deformed_line_rational, planar_isometry_check};
use unimod::reduction::SearchOptions;
use unimod::{QuadExt, Rational, Scalar};

use common::{e8_witness, leech_witness};

fn opts() -> SearchOptions {
    SearchOptions::default()
}

fn rational_point(n: usize, v: &[num_bigint::BigInt], r: Rational) -> Scalar {
    let frame = build_frame(n, v, &opts()).unwrap();
    let line = deformed_line_rational(&frame, &r).unwrap();
    let report = deform_and_measure(&frame, &line, &opts()).unwrap();
    assert!(report.certified);
    report.lambda1_squared
}

fn quad_point(n: usize, v: &[num_bigint::BigInt]) -> Scalar {
    let frame = build_frame(n, v, &opts()).unwrap();
    let line = deformed_line(&frame, &Scalar::sqrt_int(frame.k)).unwrap();
    let report = deform_and_measure(&frame, &line, &opts()).unwrap();
    assert!(report.certified);
    report.lambda1_squared
}

#[test]
fn e8_rational_points() {
    let v = e8_witness();
    assert_eq!(rational_point(8, &v, Rational::new(157, 256)), Scalar::ratio(11481, 8119));
    assert_eq!(rational_point(8, &v, Rational::new(75, 256)), Scalar::ratio(38379, 27143));
    assert_eq!(rational_point(8, &v, Rational::zero()), Scalar::one());
}

#[test]
fn e8_quadratic_point() {
    let expected = QuadExt::new(Rational::zero(), Rational::new(3, 4), 2).unwrap();
    assert_eq!(quad_point(8, &e8_witness()), Scalar::Quad(expected));
}

#[test]
fn leech_rational_point() {
    assert_eq!(rational_point(24, &leech_witness(), Rational::new(75, 256)), Scalar::ratio(22009, 10759));
}

#[test]
fn leech_quadratic_point() {
    assert_eq!(quad_point(24, &leech_witness()), Scalar::ratio(5, 4));
}

#[test]
fn planar_values() {
    let cases = [("2", (17, 8)), ("6/5", (1921, 1800)), ("10/7", (12401, 9800)), ("1", (1, 1))];
    for (s, (p, q)) in cases {
        let c = planar_isometry_check(&s.parse().unwrap()).unwrap();
        assert_eq!(c.qs_of_v, Scalar::ratio(p, q), "s = {s}");
    }
}
