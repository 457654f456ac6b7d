//! Exact scalars: arbitrary-precision rationals and elements of a real
//! quadratic field `Q(√d)`.
//!
//! Nothing in here ever rounds. Comparisons in `Q(√d)` are decided by sign
//! analysis of `a + b√d`, falling back to comparing `a²` with `b²d`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number, always kept in lowest terms with positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        let denom = denom.into();
        assert!(!denom.is_zero(), "zero denominator");
        Rational(BigRational::new(numer.into(), denom))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn signum(&self) -> i8 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    /// Exact square root when it exists in `Q`.
    pub fn sqrt_exact(&self) -> Option<Rational> {
        if self.signum() < 0 {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(Rational::new(n, d))
        } else {
            None
        }
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}", self)
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(Rational::new(p, q))
            }
            None => Ok(Rational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Str(s) => s.parse().map_err(D::Error::custom),
            Repr::Int(n) => Ok(Rational::from_integer(n)),
        }
    }
}

macro_rules! forward_binop {
    ($ty:ident, $trait:ident, $method:ident, $imp:expr) => {
        impl $trait<&$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                let f: fn(&$ty, &$ty) -> $ty = $imp;
                f(self, rhs)
            }
        }
        impl $trait<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                (&self).$method(rhs)
            }
        }
        impl $trait<$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Rational, Add, add, |a, b| Rational(&a.0 + &b.0));
forward_binop!(Rational, Sub, sub, |a, b| Rational(&a.0 - &b.0));
forward_binop!(Rational, Mul, mul, |a, b| Rational(&a.0 * &b.0));
forward_binop!(Rational, Div, div, |a, b| {
    assert!(!b.is_zero(), "division by zero");
    Rational(&a.0 / &b.0)
});

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

fn is_perfect_square(n: u64) -> bool {
    let r = n.sqrt();
    r * r == n
}

/// An element `a + b·√d` of the real quadratic field `Q(√d)`, for a fixed
/// positive non-square `d`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct QuadExt {
    pub a: Rational,
    pub b: Rational,
    pub d: u64,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self> {
        if d == 0 || is_perfect_square(d) {
            return Err(Error::InvalidRadicand(d));
        }
        Ok(QuadExt { a, b, d })
    }

    /// `√d` itself.
    pub fn sqrt(d: u64) -> Result<Self> {
        QuadExt::new(Rational::zero(), Rational::one(), d)
    }

    pub fn from_rational(a: Rational, d: u64) -> Result<Self> {
        QuadExt::new(a, Rational::zero(), d)
    }

    /// Exact sign of the real number `a + b√d`.
    pub fn sign(&self) -> i8 {
        let sa = self.a.signum();
        let sb = self.b.signum();
        if sa >= 0 && sb >= 0 {
            return if sa == 0 && sb == 0 { 0 } else { 1 };
        }
        if sa <= 0 && sb <= 0 {
            return -1;
        }
        // Opposite signs: whichever of a² and b²d is larger wins. They cannot
        // be equal because d is not a square.
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rational::from_integer(self.d);
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    pub fn compare(&self, other: &QuadExt) -> Result<Ordering> {
        self.check_radicand(other)?;
        Ok(match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    pub fn conj(&self) -> QuadExt {
        QuadExt { a: self.a.clone(), b: -&self.b, d: self.d }
    }

    /// Field norm `a² − b²d`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d)
    }

    pub fn recip(&self) -> QuadExt {
        let n = self.norm();
        assert!(!n.is_zero(), "reciprocal of zero");
        QuadExt { a: &self.a / &n, b: -(&self.b / &n), d: self.d }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (self.d as f64).sqrt()
    }

    fn check_radicand(&self, other: &QuadExt) -> Result<()> {
        if self.d != other.d {
            return Err(Error::RadicandMismatch { left: self.d, right: other.d });
        }
        Ok(())
    }

    fn same_d(&self, other: &QuadExt) -> u64 {
        if let Err(e) = self.check_radicand(other) {
            panic!("{e}");
        }
        self.d
    }
}

/// Exact sign of `x` as `-1`, `0` or `+1`.
pub fn qext_sign(x: &QuadExt) -> i8 {
    x.sign()
}

/// Exact ordering of two elements of the same quadratic field.
pub fn qext_compare(x: &QuadExt, y: &QuadExt) -> Result<Ordering> {
    x.compare(y)
}

forward_binop!(QuadExt, Add, add, |x, y| {
    let d = x.same_d(y);
    QuadExt { a: &x.a + &y.a, b: &x.b + &y.b, d }
});
forward_binop!(QuadExt, Sub, sub, |x, y| {
    let d = x.same_d(y);
    QuadExt { a: &x.a - &y.a, b: &x.b - &y.b, d }
});
forward_binop!(QuadExt, Mul, mul, |x, y| {
    let d = x.same_d(y);
    let dd = Rational::from_integer(d);
    QuadExt { a: &x.a * &y.a + &x.b * &y.b * dd, b: &x.a * &y.b + &x.b * &y.a, d }
});
forward_binop!(QuadExt, Div, div, |x, y| x * y.recip());

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -&self.a, b: -&self.b, d: self.d }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = format!("√{}", self.d);
        let b = self.b.abs();
        let term = if b == Rational::one() { root } else { format!("{b:?}·{root}") };
        match (self.a.is_zero(), self.b.signum() < 0) {
            (true, false) => write!(f, "{term}"),
            (true, true) => write!(f, "-{term}"),
            (false, false) => write!(f, "{:?} + {term}", self.a),
            (false, true) => write!(f, "{:?} - {term}", self.a),
        }
    }
}

/// The scalar type used for Gram entries and form values: a rational, or an
/// element of `Q(√d)` with non-zero irrational part.
///
/// Arithmetic between two `Quad` values with different radicands panics;
/// [`crate::forms::QForm::new`] rejects Grams that mix radicands, so this can
/// only happen through misuse of the bare operators.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Rational(Rational),
    Quad(QuadExt),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Rational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rational(Rational::from_integer(n))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::Rational(Rational::new(p, q))
    }

    /// `√k` for a non-negative integer `k`; rational when `k` is a square.
    pub fn sqrt_int(k: u64) -> Self {
        if is_perfect_square(k) {
            Scalar::Rational(Rational::from_integer(k.sqrt()))
        } else {
            Scalar::Quad(QuadExt { a: Rational::zero(), b: Rational::one(), d: k })
        }
    }

    fn normalize(q: QuadExt) -> Scalar {
        if q.b.is_zero() {
            Scalar::Rational(q.a)
        } else {
            Scalar::Quad(q)
        }
    }

    pub fn radicand(&self) -> Option<u64> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Quad(q) => Some(q.d),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Quad(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_integer())
    }

    pub fn sign(&self) -> i8 {
        match self {
            Scalar::Rational(r) => r.signum(),
            Scalar::Quad(q) => q.sign(),
        }
    }

    pub fn compare(&self, other: &Scalar) -> Result<Ordering> {
        if let (Some(a), Some(b)) = (self.radicand(), other.radicand()) {
            if a != b {
                return Err(Error::RadicandMismatch { left: a, right: b });
            }
        }
        Ok(match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    pub fn abs(&self) -> Scalar {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Quad(q) => Scalar::normalize(q.recip()),
        }
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64(),
            Scalar::Quad(q) => q.to_f64(),
        }
    }

    /// Largest integer not exceeding the value, decided exactly.
    pub fn floor(&self) -> BigInt {
        match self {
            Scalar::Rational(r) => r.floor(),
            Scalar::Quad(q) => {
                let guess = BigInt::from(q.to_f64().floor() as i64);
                let mut f = guess;
                while Scalar::from(Rational::from_integer(f.clone())) > *self {
                    f -= 1;
                }
                while Scalar::from(Rational::from_integer(&f + 1)) <= *self {
                    f += 1;
                }
                f
            }
        }
    }

    fn lift(&self, d: u64) -> QuadExt {
        match self {
            Scalar::Rational(r) => QuadExt { a: r.clone(), b: Rational::zero(), d },
            Scalar::Quad(q) => q.clone(),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rational(r)
    }
}

impl From<QuadExt> for Scalar {
    fn from(q: QuadExt) -> Self {
        Scalar::normalize(q)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::Rational(Rational::from_integer(n))
    }
}

impl From<&BigInt> for Scalar {
    fn from(n: &BigInt) -> Self {
        Scalar::Rational(Rational::from_integer(n.clone()))
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.compare(other).ok()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r:?}"),
            Scalar::Quad(q) => write!(f, "{q}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident) => {
        forward_binop!(Scalar, $trait, $method, |x, y| match (x, y) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a.$method(b)),
            (Scalar::Quad(q), other) | (other, Scalar::Quad(q)) => {
                let _ = other;
                Scalar::normalize(x.lift(q.d).$method(y.lift(q.d)))
            }
        });
    };
}

scalar_binop!(Add, add);
scalar_binop!(Sub, sub);
scalar_binop!(Mul, mul);
scalar_binop!(Div, div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Quad(q) => Scalar::Quad(-q),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Least common multiple of the denominators of a set of rationals.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}
