//! Lorentz deformation of sign-reversed forms.
//!
//! Start from `v ∈ I_{n,1}` with `q(v) = −1`. Then `ℤⁿ⁺¹ = ℤv ⊕ v^⊥`, and
//! `SR(q, v)` is `I_{1,0} ⊕ v^⊥`, so `λ₁ = 1` and `λ₂² = k = λ₁(v^⊥)²`.
//! Pick a shortest `w ∈ v^⊥`. Tilting the reversal line inside the plane
//! `span(w, v)` to `u = r·w + v` (with `r²k < 1`) is the same as applying
//! the boost `A_s` of that plane, with
//!
//! ```text
//! t = s² = (1 + r√k) / (1 − r√k).
//! ```
//!
//! The boost stretches one null direction by `s` and shrinks the other by
//! `1/s`. On `v` it gives `SR(q, u)(v) = (t + 1/t)/2`, and on everything else
//! it loses at most a factor `t`, so
//!
//! ```text
//! λ₁(SR(q, u))² ≥ min{ (t + 1/t)/2, k/t }.
//! ```
//!
//! That lower bound is what [`DeformationReport::guaranteed_bound_squared`]
//! holds. The bound `min{t, k/t}` (optimal at `t = √k`, giving `√k`) is also
//! reported, as `naive_bound_squared`, but it is not valid: `v` itself has
//! value `(t + 1/t)/2 < t`. The real `λ₁²` is measured by enumeration.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{sign_reverse, standard_form, QForm, FORMAT_VERSION};
use crate::isometry::{is_isometric, IsometryOutcome};
use crate::lattice::{classify, splitting_witness, LatticeClass, Parity};
use crate::linalg::{int_serde, to_scalars, IntVector};
use crate::reduction::{
    shortest_vectors, successive_minima, upper_bound_tripwire, MinimaReport, SearchOptions,
};
use crate::scalars::{Rational, Scalar};

/// A hyperbolic plane `span(w, v)` inside `I_{n,1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneFrame {
    #[serde(with = "int_serde")]
    pub v: IntVector,
    #[serde(with = "int_serde")]
    pub w: IntVector,
    pub k: u64,
}

impl PlaneFrame {
    /// `n` in `I_{n,1}`.
    pub fn n(&self) -> usize {
        self.v.len() - 1
    }

    fn ambient(&self) -> QForm {
        standard_form(self.n(), 1).expect("n ≥ 1")
    }

    /// Checks `q(v) = −1`, `q(w) = k` and `Q(v, w) = 0`.
    pub fn verify(&self) -> Result<()> {
        let q = self.ambient();
        let ok = q.evaluate_int(&self.v)? == Scalar::int(-1)
            && q.evaluate_int(&self.w)? == Scalar::int(self.k as i64)
            && q.polarize_int(&self.v, &self.w)?.is_zero();
        if ok {
            Ok(())
        } else {
            Err(Error::Verification("frame violates q(v) = −1, q(w) = k, Q(v, w) = 0".into()))
        }
    }
}

/// Builds the frame of `v`: `w` is the canonical shortest vector of `v^⊥`.
pub fn build_frame(n: usize, v: &[BigInt], opts: &SearchOptions) -> Result<PlaneFrame> {
    let q = standard_form(n, 1)?;
    let qv = q.evaluate_int(v)?;
    if qv != Scalar::int(-1) {
        return Err(Error::InvalidParameter(format!("the frame vector needs q(v) = −1, got {qv}")));
    }
    let (complement, _) = splitting_witness(&q, v)?;
    let report = successive_minima(&complement.induced_gram, 1, opts)?;
    let w = complement.embed(&report.witnesses[0]);
    let k = report.minima_squared[0]
        .as_rational()
        .and_then(|r| r.numer().to_u64())
        .expect("integral complement");
    let frame = PlaneFrame { v: v.to_vec(), w, k };
    frame.verify()?;
    Ok(frame)
}

/// Exact checks of the planar model behind the deformation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarCertificate {
    pub s: Rational,
    /// Gram of `q₁ = SR(dx·dy, e₁ − e₂)`.
    pub q1: QForm,
    /// Gram of `q_s = SR(dx·dy, s·e₁ − e₂/s)`.
    pub qs: QForm,
    /// `q_s(e₁ − e₂) = (s² + s⁻²)/2`.
    pub qs_of_v: Scalar,
}

/// In the plane with `q = dx·dy`, checks that `A_s = diag(s, 1/s)` carries
/// `q₁` to `q_s`, and that `u_s = A_s(e₁ + e₂)`, `v_s = A_s(e₁ − e₂)` are
/// `q_s`-orthonormal.
pub fn planar_isometry_check(s: &Rational) -> Result<PlanarCertificate> {
    if s.signum() <= 0 {
        return Err(Error::InvalidParameter(format!("s must be positive, got {s}")));
    }
    let half = Scalar::ratio(1, 2);
    let q = QForm::new(vec![vec![Scalar::zero(), half.clone()], vec![half, Scalar::zero()]])?;
    let sc = Scalar::from(s.clone());
    let inv = sc.recip();
    let q1 = sign_reverse(&q, &[Scalar::one(), Scalar::int(-1)])?;
    let vs = vec![sc.clone(), -&inv];
    let us = vec![sc.clone(), inv.clone()];
    let qs = sign_reverse(&q, &vs)?;
    let a = [[sc, Scalar::zero()], [Scalar::zero(), inv]];
    for i in 0..2 {
        for j in 0..2 {
            let mut e = Scalar::zero();
            for k in 0..2 {
                for l in 0..2 {
                    e = e + &a[k][i] * qs.entry(k, l) * &a[l][j];
                }
            }
            if &e != q1.entry(i, j) {
                return Err(Error::Verification(format!("A_sᵀ·q_s·A_s ≠ q₁ at ({i}, {j}) for s = {s}")));
            }
        }
    }
    let unit = qs.evaluate(&us)? == Scalar::one()
        && qs.evaluate(&vs)? == Scalar::one()
        && qs.polarize(&us, &vs)?.is_zero();
    if !unit {
        return Err(Error::Verification(format!("u_s, v_s are not q_s-orthonormal for s = {s}")));
    }
    let qs_of_v = qs.evaluate(&[Scalar::one(), Scalar::int(-1)])?;
    Ok(PlanarCertificate { s: s.clone(), q1, qs, qs_of_v })
}

/// The line `A_s(v)` for a given `s²`, as `(s² − 1)·w + √k·(s² + 1)·v`.
pub fn deformed_line(frame: &PlaneFrame, s_squared: &Scalar) -> Result<Vec<Scalar>> {
    if s_squared.sign() <= 0 {
        return Err(Error::InvalidParameter(format!("s² must be positive, got {s_squared}")));
    }
    let a = s_squared - &Scalar::one();
    let b = Scalar::sqrt_int(frame.k) * (s_squared + &Scalar::one());
    let line: Vec<Scalar> = frame
        .w
        .iter()
        .zip(&frame.v)
        .map(|(w, v)| &a * &Scalar::from(w) + &b * &Scalar::from(v))
        .collect();
    check_negative(frame, &line)?;
    Ok(line)
}

/// The line `r·w + v`, scaled to the integer vector `p·w + q·v` for
/// `r = p/q`.
pub fn deformed_line_rational(frame: &PlaneFrame, r: &Rational) -> Result<Vec<Scalar>> {
    let (p, q) = (r.numer(), r.denom());
    let line: Vec<Scalar> =
        frame.w.iter().zip(&frame.v).map(|(w, v)| Scalar::from(w * p + v * q)).collect();
    check_negative(frame, &line)?;
    Ok(line)
}

fn check_negative(frame: &PlaneFrame, line: &[Scalar]) -> Result<()> {
    let norm = frame.ambient().evaluate(line)?;
    if norm.sign() >= 0 {
        return Err(Error::NonNegativeDirection { norm: norm.to_string() });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Sweep rational line ratios `r`.
    Rational,
    /// Use `s² = √k` exactly, in `Q(√k)`.
    QuadExt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformationReport {
    pub format_version: u32,
    pub frame: PlaneFrame,
    /// `r` with the line spanned by `r·w + v`.
    pub ratio: Scalar,
    /// `t = s²` of the boost.
    pub s_squared: Scalar,
    pub deformed_line: Vec<Scalar>,
    pub deformed_gram: QForm,
    pub determinant: Scalar,
    /// The exact `λ₁²` when `certified`; otherwise an upper bound (the
    /// smallest diagonal entry of the deformed Gram).
    pub lambda1_squared: Scalar,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minima: Option<MinimaReport>,
    /// `min{(t + 1/t)/2, k/t}`, a proven lower bound for `λ₁²`.
    pub guaranteed_bound_squared: Scalar,
    /// `min{t, k/t}`; not a valid lower bound, kept for comparison.
    pub naive_bound_squared: Scalar,
    /// `λ₂²` of the undeformed form, which is `k`.
    pub lambda2_before: Scalar,
    pub certified: bool,
}

/// The boost parameter and both bounds for a line in the frame plane.
struct LineData {
    ratio: Scalar,
    t: Scalar,
    guaranteed: Scalar,
    naive: Scalar,
}

fn line_data(frame: &PlaneFrame, line: &[Scalar]) -> Result<LineData> {
    let q = frame.ambient();
    let k = Scalar::int(frame.k as i64);
    // line = α·w + β·v with β = −Q(line, v) and α = Q(line, w)/k.
    let beta = -q.polarize(line, &to_scalars(&frame.v))?;
    let alpha = q.polarize(line, &to_scalars(&frame.w))? / &k;
    let in_plane = line
        .iter()
        .zip(frame.w.iter().zip(&frame.v))
        .all(|(x, (w, v))| *x == &alpha * &Scalar::from(w) + &beta * &Scalar::from(v));
    if !in_plane {
        return Err(Error::LineOutsidePlane);
    }
    let ratio = alpha / &beta;
    let rk = &ratio * &Scalar::sqrt_int(frame.k);
    let one = Scalar::one();
    let t = (&one + &rk) / (&one - &rk);
    let t = t.clone().max(t.recip());
    let guaranteed = ((&t + &t.recip()) * Scalar::ratio(1, 2)).min(&k / &t);
    let naive = t.clone().min(&k / &t);
    Ok(LineData { ratio, t, guaranteed, naive })
}

/// Sign-reverses `q_{n,1}` along `line` (a line in the frame plane) and
/// measures the result.
pub fn deform_and_measure(
    frame: &PlaneFrame,
    line: &[Scalar],
    opts: &SearchOptions,
) -> Result<DeformationReport> {
    let data = line_data(frame, line)?;
    let gram = sign_reverse(&frame.ambient(), line)?;
    let determinant = gram.determinant();
    if determinant != Scalar::one() {
        return Err(Error::Verification(format!("deformed Gram has determinant {determinant}")));
    }
    let (minima, lambda1_squared) = match successive_minima(&gram, 2, opts) {
        Ok(m) => {
            let l1 = m.minima_squared[0].clone();
            (Some(m), l1)
        }
        Err(Error::BudgetExceeded { .. }) => {
            let upper = (0..gram.dim()).map(|i| gram.entry(i, i).clone()).reduce(Scalar::min).expect("n ≥ 1");
            (None, upper)
        }
        Err(e) => return Err(e),
    };
    let certified = minima.is_some();
    if certified {
        if lambda1_squared < data.guaranteed {
            return Err(Error::Verification(format!(
                "λ₁² = {lambda1_squared} is below the proven bound {}",
                data.guaranteed
            )));
        }
        upper_bound_tripwire(&gram, &lambda1_squared)?;
    }
    Ok(DeformationReport {
        format_version: FORMAT_VERSION,
        frame: frame.clone(),
        ratio: data.ratio,
        s_squared: data.t,
        deformed_line: line.to_vec(),
        deformed_gram: gram,
        determinant,
        lambda1_squared,
        minima,
        guaranteed_bound_squared: data.guaranteed,
        naive_bound_squared: data.naive,
        lambda2_before: Scalar::int(frame.k as i64),
        certified,
    })
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    /// Ratios are `j/denominator`.
    pub denominator: u32,
    /// How many of the most promising ratios get a full enumeration.
    pub candidates: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { denominator: 256, candidates: 16 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub ratio: Rational,
    pub s_squared: Scalar,
    pub guaranteed_bound_squared: Scalar,
    /// Minimum of the deformed form on the lattice `ℤw + ℤv`: an upper bound
    /// for `λ₁²`.
    pub plane_minimum: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda1_squared: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimizationReport {
    pub format_version: u32,
    pub mode: Mode,
    pub epsilon: Rational,
    /// `(1 − ε)·√k`.
    pub target_squared: Scalar,
    pub target_met: bool,
    pub best: DeformationReport,
    /// The ratio that `s² = √k` corresponds to, `(√k − 1)/(k + √k)`.
    pub closed_form_ratio: Scalar,
    /// Whether the best swept ratio lies within one step of the closed form.
    pub closed_form_confirmed: bool,
    /// Whether the guaranteed bound rose and then fell along the sweep.
    pub guarantee_unimodal: bool,
    pub sweep: Vec<SweepPoint>,
}

/// Minimum of the binary form `[[a, b], [b, c]]` on `ℤ²` (Lagrange–Gauss
/// reduction).
fn binary_minimum(mut a: Rational, mut b: Rational, mut c: Rational) -> Rational {
    loop {
        if a > c {
            std::mem::swap(&mut a, &mut c);
        }
        let two = Rational::from_integer(2);
        // Nearest integer to b/a.
        let m = ((&b / &a) + Rational::new(1, 2)).floor();
        if m.is_zero() {
            return a;
        }
        let m = Rational::from_integer(m);
        c = &c - &(&two * &m * &b) + &(&m * &m * &a);
        b = &b - &(&m * &a);
        if (&two * &b).abs() <= a && a <= c {
            return a;
        }
    }
}

fn plane_minimum(frame: &PlaneFrame, r: &Rational) -> Rational {
    // Gram of SR(q, u), u = r·w + v, on the basis (w, v).
    let k = Rational::from_integer(frame.k as i64);
    let one = Rational::one();
    let two = Rational::from_integer(2);
    let m = r * r * &k - &one;
    let ww = &k - &(&two * r * r * &k * &k / &m);
    let vv = -&one - &(&two / &m);
    let wv = &two * r * &k / &m;
    binary_minimum(ww, wv, vv)
}

fn target(frame: &PlaneFrame, epsilon: &Rational) -> Scalar {
    Scalar::from(Rational::one() - epsilon) * Scalar::sqrt_int(frame.k)
}

fn closed_form_ratio(k: u64) -> Scalar {
    let rk = Scalar::sqrt_int(k);
    (&rk - &Scalar::one()) / (Scalar::int(k as i64) + &rk)
}

/// Looks for a line in the frame plane whose sign reversal has
/// `λ₁² ≥ (1 − ε)·√k`.
///
/// In [`Mode::QuadExt`] this is the single line `s² = √k`. In
/// [`Mode::Rational`] the ratios `r = j/N` are swept, each scored by its
/// plane minimum (a cheap upper bound for `λ₁²`); the best few are measured
/// in order until one reaches the target. `r = 0` is measured first, which
/// settles `k = 1` with no deformation.
pub fn optimize_deformation(
    frame: &PlaneFrame,
    epsilon: &Rational,
    mode: Mode,
    sweep: &SweepOptions,
    opts: &SearchOptions,
) -> Result<OptimizationReport> {
    if epsilon.signum() <= 0 {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    frame.verify()?;
    let goal = target(frame, epsilon);
    let closed = closed_form_ratio(frame.k);
    let finish = |best: DeformationReport, points: Vec<SweepPoint>, confirmed: bool, unimodal: bool| {
        let target_met = best.certified && best.lambda1_squared >= goal;
        OptimizationReport {
            format_version: FORMAT_VERSION,
            mode,
            epsilon: epsilon.clone(),
            target_squared: goal.clone(),
            target_met,
            best,
            closed_form_ratio: closed.clone(),
            closed_form_confirmed: confirmed,
            guarantee_unimodal: unimodal,
            sweep: points,
        }
    };

    if mode == Mode::QuadExt {
        let line = deformed_line(frame, &Scalar::sqrt_int(frame.k))?;
        let best = deform_and_measure(frame, &line, opts)?;
        return Ok(finish(best, Vec::new(), true, true));
    }

    let n_den = sweep.denominator.max(1) as i64;
    let k = frame.k as i64;
    // r = j/N with j²k < N².
    let ratios: Vec<Rational> =
        (0..).take_while(|&j: &i64| j * j * k < n_den * n_den).map(|j| Rational::new(j, n_den)).collect();
    let mut points: Vec<SweepPoint> = ratios
        .iter()
        .map(|r| -> Result<SweepPoint> {
            let line = deformed_line_rational(frame, r)?;
            let data = line_data(frame, &line)?;
            Ok(SweepPoint {
                ratio: r.clone(),
                s_squared: data.t,
                guaranteed_bound_squared: data.guaranteed,
                plane_minimum: plane_minimum(frame, r),
                lambda1_squared: None,
            })
        })
        .collect::<Result<_>>()?;
    let unimodal = is_unimodal(points.iter().map(|p| &p.guaranteed_bound_squared));

    let measure = |i: usize, points: &mut Vec<SweepPoint>| -> Result<DeformationReport> {
        let line = deformed_line_rational(frame, &points[i].ratio)?;
        let report = deform_and_measure(frame, &line, opts)?;
        if report.certified {
            points[i].lambda1_squared = Some(report.lambda1_squared.clone());
        }
        Ok(report)
    };

    let mut best = measure(0, &mut points)?;
    let mut best_index = 0;
    if !(best.certified && best.lambda1_squared >= goal) {
        let mut order: Vec<usize> = (1..points.len()).collect();
        order.sort_by(|&a, &b| points[b].plane_minimum.cmp(&points[a].plane_minimum).then(a.cmp(&b)));
        for &i in order.iter().take(sweep.candidates) {
            if best.certified && Scalar::from(points[i].plane_minimum.clone()) <= best.lambda1_squared {
                // The plane minimum bounds λ₁² from above: nothing left to gain.
                break;
            }
            let report = measure(i, &mut points)?;
            let better = report.certified
                && (!best.certified || report.lambda1_squared > best.lambda1_squared);
            if better {
                best = report;
                best_index = i;
            }
            if best.certified && best.lambda1_squared >= goal {
                break;
            }
        }
    }
    let step = Scalar::from(Rational::new(1, n_den));
    let confirmed = (&Scalar::from(points[best_index].ratio.clone()) - &closed).abs() <= step;
    Ok(finish(best, points, confirmed, unimodal))
}

fn is_unimodal<'a>(values: impl Iterator<Item = &'a Scalar>) -> bool {
    let v: Vec<&Scalar> = values.collect();
    let mut falling = false;
    for pair in v.windows(2) {
        if pair[1] < pair[0] {
            falling = true;
        } else if falling && pair[1] > pair[0] {
            return false;
        }
    }
    true
}

/// Certificate for the complement of a witness vector in `I_{n,1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementCertificate {
    pub format_version: u32,
    pub witness_norm: Scalar,
    pub rank: usize,
    pub class: LatticeClass,
    pub minimum: Scalar,
    /// Number of minimal vectors (both signs), when counted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal_vectors: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isometry: Option<IsometryOutcome>,
}

struct Expected {
    n: usize,
    minimum: i64,
    kissing: usize,
}

fn certify(
    v: &[BigInt],
    expected: &Expected,
    count_minimal: bool,
    opts: &SearchOptions,
) -> Result<(ComplementCertificate, QForm)> {
    let q = standard_form(expected.n, 1)?;
    let fail = |what: String| Err(Error::Verification(what));
    let witness_norm = q.evaluate_int(v)?;
    if witness_norm != Scalar::int(-1) {
        return fail(format!("q(witness) = {witness_norm}, expected −1"));
    }
    let (complement, _) = splitting_witness(&q, v)?;
    let gram = complement.induced_gram;
    let class = classify(&gram);
    if complement.basis.cols() != expected.n
        || class.parity != Parity::Even
        || class.determinant != Scalar::one()
        || !gram.is_positive_definite()
    {
        return fail(format!("complement is not even unimodular definite of rank {}: {class:?}", expected.n));
    }
    let minimum = successive_minima(&gram, 1, opts)?.minima_squared.remove(0);
    if minimum != Scalar::int(expected.minimum) {
        return fail(format!("complement minimum is {minimum}, expected {}", expected.minimum));
    }
    upper_bound_tripwire(&gram, &minimum)?;
    let minimal_vectors = if count_minimal {
        let count = 2 * shortest_vectors(&gram, &minimum, opts)?.len();
        if count != expected.kissing {
            return fail(format!("{count} minimal vectors, expected {}", expected.kissing));
        }
        Some(count)
    } else {
        None
    };
    let cert = ComplementCertificate {
        format_version: FORMAT_VERSION,
        witness_norm,
        rank: expected.n,
        class,
        minimum,
        minimal_vectors,
        isometry: None,
    };
    Ok((cert, gram))
}

/// Checks that `t^⊥` in `I_{24,1}` is even, unimodular, positive definite,
/// of rank 24 and minimum 4; with `count_minimal`, also that it has 196560
/// minimal vectors.
pub fn verify_lorentz_leech(
    t: &[BigInt],
    count_minimal: bool,
    opts: &SearchOptions,
) -> Result<ComplementCertificate> {
    let expected = Expected { n: 24, minimum: 4, kissing: 196_560 };
    Ok(certify(t, &expected, count_minimal, opts)?.0)
}

/// Checks that `v^⊥` in `I_{8,1}` is even, unimodular, of minimum 2 with
/// 240 roots, and isometric to `e8`.
pub fn verify_lorentz_e8(v: &[BigInt], e8: &QForm, opts: &SearchOptions) -> Result<ComplementCertificate> {
    let expected = Expected { n: 8, minimum: 2, kissing: 240 };
    let (mut cert, gram) = certify(v, &expected, true, opts)?;
    let outcome = is_isometric(&gram, e8, opts)?;
    if outcome.witness().is_none() {
        return Err(Error::Verification(format!("complement is not isometric to E8: {outcome:?}")));
    }
    cert.isometry = Some(outcome);
    Ok(cert)
}

/// Checks `SR(L ⊕ I_{0,1}, e) ≅ L ⊕ I_{1,0}`, where `e` spans the `I_{0,1}`
/// summand. Returns the isometry outcome.
pub fn sr_summand_identity(l: &QForm, opts: &SearchOptions) -> Result<IsometryOutcome> {
    let minus = QForm::from_int_rows(&[vec![-1]])?;
    let plus = QForm::from_int_rows(&[vec![1]])?;
    let ambient = crate::lattice::direct_sum(l, &minus)?;
    let mut e = vec![BigInt::zero(); l.dim() + 1];
    e[l.dim()] = BigInt::one();
    let reversed = crate::forms::sign_reverse_int(&ambient, &e)?;
    let expected = crate::lattice::direct_sum(l, &plus)?;
    is_isometric(&reversed, &expected, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ivec;

    fn e8_frame() -> PlaneFrame {
        build_frame(8, &ivec(&[1, 1, 1, 1, 1, 1, 1, 1, 3]), &SearchOptions::default()).unwrap()
    }

    #[test]
    fn frames() {
        let f = e8_frame();
        assert_eq!(f.k, 2);
        f.verify().unwrap();
        let trivial = build_frame(4, &ivec(&[0, 0, 0, 0, 1]), &SearchOptions::default()).unwrap();
        assert_eq!(trivial.k, 1);
        assert!(build_frame(2, &ivec(&[1, 0, 0]), &SearchOptions::default()).is_err());
    }

    #[test]
    fn planar_model() {
        let c = planar_isometry_check(&Rational::one()).unwrap();
        assert_eq!(c.q1, c.qs);
        let c = planar_isometry_check(&Rational::from_integer(2)).unwrap();
        assert_eq!(c.qs_of_v, Scalar::ratio(17, 8));
        let c = planar_isometry_check(&Rational::new(6, 5)).unwrap();
        assert_eq!(c.qs_of_v, Scalar::ratio(1921, 1800));
        assert!(planar_isometry_check(&Rational::zero()).is_err());
    }

    #[test]
    fn lines() {
        let f = e8_frame();
        let v: Vec<Scalar> = to_scalars(&f.v);
        let flat = deformed_line(&f, &Scalar::one()).unwrap();
        // s² = 1: the line is v (scaled by 2√2).
        let scale = Scalar::int(2) * Scalar::sqrt_int(2);
        assert!(flat.iter().zip(&v).all(|(a, b)| *a == &scale * b));
        let quad = deformed_line(&f, &Scalar::sqrt_int(2)).unwrap();
        assert!(standard_form(8, 1).unwrap().evaluate(&quad).unwrap().sign() < 0);
        let r = deformed_line_rational(&f, &Rational::new(1, 8)).unwrap();
        assert_eq!(standard_form(8, 1).unwrap().evaluate(&r).unwrap(), Scalar::int(2 - 64));
        assert!(deformed_line_rational(&f, &Rational::one()).is_err());
    }

    #[test]
    fn undeformed_baseline() {
        let f = e8_frame();
        let report = deform_and_measure(&f, &to_scalars(&f.v), &SearchOptions::default()).unwrap();
        let m = report.minima.unwrap();
        assert_eq!(m.minima_squared, vec![Scalar::one(), Scalar::int(2)]);
        assert_eq!(report.determinant, Scalar::one());
        assert_eq!(report.guaranteed_bound_squared, Scalar::one());
    }

    #[test]
    fn naive_bound_is_not_a_bound() {
        // r√2 = 1/7 gives t = 4/3 and min{t, k/t} = 4/3, but v itself has
        // value (t + 1/t)/2 = 25/24.
        let f = e8_frame();
        let r = Scalar::sqrt_int(2) * Scalar::ratio(1, 14);
        let line: Vec<Scalar> = f
            .w
            .iter()
            .zip(&f.v)
            .map(|(w, v)| &r * &Scalar::from(w) + Scalar::from(v))
            .collect();
        let report = deform_and_measure(&f, &line, &SearchOptions::default()).unwrap();
        assert_eq!(report.s_squared, Scalar::ratio(4, 3));
        assert_eq!(report.naive_bound_squared, Scalar::ratio(4, 3));
        assert_eq!(report.guaranteed_bound_squared, Scalar::ratio(25, 24));
        assert_eq!(report.deformed_gram.evaluate_int(&f.v).unwrap(), Scalar::ratio(25, 24));
        assert_eq!(report.lambda1_squared, Scalar::ratio(25, 24));
        assert!(report.lambda1_squared < report.naive_bound_squared);
    }

    #[test]
    fn line_outside_plane() {
        let f = e8_frame();
        let mut line = to_scalars(&f.v);
        line[0] = &line[0] + &Scalar::one();
        assert!(matches!(
            deform_and_measure(&f, &line, &SearchOptions::default()),
            Err(Error::LineOutsidePlane) | Err(Error::NonNegativeDirection { .. })
        ));
    }

    #[test]
    fn binary_minimum_examples() {
        let r = |p, q| Rational::new(p, q);
        assert_eq!(binary_minimum(r(4, 1), r(1, 1), r(1, 1)), r(1, 1));
        assert_eq!(binary_minimum(r(5, 1), r(7, 1), r(10, 1)), r(1, 1));
        assert_eq!(binary_minimum(r(2, 1), r(1, 1), r(2, 1)), r(2, 1));
    }

    #[test]
    fn unimodality_helper() {
        let s = |v: &[i64]| v.iter().map(|&x| Scalar::int(x)).collect::<Vec<_>>();
        assert!(is_unimodal(s(&[1, 2, 3, 2, 1]).iter()));
        assert!(!is_unimodal(s(&[1, 3, 2, 3]).iter()));
    }

    #[test]
    fn optimize_trivial_frame() {
        let f = build_frame(3, &ivec(&[0, 0, 0, 1]), &SearchOptions::default()).unwrap();
        let o = optimize_deformation(&f, &Rational::new(1, 50), Mode::Rational, &SweepOptions::default(), &SearchOptions::default()).unwrap();
        assert!(o.target_met);
        assert_eq!(o.best.ratio, Scalar::zero());
        assert_eq!(o.best.lambda1_squared, Scalar::one());
    }

    #[test]
    fn sr_summand_identity_small() {
        for n in 1..=4 {
            let out = sr_summand_identity(&standard_form(n, 0).unwrap(), &SearchOptions::default()).unwrap();
            assert!(out.witness().is_some());
        }
    }
}
