//! Parabolic representations of two-bridge knot groups: the Riley
//! polynomial, traces of `X (Y X^-1)^n`, and distinct-trace certificates.

mod poly;
mod roots;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::two_bridge::{generator_x, two_bridge_presentation, TwoBridgeKnot};
use crate::words::Word;

pub use poly::{IntPolynomial, PolyMatrix2};
pub use roots::{polynomial_roots, to_precise, PreciseComplex, Root};

use num_traits::{Num, One, Zero};

/// Relative residual accepted for a numeric root.
pub const ROOT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum ParabolicError {
    #[error("relator image is the identity for every w")]
    DegenerateRelator,
    #[error("Riley polynomial has degree {actual}, expected {expected}")]
    UnexpectedDegree { expected: usize, actual: usize },
    #[error("polynomial has no roots")]
    ConstantPolynomial,
    #[error("root finder did not converge")]
    ConvergenceFailure { partial: Vec<Root> },
    #[error("lambda = -1, closed form undefined")]
    DegenerateLambda,
    #[error("sequence length must be at least 1")]
    EmptySequence,
}

/// Serializes a complex number as `[re, im]`.
pub mod complex_pair {
    use num_complex::Complex64;
    use serde::{Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }
}

/// Serializes a slice of complex numbers as `[[re, im], ...]`.
pub mod complex_pairs {
    use num_complex::Complex64;
    use serde::{Serialize, Serializer};

    pub fn serialize<S: Serializer>(zs: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        zs.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
    }
}

pub type Mat2 = [[Complex64; 2]; 2];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[c(0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Inverse of a determinant-one matrix.
fn mat_inv(a: &Mat2) -> Mat2 {
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

pub fn mat_det(a: &Mat2) -> Complex64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub fn mat_trace(a: &Mat2) -> Complex64 {
    a[0][0] + a[1][1]
}

/// `X = [[1, 1], [0, 1]]`, `Y = [[1, 0], [omega, 1]]`.
pub fn parabolic_matrices(omega: Complex64) -> (Mat2, Mat2) {
    (
        [[c(1.0), c(1.0)], [c(0.0), c(1.0)]],
        [[c(1.0), c(0.0)], [omega, c(1.0)]],
    )
}

fn eval_word_poly(w: &Word) -> PolyMatrix2 {
    let gx = generator_x();
    let mut acc = PolyMatrix2::identity();
    for s in w.syllables() {
        let m = if s.generator == gx {
            PolyMatrix2::x()
        } else {
            PolyMatrix2::y()
        };
        acc = acc.mul(&m.pow(s.exponent));
    }
    acc
}

/// The image of the two-bridge relator under the parabolic assignment.
pub fn relator_image(k: &TwoBridgeKnot) -> PolyMatrix2 {
    eval_word_poly(&two_bridge_presentation(k).relators()[0])
}

type GenericMat<T> = [[T; 2]; 2];

fn generic_mul<T: Clone + Num>(a: &GenericMat<T>, b: &GenericMat<T>) -> GenericMat<T> {
    let e = |i: usize, j: usize| a[i][0].clone() * b[0][j].clone() + a[i][1].clone() * b[1][j].clone();
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn generic_eval<T: Clone + Num>(w: &Word, omega: T) -> GenericMat<T> {
    let (o, z) = (T::one(), T::zero());
    let x = [[o.clone(), o.clone()], [z.clone(), o.clone()]];
    let xi = [[o.clone(), z.clone() - o.clone()], [z.clone(), o.clone()]];
    let y = [[o.clone(), z.clone()], [omega.clone(), o.clone()]];
    let yi = [[o.clone(), z.clone()], [z.clone() - omega, o.clone()]];
    let gx = generator_x();
    let mut acc = [[o.clone(), z.clone()], [z, o]];
    for s in w.syllables() {
        let m = match (s.generator == gx, s.exponent > 0) {
            (true, true) => &x,
            (true, false) => &xi,
            (false, true) => &y,
            (false, false) => &yi,
        };
        for _ in 0..s.exponent.unsigned_abs() {
            acc = generic_mul(&acc, m);
        }
    }
    acc
}

/// `max |rho(relator) - I|` at `omega`, evaluated in double-double.
pub fn representation_defect(k: &TwoBridgeKnot, omega: PreciseComplex) -> f64 {
    let m = generic_eval(&two_bridge_presentation(k).relators()[0], omega);
    let mut worst = 0.0f64;
    for (i, row) in m.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            let target = if i == j {
                PreciseComplex::one()
            } else {
                PreciseComplex::zero()
            };
            worst = worst.max(roots::to_f64(*z - target).norm());
        }
    }
    worst
}

/// The gcd of the entries of `rho(relator) - I` over `Z[w]`, primitive with
/// positive leading coefficient. Its roots are exactly the `omega` for which
/// the assignment is a representation.
pub fn riley_polynomial(k: &TwoBridgeKnot) -> Result<IntPolynomial, ParabolicError> {
    let defect = relator_image(k).minus_identity();
    let g = defect
        .entries()
        .into_iter()
        .fold(IntPolynomial::zero(), |acc, e| acc.gcd(e));
    if g.is_zero() {
        return Err(ParabolicError::DegenerateRelator);
    }
    let expected = ((k.p() - 1) / 2) as usize;
    let actual = g.degree().unwrap_or(0);
    if actual != expected {
        return Err(ParabolicError::UnexpectedDegree { expected, actual });
    }
    Ok(g)
}

#[derive(Clone, Debug, Serialize)]
pub struct ParabolicAssignment {
    #[serde(with = "complex_pair")]
    pub omega: Complex64,
    #[serde(skip)]
    pub precise_omega: PreciseComplex,
    pub source_poly: IntPolynomial,
    pub root_residual: f64,
}

/// Every root of the Riley polynomial as a parabolic assignment.
pub fn riley_roots(k: &TwoBridgeKnot) -> Result<Vec<ParabolicAssignment>, ParabolicError> {
    let phi = riley_polynomial(k)?;
    Ok(polynomial_roots(&phi, ROOT_TOLERANCE)?
        .into_iter()
        .map(|r| ParabolicAssignment {
            omega: r.value,
            precise_omega: r.precise(),
            source_poly: phi.clone(),
            root_residual: r.residual,
        })
        .collect())
}

/// `trace(X (Y X^-1)^n)`, by literal matrix products.
pub fn trace_direct(omega: Complex64, n: u32) -> Complex64 {
    let (x, y) = parabolic_matrices(omega);
    let step = mat_mul(&y, &mat_inv(&x));
    let mut m = x;
    for _ in 0..n {
        m = mat_mul(&m, &step);
    }
    mat_trace(&m)
}

/// `trace(X (Y X^-1)^n)` as a polynomial in `w`, by literal products.
pub fn symbolic_trace_direct(n: u32) -> IntPolynomial {
    let step = PolyMatrix2::y().mul(&PolyMatrix2::x().adjugate());
    let mut m = PolyMatrix2::x();
    for _ in 0..n {
        m = m.mul(&step);
    }
    m.trace()
}

/// `tau_n` as a polynomial in `w` via `tau_n = (2 - w) tau_{n-1} - tau_{n-2}`.
pub fn symbolic_trace_recurrence(n: u32) -> IntPolynomial {
    let coeff = IntPolynomial::from_i64(&[2, -1]);
    let mut prev = IntPolynomial::constant(2);
    let mut cur = IntPolynomial::constant(2);
    for _ in 1..n {
        let next = &(&coeff * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceSequence {
    #[serde(with = "complex_pair")]
    pub omega: Complex64,
    #[serde(with = "complex_pairs")]
    pub values: Vec<Complex64>,
    #[serde(with = "complex_pair")]
    pub lambda: Complex64,
}

/// `tau_0 .. tau_n_max` from the recurrence with `tau_0 = tau_1 = 2`.
pub fn trace_recurrence(omega: Complex64, n_max: usize) -> Result<TraceSequence, ParabolicError> {
    if n_max < 1 {
        return Err(ParabolicError::EmptySequence);
    }
    let coeff = c(2.0) - omega;
    let mut values = vec![c(2.0), c(2.0)];
    for n in 2..=n_max {
        values.push(coeff * values[n - 1] - values[n - 2]);
    }
    Ok(TraceSequence {
        omega,
        values,
        lambda: characteristic_roots(omega).0,
    })
}

/// Roots of `x^2 + (omega - 2) x + 1`, the first with `|lambda| >= 1`
/// (ties broken toward nonnegative imaginary part).
pub fn characteristic_roots(omega: Complex64) -> (Complex64, Complex64) {
    let b = omega - 2.0;
    let disc = (b * b - 4.0).sqrt();
    let r1 = (-b + disc) / 2.0;
    let r2 = (-b - disc) / 2.0;
    let (n1, n2) = (r1.norm(), r2.norm());
    let first_is_lambda = if (n1 - n2).abs() > 1e-12 * (1.0 + n1.max(n2)) {
        n1 > n2
    } else {
        r1.im >= r2.im
    };
    if first_is_lambda {
        (r1, r2)
    } else {
        (r2, r1)
    }
}

/// `2 (s^(2n-1) + s^(1-2n)) / (s + 1/s)` with `s` the principal square
/// root of `lambda`. Valid for all integers `n`.
pub fn closed_form_trace(omega: Complex64, n: i64) -> Result<Complex64, ParabolicError> {
    let (lambda, _) = characteristic_roots(omega);
    let eps = 1e-12;
    if (lambda + 1.0).norm() < eps {
        return Err(ParabolicError::DegenerateLambda);
    }
    if (lambda - 1.0).norm() < eps {
        return Ok(c(2.0));
    }
    let s = lambda.sqrt();
    let k = (2 * n - 1) as i32;
    Ok(2.0 * (s.powi(k) + s.powi(-k)) / (s + s.inv()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootClass {
    NonReal,
    RealNegative,
    /// Real in `(0, 4]`, the only window where `|lambda| = 1` is possible.
    RealPositiveUnitCase,
    RealOther,
}

impl RootClass {
    /// Whether `|lambda| != 1` is guaranteed, so traces grow exponentially.
    pub fn guarantees_growth(&self) -> bool {
        matches!(self, RootClass::NonReal | RootClass::RealNegative)
    }
}

pub fn classify_root(omega: Complex64) -> RootClass {
    if omega.im.abs() > 1e-8 * (1.0 + omega.norm()) {
        RootClass::NonReal
    } else if omega.re < 0.0 {
        RootClass::RealNegative
    } else if omega.re > 0.0 && omega.re <= 4.0 {
        RootClass::RealPositiveUnitCase
    } else {
        RootClass::RealOther
    }
}

/// Pairwise-distinct traces `tau_2 .. tau_N`, each with the forward error
/// bound `3 n eps max_{k<=n} |tau_k|` of the recurrence.
#[derive(Clone, Debug, Serialize)]
pub struct DistinctTraceCertificate {
    #[serde(with = "complex_pair")]
    pub omega: Complex64,
    pub first: usize,
    pub last: usize,
    #[serde(with = "complex_pairs")]
    pub traces: Vec<Complex64>,
    pub error_bounds: Vec<f64>,
    /// Smallest `|tau_i - tau_j|` over all pairs.
    pub min_separation: f64,
    /// Smallest `|tau_i - tau_j| / (e_i + e_j)` over all pairs; exceeds 10.
    pub min_ratio: f64,
}

impl DistinctTraceCertificate {
    pub fn trace(&self, n: usize) -> Option<Complex64> {
        n.checked_sub(self.first).and_then(|i| self.traces.get(i)).copied()
    }

    /// Recomputes the traces and rechecks every pair.
    pub fn replay(&self) -> Result<(), String> {
        let fresh = distinct_trace_certificate(self.omega, self.last);
        match fresh {
            TraceCertificateResult::Certified(c) if c.traces == self.traces && c.error_bounds == self.error_bounds => {
                Ok(())
            }
            TraceCertificateResult::Certified(_) => Err("recomputed traces differ".into()),
            TraceCertificateResult::Inconclusive { .. } => Err("pairs not separated on recomputation".into()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TraceCertificateResult {
    Certified(DistinctTraceCertificate),
    /// Some pair is within its error bound. This does not mean conjugate.
    Inconclusive {
        first_close_pair: (usize, usize),
        separation: f64,
        bound: f64,
    },
}

/// Certificate that `tau_2, .., tau_n_max` are pairwise distinct, so the
/// corresponding `mu_n` are pairwise nonconjugate.
pub fn distinct_trace_certificate(omega: Complex64, n_max: usize) -> TraceCertificateResult {
    let first = 2;
    let seq = match trace_recurrence(omega, n_max.max(first)) {
        Ok(s) => s,
        Err(_) => unreachable!("length at least 2"),
    };
    let mut running_max = 0.0f64;
    let mut bounds = Vec::with_capacity(seq.values.len());
    for (n, t) in seq.values.iter().enumerate() {
        running_max = running_max.max(t.norm());
        bounds.push(3.0 * (n.max(1)) as f64 * f64::EPSILON * running_max);
    }
    let traces = seq.values[first..].to_vec();
    let error_bounds = bounds[first..].to_vec();
    let mut min_separation = f64::INFINITY;
    let mut min_ratio = f64::INFINITY;
    for i in 0..traces.len() {
        for j in i + 1..traces.len() {
            let sep = (traces[i] - traces[j]).norm();
            let bound = error_bounds[i] + error_bounds[j];
            if !(sep > 10.0 * bound) {
                return TraceCertificateResult::Inconclusive {
                    first_close_pair: (i + first, j + first),
                    separation: sep,
                    bound,
                };
            }
            min_separation = min_separation.min(sep);
            min_ratio = min_ratio.min(sep / bound);
        }
    }
    TraceCertificateResult::Certified(DistinctTraceCertificate {
        omega,
        first,
        last: n_max.max(first),
        traces,
        error_bounds,
        min_separation,
        min_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k(p: i64, q: i64) -> TwoBridgeKnot {
        TwoBridgeKnot::new(p, q).unwrap()
    }

    #[test]
    fn small_riley_polynomials() {
        assert_eq!(riley_polynomial(&k(3, 1)).unwrap(), IntPolynomial::from_i64(&[1, 1]));
        assert_eq!(riley_polynomial(&k(5, 1)).unwrap(), IntPolynomial::from_i64(&[1, 3, 1]));
        let fig8 = riley_polynomial(&k(5, 3)).unwrap();
        assert_eq!(fig8.degree(), Some(2));
        let roots = riley_roots(&k(5, 3)).unwrap();
        assert!(roots.iter().all(|r| classify_root(r.omega) == RootClass::NonReal));
        for r in roots {
            assert!(representation_defect(&k(5, 3), r.precise_omega) < 1e-20);
        }
    }

    #[test]
    fn riley_roots_are_representations() {
        for knot in TwoBridgeKnot::all_up_to(25) {
            let phi = riley_polynomial(&knot).unwrap();
            assert_eq!(phi.degree(), Some(((knot.p() - 1) / 2) as usize));
            for r in riley_roots(&knot).unwrap() {
                assert!(
                    representation_defect(&knot, r.precise_omega) < 1e-8,
                    "{knot} at {}",
                    r.omega
                );
                if knot.q() == 1 {
                    assert!(r.omega.im == 0.0 && r.omega.re < 0.0, "{knot} at {}", r.omega);
                }
            }
            if knot.q() == 1 {
                assert!(phi.coefficients().iter().all(|c| c > &0.into()), "{knot}: {phi}");
            }
        }
    }

    #[test]
    fn symbolic_trace_table() {
        assert_eq!(symbolic_trace_recurrence(0), IntPolynomial::constant(2));
        assert_eq!(symbolic_trace_recurrence(1), IntPolynomial::constant(2));
        assert_eq!(symbolic_trace_recurrence(2), IntPolynomial::from_i64(&[2, -2]));
        assert_eq!(symbolic_trace_recurrence(3), IntPolynomial::from_i64(&[2, -6, 2]));
        assert_eq!(symbolic_trace_recurrence(4), IntPolynomial::from_i64(&[2, -12, 10, -2]));
        for n in 0..=12 {
            assert_eq!(symbolic_trace_direct(n), symbolic_trace_recurrence(n), "n = {n}");
        }
    }

    #[test]
    fn trefoil_traces() {
        let seq = trace_recurrence(c(-1.0), 5).unwrap();
        let re: Vec<f64> = seq.values.iter().map(|z| z.re).collect();
        assert_eq!(re, vec![2.0, 2.0, 4.0, 10.0, 26.0, 68.0]);
        assert!((trace_direct(c(-1.0), 4) - 26.0).norm() < 1e-12);
        assert!((seq.lambda.re - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((closed_form_trace(c(-1.0), 4).unwrap() - 26.0).norm() < 1e-9);
    }

    #[test]
    fn degenerate_cases() {
        let seq = trace_recurrence(c(0.0), 20).unwrap();
        assert!(seq.values.iter().all(|z| *z == c(2.0)));
        assert_eq!(characteristic_roots(c(0.0)).0, c(1.0));
        let (l, li) = characteristic_roots(c(2.0));
        assert!((l.norm() - 1.0).abs() < 1e-12 && l.im > 0.0 && (l * li - 1.0).norm() < 1e-12);
        assert!(matches!(
            closed_form_trace(c(4.0), 3),
            Err(ParabolicError::DegenerateLambda)
        ));
        assert!(matches!(
            distinct_trace_certificate(c(0.0), 10),
            TraceCertificateResult::Inconclusive { .. }
        ));
        assert_eq!(classify_root(c(-1.0)), RootClass::RealNegative);
        assert_eq!(classify_root(c(2.0)), RootClass::RealPositiveUnitCase);
        assert_eq!(classify_root(c(5.0)), RootClass::RealOther);
        assert!(trace_recurrence(c(1.0), 0).is_err());
    }

    #[test]
    fn certificates() {
        let TraceCertificateResult::Certified(cert) = distinct_trace_certificate(c(-1.0), 50) else {
            panic!()
        };
        assert_eq!(cert.trace(2), Some(c(4.0)));
        assert_eq!(cert.trace(5), Some(c(68.0)));
        cert.replay().unwrap();
        for r in riley_roots(&k(5, 3)).unwrap() {
            let TraceCertificateResult::Certified(cert) = distinct_trace_certificate(r.omega, 50) else {
                panic!()
            };
            cert.replay().unwrap();
        }
    }

    fn omega_strategy() -> impl Strategy<Value = Complex64> {
        (0.0f64..5.0, 0.0f64..std::f64::consts::TAU)
            .prop_map(|(r, t)| Complex64::from_polar(r, t))
            .prop_filter("lambda away from +-1", |w| {
                let (l, _) = characteristic_roots(*w);
                (l - 1.0).norm() > 0.05 && (l + 1.0).norm() > 0.05
            })
    }

    proptest! {
        #[test]
        fn three_trace_computations_agree(omega in omega_strategy()) {
            let seq = trace_recurrence(omega, 30).unwrap();
            for n in 0..=30usize {
                let direct = trace_direct(omega, n as u32);
                let closed = closed_form_trace(omega, n as i64).unwrap();
                let rec = seq.values[n];
                let scale = direct.norm().max(1.0);
                prop_assert!((direct - rec).norm() <= 1e-6 * scale);
                prop_assert!((direct - closed).norm() <= 1e-6 * scale);
            }
        }

        #[test]
        fn closed_form_symmetry(omega in omega_strategy(), n in -10i64..=10) {
            let a = closed_form_trace(omega, n).unwrap();
            let b = closed_form_trace(omega, 1 - n).unwrap();
            prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0));
        }

        #[test]
        fn characteristic_product_is_one(omega in omega_strategy()) {
            let (l, li) = characteristic_roots(omega);
            prop_assert!((l * li - 1.0).norm() < 1e-12 * l.norm().max(1.0));
            prop_assert!(l.norm() >= 1.0 - 1e-12);
            prop_assert!((l + li - (2.0 - omega)).norm() < 1e-12 * l.norm().max(1.0));
        }
    }
}
