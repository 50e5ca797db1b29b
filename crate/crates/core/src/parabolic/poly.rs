//! Dense integer polynomials in one variable and 2x2 matrices over them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use twofloat::TwoFloat;

/// Coefficients in ascending degree, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: i64) -> Self {
        IntPolynomial::from_i64(&[c])
    }

    /// The variable `w`.
    pub fn var() -> Self {
        IntPolynomial::from_i64(&[0, 1])
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPolynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading().is_some_and(|l| l.is_negative()) {
            c = -c;
        }
        self.div_scalar(&c)
    }

    fn div_scalar(&self, d: &BigInt) -> IntPolynomial {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(d);
                    debug_assert!(r.is_zero(), "inexact scalar division");
                    q
                })
                .collect(),
        )
    }

    fn scale(&self, k: &BigInt) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    fn shift(&self, k: usize) -> IntPolynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs }
    }

    pub fn pow(&self, n: u32) -> IntPolynomial {
        let mut acc = IntPolynomial::constant(1);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `lc(v)^(deg u - deg v + 1) u mod v`.
    fn pseudo_remainder(&self, v: &IntPolynomial) -> IntPolynomial {
        let dv = v.degree().expect("nonzero divisor");
        let lv = v.leading().expect("nonzero divisor").clone();
        let mut r = self.clone();
        let Some(du) = self.degree() else { return r };
        if du < dv {
            return r;
        }
        let mut steps = du - dv + 1;
        while let Some(dr) = r.degree() {
            if dr < dv {
                break;
            }
            let lr = r.leading().expect("nonzero").clone();
            r = &r.scale(&lv) - &v.scale(&lr).shift(dr - dv);
            steps -= 1;
        }
        let tail = num_traits::pow(lv, steps);
        r.scale(&tail)
    }

    /// Greatest common divisor by the subresultant remainder sequence,
    /// normalized to a primitive polynomial with positive leading coefficient.
    pub fn gcd(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let (mut u, mut v) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = (u.degree().expect("nonzero") - v.degree().expect("nonzero")) as u32;
            let r = u.pseudo_remainder(&v);
            if r.is_zero() {
                return v.primitive_part();
            }
            if r.degree() == Some(0) {
                return IntPolynomial::constant(1);
            }
            let divisor = &g * num_traits::pow(h.clone(), delta as usize);
            u = v;
            v = r.div_scalar(&divisor);
            g = u.leading().expect("nonzero").clone();
            h = if delta == 0 {
                h
            } else {
                num_traits::pow(g.clone(), delta as usize) / num_traits::pow(h.clone(), delta as usize - 1)
            };
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
            acc * z + c.to_f64().unwrap_or(f64::NAN)
        })
    }

    pub fn eval_precise(&self, z: super::roots::PreciseComplex) -> super::roots::PreciseComplex {
        let zero = super::roots::PreciseComplex::new(TwoFloat::from(0.0), TwoFloat::from(0.0));
        self.coeffs.iter().rev().fold(zero, |acc, c| {
            let hi = c.to_f64().unwrap_or(f64::NAN);
            let lo = BigInt::from_f64(hi).map_or(0.0, |h| (c - h).to_f64().unwrap_or(0.0));
            acc * z + super::roots::PreciseComplex::new(TwoFloat::new_add(hi, lo), TwoFloat::from(0.0))
        })
    }

    pub fn eval_i64(&self, z: i64) -> BigInt {
        let z = BigInt::from(z);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &z + c)
    }

    /// `sum |c_i| |z|^i`, the natural scale for the residual at `z`.
    pub fn magnitude_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.to_f64().unwrap_or(f64::NAN).abs())
    }

    pub fn derivative(&self) -> IntPolynomial {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, o: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        let zero = BigInt::zero();
        IntPolynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + o.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, o: &IntPolynomial) -> IntPolynomial {
        self + &(-o)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, o: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || o.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl fmt::Display for IntPolynomial {
    /// Descending powers of `w`, e.g. `w^2 + 3w + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("w")?,
                _ => write!(f, "w^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for IntPolynomial {
    /// Ascending coefficients; ones that do not fit in an `i64` become strings.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            match c.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

/// `[[a, b], [c, d]]` over `Z[w]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix2 {
    pub a: IntPolynomial,
    pub b: IntPolynomial,
    pub c: IntPolynomial,
    pub d: IntPolynomial,
}

impl PolyMatrix2 {
    pub fn identity() -> Self {
        PolyMatrix2 {
            a: IntPolynomial::constant(1),
            b: IntPolynomial::zero(),
            c: IntPolynomial::zero(),
            d: IntPolynomial::constant(1),
        }
    }

    /// `[[1, 1], [0, 1]]`.
    pub fn x() -> Self {
        PolyMatrix2 {
            b: IntPolynomial::constant(1),
            ..PolyMatrix2::identity()
        }
    }

    /// `[[1, 0], [w, 1]]`.
    pub fn y() -> Self {
        PolyMatrix2 {
            c: IntPolynomial::var(),
            ..PolyMatrix2::identity()
        }
    }

    pub fn mul(&self, o: &PolyMatrix2) -> PolyMatrix2 {
        PolyMatrix2 {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    pub fn det(&self) -> IntPolynomial {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> IntPolynomial {
        &self.a + &self.d
    }

    /// The adjugate, which is the inverse whenever the determinant is 1.
    pub fn adjugate(&self) -> PolyMatrix2 {
        PolyMatrix2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn pow(&self, e: i64) -> PolyMatrix2 {
        let base = if e < 0 { self.adjugate() } else { self.clone() };
        let mut acc = PolyMatrix2::identity();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn minus_identity(&self) -> PolyMatrix2 {
        let one = IntPolynomial::constant(1);
        PolyMatrix2 {
            a: &self.a - &one,
            b: self.b.clone(),
            c: self.c.clone(),
            d: &self.d - &one,
        }
    }

    pub fn entries(&self) -> [&IntPolynomial; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 3, 1]).to_string(), "w^2 + 3w + 1");
        assert_eq!(p(&[2, -2]).to_string(), "-2w + 2");
        assert_eq!(p(&[]).to_string(), "0");
        assert_eq!(p(&[-1, 0, 0, 1]).to_string(), "w^3 - 1");
    }

    #[test]
    fn gcd_examples() {
        // (w + 1)(w - 2) and (w + 1)(w + 3)
        let a = &p(&[1, 1]) * &p(&[-2, 1]);
        let b = &p(&[1, 1]) * &p(&[3, 1]);
        assert_eq!(a.gcd(&b), p(&[1, 1]));
        assert_eq!(p(&[2, 4]).gcd(&p(&[0])), p(&[1, 2]));
        assert_eq!(p(&[1, 1]).gcd(&p(&[2, 1])), p(&[1]));
        // Knuth's classic subresultant example
        let u = p(&[-5, 2, 8, -3, -3, 0, 1, 0, 1]);
        let v = p(&[21, -9, -4, 0, 5, 0, 3]);
        assert_eq!(u.gcd(&v), p(&[1]));
    }

    #[test]
    fn generator_matrices() {
        assert_eq!(PolyMatrix2::x().det(), p(&[1]));
        assert_eq!(PolyMatrix2::y().det(), p(&[1]));
        assert_eq!(PolyMatrix2::y().pow(-1).mul(&PolyMatrix2::y()), PolyMatrix2::identity());
    }

    fn small_poly() -> impl Strategy<Value = IntPolynomial> {
        prop::collection::vec(-5i64..=5, 0..5).prop_map(|c| IntPolynomial::from_i64(&c))
    }

    proptest! {
        #[test]
        fn gcd_divides_both(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assume!(!c.is_zero() && c.degree() > Some(0));
            let (ac, bc) = (&a * &c, &b * &c);
            let g = ac.gcd(&bc);
            if !ac.is_zero() {
                prop_assert!(ac.pseudo_remainder(&g).is_zero());
            }
            if !bc.is_zero() {
                prop_assert!(bc.pseudo_remainder(&g).is_zero());
            }
            // the common factor survives
            prop_assert!(g.pseudo_remainder(&c.primitive_part()).is_zero());
        }

        #[test]
        fn det_multiplicative(word in prop::collection::vec((any::<bool>(), -3i64..=3), 0..8)) {
            let mut m = PolyMatrix2::identity();
            for (is_x, e) in word {
                let g = if is_x { PolyMatrix2::x() } else { PolyMatrix2::y() };
                m = m.mul(&g.pow(e));
            }
            prop_assert_eq!(m.det(), IntPolynomial::constant(1));
        }
    }
}
