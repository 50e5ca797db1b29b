//! Simultaneous-iteration root finding with Newton polishing.

use num_complex::{Complex, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use twofloat::TwoFloat;

use super::poly::IntPolynomial;
use super::{complex_pair, ParabolicError};

/// A complex number in double-double precision.
pub type PreciseComplex = Complex<TwoFloat>;

pub fn to_precise(z: Complex64) -> PreciseComplex {
    Complex::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
}

/// The leading `f64` part of each component.
pub fn to_f64(z: PreciseComplex) -> Complex64 {
    Complex64::new(z.re.hi(), z.im.hi())
}

const SEED: u64 = 0x5eed_0f_4007;
const MAX_ITERATIONS: usize = 2_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Root {
    #[serde(with = "complex_pair")]
    pub value: Complex64,
    /// Low-order parts: `value + low` is the root to double-double precision.
    #[serde(with = "complex_pair")]
    pub low: Complex64,
    /// `|p(z)| / sum |c_i| |z|^i`, evaluated in double-double.
    pub residual: f64,
}

impl Root {
    pub fn precise(&self) -> PreciseComplex {
        Complex::new(
            TwoFloat::new_add(self.value.re, self.low.re),
            TwoFloat::new_add(self.value.im, self.low.im),
        )
    }
}

fn relative_residual(p: &IntPolynomial, z: Complex64) -> f64 {
    let scale = p.magnitude_scale(z);
    if scale == 0.0 {
        0.0
    } else {
        p.eval(z).norm() / scale
    }
}

fn relative_residual_precise(p: &IntPolynomial, z: PreciseComplex) -> f64 {
    let scale = p.magnitude_scale(to_f64(z));
    if scale == 0.0 {
        0.0
    } else {
        to_f64(p.eval_precise(z)).norm() / scale
    }
}

/// All complex roots of `p`, repeated by multiplicity, each with relative
/// residual at most `tol`. Sorted by real then imaginary part.
pub fn polynomial_roots(p: &IntPolynomial, tol: f64) -> Result<Vec<Root>, ParabolicError> {
    let degree = p
        .degree()
        .filter(|d| *d >= 1)
        .ok_or(ParabolicError::ConstantPolynomial)?;
    let c = p.to_f64_coeffs();
    let lead = c[degree];
    let monic: Vec<Complex64> = c.iter().map(|x| Complex64::new(x / lead, 0.0)).collect();
    // Fujiwara's bound; the Cauchy bound 1 + max |c_i / c_n| overflows z^n
    // for high degrees with large coefficients.
    let radius = 2.0
        * (1..=degree)
            .map(|k| {
                let c = monic[degree - k].norm();
                if k == degree {
                    (c / 2.0).powf(1.0 / k as f64)
                } else {
                    c.powf(1.0 / k as f64)
                }
            })
            .fold(0.0, f64::max)
            .max(0.5);

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            let angle = std::f64::consts::TAU * (k as f64 + rng.gen_range(0.1..0.9)) / degree as f64;
            Complex64::from_polar(radius * rng.gen_range(0.5..1.0), angle)
        })
        .collect();

    let eval_monic = |x: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c);
    for _ in 0..MAX_ITERATIONS {
        let mut shift = 0.0f64;
        for i in 0..degree {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..degree {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-300, 0.0);
            }
            let delta = eval_monic(z[i]) / denom;
            z[i] -= delta;
            shift = shift.max(delta.norm() / (1.0 + z[i].norm()));
        }
        if shift < 1e-15 {
            break;
        }
    }

    let dp = p.derivative();
    for r in z.iter_mut() {
        for _ in 0..8 {
            let d = dp.eval(*r);
            if d.norm() == 0.0 {
                break;
            }
            let step = p.eval(*r) / d;
            let next = *r - step;
            if relative_residual(p, next) > relative_residual(p, *r) {
                break;
            }
            *r = next;
        }
    }

    let mut roots: Vec<Root> = z
        .into_iter()
        .map(|value| {
            let mut zp = to_precise(value);
            for _ in 0..4 {
                let d = dp.eval_precise(zp);
                if to_f64(d).norm() == 0.0 {
                    break;
                }
                let next = zp - p.eval_precise(zp) / d;
                if relative_residual_precise(p, next) > relative_residual_precise(p, zp) {
                    break;
                }
                zp = next;
            }
            // snap numerically real roots onto the real axis when that is no worse
            if zp.im.hi().abs() < 1e-12 * (1.0 + zp.re.hi().abs()) {
                let mut real = Complex::new(zp.re, TwoFloat::from(0.0));
                for _ in 0..4 {
                    let d = dp.eval_precise(real);
                    if to_f64(d).norm() == 0.0 {
                        break;
                    }
                    let next = real - p.eval_precise(real) / d;
                    real = Complex::new(next.re, TwoFloat::from(0.0));
                }
                if relative_residual_precise(p, real) <= relative_residual_precise(p, zp).max(1e-28) {
                    zp = real;
                }
            }
            let hi = to_f64(zp);
            let low = Complex64::new((zp.re - hi.re).hi(), (zp.im - hi.im).hi());
            Root {
                value: hi,
                low,
                residual: relative_residual_precise(p, zp),
            }
        })
        .collect();
    roots.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    if roots.iter().any(|r| !(r.residual <= tol)) {
        return Err(ParabolicError::ConvergenceFailure { partial: roots });
    }
    Ok(roots)
}
