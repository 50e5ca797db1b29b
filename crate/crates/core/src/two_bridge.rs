//! Two-bridge knot groups and the `x, a` rewrite.
//!
//! The presentation `<x, y | w x w^-1 y^-1>` uses the Schubert sign sequence
//! `e_i = (-1)^floor(i q / p)`. After orienting the relator so that `y` has
//! exponent sum `+1`, substituting `y = a x` turns it into a product of
//! conjugates `x^-k a^e x^k` whose signs sum to `+1`. Killing
//! `mu_n = x a^n` sets `x = a^-n`, and the relator collapses to the single
//! letter `a`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{Generator, Presentation, PresentationError, Word};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TwoBridgeError {
    #[error("invalid two-bridge parameters {p}/{q}: {reason}")]
    InvalidParameters { p: i64, q: i64, reason: &'static str },
    #[error("relator exponent sums ({x_sum}, {y_sum}) are not complementary units")]
    NotNormalizable { x_sum: i64, y_sum: i64 },
    #[error("expected a two-generator one-relator presentation")]
    NotTwoBridgeShape,
    #[error("relator is not a product of conjugates of a: {0}")]
    DecompositionFailure(String),
    #[error("collapse produced {0}, not a single letter a^(+-1)")]
    CollapseFailure(Word),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// The two-bridge knot `b(p, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoBridgeKnot {
    p: i64,
    q: i64,
}

impl TwoBridgeKnot {
    pub fn new(p: i64, q: i64) -> Result<Self, TwoBridgeError> {
        let invalid = |reason| TwoBridgeError::InvalidParameters { p, q, reason };
        if p < 3 {
            return Err(invalid("p must be at least 3"));
        }
        if p % 2 == 0 {
            return Err(invalid("p must be odd (even p gives a link)"));
        }
        if q <= 0 || q >= p {
            return Err(invalid("q must satisfy 0 < q < p"));
        }
        if p.gcd(&q) != 1 {
            return Err(invalid("p and q must be coprime"));
        }
        Ok(TwoBridgeKnot { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// The odd one of `q` and `p - q`. Both name the same knot up to
    /// mirror image, so the groups agree.
    pub fn odd_q(&self) -> i64 {
        if self.q % 2 == 1 {
            self.q
        } else {
            self.p - self.q
        }
    }

    /// Schubert signs `e_i = (-1)^floor(i q / p)`, `i = 1 .. p-1`, with `q`
    /// replaced by `p - q` when even. The sequence is palindromic.
    pub fn signs(&self) -> Vec<i64> {
        let q = self.odd_q();
        (1..self.p)
            .map(|i| if (i * q / self.p) % 2 == 0 { 1 } else { -1 })
            .collect()
    }

    /// All valid `(p, q)` with `3 <= p <= max_p`.
    pub fn all_up_to(max_p: i64) -> Vec<TwoBridgeKnot> {
        (3..=max_p)
            .step_by(2)
            .flat_map(|p| (1..p).filter_map(move |q| TwoBridgeKnot::new(p, q).ok()))
            .collect()
    }
}

impl fmt::Display for TwoBridgeKnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

pub fn generator_x() -> Generator {
    Generator::named("x")
}

pub fn generator_y() -> Generator {
    Generator::named("y")
}

pub fn generator_a() -> Generator {
    Generator::named("a")
}

/// The word `w = x^e1 y^e2 x^e3 ... y^e_{p-1}`.
pub fn schubert_word(k: &TwoBridgeKnot) -> Word {
    let (x, y) = (generator_x(), generator_y());
    Word::from_syllables(
        k.signs()
            .into_iter()
            .enumerate()
            .map(|(i, e)| (if i % 2 == 0 { x.clone() } else { y.clone() }, e)),
    )
}

/// `<x, y | w x w^-1 y^-1>`, both generators marked as meridians.
pub fn two_bridge_presentation(k: &TwoBridgeKnot) -> Presentation {
    let (x, y) = (generator_x(), generator_y());
    let w = schubert_word(k);
    let relator = w
        .concat(&Word::letter(&x))
        .concat(&w.inverse())
        .concat(&Word::power(&y, -1));
    Presentation::new(vec![x.clone(), y.clone()], vec![relator])
        .and_then(|p| p.with_meridians(vec![x, y]))
        .expect("two-bridge presentation is well formed")
}

fn xy_relator(p: &Presentation) -> Result<&Word, TwoBridgeError> {
    if p.generators() != [generator_x(), generator_y()] || p.relators().len() != 1 {
        return Err(TwoBridgeError::NotTwoBridgeShape);
    }
    Ok(&p.relators()[0])
}

/// Inverts the relator if needed so that `y` has exponent sum `+1` and `x`
/// has exponent sum `-1`. Generators are never swapped.
pub fn normalize_relator_orientation(p: &Presentation) -> Result<Presentation, TwoBridgeError> {
    let r = xy_relator(p)?;
    let (x_sum, y_sum) = (r.exponent_sum(&generator_x()), r.exponent_sum(&generator_y()));
    let r = match (x_sum, y_sum) {
        (-1, 1) => r.clone(),
        (1, -1) => r.inverse(),
        _ => return Err(TwoBridgeError::NotNormalizable { x_sum, y_sum }),
    };
    Ok(Presentation::new(p.generators().to_vec(), vec![r])?.with_meridians(p.meridians().to_vec())?)
}

/// One factor `x^-k a^e x^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugateTerm {
    pub k: i64,
    pub epsilon: i64,
}

/// A relator in `<x, a>` written as the product of conjugates
/// `prod_i x^-k_i a^e_i x^k_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XARelator {
    pub terms: Vec<ConjugateTerm>,
}

impl XARelator {
    pub fn epsilon_sum(&self) -> i64 {
        self.terms.iter().map(|t| t.epsilon).sum()
    }

    /// The freely reduced product of the conjugates.
    pub fn assemble(&self) -> Word {
        let (x, a) = (generator_x(), generator_a());
        Word::from_syllables(
            self.terms
                .iter()
                .flat_map(|t| [(x.clone(), -t.k), (a.clone(), t.epsilon), (x.clone(), t.k)]),
        )
    }
}

/// Substitutes `y := a x` into a normalized relator.
pub fn substitute_y(p: &Presentation) -> Result<Word, TwoBridgeError> {
    let r = xy_relator(p)?;
    let ax = Word::from_syllables([(generator_a(), 1), (generator_x(), 1)]);
    Ok(r.substitute(&generator_y(), &ax)?)
}

/// Greedy left-to-right decomposition of a word in `x, a` into conjugates of
/// `a^(+-1)`: each `a`-letter becomes a term whose `k` is minus the x-exponent
/// accumulated before it.
pub fn decompose_conjugates(word: &Word) -> Result<XARelator, TwoBridgeError> {
    let (x, a) = (generator_x(), generator_a());
    let mut prefix = 0i64;
    let mut terms = Vec::new();
    for s in word.syllables() {
        if s.generator == x {
            prefix += s.exponent;
        } else if s.generator == a {
            let epsilon = s.exponent.signum();
            for _ in 0..s.exponent.unsigned_abs() {
                terms.push(ConjugateTerm { k: -prefix, epsilon });
            }
        } else {
            return Err(TwoBridgeError::DecompositionFailure(format!(
                "unexpected generator {}",
                s.generator
            )));
        }
    }
    if prefix != 0 {
        return Err(TwoBridgeError::DecompositionFailure(format!(
            "x-exponent sum is {prefix}, not 0"
        )));
    }
    Ok(XARelator { terms })
}

/// Substitutes `y := a x` into a normalized two-bridge relator and decomposes
/// the result into conjugates of `a^(+-1)`.
pub fn rewrite_to_xa(p: &Presentation) -> Result<XARelator, TwoBridgeError> {
    let substituted = substitute_y(p)?;
    let xa = decompose_conjugates(&substituted)?;
    debug_assert_eq!(xa.assemble(), substituted);
    Ok(xa)
}

/// The presentation `<x, a | prod x^-k a^e x^k>` reached by adding
/// `a = y x^-1` and eliminating `y` with Tietze moves.
pub fn xa_presentation(p: &Presentation) -> Result<Presentation, TwoBridgeError> {
    let (x, y, a) = (generator_x(), generator_y(), generator_a());
    let with_a = p.tietze_add_generator(a.clone(), &Word::from_syllables([(y.clone(), 1), (x.clone(), -1)]))?;
    // the defining relator is a x y^-1
    let eliminated = with_a.tietze_eliminate(&y, 1)?;
    Ok(eliminated.reorder_generators(&[x, a])?)
}

/// Kills `mu_n = x a^n` symbolically: substitutes `x := a^-n` into the
/// assembled relator. For a valid relator the result is the letter `a`.
pub fn symbolic_collapse(r: &XARelator, n: i64) -> Result<Word, TwoBridgeError> {
    let (x, a) = (generator_x(), generator_a());
    let collapsed = r.assemble().substitute(&x, &Word::power(&a, -n))?;
    match collapsed.syllables() {
        [s] if s.generator == a && s.exponent.abs() == 1 => Ok(collapsed),
        _ => Err(TwoBridgeError::CollapseFailure(collapsed)),
    }
}

/// The pseudo-meridian `mu_n = x (y x^-1)^n` written over `x, a`: `x a^n`.
pub fn mu_xa(n: i64) -> Word {
    Word::from_syllables([(generator_x(), 1), (generator_a(), n)])
}
