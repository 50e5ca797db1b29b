//! Free-group words and finitely presented groups.
//!
//! Words are stored run-length encoded as `(generator, exponent)` syllables
//! and are always freely reduced. Inversion reverses the syllable order and
//! negates every exponent; every module downstream relies on that convention.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::Abelianization;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("generator name {0:?} is not a valid identifier")]
    InvalidGeneratorName(String),
    #[error("generator {0} is declared twice")]
    DuplicateGenerator(Generator),
    #[error("generator {0} is not declared")]
    UndeclaredGenerator(Generator),
    #[error("replacement word for {0} mentions {0}")]
    SelfReferentialSubstitution(Generator),
    #[error("relator {index} cannot be solved for {generator}: {reason}")]
    NotSolvable {
        generator: Generator,
        index: usize,
        reason: &'static str,
    },
    #[error("x and y of a pseudo-meridian family must differ (both are {0})")]
    DegenerateFamily(Generator),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A generator symbol. Cheap to clone; compared by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(Arc<str>);

impl Generator {
    pub fn new(name: &str) -> Result<Self, PresentationError> {
        let mut chars = name.chars();
        let valid = match chars.next() {
            Some(c) if c.is_alphabetic() || c == '_' => chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\''),
            _ => false,
        };
        if !valid {
            return Err(PresentationError::InvalidGeneratorName(name.to_string()));
        }
        Ok(Generator(name.into()))
    }

    /// Builds a generator from a name known to be valid.
    ///
    /// Panics on invalid names; meant for literals in code and tests.
    pub fn named(name: &str) -> Self {
        Self::new(name).expect("invalid generator literal")
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Generator::new(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub generator: Generator,
    pub exponent: i64,
}

/// A freely reduced word in the free group on some generators.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    syllables: Vec<Syllable>,
}

/// Freely reduces a raw syllable list.
///
/// Adjacent syllables over the same generator are merged and zero exponents
/// dropped, repeatedly, using a stack.
pub fn free_reduce<I>(raw: I) -> Word
where
    I: IntoIterator<Item = (Generator, i64)>,
{
    let mut stack: Vec<Syllable> = Vec::new();
    for (generator, exponent) in raw {
        if exponent == 0 {
            continue;
        }
        match stack.last_mut() {
            Some(top) if top.generator == generator => {
                top.exponent += exponent;
                if top.exponent == 0 {
                    stack.pop();
                }
            }
            _ => stack.push(Syllable { generator, exponent }),
        }
    }
    Word { syllables: stack }
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn letter(g: &Generator) -> Self {
        Self::power(g, 1)
    }

    pub fn power(g: &Generator, exponent: i64) -> Self {
        free_reduce([(g.clone(), exponent)])
    }

    pub fn from_syllables<I>(raw: I) -> Self
    where
        I: IntoIterator<Item = (Generator, i64)>,
    {
        free_reduce(raw)
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters, i.e. the sum of absolute exponents.
    pub fn letter_len(&self) -> u64 {
        self.syllables.iter().map(|s| s.exponent.unsigned_abs()).sum()
    }

    pub fn inverse(&self) -> Self {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    generator: s.generator.clone(),
                    exponent: -s.exponent,
                })
                .collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Self {
        free_reduce(
            self.syllables
                .iter()
                .chain(other.syllables.iter())
                .map(|s| (s.generator.clone(), s.exponent)),
        )
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `self * other * self^-1`
    pub fn conjugate_by(&self, conjugator: &Word) -> Self {
        conjugator.concat(self).concat(&conjugator.inverse())
    }

    /// A cyclically reduced conjugate: first and last syllables never share
    /// a generator unless the word is a single syllable.
    pub fn cyclically_reduced(&self) -> Word {
        let mut syl: Vec<(Generator, i64)> = self
            .syllables
            .iter()
            .map(|s| (s.generator.clone(), s.exponent))
            .collect();
        while syl.len() >= 2 && syl[0].0 == syl[syl.len() - 1].0 {
            let (_, e) = syl.pop().expect("nonempty");
            syl[0].1 += e;
            if syl[0].1 == 0 {
                syl.remove(0);
            }
        }
        Word::from_syllables(syl)
    }

    pub fn exponent_sum(&self, g: &Generator) -> i64 {
        self.syllables
            .iter()
            .filter(|s| &s.generator == g)
            .map(|s| s.exponent)
            .sum()
    }

    pub fn generators(&self) -> BTreeSet<Generator> {
        self.syllables.iter().map(|s| s.generator.clone()).collect()
    }

    pub fn mentions(&self, g: &Generator) -> bool {
        self.syllables.iter().any(|s| &s.generator == g)
    }

    /// Replaces every occurrence of `g^e` by `replacement^e`.
    pub fn substitute(&self, g: &Generator, replacement: &Word) -> Result<Word, PresentationError> {
        if replacement.mentions(g) {
            return Err(PresentationError::SelfReferentialSubstitution(g.clone()));
        }
        let mut map = BTreeMap::new();
        map.insert(g.clone(), replacement.clone());
        Ok(self.substitute_all(&map))
    }

    /// Simultaneous substitution; generators absent from `map` are kept.
    pub fn substitute_all(&self, map: &BTreeMap<Generator, Word>) -> Word {
        let mut raw = Vec::new();
        for s in &self.syllables {
            match map.get(&s.generator) {
                Some(repl) => {
                    let piece = if s.exponent < 0 { repl.inverse() } else { repl.clone() };
                    for _ in 0..s.exponent.unsigned_abs() {
                        raw.extend(piece.syllables.iter().map(|t| (t.generator.clone(), t.exponent)));
                    }
                }
                None => raw.push((s.generator.clone(), s.exponent)),
            }
        }
        free_reduce(raw)
    }

    /// Parses syllable notation such as `x^-2 a x^2 a^-1`. `1` (or an empty
    /// string) denotes the identity.
    pub fn parse(text: &str) -> Result<Word, PresentationError> {
        let mut raw = Vec::new();
        for token in text.split(|c: char| c.is_whitespace() || c == '*' || c == '.') {
            if token.is_empty() || token == "1" {
                continue;
            }
            let (name, exponent) = match token.split_once('^') {
                Some((name, exp)) => {
                    let exp = exp.trim_start_matches('(').trim_end_matches(')');
                    let e: i64 = exp.parse().map_err(|_| PresentationError::Parse {
                        line: 1,
                        message: format!("bad exponent in {token:?}"),
                    })?;
                    (name, e)
                }
                None => (token, 1),
            };
            let g = Generator::new(name).map_err(|_| PresentationError::Parse {
                line: 1,
                message: format!("bad generator in {token:?}"),
            })?;
            raw.push((g, exponent));
        }
        Ok(free_reduce(raw))
    }
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        self.concat(rhs)
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        self.concat(&rhs)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if s.exponent == 1 {
                write!(f, "{}", s.generator)?;
            } else {
                write!(f, "{}^{}", s.generator, s.exponent)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A finite presentation `< generators | relators >`, optionally with a set of
/// generators marked as meridians.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<Generator>,
    relators: Vec<Word>,
    meridians: Vec<Generator>,
}

impl Presentation {
    pub fn new(generators: Vec<Generator>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !seen.insert(g.clone()) {
                return Err(PresentationError::DuplicateGenerator(g.clone()));
            }
        }
        let p = Presentation {
            generators,
            relators,
            meridians: Vec::new(),
        };
        for r in &p.relators {
            p.check_word(r)?;
        }
        Ok(p)
    }

    pub fn with_meridians(mut self, meridians: Vec<Generator>) -> Result<Self, PresentationError> {
        for m in &meridians {
            if !self.generators.contains(m) {
                return Err(PresentationError::UndeclaredGenerator(m.clone()));
            }
        }
        self.meridians = meridians;
        Ok(self)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn meridians(&self) -> &[Generator] {
        &self.meridians
    }

    pub fn generator_index(&self, g: &Generator) -> Option<usize> {
        self.generators.iter().position(|h| h == g)
    }

    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.name() == name)
    }

    /// Errors with `UndeclaredGenerator` if `w` mentions a generator not in
    /// this presentation.
    pub fn check_word(&self, w: &Word) -> Result<(), PresentationError> {
        for s in w.syllables() {
            if !self.generators.contains(&s.generator) {
                return Err(PresentationError::UndeclaredGenerator(s.generator.clone()));
            }
        }
        Ok(())
    }

    /// The same group with `w` killed.
    pub fn with_relator(&self, w: Word) -> Result<Self, PresentationError> {
        self.check_word(&w)?;
        let mut p = self.clone();
        p.relators.push(w);
        Ok(p)
    }

    pub fn without_relator(&self, index: usize) -> Self {
        let mut p = self.clone();
        p.relators.remove(index);
        p
    }

    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| self.generators.iter().map(|g| r.exponent_sum(g)).collect())
            .collect()
    }

    pub fn abelianization(&self) -> Abelianization {
        Abelianization::of_matrix(&self.exponent_matrix(), self.generators.len())
    }

    /// Adds generator `g` together with the defining relator `g * definition^-1`.
    pub fn tietze_add_generator(&self, g: Generator, definition: &Word) -> Result<Self, PresentationError> {
        if self.generators.contains(&g) {
            return Err(PresentationError::DuplicateGenerator(g));
        }
        self.check_word(definition)?;
        let mut p = self.clone();
        p.relators.push(Word::letter(&g).concat(&definition.inverse()));
        p.generators.push(g);
        Ok(p)
    }

    /// Solves relator `index` for `g` and eliminates `g` everywhere.
    ///
    /// The relator must contain exactly one occurrence of `g`, with exponent
    /// `+1` or `-1`. The defining relator is dropped and `g` leaves the
    /// meridian set if it was marked.
    pub fn tietze_eliminate(&self, g: &Generator, index: usize) -> Result<Self, PresentationError> {
        let not_solvable = |reason| PresentationError::NotSolvable {
            generator: g.clone(),
            index,
            reason,
        };
        if !self.generators.contains(g) {
            return Err(PresentationError::UndeclaredGenerator(g.clone()));
        }
        let relator = self.relators.get(index).ok_or(not_solvable("no such relator"))?;
        let positions: Vec<usize> = relator
            .syllables()
            .iter()
            .enumerate()
            .filter(|(_, s)| &s.generator == g)
            .map(|(i, _)| i)
            .collect();
        let pos = match positions.as_slice() {
            [pos] => *pos,
            [] => return Err(not_solvable("generator does not occur")),
            _ => return Err(not_solvable("generator occurs more than once")),
        };
        let exponent = relator.syllables()[pos].exponent;
        if exponent.abs() != 1 {
            return Err(not_solvable("exponent is not +1 or -1"));
        }
        let before = Word::from_syllables(
            relator.syllables()[..pos]
                .iter()
                .map(|s| (s.generator.clone(), s.exponent)),
        );
        let after = Word::from_syllables(
            relator.syllables()[pos + 1..]
                .iter()
                .map(|s| (s.generator.clone(), s.exponent)),
        );
        let value = solve_parts(&before, exponent, &after);

        let mut relators = Vec::with_capacity(self.relators.len() - 1);
        for (i, r) in self.relators.iter().enumerate() {
            if i != index {
                relators.push(r.substitute(g, &value)?);
            }
        }
        Ok(Presentation {
            generators: self.generators.iter().filter(|h| *h != g).cloned().collect(),
            relators,
            meridians: self.meridians.iter().filter(|h| *h != g).cloned().collect(),
        })
    }

    /// Greedy Tietze simplification: repeatedly eliminates a generator that
    /// occurs once in some relator, preferring eliminations that lengthen the
    /// presentation least, and drops trivial or repeated relators.
    ///
    /// Returns the result together with each eliminated generator expressed
    /// in the remaining generators.
    pub fn simplify(&self) -> (Presentation, Vec<(Generator, Word)>) {
        let total = |p: &Presentation| p.relators.iter().map(Word::letter_len).sum::<u64>();
        let budget = 4 * total(self) + 32;
        let mut current = self.clone().tidied();
        let mut definitions: Vec<(Generator, Word)> = Vec::new();
        loop {
            let mut best: Option<(u64, usize, Generator)> = None;
            for (index, r) in current.relators.iter().enumerate() {
                for s in r.syllables() {
                    if s.exponent.abs() != 1 || r.syllables().iter().filter(|t| t.generator == s.generator).count() != 1
                    {
                        continue;
                    }
                    let elsewhere: u64 = current
                        .relators
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != index)
                        .map(|(_, w)| {
                            w.syllables()
                                .iter()
                                .filter(|t| t.generator == s.generator)
                                .map(|t| t.exponent.unsigned_abs())
                                .sum::<u64>()
                        })
                        .sum();
                    let cost = (r.letter_len() - 1) * elsewhere;
                    if best.as_ref().is_none_or(|(c, _, _)| cost < *c) {
                        best = Some((cost, index, s.generator.clone()));
                    }
                }
            }
            let Some((_, index, g)) = best else { break };
            if current.generators.len() == 1 {
                break;
            }
            let next = current
                .tietze_eliminate(&g, index)
                .expect("candidate is solvable")
                .tidied();
            if total(&next) > budget {
                break;
            }
            let value = solve_for(&current.relators[index], &g);
            for (_, d) in definitions.iter_mut() {
                *d = d.substitute(&g, &value).expect("declared");
            }
            definitions.push((g, value));
            current = next;
        }
        (current, definitions)
    }

    fn tidied(mut self) -> Self {
        let mut kept: Vec<Word> = Vec::new();
        for r in self.relators.iter().map(Word::cyclically_reduced) {
            if !r.is_identity() && !kept.contains(&r) {
                kept.push(r);
            }
        }
        self.relators = kept;
        self
    }

    /// Reorders the generator list; `order` must be a permutation of it.
    pub fn reorder_generators(&self, order: &[Generator]) -> Result<Self, PresentationError> {
        let mut p = Presentation::new(order.to_vec(), self.relators.clone())?;
        for g in &self.generators {
            if !order.contains(g) {
                return Err(PresentationError::UndeclaredGenerator(g.clone()));
            }
        }
        p.meridians = self.meridians.clone();
        Ok(p)
    }

    /// Parses the text format:
    ///
    /// ```text
    /// # comment
    /// gens: x y a
    /// meridians: x y      (optional)
    /// x^-2 a x^2 a^-1     (one relator per line)
    /// ```
    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut generators: Option<Vec<Generator>> = None;
        let mut meridians = Vec::new();
        let mut relators = Vec::new();
        for (i, raw_line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| PresentationError::Parse { line: line_no, message };
            if let Some(rest) = line.strip_prefix("gens:") {
                if generators.is_some() {
                    return Err(err("second `gens:` line".into()));
                }
                let gens = rest
                    .split_whitespace()
                    .map(Generator::new)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| err(e.to_string()))?;
                generators = Some(gens);
                continue;
            }
            let Some(gens) = generators.as_ref() else {
                return Err(err("expected `gens:` before relators".into()));
            };
            if let Some(rest) = line.strip_prefix("meridians:") {
                for name in rest.split_whitespace() {
                    let g = gens
                        .iter()
                        .find(|g| g.name() == name)
                        .ok_or_else(|| err(format!("undeclared meridian {name}")))?;
                    meridians.push(g.clone());
                }
                continue;
            }
            let w = Word::parse(line).map_err(|e| match e {
                PresentationError::Parse { message, .. } => err(message),
                other => err(other.to_string()),
            })?;
            for s in w.syllables() {
                if !gens.contains(&s.generator) {
                    return Err(err(format!("undeclared generator {}", s.generator)));
                }
            }
            relators.push(w);
        }
        let generators = generators.ok_or(PresentationError::Parse {
            line: 0,
            message: "missing `gens:` line".into(),
        })?;
        Presentation::new(generators, relators)?.with_meridians(meridians)
    }

    /// Parses a word and checks it only uses declared generators.
    pub fn parse_word(&self, text: &str) -> Result<Word, PresentationError> {
        let w = Word::parse(text)?;
        self.check_word(&w)?;
        Ok(w)
    }
}

impl fmt::Display for Presentation {
    /// Writes the text format accepted by [`Presentation::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gens:")?;
        for g in &self.generators {
            write!(f, " {g}")?;
        }
        writeln!(f)?;
        if !self.meridians.is_empty() {
            write!(f, "meridians:")?;
            for g in &self.meridians {
                write!(f, " {g}")?;
            }
            writeln!(f)?;
        }
        for r in &self.relators {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Solves `before * g^e * after = 1` for `g`.
fn solve_parts(before: &Word, exponent: i64, after: &Word) -> Word {
    if exponent == 1 {
        before.inverse().concat(&after.inverse())
    } else {
        after.concat(before)
    }
}

/// Value of `g` from a relator in which it occurs exactly once with exponent +-1.
fn solve_for(relator: &Word, g: &Generator) -> Word {
    let pos = relator
        .syllables()
        .iter()
        .position(|s| &s.generator == g)
        .expect("occurs");
    let part = |r: &[Syllable]| Word::from_syllables(r.iter().map(|s| (s.generator.clone(), s.exponent)));
    let syl = relator.syllables();
    solve_parts(&part(&syl[..pos]), syl[pos].exponent, &part(&syl[pos + 1..]))
}

/// Parameters of the family `mu_n = x (y x^-1)^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoMeridianSpec {
    x: Generator,
    y: Generator,
    n: i64,
}

impl PseudoMeridianSpec {
    pub fn new(x: Generator, y: Generator, n: i64) -> Result<Self, PresentationError> {
        if x == y {
            return Err(PresentationError::DegenerateFamily(x));
        }
        Ok(PseudoMeridianSpec { x, y, n })
    }

    pub fn x(&self) -> &Generator {
        &self.x
    }

    pub fn y(&self) -> &Generator {
        &self.y
    }

    pub fn n(&self) -> i64 {
        self.n
    }
}

/// `x (y x^-1)^n`, freely reduced. Negative `n` gives `x (x y^-1)^|n|`.
pub fn mu_word(spec: &PseudoMeridianSpec) -> Word {
    let a = Word::from_syllables([(spec.y.clone(), 1), (spec.x.clone(), -1)]);
    Word::letter(&spec.x).concat(&a.pow(spec.n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(name: &str) -> Generator {
        Generator::named(name)
    }

    fn w(text: &str) -> Word {
        Word::parse(text).unwrap()
    }

    #[test]
    fn free_reduction_examples() {
        let (x, y) = (g("x"), g("y"));
        assert!(free_reduce([(x.clone(), 1), (x.clone(), -1)]).is_identity());
        let r = free_reduce([(x.clone(), 1), (y.clone(), 2), (y.clone(), -2), (x.clone(), 1)]);
        assert_eq!(r, Word::power(&x, 2));
        let c = free_reduce([(x.clone(), 1), (y.clone(), 1), (x.clone(), -1), (y.clone(), -1)]);
        assert_eq!(c.to_string(), "x y x^-1 y^-1");
    }

    #[test]
    fn exponent_sums() {
        let r = w("y x y x^-1 y^-1 x^-1");
        assert_eq!(r.exponent_sum(&g("y")), 1);
        assert_eq!(r.exponent_sum(&g("x")), -1);
        assert_eq!(Word::identity().exponent_sum(&g("q")), 0);
        assert_eq!(r.inverse().exponent_sum(&g("y")), -1);
    }

    #[test]
    fn substitution() {
        let (a, x, y) = (g("a"), g("x"), g("y"));
        let ax = Word::from_syllables([(a.clone(), 1), (x.clone(), 1)]);
        assert_eq!(w("y x").substitute(&y, &ax).unwrap(), w("a x^2"));
        assert_eq!(w("y^-1").substitute(&y, &ax).unwrap(), w("x^-1 a^-1"));
        let r = w("y x y x^-1 y^-1 x^-1").substitute(&y, &ax).unwrap();
        assert_eq!(r, w("a x^2 a x^-1 a^-1 x^-1"));
        assert_eq!(
            w("y").substitute(&y, &w("y x")),
            Err(PresentationError::SelfReferentialSubstitution(y))
        );
    }

    #[test]
    fn mu_words() {
        let (x, y) = (g("x"), g("y"));
        let mu = |n| mu_word(&PseudoMeridianSpec::new(x.clone(), y.clone(), n).unwrap());
        assert_eq!(mu(0), w("x"));
        assert_eq!(mu(1), w("x y x^-1"));
        assert_eq!(mu(-1), w("x^2 y^-1"));
        assert_eq!(mu(2), w("x y x^-1 y x^-1"));
        assert!(PseudoMeridianSpec::new(x.clone(), x, 1).is_err());
    }

    #[test]
    fn tietze_add() {
        let p = Presentation::parse("gens: x y\nx y x y^-1 x^-1 y^-1").unwrap();
        let q = p.tietze_add_generator(g("a"), &w("y x^-1")).unwrap();
        assert_eq!(q.generators().len(), 3);
        assert_eq!(q.relators()[1], w("a x y^-1"));
        let e = Presentation::parse("gens: x").unwrap();
        let e2 = e.tietze_add_generator(g("a"), &w("x^2")).unwrap();
        assert_eq!(e2.relators(), &[w("a x^-2")]);
        assert_eq!(
            p.tietze_add_generator(g("x"), &w("y")),
            Err(PresentationError::DuplicateGenerator(g("x")))
        );
    }

    #[test]
    fn tietze_eliminate_examples() {
        let p = Presentation::parse("gens: x y a\ny x y x^-1 y^-1 x^-1\ny x^-1 a^-1").unwrap();
        let q = p.tietze_eliminate(&g("y"), 1).unwrap();
        assert_eq!(q.generators(), &[g("x"), g("a")]);
        assert_eq!(q.relators(), &[w("a x^2 a x^-1 a^-1 x^-1")]);

        let bad = Presentation::parse("gens: x y\nx y x").unwrap();
        assert!(matches!(
            bad.tietze_eliminate(&g("x"), 0),
            Err(PresentationError::NotSolvable { .. })
        ));
        // negative exponent occurrence
        let p = Presentation::parse("gens: x y b\nx y\nx b^-1 y").unwrap();
        let q = p.tietze_eliminate(&g("b"), 1).unwrap();
        assert_eq!(q.relators(), &[w("x y")]);
    }

    #[test]
    fn tietze_moves_preserve_abelianization() {
        let p = Presentation::parse("gens: x y\nx y x y^-1 x^-1 y^-1").unwrap();
        let q = p.tietze_add_generator(g("a"), &w("y x^-1")).unwrap();
        let r = q.tietze_eliminate(&g("y"), 1).unwrap();
        assert_eq!(p.abelianization(), q.abelianization());
        assert_eq!(p.abelianization(), r.abelianization());
        assert!(r.abelianization().is_infinite_cyclic());
    }

    #[test]
    fn parser_rejects_undeclared() {
        assert!(matches!(
            Presentation::parse("gens: x\nx y"),
            Err(PresentationError::Parse { line: 2, .. })
        ));
        assert!(Presentation::parse("x y").is_err());
        let p = Presentation::parse("gens: x y\nmeridians: x\n# trefoil\nx y x y^-1 x^-1 y^-1\n").unwrap();
        assert_eq!(p.meridians(), &[g("x")]);
        assert_eq!(Presentation::parse(&p.to_string()).unwrap(), p);
        assert!(p.parse_word("x z").is_err());
    }

    fn arb_word() -> impl Strategy<Value = Vec<(u8, i64)>> {
        prop::collection::vec((0u8..3, -3i64..=3), 0..24)
    }

    fn build(raw: &[(u8, i64)]) -> Word {
        let names = ["x", "y", "z"];
        free_reduce(raw.iter().map(|(i, e)| (g(names[*i as usize]), *e)))
    }

    proptest! {
        #[test]
        fn reduction_is_idempotent_and_reduced(raw in arb_word()) {
            let once = build(&raw);
            let twice = free_reduce(once.syllables().iter().map(|s| (s.generator.clone(), s.exponent)));
            prop_assert_eq!(&once, &twice);
            for pair in once.syllables().windows(2) {
                prop_assert_ne!(&pair[0].generator, &pair[1].generator);
            }
            prop_assert!(once.syllables().iter().all(|s| s.exponent != 0));
        }

        #[test]
        fn concatenation_is_associative(a in arb_word(), b in arb_word(), c in arb_word()) {
            let (a, b, c) = (build(&a), build(&b), build(&c));
            prop_assert_eq!((&a * &b) * c.clone(), &a * &(&b * &c));
            prop_assert!((&a * &a.inverse()).is_identity());
        }

        #[test]
        fn exponent_sum_laws(a in arb_word(), b in arb_word()) {
            let (a, b) = (build(&a), build(&b));
            for name in ["x", "y", "z"] {
                let gen = g(name);
                prop_assert_eq!((&a * &b).exponent_sum(&gen), a.exponent_sum(&gen) + b.exponent_sum(&gen));
                prop_assert_eq!(a.inverse().exponent_sum(&gen), -a.exponent_sum(&gen));
                prop_assert_eq!(a.conjugate_by(&b).exponent_sum(&gen), a.exponent_sum(&gen));
            }
        }

        #[test]
        fn mu_word_exponent_sums(n in -30i64..30) {
            let mu = mu_word(&PseudoMeridianSpec::new(g("x"), g("y"), n).unwrap());
            // x and y are both meridians, so the meridian count is what matters
            prop_assert_eq!(mu.exponent_sum(&g("x")) + mu.exponent_sum(&g("y")), 1);
            prop_assert_eq!(mu.exponent_sum(&g("y")), n);
        }

        #[test]
        fn add_then_eliminate_restores_relators(raw in arb_word(), def in arb_word()) {
            let rel = build(&raw);
            let p = Presentation::new(vec![g("x"), g("y"), g("z")], vec![rel]).unwrap();
            let q = p.tietze_add_generator(g("t"), &build(&def)).unwrap();
            let back = q.tietze_eliminate(&g("t"), 1).unwrap();
            prop_assert_eq!(back.relators(), p.relators());
            prop_assert_eq!(back.generators(), p.generators());
        }
    }
}
