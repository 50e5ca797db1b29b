use serde::{Deserialize, Serialize};

use crate::abelian::{cyclic_quotient, infinite_cyclic_images};
use crate::words::{Generator, Presentation, Word};

use super::perm::Permutation;
use super::quotient::{search_quotients, PermutationQuotient, SearchOutcome, SearchSpace};
use super::todd_coxeter::{
    todd_coxeter, CosetTable, EnumerationLimits, EnumerationResult, EnumerationStats, LimitKind,
};
use super::CosetError;

/// Cheap first attempt before any expensive search.
const PROBE: EnumerationLimits = EnumerationLimits {
    max_cosets: 20_000,
    max_time_millis: 1_000,
};

/// How a refutation was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefutationSource {
    Abelianization,
    CosetEnumeration,
    QuotientSearch,
}

/// A homomorphism onto a nontrivial permutation group that kills `word`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteQuotientCertificate {
    pub word: Word,
    pub quotient: PermutationQuotient,
    pub source: RefutationSource,
}

impl FiniteQuotientCertificate {
    pub fn replay(&self, p: &Presentation) -> Result<(), String> {
        self.quotient.check_relators(p)?;
        if !self.quotient.evaluate(&self.word)?.is_identity() {
            return Err(format!("{} is not sent to the identity", self.word));
        }
        if self.quotient.images.iter().all(|(_, x)| x.is_identity()) {
            return Err("quotient is trivial".into());
        }
        Ok(())
    }
}

/// A closed coset table of size 1 for `G / <<word>>`.
#[derive(Clone, Debug)]
pub struct KillerProof {
    pub word: Word,
    pub stats: EnumerationStats,
    pub table: CosetTable,
}

impl KillerProof {
    pub fn replay(&self, p: &Presentation) -> Result<(), String> {
        if self.table.index() != 1 {
            return Err(format!("table has {} cosets", self.table.index()));
        }
        let killed = p.with_relator(self.word.clone()).map_err(|e| e.to_string())?;
        self.table.validate(&killed, &[])
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnknownReason {
    pub enumeration_limit: Option<LimitKind>,
    pub cosets_defined: usize,
    pub search_nodes: u64,
    pub search_exhausted: bool,
}

#[derive(Clone, Debug)]
pub enum KillerVerdict {
    Verified(KillerProof),
    Refuted(FiniteQuotientCertificate),
    Unknown(UnknownReason),
}

impl KillerVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            KillerVerdict::Verified(_) => "verified",
            KillerVerdict::Refuted(_) => "refuted",
            KillerVerdict::Unknown(_) => "unknown",
        }
    }
}

fn table_quotient(table: &CosetTable, target: String) -> PermutationQuotient {
    PermutationQuotient {
        target,
        degree: table.index(),
        images: table
            .generators()
            .iter()
            .enumerate()
            .map(|(g, name)| {
                let perm =
                    Permutation::from_images(table.generator_action(g)).expect("closed table rows are permutations");
                (name.clone(), perm)
            })
            .collect(),
    }
}

/// Searches the configured finite groups for a nontrivial quotient in which
/// `w` dies.
pub fn find_finite_quotient_killing(
    p: &Presentation,
    w: &Word,
    space: &SearchSpace,
) -> Result<(Option<FiniteQuotientCertificate>, SearchOutcome), CosetError> {
    p.check_word(w)?;
    let outcome = search_quotients(p, std::slice::from_ref(w), space, &mut |q| {
        q.images.iter().any(|(_, x)| !x.is_identity())
    })?;
    let cert = match &outcome {
        SearchOutcome::Found(q) => Some(FiniteQuotientCertificate {
            word: w.clone(),
            quotient: q.clone(),
            source: RefutationSource::QuotientSearch,
        }),
        _ => None,
    };
    Ok((cert, outcome))
}

/// Decides whether `w` normally generates the group of `p`.
///
/// Order: abelianization of `G / <<w>>`, a capped coset enumeration, the
/// finite quotient search, then enumeration with the full limits.
pub fn is_killer(
    p: &Presentation,
    w: &Word,
    limits: &EnumerationLimits,
    space: &SearchSpace,
) -> Result<KillerVerdict, CosetError> {
    p.check_word(w)?;
    space.validate()?;
    let killed = p.with_relator(w.clone())?;
    let n = killed.generators().len();

    if let Some(cq) = cyclic_quotient(&killed.exponent_matrix(), n) {
        let m = cq.modulus as u32;
        let images = killed
            .generators()
            .iter()
            .zip(&cq.images)
            .map(|(g, &k)| {
                let rot = (0..m).map(|i| (i + k as u32) % m).collect();
                (g.clone(), Permutation::from_images(rot).expect("rotation"))
            })
            .collect();
        return Ok(KillerVerdict::Refuted(FiniteQuotientCertificate {
            word: w.clone(),
            quotient: PermutationQuotient {
                target: format!("C{m}"),
                degree: m as usize,
                images,
            },
            source: RefutationSource::Abelianization,
        }));
    }

    let from_enumeration = |r: EnumerationResult| -> Result<KillerVerdict, EnumerationResult> {
        match r {
            EnumerationResult::Completed { table, stats } if table.index() == 1 => {
                Ok(KillerVerdict::Verified(KillerProof {
                    word: w.clone(),
                    stats,
                    table,
                }))
            }
            EnumerationResult::Completed { table, .. } => {
                let target = format!("regular action of order {}", table.index());
                Ok(KillerVerdict::Refuted(FiniteQuotientCertificate {
                    word: w.clone(),
                    quotient: table_quotient(&table, target),
                    source: RefutationSource::CosetEnumeration,
                }))
            }
            other => Err(other),
        }
    };

    let probe_limits = limits.capped(&PROBE);
    let probe = match from_enumeration(todd_coxeter(&killed, &[], &probe_limits)?) {
        Ok(v) => return Ok(v),
        Err(r) => r,
    };

    let (cert, outcome) = find_finite_quotient_killing(p, w, space)?;
    if let Some(cert) = cert {
        return Ok(KillerVerdict::Refuted(cert));
    }
    let (search_nodes, search_exhausted) = match outcome {
        SearchOutcome::Exhausted { nodes } => (nodes, true),
        SearchOutcome::BudgetExceeded { nodes } => (nodes, false),
        SearchOutcome::Found(_) => unreachable!("handled above"),
    };

    let last = if probe_limits != *limits {
        match from_enumeration(todd_coxeter(&killed, &[], limits)?) {
            Ok(v) => return Ok(v),
            Err(r) => r,
        }
    } else {
        probe
    };
    let EnumerationResult::LimitExceeded { limit, stats } = last else {
        unreachable!("completed enumerations are handled above")
    };
    Ok(KillerVerdict::Unknown(UnknownReason {
        enumeration_limit: Some(limit),
        cosets_defined: stats.cosets_defined,
        search_nodes,
        search_exhausted,
    }))
}

/// A quotient in which the images of `a` and `b` do not commute, so `a` and
/// `b` do not commute in the group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoncommutingCertificate {
    pub a: Word,
    pub b: Word,
    pub quotient: PermutationQuotient,
}

impl NoncommutingCertificate {
    pub fn replay(&self, p: &Presentation) -> Result<(), String> {
        self.quotient.check_relators(p)?;
        let a = self.quotient.evaluate(&self.a)?;
        let b = self.quotient.evaluate(&self.b)?;
        if a.commutes_with(&b) {
            return Err(format!("images of {} and {} commute", self.a, self.b));
        }
        Ok(())
    }
}

pub fn find_noncommuting_quotient(
    p: &Presentation,
    a: &Word,
    b: &Word,
    space: &SearchSpace,
) -> Result<Option<NoncommutingCertificate>, CosetError> {
    p.check_word(a)?;
    p.check_word(b)?;
    let outcome = search_quotients(p, &[], space, &mut |q| match (q.evaluate(a), q.evaluate(b)) {
        (Ok(x), Ok(y)) => !x.commutes_with(&y),
        _ => false,
    })?;
    Ok(match outcome {
        SearchOutcome::Found(quotient) => Some(NoncommutingCertificate {
            a: a.clone(),
            b: b.clone(),
            quotient,
        }),
        _ => None,
    })
}

/// Two meridians `x` and `c y c^-1` of a knot group, with `x`, `y` meridian
/// generators of the presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeridianPair {
    pub x: Generator,
    pub y: Generator,
    pub conjugator: Word,
}

impl MeridianPair {
    pub fn second(&self) -> Word {
        Word::letter(&self.y).conjugate_by(&self.conjugator)
    }

    /// `x (y' x^-1)^n` with `y'` the second meridian.
    pub fn mu(&self, n: i64) -> Word {
        let a = self.second().concat(&Word::power(&self.x, -1));
        Word::letter(&self.x).concat(&a.pow(n))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NonKillerWitness {
    pub pair: MeridianPair,
    pub n: i64,
    pub certificate: FiniteQuotientCertificate,
    pub noncommuting: NoncommutingCertificate,
}

impl NonKillerWitness {
    pub fn replay(&self, p: &Presentation) -> Result<(), String> {
        if self.certificate.word != self.pair.mu(self.n) {
            return Err("certificate is for a different word".into());
        }
        if self.noncommuting.a != Word::letter(&self.pair.x) || self.noncommuting.b != self.pair.second() {
            return Err("noncommuting certificate is for a different pair".into());
        }
        self.certificate.replay(p)?;
        self.noncommuting.replay(p)
    }
}

/// Looks for noncommuting meridians `x`, `y'` for which `x (y' x^-1)^n` is
/// not a killer, witnessed by a finite quotient.
///
/// Rather than testing pairs one by one, searches quotients `G -> F` and,
/// in each, every pair `(x, c y c^-1)` with `x`, `y` meridian generators and
/// `c` running over shortest words for the elements of the image. Pairs with
/// shorter conjugators are tried first within a quotient.
pub fn search_non_killer_pair(
    p: &Presentation,
    n: i64,
    space: &SearchSpace,
) -> Result<Option<NonKillerWitness>, CosetError> {
    let meridians: Vec<Generator> = if p.meridians().is_empty() {
        p.generators().to_vec()
    } else {
        p.meridians().to_vec()
    };
    let mut candidate = None;
    let mut rejected: Vec<MeridianPair> = Vec::new();
    let mut failure = None;
    let outcome = search_quotients(p, &[], space, &mut |q| {
        let images: Vec<Permutation> = meridians
            .iter()
            .map(|g| q.image_of(g).expect("generator").clone())
            .collect();
        if images.iter().all(Permutation::is_identity) {
            return false;
        }
        for (conjugator, c) in image_words(q) {
            let c_inv = c.inverse();
            for (i, x) in meridians.iter().enumerate() {
                for (j, y) in meridians.iter().enumerate() {
                    if i == j && conjugator.is_identity() {
                        continue;
                    }
                    let second = c.then(&images[j]).then(&c_inv);
                    let a = second.then(&images[i].inverse());
                    if !images[i].then(&a.pow(n)).is_identity() {
                        continue;
                    }
                    let pair = MeridianPair {
                        x: x.clone(),
                        y: y.clone(),
                        conjugator: conjugator.clone(),
                    };
                    if rejected.contains(&pair) || pair.second() == Word::letter(x) {
                        continue;
                    }
                    let certificate = FiniteQuotientCertificate {
                        word: pair.mu(n),
                        quotient: q.clone(),
                        source: RefutationSource::QuotientSearch,
                    };
                    let noncommuting = match find_noncommuting_quotient(p, &Word::letter(x), &pair.second(), space) {
                        Ok(Some(nc)) => nc,
                        Ok(None) => {
                            rejected.push(pair);
                            continue;
                        }
                        Err(e) => {
                            failure = Some(e);
                            return true;
                        }
                    };
                    candidate = Some(NonKillerWitness {
                        pair,
                        n,
                        certificate,
                        noncommuting,
                    });
                    return true;
                }
            }
        }
        false
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(match outcome {
        SearchOutcome::Found(_) => candidate,
        _ => None,
    })
}

/// A shortest word for every element of the image of `q`, in order of length.
fn image_words(q: &PermutationQuotient) -> Vec<(Word, Permutation)> {
    let mut out = vec![(Word::identity(), Permutation::identity(q.degree))];
    let mut seen = std::collections::HashSet::new();
    seen.insert(Permutation::identity(q.degree));
    let mut i = 0;
    while i < out.len() {
        for (g, x) in &q.images {
            for e in [1, -1] {
                let next = out[i].1.then(&x.pow(e));
                if seen.insert(next.clone()) {
                    let word = out[i].0.concat(&Word::power(g, e));
                    out.push((word, next));
                }
            }
        }
        i += 1;
    }
    out
}

/// A quotient in which `escaping` does not lie in the cyclic subgroup
/// generated by `meridian`, so the meridian does not generate the group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonCyclicCertificate {
    pub meridian: Generator,
    pub escaping: Generator,
    pub quotient: PermutationQuotient,
}

impl NonCyclicCertificate {
    pub fn replay(&self, p: &Presentation) -> Result<(), String> {
        self.quotient.check_relators(p)?;
        let m = self.quotient.image_of(&self.meridian).ok_or("meridian has no image")?;
        let e = self
            .quotient
            .image_of(&self.escaping)
            .ok_or("escaping generator has no image")?;
        if m.cyclic_subgroup().contains(e) {
            return Err(format!("{} lies in <{}>", self.escaping, self.meridian));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum CyclicVerdict {
    /// Closed table of size 1 for the cosets of `<meridian>`.
    Yes {
        stats: EnumerationStats,
        table: CosetTable,
    },
    No(NonCyclicCertificate),
    Unknown(UnknownReason),
}

impl CyclicVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            CyclicVerdict::Yes { .. } => "yes",
            CyclicVerdict::No(_) => "no",
            CyclicVerdict::Unknown(_) => "unknown",
        }
    }
}

/// Decides whether a group with abelianization `Z` is infinite cyclic, by
/// asking whether `meridian` (which must map to a generator of `Z`)
/// generates it.
pub fn is_infinite_cyclic_certified(
    p: &Presentation,
    meridian: &Generator,
    limits: &EnumerationLimits,
    space: &SearchSpace,
) -> Result<CyclicVerdict, CosetError> {
    let m_index = p
        .generator_index(meridian)
        .ok_or_else(|| crate::words::PresentationError::UndeclaredGenerator(meridian.clone()))?;
    space.validate()?;
    let n = p.generators().len();
    let Some(images) = infinite_cyclic_images(&p.exponent_matrix(), n) else {
        return Err(CosetError::NotAKnotGroupPresentation(p.abelianization()));
    };
    if images[m_index].abs() != 1 {
        return Err(CosetError::MeridianNotPrimitive(meridian.clone()));
    }
    let subgroup = [Word::letter(meridian)];

    let from_enumeration = |r: EnumerationResult| -> Result<CyclicVerdict, EnumerationResult> {
        match r {
            EnumerationResult::Completed { table, stats } if table.index() == 1 => {
                Ok(CyclicVerdict::Yes { stats, table })
            }
            EnumerationResult::Completed { table, .. } => {
                let quotient = table_quotient(&table, format!("action on {} cosets of <{meridian}>", table.index()));
                // the subgroup fixes coset 0 and the action is transitive
                let escaping = quotient
                    .images
                    .iter()
                    .find(|(_, x)| x.apply(0) != 0)
                    .map(|(g, _)| g.clone())
                    .expect("transitive action moves coset 0");
                Ok(CyclicVerdict::No(NonCyclicCertificate {
                    meridian: meridian.clone(),
                    escaping,
                    quotient,
                }))
            }
            other => Err(other),
        }
    };

    let probe_limits = limits.capped(&PROBE);
    let probe = match from_enumeration(todd_coxeter(p, &subgroup, &probe_limits)?) {
        Ok(v) => return Ok(v),
        Err(r) => r,
    };

    let mut witness = None;
    let outcome = search_quotients(p, &[], space, &mut |q| {
        let powers = q.images[m_index].1.cyclic_subgroup();
        match q.images.iter().find(|(_, x)| !powers.contains(x)) {
            Some((g, _)) => {
                witness = Some(g.clone());
                true
            }
            None => false,
        }
    })?;
    let (search_nodes, search_exhausted) = match outcome {
        SearchOutcome::Found(quotient) => {
            return Ok(CyclicVerdict::No(NonCyclicCertificate {
                meridian: meridian.clone(),
                escaping: witness.expect("accepted quotient records its witness"),
                quotient,
            }))
        }
        SearchOutcome::Exhausted { nodes } => (nodes, true),
        SearchOutcome::BudgetExceeded { nodes } => (nodes, false),
    };

    let last = if probe_limits != *limits {
        match from_enumeration(todd_coxeter(p, &subgroup, limits)?) {
            Ok(v) => return Ok(v),
            Err(r) => r,
        }
    } else {
        probe
    };
    let EnumerationResult::LimitExceeded { limit, stats } = last else {
        unreachable!("completed enumerations are handled above")
    };
    Ok(CyclicVerdict::Unknown(UnknownReason {
        enumeration_limit: Some(limit),
        cosets_defined: stats.cosets_defined,
        search_nodes,
        search_exhausted,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::two_bridge::{two_bridge_presentation, TwoBridgeKnot};
    use crate::words::{mu_word, PseudoMeridianSpec};

    fn trefoil() -> Presentation {
        two_bridge_presentation(&TwoBridgeKnot::new(3, 1).unwrap())
    }

    fn mu(p: &Presentation, n: i64) -> Word {
        let x = p.generator("x").unwrap().clone();
        let y = p.generator("y").unwrap().clone();
        mu_word(&PseudoMeridianSpec::new(x, y, n).unwrap())
    }

    fn verdict(p: &Presentation, w: &Word) -> KillerVerdict {
        is_killer(p, w, &EnumerationLimits::default(), &SearchSpace::default()).unwrap()
    }

    #[test]
    fn meridian_pair_words() {
        let p = trefoil();
        let (x, y) = (p.generator("x").unwrap().clone(), p.generator("y").unwrap().clone());
        let plain = MeridianPair {
            x: x.clone(),
            y: y.clone(),
            conjugator: Word::identity(),
        };
        for n in -3..=3 {
            assert_eq!(plain.mu(n), mu(&p, n));
        }
        let conjugated = MeridianPair {
            conjugator: Word::letter(&x),
            ..plain
        };
        assert_eq!(conjugated.second(), Word::parse("x y x^-1").unwrap());
    }

    #[test]
    fn non_killer_witness_replays() {
        // n = 0 gives the meridian x itself, always a killer
        let p = trefoil();
        assert!(search_non_killer_pair(&p, 0, &SearchSpace::default())
            .unwrap()
            .is_none());
        if let Some(w) = search_non_killer_pair(&p, 2, &SearchSpace::default()).unwrap() {
            w.replay(&p).unwrap();
            let mut forged = w.clone();
            forged.n = 3;
            assert!(forged.replay(&p).is_err());
        }
    }

    #[test]
    fn meridian_is_killer() {
        let p = trefoil();
        let KillerVerdict::Verified(proof) = verdict(&p, &Word::parse("x").unwrap()) else {
            panic!()
        };
        proof.replay(&p).unwrap();
    }

    #[test]
    fn squares_and_cubes_are_refuted() {
        let p = trefoil();
        // x^2 survives in Z/2
        let KillerVerdict::Refuted(c) = verdict(&p, &Word::parse("x^2").unwrap()) else {
            panic!()
        };
        assert_eq!(c.source, RefutationSource::Abelianization);
        c.replay(&p).unwrap();
        // x^3: abelianization Z/3
        let KillerVerdict::Refuted(c) = verdict(&p, &Word::parse("x^3").unwrap()) else {
            panic!()
        };
        c.replay(&p).unwrap();
    }

    #[test]
    fn trefoil_pseudo_meridians_are_killers() {
        let p = trefoil();
        for n in -3..=3 {
            let KillerVerdict::Verified(proof) = verdict(&p, &mu(&p, n)) else {
                panic!("mu_{n}")
            };
            proof.replay(&p).unwrap();
        }
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let p = trefoil();
        let KillerVerdict::Refuted(mut c) = verdict(&p, &Word::parse("x^3").unwrap()) else {
            panic!()
        };
        c.word = Word::parse("x").unwrap();
        assert!(c.replay(&p).is_err());
    }

    #[test]
    fn perfect_quotients() {
        let p = trefoil();
        // the quotient by this word has order 120 and trivial abelianization
        let w = Word::parse("x^-3 y x^2 y").unwrap();
        let KillerVerdict::Refuted(c) = verdict(&p, &w) else {
            panic!()
        };
        assert_eq!(c.source, RefutationSource::CosetEnumeration);
        assert_eq!(c.quotient.degree, 120);
        c.replay(&p).unwrap();
        let (cert, _) = find_finite_quotient_killing(&p, &w, &SearchSpace::default()).unwrap();
        let cert = cert.unwrap();
        assert_eq!(cert.quotient.target, "A5");
        cert.replay(&p).unwrap();
    }

    #[test]
    fn infinite_cyclic() {
        let z = Presentation::parse("gens: a b\na b^-1").unwrap();
        let a = z.generator("a").unwrap().clone();
        let v = is_infinite_cyclic_certified(&z, &a, &EnumerationLimits::default(), &SearchSpace::default()).unwrap();
        assert!(matches!(v, CyclicVerdict::Yes { .. }));

        let p = trefoil();
        let x = p.generator("x").unwrap().clone();
        let v = is_infinite_cyclic_certified(&p, &x, &EnumerationLimits::default(), &SearchSpace::default()).unwrap();
        let CyclicVerdict::No(cert) = v else { panic!() };
        cert.replay(&p).unwrap();

        let bad = Presentation::parse("gens: a\na^2").unwrap();
        let a = bad.generator("a").unwrap().clone();
        assert!(matches!(
            is_infinite_cyclic_certified(&bad, &a, &EnumerationLimits::default(), &SearchSpace::default()),
            Err(CosetError::NotAKnotGroupPresentation(_))
        ));
    }
}
