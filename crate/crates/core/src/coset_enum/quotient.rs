//! Backtracking search for homomorphisms onto small permutation groups.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::words::{Generator, Presentation, Word};

use super::perm::{Permutation, SmallPerm, TargetGroup};
use super::CosetError;

/// An assignment of permutations to generators, claimed to respect every
/// relator of some presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationQuotient {
    /// Human-readable name of the image group, e.g. `S5` or `C3`.
    pub target: String,
    pub degree: usize,
    pub images: Vec<(Generator, Permutation)>,
}

impl PermutationQuotient {
    pub fn image_of(&self, g: &Generator) -> Option<&Permutation> {
        self.images.iter().find(|(h, _)| h == g).map(|(_, p)| p)
    }

    pub fn evaluate(&self, w: &Word) -> Result<Permutation, String> {
        let mut acc = Permutation::identity(self.degree);
        for s in w.syllables() {
            let p = self
                .image_of(&s.generator)
                .ok_or_else(|| format!("no image for generator {}", s.generator))?;
            acc = acc.then(&p.pow(s.exponent));
        }
        Ok(acc)
    }

    /// Checks that the images cover exactly the presentation's generators
    /// and kill every relator.
    pub fn check_relators(&self, p: &Presentation) -> Result<(), String> {
        let mine: BTreeSet<&Generator> = self.images.iter().map(|(g, _)| g).collect();
        let theirs: BTreeSet<&Generator> = p.generators().iter().collect();
        if mine != theirs || self.images.len() != p.generators().len() {
            return Err("images do not match the generator set".into());
        }
        for (g, img) in &self.images {
            if img.degree() != self.degree {
                return Err(format!("image of {g} has degree {}", img.degree()));
            }
        }
        for r in p.relators() {
            if !self.evaluate(r)?.is_identity() {
                return Err(format!("relator {r} is not sent to the identity"));
            }
        }
        Ok(())
    }
}

/// Which finite groups to try and how much work to spend.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub targets: Vec<TargetGroup>,
    /// Total search-tree nodes across all targets.
    pub max_nodes: u64,
}

impl Default for SearchSpace {
    fn default() -> Self {
        SearchSpace {
            targets: vec![
                TargetGroup::Symmetric(3),
                TargetGroup::Symmetric(4),
                TargetGroup::Alternating(5),
                TargetGroup::Symmetric(5),
                TargetGroup::Symmetric(6),
                TargetGroup::Symmetric(7),
            ],
            max_nodes: 5_000_000,
        }
    }
}

impl SearchSpace {
    pub fn validate(&self) -> Result<(), CosetError> {
        if let Some(t) = self.targets.iter().find(|t| !t.is_valid()) {
            return Err(CosetError::UnsupportedTarget(t.to_string()));
        }
        Ok(())
    }

    fn ordered_targets(&self) -> Vec<TargetGroup> {
        let mut t = self.targets.clone();
        t.sort_by_key(|g| (g.order(), g.degree()));
        t.dedup();
        t
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(PermutationQuotient),
    /// Every target was searched completely.
    Exhausted {
        nodes: u64,
    },
    BudgetExceeded {
        nodes: u64,
    },
}

type Relator = Vec<(usize, i64)>;

struct Search<'a> {
    relators: Vec<Relator>,
    /// Relators each generator occurs in.
    occurs: Vec<Vec<usize>>,
    /// Relators that only need checking once all their generators are set.
    gens_of: Vec<Vec<usize>>,
    elements: &'a [SmallPerm],
    class_reps: &'a [SmallPerm],
    assignment: Vec<Option<SmallPerm>>,
    weight: Vec<u64>,
    nodes: u64,
    max_nodes: u64,
}

enum Step {
    Stop,
    Continue,
    Budget,
}

impl Search<'_> {
    fn eval(&self, r: &Relator) -> SmallPerm {
        let mut acc = SmallPerm::IDENTITY;
        for &(g, e) in r {
            acc = acc.then(self.assignment[g].expect("assigned").pow(e));
        }
        acc
    }

    /// Assigns every generator forced by a relator with exactly one unknown
    /// letter of exponent +-1. Returns the generators it set, or `None` on a
    /// contradiction (after undoing its own assignments).
    fn propagate(&mut self) -> Option<Vec<usize>> {
        let mut trail = Vec::new();
        loop {
            let mut changed = false;
            for ri in 0..self.relators.len() {
                let unknown: Vec<usize> = self.gens_of[ri]
                    .iter()
                    .copied()
                    .filter(|&g| self.assignment[g].is_none())
                    .collect();
                match unknown.as_slice() {
                    [] => {
                        if !self.eval(&self.relators[ri]).is_identity() {
                            self.undo(&trail);
                            return None;
                        }
                    }
                    [g] => {
                        let r = &self.relators[ri];
                        let hits: Vec<usize> = (0..r.len()).filter(|&k| r[k].0 == *g).collect();
                        if hits.len() != 1 || r[hits[0]].1.abs() != 1 {
                            continue;
                        }
                        let k = hits[0];
                        let mut before = SmallPerm::IDENTITY;
                        for &(h, e) in &r[..k] {
                            before = before.then(self.assignment[h].expect("assigned").pow(e));
                        }
                        let mut after = SmallPerm::IDENTITY;
                        for &(h, e) in &r[k + 1..] {
                            after = after.then(self.assignment[h].expect("assigned").pow(e));
                        }
                        // before * g^e * after = 1
                        let ge = before.inverse().then(after.inverse());
                        let value = if r[k].1 == 1 { ge } else { ge.inverse() };
                        self.assignment[*g] = Some(value);
                        trail.push(*g);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return Some(trail);
            }
        }
    }

    fn undo(&mut self, trail: &[usize]) {
        for &g in trail {
            self.assignment[g] = None;
        }
    }

    fn choose(&self) -> Option<usize> {
        let n = self.assignment.len();
        (0..n).filter(|&g| self.assignment[g].is_none()).max_by_key(|&g| {
            let linked = self.occurs[g]
                .iter()
                .filter(|&&ri| self.gens_of[ri].iter().any(|&h| self.assignment[h].is_some()))
                .count() as u64;
            (linked * 1_000_000 + self.weight[g], std::cmp::Reverse(g))
        })
    }

    fn node(&mut self, accept: &mut dyn FnMut(&[SmallPerm]) -> bool) -> Step {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Step::Budget;
        }
        let Some(trail) = self.propagate() else {
            return Step::Continue;
        };
        let result = match self.choose() {
            None => {
                let full: Vec<SmallPerm> = self.assignment.iter().map(|a| a.expect("complete")).collect();
                if accept(&full) {
                    Step::Stop
                } else {
                    Step::Continue
                }
            }
            Some(g) => {
                let central_so_far = self.assignment.iter().flatten().all(|p| p.is_identity());
                let candidates = if central_so_far { self.class_reps } else { self.elements };
                let mut out = Step::Continue;
                for &c in candidates {
                    self.assignment[g] = Some(c);
                    match self.node(accept) {
                        Step::Continue => {}
                        other => {
                            out = other;
                            break;
                        }
                    }
                }
                if !matches!(out, Step::Stop) {
                    self.assignment[g] = None;
                }
                out
            }
        };
        if !matches!(result, Step::Stop) {
            self.undo(&trail);
        }
        result
    }
}

/// Searches `Hom(G, T)` for each target `T`, smallest first, with the extra
/// words forced to the identity, returning the first homomorphism accepted
/// by `accept`. Only homomorphisms that are surjective up to conjugation
/// symmetry are pruned, so an exhausted search is a proof that none exists.
///
/// The search runs on a Tietze-simplified presentation; `accept` and the
/// result always see images of every generator of `p`.
pub fn search_quotients(
    p: &Presentation,
    extra_relators: &[Word],
    space: &SearchSpace,
    accept: &mut dyn FnMut(&PermutationQuotient) -> bool,
) -> Result<SearchOutcome, CosetError> {
    space.validate()?;
    for w in extra_relators {
        p.check_word(w)?;
    }
    let (simple, definitions) = p.simplify();
    let definitions: BTreeMap<Generator, Word> = definitions.into_iter().collect();
    let extras: Vec<Word> = extra_relators
        .iter()
        .map(|w| w.substitute_all(&definitions).cyclically_reduced())
        .collect();
    let lift = |q: &PermutationQuotient| PermutationQuotient {
        target: q.target.clone(),
        degree: q.degree,
        images: p
            .generators()
            .iter()
            .map(|g| {
                let image = match q.image_of(g) {
                    Some(x) => x.clone(),
                    None => q
                        .evaluate(&definitions[g])
                        .expect("definitions use remaining generators"),
                };
                (g.clone(), image)
            })
            .collect(),
    };
    let mut lifted = None;
    let outcome = search_reduced(&simple, &extras, space, &mut |q| {
        let full = lift(q);
        if accept(&full) {
            lifted = Some(full);
            true
        } else {
            false
        }
    })?;
    Ok(match outcome {
        SearchOutcome::Found(_) => SearchOutcome::Found(lifted.expect("accepted quotient")),
        other => other,
    })
}

fn search_reduced(
    p: &Presentation,
    extra_relators: &[Word],
    space: &SearchSpace,
    accept: &mut dyn FnMut(&PermutationQuotient) -> bool,
) -> Result<SearchOutcome, CosetError> {
    let n = p.generators().len();
    let to_rel = |w: &Word| -> Relator {
        w.syllables()
            .iter()
            .map(|s| (p.generator_index(&s.generator).expect("checked"), s.exponent))
            .collect()
    };
    let mut relators: Vec<Relator> = extra_relators.iter().map(to_rel).collect();
    relators.extend(p.relators().iter().map(to_rel));
    let gens_of: Vec<Vec<usize>> = relators
        .iter()
        .map(|r| r.iter().map(|&(g, _)| g).collect::<BTreeSet<_>>().into_iter().collect())
        .collect();
    let mut occurs = vec![Vec::new(); n];
    for (ri, gs) in gens_of.iter().enumerate() {
        for &g in gs {
            occurs[g].push(ri);
        }
    }
    let mut weight = vec![0u64; n];
    for (ri, r) in relators.iter().enumerate() {
        let bonus = if ri < extra_relators.len() { 1000 } else { 1 };
        for &(g, _) in r {
            weight[g] += bonus;
        }
    }

    let mut nodes = 0u64;
    for target in space.ordered_targets() {
        let elements = target.elements();
        let class_reps = target.class_representatives(&elements);
        let degree = target.degree();
        let mut search = Search {
            relators: relators.clone(),
            occurs: occurs.clone(),
            gens_of: gens_of.clone(),
            elements: &elements,
            class_reps: &class_reps,
            assignment: vec![None; n],
            weight: weight.clone(),
            nodes,
            max_nodes: space.max_nodes,
        };
        let mut found = None;
        let mut wrapped = |images: &[SmallPerm]| {
            let q = PermutationQuotient {
                target: target.to_string(),
                degree,
                images: p
                    .generators()
                    .iter()
                    .cloned()
                    .zip(images.iter().map(|s| s.to_permutation(degree)))
                    .collect(),
            };
            if accept(&q) {
                found = Some(q);
                true
            } else {
                false
            }
        };
        let step = search.node(&mut wrapped);
        nodes = search.nodes;
        match step {
            Step::Stop => return Ok(SearchOutcome::Found(found.expect("accepted quotient"))),
            Step::Budget => return Ok(SearchOutcome::BudgetExceeded { nodes }),
            Step::Continue => {}
        }
    }
    Ok(SearchOutcome::Exhausted { nodes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(text: &str) -> Presentation {
        Presentation::parse(text).unwrap()
    }

    /// Counts homomorphisms by brute force over all tuples.
    fn brute_count(p: &Presentation, target: TargetGroup) -> usize {
        let els = target.elements();
        let n = p.generators().len();
        let mut count = 0;
        let mut idx = vec![0usize; n];
        loop {
            let q = PermutationQuotient {
                target: target.to_string(),
                degree: target.degree(),
                images: p
                    .generators()
                    .iter()
                    .cloned()
                    .zip(idx.iter().map(|&i| els[i].to_permutation(target.degree())))
                    .collect(),
            };
            if q.check_relators(p).is_ok() {
                count += 1;
            }
            let mut k = 0;
            loop {
                if k == n {
                    return count;
                }
                idx[k] += 1;
                if idx[k] < els.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    fn search_count(p: &Presentation, target: TargetGroup) -> usize {
        // counts homomorphisms up to the conjugation symmetry of the first choice
        let space = SearchSpace {
            targets: vec![target],
            max_nodes: u64::MAX,
        };
        let mut seen = Vec::new();
        let outcome = search_quotients(p, &[], &space, &mut |q| {
            q.check_relators(p).unwrap();
            seen.push(q.clone());
            false
        })
        .unwrap();
        assert!(matches!(outcome, SearchOutcome::Exhausted { .. }));
        // expand by conjugation to recover the full count
        let els = target.elements();
        let mut all = BTreeSet::new();
        for q in &seen {
            for h in &els {
                let hp = h.to_permutation(target.degree());
                let conj: Vec<Permutation> = q.images.iter().map(|(_, x)| hp.inverse().then(x).then(&hp)).collect();
                all.insert(conj);
            }
        }
        all.len()
    }

    #[test]
    fn hom_counts_match_brute_force() {
        let trefoil = pres("gens: x y\nx y x y^-1 x^-1 y^-1");
        let eight = pres("gens: x y\ny^-1 x y x^-1 y x y^-1 x y x^-1");
        let torus_free = pres("gens: u v\nu^3 v^-2");
        for p in [&trefoil, &eight, &torus_free] {
            for t in [TargetGroup::Symmetric(3), TargetGroup::Symmetric(4)] {
                assert_eq!(search_count(p, t), brute_count(p, t), "{p} into {t}");
            }
        }
    }

    #[test]
    fn finds_s3_quotient_of_trefoil() {
        let trefoil = pres("gens: x y\nx y x y^-1 x^-1 y^-1");
        let out = search_quotients(&trefoil, &[], &SearchSpace::default(), &mut |q| {
            q.images.iter().any(|(_, p)| !p.is_identity()) && !q.images[0].1.commutes_with(&q.images[1].1)
        })
        .unwrap();
        let SearchOutcome::Found(q) = out else { panic!() };
        assert_eq!(q.target, "S3");
        q.check_relators(&trefoil).unwrap();
    }

    #[test]
    fn killed_meridian_has_no_nontrivial_quotient() {
        let trefoil = pres("gens: x y\nx y x y^-1 x^-1 y^-1");
        let out = search_quotients(
            &trefoil,
            &[Word::parse("x").unwrap()],
            &SearchSpace::default(),
            &mut |q| q.images.iter().any(|(_, p)| !p.is_identity()),
        )
        .unwrap();
        assert!(matches!(out, SearchOutcome::Exhausted { .. }));
    }

    #[test]
    fn budget_is_respected() {
        let free = pres("gens: a b c");
        let space = SearchSpace {
            targets: vec![TargetGroup::Symmetric(7)],
            max_nodes: 1000,
        };
        let out = search_quotients(&free, &[], &space, &mut |_| false).unwrap();
        assert!(matches!(out, SearchOutcome::BudgetExceeded { .. }));
    }
}
