//! HLT coset enumeration with coincidence processing.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::words::{Generator, Presentation, Word};

use super::CosetError;

const UNDEF: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationLimits {
    pub max_cosets: usize,
    pub max_time_millis: u64,
}

impl EnumerationLimits {
    pub fn new(max_cosets: usize, max_time_millis: u64) -> Result<Self, CosetError> {
        if max_cosets == 0 || max_time_millis == 0 {
            return Err(CosetError::InvalidLimits);
        }
        Ok(EnumerationLimits {
            max_cosets,
            max_time_millis,
        })
    }

    pub fn max_time(&self) -> Duration {
        Duration::from_millis(self.max_time_millis)
    }

    /// The componentwise minimum of two limits.
    pub fn capped(&self, other: &EnumerationLimits) -> EnumerationLimits {
        EnumerationLimits {
            max_cosets: self.max_cosets.min(other.max_cosets),
            max_time_millis: self.max_time_millis.min(other.max_time_millis),
        }
    }
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_cosets: 1_000_000,
            max_time_millis: 30_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationStats {
    /// Total cosets ever defined, including ones later found to coincide.
    pub cosets_defined: usize,
    pub max_live: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitKind {
    Cosets,
    Time,
}

#[derive(Clone, Debug)]
pub enum EnumerationResult {
    Completed { table: CosetTable, stats: EnumerationStats },
    LimitExceeded { limit: LimitKind, stats: EnumerationStats },
}

impl EnumerationResult {
    pub fn index(&self) -> Option<usize> {
        match self {
            EnumerationResult::Completed { table, .. } => Some(table.index()),
            EnumerationResult::LimitExceeded { .. } => None,
        }
    }

    pub fn stats(&self) -> EnumerationStats {
        match self {
            EnumerationResult::Completed { stats, .. } | EnumerationResult::LimitExceeded { stats, .. } => *stats,
        }
    }
}

/// A closed coset table: `rows[c][2 g]` is `c . g`, `rows[c][2 g + 1]` is
/// `c . g^-1`. Coset 0 is the subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    generators: Vec<Generator>,
    rows: Vec<Vec<u32>>,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.rows.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// The permutation of cosets induced by generator `g` (right action).
    pub fn generator_action(&self, g: usize) -> Vec<u32> {
        self.rows.iter().map(|r| r[2 * g]).collect()
    }

    fn trace(&self, start: u32, word: &Word) -> Result<u32, String> {
        let mut c = start;
        for s in word.syllables() {
            let g = self
                .generators
                .iter()
                .position(|h| *h == s.generator)
                .ok_or_else(|| format!("generator {} not in table", s.generator))?;
            let col = 2 * g + usize::from(s.exponent < 0);
            for _ in 0..s.exponent.unsigned_abs() {
                c = self.rows[c as usize][col];
            }
        }
        Ok(c)
    }

    /// Independent replay: every entry defined and in range, generator and
    /// inverse columns mutually inverse, every relator a loop at every coset,
    /// every subgroup generator a loop at coset 0.
    pub fn validate(&self, p: &Presentation, subgroup: &[Word]) -> Result<(), String> {
        if self.generators != p.generators() {
            return Err("generator list differs from presentation".into());
        }
        let n = self.rows.len();
        if n == 0 {
            return Err("empty table".into());
        }
        for (c, row) in self.rows.iter().enumerate() {
            if row.len() != 2 * self.generators.len() {
                return Err(format!("row {c} has wrong width"));
            }
            for (col, &d) in row.iter().enumerate() {
                if d as usize >= n {
                    return Err(format!("entry ({c}, {col}) out of range"));
                }
                if self.rows[d as usize][col ^ 1] as usize != c {
                    return Err(format!("entry ({c}, {col}) has no matching inverse"));
                }
            }
        }
        for r in p.relators() {
            for c in 0..n as u32 {
                if self.trace(c, r)? != c {
                    return Err(format!("relator {r} is not a loop at coset {c}"));
                }
            }
        }
        for h in subgroup {
            if self.trace(0, h)? != 0 {
                return Err(format!("subgroup generator {h} moves coset 0"));
            }
        }
        Ok(())
    }
}

enum Abort {
    Limit(LimitKind),
}

struct Enumerator {
    cols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    stats: EnumerationStats,
    queue: Vec<u32>,
    max_cosets: usize,
    deadline: Instant,
}

impl Enumerator {
    fn rows(&self) -> usize {
        self.parent.len()
    }

    fn get(&self, c: u32, col: usize) -> u32 {
        self.table[c as usize * self.cols + col]
    }

    fn set(&mut self, c: u32, col: usize, d: u32) {
        self.table[c as usize * self.cols + col] = d;
    }

    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = c;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn define(&mut self, c: u32, col: usize) -> Result<(), Abort> {
        if self.rows() >= self.max_cosets {
            return Err(Abort::Limit(LimitKind::Cosets));
        }
        if self.rows() % 4096 == 0 && Instant::now() > self.deadline {
            return Err(Abort::Limit(LimitKind::Time));
        }
        let d = self.rows() as u32;
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(UNDEF, self.cols));
        self.live += 1;
        self.stats.cosets_defined += 1;
        self.stats.max_live = self.stats.max_live.max(self.live);
        self.set(c, col, d);
        self.set(d, col ^ 1, c);
        Ok(())
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra != rb {
            let (keep, kill) = (ra.min(rb), ra.max(rb));
            self.parent[kill as usize] = keep;
            self.live -= 1;
            self.queue.push(kill);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut next = 0;
        while next < self.queue.len() {
            let dead = self.queue[next];
            next += 1;
            for col in 0..self.cols {
                let d = self.get(dead, col);
                if d == UNDEF {
                    continue;
                }
                self.set(d, col ^ 1, UNDEF);
                let mu = self.rep(dead);
                let nu = self.rep(d);
                let mu_x = self.get(mu, col);
                if mu_x != UNDEF {
                    self.merge(nu, mu_x);
                } else {
                    let nu_xi = self.get(nu, col ^ 1);
                    if nu_xi != UNDEF {
                        self.merge(mu, nu_xi);
                    } else {
                        self.set(mu, col, nu);
                        self.set(nu, col ^ 1, mu);
                    }
                }
            }
        }
    }

    fn scan_and_fill(&mut self, coset: u32, word: &[usize]) -> Result<(), Abort> {
        if word.is_empty() {
            return Ok(());
        }
        let (mut f, mut i) = (coset, 0usize);
        let (mut b, mut j) = (coset, word.len());
        loop {
            while i < j {
                let next = self.get(f, word[i]);
                if next == UNDEF {
                    break;
                }
                f = next;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                let next = self.get(b, word[j - 1] ^ 1);
                if next == UNDEF {
                    break;
                }
                b = next;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.set(f, word[i], b);
                self.set(b, word[i] ^ 1, f);
                return Ok(());
            }
            self.define(f, word[i])?;
        }
    }
}

fn letters(p: &Presentation, w: &Word) -> Vec<usize> {
    let mut out = Vec::new();
    for s in w.syllables() {
        let g = p
            .generator_index(&s.generator)
            .expect("word checked against presentation");
        let col = 2 * g + usize::from(s.exponent < 0);
        out.extend(std::iter::repeat_n(col, s.exponent.unsigned_abs() as usize));
    }
    out
}

/// Enumerates the cosets of `<subgroup>` in the group presented by `p`.
///
/// `Completed` carries a closed, consistent table whose size is the index.
/// The run is deterministic apart from where a time limit happens to cut it.
pub fn todd_coxeter(
    p: &Presentation,
    subgroup: &[Word],
    limits: &EnumerationLimits,
) -> Result<EnumerationResult, CosetError> {
    for w in subgroup {
        p.check_word(w)?;
    }
    let cols = 2 * p.generators().len();
    let relators: Vec<Vec<usize>> = p.relators().iter().map(|r| letters(p, r)).collect();
    let subgroup_letters: Vec<Vec<usize>> = subgroup.iter().map(|h| letters(p, h)).collect();

    let mut e = Enumerator {
        cols,
        table: vec![UNDEF; cols],
        parent: vec![0],
        live: 1,
        stats: EnumerationStats {
            cosets_defined: 1,
            max_live: 1,
        },
        queue: Vec::new(),
        max_cosets: limits.max_cosets.max(1),
        deadline: Instant::now() + limits.max_time(),
    };

    let run = |e: &mut Enumerator| -> Result<(), Abort> {
        for h in &subgroup_letters {
            e.scan_and_fill(0, h)?;
        }
        let mut c = 0u32;
        while (c as usize) < e.rows() {
            if c % 256 == 0 && Instant::now() > e.deadline {
                return Err(Abort::Limit(LimitKind::Time));
            }
            if e.is_live(c) {
                for r in &relators {
                    e.scan_and_fill(c, r)?;
                    if !e.is_live(c) {
                        break;
                    }
                }
                if e.is_live(c) {
                    for col in 0..cols {
                        if e.get(c, col) == UNDEF {
                            e.define(c, col)?;
                        }
                    }
                }
            }
            c += 1;
        }
        Ok(())
    };

    match run(&mut e) {
        Err(Abort::Limit(limit)) => Ok(EnumerationResult::LimitExceeded { limit, stats: e.stats }),
        Ok(()) => {
            let live: Vec<u32> = (0..e.rows() as u32).filter(|&c| e.is_live(c)).collect();
            let mut renumber = vec![UNDEF; e.rows()];
            for (i, &c) in live.iter().enumerate() {
                renumber[c as usize] = i as u32;
            }
            let mut rows = Vec::with_capacity(live.len());
            for &c in &live {
                let mut row = Vec::with_capacity(cols);
                for col in 0..cols {
                    let d = e.get(c, col);
                    let d = e.rep(d);
                    row.push(renumber[d as usize]);
                }
                rows.push(row);
            }
            Ok(EnumerationResult::Completed {
                table: CosetTable {
                    generators: p.generators().to_vec(),
                    rows,
                },
                stats: e.stats,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(text: &str) -> Presentation {
        Presentation::parse(text).unwrap()
    }

    fn index(p: &Presentation, subgroup: &[Word]) -> usize {
        let r = todd_coxeter(p, subgroup, &EnumerationLimits::default()).unwrap();
        match r {
            EnumerationResult::Completed { table, .. } => {
                table.validate(p, subgroup).unwrap();
                table.index()
            }
            other => panic!("enumeration did not complete: {other:?}"),
        }
    }

    #[test]
    fn cyclic_group() {
        assert_eq!(index(&pres("gens: x\nx^3"), &[]), 3);
    }

    #[test]
    fn whole_group_subgroup() {
        let t = pres("gens: x y\nx y x y^-1 x^-1 y^-1");
        let gens = [Word::parse("x").unwrap(), Word::parse("y").unwrap()];
        assert_eq!(index(&t, &gens), 1);
    }

    #[test]
    fn meridian_kills_trefoil() {
        let t = pres("gens: x y\nx y x y^-1 x^-1 y^-1\nx");
        assert_eq!(index(&t, &[]), 1);
    }

    #[test]
    fn finite_groups() {
        // S3 = <a, b | a^2, b^3, (ab)^2>
        assert_eq!(index(&pres("gens: a b\na^2\nb^3\na b a b"), &[]), 6);
        // A5 = <a, b | a^2, b^3, (ab)^5>
        assert_eq!(index(&pres("gens: a b\na^2\nb^3\na b a b a b a b a b"), &[]), 60);
        // trivial group with no generators
        assert_eq!(index(&pres("gens:"), &[]), 1);
    }

    #[test]
    fn abelian_baselines() {
        for a in 1..=6 {
            for b in 1..=6 {
                let p = pres(&format!("gens: x y\nx^{a}\ny^{b}\nx y x^-1 y^-1"));
                assert_eq!(index(&p, &[]), a * b, "({a}, {b})");
            }
        }
    }

    #[test]
    fn limits_are_reported() {
        let free = pres("gens: x y");
        let r = todd_coxeter(&free, &[], &EnumerationLimits::new(500, 10_000).unwrap()).unwrap();
        match r {
            EnumerationResult::LimitExceeded { limit, stats } => {
                assert_eq!(limit, LimitKind::Cosets);
                assert!(stats.cosets_defined <= 500);
            }
            _ => panic!("free group has infinite index"),
        }
        assert!(EnumerationLimits::new(0, 1).is_err());
    }

    #[test]
    fn malformed_subgroup() {
        let p = pres("gens: x\nx^2");
        assert!(todd_coxeter(&p, &[Word::parse("z").unwrap()], &EnumerationLimits::default()).is_err());
    }

    #[test]
    fn validator_catches_corruption() {
        let p = pres("gens: x\nx^3");
        let Ok(EnumerationResult::Completed { mut table, .. }) = todd_coxeter(&p, &[], &EnumerationLimits::default())
        else {
            panic!()
        };
        table.rows[0][0] = 0;
        assert!(table.validate(&p, &[]).is_err());
    }
}
