//! Knot diagrams given as planar-diagram (PD) codes.
//!
//! A crossing `X(i, j, k, l)` lists edge labels counterclockwise starting
//! from the incoming under-edge, so the under-strand runs `i -> k` with
//! `k = i + 1 (mod 2c)`. The over-strand runs `j -> l` when `l = j + 1`
//! (a left-handed, negative crossing) and `l -> j` when `j = l + 1`
//! (right-handed, positive).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::coset_enum::{
    is_infinite_cyclic_certified, CosetError, CyclicVerdict, EnumerationLimits, NonCyclicCertificate, SearchSpace,
    UnknownReason,
};
use crate::words::{mu_word, Generator, Presentation, PresentationError, PseudoMeridianSpec, Word};

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("crossing index {index} out of range for a {crossings}-crossing diagram")]
    IndexOutOfRange { index: usize, crossings: usize },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Coset(#[from] CosetError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Handedness {
    /// Negative crossing.
    Left,
    /// Positive crossing.
    Right,
}

impl Handedness {
    pub fn sign(self) -> i64 {
        match self {
            Handedness::Left => -1,
            Handedness::Right => 1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Handedness::Left => Handedness::Right,
            Handedness::Right => Handedness::Left,
        }
    }
}

/// Oriented roles of the four edges at a crossing (labels, 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Roles {
    under_in: u32,
    under_out: u32,
    over_in: u32,
    over_out: u32,
    handedness: Handedness,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PdCode {
    crossings: Vec<[u32; 4]>,
    handedness: Vec<Handedness>,
}

fn successor(label: u32, edges: u32) -> u32 {
    label % edges + 1
}

impl PdCode {
    pub fn new(crossings: Vec<[u32; 4]>) -> Result<Self, DiagramError> {
        if crossings.is_empty() {
            return Err(DiagramError::InvalidDiagram("no crossings".into()));
        }
        let edges = 2 * crossings.len() as u32;
        let mut count = vec![0usize; edges as usize + 1];
        for (n, x) in crossings.iter().enumerate() {
            for &label in x {
                if label == 0 || label > edges {
                    return Err(DiagramError::InvalidDiagram(format!(
                        "crossing {n}: label {label} outside 1..={edges}"
                    )));
                }
                count[label as usize] += 1;
            }
        }
        if let Some(label) = (1..=edges).find(|&l| count[l as usize] != 2) {
            return Err(DiagramError::InvalidDiagram(format!(
                "label {label} appears {} times, expected 2",
                count[label as usize]
            )));
        }

        let mut handedness = Vec::with_capacity(crossings.len());
        for (n, &[i, j, k, l]) in crossings.iter().enumerate() {
            if k != successor(i, edges) {
                return Err(DiagramError::InvalidDiagram(format!(
                    "crossing {n}: under-strand labels {i}, {k} are not consecutive"
                )));
            }
            let left = l == successor(j, edges);
            let right = j == successor(l, edges);
            let h = match (left, right) {
                // only possible with two edges; the over-strand cannot enter
                // along the under-strand's incoming edge
                (true, true) => {
                    if j == i {
                        Handedness::Right
                    } else {
                        Handedness::Left
                    }
                }
                (true, false) => Handedness::Left,
                (false, true) => Handedness::Right,
                (false, false) => {
                    return Err(DiagramError::InvalidDiagram(format!(
                        "crossing {n}: over-strand labels {j}, {l} are not consecutive"
                    )))
                }
            };
            handedness.push(h);
        }

        let pd = PdCode { crossings, handedness };
        // every edge must start at one crossing and end at another
        let mut starts = vec![0usize; edges as usize + 1];
        let mut ends = vec![0usize; edges as usize + 1];
        for n in 0..pd.len() {
            let r = pd.roles(n);
            starts[r.under_out as usize] += 1;
            starts[r.over_out as usize] += 1;
            ends[r.under_in as usize] += 1;
            ends[r.over_in as usize] += 1;
        }
        if let Some(label) = (1..=edges).find(|&l| starts[l as usize] != 1 || ends[l as usize] != 1) {
            return Err(DiagramError::InvalidDiagram(format!(
                "edge {label} is not traversed consistently"
            )));
        }
        Ok(pd)
    }

    /// Parses a sequence of `X(a,b,c,d)` terms separated by whitespace or commas.
    /// A surrounding `PD[...]` / `PD(...)` wrapper is accepted.
    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        let bytes = text.as_bytes();
        let err = |position: usize, message: &str| DiagramError::Parse {
            position,
            message: message.to_string(),
        };
        let mut pos = 0;
        let skip = |pos: &mut usize| {
            while *pos < bytes.len() && (bytes[*pos].is_ascii_whitespace() || bytes[*pos] == b',') {
                *pos += 1;
            }
        };
        let mut body_end = bytes.len();
        skip(&mut pos);
        if text[pos..].starts_with("PD") {
            pos += 2;
            skip(&mut pos);
            let close = match bytes.get(pos) {
                Some(b'[') => b']',
                Some(b'(') => b')',
                _ => return Err(err(pos, "expected '[' or '(' after PD")),
            };
            pos += 1;
            let trimmed = text.trim_end();
            if !trimmed.as_bytes().last().is_some_and(|&b| b == close) {
                return Err(err(trimmed.len(), "unterminated PD wrapper"));
            }
            body_end = trimmed.len() - 1;
        }

        let mut crossings = Vec::new();
        loop {
            skip(&mut pos);
            if pos >= body_end {
                break;
            }
            if bytes[pos] != b'X' {
                return Err(err(pos, "expected 'X'"));
            }
            pos += 1;
            skip_ws(bytes, &mut pos);
            let close = match bytes.get(pos) {
                Some(b'(') => b')',
                Some(b'[') => b']',
                _ => return Err(err(pos, "expected '(' after X")),
            };
            pos += 1;
            let mut labels = [0u32; 4];
            for (n, slot) in labels.iter_mut().enumerate() {
                skip_ws(bytes, &mut pos);
                if n > 0 {
                    if bytes.get(pos) != Some(&b',') {
                        return Err(err(pos, "expected ','"));
                    }
                    pos += 1;
                    skip_ws(bytes, &mut pos);
                }
                let start = pos;
                while pos < body_end && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if start == pos {
                    return Err(err(pos, "expected an edge label"));
                }
                *slot = text[start..pos]
                    .parse()
                    .map_err(|_| err(start, "edge label too large"))?;
            }
            skip_ws(bytes, &mut pos);
            if bytes.get(pos) != Some(&close) {
                return Err(err(pos, "expected closing bracket after four labels"));
            }
            pos += 1;
            crossings.push(labels);
        }
        if crossings.is_empty() {
            return Err(err(pos, "no crossings"));
        }
        PdCode::new(crossings)
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn edge_count(&self) -> u32 {
        2 * self.crossings.len() as u32
    }

    pub fn handedness(&self, i: usize) -> Result<Handedness, DiagramError> {
        self.check_index(i)?;
        Ok(self.handedness[i])
    }

    pub fn writhe(&self) -> i64 {
        self.handedness.iter().map(|h| h.sign()).sum()
    }

    fn check_index(&self, i: usize) -> Result<(), DiagramError> {
        if i < self.len() {
            Ok(())
        } else {
            Err(DiagramError::IndexOutOfRange {
                index: i,
                crossings: self.len(),
            })
        }
    }

    fn roles(&self, n: usize) -> Roles {
        let [i, j, k, l] = self.crossings[n];
        let handedness = self.handedness[n];
        let (over_in, over_out) = match handedness {
            Handedness::Left => (j, l),
            Handedness::Right => (l, j),
        };
        Roles {
            under_in: i,
            under_out: k,
            over_in,
            over_out,
            handedness,
        }
    }

    /// Arc index (0-based) of every edge, indexed by `label - 1`. Arcs are
    /// numbered by their smallest edge label.
    pub fn arcs(&self) -> Vec<usize> {
        let edges = self.edge_count() as usize;
        let mut parent: Vec<usize> = (0..edges).collect();
        fn find(parent: &mut [usize], mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        for n in 0..self.len() {
            let r = self.roles(n);
            let a = find(&mut parent, r.over_in as usize - 1);
            let b = find(&mut parent, r.over_out as usize - 1);
            parent[a.max(b)] = a.min(b);
        }
        let mut index = BTreeMap::new();
        (0..edges)
            .map(|e| {
                let root = find(&mut parent, e);
                let next = index.len();
                *index.entry(root).or_insert(next)
            })
            .collect()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs().iter().max().map_or(0, |m| m + 1)
    }

    fn arc_generator(&self, arcs: &[usize], label: u32) -> Generator {
        arc_name(arcs[label as usize - 1])
    }
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn arc_name(arc: usize) -> Generator {
    Generator::named(&format!("x{}", arc + 1))
}

fn edge_name(label: u32) -> Generator {
    Generator::named(&format!("e{label}"))
}

impl fmt::Display for PdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, [a, b, c, d]) in self.crossings.iter().enumerate() {
            if n > 0 {
                write!(f, " ")?;
            }
            write!(f, "X({a},{b},{c},{d})")?;
        }
        Ok(())
    }
}

impl Serialize for PdCode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Wirtinger presentation: one generator per arc, one relator per crossing.
/// At a left-handed crossing the outgoing under-arc is `o in o^-1`, at a
/// right-handed one `o^-1 in o`, where `o` is the over-arc.
pub fn wirtinger(pd: &PdCode) -> Result<Presentation, DiagramError> {
    let arcs = pd.arcs();
    let generators: Vec<Generator> = (0..pd.arc_count()).map(arc_name).collect();
    let relators = (0..pd.len())
        .map(|n| {
            let r = pd.roles(n);
            let o = pd.arc_generator(&arcs, r.over_in);
            let a = pd.arc_generator(&arcs, r.under_in);
            let b = pd.arc_generator(&arcs, r.under_out);
            let e = -r.handedness.sign();
            Word::from_syllables([(o.clone(), e), (a, 1), (o, -e), (b, -1)])
        })
        .collect();
    Ok(Presentation::new(generators.clone(), relators)?.with_meridians(generators)?)
}

/// Presentation on one generator per edge. Crossing `n` contributes the
/// relators `2n` (`x y w^-1 z^-1`) and `2n + 1` (`x w^-1` at a left-handed
/// crossing, `y z^-1` at a right-handed one), in the notation of
/// [`CrossingGenerators`]. A crossing change alters only relator `2n + 1`.
pub fn edge_presentation(pd: &PdCode) -> Result<Presentation, DiagramError> {
    let generators: Vec<Generator> = (1..=pd.edge_count()).map(edge_name).collect();
    let mut relators = Vec::with_capacity(2 * pd.len());
    for n in 0..pd.len() {
        let [x, y, z, w] = crossing_edges(pd, n);
        let (x, y, z, w) = (edge_name(x), edge_name(y), edge_name(z), edge_name(w));
        relators.push(Word::from_syllables([
            (x.clone(), 1),
            (y.clone(), 1),
            (w.clone(), -1),
            (z.clone(), -1),
        ]));
        relators.push(match pd.handedness[n] {
            Handedness::Left => Word::from_syllables([(x, 1), (w, -1)]),
            Handedness::Right => Word::from_syllables([(y, 1), (z, -1)]),
        });
    }
    Ok(Presentation::new(generators.clone(), relators)?.with_meridians(generators)?)
}

/// Edge labels `[x, y, z, w]`: `x`, `y` enter the crossing and `w`, `z`
/// continue them. At a left-handed crossing `x` is the over-strand, at a
/// right-handed one `y` is.
fn crossing_edges(pd: &PdCode, n: usize) -> [u32; 4] {
    let r = pd.roles(n);
    match r.handedness {
        Handedness::Left => [r.over_in, r.under_in, r.under_out, r.over_out],
        Handedness::Right => [r.under_in, r.over_in, r.over_out, r.under_out],
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingGenerators {
    pub x: Generator,
    pub y: Generator,
    pub z: Generator,
    pub w: Generator,
    pub handedness: Handedness,
}

impl CrossingGenerators {
    /// The crossing relations as words: `x y w^-1 z^-1` and `x w^-1` or `y z^-1`.
    pub fn relations(&self) -> [Word; 2] {
        let vertex = Word::from_syllables([
            (self.x.clone(), 1),
            (self.y.clone(), 1),
            (self.w.clone(), -1),
            (self.z.clone(), -1),
        ]);
        let equality = match self.handedness {
            Handedness::Left => Word::from_syllables([(self.x.clone(), 1), (self.w.clone(), -1)]),
            Handedness::Right => Word::from_syllables([(self.y.clone(), 1), (self.z.clone(), -1)]),
        };
        [vertex, equality]
    }
}

/// The four Wirtinger generators at crossing `i`.
pub fn crossing_generators(pd: &PdCode, i: usize) -> Result<CrossingGenerators, DiagramError> {
    pd.check_index(i)?;
    let arcs = pd.arcs();
    let [x, y, z, w] = crossing_edges(pd, i).map(|e| pd.arc_generator(&arcs, e));
    Ok(CrossingGenerators {
        x,
        y,
        z,
        w,
        handedness: pd.handedness[i],
    })
}

/// Swaps over and under at crossing `i`. Edge labels are unchanged.
pub fn crossing_change(pd: &PdCode, i: usize) -> Result<PdCode, DiagramError> {
    pd.check_index(i)?;
    let mut crossings = pd.crossings.clone();
    let [a, b, c, d] = crossings[i];
    crossings[i] = match pd.handedness[i] {
        Handedness::Left => [b, c, d, a],
        Handedness::Right => [d, a, b, c],
    };
    let mut handedness = pd.handedness.clone();
    handedness[i] = handedness[i].flipped();
    Ok(PdCode { crossings, handedness })
}

#[derive(Clone, Debug, Serialize)]
pub struct UnknottingSearch {
    /// Crossings whose change gives a diagram with infinite cyclic group.
    pub unknotting: Vec<usize>,
    /// Crossings whose change is certified to leave a non-cyclic group.
    pub knotted: Vec<(usize, NonCyclicCertificate)>,
    pub unknown: Vec<(usize, UnknownReason)>,
}

/// Tries every crossing change, certifying the result against `x1`.
pub fn find_unknotting_crossings(
    pd: &PdCode,
    limits: &EnumerationLimits,
    space: &SearchSpace,
) -> Result<UnknottingSearch, DiagramError> {
    let mut out = UnknottingSearch {
        unknotting: Vec::new(),
        knotted: Vec::new(),
        unknown: Vec::new(),
    };
    for i in 0..pd.len() {
        let changed = wirtinger(&crossing_change(pd, i)?)?;
        let meridian = changed.generators()[0].clone();
        match is_infinite_cyclic_certified(&changed, &meridian, limits, space)? {
            CyclicVerdict::Yes { .. } => out.unknotting.push(i),
            CyclicVerdict::No(cert) => out.knotted.push((i, cert)),
            CyclicVerdict::Unknown(reason) => out.unknown.push((i, reason)),
        }
    }
    Ok(out)
}

/// `x (y x^-1)^m` for the generators at crossing `i`.
pub fn pseudo_meridian_family(pd: &PdCode, i: usize, m: i64) -> Result<Word, DiagramError> {
    let g = crossing_generators(pd, i)?;
    Ok(mu_word(&PseudoMeridianSpec::new(g.x, g.y, m)?))
}

/// Word-level argument that killing `x (y x^-1)^n` has the same effect
/// before and after changing crossing `i`.
///
/// With `a = y x^-1`, the quotient satisfies `x = a^n` and `y = a^(n+1)`.
/// The vertex relation then fixes `z` and `w`, and the relation the change
/// swaps in reduces to the identity; the same holds in reverse. So both
/// quotients coincide. If the changed diagram is the unknot, its group is
/// `Z` and `mu_n`, with exponent sum 1, kills it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingSubstitutionProof {
    pub crossing: usize,
    pub n: i64,
    /// `z` and `w` as powers of `a`, solved from the original relations.
    pub z: Word,
    pub w: Word,
    /// The changed diagram's relation after substitution.
    pub swapped: Word,
    /// The original relation after substituting into the changed diagram.
    pub restored: Word,
    pub exponent_sum: i64,
}

impl CrossingSubstitutionProof {
    /// Both relations collapse and `mu_n` maps to a generator of `Z`.
    pub fn holds(&self) -> bool {
        self.swapped.is_identity() && self.restored.is_identity() && self.exponent_sum.abs() == 1
    }
}

pub fn crossing_substitution_proof(pd: &PdCode, i: usize, n: i64) -> Result<CrossingSubstitutionProof, DiagramError> {
    let g = crossing_generators(pd, i)?;
    // arcs are named x1, x2, ..., so `a` is free
    let a = Generator::named("a");
    let x = Word::power(&a, n);
    let y = Word::power(&a, n + 1);
    // Left: x = w, z = x y w^-1. Right: y = z, w = z^-1 x y.
    let solve = |h: Handedness| match h {
        Handedness::Left => (x.concat(&y).concat(&x.inverse()), x.clone()),
        Handedness::Right => (y.clone(), y.inverse().concat(&x).concat(&y)),
    };
    let other = |h: Handedness, z: &Word, w: &Word| match h {
        Handedness::Left => y.concat(&z.inverse()),
        Handedness::Right => x.concat(&w.inverse()),
    };
    let h = pd.handedness[i];
    let (z, w) = solve(h);
    let swapped = other(h, &z, &w);
    let (z2, w2) = solve(h.flipped());
    let restored = other(h.flipped(), &z2, &w2);
    let mu = mu_word(&PseudoMeridianSpec::new(g.x.clone(), g.y.clone(), n)?);
    let exponent_sum = mu.generators().iter().map(|gen| mu.exponent_sum(gen)).sum();
    Ok(CrossingSubstitutionProof {
        crossing: i,
        n,
        z,
        w,
        swapped,
        restored,
        exponent_sum,
    })
}

/// Inserts `t` full twists (`2|t|` crossings, positive for `t > 0`) into the
/// two edges leaving crossing `i`, then relabels edges.
pub fn twist_arcs(pd: &PdCode, i: usize, t: i64) -> Result<PdCode, DiagramError> {
    pd.check_index(i)?;
    let extra = 2 * t.unsigned_abs() as u32;
    // outgoing positions are adjacent; the counterclockwise-earlier one is on the right
    let (right_pos, left_pos) = match pd.handedness[i] {
        Handedness::Left => (2, 3),
        Handedness::Right => (1, 2),
    };
    let right_edge = pd.crossings[i][right_pos];
    let left_edge = pd.crossings[i][left_pos];

    // provisional labels (edge, segment); segment 0 starts at crossing i
    let subdivided = |e: u32| e == right_edge || e == left_edge;
    let mut crossings: Vec<[(u32, u32); 4]> = pd
        .crossings
        .iter()
        .enumerate()
        .map(|(n, x)| {
            let mut out = [(0, 0); 4];
            for (p, &e) in x.iter().enumerate() {
                let outgoing_here = n == i && (p == right_pos || p == left_pos);
                out[p] = if subdivided(e) && !outgoing_here {
                    (e, extra)
                } else {
                    (e, 0)
                };
            }
            out
        })
        .collect();

    let (mut right, mut left) = (right_edge, left_edge);
    for s in 0..extra {
        let (r_in, r_out) = ((right, s), (right, s + 1));
        let (l_in, l_out) = ((left, s), (left, s + 1));
        // the strands swap sides at every crossing
        crossings.push(if t > 0 {
            [r_in, l_out, r_out, l_in]
        } else {
            [l_in, r_in, l_out, r_out]
        });
        std::mem::swap(&mut right, &mut left);
    }

    let mut order: Vec<(u32, u32)> = crossings.iter().flatten().copied().collect();
    order.sort_unstable();
    order.dedup();
    let relabel: BTreeMap<(u32, u32), u32> = order.into_iter().zip(1..).collect();
    PdCode::new(crossings.into_iter().map(|x| x.map(|e| relabel[&e])).collect())
}

/// PD code of the closure of a braid on `strands` strands. Letter `k > 0`
/// is a positive crossing between strands `k` and `k + 1`, `-k` its inverse.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<PdCode, DiagramError> {
    if strands < 2 || word.is_empty() {
        return Err(DiagramError::InvalidDiagram(
            "braid needs two strands and a letter".into(),
        ));
    }
    // provisional edge ids; each crossing consumes two and creates two
    let mut current: Vec<usize> = (0..strands).collect();
    let mut next_id = strands;
    let mut raw: Vec<([usize; 4], bool)> = Vec::new();
    for &letter in word {
        let k = letter.unsigned_abs() as usize;
        if letter == 0 || k >= strands {
            return Err(DiagramError::InvalidDiagram(format!(
                "braid letter {letter} out of range"
            )));
        }
        let (l_in, r_in) = (current[k - 1], current[k]);
        let (l_out, r_out) = (next_id, next_id + 1);
        next_id += 2;
        // the strand entering on the left leaves on the right
        let positive = letter > 0;
        raw.push((
            if positive {
                [r_in, l_out, r_out, l_in]
            } else {
                [l_in, r_in, l_out, r_out]
            },
            positive,
        ));
        current[k - 1] = r_out;
        current[k] = l_out;
    }

    let mut alias: Vec<usize> = (0..next_id).collect();
    for (p, &top) in current.iter().enumerate() {
        alias[top] = p;
    }
    let raw: Vec<([usize; 4], bool)> = raw.into_iter().map(|(x, pos)| (x.map(|e| alias[e]), pos)).collect();

    // walk the single component, numbering edges in order
    let mut end_at: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for (n, (x, positive)) in raw.iter().enumerate() {
        end_at.insert(x[0], (n, 2));
        let over_in = if *positive { 3 } else { 1 };
        end_at.insert(x[over_in], (n, 4 - over_in));
    }
    let start = raw[0].0[0];
    let mut labels: BTreeMap<usize, u32> = BTreeMap::new();
    let mut edge = start;
    loop {
        if labels.contains_key(&edge) {
            break;
        }
        labels.insert(edge, labels.len() as u32 + 1);
        let (n, out_pos) = end_at[&edge];
        edge = raw[n].0[out_pos];
    }
    if labels.len() != 2 * raw.len() {
        return Err(DiagramError::InvalidDiagram("braid closure is not a knot".into()));
    }
    PdCode::new(raw.iter().map(|(x, _)| x.map(|e| labels[&e])).collect())
}

/// Parses lines `name: X(...) X(...)`; blank lines and `#` comments are skipped.
pub fn parse_named_diagrams(text: &str) -> Result<Vec<(String, PdCode)>, DiagramError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let content = line.split('#').next().unwrap_or("");
        if !content.trim().is_empty() {
            let colon = content.find(':').ok_or(DiagramError::Parse {
                position: offset,
                message: "expected 'name: X(...)'".into(),
            })?;
            let (name, body) = (content[..colon].trim(), &content[colon + 1..]);
            if name.is_empty() {
                return Err(DiagramError::Parse {
                    position: offset,
                    message: "empty diagram name".into(),
                });
            }
            let pd = PdCode::parse(body).map_err(|e| match e {
                DiagramError::Parse { position, message } => DiagramError::Parse {
                    position: offset + colon + 1 + position,
                    message,
                },
                other => other,
            })?;
            out.push((name.to_string(), pd));
        }
        offset += line.len();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset_enum::{is_killer, KillerVerdict};

    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

    fn trefoil() -> PdCode {
        PdCode::parse(TREFOIL).unwrap()
    }

    #[test]
    fn parses_and_prints() {
        let pd = trefoil();
        assert_eq!(pd.len(), 3);
        assert_eq!(pd.to_string(), TREFOIL);
        assert_eq!(
            PdCode::parse("PD[X[1, 4, 2, 5], X[3, 6, 4, 1], X[5, 2, 6, 3]]").unwrap(),
            pd
        );
        assert_eq!(PdCode::parse("X(1,4,2,5),X(3,6,4,1),\nX(5,2,6,3)").unwrap(), pd);
        assert_eq!(pd.writhe(), -3);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(PdCode::parse(""), Err(DiagramError::Parse { .. })));
        assert!(matches!(PdCode::parse("   "), Err(DiagramError::Parse { .. })));
        match PdCode::parse("X(1,4,2,5) Y(3,6,4,1)") {
            Err(DiagramError::Parse { position, .. }) => assert_eq!(position, 11),
            other => panic!("{other:?}"),
        }
        assert!(matches!(PdCode::parse("X(1,4,2)"), Err(DiagramError::Parse { .. })));
        assert!(matches!(
            PdCode::parse("X(1,1,2,5) X(3,6,4,1) X(5,2,6,3)"),
            Err(DiagramError::InvalidDiagram(_))
        ));
        assert!(matches!(
            PdCode::parse("X(1,4,3,5) X(2,6,4,1) X(5,2,6,3)"),
            Err(DiagramError::InvalidDiagram(_))
        ));
    }

    #[test]
    fn trefoil_wirtinger() {
        let p = wirtinger(&trefoil()).unwrap();
        assert_eq!(p.generators().len(), 3);
        assert_eq!(p.relators().len(), 3);
        assert!(p.abelianization().is_infinite_cyclic());
        assert_eq!(p.meridians().len(), 3);
    }

    #[test]
    fn one_crossing_unknots() {
        for text in ["X(1,2,2,1)", "X(1,1,2,2)"] {
            let pd = PdCode::parse(text).unwrap();
            let p = wirtinger(&pd).unwrap();
            assert_eq!(p.generators().len(), 1);
            assert!(p.relators().iter().all(|r| r.is_identity()));
        }
        assert_eq!(PdCode::parse("X(1,2,2,1)").unwrap().writhe(), -1);
        assert_eq!(PdCode::parse("X(1,1,2,2)").unwrap().writhe(), 1);
    }

    #[test]
    fn crossing_generators_and_relations() {
        let pd = trefoil();
        let p = wirtinger(&pd).unwrap();
        for i in 0..pd.len() {
            let g = crossing_generators(&pd, i).unwrap();
            assert_eq!(g.handedness, Handedness::Left);
            assert_eq!(g.x, g.w);
            let distinct: std::collections::BTreeSet<_> = [&g.x, &g.y, &g.z, &g.w].into_iter().collect();
            assert_eq!(distinct.len(), 3);
            // x y = z w holds as a consequence of the crossing's Wirtinger relator
            let [vertex, _] = g.relations();
            let rel = &p.relators()[i];
            assert!(is_conjugate_or_inverse(&vertex, rel), "{vertex} vs {rel}");
        }
        assert!(matches!(
            crossing_generators(&pd, 3),
            Err(DiagramError::IndexOutOfRange { .. })
        ));
    }

    fn is_conjugate_or_inverse(a: &Word, b: &Word) -> bool {
        let rotations = |w: &Word| -> Vec<Word> {
            let letters: Vec<(Generator, i64)> = w
                .syllables()
                .iter()
                .flat_map(|s| {
                    std::iter::repeat((s.generator.clone(), s.exponent.signum()))
                        .take(s.exponent.unsigned_abs() as usize)
                })
                .collect();
            (0..letters.len())
                .map(|k| Word::from_syllables(letters[k..].iter().chain(&letters[..k]).cloned()))
                .collect()
        };
        let rb = rotations(b);
        let rbi = rotations(&b.inverse());
        rotations(a).iter().any(|r| rb.contains(r) || rbi.contains(r))
    }

    #[test]
    fn crossing_change_is_an_involution() {
        let pd = trefoil();
        for i in 0..pd.len() {
            let once = crossing_change(&pd, i).unwrap();
            assert_ne!(once, pd);
            assert_eq!(once.handedness(i).unwrap(), Handedness::Right);
            assert_eq!(crossing_change(&once, i).unwrap(), pd);
            // same edges in the same roles, handedness flipped
            let (a, b) = (
                crossing_generators(&pd, i).unwrap(),
                crossing_generators(&once, i).unwrap(),
            );
            assert_eq!(b.handedness, a.handedness.flipped());
            assert_eq!(b.y, b.z);
        }
    }

    #[test]
    fn crossing_change_replaces_one_edge_relator() {
        let pd = trefoil();
        let before = edge_presentation(&pd).unwrap();
        for i in 0..pd.len() {
            let after = edge_presentation(&crossing_change(&pd, i).unwrap()).unwrap();
            let differing: Vec<usize> = (0..before.relators().len())
                .filter(|&r| before.relators()[r] != after.relators()[r])
                .collect();
            assert_eq!(differing, vec![2 * i + 1]);
            let [x, y, z, w] = crossing_edges(&pd, i).map(edge_name);
            assert_eq!(before.relators()[2 * i + 1], Word::from_syllables([(x, 1), (w, -1)]));
            assert_eq!(after.relators()[2 * i + 1], Word::from_syllables([(y, 1), (z, -1)]));
        }
        assert!(before.abelianization().is_infinite_cyclic());
    }

    #[test]
    fn trefoil_crossings_all_unknot() {
        let found =
            find_unknotting_crossings(&trefoil(), &EnumerationLimits::default(), &SearchSpace::default()).unwrap();
        assert_eq!(found.unknotting, vec![0, 1, 2]);
        assert!(found.knotted.is_empty() && found.unknown.is_empty());
    }

    #[test]
    fn family_members() {
        let pd = trefoil();
        let g = crossing_generators(&pd, 0).unwrap();
        assert_eq!(pseudo_meridian_family(&pd, 0, 0).unwrap(), Word::letter(&g.x));
        let p = wirtinger(&pd).unwrap();
        for m in -3..=3 {
            let mu = pseudo_meridian_family(&pd, 0, m).unwrap();
            assert_eq!(p.generators().iter().map(|g| mu.exponent_sum(g)).sum::<i64>(), 1);
            let v = is_killer(&p, &mu, &EnumerationLimits::default(), &SearchSpace::default()).unwrap();
            assert!(matches!(v, KillerVerdict::Verified(_)), "m = {m}: {}", v.label());
        }
    }

    #[test]
    fn twisting() {
        let pd = trefoil();
        assert_eq!(twist_arcs(&pd, 1, 0).unwrap(), pd);
        for t in [-2, -1, 1, 2] {
            for i in 0..pd.len() {
                let twisted = twist_arcs(&pd, i, t).unwrap();
                assert_eq!(twisted.len(), 3 + 2 * t.unsigned_abs() as usize);
                assert!(wirtinger(&twisted).unwrap().abelianization().is_infinite_cyclic());
                assert_eq!(twisted.writhe(), -3 + 2 * t);
            }
        }
    }

    #[test]
    fn braid_closures() {
        let trefoil = braid_closure(2, &[-1, -1, -1]).unwrap();
        assert_eq!(trefoil.len(), 3);
        assert_eq!(trefoil.writhe(), -3);
        assert!(wirtinger(&trefoil).unwrap().abelianization().is_infinite_cyclic());
        let eight = braid_closure(3, &[1, -2, 1, -2]).unwrap();
        assert_eq!(eight.writhe(), 0);
        assert!(braid_closure(2, &[1, 1]).is_err());
        assert!(braid_closure(2, &[2]).is_err());
    }

    #[test]
    fn named_files() {
        let text = "# knots\ntrefoil: X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)\n\nunknot: X(1,2,2,1)  # kink\n";
        let named = parse_named_diagrams(text).unwrap();
        assert_eq!(named.len(), 2);
        assert_eq!(named[0].0, "trefoil");
        assert_eq!(named[1].1.len(), 1);
        match parse_named_diagrams("a: X(1,2,2,1)\nb: Q") {
            Err(DiagramError::Parse { position, .. }) => assert_eq!(position, 17),
            other => panic!("{other:?}"),
        }
        assert!(parse_named_diagrams("X(1,2,2,1)").is_err());
    }

    #[test]
    fn substitution_proof_collapses_both_ways() {
        let pd = trefoil();
        let a = Generator::named("a");
        for i in 0..pd.len() {
            let mirror = crossing_change(&pd, i).unwrap();
            for n in -4..=6 {
                for d in [&pd, &mirror] {
                    let proof = crossing_substitution_proof(d, i, n).unwrap();
                    assert!(proof.holds(), "{i} {n} {proof:?}");
                    assert_eq!(proof.z, Word::power(&a, n + 1));
                    assert_eq!(proof.w, Word::power(&a, n));
                }
            }
        }
    }
}
