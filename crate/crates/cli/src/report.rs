//! The certificate report emitted by every subcommand.
//!
//! Everything here is plain data so that a JSON report deserializes back
//! into an equal value.

use std::fmt::{self, Write as _};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use killer_core::coset_enum::{
    EnumerationLimits, EnumerationStats, FiniteQuotientCertificate, KillerVerdict, PermutationQuotient,
    RefutationSource, UnknownReason,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub tool_version: String,
    pub input: String,
    pub status: Status,
    pub limits: LimitsReport,
    pub details: Details,
    pub family: Vec<FamilyMember>,
    pub nonconjugacy: Nonconjugacy,
    pub assumptions: Vec<String>,
    pub errata: Vec<String>,
    pub notes: Vec<String>,
    /// Wall-clock time; the only field that varies between identical runs.
    pub timing_millis: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Every requested certificate was produced.
    Certified,
    /// Some verdict is unknown or some certificate is missing.
    Partial,
    /// A hypothesis the pipeline needs could not be established.
    HypothesisFailure,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Certified => 0,
            Status::Partial => 1,
            Status::HypothesisFailure => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitsReport {
    pub max_cosets: usize,
    pub max_time_millis: u64,
}

impl From<&EnumerationLimits> for LimitsReport {
    fn from(l: &EnumerationLimits) -> Self {
        LimitsReport {
            max_cosets: l.max_cosets,
            max_time_millis: l.max_time_millis,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum Details {
    TwoBridge {
        p: i64,
        q: i64,
        presentation: Vec<String>,
        xa_relator: String,
        epsilon_sum: i64,
        riley_polynomial: String,
        roots: Vec<RootReport>,
        trace_table: Vec<TraceRow>,
    },
    Torus {
        p: i64,
        q: i64,
        bezout_r: i64,
        bezout_s: i64,
        standard_presentation: Vec<String>,
        xa_presentation: Vec<String>,
    },
    UnknottingOne {
        pd: String,
        crossing: usize,
        twists: i64,
        /// The diagram the family is evaluated on (after twisting).
        evaluated_pd: String,
        unknotting_search: Option<UnknottingReport>,
        changed_diagram: Proof,
        generators: CrossingReport,
        noncommuting: Option<QuotientReport>,
    },
    Presentation {
        generators: Vec<String>,
        relators: Vec<String>,
        non_killer_search: Option<NonKillerReport>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootReport {
    pub omega: [f64; 2],
    pub class: String,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub n: u32,
    pub recurrence: String,
    pub direct: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnknottingReport {
    pub unknotting: Vec<usize>,
    pub knotted: Vec<usize>,
    pub unknown: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub x: String,
    pub y: String,
    pub z: String,
    pub w: String,
    pub handedness: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonKillerReport {
    pub n: i64,
    pub found: bool,
    pub x: Option<String>,
    pub y: Option<String>,
    pub conjugator: Option<String>,
    pub word: Option<String>,
    pub refutation: Option<QuotientReport>,
    pub noncommuting: Option<QuotientReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub n: i64,
    pub word: String,
    pub verdict: Verdict,
    pub proofs: Vec<Proof>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Refuted,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Proof {
    SymbolicCollapse {
        relator: String,
        substitution: String,
        result: String,
    },
    CosetTable {
        index: usize,
        cosets_defined: usize,
        max_live: usize,
    },
    FreeProductTranscript {
        steps: Vec<String>,
        complete: bool,
    },
    /// `x = a^n`, `y = a^(n+1)` at the unknotting crossing.
    CrossingSubstitution {
        z: String,
        w: String,
        swapped: String,
        restored: String,
        exponent_sum: i64,
    },
    FiniteQuotient(QuotientReport),
    Undecided {
        enumeration_limit: Option<String>,
        cosets_defined: usize,
        search_nodes: u64,
        search_exhausted: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub target: String,
    pub degree: usize,
    /// `[generator, permutation in cycle notation]`.
    pub images: Vec<[String; 2]>,
    pub source: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Nonconjugacy {
    Traces {
        omega: [f64; 2],
        root_class: String,
        first: usize,
        last: usize,
        traces: Vec<[f64; 2]>,
        error_bounds: Vec<f64>,
        min_separation: f64,
        min_ratio: f64,
    },
    TracesInconclusive {
        omega: [f64; 2],
        first_close_pair: [usize; 2],
        separation: f64,
        bound: f64,
    },
    SyllableCounts {
        counts: Vec<[i64; 2]>,
        reduced: Vec<(i64, String)>,
        increasing_upward: bool,
        increasing_downward: bool,
        strictly_increasing_in_n: bool,
        conjugate_pairs: Vec<[i64; 2]>,
    },
    NotAttempted {
        reason: String,
    },
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn stats_proof(stats: &EnumerationStats, index: usize) -> Proof {
    Proof::CosetTable {
        index,
        cosets_defined: stats.cosets_defined,
        max_live: stats.max_live,
    }
}

pub fn quotient_report(q: &PermutationQuotient, source: Option<RefutationSource>) -> QuotientReport {
    QuotientReport {
        target: q.target.clone(),
        degree: q.degree,
        images: q.images.iter().map(|(g, p)| [g.to_string(), p.to_string()]).collect(),
        source: source.map(|s| {
            match s {
                RefutationSource::Abelianization => "abelianization",
                RefutationSource::CosetEnumeration => "coset_enumeration",
                RefutationSource::QuotientSearch => "quotient_search",
            }
            .to_string()
        }),
    }
}

pub fn refutation_proof(c: &FiniteQuotientCertificate) -> Proof {
    Proof::FiniteQuotient(quotient_report(&c.quotient, Some(c.source)))
}

pub fn undecided_proof(r: &UnknownReason) -> Proof {
    Proof::Undecided {
        enumeration_limit: r.enumeration_limit.map(|l| format!("{l:?}").to_lowercase()),
        cosets_defined: r.cosets_defined,
        search_nodes: r.search_nodes,
        search_exhausted: r.search_exhausted,
    }
}

/// Verdict plus the proof object it rests on.
pub fn killer_summary(v: &KillerVerdict) -> (Verdict, Proof) {
    match v {
        KillerVerdict::Verified(proof) => (Verdict::Verified, stats_proof(&proof.stats, proof.table.index())),
        KillerVerdict::Refuted(cert) => (Verdict::Refuted, refutation_proof(cert)),
        KillerVerdict::Unknown(reason) => (Verdict::Unknown, undecided_proof(reason)),
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "verified",
            Verdict::Refuted => "refuted",
            Verdict::Unknown => "unknown",
        })
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Proof::SymbolicCollapse { substitution, result, .. } => {
                write!(f, "symbolic collapse ({substitution}) leaves {result}")
            }
            Proof::CosetTable {
                index,
                cosets_defined,
                max_live,
            } => write!(f, "coset table of index {index} ({cosets_defined} cosets defined, {max_live} live at most)"),
            Proof::FreeProductTranscript { steps, complete } => {
                write!(f, "substitution transcript, {} steps, complete: {complete}", steps.len())
            }
            Proof::CrossingSubstitution { z, w, swapped, restored, .. } => write!(
                f,
                "crossing substitution gives z = {z}, w = {w}; changed relation -> {}, original -> {}",
                if swapped.is_empty() { "1" } else { swapped },
                if restored.is_empty() { "1" } else { restored }
            ),
            Proof::FiniteQuotient(q) => write!(f, "{q}"),
            Proof::Undecided {
                enumeration_limit,
                cosets_defined,
                search_nodes,
                search_exhausted,
            } => write!(
                f,
                "undecided: enumeration stopped at {} after {cosets_defined} cosets; quotient search {} after {search_nodes} nodes",
                enumeration_limit.as_deref().unwrap_or("-"),
                if *search_exhausted { "exhausted" } else { "hit its budget" },
            ),
        }
    }
}

impl fmt::Display for QuotientReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "quotient onto {} (degree {}):", self.target, self.degree)?;
        for [g, p] in &self.images {
            write!(f, " {g} -> {p}")?;
        }
        if let Some(s) = &self.source {
            write!(f, " [{s}]")?;
        }
        Ok(())
    }
}

fn fmt_complex(z: [f64; 2]) -> String {
    if z[1] == 0.0 {
        format!("{}", z[0])
    } else {
        format!("{} {} {}i", z[0], if z[1] < 0.0 { "-" } else { "+" }, z[1].abs())
    }
}

impl CertificateReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "killer-toolkit {}", self.tool_version);
        let _ = writeln!(w, "input: {}", self.input);
        let _ = writeln!(w, "status: {:?}", self.status);
        let _ = writeln!(
            w,
            "limits: {} cosets, {} ms",
            self.limits.max_cosets, self.limits.max_time_millis
        );
        match &self.details {
            Details::TwoBridge {
                p,
                q,
                presentation,
                xa_relator,
                epsilon_sum,
                riley_polynomial,
                roots,
                trace_table,
            } => {
                let _ = writeln!(w, "two-bridge knot {p}/{q}");
                let _ = writeln!(w, "  relator: {}", presentation.join("; "));
                let _ = writeln!(w, "  x-a relator: {xa_relator} (sign sum {epsilon_sum})");
                let _ = writeln!(w, "  Riley polynomial: {riley_polynomial}");
                for r in roots {
                    let _ = writeln!(
                        w,
                        "    root {} [{}], residual {:.1e}",
                        fmt_complex(r.omega),
                        r.class,
                        r.residual
                    );
                }
                for row in trace_table {
                    let _ = writeln!(w, "  tau_{} = {}", row.n, row.recurrence);
                }
            }
            Details::Torus {
                p,
                q,
                bezout_r,
                bezout_s,
                standard_presentation,
                xa_presentation,
            } => {
                let _ = writeln!(w, "torus knot T({p}, {q}), r = {bezout_r}, s = {bezout_s}");
                let _ = writeln!(w, "  u-v relators: {}", standard_presentation.join("; "));
                let _ = writeln!(w, "  x-a relators: {}", xa_presentation.join("; "));
            }
            Details::UnknottingOne {
                pd,
                crossing,
                twists,
                evaluated_pd,
                unknotting_search,
                changed_diagram,
                generators,
                noncommuting,
            } => {
                let _ = writeln!(w, "diagram: {pd}");
                if let Some(u) = unknotting_search {
                    let _ = writeln!(
                        w,
                        "  unknotting crossings {:?}, knotted after change {:?}, undecided {:?}",
                        u.unknotting, u.knotted, u.unknown
                    );
                }
                let _ = writeln!(w, "  crossing {crossing}: changed diagram {changed_diagram}");
                let _ = writeln!(
                    w,
                    "  x = {}, y = {}, z = {}, w = {} ({})",
                    generators.x, generators.y, generators.z, generators.w, generators.handedness
                );
                match noncommuting {
                    Some(q) => {
                        let _ = writeln!(w, "  x, y do not commute: {q}");
                    }
                    None => {
                        let _ = writeln!(w, "  no noncommutativity certificate for x, y");
                    }
                }
                if *twists != 0 {
                    let _ = writeln!(w, "  {twists} full twists: {evaluated_pd}");
                }
            }
            Details::Presentation {
                generators,
                relators,
                non_killer_search,
            } => {
                let _ = writeln!(w, "presentation on {}: {}", generators.join(" "), relators.join("; "));
                if let Some(s) = non_killer_search {
                    if s.found {
                        let _ = writeln!(
                            w,
                            "  non-killer at n = {}: meridian pair ({}, c {} c^-1) with c = {}",
                            s.n,
                            s.x.as_deref().unwrap_or("?"),
                            s.y.as_deref().unwrap_or("?"),
                            s.conjugator.as_deref().filter(|c| !c.is_empty()).unwrap_or("1"),
                        );
                        let _ = writeln!(w, "  word: {}", s.word.as_deref().unwrap_or("?"));
                        if let Some(q) = &s.refutation {
                            let _ = writeln!(w, "  refuted by {q}");
                        }
                        if let Some(q) = &s.noncommuting {
                            let _ = writeln!(w, "  noncommuting in {q}");
                        }
                    } else {
                        let _ = writeln!(w, "  no non-killer pair found at n = {}", s.n);
                    }
                }
            }
        }
        for m in &self.family {
            let _ = writeln!(w, "n = {}: {} {}", m.n, m.word, m.verdict);
            for p in &m.proofs {
                let _ = writeln!(w, "    {p}");
            }
        }
        match &self.nonconjugacy {
            Nonconjugacy::Traces {
                omega,
                root_class,
                first,
                last,
                min_separation,
                min_ratio,
                ..
            } => {
                let _ = writeln!(
                    w,
                    "traces tau_{first}..tau_{last} at omega = {} [{root_class}] pairwise distinct: min separation {min_separation:.3e}, min separation/error {min_ratio:.3e}",
                    fmt_complex(*omega)
                );
            }
            Nonconjugacy::TracesInconclusive {
                omega,
                first_close_pair,
                separation,
                bound,
            } => {
                let _ = writeln!(
                    w,
                    "traces at omega = {} inconclusive: tau_{} and tau_{} differ by {separation:.3e} (bound {bound:.3e})",
                    fmt_complex(*omega),
                    first_close_pair[0],
                    first_close_pair[1]
                );
            }
            Nonconjugacy::SyllableCounts {
                counts,
                increasing_upward,
                increasing_downward,
                strictly_increasing_in_n,
                conjugate_pairs,
                ..
            } => {
                let list: Vec<String> = counts.iter().map(|[n, c]| format!("{n}:{c}")).collect();
                let _ = writeln!(w, "v-syllable counts {}", list.join(" "));
                let _ = writeln!(
                    w,
                    "  increasing for n >= 0: {increasing_upward}; for n < 0 going down: {increasing_downward}; across the window: {strictly_increasing_in_n}"
                );
                if !conjugate_pairs.is_empty() {
                    let _ = writeln!(w, "  conjugate pairs: {conjugate_pairs:?}");
                }
            }
            Nonconjugacy::NotAttempted { reason } => {
                let _ = writeln!(w, "nonconjugacy: not attempted ({reason})");
            }
        }
        for a in &self.assumptions {
            let _ = writeln!(w, "assumption: {a}");
        }
        for e in &self.errata {
            let _ = writeln!(w, "erratum: {e}");
        }
        for n in &self.notes {
            let _ = writeln!(w, "note: {n}");
        }
        let _ = writeln!(w, "time: {} ms", self.timing_millis);
        out
    }
}
