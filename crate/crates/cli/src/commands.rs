use std::fs;
use std::path::Path;
use std::time::Instant;

use thiserror::Error;

use killer_core::coset_enum::{
    find_noncommuting_quotient, is_infinite_cyclic_certified, is_killer, search_non_killer_pair, CosetError,
    CyclicVerdict, EnumerationLimits, KillerVerdict, SearchSpace,
};
use killer_core::diagrams::{
    crossing_change, crossing_generators, crossing_substitution_proof, find_unknotting_crossings, parse_named_diagrams,
    pseudo_meridian_family, twist_arcs, wirtinger, DiagramError, Handedness, PdCode,
};
use killer_core::free_product::{
    bezout_rs, mu_in_xa, syllable_count_certificate, symbolic_torus_killer_proof, FreeProductError, TorusKnot,
};
use killer_core::parabolic::{
    classify_root, distinct_trace_certificate, riley_roots, symbolic_trace_direct, symbolic_trace_recurrence,
    ParabolicError, RootClass, TraceCertificateResult,
};
use killer_core::two_bridge::{
    generator_x, generator_y, normalize_relator_orientation, rewrite_to_xa, symbolic_collapse, two_bridge_presentation,
    TwoBridgeError, TwoBridgeKnot,
};
use killer_core::{mu_word, Presentation, PresentationError, PseudoMeridianSpec, Word};

use crate::report::{
    killer_summary, pair, quotient_report, refutation_proof, stats_proof, undecided_proof, CertificateReport,
    CrossingReport, Details, FamilyMember, LimitsReport, NonKillerReport, Nonconjugacy, Proof, RootReport, Status,
    TraceRow, UnknottingReport, Verdict,
};

pub const LIMITS_ENV: &str = "KILLER_TOOLKIT_LIMITS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid {LIMITS_ENV} value {0:?}: expected COSETS,MILLIS with both positive")]
    Limits(String),
    #[error("invalid range {0:?}: expected A..B with A <= B")]
    Range(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    TwoBridge(#[from] TwoBridgeError),
    #[error(transparent)]
    FreeProduct(#[from] FreeProductError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error(transparent)]
    Parabolic(#[from] ParabolicError),
    #[error("no crossing change was certified to unknot the diagram (knotted after change: {knotted:?}; undecided: {unknown:?})")]
    NoUnknottingCrossingFound { knotted: Vec<usize>, unknown: Vec<usize> },
    #[error("changing crossing {0} does not give the unknot: {1}")]
    NotUnknotting(usize, String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NoUnknottingCrossingFound { .. } | CliError::NotUnknotting(..) => 3,
            CliError::Parabolic(_) => 1,
            CliError::TwoBridge(TwoBridgeError::CollapseFailure(_)) => 1,
            CliError::FreeProduct(FreeProductError::DerivationFailure(_)) => 1,
            _ => 2,
        }
    }
}

/// Enumeration limits from the environment, or the defaults.
pub fn limits_from_env() -> Result<EnumerationLimits, CliError> {
    match std::env::var(LIMITS_ENV) {
        Ok(value) => parse_limits(&value),
        Err(_) => Ok(EnumerationLimits::default()),
    }
}

pub fn parse_limits(value: &str) -> Result<EnumerationLimits, CliError> {
    let bad = || CliError::Limits(value.to_string());
    let (cosets, millis) = value.split_once(',').ok_or_else(bad)?;
    let cosets: usize = cosets.trim().parse().map_err(|_| bad())?;
    let millis: u64 = millis.trim().parse().map_err(|_| bad())?;
    EnumerationLimits::new(cosets, millis).map_err(|_| bad())
}

/// Parses an inclusive range `A..B`.
pub fn parse_range(text: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Range(text.to_string());
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Applies `f` to every item on scoped worker threads; results keep input order.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(items.len())
        .max(1);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    let done = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                done.lock().expect("worker panicked")[i] = Some(r);
            });
        }
    });
    slots.into_iter().map(|r| r.expect("every item processed")).collect()
}

fn relator_strings(p: &Presentation) -> Vec<String> {
    p.relators().iter().map(|r| r.to_string()).collect()
}

fn base_report(input: String, limits: &EnumerationLimits, details: Details) -> CertificateReport {
    CertificateReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        input,
        status: Status::Partial,
        limits: LimitsReport::from(limits),
        details,
        family: Vec::new(),
        nonconjugacy: Nonconjugacy::NotAttempted {
            reason: "not applicable".into(),
        },
        assumptions: Vec::new(),
        errata: Vec::new(),
        notes: Vec::new(),
        timing_millis: 0,
    }
}

/// Outcome of a branch's symbolic argument for one member.
enum Symbolic {
    NotAttempted,
    Failed,
    Proved(Proof),
}

impl From<Option<Proof>> for Symbolic {
    fn from(p: Option<Proof>) -> Self {
        p.map_or(Symbolic::Failed, Symbolic::Proved)
    }
}

/// Combines a symbolic proof with the enumeration verdict for one member.
fn combine(n: i64, word: &Word, symbolic: Symbolic, enumeration: &KillerVerdict) -> (FamilyMember, Option<String>) {
    let (verdict, proof) = killer_summary(enumeration);
    let mut proofs = Vec::new();
    let failed = matches!(symbolic, Symbolic::Failed);
    let symbolic_ok = matches!(symbolic, Symbolic::Proved(_));
    if let Symbolic::Proved(p) = symbolic {
        proofs.push(p);
    }
    proofs.push(proof);
    let note = match (symbolic_ok, failed, verdict) {
        (true, _, Verdict::Refuted) => Some(format!("n = {n}: symbolic proof and finite quotient disagree")),
        (_, true, Verdict::Verified) => Some(format!("n = {n}: symbolic proof failed, enumeration verified")),
        _ => None,
    };
    let verdict = match (symbolic_ok, verdict) {
        (_, Verdict::Refuted) => Verdict::Refuted,
        (true, _) | (_, Verdict::Verified) => Verdict::Verified,
        _ => Verdict::Unknown,
    };
    (
        FamilyMember {
            n,
            word: word.to_string(),
            verdict,
            proofs,
        },
        note,
    )
}

const TAU4_ERRATUM: &str = "tau_4: the widely reproduced table entry 2(-1+6w-5w^2+w^3) has the wrong sign; \
    the recurrence and the direct matrix product both give 2(1-6w+5w^2-w^3)";
const EPSILON_ERRATUM: &str = "the signs e_i of the x-a relator sum to +1, not 0; \
    the collapse to the single letter a requires exactly this";

pub fn two_bridge(
    p: i64,
    q: i64,
    max_n: i64,
    trace_n: usize,
    limits: &EnumerationLimits,
    space: &SearchSpace,
) -> Result<CertificateReport, CliError> {
    let start = Instant::now();
    if max_n < 0 {
        return Err(CliError::Usage("--max-n must be nonnegative".into()));
    }
    let knot = TwoBridgeKnot::new(p, q)?;
    let pres = normalize_relator_orientation(&two_bridge_presentation(&knot))?;
    let xa = rewrite_to_xa(&pres)?;
    let assembled = xa.assemble();

    let ns: Vec<i64> = (0..=max_n).collect();
    let members = par_map(&ns, |&n| -> Result<_, CliError> {
        let word = mu_word(&PseudoMeridianSpec::new(generator_x(), generator_y(), n)?);
        let symbolic = symbolic_collapse(&xa, n).ok().map(|result| Proof::SymbolicCollapse {
            relator: assembled.to_string(),
            substitution: format!("x = a^{}", -n),
            result: result.to_string(),
        });
        let verdict = is_killer(&pres, &word, limits, space)?;
        Ok(combine(n, &word, symbolic.into(), &verdict))
    });

    let roots = riley_roots(&knot)?;
    let root_reports: Vec<RootReport> = roots
        .iter()
        .map(|r| RootReport {
            omega: pair(r.omega),
            class: class_name(classify_root(r.omega)).into(),
            residual: r.root_residual,
        })
        .collect();
    let chosen = roots
        .iter()
        .find(|r| classify_root(r.omega) == RootClass::RealNegative)
        .or_else(|| roots.iter().find(|r| classify_root(r.omega) == RootClass::NonReal));

    let trace_table = (2..=4)
        .map(|n| TraceRow {
            n,
            recurrence: symbolic_trace_recurrence(n).to_string(),
            direct: symbolic_trace_direct(n).to_string(),
        })
        .collect();
    let riley = roots.first().map(|r| r.source_poly.to_string()).unwrap_or_default();

    let mut report = base_report(
        format!("two-bridge {p}/{q}, n = 0..{max_n}"),
        limits,
        Details::TwoBridge {
            p: knot.p(),
            q: knot.q(),
            presentation: relator_strings(&pres),
            xa_relator: assembled.to_string(),
            epsilon_sum: xa.epsilon_sum(),
            riley_polynomial: riley,
            roots: root_reports,
            trace_table,
        },
    );
    for m in members {
        let (member, note) = m?;
        report.family.push(member);
        report.notes.extend(note);
    }

    let trace_ok = match chosen {
        Some(root) => match distinct_trace_certificate(root.omega, trace_n) {
            TraceCertificateResult::Certified(c) => {
                report.nonconjugacy = Nonconjugacy::Traces {
                    omega: pair(c.omega),
                    root_class: class_name(classify_root(c.omega)).into(),
                    first: c.first,
                    last: c.last,
                    traces: c.traces.iter().copied().map(pair).collect(),
                    error_bounds: c.error_bounds.clone(),
                    min_separation: c.min_separation,
                    min_ratio: c.min_ratio,
                };
                true
            }
            TraceCertificateResult::Inconclusive {
                first_close_pair,
                separation,
                bound,
            } => {
                report.nonconjugacy = Nonconjugacy::TracesInconclusive {
                    omega: pair(root.omega),
                    first_close_pair: [first_close_pair.0, first_close_pair.1],
                    separation,
                    bound,
                };
                false
            }
        },
        None => {
            report.nonconjugacy = Nonconjugacy::NotAttempted {
                reason: "no Riley root is negative real or non-real, so growth of the traces is not guaranteed".into(),
            };
            false
        }
    };
    report.notes.push(
        "mu_0 = x and mu_1 = y are both meridians, hence conjugate; distinct traces are certified from n = 2".into(),
    );
    report.errata.push(TAU4_ERRATUM.into());
    report.errata.push(EPSILON_ERRATUM.into());
    let all_verified = report.family.iter().all(|m| m.verdict == Verdict::Verified);
    report.status = if all_verified && trace_ok {
        Status::Certified
    } else {
        Status::Partial
    };
    report.timing_millis = start.elapsed().as_millis() as u64;
    Ok(report)
}

fn class_name(c: RootClass) -> &'static str {
    match c {
        RootClass::NonReal => "non_real",
        RootClass::RealNegative => "real_negative",
        RootClass::RealPositiveUnitCase => "real_positive_unit_case",
        RootClass::RealOther => "real_other",
    }
}

pub fn torus(
    p: i64,
    q: i64,
    range: (i64, i64),
    limits: &EnumerationLimits,
    space: &SearchSpace,
) -> Result<CertificateReport, CliError> {
    let start = Instant::now();
    let knot = TorusKnot::new(p, q)?;
    let bezout = bezout_rs(&knot);
    let standard = killer_core::free_product::standard_presentation(&knot);
    let xa = killer_core::free_product::xa_presentation(&knot)?;

    let ns: Vec<i64> = (range.0..=range.1).collect();
    let members = par_map(&ns, |&n| -> Result<_, CliError> {
        let word = mu_in_xa(n);
        let transcript = symbolic_torus_killer_proof(&knot, n)
            .ok()
            .filter(|t| t.is_complete())
            .map(|t| Proof::FreeProductTranscript {
                steps: t.steps.iter().map(|s| s.statement.clone()).collect(),
                complete: true,
            });
        let verdict = is_killer(&xa, &word, limits, space)?;
        Ok(combine(n, &word, transcript.into(), &verdict))
    });

    let mut report = base_report(
        format!("torus T({p}, {q}), n = {}..{}", range.0, range.1),
        limits,
        Details::Torus {
            p,
            q,
            bezout_r: bezout.r,
            bezout_s: bezout.s,
            standard_presentation: relator_strings(&standard),
            xa_presentation: relator_strings(&xa),
        },
    );
    for m in members {
        let (member, note) = m?;
        report.family.push(member);
        report.notes.extend(note);
    }

    let cert = syllable_count_certificate(&knot, range.0, range.1)?;
    let conjugate_pairs: Vec<[i64; 2]> = cert.conjugate_pairs.iter().map(|&(a, b)| [a, b]).collect();
    let upward_members = ns.iter().filter(|&&n| n >= 0).count();
    let downward_members = ns.iter().filter(|&&n| n < 0).count();
    let nonconjugate_half =
        (upward_members >= 2 && cert.increasing_upward) || (downward_members >= 2 && cert.increasing_downward);
    if !conjugate_pairs.is_empty() {
        report.notes.push(format!(
            "{} pairs in the window have conjugate images in Z/{p} * Z/{q}; they are not claimed nonconjugate",
            conjugate_pairs.len()
        ));
    }
    if q == 2 {
        report.notes.push(
            "for q = 2, mu_n and mu_(-1-n) are conjugate in the knot group, so only one of n >= 0 and n < 0 can give pairwise nonequivalent elements".into(),
        );
    }
    report.nonconjugacy = Nonconjugacy::SyllableCounts {
        counts: cert.counts.iter().map(|&(n, c)| [n, c as i64]).collect(),
        reduced: cert.reduced.iter().map(|(n, w)| (*n, w.to_string())).collect(),
        increasing_upward: cert.increasing_upward,
        increasing_downward: cert.increasing_downward,
        strictly_increasing_in_n: cert.strictly_increasing_in_n,
        conjugate_pairs,
    };
    let all_verified = report.family.iter().all(|m| m.verdict == Verdict::Verified);
    report.status = if all_verified && (nonconjugate_half || ns.len() < 2) {
        Status::Certified
    } else {
        Status::Partial
    };
    report.timing_millis = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// A diagram from a file holding a bare PD code or `name: PD` lines.
pub fn load_diagram(path: &Path, name: Option<&str>) -> Result<(String, PdCode), CliError> {
    let text = read(path)?;
    let named = if text.contains(':') {
        parse_named_diagrams(&text)?
    } else {
        vec![(path.display().to_string(), PdCode::parse(&text)?)]
    };
    match name {
        Some(n) => named
            .into_iter()
            .find(|(k, _)| k == n)
            .ok_or_else(|| CliError::Usage(format!("no diagram named {n:?} in {}", path.display()))),
        None => named
            .into_iter()
            .next()
            .ok_or_else(|| CliError::Usage(format!("{} holds no diagram", path.display()))),
    }
}

pub struct DiagramRequest<'a> {
    pub file: &'a Path,
    pub name: Option<&'a str>,
    pub crossing: Option<usize>,
    pub range: (i64, i64),
    pub twists: i64,
}

pub fn diagram(
    req: &DiagramRequest<'_>,
    limits: &EnumerationLimits,
    space: &SearchSpace,
) -> Result<CertificateReport, CliError> {
    let start = Instant::now();
    let (name, pd) = load_diagram(req.file, req.name)?;
    let original = wirtinger(&pd)?;

    let (crossing, search) = match req.crossing {
        Some(i) => {
            crossing_generators(&pd, i)?;
            (i, None)
        }
        None => {
            let found = find_unknotting_crossings(&pd, limits, space)?;
            let summary = UnknottingReport {
                unknotting: found.unknotting.clone(),
                knotted: found.knotted.iter().map(|(i, _)| *i).collect(),
                unknown: found.unknown.iter().map(|(i, _)| *i).collect(),
            };
            match found.unknotting.first() {
                Some(&i) => (i, Some(summary)),
                None => {
                    return Err(CliError::NoUnknottingCrossingFound {
                        knotted: summary.knotted,
                        unknown: summary.unknown,
                    })
                }
            }
        }
    };

    let changed = wirtinger(&crossing_change(&pd, crossing)?)?;
    let meridian = changed.generators()[0].clone();
    let (changed_proof, unknotted) = match is_infinite_cyclic_certified(&changed, &meridian, limits, space)? {
        CyclicVerdict::Yes { stats, table } => (stats_proof(&stats, table.index()), true),
        CyclicVerdict::No(cert) => {
            return Err(CliError::NotUnknotting(
                crossing,
                format!(
                    "{} escapes <{}> in {}",
                    cert.escaping, cert.meridian, cert.quotient.target
                ),
            ))
        }
        CyclicVerdict::Unknown(reason) => (undecided_proof(&reason), false),
    };

    let g = crossing_generators(&pd, crossing)?;
    let noncommuting = find_noncommuting_quotient(&original, &Word::letter(&g.x), &Word::letter(&g.y), space)?
        .map(|c| quotient_report(&c.quotient, None));

    let evaluated = if req.twists != 0 {
        twist_arcs(&pd, crossing, req.twists)?
    } else {
        pd.clone()
    };
    let evaluated_pres = wirtinger(&evaluated)?;
    let ns: Vec<i64> = (req.range.0..=req.range.1).collect();
    let members = par_map(&ns, |&m| -> Result<_, CliError> {
        let word = pseudo_meridian_family(&evaluated, crossing, m)?;
        // the substitution argument needs the untwisted diagram to unknot
        let symbolic = if unknotted && req.twists == 0 {
            let proof = crossing_substitution_proof(&pd, crossing, m)?;
            proof
                .holds()
                .then(|| Proof::CrossingSubstitution {
                    z: proof.z.to_string(),
                    w: proof.w.to_string(),
                    swapped: proof.swapped.to_string(),
                    restored: proof.restored.to_string(),
                    exponent_sum: proof.exponent_sum,
                })
                .into()
        } else {
            Symbolic::NotAttempted
        };
        let verdict = is_killer(&evaluated_pres, &word, limits, space)?;
        Ok(combine(m, &word, symbolic, &verdict))
    });

    let handedness = match g.handedness {
        Handedness::Left => "left",
        Handedness::Right => "right",
    };
    let mut report = base_report(
        format!(
            "diagram {name}, crossing {crossing}, n = {}..{}, {} full twists",
            req.range.0, req.range.1, req.twists
        ),
        limits,
        Details::UnknottingOne {
            pd: pd.to_string(),
            crossing,
            twists: req.twists,
            evaluated_pd: evaluated.to_string(),
            unknotting_search: search,
            changed_diagram: changed_proof,
            generators: CrossingReport {
                x: g.x.to_string(),
                y: g.y.to_string(),
                z: g.z.to_string(),
                w: g.w.to_string(),
                handedness: handedness.into(),
            },
            noncommuting: noncommuting.clone(),
        },
    );
    for m in members {
        let (member, note) = m?;
        report.family.push(member);
        report.notes.extend(note);
    }
    report.nonconjugacy = Nonconjugacy::NotAttempted {
        reason: "pairwise nonequivalence of the crossing family rests on a hyperbolic structure, which is not computed"
            .into(),
    };
    report
        .assumptions
        .push("the knot is hyperbolic (asserted by the user, not checked)".into());
    if req.twists != 0 {
        report
            .assumptions
            .push("the twisted knot is hyperbolic (asserted by the user, not checked)".into());
    }
    let all_verified = report.family.iter().all(|m| m.verdict == Verdict::Verified);
    report.status = if all_verified && unknotted && noncommuting.is_some() {
        Status::Certified
    } else {
        Status::Partial
    };
    report.timing_millis = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// A presentation file, or a diagram file read as its Wirtinger presentation.
pub fn load_presentation(path: &Path) -> Result<Presentation, CliError> {
    let text = read(path)?;
    if text.lines().any(|l| l.trim_start().starts_with("gens:")) {
        Ok(Presentation::parse(&text)?)
    } else {
        Ok(wirtinger(&load_diagram(path, None)?.1)?)
    }
}

pub struct CheckRequest<'a> {
    pub file: &'a Path,
    pub word: Option<&'a str>,
    pub search_non_killer: Option<i64>,
}

pub fn check_killer(
    req: &CheckRequest<'_>,
    limits: &EnumerationLimits,
    space: &SearchSpace,
) -> Result<CertificateReport, CliError> {
    let start = Instant::now();
    let pres = load_presentation(req.file)?;
    if req.word.is_none() && req.search_non_killer.is_none() {
        return Err(CliError::Usage("give a word or --search-non-killer".into()));
    }
    let mut report = base_report(
        format!(
            "presentation {}{}",
            req.file.display(),
            req.word.map(|w| format!(", word {w}")).unwrap_or_default()
        ),
        limits,
        Details::Presentation {
            generators: pres.generators().iter().map(|g| g.to_string()).collect(),
            relators: relator_strings(&pres),
            non_killer_search: None,
        },
    );
    let mut certified = true;

    if let Some(text) = req.word {
        let word = pres.parse_word(text)?;
        let verdict = is_killer(&pres, &word, limits, space)?;
        let (member, _) = combine(0, &word, Symbolic::NotAttempted, &verdict);
        certified &= member.verdict != Verdict::Unknown;
        report.family.push(member);
    }

    if let Some(n) = req.search_non_killer {
        let found = search_non_killer_pair(&pres, n, space)?;
        let summary = match &found {
            Some(w) => {
                w.replay(&pres)
                    .map_err(|e| CliError::Usage(format!("witness failed replay: {e}")))?;
                report.family.push(FamilyMember {
                    n,
                    word: w.certificate.word.to_string(),
                    verdict: Verdict::Refuted,
                    proofs: vec![refutation_proof(&w.certificate)],
                });
                NonKillerReport {
                    n,
                    found: true,
                    x: Some(w.pair.x.to_string()),
                    y: Some(w.pair.y.to_string()),
                    conjugator: Some(w.pair.conjugator.to_string()),
                    word: Some(w.certificate.word.to_string()),
                    refutation: Some(quotient_report(&w.certificate.quotient, Some(w.certificate.source))),
                    noncommuting: Some(quotient_report(&w.noncommuting.quotient, None)),
                }
            }
            None => NonKillerReport {
                n,
                found: false,
                x: None,
                y: None,
                conjugator: None,
                word: None,
                refutation: None,
                noncommuting: None,
            },
        };
        report.notes.push(
            "meridian pairs range over (x, c y c^-1) with x, y meridian generators and c a word; the pair is search-determined".into(),
        );
        if let Details::Presentation { non_killer_search, .. } = &mut report.details {
            *non_killer_search = Some(summary);
        }
        if found.is_none() {
            report.status = Status::HypothesisFailure;
            report.timing_millis = start.elapsed().as_millis() as u64;
            return Ok(report);
        }
    }

    report.status = if certified { Status::Certified } else { Status::Partial };
    report.timing_millis = start.elapsed().as_millis() as u64;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-5..5").unwrap(), (-5, 5));
        assert_eq!(parse_range("3..3").unwrap(), (3, 3));
        for bad in ["5..1", "1-5", "a..b", "..3"] {
            assert!(matches!(parse_range(bad), Err(CliError::Range(_))), "{bad}");
        }
    }

    #[test]
    fn limits() {
        let l = parse_limits("1000, 250").unwrap();
        assert_eq!((l.max_cosets, l.max_time_millis), (1000, 250));
        for bad in ["0,10", "10,0", "10", "x,y"] {
            assert_eq!(parse_limits(bad).unwrap_err().exit_code(), 2, "{bad}");
        }
    }

    #[test]
    fn par_map_keeps_order() {
        let items: Vec<i64> = (0..50).collect();
        assert_eq!(
            par_map(&items, |x| x * x),
            items.iter().map(|x| x * x).collect::<Vec<_>>()
        );
        assert!(par_map(&[] as &[i64], |x| *x).is_empty());
    }

    #[test]
    fn exit_codes() {
        let e = CliError::NoUnknottingCrossingFound {
            knotted: vec![0],
            unknown: vec![],
        };
        assert_eq!(e.exit_code(), 3);
        assert_eq!(CliError::from(TwoBridgeKnot::new(4, 1).unwrap_err()).exit_code(), 2);
    }

    #[test]
    fn report_round_trips() {
        let r = torus(3, 2, (-2, 3), &EnumerationLimits::default(), &SearchSpace::default()).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: CertificateReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.status, Status::Certified);
        assert_eq!(
            r.family.iter().map(|m| m.n).collect::<Vec<_>>(),
            (-2..=3).collect::<Vec<_>>()
        );
    }
}
