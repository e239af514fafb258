//! The search loop: subgroups by increasing index, one vanish test each.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::certificate::{certified_minors, height_pivot, verify_certificate, CertificateMode, LargenessCertificate, CERTIFICATE_VERSION};
use crate::coset::{low_index_subgroups, CosetTable, LowIndexOptions};
use crate::error::{Error, Result};
use crate::lattice::AbelianInvariants;
use crate::presentation::GroupPresentation;
use crate::rewrite::{rewrite_subgroup, subgroup_abelian_invariants, SimplifyBudget};
use crate::vanish::{cyclic_cover_prefilter, vanish_test, AlexanderMatrix, Outcome, VanishBudget};

pub const REPORT_HEADER: &str = "largeness-report";
pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct ProveOptions {
    pub max_index: usize,
    /// `None`: pre-filter on for first Betti number at least 3, off otherwise.
    pub prefilter: Option<bool>,
    pub prefilter_primes: Vec<u64>,
    pub prefilter_max_index: usize,
    /// When set to `(lo, hi)`, also search normal subgroups of index `lo..=hi`
    /// inside every class that did not certify on its own.
    pub normal_range: Option<(usize, usize)>,
    pub time_budget: Option<Duration>,
    pub per_subgroup: Option<Duration>,
    pub vanish: VanishBudget,
    pub simplify: SimplifyBudget,
    pub node_limit: Option<u64>,
}

impl ProveOptions {
    pub fn new(max_index: usize) -> Self {
        ProveOptions {
            max_index,
            prefilter: None,
            prefilter_primes: vec![2, 3, 5],
            prefilter_max_index: 64,
            normal_range: None,
            time_budget: None,
            per_subgroup: None,
            vanish: VanishBudget::default(),
            simplify: SimplifyBudget::default(),
            node_limit: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "lowercase")]
pub enum Disposition {
    Certified,
    NotFound(String),
    Inconclusive(String),
    Skipped(String),
}

impl Disposition {
    fn label(&self) -> &'static str {
        match self {
            Disposition::Certified => "certified",
            Disposition::NotFound(_) => "notfound",
            Disposition::Inconclusive(_) => "inconclusive",
            Disposition::Skipped(_) => "skipped",
        }
    }

    fn detail(&self) -> &str {
        match self {
            Disposition::Certified => "",
            Disposition::NotFound(s) | Disposition::Inconclusive(s) | Disposition::Skipped(s) => s,
        }
    }
}

/// One examined subgroup. `chain` lists the step indices from `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupEntry {
    pub chain: Vec<usize>,
    pub index: usize,
    pub normal: bool,
    pub invariants: String,
    pub disposition: Disposition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct LargenessReport {
    pub version: u32,
    pub mode: String,
    pub group: String,
    pub max_index: usize,
    pub verdict: Verdict,
    /// False when an enumeration or time budget cut the search short.
    pub complete: bool,
    pub entries: Vec<SubgroupEntry>,
    pub certificate: Option<LargenessCertificate>,
}

impl LargenessReport {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{REPORT_HEADER} v{}", self.version);
        let _ = writeln!(s, "mode {}", self.mode);
        for line in self.group.lines() {
            let _ = writeln!(s, "group {line}");
        }
        let _ = writeln!(s, "max-index {}", self.max_index);
        let verdict = match self.verdict {
            Verdict::Certified => "certified",
            Verdict::Unknown => "unknown",
        };
        let _ = writeln!(s, "verdict {verdict}");
        let _ = writeln!(s, "complete {}", self.complete);
        for e in &self.entries {
            let chain: Vec<String> = e.chain.iter().map(usize::to_string).collect();
            let _ = writeln!(
                s,
                "subgroup chain={} index={} normal={} invariants={} {} {}",
                chain.join("."),
                e.index,
                e.normal,
                e.invariants,
                e.disposition.label(),
                e.disposition.detail()
            );
        }
        if let Some(c) = &self.certificate {
            let _ = writeln!(s, "certificate-index {}", c.total_index());
            if let Some(m) = c.modulus() {
                let _ = writeln!(s, "certificate-modulus {m}");
            }
        }
        let _ = writeln!(s, "end");
        s
    }
}

struct Clock {
    deadline: Option<Instant>,
}

impl Clock {
    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn sub_deadline(&self, per: Option<Duration>) -> Option<Instant> {
        let local = per.map(|p| Instant::now() + p);
        match (self.deadline, local) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// Subgroup classes of `p` with index in `lo..=hi`, optionally only normal ones.
fn classes(p: &GroupPresentation, lo: usize, hi: usize, normal: bool, opts: &ProveOptions, clock: &Clock) -> Result<(Vec<CosetTable>, bool)> {
    let mut li = LowIndexOptions::new(lo, hi).normal_only(normal);
    li.node_limit = opts.node_limit;
    li.deadline = clock.deadline;
    let out = low_index_subgroups(p, &li)?;
    Ok((out.records.into_iter().map(|r| r.table).collect(), out.complete))
}

/// Result of testing one subgroup.
enum Tested {
    Done(Disposition),
    Found(LargenessCertificate),
}

fn test_subgroup(
    g: &GroupPresentation,
    parent: &GroupPresentation,
    tables: &[CosetTable],
    inv: &AbelianInvariants,
    opts: &ProveOptions,
    clock: &Clock,
) -> Result<(Tested, Option<GroupPresentation>)> {
    if inv.rank == 0 {
        return Ok((Tested::Done(Disposition::Skipped("first Betti number 0".into())), None));
    }
    if inv.rank == 1 && inv.torsion.is_empty() {
        return Ok((Tested::Done(Disposition::NotFound("abelianisation is Z".into())), None));
    }
    let last = tables.last().expect("non-empty chain");
    let rw = rewrite_subgroup(parent, last, opts.simplify)?;
    let h = rw.presentation;
    let matrix = match AlexanderMatrix::new(&h) {
        Ok(m) => m,
        Err(e) => return Ok((Tested::Done(Disposition::Inconclusive(e.to_string())), Some(h))),
    };
    let use_prefilter = opts.prefilter.unwrap_or(inv.rank >= 3);
    if use_prefilter && inv.rank >= 2 {
        match cyclic_cover_prefilter(&h, &opts.prefilter_primes, opts.prefilter_max_index) {
            Ok(f) if f.is_empty() => {
                return Ok((Tested::Done(Disposition::NotFound(format!("pre-filter leaves no modulus: {}", f.notes.join("; ")))), Some(h)));
            }
            Ok(_) | Err(_) => {}
        }
    }
    let mut vb = opts.vanish.clone();
    vb.deadline = clock.sub_deadline(opts.per_subgroup);
    let result = vanish_test(&matrix, &vb);
    match result.outcome {
        Outcome::Found { chi, modulus, .. } => {
            let images = matrix.images(chi.components());
            let column = images.iter().position(|a| *a != 0).expect("chi is non-trivial");
            let minors = certified_minors(&h, &images, column, matrix.b())?;
            let cert = LargenessCertificate {
                version: CERTIFICATE_VERSION,
                group: g.clone(),
                chain: tables.to_vec(),
                max_relator_length: opts.simplify.max_relator_length,
                max_rounds: opts.simplify.max_rounds,
                witness: h.clone(),
                mode: CertificateMode::Alexander { images, modulus, deleted_column: column, minors },
            };
            let check = verify_certificate(g, &cert);
            if !check.ok {
                return Err(Error::Certificate(format!("emitted certificate failed replay: {}", check.failures.join("; "))));
            }
            Ok((Tested::Found(cert), Some(h)))
        }
        Outcome::NotFound => Ok((Tested::Done(Disposition::NotFound(result.notes.last().cloned().unwrap_or_default())), Some(h))),
        Outcome::Inconclusive(why) => Ok((Tested::Done(Disposition::Inconclusive(why)), Some(h))),
    }
}

fn new_report(g: &GroupPresentation, mode: &str, max_index: usize) -> LargenessReport {
    LargenessReport {
        version: REPORT_VERSION,
        mode: mode.to_string(),
        group: g.to_string().trim_end().to_string(),
        max_index,
        verdict: Verdict::Unknown,
        complete: true,
        entries: Vec::new(),
        certificate: None,
    }
}

/// Tests every subgroup class up to `opts.max_index` and returns the first verified certificate.
pub fn prove_large(g: &GroupPresentation, opts: &ProveOptions) -> Result<LargenessReport> {
    if opts.max_index == 0 {
        return Err(Error::Precondition("max-index must be at least 1".into()));
    }
    let clock = Clock { deadline: opts.time_budget.map(|d| Instant::now() + d) };
    let mut report = new_report(g, "prove-large", opts.max_index);
    let mut descend: Vec<(CosetTable, GroupPresentation)> = Vec::new();
    for index in 1..=opts.max_index {
        let (tables, complete) = classes(g, index, index, false, opts, &clock)?;
        report.complete &= complete;
        for t in tables {
            if clock.expired() {
                report.complete = false;
                return Ok(report);
            }
            let inv = subgroup_abelian_invariants(g, &t);
            let normal = t.is_normal();
            let chain = vec![t.clone()];
            let (tested, h) = test_subgroup(g, g, &chain, &inv, opts, &clock)?;
            let entry = |d| SubgroupEntry { chain: vec![index], index, normal, invariants: inv.aq_list(), disposition: d };
            match tested {
                Tested::Found(cert) => {
                    report.entries.push(entry(Disposition::Certified));
                    report.verdict = Verdict::Certified;
                    report.certificate = Some(cert);
                    return Ok(report);
                }
                Tested::Done(d) => {
                    if matches!(d, Disposition::Inconclusive(_)) {
                        report.complete = false;
                    }
                    report.entries.push(entry(d));
                }
            }
            if opts.normal_range.is_some() && inv.rank >= 1 {
                let h = match h {
                    Some(h) => h,
                    None => rewrite_subgroup(g, &t, opts.simplify)?.presentation,
                };
                descend.push((t, h));
            }
        }
    }
    // Second layer: normal subgroups of each class, classes in canonical order.
    for (t, h) in descend {
        let (lo, hi) = opts.normal_range.expect("descent requested");
        let (subs, complete) = classes(&h, lo.max(2), hi, true, opts, &clock)?;
        report.complete &= complete;
        for s in subs {
            if clock.expired() {
                report.complete = false;
                return Ok(report);
            }
            let inv = subgroup_abelian_invariants(&h, &s);
            let chain = vec![t.clone(), s.clone()];
            let (tested, _) = test_subgroup(g, &h, &chain, &inv, opts, &clock)?;
            let entry = |d| SubgroupEntry {
                chain: vec![t.index(), s.index()],
                index: t.index() * s.index(),
                normal: true,
                invariants: inv.aq_list(),
                disposition: d,
            };
            match tested {
                Tested::Found(cert) => {
                    report.entries.push(entry(Disposition::Certified));
                    report.verdict = Verdict::Certified;
                    report.certificate = Some(cert);
                    return Ok(report);
                }
                Tested::Done(d) => {
                    if matches!(d, Disposition::Inconclusive(_)) {
                        report.complete = false;
                    }
                    report.entries.push(entry(d));
                }
            }
        }
    }
    Ok(report)
}

/// Tests the subgroup reached by `chain` (each table over the rewritten
/// presentation of the previous step) and returns its disposition and any certificate.
pub fn test_chain(g: &GroupPresentation, chain: &[CosetTable], opts: &ProveOptions) -> Result<(Disposition, Option<LargenessCertificate>)> {
    let Some((last, steps)) = chain.split_last() else {
        return Err(Error::Precondition("empty subgroup chain".into()));
    };
    let mut parent = g.clone();
    for t in steps {
        parent = rewrite_subgroup(&parent, t, opts.simplify)?.presentation;
    }
    last.audit(&parent)?;
    let clock = Clock { deadline: opts.time_budget.map(|d| Instant::now() + d) };
    let inv = subgroup_abelian_invariants(&parent, last);
    match test_subgroup(g, &parent, chain, &inv, opts, &clock)?.0 {
        Tested::Found(cert) => Ok((Disposition::Certified, Some(cert))),
        Tested::Done(d) => Ok((d, None)),
    }
}

/// Height-one criterion: certify on the first subgroup whose abelianisation needs three generators.
pub fn height1_mode(g: &GroupPresentation, max_index: usize, simplify: SimplifyBudget) -> Result<LargenessReport> {
    if !g.is_two_generator_one_relator() {
        return Err(Error::Precondition("height-1 mode needs a two-generator one-relator presentation".into()));
    }
    let pivot = height_pivot(g).ok_or_else(|| Error::Precondition("no generator has exponent sum zero".into()))?;
    let stats = g.magnus_stats(0, pivot)?;
    if stats.height != Some(1) {
        return Err(Error::Precondition(format!("relator has height {:?}, not 1", stats.height)));
    }
    let mut report = new_report(g, "height1", max_index);
    let opts = ProveOptions::new(max_index);
    let clock = Clock { deadline: None };
    for index in 1..=max_index {
        let (tables, complete) = classes(g, index, index, false, &opts, &clock)?;
        report.complete &= complete;
        for t in tables {
            let inv = subgroup_abelian_invariants(g, &t);
            let normal = t.is_normal();
            if inv.min_generators() >= 3 {
                let h = rewrite_subgroup(g, &t, simplify)?.presentation;
                let cert = LargenessCertificate {
                    version: CERTIFICATE_VERSION,
                    group: g.clone(),
                    chain: vec![t],
                    max_relator_length: simplify.max_relator_length,
                    max_rounds: simplify.max_rounds,
                    witness: h,
                    mode: CertificateMode::Height1 { invariants: inv.clone() },
                };
                let check = verify_certificate(g, &cert);
                if !check.ok {
                    return Err(Error::Certificate(format!("emitted certificate failed replay: {}", check.failures.join("; "))));
                }
                report.entries.push(SubgroupEntry { chain: vec![index], index, normal, invariants: inv.aq_list(), disposition: Disposition::Certified });
                report.verdict = Verdict::Certified;
                report.certificate = Some(cert);
                return Ok(report);
            }
            report.entries.push(SubgroupEntry {
                chain: vec![index],
                index,
                normal,
                invariants: inv.aq_list(),
                disposition: Disposition::NotFound(format!("d(H/H') = {}", inv.min_generators())),
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(s: &str) -> GroupPresentation {
        GroupPresentation::parse(s).unwrap()
    }

    #[test]
    fn bs24_certifies_at_index_one() {
        let g = pres("gens a t\nrel ta2TA4");
        let r = prove_large(&g, &ProveOptions::new(1)).unwrap();
        let c = r.certificate.unwrap();
        assert_eq!(c.total_index(), 1);
        assert_eq!(c.modulus(), Some(2));
        assert!(verify_certificate(&g, &c).ok);
    }

    #[test]
    fn bs23_unknown() {
        let g = pres("gens a t\nrel ta2TA3");
        let r = prove_large(&g, &ProveOptions::new(6)).unwrap();
        assert_eq!(r.verdict, Verdict::Unknown);
        assert!(r.complete);
        assert!(r.entries.iter().all(|e| !matches!(e.disposition, Disposition::Skipped(_))));
    }

    #[test]
    fn height1_examples() {
        let g = pres("gens a t\nrel ta2TA4");
        let r = height1_mode(&g, 6, SimplifyBudget::default()).unwrap();
        assert!(r.is_certified());
        let bbg = pres("gens a t\nrel ta2TatATA");
        assert!(!height1_mode(&bbg, 8, SimplifyBudget::default()).unwrap().is_certified());
        assert!(height1_mode(&pres("gens a t\nrel t3aT2ATA"), 4, SimplifyBudget::default()).is_err());
    }

    #[test]
    fn report_text_is_versioned() {
        let g = pres("gens a t\nrel ta2TA4");
        let r = prove_large(&g, &ProveOptions::new(1)).unwrap();
        let text = r.to_text();
        assert!(text.starts_with("largeness-report v1\n"));
        assert!(text.contains("verdict certified"));
    }
}
