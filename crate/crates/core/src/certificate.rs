//! Largeness certificates: text format, JSON rendering and independent replay.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coset::CosetTable;
use crate::determinant::det_uni;
use crate::error::{Error, Result};
use crate::fox::{alexander_matrix_uni, row_subsets, MinorSpec, UniPoly};
use crate::lattice::{abelian_invariants, is_prime, AbelianInvariants};
use crate::presentation::GroupPresentation;
use crate::rewrite::{rewrite_subgroup, SimplifyBudget};

pub const CERTIFICATE_HEADER: &str = "largeness-certificate";
pub const CERTIFICATE_VERSION: u32 = 1;

/// One normalised minor of the evaluated Alexander matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedMinor {
    pub rows: Vec<usize>,
    /// Unit-normalised reduced minor in the variable `t`.
    pub polynomial: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum CertificateMode {
    Alexander {
        /// Image in `Z` of each witness generator.
        images: Vec<i64>,
        /// 0 or a prime.
        modulus: u64,
        deleted_column: usize,
        minors: Vec<CertifiedMinor>,
    },
    Height1 {
        invariants: AbelianInvariants,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargenessCertificate {
    pub version: u32,
    pub group: GroupPresentation,
    /// Tables from `G` downwards; table `k` is over the presentation produced by step `k - 1`.
    pub chain: Vec<CosetTable>,
    pub max_relator_length: usize,
    pub max_rounds: usize,
    pub witness: GroupPresentation,
    pub mode: CertificateMode,
}

impl LargenessCertificate {
    /// `[G : H]`.
    pub fn total_index(&self) -> usize {
        self.chain.iter().map(CosetTable::index).product()
    }

    pub fn chain_indices(&self) -> Vec<usize> {
        self.chain.iter().map(CosetTable::index).collect()
    }

    pub fn simplify_budget(&self) -> SimplifyBudget {
        SimplifyBudget { max_relator_length: self.max_relator_length, max_rounds: self.max_rounds }
    }

    pub fn modulus(&self) -> Option<u64> {
        match &self.mode {
            CertificateMode::Alexander { modulus, .. } => Some(*modulus),
            CertificateMode::Height1 { .. } => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Certificate(format!("bad JSON certificate: {e}")))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mode = match self.mode {
            CertificateMode::Alexander { .. } => "alexander",
            CertificateMode::Height1 { .. } => "height1",
        };
        let _ = writeln!(s, "{CERTIFICATE_HEADER} v{}", self.version);
        let _ = writeln!(s, "mode {mode}");
        let _ = writeln!(s, "index {}", self.total_index());
        let _ = writeln!(s, "simplify {} {}", self.max_relator_length, self.max_rounds);
        let _ = writeln!(s, "group-begin");
        s.push_str(&self.group.to_string());
        let _ = writeln!(s, "group-end");
        for t in &self.chain {
            let _ = writeln!(s, "step-begin {} {}", t.n_gens(), t.index());
            for row in t.rows() {
                let cells: Vec<String> = row.iter().map(u32::to_string).collect();
                let _ = writeln!(s, "{}", cells.join(" "));
            }
            let _ = writeln!(s, "step-end");
        }
        let _ = writeln!(s, "witness-begin");
        s.push_str(&self.witness.to_string());
        let _ = writeln!(s, "witness-end");
        match &self.mode {
            CertificateMode::Alexander { images, modulus, deleted_column, minors } => {
                let imgs: Vec<String> = images.iter().map(i64::to_string).collect();
                let _ = writeln!(s, "images {}", imgs.join(" "));
                let _ = writeln!(s, "modulus {modulus}");
                let _ = writeln!(s, "deleted-column {deleted_column}");
                for m in minors {
                    let rows: Vec<String> = m.rows.iter().map(usize::to_string).collect();
                    let _ = writeln!(s, "minor {} | {}", rows.join(" "), m.polynomial);
                }
            }
            CertificateMode::Height1 { invariants } => {
                let _ = writeln!(s, "invariants {}", invariants.aq_list());
            }
        }
        let _ = writeln!(s, "end");
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Certificate(m.to_string());
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).peekable();
        let header = lines.next().ok_or_else(|| bad("empty certificate"))?;
        let version = header
            .strip_prefix(CERTIFICATE_HEADER)
            .and_then(|v| v.trim().strip_prefix('v'))
            .and_then(|v| v.parse::<u32>().ok())
            .ok_or_else(|| bad("missing certificate header"))?;
        if version != CERTIFICATE_VERSION {
            return Err(bad(&format!("unsupported certificate version {version}")));
        }
        let mut mode_name = None;
        let mut budget = SimplifyBudget::default();
        let mut group = None;
        let mut witness = None;
        let mut chain = Vec::new();
        let mut images = None;
        let mut modulus = None;
        let mut deleted = None;
        let mut minors = Vec::new();
        let mut invariants = None;
        let mut ended = false;
        while let Some(line) = lines.next() {
            let (key, rest) = line.split_once(' ').map_or((line, ""), |(k, r)| (k, r.trim()));
            match key {
                "mode" => mode_name = Some(rest.to_string()),
                "index" => {}
                "simplify" => {
                    let v = parse_list::<usize>(rest)?;
                    if v.len() != 2 {
                        return Err(bad("simplify needs two numbers"));
                    }
                    budget = SimplifyBudget { max_relator_length: v[0], max_rounds: v[1] };
                }
                "group-begin" | "witness-begin" => {
                    let end = if key == "group-begin" { "group-end" } else { "witness-end" };
                    let mut body = String::new();
                    loop {
                        let l = lines.next().ok_or_else(|| bad("unterminated presentation block"))?;
                        if l == end {
                            break;
                        }
                        body.push_str(l);
                        body.push('\n');
                    }
                    let p = GroupPresentation::parse(&body)?;
                    if key == "group-begin" {
                        group = Some(p);
                    } else {
                        witness = Some(p);
                    }
                }
                "step-begin" => {
                    let v = parse_list::<usize>(rest)?;
                    if v.len() != 2 {
                        return Err(bad("step-begin needs generator count and index"));
                    }
                    let mut rows = Vec::new();
                    loop {
                        let l = lines.next().ok_or_else(|| bad("unterminated step block"))?;
                        if l == "step-end" {
                            break;
                        }
                        rows.push(parse_list::<u32>(l)?);
                    }
                    if rows.len() != v[1] {
                        return Err(bad("step row count differs from its declared index"));
                    }
                    chain.push(CosetTable::from_rows(v[0], &rows)?);
                }
                "images" => images = Some(parse_list::<i64>(rest)?),
                "modulus" => modulus = Some(rest.parse::<u64>().map_err(|_| bad("bad modulus"))?),
                "deleted-column" => deleted = Some(rest.parse::<usize>().map_err(|_| bad("bad column"))?),
                "minor" => {
                    let (rows, poly) = rest.split_once('|').ok_or_else(|| bad("minor line needs `|`"))?;
                    minors.push(CertifiedMinor { rows: parse_list::<usize>(rows)?, polynomial: poly.trim().to_string() });
                }
                "invariants" => invariants = Some(parse_aq_list(rest)?),
                "end" => {
                    ended = true;
                    break;
                }
                other => return Err(bad(&format!("unknown certificate line `{other}`"))),
            }
        }
        if !ended {
            return Err(bad("missing `end`"));
        }
        let mode = match mode_name.as_deref() {
            Some("alexander") => CertificateMode::Alexander {
                images: images.ok_or_else(|| bad("missing images"))?,
                modulus: modulus.ok_or_else(|| bad("missing modulus"))?,
                deleted_column: deleted.ok_or_else(|| bad("missing deleted-column"))?,
                minors,
            },
            Some("height1") => CertificateMode::Height1 { invariants: invariants.ok_or_else(|| bad("missing invariants"))? },
            _ => return Err(bad("missing or unknown mode")),
        };
        Ok(LargenessCertificate {
            version,
            group: group.ok_or_else(|| bad("missing group"))?,
            chain,
            max_relator_length: budget.max_relator_length,
            max_rounds: budget.max_rounds,
            witness: witness.ok_or_else(|| bad("missing witness"))?,
            mode,
        })
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split_whitespace()
        .map(|x| x.parse::<T>().map_err(|_| Error::Certificate(format!("bad number `{x}`"))))
        .collect()
}

/// Parses `[2,2,0,0]`-style invariants.
pub fn parse_aq_list(s: &str) -> Result<AbelianInvariants> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Certificate(format!("bad invariants `{s}`")))?;
    let mut rank = 0;
    let mut torsion = Vec::new();
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let v: BigUint = part.parse().map_err(|_| Error::Certificate(format!("bad invariant `{part}`")))?;
        if v.is_zero() {
            rank += 1;
        } else {
            torsion.push(v);
        }
    }
    Ok(AbelianInvariants::new(rank, torsion))
}

/// Outcome of an independent replay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Reduced minors at integer images: divide by `psi_a` (rank one) or `1 - t^a`, then unit-normalise.
pub fn certified_minors(witness: &GroupPresentation, images: &[i64], column: usize, rank: usize) -> Result<Vec<CertifiedMinor>> {
    let a = images[column];
    let m = alexander_matrix_uni(witness, images);
    let divisor = if rank == 1 { UniPoly::psi(a) } else { UniPoly::one_minus_power(a) };
    let mut out = Vec::new();
    for rows in row_subsets(witness.n_rels(), witness.n_gens() - 1, 100_000)? {
        let spec = MinorSpec { rows, deleted_column: column };
        let sub: Vec<Vec<UniPoly>> = spec
            .rows
            .iter()
            .map(|&r| m[r].iter().enumerate().filter(|(c, _)| *c != column).map(|(_, e)| e.clone()).collect())
            .collect();
        let n = det_uni(&sub)?;
        let p = n.exact_div(&divisor)?.unit_normalized();
        out.push(CertifiedMinor { rows: spec.rows, polynomial: p.to_string_with("t") });
    }
    Ok(out)
}

/// Replays a certificate against `g` using nothing but the certificate's own data.
pub fn verify_certificate(g: &GroupPresentation, cert: &LargenessCertificate) -> VerifyReport {
    let mut failures = Vec::new();
    if let Err(e) = replay(g, cert, &mut failures) {
        failures.push(e.to_string());
    }
    VerifyReport { ok: failures.is_empty(), failures }
}

fn replay(g: &GroupPresentation, cert: &LargenessCertificate, failures: &mut Vec<String>) -> Result<()> {
    if cert.version != CERTIFICATE_VERSION {
        failures.push(format!("unsupported version {}", cert.version));
        return Ok(());
    }
    if cert.group != *g {
        failures.push("certificate group differs from the given presentation".into());
        return Ok(());
    }
    let mut current = g.clone();
    for (k, t) in cert.chain.iter().enumerate() {
        if let Err(e) = t.audit(&current) {
            failures.push(format!("table-audit mismatch at step {k}: {e}"));
            return Ok(());
        }
        current = rewrite_subgroup(&current, t, cert.simplify_budget())?.presentation;
    }
    if current != cert.witness {
        failures.push("rewritten witness differs from the recorded presentation".into());
        return Ok(());
    }
    let w = &cert.witness;
    match &cert.mode {
        CertificateMode::Height1 { invariants } => {
            let stats = g.magnus_stats(0, height_pivot(g).unwrap_or(0));
            if !g.is_two_generator_one_relator() || stats.as_ref().map_or(true, |s| s.height != Some(1)) {
                failures.push("height-1 criterion needs a two-generator one-relator height-1 presentation".into());
            }
            let inv = abelian_invariants(w);
            if inv != *invariants {
                failures.push(format!("recorded invariants {} differ from recomputed {}", invariants.aq_list(), inv.aq_list()));
            }
            if inv.min_generators() < 3 {
                failures.push(format!("abelianisation {} needs fewer than 3 generators", inv.aq_list()));
            }
        }
        CertificateMode::Alexander { images, modulus, deleted_column, minors } => {
            if images.len() != w.n_gens() {
                failures.push("image vector length differs from the witness generator count".into());
                return Ok(());
            }
            for (k, r) in w.relators().iter().enumerate() {
                let s: i64 = r.exponent_sums(w.n_gens()).iter().zip(images).map(|(a, b)| a * b).sum();
                if s != 0 {
                    failures.push(format!("images do not kill relator {k}"));
                }
            }
            if images.iter().fold(0i64, |g, x| g.gcd(x)) != 1 {
                failures.push("images do not generate Z".into());
            }
            if *modulus != 0 && !is_prime(*modulus) {
                failures.push(format!("modulus {modulus} is neither 0 nor prime"));
            }
            if *deleted_column >= images.len() || images[*deleted_column] == 0 {
                failures.push("deleted column must have non-zero image".into());
            }
            if !failures.is_empty() {
                return Ok(());
            }
            let rank = abelian_invariants(w).rank;
            let recomputed = certified_minors(w, images, *deleted_column, rank)?;
            if recomputed != *minors {
                failures.push("recorded minors differ from recomputed minors".into());
            }
            let m = BigInt::from(*modulus);
            for cm in &recomputed {
                let p = UniPoly::parse(&cm.polynomial, "t")?;
                let vanishes = if *modulus == 0 { p.is_zero() } else { p.coeffs().iter().all(|c| (c % &m).is_zero()) };
                if !vanishes {
                    failures.push(format!("minor {:?} does not vanish modulo {modulus}", cm.rows));
                }
            }
        }
    }
    Ok(())
}

/// Generator with exponent sum zero in the single relator (preferring the last one).
pub fn height_pivot(p: &GroupPresentation) -> Option<usize> {
    let r = p.relators().first()?;
    let sums = r.exponent_sums(p.n_gens());
    (0..p.n_gens()).rev().find(|&g| sums[g] == 0 && r.syllables().iter().any(|s| s.gen == g))
}
