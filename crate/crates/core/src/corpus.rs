//! Bundled presentations with their published classifications, parametric families,
//! the positive-Betti pre-filter and batch running.

use std::time::Duration;

use serde::Serialize;

use crate::coset::{low_index_subgroups, LowIndexOptions};
use crate::driver::{height1_mode, prove_large, LargenessReport, ProveOptions};
use crate::error::{Error, Result};
use crate::presentation::GroupPresentation;
use crate::rewrite::{subgroup_abelian_invariants, SimplifyBudget};
use crate::word::{commutator, Syllable, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expected {
    Large,
    NotLarge,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusEntry {
    /// `T1#2`, `T3-16#5`, `r0`, ...
    pub id: String,
    pub relator: String,
    pub expected: Expected,
    pub provenance: String,
    /// Word length as printed in the table.
    pub length: usize,
    /// Number of pivot blocks, where the table records it.
    pub t_syllables: Option<usize>,
}

impl CorpusEntry {
    pub fn presentation(&self) -> GroupPresentation {
        let gens = if self.id == "r0" { "x y" } else { "a t" };
        GroupPresentation::parse(&format!("gens {gens}\nrel {}", self.relator)).expect("corpus entries parse")
    }
}

const TABLE1: &[(&str, char, usize, usize, &str)] = &[
    ("ta2TataTa", 'x', 4, 9, "BS(2,-3)"),
    ("ta2TatATA", 'x', 4, 9, "BBG"),
    ("ta2TAtaTA", 'x', 4, 9, "BS(2,3)"),
    ("ta2Ta2ta2Ta", 'x', 4, 11, "BS(3,-4)"),
    ("ta2Ta2taTa2", 'x', 4, 11, "isomorphic to #4"),
    ("ta2Ta2tATA2", 'x', 4, 11, "D(2,1,2), isomorphic to BBG"),
    ("ta2Ta2tA2TA", 'x', 4, 11, "isomorphic to #6"),
    ("ta2TatA2TA2", 'x', 4, 11, "isomorphic to #6"),
    ("ta2TAta2TA2", 'x', 4, 11, "BS(3,4)"),
    ("ta2TA2taTA2", 'x', 4, 11, "isomorphic to #9"),
    ("ta3Tata2Ta", 'x', 4, 11, "BS(2,-5)"),
    ("ta3TatA2TA", 'x', 4, 11, "D(1,2,3)"),
    ("ta3TAta2TA", 'x', 4, 11, "BS(2,5)"),
    ("ta3Ta2ta3TA", 'y', 4, 13, ""),
    ("ta3Ta2ta2Ta2", 'x', 4, 13, "BS(4,-5)"),
    ("ta3Ta2tA2TA2", 'x', 4, 13, "D(2,2,3)"),
    ("ta3Ta2tA3TA", 'x', 4, 13, "D(3,2,1)"),
    ("ta3Tata3TA2", 'y', 4, 13, ""),
    ("ta3TatA3TA2", 'x', 4, 13, "isomorphic to #17"),
    ("ta3TA2ta2TA2", 'x', 4, 13, "BS(4,5)"),
    ("ta4Tata3Ta", 'x', 4, 13, "BS(2,-7)"),
    ("ta4TatA3TA", 'x', 4, 13, "D(1,3,4)"),
    ("ta4TAta3TA", 'x', 4, 13, "BS(2,7)"),
    ("ta2TataTataTa", 'x', 6, 13, "BS(3,-4)"),
    ("ta2TatATatATA", '?', 6, 13, "open: is a trivial in every finite image?"),
    ("ta2TatATAtATA", '?', 6, 13, "open: is a trivial in every finite image?"),
    ("ta2TAtaTAtaTA", 'x', 6, 13, "BS(3,4)"),
    ("ta2Tata2TataTa", 'x', 6, 14, "BS(3,-5)"),
    ("ta2TAta2TAtaTA", 'x', 6, 14, "BS(3,5)"),
];

const TABLE2: &[(&str, usize, &str)] = &[
    ("t3aT2ATA", 9, "index 7 then normal index 8, zero mod 2"),
    ("t4AT3ATA", 11, ""),
    ("t4AT3aTA", 11, ""),
    ("t4aT3aTA", 11, ""),
    ("t3aT2A2TA2", 11, ""),
    ("t3A2T2aTA2", 11, ""),
    ("t3AT2a2TA2", 11, ""),
    ("t3a3T2ATA", 11, ""),
    ("t3ATATA2TA", 11, ""),
    ("t3aTaTA2TA", 11, "isomorphic to #12"),
    ("t3ATA2TATA", 11, "isomorphic to #9"),
    ("t3aTa2TATA", 11, ""),
    ("t2aT2ataTA2", 11, ""),
    ("t2AT2a2tATA", 11, "isomorphic to #13"),
    ("t2AtATATATA", 11, ""),
    ("t2ataTATATA", 11, ""),
];

const TABLE3_16: &[(&str, &str)] = &[
    ("t4AtaT3ATa2TA", "isomorphic to 16#5 via a -> at^3"),
    ("t4ATaT3Ata2TA", "isomorphic to 16#1 via a -> at^4"),
    ("t3atAT3AtaTaTA", "isomorphic to 16#1 via a -> at"),
    ("t3AtaT3ATataTA", "isomorphic to 16#1 via a -> aT"),
    ("t3ATaT3AtataTA", "index 9 subgroup 10 [0,0,0,0]"),
    ("t3aTAT3AtaTatA", "isomorphic to 16#5 via a -> aT^2"),
    ("t3atAT2AtaT2aTA", "isomorphic to 16#3 via a -> at"),
    ("t2a2T2ATa2tAtATA", "index 9 subgroup 15 [0,0,0]"),
];

const TABLE3_18: &[(&str, char, &str)] = &[
    ("t4aTaTa3TA2TA3", 'y', "index 13 subgroup 14 [0,0,0]"),
    ("t4aT2AtaTA2Ta2TA", 'y', "index 9 subgroup 17 [3,0,0,0]"),
    ("t4ATataTaTATaTA2", 'y', "isomorphic to 18#5 via a -> at"),
    ("t4ATatATATa2TaTA", 'y', "a -> at"),
    ("t3ATat2a2TATaTATA", 'y', "index 10 subgroup 24 [3,18,0,0,0]"),
    ("t3ATat2ATaTa2TATA", 'y', "index 12 subgroup 18 [0,0,0]"),
    ("t3ATa2T3atA2tATa", 'y', "a -> at"),
    ("t3ATAT3aTa2tatA2", 'y', "index 13 subgroup 11 [0,0,0]"),
    ("t3atA2ta2T2aT2ATA", 'y', "index 7 subgroup 13 [0,0,0,0]"),
    ("t3atAT2a2TA2taT2A", 'y', "index 9 subgroup 36 [2,0,0,0]"),
    ("t3atAT2aTA2ta2T2A", 'y', "index 10 subgroup 31 [3,0,0,0]"),
    ("t3atA2T2a2taT2ATA", 'y', "a -> aT"),
    ("t2aTata2TA2taTA2TA", 'y', "isomorphic to 18#17 via a,t -> t,a"),
    ("t2aTA2ta2TataTA2TA", 'y', "isomorphic to 18#20 via a,t -> t,a"),
    ("t2a2TAta2TatA2TATA", 'y', "a,t -> t,a"),
    ("t2a2t2atATATaT2ATA", 'y', "a,t -> t,a"),
    ("t2aTAt2Ata2TATaT2A", 'y', "index 9 subgroup 19 [2,2,0,0,0]"),
    ("t2aTAt2AT2ATata2TA", 'y', "isomorphic to 18#6 via a -> aT"),
    ("t2AT2aTat2AtaTaTA2", 'y', "isomorphic to 18#16 via a -> at^2"),
    ("t2aTA2tat2aTATaT2A", 'y', "isomorphic to 18#17 via a -> aT^2"),
    ("t2aTATat2ATatATaTA", 'x', "not large"),
];

fn expected_of(c: char) -> Expected {
    match c {
        'y' => Expected::Large,
        'x' => Expected::NotLarge,
        _ => Expected::Unknown,
    }
}

pub fn table1() -> Vec<CorpusEntry> {
    TABLE1
        .iter()
        .enumerate()
        .map(|(i, &(w, e, n, len, d))| CorpusEntry {
            id: format!("T1#{}", i + 1),
            relator: w.to_string(),
            expected: expected_of(e),
            provenance: format!("height-1 table, row {}{}", i + 1, if d.is_empty() { String::new() } else { format!(": {d}") }),
            length: len,
            t_syllables: Some(n),
        })
        .collect()
}

pub fn table2() -> Vec<CorpusEntry> {
    TABLE2
        .iter()
        .enumerate()
        .map(|(i, &(w, len, d))| CorpusEntry {
            id: format!("T2#{}", i + 1),
            relator: w.to_string(),
            expected: Expected::Large,
            provenance: format!("non-height-1 table, row {}{}", i + 1, if d.is_empty() { String::new() } else { format!(": {d}") }),
            length: len,
            t_syllables: None,
        })
        .collect()
}

pub fn table3() -> Vec<CorpusEntry> {
    let mut out: Vec<CorpusEntry> = TABLE3_16
        .iter()
        .enumerate()
        .map(|(i, &(w, d))| CorpusEntry {
            id: format!("T3-16#{}", i + 1),
            relator: w.to_string(),
            expected: Expected::Large,
            provenance: format!("Betti-two table, length 16, row {}: {d}", i + 1),
            length: 16,
            t_syllables: None,
        })
        .collect();
    out.extend(TABLE3_18.iter().enumerate().map(|(i, &(w, e, d))| CorpusEntry {
        id: format!("T3-18#{}", i + 1),
        relator: w.to_string(),
        expected: expected_of(e),
        provenance: format!("Betti-two table, length 18, row {}: {d}", i + 1),
        length: 18,
        t_syllables: None,
    }));
    out
}

/// `[y^-1,x][x,y][y^-1,x]^-1[x,y]^-2` with `[u,v] = u v u^-1 v^-1`; every finite-index subgroup has abelianisation `Z^2`.
pub fn r0_word() -> Word {
    let x = Word::generator(0);
    let y = Word::generator(1);
    let a = commutator(&y.inverse(), &x);
    let b = commutator(&x, &y);
    let w = &(&(&a * &b) * &a.inverse()) * &(&b.inverse() * &b.inverse());
    w.free_reduce().cyclic_reduce()
}

pub fn r0() -> CorpusEntry {
    let p = GroupPresentation::new(vec!["x".into(), "y".into()], vec![r0_word()]).expect("valid");
    CorpusEntry {
        id: "r0".into(),
        relator: p.format_word(&p.relators()[0]),
        expected: Expected::NotLarge,
        provenance: "length-18 commutator-subgroup relator whose finite-index subgroups all have abelianisation Z^2".into(),
        length: 18,
        t_syllables: None,
    }
}

/// Every bundled entry in table order, then `r0`.
pub fn all() -> Vec<CorpusEntry> {
    let mut v = table1();
    v.extend(table2());
    v.extend(table3());
    v.push(r0());
    v
}

pub fn find(id: &str) -> Option<CorpusEntry> {
    all().into_iter().find(|e| e.id == id)
}

/// `<a, t | t a^m t^-1 a^-n>`.
pub fn gen_bs(m: i64, n: i64) -> Result<GroupPresentation> {
    if m == 0 || n == 0 {
        return Err(Error::Precondition("Baumslag-Solitar parameters must be non-zero".into()));
    }
    let w = Word::from_syllables(vec![Syllable::new(1, 1), Syllable::new(0, m), Syllable::new(1, -1), Syllable::new(0, -n)]);
    GroupPresentation::new(vec!["a".into(), "t".into()], vec![w.free_reduce()])
}

/// `<a, t | (t a^k t^-1) a^l (t a^k t^-1)^-1 a^-m>`.
pub fn gen_dklm(k: i64, l: i64, m: i64) -> Result<GroupPresentation> {
    if k == 0 || l == 0 || m == 0 {
        return Err(Error::Precondition("D(k,l,m) parameters must be non-zero".into()));
    }
    let u = Word::from_syllables(vec![Syllable::new(1, 1), Syllable::new(0, k), Syllable::new(1, -1)]);
    let w = &(&(&u * &Word::power(0, l)) * &u.inverse()) * &Word::power(0, -m);
    GroupPresentation::new(vec!["a".into(), "t".into()], vec![w.free_reduce()])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "answer", rename_all = "lowercase")]
pub enum PrefilterAnswer {
    /// A subgroup of this index has positive first Betti number.
    Yes { index: usize },
    No,
    Inconclusive { reason: String },
}

/// Whether some subgroup of index at most `max_index` surjects onto `Z`.
pub fn betti_prefilter_mode(p: &GroupPresentation, max_index: usize, node_limit: Option<u64>) -> Result<PrefilterAnswer> {
    for index in 1..=max_index {
        let mut opts = LowIndexOptions::new(index, index);
        opts.node_limit = node_limit;
        let out = low_index_subgroups(p, &opts)?;
        for r in &out.records {
            if subgroup_abelian_invariants(p, &r.table).rank >= 1 {
                return Ok(PrefilterAnswer::Yes { index });
            }
        }
        if !out.complete {
            return Ok(PrefilterAnswer::Inconclusive { reason: format!("enumeration budget exhausted at index {index}") });
        }
    }
    Ok(PrefilterAnswer::No)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BatchMode {
    ProveLarge,
    Height1,
    BettiPrefilter,
}

impl std::str::FromStr for BatchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prove-large" => Ok(BatchMode::ProveLarge),
            "height1" => Ok(BatchMode::Height1),
            "betti-prefilter" => Ok(BatchMode::BettiPrefilter),
            other => Err(Error::Precondition(format!("unknown batch mode `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchItem {
    pub name: String,
    /// `certified`, `unknown`, `yes`, `no`, `inconclusive` or `error`.
    pub disposition: String,
    pub detail: String,
    #[serde(skip)]
    pub report: Option<LargenessReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchReport {
    pub mode: BatchMode,
    pub max_index: usize,
    pub items: Vec<BatchItem>,
}

impl BatchReport {
    pub fn count(&self, disposition: &str) -> usize {
        self.items.iter().filter(|i| i.disposition == disposition).count()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("largeness-batch v1\n");
        s.push_str(&format!("mode {}\nmax-index {}\n", serde_json::to_string(&self.mode).unwrap_or_default().trim_matches('"'), self.max_index));
        for i in &self.items {
            s.push_str(&format!("item {} {} {}\n", i.name, i.disposition, i.detail));
        }
        let mut kinds: Vec<&str> = self.items.iter().map(|i| i.disposition.as_str()).collect();
        kinds.sort_unstable();
        kinds.dedup();
        for k in kinds {
            s.push_str(&format!("total {k} {}\n", self.count(k)));
        }
        s.push_str("end\n");
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("batch report serialises")
    }
}

/// Runs one mode over named presentation texts, in the given order. Parse and run
/// errors are recorded per item.
pub fn batch_run(inputs: &[(String, String)], mode: BatchMode, max_index: usize, time_budget: Option<Duration>) -> BatchReport {
    let items = inputs
        .iter()
        .map(|(name, text)| {
            let run = || -> Result<(String, String, Option<LargenessReport>)> {
                let p = GroupPresentation::parse(text)?;
                match mode {
                    BatchMode::ProveLarge => {
                        let mut o = ProveOptions::new(max_index);
                        o.time_budget = time_budget;
                        let r = prove_large(&p, &o)?;
                        let detail = r.certificate.as_ref().map_or(String::new(), |c| {
                            format!("index {} modulus {}", c.total_index(), c.modulus().map_or("-".into(), |m| m.to_string()))
                        });
                        let d = if r.is_certified() { "certified" } else { "unknown" };
                        Ok((d.into(), detail, Some(r)))
                    }
                    BatchMode::Height1 => {
                        let r = height1_mode(&p, max_index, SimplifyBudget::default())?;
                        let d = if r.is_certified() { "certified" } else { "unknown" };
                        let detail = r.certificate.as_ref().map_or(String::new(), |c| format!("index {}", c.total_index()));
                        Ok((d.into(), detail, Some(r)))
                    }
                    BatchMode::BettiPrefilter => Ok(match betti_prefilter_mode(&p, max_index, None)? {
                        PrefilterAnswer::Yes { index } => ("yes".into(), format!("index {index}"), None),
                        PrefilterAnswer::No => ("no".into(), String::new(), None),
                        PrefilterAnswer::Inconclusive { reason } => ("inconclusive".into(), reason, None),
                    }),
                }
            };
            match run() {
                Ok((disposition, detail, report)) => BatchItem { name: name.clone(), disposition, detail, report },
                Err(e) => BatchItem { name: name.clone(), disposition: "error".into(), detail: e.to_string(), report: None },
            }
        })
        .collect();
    BatchReport { mode, max_index, items }
}
