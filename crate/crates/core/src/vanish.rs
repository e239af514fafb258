//! Searching for a homomorphism onto `Z` whose Alexander polynomial vanishes
//! modulo zero or a prime.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coset::CosetTable;
use crate::determinant::det_uni;
use crate::error::{Error, Result};
use crate::fox::{alexander_matrix, row_subsets, MinorSpec, Poly, UniPoly};
use crate::lattice::{free_abelianisation, invariants_within, prime_factors, AbelianInvariants};
use crate::laurent::ChiVector;
use crate::presentation::GroupPresentation;
use crate::rewrite::subgroup_relation_matrix;

/// Alexander matrix over the free abelianisation, with the generator images.
#[derive(Clone, Debug)]
pub struct AlexanderMatrix {
    pub presentation: GroupPresentation,
    pub invariants: AbelianInvariants,
    /// `alpha[j]` is the image of generator `j` in `Z^b`.
    pub alpha: Vec<Vec<i64>>,
    pub entries: Vec<Vec<Poly>>,
}

impl AlexanderMatrix {
    pub fn new(p: &GroupPresentation) -> Result<Self> {
        let fa = free_abelianisation(p);
        if fa.invariants.rank == 0 {
            return Err(Error::NoFreeAbelianisation);
        }
        let entries = alexander_matrix(p, &fa.images);
        Ok(AlexanderMatrix { presentation: p.clone(), invariants: fa.invariants, alpha: fa.images, entries })
    }

    pub fn b(&self) -> usize {
        self.invariants.rank
    }

    pub fn n_cols(&self) -> usize {
        self.alpha.len()
    }

    pub fn n_rows(&self) -> usize {
        self.entries.len()
    }

    /// Image of each generator under `chi`.
    pub fn images(&self, chi: &[i64]) -> Vec<i64> {
        self.alpha.iter().map(|v| v.iter().zip(chi).map(|(a, b)| a * b).sum()).collect()
    }

    /// First column with non-zero image under `chi`.
    pub fn column_for(&self, chi: &[i64]) -> Option<usize> {
        self.images(chi).iter().position(|a| *a != 0)
    }

    pub fn evaluate(&self, chi: &[i64]) -> Vec<Vec<UniPoly>> {
        self.entries.iter().map(|row| row.iter().map(|e| e.evaluate_chi(chi)).collect()).collect()
    }

    /// Row subsets of size `n - 1` (the rows kept), lexicographic.
    pub fn row_sets(&self, limit: usize) -> Result<Vec<Vec<usize>>> {
        row_subsets(self.n_rows(), self.n_cols().saturating_sub(1), limit)
    }
}

/// Moduli under which every minor vanishes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Vanishing {
    /// Identically zero, hence zero modulo everything.
    Zero,
    /// Primes dividing every minor's content (possibly none).
    Primes(Vec<u64>),
}

impl Vanishing {
    pub fn contains(&self, modulus: u64) -> bool {
        match self {
            Vanishing::Zero => true,
            Vanishing::Primes(ps) => ps.contains(&modulus),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Vanishing::Primes(ps) if ps.is_empty())
    }

    /// Preferred modulus: 0 when identically zero, else the smallest prime.
    pub fn best(&self) -> Option<u64> {
        match self {
            Vanishing::Zero => Some(0),
            Vanishing::Primes(ps) => ps.first().copied(),
        }
    }
}

/// Content of one minor at a homomorphism (zero when the minor vanishes).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorEvidence {
    pub rows: Vec<usize>,
    pub deleted_column: usize,
    pub content: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Found { chi: ChiVector, modulus: u64, moduli: Vanishing },
    NotFound,
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishResult {
    pub outcome: Outcome,
    pub evidence: Vec<MinorEvidence>,
    /// Human-readable trail of the decisions made.
    pub notes: Vec<String>,
}

impl VanishResult {
    fn not_found(notes: Vec<String>) -> Self {
        VanishResult { outcome: Outcome::NotFound, evidence: Vec::new(), notes }
    }

    fn inconclusive(reason: String, notes: Vec<String>) -> Self {
        VanishResult { outcome: Outcome::Inconclusive(reason), evidence: Vec::new(), notes }
    }

    pub fn is_found(&self) -> bool {
        matches!(self.outcome, Outcome::Found { .. })
    }
}

/// Budgets shared by the three tests.
#[derive(Clone, Debug)]
pub struct VanishBudget {
    pub max_minors: usize,
    pub max_candidates: usize,
    /// Bound on `|chi_i|` in the boxed candidate enumeration.
    pub component_bound: i64,
    /// Cap on the number of integer vectors examined while lifting boxed classes.
    pub max_enumeration: u64,
    pub box_primes: Vec<u64>,
    pub deadline: Option<Instant>,
}

impl Default for VanishBudget {
    fn default() -> Self {
        VanishBudget {
            max_minors: 2000,
            max_candidates: 5000,
            component_bound: 64,
            max_enumeration: 3_000_000,
            box_primes: vec![2, 3, 5, 7],
            deadline: None,
        }
    }
}

impl VanishBudget {
    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

fn big_to_biguint(n: &BigInt) -> BigUint {
    n.abs().to_biguint().expect("absolute value is non-negative")
}

/// Running content gcd over the minors at `chi`.
struct Scan {
    gcd: BigInt,
    all_zero: bool,
    evidence: Vec<MinorEvidence>,
}

/// Evaluates minors at `chi` in lexicographic row order, keeping a running gcd
/// of contents. Stops early once the gcd is 1 and some minor is non-zero, or
/// once the gcd becomes coprime to `restrict` when that is given.
fn scan_minors(b: &AlexanderMatrix, chi: &[i64], budget: &VanishBudget, restrict: Option<&BigInt>, early: bool) -> Result<Scan> {
    let Some(j) = b.column_for(chi) else {
        return Err(Error::Precondition(format!("homomorphism {chi:?} kills every generator")));
    };
    let ev = b.evaluate(chi);
    let sets = b.row_sets(budget.max_minors)?;
    let mut gcd = restrict.cloned().unwrap_or_else(BigInt::zero);
    let mut all_zero = true;
    let mut evidence = Vec::new();
    if sets.is_empty() {
        // Fewer relators than n - 1: the elementary ideal is zero.
        return Ok(Scan { gcd: BigInt::zero(), all_zero: true, evidence });
    }
    for rows in sets {
        if budget.expired() {
            return Err(Error::BudgetExceeded("time budget exhausted while evaluating minors".into()));
        }
        let spec = MinorSpec { rows: rows.clone(), deleted_column: j };
        let sub: Vec<Vec<UniPoly>> = spec
            .rows
            .iter()
            .map(|&r| ev[r].iter().enumerate().filter(|(c, _)| *c != j).map(|(_, e)| e.clone()).collect())
            .collect();
        let m = det_uni(&sub)?;
        let c = m.content();
        if !m.is_zero() {
            all_zero = false;
        }
        gcd = gcd.gcd(&c);
        evidence.push(MinorEvidence { rows, deleted_column: j, content: c });
        if early && !all_zero && gcd.is_one() {
            break;
        }
    }
    Ok(Scan { gcd, all_zero, evidence })
}

fn vanishing_of(scan: &Scan) -> Vanishing {
    if scan.all_zero {
        Vanishing::Zero
    } else {
        Vanishing::Primes(prime_factors(&big_to_biguint(&scan.gcd)))
    }
}

/// Evaluates every minor at `chi` and reports the moduli under which all vanish.
pub fn verify_chi(b: &AlexanderMatrix, chi: &ChiVector) -> Result<Vanishing> {
    if chi.len() != b.b() {
        return Err(Error::Precondition("homomorphism has the wrong number of components".into()));
    }
    let budget = VanishBudget { max_minors: usize::MAX, ..VanishBudget::default() };
    let scan = scan_minors(b, chi.components(), &budget, None, false)?;
    Ok(vanishing_of(&scan))
}

/// Full evidence list at `chi` (every minor, no early exit).
pub fn minor_evidence(b: &AlexanderMatrix, chi: &ChiVector) -> Result<Vec<MinorEvidence>> {
    let budget = VanishBudget { max_minors: usize::MAX, ..VanishBudget::default() };
    Ok(scan_minors(b, chi.components(), &budget, None, false)?.evidence)
}

/// Minors at `chi` with the deleted column's factor removed, unit-normalised:
/// division by `psi_a` when `b = 1` and by `1 - t^a` otherwise.
pub fn reduced_minors(b: &AlexanderMatrix, chi: &ChiVector) -> Result<Vec<(MinorSpec, UniPoly)>> {
    if chi.len() != b.b() {
        return Err(Error::Precondition("homomorphism has the wrong number of components".into()));
    }
    let comps = chi.components();
    let j = b.column_for(comps).ok_or_else(|| Error::Precondition("homomorphism kills every generator".into()))?;
    let a = b.images(comps)[j];
    let ev = b.evaluate(comps);
    let mut out = Vec::new();
    for rows in b.row_sets(usize::MAX)? {
        let spec = MinorSpec { rows, deleted_column: j };
        let sub: Vec<Vec<UniPoly>> = spec
            .rows
            .iter()
            .map(|&r| ev[r].iter().enumerate().filter(|(c, _)| *c != j).map(|(_, e)| e.clone()).collect())
            .collect();
        let n = det_uni(&sub)?;
        let divisor = if b.b() == 1 { UniPoly::psi(a) } else { UniPoly::one_minus_power(a) };
        out.push((spec, n.exact_div(&divisor)?.unit_normalized()));
    }
    Ok(out)
}

fn found(chi: ChiVector, moduli: Vanishing, scan: Scan, notes: Vec<String>) -> VanishResult {
    let modulus = moduli.best().expect("non-empty vanishing set");
    VanishResult { outcome: Outcome::Found { chi, modulus, moduli }, evidence: scan.evidence, notes }
}

/// `b = 1`: the only homomorphism is `t ↦ t`; vanishing needs a prime dividing the top torsion coefficient.
pub fn betti1_test(b: &AlexanderMatrix, budget: &VanishBudget) -> VanishResult {
    let mut notes = Vec::new();
    if b.b() != 1 {
        return VanishResult::inconclusive("betti1_test needs rank 1".into(), notes);
    }
    let Some(dk) = b.invariants.largest_torsion().cloned() else {
        notes.push("abelianisation is Z: reject".into());
        return VanishResult::not_found(notes);
    };
    let chi = ChiVector::new(vec![1]).expect("primitive");
    let dk = BigInt::from(dk);
    let scan = match scan_minors(b, chi.components(), budget, Some(&dk), true) {
        Ok(s) => s,
        Err(e) => return VanishResult::inconclusive(e.to_string(), notes),
    };
    notes.push(format!("running content gcd restricted to d_k = {dk}: {}", scan.gcd));
    if scan.all_zero {
        return found(chi, Vanishing::Zero, scan, notes);
    }
    let primes = prime_factors(&big_to_biguint(&scan.gcd));
    if primes.is_empty() {
        return VanishResult::not_found(notes);
    }
    found(chi, Vanishing::Primes(primes), scan, notes)
}

/// Distinct prime powers `q ≤ bound`, ascending.
fn prime_powers_up_to(bound: i64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for p in 2..=bound.max(1) as u64 {
        if crate::lattice::is_prime(p) {
            let mut q = p;
            while q as i64 <= bound {
                out.push((p, q));
                q *= p;
            }
        }
    }
    out
}

/// Per-modulus sets of admissible prime powers for one wrapping track.
#[derive(Debug, Default)]
struct Track {
    /// Prime powers whose wrap vanishes identically.
    zero: Vec<(u64, u64)>,
    /// For a prime r, prime powers whose wrap vanishes mod r.
    by_prime: BTreeMap<u64, Vec<(u64, u64)>>,
    bound: i64,
}

/// Wrap candidates for the component attached to the other variable: folding variable
/// `var` modulo `q` must kill `poly` whenever `q` divides that component.
fn wrap_track(poly: &Poly, var: usize, strip: &BTreeSet<u64>, only: Option<u64>) -> Track {
    let bound = poly.spread(var);
    let mut t = Track { bound, ..Track::default() };
    for (p, q) in prime_powers_up_to(bound) {
        let w = poly.wrap(var, q);
        if w.is_zero() {
            t.zero.push((p, q));
            continue;
        }
        let c = big_to_biguint(&w.content());
        for r in prime_factors(&c) {
            if strip.contains(&r) || only.is_some_and(|o| o != r) {
                continue;
            }
            t.by_prime.entry(r).or_default().push((p, q));
        }
    }
    t
}

/// Products of prime powers over distinct primes, bounded by `bound`, including 1.
fn products(powers: &[(u64, u64)], bound: i64) -> Vec<i64> {
    let mut by_p: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &(p, q) in powers {
        by_p.entry(p).or_default().push(q);
    }
    let mut out = vec![1i64];
    for qs in by_p.values() {
        let mut next = out.clone();
        for &m in &out {
            for &q in qs {
                let v = m * q as i64;
                if v <= bound {
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// `b = 2`: the two coordinate homomorphisms, then wrap-derived candidates.
pub fn betti2_test(b: &AlexanderMatrix, budget: &VanishBudget) -> VanishResult {
    let mut notes = Vec::new();
    if b.b() != 2 {
        return VanishResult::inconclusive("betti2_test needs rank 2".into(), notes);
    }
    // x ↦ t, y ↦ 1 and x ↦ 1, y ↦ t.
    let chi_y = ChiVector::new(vec![1, 0]).expect("primitive");
    let chi_x = ChiVector::new(vec![0, 1]).expect("primitive");
    let mut first_scans = Vec::new();
    for chi in [&chi_y, &chi_x] {
        let scan = match scan_minors(b, chi.components(), budget, None, false) {
            Ok(s) => s,
            Err(e) => return VanishResult::inconclusive(e.to_string(), notes),
        };
        let v = vanishing_of(&scan);
        notes.push(format!("chi = {chi}: content gcd {}", scan.gcd));
        if !v.is_empty() {
            return found(chi.clone(), v, scan, notes);
        }
        first_scans.push(scan);
    }
    let sets = match b.row_sets(budget.max_minors) {
        Ok(s) => s,
        Err(e) => return VanishResult::inconclusive(e.to_string(), notes),
    };
    let Some(j0) = (0..b.n_cols()).find(|&j| b.alpha[j].iter().any(|v| *v != 0)) else {
        return VanishResult::inconclusive("no column with non-trivial image".into(), notes);
    };
    // Full two-variable reduced minor for row set k.
    let full_minor = |k: usize| -> Result<Poly> {
        let spec = MinorSpec { rows: sets[k].clone(), deleted_column: j0 };
        let n = crate::fox::minor(&b.entries, &spec, 2)?;
        n.exact_div(&Poly::one_minus_monomial(&b.alpha[j0]))
    };
    // Track for m (wrap in x: needs P(x, 1) ≠ 0) and for l (wrap in y: needs P(1, y) ≠ 0).
    let mut tracks: Vec<Track> = Vec::new();
    let mut minors_cache: BTreeMap<usize, Poly> = BTreeMap::new();
    for (side, scan) in first_scans.iter().enumerate() {
        let var = side; // side 0: y ↦ 1 so wrap x; side 1: x ↦ 1 so wrap y
        let Some(k) = scan.evidence.iter().position(|e| !e.content.is_zero()) else {
            return VanishResult::inconclusive("no non-vanishing minor recorded".into(), notes);
        };
        let p = match minors_cache.get(&k) {
            Some(p) => p.clone(),
            None => match full_minor(k) {
                Ok(p) => {
                    minors_cache.insert(k, p.clone());
                    p
                }
                Err(e) => return VanishResult::inconclusive(e.to_string(), notes),
            },
        };
        let strip: BTreeSet<u64> = prime_factors(&big_to_biguint(&scan.evidence[k].content)).into_iter().collect();
        let mut track = wrap_track(&p, var, &strip, None);
        // Repair: for primes in the stripped content, use a minor whose content avoids them.
        for &r in &strip {
            let other = scan.evidence.iter().position(|e| !e.content.is_zero() && !(&e.content % BigInt::from(r)).is_zero());
            let Some(k2) = other else {
                notes.push(format!("no minor with content coprime to {r}"));
                return VanishResult::inconclusive(format!("no minor with content coprime to {r}"), notes);
            };
            let p2 = match minors_cache.get(&k2) {
                Some(p) => p.clone(),
                None => match full_minor(k2) {
                    Ok(p) => {
                        minors_cache.insert(k2, p.clone());
                        p
                    }
                    Err(e) => return VanishResult::inconclusive(e.to_string(), notes),
                },
            };
            let t2 = wrap_track(&p2, var, &BTreeSet::new(), Some(r));
            let entry = track.by_prime.entry(r).or_default();
            entry.extend(t2.zero.iter().copied());
            entry.extend(t2.by_prime.get(&r).into_iter().flatten().copied());
            track.bound = track.bound.max(t2.bound);
        }
        tracks.push(track);
    }
    // Candidate assembly per modulus.
    let (mt, lt) = (&tracks[0], &tracks[1]);
    let mut moduli: BTreeSet<u64> = mt.by_prime.keys().chain(lt.by_prime.keys()).copied().collect();
    moduli.insert(0);
    let mut cands: BTreeSet<(i64, i64, i64)> = BTreeSet::new();
    for &r in &moduli {
        let pick = |t: &Track| -> Vec<(u64, u64)> {
            let mut v = t.zero.clone();
            if r != 0 {
                v.extend(t.by_prime.get(&r).into_iter().flatten().copied());
            }
            v
        };
        let ms = products(&pick(mt), mt.bound.max(1));
        let ls = products(&pick(lt), lt.bound.max(1));
        for &l in &ls {
            for &m in &ms {
                if l.gcd(&m) != 1 {
                    continue;
                }
                for sm in [m, -m] {
                    cands.insert((l.max(sm.abs()), l, sm));
                }
            }
        }
    }
    notes.push(format!(
        "wrap bounds ({}, {}); {} candidate homomorphisms",
        mt.bound,
        lt.bound,
        cands.len()
    ));
    if cands.len() > budget.max_candidates {
        return VanishResult::inconclusive(format!("{} candidates exceed the budget", cands.len()), notes);
    }
    for (_, l, m) in cands {
        if budget.expired() {
            return VanishResult::inconclusive("time budget exhausted".into(), notes);
        }
        let chi = ChiVector::new(vec![l, m]).expect("coprime pair");
        let scan = match scan_minors(b, chi.components(), budget, None, true) {
            Ok(s) => s,
            Err(e) => return VanishResult::inconclusive(e.to_string(), notes),
        };
        let v = vanishing_of(&scan);
        if !v.is_empty() {
            notes.push(format!("chi = {chi} vanishes"));
            let full = match scan_minors(b, chi.components(), budget, None, false) {
                Ok(s) => s,
                Err(e) => return VanishResult::inconclusive(e.to_string(), notes),
            };
            return found(chi, vanishing_of(&full), full, notes);
        }
    }
    VanishResult::not_found(notes)
}

/// Moduli a projective class survives under.
#[derive(Clone, Debug, PartialEq, Eq)]
struct ClassSurvivors {
    zero: bool,
    primes: BTreeSet<u64>,
}

/// Boxed images of all reduced minors at the integer lift `k`, folded mod `t^p - 1`.
fn boxed_class(b: &AlexanderMatrix, k: &[i64], p: u64, budget: &VanishBudget) -> Result<Option<ClassSurvivors>> {
    let imgs = b.images(k);
    let Some(j) = imgs.iter().position(|a| a.rem_euclid(p as i64) != 0) else {
        return Ok(None);
    };
    let a = imgs[j];
    let ev = b.evaluate(k);
    let sets = b.row_sets(budget.max_minors)?;
    if sets.is_empty() {
        return Ok(Some(ClassSurvivors { zero: true, primes: BTreeSet::new() }));
    }
    let mut g = BigInt::zero();
    let mut all_zero = true;
    for rows in sets {
        let sub: Vec<Vec<UniPoly>> = rows
            .iter()
            .map(|&r| ev[r].iter().enumerate().filter(|(c, _)| *c != j).map(|(_, e)| e.clone()).collect())
            .collect();
        let n = det_uni(&sub)?;
        let reduced = n.exact_div(&UniPoly::one_minus_power(a))?;
        let folded = reduced.fold_mod(p);
        for c in &folded {
            g = g.gcd(c);
        }
        if folded.iter().any(|c| !c.is_zero()) {
            all_zero = false;
        }
        if !all_zero && g.is_one() {
            break;
        }
    }
    if all_zero {
        return Ok(Some(ClassSurvivors { zero: true, primes: BTreeSet::new() }));
    }
    Ok(Some(ClassSurvivors { zero: false, primes: prime_factors(&big_to_biguint(&g)).into_iter().collect() }))
}

/// Projective classes of `(Z/p)^b \ {0}`: first non-zero component equal to 1.
pub fn projective_classes(p: u64, b: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let p = p as i64;
    let total = (p as u64).pow(b as u32);
    for code in 1..total {
        let mut v = vec![0i64; b];
        let mut c = code as i64;
        for x in v.iter_mut().rev() {
            *x = c % p;
            c /= p;
        }
        if v.iter().find(|x| **x != 0) == Some(&1) {
            out.push(v);
        }
    }
    out
}

fn class_key(v: &[i64], p: u64) -> Vec<i64> {
    let p = p as i64;
    let r: Vec<i64> = v.iter().map(|x| x.rem_euclid(p)).collect();
    let Some(&lead) = r.iter().find(|x| **x != 0) else {
        return r;
    };
    // Multiply by the inverse of the leading entry.
    let inv = (1..p).find(|i| (i * lead) % p == 1).expect("p is prime");
    r.iter().map(|x| (x * inv) % p).collect()
}

/// `b ≥ 3`: box every minor modulo small primes, then verify candidates consistent with all boxes.
pub fn bettihigh_test(b: &AlexanderMatrix, budget: &VanishBudget) -> VanishResult {
    let mut notes = Vec::new();
    let rank = b.b();
    if rank < 3 {
        return VanishResult::inconclusive("bettihigh_test needs rank at least 3".into(), notes);
    }
    let mut tables: Vec<(u64, BTreeMap<Vec<i64>, ClassSurvivors>)> = Vec::new();
    for &p in &budget.box_primes {
        let mut surv = BTreeMap::new();
        for k in projective_classes(p, rank) {
            if budget.expired() {
                return VanishResult::inconclusive("time budget exhausted while boxing".into(), notes);
            }
            match boxed_class(b, &k, p, budget) {
                Ok(Some(s)) if s.zero || !s.primes.is_empty() => {
                    surv.insert(k, s);
                }
                Ok(_) => {}
                Err(e) => return VanishResult::inconclusive(e.to_string(), notes),
            }
        }
        notes.push(format!("boxing mod {p}: {} surviving classes", surv.len()));
        if surv.is_empty() {
            notes.push(format!("no class survives boxing mod {p}"));
            return VanishResult::not_found(notes);
        }
        tables.push((p, surv));
    }
    // Enumerate primitive vectors shell by shell and keep those consistent with every box.
    let mut examined: u64 = 0;
    let mut verified = 0usize;
    for shell in 1..=budget.component_bound {
        let side = 2 * shell + 1;
        let total = (side as u64).saturating_pow(rank as u32);
        for code in 0..total {
            let mut v = vec![0i64; rank];
            let mut c = code;
            for x in v.iter_mut().rev() {
                *x = (c % side as u64) as i64 - shell;
                c /= side as u64;
            }
            if v.iter().map(|x| x.abs()).max() != Some(shell) {
                continue;
            }
            // One representative per sign: first non-zero component positive.
            if v.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
                continue;
            }
            examined += 1;
            if examined > budget.max_enumeration {
                return VanishResult::inconclusive("candidate enumeration budget exhausted".into(), notes);
            }
            if v.iter().fold(0i64, |g, x| g.gcd(x)) != 1 {
                continue;
            }
            let mut zero_ok = true;
            let mut primes: Option<BTreeSet<u64>> = None;
            let mut consistent = true;
            for (p, surv) in &tables {
                let Some(s) = surv.get(&class_key(&v, *p)) else {
                    consistent = false;
                    break;
                };
                if !s.zero {
                    zero_ok = false;
                    primes = Some(match primes {
                        None => s.primes.clone(),
                        Some(prev) => prev.intersection(&s.primes).copied().collect(),
                    });
                }
            }
            if !consistent || (!zero_ok && primes.as_ref().is_some_and(BTreeSet::is_empty)) {
                continue;
            }
            if budget.expired() {
                return VanishResult::inconclusive("time budget exhausted".into(), notes);
            }
            verified += 1;
            if verified > budget.max_candidates {
                return VanishResult::inconclusive("candidate budget exhausted".into(), notes);
            }
            let chi = ChiVector::new(v).expect("primitive");
            let scan = match scan_minors(b, chi.components(), budget, None, true) {
                Ok(s) => s,
                Err(e) => return VanishResult::inconclusive(e.to_string(), notes),
            };
            if !vanishing_of(&scan).is_empty() {
                let full = match scan_minors(b, chi.components(), budget, None, false) {
                    Ok(s) => s,
                    Err(e) => return VanishResult::inconclusive(e.to_string(), notes),
                };
                notes.push(format!("chi = {chi} vanishes after {verified} verifications"));
                return found(chi, vanishing_of(&full), full, notes);
            }
        }
    }
    VanishResult::inconclusive(format!("no candidate within component bound {}", budget.component_bound), notes)
}

/// Moduli still possible after the cyclic-cover rank tests. `primes == None` means
/// every prime not listed in `excluded`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusFilter {
    pub zero: bool,
    pub primes: Option<BTreeSet<u64>>,
    pub notes: Vec<String>,
}

impl ModulusFilter {
    pub fn everything() -> Self {
        ModulusFilter { zero: true, primes: None, notes: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        !self.zero && self.primes.as_ref().is_some_and(BTreeSet::is_empty)
    }

    pub fn allows(&self, modulus: u64) -> bool {
        if modulus == 0 {
            self.zero
        } else {
            self.primes.as_ref().is_none_or(|s| s.contains(&modulus))
        }
    }
}

impl fmt::Display for ModulusFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = if self.zero { "0" } else { "" };
        match &self.primes {
            None => write!(f, "{{{z}{}all primes}}", if self.zero { ", " } else { "" }),
            Some(s) => {
                let mut parts: Vec<String> = Vec::new();
                if self.zero {
                    parts.push("0".into());
                }
                parts.extend(s.iter().map(|p| p.to_string()));
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

/// Coset table of `G'G^q`: the kernel of `G → (Z/q)^b` through the free abelianisation.
pub fn cyclic_cover_table(alpha: &[Vec<i64>], q: u64) -> Result<CosetTable> {
    let b = alpha.first().map_or(0, Vec::len);
    let size = (q as usize).pow(b as u32);
    let encode = |v: &[i64]| v.iter().fold(0usize, |acc, x| acc * q as usize + x.rem_euclid(q as i64) as usize);
    let decode = |mut c: usize| {
        let mut v = vec![0i64; b];
        for x in v.iter_mut().rev() {
            *x = (c % q as usize) as i64;
            c /= q as usize;
        }
        v
    };
    let perms: Vec<Vec<u32>> = alpha
        .iter()
        .map(|img| {
            (0..size)
                .map(|c| {
                    let v: Vec<i64> = decode(c).iter().zip(img).map(|(a, b)| a + b).collect();
                    encode(&v) as u32
                })
                .collect()
        })
        .collect();
    CosetTable::from_permutations(&perms)
}

/// Elimination on a cover's relation matrix may grow to this multiple of its starting size.
const COVER_FILL_FACTOR: usize = 4;

/// Rank pre-filter using the subgroups `G'G^q` for primes `q` coprime to the torsion.
pub fn cyclic_cover_prefilter(p: &GroupPresentation, q_list: &[u64], max_index: usize) -> Result<ModulusFilter> {
    let fa = free_abelianisation(p);
    let b = fa.invariants.rank;
    if b < 2 {
        return Err(Error::Precondition("pre-filter needs first Betti number at least 2".into()));
    }
    let torsion = fa.invariants.torsion_order();
    let mut filter = ModulusFilter::everything();
    for &q in q_list {
        if !crate::lattice::is_prime(q) || (&torsion % BigUint::from(q)).is_zero() {
            filter.notes.push(format!("q = {q} skipped (not prime or divides the torsion order)"));
            continue;
        }
        let index = (q as u128).pow(b as u32);
        if index > max_index as u128 {
            filter.notes.push(format!("q = {q} skipped (index {index} over budget)"));
            continue;
        }
        let table = cyclic_cover_table(&fa.images, q)?;
        let (rows, n_cover) = subgroup_relation_matrix(p, &table);
        let initial: usize = rows.iter().map(|r| r.iter().filter(|v| **v != 0).count()).sum();
        let Some(inv) = invariants_within(&rows, n_cover, COVER_FILL_FACTOR * initial.max(1)) else {
            filter.notes.push(format!("q = {q} skipped (index {index}, abelianisation over the fill-in budget)"));
            continue;
        };
        filter.notes.push(format!("q = {q}: index {index}, invariants {}", inv.aq_list()));
        let qq = q as usize;
        if inv.rank > qq {
            continue;
        }
        // Only 0 (never), q itself, and primes with enough torsion survive this q.
        let mut allowed: BTreeSet<u64> = BTreeSet::new();
        allowed.insert(q);
        for d in &inv.torsion {
            for r in prime_factors(d) {
                if inv.p_rank(r) > qq {
                    allowed.insert(r);
                }
            }
        }
        filter.zero = false;
        filter.primes = Some(match filter.primes.take() {
            None => allowed,
            Some(prev) => prev.intersection(&allowed).copied().collect(),
        });
        if filter.is_empty() {
            break;
        }
    }
    Ok(filter)
}

/// Dispatches on the first Betti number.
pub fn vanish_test(b: &AlexanderMatrix, budget: &VanishBudget) -> VanishResult {
    match b.b() {
        1 => betti1_test(b, budget),
        2 => betti2_test(b, budget),
        _ => bettihigh_test(b, budget),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(text: &str) -> AlexanderMatrix {
        AlexanderMatrix::new(&GroupPresentation::parse(text).unwrap()).unwrap()
    }

    fn chi(v: &[i64]) -> ChiVector {
        ChiVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn baumslag_solitar_two_four() {
        let b = matrix("gens a t\nrel ta2TA4");
        let r = betti1_test(&b, &VanishBudget::default());
        match &r.outcome {
            Outcome::Found { modulus, .. } => assert_eq!(*modulus, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(verify_chi(&b, &chi(&[1])).unwrap(), Vanishing::Primes(vec![2]));
    }

    #[test]
    fn baumslag_solitar_coprime() {
        let b = matrix("gens a t\nrel ta2TA3");
        assert_eq!(betti1_test(&b, &VanishBudget::default()).outcome, Outcome::NotFound);
    }

    #[test]
    fn abelianisation_z_rejected() {
        let b = matrix("gens a t\nrel taTA2");
        let r = betti1_test(&b, &VanishBudget::default());
        assert_eq!(r.outcome, Outcome::NotFound);
        assert!(r.notes[0].contains("reject"));
    }

    #[test]
    fn betti2_examples() {
        let b = matrix("gens x y\nrel xy2XY2");
        let r = betti2_test(&b, &VanishBudget::default());
        match &r.outcome {
            Outcome::Found { chi, modulus, .. } => {
                assert_eq!(*modulus, 2);
                assert!(verify_chi(&b, chi).unwrap().contains(2));
            }
            other => panic!("unexpected {other:?}"),
        }
        let z2 = matrix("gens x y\nrel xyXY");
        assert_eq!(betti2_test(&z2, &VanishBudget::default()).outcome, Outcome::NotFound);
        assert!(verify_chi(&z2, &chi(&[1, 1])).unwrap().is_empty());
    }

    #[test]
    fn free_group_of_rank_two_vanishes() {
        let b = matrix("gens x y");
        assert_eq!(verify_chi(&b, &chi(&[1, 0])).unwrap(), Vanishing::Zero);
    }

    #[test]
    fn projective_class_counts() {
        assert_eq!(projective_classes(2, 3).len(), 7);
        assert_eq!(projective_classes(3, 2).len(), 4);
        assert_eq!(projective_classes(5, 4).len(), 156);
    }

    #[test]
    fn prefilter_examples() {
        let z2 = GroupPresentation::parse("gens x y\nrel xyXY").unwrap();
        let f = cyclic_cover_prefilter(&z2, &[2], 100).unwrap();
        assert!(!f.zero);
        let f2 = GroupPresentation::parse("gens x y").unwrap();
        let f = cyclic_cover_prefilter(&f2, &[2, 3], 100).unwrap();
        assert_eq!(f, ModulusFilter { zero: true, primes: None, notes: f.notes.clone() });
    }
}
