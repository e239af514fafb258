//! Reidemeister–Schreier rewriting and Tietze simplification.

use std::collections::HashMap;

use crate::coset::CosetTable;
use crate::error::{Error, Result};
use crate::lattice::{invariants_of_relations, AbelianInvariants};
use crate::presentation::GroupPresentation;
use crate::word::{Syllable, Word};

/// Caps for [`simplify`].
#[derive(Clone, Copy, Debug)]
pub struct SimplifyBudget {
    pub max_relator_length: usize,
    pub max_rounds: usize,
}

impl Default for SimplifyBudget {
    fn default() -> Self {
        SimplifyBudget { max_relator_length: 10_000, max_rounds: 100 }
    }
}

/// Rewritten presentation and whether simplification stopped on a cap.
#[derive(Clone, Debug)]
pub struct Rewritten {
    pub presentation: GroupPresentation,
    pub budget_hit: bool,
}

/// Schreier generator numbering: `gen_of[c * n + g]` for non-tree edges.
fn schreier_numbering(table: &CosetTable) -> Vec<Option<usize>> {
    let n = table.n_gens();
    let mut gen_of = vec![None; table.index() * n];
    for (k, (c, g)) in table.schreier_edges().into_iter().enumerate() {
        gen_of[c * n + g] = Some(k);
    }
    gen_of
}

/// Raw Reidemeister–Schreier presentation: one generator per non-tree edge and one
/// relator per (coset, relator) pair, trivial ones included.
pub fn reidemeister_schreier(parent: &GroupPresentation, table: &CosetTable) -> Result<GroupPresentation> {
    if parent.n_gens() != table.n_gens() {
        return Err(Error::Precondition("coset table does not match the presentation".into()));
    }
    let n = parent.n_gens();
    let gen_of = schreier_numbering(table);
    let n_sub = table.index() * (n.max(1) - 1) + 1;
    let n_sub = if n == 0 { 0 } else { n_sub };
    let mut rels = Vec::with_capacity(table.index() * parent.n_rels());
    for c in 0..table.index() {
        for r in parent.relators() {
            let mut out: Vec<Syllable> = Vec::new();
            let mut e = c;
            for s in r.syllables() {
                for _ in 0..s.exp.unsigned_abs() {
                    if s.exp > 0 {
                        if let Some(k) = gen_of[e * n + s.gen] {
                            out.push(Syllable::new(k, 1));
                        }
                        e = table.get(e, 2 * s.gen);
                    } else {
                        e = table.get(e, 2 * s.gen + 1);
                        if let Some(k) = gen_of[e * n + s.gen] {
                            out.push(Syllable::new(k, -1));
                        }
                    }
                }
            }
            if e != c {
                return Err(Error::Certificate(format!("relator does not close at coset {c}")));
            }
            rels.push(Word::from_syllables(out).free_reduce());
        }
    }
    GroupPresentation::with_default_names(n_sub.max(1), rels)
}

/// Abelian invariants of the subgroup computed straight from the table, without building words.
pub fn subgroup_abelian_invariants(parent: &GroupPresentation, table: &CosetTable) -> AbelianInvariants {
    let (rows, n_sub) = subgroup_relation_matrix(parent, table);
    invariants_of_relations(&rows, n_sub)
}

/// Abelianised Reidemeister-Schreier relations of the subgroup, over its Schreier generators.
pub fn subgroup_relation_matrix(parent: &GroupPresentation, table: &CosetTable) -> (Vec<Vec<i64>>, usize) {
    let n = parent.n_gens();
    let gen_of = schreier_numbering(table);
    let n_sub = if n == 0 { 0 } else { table.index() * (n - 1) + 1 };
    let mut rows = Vec::new();
    for c in 0..table.index() {
        for r in parent.relators() {
            let mut row = vec![0i64; n_sub];
            let mut e = c;
            for s in r.syllables() {
                for _ in 0..s.exp.unsigned_abs() {
                    if s.exp > 0 {
                        if let Some(k) = gen_of[e * n + s.gen] {
                            row[k] += 1;
                        }
                        e = table.get(e, 2 * s.gen);
                    } else {
                        e = table.get(e, 2 * s.gen + 1);
                        if let Some(k) = gen_of[e * n + s.gen] {
                            row[k] -= 1;
                        }
                    }
                }
            }
            if row.iter().any(|v| *v != 0) {
                rows.push(row);
            }
        }
    }
    (rows, n_sub)
}

/// Rewrites and simplifies. The output is deterministic for a given input.
pub fn rewrite_subgroup(parent: &GroupPresentation, table: &CosetTable, budget: SimplifyBudget) -> Result<Rewritten> {
    let raw = reidemeister_schreier(parent, table)?;
    Ok(simplify(&raw, budget))
}

type Rel = Vec<Syllable>;

fn reduce(w: &Word) -> Rel {
    w.cyclic_reduce().into_syllables()
}

fn rel_len(r: &Rel) -> usize {
    r.iter().map(|s| s.exp.unsigned_abs() as usize).sum()
}

/// Occurrence count of each generator, as (letters, syllables).
fn occurrences(rels: &[Rel], n: usize) -> Vec<usize> {
    let mut occ = vec![0usize; n];
    for r in rels {
        for s in r {
            occ[s.gen] += s.exp.unsigned_abs() as usize;
        }
    }
    occ
}

/// Canonical key of a relator up to cyclic permutation and inversion.
fn cyclic_key(r: &Rel) -> Vec<(usize, i64)> {
    let w = Word::from_syllables(r.clone());
    let mut best: Option<Vec<(usize, i64)>> = None;
    for cand in [w.clone(), w.inverse()] {
        let s = cand.into_syllables();
        for i in 0..s.len().max(1) {
            let rot: Vec<(usize, i64)> = s[i..].iter().chain(s[..i].iter()).map(|x| (x.gen, x.exp)).collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

fn total_len(rels: &[Rel]) -> usize {
    rels.iter().map(rel_len).sum()
}

/// Eliminations may not push the total relator length beyond this percentage
/// of the smallest total seen so far.
const EXPAND_PERCENT: usize = 300;

fn tidy(rels: &mut Vec<Rel>) {
    let mut seen = std::collections::HashSet::new();
    rels.retain(|r| !r.is_empty() && seen.insert(cyclic_key(r)));
}

/// Tietze simplification: eliminate generators appearing exactly once in a relator,
/// then shorten relators by substituting long common subwords, within the caps.
pub fn simplify(p: &GroupPresentation, budget: SimplifyBudget) -> Rewritten {
    let mut n = p.n_gens();
    let mut rels: Vec<Rel> = p.relators().iter().map(reduce).collect();
    tidy(&mut rels);
    let mut budget_hit = false;
    let mut rounds = 0;
    let mut min_total = total_len(&rels);
    loop {
        if rounds >= budget.max_rounds {
            budget_hit = true;
            break;
        }
        rounds += 1;
        let mut changed = false;
        // Eliminations, cheapest relator first.
        loop {
            let cap = (min_total * EXPAND_PERCENT / 100).max(min_total + 8);
            let Some((ri, g)) = pick_elimination(&rels, n, budget.max_relator_length, cap) else {
                break;
            };
            eliminate(&mut rels, ri, g);
            // Renumber generators above g.
            for r in rels.iter_mut() {
                for s in r.iter_mut() {
                    if s.gen > g {
                        s.gen -= 1;
                    }
                }
            }
            n -= 1;
            tidy(&mut rels);
            min_total = min_total.min(total_len(&rels));
            changed = true;
        }
        if shorten_pass(&mut rels) {
            tidy(&mut rels);
            min_total = min_total.min(total_len(&rels));
            changed = true;
        }
        if !changed {
            break;
        }
    }
    if rels.iter().any(|r| rel_len(r) > budget.max_relator_length) {
        budget_hit = true;
    }
    // A group always keeps at least one generator in this representation.
    let n_out = n.max(1);
    rels.sort_by(|a, b| rel_len(a).cmp(&rel_len(b)).then_with(|| cyclic_key(a).cmp(&cyclic_key(b))));
    let words = rels.into_iter().map(Word::from_syllables).collect();
    let presentation = GroupPresentation::with_default_names(n_out, words).expect("generator indices are in range");
    Rewritten { presentation, budget_hit }
}

/// A relator in which some generator occurs exactly once, choosing the shortest
/// relator and then the generator with the fewest total occurrences elsewhere.
/// `total_cap` bounds the predicted total length afterwards.
fn pick_elimination(rels: &[Rel], n: usize, cap: usize, total_cap: usize) -> Option<(usize, usize)> {
    // The last generator is never eliminated, so the trivial group stays `<x | x>`.
    if n <= 1 {
        return None;
    }
    let occ = occurrences(rels, n);
    let total = total_len(rels);
    let mut best: Option<(usize, usize, usize, usize)> = None; // (cost, len, ri, g)
    for (ri, r) in rels.iter().enumerate() {
        let len = rel_len(r);
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for s in r {
            *counts.entry(s.gen).or_insert(0) += s.exp.unsigned_abs() as usize;
        }
        for (&g, &c) in &counts {
            if c != 1 {
                continue;
            }
            // Substituting a word of length len-1 for each other occurrence.
            let others = occ[g] - 1;
            let growth = others * (len - 1);
            // Each other occurrence becomes a word of length len - 1; relator `ri` disappears.
            let predicted = (total + others * (len - 1)).saturating_sub(len + others);
            if predicted > total_cap && predicted > total {
                continue;
            }
            let max_other = rels
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != ri)
                .map(|(_, s)| rel_len(s) + s.iter().filter(|y| y.gen == g).map(|y| y.exp.unsigned_abs() as usize).sum::<usize>() * (len.saturating_sub(2)))
                .max()
                .unwrap_or(0);
            if max_other > cap {
                continue;
            }
            let key = (growth, len, ri, g);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
    }
    best.map(|(_, _, ri, g)| (ri, g))
}

/// Solves relator `ri` for `g` and substitutes into the others; removes the relator.
fn eliminate(rels: &mut Vec<Rel>, ri: usize, g: usize) {
    let r = rels.remove(ri);
    let pos = r.iter().position(|s| s.gen == g).expect("generator occurs");
    let e = r[pos].exp;
    // r = u g^e v  =>  g = (v u)^-1 if e = 1, g = v u if e = -1
    let u = Word::from_syllables(r[..pos].to_vec());
    let v = Word::from_syllables(r[pos + 1..].to_vec());
    let vu = &v * &u;
    let image = if e == 1 { vu.inverse() } else { vu };
    let n = rels.iter().flat_map(|r| r.iter().map(|s| s.gen)).chain(r.iter().map(|s| s.gen)).max().unwrap_or(0) + 1;
    let images: Vec<Word> = (0..n).map(|k| if k == g { image.clone() } else { Word::generator(k) }).collect();
    for other in rels.iter_mut() {
        if other.iter().any(|s| s.gen == g) {
            *other = reduce(&Word::from_syllables(std::mem::take(other)).substitute(&images));
        }
    }
}

fn letters_of(r: &Rel) -> Vec<(usize, i8)> {
    let mut out = Vec::with_capacity(rel_len(r));
    for s in r {
        let sign = if s.exp > 0 { 1 } else { -1 };
        for _ in 0..s.exp.unsigned_abs() {
            out.push((s.gen, sign));
        }
    }
    out
}

fn from_letters(l: &[(usize, i8)]) -> Word {
    Word::from_syllables(l.iter().map(|&(g, e)| Syllable::new(g, e as i64)).collect()).free_reduce()
}

fn find_sub(hay: &[(usize, i8)], needle: &[(usize, i8)]) -> Option<usize> {
    if needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len()).find(|&i| hay[i..i + needle.len()] == *needle)
}

/// One pass of length-reducing substitutions: if more than half of a cyclic
/// conjugate of `r^±1` appears in a longer relator `s`, replace it by the
/// inverse of the rest. Returns true when something changed.
fn shorten_pass(rels: &mut [Rel]) -> bool {
    const MAX_WORK: usize = 2_000_000;
    let total: usize = rels.iter().map(rel_len).sum();
    if total.saturating_mul(total) > MAX_WORK * 50 {
        return false;
    }
    let mut changed = false;
    let mut order: Vec<usize> = (0..rels.len()).collect();
    order.sort_by_key(|&i| (rel_len(&rels[i]), i));
    for &ri in &order {
        let r = rels[ri].clone();
        let rl = rel_len(&r);
        if rl == 0 {
            continue;
        }
        let rw = Word::from_syllables(r.clone());
        let forms = [letters_of(&r), letters_of(&rw.inverse().into_syllables())];
        for si in 0..rels.len() {
            if si == ri || rel_len(&rels[si]) < rl {
                continue;
            }
            loop {
                let s_letters = letters_of(&rels[si]);
                // Double s to catch occurrences across the cyclic seam.
                let doubled: Vec<(usize, i8)> = s_letters.iter().chain(s_letters.iter()).copied().collect();
                let sl = s_letters.len();
                let mut hit: Option<(usize, usize, Vec<(usize, i8)>)> = None;
                'search: for form in &forms {
                    for rot in 0..rl {
                        let cyc: Vec<(usize, i8)> = form[rot..].iter().chain(form[..rot].iter()).copied().collect();
                        // Longest prefix of cyc longer than half occurring in s.
                        for k in (rl / 2 + 1..=rl).rev() {
                            if k > sl {
                                continue;
                            }
                            if let Some(pos) = find_sub(&doubled[..sl + k - 1], &cyc[..k]) {
                                // Replace cyc[..k] by (cyc[k..])^-1 which has length rl - k < k.
                                let rest = from_letters(&cyc[k..]).inverse();
                                hit = Some((pos, k, letters_of(&rest.into_syllables())));
                                break 'search;
                            }
                        }
                    }
                }
                let Some((pos, k, repl)) = hit else { break };
                // Rotate s so the occurrence starts at 0, then splice.
                let rotated: Vec<(usize, i8)> = doubled[pos..pos + sl].to_vec();
                let mut new_letters = repl;
                new_letters.extend_from_slice(&rotated[k..]);
                let new_rel = reduce(&from_letters(&new_letters));
                if rel_len(&new_rel) >= sl {
                    break;
                }
                rels[si] = new_rel;
                changed = true;
            }
        }
    }
    changed
}
