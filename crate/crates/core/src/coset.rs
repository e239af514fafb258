//! Coset tables: Todd–Coxeter enumeration and the low-index subgroup search.
//!
//! Columns are indexed `2g` for generator `g` and `2g + 1` for its inverse.

use std::cmp::Ordering;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::GroupPresentation;
use crate::word::{Letter, Word};

const NONE: u32 = u32::MAX;

#[inline]
fn col_of(l: Letter) -> usize {
    2 * l.gen + usize::from(l.inverse)
}

fn letter_of(col: usize) -> Letter {
    Letter { gen: col / 2, inverse: col % 2 == 1 }
}

fn word_cols(w: &Word) -> Vec<usize> {
    w.letters().map(col_of).collect()
}

/// Complete coset table in standard form. Coset 0 is the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetTable {
    n_gens: usize,
    index: usize,
    /// Row-major: entry `c * 2n + col`.
    entries: Vec<u32>,
}

impl CosetTable {
    /// Builds a table from explicit rows (`rows[c][col]`), checking completeness and standard form.
    pub fn from_rows(n_gens: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let index = rows.len();
        let mut entries = Vec::with_capacity(index * 2 * n_gens);
        for r in rows {
            if r.len() != 2 * n_gens {
                return Err(Error::Certificate("coset table row has the wrong width".into()));
            }
            entries.extend_from_slice(r);
        }
        let t = CosetTable { n_gens, index, entries };
        t.check_permutations()?;
        if !t.is_standard() {
            return Err(Error::Certificate("coset table is not in standard form".into()));
        }
        Ok(t)
    }

    /// Table of the permutation action given by generator images (`perms[g][c] = c·g`),
    /// renumbered into standard form from coset 0.
    pub fn from_permutations(perms: &[Vec<u32>]) -> Result<Self> {
        let n_gens = perms.len();
        let index = perms.first().map_or(1, Vec::len);
        let mut entries = vec![NONE; index * 2 * n_gens];
        for (g, p) in perms.iter().enumerate() {
            if p.len() != index {
                return Err(Error::Precondition("permutations of different degrees".into()));
            }
            for (c, &d) in p.iter().enumerate() {
                if d as usize >= index {
                    return Err(Error::Precondition("permutation image out of range".into()));
                }
                entries[c * 2 * n_gens + 2 * g] = d;
                if entries[d as usize * 2 * n_gens + 2 * g + 1] != NONE {
                    return Err(Error::Precondition("generator image is not a permutation".into()));
                }
                entries[d as usize * 2 * n_gens + 2 * g + 1] = c as u32;
            }
        }
        let raw = CosetTable { n_gens, index, entries };
        raw.rebased(0).ok_or_else(|| Error::Precondition("action is not transitive".into()))
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn width(&self) -> usize {
        2 * self.n_gens
    }

    #[inline]
    pub fn get(&self, coset: usize, col: usize) -> usize {
        self.entries[coset * 2 * self.n_gens + col] as usize
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.width().max(1)).map(<[u32]>::to_vec).collect()
    }

    /// Coset reached from `coset` by reading `w`.
    pub fn trace(&self, coset: usize, w: &Word) -> usize {
        w.letters().fold(coset, |c, l| self.get(c, col_of(l)))
    }

    fn check_permutations(&self) -> Result<()> {
        let w = self.width();
        for c in 0..self.index {
            for col in 0..w {
                let d = self.entries[c * w + col];
                if d == NONE || d as usize >= self.index {
                    return Err(Error::Certificate(format!("coset table entry ({c}, {col}) is undefined")));
                }
                if self.entries[d as usize * w + (col ^ 1)] as usize != c {
                    return Err(Error::Certificate(format!("coset table column {col} is not a permutation")));
                }
            }
        }
        Ok(())
    }

    fn is_standard(&self) -> bool {
        match self.rebased(0) {
            Some(t) => t.entries == self.entries,
            None => false,
        }
    }

    /// Renumbers with `base` as coset 0, in standard (first appearance) order.
    /// `None` when the action is not transitive.
    pub fn rebased(&self, base: usize) -> Option<CosetTable> {
        let w = self.width();
        let mut new_of = vec![NONE; self.index];
        let mut order = vec![base];
        new_of[base] = 0;
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            for col in 0..w {
                let d = self.entries[c * w + col] as usize;
                if new_of[d] == NONE {
                    new_of[d] = order.len() as u32;
                    order.push(d);
                }
            }
            i += 1;
        }
        if order.len() != self.index {
            return None;
        }
        let mut entries = vec![0u32; self.entries.len()];
        for (newc, &oldc) in order.iter().enumerate() {
            for col in 0..w {
                entries[newc * w + col] = new_of[self.entries[oldc * w + col] as usize];
            }
        }
        Some(CosetTable { n_gens: self.n_gens, index: self.index, entries })
    }

    /// Full audit: permutation columns, standard form, and every relator closing at every coset.
    pub fn audit(&self, p: &GroupPresentation) -> Result<()> {
        if p.n_gens() != self.n_gens {
            return Err(Error::Certificate("coset table generator count does not match the presentation".into()));
        }
        self.check_permutations()?;
        if !self.is_standard() {
            return Err(Error::Certificate("coset table is not in standard form".into()));
        }
        for (k, r) in p.relators().iter().enumerate() {
            for c in 0..self.index {
                if self.trace(c, r) != c {
                    return Err(Error::Certificate(format!("relator {k} does not close at coset {c}")));
                }
            }
        }
        Ok(())
    }

    /// True when every conjugate table equals this one.
    pub fn is_normal(&self) -> bool {
        (1..self.index).all(|k| self.rebased(k).is_some_and(|t| t == *self))
    }

    /// Number of distinct conjugates of the subgroup.
    pub fn conjugacy_class_size(&self) -> usize {
        let mut seen: Vec<CosetTable> = Vec::new();
        for k in 0..self.index {
            let t = self.rebased(k).expect("complete tables are transitive");
            if !seen.contains(&t) {
                seen.push(t);
            }
        }
        seen.len()
    }

    /// Canonical representative of the conjugacy class (least rebased table).
    pub fn class_representative(&self) -> CosetTable {
        (0..self.index)
            .map(|k| self.rebased(k).expect("complete tables are transitive"))
            .min()
            .expect("index is positive")
    }

    /// For each coset `c > 0`, the `(coset, column)` entry that first reaches it in scan order.
    pub fn definitions(&self) -> Vec<Option<(usize, usize)>> {
        let w = self.width();
        let mut def = vec![None; self.index];
        let mut seen = vec![false; self.index];
        seen[0] = true;
        for c in 0..self.index {
            for col in 0..w {
                let d = self.get(c, col);
                if !seen[d] {
                    seen[d] = true;
                    def[d] = Some((c, col));
                }
            }
        }
        def
    }

    /// Transversal words: `reps[c]` carries coset 0 to coset `c`.
    pub fn transversal(&self) -> Vec<Word> {
        let defs = self.definitions();
        let mut reps = vec![Word::identity(); self.index];
        for c in 1..self.index {
            let (p, col) = defs[c].expect("every coset other than 0 has a definition");
            // Standard form guarantees p < c.
            reps[c] = &reps[p] * &Word::from_letters([letter_of(col)]);
        }
        reps
    }

    /// Positive edges `(c, g)` outside the spanning tree, in scan order.
    pub fn schreier_edges(&self) -> Vec<(usize, usize)> {
        let defs = self.definitions();
        let mut out = Vec::new();
        for c in 0..self.index {
            for g in 0..self.n_gens {
                let d = self.get(c, 2 * g);
                let tree = defs[d] == Some((c, 2 * g)) || defs[c] == Some((d, 2 * g + 1));
                if !tree {
                    out.push((c, g));
                }
            }
        }
        out
    }

    /// Schreier generators `rep(c) g rep(c·g)^-1` for the non-tree edges.
    pub fn schreier_generators(&self) -> Vec<Word> {
        let reps = self.transversal();
        self.schreier_edges()
            .into_iter()
            .map(|(c, g)| {
                let d = self.get(c, 2 * g);
                &(&reps[c] * &Word::generator(g)) * &reps[d].inverse()
            })
            .collect()
    }
}

/// Subgroup of finite index found by enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupRecord {
    pub table: CosetTable,
    pub schreier_generators: Vec<Word>,
}

impl SubgroupRecord {
    pub fn from_table(table: CosetTable) -> Self {
        let schreier_generators = table.schreier_generators();
        SubgroupRecord { table, schreier_generators }
    }

    pub fn index(&self) -> usize {
        self.table.index()
    }

    pub fn is_normal(&self) -> bool {
        self.table.is_normal()
    }
}

/// Growable table used during enumeration.
struct WorkTable {
    w: usize,
    rows: Vec<u32>,
    parent: Vec<u32>,
}

impl WorkTable {
    fn new(w: usize) -> Self {
        WorkTable { w, rows: vec![NONE; w], parent: vec![0] }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn get(&self, c: usize, x: usize) -> u32 {
        self.rows[c * self.w + x]
    }

    #[inline]
    fn set(&mut self, c: usize, x: usize, d: u32) {
        self.rows[c * self.w + x] = d;
    }

    fn define(&mut self, c: usize, x: usize) -> usize {
        let d = self.len();
        self.rows.extend(std::iter::repeat_n(NONE, self.w));
        self.parent.push(d as u32);
        self.set(c, x, d as u32);
        self.set(d, x ^ 1, c as u32);
        d
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut k = c;
        while self.parent[k] as usize != r {
            let next = self.parent[k] as usize;
            self.parent[k] = r as u32;
            k = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo as u32;
        queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.w {
                let f = self.get(e, x);
                if f == NONE {
                    continue;
                }
                let f = f as usize;
                self.set(f, x ^ 1, NONE);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let te = self.get(e1, x);
                if te != NONE {
                    self.merge(f1, te as usize, &mut queue);
                } else {
                    let tf = self.get(f1, x ^ 1);
                    if tf != NONE {
                        self.merge(e1, tf as usize, &mut queue);
                    } else {
                        self.set(e1, x, f1 as u32);
                        self.set(f1, x ^ 1, e1 as u32);
                    }
                }
            }
        }
    }

    /// HLT scan of `word` at coset `c`, defining cosets to close the gap.
    fn scan_and_fill(&mut self, c: usize, word: &[usize], limit: usize) -> Result<()> {
        if word.is_empty() {
            return Ok(());
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = word.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.get(f, word[i]) != NONE {
                f = self.get(f, word[i]) as usize;
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.get(b, word[j as usize] ^ 1) != NONE {
                b = self.get(b, word[j as usize] ^ 1) as usize;
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.set(f, word[i], b as u32);
                self.set(b, word[i] ^ 1, f as u32);
                return Ok(());
            }
            if self.len() >= limit {
                return Err(Error::CosetLimitExceeded { limit });
            }
            self.define(f, word[i]);
        }
    }
}

/// Todd–Coxeter enumeration of the cosets of `⟨subgroup⟩` (HLT strategy).
pub fn todd_coxeter(p: &GroupPresentation, subgroup: &[Word], limit: usize) -> Result<CosetTable> {
    if limit == 0 {
        return Err(Error::Precondition("coset limit must be at least 1".into()));
    }
    let w = 2 * p.n_gens();
    let rels: Vec<Vec<usize>> = p.relators().iter().map(word_cols).filter(|r| !r.is_empty()).collect();
    let mut t = WorkTable::new(w);
    for h in subgroup {
        let cols = word_cols(&h.free_reduce());
        t.scan_and_fill(0, &cols, limit)?;
    }
    let mut c = 0;
    while c < t.len() {
        if t.live(c) {
            for r in &rels {
                t.scan_and_fill(c, r, limit)?;
                if !t.live(c) {
                    break;
                }
            }
            if t.live(c) {
                for x in 0..w {
                    if t.get(c, x) == NONE {
                        if t.len() >= limit {
                            return Err(Error::CosetLimitExceeded { limit });
                        }
                        t.define(c, x);
                    }
                }
            }
        }
        c += 1;
    }
    // Compact live cosets, then standardise.
    let live: Vec<usize> = (0..t.len()).filter(|&c| t.live(c)).collect();
    let mut new_of = vec![NONE; t.len()];
    for (k, &c) in live.iter().enumerate() {
        new_of[c] = k as u32;
    }
    let mut entries = Vec::with_capacity(live.len() * w);
    for &c in &live {
        for x in 0..w {
            entries.push(new_of[t.get(c, x) as usize]);
        }
    }
    let raw = CosetTable { n_gens: p.n_gens(), index: live.len(), entries };
    Ok(raw.rebased(0).expect("enumerated table is transitive"))
}

/// Options for [`low_index_subgroups`].
#[derive(Clone, Debug)]
pub struct LowIndexOptions {
    pub min_index: usize,
    pub max_index: usize,
    pub normal_only: bool,
    /// Maximum number of search nodes.
    pub node_limit: Option<u64>,
    pub deadline: Option<Instant>,
}

impl LowIndexOptions {
    pub fn new(min_index: usize, max_index: usize) -> Self {
        LowIndexOptions { min_index, max_index, normal_only: false, node_limit: None, deadline: None }
    }

    pub fn normal_only(mut self, yes: bool) -> Self {
        self.normal_only = yes;
        self
    }
}

/// Output of the low-index search. `complete` is false when a budget cut the search short;
/// the records found so far are still valid subgroups.
#[derive(Clone, Debug)]
pub struct LowIndexOutcome {
    pub records: Vec<SubgroupRecord>,
    pub complete: bool,
    pub nodes: u64,
}

struct Search<'a> {
    w: usize,
    max: usize,
    /// Cyclic conjugates of relators and their inverses, grouped by first column.
    words_by_col: Vec<Vec<Vec<usize>>>,
    rels: Vec<Vec<usize>>,
    opts: &'a LowIndexOptions,
    table: Vec<u32>,
    num: usize,
    trail: Vec<usize>,
    found: Vec<CosetTable>,
    nodes: u64,
    aborted: bool,
    n_gens: usize,
}

impl Search<'_> {
    #[inline]
    fn get(&self, c: usize, x: usize) -> u32 {
        self.table[c * self.w + x]
    }

    #[inline]
    fn set(&mut self, c: usize, x: usize, d: u32) {
        let k = c * self.w + x;
        self.table[k] = d;
        self.trail.push(k);
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let k = self.trail.pop().unwrap();
            self.table[k] = NONE;
        }
    }

    /// Scans `word` at `c` without defining cosets; fills a single gap.
    /// Returns false on a contradiction.
    fn scan_deduce(&mut self, c: usize, word_idx: (usize, usize), stack: &mut Vec<(usize, usize)>) -> bool {
        let (col0, k) = word_idx;
        let len = self.words_by_col[col0][k].len();
        let mut f = c;
        let mut i = 0;
        while i < len {
            let x = self.words_by_col[col0][k][i];
            let d = self.get(f, x);
            if d == NONE {
                break;
            }
            f = d as usize;
            i += 1;
        }
        if i == len {
            return f == c;
        }
        let mut b = c;
        let mut j = len - 1;
        loop {
            let x = self.words_by_col[col0][k][j];
            let d = self.get(b, x ^ 1);
            if d == NONE {
                break;
            }
            b = d as usize;
            if j == i {
                // Everything traced from both ends.
                return f == b;
            }
            j -= 1;
        }
        if j == i {
            let x = self.words_by_col[col0][k][i];
            // Both ends undefined here by construction.
            if self.get(b, x ^ 1) != NONE || self.get(f, x) != NONE {
                return false;
            }
            self.set(f, x, b as u32);
            self.set(b, x ^ 1, f as u32);
            stack.push((f, x));
        }
        true
    }

    fn process(&mut self, mut stack: Vec<(usize, usize)>) -> bool {
        while let Some((c, x)) = stack.pop() {
            let d = self.get(c, x) as usize;
            for k in 0..self.words_by_col[x].len() {
                if !self.scan_deduce(c, (x, k), &mut stack) {
                    return false;
                }
            }
            let xi = x ^ 1;
            for k in 0..self.words_by_col[xi].len() {
                if !self.scan_deduce(d, (xi, k), &mut stack) {
                    return false;
                }
            }
        }
        true
    }

    /// Compares the table renumbered from `base` against the current one over the
    /// prefix where both are defined.
    fn compare_rebased(&self, base: usize) -> Ordering {
        let w = self.w;
        let mut new_of = vec![NONE; self.num];
        let mut order = Vec::with_capacity(self.num);
        new_of[base] = 0;
        order.push(base);
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            for col in 0..w {
                let d = self.get(c, col);
                if d == NONE {
                    return Ordering::Equal;
                }
                let nd = if new_of[d as usize] == NONE {
                    new_of[d as usize] = order.len() as u32;
                    order.push(d as usize);
                    order.len() as u32 - 1
                } else {
                    new_of[d as usize]
                };
                let orig = self.get(i, col);
                if orig == NONE {
                    return Ordering::Equal;
                }
                match nd.cmp(&orig) {
                    Ordering::Equal => {}
                    other => return other,
                }
            }
            i += 1;
        }
        Ordering::Equal
    }

    fn acceptable(&self) -> bool {
        for k in 1..self.num {
            match self.compare_rebased(k) {
                Ordering::Less => return false,
                Ordering::Greater if self.opts.normal_only => return false,
                _ => {}
            }
        }
        true
    }

    fn out_of_budget(&mut self) -> bool {
        if self.aborted {
            return true;
        }
        if let Some(l) = self.opts.node_limit {
            if self.nodes >= l {
                self.aborted = true;
            }
        }
        if self.nodes % 1024 == 0 {
            if let Some(d) = self.opts.deadline {
                if Instant::now() >= d {
                    self.aborted = true;
                }
            }
        }
        self.aborted
    }

    fn first_gap(&self) -> Option<(usize, usize)> {
        for c in 0..self.num {
            for x in 0..self.w {
                if self.get(c, x) == NONE {
                    return Some((c, x));
                }
            }
        }
        None
    }

    fn record_leaf(&mut self) {
        if self.num < self.opts.min_index {
            return;
        }
        let entries = self.table[..self.num * self.w].to_vec();
        let t = CosetTable { n_gens: self.n_gens, index: self.num, entries };
        // Deduction scans cover every relator position, but audit the leaf anyway.
        let closes = self.rels.iter().all(|r| {
            (0..t.index).all(|c| r.iter().fold(c, |e, &x| t.get(e, x)) == c)
        });
        debug_assert!(closes, "search produced a table that violates a relator");
        if !closes {
            return;
        }
        if self.opts.normal_only && !t.is_normal() {
            return;
        }
        self.found.push(t);
    }

    fn descend(&mut self) {
        self.nodes += 1;
        if self.out_of_budget() {
            return;
        }
        let Some((c, x)) = self.first_gap() else {
            self.record_leaf();
            return;
        };
        let xi = x ^ 1;
        for d in 0..=self.num {
            if d == self.num && self.num >= self.max {
                break;
            }
            if d < self.num && self.get(d, xi) != NONE {
                continue;
            }
            let mark = self.trail.len();
            let saved_num = self.num;
            if d == self.num {
                self.num += 1;
            }
            self.set(c, x, d as u32);
            self.set(d, xi, c as u32);
            if self.process(vec![(c, x)]) && self.acceptable() {
                self.descend();
            }
            self.undo_to(mark);
            self.num = saved_num;
            if self.aborted {
                return;
            }
        }
    }
}

/// All subgroups with index in `[min_index, max_index]`, one per conjugacy class
/// (or every normal subgroup when `normal_only`), sorted by index then table.
pub fn low_index_subgroups(p: &GroupPresentation, opts: &LowIndexOptions) -> Result<LowIndexOutcome> {
    if opts.min_index == 0 || opts.min_index > opts.max_index {
        return Err(Error::Precondition("need 1 <= min-index <= max-index".into()));
    }
    let w = 2 * p.n_gens();
    let rels: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .map(|r| word_cols(&r.cyclic_reduce()))
        .filter(|r| !r.is_empty())
        .collect();
    let mut words_by_col: Vec<Vec<Vec<usize>>> = vec![Vec::new(); w];
    for r in p.relators() {
        let r = r.cyclic_reduce();
        if r.is_identity() {
            continue;
        }
        for word in [r.clone(), r.inverse()] {
            for rot in word.rotations() {
                let cols: Vec<usize> = rot.into_iter().map(col_of).collect();
                let bucket = &mut words_by_col[cols[0]];
                if !bucket.contains(&cols) {
                    bucket.push(cols);
                }
            }
        }
    }
    let mut s = Search {
        w,
        max: opts.max_index,
        words_by_col,
        rels,
        opts,
        table: vec![NONE; opts.max_index * w],
        num: 1,
        trail: Vec::new(),
        found: Vec::new(),
        nodes: 0,
        aborted: false,
        n_gens: p.n_gens(),
    };
    if w == 0 {
        // No generators: only the trivial group.
        s.found.push(CosetTable { n_gens: 0, index: 1, entries: Vec::new() });
    } else {
        s.descend();
    }
    let mut tables = s.found;
    tables.sort_by(|a, b| a.index.cmp(&b.index).then_with(|| a.entries.cmp(&b.entries)));
    tables.dedup();
    let records = tables.into_iter().map(SubgroupRecord::from_table).collect();
    Ok(LowIndexOutcome { records, complete: !s.aborted, nodes: s.nodes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(text: &str) -> GroupPresentation {
        GroupPresentation::parse(text).unwrap()
    }

    #[test]
    fn cyclic_group_order() {
        let t = todd_coxeter(&pres("gens a\nrel a5"), &[], 100).unwrap();
        assert_eq!(t.index(), 5);
    }

    #[test]
    fn symmetric_group_order() {
        let p = pres("gens a b\nrel a2\nrel b3\nrel abab");
        let t = todd_coxeter(&p, &[], 1000).unwrap();
        assert_eq!(t.index(), 6);
        t.audit(&p).unwrap();
    }

    #[test]
    fn subgroup_of_z2() {
        let p = pres("gens x y\nrel xyXY");
        let t = todd_coxeter(&p, &[Word::generator(0), Word::power(1, 2)], 1000).unwrap();
        assert_eq!(t.index(), 2);
    }

    #[test]
    fn limit_is_reported() {
        let p = pres("gens x y\nrel xyXY");
        assert_eq!(todd_coxeter(&p, &[], 50), Err(Error::CosetLimitExceeded { limit: 50 }));
    }

    #[test]
    fn index_one_is_whole_group() {
        let p = pres("gens a t\nrel ta2TatATA");
        let out = low_index_subgroups(&p, &LowIndexOptions::new(1, 1)).unwrap();
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.records[0].index(), 1);
        assert!(out.complete);
    }

    #[test]
    fn free_group_index_two() {
        let p = pres("gens x y");
        let out = low_index_subgroups(&p, &LowIndexOptions::new(2, 2)).unwrap();
        assert_eq!(out.records.len(), 3);
        assert!(out.records.iter().all(SubgroupRecord::is_normal));
    }

    #[test]
    fn symmetric_group_subgroups() {
        // S3: classes of index 1, 2, 3, 6
        let p = pres("gens a b\nrel a2\nrel b3\nrel abab");
        let out = low_index_subgroups(&p, &LowIndexOptions::new(1, 6)).unwrap();
        let idx: Vec<usize> = out.records.iter().map(SubgroupRecord::index).collect();
        assert_eq!(idx, vec![1, 2, 3, 6]);
        let normal = low_index_subgroups(&p, &LowIndexOptions::new(1, 6).normal_only(true)).unwrap();
        let idx: Vec<usize> = normal.records.iter().map(SubgroupRecord::index).collect();
        assert_eq!(idx, vec![1, 2, 6]);
    }

    #[test]
    fn schreier_generators_fix_base_coset() {
        let p = pres("gens a t\nrel t3aT2ATA");
        let out = low_index_subgroups(&p, &LowIndexOptions::new(2, 4)).unwrap();
        assert!(!out.records.is_empty());
        for rec in &out.records {
            rec.table.audit(&p).unwrap();
            assert_eq!(rec.schreier_generators.len(), rec.index() * (p.n_gens() - 1) + 1);
            for g in &rec.schreier_generators {
                assert_eq!(rec.table.trace(0, g), 0);
            }
        }
    }
}
