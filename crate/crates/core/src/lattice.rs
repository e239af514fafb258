//! Smith normal form over the integers and abelian group invariants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::presentation::GroupPresentation;

/// Integer-like scalars the normal form can run over (`i64`, `i128`, `BigInt`).
pub trait LatticeScalar: Integer + Signed + Clone + fmt::Debug {}

impl<T: Integer + Signed + Clone + fmt::Debug> LatticeScalar for T {}

/// `left · M · right = diag(invariants)` padded with zeros.
#[derive(Clone, Debug)]
pub struct SmithForm<T> {
    /// Diagonal entries `d_1 | d_2 | ...`, nonnegative, zeros last; length `min(rows, cols)`.
    pub invariants: Vec<T>,
    pub left: Option<Vec<Vec<T>>>,
    pub right: Option<Vec<Vec<T>>>,
}

fn identity<T: LatticeScalar>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

/// Smith normal form by repeated pivoting on the smallest nonzero entry.
pub fn smith_normal_form<T: LatticeScalar>(m: &[Vec<T>], cols: usize, transforms: bool) -> SmithForm<T> {
    let rows = m.len();
    let mut a: Vec<Vec<T>> = m.to_vec();
    for r in &a {
        assert_eq!(r.len(), cols, "ragged matrix");
    }
    let mut left = transforms.then(|| identity::<T>(rows));
    let mut right = transforms.then(|| identity::<T>(cols));
    let k = rows.min(cols);

    for t in 0..k {
        // Smallest nonzero entry of the trailing block.
        let Some((pi, pj)) = min_entry(&a, t, t) else { break };
        swap_rows(&mut a, &mut left, t, pi);
        swap_cols(&mut a, &mut right, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                add_row_multiple(&mut a, &mut left, i, t, &q);
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                add_col_multiple(&mut a, &mut right, j, t, &q);
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // Move the new smallest entry of row/column t onto the pivot.
                let (mut bi, mut bj) = (t, t);
                let mut best = a[t][t].abs();
                for i in t + 1..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < best {
                        best = a[i][t].abs();
                        bi = i;
                        bj = t;
                    }
                }
                for j in t + 1..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < best {
                        best = a[t][j].abs();
                        bi = t;
                        bj = j;
                    }
                }
                swap_rows(&mut a, &mut left, t, bi);
                swap_cols(&mut a, &mut right, t, bj);
                continue;
            }
            // Row and column are clear; enforce divisibility of the remaining block.
            let p = a[t][t].clone();
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !a[i][j].is_multiple_of(&p) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => add_row_multiple(&mut a, &mut left, t, i, &(-T::one())),
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for v in a[t].iter_mut() {
                *v = -v.clone();
            }
            if let Some(l) = left.as_mut() {
                for v in l[t].iter_mut() {
                    *v = -v.clone();
                }
            }
        }
    }
    let invariants = (0..k).map(|i| a[i][i].clone()).collect();
    SmithForm { invariants, left, right }
}

fn min_entry<T: LatticeScalar>(a: &[Vec<T>], r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(T, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(r0) {
        for (j, v) in row.iter().enumerate().skip(c0) {
            if v.is_zero() {
                continue;
            }
            let av = v.abs();
            if best.as_ref().map_or(true, |(b, _, _)| av < *b) {
                let one = av.is_one();
                best = Some((av, i, j));
                if one {
                    return best.map(|(_, i, j)| (i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn swap_rows<T: LatticeScalar>(a: &mut [Vec<T>], left: &mut Option<Vec<Vec<T>>>, i: usize, j: usize) {
    if i != j {
        a.swap(i, j);
        if let Some(l) = left.as_mut() {
            l.swap(i, j);
        }
    }
}

fn swap_cols<T: LatticeScalar>(a: &mut [Vec<T>], right: &mut Option<Vec<Vec<T>>>, i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        if let Some(r) = right.as_mut() {
            for row in r.iter_mut() {
                row.swap(i, j);
            }
        }
    }
}

/// row_dst -= q · row_src
fn add_row_multiple<T: LatticeScalar>(
    a: &mut [Vec<T>],
    left: &mut Option<Vec<Vec<T>>>,
    dst: usize,
    src: usize,
    q: &T,
) {
    if q.is_zero() {
        return;
    }
    let src_row = a[src].clone();
    for (d, s) in a[dst].iter_mut().zip(src_row.iter()) {
        if !s.is_zero() {
            *d = d.clone() - q.clone() * s.clone();
        }
    }
    if let Some(l) = left.as_mut() {
        let src_row = l[src].clone();
        for (d, s) in l[dst].iter_mut().zip(src_row.iter()) {
            if !s.is_zero() {
                *d = d.clone() - q.clone() * s.clone();
            }
        }
    }
}

/// col_dst -= q · col_src
fn add_col_multiple<T: LatticeScalar>(
    a: &mut [Vec<T>],
    right: &mut Option<Vec<Vec<T>>>,
    dst: usize,
    src: usize,
    q: &T,
) {
    if q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        if !row[src].is_zero() {
            row[dst] = row[dst].clone() - q.clone() * row[src].clone();
        }
    }
    if let Some(r) = right.as_mut() {
        for row in r.iter_mut() {
            if !row[src].is_zero() {
                row[dst] = row[dst].clone() - q.clone() * row[src].clone();
            }
        }
    }
}

/// Free rank and torsion chain of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub rank: usize,
    /// `d_1 | d_2 | ... | d_k`, each at least 2.
    pub torsion: Vec<BigUint>,
}

impl AbelianInvariants {
    pub fn new(rank: usize, torsion: Vec<BigUint>) -> Self {
        AbelianInvariants { rank, torsion }
    }

    pub fn from_u64(rank: usize, torsion: &[u64]) -> Self {
        AbelianInvariants { rank, torsion: torsion.iter().map(|&d| BigUint::from(d)).collect() }
    }

    /// Minimum number of generators.
    pub fn min_generators(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn largest_torsion(&self) -> Option<&BigUint> {
        self.torsion.last()
    }

    pub fn torsion_order(&self) -> BigUint {
        self.torsion.iter().product()
    }

    /// Dimension of `A ⊗ Z/p`.
    pub fn p_rank(&self, p: u64) -> usize {
        let p = BigUint::from(p);
        self.rank + self.torsion.iter().filter(|d| (*d % &p).is_zero()).count()
    }

    /// Builds invariants from Smith diagonal entries (units dropped).
    pub fn from_diagonal<T: LatticeScalar + ToBig>(diag: &[T], n_gens: usize) -> Self {
        let mut torsion = Vec::new();
        let mut nonzero = 0;
        for d in diag {
            if d.is_zero() {
                continue;
            }
            nonzero += 1;
            let d = d.to_big().magnitude().clone();
            if !d.is_one() {
                torsion.push(d);
            }
        }
        AbelianInvariants { rank: n_gens - nonzero, torsion }
    }

    /// The notation used by coset-enumeration tools: torsion then zeros, e.g. `[2,2,2,0]`.
    pub fn aq_list(&self) -> String {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| d.to_string()).collect();
        parts.extend(std::iter::repeat("0".to_string()).take(self.rank));
        format!("[{}]", parts.join(","))
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("C{d}")).collect();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

pub trait ToBig {
    fn to_big(&self) -> BigInt;
}

impl ToBig for i64 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ToBig for i128 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ToBig for BigInt {
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Invariants of the abelian group presented by integer relation rows over `n_gens` generators.
///
/// A sparse elimination over `i64` handles the usual case; if an entry would overflow,
/// the dense normal form over `BigInt` is used instead.
pub fn invariants_of_relations(rows: &[Vec<i64>], n_gens: usize) -> AbelianInvariants {
    if let Some(inv) = invariants_within(rows, n_gens, usize::MAX) {
        return inv;
    }
    let m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let snf = smith_normal_form(&m, n_gens, false);
    AbelianInvariants::from_diagonal(&snf.invariants, n_gens)
}

type SparseRow = BTreeMap<usize, i64>;

struct Sparse {
    rows: Vec<Option<SparseRow>>,
    col_rows: Vec<BTreeSet<usize>>,
    nnz: usize,
}

impl Sparse {
    fn set_row(&mut self, i: usize, r: SparseRow) {
        if let Some(old) = self.rows[i].take() {
            self.nnz -= old.len();
            for j in old.keys() {
                self.col_rows[*j].remove(&i);
            }
        }
        self.nnz += r.len();
        for j in r.keys() {
            self.col_rows[*j].insert(i);
        }
        self.rows[i] = (!r.is_empty()).then_some(r);
    }

    /// Smallest entry, ties broken by fill-in cost.
    fn best_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(i64, usize, usize, usize)> = None;
        for (i, r) in self.rows.iter().enumerate() {
            let Some(r) = r else { continue };
            for (&j, &v) in r {
                let key = (v.abs(), (r.len() - 1) * (self.col_rows[j].len() - 1));
                if best.map_or(true, |(a, c, _, _)| key < (a, c)) {
                    best = Some((key.0, key.1, i, j));
                }
            }
        }
        best.map(|(_, _, i, j)| (i, j))
    }
}

/// `row - f * pivot`, or `None` on overflow.
fn sparse_axpy(row: &SparseRow, f: i64, pivot: &SparseRow) -> Option<SparseRow> {
    let mut out = row.clone();
    for (&j, &v) in pivot {
        let next = out.get(&j).copied().unwrap_or(0).checked_sub(f.checked_mul(v)?)?;
        if next == 0 {
            out.remove(&j);
        } else {
            out.insert(j, next);
        }
    }
    Some(out)
}

/// Abelian invariants by Euclidean diagonalisation on sparse `i64` rows, or `None` if an entry
/// would overflow or the number of nonzero entries would exceed `max_nonzero`.
///
/// Each pivot left alone in its row and column contributes a cyclic factor; the factors are
/// then arranged into a divisibility chain.
pub fn invariants_within(rows: &[Vec<i64>], n_gens: usize, max_nonzero: usize) -> Option<AbelianInvariants> {
    let mut m = Sparse { rows: vec![None; rows.len()], col_rows: vec![BTreeSet::new(); n_gens], nnz: 0 };
    for (i, r) in rows.iter().enumerate() {
        m.set_row(i, r.iter().enumerate().filter(|(_, v)| **v != 0).map(|(j, &v)| (j, v)).collect());
    }
    let mut diagonal: Vec<BigUint> = Vec::new();
    while let Some((mut pi, mut pj)) = m.best_pivot() {
        loop {
            // Reduce the pivot column modulo the pivot.
            let d = m.rows[pi].as_ref()?[&pj];
            let others: Vec<usize> = m.col_rows[pj].iter().copied().filter(|&i| i != pi).collect();
            let pivot = m.rows[pi].clone()?;
            let mut smallest: Option<(i64, usize)> = None;
            for k in others {
                let v = m.rows[k].as_ref()?[&pj];
                let q = (v - v.rem_euclid(d.abs())) / d;
                let r = sparse_axpy(m.rows[k].as_ref()?, q, &pivot)?;
                if let Some(&rem) = r.get(&pj) {
                    if smallest.map_or(true, |(a, _)| rem.abs() < a) {
                        smallest = Some((rem.abs(), k));
                    }
                }
                m.set_row(k, r);
                if m.nnz > max_nonzero {
                    return None;
                }
            }
            if let Some((_, k)) = smallest {
                pi = k;
                continue;
            }
            // Column is clear: reduce the rest of the pivot row by column operations,
            // which touch only this row.
            let mut row = m.rows[pi].clone()?;
            let mut next: Option<(i64, usize)> = None;
            for (&j, v) in row.iter_mut() {
                if j == pj {
                    continue;
                }
                *v = v.rem_euclid(d.abs());
                if *v != 0 && next.map_or(true, |(a, _)| *v < a) {
                    next = Some((*v, j));
                }
            }
            row.retain(|_, v| *v != 0);
            m.set_row(pi, row);
            match next {
                Some((_, j)) => pj = j,
                None => {
                    diagonal.push(BigUint::from(d.unsigned_abs()));
                    m.set_row(pi, SparseRow::new());
                    break;
                }
            }
        }
    }
    let rank = n_gens - diagonal.len();
    // diag(a, b) ~ diag(gcd, lcm) turns any diagonal into a divisibility chain.
    for i in 0..diagonal.len() {
        for j in i + 1..diagonal.len() {
            let (a, b) = (&diagonal[i], &diagonal[j]);
            let (g, l) = (a.gcd(b), a.lcm(b));
            diagonal[i] = g;
            diagonal[j] = l;
        }
    }
    let torsion = diagonal.into_iter().filter(|d| !d.is_one()).collect();
    Some(AbelianInvariants { rank, torsion })
}

pub fn abelian_invariants(p: &GroupPresentation) -> AbelianInvariants {
    invariants_of_relations(&p.exponent_matrix(), p.n_gens())
}

/// Abelianisation together with the projection of each generator onto the free part.
#[derive(Clone, Debug)]
pub struct FreeAbelianisation {
    pub invariants: AbelianInvariants,
    /// `images[j]` is the image of generator `j` in `Z^rank`.
    pub images: Vec<Vec<i64>>,
}

pub fn free_abelianisation(p: &GroupPresentation) -> FreeAbelianisation {
    let n = p.n_gens();
    let m: Vec<Vec<BigInt>> = p
        .exponent_matrix()
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let snf = smith_normal_form(&m, n, true);
    let invariants = AbelianInvariants::from_diagonal(&snf.invariants, n);
    let right = snf.right.expect("transforms requested");
    // Coordinates e·V; columns with a zero (or absent) diagonal entry span the free part.
    let nonzero = snf.invariants.iter().filter(|d| !d.is_zero()).count();
    let free_cols: Vec<usize> = (nonzero..n).collect();
    let images = (0..n)
        .map(|j| {
            free_cols
                .iter()
                .map(|&c| right[j][c].to_i64().expect("abelianisation coordinates fit in i64"))
                .collect()
        })
        .collect();
    FreeAbelianisation { invariants, images }
}

/// Determinant-free rank of an integer matrix over `Q` (or `Z/p` when `p > 0`).
pub fn rank_mod(rows: &[Vec<i64>], cols: usize, p: u64) -> usize {
    if p == 0 {
        let m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        return smith_normal_form(&m, cols, false).invariants.iter().filter(|d| !d.is_zero()).count();
    }
    let p = p as i128;
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| (v as i128).rem_euclid(p)).collect()).collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = mod_inverse(a[rank][c], p);
        for v in a[rank].iter_mut() {
            *v = (*v * inv).rem_euclid(p);
        }
        for i in 0..a.len() {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c];
                let pivot_row = a[rank].clone();
                for (x, y) in a[i].iter_mut().zip(pivot_row) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inverse(a: i128, p: i128) -> i128 {
    let e = num_integer::Integer::extended_gcd(&a, &p);
    e.x.rem_euclid(p)
}

/// Distinct prime divisors in increasing order; `0` and `1` have none.
///
/// Cofactors that do not fit in `u64` after removing primes below 10^6 are
/// dropped; contents large enough to hit this never arise from the searches.
pub fn prime_factors(n: &BigUint) -> Vec<u64> {
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut m = n.clone();
    if let Some(v) = m.to_u64() {
        return prime_factors_u64(v);
    }
    let mut d: u64 = 2;
    while d < 1_000_000 {
        let bd = BigUint::from(d);
        if (&m % &bd).is_zero() {
            out.push(d);
            while (&m % &bd).is_zero() {
                m /= &bd;
            }
            if let Some(v) = m.to_u64() {
                out.extend(prime_factors_u64(v));
                return out;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    out
}

pub fn prime_factors_u64(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut m = n;
    for d in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
    }
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        if is_prime(x) {
            out.push(x);
            continue;
        }
        let f = pollard_rho(x);
        stack.push(f);
        stack.push(x / f);
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = num_integer::gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn snf_i64(m: &[Vec<i64>], cols: usize) -> Vec<i64> {
        smith_normal_form(m, cols, false).invariants
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf_i64(&[vec![2, 4], vec![-2, 2]], 2), vec![2, 6]);
        assert_eq!(snf_i64(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], 3), vec![1, 1, 1]);
        assert_eq!(snf_i64(&[vec![0]], 1), vec![0]);
    }

    #[test]
    fn snf_transforms_reconstruct() {
        let m: Vec<Vec<BigInt>> = [[2i64, 4, 4], [-6, 6, 12], [10, -4, -16]]
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let snf = smith_normal_form(&m, 3, true);
        let (u, v) = (snf.left.unwrap(), snf.right.unwrap());
        let mul = |a: &Vec<Vec<BigInt>>, b: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
            (0..a.len())
                .map(|i| (0..b[0].len()).map(|j| (0..b.len()).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
                .collect()
        };
        let d = mul(&mul(&u, &m), &v);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(d[i][j].is_zero());
                } else {
                    assert_eq!(d[i][i], snf.invariants[i]);
                }
            }
        }
        assert_eq!(snf.invariants, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn abelian_invariant_examples() {
        let bs24 = parse_presentation("gens a t\nrel ta2TA4").unwrap();
        assert_eq!(abelian_invariants(&bs24), AbelianInvariants::from_u64(1, &[2]));
        let z2 = parse_presentation("gens x y\nrel xyXY").unwrap();
        assert_eq!(abelian_invariants(&z2), AbelianInvariants::from_u64(2, &[]));
        let c5 = parse_presentation("gens a\nrel a5").unwrap();
        assert_eq!(abelian_invariants(&c5), AbelianInvariants::from_u64(0, &[5]));
    }

    #[test]
    fn p_rank_examples() {
        let inv = AbelianInvariants::from_u64(1, &[2, 2, 2]);
        assert_eq!(inv.p_rank(2), 4);
        assert_eq!(inv.p_rank(3), 1);
        assert_eq!(AbelianInvariants::from_u64(4, &[2, 2, 4, 4, 4]).p_rank(2), 9);
        assert_eq!(inv.min_generators(), 4);
    }

    #[test]
    fn free_images_span_free_part() {
        // BS(2,4): a is torsion, t generates the free part.
        let p = parse_presentation("gens a t\nrel ta2TA4").unwrap();
        let fa = free_abelianisation(&p);
        assert_eq!(fa.images[0], vec![0]);
        assert_eq!(fa.images[1].iter().map(|v| v.abs()).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn rank_mod_examples() {
        let rows = vec![vec![2, 0], vec![0, 3]];
        assert_eq!(rank_mod(&rows, 2, 0), 2);
        assert_eq!(rank_mod(&rows, 2, 2), 1);
        assert_eq!(rank_mod(&rows, 2, 3), 1);
        assert_eq!(rank_mod(&rows, 2, 5), 2);
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors(&BigUint::from(360u32)), vec![2, 3, 5]);
        assert_eq!(prime_factors(&BigUint::from(1u32)), Vec::<u64>::new());
        assert_eq!(prime_factors(&BigUint::from(0u32)), Vec::<u64>::new());
        assert!(is_prime(97) && !is_prime(91));
        assert_eq!(prime_factors_u64(1_000_000_007 * 998_244_353), vec![998_244_353, 1_000_000_007]);
    }
}
