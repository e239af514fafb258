//! Fox free differential calculus and Alexander matrices.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use crate::determinant::{det_multi, det_uni};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, UniLaurent};
use crate::presentation::GroupPresentation;
use crate::word::Word;

pub type Poly = LaurentPoly<BigInt>;
pub type UniPoly = UniLaurent<BigInt>;

/// Image of the Fox derivative `∂w/∂x_j` in `Z[Z^b]`, where generator `g`
/// maps to the monomial with exponent vector `alpha[g]`.
pub fn fox_derivative(w: &Word, j: usize, alpha: &[Vec<i64>]) -> Poly {
    let b = alpha.first().map_or(0, Vec::len);
    let mut acc: HashMap<Vec<i64>, i64> = HashMap::new();
    let mut prefix = vec![0i64; b];
    for s in w.syllables() {
        let v = &alpha[s.gen];
        if s.gen == j {
            if s.exp > 0 {
                for k in 0..s.exp {
                    let e: Vec<i64> = prefix.iter().zip(v).map(|(p, x)| p + k * x).collect();
                    *acc.entry(e).or_insert(0) += 1;
                }
            } else {
                for k in 1..=-s.exp {
                    let e: Vec<i64> = prefix.iter().zip(v).map(|(p, x)| p - k * x).collect();
                    *acc.entry(e).or_insert(0) -= 1;
                }
            }
        }
        for (p, x) in prefix.iter_mut().zip(v) {
            *p += s.exp * x;
        }
    }
    Poly::from_terms(b, acc.into_iter().map(|(e, c)| (e, BigInt::from(c))))
}

/// `∂w/∂x_j` pushed forward along `x_g ↦ t^{images[g]}`.
pub fn fox_derivative_uni(w: &Word, j: usize, images: &[i64]) -> UniPoly {
    let mut acc: BTreeMap<i64, i64> = BTreeMap::new();
    let mut prefix = 0i64;
    for s in w.syllables() {
        let v = images[s.gen];
        if s.gen == j {
            if v == 0 {
                *acc.entry(prefix).or_insert(0) += s.exp;
            } else if s.exp > 0 {
                for k in 0..s.exp {
                    *acc.entry(prefix + k * v).or_insert(0) += 1;
                }
            } else {
                for k in 1..=-s.exp {
                    *acc.entry(prefix - k * v).or_insert(0) -= 1;
                }
            }
        }
        prefix += s.exp * v;
    }
    UniPoly::from_sparse(acc.into_iter().map(|(e, c)| (e, BigInt::from(c))).collect())
}

/// Rows indexed by relators, columns by generators.
pub fn alexander_matrix(p: &GroupPresentation, alpha: &[Vec<i64>]) -> Vec<Vec<Poly>> {
    p.relators()
        .iter()
        .map(|r| (0..p.n_gens()).map(|j| fox_derivative(r, j, alpha)).collect())
        .collect()
}

/// Alexander matrix already evaluated under a homomorphism to `Z`.
pub fn alexander_matrix_uni(p: &GroupPresentation, images: &[i64]) -> Vec<Vec<UniPoly>> {
    p.relators()
        .iter()
        .map(|r| (0..p.n_gens()).map(|j| fox_derivative_uni(r, j, images)).collect())
        .collect()
}

/// Which square submatrix to take: the listed rows (ascending) with one column deleted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MinorSpec {
    pub rows: Vec<usize>,
    pub deleted_column: usize,
}

/// All `(n-1)`-row subsets of `m` rows in lexicographic order, capped at `limit`.
pub fn row_subsets(m: usize, n_minus_1: usize, limit: usize) -> Result<Vec<Vec<usize>>> {
    if n_minus_1 > m {
        return Ok(Vec::new());
    }
    let count = binomial(m, n_minus_1);
    if count > limit as u128 {
        return Err(Error::BudgetExceeded(format!("{count} row subsets exceed the limit of {limit}")));
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..n_minus_1).collect();
    loop {
        out.push(idx.clone());
        let mut i = n_minus_1;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if idx[i] < m - n_minus_1 + i {
                idx[i] += 1;
                for k in i + 1..n_minus_1 {
                    idx[k] = idx[k - 1] + 1;
                }
                break;
            }
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    r
}

fn submatrix<T: Clone>(m: &[Vec<T>], spec: &MinorSpec) -> Vec<Vec<T>> {
    spec.rows
        .iter()
        .map(|&r| {
            m[r].iter()
                .enumerate()
                .filter(|(c, _)| *c != spec.deleted_column)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

pub fn minor(m: &[Vec<Poly>], spec: &MinorSpec, nvars: usize) -> Result<Poly> {
    det_multi(&submatrix(m, spec), nvars)
}

pub fn minor_uni(m: &[Vec<UniPoly>], spec: &MinorSpec) -> Result<UniPoly> {
    det_uni(&submatrix(m, spec))
}

/// Removes the factor contributed by the deleted column: divides by
/// `1 - t^{alpha_j}` when `b ≥ 2` and by `(1 - t^k)/(1 - t)` when `b = 1`.
pub fn extract_reduced_minor(n: &Poly, alpha_j: &[i64]) -> Result<Poly> {
    if alpha_j.iter().all(|v| *v == 0) {
        return Err(Error::Precondition("deleted column maps to the identity".into()));
    }
    if alpha_j.len() == 1 {
        let k = alpha_j[0];
        let u = n.collapse_to(0);
        let q = u.exact_div(&UniPoly::psi(k))?;
        return Ok(q.to_laurent());
    }
    n.exact_div(&Poly::one_minus_monomial(alpha_j))
}

/// Same reduction after evaluation: divide by `psi_k` where `k` is the image of the deleted column.
pub fn reduce_minor_uni(n: &UniPoly, k: i64) -> Result<UniPoly> {
    if k == 0 {
        return Err(Error::Precondition("deleted column maps to zero".into()));
    }
    n.exact_div(&UniPoly::psi(k))
}

/// Column whose image is non-zero, preferring the one of smallest norm.
pub fn choose_column(alpha: &[Vec<i64>]) -> Option<usize> {
    alpha
        .iter()
        .enumerate()
        .filter(|(_, v)| v.iter().any(|x| *x != 0))
        .min_by_key(|(j, v)| (v.iter().map(|x| x.abs()).sum::<i64>(), *j))
        .map(|(j, _)| j)
}

/// Fundamental formula check: `sum_j ∂w/∂x_j (alpha(x_j) - 1) = alpha(w) - 1`.
pub fn fundamental_identity_holds(w: &Word, alpha: &[Vec<i64>]) -> bool {
    let b = alpha.first().map_or(0, Vec::len);
    let mut lhs = Poly::zero(b);
    for j in 0..alpha.len() {
        let xj_minus_1 = Poly::one_minus_monomial(&alpha[j]).neg();
        lhs = lhs.add(&fox_derivative(w, j, alpha).mul(&xj_minus_1));
    }
    let mut total = vec![0i64; b];
    for s in w.syllables() {
        for (t, x) in total.iter_mut().zip(&alpha[s.gen]) {
            *t += s.exp * x;
        }
    }
    lhs == Poly::one_minus_monomial(&total).neg()
}

pub fn is_zero_mod(p: &UniPoly, modulus: u64) -> bool {
    p.vanishes_mod(&BigInt::from(modulus))
}
