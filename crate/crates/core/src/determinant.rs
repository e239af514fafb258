//! Fraction-free determinants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::{Coefficient, LaurentPoly, UniLaurent};

/// Integral domain with exact division, enough for Bareiss elimination.
pub trait ExactRing: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn mul_elem(&self, other: &Self) -> Self;
    fn sub_elem(&self, other: &Self) -> Self;
    fn neg_elem(&self) -> Self;
    fn div_exact(&self, other: &Self) -> Result<Self>;
    /// Heuristic size used to choose pivots; smaller is cheaper.
    fn size(&self) -> usize;
}

impl ExactRing for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self * other
    }
    fn sub_elem(&self, other: &Self) -> Self {
        self - other
    }
    fn neg_elem(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(other);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::DivisionNotExact)
        }
    }
    fn size(&self) -> usize {
        self.bits() as usize
    }
}

impl<C: Coefficient> ExactRing for UniLaurent<C> {
    fn zero_like(&self) -> Self {
        UniLaurent::zero()
    }
    fn one_like(&self) -> Self {
        UniLaurent::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn sub_elem(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn neg_elem(&self) -> Self {
        self.neg()
    }
    fn div_exact(&self, other: &Self) -> Result<Self> {
        self.exact_div(other)
    }
    fn size(&self) -> usize {
        self.coeffs().len()
    }
}

impl<C: Coefficient> ExactRing for LaurentPoly<C> {
    fn zero_like(&self) -> Self {
        LaurentPoly::zero(self.nvars())
    }
    fn one_like(&self) -> Self {
        LaurentPoly::one(self.nvars())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn sub_elem(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn neg_elem(&self) -> Self {
        self.neg()
    }
    fn div_exact(&self, other: &Self) -> Result<Self> {
        self.exact_div(other)
    }
    fn size(&self) -> usize {
        self.n_terms()
    }
}

/// Bareiss elimination. `unit` is the ring's one, used for the empty matrix.
pub fn bareiss_determinant<R: ExactRing>(mut m: Vec<Vec<R>>, unit: &R) -> Result<R> {
    let n = m.len();
    if n == 0 {
        return Ok(unit.one_like());
    }
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Precondition("determinant of a non-square matrix".into()));
    }
    let mut negate = false;
    let mut prev = unit.one_like();
    for k in 0..n {
        // Cheapest non-zero pivot in column k.
        let pivot_row = (k..n)
            .filter(|&r| !m[r][k].is_zero_elem())
            .min_by_key(|&r| m[r][k].size());
        let Some(pr) = pivot_row else {
            return Ok(unit.zero_like());
        };
        if pr != k {
            m.swap(pr, k);
            negate = !negate;
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            let lead = m[i][k].clone();
            for j in k + 1..n {
                let a = m[i][j].mul_elem(&pivot);
                let v = if lead.is_zero_elem() || m[k][j].is_zero_elem() {
                    a
                } else {
                    a.sub_elem(&lead.mul_elem(&m[k][j]))
                };
                m[i][j] = if k == 0 { v } else { v.div_exact(&prev)? };
            }
            m[i][k] = unit.zero_like();
        }
        prev = pivot;
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if negate { d.neg_elem() } else { d })
}

/// Determinant of a square matrix of univariate Laurent polynomials.
pub fn det_uni<C: Coefficient>(m: &[Vec<UniLaurent<C>>]) -> Result<UniLaurent<C>> {
    // Shift each row to non-negative exponents so that intermediate results
    // stay ordinary polynomials; the shifts are restored at the end.
    let mut total = 0i64;
    let rows: Vec<Vec<UniLaurent<C>>> = m
        .iter()
        .map(|row| {
            let lo = row.iter().filter(|p| !p.is_zero()).map(|p| p.low()).min().unwrap_or(0);
            total += lo;
            row.iter().map(|p| p.shift(-lo)).collect()
        })
        .collect();
    let d = bareiss_determinant(rows, &UniLaurent::one())?;
    Ok(d.shift(total))
}

/// Determinant of a square matrix of multivariate Laurent polynomials.
pub fn det_multi<C: Coefficient>(m: &[Vec<LaurentPoly<C>>], nvars: usize) -> Result<LaurentPoly<C>> {
    let mut total = vec![0i64; nvars];
    let rows: Vec<Vec<LaurentPoly<C>>> = m
        .iter()
        .map(|row| {
            let mut lo: Option<Vec<i64>> = None;
            for p in row.iter().filter(|p| !p.is_zero()) {
                let e = p.min_exponents();
                lo = Some(match lo {
                    None => e,
                    Some(l) => l.iter().zip(&e).map(|(a, b)| *a.min(b)).collect(),
                });
            }
            let lo = lo.unwrap_or_else(|| vec![0; nvars]);
            for (t, l) in total.iter_mut().zip(&lo) {
                *t += l;
            }
            let neg: Vec<i64> = lo.iter().map(|v| -v).collect();
            row.iter().map(|p| p.shift(&neg)).collect()
        })
        .collect();
    let d = bareiss_determinant(rows, &LaurentPoly::one(nvars))?;
    Ok(d.shift(&total))
}

/// Integer determinant.
pub fn det_int(m: &[Vec<BigInt>]) -> BigInt {
    bareiss_determinant(m.to_vec(), &BigInt::one()).expect("integer Bareiss divisions are exact")
}
