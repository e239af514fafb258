//! Laurent polynomials over the integers.
//!
//! [`LaurentPoly`] is the sparse multivariate ring `Z[t_1^±, ..., t_b^±]`;
//! [`UniLaurent`] is a dense single-variable representation used for the
//! bulk of the determinant work once a homomorphism to `Z` has been chosen.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer coefficient domains (`i64`, `i128`, `BigInt`).
pub trait Coefficient: Integer + Signed + Clone + fmt::Debug + fmt::Display + Hash {}

impl<T: Integer + Signed + Clone + fmt::Debug + fmt::Display + Hash> Coefficient for T {}

pub type Exponent = Vec<i64>;

/// Sparse Laurent polynomial in `nvars` variables. Terms are keyed by exponent
/// vector in lexicographic order and never store zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly<C> {
    nvars: usize,
    terms: BTreeMap<Exponent, C>,
}

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(nvars, vec![0; nvars], C::one())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn monomial(nvars: usize, exp: Exponent, c: C) -> Self {
        assert_eq!(exp.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// The variable `t_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, C::one())
    }

    /// `1 - t^v`.
    pub fn one_minus_monomial(exp: &[i64]) -> Self {
        let n = exp.len();
        let mut p = Self::one(n);
        p.add_term(exp.to_vec(), -C::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, C)>>(nvars: usize, terms: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &[i64]) -> C {
        self.terms.get(exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, exp: Exponent, c: C) {
        debug_assert_eq!(exp.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.clone() * k.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    /// Multiplies by the monomial `t^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Componentwise minimum exponent; zeros for the zero polynomial.
    pub fn min_exponents(&self) -> Exponent {
        let mut lo: Option<Exponent> = None;
        for e in self.terms.keys() {
            lo = Some(match lo {
                None => e.clone(),
                Some(l) => l.iter().zip(e).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        lo.unwrap_or_else(|| vec![0; self.nvars])
    }

    pub fn max_exponents(&self) -> Exponent {
        let mut hi: Option<Exponent> = None;
        for e in self.terms.keys() {
            hi = Some(match hi {
                None => e.clone(),
                Some(h) => h.iter().zip(e).map(|(a, b)| *a.max(b)).collect(),
            });
        }
        hi.unwrap_or_else(|| vec![0; self.nvars])
    }

    /// `max - min` exponent of variable `i`.
    pub fn spread(&self, i: usize) -> i64 {
        if self.is_zero() {
            return 0;
        }
        self.max_exponents()[i] - self.min_exponents()[i]
    }

    /// Shifts so that every variable's minimum exponent is zero.
    pub fn min_shifted(&self) -> Self {
        let lo = self.min_exponents();
        let neg: Vec<i64> = lo.iter().map(|v| -v).collect();
        self.shift(&neg)
    }

    /// Gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> C {
        let mut g = C::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Representative up to multiplication by `±t^v`: minimum exponents zero and
    /// the lexicographically first coefficient positive.
    pub fn unit_normalized(&self) -> Self {
        let p = self.min_shifted();
        match p.terms.values().next() {
            Some(c) if c.is_negative() => p.neg(),
            _ => p,
        }
    }

    pub fn equal_up_to_units(&self, other: &Self) -> bool {
        self.unit_normalized() == other.unit_normalized()
    }

    /// Exact quotient `self / divisor`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        assert_eq!(self.nvars, divisor.nvars, "variable count mismatch");
        if divisor.is_zero() {
            return Err(Error::DivisionNotExact);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        if divisor.terms.len() == 1 {
            let (e, c) = divisor.terms.iter().next().unwrap();
            let mut out = Self::zero(self.nvars);
            for (fe, fc) in &self.terms {
                let (q, r) = fc.div_rem(c);
                if !r.is_zero() {
                    return Err(Error::DivisionNotExact);
                }
                out.terms.insert(fe.iter().zip(e).map(|(a, b)| a - b).collect(), q);
            }
            return Ok(out);
        }
        let f_lo = self.min_exponents();
        let g_lo = divisor.min_exponents();
        let f = self.min_shifted();
        let g = divisor.min_shifted();
        let (g_lead_exp, g_lead_c) = g.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut rem = f;
        let mut quot = Self::zero(self.nvars);
        while let Some((r_exp, r_c)) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let qe: Exponent = r_exp.iter().zip(&g_lead_exp).map(|(a, b)| a - b).collect();
            if qe.iter().any(|v| *v < 0) {
                return Err(Error::DivisionNotExact);
            }
            let (qc, rr) = r_c.div_rem(&g_lead_c);
            if !rr.is_zero() {
                return Err(Error::DivisionNotExact);
            }
            for (ge, gc) in &g.terms {
                let e: Exponent = ge.iter().zip(&qe).map(|(a, b)| a + b).collect();
                rem.add_term(e, -(gc.clone() * qc.clone()));
            }
            quot.add_term(qe, qc);
        }
        let shift: Vec<i64> = f_lo.iter().zip(&g_lo).map(|(a, b)| a - b).collect();
        Ok(quot.shift(&shift))
    }

    /// Image under `t_i ↦ t^{chi_i}`.
    pub fn evaluate_chi(&self, chi: &[i64]) -> UniLaurent<C> {
        assert_eq!(chi.len(), self.nvars, "homomorphism has the wrong number of components");
        let mut acc: BTreeMap<i64, C> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d: i64 = e.iter().zip(chi).map(|(a, b)| a * b).sum();
            let slot = acc.entry(d).or_insert_with(C::zero);
            *slot = slot.clone() + c.clone();
        }
        UniLaurent::from_sparse(acc)
    }

    /// Sets every variable other than `keep` to 1.
    pub fn collapse_to(&self, keep: usize) -> UniLaurent<C> {
        let mut chi = vec![0; self.nvars];
        chi[keep] = 1;
        self.evaluate_chi(&chi)
    }

    /// Folds the exponents of variable `i` modulo `q` after shifting its minimum
    /// to zero, summing the coefficients over all other variables.
    ///
    /// If `t ↦ (t^{k_1}, ..., t^{k_b})` kills `self` with `q | k_j` for every
    /// `j ≠ i` and `gcd(k_i, q) = 1`, the folded polynomial is zero (and the
    /// same holds modulo any `n`).
    pub fn wrap(&self, i: usize, q: u64) -> Self {
        assert!(q >= 2, "wrap modulus must be at least 2");
        let lo = self.min_exponents();
        let q = q as i64;
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; self.nvars];
            ne[i] = (e[i] - lo[i]).rem_euclid(q);
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Reduces every exponent modulo `p`.
    pub fn boxed(&self, p: u64) -> BoxedPoly<C> {
        let pi = p as i64;
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.iter().map(|v| v.rem_euclid(pi)).collect(), c.clone());
        }
        BoxedPoly { p, poly: out }
    }

    /// Converts coefficients into another domain.
    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        LaurentPoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        format_terms(
            self.terms.iter().rev().map(|(e, c)| (e.as_slice(), c)),
            names,
        )
    }

    pub fn parse(text: &str, nvars: usize) -> Result<Self> {
        let names = variable_names(nvars);
        parse_terms(text, &names).map(|terms| Self::from_terms(nvars, terms))
    }
}

impl<C: Coefficient> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(&variable_names(self.nvars)))
    }
}

/// Default variable names: `t` for one variable, `x, y, z` up to three, else `t1..tb`.
pub fn variable_names(nvars: usize) -> Vec<String> {
    match nvars {
        1 => vec!["t".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        n => (1..=n).map(|i| format!("t{i}")).collect(),
    }
}

fn format_terms<'a, C: Coefficient + 'a>(
    terms: impl Iterator<Item = (&'a [i64], &'a C)>,
    names: &[String],
) -> String {
    let mut out = String::new();
    for (k, (e, c)) in terms.enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(i, v)| if *v == 1 { names[i].clone() } else { format!("{}^{}", names[i], v) })
            .collect();
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else {
            if !mag.is_one() {
                out.push_str(&mag.to_string());
                out.push('*');
            }
            out.push_str(&mono.join("*"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn parse_terms<C: Coefficient>(text: &str, names: &[String]) -> Result<Vec<(Exponent, C)>> {
    let err = |m: &str| Error::PolyParse(format!("{m} in `{text}`"));
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "0" {
        return Ok(Vec::new());
    }
    let chars: Vec<char> = compact.chars().collect();
    let mut i = 0;
    let mut terms = Vec::new();
    while i < chars.len() {
        let mut sign = true;
        if chars[i] == '+' || chars[i] == '-' {
            sign = chars[i] == '+';
            i += 1;
        } else if !terms.is_empty() {
            return Err(err("expected `+` or `-`"));
        }
        let mut coeff = C::one();
        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let mut have_coeff = false;
        if i > start {
            let s: String = chars[start..i].iter().collect();
            coeff = C::from_str_radix(&s, 10).map_err(|_| err("bad coefficient"))?;
            have_coeff = true;
        }
        let mut exp = vec![0i64; names.len()];
        let mut first_factor = !have_coeff;
        loop {
            if i < chars.len() && chars[i] == '*' {
                i += 1;
            } else if !first_factor {
                break;
            }
            first_factor = false;
            let s = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() && !(i > s && chars[i] == '^') {
                if chars[i].is_ascii_digit() && i == s {
                    break;
                }
                i += 1;
            }
            let name: String = chars[s..i].iter().collect();
            let v = names.iter().position(|n| *n == name).ok_or_else(|| err(&format!("unknown variable `{name}`")))?;
            let mut power = 1i64;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let ps = i;
                if i < chars.len() && chars[i] == '-' {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let ptxt: String = chars[ps..i].iter().collect();
                power = ptxt.parse().map_err(|_| err("bad exponent"))?;
            }
            exp[v] += power;
        }
        if !have_coeff && exp.iter().all(|v| *v == 0) {
            return Err(err("empty term"));
        }
        terms.push((exp, if sign { coeff } else { -coeff }));
    }
    Ok(terms)
}

/// A polynomial with exponents taken modulo a prime `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxedPoly<C> {
    pub p: u64,
    pub poly: LaurentPoly<C>,
}

impl<C: Coefficient> BoxedPoly<C> {
    /// Image in `Z[t]/(t^p - 1)` under exponents `k` (taken mod `p`).
    pub fn evaluate(&self, k: &[i64]) -> Vec<C> {
        let p = self.p as i64;
        let mut out = vec![C::zero(); self.p as usize];
        for (e, c) in self.poly.terms() {
            let d: i64 = e.iter().zip(k).map(|(a, b)| a * b).sum::<i64>().rem_euclid(p);
            out[d as usize] = out[d as usize].clone() + c.clone();
        }
        out
    }

    /// Gcd of the evaluated coefficients: zero means vanishing over `Z`.
    pub fn content_at(&self, k: &[i64]) -> C {
        self.evaluate(k).iter().fold(C::zero(), |g, c| g.gcd(c))
    }
}

/// Primitive homomorphism `Z^b → Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChiVector(Vec<i64>);

impl ChiVector {
    pub fn new(components: Vec<i64>) -> Result<Self> {
        let g = components.iter().fold(0i64, |g, c| g.gcd(c));
        if g != 1 {
            return Err(Error::Precondition(format!("homomorphism {components:?} is not primitive")));
        }
        Ok(ChiVector(components))
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot(&self, v: &[i64]) -> i64 {
        self.0.iter().zip(v).map(|(a, b)| a * b).sum()
    }
}

impl fmt::Display for ChiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Dense Laurent polynomial in one variable `t`: `sum coeffs[i] t^(low + i)`.
/// The coefficient vector is trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UniLaurent<C> {
    low: i64,
    coeffs: Vec<C>,
}

impl<C: Coefficient> UniLaurent<C> {
    pub fn zero() -> Self {
        UniLaurent { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::new(0, vec![c])
    }

    pub fn monomial(exp: i64, c: C) -> Self {
        Self::new(exp, vec![c])
    }

    /// `1 - t^k`
    pub fn one_minus_power(k: i64) -> Self {
        let mut m = std::collections::BTreeMap::new();
        m.insert(0, C::one());
        let e = m.entry(k).or_insert_with(C::zero);
        *e = e.clone() - C::one();
        Self::from_sparse(m)
    }

    /// `(1 - t^k) / (1 - t)` for `k ≠ 0`, as a Laurent polynomial.
    pub fn psi(k: i64) -> Self {
        assert!(k != 0, "psi_0 is undefined");
        if k > 0 {
            Self::new(0, vec![C::one(); k as usize])
        } else {
            // (1 - t^{-m}) / (1 - t) = -(t^{-m} + ... + t^{-1})
            Self::new(k, vec![-C::one(); (-k) as usize])
        }
    }

    pub fn new(low: i64, coeffs: Vec<C>) -> Self {
        let mut p = UniLaurent { low, coeffs };
        p.trim();
        p
    }

    pub fn from_sparse(map: BTreeMap<i64, C>) -> Self {
        let nz: Vec<(i64, C)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if nz.is_empty() {
            return Self::zero();
        }
        let low = nz[0].0;
        let high = nz[nz.len() - 1].0;
        let mut coeffs = vec![C::zero(); (high - low + 1) as usize];
        for (e, c) in nz {
            coeffs[(e - low) as usize] = c;
        }
        UniLaurent { low, coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coefficient(&self, e: i64) -> C {
        if e < self.low || e > self.high() {
            C::zero()
        } else {
            self.coeffs[(e - self.low) as usize].clone()
        }
    }

    pub fn content(&self) -> C {
        let mut g = C::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = self.high().max(other.high());
        let mut coeffs = vec![C::zero(); (high - low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = (self.low - low) as usize + i;
            coeffs[k] = coeffs[k].clone() + c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let k = (other.low - low) as usize + i;
            coeffs[k] = coeffs[k].clone() + c.clone();
        }
        Self::new(low, coeffs)
    }

    pub fn neg(&self) -> Self {
        UniLaurent { low: self.low, coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(self.low + other.low, coeffs)
    }

    pub fn scale(&self, k: &C) -> Self {
        Self::new(self.low, self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        UniLaurent { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    /// Exact quotient; fails if `divisor` does not divide `self` in `Z[t^±]`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::DivisionNotExact);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let n = self.coeffs.len();
        let d = divisor.coeffs.len();
        if d > n {
            return Err(Error::DivisionNotExact);
        }
        let lead = divisor.coeffs[d - 1].clone();
        let mut rem = self.coeffs.clone();
        let mut q = vec![C::zero(); n - d + 1];
        for k in (0..=n - d).rev() {
            let top = rem[k + d - 1].clone();
            if top.is_zero() {
                continue;
            }
            let (qc, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return Err(Error::DivisionNotExact);
            }
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[k + i] = rem[k + i].clone() - qc.clone() * dc.clone();
                }
            }
            q[k] = qc;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::DivisionNotExact);
        }
        Ok(Self::new(self.low - divisor.low, q))
    }

    /// Value at `t = 1`.
    pub fn eval_one(&self) -> C {
        self.coeffs.iter().fold(C::zero(), |s, c| s + c.clone())
    }

    /// Image in `Z[t]/(t^p - 1)`, indexed by exponent class.
    pub fn fold_mod(&self, p: u64) -> Vec<C> {
        let mut out = vec![C::zero(); p as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = (self.low + i as i64).rem_euclid(p as i64) as usize;
            out[e] = out[e].clone() + c.clone();
        }
        out
    }

    /// Representative up to `±t^k`: lowest exponent zero, lowest coefficient positive.
    pub fn unit_normalized(&self) -> Self {
        let p = UniLaurent { low: 0, coeffs: self.coeffs.clone() };
        if p.coeffs.first().is_some_and(|c| c.is_negative()) {
            p.neg()
        } else {
            p
        }
    }

    pub fn equal_up_to_units(&self, other: &Self) -> bool {
        self.unit_normalized() == other.unit_normalized()
    }

    /// True when every coefficient is divisible by `n` (`n = 0` means identically zero).
    pub fn vanishes_mod(&self, n: &C) -> bool {
        if n.is_zero() {
            self.is_zero()
        } else {
            self.coeffs.iter().all(|c| c.is_multiple_of(n))
        }
    }

    pub fn to_laurent(&self) -> LaurentPoly<C> {
        LaurentPoly::from_terms(
            1,
            self.coeffs.iter().enumerate().map(|(i, c)| (vec![self.low + i as i64], c.clone())),
        )
    }

    pub fn to_string_with(&self, var: &str) -> String {
        let exps: Vec<[i64; 1]> = (0..self.coeffs.len()).map(|i| [self.low + i as i64]).collect();
        let terms = exps
            .iter()
            .zip(self.coeffs.iter())
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e.as_slice(), c));
        format_terms(terms, &[var.to_string()])
    }

    pub fn parse(text: &str, var: &str) -> Result<Self> {
        let terms: Vec<(Exponent, C)> = parse_terms(text, &[var.to_string()])?;
        let mut m = BTreeMap::new();
        for (e, c) in terms {
            let s = m.entry(e[0]).or_insert_with(C::zero);
            *s = s.clone() + c;
        }
        Ok(Self::from_sparse(m))
    }
}

impl<C: Coefficient> fmt::Display for UniLaurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type P = LaurentPoly<i64>;
    type U = UniLaurent<i64>;

    fn p2(terms: &[((i64, i64), i64)]) -> P {
        P::from_terms(2, terms.iter().map(|&((a, b), c)| (vec![a, b], c)))
    }

    fn p1(terms: &[(i64, i64)]) -> P {
        P::from_terms(1, terms.iter().map(|&(a, c)| (vec![a], c)))
    }

    #[test]
    fn arithmetic_examples() {
        // (1 - y)(1 + y) = 1 - y^2
        let a = p2(&[((0, 0), 1), ((0, 1), -1)]);
        let b = p2(&[((0, 0), 1), ((0, 1), 1)]);
        let prod = a.mul(&b);
        assert_eq!(prod, p2(&[((0, 0), 1), ((0, 2), -1)]));
        assert_eq!(prod.exact_div(&a).unwrap(), b);
        let one_minus_x = p2(&[((0, 0), 1), ((1, 0), -1)]);
        assert_eq!(prod.exact_div(&one_minus_x), Err(Error::DivisionNotExact));
    }

    #[test]
    fn laurent_division_with_negative_exponents() {
        let f = p2(&[((-2, 1), 3), ((0, -1), -5), ((1, 1), 7)]);
        let g = p2(&[((-1, 0), 1), ((2, -3), 2)]);
        let h = f.mul(&g);
        assert_eq!(h.exact_div(&g).unwrap(), f);
        assert_eq!(h.exact_div(&f).unwrap(), g);
    }

    #[test]
    fn content_examples() {
        assert_eq!(p1(&[(1, 2), (0, -4)]).content(), 2);
        assert_eq!(p2(&[((3, -2), 1)]).content(), 1);
        assert_eq!(P::zero(2).content(), 0);
    }

    #[test]
    fn evaluate_examples() {
        // 1 - x + x^2 y at (1, 2)
        let f = p2(&[((0, 0), 1), ((1, 0), -1), ((2, 1), 1)]);
        assert_eq!(f.evaluate_chi(&[1, 2]), U::from_sparse([(0, 1), (1, -1), (4, 1)].into_iter().collect()));
        let g = p2(&[((1, 0), 1), ((0, 1), -1)]);
        assert!(g.evaluate_chi(&[1, 1]).is_zero());
        let h = p2(&[((0, 0), 1), ((0, 2), -1)]);
        assert_eq!(h.evaluate_chi(&[0, 1]), U::from_sparse([(0, 1), (2, -1)].into_iter().collect()));
    }

    #[test]
    fn chi_must_be_primitive() {
        assert!(ChiVector::new(vec![2, 0]).is_err());
        assert!(ChiVector::new(vec![0, 1]).is_ok());
        assert!(ChiVector::new(vec![0, 0]).is_err());
    }

    #[test]
    fn wrap_examples() {
        let f = p1(&[(0, 1), (1, -1), (2, 1), (3, -1)]);
        assert_eq!(f.wrap(0, 2), p1(&[(0, 2), (1, -2)]));
        assert_eq!(f.wrap(0, 2).content(), 2);
        let g = p1(&[(0, 1), (2, -1)]);
        assert!(g.wrap(0, 2).is_zero());
        assert_eq!(g.wrap(0, 4), g);
    }

    #[test]
    fn wrap_sums_over_other_variables() {
        // x^2 - y dies under (1, 2); folding x mod 2 must vanish too.
        let f = p2(&[((2, 0), 1), ((0, 1), -1)]);
        assert!(f.evaluate_chi(&[1, 2]).is_zero());
        assert!(f.wrap(0, 2).is_zero());
    }

    #[test]
    fn box_examples() {
        let f = P::from_terms(3, vec![(vec![0, 0, 0], 1), (vec![1, 0, 0], 1), (vec![0, 1, 0], 1), (vec![0, 0, 1], 1)]);
        let b = f.boxed(2);
        let classes = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]];
        let vanishing: Vec<[i64; 3]> = classes.iter().copied().filter(|k| b.content_at(k) % 2 == 0).collect();
        assert_eq!(vanishing, vec![[1, 1, 0], [1, 0, 1], [0, 1, 1]]);

        let g = p1(&[(5, 1), (1, -1)]);
        assert!(g.boxed(5).poly.terms().all(|(e, _)| e[0] < 5));
        assert_eq!(g.boxed(5).poly, p1(&[(0, 1), (1, -1)]));

        let h = P::from_terms(3, vec![(vec![1, 0, 0], 1), (vec![0, 1, 0], -1)]);
        let bh = h.boxed(2);
        let vanishing: Vec<[i64; 3]> = classes.iter().copied().filter(|k| bh.content_at(k) == 0).collect();
        assert_eq!(vanishing, vec![[0, 0, 1], [1, 1, 0], [1, 1, 1]]);
    }

    #[test]
    fn unit_normalization() {
        let f = p1(&[(27, 48), (26, -256), (19, 48)]);
        let g = p1(&[(0, -48), (-1, 256), (-8, -48)]);
        assert!(f.equal_up_to_units(&g));
        let n = f.unit_normalized();
        assert_eq!(n.min_exponents(), vec![0]);
    }

    #[test]
    fn psi_and_univariate_division() {
        let t2m1 = U::from_sparse([(2, 1), (0, -1)].into_iter().collect());
        let q = t2m1.exact_div(&U::psi(2)).unwrap();
        assert_eq!(q, U::from_sparse([(1, 1), (0, -1)].into_iter().collect()));
        let neg = U::one_minus_power(-3);
        assert_eq!(neg.exact_div(&U::one_minus_power(1)).unwrap(), U::psi(-3));
        assert!(U::from_sparse([(1, 2), (0, -3)].into_iter().collect()).exact_div(&U::psi(2)).is_err());
    }

    #[test]
    fn render_and_parse() {
        let f = P::parse("48*v^27 - 256*v^26 + 48", 1).err();
        assert!(f.is_some());
        let g = LaurentPoly::<BigInt>::parse("3*x^2*y^-1 - x + 7", 2).unwrap();
        assert_eq!(g.to_string(), "3*x^2*y^-1 - x + 7");
        assert_eq!(LaurentPoly::<BigInt>::parse(&g.to_string(), 2).unwrap(), g);
        let u = U::parse("48*v^27 - 256*v^26 + 48*v^19", "v").unwrap();
        assert_eq!(u.to_string_with("v"), "48*v^27 - 256*v^26 + 48*v^19");
        assert_eq!(P::parse("0", 2).unwrap(), P::zero(2));
        assert_eq!(P::parse("-t1*t3^-2", 4).unwrap().to_string(), "-t1*t3^-2");
    }
}
