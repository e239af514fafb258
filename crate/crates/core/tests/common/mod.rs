//! Reference implementations used as test oracles. Deliberately naive:
//! letter-by-letter Fox expansion, cofactor determinants, Hall's recursion.
#![allow(dead_code)]

use std::collections::BTreeMap;

use largeness::fox::UniPoly;
use largeness::word::{Letter, Word};
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Univariate Laurent polynomial as exponent -> coefficient.
pub type IPoly = BTreeMap<i64, i128>;
/// Multivariate Laurent polynomial as exponent vector -> coefficient.
pub type MPoly = BTreeMap<Vec<i64>, i128>;

pub fn tidy<K: Ord + Clone>(p: BTreeMap<K, i128>) -> BTreeMap<K, i128> {
    p.into_iter().filter(|(_, c)| *c != 0).collect()
}

pub fn padd(a: &IPoly, b: &IPoly) -> IPoly {
    let mut out = a.clone();
    for (e, c) in b {
        *out.entry(*e).or_insert(0) += c;
    }
    tidy(out)
}

pub fn pneg(a: &IPoly) -> IPoly {
    a.iter().map(|(e, c)| (*e, -c)).collect()
}

pub fn pmul(a: &IPoly, b: &IPoly) -> IPoly {
    let mut out = IPoly::new();
    for (e, c) in a {
        for (f, d) in b {
            *out.entry(e + f).or_insert(0) += c * d;
        }
    }
    tidy(out)
}

pub fn mono(e: i64, c: i128) -> IPoly {
    tidy(IPoly::from([(e, c)]))
}

pub fn from_lib(p: &UniPoly) -> IPoly {
    if p.is_zero() {
        return IPoly::new();
    }
    tidy((p.low()..=p.high()).map(|e| (e, p.coefficient(e).to_i128().expect("small coefficient"))).collect())
}

/// Fox derivative pushed to `Z[t^{±1}]`, expanded one letter at a time from
/// `d(uv) = du + u dv`, `d(x_j) = 1`, `d(x_j^{-1}) = -x_j^{-1}`.
pub fn fox_oracle(w: &Word, j: usize, images: &[i64]) -> IPoly {
    let mut acc = IPoly::new();
    let mut prefix = 0i64;
    for l in w.letters() {
        let v = images[l.gen];
        if l.gen == j {
            if l.inverse {
                *acc.entry(prefix - v).or_insert(0) -= 1;
            } else {
                *acc.entry(prefix).or_insert(0) += 1;
            }
        }
        prefix += l.sign() * v;
    }
    tidy(acc)
}

/// Same in several variables.
pub fn fox_oracle_multi(w: &Word, j: usize, alpha: &[Vec<i64>]) -> MPoly {
    let b = alpha[0].len();
    let mut acc = MPoly::new();
    let mut prefix = vec![0i64; b];
    for l in w.letters() {
        let v = &alpha[l.gen];
        if l.gen == j {
            if l.inverse {
                let e: Vec<i64> = prefix.iter().zip(v).map(|(p, x)| p - x).collect();
                *acc.entry(e).or_insert(0) -= 1;
            } else {
                *acc.entry(prefix.clone()).or_insert(0) += 1;
            }
        }
        for (p, x) in prefix.iter_mut().zip(v) {
            *p += l.sign() * x;
        }
    }
    tidy(acc)
}

/// Laplace expansion along the first row.
pub fn cofactor_det<T: Clone>(m: &[Vec<T>], zero: &T, one: &T, add: &dyn Fn(&T, &T) -> T, mul: &dyn Fn(&T, &T) -> T, neg: &dyn Fn(&T) -> T) -> T {
    let n = m.len();
    if n == 0 {
        return one.clone();
    }
    let mut acc = zero.clone();
    for c in 0..n {
        let minor: Vec<Vec<T>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = mul(&m[0][c], &cofactor_det(&minor, zero, one, add, mul, neg));
        acc = if c % 2 == 0 { add(&acc, &term) } else { add(&acc, &neg(&term)) };
    }
    acc
}

pub fn det_i128(m: &[Vec<i128>]) -> i128 {
    cofactor_det(m, &0, &1, &|a, b| a + b, &|a, b| a * b, &|a| -a)
}

pub fn det_ipoly(m: &[Vec<IPoly>]) -> IPoly {
    cofactor_det(m, &IPoly::new(), &mono(0, 1), &padd, &pmul, &pneg)
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Gcd of all `k x k` minors.
pub fn minor_gcd(m: &[Vec<i128>], k: usize) -> i128 {
    let cols = m.first().map_or(0, Vec::len);
    let mut g = 0;
    for rs in subsets(m.len(), k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
            g = gcd(g, det_i128(&sub));
        }
    }
    g
}

/// Number of index-`n` subgroups of the free group of rank `r` (Hall's recursion).
pub fn hall_counts(r: u32, n: usize) -> Vec<u128> {
    let fact: Vec<u128> = (0..=n as u128).scan(1u128, |f, i| {
        if i > 0 {
            *f *= i;
        }
        Some(*f)
    }).collect();
    let mut a = vec![0u128; n + 1];
    for m in 1..=n {
        let mut v = m as u128 * fact[m].pow(r - 1);
        for k in 1..m {
            v -= fact[m - k].pow(r - 1) * a[k];
        }
        a[m] = v;
    }
    a
}

pub fn random_word(rng: &mut ChaCha8Rng, n_gens: usize, max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len);
    Word::from_letters((0..len).map(|_| Letter { gen: rng.gen_range(0..n_gens), inverse: rng.gen_bool(0.5) }))
}

/// The reduced minor expected for the index-56 witness, lowest degree first from `v^19`.
pub const TARGET: [(i64, i128); 9] = [(27, 48), (26, -256), (25, 576), (24, -768), (23, 800), (22, -768), (21, 576), (20, -256), (19, 48)];

pub fn target_poly() -> IPoly {
    TARGET.iter().map(|&(e, c)| (e, c)).collect()
}

/// Equality up to `± t^k`.
pub fn equal_up_to_units(a: &IPoly, b: &IPoly) -> bool {
    let norm = |p: &IPoly| -> IPoly {
        let Some((&lo, &lead)) = p.iter().next() else { return IPoly::new() };
        let s = if lead < 0 { -1 } else { 1 };
        p.iter().map(|(e, c)| (e - lo, s * c)).collect()
    };
    norm(a) == norm(b)
}

/// Exact division in `Z[t^{±1}]`; `None` when it does not divide.
pub fn pdiv_exact(num: &IPoly, den: &IPoly) -> Option<IPoly> {
    let (&dlo, _) = den.iter().next()?;
    let (&dhi, &dlead) = den.iter().next_back()?;
    let mut rem = num.clone();
    let mut quot = IPoly::new();
    while let Some((&hi, &c)) = rem.iter().next_back() {
        if hi - dhi < num.keys().next().copied().unwrap_or(0) - dlo || c % dlead != 0 {
            return None;
        }
        let q = c / dlead;
        let shift = hi - dhi;
        quot.insert(shift, q);
        rem = padd(&rem, &pneg(&pmul(&mono(shift, q), den)));
    }
    Some(tidy(quot))
}
