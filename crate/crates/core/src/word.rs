//! Free-group words stored as run-length syllables.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

/// A block `g^exp` of a word. `exp` is never zero in a reduced word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syllable {
    pub gen: usize,
    pub exp: i64,
}

impl Syllable {
    pub fn new(gen: usize, exp: i64) -> Self {
        Syllable { gen, exp }
    }
}

/// A single letter `g^{±1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn sign(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Letter {
        Letter { gen: self.gen, inverse: !self.inverse }
    }
}

/// A word in the free group on generators indexed from zero.
///
/// The syllable list is not required to be reduced; `free_reduce` and
/// `cyclic_reduce` return canonical forms. Products built with `*` are
/// always freely reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Self {
        Word { syllables: Vec::new() }
    }

    /// Builds a word from raw syllables without reducing.
    pub fn from_syllables(syllables: Vec<Syllable>) -> Self {
        Word { syllables }
    }

    /// Builds a word from raw letters without reducing.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        Word {
            syllables: letters.into_iter().map(|l| Syllable::new(l.gen, l.sign())).collect(),
        }
    }

    pub fn generator(gen: usize) -> Self {
        Word { syllables: vec![Syllable::new(gen, 1)] }
    }

    pub fn power(gen: usize, exp: i64) -> Self {
        if exp == 0 {
            return Word::identity();
        }
        Word { syllables: vec![Syllable::new(gen, exp)] }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn into_syllables(self) -> Vec<Syllable> {
        self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.iter().all(|s| s.exp == 0)
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.syllables.iter().map(|s| s.exp.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = Letter> + '_ {
        self.syllables.iter().flat_map(|s| {
            let letter = Letter { gen: s.gen, inverse: s.exp < 0 };
            std::iter::repeat(letter).take(s.exp.unsigned_abs() as usize)
        })
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.syllables.iter().filter(|s| s.exp != 0).map(|s| s.gen).max()
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self.syllables.iter().rev().map(|s| Syllable::new(s.gen, -s.exp)).collect(),
        }
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Syllable> = Vec::with_capacity(self.syllables.len());
        for &s in &self.syllables {
            push_reduced(&mut out, s);
        }
        Word { syllables: out }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.syllables.iter().all(|s| s.exp != 0)
            && self.syllables.windows(2).all(|w| w[0].gen != w[1].gen)
    }

    /// Free reduction followed by removal of cancelling first/last letters.
    pub fn cyclic_reduce(&self) -> Word {
        let mut s = self.free_reduce().syllables;
        loop {
            if s.len() < 2 {
                break;
            }
            let first = s[0];
            let last = s[s.len() - 1];
            if first.gen != last.gen {
                break;
            }
            // Conjugating by the last syllable folds it into the first.
            let merged = first.exp + last.exp;
            s.pop();
            if merged == 0 {
                s.remove(0);
            } else {
                s[0].exp = merged;
                break;
            }
        }
        Word { syllables: s }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        let r = self.free_reduce();
        r == *self && r.cyclic_reduce() == r
    }

    /// Signed occurrence count of each generator.
    pub fn exponent_sums(&self, n_gens: usize) -> Vec<i64> {
        let mut sums = vec![0i64; n_gens];
        for s in &self.syllables {
            sums[s.gen] += s.exp;
        }
        sums
    }

    /// Replaces each generator by a word, reducing the result.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out: Vec<Syllable> = Vec::new();
        for s in &self.syllables {
            let img = &images[s.gen];
            let (piece, reps) = if s.exp > 0 {
                (img.clone(), s.exp)
            } else {
                (img.inverse(), -s.exp)
            };
            for _ in 0..reps {
                for &t in piece.syllables() {
                    push_reduced(&mut out, t);
                }
            }
        }
        Word { syllables: out }
    }

    /// All cyclic rotations of the letter sequence of a cyclically reduced word.
    pub fn rotations(&self) -> Vec<Vec<Letter>> {
        let letters: Vec<Letter> = self.letters().collect();
        (0..letters.len())
            .map(|i| letters[i..].iter().chain(letters[..i].iter()).copied().collect())
            .collect()
    }
}

fn push_reduced(out: &mut Vec<Syllable>, s: Syllable) {
    if s.exp == 0 {
        return;
    }
    match out.last_mut() {
        Some(last) if last.gen == s.gen => {
            last.exp += s.exp;
            if last.exp == 0 {
                out.pop();
            }
        }
        _ => out.push(s),
    }
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        let mut out = self.free_reduce().syllables;
        for &s in rhs.syllables() {
            push_reduced(&mut out, s);
        }
        Word { syllables: out }
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

/// Commutator `[u, v] = u v u^-1 v^-1`.
pub fn commutator(u: &Word, v: &Word) -> Word {
    &(&(u * v) * &u.inverse()) * &v.inverse()
}

impl fmt::Display for Word {
    /// Renders with `x0, x1, ...` names; presentations render with their own names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|s| if s.exp == 1 { format!("x{}", s.gen) } else { format!("x{}^{}", s.gen, s.exp) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[(usize, i64)]) -> Word {
        Word::from_syllables(s.iter().map(|&(g, e)| Syllable::new(g, e)).collect())
    }

    #[test]
    fn free_reduce_single_cancellation() {
        // a a^-1 t -> t
        let word = w(&[(0, 1), (0, -1), (1, 1)]);
        assert_eq!(word.free_reduce(), w(&[(1, 1)]));
    }

    #[test]
    fn free_reduce_nested() {
        let word = w(&[(1, 1), (0, 2), (0, -2), (1, -1), (0, 1)]);
        assert_eq!(word.free_reduce(), w(&[(0, 1)]));
        assert_eq!(Word::identity().free_reduce(), Word::identity());
    }

    #[test]
    fn cyclic_reduce_conjugate() {
        // t a t^-1 -> a
        let word = w(&[(1, 1), (0, 1), (1, -1)]);
        assert_eq!(word.cyclic_reduce(), w(&[(0, 1)]));
        // t^2 a t^-1 -> t a
        let word = w(&[(1, 2), (0, 1), (1, -1)]);
        assert_eq!(word.cyclic_reduce(), w(&[(1, 1), (0, 1)]));
    }

    #[test]
    fn exponent_sum_examples() {
        let comm = commutator(&Word::generator(0), &Word::generator(1));
        assert_eq!(comm.exponent_sums(2), vec![0, 0]);
        // t a^2 t^-1 a^-4 with t = 1, a = 0
        let word = w(&[(1, 1), (0, 2), (1, -1), (0, -4)]);
        assert_eq!(word.exponent_sums(2), vec![-2, 0]);
    }

    #[test]
    fn substitution_and_inverse() {
        // t -> t a^-1 applied to t a t gives t t a^-1 after reduction
        let word = w(&[(1, 1), (0, 1), (1, 1)]);
        let images = vec![Word::generator(0), w(&[(1, 1), (0, -1)])];
        assert_eq!(word.substitute(&images), w(&[(1, 2), (0, -1)]));
    }

    #[test]
    fn letters_roundtrip() {
        let word = w(&[(1, 2), (0, -3)]);
        assert_eq!(word.len(), 5);
        assert_eq!(Word::from_letters(word.letters()).free_reduce(), word);
    }
}
