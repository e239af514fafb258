//! Group presentations, the line-oriented text format, and Magnus-form statistics.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Syllable, Word};

/// `⟨ generators | relators ⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupPresentation {
    names: Vec<String>,
    relators: Vec<Word>,
}

impl GroupPresentation {
    /// Relators are stored freely reduced.
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidPresentation("at least one generator is required".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::InvalidPresentation(format!("duplicate generator name `{n}`")));
            }
        }
        for r in &relators {
            if let Some(g) = r.max_generator() {
                if g >= names.len() {
                    return Err(Error::UnknownGenerator(format!("index {g}")));
                }
            }
        }
        let relators = relators.iter().map(Word::free_reduce).collect();
        Ok(GroupPresentation { names, relators })
    }

    /// Generators named `x0, x1, ...` (single letters `a..z` when there are few).
    pub fn with_default_names(n_gens: usize, relators: Vec<Word>) -> Result<Self> {
        GroupPresentation::new(default_names(n_gens), relators)
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_presentation(text)
    }

    pub fn n_gens(&self) -> usize {
        self.names.len()
    }

    pub fn n_rels(&self) -> usize {
        self.relators.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Generators minus relators.
    pub fn deficiency(&self) -> i64 {
        self.n_gens() as i64 - self.n_rels() as i64
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Rows are relators, columns generators.
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators.iter().map(|r| r.exponent_sums(self.n_gens())).collect()
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    pub fn with_relators(&self, relators: Vec<Word>) -> Result<Self> {
        GroupPresentation::new(self.names.clone(), relators)
    }

    /// Renders a word with this presentation's generator names.
    pub fn format_word(&self, w: &Word) -> String {
        if compact_names(&self.names) {
            let mut s = String::new();
            for syl in w.syllables() {
                if syl.exp == 0 {
                    continue;
                }
                let name = &self.names[syl.gen];
                if syl.exp > 0 {
                    s.push_str(name);
                } else {
                    s.push_str(&name.to_uppercase());
                }
                if syl.exp.abs() != 1 {
                    s.push_str(&syl.exp.abs().to_string());
                }
            }
            s
        } else {
            let parts: Vec<String> = w
                .syllables()
                .iter()
                .filter(|syl| syl.exp != 0)
                .map(|syl| {
                    if syl.exp == 1 {
                        self.names[syl.gen].clone()
                    } else {
                        format!("{}^{}", self.names[syl.gen], syl.exp)
                    }
                })
                .collect();
            parts.join(" ")
        }
    }

    /// Parses a word written in this presentation's notation.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        parse_word_with(&self.names, text, 1, 1)
    }

    /// Applies a Nielsen-type substitution to every relator.
    pub fn substitute_generator(&self, rule: Substitution) -> Result<GroupPresentation> {
        let images = rule.images(self.n_gens())?;
        let relators = self.relators.iter().map(|r| r.substitute(&images)).collect();
        GroupPresentation::new(self.names.clone(), relators)
    }

    /// Statistics of relator `index` written in Magnus form with respect to `pivot`.
    pub fn magnus_stats(&self, index: usize, pivot: usize) -> Result<MagnusStats> {
        if self.n_gens() != 2 {
            return Err(Error::InvalidPresentation("Magnus form needs exactly two generators".into()));
        }
        if pivot >= 2 {
            return Err(Error::UnknownGenerator(format!("index {pivot}")));
        }
        let r = self
            .relators
            .get(index)
            .ok_or_else(|| Error::InvalidPresentation(format!("no relator {index}")))?;
        magnus_stats(r, pivot)
    }

    pub fn is_two_generator_one_relator(&self) -> bool {
        self.n_gens() == 2 && self.n_rels() == 1
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gens {}", self.names.join(" "))?;
        for r in &self.relators {
            writeln!(f, "rel {}", self.format_word(r))?;
        }
        Ok(())
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (0..n).map(|i| format!("x{i}")).collect()
    }
}

fn compact_names(names: &[String]) -> bool {
    names.iter().all(|n| n.len() == 1 && n.chars().all(|c| c.is_ascii_lowercase()))
}

/// Parses the `gens ... / rel ...` format. `;` also separates lines.
pub fn parse_presentation(text: &str) -> Result<GroupPresentation> {
    let mut names: Option<Vec<String>> = None;
    let mut relators = Vec::new();
    for (lineno, raw_line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let without_comment = raw_line.split('#').next().unwrap_or("");
        let mut offset = 0;
        for stmt in without_comment.split(';') {
            let col = offset + 1 + (stmt.len() - stmt.trim_start().len());
            offset += stmt.len() + 1;
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            let (keyword, rest) = match stmt.find(char::is_whitespace) {
                Some(i) => (&stmt[..i], stmt[i..].trim()),
                None => (stmt, ""),
            };
            match keyword {
                "gens" => {
                    if names.is_some() {
                        return Err(syntax(line_no, col, "duplicate `gens` line"));
                    }
                    let list: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                    for n in &list {
                        if !n.chars().next().is_some_and(|c| c.is_ascii_lowercase())
                            || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                        {
                            return Err(syntax(line_no, col, &format!("invalid generator name `{n}`")));
                        }
                    }
                    names = Some(list);
                }
                "rel" => {
                    let names = names
                        .as_ref()
                        .ok_or_else(|| syntax(line_no, col, "`rel` before `gens`"))?;
                    let rel_col = col + (stmt.len() - rest.len());
                    let w = parse_word_with(names, rest, line_no, rel_col)?;
                    if !w.is_identity() {
                        relators.push(w);
                    }
                }
                other => {
                    return Err(syntax(line_no, col, &format!("unknown keyword `{other}`")));
                }
            }
        }
    }
    let names = names.ok_or_else(|| syntax(1, 1, "missing `gens` line"))?;
    GroupPresentation::new(names, relators)
}

fn syntax(line: usize, column: usize, message: &str) -> Error {
    Error::Syntax { line, column, message: message.to_string() }
}

fn parse_word_with(names: &[String], text: &str, line: usize, col0: usize) -> Result<Word> {
    let chars: Vec<char> = text.chars().collect();
    let mut syllables = Vec::new();
    let mut i = 0;
    let compact = compact_names(names);
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() || c == '*' || c == '.' {
            i += 1;
            continue;
        }
        let start = i;
        let (gen, inverse) = if compact {
            if !c.is_ascii_alphabetic() {
                return Err(syntax(line, col0 + i, &format!("unexpected character `{c}`")));
            }
            let lower = c.to_ascii_lowercase().to_string();
            let gen = names
                .iter()
                .position(|n| *n == lower)
                .ok_or_else(|| Error::UnknownGenerator(format!("`{c}` at line {line}, column {}", col0 + i)))?;
            i += 1;
            (gen, c.is_ascii_uppercase())
        } else {
            if !c.is_ascii_alphabetic() {
                return Err(syntax(line, col0 + i, &format!("unexpected character `{c}`")));
            }
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let token: String = chars[start..i].iter().collect();
            let lower = token.to_lowercase();
            let gen = names.iter().position(|n| *n == token || *n == lower).ok_or_else(|| {
                Error::UnknownGenerator(format!("`{token}` at line {line}, column {}", col0 + start))
            })?;
            let inverse = names[gen] != token;
            (gen, inverse)
        };
        let mut exp: i64 = 1;
        let mut j = i;
        if j < chars.len() && chars[j] == '^' {
            j += 1;
        }
        let mut negative = false;
        if j < chars.len() && chars[j] == '-' && j > i {
            negative = true;
            j += 1;
        }
        let digits_start = j;
        while j < chars.len() && chars[j].is_ascii_digit() {
            j += 1;
        }
        if j > digits_start {
            let digits: String = chars[digits_start..j].iter().collect();
            exp = digits
                .parse()
                .map_err(|_| syntax(line, col0 + digits_start, "exponent out of range"))?;
            if exp == 0 {
                return Err(Error::ZeroExponent { line, column: col0 + digits_start });
            }
            if negative {
                exp = -exp;
            }
            i = j;
        } else if j > i {
            return Err(syntax(line, col0 + j, "expected exponent digits"));
        }
        let exp = if inverse { -exp } else { exp };
        syllables.push(Syllable::new(gen, exp));
    }
    Ok(Word::from_syllables(syllables).free_reduce())
}

/// Automorphisms of the free group used to normalise presentations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Substitution {
    /// `g ↦ g⁻¹`
    Invert(usize),
    /// `g ↦ g·h^k` with `g ≠ h`
    MultiplyRight { gen: usize, by: usize, power: i64 },
    /// relabel `g ↔ h`
    Swap(usize, usize),
}

impl Substitution {
    pub fn inverse(self) -> Substitution {
        match self {
            Substitution::MultiplyRight { gen, by, power } => {
                Substitution::MultiplyRight { gen, by, power: -power }
            }
            other => other,
        }
    }

    fn images(self, n: usize) -> Result<Vec<Word>> {
        let check = |g: usize| {
            if g < n {
                Ok(())
            } else {
                Err(Error::UnknownGenerator(format!("index {g}")))
            }
        };
        let mut images: Vec<Word> = (0..n).map(Word::generator).collect();
        match self {
            Substitution::Invert(g) => {
                check(g)?;
                images[g] = Word::power(g, -1);
            }
            Substitution::MultiplyRight { gen, by, power } => {
                check(gen)?;
                check(by)?;
                if gen == by {
                    return Err(Error::InvalidPresentation("g ↦ g·g^k is not an automorphism".into()));
                }
                images[gen] = Word::from_syllables(vec![Syllable::new(gen, 1), Syllable::new(by, power)]).free_reduce();
            }
            Substitution::Swap(g, h) => {
                check(g)?;
                check(h)?;
                images.swap(g, h);
            }
        }
        Ok(images)
    }
}

/// Shape of a two-generator relator `t^{k_1} a^{l_1} ... t^{k_n} a^{l_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MagnusStats {
    pub pivot: usize,
    pub in_magnus_form: bool,
    /// `max(s_i) - min(s_i)` of the partial pivot sums; `None` outside Magnus form.
    pub height: Option<i64>,
    pub t_syllables: usize,
    pub syllable_length: usize,
    pub word_length: usize,
    pub t_exponents: Vec<i64>,
    pub a_exponents: Vec<i64>,
}

pub fn magnus_stats(r: &Word, pivot: usize) -> Result<MagnusStats> {
    if !r.is_cyclically_reduced() {
        return Err(Error::InvalidPresentation("relator must be cyclically reduced".into()));
    }
    let mut syl: Vec<Syllable> = r.syllables().to_vec();
    if !syl.iter().any(|s| s.gen == pivot) {
        return Err(Error::InvalidPresentation(
            "relator is a power of the non-pivot generator".into(),
        ));
    }
    if let Some(g) = r.max_generator() {
        if g > 1 {
            return Err(Error::InvalidPresentation("relator uses more than two generators".into()));
        }
    }
    // Rotate so the word starts with a pivot block.
    let first_pivot = syl.iter().position(|s| s.gen == pivot).unwrap();
    syl.rotate_left(first_pivot);
    let mut t_exps = Vec::new();
    let mut a_exps = Vec::new();
    for s in &syl {
        if s.gen == pivot {
            t_exps.push(s.exp);
        } else {
            a_exps.push(s.exp);
        }
    }
    let word_length = r.len();
    let in_magnus_form = t_exps.iter().sum::<i64>() == 0;
    let height = if in_magnus_form {
        let mut s = 0i64;
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for &k in &t_exps {
            s += k;
            lo = lo.min(s);
            hi = hi.max(s);
        }
        Some(hi - lo)
    } else {
        None
    };
    Ok(MagnusStats {
        pivot,
        in_magnus_form,
        height,
        t_syllables: t_exps.len(),
        syllable_length: 2 * t_exps.len(),
        word_length,
        t_exponents: t_exps,
        a_exponents: a_exps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letters(p: &GroupPresentation, i: usize) -> String {
        let r = &p.relators()[i];
        r.letters()
            .map(|l| {
                let n = p.names()[l.gen].clone();
                if l.inverse {
                    n.to_uppercase()
                } else {
                    n
                }
            })
            .collect()
    }

    #[test]
    fn parses_bbg() {
        let p = parse_presentation("gens a t; rel ta2TatATA").unwrap();
        assert_eq!(p.n_gens(), 2);
        assert_eq!(p.n_rels(), 1);
        assert_eq!(p.relators()[0].len(), 9);
        assert_eq!(letters(&p, 0), "taaTatATA");
    }

    #[test]
    fn parses_free_group() {
        let p = parse_presentation("gens x; rel ").unwrap();
        assert_eq!(p.n_gens(), 1);
        assert_eq!(p.n_rels(), 0);
    }

    #[test]
    fn exponent_one_is_redundant() {
        let a = parse_presentation("gens a t; rel ta1Ta").unwrap();
        let b = parse_presentation("gens a t; rel taTa").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_presentation("gens a t\nrel tb"), Err(Error::UnknownGenerator(_))));
        assert!(matches!(parse_presentation("gens a t\nrel ta0"), Err(Error::ZeroExponent { line: 2, .. })));
        match parse_presentation("gens a t\nrel t%a") {
            Err(Error::Syntax { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, 6);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_presentation("rel ta"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn long_names_roundtrip() {
        let p = parse_presentation("gens x0 x1 x2\nrel x0^2 x1^-1 x2 X0").unwrap();
        let text = p.to_string();
        assert_eq!(parse_presentation(&text).unwrap(), p);
        assert_eq!(p.relators()[0].exponent_sums(3), vec![1, -1, 1]);
    }

    #[test]
    fn display_roundtrip() {
        let p = parse_presentation("gens a t\nrel t3aT2ATA").unwrap();
        assert_eq!(p.to_string(), "gens a t\nrel t3aT2ATA\n");
    }

    #[test]
    fn magnus_bbg() {
        let p = parse_presentation("gens a t; rel ta2TatATA").unwrap();
        let s = p.magnus_stats(0, 1).unwrap();
        assert!(s.in_magnus_form);
        assert_eq!(s.t_syllables, 4);
        assert_eq!(s.syllable_length, 8);
        assert_eq!(s.height, Some(1));
        assert_eq!(s.word_length, 9);
    }

    #[test]
    fn magnus_height_three() {
        let p = parse_presentation("gens a t; rel t3aT2ATA").unwrap();
        let s = p.magnus_stats(0, 1).unwrap();
        assert_eq!(s.t_syllables, 3);
        assert_eq!(s.syllable_length, 6);
        assert_eq!(s.height, Some(3));
        assert_eq!(s.word_length, 9);
    }

    #[test]
    fn magnus_commutator() {
        let p = parse_presentation("gens x y; rel xyXY").unwrap();
        let s = p.magnus_stats(0, 0).unwrap();
        assert_eq!(s.height, Some(1));
        assert_eq!(s.t_syllables, 2);
    }

    #[test]
    fn magnus_rejects_pure_power() {
        let p = parse_presentation("gens a t; rel a5").unwrap();
        assert!(p.magnus_stats(0, 1).is_err());
        let q = parse_presentation("gens a t; rel t2a").unwrap();
        let s = q.magnus_stats(0, 1).unwrap();
        assert!(!s.in_magnus_form);
        assert_eq!(s.height, None);
    }

    #[test]
    fn substitution_examples() {
        let p = parse_presentation("gens a t; rel tat").unwrap();
        let q = p
            .substitute_generator(Substitution::MultiplyRight { gen: 1, by: 0, power: -1 })
            .unwrap();
        assert_eq!(q.format_word(&q.relators()[0]), "t2A");

        let p = parse_presentation("gens a t; rel ta2TA3").unwrap();
        let q = p.substitute_generator(Substitution::Invert(0)).unwrap();
        assert_eq!(q.format_word(&q.relators()[0]), "tA2Ta3");

        let p = parse_presentation("gens a t; rel taTA").unwrap();
        let q = p.substitute_generator(Substitution::Swap(0, 1)).unwrap();
        assert_eq!(q.format_word(&q.relators()[0]), "atAT");
        assert!(p.substitute_generator(Substitution::Swap(0, 5)).is_err());
    }
}
