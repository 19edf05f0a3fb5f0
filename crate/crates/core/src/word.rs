//! Free-group words over named generators.
//!
//! A [`Word`] is always stored freely reduced: no letter is ever adjacent to
//! its own inverse. Powers are expanded into repeated letters, so every
//! [`Letter`] carries an exponent of exactly `+1` or `-1`.

use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::WordError;

/// A named free generator. Two generators are equal iff their names are.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(Arc<str>);

impl Generator {
    /// Builds a generator, checking the name against `[A-Za-z][A-Za-z0-9_]*`.
    pub fn new(name: &str) -> Result<Self, WordError> {
        if is_valid_name(name) {
            Ok(Generator(Arc::from(name)))
        } else {
            Err(WordError::InvalidGeneratorName(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        Generator::new(&name).map_err(D::Error::custom)
    }
}

impl TryFrom<&str> for Generator {
    type Error = WordError;

    fn try_from(name: &str) -> Result<Self, Self::Error> {
        Generator::new(name)
    }
}

/// A generator raised to the power `+1` or `-1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    gen: Generator,
    exp: i8,
}

impl Letter {
    pub fn new(gen: Generator, exp: i8) -> Result<Self, WordError> {
        match exp {
            1 | -1 => Ok(Letter { gen, exp }),
            other => Err(WordError::InvalidExponent(other as i64)),
        }
    }

    pub fn pos(gen: Generator) -> Self {
        Letter { gen, exp: 1 }
    }

    pub fn neg(gen: Generator) -> Self {
        Letter { gen, exp: -1 }
    }

    pub fn generator(&self) -> &Generator {
        &self.gen
    }

    pub fn exponent(&self) -> i8 {
        self.exp
    }

    pub fn inverse(&self) -> Letter {
        Letter { gen: self.gen.clone(), exp: -self.exp }
    }

    /// True when `self` followed by `other` cancels.
    pub fn cancels(&self, other: &Letter) -> bool {
        self.gen == other.gen && self.exp == -other.exp
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 1 {
            write!(f, "{}", self.gen)
        } else {
            write!(f, "{}^-1", self.gen)
        }
    }
}

/// Which expansion `[u, v]` denotes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommutatorConvention {
    /// `[u, v] = u v u^-1 v^-1`
    #[default]
    Default,
    /// `[u, v] = u^-1 v^-1 u v`, as in GAP.
    Gap,
}

impl CommutatorConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            CommutatorConvention::Default => "default",
            CommutatorConvention::Gap => "gap",
        }
    }
}

impl fmt::Display for CommutatorConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CommutatorConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "default" => Ok(CommutatorConvention::Default),
            "gap" => Ok(CommutatorConvention::Gap),
            other => Err(format!("unknown commutator convention `{other}` (expected `default` or `gap`)")),
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    /// Freely reduces an arbitrary letter sequence.
    ///
    /// Uses a single left-to-right stack pass; since free reduction is
    /// confluent the result does not depend on the order of cancellations.
    pub fn free_reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for l in letters {
            if stack.last().is_some_and(|top| top.cancels(&l)) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word { letters: stack }
    }

    pub fn generator(gen: &Generator) -> Self {
        Word { letters: vec![Letter::pos(gen.clone())] }
    }

    /// `gen^n`, expanded into |n| letters.
    pub fn power_of(gen: &Generator, n: i64) -> Self {
        let l = if n >= 0 { Letter::pos(gen.clone()) } else { Letter::neg(gen.clone()) };
        Word { letters: vec![l; n.unsigned_abs() as usize] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letters reversed with exponents negated.
    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(Letter::inverse).collect() }
    }

    /// `self^n` for any integer `n`.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let reps = n.unsigned_abs() as usize;
        Word::free_reduce(base.letters.iter().cloned().cycle().take(base.len() * reps))
    }

    /// `by · self · by^-1`, freely reduced.
    pub fn conjugate(&self, by: &Word) -> Word {
        Word::free_reduce(
            by.letters
                .iter()
                .cloned()
                .chain(self.letters.iter().cloned())
                .chain(by.letters.iter().rev().map(Letter::inverse)),
        )
    }

    /// Expands `[u, v]` under the given convention.
    pub fn commutator(u: &Word, v: &Word, convention: CommutatorConvention) -> Word {
        match convention {
            CommutatorConvention::Default => &(&(u * v) * &u.inverse()) * &v.inverse(),
            CommutatorConvention::Gap => &(&(&u.inverse() * &v.inverse()) * u) * v,
        }
    }

    /// Replaces every occurrence of `gen^±1` by `replacement^±1`.
    pub fn substitute(&self, gen: &Generator, replacement: &Word) -> Word {
        let inv = replacement.inverse();
        Word::free_reduce(self.letters.iter().flat_map(|l| {
            let piece: Vec<Letter> = if l.gen == *gen {
                if l.exp == 1 {
                    replacement.letters.clone()
                } else {
                    inv.letters.clone()
                }
            } else {
                vec![l.clone()]
            };
            piece
        }))
    }

    /// Substitutes several generators at once. Generators without an entry
    /// in `map` are left alone.
    pub fn substitute_all<F>(&self, mut map: F) -> Word
    where
        F: FnMut(&Generator) -> Option<Word>,
    {
        let mut out = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            match map(&l.gen) {
                Some(w) if l.exp == 1 => out.extend(w.letters),
                Some(w) => out.extend(w.inverse().letters),
                None => out.push(l.clone()),
            }
        }
        Word::free_reduce(out)
    }

    /// Splits off the longest conjugating prefix: returns `(core, c)` with
    /// `self = c · core · c^-1` and `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.letters.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k].cancels(&self.letters[n - 1 - k]) {
            k += 1;
        }
        let core = Word { letters: self.letters[k..n - k].to_vec() };
        let conj = Word { letters: self.letters[..k].to_vec() };
        (core, conj)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(a), Some(b)) => self.letters.len() == 1 || !b.cancels(a),
            _ => true,
        }
    }

    /// Cyclic rotation starting at letter `k`. Only meaningful on cyclically
    /// reduced words, where it stays reduced.
    pub fn rotate(&self, k: usize) -> Word {
        if self.letters.is_empty() {
            return Word::identity();
        }
        let k = k % self.letters.len();
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word::free_reduce(letters)
    }

    pub fn exponent_sum(&self, gen: &Generator) -> i64 {
        self.letters.iter().filter(|l| l.gen == *gen).map(|l| l.exp as i64).sum()
    }

    /// Number of letters (of either sign) on `gen`.
    pub fn occurrences(&self, gen: &Generator) -> usize {
        self.letters.iter().filter(|l| l.gen == *gen).count()
    }

    pub fn contains(&self, gen: &Generator) -> bool {
        self.letters.iter().any(|l| l.gen == *gen)
    }

    /// Distinct generators in order of first appearance.
    pub fn generators(&self) -> Vec<Generator> {
        let mut seen: Vec<Generator> = Vec::new();
        for l in &self.letters {
            if !seen.contains(&l.gen) {
                seen.push(l.gen.clone());
            }
        }
        seen
    }

    /// True when the two words agree up to cyclic permutation and inversion,
    /// i.e. have the same normal closure as relators. Both must be
    /// cyclically reduced.
    pub fn same_relator(&self, other: &Word) -> bool {
        if self.len() != other.len() {
            return false;
        }
        if self.is_empty() {
            return true;
        }
        let inv = other.inverse();
        (0..self.len()).any(|k| {
            let r = self.rotate(k);
            r == *other || r == inv
        })
    }

    /// Display form with caret exponents and compressed powers.
    pub fn to_text(&self) -> String {
        let spaced = self.letters.iter().any(|l| l.gen.name().len() > 1);
        self.to_text_with(spaced)
    }

    pub(crate) fn to_text_with(&self, spaced: bool) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = &self.letters[i];
            let mut j = i + 1;
            while j < self.letters.len() && self.letters[j] == *l {
                j += 1;
            }
            let power = (j - i) as i64 * l.exp as i64;
            parts.push(if power == 1 { l.gen.to_string() } else { format!("{}^{}", l.gen, power) });
            i = j;
        }
        parts.join(if spaced { " " } else { "" })
    }
}

impl<'a> Mul<&'a Word> for &'a Word {
    type Output = Word;

    fn mul(self, rhs: &'a Word) -> Word {
        Word::free_reduce(self.letters.iter().cloned().chain(rhs.letters.iter().cloned()))
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self.to_text())
    }
}

// JSON form: [["gen", exp], ...] with exp in {1, -1}.
impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.letters.iter().map(|l| (l.gen.name(), l.exp)))
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: Vec<(String, i64)> = Vec::deserialize(deserializer)?;
        let mut letters = Vec::with_capacity(raw.len());
        for (name, exp) in raw {
            let gen = Generator::new(&name).map_err(D::Error::custom)?;
            let exp = i8::try_from(exp).map_err(|_| D::Error::custom(WordError::InvalidExponent(exp)))?;
            letters.push(Letter::new(gen, exp).map_err(D::Error::custom)?);
        }
        Ok(Word::free_reduce(letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str) -> Generator {
        Generator::new(name).unwrap()
    }

    /// Builds a word from compact text like "xyXY" where uppercase is inverse.
    fn w(spec: &str) -> Word {
        Word::free_reduce(raw(spec))
    }

    fn raw(spec: &str) -> Vec<Letter> {
        spec.chars()
            .map(|c| {
                let gen = g(&c.to_ascii_lowercase().to_string());
                if c.is_ascii_uppercase() {
                    Letter::neg(gen)
                } else {
                    Letter::pos(gen)
                }
            })
            .collect()
    }

    #[test]
    fn generator_names() {
        assert!(Generator::new("a").is_ok());
        assert!(Generator::new("x_1").is_ok());
        assert!(Generator::new("1x").is_err());
        assert!(Generator::new("").is_err());
        assert!(Generator::new("a-b").is_err());
    }

    #[test]
    fn free_reduce_examples() {
        assert!(w("aA").is_identity());
        assert_eq!(w("xyxYXY").len(), 6);
        assert!(w("abBaAA").is_identity());
    }

    #[test]
    fn invert_examples() {
        assert!(Word::identity().inverse().is_identity());
        assert_eq!(w("xQXq").inverse(), w("QxqX"));
        assert_eq!(w("qY").inverse(), w("yQ"));
    }

    #[test]
    fn conjugate_examples() {
        assert!(Word::identity().conjugate(&w("abc")).is_identity());
        assert_eq!(w("q").conjugate(&w("g")), w("gqG"));
        assert_eq!(w("a").conjugate(&w("a")), w("a"));
    }

    #[test]
    fn commutator_examples() {
        let conv = CommutatorConvention::Default;
        assert!(Word::commutator(&w("a"), &w("a"), conv).is_identity());
        assert_eq!(Word::commutator(&w("x"), &w("Q"), conv), w("xQXq"));
        assert_eq!(Word::commutator(&w("a"), &w("q"), conv), w("aqAQ"));
        assert_eq!(Word::commutator(&w("a"), &w("q"), CommutatorConvention::Gap), w("AQaq"));
    }

    #[test]
    fn substitute_examples() {
        assert!(w("qY").substitute(&g("y"), &w("q")).is_identity());
        let step = w("xyXwY").substitute(&g("y"), &w("q"));
        assert_eq!(step.substitute(&g("w"), &w("g")), w("xqXgQ"));
        assert!(Word::identity().substitute(&g("g"), &w("abc")).is_identity());
        // the eliminated relator says g = x q^-1 x^-1 q = [x, q^-1]
        let g_def = w("xqX").inverse() * w("q");
        assert_eq!(g_def, Word::commutator(&w("x"), &w("Q"), CommutatorConvention::Default));
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (core, c) = w("abA").cyclic_reduce();
        assert_eq!(core, w("b"));
        assert_eq!(c, w("a"));
        let rel = w("xyxYXY");
        assert_eq!(rel.cyclic_reduce(), (rel.clone(), Word::identity()));
        assert_eq!(Word::identity().cyclic_reduce(), (Word::identity(), Word::identity()));
        let (core, c) = w("abcBA").cyclic_reduce();
        assert_eq!((core, c), (w("c"), w("ab")));
    }

    #[test]
    fn same_relator_up_to_rotation_and_inversion() {
        assert!(w("vUvu").same_relator(&w("uvUv")));
        assert!(w("abAB").same_relator(&w("baBA")));
        assert!(!w("abAB").same_relator(&w("aabb")));
    }

    #[test]
    fn text_form_compresses_powers() {
        assert_eq!(w("gQQg").to_text(), "gq^-2g");
        assert_eq!(Word::identity().to_text(), "1");
        let long = Word::generator(&g("x1")) * Word::power_of(&g("y"), -2);
        assert_eq!(long.to_text(), "x1 y^-2");
    }

    #[test]
    fn json_shape() {
        let json = serde_json::to_string(&w("aB")).unwrap();
        assert_eq!(json, r#"[["a",1],["b",-1]]"#);
        let back: Word = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w("aB"));
        assert!(serde_json::from_str::<Word>(r#"[["a",2]]"#).is_err());
    }
}
