//! Words in a free group of rank 2, up to free homotopy.
//!
//! Two alphabets are used: `{A, X}` for the handlebody `H` and `{B, Y}` for
//! `H'`. A word lives in exactly one of them. In text form an apostrophe
//! marks an inverse letter, e.g. `A X A' X`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alphabet {
    /// `{A, X}`, generators of `π1(H)`.
    Inner,
    /// `{B, Y}`, generators of `π1(H')`.
    Outer,
}

impl Alphabet {
    pub fn symbols(self) -> [char; 2] {
        match self {
            Alphabet::Inner => ['A', 'X'],
            Alphabet::Outer => ['B', 'Y'],
        }
    }

    fn classify(c: char) -> Option<(Alphabet, Generator)> {
        Some(match c {
            'A' => (Alphabet::Inner, Generator::First),
            'X' => (Alphabet::Inner, Generator::Second),
            'B' => (Alphabet::Outer, Generator::First),
            'Y' => (Alphabet::Outer, Generator::Second),
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: Generator,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(generator: Generator, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub const fn first() -> Self {
        Self::new(Generator::First, false)
    }

    pub const fn second() -> Self {
        Self::new(Generator::Second, false)
    }

    pub fn inv(self) -> Self {
        Self::new(self.generator, !self.inverse)
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeWord {
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn new(alphabet: Alphabet, letters: Vec<Letter>) -> Self {
        Self { alphabet, letters }
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Self::new(alphabet, Vec::new())
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
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

    pub fn push(&mut self, l: Letter) {
        self.letters.push(l);
    }

    /// Appends `l^n`, or `l^{-n}` as inverse letters when `n < 0`.
    pub fn push_power(&mut self, l: Letter, n: i64) {
        let l = if n < 0 { l.inv() } else { l };
        for _ in 0..n.unsigned_abs() {
            self.letters.push(l);
        }
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &FreeWord) -> Result<FreeWord> {
        self.same_alphabet(other)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(FreeWord::new(self.alphabet, letters))
    }

    /// `u^n` without reduction.
    pub fn repeat(&self, n: usize) -> FreeWord {
        FreeWord::new(self.alphabet, self.letters.repeat(n))
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord::new(
            self.alphabet,
            self.letters.iter().rev().map(|l| l.inv()).collect(),
        )
    }

    /// Moves the first `n` letters to the end.
    pub fn rotate_left(&self, n: usize) -> FreeWord {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            letters.rotate_left(n % self.letters.len());
        }
        FreeWord::new(self.alphabet, letters)
    }

    /// Moves the last `n` letters to the front.
    pub fn rotate_right(&self, n: usize) -> FreeWord {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            letters.rotate_right(n % self.letters.len());
        }
        FreeWord::new(self.alphabet, letters)
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    fn same_alphabet(&self, other: &FreeWord) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::Precondition(format!(
                "cannot combine a word over {:?} with one over {:?}",
                self.alphabet, other.alphabet
            )));
        }
        Ok(())
    }

    /// Parses a word in a fixed alphabet. Letters may be separated by
    /// whitespace; `'` after a letter inverts it. `1` is the empty word.
    pub fn parse_in(alphabet: Alphabet, s: &str) -> Result<FreeWord> {
        let w: FreeWord = parse_word(s, Some(alphabet))?;
        Ok(w)
    }

    fn letter_char(&self, l: Letter) -> char {
        let [first, second] = self.alphabet.symbols();
        match l.generator {
            Generator::First => first,
            Generator::Second => second,
        }
    }
}

fn parse_word(s: &str, fixed: Option<Alphabet>) -> Result<FreeWord> {
    if s.trim() == "1" {
        return Ok(FreeWord::empty(fixed.unwrap_or(Alphabet::Inner)));
    }
    let mut alphabet = fixed;
    let mut letters = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some((pos, c)) = chars.next() {
        if c.is_whitespace() {
            continue;
        }
        let (alpha, generator) = Alphabet::classify(c)
            .ok_or_else(|| Error::parse(pos, format!("expected one of A, X, B, Y but found `{c}`")))?;
        match alphabet {
            Some(existing) if existing != alpha => {
                return Err(Error::parse(
                    pos,
                    format!("letter `{c}` is not in the {:?} alphabet", existing),
                ))
            }
            _ => alphabet = Some(alpha),
        }
        let mut inverse = false;
        if let Some(&(_, '\'')) = chars.peek() {
            chars.next();
            inverse = true;
        }
        letters.push(Letter::new(generator, inverse));
    }
    Ok(FreeWord::new(alphabet.unwrap_or(Alphabet::Inner), letters))
}

impl FromStr for FreeWord {
    type Err = Error;

    /// The alphabet is inferred from the letters; the empty word defaults to
    /// the inner alphabet.
    fn from_str(s: &str) -> Result<Self> {
        parse_word(s, None)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, &l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", self.letter_char(l))?;
            if l.inverse {
                f.write_str("'")?;
            }
        }
        Ok(())
    }
}

impl Serialize for FreeWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FreeWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A cyclically reduced word. Equality is up to rotation.
#[derive(Debug, Clone, Eq)]
pub struct CyclicWord {
    word: FreeWord,
}

impl CyclicWord {
    pub fn word(&self) -> &FreeWord {
        &self.word
    }

    pub fn alphabet(&self) -> Alphabet {
        self.word.alphabet
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// All rotations, starting with the stored one.
    pub fn rotations(&self) -> impl Iterator<Item = FreeWord> + '_ {
        (0..self.word.len().max(1)).map(move |i| self.word.rotate_left(i))
    }
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &Self) -> bool {
        conjugate_equal(self, other)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.word)
    }
}

impl Serialize for CyclicWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.word.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CyclicWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        FreeWord::deserialize(deserializer).map(|w| cyclic_reduce(&w))
    }
}

impl From<&FreeWord> for CyclicWord {
    fn from(w: &FreeWord) -> Self {
        cyclic_reduce(w)
    }
}

/// Cancels adjacent inverse pairs until none remain.
pub fn free_reduce(w: &FreeWord) -> FreeWord {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.letters {
        match out.last() {
            Some(&last) if last.cancels(l) => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    FreeWord::new(w.alphabet, out)
}

/// Free reduction followed by peeling matching inverse letters off both ends.
pub fn cyclic_reduce(w: &FreeWord) -> CyclicWord {
    let reduced = free_reduce(w);
    let letters = reduced.letters;
    let (mut lo, mut hi) = (0usize, letters.len());
    while hi - lo >= 2 && letters[lo].cancels(letters[hi - 1]) {
        lo += 1;
        hi -= 1;
    }
    CyclicWord {
        word: FreeWord::new(w.alphabet, letters[lo..hi].to_vec()),
    }
}

/// Conjugacy of cyclically reduced words: one is a rotation of the other.
pub fn conjugate_equal(w1: &CyclicWord, w2: &CyclicWord) -> bool {
    if w1.alphabet() != w2.alphabet() || w1.len() != w2.len() {
        return false;
    }
    if w1.is_empty() {
        return true;
    }
    let n = w1.len();
    let a = &w1.word.letters;
    let b = &w2.word.letters;
    (0..n).any(|shift| (0..n).all(|i| a[(i + shift) % n] == b[i]))
}

/// Letter order reversed; each letter keeps its sign.
pub fn reverse(w: &FreeWord) -> FreeWord {
    FreeWord::new(w.alphabet, w.letters.iter().rev().copied().collect())
}

pub fn is_cyclic_palindrome(w: &FreeWord) -> bool {
    conjugate_equal(&cyclic_reduce(w), &cyclic_reduce(&reverse(w)))
}

/// Exponent sums of the two generators.
pub fn abelianize(w: &FreeWord) -> (i64, i64) {
    w.letters.iter().fold((0, 0), |(p, q), l| {
        let s = if l.inverse { -1 } else { 1 };
        match l.generator {
            Generator::First => (p + s, q),
            Generator::Second => (p, q + s),
        }
    })
}
