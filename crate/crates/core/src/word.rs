//! Words over the two-letter alphabet `{X, A}`.
//!
//! A word is stored by its exponent vector `(a_0, ..., a_n)`, meaning
//! `A^{a_0} X A^{a_1} X ... X A^{a_n}` with `n` occurrences of `X`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError};

/// Default upper bound on the length of words handed to [`decompose`].
pub const DEFAULT_LENGTH_BUDGET: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    X,
    A,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'X',
            Letter::A => 'A',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    exponents: Vec<u32>,
}

impl Default for Word {
    fn default() -> Self {
        Word::empty()
    }
}

impl Word {
    pub fn empty() -> Self {
        Word { exponents: vec![0] }
    }

    /// The single letter `X`.
    pub fn x() -> Self {
        Word {
            exponents: vec![0, 0],
        }
    }

    /// `A^k` (the empty word for `k = 0`).
    pub fn a_power(k: u32) -> Self {
        Word { exponents: vec![k] }
    }

    /// Builds a word from its exponent vector. The vector must be nonempty.
    pub fn from_exponents(exponents: Vec<u32>) -> Result<Self, Error> {
        if exponents.is_empty() {
            return Err(Error::InvalidArgument(
                "exponent vector must contain at least a_0".into(),
            ));
        }
        Ok(Word { exponents })
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut b = WordBuilder::new();
        for l in letters {
            match l {
                Letter::X => b.push_x(),
                Letter::A => b.push_a(1),
            }
        }
        b.finish()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Number of `X` letters.
    pub fn x_count(&self) -> usize {
        self.exponents.len() - 1
    }

    /// Number of `A` letters.
    pub fn a_count(&self) -> u64 {
        self.exponents.iter().map(|&a| a as u64).sum()
    }

    pub fn len(&self) -> usize {
        self.x_count() + self.a_count() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn starts_with_a(&self) -> bool {
        self.exponents[0] > 0
    }

    pub fn ends_with_a(&self) -> bool {
        *self.exponents.last().unwrap() > 0
    }

    pub fn ends_with_x(&self) -> bool {
        self.x_count() > 0 && !self.ends_with_a()
    }

    /// Begins and ends with `X` (and therefore contains one).
    pub fn is_canonical(&self) -> bool {
        self.x_count() > 0 && !self.starts_with_a() && !self.ends_with_a()
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.len());
        for (i, &a) in self.exponents.iter().enumerate() {
            if i > 0 {
                out.push(Letter::X);
            }
            out.extend(std::iter::repeat(Letter::A).take(a as usize));
        }
        out
    }

    /// Removes leading and trailing `A`s.
    pub fn strip_a(&self) -> Word {
        let mut e = self.exponents.clone();
        e[0] = 0;
        *e.last_mut().unwrap() = 0;
        Word { exponents: e }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut e = self.exponents.clone();
        *e.last_mut().unwrap() += other.exponents[0];
        e.extend_from_slice(&other.exponents[1..]);
        Word { exponents: e }
    }

    /// `self ∘ w`: every `X` in `self` replaced by `w`.
    pub fn compose(&self, w: &Word) -> Word {
        let mut b = WordBuilder::new();
        for (i, &a) in self.exponents.iter().enumerate() {
            if i > 0 {
                b.push_word(w);
            }
            b.push_a(a);
        }
        b.finish()
    }

    /// `w^m` as a concatenation.
    pub fn repeat(&self, m: u32) -> Word {
        let mut out = Word::empty();
        for _ in 0..m {
            out = out.concat(self);
        }
        out
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let push_run = |s: &mut String, c: char, k: u32| {
            if k == 0 {
                return;
            }
            s.push(c);
            if k > 1 {
                s.push('^');
                s.push_str(&k.to_string());
            }
        };
        let mut x_run = 0u32;
        for (i, &a) in self.exponents.iter().enumerate() {
            if i > 0 {
                x_run += 1;
            }
            if a > 0 || i + 1 == self.exponents.len() {
                push_run(&mut s, 'X', x_run);
                x_run = 0;
                push_run(&mut s, 'A', a);
            }
        }
        s
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_word(&s).map_err(serde::de::Error::custom)
    }
}

/// Incremental construction of an exponent vector.
#[derive(Debug, Clone)]
pub struct WordBuilder {
    exponents: Vec<u32>,
}

impl Default for WordBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl WordBuilder {
    pub fn new() -> Self {
        WordBuilder {
            exponents: vec![0],
        }
    }

    pub fn push_a(&mut self, k: u32) {
        *self.exponents.last_mut().unwrap() += k;
    }

    pub fn push_x(&mut self) {
        self.exponents.push(0);
    }

    pub fn push_word(&mut self, w: &Word) {
        self.push_a(w.exponents[0]);
        for &a in &w.exponents[1..] {
            self.push_x();
            self.push_a(a);
        }
    }

    pub fn finish(self) -> Word {
        Word {
            exponents: self.exponents,
        }
    }
}

/// Parses `X`, `A` and `^<positive integer>`; whitespace is ignored.
pub fn parse_word(text: &str) -> Result<Word, ParseError> {
    let mut b = WordBuilder::new();
    let mut chars = text.char_indices().peekable();
    while let Some((pos, c)) = chars.next() {
        let letter = match c {
            c if c.is_whitespace() => continue,
            'X' => Letter::X,
            'A' => Letter::A,
            '^' => return Err(ParseError::new(pos, "exponent without a letter")),
            other => {
                return Err(ParseError::new(
                    pos,
                    format!("unexpected character {other:?}"),
                ))
            }
        };
        while matches!(chars.peek(), Some((_, c)) if c.is_whitespace()) {
            chars.next();
        }
        let mut exp = 1u32;
        if let Some(&(caret, '^')) = chars.peek() {
            chars.next();
            while matches!(chars.peek(), Some((_, c)) if c.is_whitespace()) {
                chars.next();
            }
            let mut digits = String::new();
            let start = chars.peek().map(|&(p, _)| p).unwrap_or(text.len());
            while let Some(&(_, d)) = chars.peek() {
                if d.is_ascii_digit() {
                    digits.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            if digits.is_empty() {
                return Err(ParseError::new(caret, "expected digits after '^'"));
            }
            exp = digits
                .parse()
                .map_err(|_| ParseError::new(start, "exponent out of range"))?;
            if exp == 0 {
                return Err(ParseError::new(start, "exponent must be positive"));
            }
        }
        match letter {
            Letter::A => b.push_a(exp),
            Letter::X => {
                for _ in 0..exp {
                    b.push_x();
                }
            }
        }
    }
    Ok(b.finish())
}

/// The elementary maps `l : w ↦ Aw`, `r : w ↦ wA` and
/// `π_{m,k} : w ↦ (wA^k)^m w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Morphism {
    L,
    R,
    Pi { m: u32, k: u32 },
}

impl Morphism {
    pub fn pi(m: u32, k: u32) -> Result<Self, Error> {
        if m == 0 {
            return Err(Error::InvalidArgument("π_{m,k} requires m >= 1".into()));
        }
        Ok(Morphism::Pi { m, k })
    }

    pub fn apply(&self, w: &Word) -> Word {
        match *self {
            Morphism::L => Word::a_power(1).concat(w),
            Morphism::R => w.concat(&Word::a_power(1)),
            Morphism::Pi { m, k } => w.concat(&Word::a_power(k)).repeat(m).concat(w),
        }
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Morphism::L => f.write_str("l"),
            Morphism::R => f.write_str("r"),
            Morphism::Pi { m, k } => write!(f, "pi({m},{k})"),
        }
    }
}

impl FromStr for Morphism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "l" | "L" => return Ok(Morphism::L),
            "r" | "R" => return Ok(Morphism::R),
            _ => {}
        }
        let inner = s
            .strip_prefix("pi(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidArgument(format!("bad morphism {s:?}")))?;
        let (m, k) = inner
            .split_once(',')
            .ok_or_else(|| Error::InvalidArgument(format!("bad morphism {s:?}")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidArgument(format!("bad morphism {s:?}")))
        };
        Morphism::pi(parse(m)?, parse(k)?)
    }
}

impl Serialize for Morphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Morphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Morphisms applied innermost-first to the base word `X`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DecompositionWitness {
    pub morphisms: Vec<Morphism>,
}

impl DecompositionWitness {
    pub fn new(morphisms: Vec<Morphism>) -> Self {
        DecompositionWitness { morphisms }
    }

    pub fn replay(&self) -> Word {
        self.morphisms
            .iter()
            .fold(Word::x(), |w, phi| phi.apply(&w))
    }

    pub fn len(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphisms.is_empty()
    }
}

impl fmt::Display for DecompositionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Printed outermost-first, as a composition applied to X.
        if self.morphisms.is_empty() {
            return f.write_str("X");
        }
        for (i, phi) in self.morphisms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" o ")?;
            }
            write!(f, "{phi}")?;
        }
        f.write_str(" (X)")
    }
}

/// Searches for a total decomposition of `w`.
///
/// Words longer than [`DEFAULT_LENGTH_BUDGET`] are still handled; the budget
/// only documents the sizes the memo table is tuned for.
pub fn decompose(w: &Word) -> Option<DecompositionWitness> {
    let mut memo = HashMap::new();
    let letters = w.letters();
    search(&letters, &mut memo).map(|mut outer_first| {
        outer_first.reverse();
        DecompositionWitness::new(outer_first)
    })
}

pub fn is_totally_decomposable(w: &Word) -> bool {
    decompose(w).is_some()
}

type Memo = HashMap<Vec<Letter>, Option<Vec<Morphism>>>;

// Returns the morphisms outermost-first.
fn search(w: &[Letter], memo: &mut Memo) -> Option<Vec<Morphism>> {
    if w == [Letter::X] {
        return Some(Vec::new());
    }
    if !w.contains(&Letter::X) {
        return None;
    }
    if let Some(hit) = memo.get(w) {
        return hit.clone();
    }
    let found = search_uncached(w, memo);
    memo.insert(w.to_vec(), found.clone());
    found
}

fn search_uncached(w: &[Letter], memo: &mut Memo) -> Option<Vec<Morphism>> {
    let total = w.len();
    if w[0] == Letter::A {
        if let Some(mut rest) = search(&w[1..], memo) {
            rest.insert(0, Morphism::L);
            return Some(rest);
        }
    }
    if w[total - 1] == Letter::A {
        if let Some(mut rest) = search(&w[..total - 1], memo) {
            rest.insert(0, Morphism::R);
            return Some(rest);
        }
    }
    // w = (v A^k)^m v with |w| = (m+1)|v| + mk.
    for vlen in 1..total {
        let v = &w[total - vlen..];
        let mut m = 1;
        while (m + 1) * vlen <= total {
            let rest = total - (m + 1) * vlen;
            if rest % m == 0 && matches_pi(w, v, m, rest / m) {
                if let Some(mut inner) = search(v, memo) {
                    inner.insert(
                        0,
                        Morphism::Pi {
                            m: m as u32,
                            k: (rest / m) as u32,
                        },
                    );
                    return Some(inner);
                }
            }
            m += 1;
        }
    }
    None
}

fn matches_pi(w: &[Letter], v: &[Letter], m: usize, k: usize) -> bool {
    let block = v.len() + k;
    (0..m).all(|i| {
        let start = i * block;
        w[start..start + v.len()] == *v
            && w[start + v.len()..start + block]
                .iter()
                .all(|&l| l == Letter::A)
    }) && w[m * block..] == *v
}

/// All nonempty words of length at most `max_len`, by length and then
/// lexicographically with `X < A`. With `canonical`, only words that begin
/// and end with `X`.
pub fn enumerate_words(max_len: usize, canonical: bool) -> impl Iterator<Item = Word> {
    (1..=max_len).flat_map(move |len| {
        (0u64..(1u64 << len)).filter_map(move |bits| {
            // Most significant bit is the first letter; 0 = X, 1 = A.
            let letter = |i: usize| {
                if bits >> (len - 1 - i) & 1 == 0 {
                    Letter::X
                } else {
                    Letter::A
                }
            };
            if canonical && (letter(0) != Letter::X || letter(len - 1) != Letter::X) {
                return None;
            }
            Some(Word::from_letters((0..len).map(letter)))
        })
    })
}
