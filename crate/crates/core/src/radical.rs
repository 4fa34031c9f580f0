//! Expressions in `A`, `B`, products and rational powers, and the closed-form
//! solutions they give for totally decomposable words.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::backends::{eval_word, GroupBackend};
use crate::error::{ParseError, Result};
use crate::word::{DecompositionWitness, Morphism, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RadicalExpr {
    Letter(Symbol),
    /// Never nested and never a single factor; the empty product is the identity.
    Product(Vec<RadicalExpr>),
    Power(Box<RadicalExpr>, BigRational),
}

impl RadicalExpr {
    pub fn a() -> Self {
        RadicalExpr::Letter(Symbol::A)
    }

    pub fn b() -> Self {
        RadicalExpr::Letter(Symbol::B)
    }

    pub fn identity() -> Self {
        RadicalExpr::Product(Vec::new())
    }

    /// Flattening product constructor.
    pub fn product<I: IntoIterator<Item = RadicalExpr>>(factors: I) -> Self {
        let mut out = Vec::new();
        for f in factors {
            match f {
                RadicalExpr::Product(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            RadicalExpr::Product(out)
        }
    }

    pub fn pow(self, r: BigRational) -> Self {
        RadicalExpr::Power(Box::new(self), r)
    }

    pub fn pow_frac(self, n: i64, d: i64) -> Self {
        self.pow(BigRational::new(n.into(), d.into()))
    }

    /// Every exponent appearing in the tree, outermost first.
    pub fn exponents(&self) -> Vec<BigRational> {
        let mut out = Vec::new();
        self.collect_exponents(&mut out);
        out
    }

    fn collect_exponents(&self, out: &mut Vec<BigRational>) {
        match self {
            RadicalExpr::Letter(_) => {}
            RadicalExpr::Product(fs) => fs.iter().for_each(|f| f.collect_exponents(out)),
            RadicalExpr::Power(base, r) => {
                out.push(r.clone());
                base.collect_exponents(out);
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            RadicalExpr::Letter(_) => 1,
            RadicalExpr::Product(fs) => 1 + fs.iter().map(RadicalExpr::size).sum::<usize>(),
            RadicalExpr::Power(base, _) => 1 + base.size(),
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        self.render_into(&mut s);
        s
    }

    fn render_into(&self, s: &mut String) {
        match self {
            RadicalExpr::Letter(Symbol::A) => s.push('A'),
            RadicalExpr::Letter(Symbol::B) => s.push('B'),
            RadicalExpr::Product(fs) if fs.is_empty() => s.push('1'),
            RadicalExpr::Product(fs) => fs.iter().for_each(|f| f.render_into(s)),
            RadicalExpr::Power(base, r) => {
                if matches!(**base, RadicalExpr::Letter(_)) {
                    base.render_into(s);
                } else {
                    s.push('(');
                    base.render_into(s);
                    s.push(')');
                }
                s.push_str(&format!("^({r})"));
            }
        }
    }
}

impl fmt::Display for RadicalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    _src: &'a str,
}

fn closing(open: char) -> Option<char> {
    match open {
        '(' => Some(')'),
        '[' => Some(']'),
        '{' => Some('}'),
        _ => None,
    }
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            chars: src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            _src: src,
        }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or_else(
            || self.chars.last().map_or(0, |(i, c)| i + c.len_utf8()),
            |(i, _)| *i,
        )
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.offset(), msg)
    }

    fn product(&mut self) -> std::result::Result<RadicalExpr, ParseError> {
        let mut factors = Vec::new();
        while let Some(c) = self.peek() {
            if matches!(c, ')' | ']' | '}') {
                break;
            }
            factors.push(self.factor()?);
        }
        Ok(RadicalExpr::product(factors))
    }

    fn factor(&mut self) -> std::result::Result<RadicalExpr, ParseError> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end"))?;
        let mut base = match c {
            'A' => {
                self.pos += 1;
                RadicalExpr::a()
            }
            'B' => {
                self.pos += 1;
                RadicalExpr::b()
            }
            '1' => {
                self.pos += 1;
                RadicalExpr::identity()
            }
            _ => {
                let close = closing(c).ok_or_else(|| self.err(format!("unexpected {c:?}")))?;
                self.pos += 1;
                let inner = self.product()?;
                if self.peek() != Some(close) {
                    return Err(self.err(format!("expected {close:?}")));
                }
                self.pos += 1;
                inner
            }
        };
        while self.peek() == Some('^') {
            self.pos += 1;
            base = base.pow(self.exponent()?);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> std::result::Result<BigRational, ParseError> {
        let start = self.offset();
        let close = self.peek().and_then(closing);
        if close.is_some() {
            self.pos += 1;
        }
        let mut text = String::new();
        while let Some(c) = self.peek() {
            let ok = c.is_ascii_digit() || (c == '-' && text.is_empty()) || (close.is_some() && c == '/');
            if !ok {
                break;
            }
            text.push(c);
            self.pos += 1;
        }
        if let Some(close) = close {
            if self.peek() != Some(close) {
                return Err(self.err(format!("expected {close:?}")));
            }
            self.pos += 1;
        }
        crate::backends::parse_rational(&text).map_err(|_| ParseError::new(start, format!("bad exponent {text:?}")))
    }
}

impl FromStr for RadicalExpr {
    type Err = ParseError;

    /// Inverse of [`RadicalExpr::render`]; `[]` and `{}` are accepted as
    /// brackets and exponents may be bare integers.
    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let mut p = Parser::new(s);
        let e = p.product()?;
        if p.peek().is_some() {
            return Err(p.err("unbalanced bracket"));
        }
        Ok(e)
    }
}

impl Serialize for RadicalExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for RadicalExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn half(k: u32, sign: i64) -> BigRational {
    BigRational::new(BigInt::from(sign * k as i64), BigInt::from(2))
}

/// Undoes one morphism: the unique `x` with `phi(x) = y`.
pub fn invert_morphism(phi: &Morphism, y: RadicalExpr) -> RadicalExpr {
    let a = RadicalExpr::a;
    match *phi {
        Morphism::L => RadicalExpr::product([a().pow_frac(-1, 1), y]),
        Morphism::R => RadicalExpr::product([y, a().pow_frac(-1, 1)]),
        Morphism::Pi { m, k: 0 } => y.pow_frac(1, m as i64 + 1),
        Morphism::Pi { m, k } => {
            let inner = RadicalExpr::product([a().pow(half(k, 1)), y, a().pow(half(k, 1))]);
            RadicalExpr::product([
                a().pow(half(k, -1)),
                inner.pow_frac(1, m as i64 + 1),
                a().pow(half(k, -1)),
            ])
        }
    }
}

/// Closed-form solution of `w(X, A) = B` for the word the witness replays to.
pub fn solve_decomposable(witness: &DecompositionWitness) -> RadicalExpr {
    witness
        .morphisms
        .iter()
        .rev()
        .fold(RadicalExpr::b(), |y, phi| invert_morphism(phi, y))
}

/// `B^{1/2}(B^{-1/2}A^{-1}B^{-1/2})^{1/2}B^{1/2}`, the second closed form
/// for `XAX = B`.
pub fn riccati_alt() -> RadicalExpr {
    let b = RadicalExpr::b;
    let inner = RadicalExpr::product([b().pow_frac(-1, 2), RadicalExpr::a().pow_frac(-1, 1), b().pow_frac(-1, 2)]);
    RadicalExpr::product([b().pow_frac(1, 2), inner.pow_frac(1, 2), b().pow_frac(1, 2)])
}

/// `A^{-1/2}(A^{1/2}BA^{1/2})^{1/2}A^{-1/2}`.
pub fn riccati() -> RadicalExpr {
    invert_morphism(&Morphism::Pi { m: 1, k: 1 }, RadicalExpr::b())
}

pub fn evaluate<G: GroupBackend>(e: &RadicalExpr, g: &G, a: &G::Elem, b: &G::Elem) -> Result<G::Elem> {
    match e {
        RadicalExpr::Letter(Symbol::A) => Ok(a.clone()),
        RadicalExpr::Letter(Symbol::B) => Ok(b.clone()),
        RadicalExpr::Product(fs) => fs
            .iter()
            .try_fold(g.identity(), |acc, f| Ok(g.mul(&acc, &evaluate(f, g, a, b)?))),
        RadicalExpr::Power(base, r) => g.rational_power(&evaluate(base, g, a, b)?, r),
    }
}

/// Checks `w(E(A, B), A) = B` for `trials` random pairs drawn from a
/// seeded generator. Backend errors count as failures.
pub fn verify_solution<G: GroupBackend>(w: &Word, e: &RadicalExpr, g: &G, trials: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).all(|_| {
        let a = g.random_element(&mut rng);
        let b = g.random_element(&mut rng);
        match evaluate(e, g, &a, &b) {
            Ok(x) => g.same(&eval_word(g, w, &x, &a), &b),
            Err(_) => false,
        }
    })
}

/// `2 * Π (m + 1)` over the witness's `Pi` steps; every exponent of the
/// generated solution has a denominator dividing it.
pub fn exponent_denominator_bound(witness: &DecompositionWitness) -> BigInt {
    witness.morphisms.iter().fold(BigInt::from(2), |acc, phi| match phi {
        Morphism::Pi { m, .. } => acc * BigInt::from(*m + 1),
        _ => acc,
    })
}

pub fn denominators_divide(e: &RadicalExpr, bound: &BigInt) -> bool {
    e.exponents().iter().all(|r| bound.is_multiple_of(r.denom()))
}

/// Products flattened with no single factors, no zero exponents.
pub fn is_well_formed(e: &RadicalExpr) -> bool {
    match e {
        RadicalExpr::Letter(_) => true,
        RadicalExpr::Product(fs) => {
            fs.len() != 1 && fs.iter().all(|f| !matches!(f, RadicalExpr::Product(_)) && is_well_formed(f))
        }
        RadicalExpr::Power(base, r) => !r.is_zero() && is_well_formed(base),
    }
}
