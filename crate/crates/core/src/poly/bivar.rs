use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::UnivarPoly;
use crate::arith::{mulmod, powmod};
use crate::error::ParseError;

/// Sparse polynomial in commuting `x`, `y` with integer coefficients,
/// keyed by `(x-degree, y-degree)`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c.into());
        p
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c.into());
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    /// Terms in graded lexicographic order with `x > y`, lowest total
    /// degree first.
    pub fn sorted_terms(&self) -> Vec<(u32, u32, &BigInt)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by_key(|&(i, j, _)| (i + j, Reverse(i)));
        v
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    fn map_exponents(&self, f: impl Fn(u32, u32) -> (u32, u32)) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            let (a, b) = f(i, j);
            out.add_term(a, b, c.clone());
        }
        out
    }

    /// `P(x^2, y^2)`.
    pub fn substitute_squares(&self) -> Self {
        self.map_exponents(|i, j| (2 * i, 2 * j))
    }

    /// `P(x^n y^m, y)`.
    pub fn substitute_x_monomial(&self, n: u32, m: u32) -> Self {
        self.map_exponents(|i, j| (i * n, j + i * m))
    }

    /// Coefficient of `x^i`, as a polynomial in `y`.
    pub fn coeff_of_x(&self, i: u32) -> UnivarPoly {
        let mut v: Vec<BigInt> = Vec::new();
        for (&(a, b), c) in &self.terms {
            if a == i {
                let b = b as usize;
                if v.len() <= b {
                    v.resize(b + 1, BigInt::zero());
                }
                v[b] = c.clone();
            }
        }
        UnivarPoly::from_coeffs(v)
    }

    /// Coefficient of `y^j`, as a polynomial in `x`.
    pub fn coeff_of_y(&self, j: u32) -> UnivarPoly {
        self.transpose().coeff_of_x(j)
    }

    /// Swaps the roles of `x` and `y`.
    pub fn transpose(&self) -> Self {
        self.map_exponents(|i, j| (j, i))
    }

    /// Embeds a polynomial in `y` (`in_y = true`) or in `x`.
    pub fn from_univar(p: &UnivarPoly, in_y: bool) -> Self {
        let mut out = Self::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            let k = k as u32;
            if in_y {
                out.add_term(0, k, c.clone());
            } else {
                out.add_term(k, 0, c.clone());
            }
        }
        out
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * num_traits::pow(x.clone(), i as usize) * num_traits::pow(y.clone(), j as usize))
            .sum()
    }

    /// Evaluation in the field with `p` elements.
    pub fn eval_mod(&self, x: u64, y: u64, p: u64) -> u64 {
        let ctx = ModPoly::new(self, p);
        ctx.eval(x % p, y % p)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn render(&self) -> String {
        super::render_terms(
            self.sorted_terms()
                .into_iter()
                .map(|(i, j, c)| (c.clone(), super::monomial_text(&[("x", i), ("y", j)]))),
        )
    }
}

/// A polynomial with coefficients reduced mod `p`, prepared for repeated
/// evaluation.
#[derive(Debug, Clone)]
pub struct ModPoly {
    p: u64,
    terms: Vec<(u32, u32, u64)>,
    max_y: usize,
}

impl ModPoly {
    pub fn new(poly: &BivarPoly, p: u64) -> Self {
        let pb = BigInt::from(p);
        let terms: Vec<_> = poly
            .terms()
            .filter_map(|(i, j, c)| {
                let r = ((c % &pb) + &pb) % &pb;
                let r = r.to_u64().unwrap();
                (r != 0).then_some((i, j, r))
            })
            .collect();
        let max_y = terms.iter().map(|&(_, j, _)| j as usize).max().unwrap_or(0);
        ModPoly { p, terms, max_y }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: u64, y: u64) -> u64 {
        let p = self.p;
        self.terms.iter().fold(0, |acc, &(i, j, c)| {
            let t = mulmod(mulmod(c, powmod(x, i as u64, p), p), powmod(y, j as u64, p), p);
            (acc + t) % p
        })
    }

    /// Dense coefficients (in `y`, lowest first) of `P(x, y)` for fixed `x`.
    pub fn specialize_x(&self, x: u64, out: &mut Vec<u64>) {
        let p = self.p;
        out.clear();
        out.resize(self.max_y + 1, 0);
        for &(i, j, c) in &self.terms {
            let slot = &mut out[j as usize];
            *slot = (*slot + mulmod(c, powmod(x, i as u64, p), p)) % p;
        }
    }
}

impl Add for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl Sub for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        self + &(-rhs)
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        BivarPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

impl Mul for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for BivarPoly {
    type Err = ParseError;

    /// Accepts the rendered form, e.g. `1 - 2*x*y + x^2*y^3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let mut pos = 0;
        let mut out = BivarPoly::zero();
        let at = |pos: usize| chars.get(pos).map(|&(i, _)| i).unwrap_or(s.len());
        if chars.is_empty() {
            return Err(ParseError::new(0, "empty polynomial"));
        }
        let mut first = true;
        while pos < chars.len() {
            let mut negative = false;
            match chars[pos].1 {
                '+' if !first => pos += 1,
                '-' => {
                    negative = true;
                    pos += 1;
                }
                _ if first => {}
                c => return Err(ParseError::new(at(pos), format!("expected sign, found {c:?}"))),
            }
            first = false;
            let mut coeff = BigInt::one();
            let mut have_factor = false;
            let mut exps = [0u32; 2];
            loop {
                let Some(&(_, c)) = chars.get(pos) else {
                    break;
                };
                if have_factor {
                    if c != '*' {
                        break;
                    }
                    pos += 1;
                }
                let Some(&(_, c)) = chars.get(pos) else {
                    return Err(ParseError::new(at(pos), "dangling '*'"));
                };
                if c.is_ascii_digit() {
                    let start = pos;
                    while chars.get(pos).is_some_and(|(_, d)| d.is_ascii_digit()) {
                        pos += 1;
                    }
                    let digits: String = chars[start..pos].iter().map(|&(_, d)| d).collect();
                    coeff *= digits.parse::<BigInt>().unwrap();
                } else if c == 'x' || c == 'y' {
                    pos += 1;
                    let mut e = 1u32;
                    if chars.get(pos).is_some_and(|&(_, c)| c == '^') {
                        pos += 1;
                        let start = pos;
                        while chars.get(pos).is_some_and(|(_, d)| d.is_ascii_digit()) {
                            pos += 1;
                        }
                        if start == pos {
                            return Err(ParseError::new(at(pos), "expected exponent"));
                        }
                        let digits: String = chars[start..pos].iter().map(|&(_, d)| d).collect();
                        e = digits
                            .parse()
                            .map_err(|_| ParseError::new(at(start), "exponent out of range"))?;
                    }
                    exps[(c == 'y') as usize] += e;
                } else {
                    return Err(ParseError::new(at(pos), format!("unexpected {c:?}")));
                }
                have_factor = true;
            }
            if !have_factor {
                return Err(ParseError::new(at(pos), "empty term"));
            }
            if negative {
                coeff = -coeff;
            }
            out.add_term(exps[0], exps[1], coeff);
        }
        Ok(out)
    }
}

impl serde::Serialize for BivarPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

impl<'de> serde::Deserialize<'de> for BivarPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = <String as serde::Deserialize>::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(s: &str) -> BivarPoly {
        s.parse().unwrap()
    }

    #[test]
    fn render_order_and_parse() {
        let p = BivarPoly::from_terms([(2u32, 1u32, 1), (0, 0, 1), (1, 0, 1)]);
        assert_eq!(p.render(), "1 + x + x^2*y");
        assert_eq!(bp("1 + x + x^2*y"), p);
        let q = bp("x^2*y^2 - x*y + 1 + 3*y^2 + x^2");
        assert_eq!(q.render(), "1 + x^2 - x*y + 3*y^2 + x^2*y^2");
        assert_eq!(BivarPoly::zero().render(), "0");
        assert_eq!(bp("0"), BivarPoly::zero());
        assert_eq!(bp("-2*x*x"), BivarPoly::monomial(-2, 2, 0));
        assert!("1 +".parse::<BivarPoly>().is_err());
        assert!("1 + z".parse::<BivarPoly>().is_err());
        assert!("x^".parse::<BivarPoly>().is_err());
    }

    #[test]
    fn substitutions() {
        assert_eq!(bp("1 + x + x^2*y").substitute_squares(), bp("1 + x^2 + x^4*y^2"));
        assert_eq!(bp("1 + x*y + x^2*y^2").substitute_squares(), bp("1 + x^2*y^2 + x^4*y^4"));
        assert_eq!(BivarPoly::zero().substitute_squares(), BivarPoly::zero());
        assert_eq!(bp("1 + x").substitute_x_monomial(2, 1), bp("1 + x^2*y"));
    }

    #[test]
    fn arithmetic() {
        let a = bp("1 + x*y + x^2*y^2");
        let b = bp("1 - x*y + x^2*y^2");
        assert_eq!(&a * &b, bp("1 + x^2*y^2 + x^4*y^4"));
        assert_eq!(&a - &a, BivarPoly::zero());
        assert_eq!(&a + &b, bp("2 + 2*x^2*y^2"));
    }

    #[test]
    fn modular_evaluation() {
        let p = bp("1 + x^2 + x^4*y^2");
        assert_eq!(p.eval_mod(1, 3, 11), 0);
        assert_eq!(bp("7 + x + y").eval_mod(0, 0, 5), 2);
        // geometric sum at x*y = 1
        let g = bp("1 + x^2*y^2 + x^4*y^4");
        assert_eq!(g.eval_mod(3, 5, 7), 3); // 3*5 = 15 = 1 mod 7
        assert_eq!(bp("-1").eval_mod(0, 0, 7), 6);
    }

    #[test]
    fn coefficient_extraction() {
        let p = bp("1 + x^2*y^2 - x^2*y^6 + x^4*y^8");
        assert_eq!(p.coeff_of_x(2), UnivarPoly::from_i64(&[0, 0, 1, 0, 0, 0, -1]));
        assert_eq!(p.coeff_of_y(8), UnivarPoly::from_i64(&[0, 0, 0, 0, 1]));
    }
}
