use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::matrix::{RatMatrix, UnipotentMatrix};
use super::rational::{binomial, format_rational, parse_rational, small_rational};
use super::GroupBackend;
use crate::error::{Error, Result};
use crate::word::Word;

/// Highest supported truncation degree.
pub const MAX_SERIES_DEGREE: usize = 16;

/// A word over `{a, b}` packed as bits (`a = 0`, `b = 1`, first letter in
/// the most significant position) with an explicit length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub len: u32,
    pub bits: u64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { len: 0, bits: 0 };
    pub const A: Monomial = Monomial { len: 1, bits: 0 };
    pub const B: Monomial = Monomial { len: 1, bits: 1 };

    fn index(self) -> usize {
        ((1usize << self.len) - 1) + self.bits as usize
    }

    fn from_index(idx: usize) -> Self {
        let len = usize::BITS - 1 - (idx + 1).leading_zeros();
        Monomial {
            len,
            bits: (idx + 1 - (1usize << len)) as u64,
        }
    }

    pub fn concat(self, other: Monomial) -> Monomial {
        Monomial {
            len: self.len + other.len,
            bits: (self.bits << other.len) | other.bits,
        }
    }

    /// Letters from first to last; `false` is `a`.
    pub fn letters(self) -> impl Iterator<Item = bool> {
        (0..self.len).rev().map(move |i| (self.bits >> i) & 1 == 1)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            f.write_str(if l { "b" } else { "a" })?;
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut m = Monomial::ONE;
        for c in s.trim().chars() {
            let bit = match c {
                'a' => 0,
                'b' => 1,
                _ => return Err(Error::InvalidArgument(format!("bad monomial {s:?}"))),
            };
            if m.len as usize >= MAX_SERIES_DEGREE {
                return Err(Error::InvalidArgument(format!("monomial {s:?} too long")));
            }
            m = m.concat(Monomial { len: 1, bits: bit });
        }
        Ok(m)
    }
}

/// Noncommutative power series in `a, b` with rational coefficients,
/// truncated above a fixed degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NCSeries {
    degree: usize,
    coeffs: Vec<BigRational>,
}

fn size_for(degree: usize) -> usize {
    (1usize << (degree + 1)) - 1
}

impl NCSeries {
    pub fn zero(degree: usize) -> Result<Self> {
        if degree > MAX_SERIES_DEGREE {
            return Err(Error::InvalidArgument(format!(
                "degree {degree} exceeds {MAX_SERIES_DEGREE}"
            )));
        }
        Ok(NCSeries {
            degree,
            coeffs: vec![BigRational::zero(); size_for(degree)],
        })
    }

    fn zero_like(&self) -> Self {
        NCSeries {
            degree: self.degree,
            coeffs: vec![BigRational::zero(); self.coeffs.len()],
        }
    }

    pub fn one(degree: usize) -> Result<Self> {
        let mut s = Self::zero(degree)?;
        s.coeffs[0] = BigRational::one();
        Ok(s)
    }

    /// `1 + c m` for a single monomial.
    pub fn one_plus(degree: usize, m: Monomial, c: BigRational) -> Result<Self> {
        let mut s = Self::one(degree)?;
        s.add_term(m, c);
        Ok(s)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(degree: usize, terms: I) -> Result<Self> {
        let mut s = Self::zero(degree)?;
        for (m, c) in terms {
            s.add_term(m, c);
        }
        Ok(s)
    }

    /// Adds `c m`; silently dropped if `m` is above the truncation degree.
    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if (m.len as usize) <= self.degree {
            self.coeffs[m.index()] += c;
        }
    }

    /// Constant term 1, other coefficients small random rationals.
    pub fn random(degree: usize, rng: &mut dyn RngCore) -> Result<Self> {
        let mut s = Self::one(degree)?;
        for c in s.coeffs.iter_mut().skip(1) {
            *c = small_rational(rng);
        }
        Ok(s)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, m: Monomial) -> BigRational {
        if (m.len as usize) <= self.degree {
            self.coeffs[m.index()].clone()
        } else {
            BigRational::zero()
        }
    }

    pub fn constant(&self) -> &BigRational {
        &self.coeffs[0]
    }

    /// Nonzero terms, ordered by length then lexicographically.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Monomial::from_index(i), c))
    }

    /// Nonzero terms of exactly the given length.
    pub fn terms_of_degree(&self, k: usize) -> impl Iterator<Item = (Monomial, &BigRational)> {
        let lo = (1usize << k) - 1;
        let hi = (1usize << (k + 1)) - 1;
        self.coeffs[lo..hi.min(self.coeffs.len())]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (Monomial::from_index(lo + i), c))
    }

    fn check_degree(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    fn check_unit(&self) -> Result<()> {
        if !self.coeffs[0].is_one() {
            return Err(Error::InvalidArgument(format!(
                "constant term is {}, expected 1",
                self.coeffs[0]
            )));
        }
        Ok(())
    }

    /// Truncated product; both operands must share the degree.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_upto(other, self.degree)
    }

    /// Product keeping only terms of length `<= upto`.
    fn mul_upto(&self, other: &Self, upto: usize) -> Self {
        let mut out = self.zero_like();
        for (u, cu) in self.terms() {
            if u.len as usize > upto {
                break;
            }
            let room = upto - u.len as usize;
            for (v, cv) in other.terms() {
                if v.len as usize > room {
                    break;
                }
                out.coeffs[u.concat(v).index()] += cu * cv;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        NCSeries {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        NCSeries {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        NCSeries {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        series_rational_power(self, &BigRational::from_integer(BigInt::from(-1)))
    }

    /// The series with every term of length above `k` removed.
    pub fn truncate(&self, k: usize) -> Self {
        let mut out = self.clone();
        let keep = size_for(k.min(self.degree));
        for c in out.coeffs.iter_mut().skip(keep) {
            *c = BigRational::zero();
        }
        out
    }

    /// Same coefficients viewed at a lower truncation degree.
    pub fn restrict(&self, degree: usize) -> Self {
        let degree = degree.min(self.degree);
        NCSeries {
            degree,
            coeffs: self.coeffs[..size_for(degree)].to_vec(),
        }
    }
}

impl fmt::Display for NCSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.terms() {
            let neg = c < &BigRational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if m.len == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O({})", self.degree + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRecord {
    degree: usize,
    terms: Vec<(String, String)>,
}

impl Serialize for NCSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRecord {
            degree: self.degree,
            terms: self.terms().map(|(m, c)| (m.to_string(), format_rational(c))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NCSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = SeriesRecord::deserialize(d)?;
        let terms = rec
            .terms
            .iter()
            .map(|(m, c)| Ok((m.parse::<Monomial>()?, parse_rational(c)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        NCSeries::from_terms(rec.degree, terms).map_err(serde::de::Error::custom)
    }
}

/// `(1 + u)^r = Σ C(r, k) u^k`, truncated.
pub fn series_rational_power(f: &NCSeries, r: &BigRational) -> Result<NCSeries> {
    f.check_unit()?;
    let mut u = f.clone();
    u.coeffs[0] = BigRational::zero();
    let mut acc = NCSeries::one(f.degree)?;
    let mut uk = acc.clone();
    for k in 1..=f.degree {
        uk = uk.mul(&u);
        let c = binomial(r, k);
        if !c.is_zero() {
            acc = acc.add(&uk.scale(&c));
        }
    }
    Ok(acc)
}

/// The unique `X` with `(A_1 X)...(A_m X) = B`, one degree at a time: with
/// the coefficients of `X` fixed below degree `k`, the degree-`k` part of the
/// product is `m x_k` plus terms already determined.
pub fn series_solve_product(a_list: &[NCSeries], b: &NCSeries) -> Result<NCSeries> {
    if a_list.is_empty() {
        return Err(Error::InvalidArgument("product needs at least one factor".into()));
    }
    b.check_unit()?;
    for a in a_list {
        b.check_degree(a)?;
        a.check_unit()?;
    }
    let m = BigRational::from_integer(BigInt::from(a_list.len()));
    let mut x = NCSeries::one(b.degree)?;
    for k in 1..=b.degree {
        let mut prod = NCSeries::one(b.degree)?;
        for a in a_list {
            prod = prod.mul_upto(a, k).mul_upto(&x, k);
        }
        let lo = (1usize << k) - 1;
        let hi = (1usize << (k + 1)) - 1;
        for idx in lo..hi {
            x.coeffs[idx] = (&b.coeffs[idx] - &prod.coeffs[idx]) / &m;
        }
    }
    Ok(x)
}

/// Solves `w(X, A) = B` for any word containing `X`.
pub fn series_solve_word(w: &Word, a: &NCSeries, b: &NCSeries) -> Result<NCSeries> {
    if w.x_count() == 0 {
        return Err(Error::InvalidArgument(format!("{w} contains no X")));
    }
    let e = w.exponents();
    let pow = |k: i64| series_rational_power(a, &BigRational::from_integer(BigInt::from(k)));
    let factors = e[..e.len() - 1]
        .iter()
        .map(|&k| pow(k as i64))
        .collect::<Result<Vec<_>>>()?;
    let rhs = b.mul(&pow(-(e[e.len() - 1] as i64))?);
    series_solve_product(&factors, &rhs)
}

/// Substitutes nilpotent matrices for `a` and `b`. With strictly upper
/// triangular `na`, `nb` of size `degree + 1`, every term above the
/// truncation degree vanishes, so this is a homomorphism into the
/// unipotent group.
pub fn series_to_matrix(f: &NCSeries, na: &RatMatrix, nb: &RatMatrix) -> Result<UnipotentMatrix> {
    f.check_unit()?;
    let n = na.dim();
    if nb.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: nb.dim(),
        });
    }
    let mut acc = RatMatrix::zero(n);
    for (m, c) in f.terms() {
        let mut p = RatMatrix::identity(n);
        for l in m.letters() {
            p = p.mul(if l { nb } else { na });
        }
        acc = acc.add(&p.scale(c));
    }
    UnipotentMatrix::new(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesBackend {
    pub degree: usize,
}

impl SeriesBackend {
    /// `1 + a`.
    pub fn a(&self) -> NCSeries {
        NCSeries::one_plus(self.degree, Monomial::A, BigRational::one()).expect("degree checked")
    }

    /// `1 + b`.
    pub fn b(&self) -> NCSeries {
        NCSeries::one_plus(self.degree, Monomial::B, BigRational::one()).expect("degree checked")
    }
}

impl GroupBackend for SeriesBackend {
    type Elem = NCSeries;

    fn identity(&self) -> NCSeries {
        NCSeries::one(self.degree).expect("degree checked")
    }

    fn mul(&self, a: &NCSeries, b: &NCSeries) -> NCSeries {
        a.mul(b)
    }

    fn inv(&self, a: &NCSeries) -> Result<NCSeries> {
        a.inv()
    }

    fn rational_power(&self, g: &NCSeries, r: &BigRational) -> Result<NCSeries> {
        series_rational_power(g, r)
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> NCSeries {
        NCSeries::random(self.degree, rng).expect("degree checked")
    }

    fn same(&self, a: &NCSeries, b: &NCSeries) -> bool {
        a == b
    }

    fn name(&self) -> String {
        format!("series:{}", self.degree)
    }
}
