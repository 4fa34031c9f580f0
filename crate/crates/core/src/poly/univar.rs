use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense univariate polynomial over the integers, lowest degree first.
/// The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UnivarPoly {
    coeffs: Vec<BigInt>,
}

impl UnivarPoly {
    pub fn zero() -> Self {
        UnivarPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// `c * t^k`.
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c.into();
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UnivarPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `self * t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        UnivarPoly { coeffs: v }
    }

    /// Divides by `t^k`, returning `None` unless the division is exact.
    pub fn unshift(&self, k: usize) -> Option<Self> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(self.coeffs.iter().skip(k).cloned().collect()))
    }

    /// `p(t^k)`.
    pub fn inflate(&self, k: usize) -> Self {
        assert!(k >= 1);
        let mut v = vec![BigInt::zero(); self.coeffs.len().saturating_sub(1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        Self::from_coeffs(v)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        Self::from_coeffs(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Pseudo-remainder of `self` by `d` (`lc(d)^{e} * self mod d`).
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading().unwrap().clone();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let lr = r.leading().unwrap().clone();
            r = &r.scale(&lc) - &d.shift(rd - dd).scale(&lr);
        }
        r
    }

    /// Greatest common divisor over the rationals, returned primitive with
    /// positive leading coefficient (primitive remainder sequence).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a
    }

    /// Integer polynomial square root: `Some(g)` with `g^2 = self` and
    /// `g` having positive leading coefficient.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let deg = self.degree().unwrap();
        if deg % 2 != 0 {
            return None;
        }
        let lead = self.leading().unwrap();
        if lead.is_negative() {
            return None;
        }
        let top = lead.sqrt();
        if &(&top * &top) != lead {
            return None;
        }
        let half = deg / 2;
        // Solve for the coefficients of g from the top down.
        let mut g = vec![BigInt::zero(); half + 1];
        g[half] = top.clone();
        let two_top = &top * 2;
        for k in (0..half).rev() {
            // Coefficient of t^{half + k} in g^2.
            let target = self.coeff(half + k);
            let mut known = BigInt::zero();
            for i in (k + 1)..=half {
                let j = half + k - i;
                if j > k && j <= half {
                    known += &g[i] * &g[j];
                }
            }
            let rest = target - known;
            let (q, r) = rest.div_rem(&two_top);
            if !r.is_zero() {
                return None;
            }
            g[k] = q;
        }
        let g = Self::from_coeffs(g);
        if &(&g * &g) == self {
            Some(g)
        } else {
            None
        }
    }

    pub fn is_perfect_square(&self) -> bool {
        self.sqrt().is_some()
    }
}

impl Add for &UnivarPoly {
    type Output = UnivarPoly;
    fn add(self, rhs: &UnivarPoly) -> UnivarPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UnivarPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UnivarPoly {
    type Output = UnivarPoly;
    fn sub(self, rhs: &UnivarPoly) -> UnivarPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UnivarPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &UnivarPoly {
    type Output = UnivarPoly;
    fn neg(self) -> UnivarPoly {
        UnivarPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &UnivarPoly {
    type Output = UnivarPoly;
    fn mul(self, rhs: &UnivarPoly) -> UnivarPoly {
        if self.is_zero() || rhs.is_zero() {
            return UnivarPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UnivarPoly::from_coeffs(out)
    }
}

impl UnivarPoly {
    /// Renders in the variable `var`, lowest degree first.
    pub fn render(&self, var: &str) -> String {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (c.clone(), super::monomial_text(&[(var, k as u32)])));
        super::render_terms(terms)
    }
}

impl fmt::Display for UnivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UnivarPoly {
        UnivarPoly::from_i64(c)
    }

    #[test]
    fn squares() {
        assert!(p(&[1, 2, 1]).is_perfect_square());
        assert_eq!(p(&[1, 2, 1]).sqrt().unwrap(), p(&[1, 1]));
        assert!(p(&[4]).is_perfect_square());
        assert!(!p(&[5]).is_perfect_square());
        assert!(!p(&[-4]).is_perfect_square());
        assert!(!p(&[1, 0, 1]).is_perfect_square());
        // y^4 (y^2 - 3)(y^2 + 1)
        let d = &(&p(&[0, 0, 0, 0, 1]) * &p(&[-3, 0, 1])) * &p(&[1, 0, 1]);
        assert!(!d.is_perfect_square());
        let g = p(&[3, -1, 0, 2, 5]);
        assert_eq!((&g * &g).sqrt().unwrap(), g);
        assert!(p(&[1, 4, 4]).is_perfect_square());
        assert!(!p(&[1, 2, 2]).is_perfect_square());
        assert!(!p(&[1, 1, 1]).is_perfect_square());
    }

    #[test]
    fn gcd_of_cyclotomic_products() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[-1, 0, 0, 0, 0, 0, 1]);
        assert_eq!(a.gcd(&b), a);
        let c = p(&[-1, 0, 0, 0, 1]);
        assert_eq!(c.gcd(&b), a);
        assert_eq!(p(&[1, 1]).gcd(&p(&[2, 1])), p(&[1]));
    }

    #[test]
    fn derivative_and_eval() {
        let f = p(&[1, 2, 3]);
        assert_eq!(f.derivative(), p(&[2, 6]));
        assert_eq!(f.eval(&BigInt::from(2)), BigInt::from(17));
        assert_eq!(f.inflate(2), p(&[1, 0, 2, 0, 3]));
        assert_eq!(f.shift(2).unshift(2).unwrap(), f);
        assert!(f.unshift(1).is_none());
    }

    #[test]
    fn render() {
        assert_eq!(p(&[1, -2, 0, 1]).render("x"), "1 - 2*x + x^3");
        assert_eq!(p(&[]).render("x"), "0");
    }
}
