//! Mechanically checked certificates that `P_w(x^2, y^2)` has a factor
//! irreducible over the complex numbers, for four infinite word families.
//!
//! Each certificate recomputes the word polynomial from the word, checks
//! the closed forms the argument relies on by exact polynomial arithmetic,
//! and finishes with a gcd or square test.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{BivarPoly, UnivarPoly};
use crate::word::{Word, WordBuilder};
use crate::wordpoly::word_polynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `X^m A X^n`
    XnAXm,
    /// `X A^{m+2n} X A^{m+n} X A^m X`
    ThreeApart,
    /// `X A X^n A X`
    XAXnAX,
    /// `X^2 (AX)^n X`
    X2AXnX,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedNotRadical,
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    None {
        reason: String,
    },
    /// `x^{2m} - 1` and `x^{2n} - 1` share fewer roots than the larger has.
    RootMismatch {
        word_polynomial_squared: BivarPoly,
        gcd: String,
        gcd_degree: usize,
        max_degree: usize,
        larger_is_squarefree: bool,
    },
    Discriminant {
        word_polynomial: BivarPoly,
        factors: Vec<BivarPoly>,
        factorization_verified: bool,
        discriminant: String,
        closed_form_verified: bool,
        discriminant_is_square: bool,
    },
    DiscriminantAtOne {
        word_polynomial_squared: BivarPoly,
        discriminant: String,
        closed_form_verified: bool,
        value_at_one: i64,
        value_is_square: bool,
        discriminant_is_square: bool,
    },
    Reduction {
        substitution: String,
        reduced_word: Word,
        reduced: Box<CertificateReport>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub family: Family,
    pub word: Word,
    pub params: Vec<u32>,
    pub verdict: Verdict,
    pub evidence: Evidence,
}

impl CertificateReport {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::CertifiedNotRadical
    }

    fn inapplicable(family: Family, word: Word, params: Vec<u32>, reason: &str) -> Self {
        CertificateReport {
            family,
            word,
            params,
            verdict: Verdict::Inapplicable,
            evidence: Evidence::None {
                reason: reason.to_string(),
            },
        }
    }
}

/// True iff `f = g^2` for an integer polynomial `g`.
pub fn is_perfect_square(f: &UnivarPoly) -> bool {
    f.is_perfect_square()
}

/// True iff the product of `factors` is exactly `p`.
pub fn verify_factorization(p: &BivarPoly, factors: &[BivarPoly]) -> bool {
    let product = factors.iter().fold(BivarPoly::one(), |acc, f| &acc * f);
    &product == p
}

pub fn xn_a_xm_word(m: u32, n: u32) -> Word {
    let mut b = WordBuilder::new();
    (0..m).for_each(|_| b.push_x());
    b.push_a(1);
    (0..n).for_each(|_| b.push_x());
    b.finish()
}

pub fn three_apart_word(m: u32, n: u32) -> Word {
    Word::from_exponents(vec![0, m + 2 * n, m + n, m, 0]).unwrap()
}

pub fn xaxnax_word(n: u32) -> Word {
    let mut e = vec![0, 1];
    e.extend(std::iter::repeat(0).take(n.saturating_sub(1) as usize));
    e.extend([1, 0]);
    Word::from_exponents(e).unwrap()
}

pub fn x2axnx_word(n: u32) -> Word {
    let mut e = vec![0, 0];
    e.extend(std::iter::repeat(1).take(n as usize));
    e.extend([0, 0]);
    Word::from_exponents(e).unwrap()
}

/// `(1 + t^2 + ... + t^{2k-2})`.
fn even_geometric(k: u32) -> UnivarPoly {
    let mut c = vec![BigInt::from(0); 2 * k as usize - 1];
    for i in 0..k as usize {
        c[2 * i] = BigInt::one();
    }
    UnivarPoly::from_coeffs(c)
}

fn t_pow_minus_one(k: u32) -> UnivarPoly {
    &UnivarPoly::monomial(1, k as usize) - &UnivarPoly::one()
}

/// Certificate for `X^m A X^n`, `m != n`.
pub fn certify_xn_a_xm(m: u32, n: u32) -> Result<CertificateReport> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("m and n must be positive".into()));
    }
    let word = xn_a_xm_word(m, n);
    if m == n {
        return Ok(CertificateReport::inapplicable(
            Family::XnAXm,
            word,
            vec![m, n],
            "X^nAX^n is totally decomposable",
        ));
    }
    let squared = word_polynomial(&word).substitute_squares();
    // P_w(x^2, y^2) = c0(x) + y^2 c1(x) with c0 = (x^{2m}-1)/(x^2-1) and
    // c1 = x^{2m} (x^{2n}-1)/(x^2-1).
    let x2m1 = &UnivarPoly::monomial(1, 2) - &UnivarPoly::one();
    let c0 = squared.coeff_of_y(0);
    let c1 = squared.coeff_of_y(2);
    let rebuilt = &BivarPoly::from_univar(&c0, false)
        + &(&BivarPoly::from_univar(&c1, false) * &BivarPoly::monomial(1, 0, 2));
    let only_two = rebuilt == squared;
    let closed = only_two
        && &c0 * &x2m1 == t_pow_minus_one(2 * m)
        && &c1 * &x2m1 == t_pow_minus_one(2 * n).shift(2 * m as usize);
    // A root of the larger of x^{2m}-1, x^{2n}-1 that is not a root of the
    // smaller gives c0/c1 a simple zero or pole, so c0/c1 is not a square.
    let big = t_pow_minus_one(2 * m.max(n));
    let g = t_pow_minus_one(2 * m).gcd(&t_pow_minus_one(2 * n));
    let gcd_degree = g.degree().unwrap_or(0);
    let max_degree = 2 * m.max(n) as usize;
    let squarefree = big.gcd(&big.derivative()).degree() == Some(0);
    let certified = closed && gcd_degree < max_degree && squarefree;
    Ok(CertificateReport {
        family: Family::XnAXm,
        word,
        params: vec![m, n],
        verdict: if certified {
            Verdict::CertifiedNotRadical
        } else {
            Verdict::Inapplicable
        },
        evidence: Evidence::RootMismatch {
            word_polynomial_squared: squared,
            gcd: g.render("x"),
            gcd_degree,
            max_degree,
            larger_is_squarefree: squarefree,
        },
    })
}

/// Certificate for `X A^{m+2n} X A^{m+n} X A^m X`, `n >= 1`.
pub fn certify_three_apart(m: u32, n: u32) -> Result<CertificateReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let word = three_apart_word(m, n);
    let pw = word_polynomial(&word);
    let first = &BivarPoly::one() + &BivarPoly::monomial(1, 1, m + n);
    let second = BivarPoly::from_terms([
        (0u32, 0u32, 1i64),
        (1, m + 2 * n, 1),
        (1, m + n, -1),
        (2, 2 * m + 2 * n, 1),
    ]);
    let factors = vec![first, second.clone()];
    let factorization_verified = verify_factorization(&pw, &factors);

    // h(x, y) = 1 + x^2 f(y) + x^4 g(y), as a quadratic in x^2.
    let h = second.substitute_squares();
    let f = h.coeff_of_x(2);
    let g = h.coeff_of_x(4);
    let shape_ok = h.coeff_of_x(0) == UnivarPoly::one() && h.degree_x() == Some(4) && {
        let rebuilt = [(0u32, UnivarPoly::one()), (2, f.clone()), (4, g.clone())]
            .into_iter()
            .fold(BivarPoly::zero(), |acc, (k, c)| {
                &acc + &(&BivarPoly::from_univar(&c, true) * &BivarPoly::monomial(1, k, 0))
            });
        rebuilt == h
    };
    let d = &(&f * &f) - &g.scale(&BigInt::from(4));
    // y^{4m+4n} (y^{2n} - 3)(y^{2n} + 1)
    let y2n = UnivarPoly::monomial(1, 2 * n as usize);
    let closed_form = (&(&y2n - &UnivarPoly::constant(3)) * &(&y2n + &UnivarPoly::one()))
        .shift((4 * m + 4 * n) as usize);
    let closed_form_verified = shape_ok && d == closed_form;
    let discriminant_is_square = is_perfect_square(&d);
    let certified = factorization_verified && closed_form_verified && !discriminant_is_square;
    Ok(CertificateReport {
        family: Family::ThreeApart,
        word,
        params: vec![m, n],
        verdict: if certified {
            Verdict::CertifiedNotRadical
        } else {
            Verdict::Inapplicable
        },
        evidence: Evidence::Discriminant {
            word_polynomial: pw,
            factors,
            factorization_verified,
            discriminant: d.render("y"),
            closed_form_verified,
            discriminant_is_square,
        },
    })
}

/// Certificate for `X A X^n A X`, `n >= 3`.
pub fn certify_xaxnax(n: u32) -> Result<CertificateReport> {
    let word = xaxnax_word(n.max(1));
    if n < 3 {
        return Ok(CertificateReport::inapplicable(
            Family::XAXnAX,
            word,
            vec![n],
            "requires n >= 3",
        ));
    }
    let squared = word_polynomial(&word).substitute_squares();
    // 1 + f(x) y^2 + g(x) y^4
    let f = squared.coeff_of_y(2);
    let g = squared.coeff_of_y(4);
    let shape_ok = squared.coeff_of_y(0) == UnivarPoly::one()
        && squared.degree_y() == Some(4)
        && f == even_geometric(n).shift(2)
        && g == UnivarPoly::monomial(1, 2 * n as usize + 2);
    let full = &(&f * &f) - &g.scale(&BigInt::from(4));
    let d = full.unshift(4).unwrap_or_default();
    let geo = even_geometric(n);
    let closed_form = &(&geo * &geo) - &UnivarPoly::monomial(4, 2 * n as usize - 2);
    let closed_form_verified = shape_ok && d == closed_form;
    let at_one = d.eval(&BigInt::one());
    let value_at_one: i64 = at_one.clone().try_into().unwrap_or(i64::MAX);
    let value_is_square = !at_one.is_negative() && {
        let r = at_one.sqrt();
        &r * &r == at_one
    };
    let discriminant_is_square = is_perfect_square(&d);
    let certified = closed_form_verified && !value_is_square && !discriminant_is_square;
    Ok(CertificateReport {
        family: Family::XAXnAX,
        word,
        params: vec![n],
        verdict: if certified {
            Verdict::CertifiedNotRadical
        } else {
            Verdict::Inapplicable
        },
        evidence: Evidence::DiscriminantAtOne {
            word_polynomial_squared: squared,
            discriminant: d.render("x"),
            closed_form_verified,
            value_at_one,
            value_is_square,
            discriminant_is_square,
        },
    })
}

/// Certificate for `X^2 (AX)^n X`, `n >= 2`, by reduction to
/// `Y C Y^{n+1} C Y` under `Y = A^{1/2} X A^{1/2}`, `C = A^{-1}`.
pub fn certify_x2axnx(n: u32) -> Result<CertificateReport> {
    let word = x2axnx_word(n);
    if n < 2 {
        return Ok(CertificateReport::inapplicable(
            Family::X2AXnX,
            word,
            vec![n],
            "requires n >= 2",
        ));
    }
    let reduced = certify_xaxnax(n + 1)?;
    Ok(CertificateReport {
        family: Family::X2AXnX,
        word,
        params: vec![n],
        verdict: reduced.verdict,
        evidence: Evidence::Reduction {
            substitution: "Y = A^(1/2)XA^(1/2), C = A^(-1), D = A^(1/2)BA^(1/2)".into(),
            reduced_word: reduced.word.clone(),
            reduced: Box::new(reduced),
        },
    })
}

/// Identifies which family, if any, `w` belongs to, with its parameters.
pub fn match_family(w: &Word) -> Option<(Family, Vec<u32>)> {
    let e = w.exponents();
    let n = w.x_count();
    if !w.is_canonical() {
        return None;
    }
    let ones: Vec<usize> = (0..e.len()).filter(|&i| e[i] != 0).collect();
    if ones.len() == 1 && e[ones[0]] == 1 {
        let m = ones[0] as u32;
        let k = (n - ones[0]) as u32;
        if xn_a_xm_word(m, k) == *w {
            return Some((Family::XnAXm, vec![m, k]));
        }
    }
    if n == 4 && e[1] > e[2] && e[2] > e[3] && e[1] - e[2] == e[2] - e[3] {
        let (m, d) = (e[3], e[2] - e[3]);
        return Some((Family::ThreeApart, vec![m, d]));
    }
    if n >= 3 && xaxnax_word(n as u32 - 2) == *w {
        return Some((Family::XAXnAX, vec![n as u32 - 2]));
    }
    if n >= 4 && x2axnx_word(n as u32 - 3) == *w {
        return Some((Family::X2AXnX, vec![n as u32 - 3]));
    }
    None
}

/// Runs the certificate for `w`'s family, if it has one.
pub fn certify_word(w: &Word) -> Option<CertificateReport> {
    let (family, params) = match_family(w)?;
    let report = match family {
        Family::XnAXm => certify_xn_a_xm(params[0], params[1]),
        Family::ThreeApart => certify_three_apart(params[0], params[1]),
        Family::XAXnAX => certify_xaxnax(params[0]),
        Family::X2AXnX => certify_x2axnx(params[0]),
    };
    report.ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(s: &str) -> BivarPoly {
        s.parse().unwrap()
    }

    #[test]
    fn family_words() {
        assert_eq!(xn_a_xm_word(2, 1).render(), "X^2AX");
        assert_eq!(three_apart_word(0, 1).render(), "XA^2XAX^2");
        assert_eq!(xaxnax_word(3).render(), "XAX^3AX");
        assert_eq!(x2axnx_word(2).render(), "X^2AXAX^2");
    }

    #[test]
    fn xn_a_xm() {
        let r = certify_xn_a_xm(1, 2).unwrap();
        assert!(r.is_certified());
        assert_eq!(certify_xn_a_xm(2, 2).unwrap().verdict, Verdict::Inapplicable);
        let r = certify_xn_a_xm(1, 3).unwrap();
        assert!(r.is_certified());
        match r.evidence {
            Evidence::RootMismatch { gcd, gcd_degree, max_degree, .. } => {
                assert_eq!(gcd, "-1 + x^2");
                assert_eq!((gcd_degree, max_degree), (2, 6));
            }
            other => panic!("unexpected evidence {other:?}"),
        }
        assert!(certify_xn_a_xm(0, 2).is_err());
    }

    #[test]
    fn three_apart() {
        let r = certify_three_apart(0, 1).unwrap();
        assert_eq!(r.word.render(), "XA^2XAX^2");
        match &r.evidence {
            Evidence::Discriminant {
                word_polynomial,
                factorization_verified,
                discriminant,
                closed_form_verified,
                discriminant_is_square,
                ..
            } => {
                assert_eq!(*word_polynomial, bp("1 + x*y^2 + x^2*y^3 + x^3*y^3"));
                assert!(factorization_verified);
                // y^4 (y^2 - 3)(y^2 + 1) = -3y^4 - 2y^6 + y^8
                assert_eq!(discriminant, "-3*y^4 - 2*y^6 + y^8");
                assert!(closed_form_verified);
                assert!(!discriminant_is_square);
            }
            other => panic!("unexpected evidence {other:?}"),
        }
        assert!(r.is_certified());
        assert!(certify_three_apart(1, 1).unwrap().is_certified());
        assert!(certify_three_apart(1, 0).is_err());
    }

    #[test]
    fn xaxnax() {
        for (n, d1) in [(3, 5), (4, 12)] {
            let r = certify_xaxnax(n).unwrap();
            assert!(r.is_certified());
            match r.evidence {
                Evidence::DiscriminantAtOne { value_at_one, .. } => assert_eq!(value_at_one, d1),
                other => panic!("unexpected evidence {other:?}"),
            }
        }
        assert_eq!(certify_xaxnax(2).unwrap().verdict, Verdict::Inapplicable);
    }

    #[test]
    fn x2axnx_reduces() {
        let r = certify_x2axnx(2).unwrap();
        assert!(r.is_certified());
        match r.evidence {
            Evidence::Reduction { reduced_word, .. } => assert_eq!(reduced_word.render(), "XAX^3AX"),
            other => panic!("unexpected evidence {other:?}"),
        }
        assert!(!certify_x2axnx(1).unwrap().is_certified());
    }

    #[test]
    fn factorization_check() {
        let p = bp("1 + x^2*y^2 + x^4*y^4");
        assert!(verify_factorization(&p, &[bp("1 + x*y + x^2*y^2"), bp("1 - x*y + x^2*y^2")]));
        assert!(verify_factorization(&p, &[p.clone()]));
        let q = bp("1 + x^2 + x^4*y^2");
        assert!(!verify_factorization(&q, &[bp("1 + x"), bp("1 - x + x^3*y^2")]));
    }

    #[test]
    fn matching() {
        let fam = |s: &str| match_family(&s.parse().unwrap());
        assert_eq!(fam("X^2AX"), Some((Family::XnAXm, vec![2, 1])));
        assert_eq!(fam("XA^2XAX^2"), Some((Family::ThreeApart, vec![0, 1])));
        assert_eq!(fam("XA^5XA^3XAX"), Some((Family::ThreeApart, vec![1, 2])));
        assert_eq!(fam("XAX^3AX"), Some((Family::XAXnAX, vec![3])));
        assert_eq!(fam("X^2AXAXAX^2"), Some((Family::X2AXnX, vec![3])));
        assert_eq!(fam("XAXAX"), Some((Family::XAXnAX, vec![1])));
        assert_eq!(fam("XAXA^2X"), None);
        assert_eq!(fam("AXAX"), None);
    }

    #[test]
    fn serializes() {
        let r = certify_three_apart(0, 1).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"family\":\"ThreeApart\""));
        assert!(json.contains("certified-not-radical"));
        let back: CertificateReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
