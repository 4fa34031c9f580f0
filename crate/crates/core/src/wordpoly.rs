//! The word polynomial `P_w(x, y) = Σ_k x^k y^{a_0 + ... + a_k}` and the
//! identities relating it to composition and to affine matrices.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::BivarPoly;
use crate::word::Word;

/// `P_w`. Words without an `X` give the zero polynomial.
pub fn word_polynomial(w: &Word) -> BivarPoly {
    let e = w.exponents();
    let mut out = BivarPoly::zero();
    let mut ydeg = 0u32;
    for k in 0..w.x_count() {
        ydeg += e[k];
        out.add_term(k as u32, ydeg, BigInt::one());
    }
    out
}

/// Recovers the `X`-terminated word with the given word polynomial.
pub fn word_from_polynomial(p: &BivarPoly) -> Option<Word> {
    let n = p.num_terms();
    let mut ydegs = vec![None; n];
    for (i, j, c) in p.terms() {
        if !c.is_one() || i as usize >= n {
            return None;
        }
        ydegs[i as usize] = Some(j);
    }
    let mut exps = Vec::with_capacity(n + 1);
    let mut prev = 0u32;
    for d in ydegs {
        let d = d?;
        exps.push(d.checked_sub(prev)?);
        prev = d;
    }
    if n == 0 {
        return None;
    }
    exps.push(0);
    Word::from_exponents(exps).ok()
}

/// Both sides of `P_{u∘w}(x, y) = P_u(x^n y^m, y) P_w(x, y)`, each computed
/// independently; `m`, `n` count the `A`s and `X`s in `w`.
pub fn poly_compose_identity(u: &Word, w: &Word) -> Result<(BivarPoly, BivarPoly)> {
    for (name, word) in [("u", u), ("w", w)] {
        if !word.ends_with_x() {
            return Err(Error::Hypothesis(format!(
                "{name} = {word} must end with X"
            )));
        }
    }
    let lhs = word_polynomial(&u.compose(w));
    let n = w.x_count() as u32;
    let m = w.a_count() as u32;
    let rhs = &word_polynomial(u).substitute_x_monomial(n, m) * &word_polynomial(w);
    Ok((lhs, rhs))
}

/// Top row `(x^n y^m, P_w(x,y) z)` of `w([[x, z], [0, 1]], [[y, 0], [0, 1]])`,
/// computed by multiplying the 2x2 matrices letter by letter.
pub fn affine_image(w: &Word, x: &BigInt, y: &BigInt, z: &BigInt) -> (BigInt, BigInt) {
    // [[s, t], [0, 1]] stored as (s, t).
    let mut acc = (BigInt::one(), BigInt::zero());
    for letter in w.letters() {
        let (ls, lt) = match letter {
            crate::word::Letter::X => (x, z),
            crate::word::Letter::A => (y, &BigInt::ZERO),
        };
        // (s, t) * (ls, lt) = (s*ls, s*lt + t)
        let t = &acc.0 * lt + &acc.1;
        acc = (&acc.0 * ls, t);
    }
    acc
}

/// `P` at `(x, y)` in the field with `p` elements.
pub fn eval_mod(p_w: &BivarPoly, x: u64, y: u64, p: u64) -> u64 {
    p_w.eval_mod(x, y, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }
    fn bp(s: &str) -> BivarPoly {
        s.parse().unwrap()
    }

    #[test]
    fn fixtures() {
        assert_eq!(word_polynomial(&w("X^2AX")), bp("1 + x + x^2*y"));
        assert_eq!(word_polynomial(&w("XAXAX")), bp("1 + x*y + x^2*y^2"));
        assert_eq!(word_polynomial(&w("X^4AX")), bp("1 + x + x^2 + x^3 + x^4*y"));
        assert_eq!(word_polynomial(&w("A")), BivarPoly::zero());
        assert_eq!(word_polynomial(&w("X")), BivarPoly::one());
    }

    #[test]
    fn shape_of_word_polynomial() {
        let p = word_polynomial(&w("AXA^3X^2AXA"));
        assert_eq!(p.num_terms(), 4);
        assert!(p.terms().all(|(_, _, c)| c.is_one()));
        let xs: Vec<u32> = p.terms().map(|(i, _, _)| i).collect();
        assert_eq!(xs, [0, 1, 2, 3]);
    }

    #[test]
    fn compose_identity_examples() {
        let (l, r) = poly_compose_identity(&w("XX"), &w("XAX")).unwrap();
        let expected = bp("1 + x*y + x^2*y + x^3*y^2");
        assert_eq!(l, expected);
        assert_eq!(r, expected);
        assert_eq!(r, &bp("1 + x^2*y") * &bp("1 + x*y"));

        let any = w("XA^2X^3AX");
        let (l, r) = poly_compose_identity(&w("X"), &any).unwrap();
        assert_eq!(l, word_polynomial(&any));
        assert_eq!(r, word_polynomial(&any));

        let v = w("XAXAX");
        let (l, r) = poly_compose_identity(&v, &v).unwrap();
        assert_eq!(v.compose(&v).len(), 17);
        assert_eq!(l, r);
        assert_eq!(l.degree_x(), Some(8));

        assert!(poly_compose_identity(&w("XA"), &w("X")).is_err());
        assert!(poly_compose_identity(&w("X"), &w("A")).is_err());
    }

    #[test]
    fn affine_examples() {
        let b = |v: i64| BigInt::from(v);
        assert_eq!(affine_image(&w("X"), &b(5), &b(7), &b(3)), (b(5), b(3)));
        assert_eq!(affine_image(&w("A"), &b(5), &b(7), &b(3)), (b(7), b(0)));
        assert_eq!(affine_image(&w("X^2AX"), &b(2), &b(3), &b(1)), (b(24), b(15)));
    }

    #[test]
    fn reconstruction() {
        for s in ["X", "X^2AX", "AXA^3X^2", "A^2XAX"] {
            assert_eq!(word_from_polynomial(&word_polynomial(&w(s))).unwrap(), w(s));
        }
        assert!(word_from_polynomial(&bp("1 + 2*x")).is_none());
        assert!(word_from_polynomial(&bp("1 + x^2")).is_none());
        assert!(word_from_polynomial(&bp("y + x")).is_none());
    }

    #[test]
    fn eval_mod_examples() {
        assert_eq!(eval_mod(&bp("1 + x^2 + x^4*y^2"), 1, 3, 11), 0);
        assert_eq!(eval_mod(&bp("9 + x"), 0, 0, 7), 2);
    }
}
