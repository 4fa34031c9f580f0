use num_bigint::BigInt;
use proptest::prelude::*;

use udword::word::{Letter, Word};
use udword::wordpoly::{affine_image, poly_compose_identity, word_from_polynomial, word_polynomial};
use udword::BivarPoly;

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(any::<bool>(), 1..=max_len)
        .prop_map(|bits| Word::from_letters(bits.into_iter().map(|b| if b { Letter::A } else { Letter::X })))
}

fn x_terminated(max_len: usize) -> impl Strategy<Value = Word> {
    word_strategy(max_len - 1).prop_map(|w| w.concat(&Word::x()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn affine_oracle(w in word_strategy(8), x in -9i64..=9, y in -9i64..=9, z in -9i64..=9) {
        let (x, y, z) = (BigInt::from(x), BigInt::from(y), BigInt::from(z));
        let (s, t) = affine_image(&w, &x, &y, &z);
        prop_assert_eq!(s, x.pow(w.x_count() as u32) * y.pow(w.a_count() as u32));
        prop_assert_eq!(t, word_polynomial(&w).eval(&x, &y) * z);
    }

    #[test]
    fn composition_identity(u in x_terminated(8), w in x_terminated(8)) {
        let (lhs, rhs) = poly_compose_identity(&u, &w).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn prepend_recurrences(w in word_strategy(12)) {
        let p = word_polynomial(&w);
        let xw = Word::x().concat(&w);
        let aw = Word::a_power(1).concat(&w);
        prop_assert_eq!(word_polynomial(&xw), &(&BivarPoly::monomial(1, 1, 0) * &p) + &BivarPoly::one());
        prop_assert_eq!(word_polynomial(&aw), &BivarPoly::monomial(1, 0, 1) * &p);
    }

    #[test]
    fn reconstruction(w in x_terminated(14)) {
        prop_assert_eq!(word_from_polynomial(&word_polynomial(&w)), Some(w));
    }

    #[test]
    fn term_count_is_x_count(w in word_strategy(14)) {
        prop_assert_eq!(word_polynomial(&w).num_terms(), w.x_count());
    }
}

#[test]
fn composition_requires_x_terminated_words() {
    let xa: Word = "XA".parse().unwrap();
    assert!(poly_compose_identity(&xa, &Word::x()).is_err());
    assert!(poly_compose_identity(&Word::x(), &xa).is_err());
}
