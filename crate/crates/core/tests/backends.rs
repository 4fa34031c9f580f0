use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use udword::backends::{
    rat, series_rational_power, series_solve_product, series_to_matrix, ut_rational_power, ut_solve_product,
    ut_solve_word, GroupBackend, NCSeries, RatMatrix, SeriesBackend, UnipotentMatrix, UtBackend,
};
use udword::radical::{evaluate, riccati, riccati_alt};

fn product(a_list: &[UnipotentMatrix], x: &UnipotentMatrix) -> UnipotentMatrix {
    a_list
        .iter()
        .fold(UnipotentMatrix::identity(x.dim()), |acc, a| acc.mul(a).mul(x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn solution_is_unique(seed in any::<u64>(), dim in 2usize..=4, m in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a_list: Vec<_> = (0..m).map(|_| UnipotentMatrix::random(dim, &mut rng)).collect();
        let b = UnipotentMatrix::random(dim, &mut rng);
        let x = ut_solve_product(&a_list, &b).unwrap();
        prop_assert_eq!(product(&a_list, &x), b.clone());
        for i in 0..dim {
            for j in (i + 1)..dim {
                let mut bumped = x.as_matrix().clone();
                bumped.set(i, j, x.get(i, j) + BigRational::one());
                let bumped = UnipotentMatrix::new(bumped).unwrap();
                prop_assert_ne!(product(&a_list, &bumped), b.clone());
            }
        }
    }

    #[test]
    fn power_laws_in_ut(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = UnipotentMatrix::random(4, &mut rng);
        let sixth = ut_rational_power(&g, &rat(1, 6));
        prop_assert_eq!(ut_rational_power(&ut_rational_power(&g, &rat(1, 2)), &rat(1, 3)), sixth.clone());
        prop_assert_eq!(ut_rational_power(&ut_rational_power(&g, &rat(1, 3)), &rat(1, 2)), sixth);
        let (r, s) = (rat(2, 5), rat(-3, 7));
        prop_assert_eq!(
            ut_rational_power(&g, &r).mul(&ut_rational_power(&g, &s)),
            ut_rational_power(&g, &(&r + &s))
        );
    }

    #[test]
    fn power_laws_in_series(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = NCSeries::random(4, &mut rng).unwrap();
        let p = |f: &NCSeries, r: BigRational| series_rational_power(f, &r).unwrap();
        let sixth = p(&g, rat(1, 6));
        prop_assert_eq!(p(&p(&g, rat(1, 2)), rat(1, 3)), sixth.clone());
        prop_assert_eq!(p(&p(&g, rat(1, 3)), rat(1, 2)), sixth);
        prop_assert_eq!(p(&g, rat(3, 4)).mul(&p(&g, rat(1, 4))), g);
    }

    #[test]
    fn series_solver_satisfies_equation(seed in any::<u64>(), m in 1usize..=3, degree in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a_list: Vec<_> = (0..m).map(|_| NCSeries::random(degree, &mut rng).unwrap()).collect();
        let b = NCSeries::random(degree, &mut rng).unwrap();
        let x = series_solve_product(&a_list, &b).unwrap();
        let prod = a_list.iter().fold(NCSeries::one(degree).unwrap(), |acc, a| acc.mul(a).mul(&x));
        prop_assert_eq!(prod, b);
    }
}

#[test]
fn roots_agree_with_solver() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for dim in 1..=5 {
        for m in 1..=5 {
            let b = UnipotentMatrix::random(dim, &mut rng);
            let ones = vec![UnipotentMatrix::identity(dim); m];
            let x = ut_solve_product(&ones, &b).unwrap();
            assert_eq!(x, ut_rational_power(&b, &rat(1, m as i64)), "dim {dim}, m {m}");
        }
    }
}

#[test]
fn riccati_double_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let xax = "XAX".parse().unwrap();
    for dim in 3..=5 {
        for _ in 0..5 {
            let be = UtBackend { dim };
            let a = be.random_element(&mut rng);
            let b = be.random_element(&mut rng);
            let solved = ut_solve_word(&xax, &a, &b).unwrap();
            assert_eq!(evaluate(&riccati(), &be, &a, &b).unwrap(), solved);
            assert_eq!(evaluate(&riccati_alt(), &be, &a, &b).unwrap(), solved);
        }
    }
}

/// Shift matrix for `a`, a generic strictly upper matrix for `b`.
fn nilpotents(n: usize) -> (RatMatrix, RatMatrix) {
    let mut na = RatMatrix::zero(n);
    let mut nb = RatMatrix::zero(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if j == i + 1 {
                na.set(i, j, rat(1, 1));
            }
            nb.set(i, j, rat((i + 2 * j) as i64, (j - i) as i64));
        }
    }
    (na, nb)
}

#[test]
fn series_and_matrices_agree() {
    for d in 1..=5 {
        let (na, nb) = nilpotents(d + 1);
        let sb = SeriesBackend { degree: d };
        let ub = UtBackend { dim: d + 1 };
        let id = RatMatrix::identity(d + 1);
        let ma = UnipotentMatrix::new(id.add(&na)).unwrap();
        let mb = UnipotentMatrix::new(id.add(&nb)).unwrap();
        for e in [riccati(), riccati_alt(), "(A^(1/3)B^(-2))^(5/2)A".parse().unwrap()] {
            let s = evaluate(&e, &sb, &sb.a(), &sb.b()).unwrap();
            let m = evaluate(&e, &ub, &ma, &mb).unwrap();
            assert_eq!(series_to_matrix(&s, &na, &nb).unwrap(), m, "{e} at degree {d}");
        }
    }
}

#[test]
fn serialization_roundtrips() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let m = UnipotentMatrix::random(4, &mut rng);
    let back: UnipotentMatrix = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
    assert_eq!(back, m);
    let s = NCSeries::random(3, &mut rng).unwrap();
    let back: NCSeries = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(back, s);
    assert!(serde_json::from_str::<UnipotentMatrix>(r#"{"dim":2,"entries":["1","0","1","1"]}"#).is_err());
}
