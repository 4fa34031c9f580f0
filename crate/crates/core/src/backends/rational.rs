use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// `"p/q"`, or just `"p"` for integers.
pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

/// Generalized binomial coefficient `r (r-1) ... (r-k+1) / k!`.
pub fn binomial(r: &BigRational, k: usize) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * (r - BigRational::from_integer(BigInt::from(i))) / BigRational::from_integer(BigInt::from(i + 1));
    }
    acc
}

/// Numerator in `[-3, 3]`, denominator in `[1, 3]`.
pub fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    rat(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}
