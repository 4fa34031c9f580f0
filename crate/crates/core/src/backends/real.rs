use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, RngCore};

use super::GroupBackend;
use crate::error::{Error, Result};

/// Positive reals under multiplication, in floating point. Only a sanity
/// check; comparisons use a relative tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealBackend {
    pub tolerance: f64,
}

impl Default for RealBackend {
    fn default() -> Self {
        RealBackend { tolerance: 1e-9 }
    }
}

fn positive(x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::InvalidArgument(format!("{x} is not a positive real")))
    }
}

impl GroupBackend for RealBackend {
    type Elem = f64;

    fn identity(&self) -> f64 {
        1.0
    }

    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }

    fn inv(&self, a: &f64) -> Result<f64> {
        Ok(1.0 / positive(*a)?)
    }

    fn rational_power(&self, g: &f64, r: &BigRational) -> Result<f64> {
        let e = r
            .to_f64()
            .ok_or_else(|| Error::InvalidArgument(format!("exponent {r} out of range")))?;
        Ok(positive(*g)?.powf(e))
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> f64 {
        rng.gen_range(0.25..4.0)
    }

    fn same(&self, a: &f64, b: &f64) -> bool {
        (a - b).abs() <= self.tolerance * a.abs().max(b.abs()).max(1.0)
    }

    fn name(&self) -> String {
        "real".into()
    }
}

/// `x a x = b` over the positive reals.
pub fn real_riccati(a: f64, b: f64) -> Result<f64> {
    Ok((positive(b)? / positive(a)?).sqrt())
}

#[cfg(test)]
mod tests {
    use super::super::rational::rat;
    use super::*;

    #[test]
    fn basics() {
        let be = RealBackend::default();
        assert!(be.same(&be.rational_power(&4.0, &rat(1, 2)).unwrap(), &2.0));
        assert_eq!(real_riccati(1.0, 9.0).unwrap(), 3.0);
        assert!(be.rational_power(&-1.0, &rat(1, 2)).is_err());
        assert!(be.inv(&0.0).is_err());
        assert!(real_riccati(0.0, 1.0).is_err());
    }
}
