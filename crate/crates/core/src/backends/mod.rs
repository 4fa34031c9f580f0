//! Uniquely divisible groups with computable rational powers.

mod matrix;
mod rational;
mod real;
mod series;

pub use matrix::{ut_rational_power, ut_solve_product, ut_solve_word, RatMatrix, UnipotentMatrix, UtBackend};
pub use rational::{binomial, format_rational, parse_rational, rat, small_rational};
pub use real::{real_riccati, RealBackend};
pub use series::{MAX_SERIES_DEGREE, series_rational_power, series_solve_product, series_solve_word, series_to_matrix, Monomial, NCSeries, SeriesBackend};

use std::fmt::Debug;

use num_rational::BigRational;
use rand::RngCore;

use crate::error::Result;
use crate::word::{Letter, Word};

/// A group with identity, product, inverse and rational powers
/// `g^r`, obeying `(g^r)^s = g^{rs}` and `g^r g^s = g^{r+s}` (exactly, or
/// within tolerance for floating-point backends).
pub trait GroupBackend {
    type Elem: Clone + Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn rational_power(&self, g: &Self::Elem, r: &BigRational) -> Result<Self::Elem>;

    /// A random element suitable for trials.
    fn random_element(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// Equality: exact for rational backends, approximate for reals.
    fn same(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    fn name(&self) -> String;
}

/// `w(x, a)` evaluated letter by letter.
pub fn eval_word<G: GroupBackend>(g: &G, w: &Word, x: &G::Elem, a: &G::Elem) -> G::Elem {
    w.letters().into_iter().fold(g.identity(), |acc, l| {
        g.mul(
            &acc,
            match l {
                Letter::X => x,
                Letter::A => a,
            },
        )
    })
}

/// `g^k` for an integer `k` (negative powers through the inverse).
pub fn int_power<G: GroupBackend>(g: &G, x: &G::Elem, k: i64) -> Result<G::Elem> {
    let base = if k < 0 { g.inv(x)? } else { x.clone() };
    Ok((0..k.unsigned_abs()).fold(g.identity(), |acc, _| g.mul(&acc, &base)))
}
