//! Solutions of `P(x, y) = 0` over prime fields with both coordinates
//! nonzero, and per-prime profiles of word polynomials.

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, mod_inverse, mulmod, next_prime, prime_factors, primes_between, sqrt_table};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::poly::{BivarPoly, ModPoly};
use crate::word::Word;
use crate::wordpoly::word_polynomial;

/// Default prime range for surveys.
pub const DEFAULT_P_MIN: u64 = 5;
pub const DEFAULT_P_MAX: u64 = 499;
/// Primes at or below this are ignored when judging exceptional primes.
pub const DEFAULT_SMALL_PRIME_CUTOFF: u64 = 13;
/// Candidates examined by [`find_suitable_prime`] before giving up.
pub const DEFAULT_PRIME_SEARCH_CAP: u64 = 1_000_000;

/// First `(x, y)` with `x, y` nonzero and `P(x, y) = 0 mod p`, scanning `x`
/// then `y` in increasing order.
pub fn find_nonzero_solution(poly: &BivarPoly, p: u64) -> Option<(u64, u64)> {
    let ctx = ModPoly::new(poly, p);
    find_with(&ctx)
}

fn find_with(ctx: &ModPoly) -> Option<(u64, u64)> {
    let p = ctx.modulus();
    if ctx.is_zero() {
        return (p > 1).then_some((1, 1));
    }
    let mut coeffs = Vec::new();
    for x in 1..p {
        ctx.specialize_x(x, &mut coeffs);
        if coeffs.iter().all(|&c| c == 0) {
            return Some((x, 1));
        }
        for y in 1..p {
            let v = coeffs.iter().rev().fold(0u64, |acc, &c| (mulmod(acc, y, p) + c) % p);
            if v == 0 {
                return Some((x, y));
            }
        }
    }
    None
}

/// Nonzero `(a, b)` with `1 + a^2 + b^2 = 0 mod p`.
///
/// Scans `a` upward for a residue making `-1 - a^2` a square. A hit with
/// `b = 0` is replaced by `(-1 + 1/4, a + a/4)`; that replacement vanishes
/// in its second coordinate when `p = 5`, so `p = 5` has no witness.
pub fn sum_of_squares_witness(p: u64) -> Result<(u64, u64)> {
    if p < 5 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not a prime >= 5")));
    }
    let roots = sqrt_table(p);
    let inv4 = mod_inverse(4, p).unwrap();
    let check = |a: u64, b: u64| a != 0 && b != 0 && (1 + mulmod(a, a, p) + mulmod(b, b, p)) % p == 0;
    for a in 1..p {
        let target = (p - 1 + p - mulmod(a, a, p)) % p;
        let Some(b) = roots[target as usize] else {
            continue;
        };
        if b != 0 {
            return Ok((a, b));
        }
        let a2 = (p - 1 + inv4) % p;
        let b2 = (a + mulmod(a, inv4, p)) % p;
        if check(a2, b2) {
            return Ok((a2, b2));
        }
    }
    Err(Error::NoWitness(format!(
        "1 + a^2 + b^2 = 0 has no solution with a, b nonzero mod {p}"
    )))
}

/// Largest prime factor of `n` (1 for `n = 1`).
pub fn default_smooth_bound(n: u64) -> u64 {
    prime_factors(n).last().copied().unwrap_or(1)
}

/// Smallest prime `p > lower` with `q = (p - 1)/2` coprime to `n` and no
/// prime factor of `q` up to `smooth_bound` dividing `n`.
pub fn find_suitable_prime(n: u64, lower: u64, smooth_bound: u64) -> Result<u64> {
    find_suitable_prime_capped(n, lower, smooth_bound, DEFAULT_PRIME_SEARCH_CAP)
}

pub fn find_suitable_prime_capped(n: u64, lower: u64, smooth_bound: u64, cap: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut p = lower.max(2);
    for _ in 0..cap {
        p = next_prime(p);
        if p == 2 {
            continue;
        }
        let q = (p - 1) / 2;
        let small_ok = prime_factors(q)
            .into_iter()
            .filter(|&r| r <= smooth_bound)
            .all(|r| gcd(r, n) == 1);
        if gcd(q, n) == 1 && small_ok {
            return Ok(p);
        }
    }
    Err(Error::SearchCapExceeded { cap })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub p: u64,
    pub solvable: bool,
    pub witness: Option<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeProfile {
    pub word: Word,
    pub entries: Vec<ProfileEntry>,
    pub range: (u64, u64),
    pub exceptional: Vec<u64>,
    #[serde(skip)]
    poly: BivarPoly,
}

impl PrimeProfile {
    pub fn new(word: Word, range: (u64, u64)) -> Self {
        let poly = word_polynomial(&word).substitute_squares();
        PrimeProfile {
            word,
            entries: Vec::new(),
            range,
            exceptional: Vec::new(),
            poly,
        }
    }

    /// Records the outcome at `p`, re-checking any witness against
    /// `P_w(x^2, y^2)`.
    pub fn insert(&mut self, p: u64, witness: Option<(u64, u64)>) -> Result<()> {
        if let Some((x, y)) = witness {
            if x % p == 0 || y % p == 0 || self.poly.eval_mod(x, y, p) != 0 {
                return Err(Error::InvalidArgument(format!(
                    "({x}, {y}) is not a nonzero zero of P_w(x^2, y^2) mod {p}"
                )));
            }
        } else {
            self.exceptional.push(p);
        }
        self.entries.push(ProfileEntry {
            p,
            solvable: witness.is_some(),
            witness,
        });
        Ok(())
    }

    pub fn exceptional_above(&self, cutoff: u64) -> Vec<u64> {
        self.exceptional.iter().copied().filter(|&p| p > cutoff).collect()
    }

    pub fn json_rows(&self) -> Result<Vec<String>> {
        self.entries
            .iter()
            .map(|e| serde_json::to_string(e).map_err(Error::from))
            .collect()
    }

    pub fn csv_summary(&self) -> String {
        let mut out = String::from("p,solvable,x,y\n");
        for e in &self.entries {
            let (x, y) = e
                .witness
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .unwrap_or_default();
            out.push_str(&format!("{},{},{x},{y}\n", e.p, e.solvable));
        }
        out
    }
}

/// Runs [`find_nonzero_solution`] on `P_w(x^2, y^2)` for every prime in
/// `[p_min, p_max]`.
pub fn prime_profile(w: &Word, p_min: u64, p_max: u64) -> Result<PrimeProfile> {
    prime_profile_with(w, p_min, p_max, Execution::default())
}

pub fn prime_profile_with(w: &Word, p_min: u64, p_max: u64, exec: Execution) -> Result<PrimeProfile> {
    if w.x_count() == 0 {
        return Err(Error::InvalidArgument(format!("{w} contains no X")));
    }
    if p_min < 3 {
        return Err(Error::InvalidArgument("p_min must be at least 3".into()));
    }
    let mut profile = PrimeProfile::new(w.clone(), (p_min, p_max));
    let primes = primes_between(p_min, p_max);
    let poly = profile.poly.clone();
    let found = par::map(exec, &primes, |&p| find_nonzero_solution(&poly, p));
    for (p, witness) in primes.into_iter().zip(found) {
        profile.insert(p, witness)?;
    }
    Ok(profile)
}
