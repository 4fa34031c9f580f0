//! The groups `G_p = (Z/qZ) ⋉ (Z/pZ)`, `q = (p - 1)/2`, realized as affine
//! maps `z ↦ t^β z + γ` of `Z/pZ` with `t` of multiplicative order `q`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, mod_inverse, mulmod, powmod, smallest_primitive_root};
use crate::error::{Error, Result};
use crate::modp::find_nonzero_solution;
use crate::par::{self, Execution};
use crate::word::{Letter, Word};
use crate::wordpoly::word_polynomial;

/// `S^γ T^β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GpElement {
    pub gamma: u64,
    pub beta: u64,
}

impl GpElement {
    pub fn new(gamma: u64, beta: u64) -> Self {
        GpElement { gamma, beta }
    }
}

#[derive(Debug, Clone)]
pub struct GpGroup {
    p: u64,
    q: u64,
    t: u64,
    powers: Vec<u64>,
    dlog: Vec<Option<u64>>,
}

impl GpGroup {
    /// Builds `G_p` with `t = g^2` for the least primitive root `g`.
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
        }
        let q = (p - 1) / 2;
        let g = smallest_primitive_root(p);
        let t = mulmod(g, g, p);
        let mut powers = Vec::with_capacity(q as usize);
        let mut dlog = vec![None; p as usize];
        let mut acc = 1;
        for k in 0..q {
            powers.push(acc);
            dlog[acc as usize] = Some(k);
            acc = mulmod(acc, t, p);
        }
        debug_assert_eq!(acc, 1);
        Ok(GpGroup { p, q, t, powers, dlog })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn order(&self) -> u64 {
        self.p * self.q
    }

    /// `t^k` for `k` taken mod `q`.
    pub fn t_pow(&self, k: u64) -> u64 {
        self.powers[(k % self.q) as usize]
    }

    /// `k` with `t^k = r`, defined exactly on the nonzero quadratic residues.
    pub fn dlog(&self, r: u64) -> Option<u64> {
        self.dlog.get((r % self.p) as usize).copied().flatten()
    }

    pub fn identity(&self) -> GpElement {
        GpElement::new(0, 0)
    }

    pub fn s(&self) -> GpElement {
        GpElement::new(1 % self.p, 0)
    }

    pub fn t_elem(&self) -> GpElement {
        GpElement::new(0, 1 % self.q)
    }

    pub fn contains(&self, g: GpElement) -> bool {
        g.gamma < self.p && g.beta < self.q
    }

    /// Elements in a fixed order: `γ` major, `β` minor.
    pub fn element(&self, index: u64) -> GpElement {
        GpElement::new(index / self.q, index % self.q)
    }

    pub fn elements(&self) -> impl Iterator<Item = GpElement> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    pub fn mul(&self, a: GpElement, b: GpElement) -> GpElement {
        // (z ↦ t^β1 z + γ1) ∘ (z ↦ t^β2 z + γ2)
        let gamma = (a.gamma + mulmod(self.t_pow(a.beta), b.gamma, self.p)) % self.p;
        GpElement::new(gamma, (a.beta + b.beta) % self.q)
    }

    pub fn inv(&self, a: GpElement) -> GpElement {
        let beta = (self.q - a.beta % self.q) % self.q;
        let gamma = mulmod(self.p - a.gamma % self.p, self.t_pow(beta), self.p) % self.p;
        GpElement::new(gamma, beta)
    }

    pub fn pow(&self, a: GpElement, e: i64) -> GpElement {
        let (mut base, mut e) = if e < 0 {
            (self.inv(a), e.unsigned_abs())
        } else {
            (a, e as u64)
        };
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The unique `m`-th root `g^r`, `r m ≡ 1 mod #G`.
    pub fn mth_root(&self, g: GpElement, m: u64) -> Result<GpElement> {
        let order = self.order();
        if m == 0 || gcd(m, order) != 1 {
            return Err(Error::Hypothesis(format!(
                "gcd({m}, #G = {order}) != 1; roots need not exist or be unique"
            )));
        }
        let r = mod_inverse(m % order, order).unwrap();
        Ok(self.pow(g, r as i64))
    }

    /// `w(x, a)`, multiplying letter by letter.
    pub fn eval_word(&self, w: &Word, x: GpElement, a: GpElement) -> GpElement {
        w.letters().into_iter().fold(self.identity(), |acc, l| {
            self.mul(
                acc,
                match l {
                    Letter::X => x,
                    Letter::A => a,
                },
            )
        })
    }

    /// `S^{γ P_w(t^β, t^α)} T^{αm + βn}`, computed from the word polynomial.
    pub fn lemma63_rhs(&self, w: &Word, gamma: u64, beta: u64, alpha: u64) -> GpElement {
        let pw = word_polynomial(w);
        let val = pw.eval_mod(self.t_pow(beta), self.t_pow(alpha), self.p);
        let m = w.a_count() % self.q;
        let n = w.x_count() as u64 % self.q;
        let exp_t = (mulmod(alpha, m, self.q) + mulmod(beta, n, self.q)) % self.q;
        GpElement::new(mulmod(gamma, val, self.p), exp_t)
    }

    /// Two distinct `g1, g2` with `w(g1, a) = w(g2, a)`, or `None` when
    /// `X ↦ w(X, a)` is a bijection.
    pub fn find_collision(&self, w: &Word, a: GpElement) -> Option<(GpElement, GpElement, GpElement)> {
        self.find_collision_with(w, a, Execution::default())
    }

    pub fn find_collision_with(
        &self,
        w: &Word,
        a: GpElement,
        exec: Execution,
    ) -> Option<(GpElement, GpElement, GpElement)> {
        let values = par::map_range(exec, 0..self.order(), |i| self.eval_word(w, self.element(i), a));
        let mut seen: HashMap<GpElement, u64> = HashMap::with_capacity(values.len());
        for (i, v) in values.into_iter().enumerate() {
            if let Some(&first) = seen.get(&v) {
                return Some((self.element(first), self.element(i as u64), v));
            }
            seen.insert(v, i as u64);
        }
        None
    }

    /// True iff no `X` in the group satisfies `w(X, a) = b`.
    pub fn verify_no_solution(&self, w: &Word, a: GpElement, b: GpElement) -> bool {
        self.verify_no_solution_with(w, a, b, Execution::default())
    }

    pub fn verify_no_solution_with(&self, w: &Word, a: GpElement, b: GpElement, exec: Execution) -> bool {
        !par::any_in_range(exec, 0..self.order(), |i| self.eval_word(w, self.element(i), a) == b)
    }

    /// `a = T^α`, `b = S T^{αm + δn}` from a nonzero zero `(x, y)` of
    /// `P_w(x^2, y^2)` mod `p`, where `x^2 = t^δ` and `y^2 = t^α`.
    pub fn construct_counterexample(&self, w: &Word) -> Result<Option<Counterexample>> {
        let n = w.x_count() as u64;
        if gcd(n, self.q) != 1 {
            return Err(Error::Hypothesis(format!(
                "number of X's ({n}) must be coprime to q = {}",
                self.q
            )));
        }
        let squared = word_polynomial(w).substitute_squares();
        let Some((x, y)) = find_nonzero_solution(&squared, self.p) else {
            return Ok(None);
        };
        let delta = self.dlog(mulmod(x, x, self.p)).expect("squares are powers of t");
        let alpha = self.dlog(mulmod(y, y, self.p)).expect("squares are powers of t");
        let m = w.a_count() % self.q;
        let exp_t = (mulmod(alpha, m, self.q) + mulmod(delta, n % self.q, self.q)) % self.q;
        Ok(Some(Counterexample {
            p: self.p,
            x,
            y,
            delta,
            alpha,
            a: GpElement::new(0, alpha),
            b: GpElement::new(1, exp_t),
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub p: u64,
    pub x: u64,
    pub y: u64,
    pub delta: u64,
    pub alpha: u64,
    pub a: GpElement,
    pub b: GpElement,
}

/// Reference multiplication through 2x2 matrices mod `p`.
pub fn matrix_of(g: &GpGroup, e: GpElement) -> [[u64; 2]; 2] {
    [[g.t_pow(e.beta), e.gamma], [0, 1]]
}

pub fn matrix_mul(a: [[u64; 2]; 2], b: [[u64; 2]; 2], p: u64) -> [[u64; 2]; 2] {
    let mut out = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = (0..2).fold(0, |acc, k| (acc + mulmod(a[i][k], b[k][j], p)) % p);
        }
    }
    out
}

/// `true` iff `t` has multiplicative order exactly `q`.
pub fn has_order_q(t: u64, p: u64) -> bool {
    let q = (p - 1) / 2;
    powmod(t, q, p) == 1 && (1..q).all(|k| powmod(t, k, p) != 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn construction() {
        let g7 = GpGroup::new(7).unwrap();
        assert_eq!((g7.q(), g7.t()), (3, 2));
        let g11 = GpGroup::new(11).unwrap();
        assert_eq!((g11.q(), g11.t()), (5, 4));
        let mut pw: Vec<u64> = (0..5).map(|k| g11.t_pow(k)).collect();
        assert_eq!(pw, [1, 4, 5, 9, 3]);
        pw.sort();
        let mut qr: Vec<u64> = (1..11).map(|x| x * x % 11).collect();
        qr.sort();
        qr.dedup();
        assert_eq!(pw, qr);
        let g3 = GpGroup::new(3).unwrap();
        assert_eq!((g3.q(), g3.t(), g3.order()), (1, 1, 3));
        assert!(GpGroup::new(9).is_err());
        assert!(GpGroup::new(2).is_err());
        for p in [5, 7, 11, 13, 23, 31] {
            let g = GpGroup::new(p).unwrap();
            assert!(has_order_q(g.t(), p));
        }
    }

    #[test]
    fn arithmetic() {
        let g = GpGroup::new(7).unwrap();
        assert_eq!(g.mul(g.s(), g.t_elem()), GpElement::new(1, 1));
        assert_eq!(g.inv(g.s()), g.pow(g.s(), 6));
        assert_eq!(g.pow(g.t_elem(), 3), g.identity());
        for a in g.elements() {
            assert_eq!(g.mul(a, g.inv(a)), g.identity());
            assert_eq!(g.pow(a, -1), g.inv(a));
        }
    }

    #[test]
    fn roots() {
        let g = GpGroup::new(7).unwrap();
        assert_eq!(g.mth_root(g.s(), 1).unwrap(), g.s());
        assert_eq!(g.mth_root(g.s(), 2).unwrap(), g.pow(g.s(), 11));
        assert!(g.mth_root(g.s(), 3).is_err());
    }

    #[test]
    fn word_evaluation() {
        let g = GpGroup::new(11).unwrap();
        let x = GpElement::new(4, 2);
        assert_eq!(g.eval_word(&w("X"), x, g.s()), x);
        // S T S = (z ↦ t(z + 1) + 1): gamma = 1 + t = 5, beta = 1
        assert_eq!(g.eval_word(&w("XAX"), g.s(), g.t_elem()), GpElement::new(5, 1));
        let t3 = g.pow(g.t_elem(), 3);
        assert_eq!(g.eval_word(&w("X^2AX"), g.s(), t3), t3);
        let t2 = g.pow(g.t_elem(), 2);
        assert_eq!(g.eval_word(&w("X^2AX"), g.s(), t2), GpElement::new(7, 2));
    }

    #[test]
    fn lemma63_examples() {
        let g = GpGroup::new(11).unwrap();
        assert_eq!(g.lemma63_rhs(&w("X"), 3, 2, 4), GpElement::new(3, 2));
        assert_eq!(g.lemma63_rhs(&w("A"), 3, 2, 4), GpElement::new(0, 4));
        assert_eq!(g.lemma63_rhs(&w("X^2AX"), 1, 0, 3), GpElement::new(0, 3));
        assert_eq!(g.lemma63_rhs(&w("X^2AX"), 1, 0, 2), GpElement::new(7, 2));
    }

    #[test]
    fn counterexample_x2ax_at_11() {
        let g = GpGroup::new(11).unwrap();
        let word = w("X^2AX");
        let ce = g.construct_counterexample(&word).unwrap().unwrap();
        assert_eq!((ce.x, ce.y, ce.delta, ce.alpha), (1, 3, 0, 3));
        assert_eq!(ce.a, GpElement::new(0, 3));
        assert_eq!(ce.b, GpElement::new(1, 3));
        assert!(g.verify_no_solution(&word, ce.a, ce.b));
        let (g1, g2, v) = g.find_collision(&word, ce.a).unwrap();
        assert_ne!(g1, g2);
        assert_eq!(g.eval_word(&word, g1, ce.a), v);
        assert_eq!(g.eval_word(&word, g2, ce.a), v);
    }

    #[test]
    fn counterexample_edge_cases() {
        let g = GpGroup::new(11).unwrap();
        assert_eq!(g.construct_counterexample(&w("XAXAX")).unwrap(), None);
        assert_eq!(g.construct_counterexample(&w("X")).unwrap(), None);
        // n = 5 shares a factor with q = 5
        assert!(g.construct_counterexample(&w("X^5")).is_err());
        assert!(!g.verify_no_solution(&w("X"), g.s(), g.t_elem()));
        assert!(!g.verify_no_solution(&w("XAX"), g.identity(), g.pow(g.s(), 2)));
        assert_eq!(g.find_collision(&w("X"), g.s()), None);
        let g7 = GpGroup::new(7).unwrap();
        assert_eq!(g7.find_collision(&w("X^2"), g7.s()), None);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let g = GpGroup::new(23).unwrap();
        let word = w("X^2AX");
        let a = GpElement::new(3, 4);
        assert_eq!(
            g.find_collision_with(&word, a, Execution::Sequential),
            g.find_collision_with(&word, a, Execution::Parallel)
        );
    }
}
