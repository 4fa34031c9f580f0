use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::rational::{binomial, format_rational, parse_rational, small_rational};
use super::GroupBackend;
use crate::error::{Error, Result};
use crate::word::Word;

/// Square matrix over the rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zero(n: usize) -> Self {
        RatMatrix {
            n,
            data: vec![BigRational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: r.len() });
            }
            data.extend(r);
        }
        Ok(RatMatrix { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.data
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        RatMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        RatMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RatMatrix {
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Leading `k x k` block.
    pub fn leading(&self, k: usize) -> Self {
        let mut out = Self::zero(k);
        for i in 0..k {
            for j in 0..k {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        out
    }

    /// Rows `0..k` of column `col`.
    pub fn column_head(&self, col: usize, k: usize) -> Vec<BigRational> {
        (0..k).map(|i| self.get(i, col).clone()).collect()
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| match i.cmp(&j) {
                std::cmp::Ordering::Greater => self.get(i, j).is_zero(),
                std::cmp::Ordering::Equal => self.get(i, j).is_one(),
                std::cmp::Ordering::Less => true,
            })
        })
    }

    /// Solves `self * y = rhs` for upper triangular `self` with nonzero
    /// diagonal.
    fn solve_upper(&self, rhs: &[BigRational]) -> Vec<BigRational> {
        let n = self.n;
        let mut y = vec![BigRational::zero(); n];
        for i in (0..n).rev() {
            let mut acc = rhs[i].clone();
            for j in (i + 1)..n {
                acc -= self.get(i, j) * &y[j];
            }
            y[i] = acc / self.get(i, i);
        }
        y
    }
}

/// Upper unitriangular matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnipotentMatrix {
    m: RatMatrix,
}

impl UnipotentMatrix {
    pub fn identity(n: usize) -> Self {
        UnipotentMatrix {
            m: RatMatrix::identity(n),
        }
    }

    pub fn new(m: RatMatrix) -> Result<Self> {
        if !m.is_upper_unitriangular() {
            return Err(Error::InvalidArgument("matrix is not upper unitriangular".into()));
        }
        Ok(UnipotentMatrix { m })
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        Self::new(RatMatrix::from_rows(rows)?)
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
                .collect(),
        )
    }

    /// Unit diagonal with small random rationals above it.
    pub fn random(n: usize, rng: &mut dyn RngCore) -> Self {
        let mut m = RatMatrix::identity(n);
        for i in 0..n {
            for j in (i + 1)..n {
                m.set(i, j, small_rational(rng));
            }
        }
        UnipotentMatrix { m }
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn as_matrix(&self) -> &RatMatrix {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        self.m.get(i, j)
    }

    pub fn mul(&self, other: &Self) -> Self {
        UnipotentMatrix {
            m: self.m.mul(&other.m),
        }
    }

    /// Nilpotent part `M - I`.
    pub fn nilpotent(&self) -> RatMatrix {
        self.m.sub(&RatMatrix::identity(self.dim()))
    }

    pub fn inv(&self) -> Self {
        ut_rational_power(self, &BigRational::from_integer(BigInt::from(-1)))
    }

    pub fn leading(&self, k: usize) -> Self {
        UnipotentMatrix { m: self.m.leading(k) }
    }

    /// Row-major exact-rational strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.m.entries().iter().map(format_rational).collect()
    }

    pub fn from_strings(dim: usize, entries: &[String]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        let vals = entries.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        Self::from_rows(vals.chunks(dim).map(|c| c.to_vec()).collect())
    }
}

impl fmt::Display for UnipotentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        let cells = self.to_strings();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..n {
            f.write_str("[")?;
            for j in 0..n {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{:>width$}", cells[i * n + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRecord {
    dim: usize,
    entries: Vec<String>,
}

impl Serialize for UnipotentMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRecord {
            dim: self.dim(),
            entries: self.to_strings(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnipotentMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = MatrixRecord::deserialize(d)?;
        UnipotentMatrix::from_strings(rec.dim, &rec.entries).map_err(serde::de::Error::custom)
    }
}

/// `M^r = Σ_{k<n} C(r, k) N^k` with `N = M - I`.
pub fn ut_rational_power(m: &UnipotentMatrix, r: &BigRational) -> UnipotentMatrix {
    let n = m.dim();
    let nil = m.nilpotent();
    let mut acc = RatMatrix::identity(n);
    let mut nk = RatMatrix::identity(n);
    for k in 1..n {
        nk = nk.mul(&nil);
        let c = binomial(r, k);
        if !c.is_zero() {
            acc = acc.add(&nk.scale(&c));
        }
    }
    UnipotentMatrix { m: acc }
}

/// The unique `X` with `(A_1 X)(A_2 X)...(A_m X) = B`, built column by
/// column: with the leading block `Y` solved, the new column `y` satisfies
/// `u + M y = v`, `M = Σ_j (Π_{i<j} U_i Y) U_j`.
pub fn ut_solve_product(a_list: &[UnipotentMatrix], b: &UnipotentMatrix) -> Result<UnipotentMatrix> {
    if a_list.is_empty() {
        return Err(Error::InvalidArgument("product needs at least one factor".into()));
    }
    let n = b.dim();
    for a in a_list {
        if a.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: a.dim(),
            });
        }
    }
    let mut x = RatMatrix::identity(n);
    for k in 1..n {
        let y = x.leading(k);
        let v = b.m.column_head(k, k);
        let mut prefix = RatMatrix::identity(k);
        let mut u = vec![BigRational::zero(); k];
        let mut big_m = RatMatrix::zero(k);
        for a in a_list {
            let ui = a.m.leading(k);
            let col = a.m.column_head(k, k);
            for (acc, d) in u.iter_mut().zip(prefix.mul_vec(&col)) {
                *acc += d;
            }
            let pu = prefix.mul(&ui);
            big_m = big_m.add(&pu);
            prefix = pu.mul(&y);
        }
        let rhs: Vec<BigRational> = v.iter().zip(&u).map(|(a, b)| a - b).collect();
        let sol = big_m.solve_upper(&rhs);
        for (i, val) in sol.into_iter().enumerate() {
            x.set(i, k, val);
        }
    }
    Ok(UnipotentMatrix { m: x })
}

/// Solves `w(X, A) = B` for any word with at least one `X`, writing it as
/// `Π (A^{a_{i-1}} X) = B A^{-a_n}`.
pub fn ut_solve_word(w: &Word, a: &UnipotentMatrix, b: &UnipotentMatrix) -> Result<UnipotentMatrix> {
    if w.x_count() == 0 {
        return Err(Error::InvalidArgument(format!("{w} contains no X")));
    }
    let e = w.exponents();
    let pow = |k: u32| ut_rational_power(a, &BigRational::from_integer(BigInt::from(k)));
    let factors: Vec<_> = e[..e.len() - 1].iter().map(|&k| pow(k)).collect();
    let tail = ut_rational_power(a, &BigRational::from_integer(-BigInt::from(e[e.len() - 1])));
    ut_solve_product(&factors, &b.mul(&tail))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UtBackend {
    pub dim: usize,
}

impl GroupBackend for UtBackend {
    type Elem = UnipotentMatrix;

    fn identity(&self) -> UnipotentMatrix {
        UnipotentMatrix::identity(self.dim)
    }

    fn mul(&self, a: &UnipotentMatrix, b: &UnipotentMatrix) -> UnipotentMatrix {
        a.mul(b)
    }

    fn inv(&self, a: &UnipotentMatrix) -> Result<UnipotentMatrix> {
        Ok(a.inv())
    }

    fn rational_power(&self, g: &UnipotentMatrix, r: &BigRational) -> Result<UnipotentMatrix> {
        Ok(ut_rational_power(g, r))
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> UnipotentMatrix {
        UnipotentMatrix::random(self.dim, rng)
    }

    fn same(&self, a: &UnipotentMatrix, b: &UnipotentMatrix) -> bool {
        a == b
    }

    fn name(&self) -> String {
        format!("ut:{}", self.dim)
    }
}
