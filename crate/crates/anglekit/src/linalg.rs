//! Dense exact linear algebra over the rationals.
//!
//! Everything here is fraction-free in spirit but implemented directly on
//! `BigRational`: the matrices are tiny (dimensions below ten, a few dozen
//! rows) so clarity wins over Bareiss-style pivoting.

use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::Error;
use crate::rat::{rat_from_json, rat_to_json, Rat};

/// A point or direction in ℚ^d.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatVec {
    pub coords: Vec<Rat>,
}

impl RatVec {
    pub fn new(coords: Vec<Rat>) -> Self {
        RatVec { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        RatVec { coords: vec![Rat::zero(); dim] }
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coords[i] = Rat::one();
        v
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RatVec { coords: coords.iter().map(|&c| crate::rat::rat(c)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn dot(&self, other: &RatVec) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .fold(Rat::zero(), |acc, x| acc + x)
    }

    pub fn add(&self, other: &RatVec) -> RatVec {
        RatVec::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &RatVec) -> RatVec {
        RatVec::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rat) -> RatVec {
        RatVec::new(self.coords.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> RatVec {
        RatVec::new(self.coords.iter().map(|a| -a).collect())
    }

    /// Clears denominators and divides by the content, fixing the sign of the
    /// first nonzero entry to be positive. Canonical representative of the
    /// ray spanned by the vector.
    pub fn primitive(&self) -> RatVec {
        use num_bigint::BigInt;
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm = BigInt::one();
        for c in &self.coords {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coords
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let mut gcd = BigInt::zero();
        for i in &ints {
            gcd = gcd.gcd(i);
        }
        let first_sign = ints.iter().find(|i| !i.is_zero()).unwrap().sign();
        let gcd = if first_sign == num_bigint::Sign::Minus { -gcd } else { gcd };
        RatVec::new(ints.into_iter().map(|i| Rat::from_integer(i / &gcd)).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(crate::rat::rat_to_f64).collect()
    }

    pub fn from_json(v: &Value) -> Result<Self, Error> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Invalid(format!("expected vector, got {v}")))?;
        Ok(RatVec::new(arr.iter().map(rat_from_json).collect::<Result<_, _>>()?))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coords.iter().map(rat_to_json).collect())
    }
}

/// Row-major matrix over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMat {
    pub rows: Vec<RatVec>,
    pub cols: usize,
}

impl RatMat {
    pub fn new(rows: Vec<RatVec>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.dim() == cols));
        RatMat { rows, cols }
    }

    pub fn from_rows(rows: Vec<RatVec>) -> Self {
        let cols = rows.first().map(|r| r.dim()).unwrap_or(0);
        Self::new(rows, cols)
    }

    pub fn identity(n: usize) -> Self {
        Self::new((0..n).map(|i| RatVec::unit(n, i)).collect(), n)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Exact rank via Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Rat>> = self.rows.iter().map(|r| r.coords.clone()).collect();
        let nrows = m.len();
        let ncols = self.cols;
        let mut rank = 0;
        let mut col = 0;
        while rank < nrows && col < ncols {
            let pivot = (rank..nrows).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else {
                col += 1;
                continue;
            };
            m.swap(rank, p);
            let inv = m[rank][col].recip();
            for c in col..ncols {
                m[rank][c] = &m[rank][c] * &inv;
            }
            for r in 0..nrows {
                if r != rank && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..ncols {
                        let sub = &m[rank][c] * &f;
                        m[r][c] = &m[r][c] - sub;
                    }
                }
            }
            rank += 1;
            col += 1;
        }
        rank
    }

    /// Basis of {x : Ax = 0}.
    pub fn nullspace(&self) -> Vec<RatVec> {
        let mut m: Vec<Vec<Rat>> = self.rows.iter().map(|r| r.coords.clone()).collect();
        let nrows = m.len();
        let ncols = self.cols;
        let mut pivots: Vec<usize> = Vec::new();
        let mut rank = 0;
        for col in 0..ncols {
            if rank >= nrows {
                break;
            }
            let pivot = (rank..nrows).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else { continue };
            m.swap(rank, p);
            let inv = m[rank][col].recip();
            for c in col..ncols {
                m[rank][c] = &m[rank][c] * &inv;
            }
            for r in 0..nrows {
                if r != rank && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..ncols {
                        let sub = &m[rank][c] * &f;
                        m[r][c] = &m[r][c] - sub;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = RatVec::zeros(ncols);
            v.coords[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                v.coords[p] = -m[i][f].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves Ax = b; returns None when inconsistent. When the system is
    /// underdetermined an arbitrary particular solution is returned.
    pub fn solve(&self, b: &RatVec) -> Option<RatVec> {
        let nrows = self.nrows();
        let ncols = self.cols;
        let mut m: Vec<Vec<Rat>> = self
            .rows
            .iter()
            .zip(&b.coords)
            .map(|(r, bi)| {
                let mut row = r.coords.clone();
                row.push(bi.clone());
                row
            })
            .collect();
        let mut pivots: Vec<usize> = Vec::new();
        let mut rank = 0;
        for col in 0..ncols {
            if rank >= nrows {
                break;
            }
            let pivot = (rank..nrows).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else { continue };
            m.swap(rank, p);
            let inv = m[rank][col].recip();
            for c in col..=ncols {
                m[rank][c] = &m[rank][c] * &inv;
            }
            for r in 0..nrows {
                if r != rank && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..=ncols {
                        let sub = &m[rank][c] * &f;
                        m[r][c] = &m[r][c] - sub;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        for r in rank..nrows {
            if !m[r][ncols].is_zero() {
                return None;
            }
        }
        let mut x = RatVec::zeros(ncols);
        for (i, &p) in pivots.iter().enumerate() {
            x.coords[p] = m[i][ncols].clone();
        }
        Some(x)
    }

    /// Exact determinant (square matrices).
    pub fn det(&self) -> Rat {
        assert_eq!(self.nrows(), self.cols, "determinant of a non-square matrix");
        let n = self.cols;
        let mut m: Vec<Vec<Rat>> = self.rows.iter().map(|r| r.coords.clone()).collect();
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else { return Rat::zero() };
            if p != col {
                m.swap(col, p);
                det = -det;
            }
            det *= m[col][col].clone();
            let inv = m[col][col].recip();
            for r in col + 1..n {
                if !m[r][col].is_zero() {
                    let f = &m[r][col] * &inv;
                    for c in col..n {
                        let sub = &m[col][c] * &f;
                        m[r][c] = &m[r][c] - sub;
                    }
                }
            }
        }
        det
    }
}

/// A linear subspace of ℚ^d given by a basis.
#[derive(Clone, Debug)]
pub struct LinearSubspace {
    basis: Vec<RatVec>,
    ambient_dim: usize,
}

impl LinearSubspace {
    /// Builds the span of the given vectors, reducing to an independent basis.
    pub fn span(vectors: &[RatVec], ambient_dim: usize) -> Self {
        let mut basis: Vec<RatVec> = Vec::new();
        for v in vectors {
            debug_assert_eq!(v.dim(), ambient_dim);
            if v.is_zero() {
                continue;
            }
            let mut cand = basis.clone();
            cand.push(v.clone());
            if RatMat::from_rows(cand.clone()).rank() > basis.len() {
                basis.push(v.clone());
            }
        }
        LinearSubspace { basis, ambient_dim }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        LinearSubspace { basis: vec![], ambient_dim }
    }

    pub fn full(ambient_dim: usize) -> Self {
        LinearSubspace {
            basis: (0..ambient_dim).map(|i| RatVec::unit(ambient_dim, i)).collect(),
            ambient_dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[RatVec] {
        &self.basis
    }

    pub fn contains(&self, v: &RatVec) -> bool {
        if v.is_zero() {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.clone());
        RatMat::from_rows(rows).rank() == self.basis.len()
    }

    pub fn eq_subspace(&self, other: &LinearSubspace) -> bool {
        self.dim() == other.dim() && other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &LinearSubspace) -> LinearSubspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        LinearSubspace::span(&vs, self.ambient_dim)
    }

    pub fn intersect(&self, other: &LinearSubspace) -> LinearSubspace {
        // L1 ∩ L2 = (L1⊥ + L2⊥)⊥
        self.orthogonal_complement()
            .sum(&other.orthogonal_complement())
            .orthogonal_complement()
    }

    /// L⊥: dim(L) + dim(L⊥) = ambient, all pairwise inner products zero.
    pub fn orthogonal_complement(&self) -> LinearSubspace {
        if self.basis.is_empty() {
            return LinearSubspace::full(self.ambient_dim);
        }
        let m = RatMat::new(self.basis.clone(), self.ambient_dim);
        LinearSubspace { basis: m.nullspace(), ambient_dim: self.ambient_dim }
    }
}
