//! Subspaces of `F_q^n` held in reduced row echelon form.
//!
//! The RREF basis is canonical, so equality and hashing are structural.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{digits_to_hex, hex_to_digits, hex_width};
use crate::linalg::{self, PrimeField, Scalars};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    q: u32,
    n: usize,
    rows: Vec<Vec<u32>>,
}

impl Subspace {
    /// Row space of `vectors`, canonicalised.
    pub fn span(q: u32, n: usize, vectors: Vec<Vec<u32>>) -> Result<Self> {
        for v in &vectors {
            if v.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
            if let Some(&bad) = v.iter().find(|&&c| c >= q) {
                return Err(Error::DigitOutOfRange { digit: bad as u64, q });
            }
        }
        Ok(Self::span_unchecked(q, n, vectors))
    }

    pub(crate) fn span_unchecked(q: u32, n: usize, mut rows: Vec<Vec<u32>>) -> Self {
        linalg::rref(&PrimeField::new(q), &mut rows);
        Subspace { q, n, rows }
    }

    pub fn zero(q: u32, n: usize) -> Self {
        Subspace { q, n, rows: Vec::new() }
    }

    pub fn full(q: u32, n: usize) -> Self {
        let rows = (0..n)
            .map(|r| (0..n).map(|c| u32::from(r == c)).collect())
            .collect();
        Subspace { q, n, rows }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// The canonical basis, one row per dimension.
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    fn field(&self) -> PrimeField {
        PrimeField::new(self.q)
    }

    fn compatible(&self, other: &Subspace) -> Result<()> {
        if self.q != other.q {
            return Err(Error::BaseFieldMismatch {
                left: self.q,
                right: other.q,
            });
        }
        if self.n != other.n {
            return Err(Error::AmbientMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// `U + V`.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Ok(Self::span_unchecked(self.q, self.n, rows))
    }

    /// `U ∩ V` by the Zassenhaus algorithm: echelonise `[[U, U], [V, 0]]`;
    /// rows whose left half vanished carry a basis of the intersection in
    /// their right half.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        let n = self.n;
        let mut block: Vec<Vec<u32>> = self
            .rows
            .iter()
            .map(|r| r.iter().chain(r.iter()).copied().collect())
            .chain(
                other
                    .rows
                    .iter()
                    .map(|r| r.iter().copied().chain(std::iter::repeat_n(0, n)).collect()),
            )
            .collect();
        let pivots = linalg::rref(&self.field(), &mut block);
        let meet = block
            .into_iter()
            .zip(pivots)
            .filter(|(_, p)| *p >= n)
            .map(|(row, _)| row[n..].to_vec())
            .collect();
        Ok(Self::span_unchecked(self.q, n, meet))
    }

    /// `dim U + dim V - 2 dim(U ∩ V)`.
    pub fn distance(&self, other: &Subspace) -> Result<usize> {
        let meet = self.intersect(other)?.dim();
        Ok(self.dim() + other.dim() - 2 * meet)
    }

    /// Reduces `v` against the canonical rows; the remainder is zero exactly
    /// when `v` lies in the span.
    fn residual(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field();
        let mut r = v.to_vec();
        for row in &self.rows {
            let pivot = row.iter().position(|&c| c != 0).expect("rref rows are nonzero");
            let c = r[pivot];
            if c != 0 {
                for (x, &y) in r.iter_mut().zip(row) {
                    *x = f.sub(x, &f.mul(&c, &y));
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool> {
        if v.len() != self.n {
            return Err(Error::AmbientMismatch {
                left: self.n,
                right: v.len(),
            });
        }
        Ok(self.residual(v).iter().all(|&c| c == 0))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.compatible(other)?;
        Ok(self.rows.iter().all(|r| other.residual(r).iter().all(|&c| c == 0)))
    }

    /// `sum_j coeffs[j] * basis[j]`.
    pub fn combine(&self, coeffs: &[u32]) -> Vec<u32> {
        let f = self.field();
        let mut out = vec![0u32; self.n];
        for (row, &c) in self.rows.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(row) {
                *o = f.add(o, &f.mul(&c, &x));
            }
        }
        out
    }

    /// Every vector of the subspace, for tiny cases only.
    pub fn elements(&self) -> Vec<Vec<u32>> {
        let count = (self.q as usize).pow(self.dim() as u32);
        (0..count)
            .map(|mut idx| {
                let coeffs: Vec<u32> = (0..self.dim())
                    .map(|_| {
                        let c = (idx % self.q as usize) as u32;
                        idx /= self.q as usize;
                        c
                    })
                    .collect();
                self.combine(&coeffs)
            })
            .collect()
    }

    pub fn random_vector_in<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u32> {
        let coeffs: Vec<u32> = (0..self.dim()).map(|_| rng.gen_range(0..self.q)).collect();
        self.combine(&coeffs)
    }

    /// A uniformly random `d`-dimensional subspace of `self`: random
    /// `d x dim` coefficient matrices are drawn until one has full rank.
    /// Every subspace has the same number of generating matrices, so the
    /// result is uniform.
    pub fn random_subspace_of<R: Rng + ?Sized>(&self, d: usize, rng: &mut R) -> Result<Subspace> {
        if d > self.dim() {
            return Err(Error::InvalidParams(format!(
                "cannot draw a {d}-dimensional subspace of a {}-dimensional space",
                self.dim()
            )));
        }
        loop {
            let rows: Vec<Vec<u32>> = (0..d).map(|_| self.random_vector_in(rng)).collect();
            let s = Self::span_unchecked(self.q, self.n, rows);
            if s.dim() == d {
                return Ok(s);
            }
        }
    }

    /// A uniformly random `d`-dimensional subspace of `F_q^n`.
    pub fn random<R: Rng + ?Sized>(q: u32, n: usize, d: usize, rng: &mut R) -> Result<Subspace> {
        Subspace::full(q, n).random_subspace_of(d, rng)
    }

    pub fn row_hex(&self) -> Vec<String> {
        self.rows.iter().map(|r| digits_to_hex(r, self.q)).collect()
    }

    pub fn from_row_hex(q: u32, n: usize, rows: &[String]) -> Result<Subspace> {
        let vectors = rows
            .iter()
            .map(|s| hex_to_digits(s, q, hex_width(q)))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(q, n, vectors)
    }
}

/// Wire form: `{q, n, rows}` with rows as hex digit strings in RREF order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceWire {
    pub q: u32,
    pub n: usize,
    pub rows: Vec<String>,
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceWire {
            q: self.q,
            n: self.n,
            rows: self.row_hex(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = SubspaceWire::deserialize(d)?;
        Subspace::from_row_hex(w.q, w.n, &w.rows).map_err(serde::de::Error::custom)
    }
}
