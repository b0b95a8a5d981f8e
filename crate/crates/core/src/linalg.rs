//! Dense Gaussian elimination over any field exposing [`Scalars`].
//!
//! Used both over the prime field (subspace canonical forms, coordinates)
//! and over extension fields (the interpolation systems of the decoders).

/// Arithmetic of a field whose elements are plain values.
pub trait Scalars {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse. Callers never pass zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

/// Integers modulo a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Self {
        PrimeField { p }
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let p = self.p as u64;
        let mut base = a as u64 % p;
        let mut acc = 1u64 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
}

impl Scalars for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.p
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.p as u64) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.p as u64 - *b as u64) % self.p as u64) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: &u32) -> u32 {
        debug_assert!(*a != 0);
        self.pow(*a, self.p as u64 - 2)
    }
}

/// Brings `rows` to reduced row echelon form in place, dropping zero rows.
/// Returns the pivot column of each remaining row.
pub fn rref<S: Scalars>(ops: &S, rows: &mut Vec<Vec<S::Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| !ops.is_zero(&rows[r][col])) else {
            continue;
        };
        rows.swap(next, found);
        let inv = ops.inv(&rows[next][col]);
        for x in rows[next].iter_mut().skip(col) {
            *x = ops.mul(x, &inv);
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next || ops.is_zero(&row[col]) {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !ops.is_zero(p) {
                    *x = ops.sub(x, &ops.mul(&factor, p));
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    pivots
}

pub fn rank<S: Scalars>(ops: &S, rows: &[Vec<S::Elem>]) -> usize {
    let mut work = rows.to_vec();
    rref(ops, &mut work).len()
}

/// A basis of the right kernel `{x : A x = 0}` of the `ncols`-column matrix
/// `rows`, one vector per free column, in increasing free-column order.
pub fn kernel_basis<S: Scalars>(ops: &S, rows: &[Vec<S::Elem>], ncols: usize) -> Vec<Vec<S::Elem>> {
    let mut work = rows.to_vec();
    let pivots = rref(ops, &mut work);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| kernel_vector_for(ops, &work, &pivots, ncols, free))
        .collect()
}

/// The kernel vector obtained by setting the first free column to one and
/// every other free column to zero. `None` when the kernel is trivial.
pub fn first_kernel_vector<S: Scalars>(
    ops: &S,
    rows: &[Vec<S::Elem>],
    ncols: usize,
) -> Option<Vec<S::Elem>> {
    let mut work = rows.to_vec();
    let pivots = rref(ops, &mut work);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free = (0..ncols).find(|&c| !is_pivot[c])?;
    Some(kernel_vector_for(ops, &work, &pivots, ncols, free))
}

fn kernel_vector_for<S: Scalars>(
    ops: &S,
    reduced: &[Vec<S::Elem>],
    pivots: &[usize],
    ncols: usize,
    free: usize,
) -> Vec<S::Elem> {
    let mut v = vec![ops.zero(); ncols];
    v[free] = ops.one();
    for (row, &p) in reduced.iter().zip(pivots) {
        v[p] = ops.sub(&ops.zero(), &row[free]);
    }
    v
}

/// Solves `sum_j x_j * columns[j] = target`. Returns one solution, or `None`
/// when `target` is outside the column span.
pub fn solve_combination<S: Scalars>(
    ops: &S,
    columns: &[Vec<S::Elem>],
    target: &[S::Elem],
) -> Option<Vec<S::Elem>> {
    let n = columns.len();
    let mut aug: Vec<Vec<S::Elem>> = (0..target.len())
        .map(|r| {
            let mut row: Vec<S::Elem> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let pivots = rref(ops, &mut aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![ops.zero(); n];
    for (row, &p) in aug.iter().zip(&pivots) {
        x[p] = row[n].clone();
    }
    Some(x)
}

/// Matrix-vector product over the prime field, `rows` row-major.
pub fn mat_vec(field: &PrimeField, rows: &[Vec<u32>], v: &[u32]) -> Vec<u32> {
    let p = field.p as u64;
    rows.iter()
        .map(|row| {
            let acc = row
                .iter()
                .zip(v)
                .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p);
            acc as u32
        })
        .collect()
}
