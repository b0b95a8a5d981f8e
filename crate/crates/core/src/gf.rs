//! Prime-base extension fields `F_{q^d}` in polynomial representation.
//!
//! Elements are digit vectors over `F_q` (constant term first) modulo a
//! monic irreducible polynomial. The Frobenius map `x -> x^q` is F_q-linear,
//! so each context precomputes its matrix and all of its powers; `x^{[i]}`
//! is then one matrix-vector product.
//!
//! Towers such as `F_{q^m} ⊂ F_{q^{mℓ}}` are a single context of degree
//! `mℓ`; the subfield is recognised as the fixed field of `frobenius(·, m)`.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, PrimeField, Scalars};

/// Trials spent looking for a normal element before giving up.
pub const NORMAL_SEARCH_BUDGET: usize = 10_000;

/// An element of `F_{q^d}`: `d` base digits, constant term first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(Vec<u32>);

impl FieldElem {
    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem{:?}", self.0)
    }
}

/// Arithmetic context for `F_{q^d}` with `q` prime.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldCtx {
    base: PrimeField,
    degree: usize,
    /// Monic, constant term first, length `degree + 1`.
    modulus: Vec<u32>,
    /// `x^k mod modulus` for `k = degree .. 2*degree - 2`.
    reduction: Vec<Vec<u32>>,
    /// `frob_pows[i]` is the row-major matrix of `x -> x^{q^i}`.
    frob_pows: Vec<Vec<Vec<u32>>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("q", &self.base.p)
            .field("d", &self.degree)
            .field("modulus", &self.modulus)
            .finish()
    }
}

/// Wire form of a field context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub q: u32,
    pub d: usize,
    pub modulus: Vec<u32>,
}

impl Serialize for FieldCtx {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldCtx {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = FieldSpec::deserialize(d)?;
        FieldCtx::from_spec(&spec).map_err(serde::de::Error::custom)
    }
}

/// Builds `F_{q^d}` with the lexicographically smallest monic irreducible
/// modulus of degree `d` (lower coefficients read as a base-q integer, most
/// significant first).
pub fn make_field(q: u64, d: usize) -> Result<FieldCtx> {
    let p = check_base(q)?;
    if d == 0 {
        return Err(Error::InvalidDegree(d));
    }
    let base = PrimeField::new(p);
    let count = (p as u128)
        .checked_pow(d as u32)
        .ok_or_else(|| Error::InvalidParams(format!("q^d too large for q = {q}, d = {d}")))?;
    for index in 0..count {
        let mut modulus = digits_of(index, p, d);
        modulus.push(1);
        if is_irreducible(&base, &modulus) {
            return FieldCtx::with_modulus(base, modulus);
        }
    }
    Err(Error::Internal(format!("no irreducible polynomial of degree {d} over F_{q}")))
}

fn check_base(q: u64) -> Result<u32> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let p = smallest_prime_factor(q);
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    if p != q {
        return Err(Error::UnsupportedBaseField(q));
    }
    u32::try_from(q).map_err(|_| Error::InvalidParams(format!("q = {q} is too large")))
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return f;
        }
        f += 1;
    }
    n
}

fn digits_of(mut value: u128, p: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (value % p as u128) as u32;
            value /= p as u128;
            d
        })
        .collect()
}

// Dense polynomials over F_p, constant term first; the empty vector is zero.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(f: &PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(&x, &y));
        }
    }
    trim(out)
}

fn poly_sub(f: &PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&0), b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

fn poly_divrem(f: &PrimeField, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = f.inv(b.last().unwrap());
    let mut quot = vec![0u32; rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = f.mul(rem.last().unwrap(), &lead_inv);
        quot[shift] = c;
        for (i, &bc) in b.iter().enumerate() {
            rem[shift + i] = f.sub(&rem[shift + i], &f.mul(&c, &bc));
        }
        rem = trim(rem);
    }
    (trim(quot), rem)
}

fn poly_gcd(f: &PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = poly_divrem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn poly_powmod(f: &PrimeField, base: &[u32], mut e: u64, modulus: &[u32]) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = poly_divrem(f, base, modulus).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_divrem(f, &poly_mul(f, &acc, &b), modulus).1;
        }
        b = poly_divrem(f, &poly_mul(f, &b, &b), modulus).1;
        e >>= 1;
    }
    acc
}

/// `x^{p^i} mod modulus`.
fn x_pow_p_iter(f: &PrimeField, i: usize, modulus: &[u32]) -> Vec<u32> {
    let mut acc = poly_divrem(f, &[0, 1], modulus).1;
    for _ in 0..i {
        acc = poly_powmod(f, &acc, f.p as u64, modulus);
    }
    acc
}

/// Rabin's irreducibility test for a monic polynomial.
pub(crate) fn is_irreducible(f: &PrimeField, modulus: &[u32]) -> bool {
    let d = modulus.len() - 1;
    if d == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    if poly_sub(f, &x_pow_p_iter(f, d, modulus), &x) != Vec::<u32>::new() {
        return false;
    }
    let mut n = d;
    let mut r = 2;
    while n > 1 {
        if n.is_multiple_of(r) {
            while n.is_multiple_of(r) {
                n /= r;
            }
            let h = poly_sub(f, &x_pow_p_iter(f, d / r, modulus), &x);
            if poly_gcd(f, &h, modulus).len() != 1 {
                return false;
            }
        }
        r += 1;
    }
    true
}

impl FieldCtx {
    fn with_modulus(base: PrimeField, modulus: Vec<u32>) -> Result<Self> {
        let d = modulus.len() - 1;
        let reduction = (d..2 * d.max(1) - 1)
            .map(|k| {
                let mut xk = vec![0u32; k + 1];
                xk[k] = 1;
                pad(poly_divrem(&base, &xk, &modulus).1, d)
            })
            .collect();
        let mut ctx = FieldCtx {
            base,
            degree: d,
            modulus,
            reduction,
            frob_pows: Vec::new(),
        };
        // Column j of the Frobenius matrix is (x^j)^q.
        let cols: Vec<Vec<u32>> = (0..d)
            .map(|j| {
                let mut xj = vec![0u32; d];
                xj[j] = 1;
                ctx.pow(&FieldElem(xj), base.p as u64).0
            })
            .collect();
        let frob: Vec<Vec<u32>> = (0..d).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        let mut pows = vec![identity(d)];
        for i in 1..d {
            let next = mat_mul(&base, &frob, &pows[i - 1]);
            pows.push(next);
        }
        ctx.frob_pows = pows;
        Ok(ctx)
    }

    /// Rebuilds a context from its wire form, checking the modulus.
    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        let p = check_base(spec.q as u64)?;
        let base = PrimeField::new(p);
        if spec.d == 0 || spec.modulus.len() != spec.d + 1 || spec.modulus[spec.d] != 1 {
            return Err(Error::InvalidParams("modulus must be monic of degree d".into()));
        }
        if let Some(&bad) = spec.modulus.iter().find(|&&c| c >= p) {
            return Err(Error::DigitOutOfRange { digit: bad as u64, q: p });
        }
        if !is_irreducible(&base, &spec.modulus) {
            return Err(Error::InvalidParams("modulus is reducible".into()));
        }
        Self::with_modulus(base, spec.modulus.clone())
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            q: self.base.p,
            d: self.degree,
            modulus: self.modulus.clone(),
        }
    }

    pub fn q(&self) -> u32 {
        self.base.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn base_field(&self) -> PrimeField {
        self.base
    }

    /// Number of elements, `q^d`, if it fits.
    pub fn order(&self) -> Option<u128> {
        (self.base.p as u128).checked_pow(self.degree as u32)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(vec![0; self.degree])
    }

    pub fn one(&self) -> FieldElem {
        self.from_base(1)
    }

    /// Embeds a base-field digit.
    pub fn from_base(&self, c: u32) -> FieldElem {
        let mut v = vec![0; self.degree];
        v[0] = c % self.base.p;
        FieldElem(v)
    }

    /// The class of `x` in `F_q[x]/(modulus)`.
    pub fn generator(&self) -> FieldElem {
        let mut v = vec![0; self.degree];
        if self.degree == 1 {
            v[0] = self.base.sub(&0, &self.modulus[0]);
        } else {
            v[1] = 1;
        }
        FieldElem(v)
    }

    pub fn element(&self, coeffs: Vec<u32>) -> Result<FieldElem> {
        if coeffs.len() != self.degree {
            return Err(Error::LengthMismatch {
                expected: self.degree,
                got: coeffs.len(),
            });
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= self.base.p) {
            return Err(Error::DigitOutOfRange {
                digit: bad as u64,
                q: self.base.p,
            });
        }
        Ok(FieldElem(coeffs))
    }

    /// The element whose digits are the base-q expansion of `index`.
    pub fn element_from_index(&self, index: u128) -> FieldElem {
        FieldElem(digits_of(index, self.base.p, self.degree))
    }

    /// Every element, in index order. Only sensible for tiny fields.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        let n = self.order().expect("field too large to enumerate");
        (0..n).map(move |i| self.element_from_index(i))
    }

    pub fn check(&self, x: &FieldElem) -> Result<()> {
        if x.0.len() != self.degree || x.0.iter().any(|&c| c >= self.base.p) {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().zip(&b.0).map(|(x, y)| self.base.add(x, y)).collect())
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().zip(&b.0).map(|(x, y)| self.base.sub(x, y)).collect())
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().map(|&x| self.base.neg(x)).collect())
    }

    /// Multiplies by a base-field scalar.
    pub fn scale(&self, c: u32, a: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().map(|x| self.base.mul(&c, x)).collect())
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let d = self.degree;
        let p = self.base.p as u64;
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let mut out: Vec<u64> = prod[..d].to_vec();
        for (k, &c) in prod[d..].iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(&self.reduction[k]) {
                *o = (*o + c * r as u64) % p;
            }
        }
        FieldElem(out.into_iter().map(|c| c as u32).collect())
    }

    pub fn pow(&self, a: &FieldElem, mut e: u64) -> FieldElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    /// Returns `None` for zero.
    pub fn inv(&self, a: &FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return None;
        }
        let f = &self.base;
        let (mut r0, mut r1) = (self.modulus.clone(), trim(a.0.clone()));
        let (mut s0, mut s1): (Vec<u32>, Vec<u32>) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (quot, rem) = poly_divrem(f, &r0, &r1);
            let s2 = poly_sub(f, &s0, &poly_mul(f, &quot, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant.
        let c = f.inv(&r0[0]);
        let s = s0.iter().map(|x| f.mul(x, &c)).collect();
        Some(FieldElem(pad(s, self.degree)))
    }

    /// `x^{[i]} = x^{q^i}`; `i` is reduced modulo the degree.
    pub fn frobenius(&self, x: &FieldElem, i: usize) -> FieldElem {
        let i = i % self.degree;
        if i == 0 {
            return x.clone();
        }
        FieldElem(linalg::mat_vec(&self.base, &self.frob_pows[i], &x.0))
    }

    /// Inverse Frobenius `x^{[-i]}`, i.e. `x^{[d - i]}`.
    pub fn frobenius_inv(&self, x: &FieldElem, i: usize) -> FieldElem {
        let i = i % self.degree;
        self.frobenius(x, (self.degree - i) % self.degree)
    }

    /// Membership in the subfield `F_{q^m}`, the fixed field of `x -> x^{[m]}`.
    pub fn in_subfield(&self, x: &FieldElem, m: usize) -> bool {
        self.frobenius(x, m) == *x
    }

    /// The digit of `x` if it lies in the prime field.
    pub fn base_value(&self, x: &FieldElem) -> Option<u32> {
        if x.0[1..].iter().all(|&c| c == 0) {
            Some(x.0[0])
        } else {
            None
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem((0..self.degree).map(|_| rng.gen_range(0..self.base.p)).collect())
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// Rank over `F_q` of a family of elements viewed as digit vectors.
    pub fn rank_over_base(&self, elems: &[FieldElem]) -> usize {
        let rows: Vec<Vec<u32>> = elems.iter().map(|e| e.0.clone()).collect();
        linalg::rank(&self.base, &rows)
    }

    /// `[x^{[0]}, x^{[1]}, ..., x^{[count-1]}]`.
    pub fn conjugates(&self, x: &FieldElem, count: usize) -> Vec<FieldElem> {
        (0..count).map(|i| self.frobenius(x, i)).collect()
    }

    pub fn is_normal(&self, x: &FieldElem) -> bool {
        self.rank_over_base(&self.conjugates(x, self.degree)) == self.degree
    }

    /// Seeded search for an element generating a normal basis.
    pub fn find_normal_element(&self, seed: u64) -> Result<FieldElem> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..NORMAL_SEARCH_BUDGET {
            let candidate = self.random_nonzero(&mut rng);
            if self.is_normal(&candidate) {
                return Ok(candidate);
            }
        }
        Err(Error::NormalSearchExhausted(NORMAL_SEARCH_BUDGET))
    }

    fn hex_width(&self) -> usize {
        hex_width(self.base.p)
    }

    /// Lowercase hex, one fixed-width group per digit, most significant first.
    pub fn to_hex(&self, x: &FieldElem) -> String {
        digits_to_hex(&x.0, self.base.p)
    }

    pub fn from_hex(&self, s: &str) -> Result<FieldElem> {
        let digits = hex_to_digits(s, self.base.p, self.hex_width())?;
        self.element(digits)
    }
}

impl Scalars for FieldCtx {
    type Elem = FieldElem;

    fn zero(&self) -> FieldElem {
        FieldCtx::zero(self)
    }
    fn one(&self) -> FieldElem {
        FieldCtx::one(self)
    }
    fn is_zero(&self, a: &FieldElem) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldCtx::add(self, a, b)
    }
    fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldCtx::sub(self, a, b)
    }
    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldCtx::mul(self, a, b)
    }
    fn inv(&self, a: &FieldElem) -> FieldElem {
        FieldCtx::inv(self, a).expect("inverse of zero")
    }
}

fn pad(mut v: Vec<u32>, len: usize) -> Vec<u32> {
    v.resize(len, 0);
    v
}

fn identity(d: usize) -> Vec<Vec<u32>> {
    (0..d)
        .map(|r| (0..d).map(|c| u32::from(r == c)).collect())
        .collect()
}

fn mat_mul(f: &PrimeField, a: &[Vec<u32>], b: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|c| {
                    row.iter()
                        .zip(b)
                        .fold(0u32, |acc, (&x, brow)| f.add(&acc, &f.mul(&x, &brow[c])))
                })
                .collect()
        })
        .collect()
}

pub(crate) fn hex_width(q: u32) -> usize {
    let mut w = 1;
    let mut top = (q - 1) >> 4;
    while top > 0 {
        w += 1;
        top >>= 4;
    }
    w
}

/// Hex encoding of a base-q digit vector: fixed-width groups, the digit with
/// the highest index first.
pub fn digits_to_hex(digits: &[u32], q: u32) -> String {
    let w = hex_width(q);
    digits.iter().rev().map(|d| format!("{d:0w$x}")).collect()
}

pub fn hex_to_digits(s: &str, q: u32, width: usize) -> Result<Vec<u32>> {
    if !s.len().is_multiple_of(width) || !s.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(Error::Parse(format!("malformed digit string {s:?}")));
    }
    let mut digits = Vec::with_capacity(s.len() / width);
    for chunk in s.as_bytes().chunks(width).rev() {
        let text = std::str::from_utf8(chunk).expect("ascii");
        let d = u32::from_str_radix(text, 16).map_err(|e| Error::Parse(e.to_string()))?;
        if d >= q {
            return Err(Error::DigitOutOfRange { digit: d as u64, q });
        }
        digits.push(d);
    }
    Ok(digits)
}

/// A basis of `F_{q^d}` over `F_q` with precomputed coordinate map.
#[derive(Debug, Clone)]
pub struct FieldBasis {
    elems: Vec<FieldElem>,
    /// Row-major inverse of the matrix whose columns are the basis elements.
    to_coords: Vec<Vec<u32>>,
}

impl FieldBasis {
    pub fn new(ctx: &FieldCtx, elems: Vec<FieldElem>) -> Result<Self> {
        let d = ctx.degree();
        if elems.len() != d {
            return Err(Error::LengthMismatch {
                expected: d,
                got: elems.len(),
            });
        }
        let f = ctx.base_field();
        // Gauss-Jordan on [B | I] where column j of B is elems[j].
        let mut aug: Vec<Vec<u32>> = (0..d)
            .map(|r| {
                let mut row: Vec<u32> = elems.iter().map(|e| e.0[r]).collect();
                row.extend((0..d).map(|c| u32::from(c == r)));
                row
            })
            .collect();
        let pivots = linalg::rref(&f, &mut aug);
        if pivots.len() < d || pivots[d - 1] >= d {
            return Err(Error::DependentBasis);
        }
        let to_coords = aug.into_iter().map(|row| row[d..].to_vec()).collect();
        Ok(FieldBasis { elems, to_coords })
    }

    pub fn elems(&self) -> &[FieldElem] {
        &self.elems
    }

    /// Coordinates `u` with `sum_i u_i * elems[i] = x`.
    pub fn coords(&self, ctx: &FieldCtx, x: &FieldElem) -> Vec<u32> {
        linalg::mat_vec(&ctx.base_field(), &self.to_coords, &x.0)
    }

    pub fn combine(&self, ctx: &FieldCtx, u: &[u32]) -> FieldElem {
        self.elems
            .iter()
            .zip(u)
            .fold(ctx.zero(), |acc, (e, &c)| ctx.add(&acc, &ctx.scale(c, e)))
    }
}

/// Coordinates of `x` in `basis`; rejects dependent or wrongly sized bases.
pub fn as_base_vector(ctx: &FieldCtx, x: &FieldElem, basis: &[FieldElem]) -> Result<Vec<u32>> {
    ctx.check(x)?;
    Ok(FieldBasis::new(ctx, basis.to_vec())?.coords(ctx, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force factor search: no monic factor of degree 1..=deg/2.
    fn irreducible_by_search(p: u32, modulus: &[u32]) -> bool {
        let f = PrimeField::new(p);
        let d = modulus.len() - 1;
        for deg in 1..=d / 2 {
            let count = (p as u128).pow(deg as u32);
            for idx in 0..count {
                let mut g = digits_of(idx, p, deg);
                g.push(1);
                if poly_divrem(&f, modulus, &g).1.is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn prime_field_identity_case() {
        let ctx = make_field(2, 1).unwrap();
        assert_eq!(ctx.degree(), 1);
        assert_eq!(ctx.elements().count(), 2);
        let one = ctx.one();
        assert_eq!(ctx.add(&one, &one), ctx.zero());
        assert_eq!(ctx.frobenius(&one, 3), one);
    }

    #[test]
    fn gf16_modulus_is_smallest_irreducible_quartic() {
        let ctx = make_field(2, 4).unwrap();
        assert!(irreducible_by_search(2, ctx.modulus()));
        // Every smaller monic quartic has a factor of degree <= 2.
        let first = ctx.modulus()[..4]
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * 2 + c as u128);
        for idx in 0..first {
            let mut g = digits_of(idx, 2, 4);
            g.push(1);
            assert!(!irreducible_by_search(2, &g));
        }
        assert_eq!(ctx.modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn rabin_agrees_with_factor_search() {
        for (p, d) in [(2u32, 5usize), (2, 6), (3, 3), (3, 4), (5, 2), (5, 3)] {
            let f = PrimeField::new(p);
            for idx in 0..(p as u128).pow(d as u32) {
                let mut g = digits_of(idx, p, d);
                g.push(1);
                assert_eq!(is_irreducible(&f, &g), irreducible_by_search(p, &g), "{g:?}");
            }
        }
    }

    #[test]
    fn f25_frobenius_order_two() {
        let ctx = make_field(5, 2).unwrap();
        for x in ctx.elements() {
            assert_eq!(ctx.pow(&x, 25), x);
            assert_eq!(ctx.frobenius(&x, 2), x);
            assert_eq!(ctx.frobenius(&x, 1), ctx.pow(&x, 5));
        }
    }

    #[test]
    fn rejects_bad_q() {
        assert!(matches!(make_field(6, 2), Err(Error::NotPrimePower(6))));
        assert!(matches!(make_field(1, 2), Err(Error::NotPrimePower(1))));
        assert!(matches!(make_field(4, 2), Err(Error::UnsupportedBaseField(4))));
        assert!(matches!(make_field(3, 0), Err(Error::InvalidDegree(0))));
    }

    #[test]
    fn frobenius_fixes_prime_subfield_and_composes() {
        let ctx = make_field(3, 4).unwrap();
        for c in 0..3 {
            for i in 0..7 {
                assert_eq!(ctx.frobenius(&ctx.from_base(c), i), ctx.from_base(c));
            }
        }
        let x = ctx.generator();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(
                    ctx.frobenius(&ctx.frobenius(&x, i), j),
                    ctx.frobenius(&x, i + j)
                );
            }
        }
    }

    #[test]
    fn gf16_frobenius_order_divides_degree() {
        let ctx = make_field(2, 4).unwrap();
        for x in ctx.elements() {
            assert_eq!(ctx.frobenius(&x, 4), x);
        }
    }

    #[test]
    fn normal_elements_of_f4() {
        let ctx = make_field(2, 2).unwrap();
        let normal: Vec<_> = ctx.elements().filter(|x| ctx.is_normal(x)).collect();
        // Exhaustively: the two elements outside F_2.
        assert_eq!(normal.len(), 2);
        assert!(normal.iter().all(|x| ctx.base_value(x).is_none()));
        let gamma = ctx.find_normal_element(1).unwrap();
        assert!(normal.contains(&gamma));
        assert_eq!(ctx.rank_over_base(&[gamma.clone(), ctx.frobenius(&gamma, 1)]), 2);
    }

    #[test]
    fn normal_element_of_gf16_has_full_rank_and_is_not_one() {
        let ctx = make_field(2, 4).unwrap();
        for seed in 0..20 {
            let gamma = ctx.find_normal_element(seed).unwrap();
            assert_ne!(gamma, ctx.one());
            let rows: Vec<Vec<u32>> = ctx.conjugates(&gamma, 4).iter().map(|e| e.coeffs().to_vec()).collect();
            assert_eq!(linalg::rank(&ctx.base_field(), &rows), 4);
        }
        assert_eq!(ctx.find_normal_element(3).unwrap(), ctx.find_normal_element(3).unwrap());
    }

    #[test]
    fn coordinates_in_normal_basis() {
        let ctx = make_field(2, 4).unwrap();
        let gamma = ctx.find_normal_element(9).unwrap();
        let basis = ctx.conjugates(&gamma, 4);
        for (j, b) in basis.iter().enumerate() {
            let mut unit = vec![0; 4];
            unit[j] = 1;
            assert_eq!(as_base_vector(&ctx, b, &basis).unwrap(), unit);
        }
        assert_eq!(as_base_vector(&ctx, &ctx.zero(), &basis).unwrap(), vec![0; 4]);
        let fb = FieldBasis::new(&ctx, basis.clone()).unwrap();
        for x in ctx.elements() {
            let u = fb.coords(&ctx, &x);
            assert_eq!(fb.combine(&ctx, &u), x);
        }
    }

    #[test]
    fn dependent_basis_rejected() {
        let ctx = make_field(2, 3).unwrap();
        let one = ctx.one();
        let basis = vec![one.clone(), one.clone(), ctx.generator()];
        assert!(matches!(
            as_base_vector(&ctx, &one, &basis),
            Err(Error::DependentBasis)
        ));
    }

    #[test]
    fn inverse_and_hex_roundtrip() {
        let ctx = make_field(5, 3).unwrap();
        for x in ctx.elements().filter(|x| !x.is_zero()) {
            let inv = ctx.inv(&x).unwrap();
            assert_eq!(ctx.mul(&x, &inv), ctx.one());
            assert_eq!(ctx.from_hex(&ctx.to_hex(&x)).unwrap(), x);
        }
        assert!(ctx.inv(&ctx.zero()).is_none());
        let x = ctx.element(vec![1, 2, 3]).unwrap();
        assert_eq!(ctx.to_hex(&x), "321");
        assert!(ctx.from_hex("329").is_err());
    }

    #[test]
    fn context_serializes_and_revalidates() {
        let ctx = make_field(2, 6).unwrap();
        let json = serde_json::to_string(&ctx).unwrap();
        let back: FieldCtx = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ctx);
        let bad = r#"{"q":2,"d":2,"modulus":[1,0,1]}"#;
        assert!(serde_json::from_str::<FieldCtx>(bad).is_err());
    }
}
