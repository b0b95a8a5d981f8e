//! Linearized folded Reed-Solomon codes and their list decoder.
//!
//! A message `f_0..f_{k-1}` over `F_q` is the linearized polynomial
//! `f = sum f_i X^{[i]}`; its codeword is the span of
//! `(α_i, f(γα_i), f(γ^{[1]}α_i), ..., f(γ^{[s-1]}α_i))` for `i = 1..ℓ`.
//!
//! Decoding interpolates `Q = A_0(X) + A_1(Y_1) + ... + A_s(Y_s)` through a
//! basis of the received space, then solves `Q(X, f(γX), ...) = 0`
//! coefficient by coefficient. The interpolation and recovery steps are
//! shared with the insertion-only decoders in [`crate::kk`] and
//! [`crate::mv`], which feed them manufactured points instead.

use std::collections::BTreeSet;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel;
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem, FieldSpec};
use crate::linalg;
use crate::linpoly::LinPoly;
use crate::subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LfrsWire", into = "LfrsWire")]
pub struct LfrsParams {
    field: FieldCtx,
    s: usize,
    k: usize,
    alphas: Vec<FieldElem>,
    gamma: FieldElem,
}

impl LfrsParams {
    pub fn new(field: FieldCtx, s: usize, k: usize, alphas: Vec<FieldElem>, gamma: FieldElem) -> Result<Self> {
        let m = field.degree();
        let ell = alphas.len();
        for a in alphas.iter().chain(std::iter::once(&gamma)) {
            field.check(a)?;
        }
        if s == 0 {
            return Err(Error::InvalidParams("folding parameter s must be at least 1".into()));
        }
        if k == 0 || k > ell || k > m {
            return Err(Error::InvalidParams(format!(
                "need 1 <= k <= min(ell, m), got k = {k}, ell = {ell}, m = {m}"
            )));
        }
        if ell > m || field.rank_over_base(&alphas) != ell {
            return Err(Error::InvalidParams(
                "evaluation points must be linearly independent over F_q".into(),
            ));
        }
        if !field.is_normal(&gamma) {
            return Err(Error::InvalidParams("γ does not generate a normal basis".into()));
        }
        Ok(LfrsParams {
            field,
            s,
            k,
            alphas,
            gamma,
        })
    }

    /// Seeded parameters over `F_{q^m}`: random independent `α_i` and a
    /// random normal `γ`.
    pub fn generate(q: u64, m: usize, ell: usize, k: usize, s: usize, seed: u64) -> Result<Self> {
        if ell > m {
            return Err(Error::InvalidParams(format!("ell = {ell} exceeds m = {m}")));
        }
        let field = crate::gf::make_field(q, m)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alphas = loop {
            let cand: Vec<FieldElem> = (0..ell).map(|_| field.random(&mut rng)).collect();
            if field.rank_over_base(&cand) == ell {
                break cand;
            }
        };
        let gamma = field.find_normal_element(seed)?;
        LfrsParams::new(field, s, k, alphas, gamma)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }
    pub fn ell(&self) -> usize {
        self.alphas.len()
    }
    pub fn m(&self) -> usize {
        self.field.degree()
    }
    pub fn s(&self) -> usize {
        self.s
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn q(&self) -> u32 {
        self.field.q()
    }
    pub fn alphas(&self) -> &[FieldElem] {
        &self.alphas
    }
    pub fn gamma(&self) -> &FieldElem {
        &self.gamma
    }

    /// `ℓ + ms`.
    pub fn ambient_dim(&self) -> usize {
        self.ell() + self.m() * self.s
    }

    /// `k / (ℓ(ℓ + ms))`.
    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.k as u64, (self.ell() * self.ambient_dim()) as u64)
    }

    /// `x = sum_i c_i α_i`.
    fn point_from_coords(&self, coords: &[u32]) -> FieldElem {
        let f = &self.field;
        self.alphas
            .iter()
            .zip(coords)
            .fold(f.zero(), |acc, (a, &c)| f.add(&acc, &f.scale(c, a)))
    }

    /// The `ℓ` folded codeword vectors of a message.
    pub fn codeword_vectors(&self, message: &[u32]) -> Result<Vec<Vec<u32>>> {
        let poly = message_poly(&self.field, self.k, message)?;
        let f = &self.field;
        let shifts = f.conjugates(&self.gamma, self.s);
        Ok((0..self.ell())
            .map(|i| {
                let mut v: Vec<u32> = (0..self.ell()).map(|c| u32::from(c == i)).collect();
                for g in &shifts {
                    let y = poly.eval_unchecked(f, &f.mul(g, &self.alphas[i]));
                    v.extend_from_slice(y.coeffs());
                }
                v
            })
            .collect())
    }

    pub fn encode(&self, message: &[u32]) -> Result<Subspace> {
        let vectors = self.codeword_vectors(message)?;
        Subspace::span(self.q(), self.ambient_dim(), vectors)
    }

    /// Splits a received vector into `(x, [y_1..y_s])`.
    fn split(&self, v: &[u32]) -> InterpPoint {
        let ell = self.ell();
        let m = self.m();
        let x = self.point_from_coords(&v[..ell]);
        let ys = (0..self.s)
            .map(|j| {
                self.field
                    .element(v[ell + j * m..ell + (j + 1) * m].to_vec())
                    .expect("digits of a canonical row")
            })
            .collect();
        InterpPoint { x, ys }
    }

    /// Whether `t < s(ℓ - r - k + 1)`.
    pub fn within_radius(&self, t: usize, r: usize) -> bool {
        let slack = self.ell() as i64 - r as i64 - self.k as i64 + 1;
        slack > 0 && (t as i64) < self.s as i64 * slack
    }

    fn check_received(&self, received: &Subspace) -> Result<()> {
        if received.q() != self.q() || received.ambient_dim() != self.ambient_dim() {
            return Err(Error::AmbientMismatch {
                left: self.ambient_dim(),
                right: received.ambient_dim(),
            });
        }
        Ok(())
    }

    /// Interpolates `Q` through a basis of the received space, with
    /// `D = floor((ℓ + t - r - k + 1) / (s + 1))`.
    pub fn interpolate(&self, basis: &[Vec<u32>], t: usize, r: usize) -> Result<InterpPoly> {
        let expected = (self.ell() + t)
            .checked_sub(r)
            .ok_or_else(|| Error::RadiusViolated(format!("r = {r} exceeds ℓ + t")))?;
        if basis.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: basis.len(),
            });
        }
        let numer = expected as i64 - self.k as i64 + 1;
        if numer < 0 {
            return Err(Error::RadiusViolated(format!(
                "degenerate interpolation degree for t = {t}, r = {r}"
            )));
        }
        let degree = numer as usize / (self.s + 1);
        let points: Vec<InterpPoint> = basis.iter().map(|v| self.split(v)).collect();
        interpolate_points(&self.field, &points, self.s, self.k, degree)
    }

    /// The full pipeline for a claimed `(t, r)`: interpolate, normalize,
    /// recover, then verify each candidate against the received space.
    pub fn decode(&self, received: &Subspace, t: usize, r: usize) -> Result<DecodeOutput> {
        self.check_received(received)?;
        let expected = (self.ell() + t) as i64 - r as i64;
        if expected != received.dim() as i64 {
            return Err(Error::DimensionMismatch {
                expected: expected.max(0) as usize,
                got: received.dim(),
            });
        }
        if !self.within_radius(t, r) {
            return Err(Error::RadiusViolated(format!(
                "t = {t}, r = {r} violates t < s(ℓ - r - k + 1) with s = {}, ℓ = {}, k = {}",
                self.s,
                self.ell(),
                self.k
            )));
        }
        let q_poly = self.interpolate(received.basis(), t, r)?;
        let mut out = solve_interpolant(&self.field, &self.gamma, self.k, q_poly)?;
        out.verify(|msg| channel::within(&self.encode(msg)?, received, t, r))?;
        Ok(out)
    }

    /// Decodes without knowing `(t, r)`: every claim on the line
    /// `t - r = dim T - ℓ` inside the radius is tried and the verified
    /// lists are merged.
    pub fn decode_any(&self, received: &Subspace) -> Result<Vec<Vec<u32>>> {
        self.check_received(received)?;
        let mut found = BTreeSet::new();
        for r in 0..=self.ell() {
            let t = received.dim() as i64 - self.ell() as i64 + r as i64;
            if t < 0 {
                continue;
            }
            let t = t as usize;
            if !self.within_radius(t, r) {
                continue;
            }
            let out = self.decode(received, t, r)?;
            found.extend(out.verified_messages());
        }
        Ok(found.into_iter().collect())
    }
}

/// Checks a message and turns it into its polynomial.
pub(crate) fn message_poly(field: &FieldCtx, k: usize, message: &[u32]) -> Result<LinPoly> {
    if message.len() != k {
        return Err(Error::MessageLength {
            expected: k,
            got: message.len(),
        });
    }
    if let Some(&bad) = message.iter().find(|&&c| c >= field.q()) {
        return Err(Error::DigitOutOfRange {
            digit: bad as u64,
            q: field.q(),
        });
    }
    Ok(LinPoly::from_base_coeffs(field, message))
}

/// Wire form of [`LfrsParams`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LfrsWire {
    pub field: FieldSpec,
    pub ell: usize,
    pub s: usize,
    pub k: usize,
    pub alphas: Vec<String>,
    pub gamma: String,
}

impl From<LfrsParams> for LfrsWire {
    fn from(p: LfrsParams) -> Self {
        LfrsWire {
            field: p.field.spec(),
            ell: p.ell(),
            s: p.s,
            k: p.k,
            alphas: p.alphas.iter().map(|a| p.field.to_hex(a)).collect(),
            gamma: p.field.to_hex(&p.gamma),
        }
    }
}

impl TryFrom<LfrsWire> for LfrsParams {
    type Error = Error;
    fn try_from(w: LfrsWire) -> Result<Self> {
        let field = FieldCtx::from_spec(&w.field)?;
        let alphas = w.alphas.iter().map(|a| field.from_hex(a)).collect::<Result<Vec<_>>>()?;
        if alphas.len() != w.ell {
            return Err(Error::InvalidParams(format!(
                "ell = {} but {} evaluation points given",
                w.ell,
                alphas.len()
            )));
        }
        let gamma = field.from_hex(&w.gamma)?;
        LfrsParams::new(field, w.s, w.k, alphas, gamma)
    }
}

/// One interpolation condition `Q(x, y_1, ..., y_s) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpPoint {
    pub x: FieldElem,
    pub ys: Vec<FieldElem>,
}

/// `Q(X, Y_1..Y_s) = A_0(X) + sum_j A_j(Y_j)` with `qdeg A_0 <= D + k - 1`
/// and `qdeg A_j <= D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpPoly {
    pub a0: LinPoly,
    /// `A_1, ..., A_s`.
    pub a: Vec<LinPoly>,
    pub degree: usize,
}

impl InterpPoly {
    pub fn is_zero(&self) -> bool {
        self.a0.is_zero() && self.a.iter().all(LinPoly::is_zero)
    }

    pub fn s(&self) -> usize {
        self.a.len()
    }

    pub fn eval(&self, ctx: &FieldCtx, p: &InterpPoint) -> FieldElem {
        self.a
            .iter()
            .zip(&p.ys)
            .fold(self.a0.eval_unchecked(ctx, &p.x), |acc, (aj, y)| {
                ctx.add(&acc, &aj.eval_unchecked(ctx, y))
            })
    }

    /// `g(X) = sum_{j=1}^s a_{j,0} X^{[j-1]}`.
    pub fn g(&self, ctx: &FieldCtx) -> LinPoly {
        LinPoly::new(self.a.iter().map(|aj| aj.coeff(ctx, 0)).collect())
    }

    /// `Q̂(X) = A_0(X) + sum_j A_j(f(γ^{[j-1]} X))`, expanded symbolically by
    /// composition.
    pub fn compose_message(&self, ctx: &FieldCtx, gamma: &FieldElem, f: &LinPoly) -> LinPoly {
        self.a
            .iter()
            .enumerate()
            .fold(self.a0.clone(), |acc, (j, aj)| {
                let shifted = f.scale_arg(ctx, &ctx.frobenius(gamma, j));
                acc.add(ctx, &aj.compose(ctx, &shifted))
            })
    }

    fn min_index(&self) -> Option<usize> {
        std::iter::once(&self.a0)
            .chain(&self.a)
            .filter_map(|p| p.coeffs().iter().position(|c| !c.is_zero()))
            .min()
    }
}

/// Number of unknown coefficients of `Q`: `(D + 1)(s + 1) + k - 1`.
pub fn unknown_count(degree: usize, s: usize, k: usize) -> usize {
    (degree + 1) * (s + 1) + k - 1
}

/// A nonzero `Q` vanishing on every point, or `None` if the homogeneous
/// system only has the trivial solution. The kernel vector is the one
/// attached to the first free column of the echelonised system.
pub fn try_interpolate_points(
    ctx: &FieldCtx,
    points: &[InterpPoint],
    s: usize,
    k: usize,
    degree: usize,
) -> Option<InterpPoly> {
    let len0 = degree + k;
    let len = degree + 1;
    let ncols = unknown_count(degree, s, k);
    let rows: Vec<Vec<FieldElem>> = points
        .iter()
        .map(|p| {
            let mut row = ctx.conjugates(&p.x, len0);
            for y in &p.ys {
                row.extend(ctx.conjugates(y, len));
            }
            row
        })
        .collect();
    let sol = linalg::first_kernel_vector(ctx, &rows, ncols)?;
    let a0 = LinPoly::new(sol[..len0].to_vec());
    let a = (0..s)
        .map(|j| LinPoly::new(sol[len0 + j * len..len0 + (j + 1) * len].to_vec()))
        .collect();
    Some(InterpPoly { a0, a, degree })
}

pub fn interpolate_points(
    ctx: &FieldCtx,
    points: &[InterpPoint],
    s: usize,
    k: usize,
    degree: usize,
) -> Result<InterpPoly> {
    try_interpolate_points(ctx, points, s, k, degree).ok_or_else(|| {
        Error::Internal(format!(
            "no nonzero interpolation polynomial: {} conditions, {} unknowns",
            points.len(),
            unknown_count(degree, s, k)
        ))
    })
}

/// Ensures `g(X) != 0`. When every `a_{j,0}` with `j >= 1` vanishes, all
/// coefficients are shifted down by the smallest index `j*` carrying a
/// nonzero coefficient, with `[d - j*]` applied to each, so that the result
/// raised to `[j*]` is the input.
pub fn normalize_shift(ctx: &FieldCtx, q: InterpPoly) -> Result<InterpPoly> {
    if q.is_zero() {
        return Err(Error::Internal("interpolation polynomial is zero".into()));
    }
    if !q.g(ctx).is_zero() {
        return Ok(q);
    }
    let j = q.min_index().expect("nonzero polynomial");
    if q.a.iter().all(|aj| aj.coeff(ctx, j).is_zero()) {
        return Err(Error::Internal(format!(
            "only A_0 has a coefficient at the lowest index {j}; no message can satisfy Q"
        )));
    }
    let shift = |p: &LinPoly| p.frobenius_shift(ctx, j);
    Ok(InterpPoly {
        a0: shift(&q.a0)?,
        a: q.a.iter().map(shift).collect::<Result<_>>()?,
        degree: q.degree,
    })
}

/// Result of list decoding.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DecodeOutput {
    /// Indices `i < k` with `g(γ^{[i]}) = 0`, where `f_i` is free.
    pub branch_positions: Vec<usize>,
    /// Every message with `Q(X, f(γX), ...) = 0`, sorted.
    pub candidates: Vec<Vec<u32>>,
    /// Whether each candidate's codeword is within the claimed distance of
    /// the received space.
    pub verified: Vec<bool>,
}

impl DecodeOutput {
    pub fn verified_messages(&self) -> Vec<Vec<u32>> {
        self.candidates
            .iter()
            .zip(&self.verified)
            .filter(|(_, &ok)| ok)
            .map(|(c, _)| c.clone())
            .collect()
    }

    pub(crate) fn verify<F>(&mut self, mut check: F) -> Result<()>
    where
        F: FnMut(&[u32]) -> Result<bool>,
    {
        self.verified = self
            .candidates
            .iter()
            .map(|c| check(c))
            .collect::<Result<_>>()?;
        Ok(())
    }
}

/// Solves `Q̂ = 0` for messages with `F_q` coefficients.
///
/// With `f_e ∈ F_q`, the coefficient of `X^{[n]}` in `Q̂` is
/// `a_{0,n} + sum_{j=1}^s γ^{[n+j-1]} sum_{d=0}^{n} a_{j,d} f_{n-d}`,
/// whose `f_n` term is `f_n g(γ^{[n]})`. Walking `n = 0..k-1`, `f_n` is forced
/// when `g(γ^{[n]}) != 0` (kept only if it lands in `F_q`) and free
/// otherwise. The remaining coefficients `n >= k` are then checked.
pub fn recover(ctx: &FieldCtx, gamma: &FieldElem, k: usize, q: &InterpPoly) -> DecodeOutput {
    let s = q.s();
    let top = q
        .a
        .iter()
        .filter_map(|a| a.qdeg())
        .max()
        .map_or(0, |d| d + k)
        .max(q.a0.qdeg().map_or(0, |d| d + 1));
    let gamma_pows = ctx.conjugates(gamma, top + s + 1);
    let a = |j: usize, d: usize| q.a[j - 1].coeff(ctx, d);

    // The part of coefficient n that does not involve f_n.
    let rest = |n: usize, prefix: &[u32]| -> FieldElem {
        let mut acc = q.a0.coeff(ctx, n);
        for j in 1..=s {
            let mut inner = ctx.zero();
            for d in 1..=n {
                let Some(&fe) = prefix.get(n - d) else { continue };
                if fe != 0 {
                    inner = ctx.add(&inner, &ctx.scale(fe, &a(j, d)));
                }
            }
            if !inner.is_zero() {
                acc = ctx.add(&acc, &ctx.mul(&gamma_pows[n + j - 1], &inner));
            }
        }
        acc
    };
    let g_at = |n: usize| -> FieldElem {
        (1..=s).fold(ctx.zero(), |acc, j| {
            ctx.add(&acc, &ctx.mul(&a(j, 0), &gamma_pows[n + j - 1]))
        })
    };

    let mut branch_positions = Vec::new();
    let mut prefixes: Vec<Vec<u32>> = vec![Vec::new()];
    for n in 0..k {
        let gn = g_at(n);
        let free = gn.is_zero();
        if free {
            branch_positions.push(n);
        }
        let inv = ctx.inv(&gn);
        let mut next = Vec::new();
        for prefix in prefixes {
            let r = rest(n, &prefix);
            match &inv {
                Some(inv) => {
                    let fnv = ctx.neg(&ctx.mul(&r, inv));
                    if let Some(v) = ctx.base_value(&fnv) {
                        let mut p = prefix;
                        p.push(v);
                        next.push(p);
                    }
                }
                None if r.is_zero() => {
                    for v in 0..ctx.q() {
                        let mut p = prefix.clone();
                        p.push(v);
                        next.push(p);
                    }
                }
                None => {}
            }
        }
        prefixes = next;
    }
    // Coefficients past k - 1 also have to vanish; the f_n term is absent.
    let mut candidates: Vec<Vec<u32>> = prefixes
        .into_iter()
        .filter(|f| (k..=top).all(|n| rest(n, f).is_zero()))
        .collect();
    candidates.sort();
    let verified = vec![false; candidates.len()];
    DecodeOutput {
        branch_positions,
        candidates,
        verified,
    }
}

/// `normalize_shift` then `recover`. An interpolant whose lowest nonzero
/// index appears only in `A_0` admits no message at all, so it yields an
/// empty list.
pub(crate) fn solve_interpolant(
    ctx: &FieldCtx,
    gamma: &FieldElem,
    k: usize,
    q: InterpPoly,
) -> Result<DecodeOutput> {
    if q.a.iter().all(LinPoly::is_zero) {
        return Ok(DecodeOutput::default());
    }
    let j = q.min_index().expect("nonzero polynomial");
    if q.g(ctx).is_zero() && q.a.iter().all(|aj| aj.coeff(ctx, j).is_zero()) {
        return Ok(DecodeOutput::default());
    }
    let q = normalize_shift(ctx, q)?;
    Ok(recover(ctx, gamma, k, &q))
}
