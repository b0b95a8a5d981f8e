//! Linearized polynomials `f(X) = sum_i f_i X^{[i]}` over an extension field.

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::subspace::Subspace;

/// A linearized polynomial; `coeffs[i]` multiplies `X^{[i]}`.
///
/// Always trimmed: the last stored coefficient is nonzero, and the zero
/// polynomial stores nothing (its q-degree is `None`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LinPoly {
    coeffs: Vec<FieldElem>,
}

impl LinPoly {
    pub fn new(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(FieldElem::is_zero) {
            coeffs.pop();
        }
        LinPoly { coeffs }
    }

    pub fn zero() -> Self {
        LinPoly::default()
    }

    /// `c * X^{[i]}`.
    pub fn monomial(ctx: &FieldCtx, i: usize, c: FieldElem) -> Self {
        let mut coeffs = vec![ctx.zero(); i];
        coeffs.push(c);
        LinPoly::new(coeffs)
    }

    /// The identity map `X^{[0]}`.
    pub fn identity(ctx: &FieldCtx) -> Self {
        LinPoly::monomial(ctx, 0, ctx.one())
    }

    /// A polynomial with base-field coefficients, e.g. a message.
    pub fn from_base_coeffs(ctx: &FieldCtx, digits: &[u32]) -> Self {
        LinPoly::new(digits.iter().map(|&c| ctx.from_base(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the last nonzero coefficient; `None` for the zero polynomial.
    pub fn qdeg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, ctx: &FieldCtx, i: usize) -> FieldElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| ctx.zero())
    }

    fn check(&self, ctx: &FieldCtx) -> Result<()> {
        self.coeffs.iter().try_for_each(|c| ctx.check(c))
    }

    /// `sum_i f_i x^{q^i}`.
    pub fn eval(&self, ctx: &FieldCtx, x: &FieldElem) -> Result<FieldElem> {
        ctx.check(x)?;
        self.check(ctx)?;
        Ok(self.eval_unchecked(ctx, x))
    }

    pub(crate) fn eval_unchecked(&self, ctx: &FieldCtx, x: &FieldElem) -> FieldElem {
        self.coeffs.iter().enumerate().fold(ctx.zero(), |acc, (i, c)| {
            if c.is_zero() {
                acc
            } else {
                ctx.add(&acc, &ctx.mul(c, &ctx.frobenius(x, i)))
            }
        })
    }

    pub fn add(&self, ctx: &FieldCtx, other: &LinPoly) -> LinPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        LinPoly::new(
            (0..n)
                .map(|i| ctx.add(&self.coeff(ctx, i), &other.coeff(ctx, i)))
                .collect(),
        )
    }

    /// `f(g(X))`: `h_n = sum_{i+j=n} f_i g_j^{[i]}`.
    pub fn compose(&self, ctx: &FieldCtx, g: &LinPoly) -> LinPoly {
        if self.is_zero() || g.is_zero() {
            return LinPoly::zero();
        }
        let mut out = vec![ctx.zero(); self.coeffs.len() + g.coeffs.len() - 1];
        for (i, fi) in self.coeffs.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            for (j, gj) in g.coeffs.iter().enumerate() {
                let term = ctx.mul(fi, &ctx.frobenius(gj, i));
                out[i + j] = ctx.add(&out[i + j], &term);
            }
        }
        LinPoly::new(out)
    }

    /// The polynomial `X -> f(cX)`: coefficient `i` becomes `f_i c^{[i]}`.
    pub fn scale_arg(&self, ctx: &FieldCtx, c: &FieldElem) -> LinPoly {
        LinPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, fi)| ctx.mul(fi, &ctx.frobenius(c, i)))
                .collect(),
        )
    }

    /// Matrix over `F_q` of the evaluation map in the polynomial basis of
    /// the field: column `c` holds the digits of `f(x^c)`.
    fn evaluation_matrix(&self, ctx: &FieldCtx) -> Vec<Vec<u32>> {
        let d = ctx.degree();
        let images: Vec<FieldElem> = (0..d)
            .map(|c| {
                let mut e = vec![0; d];
                e[c] = 1;
                self.eval_unchecked(ctx, &ctx.element(e).expect("unit vector"))
            })
            .collect();
        (0..d)
            .map(|r| images.iter().map(|img| img.coeffs()[r]).collect())
            .collect()
    }

    /// The `F_q`-subspace of the field (as `F_q^d`, polynomial coordinates)
    /// on which `f` vanishes.
    pub fn root_space(&self, ctx: &FieldCtx) -> Result<Subspace> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        self.check(ctx)?;
        let matrix = self.evaluation_matrix(ctx);
        let kernel = crate::linalg::kernel_basis(&ctx.base_field(), &matrix, ctx.degree());
        Subspace::span(ctx.q(), ctx.degree(), kernel)
    }

    /// The polynomial `h` with `h_i = f_{i+j}^{[d-j]}`, so that applying
    /// `[j]` to every coefficient and shifting indices up by `j` gives back
    /// `f`. Requires `f_0 = .. = f_{j-1} = 0`.
    pub fn frobenius_shift(&self, ctx: &FieldCtx, j: usize) -> Result<LinPoly> {
        if let Some(index) = self.coeffs.iter().take(j).position(|c| !c.is_zero()) {
            return Err(Error::NonzeroBelowShift { index, shift: j });
        }
        Ok(LinPoly::new(
            self.coeffs
                .iter()
                .skip(j)
                .map(|c| ctx.frobenius_inv(c, j))
                .collect(),
        ))
    }

    /// Inverse of [`LinPoly::frobenius_shift`]: `[j]` on every coefficient,
    /// indices shifted up by `j`. As maps, the result is `x -> f(x)^{[j]}`.
    pub fn frobenius_unshift(&self, ctx: &FieldCtx, j: usize) -> LinPoly {
        if self.is_zero() {
            return LinPoly::zero();
        }
        let mut coeffs = vec![ctx.zero(); j];
        coeffs.extend(self.coeffs.iter().map(|c| ctx.frobenius(c, j)));
        LinPoly::new(coeffs)
    }

    /// The coefficients as base digits, if they all lie in `F_q`.
    pub fn base_coeffs(&self, ctx: &FieldCtx) -> Option<Vec<u32>> {
        self.coeffs.iter().map(|c| ctx.base_value(c)).collect()
    }

    pub fn to_hex(&self, ctx: &FieldCtx) -> Vec<String> {
        self.coeffs.iter().map(|c| ctx.to_hex(c)).collect()
    }

    pub fn from_hex(ctx: &FieldCtx, items: &[String]) -> Result<Self> {
        Ok(LinPoly::new(
            items.iter().map(|s| ctx.from_hex(s)).collect::<Result<_>>()?,
        ))
    }
}
