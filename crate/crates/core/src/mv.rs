//! The MV variant of KK codes over `F_{q^{mℓ}}`, list decoded
//! from insertions with Frobenius-twisted interpolation.
//!
//! With `e_1 = 1, ..., e_ℓ` the `ℓ`-th roots of unity in `F_q` and `β`
//! normal, `α_i = sum_j e_i^j β^{[jm]}`. A message `f` is sent as
//! `span{(α_1, f(α_1)), (α_i, f(α_i)/α_i) : i > 1}`; every second block lies
//! in `F_{q^m}`, so the ambient is `ℓ + m` dimensional.

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel;
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem, FieldSpec};
use crate::kk::{check_ambient, component_blocks, condition_degree};
use crate::lfrs::{self, DecodeOutput, InterpPoint};
use crate::linalg::{self, PrimeField};
use crate::linpoly::LinPoly;
use crate::subspace::Subspace;

/// Random messages drawn when validating the subfield property.
pub const SUBFIELD_CHECKS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MvWire", into = "MvWire")]
pub struct MvParams {
    field: FieldCtx,
    m: usize,
    ell: usize,
    k: usize,
    s: usize,
    beta: FieldElem,
    gamma: FieldElem,
    roots: Vec<u32>,
    alphas: Vec<FieldElem>,
    /// `F_q`-basis of `F_{q^m}` inside the big field.
    sub_basis: Vec<FieldElem>,
}

/// The `ℓ` solutions of `x^ℓ = 1` in `F_q`, ascending.
pub fn roots_of_unity(q: u32, ell: usize) -> Result<Vec<u32>> {
    if ell == 0 || !(q as usize - 1).is_multiple_of(ell) {
        return Err(Error::InvalidParams(format!("ℓ must divide q−1 (ℓ = {ell}, q = {q})")));
    }
    let f = PrimeField::new(q);
    Ok((1..q).filter(|&x| f.pow(x, ell as u64) == 1).collect())
}

impl MvParams {
    /// Seeded construction; validates the basis and subfield properties.
    pub fn build(q: u64, m: usize, ell: usize, k: usize, s: usize, seed: u64) -> Result<Self> {
        let q32 = u32::try_from(q).map_err(|_| Error::UnsupportedBaseField(q))?;
        if ell == 0 || m == 0 {
            return Err(Error::InvalidParams("m and ℓ must be positive".into()));
        }
        if q32 < 2 || !(q32 as usize - 1).is_multiple_of(ell) {
            return Err(Error::InvalidParams(format!("ℓ must divide q−1 (ℓ = {ell}, q = {q})")));
        }
        let field = crate::gf::make_field(q, m * ell)?;
        let beta = field.find_normal_element(seed)?;
        let gamma = field.find_normal_element(seed.wrapping_add(1))?;
        let p = MvParams::new(field, m, k, s, beta, gamma)?;
        p.validate_subfield_property(seed)?;
        Ok(p)
    }

    /// Derives `e_i`, `α_i` and the subfield basis from `β`.
    pub fn new(field: FieldCtx, m: usize, k: usize, s: usize, beta: FieldElem, gamma: FieldElem) -> Result<Self> {
        field.check(&beta)?;
        field.check(&gamma)?;
        if m == 0 || !field.degree().is_multiple_of(m) {
            return Err(Error::InvalidParams(format!(
                "m = {m} does not divide the extension degree {}",
                field.degree()
            )));
        }
        let ell = field.degree() / m;
        let roots = roots_of_unity(field.q(), ell)?;
        if s == 0 {
            return Err(Error::InvalidParams("folding parameter s must be at least 1".into()));
        }
        // Fits of q-degree below m are only unique for messages of that size.
        if k == 0 || k > m {
            return Err(Error::InvalidParams(format!("need 1 <= k <= m, got k = {k}, m = {m}")));
        }
        if !field.is_normal(&beta) || !field.is_normal(&gamma) {
            return Err(Error::InvalidParams("β and γ must generate normal bases".into()));
        }
        let shifts: Vec<FieldElem> = (0..ell).map(|j| field.frobenius(&beta, j * m)).collect();
        let alphas: Vec<FieldElem> = roots
            .iter()
            .map(|&e| {
                let mut pow = 1u32;
                shifts.iter().fold(field.zero(), |acc, b| {
                    let term = field.scale(pow, b);
                    pow = (pow as u64 * e as u64 % field.q() as u64) as u32;
                    field.add(&acc, &term)
                })
            })
            .collect();
        let twists: Vec<FieldElem> = alphas.iter().flat_map(|a| field.conjugates(a, m)).collect();
        if field.rank_over_base(&twists) != m * ell {
            return Err(Error::Internal("{α_i^[j]} is not a basis of the big field".into()));
        }
        let sub_basis = subfield_basis(&field, m);
        Ok(MvParams {
            field,
            m,
            ell,
            k,
            s,
            beta,
            gamma,
            roots,
            alphas,
            sub_basis,
        })
    }

    /// Checks `f(α_i)/α_i ∈ F_{q^m}` for seeded random `f` over `F_q`.
    pub fn validate_subfield_property(&self, seed: u64) -> Result<()> {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = &self.field;
        let top = ctx.degree();
        for _ in 0..SUBFIELD_CHECKS {
            let digits: Vec<u32> = (0..top).map(|_| rng.gen_range(0..ctx.q())).collect();
            let f = LinPoly::from_base_coeffs(ctx, &digits);
            for a in &self.alphas {
                let ratio = ctx.mul(&f.eval_unchecked(ctx, a), &ctx.inv(a).expect("α_i is nonzero"));
                if !ctx.in_subfield(&ratio, self.m) {
                    return Err(Error::Internal("f(α_i)/α_i left the subfield".into()));
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }
    pub fn q(&self) -> u32 {
        self.field.q()
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn ell(&self) -> usize {
        self.ell
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn s(&self) -> usize {
        self.s
    }
    pub fn beta(&self) -> &FieldElem {
        &self.beta
    }
    pub fn gamma(&self) -> &FieldElem {
        &self.gamma
    }
    pub fn roots(&self) -> &[u32] {
        &self.roots
    }
    pub fn alphas(&self) -> &[FieldElem] {
        &self.alphas
    }

    /// `ℓ + m`.
    pub fn ambient_dim(&self) -> usize {
        self.ell + self.m
    }

    /// Coordinates of `w ∈ F_{q^m}` in the subfield basis.
    pub fn subfield_coords(&self, w: &FieldElem) -> Result<Vec<u32>> {
        let cols: Vec<Vec<u32>> = self.sub_basis.iter().map(|b| b.coeffs().to_vec()).collect();
        linalg::solve_combination(&self.field.base_field(), &cols, w.coeffs())
            .ok_or_else(|| Error::Internal("second block outside F_{q^m}".into()))
    }

    pub fn subfield_element(&self, coords: &[u32]) -> FieldElem {
        let ctx = &self.field;
        self.sub_basis
            .iter()
            .zip(coords)
            .fold(ctx.zero(), |acc, (b, &c)| ctx.add(&acc, &ctx.scale(c, b)))
    }

    /// The second block of `v_i` before coordinatisation:
    /// `f(α_1)` for `i = 0`, `f(α_i)/α_i` otherwise.
    fn block_value(&self, f: &LinPoly, i: usize) -> FieldElem {
        let ctx = &self.field;
        let y = f.eval_unchecked(ctx, &self.alphas[i]);
        if i == 0 {
            y
        } else {
            ctx.mul(&y, &ctx.inv(&self.alphas[i]).expect("α_i is nonzero"))
        }
    }

    pub fn codeword_vectors(&self, message: &[u32]) -> Result<Vec<Vec<u32>>> {
        let f = lfrs::message_poly(&self.field, self.k, message)?;
        (0..self.ell)
            .map(|i| {
                let mut v: Vec<u32> = (0..self.ell).map(|c| u32::from(c == i)).collect();
                v.extend(self.subfield_coords(&self.block_value(&f, i))?);
                Ok(v)
            })
            .collect()
    }

    pub fn encode(&self, message: &[u32]) -> Result<Subspace> {
        Subspace::span(self.q(), self.ambient_dim(), self.codeword_vectors(message)?)
    }

    /// `t·m < s(mℓ − k + 1)`, i.e. `t < sℓ − s(k−1)/m`.
    pub fn within_radius(&self, t: usize) -> bool {
        t * self.m < self.s * (self.m * self.ell + 1 - self.k)
    }

    /// `y_ij` for each `W_i`: the received second block, multiplied back by
    /// `α_i` when `i > 1`.
    pub fn project_components(&self, received: &Subspace) -> Result<Vec<Vec<FieldElem>>> {
        check_ambient(received, self.q(), self.ambient_dim())?;
        let ctx = &self.field;
        (0..self.ell)
            .map(|i| {
                Ok(component_blocks(received, self.ell, i)?
                    .iter()
                    .map(|w| {
                        let w = self.subfield_element(w);
                        if i == 0 {
                            w
                        } else {
                            ctx.mul(&w, &self.alphas[i])
                        }
                    })
                    .collect())
            })
            .collect()
    }

    /// `f ∈ F_q[X]` of q-degree below `m` with `f(α_i) = y`, from the
    /// coordinates of `y` in `{α_i^{[n]}}_{n<m}`.
    pub fn fit(&self, i: usize, y: &FieldElem) -> Result<LinPoly> {
        let ctx = &self.field;
        let cols: Vec<Vec<u32>> = ctx
            .conjugates(&self.alphas[i], self.m)
            .into_iter()
            .map(|c| c.coeffs().to_vec())
            .collect();
        let u = linalg::solve_combination(&ctx.base_field(), &cols, y.coeffs())
            .ok_or_else(|| Error::Internal(format!("y is outside span{{α_{}^[n]}}", i + 1)))?;
        Ok(LinPoly::from_base_coeffs(ctx, &u))
    }

    /// For each `i`, `y_ij` and twist `n < m`, the point
    /// `(α_i^{[n]}, f_ij(γ^{[mℓ−n]}α_i)^{[n]}, ..., f_ij(γ^{[mℓ−n+s−1]}α_i)^{[n]})`.
    pub fn manufacture_twisted(&self, components: &[Vec<FieldElem>]) -> Result<Vec<InterpPoint>> {
        let ctx = &self.field;
        let big = ctx.degree();
        let mut points = Vec::new();
        for (i, ys) in components.iter().enumerate() {
            let a = &self.alphas[i];
            for y in ys {
                let fit = self.fit(i, y)?;
                for n in 0..self.m {
                    let ys = (0..self.s)
                        .map(|d| {
                            let g = ctx.frobenius(&self.gamma, (big - n + d) % big);
                            ctx.frobenius(&fit.eval_unchecked(ctx, &ctx.mul(&g, a)), n)
                        })
                        .collect();
                    points.push(InterpPoint {
                        x: ctx.frobenius(a, n),
                        ys,
                    });
                }
            }
        }
        Ok(points)
    }

    pub fn decode(&self, received: &Subspace, t: usize) -> Result<DecodeOutput> {
        check_ambient(received, self.q(), self.ambient_dim())?;
        if received.dim() != self.ell + t {
            return Err(Error::DimensionMismatch {
                expected: self.ell + t,
                got: received.dim(),
            });
        }
        if !self.within_radius(t) {
            return Err(Error::RadiusViolated(format!(
                "t = {t} violates t < sℓ − s(k−1)/m with s = {}, ℓ = {}, m = {}, k = {}",
                self.s, self.ell, self.m, self.k
            )));
        }
        let components = self.project_components(received)?;
        let points = self.manufacture_twisted(&components)?;
        let degree = condition_degree(points.len(), self.k, self.s);
        let q_poly = lfrs::interpolate_points(&self.field, &points, self.s, self.k, degree)?;
        let mut out = lfrs::solve_interpolant(&self.field, &self.gamma, self.k, q_poly)?;
        out.verify(|msg| channel::within(&self.encode(msg)?, received, t, 0))?;
        Ok(out)
    }
}

/// Kernel of `x ↦ x^{[m]} − x` as an `F_q`-basis.
fn subfield_basis(field: &FieldCtx, m: usize) -> Vec<FieldElem> {
    let d = field.degree();
    let pf = field.base_field();
    let images: Vec<Vec<u32>> = (0..d)
        .map(|c| {
            let e = field.element_from_index((field.q() as u128).pow(c as u32));
            field.sub(&field.frobenius(&e, m), &e).coeffs().to_vec()
        })
        .collect();
    let rows: Vec<Vec<u32>> = (0..d).map(|r| images.iter().map(|col| col[r]).collect()).collect();
    linalg::kernel_basis(&pf, &rows, d)
        .into_iter()
        .map(|v| field.element(v).expect("digits below q"))
        .collect()
}

/// Shift-based radius with `s` shift variables: `sℓ + ℓ − (s+1)(k−1)/m`.
pub fn shift_radius(s: u64, ell: u64, m: u64, k: u64) -> Ratio<i64> {
    Ratio::from_integer((s * ell + ell) as i64) - Ratio::new(((s + 1) * (k - 1)) as i64, m as i64)
}

/// Composition-based radius: `sℓ + ℓ − ((q^{s+1}−1)/(q−1))(k−1)/m`.
pub fn composition_radius(q: u64, s: u64, ell: u64, m: u64, k: u64) -> Ratio<i64> {
    let geometric: u64 = (0..=s).map(|i| q.pow(i as u32)).sum();
    Ratio::from_integer((s * ell + ell) as i64) - Ratio::new((geometric * (k - 1)) as i64, m as i64)
}

/// Wire form of [`MvParams`]; derived values are recomputed on load and
/// must match.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MvWire {
    pub field: FieldSpec,
    pub m: usize,
    pub ell: usize,
    pub k: usize,
    pub s: usize,
    pub beta: String,
    pub gamma: String,
    pub roots: Vec<u32>,
    pub alphas: Vec<String>,
}

impl From<MvParams> for MvWire {
    fn from(p: MvParams) -> Self {
        MvWire {
            field: p.field.spec(),
            m: p.m,
            ell: p.ell,
            k: p.k,
            s: p.s,
            beta: p.field.to_hex(&p.beta),
            gamma: p.field.to_hex(&p.gamma),
            roots: p.roots.clone(),
            alphas: p.alphas.iter().map(|a| p.field.to_hex(a)).collect(),
        }
    }
}

impl TryFrom<MvWire> for MvParams {
    type Error = Error;
    fn try_from(w: MvWire) -> Result<Self> {
        let field = FieldCtx::from_spec(&w.field)?;
        let beta = field.from_hex(&w.beta)?;
        let gamma = field.from_hex(&w.gamma)?;
        let p = MvParams::new(field, w.m, w.k, w.s, beta, gamma)?;
        let alphas = w.alphas.iter().map(|a| p.field.from_hex(a)).collect::<Result<Vec<_>>>()?;
        if p.ell != w.ell || p.roots != w.roots || p.alphas != alphas {
            return Err(Error::InvalidParams(
                "stored ℓ, roots or α_i disagree with those derived from β".into(),
            ));
        }
        Ok(p)
    }
}
