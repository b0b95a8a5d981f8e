//! The restricted KK code: `span{(α_i, f(α_i))}` with `f`
//! over `F_q` and every `α_i` normal, decoded from insertions by
//! manufacturing folded evaluations and reusing the folded decoder.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel;
use crate::error::{Error, Result};
use crate::gf::{FieldBasis, FieldCtx, FieldElem, FieldSpec};
use crate::lfrs::{self, DecodeOutput, InterpPoint};
use crate::linpoly::LinPoly;
use crate::subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "KkWire", into = "KkWire")]
pub struct KkParams {
    field: FieldCtx,
    s: usize,
    k: usize,
    alphas: Vec<FieldElem>,
    gamma: FieldElem,
}

impl KkParams {
    pub fn new(field: FieldCtx, s: usize, k: usize, alphas: Vec<FieldElem>, gamma: FieldElem) -> Result<Self> {
        let m = field.degree();
        let ell = alphas.len();
        for a in alphas.iter().chain(std::iter::once(&gamma)) {
            field.check(a)?;
        }
        if s == 0 {
            return Err(Error::InvalidParams("folding parameter s must be at least 1".into()));
        }
        if k == 0 || k > m || k > ell {
            return Err(Error::InvalidParams(format!(
                "need 1 <= k <= min(ell, m), got k = {k}, ell = {ell}, m = {m}"
            )));
        }
        if let Some(i) = alphas.iter().position(|a| !field.is_normal(a)) {
            return Err(Error::InvalidParams(format!("α_{} does not generate a normal basis", i + 1)));
        }
        if field.rank_over_base(&alphas) != ell {
            return Err(Error::InvalidParams(
                "evaluation points must be linearly independent over F_q".into(),
            ));
        }
        if !field.is_normal(&gamma) {
            return Err(Error::InvalidParams("γ does not generate a normal basis".into()));
        }
        Ok(KkParams {
            field,
            s,
            k,
            alphas,
            gamma,
        })
    }

    /// Seeded parameters: independent normal `α_i` and a normal `γ`.
    pub fn generate(q: u64, m: usize, ell: usize, k: usize, s: usize, seed: u64) -> Result<Self> {
        if ell > m {
            return Err(Error::InvalidParams(format!("ell = {ell} exceeds m = {m}")));
        }
        let field = crate::gf::make_field(q, m)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut alphas: Vec<FieldElem> = Vec::with_capacity(ell);
        let mut tries = 0;
        while alphas.len() < ell {
            tries += 1;
            if tries > crate::gf::NORMAL_SEARCH_BUDGET {
                return Err(Error::NormalSearchExhausted(crate::gf::NORMAL_SEARCH_BUDGET));
            }
            let a = field.random_nonzero(&mut rng);
            if !field.is_normal(&a) {
                continue;
            }
            alphas.push(a);
            if field.rank_over_base(&alphas) != alphas.len() {
                alphas.pop();
            }
        }
        let gamma = field.find_normal_element(seed.wrapping_add(1))?;
        KkParams::new(field, s, k, alphas, gamma)
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

    /// `ℓ + m`.
    pub fn ambient_dim(&self) -> usize {
        self.ell() + self.m()
    }

    pub fn codeword_vectors(&self, message: &[u32]) -> Result<Vec<Vec<u32>>> {
        let f = lfrs::message_poly(&self.field, self.k, message)?;
        Ok(self
            .alphas
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let mut v: Vec<u32> = (0..self.ell()).map(|c| u32::from(c == i)).collect();
                v.extend_from_slice(f.eval_unchecked(&self.field, a).coeffs());
                v
            })
            .collect())
    }

    pub fn encode(&self, message: &[u32]) -> Result<Subspace> {
        Subspace::span(self.q(), self.ambient_dim(), self.codeword_vectors(message)?)
    }

    /// Whether `t < s(ℓ - k + 1)`.
    pub fn within_radius(&self, t: usize) -> bool {
        t < self.s * (self.ell() - self.k + 1)
    }

    /// The second blocks `y_ij` of a basis `{(α_i, y_ij)}` of each `W_i`.
    pub fn project_components(&self, received: &Subspace) -> Result<Vec<Vec<FieldElem>>> {
        check_ambient(received, self.q(), self.ambient_dim())?;
        (0..self.ell())
            .map(|i| {
                component_blocks(received, self.ell(), i)?
                    .into_iter()
                    .map(|y| self.field.element(y))
                    .collect()
            })
            .collect()
    }

    /// One folded point `(α_i, f_ij(γα_i), ..., f_ij(γ^{[s-1]}α_i))` per
    /// `y_ij`, grouped by `i`.
    pub fn manufacture(&self, components: &[Vec<FieldElem>]) -> Result<Vec<Vec<InterpPoint>>> {
        let ctx = &self.field;
        let shifts = ctx.conjugates(&self.gamma, self.s);
        self.alphas
            .iter()
            .zip(components)
            .map(|(a, ys)| {
                let basis = normal_basis(ctx, a)?;
                let points = shifts.iter().map(|g| ctx.mul(g, a)).collect::<Vec<_>>();
                Ok(ys
                    .iter()
                    .map(|y| {
                        let fit = LinPoly::from_base_coeffs(ctx, &basis.coords(ctx, y));
                        InterpPoint {
                            x: a.clone(),
                            ys: points.iter().map(|p| fit.eval_unchecked(ctx, p)).collect(),
                        }
                    })
                    .collect())
            })
            .collect()
    }

    /// Lists messages whose codewords lie inside `received`, which must be
    /// `ℓ + t` dimensional.
    pub fn decode(&self, received: &Subspace, t: usize) -> Result<DecodeOutput> {
        check_ambient(received, self.q(), self.ambient_dim())?;
        if received.dim() != self.ell() + t {
            return Err(Error::DimensionMismatch {
                expected: self.ell() + t,
                got: received.dim(),
            });
        }
        if !self.within_radius(t) {
            return Err(Error::RadiusViolated(format!(
                "t = {t} violates t < s(ℓ - k + 1) with s = {}, ℓ = {}, k = {}",
                self.s,
                self.ell(),
                self.k
            )));
        }
        let components = self.project_components(received)?;
        let points: Vec<InterpPoint> = self.manufacture(&components)?.into_iter().flatten().collect();
        let degree = condition_degree(points.len(), self.k, self.s);
        let q_poly = lfrs::interpolate_points(&self.field, &points, self.s, self.k, degree)?;
        let mut out = lfrs::solve_interpolant(&self.field, &self.gamma, self.k, q_poly)?;
        out.verify(|msg| channel::within(&self.encode(msg)?, received, t, 0))?;
        Ok(out)
    }
}

/// `f ∈ F_q[X]` of q-degree below `m` with `f(α) = y`: the coordinates of
/// `y` in the normal basis generated by `α`.
pub fn unique_fit(ctx: &FieldCtx, alpha: &FieldElem, y: &FieldElem) -> Result<LinPoly> {
    ctx.check(y)?;
    let basis = normal_basis(ctx, alpha)?;
    Ok(LinPoly::from_base_coeffs(ctx, &basis.coords(ctx, y)))
}

fn normal_basis(ctx: &FieldCtx, alpha: &FieldElem) -> Result<FieldBasis> {
    FieldBasis::new(ctx, ctx.conjugates(alpha, ctx.degree()))
        .map_err(|_| Error::InvalidParams("α does not generate a normal basis".into()))
}

/// Interpolation degree for `n` conditions:
/// `floor((n - k + 1) / (s + 1))`, so the unknowns outnumber the conditions.
pub(crate) fn condition_degree(n: usize, k: usize, s: usize) -> usize {
    (n + 1).saturating_sub(k) / (s + 1)
}

pub(crate) fn check_ambient(received: &Subspace, q: u32, n: usize) -> Result<()> {
    if received.q() != q {
        return Err(Error::BaseFieldMismatch {
            left: q,
            right: received.q(),
        });
    }
    if received.ambient_dim() != n {
        return Err(Error::AmbientMismatch {
            left: n,
            right: received.ambient_dim(),
        });
    }
    Ok(())
}

/// `W_i = {(c, y) : (c e_i, y) ∈ T}` for a space laid out as `ℓ`
/// coefficient coordinates followed by a second block. Returns second blocks
/// `y_0, y_0 + z_1, ...` where `(1, y_0)` and `(0, z_j)` form the echelon
/// basis of `W_i`.
pub(crate) fn component_blocks(received: &Subspace, ell: usize, i: usize) -> Result<Vec<Vec<u32>>> {
    let n = received.ambient_dim();
    let q = received.q();
    let unit = |c: usize| (0..n).map(|x| u32::from(x == c)).collect::<Vec<u32>>();
    let window = Subspace::span_unchecked(q, n, std::iter::once(i).chain(ell..n).map(unit).collect());
    let w = received.intersect(&window)?;
    let rows = w.basis();
    let Some(first) = rows.first().filter(|r| r[i] != 0) else {
        return Err(Error::DeletionDetected(i + 1));
    };
    let y0 = &first[ell..];
    Ok(std::iter::once(y0.to_vec())
        .chain(rows[1..].iter().map(|z| {
            y0.iter()
                .zip(&z[ell..])
                .map(|(&a, &b)| (a + b) % q)
                .collect()
        }))
        .collect())
}

/// Wire form of [`KkParams`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KkWire {
    pub field: FieldSpec,
    pub ell: usize,
    pub s: usize,
    pub k: usize,
    pub alphas: Vec<String>,
    pub gamma: String,
}

impl From<KkParams> for KkWire {
    fn from(p: KkParams) -> Self {
        KkWire {
            field: p.field.spec(),
            ell: p.ell(),
            s: p.s,
            k: p.k,
            alphas: p.alphas.iter().map(|a| p.field.to_hex(a)).collect(),
            gamma: p.field.to_hex(&p.gamma),
        }
    }
}

impl TryFrom<KkWire> for KkParams {
    type Error = Error;
    fn try_from(w: KkWire) -> Result<Self> {
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
        KkParams::new(field, w.s, w.k, alphas, gamma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{transmit, ChannelSpec};
    use rand::Rng;

    fn params() -> KkParams {
        KkParams::generate(2, 5, 3, 2, 2, 11).unwrap()
    }

    #[test]
    fn encode_examples() {
        let p = params();
        for v in p.encode(&[0, 0]).unwrap().basis() {
            assert!(v[3..].iter().all(|&c| c == 0));
        }
        let vs = p.codeword_vectors(&[1, 0]).unwrap();
        for (v, a) in vs.iter().zip(p.alphas()) {
            assert_eq!(&v[3..], a.coeffs());
        }
    }

    #[test]
    fn unique_fit_examples() {
        let p = params();
        let f = p.field();
        let a = &p.alphas()[0];
        assert!(unique_fit(f, a, &f.zero()).unwrap().is_zero());
        assert_eq!(unique_fit(f, a, a).unwrap(), LinPoly::identity(f));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let y = f.random(&mut rng);
            let g = unique_fit(f, a, &y).unwrap();
            assert_eq!(g.eval(f, a).unwrap(), y);
            assert!(g.base_coeffs(f).is_some());
        }
        assert!(unique_fit(f, &f.one(), &f.one()).is_err());
    }

    #[test]
    fn noiseless_components_are_one_dimensional() {
        let p = params();
        let v = p.encode(&[1, 1]).unwrap();
        let comps = p.project_components(&v).unwrap();
        let poly = LinPoly::from_base_coeffs(p.field(), &[1, 1]);
        for (i, ys) in comps.iter().enumerate() {
            assert_eq!(ys, &vec![poly.eval(p.field(), &p.alphas()[i]).unwrap()]);
        }
    }

    #[test]
    fn deletion_is_detected() {
        let p = params();
        let v = p.encode(&[1, 0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let out = transmit(&v, &ChannelSpec::random(3, 0), &mut rng).unwrap();
        assert!(matches!(p.project_components(&out.received), Err(Error::DeletionDetected(1))));
    }

    #[test]
    fn noiseless_decode() {
        let p = params();
        for msg in [[0, 0], [1, 0], [0, 1], [1, 1]] {
            let out = p.decode(&p.encode(&msg).unwrap(), 0).unwrap();
            assert_eq!(out.verified_messages(), vec![msg.to_vec()]);
        }
    }

    #[test]
    fn radius_boundary_rejected() {
        let p = params();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = p.encode(&[0, 1]).unwrap();
        let out = transmit(&v, &ChannelSpec::random(0, 4), &mut rng).unwrap();
        assert!(matches!(p.decode(&out.received, 4), Err(Error::RadiusViolated(_))));
    }

    #[test]
    fn single_insertion_decodes() {
        let p = params();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let msg: Vec<u32> = (0..2).map(|_| rng.gen_range(0..2)).collect();
            let v = p.encode(&msg).unwrap();
            let out = transmit(&v, &ChannelSpec::random(0, 1), &mut rng).unwrap();
            assert!(p.decode(&out.received, 1).unwrap().verified_messages().contains(&msg));
        }
    }

    #[test]
    fn params_roundtrip_through_json() {
        let p = params();
        let json = serde_json::to_string(&p).unwrap();
        let back: KkParams = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
