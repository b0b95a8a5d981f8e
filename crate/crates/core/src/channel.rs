//! The operator channel: `U = H(V) + E` with `H(V) ⊆ V` and `E ∩ V = {0}`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subspace::Subspace;

/// How the channel picks the surviving part of `V` and the inserted space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum ChannelMode {
    Random,
    /// Explicit surviving subspace `h ⊆ V` and error space `e`.
    Adversarial { h: Subspace, e: Subspace },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub deletions: usize,
    pub insertions: usize,
    pub mode: ChannelMode,
}

impl ChannelSpec {
    pub fn random(deletions: usize, insertions: usize) -> Self {
        ChannelSpec {
            deletions,
            insertions,
            mode: ChannelMode::Random,
        }
    }

    pub fn adversarial(h: Subspace, e: Subspace, transmitted_dim: usize) -> Self {
        ChannelSpec {
            deletions: transmitted_dim.saturating_sub(h.dim()),
            insertions: e.dim(),
            mode: ChannelMode::Adversarial { h, e },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelOutcome {
    pub received: Subspace,
    pub realized_deletions: usize,
    pub realized_insertions: usize,
}

/// Sends `v` through the channel.
pub fn transmit<R: Rng + ?Sized>(v: &Subspace, spec: &ChannelSpec, rng: &mut R) -> Result<ChannelOutcome> {
    let r = spec.deletions;
    let t = spec.insertions;
    if r > v.dim() {
        return Err(Error::InfeasibleChannel(format!(
            "{r} deletions from a {}-dimensional space",
            v.dim()
        )));
    }
    if v.dim() + t > v.ambient_dim() {
        return Err(Error::InfeasibleChannel(format!(
            "{t} insertions do not fit beside a {}-dimensional space in F_q^{}",
            v.dim(),
            v.ambient_dim()
        )));
    }
    let (h, e) = match &spec.mode {
        ChannelMode::Random => {
            let h = v.random_subspace_of(v.dim() - r, rng)?;
            (h, random_complement(v, t, rng))
        }
        ChannelMode::Adversarial { h, e } => {
            if !h.is_subspace_of(v)? {
                return Err(Error::InfeasibleChannel("H is not a subspace of V".into()));
            }
            if h.dim() + r != v.dim() || e.dim() != t {
                return Err(Error::InfeasibleChannel(
                    "explicit H and E do not match the stated deletions and insertions".into(),
                ));
            }
            if e.intersect(v)?.dim() != 0 {
                return Err(Error::InfeasibleChannel("E meets V nontrivially".into()));
            }
            (h.clone(), e.clone())
        }
    };
    let received = h.sum(&e)?;
    let (realized_insertions, realized_deletions) = measure(v, &received)?;
    Ok(ChannelOutcome {
        received,
        realized_deletions,
        realized_insertions,
    })
}

/// A random `t`-dimensional `E` with `E ∩ V = {0}`: random vectors are kept
/// when they leave `V + E` so far.
fn random_complement<R: Rng + ?Sized>(v: &Subspace, t: usize, rng: &mut R) -> Subspace {
    let full = Subspace::full(v.q(), v.ambient_dim());
    let mut grown = v.clone();
    let mut rows = Vec::with_capacity(t);
    while rows.len() < t {
        let x = full.random_vector_in(rng);
        if grown.contains(&x).expect("same ambient") {
            continue;
        }
        grown = grown
            .sum(&Subspace::span_unchecked(v.q(), v.ambient_dim(), vec![x.clone()]))
            .expect("same ambient");
        rows.push(x);
    }
    Subspace::span_unchecked(v.q(), v.ambient_dim(), rows)
}

/// `(insertions, deletions)` separating `v` from `t`:
/// `(dim T - dim(V∩T), dim V - dim(V∩T))`.
pub fn measure(v: &Subspace, t: &Subspace) -> Result<(usize, usize)> {
    let meet = v.intersect(t)?.dim();
    Ok((t.dim() - meet, v.dim() - meet))
}

/// Whether `t` is reachable from `v` with at most `insertions` insertions
/// and `deletions` deletions.
pub fn within(v: &Subspace, t: &Subspace, insertions: usize, deletions: usize) -> Result<bool> {
    let (ti, rd) = measure(v, t)?;
    Ok(ti <= insertions && rd <= deletions)
}
