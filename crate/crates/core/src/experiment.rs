//! Parameter files, round-trip sweeps and JSON reports.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{self, ChannelSpec};
use crate::error::{Error, Result};
use crate::kk::KkParams;
use crate::lfrs::{DecodeOutput, LfrsParams};
use crate::mv::MvParams;
use crate::subspace::Subspace;

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "SUBSPACE_CODEC_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Lfrs,
    Kk,
    Mv,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lfrs" => Ok(Family::Lfrs),
            "kk" => Ok(Family::Kk),
            "mv" => Ok(Family::Mv),
            other => Err(Error::Parse(format!("unknown code family '{other}'"))),
        }
    }
}

/// Parameters of any supported family, tagged by `family` on the wire.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum CodeParams {
    Lfrs(LfrsParams),
    Kk(KkParams),
    Mv(MvParams),
}

impl CodeParams {
    pub fn family(&self) -> Family {
        match self {
            CodeParams::Lfrs(_) => Family::Lfrs,
            CodeParams::Kk(_) => Family::Kk,
            CodeParams::Mv(_) => Family::Mv,
        }
    }

    pub fn q(&self) -> u32 {
        match self {
            CodeParams::Lfrs(p) => p.q(),
            CodeParams::Kk(p) => p.q(),
            CodeParams::Mv(p) => p.q(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            CodeParams::Lfrs(p) => p.k(),
            CodeParams::Kk(p) => p.k(),
            CodeParams::Mv(p) => p.k(),
        }
    }

    pub fn ell(&self) -> usize {
        match self {
            CodeParams::Lfrs(p) => p.ell(),
            CodeParams::Kk(p) => p.ell(),
            CodeParams::Mv(p) => p.ell(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            CodeParams::Lfrs(p) => p.ambient_dim(),
            CodeParams::Kk(p) => p.ambient_dim(),
            CodeParams::Mv(p) => p.ambient_dim(),
        }
    }

    pub fn encode(&self, message: &[u32]) -> Result<Subspace> {
        match self {
            CodeParams::Lfrs(p) => p.encode(message),
            CodeParams::Kk(p) => p.encode(message),
            CodeParams::Mv(p) => p.encode(message),
        }
    }

    /// Insertion-only families reject `r > 0` as a regime error.
    pub fn decode(&self, received: &Subspace, t: usize, r: usize) -> Result<DecodeOutput> {
        match self {
            CodeParams::Lfrs(p) => p.decode(received, t, r),
            CodeParams::Kk(_) | CodeParams::Mv(_) if r > 0 => Err(Error::DeletionDetected(0)),
            CodeParams::Kk(p) => p.decode(received, t),
            CodeParams::Mv(p) => p.decode(received, t),
        }
    }

    pub fn within_radius(&self, t: usize, r: usize) -> bool {
        match self {
            CodeParams::Lfrs(p) => p.within_radius(t, r),
            CodeParams::Kk(p) => r == 0 && p.within_radius(t),
            CodeParams::Mv(p) => r == 0 && p.within_radius(t),
        }
    }

    /// Every `(t, r)` inside the decoding radius that the channel can
    /// realize in this ambient.
    pub fn region(&self) -> Vec<(usize, usize)> {
        let ell = self.ell();
        let room = self.ambient_dim() - ell;
        let mut out = Vec::new();
        for r in 0..=ell {
            for t in 0..=room {
                if self.within_radius(t, r) {
                    out.push((t, r));
                }
            }
        }
        out
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("params serialize")
    }
}

/// Seeded parameters for a family. For `mv`, `m` is the subfield degree and
/// the code lives over `F_{q^{mℓ}}`.
pub fn gen_params(family: Family, q: u64, m: usize, ell: usize, k: usize, s: usize, seed: u64) -> Result<CodeParams> {
    Ok(match family {
        Family::Lfrs => CodeParams::Lfrs(LfrsParams::generate(q, m, ell, k, s, seed)?),
        Family::Kk => CodeParams::Kk(KkParams::generate(q, m, ell, k, s, seed)?),
        Family::Mv => CodeParams::Mv(MvParams::build(q, m, ell, k, s, seed)?),
    })
}

/// A seeded random message of length `k`.
pub fn random_message<R: Rng + ?Sized>(q: u32, k: usize, rng: &mut R) -> Vec<u32> {
    (0..k).map(|_| rng.gen_range(0..q)).collect()
}

/// Every message of length `k`, in lexicographic order.
pub fn all_messages(q: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..q).map(move |c| {
                    let mut v = p.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundtripConfig {
    pub params: CodeParams,
    /// `(insertions, deletions)` pairs; empty means the whole region.
    #[serde(default)]
    pub channels: Vec<(usize, usize)>,
    pub trials: usize,
    pub seed: u64,
    /// Adds wall-clock timings, which makes reports non-reproducible.
    #[serde(default)]
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub message: Vec<u32>,
    pub success: bool,
    pub list_size: usize,
    pub candidates: usize,
    pub branch_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub micros: Option<u128>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub insertions: usize,
    pub deletions: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub max_list_size: usize,
    pub max_candidates: usize,
    pub max_branch_count: usize,
    pub errors: usize,
    pub records: Vec<TrialRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundtripReport {
    pub config: RoundtripConfig,
    pub points: Vec<PointReport>,
}

/// A pool sized by [`THREADS_ENV`] when set, else rayon's default.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| Error::Parse(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
        builder = builder.num_threads(n.max(1));
    }
    builder.build().map_err(|e| Error::Internal(e.to_string()))
}

/// Encode, transmit, decode for each channel point. Trial `j` of point `i`
/// draws from stream `(i << 32) | j` of the seeded generator.
pub fn run_roundtrip(config: &RoundtripConfig) -> Result<RoundtripReport> {
    let params = &config.params;
    let channels = if config.channels.is_empty() {
        params.region()
    } else {
        config.channels.clone()
    };
    if params.family() != Family::Lfrs {
        if let Some(&(_, r)) = channels.iter().find(|&&(_, r)| r > 0) {
            return Err(Error::InvalidParams(format!(
                "{:?} codes decode insertions only; got {r} deletions",
                params.family()
            )));
        }
    }
    let pool = thread_pool()?;
    let points = pool.install(|| {
        channels
            .iter()
            .enumerate()
            .map(|(i, &(t, r))| run_point(config, i, t, r))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut resolved = config.clone();
    resolved.channels = channels;
    Ok(RoundtripReport {
        config: resolved,
        points,
    })
}

fn run_point(config: &RoundtripConfig, index: usize, t: usize, r: usize) -> Result<PointReport> {
    let records = (0..config.trials)
        .into_par_iter()
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(((index as u64) << 32) | j as u64);
            run_trial(&config.params, t, r, config.timing, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    let successes = records.iter().filter(|x| x.success).count();
    Ok(PointReport {
        insertions: t,
        deletions: r,
        trials: records.len(),
        successes,
        success_rate: if records.is_empty() {
            0.0
        } else {
            successes as f64 / records.len() as f64
        },
        max_list_size: records.iter().map(|x| x.list_size).max().unwrap_or(0),
        max_candidates: records.iter().map(|x| x.candidates).max().unwrap_or(0),
        max_branch_count: records.iter().map(|x| x.branch_count).max().unwrap_or(0),
        errors: records.iter().filter(|x| x.error.is_some()).count(),
        records,
    })
}

fn run_trial(params: &CodeParams, t: usize, r: usize, timing: bool, rng: &mut ChaCha8Rng) -> Result<TrialRecord> {
    let message = random_message(params.q(), params.k(), rng);
    let v = params.encode(&message)?;
    let received = channel::transmit(&v, &ChannelSpec::random(r, t), rng)?.received;
    let start = std::time::Instant::now();
    let decoded = params.decode(&received, t, r);
    let micros = timing.then(|| start.elapsed().as_micros());
    Ok(match decoded {
        Ok(out) => {
            let list = out.verified_messages();
            TrialRecord {
                success: list.contains(&message),
                list_size: list.len(),
                candidates: out.candidates.len(),
                branch_count: out.branch_positions.len(),
                message,
                error: None,
                micros,
            }
        }
        Err(e) => TrialRecord {
            message,
            success: false,
            list_size: 0,
            candidates: 0,
            branch_count: 0,
            error: Some(e.to_string()),
            micros,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_clean_trial() {
        let params = gen_params(Family::Lfrs, 2, 6, 4, 2, 2, 7).unwrap();
        let cfg = RoundtripConfig {
            params,
            channels: vec![(0, 0)],
            trials: 1,
            seed: 1,
            timing: false,
        };
        let rep = run_roundtrip(&cfg).unwrap();
        assert_eq!(rep.points[0].success_rate, 1.0);
        assert_eq!(rep.points[0].max_list_size, 1);
    }

    #[test]
    fn insertion_only_family_rejects_deletions() {
        let params = gen_params(Family::Kk, 2, 5, 3, 2, 2, 1).unwrap();
        let cfg = RoundtripConfig {
            params,
            channels: vec![(0, 1)],
            trials: 1,
            seed: 1,
            timing: false,
        };
        assert!(matches!(run_roundtrip(&cfg), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn params_roundtrip_with_family_tag() {
        for fam in [Family::Lfrs, Family::Kk] {
            let p = gen_params(fam, 2, 5, 3, 2, 2, 9).unwrap();
            let json = p.to_json();
            let back: CodeParams = serde_json::from_str(&json).unwrap();
            assert_eq!(back, p);
            assert_eq!(back.to_json(), json);
        }
        assert!(gen_params(Family::Mv, 3, 2, 5, 1, 1, 0).is_err());
    }

    #[test]
    fn all_messages_in_order() {
        assert_eq!(all_messages(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(all_messages(5, 2).len(), 25);
    }

    #[test]
    fn lfrs_region_matches_radius() {
        let p = gen_params(Family::Lfrs, 2, 6, 4, 2, 2, 7).unwrap();
        let region = p.region();
        assert!(region.contains(&(5, 0)));
        assert!(!region.contains(&(6, 0)));
        assert!(region.contains(&(1, 2)));
        assert!(!region.contains(&(0, 3)));
    }
}
