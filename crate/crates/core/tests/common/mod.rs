//! Oracles that avoid the library's own linear algebra.

#![allow(dead_code)]

use subspace_codes::Subspace;

/// Rank over `F_p` by plain Gaussian elimination.
pub fn rank_mod_p(rows: &[Vec<u32>], p: u32) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect();
    let p = p as u64;
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_multiple_of(p)) else { continue };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][col], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col];
                #[allow(clippy::needless_range_loop)]
                for c in 0..ncols {
                    m[r][c] = (m[r][c] + p * p - f * m[rank][c] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// `dim(V ∩ T) = dim V + dim T − dim(V + T)`.
pub fn meet_dim(v: &Subspace, t: &Subspace) -> usize {
    let p = v.q();
    let dv = rank_mod_p(v.basis(), p);
    let dt = rank_mod_p(t.basis(), p);
    let both: Vec<Vec<u32>> = v.basis().iter().chain(t.basis()).cloned().collect();
    dv + dt - rank_mod_p(&both, p)
}

/// `T` is reachable from `V` with at most `ins` insertions and `del` deletions.
pub fn within_oracle(v: &Subspace, t: &Subspace, ins: usize, del: usize) -> bool {
    let meet = meet_dim(v, t);
    t.dim() - meet <= ins && v.dim() - meet <= del
}

/// All messages of length `k` over `F_q`, lexicographic.
pub fn messages(q: u32, k: usize) -> Vec<Vec<u32>> {
    (0..(q as usize).pow(k as u32))
        .map(|mut idx| {
            let mut digits = vec![0u32; k];
            for d in digits.iter_mut().rev() {
                *d = (idx % q as usize) as u32;
                idx /= q as usize;
            }
            digits
        })
        .collect()
}
