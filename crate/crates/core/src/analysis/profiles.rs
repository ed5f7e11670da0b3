//! Load profiles recomputed from a raw placement trace.

use serde::Serialize;

use crate::{Error, Result};

/// `nu[i]` = bins with load at least `i`; `mu[i]` = balls with height at
/// least `i`. Both run from `i = 0` to `max_load + 1`, where they are zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Profiles {
    pub loads: Vec<u32>,
    pub nu: Vec<u64>,
    pub mu: Vec<u64>,
}

/// Replays `trace` (the bin of each ball, in order) into `n` empty bins.
pub fn profiles(trace: &[usize], n: usize) -> Result<Profiles> {
    let mut loads = vec![0u32; n];
    let mut heights = Vec::with_capacity(trace.len());
    for (t, &bin) in trace.iter().enumerate() {
        let slot = loads.get_mut(bin).ok_or_else(|| {
            Error::InvalidArgument(format!("ball {t} placed in bin {bin}, only {n} bins"))
        })?;
        *slot += 1;
        heights.push(*slot);
    }
    let max = loads.iter().copied().max().unwrap_or(0) as usize;
    let mut bins_at = vec![0u64; max + 2];
    for &l in &loads {
        bins_at[l as usize] += 1;
    }
    let mut balls_at = vec![0u64; max + 2];
    for &h in &heights {
        balls_at[h as usize] += 1;
    }
    // suffix sums turn exact counts into "at least" counts; every ball has
    // height >= 1, so mu[0] = mu[1] = number of balls
    let suffix = |v: &mut Vec<u64>| {
        for i in (0..v.len() - 1).rev() {
            v[i] += v[i + 1];
        }
    };
    suffix(&mut bins_at);
    suffix(&mut balls_at);
    Ok(Profiles {
        loads,
        nu: bins_at,
        mu: balls_at,
    })
}
