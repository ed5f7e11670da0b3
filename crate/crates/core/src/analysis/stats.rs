//! Two-sample comparison of small integer-valued outcomes (max loads).

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Homogeneity {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    /// Value ranges after pooling, as inclusive `(low, high)` pairs.
    pub cells: Vec<(u32, u32)>,
}

/// Chi-square test that two samples come from the same distribution on the
/// integers. Adjacent values are pooled until every cell has an expected
/// count of at least 5 in both samples.
pub fn chi_square_homogeneity(a: &[u32], b: &[u32]) -> Result<Homogeneity> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("both samples must be non-empty".into()));
    }
    let hi = *a.iter().chain(b).max().unwrap();
    let lo = *a.iter().chain(b).min().unwrap();
    let width = (hi - lo + 1) as usize;
    let mut ca = vec![0u64; width];
    let mut cb = vec![0u64; width];
    a.iter().for_each(|&x| ca[(x - lo) as usize] += 1);
    b.iter().for_each(|&x| cb[(x - lo) as usize] += 1);

    let (na, nb) = (a.len() as f64, b.len() as f64);
    let total = na + nb;
    let min_expected = |ra: u64, rb: u64| {
        let row = (ra + rb) as f64;
        (row * na / total).min(row * nb / total)
    };

    // greedy left-to-right pooling, then fold an undersized tail into its
    // left neighbour
    let mut cells: Vec<(u32, u32, u64, u64)> = Vec::new();
    let mut open: Option<(u32, u32, u64, u64)> = None;
    for i in 0..width {
        let v = lo + i as u32;
        let c = match open.take() {
            Some((s, _, xa, xb)) => (s, v, xa + ca[i], xb + cb[i]),
            None => (v, v, ca[i], cb[i]),
        };
        if min_expected(c.2, c.3) >= 5.0 {
            cells.push(c);
        } else {
            open = Some(c);
        }
    }
    if let Some(rest) = open {
        match cells.last_mut() {
            Some(last) => *last = (last.0, rest.1, last.2 + rest.2, last.3 + rest.3),
            None => cells.push(rest),
        }
    }

    let df = cells.len().saturating_sub(1);
    if df == 0 {
        return Ok(Homogeneity {
            statistic: 0.0,
            df: 0,
            p_value: 1.0,
            cells: cells.iter().map(|c| (c.0, c.1)).collect(),
        });
    }
    let mut stat = 0.0;
    for &(_, _, xa, xb) in &cells {
        let row = (xa + xb) as f64;
        for (obs, n) in [(xa, na), (xb, nb)] {
            let e = row * n / total;
            stat += (obs as f64 - e).powi(2) / e;
        }
    }
    let dist = ChiSquared::new(df as f64).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(Homogeneity {
        statistic: stat,
        df,
        p_value: dist.sf(stat),
        cells: cells.iter().map(|c| (c.0, c.1)).collect(),
    })
}
