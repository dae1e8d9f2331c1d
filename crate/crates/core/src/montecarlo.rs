//! Random coefficient sequences `R_p(n) ∈ {-1, 0, 1}`, their walks
//! `Σ_{n≤N} R_p(n)/n^s`, ensembles of walk endpoints, and sign-sequence
//! diagnostics (iterated-logarithm counts, scaled partial sums).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::lattice::{step_size, LatticeDistribution};
use crate::product::ProductParams;

/// Largest ensemble `run_ensemble` will allocate.
pub const MAX_WALKS: usize = 200_000_000;
/// Walks per parallel work item.
const BATCH: usize = 4096;

/// Where a coefficient sequence came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Sampled { p: f64, seed: u64 },
    Mobius,
    Liouville,
    AllOnes,
    Explicit,
}

/// A sequence `r(1), r(2), …` over `{-1, 0, 1}`; `values[k]` holds `r(k+1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientSequence {
    values: Vec<i8>,
    origin: Origin,
}

impl CoefficientSequence {
    /// Wraps values already known to lie in `{-1, 0, 1}`.
    pub(crate) fn from_trusted(values: Vec<i8>, origin: Origin) -> Self {
        debug_assert!(values.iter().all(|v| (-1..=1).contains(v)));
        CoefficientSequence { values, origin }
    }

    pub fn from_values(values: Vec<i8>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !(-1..=1).contains(*v)) {
            return domain(format!("coefficient {bad} is not in {{-1, 0, 1}}"));
        }
        Ok(CoefficientSequence {
            values,
            origin: Origin::Explicit,
        })
    }

    pub fn all_ones(n: usize) -> Self {
        CoefficientSequence {
            values: vec![1; n],
            origin: Origin::AllOnes,
        }
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `r(n)` for `1 ≤ n ≤ len`.
    pub fn get(&self, n: usize) -> Option<i8> {
        n.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }
}

/// Generator for walk number `stream` under `seed`.
fn walk_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[inline]
fn draw(rng: &mut ChaCha8Rng, half_p: f64, p: f64) -> i8 {
    let u: f64 = rng.random();
    if u < half_p {
        -1
    } else if u < p {
        1
    } else {
        0
    }
}

/// `n` i.i.d. coefficients with `P(±1) = p/2`, `P(0) = 1 - p`.
///
/// Uses the same generator stream as walk 0 of [`run_ensemble`] with the same seed.
pub fn sample_coefficients(p: f64, n: usize, seed: u64) -> Result<CoefficientSequence> {
    if !(p > 0.0 && p <= 1.0) {
        return domain(format!("p = {p} is outside (0, 1]"));
    }
    if n == 0 {
        return domain("sequence length must be at least 1");
    }
    let mut rng = walk_rng(seed, 0);
    let values = (0..n).map(|_| draw(&mut rng, 0.5 * p, p)).collect();
    Ok(CoefficientSequence {
        values,
        origin: Origin::Sampled { p, seed },
    })
}

/// Partial sums `Σ_{n≤k} r(n)/n^s` for `k = 1..=len`.
pub fn walk_trajectory(coeffs: &CoefficientSequence, s: f64) -> Result<Vec<f64>> {
    if !(s > 0.5) {
        return domain(format!("s = {s} must exceed 1/2"));
    }
    let mut x = 0.0;
    Ok(coeffs
        .values
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            x += r as f64 * step_size(i + 1, s);
            x
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkEnsemble {
    pub endpoints: Vec<f64>,
    pub n_steps: usize,
    pub n_walks: usize,
    pub params: ProductParams,
    pub seed: u64,
}

impl WalkEnsemble {
    /// Sample mean and (unbiased) variance, summed in walk order.
    pub fn moments(&self) -> (f64, f64) {
        let n = self.endpoints.len() as f64;
        let mean = self.endpoints.iter().sum::<f64>() / n;
        let ss: f64 = self.endpoints.iter().map(|x| (x - mean).powi(2)).sum();
        (mean, if n > 1.0 { ss / (n - 1.0) } else { 0.0 })
    }
}

/// Endpoints of `n_walks` independent `n_steps`-step walks. Walk `w` draws
/// from its own generator stream keyed by `(seed, w)`, so the result does not
/// depend on the number of worker threads.
pub fn run_ensemble(
    params: &ProductParams,
    n_steps: usize,
    n_walks: usize,
    seed: u64,
) -> Result<WalkEnsemble> {
    if n_walks == 0 {
        return domain("n_walks must be at least 1");
    }
    if n_walks > MAX_WALKS {
        return Err(Error::Capacity {
            what: "ensemble walks",
            required: n_walks as f64,
            cap: MAX_WALKS as f64,
        });
    }
    let steps: Vec<f64> = (1..=n_steps).map(|n| step_size(n, params.s())).collect();
    let p = params.p();
    let half_p = 0.5 * p;
    let mut endpoints = vec![0.0; n_walks];
    endpoints
        .par_chunks_mut(BATCH)
        .enumerate()
        .for_each(|(b, chunk)| {
            for (i, out) in chunk.iter_mut().enumerate() {
                let mut rng = walk_rng(seed, (b * BATCH + i) as u64);
                let mut x = 0.0;
                for &a in &steps {
                    x += draw(&mut rng, half_p, p) as f64 * a;
                }
                *out = x;
            }
        });
    Ok(WalkEnsemble {
        endpoints,
        n_steps,
        n_walks,
        params: *params,
        seed,
    })
}

/// Counts per bin of width `bin_width` centred on multiples of `bin_width`;
/// only non-empty bins are listed, in increasing order.
pub fn histogram(ensemble: &WalkEnsemble, bin_width: f64) -> Result<Vec<(f64, u64)>> {
    histogram_of(&ensemble.endpoints, bin_width)
}

/// [`histogram`] for a bare list of values.
pub fn histogram_of(values: &[f64], bin_width: f64) -> Result<Vec<(f64, u64)>> {
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return domain(format!("bin width {bin_width} must be positive"));
    }
    let mut bins: BTreeMap<i64, u64> = BTreeMap::new();
    for &x in values {
        *bins.entry((x / bin_width).round() as i64).or_default() += 1;
    }
    Ok(bins
        .into_iter()
        .map(|(k, c)| (k as f64 * bin_width, c))
        .collect())
}

/// Outcome of the iterated-logarithm scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LilCounts {
    /// `N` with `|S_N| > (1 - eps) √(2N ln ln N)`.
    pub exceed_lower: u64,
    /// `N` with `|S_N| > (1 + eps) √(2N ln ln N)`.
    pub exceed_upper: u64,
    /// Number of scanned `N` (all `10 ≤ N ≤ len`).
    pub admissible: u64,
}

/// First partial-sum index included in the iterated-logarithm scan.
pub const LIL_FIRST_N: usize = 10;

/// Scans the partial sums of a `±1` sequence against `(1 ∓ eps) √(2N ln ln N)`.
pub fn lil_statistic(signs: &[i8], eps: f64) -> Result<LilCounts> {
    if signs.len() < LIL_FIRST_N {
        return domain(format!(
            "need at least {LIL_FIRST_N} signs, got {}",
            signs.len()
        ));
    }
    if !(eps > 0.0) {
        return domain(format!("eps = {eps} must be positive"));
    }
    if let Some(bad) = signs.iter().find(|v| v.abs() != 1) {
        return domain(format!("sign {bad} is not ±1"));
    }
    let mut sum: i64 = 0;
    let mut counts = LilCounts {
        exceed_lower: 0,
        exceed_upper: 0,
        admissible: 0,
    };
    for (i, &r) in signs.iter().enumerate() {
        sum += r as i64;
        let n = i + 1;
        if n < LIL_FIRST_N {
            continue;
        }
        let nf = n as f64;
        let scale = (2.0 * nf * nf.ln().ln()).sqrt();
        let a = sum.unsigned_abs() as f64;
        counts.admissible += 1;
        counts.exceed_lower += (a > (1.0 - eps) * scale) as u64;
        counts.exceed_upper += (a > (1.0 + eps) * scale) as u64;
    }
    Ok(counts)
}

/// Logarithmic checkpoints `⌊10^{k/8}⌋ ≤ len`, de-duplicated, always ending at `len`.
pub fn log_grid(len: usize) -> Vec<usize> {
    let mut grid = Vec::new();
    for k in 0.. {
        let n = (10f64.powf(k as f64 / 8.0) + 1e-9).floor() as usize;
        if n > len {
            break;
        }
        if grid.last() != Some(&n) {
            grid.push(n);
        }
    }
    if grid.last() != Some(&len) && len > 0 {
        grid.push(len);
    }
    grid
}

/// `(N, N^{-1/2-eps} |Σ_{n≤N} r(n)|)` on [`log_grid`].
pub fn denjoy_statistic(coeffs: &CoefficientSequence, eps: f64) -> Result<Vec<(usize, f64)>> {
    if !(eps > 0.0) {
        return domain(format!("eps = {eps} must be positive"));
    }
    let grid = log_grid(coeffs.len());
    let mut out = Vec::with_capacity(grid.len());
    let mut sum: i64 = 0;
    let mut next = 0;
    for (i, &r) in coeffs.values.iter().enumerate() {
        sum += r as i64;
        let n = i + 1;
        if next < grid.len() && grid[next] == n {
            out.push((n, (n as f64).powf(-0.5 - eps) * sum.unsigned_abs() as f64));
            next += 1;
        }
    }
    Ok(out)
}

/// Total-variation distance between the empirical law of `endpoints` and a
/// lattice law. Endpoints farther than `match_tol` from every atom count as
/// mass outside the lattice.
pub fn tv_to_lattice(endpoints: &[f64], dist: &LatticeDistribution, match_tol: f64) -> f64 {
    let n = endpoints.len() as f64;
    let mut counts = vec![0u64; dist.atoms.len()];
    let mut stray = 0u64;
    for &x in endpoints {
        match dist.find(x, match_tol) {
            Some(k) => counts[k] += 1,
            None => stray += 1,
        }
    }
    let diff: f64 = counts
        .iter()
        .zip(&dist.atoms)
        .map(|(&c, a)| (c as f64 / n - a.prob).abs())
        .sum();
    0.5 * (diff + stray as f64 / n)
}

/// Total-variation distance after grouping both laws into bins of width
/// `bin_width` centred on its multiples.
pub fn binned_tv_to_lattice(endpoints: &[f64], dist: &LatticeDistribution, bin_width: f64) -> f64 {
    let n = endpoints.len() as f64;
    let mut bins: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
    for &x in endpoints {
        bins.entry((x / bin_width).round() as i64).or_default().0 += 1.0 / n;
    }
    for a in &dist.atoms {
        bins.entry((a.omega / bin_width).round() as i64)
            .or_default()
            .1 += a.prob;
    }
    0.5 * bins.values().map(|(e, q)| (e - q).abs()).sum::<f64>()
}

/// Expected total-variation distance between a lattice law and the empirical
/// law of `n` independent draws from it (exact binomial mean absolute deviations).
pub fn expected_sampling_tv(dist: &LatticeDistribution, n: u64) -> f64 {
    use statrs::function::factorial::ln_binomial;
    let nf = n as f64;
    let mad_sum: f64 = dist
        .atoms
        .iter()
        .map(|a| {
            let q = a.prob;
            if q <= 0.0 || q >= 1.0 {
                return 0.0;
            }
            // E|X - nq| = 2ν C(n,ν) q^ν (1-q)^{n-ν+1}, ν = ⌊nq⌋ + 1
            let nu = (nf * q).floor() as u64 + 1;
            if nu > n {
                return 0.0;
            }
            let ln = ln_binomial(n, nu) + nu as f64 * q.ln() + (n - nu + 1) as f64 * (-q).ln_1p();
            2.0 * nu as f64 * ln.exp()
        })
        .sum();
    0.5 * mad_sum / nf
}
