//! Möbius and Liouville sequences, ζ partial sums, and typicality statistics
//! of coefficient sequences.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::montecarlo::{denjoy_statistic, CoefficientSequence, Origin};

/// Largest sieve length.
pub const SIEVE_CAP: usize = 100_000_000;
/// Default exponent offset of the scaled partial-sum curve.
pub const DEFAULT_GROWTH_EPS: f64 = 0.05;

fn check_len(n: usize) -> Result<()> {
    if n == 0 {
        return domain("sieve length must be at least 1");
    }
    if n > SIEVE_CAP {
        return Err(Error::Capacity {
            what: "sieve length",
            required: n as f64,
            cap: SIEVE_CAP as f64,
        });
    }
    Ok(())
}

// Linear sieve for a completely signed function with f(prime) = -1.
// `on_multiple(f(i), p | i)` gives f(i·p) for the smallest prime p of i·p.
fn linear_sieve(n: usize, on_multiple: impl Fn(i8, bool) -> i8) -> Vec<i8> {
    let mut f = vec![0i8; n + 1];
    let mut composite = vec![false; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    f[1] = 1;
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u32);
            f[i] = -1;
        }
        for &p in &primes {
            let p = p as usize;
            let m = i * p;
            if m > n {
                break;
            }
            composite[m] = true;
            if i % p == 0 {
                f[m] = on_multiple(f[i], true);
                break;
            }
            f[m] = on_multiple(f[i], false);
        }
    }
    f.remove(0);
    f
}

/// `μ(1), …, μ(n)`.
pub fn mobius_sieve(n: usize) -> Result<CoefficientSequence> {
    check_len(n)?;
    let mu = linear_sieve(n, |fi, divides| if divides { 0 } else { -fi });
    Ok(CoefficientSequence::from_trusted(mu, Origin::Mobius))
}

/// `λ(1), …, λ(n)`.
pub fn liouville_sieve(n: usize) -> Result<CoefficientSequence> {
    check_len(n)?;
    let lambda = linear_sieve(n, |fi, _| -fi);
    Ok(CoefficientSequence::from_trusted(lambda, Origin::Liouville))
}

/// `Σ_{k≤n} k^{-s}`, summed from the small end.
pub fn zeta_partial(s: f64, n: usize) -> Result<f64> {
    if !(s > 1.0) {
        return domain(format!("s = {s} must exceed 1"));
    }
    Ok((1..=n).rev().map(|k| (k as f64).powf(-s)).sum())
}

/// `Σ_{k≤N} r(k) k^{-s}`, summed from the small end.
pub fn dirichlet_partial(coeffs: &CoefficientSequence, s: f64) -> f64 {
    coeffs
        .values()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &r)| r != 0)
        .map(|(i, &r)| r as f64 * ((i + 1) as f64).powf(-s))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypicalityReport {
    pub n: usize,
    /// `(1/N) Σ r(n)`
    pub mean_coeff: f64,
    /// `(1/N) #{n : r(n) ≠ 0}`
    pub nonzero_freq: f64,
    pub p_ref: f64,
    /// `nonzero_freq - p_ref`
    pub freq_deviation: f64,
    /// `Σ r(n)/n^s`
    pub partial_sum_at_s: f64,
    pub s: f64,
    pub eps: f64,
    /// `(N, N^{-1/2-eps} |Σ_{n≤N} r(n)|)` on logarithmic checkpoints
    pub growth_curve: Vec<(usize, f64)>,
}

/// Typicality statistics with the default growth exponent offset.
pub fn typicality_report(
    coeffs: &CoefficientSequence,
    s: f64,
    p_ref: f64,
) -> Result<TypicalityReport> {
    typicality_report_with_eps(coeffs, s, p_ref, DEFAULT_GROWTH_EPS)
}

pub fn typicality_report_with_eps(
    coeffs: &CoefficientSequence,
    s: f64,
    p_ref: f64,
    eps: f64,
) -> Result<TypicalityReport> {
    if coeffs.is_empty() {
        return domain("coefficient sequence is empty");
    }
    if !(s > 0.5) {
        return domain(format!("s = {s} must exceed 1/2"));
    }
    let n = coeffs.len();
    let sum: i64 = coeffs.values().iter().map(|&v| v as i64).sum();
    let nonzero = coeffs.values().iter().filter(|&&v| v != 0).count();
    let nonzero_freq = nonzero as f64 / n as f64;
    Ok(TypicalityReport {
        n,
        mean_coeff: sum as f64 / n as f64,
        nonzero_freq,
        p_ref,
        freq_deviation: nonzero_freq - p_ref,
        partial_sum_at_s: dirichlet_partial(coeffs, s),
        s,
        eps,
        growth_curve: denjoy_statistic(coeffs, eps)?,
    })
}
