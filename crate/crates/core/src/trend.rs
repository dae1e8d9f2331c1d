//! Trend constants `A_s`, `B_{p;s}`, `C_{p;s}` and the Lévy trend factor
//! `exp(-C |t|^{1/s})`.
//!
//! `C_{p;s} = -(1/s) ∫_0^∞ ln|1 - p + p cos ξ| ξ^{-1-1/s} dξ` is computed by
//! three independent routes: the alternating binomial series (`p < 1/2`),
//! direct quadrature (all `p`), and the `s = 1` closed form.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::product::{eval_log_cl, near_zero, ProductParams};
use crate::quad;

/// How a [`TrendConstants`] value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Series,
    Quadrature,
    ClosedFormS1,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::Quadrature => "quadrature",
            Method::ClosedFormS1 => "closed_form_s1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendConstants {
    pub params: ProductParams,
    pub a_s: f64,
    /// Only available for `p < 1/2`.
    pub b_ps: Option<f64>,
    pub c_ps: f64,
    pub method: Method,
    pub k_fit: Option<f64>,
}

/// `A_s = Γ(1 - 1/s) cos(π/(2s))`, continuous through `s = 1` where it equals `π/2`.
pub fn a_s(s: f64) -> Result<f64> {
    if !(s > 0.5) {
        return domain(format!("s = {s} must exceed 1/2"));
    }
    if s.is_infinite() {
        return Ok(1.0);
    }
    // With ε = 1 - 1/s: Γ(ε) sin(πε/2) = Γ(1+ε) sin(πε/2)/ε.
    let eps = 1.0 - 1.0 / s;
    let x = 0.5 * PI * eps;
    let sinc = if x.abs() < 1e-4 {
        1.0 - x * x / 6.0 + x.powi(4) / 120.0
    } else {
        x.sin() / x
    };
    Ok(statrs::function::gamma::gamma(1.0 + eps) * 0.5 * PI * sinc)
}

/// Maximum number of series terms used by [`b_ps`].
pub const SERIES_TERM_CAP: usize = 20_000;

/// `B_{p;s}` from its alternating binomial series, `0 < p < 1/2`.
pub fn b_ps(p: f64, s: f64, tol: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return domain(format!("series for B needs 0 < p < 1/2, got p = {p}"));
    }
    if !(s > 0.5) {
        return domain(format!("s = {s} must exceed 1/2"));
    }
    if !(tol > 0.0) {
        return domain(format!("tolerance {tol} must be positive"));
    }
    let r = p / (1.0 - p);
    let inv_s = 1.0 / s;
    // row[k] = binom(n, k) / 2^n
    let mut row: Vec<f64> = vec![1.0];
    let mut rpow = r;
    let mut sum = 0.0;
    let mut small_run = 0;
    for n in 0..SERIES_TERM_CAP {
        let kmax = n.saturating_sub(1).div_ceil(2).min(n);
        let nf = n as f64;
        let mut inner = 0.0;
        for (k, &b) in row.iter().enumerate().take(kmax + 1) {
            let kf = k as f64;
            inner += b * (1.0 + nf - 2.0 * kf).powf(inv_s) / (1.0 + nf - kf);
        }
        let term = rpow * inner;
        sum += if n % 2 == 0 { term } else { -term };
        if term.abs() < 0.25 * tol {
            small_run += 1;
            if small_run == 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
        rpow *= r;
        row.push(0.0);
        for k in (1..row.len()).rev() {
            row[k] = 0.5 * (row[k] + row[k - 1]);
        }
        row[0] *= 0.5;
    }
    Err(Error::Capacity {
        what: "B series terms",
        required: SERIES_TERM_CAP as f64 + 1.0,
        cap: SERIES_TERM_CAP as f64,
    })
}

/// `C_{p;1} = (π/2)(1 - √(1-2p))` for `0 < p < 1/2`.
pub fn c_p1_closed(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return domain(format!("closed form needs 0 < p < 1/2, got p = {p}"));
    }
    // 1 - √(1-2p) = 2p / (1 + √(1-2p)) avoids cancellation for small p.
    Ok(0.5 * PI * 2.0 * p / (1.0 + (1.0 - 2.0 * p).sqrt()))
}

/// Width of the analytic head `[0, δ0]` of the trend integral.
const HEAD: f64 = 1e-3;
/// Bound on `sup |H3|`, the third zero-mean periodic antiderivative of
/// `ln|1-p+p cos ξ| - mean`, over `p ∈ (0, 1]` (numerically about 1.99).
const H3_BOUND: f64 = 2.17;
/// Panel cap for the body of the trend integral.
const QUAD_PANEL_CAP: usize = 4_000_000;

/// Period mean of `ln|1 - p + p cos ξ|`.
fn log_mean(p: f64) -> f64 {
    if p < 0.5 {
        ((1.0 - p + (1.0 - 2.0 * p).sqrt()) / 2.0).ln()
    } else {
        (p / 2.0).ln()
    }
}

struct Singularity {
    centre: f64,
    half_width: f64,
    // ln|factor| ≈ ln κ + m ln|ξ - centre| on the collar
    ln_kappa: f64,
    order: f64,
}

/// `C_{p;s}` by direct quadrature of its defining integral, absolute accuracy `tol`.
pub fn c_ps_quadrature(p: f64, s: f64, tol: f64) -> Result<f64> {
    let params = ProductParams::new(p, s)?;
    if !(tol > 0.0) {
        return domain(format!("tolerance {tol} must be positive"));
    }
    let alpha = 1.0 + 1.0 / s;
    // Absolute budget on the integral itself (C = -I/s).
    let budget = s * tol;
    let w = |x: f64| x.powf(-alpha);
    // For p ≥ 1/2 factor as p(cos ξ - cos φ) = -2p sin((ξ+φ)/2) sin((ξ-φ)/2),
    // cos φ = -(1-p)/p, which keeps full relative accuracy next to the roots.
    let phi = (-(1.0 - p) / p).clamp(-1.0, 1.0).acos();
    let ln_2p = (2.0 * p).ln();
    let g = |x: f64| {
        if p < 0.5 {
            params.log_factor(x).0
        } else {
            let v = ln_2p + (0.5 * (x + phi)).sin().abs().ln() + (0.5 * (x - phi)).sin().abs().ln();
            // a node landing exactly on a root carries no mass
            if v.is_finite() {
                v
            } else {
                0.0
            }
        }
    };

    // Head: Maclaurin series of the log factor through x⁶.
    let c2 = -0.5 * p;
    let c4 = p / 24.0 - p * p / 8.0;
    let c6 = -p / 720.0 + p * p / 48.0 - p * p * p / 24.0;
    let head = c2 * HEAD.powf(3.0 - alpha) / (3.0 - alpha)
        + c4 * HEAD.powf(5.0 - alpha) / (5.0 - alpha)
        + c6 * HEAD.powf(7.0 - alpha) / (7.0 - alpha);

    // Upper cut Ξ = 2πJ with tail remainder ≤ budget / 4.
    let xi_min = (4.0 * H3_BOUND * alpha * (alpha + 1.0) / budget).powf(1.0 / (alpha + 2.0));
    let periods = (xi_min / (2.0 * PI)).ceil().max(1.0);
    if periods > 1e6 {
        return Err(Error::Capacity {
            what: "trend integral periods",
            required: periods,
            cap: 1e6,
        });
    }
    let periods = periods as usize;
    let xi = 2.0 * PI * periods as f64;

    let gbar = log_mean(p);
    let h2_zero = {
        // H2(0) = -(1/4π) ∫_0^{2π} z² (g - ḡ) dz
        let mut pts = vec![0.0, PI, 2.0 * PI];
        if let Some(theta) = params.zero_angle() {
            pts.extend([PI - theta, PI + theta]);
        }
        pts.sort_by(f64::total_cmp);
        // Enters the tail as α H2(0) Ξ^{-α-1}, so modest accuracy suffices.
        let est = quad::integrate(|z| z * z * (g(z) - gbar), &pts, 1e-9, 200_000)?;
        -est.value / (4.0 * PI)
    };
    let tail = gbar * s * xi.powf(-1.0 / s) - alpha * h2_zero * xi.powf(-alpha - 1.0);

    // Body on [δ0, Ξ].
    let mut collars = Vec::new();
    if let Some(theta) = params.zero_angle() {
        for j in 0..periods {
            let c = (2 * j + 1) as f64 * PI;
            if theta < 1e-8 {
                collars.push(Singularity {
                    centre: c,
                    half_width: 1e-6,
                    ln_kappa: (0.5 * p).ln(),
                    order: 2.0,
                });
            } else {
                let half_width = (theta / 100.0).min(1e-6);
                let ln_kappa = (p * theta.sin()).ln();
                for centre in [c - theta, c + theta] {
                    collars.push(Singularity {
                        centre,
                        half_width,
                        ln_kappa,
                        order: 1.0,
                    });
                }
            }
        }
    }
    let mut points = vec![HEAD];
    for k in 1..=2 * periods {
        points.push(k as f64 * PI);
    }
    for c in &collars {
        points.push(c.centre - c.half_width);
        points.push(c.centre + c.half_width);
    }
    points.sort_by(f64::total_cmp);
    // Drop the collar interiors from the numerical part.
    let mut pieces: Vec<(f64, f64)> = points.windows(2).map(|w| (w[0], w[1])).collect();
    pieces.retain(|&(a, b)| {
        !collars
            .iter()
            .any(|c| a >= c.centre - c.half_width && b <= c.centre + c.half_width)
    });
    let body = integrate_pieces(&|x| g(x) * w(x), &pieces, 0.5 * budget)?;
    let collar_sum: f64 = collars
        .iter()
        .map(|c| {
            let d = c.half_width;
            w(c.centre) * 2.0 * d * (c.ln_kappa + c.order * (d.ln() - 1.0))
        })
        .sum();

    let total = head + body + collar_sum + tail;
    Ok(-total / s)
}

// Integrates over disjoint pieces with one adaptive run per contiguous chain.
fn integrate_pieces<F: Fn(f64) -> f64>(f: &F, pieces: &[(f64, f64)], tol: f64) -> Result<f64> {
    let mut chains: Vec<Vec<f64>> = Vec::new();
    for &(a, b) in pieces {
        match chains.last_mut() {
            Some(chain) if *chain.last().unwrap() == a => chain.push(b),
            _ => chains.push(vec![a, b]),
        }
    }
    let n_intervals: usize = pieces.len().max(1);
    let mut total = 0.0;
    let mut used = 0usize;
    for chain in &chains {
        let share = tol * (chain.len() - 1) as f64 / n_intervals as f64;
        let est = quad::integrate(f, chain, share, QUAD_PANEL_CAP.saturating_sub(used))?;
        used += est.panels;
        total += est.value;
    }
    Ok(total)
}

/// Trend constants of `Cl_{p;s}` by the requested route.
pub fn trend_constants(params: &ProductParams, method: Method, tol: f64) -> Result<TrendConstants> {
    let (p, s) = (params.p(), params.s());
    let a = a_s(s)?;
    let (b, c) = match method {
        Method::Series => {
            let b = b_ps(p, s, tol / a.max(1.0))?;
            (Some(b), a * b)
        }
        Method::Quadrature => (None, c_ps_quadrature(p, s, tol)?),
        Method::ClosedFormS1 => {
            if s != 1.0 {
                return domain(format!("closed form needs s = 1, got s = {s}"));
            }
            let c = c_p1_closed(p)?;
            (Some(c / a), c)
        }
    };
    Ok(TrendConstants {
        params: *params,
        a_s: a,
        b_ps: b,
        c_ps: c,
        method,
        k_fit: None,
    })
}

/// Picks the closed form at `s = 1`, else the series for `p < 1/2`, else quadrature.
pub fn best_trend_constants(params: &ProductParams, tol: f64) -> Result<TrendConstants> {
    let method = if params.p() < 0.5 && params.s() == 1.0 {
        Method::ClosedFormS1
    } else if params.p() < 0.45 {
        Method::Series
    } else {
        Method::Quadrature
    };
    trend_constants(params, method, tol)
}

/// `exp(-c |t|^{1/s})`.
pub fn trend_factor(c: f64, s: f64, t: f64) -> f64 {
    (-c * t.abs().powf(1.0 / s)).exp()
}

/// Smallest `K ≥ 0` with `ln|F| ≤ K |t|^{1/(s+1)}` over the given `(t, ln|F|)` pairs.
pub fn fit_k_points(s: f64, points: &[(f64, f64)]) -> f64 {
    let e = 1.0 / (s + 1.0);
    points
        .iter()
        .filter(|(t, _)| *t != 0.0)
        .map(|(t, lf)| lf / t.abs().powf(e))
        .fold(0.0, f64::max)
}

/// Empirical fluctuation bound `K` for `F = Cl(t) exp(C|t|^{1/s})` over `t_grid`.
pub fn fit_k(params: &ProductParams, trend: &TrendConstants, t_grid: &[f64]) -> Result<f64> {
    if t_grid.is_empty() {
        return domain("t grid is empty");
    }
    let s = params.s();
    let mut points = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if let Some(z) = near_zero(params, t) {
            return Err(Error::Singular { t, nearest_zero: z });
        }
        let lf = eval_log_cl(params, t, 1e-10)? + trend.c_ps * t.abs().powf(1.0 / s);
        points.push((t, lf));
    }
    Ok(fit_k_points(s, &points))
}

/// Both sides of `Σ_{k=0}^{⌈(n-1)/2⌉} C(n,k)(1+n-2k)/(1+n-k) = C(n, ⌊n/2⌋)`, exactly.
pub fn binom_midpoint_identity(n: u32) -> (BigRational, BigRational) {
    let binom = |n: u32, k: u32| -> BigInt {
        let mut b = BigInt::one();
        for i in 0..k {
            b = b * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        b
    };
    let kmax = n.saturating_sub(1).div_ceil(2).min(n);
    let mut lhs = BigRational::zero();
    for k in 0..=kmax {
        lhs += BigRational::new(
            binom(n, k) * BigInt::from(1 + n - 2 * k),
            BigInt::from(1 + n - k),
        );
    }
    (lhs, BigRational::from_integer(binom(n, n / 2)))
}
