//! Densities recovered from even characteristic functions by cosine-transform
//! inversion, the closed-form trend laws (Lévy 1/2-stable and Cauchy), and
//! Fresnel integrals.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::lattice::LatticeDistribution;
use crate::product::{eval_cl, near_zero, signed_log_with_plan, ProductParams, TruncationPlan};
use crate::quad;
use crate::trend::{best_trend_constants, fit_k_points};

/// Values below this are reported as quadrature noise when clamped.
pub const CLAMP_WARN: f64 = 1e-9;
/// Gauss–Legendre nodes per inversion panel.
pub const PANEL_NODES: usize = 16;
/// Largest number of inversion nodes.
pub const MAX_NODES: usize = 50_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveMeta {
    pub label: String,
    pub params: Option<ProductParams>,
    pub trend_c: Option<f64>,
    pub fluctuation_k: Option<f64>,
    pub t_max: Option<f64>,
    pub panel_width: Option<f64>,
    pub tol: Option<f64>,
}

impl CurveMeta {
    fn labelled(label: &str) -> Self {
        CurveMeta {
            label: label.to_string(),
            params: None,
            trend_c: None,
            fluctuation_k: None,
            t_max: None,
            panel_width: None,
            tol: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Trapezoid integral over the grid.
    pub mass: f64,
    /// Largest magnitude of a negative value that was clamped to zero.
    pub max_clamp: f64,
    /// `max |f(ω) - f(-ω)|` when the grid is symmetric about 0.
    pub symmetry_error: Option<f64>,
    pub meta: CurveMeta,
}

impl DensityCurve {
    fn build(grid: Vec<f64>, mut values: Vec<f64>, meta: CurveMeta) -> Self {
        let mut max_clamp = 0.0f64;
        for v in values.iter_mut() {
            if *v < 0.0 {
                max_clamp = max_clamp.max(-*v);
                *v = 0.0;
            }
        }
        if max_clamp > CLAMP_WARN {
            log::warn!(
                "{}: clamped negative density values down to -{max_clamp:e}",
                meta.label
            );
        }
        let mass = trapezoid(&grid, &values);
        let n = grid.len();
        let symmetric =
            (0..n).all(|i| (grid[i] + grid[n - 1 - i]).abs() <= 1e-12 * grid[i].abs().max(1.0));
        let symmetry_error = symmetric.then(|| {
            (0..n)
                .map(|i| (values[i] - values[n - 1 - i]).abs())
                .fold(0.0, f64::max)
        });
        DensityCurve {
            grid,
            values,
            mass,
            max_clamp,
            symmetry_error,
            meta,
        }
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return domain("grid is empty");
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return domain("grid contains a non-finite value");
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return domain("grid must be strictly increasing");
    }
    Ok(())
}

/// Gauss–Legendre nodes and weights covering `[0, t_max]` with panels of width ≤ `h`.
fn panel_nodes(t_max: f64, h: f64) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let panels = (t_max / h).ceil().max(1.0);
    if panels * PANEL_NODES as f64 > MAX_NODES as f64 {
        return Err(Error::Capacity {
            what: "inversion nodes",
            required: panels * PANEL_NODES as f64,
            cap: MAX_NODES as f64,
        });
    }
    let panels = panels as usize;
    let h = t_max / panels as f64;
    let (x, w) = quad::gauss_legendre(PANEL_NODES);
    let mut nodes = Vec::with_capacity(panels * PANEL_NODES);
    let mut weights = Vec::with_capacity(panels * PANEL_NODES);
    for k in 0..panels {
        let mid = (k as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(mid + 0.5 * h * xi);
            weights.push(0.5 * h * wi);
        }
    }
    Ok((nodes, weights, h))
}

/// Panel width resolving `cos(ωt)` for `|ω| ≤ omega_max` and the unit-frequency factor.
fn panel_width(omega_max: f64) -> f64 {
    (0.5 * PI).min(PI / (omega_max + 1.0))
}

/// `f(ω) = (1/π) ∫_0^{t_max} cos(ωt) φ(t) dt` for an even, real characteristic function `φ`.
pub fn invert_even_cf<F>(cf: F, t_max: f64, grid: &[f64], label: &str) -> Result<DensityCurve>
where
    F: Fn(f64) -> f64 + Sync,
{
    check_grid(grid)?;
    if !(t_max > 0.0 && t_max.is_finite()) {
        return domain(format!("t_max = {t_max} must be positive"));
    }
    let omega_max = grid.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let (nodes, weights, h) = panel_nodes(t_max, panel_width(omega_max))?;
    let phi: Vec<f64> = nodes
        .par_iter()
        .zip(&weights)
        .map(|(&t, &w)| w * cf(t))
        .collect();
    let values = cosine_sums(&nodes, &phi, grid);
    let mut meta = CurveMeta::labelled(label);
    meta.t_max = Some(t_max);
    meta.panel_width = Some(h);
    Ok(DensityCurve::build(grid.to_vec(), values, meta))
}

fn cosine_sums(nodes: &[f64], weighted: &[f64], grid: &[f64]) -> Vec<f64> {
    grid.par_iter()
        .map(|&om| {
            nodes
                .iter()
                .zip(weighted)
                .map(|(&t, &v)| (om * t).cos() * v)
                .sum::<f64>()
                / PI
        })
        .collect()
}

/// Density of the random walk with transform `Cl_{p;s}` on `grid`, to absolute accuracy ≈ `tol`.
///
/// The `t`-range is cut where the envelope `exp(-C t^{1/s} + K t^{1/(s+1)})`,
/// with `K` fitted on a coarse grid, leaves a tail below `tol/10`.
pub fn pdf_from_cf(params: &ProductParams, grid: &[f64], tol: f64) -> Result<DensityCurve> {
    check_grid(grid)?;
    if !(tol > 0.0) {
        return domain(format!("tolerance {tol} must be positive"));
    }
    let s = params.s();
    let trend = best_trend_constants(params, 1e-10)
        .map_err(|e| Error::Dependency(format!("trend constant: {e}")))?;
    let c = trend.c_ps;
    let k = envelope_k(params, c, tol)?;
    let t_max = envelope_cutoff(c, k, s, 0.1 * tol)?;
    let omega_max = grid.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let (nodes, weights, h) = panel_nodes(t_max, panel_width(omega_max))?;
    // ∫_0^T |ΔCl| dt / π ≤ tol/10
    let cl_tol = 0.1 * tol * PI / t_max;
    let phi = nodes
        .par_iter()
        .zip(&weights)
        .map(|(&t, &w)| eval_cl(params, t, cl_tol).map(|v| w * v))
        .collect::<Result<Vec<f64>>>()?;
    let values = cosine_sums(&nodes, &phi, grid);
    let meta = CurveMeta {
        label: "cf_inversion".into(),
        params: Some(*params),
        trend_c: Some(c),
        fluctuation_k: Some(k),
        t_max: Some(t_max),
        panel_width: Some(h),
        tol: Some(tol),
    };
    Ok(DensityCurve::build(grid.to_vec(), values, meta))
}

// Fitted fluctuation constant on log-spaced t up to where the bare trend alone
// has decayed well past the tolerance.
fn envelope_k(params: &ProductParams, c: f64, tol: f64) -> Result<f64> {
    let s = params.s();
    let t_hi = (4.0 * (10.0 / tol).ln() / c).powf(s).max(10.0);
    let mut pts = Vec::new();
    for i in 0..=64 {
        let t = t_hi.powf(i as f64 / 64.0);
        if near_zero(params, t).is_some() {
            continue;
        }
        let plan =
            TruncationPlan::for_tolerance(params, t, 1e-8, crate::product::DEFAULT_FACTOR_CAP)?;
        let sl = signed_log_with_plan(params, t, &plan);
        if sl.sign != 0 {
            pts.push((t, sl.log_abs + c * t.powf(1.0 / s)));
        }
    }
    Ok(fit_k_points(s, &pts))
}

/// `(1/π) ∫_T^∞ exp(-C t^{1/s} + K t^{1/(s+1)}) dt`.
pub fn envelope_tail(c: f64, k: f64, s: f64, t: f64) -> Result<f64> {
    let phi = |x: f64| -c * x.powf(1.0 / s) + k * x.powf(1.0 / (s + 1.0));
    // Integrate in u = t^{1/s}, where the exponent is close to linear.
    let u0 = t.powf(1.0 / s);
    let integrand = |u: f64| s * u.powf(s - 1.0) * phi(u.powf(s)).exp();
    let step = 4.0 / c;
    let mut pts = vec![u0];
    let mut u = u0;
    let top = phi(t).max(phi(u0.max(1.0).powf(s)));
    while pts.len() < 10_000 {
        u += step;
        pts.push(u);
        if phi(u.powf(s)) < top - 80.0 && phi(u.powf(s)) < -80.0 {
            break;
        }
    }
    let scale = integrand(u0).abs().max(f64::MIN_POSITIVE);
    let est = quad::integrate(integrand, &pts, 1e-6 * scale * step, 1_000_000)?;
    Ok(est.value / PI)
}

fn envelope_cutoff(c: f64, k: f64, s: f64, target: f64) -> Result<f64> {
    let mut hi = 1.0;
    while envelope_tail(c, k, s, hi)? > target {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Capacity {
                what: "inversion range",
                required: hi,
                cap: 1e12,
            });
        }
    }
    let mut lo = hi / 2.0;
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if envelope_tail(c, k, s, mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-3 * hi {
            break;
        }
    }
    Ok(hi)
}

/// Masses of `X + σZ` (`Z` standard normal, independent) in the cells
/// `[edges[i], edges[i+1])`, from the even characteristic function `cf` of `X`.
///
/// `freq_bound` bounds the oscillation frequency of `cf` (e.g. the support radius of `X`).
/// Uses `P(a < Y < b) = (1/π) ∫_0^∞ φ_Y(t) (sin bt - sin at)/t dt`.
pub fn bin_masses_from_cf<F>(cf: F, edges: &[f64], freq_bound: f64, sigma: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64 + Sync,
{
    check_grid(edges)?;
    if edges.len() < 2 {
        return domain("need at least two bin edges");
    }
    if !(sigma > 0.0) {
        return domain(format!("smoothing width {sigma} must be positive"));
    }
    // e^{-σ²T²/2} = e^{-40}
    let t_max = (80.0f64).sqrt() / sigma;
    let edge_max = edges.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let (nodes, weights, _) = panel_nodes(t_max, panel_width(freq_bound + edge_max))?;
    let damped: Vec<f64> = nodes
        .par_iter()
        .zip(&weights)
        .map(|(&t, &w)| w * cf(t) * (-0.5 * sigma * sigma * t * t).exp() / t)
        .collect();
    // Cumulative sine transform at each edge, then differences.
    let at_edges: Vec<f64> = edges
        .par_iter()
        .map(|&e| {
            nodes
                .iter()
                .zip(&damped)
                .map(|(&t, &v)| (e * t).sin() * v)
                .sum::<f64>()
                / PI
        })
        .collect();
    Ok(at_edges.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Exact masses of `X + σZ` in the cells `[edges[i], edges[i+1])` for a lattice law `X`.
pub fn smoothed_lattice_masses(dist: &LatticeDistribution, edges: &[f64], sigma: f64) -> Vec<f64> {
    use statrs::function::erf::erfc;
    let cdf = |x: f64| 0.5 * erfc(-x / (sigma * std::f64::consts::SQRT_2));
    edges
        .windows(2)
        .map(|w| {
            dist.atoms
                .iter()
                .map(|a| a.prob * (cdf(w[1] - a.omega) - cdf(w[0] - a.omega)))
                .sum()
        })
        .collect()
}

const FRESNEL_SERIES_MAX: f64 = 1.5;

/// Fresnel integrals `C(u) = ∫_0^u cos(πx²/2) dx`, `S(u) = ∫_0^u sin(πx²/2) dx`.
pub fn fresnel(u: f64) -> Result<(f64, f64)> {
    if !(u >= 0.0) {
        return domain(format!("Fresnel argument {u} must be nonnegative"));
    }
    if u == f64::INFINITY {
        return Ok((0.5, 0.5));
    }
    if u <= FRESNEL_SERIES_MAX {
        return Ok(fresnel_series(u));
    }
    // (1/2 - C) + i(1/2 - S) = (g + i f) e^{iπu²/2}
    let (f, g) = fresnel_aux_cf(u);
    let w = Complex64::new(g, f) * Complex64::from_polar(1.0, 0.5 * PI * u * u);
    Ok((0.5 - w.re, 0.5 - w.im))
}

/// Auxiliary functions `(f(u), g(u))` with `1/2 - C = g cos φ - f sin φ`,
/// `1/2 - S = f cos φ + g sin φ`, `φ = πu²/2`.
pub fn fresnel_aux(u: f64) -> Result<(f64, f64)> {
    if !(u >= 0.0) {
        return domain(format!("Fresnel argument {u} must be nonnegative"));
    }
    if u <= FRESNEL_SERIES_MAX {
        let (c, s) = fresnel_series(u);
        let (sn, cs) = (0.5 * PI * u * u).sin_cos();
        let (a, b) = (0.5 - c, 0.5 - s);
        return Ok((b * cs - a * sn, a * cs + b * sn));
    }
    Ok(fresnel_aux_cf(u))
}

fn fresnel_series(u: f64) -> (f64, f64) {
    // ∫_0^u e^{iπx²/2} dx = Σ_k (iπ/2)^k u^{2k+1} / (k! (2k+1))
    let t = 0.5 * PI * u * u;
    let (mut c, mut s) = (0.0, 0.0);
    let mut a = u;
    for k in 0..200 {
        let term = a / (2 * k + 1) as f64;
        match k % 4 {
            0 => c += term,
            1 => s += term,
            2 => c -= term,
            _ => s -= term,
        }
        if term < 1e-17 * u {
            break;
        }
        a *= t / (k + 1) as f64;
    }
    (c, s)
}

// Modified Lentz evaluation of the complex continued fraction for erfc-type
// Fresnel tails, valid for u > 1.5. Returns (f, g) with g + i f = u·h.
fn fresnel_aux_cf(u: f64) -> (f64, f64) {
    let pix2 = PI * u * u;
    let mut b = Complex64::new(1.0, -pix2);
    let mut cc = Complex64::new(1e300, 0.0);
    let mut d = b.inv();
    let mut h = d;
    let mut n = -1.0;
    for _ in 0..200 {
        n += 2.0;
        let a = -n * (n + 1.0);
        b += 4.0;
        d = (d * a + b).inv();
        cc = b + cc.inv() * a;
        let del = cc * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    let g_if =
        h * Complex64::new(u, 0.0) * Complex64::new(1.0, 1.0) * Complex64::new(1.0, -1.0) * 0.5;
    (g_if.im, g_if.re)
}

/// Unit-mass density of the symmetric 1/2-stable law with transform
/// `exp(-c √|t|)`, via Fresnel auxiliary functions with `u = c/√(2π|ω|)`.
pub fn levy_half_pdf(c: f64, omega: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return domain(format!("scale c = {c} must be positive"));
    }
    if omega == 0.0 {
        return domain("the Fresnel parameterization is singular at omega = 0 (limit is 2/(π c²))");
    }
    if !omega.is_finite() {
        return domain(format!("omega = {omega} is not finite"));
    }
    let u = c / (2.0 * PI * omega.abs()).sqrt();
    let (_, g) = fresnel_aux(u)?;
    Ok(2.0 * PI * u * u * u * g / (c * c))
}

/// `lim_{ω→0} levy_half_pdf(c, ω) = 2/(π c²)`.
pub fn levy_half_pdf_at_zero(c: f64) -> f64 {
    2.0 / (PI * c * c)
}

/// Large-`|ω|` asymptote `c/(2√(2π)) |ω|^{-3/2}` of [`levy_half_pdf`].
pub fn levy_half_tail(c: f64, omega: f64) -> f64 {
    c / (2.0 * (2.0 * PI).sqrt()) * omega.abs().powf(-1.5)
}

/// Cauchy density `(1/π) c / (c² + ω²)`.
pub fn cauchy_pdf(c: f64, omega: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return domain(format!("scale c = {c} must be positive"));
    }
    Ok(c / (PI * (c * c + omega * omega)))
}

/// [`levy_half_pdf`] sampled on a grid avoiding 0.
pub fn levy_half_curve(c: f64, grid: &[f64]) -> Result<DensityCurve> {
    check_grid(grid)?;
    let values = grid
        .iter()
        .map(|&w| levy_half_pdf(c, w))
        .collect::<Result<Vec<_>>>()?;
    let mut meta = CurveMeta::labelled("levy_half");
    meta.trend_c = Some(c);
    Ok(DensityCurve::build(grid.to_vec(), values, meta))
}

/// [`cauchy_pdf`] sampled on a grid.
pub fn cauchy_curve(c: f64, grid: &[f64]) -> Result<DensityCurve> {
    check_grid(grid)?;
    let values = grid
        .iter()
        .map(|&w| cauchy_pdf(c, w))
        .collect::<Result<Vec<_>>>()?;
    let mut meta = CurveMeta::labelled("cauchy");
    meta.trend_c = Some(c);
    Ok(DensityCurve::build(grid.to_vec(), values, meta))
}

/// Sup and trapezoid-L1 distance between two curves on the same grid.
pub fn compare_curves(a: &DensityCurve, b: &DensityCurve) -> Result<(f64, f64)> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch(format!(
            "grids differ ({} vs {} points)",
            a.grid.len(),
            b.grid.len()
        )));
    }
    let diff: Vec<f64> = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).abs())
        .collect();
    let sup = diff.iter().copied().fold(0.0, f64::max);
    Ok((sup, trapezoid(&a.grid, &diff)))
}
