//! Evaluation of the infinite products
//! `Cl_{p;s}(t) = Π_{n≥1} [1 - p + p cos(t / n^s)]`
//! and of the geometric ("power walk") products `Π cos(t / b^n)` and kin.
//!
//! Factors are evaluated directly up to a cutoff `N` chosen by a
//! [`TruncationPlan`]; beyond `N` every factor argument is below
//! [`SMALL_ANGLE`] and the log-tail is summed analytically from the Maclaurin
//! expansion `ln(1 - p + p cos x) = c2 x² + c4 x⁴ + O(x⁶)`, leaving a rigorous
//! `O(x⁶)` remainder as the reported tail bound.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::trend::TrendConstants;

/// Default maximum number of explicitly evaluated factors.
pub const DEFAULT_FACTOR_CAP: u64 = 100_000_000;

/// Largest factor argument `t / n^s` handled by the analytic tail.
pub const SMALL_ANGLE: f64 = 0.1;

/// Relative radius (in `t`) of the neighborhood of a product zero inside
/// which logarithms are refused.
pub const ZERO_NEIGHBORHOOD: f64 = 1e-9;

/// Parameters `(p, s)` of `Cl_{p;s}` with `0 < p ≤ 1` and `s > 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ProductParams {
    p: f64,
    s: f64,
}

impl ProductParams {
    pub fn new(p: f64, s: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return domain(format!("p = {p} is outside (0, 1]"));
        }
        if !(s > 0.5 && s.is_finite()) {
            return domain(format!("s = {s} must be a finite number > 1/2"));
        }
        Ok(ProductParams { p, s })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// Whether some factor `1 - p + p cos x` can vanish, i.e. `p ≥ 1/2`.
    pub fn has_zeros(&self) -> bool {
        self.p >= 0.5
    }

    /// Angle `θ = arccos((1-p)/p)`; the factor vanishes at `x = (2j-1)π ± θ`.
    pub fn zero_angle(&self) -> Option<f64> {
        self.has_zeros()
            .then(|| ((1.0 - self.p) / self.p).clamp(-1.0, 1.0).acos())
    }

    /// `ln|1 - p + p cos x|` and the sign of the factor.
    #[inline]
    pub(crate) fn log_factor(&self, x: f64) -> (f64, bool) {
        // 1 - p + p cos x = 1 - 2p sin²(x/2), accurate for small x.
        let h = (0.5 * x).sin();
        let v = 2.0 * self.p * h * h;
        let f = 1.0 - v;
        if v < 0.5 {
            ((-v).ln_1p(), false)
        } else {
            (f.abs().ln(), f < 0.0)
        }
    }

    /// Factor value `1 - p + p cos x`.
    #[inline]
    pub fn factor(&self, x: f64) -> f64 {
        let h = (0.5 * x).sin();
        1.0 - 2.0 * self.p * h * h
    }

    // Maclaurin coefficients of ln(1 - p + p cos x) in x², x⁴.
    fn c2(&self) -> f64 {
        -0.5 * self.p
    }

    fn c4(&self) -> f64 {
        self.p / 24.0 - self.p * self.p / 8.0
    }

    // Bound on |ln(1-p+p cos x) - c2 x² - c4 x⁴| / x⁶ for |x| ≤ SMALL_ANGLE.
    // |c6| ≤ p/720 + p²/48 + p³/24; the factor 1.5 absorbs all higher orders.
    fn k6(&self) -> f64 {
        let p = self.p;
        1.5 * (p / 720.0 + p * p / 48.0 + p * p * p / 24.0)
    }
}

/// `Σ_{k > n} k^{-σ}` for `σ > 1`, by Euler–Maclaurin summation.
pub fn power_tail_sum(sigma: f64, n: u64) -> f64 {
    debug_assert!(sigma > 1.0);
    const BERNOULLI: [f64; 7] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
    ];
    let m_min = (2.0 * sigma + 12.0).ceil() as u64;
    let mut head = 0.0;
    let mut m = n + 1;
    while m < m_min {
        head += (m as f64).powf(-sigma);
        m += 1;
    }
    let mf = m as f64;
    let mut tail = mf.powf(1.0 - sigma) / (sigma - 1.0) + 0.5 * mf.powf(-sigma);
    let mut rising = sigma;
    let mut pow = mf.powf(-sigma - 1.0);
    let mut fact = 2.0;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let k = (k + 1) as f64;
        tail += b / fact * rising * pow;
        rising *= (sigma + 2.0 * k - 1.0) * (sigma + 2.0 * k);
        pow /= mf * mf;
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    head + tail
}

/// How many factors to multiply explicitly, and how the rest is handled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPlan {
    /// Number of explicitly evaluated factors `N`.
    pub n_terms: u64,
    /// Rigorous bound on the error of the analytic log-tail over `n > N`.
    pub tail_bound: f64,
    /// Analytic log-tail `c2 t² Σ n^{-2s} + c4 t⁴ Σ n^{-4s}` over `n > N`.
    pub log_tail: f64,
}

impl TruncationPlan {
    /// Plan with exactly `n_terms` explicit factors. Fails if the first
    /// omitted factor is outside the small-angle regime.
    pub fn with_terms(params: &ProductParams, t: f64, n_terms: u64) -> Result<Self> {
        let tau = t.abs();
        if tau == 0.0 {
            return Ok(TruncationPlan {
                n_terms,
                tail_bound: 0.0,
                log_tail: 0.0,
            });
        }
        let first = (n_terms + 1) as f64;
        if tau / first.powf(params.s) > SMALL_ANGLE {
            return domain(format!(
                "{n_terms} factors leave t/(N+1)^s = {} above the small-angle limit {SMALL_ANGLE}",
                tau / first.powf(params.s)
            ));
        }
        Ok(Self::unchecked(params, tau, n_terms))
    }

    fn unchecked(params: &ProductParams, tau: f64, n_terms: u64) -> Self {
        let s = params.s;
        let t2 = tau * tau;
        let log_tail = params.c2() * t2 * power_tail_sum(2.0 * s, n_terms)
            + params.c4() * t2 * t2 * power_tail_sum(4.0 * s, n_terms);
        let tail_bound = params.k6() * t2 * t2 * t2 * power_tail_sum(6.0 * s, n_terms);
        TruncationPlan {
            n_terms,
            tail_bound,
            log_tail,
        }
    }

    /// Smallest plan whose tail bound is below `tol / 2`.
    pub fn for_tolerance(params: &ProductParams, t: f64, tol: f64, cap: u64) -> Result<Self> {
        if !(tol > 0.0) {
            return domain(format!("tolerance {tol} must be positive"));
        }
        if !t.is_finite() {
            return domain(format!("t = {t} is not finite"));
        }
        let tau = t.abs();
        if tau == 0.0 {
            return Ok(TruncationPlan {
                n_terms: 0,
                tail_bound: 0.0,
                log_tail: 0.0,
            });
        }
        let s = params.s;
        let target = 0.5 * tol;
        let n_angle = (tau / SMALL_ANGLE).powf(1.0 / s).ceil();
        // Leading-order size of the remainder: K6 t⁶ N^{1-6s} / (6s - 1).
        let n_bound =
            (params.k6() * tau.powi(6) / ((6.0 * s - 1.0) * target)).powf(1.0 / (6.0 * s - 1.0));
        let guess = n_angle.max(n_bound.ceil()).max(1.0);
        if guess > cap as f64 {
            return Err(Error::Capacity {
                what: "product factors",
                required: guess,
                cap: cap as f64,
            });
        }
        let mut n = (guess as u64).max(1);
        // n_angle guarantees the first omitted factor is small; bump n until
        // the exact remainder bound holds.
        let mut plan = Self::unchecked(params, tau, n);
        while plan.tail_bound > target {
            n = n + n / 16 + 1;
            if n > cap {
                return Err(Error::Capacity {
                    what: "product factors",
                    required: n as f64,
                    cap: cap as f64,
                });
            }
            plan = Self::unchecked(params, tau, n);
        }
        Ok(plan)
    }
}

/// `ln|Cl|` together with the sign of `Cl`; `sign == 0` marks an exact zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub sign: i8,
    pub log_abs: f64,
}

impl SignedLog {
    pub fn value(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => s as f64 * self.log_abs.exp(),
        }
    }
}

/// Evaluates `ln|Cl_{p;s}(t)|` and its sign following `plan`.
pub fn signed_log_with_plan(params: &ProductParams, t: f64, plan: &TruncationPlan) -> SignedLog {
    let tau = t.abs();
    let s = params.s;
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut negative = false;
    for n in 1..=plan.n_terms {
        let x = tau / (n as f64).powf(s);
        let (lf, neg) = params.log_factor(x);
        if lf == f64::NEG_INFINITY {
            return SignedLog {
                sign: 0,
                log_abs: f64::NEG_INFINITY,
            };
        }
        negative ^= neg;
        // Kahan summation
        let y = lf - comp;
        let tmp = sum + y;
        comp = (tmp - sum) - y;
        sum = tmp;
    }
    SignedLog {
        sign: if negative { -1 } else { 1 },
        log_abs: sum + plan.log_tail,
    }
}

/// `Cl_{p;s}(t)` to absolute accuracy `tol`.
pub fn eval_cl(params: &ProductParams, t: f64, tol: f64) -> Result<f64> {
    eval_cl_capped(params, t, tol, DEFAULT_FACTOR_CAP)
}

/// [`eval_cl`] with an explicit cap on the number of factors.
pub fn eval_cl_capped(params: &ProductParams, t: f64, tol: f64, cap: u64) -> Result<f64> {
    let plan = TruncationPlan::for_tolerance(params, t, tol, cap)?;
    Ok(signed_log_with_plan(params, t, &plan).value())
}

/// Locates the product zero nearest to `t` if `t` lies inside its
/// [`ZERO_NEIGHBORHOOD`].
pub fn near_zero(params: &ProductParams, t: f64) -> Option<f64> {
    let theta = params.zero_angle()?;
    let tau = t.abs();
    let first = PI - theta;
    let mut n = 1u64;
    loop {
        let scale = (n as f64).powf(params.s);
        let x = tau / scale;
        if x < first * (1.0 - 2.0 * ZERO_NEIGHBORHOOD) {
            return None;
        }
        let base = (x / (2.0 * PI)).floor() * 2.0 * PI;
        let y = x - base;
        for z in [PI - theta, PI + theta, theta - PI, 3.0 * PI - theta] {
            if (y - z).abs() <= ZERO_NEIGHBORHOOD * x {
                return Some(t.signum() * scale * (base + z));
            }
        }
        n += 1;
    }
}

/// `ln|Cl_{p;s}(t)|` to absolute accuracy `tol`.
///
/// For `p ≥ 1/2` points within [`ZERO_NEIGHBORHOOD`] (relative) of a product
/// zero are rejected with [`Error::Singular`].
pub fn eval_log_cl(params: &ProductParams, t: f64, tol: f64) -> Result<f64> {
    if let Some(z) = near_zero(params, t) {
        return Err(Error::Singular { t, nearest_zero: z });
    }
    let plan = TruncationPlan::for_tolerance(params, t, tol, DEFAULT_FACTOR_CAP)?;
    let sl = signed_log_with_plan(params, t, &plan);
    if sl.sign == 0 {
        return Err(Error::Singular { t, nearest_zero: t });
    }
    Ok(sl.log_abs)
}

/// The fluctuation factor `F = Cl(t) exp(C |t|^{1/s})`.
///
/// Computed in log space so that it stays finite where `Cl` underflows.
pub fn fluctuation_factor(
    params: &ProductParams,
    t: f64,
    trend: &TrendConstants,
    tol: f64,
) -> Result<f64> {
    if trend.params != *params {
        return domain("trend constants were computed for different parameters");
    }
    let c = trend.c_ps;
    let plan = TruncationPlan::for_tolerance(params, t, tol, DEFAULT_FACTOR_CAP)?;
    let sl = signed_log_with_plan(params, t, &plan);
    if sl.sign == 0 {
        return Ok(0.0);
    }
    Ok(sl.sign as f64 * (sl.log_abs + c * t.abs().powf(1.0 / params.s)).exp())
}

/// All zeros of `Cl_{p;s}` in `(0, t_max]` contributed by factors `n ≤ n_max`,
/// sorted and de-duplicated. Empty when `p < 1/2`.
pub fn product_zeros(params: &ProductParams, n_max: u64, t_max: f64) -> Result<Vec<f64>> {
    if n_max < 1 {
        return domain("n_max must be at least 1");
    }
    if !(t_max > 0.0) {
        return domain(format!("t_max = {t_max} must be positive"));
    }
    let Some(theta) = params.zero_angle() else {
        return Ok(Vec::new());
    };
    let mut zeros = Vec::new();
    for n in 1..=n_max {
        let scale = (n as f64).powf(params.s);
        if scale * (PI - theta) > t_max {
            break;
        }
        for j in 1u64.. {
            let centre = (2 * j - 1) as f64 * PI;
            let lo = scale * (centre - theta);
            if lo > t_max {
                break;
            }
            zeros.push(lo);
            let hi = scale * (centre + theta);
            if hi <= t_max && theta > 0.0 {
                zeros.push(hi);
            }
        }
    }
    zeros.sort_by(f64::total_cmp);
    zeros.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    Ok(zeros)
}

/// Geometric-walk products with closed forms (or, for Cantor, without).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum PowerKind {
    /// `Π cos(t / 2^n) = sin t / t`
    EulerSinc,
    /// `Π cos(t / 3^n)`, the characteristic function of a Cantor law
    Cantor,
    /// `Π [1/3 + 2/3 cos(t / 3^n)] = sin(t/2) / (t/2)`
    MorrisonP23,
    /// `Π Σ_m (1 - (-1)^{s+m}) / (2s) cos(m t / s^n) = sin t / t`, integer `s ≥ 2`
    MorrisonGeneral(u32),
}

impl PowerKind {
    fn base(&self) -> f64 {
        match self {
            PowerKind::EulerSinc => 2.0,
            PowerKind::Cantor | PowerKind::MorrisonP23 => 3.0,
            PowerKind::MorrisonGeneral(s) => *s as f64,
        }
    }

    // (weight, frequency) pairs of one factor.
    fn terms(&self) -> Vec<(f64, f64)> {
        match self {
            PowerKind::EulerSinc | PowerKind::Cantor => vec![(1.0, 1.0)],
            PowerKind::MorrisonP23 => vec![(1.0 / 3.0, 0.0), (2.0 / 3.0, 1.0)],
            PowerKind::MorrisonGeneral(s) => {
                let s = *s as i64;
                // Folding ±m together: weight 1/s at m = 0 (s odd), 2/s at m > 0.
                (0..s)
                    .filter(|m| (s + m) % 2 != 0)
                    .map(|m| (if m == 0 { 1.0 } else { 2.0 } / s as f64, m as f64))
                    .collect()
            }
        }
    }

    /// Closed form of the product, where one is known.
    pub fn reference(&self, t: f64) -> Option<f64> {
        let sinc = |x: f64| if x == 0.0 { 1.0 } else { x.sin() / x };
        match self {
            PowerKind::EulerSinc | PowerKind::MorrisonGeneral(_) => Some(sinc(t)),
            PowerKind::MorrisonP23 => Some(sinc(0.5 * t)),
            PowerKind::Cantor => None,
        }
    }
}

/// Evaluates a power-walk product to absolute accuracy `tol`.
pub fn eval_power_product(kind: PowerKind, t: f64, tol: f64) -> Result<f64> {
    if let PowerKind::MorrisonGeneral(s) = kind {
        if s < 2 {
            return domain(format!(
                "Morrison product order s = {s} must be an integer ≥ 2"
            ));
        }
    }
    if !(tol > 0.0) || !t.is_finite() {
        return domain("tolerance must be positive and t finite");
    }
    let base = kind.base();
    let terms = kind.terms();
    let m2: f64 = terms.iter().map(|(w, m)| w * m * m).sum();
    let mut value = 1.0;
    let mut scale = 1.0;
    for _ in 0..4096 {
        scale /= base;
        let x = t * scale;
        // Remaining log-tail ≤ 1.01 M2 x² / (2 (b² - 1)) once M2 x² is small.
        if m2 * x * x < 1e-2 && 1.01 * m2 * x * x / (2.0 * (base * base - 1.0)) < 0.25 * tol {
            return Ok(value);
        }
        let f: f64 = terms.iter().map(|(w, m)| w * (m * x).cos()).sum();
        value *= f;
        if value == 0.0 {
            return Ok(0.0);
        }
    }
    Err(Error::Capacity {
        what: "power product factors",
        required: 4097.0,
        cap: 4096.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(params: &ProductParams, t: f64, n: u64) -> f64 {
        (1..=n)
            .map(|k| params.factor(t / (k as f64).powf(params.s)).ln())
            .sum()
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(ProductParams::new(0.0, 2.0).is_err());
        assert!(ProductParams::new(1.5, 2.0).is_err());
        assert!(ProductParams::new(0.5, 0.5).is_err());
        assert!(ProductParams::new(f64::NAN, 1.0).is_err());
        assert!(ProductParams::new(1.0, 0.51).is_ok());
    }

    #[test]
    fn zero_flag_matches_existence_of_roots() {
        for &p in &[0.1, 0.49, 0.5, 0.7, 1.0] {
            let pp = ProductParams::new(p, 1.0).unwrap();
            assert_eq!(pp.has_zeros(), ((1.0 - p) / p) <= 1.0);
        }
    }

    #[test]
    fn power_tail_matches_direct_sum() {
        let direct: f64 = (11..2_000_000u64)
            .rev()
            .map(|k| (k as f64).powf(-3.0))
            .sum::<f64>();
        let approx_rest = 0.5 / (2_000_000f64).powi(2);
        assert!((power_tail_sum(3.0, 10) - direct - approx_rest).abs() < 1e-15);
        // σ = 2: Σ_{k≥1} = π²/6
        assert!((power_tail_sum(2.0, 0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((power_tail_sum(4.0, 0) - PI.powi(4) / 90.0).abs() < 1e-14);
    }

    #[test]
    fn value_at_origin_is_one() {
        let pp = ProductParams::new(1.0 / 3.0, 2.0).unwrap();
        assert_eq!(eval_cl(&pp, 0.0, 1e-12).unwrap(), 1.0);
        assert_eq!(eval_log_cl(&pp, 0.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn first_factor_zero_annihilates() {
        let pp = ProductParams::new(1.0, 1.0).unwrap();
        assert!(eval_cl(&pp, PI / 2.0, 1e-12).unwrap().abs() < 1e-12);
    }

    #[test]
    fn matches_deep_partial_product() {
        let pp = ProductParams::new(1.0 / 3.0, 2.0).unwrap();
        let oracle = brute(&pp, 1.0, 1_000_000).exp();
        assert!((eval_cl(&pp, 1.0, 1e-13).unwrap() - oracle).abs() < 1e-10);
        let pp = ProductParams::new(0.4, 2.0).unwrap();
        let oracle = brute(&pp, 100.0, 1_000_000);
        assert!((eval_log_cl(&pp, 100.0, 1e-12).unwrap() - oracle).abs() < 1e-9);
    }

    #[test]
    fn log_and_value_are_consistent() {
        let pp = ProductParams::new(1.0 / 3.0, 1.0).unwrap();
        let v = eval_cl(&pp, 10.0, 1e-14).unwrap();
        let l = eval_log_cl(&pp, 10.0, 1e-12).unwrap();
        assert!((v.ln() - l).abs() < 1e-9);
    }

    #[test]
    fn log_refuses_product_zero() {
        let pp = ProductParams::new(1.0, 1.0).unwrap();
        match eval_log_cl(&pp, 3.0 * PI / 2.0, 1e-12) {
            Err(Error::Singular { nearest_zero, .. }) => {
                assert!((nearest_zero - 3.0 * PI / 2.0).abs() < 1e-12)
            }
            other => panic!("expected singular error, got {other:?}"),
        }
        // second factor: t/2 = π/2
        assert!(matches!(
            eval_log_cl(&pp, PI, 1e-12),
            Err(Error::Singular { .. })
        ));
        assert!(eval_log_cl(&pp, 1.0, 1e-12).is_ok());
    }

    #[test]
    fn capacity_error_names_required_cap() {
        let pp = ProductParams::new(1.0 / 3.0, 0.6).unwrap();
        match eval_cl_capped(&pp, 1e6, 1e-12, 1000) {
            Err(Error::Capacity { required, cap, .. }) => {
                assert!(required > cap);
                assert_eq!(cap, 1000.0);
            }
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn zeros_for_harmonic_cosine_product() {
        let pp = ProductParams::new(1.0, 1.0).unwrap();
        let z = product_zeros(&pp, 1, 7.0).unwrap();
        assert_eq!(z.len(), 2);
        assert!((z[0] - PI / 2.0).abs() < 1e-15 && (z[1] - 1.5 * PI).abs() < 1e-15);
        let z = product_zeros(&pp, 1, 9.0).unwrap();
        assert_eq!(z.len(), 3);
        assert!((z[2] - 2.5 * PI).abs() < 1e-14);
    }

    #[test]
    fn zeros_for_two_thirds() {
        let pp = ProductParams::new(2.0 / 3.0, 1.0).unwrap();
        let z = product_zeros(&pp, 1, 9.0).unwrap();
        let expect = [2.0 * PI / 3.0, 4.0 * PI / 3.0, 2.0 * PI / 3.0 + 2.0 * PI];
        assert_eq!(z.len(), 3);
        for (a, b) in z.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
            assert!(pp.factor(*a).abs() < 1e-12);
        }
    }

    #[test]
    fn no_zeros_below_one_half() {
        let pp = ProductParams::new(1.0 / 3.0, 2.0).unwrap();
        assert!(product_zeros(&pp, 100, 1e4).unwrap().is_empty());
    }

    #[test]
    fn zeros_deduplicate_across_factors() {
        // s = 1, p = 1: n·(2j-1)π/2 coincide across n.
        let pp = ProductParams::new(1.0, 1.0).unwrap();
        let z = product_zeros(&pp, 3, 20.0).unwrap();
        for w in z.windows(2) {
            assert!(w[1] > w[0] * (1.0 + 1e-12));
        }
        assert!(z.iter().any(|&t| (t - 1.5 * PI).abs() < 1e-13));
    }

    #[test]
    fn power_products() {
        assert!(
            (eval_power_product(PowerKind::EulerSinc, 1e-300, 1e-12).unwrap() - 1.0).abs() < 1e-12
        );
        assert!(
            eval_power_product(PowerKind::EulerSinc, PI, 1e-12)
                .unwrap()
                .abs()
                < 1e-12
        );
        let v = eval_power_product(PowerKind::MorrisonP23, 2.0, 1e-13).unwrap();
        assert!((v - 1f64.sin()).abs() < 1e-12);
        assert!(eval_power_product(PowerKind::MorrisonGeneral(1), 1.0, 1e-12).is_err());
        assert!(PowerKind::Cantor.reference(1.0).is_none());
    }

    #[test]
    fn morrison_general_two_and_three_reduce_to_known_products() {
        for &t in &[0.3, 1.7, -4.2, 11.0] {
            let a = eval_power_product(PowerKind::MorrisonGeneral(2), t, 1e-14).unwrap();
            let b = eval_power_product(PowerKind::EulerSinc, t, 1e-14).unwrap();
            assert!((a - b).abs() < 1e-14);
            let c = eval_power_product(PowerKind::MorrisonGeneral(3), t, 1e-14).unwrap();
            let d = eval_power_product(PowerKind::MorrisonP23, 2.0 * t, 1e-14).unwrap();
            assert!((c - d).abs() < 1e-14);
        }
    }
}
