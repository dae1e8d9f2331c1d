//! Numerical integration: globally adaptive Gauss–Kronrod (7/15) with
//! user breakpoints, and fixed Gauss–Legendre panel rules.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    floor: bool,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod evaluation with the QUADPACK error rescaling.
/// The flag reports an error estimate at the rounding floor.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, bool) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let mut floor = false;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let round = 50.0 * f64::EPSILON * res_abs;
        floor = err <= round;
        err = err.max(round);
    }
    (value, err, floor)
}

/// Globally adaptive integration over the union of consecutive intervals
/// delimited by `points` (sorted, at least two entries).
///
/// The panel with the largest error estimate is bisected until the summed
/// error falls below `tol` (absolute). Panels narrower than a few ulps are
/// frozen, as are panels whose error estimate is already at the rounding
/// floor; if more than `max_panels` panels would be needed a capacity error
/// is returned.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    tol: f64,
    max_panels: usize,
) -> Result<Estimate> {
    if points.len() < 2 {
        return Err(Error::Domain(
            "integration needs at least two points".into(),
        ));
    }
    let mut heap = BinaryHeap::with_capacity(points.len() * 4);
    let mut frozen_value = 0.0;
    let mut frozen_error = 0.0;
    let mut total_err = 0.0;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            if b == a {
                continue;
            }
            return Err(Error::Domain(format!("breakpoints not sorted: {a} > {b}")));
        }
        let (value, error, floor) = gk15(&f, a, b);
        total_err += error;
        heap.push(Panel {
            a,
            b,
            value,
            error,
            floor,
        });
    }
    let mut panels = heap.len();
    while total_err > tol {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if worst.floor
            || (worst.b - worst.a)
                <= 64.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs()).max(1e-300)
        {
            frozen_value += worst.value;
            frozen_error += worst.error;
            total_err -= worst.error;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        if panels >= max_panels {
            return Err(Error::Capacity {
                what: "adaptive quadrature panels",
                required: (panels + 1) as f64,
                cap: max_panels as f64,
            });
        }
        let (v1, e1, f1) = gk15(&f, worst.a, mid);
        let (v2, e2, f2) = gk15(&f, mid, worst.b);
        total_err += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
            floor: f1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
            floor: f2,
        });
        panels += 1;
    }
    // Sum small contributions first.
    let mut parts: Vec<Panel> = heap.into_vec();
    parts.sort_by(|x, y| x.value.abs().total_cmp(&y.value.abs()));
    let value = parts.iter().map(|p| p.value).sum::<f64>() + frozen_value;
    let error = parts.iter().map(|p| p.error).sum::<f64>() + frozen_error;
    Ok(Estimate {
        value,
        error,
        panels,
    })
}

/// Gauss–Legendre nodes and weights on [-1, 1], `n >= 2`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "Gauss-Legendre rule needs at least two nodes");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}
