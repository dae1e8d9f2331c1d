use std::f64::consts::PI;

use serde_json::{json, Map, Value};
use zetawalk::arithmetic::{liouville_sieve, mobius_sieve, typicality_report_with_eps};
use zetawalk::density::{cauchy_pdf, levy_half_pdf, levy_half_pdf_at_zero, pdf_from_cf};
use zetawalk::lattice::convolve_lattice_capped;
use zetawalk::lattice::{STEP_CAP_BINARY, STEP_CAP_TERNARY};
use zetawalk::montecarlo::{histogram, run_ensemble, sample_coefficients, CoefficientSequence};
use zetawalk::product::{eval_cl, eval_log_cl, eval_power_product};
use zetawalk::trend::{best_trend_constants, fit_k_points, trend_constants, trend_factor};
use zetawalk::{Error, Method, PowerKind, ProductParams};

use crate::output::{json_number, Table};
use crate::{Command, KindArg, MethodArg, Source};

pub enum Failure {
    /// Invalid input: exit code 2.
    Usage(String),
    /// Numerical failure: exit code 1.
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

type Outcome = Result<Table, Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn linspace(a: f64, b: f64, n: u64) -> Vec<f64> {
    let h = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + h * i as f64 })
        .collect()
}

fn meta(command: &str, params: Option<&ProductParams>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("version".into(), json!(zetawalk::VERSION));
    if let Some(pp) = params {
        m.insert("p".into(), json_number(pp.p()));
        m.insert("s".into(), json_number(pp.s()));
    }
    m
}

fn set(m: &mut Map<String, Value>, key: &str, v: f64) {
    m.insert(key.into(), json_number(v));
}

pub fn run(cmd: &Command) -> Outcome {
    match *cmd {
        Command::Eval {
            p,
            s,
            t_min,
            t_max,
            points,
            tol,
        } => eval(p, s, t_min, t_max, points, tol),
        Command::Trend {
            s,
            p,
            ref p_grid,
            method,
            tol,
        } => {
            let grid = match (p, p_grid) {
                (Some(p), _) => vec![p],
                (None, Some(g)) => g.0.clone(),
                (None, None) => return usage("one of --p or --p-grid is required"),
            };
            trend(s, &grid, method, tol)
        }
        Command::Pdf {
            p,
            s,
            omega_min,
            omega_max,
            points,
            tol,
            trend,
        } => pdf(p, s, omega_min, omega_max, points, tol, trend),
        Command::Sample {
            p,
            s,
            steps,
            walks,
            seed,
            bins,
        } => sample(p, s, steps, walks, seed, bins),
        Command::Lattice {
            p,
            s,
            steps,
            merge_eps,
        } => lattice(p, s, steps, merge_eps),
        Command::Typicality {
            source,
            n,
            s,
            p_ref,
            p,
            seed,
            eps,
        } => typicality(source, n, s, p_ref, p, seed, eps),
        Command::Power {
            kind,
            order,
            t_min,
            t_max,
            points,
            tol,
        } => power(kind, order, t_min, t_max, points, tol),
    }
}

fn eval(p: f64, s: f64, t_min: f64, t_max: f64, points: u64, tol: f64) -> Outcome {
    if !(t_max > t_min) {
        return usage(format!("--t-max ({t_max}) must exceed --t-min ({t_min})"));
    }
    let params = ProductParams::new(p, s)?;
    let trend = best_trend_constants(&params, 1e-10)?;
    let c = trend.c_ps;
    let grid = linspace(t_min, t_max, points);
    let cl = grid
        .iter()
        .map(|&t| eval_cl(&params, t, tol))
        .collect::<Result<Vec<_>, _>>()?;
    // Envelope constant fitted on the same grid; points at product zeros are skipped.
    let mut fit = Vec::new();
    for &t in grid.iter().filter(|t| **t != 0.0) {
        match eval_log_cl(&params, t, tol) {
            Ok(l) => fit.push((t, l + c * t.abs().powf(1.0 / s))),
            Err(Error::Singular { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let k = fit_k_points(s, &fit);
    let tf: Vec<f64> = grid.iter().map(|&t| trend_factor(c, s, t)).collect();
    let env: Vec<f64> = grid
        .iter()
        .map(|&t| (-c * t.abs().powf(1.0 / s) + k * t.abs().powf(1.0 / (s + 1.0))).exp())
        .collect();
    let mut m = meta("eval", Some(&params));
    set(&mut m, "c", c);
    m.insert("c_method".into(), json!(trend.method.as_str()));
    set(&mut m, "k", k);
    set(&mut m, "tol", tol);
    Ok(Table::new(m)
        .num("t", grid)
        .num("cl", cl)
        .num("trend_factor", tf)
        .num("upper_envelope", env))
}

fn trend(s: f64, grid: &[f64], method: MethodArg, tol: f64) -> Outcome {
    let mut c = Vec::new();
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut tags = Vec::new();
    for &p in grid {
        let params = ProductParams::new(p, s)?;
        let tc = match method {
            MethodArg::Auto => best_trend_constants(&params, tol)?,
            MethodArg::Series => trend_constants(&params, Method::Series, tol)?,
            MethodArg::Quadrature => trend_constants(&params, Method::Quadrature, tol)?,
            MethodArg::Closed => trend_constants(&params, Method::ClosedFormS1, tol)?,
        };
        c.push(tc.c_ps);
        a.push(tc.a_s);
        b.push(tc.b_ps.unwrap_or(f64::NAN));
        tags.push(tc.method.as_str().to_string());
    }
    let mut m = meta("trend", None);
    set(&mut m, "s", s);
    set(&mut m, "tol", tol);
    Ok(Table::new(m)
        .num("p", grid.to_vec())
        .num("c_ps", c)
        .num("a_s", a)
        .num("b_ps", b)
        .text("method", tags))
}

fn pdf(p: f64, s: f64, lo: f64, hi: f64, points: u64, tol: f64, with_trend: bool) -> Outcome {
    if !(hi > lo) {
        return usage(format!("--omega-max ({hi}) must exceed --omega-min ({lo})"));
    }
    if with_trend && s != 1.0 && s != 2.0 {
        return usage("--trend is available for s = 1 (Cauchy) and s = 2 (Lévy) only");
    }
    let params = ProductParams::new(p, s)?;
    let grid = linspace(lo, hi, points);
    let curve = pdf_from_cf(&params, &grid, tol)?;
    let mut m = meta("pdf", Some(&params));
    set(&mut m, "tol", tol);
    set(&mut m, "mass", curve.mass);
    set(&mut m, "max_clamp", curve.max_clamp);
    if let Some(e) = curve.symmetry_error {
        set(&mut m, "symmetry_error", e);
    }
    for (key, v) in [
        ("c", curve.meta.trend_c),
        ("k", curve.meta.fluctuation_k),
        ("t_max", curve.meta.t_max),
        ("panel_width", curve.meta.panel_width),
    ] {
        if let Some(v) = v {
            set(&mut m, key, v);
        }
    }
    let c = curve.meta.trend_c;
    let mut table = Table::new(m)
        .num("omega", grid.clone())
        .num("pdf", curve.values);
    if with_trend {
        let c = c.ok_or_else(|| Failure::Compute("trend constant unavailable".into()))?;
        let values = grid
            .iter()
            .map(|&w| match s {
                1.0 => cauchy_pdf(c, w),
                _ if w == 0.0 => Ok(levy_half_pdf_at_zero(c)),
                _ => levy_half_pdf(c, w),
            })
            .collect::<Result<Vec<_>, _>>()?;
        table = table.num("trend_pdf", values);
    }
    Ok(table)
}

fn sample(p: f64, s: f64, steps: usize, walks: u64, seed: u64, bins: f64) -> Outcome {
    let params = ProductParams::new(p, s)?;
    let ens = run_ensemble(&params, steps, walks as usize, seed)?;
    let hist = histogram(&ens, bins)?;
    let (mean, var) = ens.moments();
    let mut m = meta("sample", Some(&params));
    m.insert("steps".into(), json!(steps));
    m.insert("walks".into(), json!(walks));
    m.insert("seed".into(), json!(seed));
    set(&mut m, "bin_width", bins);
    set(&mut m, "mean", mean);
    set(&mut m, "variance", var);
    let n = walks as f64;
    Ok(Table::new(m)
        .num("bin_center", hist.iter().map(|h| h.0).collect())
        .num("count", hist.iter().map(|h| h.1 as f64).collect())
        .num(
            "density",
            hist.iter().map(|h| h.1 as f64 / (n * bins)).collect(),
        ))
}

fn lattice(p: f64, s: f64, steps: usize, merge_eps: f64) -> Outcome {
    let params = ProductParams::new(p, s)?;
    let cap = if p < 1.0 {
        STEP_CAP_TERNARY
    } else {
        STEP_CAP_BINARY
    };
    let d = convolve_lattice_capped(&params, steps, merge_eps, cap)?;
    let mut m = meta("lattice", Some(&params));
    m.insert("steps".into(), json!(steps));
    m.insert("atoms".into(), json!(d.atoms.len()));
    m.insert("collisions".into(), json!(d.collisions));
    set(&mut m, "merge_eps", merge_eps);
    set(&mut m, "total_mass", d.total_mass());
    Ok(Table::new(m)
        .num("omega", d.atoms.iter().map(|a| a.omega).collect())
        .num("prob", d.atoms.iter().map(|a| a.prob).collect()))
}

fn typicality(
    source: Source,
    n: usize,
    s: f64,
    p_ref: Option<f64>,
    p: Option<f64>,
    seed: u64,
    eps: f64,
) -> Outcome {
    let (coeffs, default_ref): (CoefficientSequence, f64) = match source {
        Source::Mobius => (mobius_sieve(n)?, 6.0 / (PI * PI)),
        Source::Liouville => (liouville_sieve(n)?, 1.0),
        Source::Ones => {
            if n == 0 {
                return usage("--n must be at least 1");
            }
            (CoefficientSequence::all_ones(n), 1.0)
        }
        Source::Sampled => {
            let Some(p) = p else {
                return usage("--source sampled needs --p");
            };
            (sample_coefficients(p, n, seed)?, p)
        }
    };
    let r = typicality_report_with_eps(&coeffs, s, p_ref.unwrap_or(default_ref), eps)?;
    let mut m = meta("typicality", None);
    m.insert("source".into(), json!(format!("{:?}", coeffs.origin())));
    m.insert("n".into(), json!(r.n));
    set(&mut m, "s", s);
    set(&mut m, "eps", eps);
    set(&mut m, "mean_coeff", r.mean_coeff);
    set(&mut m, "nonzero_freq", r.nonzero_freq);
    set(&mut m, "p_ref", r.p_ref);
    set(&mut m, "freq_deviation", r.freq_deviation);
    set(&mut m, "partial_sum_at_s", r.partial_sum_at_s);
    Ok(Table::new(m)
        .num("n", r.growth_curve.iter().map(|g| g.0 as f64).collect())
        .num("growth", r.growth_curve.iter().map(|g| g.1).collect()))
}

fn power(kind: KindArg, order: u32, t_min: f64, t_max: f64, points: u64, tol: f64) -> Outcome {
    if !(t_max > t_min) {
        return usage(format!("--t-max ({t_max}) must exceed --t-min ({t_min})"));
    }
    let kind = match kind {
        KindArg::EulerSinc => PowerKind::EulerSinc,
        KindArg::Cantor => PowerKind::Cantor,
        KindArg::MorrisonP23 => PowerKind::MorrisonP23,
        KindArg::MorrisonGeneral => PowerKind::MorrisonGeneral(order),
    };
    let grid = linspace(t_min, t_max, points);
    let values = grid
        .iter()
        .map(|&t| eval_power_product(kind, t, tol))
        .collect::<Result<Vec<_>, _>>()?;
    let mut m = meta("power", None);
    m.insert("kind".into(), json!(format!("{kind:?}")));
    set(&mut m, "tol", tol);
    let mut table = Table::new(m).num("t", grid.clone());
    match grid
        .iter()
        .map(|&t| kind.reference(t))
        .collect::<Option<Vec<f64>>>()
    {
        Some(reference) => {
            let diff: Vec<f64> = values
                .iter()
                .zip(&reference)
                .map(|(a, b)| (a - b).abs())
                .collect();
            let worst = diff.iter().copied().fold(0.0, f64::max);
            set(&mut table.meta, "max_abs_diff", worst);
            table = table
                .num("product", values)
                .num("closed_form", reference)
                .num("abs_diff", diff);
        }
        None => table = table.num("product", values),
    }
    Ok(table)
}
