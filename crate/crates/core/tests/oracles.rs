use std::f64::consts::PI;

use zetawalk::density::{
    bin_masses_from_cf, cauchy_pdf, fresnel, levy_half_pdf, pdf_from_cf, smoothed_lattice_masses,
};
use zetawalk::lattice::{convolve_lattice, finite_product, DEFAULT_MERGE_EPS};
use zetawalk::quad::integrate;
use zetawalk::trend::{a_s, b_ps, binom_midpoint_identity, c_p1_closed, c_ps_quadrature};
use zetawalk::ProductParams;

#[test]
fn series_and_quadrature_agree() {
    for p in [0.1, 0.2, 0.3, 0.4, 0.45] {
        for s in [0.75, 1.0, 1.5, 2.0, 3.0] {
            let series = a_s(s).unwrap() * b_ps(p, s, 1e-12).unwrap();
            let quad = c_ps_quadrature(p, s, 1e-10).unwrap();
            assert!(
                (series / quad - 1.0).abs() < 1e-6,
                "p={p} s={s}: {series} {quad}"
            );
        }
    }
}

#[test]
fn closed_form_matches_quadrature() {
    for k in 1..=9 {
        let p = 0.05 * k as f64;
        let closed = c_p1_closed(p).unwrap();
        assert!(
            (closed - c_ps_quadrature(p, 1.0, 1e-10).unwrap()).abs() < 1e-6,
            "p={p}"
        );
    }
}

#[test]
fn trend_constant_grows_with_p() {
    for s in [0.75, 1.0, 2.0, 3.0] {
        let c: Vec<f64> = (1..=10)
            .map(|k| c_ps_quadrature(0.05 * k as f64, s, 1e-9).unwrap())
            .collect();
        assert!(c.windows(2).all(|w| w[1] > w[0]), "s={s}: {c:?}");
    }
}

#[test]
fn binomial_identity_holds_exactly() {
    for n in 0..=30 {
        let (lhs, rhs) = binom_midpoint_identity(n);
        assert_eq!(lhs, rhs, "n={n}");
    }
}

#[test]
fn fresnel_matches_direct_quadrature() {
    for u in [0.25, 0.5, 1.0, 1.7, 2.0, 3.3, 5.0] {
        let (c, s) = fresnel(u).unwrap();
        let pts: Vec<f64> = (0..=40).map(|i| u * i as f64 / 40.0).collect();
        let c0 = integrate(|x| (0.5 * PI * x * x).cos(), &pts, 1e-15, 10_000)
            .unwrap()
            .value;
        let s0 = integrate(|x| (0.5 * PI * x * x).sin(), &pts, 1e-15, 10_000)
            .unwrap()
            .value;
        assert!((c - c0).abs() < 1e-12 && (s - s0).abs() < 1e-12, "u={u}");
    }
}

#[test]
fn cauchy_integrates_to_one() {
    let c = 0.8;
    let g = |x: f64| cauchy_pdf(c, x).unwrap();
    let pts: Vec<f64> = (-6..=6).map(|k| k as f64 / 6.0 * 1000.0 * c).collect();
    let head = integrate(g, &pts, 1e-10, 100_000).unwrap().value;
    let tail = 1.0 - 2.0 * (1000.0f64).atan() / PI;
    assert!((head + tail - 1.0).abs() < 1e-6);
}

// ∫_{|ω| > a} of the 1/2-stable density, via ω = x².
fn levy_mass_beyond(c: f64, a: f64) -> f64 {
    let g = |x: f64| 2.0 * x * levy_half_pdf(c, x * x).unwrap();
    let top = 1000.0;
    let head = integrate(g, &[a.sqrt(), 3.0, 10.0, 100.0, top], 1e-12, 100_000)
        .unwrap()
        .value;
    2.0 * (head + c / (2.0 * PI).sqrt() / top)
}

#[test]
fn levy_law_is_heavy_tailed_while_the_walk_is_bounded() {
    let c = 0.567017886467549;
    let zeta2 = PI * PI / 6.0;
    let total = levy_mass_beyond(c, 1e-12);
    assert!((total - 1.0).abs() < 1e-3, "{total}");
    assert!(levy_mass_beyond(c, zeta2) > 0.1);

    let params = ProductParams::new(1.0 / 3.0, 2.0).unwrap();
    let grid: Vec<f64> = (0..=600).map(|i| -3.0 + 0.01 * i as f64).collect();
    let curve = pdf_from_cf(&params, &grid, 1e-7).unwrap();
    let outside: f64 = grid
        .windows(2)
        .zip(curve.values.windows(2))
        .filter(|(x, _)| x[0].abs() >= zeta2 && x[1].abs() >= zeta2)
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum();
    assert!(outside < 1e-3, "{outside}");
}

#[test]
fn harmonic_walk_density_self_converges() {
    let params = ProductParams::new(1.0, 1.0).unwrap();
    let coarse = pdf_from_cf(&params, &[0.0], 1e-4).unwrap().values[0];
    let fine = pdf_from_cf(&params, &[0.0], 1e-10).unwrap().values[0];
    assert!((coarse / fine - 1.0).abs() < 0.02);
}

#[test]
fn inversion_reproduces_small_lattices() {
    for (p, s) in [(1.0 / 3.0, 2.0), (0.8, 1.5), (1.0, 2.0)] {
        let params = ProductParams::new(p, s).unwrap();
        for n in [1, 4, 8] {
            let d = convolve_lattice(&params, n, DEFAULT_MERGE_EPS).unwrap();
            let reach: f64 = (1..=n).map(|k| (k as f64).powf(-s)).sum();
            // offset keeps rational-looking atoms such as 4^{-3/2} off the edges
            let half = ((reach + 0.1) / 0.05).ceil();
            let edges: Vec<f64> = (0..=2 * half as i64)
                .map(|i| (PI - 3.0) * 0.05 + 0.05 * (i as f64 - half))
                .collect();
            let sigma = 1e-4;
            let m = bin_masses_from_cf(|t| finite_product(&params, n, t), &edges, reach, sigma)
                .unwrap();
            let smooth = smoothed_lattice_masses(&d, &edges, sigma);
            let exact: Vec<f64> = edges.windows(2).map(|w| d.mass_in(w[0], w[1])).collect();
            let tv = |a: &[f64], b: &[f64]| {
                0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
            };
            assert!(tv(&m, &smooth) < 1e-9, "p={p} s={s} n={n}");
            assert!(
                tv(&m, &exact) < 0.01,
                "p={p} s={s} n={n}: {}",
                tv(&m, &exact)
            );
        }
    }
}
