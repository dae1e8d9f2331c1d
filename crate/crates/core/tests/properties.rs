use std::f64::consts::PI;
use std::sync::OnceLock;

use proptest::prelude::*;
use zetawalk::arithmetic::{liouville_sieve, mobius_sieve};
use zetawalk::lattice::{convolve_lattice, finite_product, lattice_char_fn, DEFAULT_MERGE_EPS};
use zetawalk::montecarlo::{run_ensemble, CoefficientSequence};
use zetawalk::product::{eval_cl, product_zeros, signed_log_with_plan, DEFAULT_FACTOR_CAP};
use zetawalk::{ProductParams, TruncationPlan};

fn pp(p: f64, s: f64) -> ProductParams {
    ProductParams::new(p, s).unwrap()
}

fn sieves() -> &'static (CoefficientSequence, CoefficientSequence) {
    static S: OnceLock<(CoefficientSequence, CoefficientSequence)> = OnceLock::new();
    S.get_or_init(|| {
        (
            mobius_sieve(1_000_000).unwrap(),
            liouville_sieve(1_000_000).unwrap(),
        )
    })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cl_is_even_and_bounded(p in 0.01f64..=1.0, s in 0.75f64..4.0, t in -100.0f64..100.0) {
        let params = pp(p, s);
        let a = eval_cl(&params, t, 1e-8).unwrap();
        let b = eval_cl(&params, -t, 1e-8).unwrap();
        prop_assert!((a - b).abs() < 1e-14);
        prop_assert!(a.abs() <= 1.0);
        prop_assert_eq!(eval_cl(&params, 0.0, 1e-8).unwrap(), 1.0);
    }

    #[test]
    fn half_p_is_a_square(s in 0.75f64..3.0, t in -50.0f64..50.0) {
        let half = eval_cl(&pp(0.5, s), t, 1e-14).unwrap();
        let one = eval_cl(&pp(1.0, s), 0.5 * t, 1e-14).unwrap();
        prop_assert!((half - one * one).abs() < 1e-12, "{} vs {}", half, one * one);
    }

    #[test]
    fn doubling_terms_stays_within_tail_bound(p in 0.01f64..0.5, s in 0.75f64..4.0, t in 0.1f64..100.0) {
        let params = pp(p, s);
        let plan = TruncationPlan::for_tolerance(&params, t, 1e-8, DEFAULT_FACTOR_CAP).unwrap();
        let twice = TruncationPlan::with_terms(&params, t, 2 * plan.n_terms).unwrap();
        let a = signed_log_with_plan(&params, t, &plan);
        let b = signed_log_with_plan(&params, t, &twice);
        prop_assert_eq!(a.sign, b.sign);
        let rounding = 1e-15 * (plan.n_terms as f64).sqrt() * a.log_abs.abs().max(1.0);
        prop_assert!((a.log_abs - b.log_abs).abs() <= plan.tail_bound + rounding);
    }

    #[test]
    fn tail_bound_shrinks_and_beats_quadratic_bound(
        p in 0.01f64..=1.0, s in 0.75f64..4.0, t in 0.1f64..50.0, k in 0u32..6,
    ) {
        let params = pp(p, s);
        let n0 = ((t / 0.1).powf(1.0 / s).ceil() as u64).max(1);
        let n = n0 << k;
        let a = TruncationPlan::with_terms(&params, t, n).unwrap();
        let b = TruncationPlan::with_terms(&params, t, 2 * n).unwrap();
        prop_assert!(b.tail_bound <= a.tail_bound);
        let crude = 0.5 * p * t * t * (n as f64).powf(1.0 - 2.0 * s) / (2.0 * s - 1.0);
        prop_assert!(a.tail_bound <= crude);
    }

    #[test]
    fn lattice_law_is_symmetric_with_exact_moments(p in 0.01f64..=1.0, s in 0.75f64..3.0, n in 0usize..9) {
        let params = pp(p, s);
        let d = convolve_lattice(&params, n, DEFAULT_MERGE_EPS).unwrap();
        prop_assert!((d.total_mass() - 1.0).abs() < 1e-12);
        let m = d.atoms.len();
        for i in 0..m {
            let (a, b) = (d.atoms[i], d.atoms[m - 1 - i]);
            prop_assert!((a.omega + b.omega).abs() < 1e-12);
            prop_assert!((a.prob - b.prob).abs() < 1e-12);
        }
        let (mean, var) = d.moments();
        let expected: f64 = (1..=n).map(|k| p * (k as f64).powf(-2.0 * s)).sum();
        prop_assert!(mean.abs() < 1e-12);
        prop_assert!((var - expected).abs() < 1e-12);
    }

    #[test]
    fn generic_exponent_gives_all_atoms(p in 0.01f64..0.99, n in 0usize..9) {
        let s = 2.0 + 2f64.sqrt() * 1e-3;
        let d = convolve_lattice(&pp(p, s), n, DEFAULT_MERGE_EPS).unwrap();
        prop_assert_eq!(d.atoms.len(), 3usize.pow(n as u32));
        prop_assert_eq!(d.collisions, 0);
    }

    #[test]
    fn lattice_transform_is_the_finite_product(p in 0.01f64..=1.0, s in 0.75f64..3.0, n in 0usize..9, t in -20.0f64..20.0) {
        let params = pp(p, s);
        let d = convolve_lattice(&params, n, DEFAULT_MERGE_EPS).unwrap();
        let z = lattice_char_fn(&d, t);
        prop_assert!((z.re - finite_product(&params, n, t)).abs() < 1e-12);
        prop_assert!(z.im.abs() < 1e-12);
    }

    #[test]
    fn zeros_kill_a_factor(p in 0.5f64..=1.0, s in 0.75f64..3.0) {
        let params = pp(p, s);
        for z in product_zeros(&params, 20, 60.0).unwrap() {
            let hit = (1..=20).any(|n| params.factor(z / (n as f64).powf(s)).abs() < 1e-12);
            prop_assert!(hit, "t = {}", z);
            prop_assert!(eval_cl(&params, z, 1e-10).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn coprime_multiplicativity(a in 1usize..1000, b in 1usize..1000) {
        prop_assume!(gcd(a, b) == 1);
        let (mu, la) = sieves();
        prop_assert_eq!(mu.get(a * b).unwrap(), mu.get(a).unwrap() * mu.get(b).unwrap());
        prop_assert_eq!(la.get(a * b).unwrap(), la.get(a).unwrap() * la.get(b).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn ensembles_are_reproducible_and_bounded(p in 0.05f64..=1.0, s in 0.75f64..3.0, seed in any::<u64>()) {
        let params = pp(p, s);
        let a = run_ensemble(&params, 200, 5000, seed).unwrap();
        let b = run_ensemble(&params, 200, 5000, seed).unwrap();
        prop_assert!(a.endpoints.iter().zip(&b.endpoints).all(|(x, y)| x.to_bits() == y.to_bits()));
        let reach: f64 = (1..=200).map(|n| (n as f64).powf(-s)).sum();
        prop_assert!(a.endpoints.iter().all(|x| x.abs() <= reach));
    }
}

#[test]
fn mobius_partial_sums_converge() {
    let (mu, _) = sieves();
    let target = 6.0 / (PI * PI);
    let mut sum = 0.0;
    let mut next = 10;
    for (i, &m) in mu.values().iter().enumerate() {
        let n = i + 1;
        sum += m as f64 / (n * n) as f64;
        if n == next {
            assert!((sum - target).abs() <= 1.0 / n as f64, "N = {n}");
            next = next * 3 / 2;
        }
    }
}
