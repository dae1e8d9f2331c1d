//! Exact law of the `N`-step walk `Σ_{n≤N} R(n)/n^s` as a finite list of atoms,
//! built by repeated convolution with the three-atom step measures
//! `(p/2)δ_{-1/n^s} + (1-p)δ_0 + (p/2)δ_{1/n^s}`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::product::ProductParams;

/// Default step cap for `0 < p < 1` (3^14 ≈ 4.8M atoms).
pub const STEP_CAP_TERNARY: usize = 14;
/// Default step cap for `p = 1` (2^20 ≈ 1M atoms).
pub const STEP_CAP_BINARY: usize = 20;
/// Default coalescing radius for atom positions.
pub const DEFAULT_MERGE_EPS: f64 = 1e-12;

/// Size of the `n`-th step, `n^{-s}`. Shared with the sampler so that
/// simulated endpoints land bit-for-bit on lattice positions.
#[inline]
pub fn step_size(n: usize, s: f64) -> f64 {
    (n as f64).powf(-s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub omega: f64,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeDistribution {
    /// Sorted by position.
    pub atoms: Vec<Atom>,
    pub n_steps: usize,
    pub params: ProductParams,
    pub merge_eps: f64,
    /// Number of coalescing events during the construction.
    pub collisions: usize,
}

impl LatticeDistribution {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.prob).sum()
    }

    /// Mean and variance of the atom list.
    pub fn moments(&self) -> (f64, f64) {
        let mean: f64 = self.atoms.iter().map(|a| a.prob * a.omega).sum();
        let var = self
            .atoms
            .iter()
            .map(|a| a.prob * (a.omega - mean).powi(2))
            .sum();
        (mean, var)
    }

    /// Probability mass in `[lo, hi)`.
    pub fn mass_in(&self, lo: f64, hi: f64) -> f64 {
        let i = self.atoms.partition_point(|a| a.omega < lo);
        let j = self.atoms.partition_point(|a| a.omega < hi);
        self.atoms[i..j.max(i)].iter().map(|a| a.prob).sum()
    }

    /// Index of the atom at `omega` (within `tol`), if any.
    pub fn find(&self, omega: f64, tol: f64) -> Option<usize> {
        let i = self.atoms.partition_point(|a| a.omega < omega);
        [i.wrapping_sub(1), i]
            .into_iter()
            .filter(|&k| k < self.atoms.len())
            .filter(|&k| (self.atoms[k].omega - omega).abs() <= tol)
            .min_by(|&a, &b| {
                (self.atoms[a].omega - omega)
                    .abs()
                    .total_cmp(&(self.atoms[b].omega - omega).abs())
            })
    }
}

/// Exact `n_steps`-step law with the default step caps.
pub fn convolve_lattice(
    params: &ProductParams,
    n_steps: usize,
    merge_eps: f64,
) -> Result<LatticeDistribution> {
    let cap = if params.p() < 1.0 {
        STEP_CAP_TERNARY
    } else {
        STEP_CAP_BINARY
    };
    convolve_lattice_capped(params, n_steps, merge_eps, cap)
}

/// [`convolve_lattice`] with an explicit step cap.
pub fn convolve_lattice_capped(
    params: &ProductParams,
    n_steps: usize,
    merge_eps: f64,
    cap: usize,
) -> Result<LatticeDistribution> {
    if n_steps > cap {
        return Err(Error::Capacity {
            what: "lattice steps",
            required: n_steps as f64,
            cap: cap as f64,
        });
    }
    if !(merge_eps >= 0.0) {
        return domain(format!("merge_eps = {merge_eps} must be nonnegative"));
    }
    let p = params.p();
    let side = 0.5 * p;
    let stay = 1.0 - p;
    let mut atoms = vec![Atom {
        omega: 0.0,
        prob: 1.0,
    }];
    let mut collisions = 0;
    for n in 1..=n_steps {
        let a = step_size(n, params.s());
        let mut out: Vec<Atom> = Vec::with_capacity(atoms.len() * if stay > 0.0 { 3 } else { 2 });
        // Three (or two) shifted copies of a sorted list are each sorted:
        // merge them in one pass.
        let (mut i, mut j, mut k) = (0, if stay > 0.0 { 0 } else { atoms.len() }, 0);
        loop {
            let lo = atoms.get(i).map(|x| x.omega - a);
            let mid = atoms.get(j).map(|x| x.omega);
            let hi = atoms.get(k).map(|x| x.omega + a);
            let pick = [lo, mid, hi]
                .into_iter()
                .enumerate()
                .filter_map(|(idx, v)| v.map(|v| (idx, v)))
                .min_by(|x, y| x.1.total_cmp(&y.1));
            let Some((which, omega)) = pick else { break };
            let prob = match which {
                0 => {
                    i += 1;
                    atoms[i - 1].prob * side
                }
                1 => {
                    j += 1;
                    atoms[j - 1].prob * stay
                }
                _ => {
                    k += 1;
                    atoms[k - 1].prob * side
                }
            };
            match out.last_mut() {
                Some(last) if omega - last.omega <= merge_eps => {
                    last.prob += prob;
                    collisions += 1;
                }
                _ => out.push(Atom { omega, prob }),
            }
        }
        atoms = out;
    }
    Ok(LatticeDistribution {
        atoms,
        n_steps,
        params: *params,
        merge_eps,
        collisions,
    })
}

/// Probability `(p/2)^m (1-p)^{N-m}` of any single walk with `m` moves out of `N` steps.
pub fn atom_probability(params: &ProductParams, n_steps: usize, moves: usize) -> Result<f64> {
    if moves > n_steps {
        return domain(format!("move count {moves} exceeds step count {n_steps}"));
    }
    let p = params.p();
    Ok((0.5 * p).powi(moves as i32) * (1.0 - p).powi((n_steps - moves) as i32))
}

/// `Σ prob · e^{itω}` over the atoms.
pub fn lattice_char_fn(dist: &LatticeDistribution, t: f64) -> Complex64 {
    let (mut re, mut im) = (0.0, 0.0);
    for a in &dist.atoms {
        let (s, c) = (t * a.omega).sin_cos();
        re += a.prob * c;
        im += a.prob * s;
    }
    Complex64::new(re, im)
}

/// Finite product `Π_{n≤N} (1 - p + p cos(t/n^s))`, the transform of the `N`-step law.
pub fn finite_product(params: &ProductParams, n_steps: usize, t: f64) -> f64 {
    (1..=n_steps)
        .map(|n| params.factor(t * step_size(n, params.s())))
        .product()
}
