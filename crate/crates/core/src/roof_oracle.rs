//! Brute-force convex-roof estimates and seeded random states.
//!
//! Every `K`-element decomposition of a rank-`r` state
//! `ρ = Σ_j λ_j |e_j⟩⟨e_j|` is `|ψ̃_i⟩ = Σ_j U_ij √λ_j |e_j⟩` for a `K×r`
//! isometry `U`. The estimator runs a randomized local search over `U`; the
//! best average it finds is an upper estimate of the roof.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::densmat::{hermitian_eigh, BipartiteDensityMatrix, ComplexMatrix, EIG_FLOOR};
use crate::error::{Error, Result};

/// Pure-state functional averaged over the ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoofObjective {
    /// Entanglement entropy of the reduced state.
    Eof,
    /// `√(2(1 − Tr ρ_A²))`.
    Concurrence,
}

/// Search schedule for [`convex_roof_estimate_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoofOptions {
    pub initial_step: f64,
    /// Step multiplier applied after `patience` consecutive rejections.
    pub shrink: f64,
    pub patience: usize,
    pub min_step: f64,
    pub max_iterations: usize,
}

impl Default for RoofOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.3,
            shrink: 0.7,
            patience: 8,
            min_step: 1e-6,
            max_iterations: 5000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoofEstimate {
    /// Smallest ensemble average found.
    pub value: f64,
    pub ensemble_size: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Search iterations summed over restarts.
    pub iterations: usize,
    /// Whether the winning restart stopped on the step-size criterion.
    pub converged: bool,
}

const RANK_TOL: f64 = 1e-12;

struct RoofProblem {
    dim_a: usize,
    dim_b: usize,
    /// `√λ_j e_j`, one entry per retained eigenpair.
    weighted: Vec<Vec<Complex64>>,
    objective: RoofObjective,
}

impl RoofProblem {
    fn rank(&self) -> usize {
        self.weighted.len()
    }

    /// Average objective of the ensemble generated by the row-major `K×r` isometry `u`.
    fn evaluate(&self, u: &[Complex64], k: usize, psi: &mut [Complex64]) -> f64 {
        let r = self.rank();
        let mut total = 0.0;
        for i in 0..k {
            psi.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            for j in 0..r {
                let coef = u[i * r + j];
                for (p, w) in psi.iter_mut().zip(&self.weighted[j]) {
                    *p += coef * w;
                }
            }
            total += self.pure_term(psi);
        }
        total
    }

    /// `p·f(ψ̃/√p)` for an unnormalized vector `ψ̃` with `p = ‖ψ̃‖²`.
    fn pure_term(&self, psi: &[Complex64]) -> f64 {
        let p: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if p <= 0.0 {
            return 0.0;
        }
        let reduced = reduced_small(psi, self.dim_a, self.dim_b);
        match self.objective {
            RoofObjective::Concurrence => {
                let s = reduced.len_side;
                let tr2: f64 = (0..s)
                    .flat_map(|i| (0..s).map(move |j| (i, j)))
                    .map(|(i, j)| reduced.get(i, j).norm_sqr())
                    .sum();
                (2.0 * (p * p - tr2)).max(0.0).sqrt()
            }
            RoofObjective::Eof => {
                let mut s = p * p.ln();
                for nu in reduced.eigenvalues() {
                    if nu > EIG_FLOOR * p {
                        s -= nu * nu.ln();
                    }
                }
                s.max(0.0)
            }
        }
    }
}

/// Unnormalized reduced state on the smaller factor.
struct SmallHermitian {
    len_side: usize,
    data: Vec<Complex64>,
}

impl SmallHermitian {
    fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.len_side + j]
    }

    fn eigenvalues(&self) -> Vec<f64> {
        match self.len_side {
            1 => vec![self.data[0].re],
            2 => {
                let (a, d) = (self.data[0].re, self.data[3].re);
                let b = self.data[1];
                let mean = 0.5 * (a + d);
                let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
                vec![mean + rad, mean - rad]
            }
            s => {
                let m = DMatrix::from_row_slice(s, s, &self.data);
                SymmetricEigen::new(m).eigenvalues.iter().copied().collect()
            }
        }
    }
}

fn reduced_small(psi: &[Complex64], dim_a: usize, dim_b: usize) -> SmallHermitian {
    if dim_a <= dim_b {
        let mut data = vec![Complex64::new(0.0, 0.0); dim_a * dim_a];
        for i in 0..dim_a {
            for j in 0..dim_a {
                data[i * dim_a + j] = (0..dim_b)
                    .map(|k| psi[i * dim_b + k] * psi[j * dim_b + k].conj())
                    .sum();
            }
        }
        SmallHermitian {
            len_side: dim_a,
            data,
        }
    } else {
        let mut data = vec![Complex64::new(0.0, 0.0); dim_b * dim_b];
        for k in 0..dim_b {
            for l in 0..dim_b {
                data[k * dim_b + l] = (0..dim_a)
                    .map(|i| psi[i * dim_b + k] * psi[i * dim_b + l].conj())
                    .sum();
            }
        }
        SmallHermitian {
            len_side: dim_b,
            data,
        }
    }
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Orthonormalizes the columns of a row-major `rows×cols` matrix in place
/// (modified Gram–Schmidt). Returns false if a column collapses.
fn orthonormalize_columns(u: &mut [Complex64], rows: usize, cols: usize) -> bool {
    for j in 0..cols {
        for prev in 0..j {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in 0..rows {
                dot += u[i * cols + prev].conj() * u[i * cols + j];
            }
            for i in 0..rows {
                let p = u[i * cols + prev];
                u[i * cols + j] -= dot * p;
            }
        }
        let norm = (0..rows)
            .map(|i| u[i * cols + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if norm < 1e-14 {
            return false;
        }
        for i in 0..rows {
            u[i * cols + j] /= norm;
        }
    }
    true
}

fn random_isometry(rng: &mut impl Rng, rows: usize, cols: usize) -> Vec<Complex64> {
    loop {
        let mut u: Vec<Complex64> = (0..rows * cols).map(|_| gaussian(rng)).collect();
        if orthonormalize_columns(&mut u, rows, cols) {
            return u;
        }
    }
}

struct RestartOutcome {
    value: f64,
    iterations: usize,
    converged: bool,
}

fn run_restart(
    problem: &RoofProblem,
    k: usize,
    seed: u64,
    restart: usize,
    opts: &RoofOptions,
) -> RestartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    let r = problem.rank();
    let d = problem.dim_a * problem.dim_b;
    let mut psi = vec![Complex64::new(0.0, 0.0); d];

    let mut u = random_isometry(&mut rng, k, r);
    let mut best = problem.evaluate(&u, k, &mut psi);
    let mut step = opts.initial_step;
    let mut rejections = 0;
    let mut iterations = 0;
    let mut converged = false;
    let mut cand = u.clone();
    while iterations < opts.max_iterations {
        iterations += 1;
        for (c, x) in cand.iter_mut().zip(&u) {
            *c = x + gaussian(&mut rng) * step;
        }
        let accepted = orthonormalize_columns(&mut cand, k, r) && {
            let v = problem.evaluate(&cand, k, &mut psi);
            if v < best {
                best = v;
                true
            } else {
                false
            }
        };
        if accepted {
            std::mem::swap(&mut u, &mut cand);
            rejections = 0;
        } else {
            rejections += 1;
            if rejections >= opts.patience {
                rejections = 0;
                step *= opts.shrink;
                if step < opts.min_step {
                    converged = true;
                    break;
                }
            }
        }
    }
    RestartOutcome {
        value: best,
        iterations,
        converged,
    }
}

pub fn convex_roof_estimate(
    rho: &BipartiteDensityMatrix,
    objective: RoofObjective,
    ensemble_size: usize,
    restarts: usize,
    seed: u64,
) -> Result<RoofEstimate> {
    convex_roof_estimate_with(
        rho,
        objective,
        ensemble_size,
        restarts,
        seed,
        &RoofOptions::default(),
    )
}

/// Upper estimate of the convex roof of `objective` at `rho`. Restarts are
/// independent (restart `i` draws from stream `i` of the seeded generator)
/// and merged by minimum, so the result does not depend on scheduling and
/// more restarts never give a larger value.
pub fn convex_roof_estimate_with(
    rho: &BipartiteDensityMatrix,
    objective: RoofObjective,
    ensemble_size: usize,
    restarts: usize,
    seed: u64,
    opts: &RoofOptions,
) -> Result<RoofEstimate> {
    if restarts == 0 {
        return Err(Error::InvalidArgument(
            "at least one restart is required".into(),
        ));
    }
    let d = rho.dim_a() * rho.dim_b();
    let eig = hermitian_eigh(rho.matrix())?;
    let weighted: Vec<Vec<Complex64>> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > RANK_TOL)
        .map(|(k, &l)| {
            eig.eigenvector(k)
                .into_iter()
                .map(|z| z * l.sqrt())
                .collect()
        })
        .collect();
    let rank = weighted.len();
    if ensemble_size < rank || ensemble_size > 4 * d {
        return Err(Error::InvalidArgument(format!(
            "ensemble size {ensemble_size} must lie in [rank = {rank}, {}]",
            4 * d
        )));
    }
    let problem = RoofProblem {
        dim_a: rho.dim_a(),
        dim_b: rho.dim_b(),
        weighted,
        objective,
    };
    if rank == 1 {
        let value = problem.pure_term(&problem.weighted[0]);
        return Ok(RoofEstimate {
            value,
            ensemble_size,
            restarts,
            seed,
            iterations: 0,
            converged: true,
        });
    }
    let outcomes: Vec<RestartOutcome> = (0..restarts)
        .into_par_iter()
        .map(|r| run_restart(&problem, ensemble_size, seed, r, opts))
        .collect();
    let best = outcomes
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one restart");
    Ok(RoofEstimate {
        value: best.value,
        ensemble_size,
        restarts,
        seed,
        iterations: outcomes.iter().map(|o| o.iterations).sum(),
        converged: best.converged,
    })
}

fn ginibre_state(rng: &mut impl Rng, m: usize, n: usize, rank: usize) -> BipartiteDensityMatrix {
    let d = m * n;
    let g: Vec<Complex64> = (0..d * rank).map(|_| gaussian(rng)).collect();
    let mut mat = ComplexMatrix::from_fn(d, d, |i, j| {
        (0..rank)
            .map(|k| g[i * rank + k] * g[j * rank + k].conj())
            .sum()
    });
    for i in 0..d {
        mat[(i, i)].im = 0.0;
    }
    let tr = mat.trace().re;
    BipartiteDensityMatrix::from_parts_unchecked(mat.scale(1.0 / tr), m, n)
}

/// `G·G†/Tr(G·G†)` with `G` an `(mn)×rank` matrix of standard complex
/// Gaussians drawn from `rng`.
pub fn random_density_matrix_with(
    rng: &mut impl Rng,
    m: usize,
    n: usize,
    rank: usize,
) -> Result<BipartiteDensityMatrix> {
    if m == 0 || n == 0 || rank == 0 || rank > m * n {
        return Err(Error::InvalidArgument(format!(
            "rank {rank} must lie in [1, {}] for a {m}x{n} system",
            m * n
        )));
    }
    Ok(ginibre_state(rng, m, n, rank))
}

/// Seeded Ginibre state; the same seed always yields the same matrix.
pub fn random_density_matrix(
    m: usize,
    n: usize,
    rank: usize,
    seed: u64,
) -> Result<BipartiteDensityMatrix> {
    random_density_matrix_with(&mut ChaCha8Rng::seed_from_u64(seed), m, n, rank)
}

/// Haar-random normalized amplitude vector of length `dim`.
pub fn random_pure_state(rng: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    let mut psi: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    psi.iter_mut().for_each(|z| *z /= norm);
    psi
}

/// Haar-random `d×d` unitary.
pub fn random_unitary(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    let u = random_isometry(rng, d, d);
    ComplexMatrix::new(d, d, u).expect("finite entries")
}
