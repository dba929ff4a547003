//! Fixture states: Werner states, the two-parameter `3 ⊗ 3` family, and pure
//! states assembled from Schmidt vectors.

use num_complex::Complex64;

use crate::densmat::{BipartiteDensityMatrix, ComplexMatrix, SchmidtVector};
use crate::error::{Error, Result};

/// Swap operator `F|ij⟩ = |ji⟩` on `C^d ⊗ C^d`.
pub fn flip_operator(d: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = Complex64::new(1.0, 0.0);
        }
    }
    f
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerSpec {
    pub d: usize,
    /// Flip expectation `Tr(ρ F)` in `[−1, 1]`.
    pub f: f64,
}

impl WernerSpec {
    pub fn build(&self) -> Result<BipartiteDensityMatrix> {
        werner(self.d, self.f)
    }
}

/// `ρ_f = [(d − f)·I + (d·f − 1)·F] / (d³ − d)`.
pub fn werner(d: usize, f: f64) -> Result<BipartiteDensityMatrix> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "Werner states need d >= 2, got {d}"
        )));
    }
    if !(-1.0..=1.0).contains(&f) {
        return Err(Error::Domain {
            what: "Werner parameter f",
            value: f,
        });
    }
    let df = d as f64;
    let norm = df * df * df - df;
    let flip = flip_operator(d);
    let mat = ComplexMatrix::from_fn(d * d, d * d, |i, j| {
        let id = if i == j { df - f } else { 0.0 };
        Complex64::new(id / norm, 0.0) + flip[(i, j)] * ((df * f - 1.0) / norm)
    });
    BipartiteDensityMatrix::new(mat, d, d)
}

/// `max(0, −f)`: the concurrence value that turns `η` into the `−f·log 2`
/// upper bound quoted for `d = 3` Werner states. A hint only; it is not
/// derived from the state.
pub fn werner_concurrence_hint(d: usize, f: f64) -> Result<f64> {
    if d != 3 {
        return Err(Error::Unsupported(format!(
            "concurrence hint only defined for d = 3, got {d}"
        )));
    }
    if !(-1.0..=1.0).contains(&f) {
        return Err(Error::Domain {
            what: "Werner parameter f",
            value: f,
        });
    }
    Ok((-f).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoParamSpec {
    pub a: f64,
    pub x: f64,
}

impl TwoParamSpec {
    pub fn build(&self) -> Result<BipartiteDensityMatrix> {
        example2_state(self.a, self.x)
    }
}

fn check_unit(what: &'static str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Domain { what, value: v });
    }
    Ok(())
}

/// `(a|00⟩ + |11⟩/√3 + |22⟩/√3) / √(a² + 2/3)`.
pub fn example2_psi(a: f64) -> Result<Vec<Complex64>> {
    check_unit("parameter a", a)?;
    let norm = (a * a + 2.0 / 3.0).sqrt();
    let s = 1.0 / 3f64.sqrt();
    let mut psi = vec![Complex64::new(0.0, 0.0); 9];
    psi[0] = Complex64::new(a / norm, 0.0);
    psi[4] = Complex64::new(s / norm, 0.0);
    psi[8] = Complex64::new(s / norm, 0.0);
    Ok(psi)
}

/// `(x/9)·I + (1 − x)·|ψ⟩⟨ψ|` on `3 ⊗ 3`.
pub fn example2_state(a: f64, x: f64) -> Result<BipartiteDensityMatrix> {
    check_unit("parameter x", x)?;
    let psi = example2_psi(a)?;
    let proj = ComplexMatrix::outer(&psi);
    let mat = &ComplexMatrix::identity(9).scale(x / 9.0) + &proj.scale(1.0 - x);
    BipartiteDensityMatrix::new(mat, 3, 3)
}

/// Closed-form purity functionals of [`example2_state`], evaluated without
/// building the matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example2Functionals {
    /// `Tr ρ² − Tr ρ_A²` (equal to the B version by symmetry).
    pub purity_gap: f64,
    /// `1 − Tr ρ_A²`.
    pub one_minus_purity_a: f64,
}

pub fn example2_functionals(a: f64, x: f64) -> Result<Example2Functionals> {
    check_unit("parameter a", a)?;
    check_unit("parameter x", x)?;
    let a2 = a * a;
    let a4 = a2 * a2;
    let d2 = (2.0 + 3.0 * a2).powi(2);
    let purity_gap = 2.0
        * (9.0 - 26.0 * x
            + 9.0 * a4 * (-2.0 + x) * x
            + 13.0 * x * x
            + 6.0 * a2 * (9.0 - 22.0 * x + 11.0 * x * x))
        / (9.0 * d2);
    let one_minus_purity_a = (6.0 + 4.0 * x - 18.0 * a4 * (-2.0 + x) * x - 2.0 * x * x
        + 12.0 * a2 * (3.0 - 2.0 * x + x * x))
        / (3.0 * d2);
    Ok(Example2Functionals {
        purity_gap,
        one_minus_purity_a,
    })
}

/// `Σ √μ_i |ii⟩` in `C^m ⊗ C^n` with `m = len(μ)`.
pub fn pure_from_schmidt(mu: &SchmidtVector, n: usize) -> Result<Vec<Complex64>> {
    let m = mu.len();
    if n < m {
        return Err(Error::DimensionMismatch(format!(
            "{m} Schmidt coefficients do not fit a B dimension of {n}"
        )));
    }
    let mut psi = vec![Complex64::new(0.0, 0.0); m * n];
    for (i, &w) in mu.coeffs().iter().enumerate() {
        psi[i * n + i] = Complex64::new(w.sqrt(), 0.0);
    }
    Ok(psi)
}
