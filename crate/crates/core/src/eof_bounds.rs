//! Entanglement-of-formation bounds `ε(c̲) ≤ E(ρ) ≤ η(c̄)`, plus the exact
//! two-qubit value used as a reference.

use num_complex::Complex64;

use crate::conc_bounds::{concurrence_bounds, ConcurrenceBounds, LowerFamilies};
use crate::densmat::{
    hermitian_eigh, singular_values, BipartiteDensityMatrix, ComplexMatrix, SchmidtVector,
};
use crate::envelope::{EnvelopeTable, CLAMP_TOL};
use crate::error::{Error, Result};

/// `ε` of each individual lower-bound family (floored at zero before
/// evaluation). `None` when the family was not selected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentLower {
    pub ppt: Option<f64>,
    pub ccnr: Option<f64>,
    pub purity_a: Option<f64>,
    pub purity_b: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EofBoundsReport {
    /// Dimensions after orientation, `m ≤ n`.
    pub m: usize,
    pub n: usize,
    /// The input had `dim_a > dim_b` and was relabelled.
    pub swapped: bool,
    pub conc: ConcurrenceBounds,
    pub eof_lower: f64,
    pub eof_upper: f64,
    pub component_lower: ComponentLower,
}

impl EofBoundsReport {
    /// Notes about clamps and relabelling, for display.
    pub fn flags(&self) -> Vec<&'static str> {
        let mut flags = Vec::new();
        if self.swapped {
            flags.push("subsystems swapped so that m <= n");
        }
        if self.conc.lower.purity_a_clamped {
            flags.push("purity A lower bound clamped (Tr rho^2 < Tr rho_A^2)");
        }
        if self.conc.lower.purity_b_clamped {
            flags.push("purity B lower bound clamped (Tr rho^2 < Tr rho_B^2)");
        }
        flags
    }
}

/// `H(μ) = −Σ μ_i log μ_i`.
pub fn pure_eof(mu: &SchmidtVector) -> f64 {
    mu.entropy()
}

pub fn eof_bounds(rho: &BipartiteDensityMatrix, table: &EnvelopeTable) -> Result<EofBoundsReport> {
    eof_bounds_with(rho, table, LowerFamilies::all())
}

pub fn eof_bounds_with(
    rho: &BipartiteDensityMatrix,
    table: &EnvelopeTable,
    families: LowerFamilies,
) -> Result<EofBoundsReport> {
    let (rho, swapped) = rho.oriented();
    let (m, n) = (rho.dim_a(), rho.dim_b());
    if table.m != m {
        return Err(Error::DimensionMismatch(format!(
            "envelope table built for m = {}, state has m = {m}",
            table.m
        )));
    }
    let conc = concurrence_bounds(&rho, families)?;
    let eps = |c: Option<f64>| c.map(|c| table.epsilon(c.max(0.0))).transpose();
    let component_lower = ComponentLower {
        ppt: eps(conc.lower.ppt)?,
        ccnr: eps(conc.lower.ccnr)?,
        purity_a: eps(conc.lower.purity_a)?,
        purity_b: eps(conc.lower.purity_b)?,
    };
    Ok(EofBoundsReport {
        m,
        n,
        swapped,
        eof_lower: table.epsilon(conc.c_lower())?,
        eof_upper: table.eta(conc.c_upper())?,
        conc,
        component_lower,
    })
}

/// `(ε(c_low), η(c_high))` for externally supplied concurrence bounds.
pub fn eof_bounds_from_concurrence(
    c_low: f64,
    c_high: f64,
    table: &EnvelopeTable,
) -> Result<(f64, f64)> {
    if !(c_low.is_finite() && c_high.is_finite()) || c_low > c_high + CLAMP_TOL {
        return Err(Error::InvalidArgument(format!(
            "concurrence bounds must satisfy c_low <= c_high, got [{c_low}, {c_high}]"
        )));
    }
    Ok((table.epsilon(c_low)?, table.eta(c_high)?))
}

/// Two-qubit EoF as a function of concurrence: binary entropy of
/// `(1 + √(1 − C²))/2`, in nats.
pub fn two_qubit_eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    let g = (1.0 + (1.0 - c * c).sqrt()) / 2.0;
    let h = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    h(g) + h(1.0 - g)
}

fn require_two_qubits(rho: &BipartiteDensityMatrix) -> Result<()> {
    if rho.dim_a() != 2 || rho.dim_b() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit formula needs a 2x2 system, got {}x{}",
            rho.dim_a(),
            rho.dim_b()
        )));
    }
    Ok(())
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`, with `λ_i` the descending
/// square roots of the eigenvalues of `√ρ ρ̃ √ρ` and
/// `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
///
/// The `λ_i` are computed as the singular values of `τ = Wᵀ (σ_y ⊗ σ_y) W`
/// for `ρ = W W†`, which avoids taking square roots of rounding noise when
/// `ρ` is rank deficient.
pub fn two_qubit_concurrence(rho: &BipartiteDensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let eig = hermitian_eigh(rho.matrix())?;
    let cols: Vec<usize> = (0..4).filter(|&k| eig.values[k] > 0.0).collect();
    let w = ComplexMatrix::from_fn(4, cols.len(), |i, k| {
        eig.vectors[(i, cols[k])] * eig.values[cols[k]].sqrt()
    });
    // σ_y ⊗ σ_y is real and anti-diagonal: (−1, 1, 1, −1)
    let sign = [-1.0, 1.0, 1.0, -1.0];
    let tau = ComplexMatrix::from_fn(cols.len(), cols.len(), |k, l| {
        (0..4)
            .map(|i| w[(i, k)] * w[(3 - i, l)] * sign[i])
            .sum::<Complex64>()
    });
    let mut lambdas = singular_values(&tau)?;
    lambdas.resize(4, 0.0);
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Exact two-qubit EoF in nats.
pub fn two_qubit_eof_exact(rho: &BipartiteDensityMatrix) -> Result<f64> {
    Ok(two_qubit_eof_from_concurrence(two_qubit_concurrence(rho)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::{build_envelopes, DEFAULT_GRID};
    use crate::states::werner;
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn bell_vec() -> Vec<Complex64> {
        vec![c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)]
    }

    #[test]
    fn pure_eof_examples() {
        let sv = |v| SchmidtVector::new(v).unwrap();
        assert_eq!(pure_eof(&sv(vec![1.0, 0.0])), 0.0);
        assert!((pure_eof(&sv(vec![0.5, 0.5])) - LN_2).abs() < 1e-15);
        let t = 1.0 / 3.0;
        assert!((pure_eof(&sv(vec![t, t, 1.0 - 2.0 * t])) - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn bell_state_pinches() {
        let table = build_envelopes(2, DEFAULT_GRID).unwrap();
        let rho = BipartiteDensityMatrix::from_pure(&bell_vec(), 2, 2).unwrap();
        let r = eof_bounds(&rho, &table).unwrap();
        assert!((r.eof_lower - LN_2).abs() < 1e-9);
        assert!((r.eof_upper - LN_2).abs() < 1e-9);
    }

    #[test]
    fn werner_upper_is_log3() {
        let table = build_envelopes(3, DEFAULT_GRID).unwrap();
        for f in [-1.0, -0.3, 0.4] {
            let r = eof_bounds(&werner(3, f).unwrap(), &table).unwrap();
            assert!((r.eof_upper - 3f64.ln()).abs() < 1e-9);
            assert!((r.eof_upper - 1.099).abs() < 1e-3);
        }
    }

    #[test]
    fn maximally_mixed_has_zero_lower_bound() {
        let table = build_envelopes(3, DEFAULT_GRID).unwrap();
        let rho =
            BipartiteDensityMatrix::new(ComplexMatrix::identity(9).scale(1.0 / 9.0), 3, 3).unwrap();
        let r = eof_bounds(&rho, &table).unwrap();
        assert_eq!(r.eof_lower, 0.0);
        assert!(r.flags().len() == 2);
    }

    #[test]
    fn table_dimension_must_match() {
        let table = build_envelopes(3, DEFAULT_GRID).unwrap();
        let rho = BipartiteDensityMatrix::from_pure(&bell_vec(), 2, 2).unwrap();
        assert!(matches!(
            eof_bounds(&rho, &table),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn from_concurrence_examples() {
        let table = build_envelopes(3, DEFAULT_GRID).unwrap();
        let cm = 2.0 / 3f64.sqrt();
        let (lo, hi) = eof_bounds_from_concurrence(cm, cm, &table).unwrap();
        assert!((lo - 3f64.ln()).abs() < 1e-9 && (hi - 3f64.ln()).abs() < 1e-9);
        assert_eq!(
            eof_bounds_from_concurrence(0.0, 0.5, &table).unwrap().0,
            0.0
        );
        assert!(eof_bounds_from_concurrence(0.6, 0.5, &table).is_err());
        assert!(eof_bounds_from_concurrence(0.1, 1.3, &table).is_err());
    }

    #[test]
    fn wootters_examples() {
        let bell = BipartiteDensityMatrix::from_pure(&bell_vec(), 2, 2).unwrap();
        assert!((two_qubit_eof_exact(&bell).unwrap() - LN_2).abs() < 1e-9);

        let ket00 = [c(1.0), c(0.0), c(0.0), c(0.0)];
        let prod = BipartiteDensityMatrix::from_pure(&ket00, 2, 2).unwrap();
        assert!(two_qubit_eof_exact(&prod).unwrap().abs() < 1e-12);

        // 3/4 Bell + 1/4 I/4: C = 5/8
        let mixed = &ComplexMatrix::outer(&bell_vec()).scale(0.75)
            + &ComplexMatrix::identity(4).scale(0.0625);
        let rho = BipartiteDensityMatrix::new(mixed, 2, 2).unwrap();
        assert!((two_qubit_concurrence(&rho).unwrap() - 0.625).abs() < 1e-12);
        let g = (1.0 + 39f64.sqrt() / 8.0) / 2.0;
        let want = -g * g.ln() - (1.0 - g) * (1.0 - g).ln();
        assert!((two_qubit_eof_exact(&rho).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn wootters_rejects_qutrits() {
        assert!(two_qubit_concurrence(&werner(3, 0.0).unwrap()).is_err());
    }

    #[test]
    fn swapped_input_is_reported() {
        let table = build_envelopes(2, DEFAULT_GRID).unwrap();
        let ra = ComplexMatrix::from_real_diagonal(&[0.2, 0.3, 0.5]);
        let rb = ComplexMatrix::from_real_diagonal(&[0.9, 0.1]);
        let rho = BipartiteDensityMatrix::new(ra.kron(&rb), 3, 2).unwrap();
        let r = eof_bounds(&rho, &table).unwrap();
        assert!(r.swapped);
        assert_eq!((r.m, r.n), (2, 3));
        assert_eq!(r.eof_lower, 0.0);
    }
}
