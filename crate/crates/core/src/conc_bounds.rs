//! Closed-form lower and upper bounds on the mixed-state concurrence.
//!
//! Lower candidates, with `m = min(dim_a, dim_b)`:
//!
//! * PPT: `√(2/(m(m−1)))·(‖ρ^{T_A}‖₁ − 1)`
//! * CCNR: `√(2/(m(m−1)))·(‖R(ρ)‖₁ − 1)`
//! * purity A/B: `√(2[Tr ρ² − Tr ρ_{A,B}²])`
//!
//! Upper candidates: `√(2[1 − Tr ρ_{A,B}²])`.

use bitflags::bitflags;

use crate::densmat::{trace_norm, BipartiteDensityMatrix};
use crate::envelope::c_max;
use crate::error::{Error, Result};

bitflags! {
    /// Selects which lower-bound families enter the maximum.
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
    pub struct LowerFamilies: u8 {
        const PPT = 1;
        const CCNR = 1 << 1;
        const PURITY_A = 1 << 2;
        const PURITY_B = 1 << 3;
    }
}

impl Default for LowerFamilies {
    fn default() -> Self {
        Self::all()
    }
}

/// Lower-side ingredients. `ppt` and `ccnr` are reported before flooring and
/// may be negative; the purity components are clamped at zero when their
/// radicand is negative, with the clamp recorded. Unselected families are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerConcurrence {
    pub m: usize,
    pub ppt: Option<f64>,
    pub ccnr: Option<f64>,
    pub purity_a: Option<f64>,
    pub purity_b: Option<f64>,
    pub purity_a_clamped: bool,
    pub purity_b_clamped: bool,
    /// `max(0, selected components)`.
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperConcurrence {
    pub upper_a: f64,
    pub upper_b: f64,
    /// `min(upper_a, upper_b)`.
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceBounds {
    pub lower: LowerConcurrence,
    pub upper: UpperConcurrence,
}

impl ConcurrenceBounds {
    pub fn m(&self) -> usize {
        self.lower.m
    }

    pub fn c_lower(&self) -> f64 {
        self.lower.value
    }

    pub fn c_upper(&self) -> f64 {
        self.upper.value
    }
}

fn normalization(m: usize) -> f64 {
    (2.0 / (m * (m - 1)) as f64).sqrt()
}

/// Purity gaps this close to zero are rounding noise; without the snap a
/// separable state could pick up a spurious `√(2·1e-16) ≈ 1e-8` component.
pub const PURITY_GAP_TOL: f64 = 1e-14;

/// `‖·‖₁ − 1` within this of zero is taken as exactly zero.
pub const TRACE_NORM_TOL: f64 = 1e-13;

fn norm_component(k: f64, norm: f64) -> f64 {
    let excess = norm - 1.0;
    if excess.abs() <= TRACE_NORM_TOL {
        0.0
    } else {
        k * excess
    }
}

fn purity_component(gap: f64) -> (f64, bool) {
    if gap < -PURITY_GAP_TOL {
        (0.0, true)
    } else if gap <= PURITY_GAP_TOL {
        (0.0, false)
    } else {
        ((2.0 * gap).sqrt(), false)
    }
}

pub fn concurrence_lower(
    rho: &BipartiteDensityMatrix,
    families: LowerFamilies,
) -> Result<LowerConcurrence> {
    let m = rho.min_dim();
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "a {}x{} system carries no entanglement",
            rho.dim_a(),
            rho.dim_b()
        )));
    }
    let k = normalization(m);
    let ppt = if families.contains(LowerFamilies::PPT) {
        Some(norm_component(k, trace_norm(&rho.partial_transpose_a())?))
    } else {
        None
    };
    let ccnr = if families.contains(LowerFamilies::CCNR) {
        Some(norm_component(k, trace_norm(&rho.realign())?))
    } else {
        None
    };
    let p = rho.purity();
    let (mut purity_a, mut purity_a_clamped) = (None, false);
    if families.contains(LowerFamilies::PURITY_A) {
        let (v, clamped) = purity_component(p - crate::densmat::purity(&rho.reduced_a())?);
        purity_a = Some(v);
        purity_a_clamped = clamped;
    }
    let (mut purity_b, mut purity_b_clamped) = (None, false);
    if families.contains(LowerFamilies::PURITY_B) {
        let (v, clamped) = purity_component(p - crate::densmat::purity(&rho.reduced_b())?);
        purity_b = Some(v);
        purity_b_clamped = clamped;
    }
    let value = [ppt, ccnr, purity_a, purity_b]
        .into_iter()
        .flatten()
        .fold(0.0, f64::max);
    Ok(LowerConcurrence {
        m,
        ppt,
        ccnr,
        purity_a,
        purity_b,
        purity_a_clamped,
        purity_b_clamped,
        value,
    })
}

pub fn concurrence_upper(rho: &BipartiteDensityMatrix) -> Result<UpperConcurrence> {
    let upper = |reduced| -> Result<f64> {
        Ok((2.0 * (1.0 - crate::densmat::purity(&reduced)?))
            .max(0.0)
            .sqrt())
    };
    let upper_a = upper(rho.reduced_a())?;
    let upper_b = upper(rho.reduced_b())?;
    Ok(UpperConcurrence {
        upper_a,
        upper_b,
        value: upper_a.min(upper_b),
    })
}

pub fn concurrence_bounds(
    rho: &BipartiteDensityMatrix,
    families: LowerFamilies,
) -> Result<ConcurrenceBounds> {
    let lower = concurrence_lower(rho, families)?;
    let upper = concurrence_upper(rho)?;
    debug_assert!(upper.value <= c_max(lower.m) + 1e-9);
    Ok(ConcurrenceBounds { lower, upper })
}
