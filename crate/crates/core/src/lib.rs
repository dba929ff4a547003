//! Analytical lower and upper bounds on the entanglement of formation of
//! bipartite `m ⊗ n` density matrices.
//!
//! The bounds compose closed-form concurrence bounds ([`conc_bounds`]) with
//! the transfer functions `ε` and `η` ([`envelope`]), the greatest monotone
//! convex minorant and least monotone concave majorant of the entropy
//! extremes over concurrence level sets:
//!
//! ```text
//! ε(c̲) ≤ ε(C(ρ)) ≤ E(ρ) ≤ η(C(ρ)) ≤ η(c̄)
//! ```
//!
//! [`roof_oracle`] provides brute-force convex-roof estimates and
//! [`eof_bounds::two_qubit_eof_exact`] the exact two-qubit value, both used to
//! check the sandwich. All logarithms are natural.

pub mod conc_bounds;
pub mod densmat;
pub mod envelope;
pub mod eof_bounds;
pub mod error;
pub mod roof_oracle;
pub mod states;

pub use conc_bounds::{
    concurrence_bounds, concurrence_lower, concurrence_upper, ConcurrenceBounds, LowerFamilies,
};
pub use densmat::{BipartiteDensityMatrix, ComplexMatrix, SchmidtVector, Subsystem};
pub use envelope::{build_envelopes, build_envelopes_with, EnvelopeMethod, EnvelopeTable};
pub use eof_bounds::{eof_bounds, eof_bounds_from_concurrence, EofBoundsReport};
pub use error::{Error, Result};
pub use num_complex::Complex64;
