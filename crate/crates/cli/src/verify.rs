//! Self-checks runnable from the command line. Every suite is deterministic
//! for a given seed; on failure the first offending state is written out.

use std::f64::consts::LN_2;
use std::fmt;
use std::path::Path;

use eof_core::conc_bounds::concurrence_bounds;
use eof_core::densmat::{purity, von_neumann_entropy};
use eof_core::envelope::{
    big_x, big_y, epsilon_m3_closed, eta_m3_closed, f_value, segment_rules, Curvature, Piece,
};
use eof_core::eof_bounds::{
    eof_bounds_from_concurrence, two_qubit_concurrence, two_qubit_eof_exact,
};
use eof_core::roof_oracle::{convex_roof_estimate, random_density_matrix, RoofObjective};
use eof_core::states::{example2_functionals, example2_state, werner, werner_concurrence_hint};
use eof_core::{build_envelopes, eof_bounds, BipartiteDensityMatrix, EnvelopeTable, LowerFamilies};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::matrix_file;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    TwoQubit,
    PureSandwich,
    EnvelopeHull,
    RoofConsistency,
    Fixtures,
}

impl Suite {
    /// Sample count used when `--n` is not given.
    pub fn default_n(self) -> usize {
        match self {
            Self::TwoQubit | Self::PureSandwich => 1000,
            Self::RoofConsistency => 20,
            Self::EnvelopeHull | Self::Fixtures => 0,
        }
    }
}

pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub state: Option<BipartiteDensityMatrix>,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
            state: None,
        }
    }

    fn with_state(mut self, state: BipartiteDensityMatrix) -> Self {
        self.state = Some(state);
        self
    }

    fn close(name: &str, got: f64, want: f64, tol: f64) -> Self {
        let err = (got - want).abs();
        Self::new(
            name,
            err <= tol,
            format!("got {got:.9}, want {want:.9}, |diff| = {err:.2e} (tol {tol:.0e})"),
        )
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {}", self.name, self.detail)
    }
}

/// Outcome of one sampled state; `None` when it passes.
type Sample = Result<Option<(String, BipartiteDensityMatrix)>>;

/// Runs `check` on `n` seeded samples and folds the results into one check.
fn sampled(name: &str, n: usize, check: impl Fn(usize) -> Sample + Sync) -> Result<Check> {
    let failures: Vec<(usize, String, BipartiteDensityMatrix)> = (0..n)
        .into_par_iter()
        .map(|k| Ok(check(k)?.map(|(why, rho)| (k, why, rho))))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(match failures.into_iter().next() {
        None => Check::new(name, true, format!("{n} samples, no violations")),
        Some((k, why, rho)) => {
            Check::new(name, false, format!("sample {k}: {why}")).with_state(rho)
        }
    })
}

fn two_qubit(n: usize, seed: u64) -> Result<Vec<Check>> {
    let table = build_envelopes(2, 4096)?;
    let check = sampled("two-qubit sandwich", n, |k| {
        let rho = random_density_matrix(2, 2, 1 + k % 4, seed.wrapping_add(k as u64))?;
        let r = eof_bounds(&rho, &table)?;
        let exact = two_qubit_eof_exact(&rho)?;
        let at_exact = table.epsilon(two_qubit_concurrence(&rho)?)?;
        Ok(
            if r.eof_lower > exact + 1e-9 || exact > r.eof_upper + 1e-9 {
                Some((
                    format!("{} <= {exact} <= {} fails", r.eof_lower, r.eof_upper),
                    rho,
                ))
            } else if (at_exact - exact).abs() > 1e-6 {
                Some((format!("epsilon(C) = {at_exact} but E = {exact}"), rho))
            } else {
                None
            },
        )
    })?;
    Ok(vec![check])
}

fn pure_sandwich(n: usize, seed: u64) -> Result<Vec<Check>> {
    let tables: Vec<EnvelopeTable> = (2..=4)
        .map(|m| build_envelopes(m, 4096))
        .collect::<eof_core::Result<_>>()?;
    let check = sampled("pure-state sandwich", n, |k| {
        let (m, d) = (2 + k % 3, 2 + (k / 3) % 3);
        let rho = random_density_matrix(m, d, 1, seed.wrapping_add(k as u64))?;
        let table = &tables[m.min(d) - 2];
        let r = eof_bounds(&rho, table)?;
        let ra = rho.reduced_a();
        let entropy = von_neumann_entropy(&ra)?;
        let c = (2.0 * (1.0 - purity(&ra)?)).max(0.0).sqrt();
        Ok(
            if (r.conc.c_lower() - c).abs() > 1e-9 || (r.conc.c_upper() - c).abs() > 1e-9 {
                Some((
                    format!(
                        "concurrence bounds [{}, {}] miss C = {c}",
                        r.conc.c_lower(),
                        r.conc.c_upper()
                    ),
                    rho,
                ))
            } else if r.eof_lower > entropy + 1e-9 || entropy > r.eof_upper + 1e-9 {
                Some((
                    format!("{} <= {entropy} <= {} fails", r.eof_lower, r.eof_upper),
                    rho,
                ))
            } else {
                None
            },
        )
    })?;
    Ok(vec![check])
}

fn envelope_hull(grid: usize) -> Result<Vec<Check>> {
    (2..=6)
        .map(|m| {
            let v = build_envelopes(m, grid)?.violations();
            let detail = if v.is_empty() {
                "convex/concave, monotone, bounded, endpoints exact".into()
            } else {
                v.join("; ")
            };
            Ok(Check::new(format!("hull m={m}"), v.is_empty(), detail))
        })
        .collect()
}

fn roof_consistency(n: usize, seed: u64) -> Result<Vec<Check>> {
    let table = build_envelopes(3, 4096)?;
    let mut failure = None;
    // restarts already run in parallel inside the estimator
    for k in 0..n {
        let s = seed.wrapping_add(k as u64);
        let rho = random_density_matrix(3, 3, 1 + k % 4, s)?;
        let lower = eof_bounds(&rho, &table)?.eof_lower;
        let roof = convex_roof_estimate(&rho, RoofObjective::Eof, 12, 16, s)?;
        if roof.value < lower - 1e-9 {
            failure = Some(
                Check::new(
                    "roof >= lower bound",
                    false,
                    format!("sample {k}: roof {} < {lower}", roof.value),
                )
                .with_state(rho),
            );
            break;
        }
    }
    Ok(vec![failure.unwrap_or_else(|| {
        Check::new(
            "roof >= lower bound",
            true,
            format!("{n} samples, no violations"),
        )
    })])
}

fn fixtures(grid: usize) -> Result<Vec<Check>> {
    let t3 = build_envelopes(3, grid)?;
    let ln3 = 3f64.ln();
    let c_max3 = 2.0 / 3f64.sqrt();
    let mut out = Vec::new();

    // Werner family, d = 3
    let mut reduced = 0.0f64;
    let mut upper = 0.0f64;
    for k in 0..=20 {
        let rho = werner(3, -1.0 + 0.1 * k as f64)?;
        reduced = reduced.max((1.0 - purity(&rho.reduced_a())? - 2.0 / 3.0).abs());
        upper = upper.max((eof_bounds(&rho, &t3)?.eof_upper - 1.099).abs());
    }
    out.push(Check::new(
        "werner 1 - Tr rho_A^2 = 2/3",
        reduced <= 1e-12,
        format!("max |diff| = {reduced:.1e}"),
    ));
    out.push(Check::new(
        "werner EoF <= 1.099",
        upper <= 1e-3,
        format!("max |eof_upper - 1.099| = {upper:.1e}"),
    ));
    for f in [-1.0, -0.75, -0.5, -0.25] {
        let c = werner_concurrence_hint(3, f)?;
        let (_, up) = eof_bounds_from_concurrence(c, c, &t3)?;
        out.push(
            Check::close(
                &format!("werner f={f}: upper = -f log 2"),
                up,
                -f * LN_2,
                1e-9,
            )
            .with_state(werner(3, f)?),
        );
    }

    // level-set extremes and envelopes for m = 3
    out.push(Check::close(
        "F11(1) = log 2",
        f_value(1, 1, 1.0)?,
        LN_2,
        1e-12,
    ));
    out.push(Check::close("Y(1) = log 2", big_y(3, 1.0)?, LN_2, 1e-12));
    out.push(Check::close("X(1) = log 2", big_x(3, 1.0)?, LN_2, 1e-12));
    let (mut eps_err, mut eta_err) = (0.0f64, 0.0f64);
    for i in 0..1000 {
        let c = c_max3 * i as f64 / 999.0;
        eps_err = eps_err.max((t3.epsilon(c)? - epsilon_m3_closed(c)?).abs());
        eta_err = eta_err.max((t3.eta(c)? - eta_m3_closed(c)?).abs());
    }
    out.push(Check::new(
        "epsilon matches m=3 closed form",
        eps_err <= 1e-4,
        format!("max |diff| = {eps_err:.2e}"),
    ));
    out.push(Check::new(
        "eta matches m=3 closed form",
        eta_err <= 1e-4,
        format!("max |diff| = {eta_err:.2e}"),
    ));
    out.push(Check::close(
        "eta(c_max) = log 3",
        t3.eta(c_max3)?,
        ln3,
        1e-9,
    ));
    out.push(Check::close(
        "eta(0.5) = 0.5 log 2",
        t3.eta(0.5)?,
        0.5 * LN_2,
        1e-6,
    ));
    out.push(Check::close(
        "epsilon(1) = log 2",
        t3.epsilon(1.0)?,
        LN_2,
        1e-9,
    ));
    out.push(Check::close(
        "closed-form epsilon(1) = log 2",
        epsilon_m3_closed(1.0)?,
        LN_2,
        1e-12,
    ));
    out.push(Check::close(
        "closed-form eta(c_max) = log 3",
        eta_m3_closed(c_max3)?,
        ln3,
        1e-12,
    ));
    let rules = segment_rules(3, 1e-4)?;
    let s = &rules.segments;
    let curvature_ok = s[0].lower_curvature == Curvature::Convex
        && s[1].lower_curvature == Curvature::Concave
        && s[1].upper_curvature == Curvature::Convex;
    out.push(Check::new(
        "m=3 curvature signs",
        curvature_ok,
        format!(
            "{:?}",
            s.iter()
                .map(|r| (r.upper_curvature, r.lower_curvature))
                .collect::<Vec<_>>()
        ),
    ));
    let structure_ok = (s[0].eps_piece, s[1].eps_piece) == (Piece::Curve, Piece::Chord)
        && (s[0].eta_piece, s[1].eta_piece) == (Piece::Chord, Piece::Chord);
    out.push(Check::new(
        "m=3 curve/chord structure",
        structure_ok,
        format!(
            "{:?}",
            s.iter()
                .map(|r| (r.eps_piece, r.eta_piece))
                .collect::<Vec<_>>()
        ),
    ));

    // two-parameter family
    let mut gap = 0.0f64;
    for i in 0..20 {
        for j in 0..20 {
            let (a, x) = (i as f64 / 19.0, j as f64 / 19.0);
            let rho = example2_state(a, x)?;
            let pa = purity(&rho.reduced_a())?;
            let f = example2_functionals(a, x)?;
            gap = gap
                .max((rho.purity() - pa - f.purity_gap).abs())
                .max((1.0 - pa - f.one_minus_purity_a).abs());
        }
    }
    out.push(Check::new(
        "two-param purity closed forms",
        gap <= 1e-10,
        format!("max |diff| = {gap:.1e}"),
    ));
    let mut coeff = 0.0f64;
    for k in 0..=10 {
        let a = k as f64 / 10.0;
        let b = concurrence_bounds(&example2_state(a, 0.1)?, LowerFamilies::PURITY_A)?;
        let d = 2.0 + 3.0 * a * a;
        let lower = 2.0 * (6.53 + 41.46 * a * a - 1.71 * a.powi(4)).sqrt() / (3.0 * d);
        let upper = (2.0 * (6.38 + 33.72 * a * a + 3.42 * a.powi(4)) / 3.0).sqrt() / d;
        coeff = coeff
            .max(((b.c_lower() - lower) / lower).abs())
            .max(((b.c_upper() - upper) / upper).abs());
    }
    out.push(Check::new(
        "x=0.1 reference coefficients",
        coeff <= 5e-3,
        format!("max relative diff = {coeff:.1e}"),
    ));

    let ppt: Vec<(f64, f64)> = (0..=200)
        .map(|k| {
            let a = k as f64 * 0.005;
            let b = concurrence_bounds(&example2_state(a, 0.6)?, LowerFamilies::PPT)?;
            Ok((a, b.lower.ppt.unwrap_or(f64::NAN)))
        })
        .collect::<Result<_>>()?;
    let boundary = ppt
        .windows(2)
        .find(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0))
        .map(|w| w[1].0);
    let detail = match boundary {
        Some(a) => format!("PPT component turns positive at a = {a:.3}"),
        None => format!(
            "PPT component never changes sign (min {:.4})",
            ppt.iter().map(|p| p.1).fold(f64::INFINITY, f64::min)
        ),
    };
    out.push(
        Check::new(
            "x=0.6 PPT boundary in [0.195, 0.215]",
            boundary.is_some_and(|a| (0.195..=0.215).contains(&a)),
            detail,
        )
        .with_state(example2_state(0.205, 0.6)?),
    );

    let mut margin = f64::INFINITY;
    for k in 0..=32 {
        let r = eof_bounds(&example2_state(0.5 + 0.005 * k as f64, 0.1)?, &t3)?;
        margin = margin.min(
            r.component_lower.ppt.unwrap_or(f64::NAN)
                - r.component_lower.purity_a.unwrap_or(f64::NAN),
        );
    }
    out.push(Check::new(
        "x=0.1 eps(ppt) >= eps(purity)",
        margin >= 0.0,
        format!("min margin {margin:.3e}"),
    ));

    // states are only attached to failing checks
    for c in &mut out {
        if c.passed {
            c.state = None;
        }
    }
    Ok(out)
}

/// Runs a suite, prints one line per check and returns an error naming the
/// failures when any check fails.
pub fn run(suite: Suite, n: Option<usize>, seed: u64, grid: usize, dump: &Path) -> Result<()> {
    let n = n.unwrap_or(suite.default_n());
    let checks = match suite {
        Suite::TwoQubit => two_qubit(n, seed)?,
        Suite::PureSandwich => pure_sandwich(n, seed)?,
        Suite::EnvelopeHull => envelope_hull(grid)?,
        Suite::RoofConsistency => roof_consistency(n, seed)?,
        Suite::Fixtures => fixtures(grid)?,
    };
    for c in &checks {
        println!("{c}");
    }
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
    println!(
        "{} of {} checks passed",
        checks.len() - failed.len(),
        checks.len()
    );
    if failed.is_empty() {
        return Ok(());
    }
    let mut msg = format!("{} check(s) failed", failed.len());
    if let Some((name, rho)) = failed
        .iter()
        .find_map(|c| c.state.as_ref().map(|s| (&c.name, s)))
    {
        matrix_file::write(dump, rho)?;
        msg.push_str(&format!(
            "; state for {name:?} written to {}",
            dump.display()
        ));
    }
    Err(CliError::VerifyFailed(msg))
}
