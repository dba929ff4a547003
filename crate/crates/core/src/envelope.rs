//! Entropy extremes on concurrence level sets and their monotone envelopes.
//!
//! For a pure state with Schmidt vector `μ` the concurrence is
//! `c = √(2(1 − Σ μ_i²))`. Among all `μ` on the level set of `c`:
//!
//! * `Y(c)` is the smallest entropy, reached by `t` equal entries `α` and one
//!   smaller entry `β` (the family `F_{t,1}`), with `t` fixed by the segment
//!   `c ∈ (√(2(t−1)/t), √(2t/(t+1))]`;
//! * `X(c)` is the largest entropy, reached by one large entry `α` and `m − 1`
//!   equal entries `β` (the family `F_{1,m−1}`) on the whole range.
//!
//! `ε` is the greatest monotone convex minorant of `Y` and `η` the least
//! monotone concave majorant of `X`. Both are built as hulls of sampled
//! curves; the per-segment curve/chord rules and the `m = 3` closed forms are
//! kept alongside for cross-checking.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};

/// Values of `c` this far past `c_max` are clamped instead of rejected.
pub const CLAMP_TOL: f64 = 1e-9;
/// Default number of uniform grid samples.
pub const DEFAULT_GRID: usize = 4096;
/// Smallest accepted grid.
pub const MIN_GRID: usize = 64;
/// Default step for the finite-difference curvature probe.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

const DISC_TOL: f64 = 1e-12;
const CURVATURE_TOL: f64 = 1e-5;
const CURVATURE_SAMPLES: usize = 64;

/// `h(x) = −x log x` with `h(0) = 0`.
pub fn h(x: f64) -> Result<f64> {
    if !(-DISC_TOL..=1.0 + DISC_TOL).contains(&x) || x.is_nan() {
        return Err(Error::Domain {
            what: "h argument",
            value: x,
        });
    }
    Ok(h_unchecked(x.clamp(0.0, 1.0)))
}

#[inline]
fn h_unchecked(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

/// Largest concurrence for an `m`-level Schmidt vector, `√(2(m−1)/m)`.
pub fn c_max(m: usize) -> f64 {
    let m = m as f64;
    (2.0 * (m - 1.0) / m).sqrt()
}

/// Endpoints `(√(2(t−1)/t), √(2t/(t+1)))` of segment `t ≥ 1`.
pub fn segment_bounds(t: usize) -> (f64, f64) {
    (c_max(t), c_max(t + 1))
}

/// Segment index `t ∈ [1, m−1]` with `c ∈ (√(2(t−1)/t), √(2t/(t+1))]`;
/// `c = 0` belongs to segment 1.
pub fn segment_of(m: usize, c: f64) -> usize {
    let mut t = 1;
    while t < m - 1 && c > segment_bounds(t).1 {
        t += 1;
    }
    t
}

/// The two entry values of a Schmidt vector with `n1` entries `α` and `n2`
/// entries `β` at concurrence `c`: `n1·α + n2·β = 1`,
/// `n1·α² + n2·β² = 1 − c²/2`, `α ≥ β ≥ 0`.
pub fn alpha_beta(n1: usize, n2: usize, c: f64) -> Result<(f64, f64)> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "family sizes must be positive, got ({n1}, {n2})"
        )));
    }
    if !c.is_finite() || c < 0.0 {
        return Err(Error::Domain {
            what: "concurrence",
            value: c,
        });
    }
    let (a, b) = (n1 as f64, n2 as f64);
    let disc = a * a - a * (a + b) * (1.0 - b * (1.0 - 0.5 * c * c));
    if disc < -DISC_TOL {
        return Err(Error::Domain {
            what: "concurrence for this (n1, n2) family",
            value: c,
        });
    }
    let alpha = (a + disc.max(0.0).sqrt()) / (a * (a + b));
    let beta = (1.0 - a * alpha) / b;
    if beta < -DISC_TOL {
        return Err(Error::Domain {
            what: "concurrence for this (n1, n2) family",
            value: c,
        });
    }
    Ok((alpha, beta.max(0.0)))
}

/// `F_{n1,n2}(c) = n1·h(α) + n2·h(β)`.
pub fn f_value(n1: usize, n2: usize, c: f64) -> Result<f64> {
    let (alpha, beta) = alpha_beta(n1, n2, c)?;
    Ok(n1 as f64 * h_unchecked(alpha) + n2 as f64 * h_unchecked(beta))
}

fn check_level(m: usize, c: f64) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "dimension m = {m} must be at least 2"
        )));
    }
    let cm = c_max(m);
    if !c.is_finite() || c < -CLAMP_TOL || c > cm + CLAMP_TOL {
        return Err(Error::Domain {
            what: "concurrence",
            value: c,
        });
    }
    Ok(c.clamp(0.0, cm))
}

/// Maximum pure-state entropy at concurrence `c`: `F_{1,m−1}(c)`.
pub fn big_x(m: usize, c: f64) -> Result<f64> {
    let c = check_level(m, c)?;
    if c == 0.0 {
        return Ok(0.0);
    }
    f_value(1, m - 1, c)
}

/// The segmentwise form `F_{1,t}(c)` on segment `t`. This only agrees with
/// [`big_x`] on the last segment: for `m ≥ 3` it undercuts the level-set
/// maximum elsewhere.
pub fn big_x_segmentwise(m: usize, c: f64) -> Result<f64> {
    let c = check_level(m, c)?;
    if c == 0.0 {
        return Ok(0.0);
    }
    f_value(1, segment_of(m, c), c)
}

/// Minimum pure-state entropy at concurrence `c`: `F_{t,1}(c)` on segment `t`.
pub fn big_y(m: usize, c: f64) -> Result<f64> {
    let c = check_level(m, c)?;
    if c == 0.0 {
        return Ok(0.0);
    }
    f_value(segment_of(m, c), 1, c)
}

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn check_m3(c: f64) -> Result<f64> {
    let cm = 2.0 / SQRT3;
    if !c.is_finite() || c < -CLAMP_TOL || c > cm + CLAMP_TOL {
        return Err(Error::Domain {
            what: "concurrence",
            value: c,
        });
    }
    Ok(c.clamp(0.0, cm))
}

/// Reference closed form of `ε` for `m = 3`: `F_{1,1}` up to `c = 1`, then the
/// chord to `(2/√3, log 3)`.
pub fn epsilon_m3_closed(c: f64) -> Result<f64> {
    let c = check_m3(c)?;
    if c <= 1.0 {
        return f_value(1, 1, c);
    }
    Ok(SQRT3 * 1.5f64.ln() / (2.0 - SQRT3) * (c - 1.0) + LN_2)
}

/// Reference closed form of `η` for `m = 3`: `c·log 2` up to `c = 1`, then the
/// chord from `(1, F_{1,2}(1))` to `(2/√3, log 3)`. Not concave, and below
/// the true level-set maximum for `c < 1`.
pub fn eta_m3_closed(c: f64) -> Result<f64> {
    let c = check_m3(c)?;
    if c <= 1.0 {
        return Ok(c * LN_2);
    }
    let ln3 = 3f64.ln();
    let slope = (2.0 * 1.5f64.ln() + 6f64.ln() - 3.0 * ln3) / (3.0 * (SQRT3 - 2.0));
    Ok(slope * (SQRT3 * c - 2.0) + ln3)
}

/// Sign of a second derivative across a segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curvature {
    Convex,
    Concave,
    /// Both signs observed beyond the probe tolerance.
    Mixed,
}

/// How an envelope is drawn on one segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Piece {
    /// The family curve itself.
    Curve,
    /// The straight line between the family's values at the segment ends.
    Chord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentRule {
    pub t: usize,
    pub lo: f64,
    pub hi: f64,
    /// Curvature of `F_{1,t}` (the upper family) over the segment.
    pub upper_curvature: Curvature,
    /// Curvature of `F_{t,1}` (the lower family) over the segment.
    pub lower_curvature: Curvature,
    pub eta_piece: Piece,
    pub eps_piece: Piece,
    /// Extremes of the sampled second differences, `(min, max)`, for each family.
    pub upper_second_diff: (f64, f64),
    pub lower_second_diff: (f64, f64),
}

impl SegmentRule {
    pub fn is_mixed(&self) -> bool {
        self.upper_curvature == Curvature::Mixed || self.lower_curvature == Curvature::Mixed
    }
}

/// Per-segment curvature signs and the curve/chord rule chosen for `ε` and `η`.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentClassification {
    pub m: usize,
    pub fd_step: f64,
    pub segments: Vec<SegmentRule>,
}

impl SegmentClassification {
    pub fn has_mixed(&self) -> bool {
        self.segments.iter().any(SegmentRule::is_mixed)
    }

    fn piece_value(&self, c: f64, upper: bool) -> f64 {
        if c <= 0.0 {
            return 0.0;
        }
        let t = segment_of(self.m, c);
        let rule = &self.segments[t - 1];
        let (n1, n2, piece) = if upper {
            (1, t, rule.eta_piece)
        } else {
            (t, 1, rule.eps_piece)
        };
        let f = |x: f64| {
            if x <= 0.0 {
                0.0
            } else {
                f_value(n1, n2, x).expect("segment endpoints lie in the family domain")
            }
        };
        match piece {
            Piece::Curve => f(c),
            Piece::Chord => {
                let (lo, hi) = (rule.lo, rule.hi);
                let (flo, fhi) = (f(lo), f(hi));
                fhi + (fhi - flo) * (c - hi) / (hi - lo)
            }
        }
    }
}

fn classify(f: impl Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> (Curvature, (f64, f64), f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    let mut count = 0usize;
    for k in 0..CURVATURE_SAMPLES {
        let c = lo + (hi - lo) * (k as f64 + 0.5) / CURVATURE_SAMPLES as f64;
        if c - step <= lo || c + step > hi {
            continue;
        }
        let d2 = (f(c + step) - 2.0 * f(c) + f(c - step)) / (step * step);
        min = min.min(d2);
        max = max.max(d2);
        sum += d2;
        count += 1;
    }
    let curvature = if min >= -CURVATURE_TOL {
        Curvature::Convex
    } else if max <= CURVATURE_TOL {
        Curvature::Concave
    } else {
        Curvature::Mixed
    };
    (curvature, (min, max), sum / count.max(1) as f64)
}

/// Classifies `F_{1,t}` and `F_{t,1}` on every segment by central second
/// differences and applies the curve/chord rules: `η` keeps a concave upper
/// family and replaces a convex one by its chord; `ε` keeps a convex lower
/// family and replaces a concave one by its chord. Mixed segments follow the
/// sign of the mean second difference and are flagged.
pub fn segment_rules(m: usize, fd_step: f64) -> Result<SegmentClassification> {
    if m < 3 {
        return Err(Error::InvalidArgument(format!(
            "segment rules need m >= 3, got {m}"
        )));
    }
    if !(fd_step > 0.0 && fd_step < 1e-2) {
        return Err(Error::InvalidArgument(format!(
            "finite-difference step {fd_step} out of range"
        )));
    }
    let mut segments = Vec::with_capacity(m - 1);
    for t in 1..m {
        let (lo, hi) = segment_bounds(t);
        let upper = |c: f64| f_value(1, t, c).unwrap_or(f64::NAN);
        let lower = |c: f64| f_value(t, 1, c).unwrap_or(f64::NAN);
        let (upper_curvature, upper_second_diff, upper_mean) = classify(upper, lo, hi, fd_step);
        let (lower_curvature, lower_second_diff, lower_mean) = classify(lower, lo, hi, fd_step);
        let convex = |k: Curvature, mean: f64| match k {
            Curvature::Convex => true,
            Curvature::Concave => false,
            Curvature::Mixed => mean >= 0.0,
        };
        let eta_piece = if convex(upper_curvature, upper_mean) {
            Piece::Chord
        } else {
            Piece::Curve
        };
        let eps_piece = if convex(lower_curvature, lower_mean) {
            Piece::Curve
        } else {
            Piece::Chord
        };
        segments.push(SegmentRule {
            t,
            lo,
            hi,
            upper_curvature,
            lower_curvature,
            eta_piece,
            eps_piece,
            upper_second_diff,
            lower_second_diff,
        });
    }
    Ok(SegmentClassification {
        m,
        fd_step,
        segments,
    })
}

/// How `ε` and `η` are evaluated from a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeMethod {
    /// Piecewise-linear interpolation over hull vertices.
    Hull,
    /// Per-segment curve/chord rules from [`segment_rules`].
    SegmentRules,
    /// Closed forms; available for `m = 2` (exact two-qubit curve and its
    /// chord) and `m = 3` (the reference expressions).
    ClosedForm,
}

/// Sampled `X`/`Y` curves and the hull vertices of `ε` and `η` for one `m`.
/// Immutable once built.
#[derive(Debug, Clone)]
pub struct EnvelopeTable {
    pub m: usize,
    pub c_max: f64,
    /// Ascending samples in `(0, c_max]`: a uniform grid merged with the
    /// segment breakpoints.
    pub grid: Vec<f64>,
    pub x_vals: Vec<f64>,
    pub y_vals: Vec<f64>,
    /// Lower convex hull of `(0,0)` and `(grid, Y)`.
    pub eps_vertices: Vec<(f64, f64)>,
    /// Upper concave hull of `(0,0)` and `(grid, X)`.
    pub eta_vertices: Vec<(f64, f64)>,
    pub method: EnvelopeMethod,
    pub rules: Option<SegmentClassification>,
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Lower hull of points sorted by abscissa (monotone chain).
pub fn lower_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for &p in points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Upper hull of points sorted by abscissa.
pub fn upper_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for &p in points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) >= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Piecewise-linear interpolation through `vertices` (ascending abscissae).
pub fn interpolate(vertices: &[(f64, f64)], c: f64) -> f64 {
    match vertices.binary_search_by(|v| v.0.total_cmp(&c)) {
        Ok(j) => vertices[j].1,
        Err(0) => vertices[0].1,
        Err(j) if j == vertices.len() => vertices[j - 1].1,
        Err(j) => {
            let (x0, y0) = vertices[j - 1];
            let (x1, y1) = vertices[j];
            y0 + (y1 - y0) * (c - x0) / (x1 - x0)
        }
    }
}

fn sample_grid(m: usize, grid_size: usize) -> Vec<f64> {
    let cm = c_max(m);
    let mut grid: Vec<f64> = (1..=grid_size)
        .map(|i| cm * i as f64 / grid_size as f64)
        .collect();
    grid.extend((1..m - 1).map(|t| segment_bounds(t).1));
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if let Some(last) = grid.last_mut() {
        *last = cm;
    }
    grid
}

/// Builds the envelope table with the default method: closed forms for
/// `m = 2` (where they coincide with the hull), hull otherwise.
pub fn build_envelopes(m: usize, grid_size: usize) -> Result<EnvelopeTable> {
    let method = if m == 2 {
        EnvelopeMethod::ClosedForm
    } else {
        EnvelopeMethod::Hull
    };
    build_envelopes_with(m, grid_size, method)
}

pub fn build_envelopes_with(
    m: usize,
    grid_size: usize,
    method: EnvelopeMethod,
) -> Result<EnvelopeTable> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "dimension m = {m} must be at least 2"
        )));
    }
    if grid_size < MIN_GRID {
        return Err(Error::InvalidArgument(format!(
            "grid size {grid_size} is below the minimum of {MIN_GRID}"
        )));
    }
    let rules = match method {
        EnvelopeMethod::SegmentRules => Some(segment_rules(m, DEFAULT_FD_STEP)?),
        EnvelopeMethod::ClosedForm if m > 3 => {
            return Err(Error::Unsupported(format!(
                "no closed-form envelopes for m = {m}"
            )));
        }
        _ => None,
    };
    let grid = sample_grid(m, grid_size);
    let x_vals = grid
        .iter()
        .map(|&c| big_x(m, c))
        .collect::<Result<Vec<_>>>()?;
    let y_vals = grid
        .iter()
        .map(|&c| big_y(m, c))
        .collect::<Result<Vec<_>>>()?;

    let with_origin = |vals: &[f64]| {
        std::iter::once((0.0, 0.0))
            .chain(grid.iter().copied().zip(vals.iter().copied()))
            .collect::<Vec<_>>()
    };
    let eps_vertices = lower_hull(&with_origin(&y_vals));
    let eta_vertices = upper_hull(&with_origin(&x_vals));

    Ok(EnvelopeTable {
        m,
        c_max: c_max(m),
        grid,
        x_vals,
        y_vals,
        eps_vertices,
        eta_vertices,
        method,
        rules,
    })
}

impl EnvelopeTable {
    fn clamp(&self, c: f64) -> Result<f64> {
        if !c.is_finite() || c < -CLAMP_TOL || c > self.c_max + CLAMP_TOL {
            return Err(Error::Domain {
                what: "concurrence",
                value: c,
            });
        }
        Ok(c.clamp(0.0, self.c_max))
    }

    /// `ε(c)`, the lower transfer function.
    pub fn epsilon(&self, c: f64) -> Result<f64> {
        let c = self.clamp(c)?;
        match self.method {
            EnvelopeMethod::Hull => Ok(interpolate(&self.eps_vertices, c)),
            EnvelopeMethod::SegmentRules => Ok(self
                .rules
                .as_ref()
                .expect("rules built")
                .piece_value(c, false)),
            EnvelopeMethod::ClosedForm if self.m == 2 => {
                if c == 0.0 {
                    Ok(0.0)
                } else {
                    f_value(1, 1, c)
                }
            }
            EnvelopeMethod::ClosedForm => epsilon_m3_closed(c),
        }
    }

    /// `η(c)`, the upper transfer function.
    pub fn eta(&self, c: f64) -> Result<f64> {
        let c = self.clamp(c)?;
        match self.method {
            EnvelopeMethod::Hull => Ok(interpolate(&self.eta_vertices, c)),
            EnvelopeMethod::SegmentRules => Ok(self
                .rules
                .as_ref()
                .expect("rules built")
                .piece_value(c, true)),
            EnvelopeMethod::ClosedForm if self.m == 2 => Ok(c * LN_2),
            EnvelopeMethod::ClosedForm => eta_m3_closed(c),
        }
    }

    /// `X(c)` evaluated directly (not from the grid).
    pub fn x(&self, c: f64) -> Result<f64> {
        big_x(self.m, c)
    }

    pub fn y(&self, c: f64) -> Result<f64> {
        big_y(self.m, c)
    }

    /// Checks the defining properties of `ε` and `η` as evaluated by this
    /// table's method on `(0, grid)`; returns one message per violation.
    pub fn violations(&self) -> Vec<String> {
        const TOL: f64 = 1e-9;
        let mut out = Vec::new();
        let cs: Vec<f64> = std::iter::once(0.0)
            .chain(self.grid.iter().copied())
            .collect();
        let eps: Vec<f64> = cs
            .iter()
            .map(|&c| self.epsilon(c).unwrap_or(f64::NAN))
            .collect();
        let eta: Vec<f64> = cs
            .iter()
            .map(|&c| self.eta(c).unwrap_or(f64::NAN))
            .collect();
        let slopes = |v: &[f64]| -> Vec<f64> {
            cs.windows(2)
                .zip(v.windows(2))
                .map(|(c, y)| (y[1] - y[0]) / (c[1] - c[0]))
                .collect()
        };
        let eps_slopes = slopes(&eps);
        let eta_slopes = slopes(&eta);

        if let Some(i) = eps_slopes.windows(2).position(|s| s[1] < s[0] - TOL) {
            out.push(format!("epsilon not convex near c = {}", cs[i + 1]));
        }
        if let Some(i) = eps_slopes.iter().position(|&s| s < -TOL) {
            out.push(format!("epsilon decreasing near c = {}", cs[i]));
        }
        if let Some(i) = eta_slopes.windows(2).position(|s| s[1] > s[0] + TOL) {
            out.push(format!("eta not concave near c = {}", cs[i + 1]));
        }
        if let Some(i) = eta_slopes.iter().position(|&s| s < -TOL) {
            out.push(format!("eta decreasing near c = {}", cs[i]));
        }
        for (k, &c) in self.grid.iter().enumerate() {
            let (e, n) = (eps[k + 1], eta[k + 1]);
            if e > self.y_vals[k] + TOL {
                out.push(format!("epsilon({c}) = {e} exceeds Y = {}", self.y_vals[k]));
                break;
            }
            if n < self.x_vals[k] - TOL {
                out.push(format!("eta({c}) = {n} below X = {}", self.x_vals[k]));
                break;
            }
            if e > n + TOL {
                out.push(format!("epsilon({c}) = {e} exceeds eta = {n}"));
                break;
            }
        }
        let log_m = (self.m as f64).ln();
        let last = cs.len() - 1;
        if eps[0].abs() > TOL || eta[0].abs() > TOL {
            out.push("envelopes do not pass through (0, 0)".into());
        }
        if (eps[last] - log_m).abs() > TOL || (eta[last] - log_m).abs() > TOL {
            out.push(format!(
                "envelopes miss (c_max, log m): epsilon = {}, eta = {}, log m = {log_m}",
                eps[last], eta[last]
            ));
        }
        out
    }
}

/// `ε(c)` from a table.
pub fn epsilon_of(table: &EnvelopeTable, c: f64) -> Result<f64> {
    table.epsilon(c)
}

/// `η(c)` from a table.
pub fn eta_of(table: &EnvelopeTable, c: f64) -> Result<f64> {
    table.eta(c)
}
