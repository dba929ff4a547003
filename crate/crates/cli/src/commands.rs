use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use eof_core::eof_bounds::eof_bounds_from_concurrence;
use eof_core::states::{example2_state, werner, werner_concurrence_hint};
use eof_core::{build_envelopes, eof_bounds, BipartiteDensityMatrix, EnvelopeTable};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::matrix_file;
use crate::sweep::Sweep;
use crate::table::{bounds_row, describe, sig12, write_rows, BOUNDS_HEADER};

/// Writes to `path`, or to stdout when no path is given.
pub fn with_output(
    path: Option<&Path>,
    f: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::io(p, e))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush().map_err(|e| CliError::io(p, e))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}

pub fn bounds(path: &Path, grid: usize) -> Result<()> {
    let rho = matrix_file::read(path)?;
    let table = build_envelopes(rho.min_dim(), grid)?;
    let report = eof_bounds(&rho, &table)?;
    print!("{}", describe(&report));
    with_output(None, |w| {
        write_rows(w, &BOUNDS_HEADER, &[bounds_row(0.0, &report)])
    })
}

pub fn envelope(m: usize, grid: usize, out: Option<&Path>) -> Result<()> {
    if m < 2 {
        return Err(CliError::Usage(format!("--m must be at least 2, got {m}")));
    }
    let table = build_envelopes(m, grid)?;
    let rows = std::iter::once(0.0)
        .chain(table.grid.iter().copied())
        .map(|c| -> Result<Vec<String>> {
            Ok([
                c,
                table.x(c)?,
                table.y(c)?,
                table.epsilon(c)?,
                table.eta(c)?,
            ]
            .map(sig12)
            .to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    with_output(out, |w| {
        write_rows(w, &["c", "X", "Y", "epsilon", "eta"], &rows)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    Werner,
    TwoParam,
}

#[derive(Debug, Clone, Default)]
pub struct FamilyParams {
    pub d: Option<usize>,
    pub f: Option<f64>,
    pub a: Option<f64>,
    pub x: Option<f64>,
}

fn required(v: Option<f64>, flag: &str) -> Result<f64> {
    v.ok_or_else(|| CliError::Usage(format!("{flag} is required unless it is swept")))
}

/// Maps a parameter value to a state.
type Builder = Box<dyn Fn(f64) -> eof_core::Result<BipartiteDensityMatrix> + Sync>;

/// Parameter points of the sweep, or the single fixed point, and the state
/// builder for the swept parameter.
fn family_builder(
    family: Family,
    p: &FamilyParams,
    sweep: Option<&Sweep>,
) -> Result<(Vec<f64>, Builder)> {
    let swept = sweep.map(|s| s.name.as_str());
    let points = |fixed: Option<f64>, flag: &str| -> Result<Vec<f64>> {
        match sweep {
            Some(s) => Ok(s.points()),
            None => Ok(vec![required(fixed, flag)?]),
        }
    };
    match family {
        Family::Werner => {
            if !matches!(swept, None | Some("f")) {
                return Err(CliError::Usage(format!(
                    "werner sweeps over f, not {:?}",
                    swept.unwrap()
                )));
            }
            let d = p.d.unwrap_or(3);
            let pts = points(p.f, "--f")?;
            Ok((pts, Box::new(move |f| werner(d, f))))
        }
        Family::TwoParam => match swept {
            Some("a") | None => {
                let x = required(p.x, "--x")?;
                let pts = points(p.a, "--a")?;
                Ok((pts, Box::new(move |a| example2_state(a, x))))
            }
            Some("x") => {
                let a = required(p.a, "--a")?;
                let pts = points(p.x, "--x")?;
                Ok((pts, Box::new(move |x| example2_state(a, x))))
            }
            Some(other) => Err(CliError::Usage(format!(
                "two-param sweeps over a or x, not {other:?}"
            ))),
        },
    }
}

pub fn example(
    family: Family,
    params: &FamilyParams,
    sweep: Option<&Sweep>,
    grid: usize,
    out: Option<&Path>,
) -> Result<()> {
    let (points, build) = family_builder(family, params, sweep)?;
    let m = match family {
        Family::Werner => params.d.unwrap_or(3),
        Family::TwoParam => 3,
    };
    let table = build_envelopes(m, grid)?;
    let with_hint = family == Family::Werner && m == 3;

    let row = |param: f64, table: &EnvelopeTable| -> Result<Vec<String>> {
        let rho = build(param).map_err(CliError::Validation)?;
        let mut row = bounds_row(param, &eof_bounds(&rho, table)?);
        if with_hint {
            let c = werner_concurrence_hint(3, param)?;
            row.push(sig12(eof_bounds_from_concurrence(c, c, table)?.1));
        }
        Ok(row)
    };
    // computed in parallel, collected in sweep order
    let rows = points
        .par_iter()
        .map(|&p| row(p, &table))
        .collect::<Result<Vec<_>>>()?;

    let mut header = BOUNDS_HEADER.to_vec();
    if with_hint {
        header.push("eof_upper_hint");
    }
    with_output(out, |w| write_rows(w, &header, &rows))
}
