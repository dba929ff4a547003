//! Plain-text state files.
//!
//! ```text
//! dims 2 2
//! 0.5,0 0,0 0,0 0.5,0
//! 0,0 0,0 0,0 0,0
//! 0,0 0,0 0,0 0,0
//! 0.5,0 0,0 0,0 0.5,0
//! ```
//!
//! The first line gives the subsystem dimensions `m n`; each of the next `mn`
//! lines is one row of the density matrix as whitespace-separated `re,im`
//! pairs, with composite index `i·n + k`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use eof_core::{BipartiteDensityMatrix, Complex64, ComplexMatrix};

use crate::error::{CliError, Result};

pub fn parse(text: &str, path: &Path) -> Result<BipartiteDensityMatrix> {
    let err = |line: usize, msg: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));

    let (no, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let dim = |s: &str| s.parse::<usize>().ok().filter(|&d| d > 0);
    let (m, n) = match fields.as_slice() {
        ["dims", a, b] => match (dim(a), dim(b)) {
            (Some(m), Some(n)) => (m, n),
            _ => return Err(err(no, format!("bad dimensions in {header:?}"))),
        },
        _ => {
            return Err(err(
                no,
                format!("expected \"dims <m> <n>\", got {header:?}"),
            ))
        }
    };
    let d = m
        .checked_mul(n)
        .ok_or_else(|| err(no, "dimensions overflow".into()))?;

    let mut data = Vec::with_capacity(d * d);
    let mut rows = 0;
    for (no, line) in lines {
        if line.is_empty() {
            continue;
        }
        if rows == d {
            return Err(err(no, format!("more than {d} matrix rows")));
        }
        let before = data.len();
        for entry in line.split_whitespace() {
            data.push(
                parse_entry(entry)
                    .ok_or_else(|| err(no, format!("bad entry {entry:?}, expected re,im")))?,
            );
        }
        if data.len() - before != d {
            return Err(err(
                no,
                format!("expected {d} entries, found {}", data.len() - before),
            ));
        }
        rows += 1;
    }
    if rows != d {
        return Err(err(
            text.lines().count(),
            format!("expected {d} matrix rows, found {rows}"),
        ));
    }

    let mat = ComplexMatrix::new(d, d, data).map_err(CliError::Validation)?;
    BipartiteDensityMatrix::new(mat, m, n).map_err(CliError::Validation)
}

fn parse_entry(s: &str) -> Option<Complex64> {
    let (re, im) = s.split_once(',')?;
    Some(Complex64::new(re.parse().ok()?, im.parse().ok()?))
}

pub fn read(path: &Path) -> Result<BipartiteDensityMatrix> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text, path)
}

/// Serializes with 17 significant digits, enough to read back every entry
/// bit for bit.
pub fn format(rho: &BipartiteDensityMatrix) -> String {
    let mat = rho.matrix();
    let mut out = format!("dims {} {}\n", rho.dim_a(), rho.dim_b());
    for i in 0..mat.rows() {
        for j in 0..mat.cols() {
            let z = mat[(i, j)];
            let sep = if j + 1 == mat.cols() { '\n' } else { ' ' };
            write!(out, "{:.16e},{:.16e}{sep}", z.re, z.im)
                .expect("writing to a String cannot fail");
        }
    }
    out
}

pub fn write(path: &Path, rho: &BipartiteDensityMatrix) -> Result<()> {
    fs::write(path, format(rho)).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BELL: &str =
        "dims 2 2\n0.5,0 0,0 0,0 0.5,0\n0,0 0,0 0,0 0,0\n0,0 0,0 0,0 0,0\n0.5,0 0,0 0,0 0.5,0\n";

    fn p(text: &str) -> Result<BipartiteDensityMatrix> {
        parse(text, Path::new("test"))
    }

    #[test]
    fn parses_bell_state() {
        let rho = p(BELL).unwrap();
        assert_eq!((rho.dim_a(), rho.dim_b()), (2, 2));
        assert_eq!(rho.matrix()[(0, 3)].re, 0.5);
    }

    #[test]
    fn format_round_trips() {
        let rho = p(BELL).unwrap();
        let back = p(&format(&rho)).unwrap();
        assert_eq!(back.matrix(), rho.matrix());
    }

    #[test]
    fn random_states_round_trip_bit_exactly() {
        for seed in 0..20 {
            let rho =
                eof_core::roof_oracle::random_density_matrix(2 + seed as usize % 3, 3, 4, seed)
                    .unwrap();
            let back = p(&format(&rho)).unwrap();
            assert_eq!(back.matrix(), rho.matrix());
            assert_eq!((back.dim_a(), back.dim_b()), (rho.dim_a(), rho.dim_b()));
        }
    }

    #[test]
    fn parse_errors_exit_2() {
        for bad in [
            "",
            "dim 2 2\n",
            "dims 2\n",
            "dims 0 2\n",
            "dims 2 2\n0.5,0 0,0 0,0\n",
            "dims 2 2\n0.5 0,0 0,0 0.5,0\n",
            "dims 1 2\n1,0 0,0\n",
            "dims 1 2\n1,0 0,0\n0,0 0,0\n0,0 0,0\n",
        ] {
            let e = p(bad).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{bad:?}: {e}");
        }
    }

    #[test]
    fn invalid_states_exit_3() {
        for bad in [
            "dims 1 2\n1,0 0,0\n0,0 1,0\n",
            "dims 1 2\n0.5,0 1,0\n0,0 0.5,0\n",
            "dims 1 2\n1.5,0 0,0\n0,0 -0.5,0\n",
            "dims 1 2\nNaN,0 0,0\n0,0 1,0\n",
        ] {
            let e = p(bad).unwrap_err();
            assert_eq!(e.exit_code(), 3, "{bad:?}: {e}");
        }
    }
}
