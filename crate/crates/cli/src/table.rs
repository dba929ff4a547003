//! CSV output. Numbers carry 12 significant digits so tables are stable
//! across runs and platforms.

use std::io::Write;

use eof_core::EofBoundsReport;

use crate::error::Result;

pub const BOUNDS_HEADER: [&str; 13] = [
    "param",
    "c_lower_ppt",
    "c_lower_ccnr",
    "c_lower_purityA",
    "c_lower_purityB",
    "c_lower",
    "c_upper",
    "eof_lower",
    "eof_upper",
    "eof_lower_ppt",
    "eof_lower_ccnr",
    "eof_lower_purityA",
    "eof_lower_purityB",
];

/// `%.12g`-style formatting.
pub fn sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-5..12).contains(&exp) {
        return format!("{v:.11e}");
    }
    let s = format!("{v:.*}", (11 - exp) as usize);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// One row of the bounds table. Components of families that were not
/// evaluated are left empty.
pub fn bounds_row(param: f64, r: &EofBoundsReport) -> Vec<String> {
    let opt = |v: Option<f64>| v.map(sig12).unwrap_or_default();
    let (l, c) = (&r.conc.lower, &r.component_lower);
    vec![
        sig12(param),
        opt(l.ppt),
        opt(l.ccnr),
        opt(l.purity_a),
        opt(l.purity_b),
        sig12(r.conc.c_lower()),
        sig12(r.conc.c_upper()),
        sig12(r.eof_lower),
        sig12(r.eof_upper),
        opt(c.ppt),
        opt(c.ccnr),
        opt(c.purity_a),
        opt(c.purity_b),
    ]
}

pub fn write_rows<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Human-readable summary of a bounds report.
pub fn describe(r: &EofBoundsReport) -> String {
    let l = &r.conc.lower;
    let u = &r.conc.upper;
    let opt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.6}"));
    let mut s = format!(
        "system: {}x{} (m = {})\n\
         concurrence lower: {:.6}  [ppt {}, ccnr {}, purity A {}, purity B {}]\n\
         concurrence upper: {:.6}  [A {:.6}, B {:.6}]\n\
         EoF bounds: {:.6} <= E <= {:.6}\n",
        r.m,
        r.n,
        r.m,
        r.conc.c_lower(),
        opt(l.ppt),
        opt(l.ccnr),
        opt(l.purity_a),
        opt(l.purity_b),
        r.conc.c_upper(),
        u.upper_a,
        u.upper_b,
        r.eof_lower,
        r.eof_upper,
    );
    for flag in r.flags() {
        s.push_str("note: ");
        s.push_str(flag);
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_examples() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(std::f64::consts::LN_2), "0.69314718056");
        assert_eq!(sig12(3f64.ln()), "1.09861228867");
        assert_eq!(sig12(-0.25), "-0.25");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(1.5e-9), "1.50000000000e-9");
        assert_eq!(sig12(123.456), "123.456");
    }
}
