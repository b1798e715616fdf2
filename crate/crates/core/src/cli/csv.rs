//! CSV rendering shared by the `sweep`, `probs` and `scan` commands.

use std::io::{self, Write};

use crate::analysis::{SweepTable, Violation};

pub const SWEEP_HEADER: &str = "var,value,C,branch,p_phi_plus,p_phi_minus,p_psi_plus,p_psi_minus";
pub const VIOLATION_HEADER: &str = "jx,jy,jz,kt,dC_dkT";

/// Formats `x` with 12 significant digits, in the style of C's `%.12g`.
pub fn fmt_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Writes the rows of one sweep series. `label`, when present, is appended to
/// the variable name as `var@label` so several series can share one file.
pub fn write_sweep_rows<W: Write>(out: &mut W, table: &SweepTable, label: Option<&str>) -> io::Result<()> {
    let var = match label {
        Some(l) => format!("{}@{l}", table.variable),
        None => table.variable.to_string(),
    };
    for r in &table.records {
        let p = &r.probabilities;
        writeln!(
            out,
            "{var},{},{},{},{},{},{},{}",
            fmt_sig(r.value),
            fmt_sig(r.concurrence),
            r.branch,
            fmt_sig(p.phi_plus),
            fmt_sig(p.phi_minus),
            fmt_sig(p.psi_plus),
            fmt_sig(p.psi_minus),
        )?;
    }
    Ok(())
}

pub fn write_violations<W: Write>(out: &mut W, violations: &[Violation]) -> io::Result<()> {
    writeln!(out, "{VIOLATION_HEADER}")?;
    for v in violations {
        let c = &v.couplings;
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_sig(c.jx),
            fmt_sig(c.jy),
            fmt_sig(c.jz),
            fmt_sig(v.kt),
            fmt_sig(v.derivative)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sig_formatting() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-8.0), "-8");
        assert_eq!(fmt_sig(0.05), "0.05");
        assert_eq!(fmt_sig(0.1 + 0.2), "0.3");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(0.895_839_684_382_5), "0.895839684382");
        assert_eq!(fmt_sig(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_sig(2.5e-7), "2.5e-07");
        assert_eq!(fmt_sig(1.5e-5), "1.5e-05");
        assert_eq!(fmt_sig(1.5e-4), "0.00015");
    }

    proptest! {
        #[test]
        fn sig_round_trip(x in -1e6f64..1e6, scale in -40i32..40) {
            let v = x * 10f64.powi(scale);
            let back: f64 = fmt_sig(v).parse().unwrap();
            prop_assert!((back - v).abs() <= 5e-12 * v.abs());
        }
    }
}
