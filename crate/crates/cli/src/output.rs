//! CSV emission with C-style `%.12g` numbers.

use std::io::{self, Write};

use vqae_core::experiment::{InfidelityRow, SweepRow};

/// Formats `x` like C's `printf("%.*g", precision, x)`.
pub fn format_g(x: f64, precision: usize) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let p = precision.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    } else {
        strip_zeros(&format!("{:.*}", (p as i32 - 1 - exp) as usize, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn g(x: f64) -> String {
    format_g(x, 12)
}

pub const SWEEP_HEADER: &str =
    "estimator,dist,n,C,m,N_q_total,N_q_sampling,N_q_variational,N_q_loose,delta_theta_rms,reps,seed";

pub const INFIDELITY_HEADER: &str = "dist,d,m,infidelity_mean,infidelity_sem,inits";

pub struct SweepMeta<'a> {
    pub estimator: &'a str,
    pub dist: &'a str,
    pub n: usize,
    pub scale: f64,
    pub reps: u64,
    pub seed: u64,
}

pub fn write_sweep<W: Write>(out: &mut W, meta: &SweepMeta<'_>, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for r in rows {
        let q = r.queries;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            meta.estimator,
            meta.dist,
            meta.n,
            g(meta.scale),
            r.m,
            g(q.total() as f64),
            g(q.sampling as f64),
            g(q.variational as f64),
            g(q.loose as f64),
            g(r.delta_theta),
            meta.reps,
            meta.seed
        )?;
    }
    Ok(())
}

pub fn write_infidelity<W: Write>(out: &mut W, dist: &str, rows: &[InfidelityRow]) -> io::Result<()> {
    writeln!(out, "{INFIDELITY_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{dist},{},{},{},{},{}",
            r.depth,
            r.m,
            g(r.mean),
            g(r.sem),
            r.inits
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (14702000.0, "14702000"),
            (0.4999997676999155, "0.4999997677"),
            (3.233e-4, "0.0003233"),
            (6.1234e-5, "6.1234e-05"),
            (1.2e13, "1.2e+13"),
            (999999999999.0, "999999999999"),
            (-2.5e-7, "-2.5e-07"),
            (0.123456789012345, "0.123456789012"),
            (100.0, "100"),
        ];
        for (x, want) in cases {
            assert_eq!(g(x), want, "{x}");
        }
    }

    #[test]
    fn rounding_can_bump_the_exponent() {
        assert_eq!(format_g(9.9999999999999e11, 12), "1e+12");
        assert_eq!(format_g(0.000099999999999999, 12), "0.0001");
    }
}
