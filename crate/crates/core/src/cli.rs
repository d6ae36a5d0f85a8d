//! Command-line front end. Exit codes: 0 success, 1 verification failure,
//! 2 invalid input. Every failure writes one `error: ...` line to `err`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::{error::ErrorKind, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::rational::{format_rational, parse_rational, Rational};
use crate::error::Error;
use crate::numeric::oracle_report;
use crate::p_energy::{classify_p, instability_witness, radial_hardy_check, PParams};
use crate::radial_map::{build_radial_map, verify_identities};
use crate::stability::{
    appendix_verify, classify_k, q_poly, table, threshold_m, PositivityPath, ThresholdRecord,
};

/// Largest `m^l` for which `verify-map` runs the symbolic checks.
pub const SYMBOLIC_COMPONENT_CAP: usize = 1296;
const ORACLE_POINTS: usize = 20;
const NORM_TOL: f64 = 1e-10;
const FD_TOL: f64 = 1e-5;
const SYMBOLIC_TOL: f64 = 1e-10;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "equator",
    version,
    about = "Generalized equator maps: construction and stability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build u^(l) and run every exact identity plus the numeric oracle.
    VerifyMap {
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        kmax: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact value of Q_k^l(m).
    Q {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        m: u32,
    },
    /// Classify u_*^(l) for the extrinsic k-energy.
    Classify {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Transition dimension m(k, l).
    Threshold {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        ell: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// m(k, l) for all 1 <= k <= kmax, 1 <= l <= ellmax.
    Table {
        #[arg(long)]
        kmax: u32,
        #[arg(long)]
        ellmax: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
    },
    /// Classify u_*^(l) for the p-energy.
    ClassifyP {
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_parser = parse_p)]
        p: Rational,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Radial samples and second variation of the p-energy negative direction.
    Witness {
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_parser = parse_p)]
        p: Rational,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Radial weighted Hardy inequality on seeded random bumps.
    HardyCheck {
        #[arg(long)]
        m: u32,
        #[arg(long, value_parser = parse_p)]
        p: Rational,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Exact expansion and positivity of the two-variable inequality.
    AppendixCheck,
}

fn parse_p(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

/// Fails the command with the given exit code and one-line reason.
struct Failure {
    code: i32,
    reason: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Inconsistent(_) => EXIT_FAILURE,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            reason: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_FAILURE,
            reason: format!("i/o: {e}"),
        }
    }
}

fn invalid(reason: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        reason: reason.into(),
    }
}

fn failed(reason: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_FAILURE,
        reason: reason.into(),
    }
}

/// A real with 12 significant digits.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

#[derive(Serialize)]
struct VerdictJson<'a> {
    k: u32,
    ell: u32,
    m: u32,
    regime: &'a str,
    q: Option<String>,
    rule: &'a str,
}

#[derive(Serialize)]
struct PVerdictJson<'a> {
    ell: u32,
    m: u32,
    p: String,
    regime: &'a str,
    ratio: String,
    rule: &'a str,
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn pparams(ell: u32, m: u32, p: Rational) -> Result<PParams, Failure> {
    Ok(PParams::new(ell, m, p)?)
}

fn threshold_csv(rows: &[ThresholdRecord]) -> String {
    let mut s = String::from("k,ell,m_star\n");
    for r in rows {
        s.push_str(&format!("{},{},{}\n", r.k, r.ell, r.m_star));
    }
    s
}

fn threshold_text(rows: &[ThresholdRecord], k_max: u32) -> String {
    let mut s = String::new();
    for k in 1..=k_max {
        let row: Vec<String> = rows
            .iter()
            .filter(|r| r.k == k)
            .map(|r| r.m_star.to_string())
            .collect();
        s.push_str(&format!("k={k}: {}\n", row.join(" ")));
    }
    s
}

fn verify_map(
    ell: u32,
    m: u32,
    kmax: u32,
    seed: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    if kmax == 0 {
        return Err(invalid("kmax must be at least 1"));
    }
    let dim = m as usize;
    if m < 2 || ell == 0 || ell > m {
        return Err(invalid(format!(
            "need m >= 2 and 1 <= l <= m, got l = {ell}, m = {m}"
        )));
    }
    let count = dim.checked_pow(ell);
    let mut ok = true;
    let tensor = match count {
        Some(n) if n <= SYMBOLIC_COMPONENT_CAP => Some(build_radial_map(ell, dim)?),
        _ => {
            writeln!(
                err,
                "warning: m^l = {m}^{ell} exceeds {SYMBOLIC_COMPONENT_CAP} components; symbolic checks skipped"
            )?;
            None
        }
    };
    if let Some(t) = &tensor {
        let report = verify_identities(t, kmax)?;
        writeln!(out, "components {}", t.components().len())?;
        writeln!(out, "scale_sq {}", format_rational(t.scale_sq()))?;
        writeln!(out, "unit_norm {}", pass(report.unit_norm))?;
        writeln!(out, "tangency {}", pass(report.tangency))?;
        writeln!(out, "energy_density {}", pass(report.energy_density))?;
        for (k, delta, harmonic, b) in &report.orders {
            let b = b.as_ref().map_or("none".to_string(), format_rational);
            writeln!(out, "delta_power k={k} {}", pass(*delta))?;
            writeln!(out, "k_harmonic k={k} {} B={b}", pass(*harmonic))?;
        }
        ok &= report.all_pass();
    }
    let numeric = oracle_report(ell, dim, tensor.as_ref(), ORACLE_POINTS, seed)?;
    let numeric_ok = numeric.passes(NORM_TOL, FD_TOL, SYMBOLIC_TOL);
    writeln!(
        out,
        "numeric {} points={} norm_dev={} laplacian_err={} energy_err={} symbolic_gap={}",
        pass(numeric_ok),
        numeric.points,
        format_real(numeric.norm_deviation),
        format_real(numeric.laplacian_error),
        format_real(numeric.energy_error),
        numeric
            .symbolic_gap
            .map_or("skipped".to_string(), format_real),
    )?;
    ok &= numeric_ok;
    if ok {
        writeln!(out, "OK")?;
        Ok(())
    } else {
        Err(failed(format!(
            "identity check failed for l = {ell}, m = {m}"
        )))
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::VerifyMap { ell, m, kmax, seed } => verify_map(ell, m, kmax, seed, out, err)?,
        Command::Q { k, ell, m } => {
            if k == 0 {
                return Err(invalid("order k must be at least 1"));
            }
            writeln!(out, "{}", format_rational(&q_poly(k, ell, m)))?;
        }
        Command::Classify { k, ell, m, format } => {
            let v = classify_k(k, ell, m)?;
            match format {
                Format::Text => match &v.witness {
                    Some(q) => {
                        writeln!(out, "{} Q={} rule={}", v.regime, format_rational(q), v.rule)?
                    }
                    None => writeln!(out, "{} rule={}", v.regime, v.rule)?,
                },
                Format::Json => {
                    let j = VerdictJson {
                        k,
                        ell,
                        m,
                        regime: v.regime.json_name(),
                        q: v.witness.as_ref().map(format_rational),
                        rule: v.rule,
                    };
                    writeln!(out, "{}", serde_json::to_string(&j).expect("plain struct"))?;
                }
            }
        }
        Command::Threshold { k, ell, format } => {
            let r = threshold_m(k, ell)?;
            match format {
                Format::Text => writeln!(out, "m_star={} cap={}", r.m_star, r.scan_cap)?,
                Format::Json => {
                    writeln!(out, "{}", serde_json::to_string(&r).expect("plain struct"))?
                }
            }
        }
        Command::Table {
            kmax,
            ellmax,
            format,
        } => {
            let rows = table(kmax, ellmax)?;
            match format {
                TableFormat::Csv => write!(out, "{}", threshold_csv(&rows))?,
                TableFormat::Text => write!(out, "{}", threshold_text(&rows, kmax))?,
                TableFormat::Json => writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&rows).expect("plain struct")
                )?,
            }
        }
        Command::ClassifyP { ell, m, p, format } => {
            let params = pparams(ell, m, p)?;
            let v = classify_p(&params);
            let ratio = v.witness.as_ref().map(format_rational).unwrap_or_default();
            match format {
                Format::Text => writeln!(out, "{} ratio={} rule={}", v.regime, ratio, v.rule)?,
                Format::Json => {
                    let j = PVerdictJson {
                        ell,
                        m,
                        p: format_rational(params.p()),
                        regime: v.regime.json_name(),
                        ratio,
                        rule: v.rule,
                    };
                    writeln!(out, "{}", serde_json::to_string(&j).expect("plain struct"))?;
                }
            }
        }
        Command::Witness {
            ell,
            m,
            p,
            out: path,
        } => {
            let w = instability_witness(&pparams(ell, m, p)?)?;
            let mut csv = String::from("r,v\n");
            for (r, v) in &w.samples {
                csv.push_str(&format!("{},{}\n", format_real(*r), format_real(*v)));
            }
            csv.push_str(&format!(
                "# hessian={} mu={} eps={} r0={}\n",
                format_real(w.hessian_value),
                format_real(w.mu),
                format_real(w.epsilon),
                format_real(w.r0)
            ));
            match path {
                Some(path) => {
                    fs::write(&path, csv)?;
                    writeln!(
                        out,
                        "hessian={} closed_form={} samples={} file={}",
                        format_real(w.hessian_value),
                        format_real(w.closed_form),
                        w.samples.len(),
                        path.display()
                    )?;
                }
                None => write!(out, "{csv}")?,
            }
        }
        Command::HardyCheck { m, p, trials, seed } => {
            let r = radial_hardy_check(m, &p, trials, seed)?;
            writeln!(
                out,
                "{} trials={} passed={} bound={} min_quotient={}",
                pass(r.all_pass()),
                r.trials,
                r.passed,
                format_real(r.bound),
                r.min_quotient.map_or("none".to_string(), format_real)
            )?;
            if !r.all_pass() {
                return Err(failed(format!(
                    "{} of {} bumps violate the inequality",
                    r.trials - r.passed,
                    r.trials
                )));
            }
        }
        Command::AppendixCheck => {
            let r = appendix_verify();
            match r.matched_scale_exponent {
                Some(e) => writeln!(
                    out,
                    "coefficients MATCH scale=2^{e} terms={}",
                    r.printed_terms
                )?,
                None => {
                    writeln!(out, "coefficients MISMATCH count={}", r.mismatches.len())?;
                    for d in &r.mismatches {
                        writeln!(
                            out,
                            "  l^{} s^{}: printed={} computed={}",
                            d.l_exp,
                            d.s_exp,
                            format_rational(&d.printed),
                            format_rational(&d.computed)
                        )?;
                    }
                }
            }
            writeln!(out, "degree_in_s {}", r.degree_in_s)?;
            writeln!(out, "value_at_1_1 {}", format_rational(&r.value_at_one_one))?;
            match &r.positivity {
                PositivityPath::Certificate {
                    min_coefficient,
                    positive_terms,
                } => writeln!(
                    out,
                    "positivity CERTIFICATE shifted_terms={positive_terms} min_coefficient={}",
                    format_rational(min_coefficient)
                )?,
                PositivityPath::GridEvidence {
                    grid_max,
                    min_value,
                } => writeln!(
                    out,
                    "positivity GRID_EVIDENCE grid=1..{grid_max} min_value={}",
                    format_rational(min_value)
                )?,
                PositivityPath::Failed { l, s, value } => writeln!(
                    out,
                    "positivity FAILED l={l} s={s} value={}",
                    format_rational(value)
                )?,
            }
            if !r.coefficients_match() || !r.positive() {
                return Err(failed("appendix expansion or positivity check failed"));
            }
        }
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let text = e.to_string();
                    let line = text.lines().next().unwrap_or("error: invalid arguments");
                    let _ = writeln!(err, "{line}");
                    EXIT_INVALID
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.reason);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("equator").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(0.25), "0.25");
        assert_eq!(format_real(-1.0 / 3.0), "-0.333333333333");
        assert_eq!(format_real(6.82842712474619), "6.82842712475");
        assert_eq!(format_real(1e-9), "1.00000000000e-9");
        assert_eq!(format_real(0.0), "0");
    }

    #[test]
    fn q_and_classify() {
        assert_eq!(
            call(&["q", "--k", "2", "--ell", "1", "--m", "10"]),
            (0, "36/1\n".into(), String::new())
        );
        let (code, out, _) = call(&["classify", "--k", "1", "--ell", "1", "--m", "6"]);
        assert_eq!(
            (code, out.as_str()),
            (0, "UNSTABLE Q=-1/1 rule=Theorem-stability\n")
        );
    }

    #[test]
    fn invalid_input_exit_code() {
        let (code, _, err) = call(&["classify", "--k", "1", "--ell", "4", "--m", "3"]);
        assert_eq!(code, 2);
        assert_eq!(err.lines().count(), 1);
        let (code, _, err) = call(&["q", "--k", "1", "--bogus", "3"]);
        assert_eq!(code, 2);
        assert_eq!(err.lines().count(), 1);
        let (code, _, err) = call(&["classify-p", "--ell", "1", "--m", "2", "--p", "2"]);
        assert_eq!(code, 2);
        assert_eq!(err, "error: domain violation: m ≤ p\n");
    }
}
