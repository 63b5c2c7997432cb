use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pgevrey::rug::{Complex, Float};
use pgevrey::scalar::{parse_complex, parse_rational};

use crate::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "pgevrey",
    version,
    about = "Formal series of the modified Painlevé III equation: coefficients, exact growth certificates, Borel–Laplace resummation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficient table a_0..a_N.
    Coeffs(CoeffsArgs),
    /// Exact growth bounds of the special table.
    Verify(VerifyArgs),
    /// Borel coefficients b_n = a_n/n! and the Cauchy–Hadamard radius.
    Borel(BorelArgs),
    /// Finite Laplace transform g(x) of the Borel series.
    Laplace(LaplaceArgs),
    /// Residual of a truncated series in the equation.
    Residual(ResidualArgs),
    /// Error matrix |g(x) − S_N(x)| along the ray.
    Scan(ScanArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct Common {
    /// α = δ = −1/32, β = −1/4 with a_0 = −1, exact.
    #[arg(long, conflicts_with_all = ["alpha", "beta", "delta"])]
    pub special: bool,
    /// α as p/q, integer or decimal.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// δ; α and δ must be nonzero.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Cube-root branch k: a_0 = ω^k r.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..3))]
    pub branch: u8,
    /// Exact cube root r of −δ/α to use instead of the principal one.
    #[arg(long, allow_hyphen_values = true)]
    pub a0: Option<String>,
    /// Force complex floating-point arithmetic.
    #[arg(long)]
    pub numeric: bool,
    /// Largest coefficient index.
    #[arg(short = 'N')]
    pub n: Option<usize>,
    /// Working precision in bits for floating-point results.
    #[arg(long = "prec-bits", default_value_t = 256, value_parser = clap::value_parser!(u32).range(16..))]
    pub prec_bits: u32,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Exact coefficient file (JSON from `coeffs`) to check instead of
    /// recomputing.
    #[arg(long, conflicts_with_all = ["alpha", "beta", "delta", "special"])]
    pub input: Option<PathBuf>,
    /// Directory for per-inequality margin CSV files.
    #[arg(long = "margins-dir")]
    pub margins_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BorelArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct RayArgs {
    /// Ray direction d in the Borel plane, radians.
    #[arg(short = 'd', default_value = "0", allow_hyphen_values = true)]
    pub direction: f64,
    /// Endpoint modulus: a number, or a multiple of the Borel radius such as 0.9rB.
    #[arg(short = 'T', default_value = "0.9rB")]
    pub endpoint: String,
    /// Number of Borel terms kept.
    #[arg(long = "N-trunc")]
    pub n_trunc: Option<usize>,
}

#[derive(Args, Debug)]
pub struct LaplaceArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub ray: RayArgs,
    /// Evaluation point "re,im" (or a real number).
    #[arg(short = 'x', allow_hyphen_values = true)]
    pub x: String,
}

#[derive(Args, Debug)]
pub struct ResidualArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub ray: RayArgs,
    /// Also evaluate the residual of the resummed function at this point.
    #[arg(short = 'x', allow_hyphen_values = true)]
    pub x: Option<String>,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub ray: RayArgs,
    /// Moduli |x| on the ray arg x = −d, comma separated.
    #[arg(long = "x", default_value = "10,20,40")]
    pub x: String,
    /// Partial-sum lengths: "a..b" (inclusive) or a comma list.
    #[arg(long = "N", default_value = "1..120")]
    pub n_list: String,
}

/// Endpoint `T`: a literal, or `c·rB` with `c` a literal.
pub fn parse_endpoint(s: &str, disk_radius: &Float, prec: u32) -> Result<Float, Failure> {
    let t = s.trim();
    if let Some(factor) = t.strip_suffix("rB").or_else(|| t.strip_suffix("rb")) {
        let factor = factor.trim().trim_end_matches('*');
        let c = if factor.is_empty() { pgevrey::rug::Rational::from(1) } else { parse_rational(factor)? };
        return Ok(Float::with_val(prec, &c) * disk_radius);
    }
    Ok(Float::with_val(prec, &parse_rational(t)?))
}

pub fn parse_point(s: &str, prec: u32) -> Result<Complex, Failure> {
    Ok(parse_complex(s, prec)?)
}

pub fn parse_moduli(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|v| {
            let r: f64 = v.trim().parse().map_err(|_| Failure::usage(format!("bad modulus {v:?}")))?;
            if r > 0.0 && r.is_finite() {
                Ok(r)
            } else {
                Err(Failure::usage(format!("modulus {v:?} must be positive")))
            }
        })
        .collect()
}

/// `"a..b"`, `"a..=b"` (both inclusive) or `"n1,n2,..."`.
pub fn parse_n_list(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::usage(format!("bad N list {s:?}"));
    let t = s.trim();
    if let Some((a, b)) = t.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    t.split(',').map(|v| v.trim().parse().map_err(|_| bad())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_lists() {
        assert_eq!(parse_n_list("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_n_list("2..=3").unwrap(), vec![2, 3]);
        assert_eq!(parse_n_list("5, 9").unwrap(), vec![5, 9]);
        assert!(parse_n_list("4..1").is_err());
    }

    #[test]
    fn endpoints() {
        let r = Float::with_val(64, 2);
        assert_eq!(parse_endpoint("0.5rB", &r, 64).unwrap(), 1);
        assert_eq!(parse_endpoint("rB", &r, 64).unwrap(), 2);
        assert_eq!(parse_endpoint("1/4", &r, 64).unwrap(), 0.25);
        assert!(parse_endpoint("xrB", &r, 64).is_err());
    }

    #[test]
    fn moduli() {
        assert_eq!(parse_moduli("10,20, 40").unwrap(), vec![10.0, 20.0, 40.0]);
        assert!(parse_moduli("10,-1").is_err());
    }
}
