use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use seczeta_core::exact::{QuadSurd, Rational};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "seczeta", version, about = "Exact and high-precision values of the secant zeta function")]
pub struct Cli {
    /// Decimal digits of precision, 20 to 10000.
    #[arg(long, global = true, env = "SECZETA_DIGITS", default_value_t = 50,
          value_parser = clap::value_parser!(u32).range(20..=10000))]
    pub digits: u32,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,

    /// Worker threads for batch commands (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write output to a file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    JsonLines,
    Csv,
    Human,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// ψ_k(√(2j(2j+1)))
    Gen1,
    /// ψ_k(1 + √(2j(2j+1)))
    Gen2,
    /// ψ_k(2√(2j(2j+1)))
    Semiperiod,
    /// ψ₂(√(2j(2jn+1)/n)), needs --n
    Pell,
    /// ψ_k(√j) from a Pell matrix
    Fixed,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact value of ψ_k at a closed-form family argument.
    Exact {
        #[arg(long)]
        k: u64,
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, allow_negative_numbers = true)]
        j: i64,
        #[arg(long, allow_negative_numbers = true)]
        n: Option<i64>,
    },
    /// Numerical value with a rigorous error bound.
    Numeric {
        /// Exponent s ≥ 2 (integer for the cotangent, tangent and cosecant series).
        #[arg(long)]
        s: f64,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, conflicts_with_all = ["tangent", "cosecant"])]
        cotangent: bool,
        #[arg(long, conflicts_with = "cosecant")]
        tangent: bool,
        #[arg(long)]
        cosecant: bool,
    },
    /// Evaluate ψ_k(√j)/π^k over a grid and recognize rationals.
    Scan {
        /// Even weights, e.g. 2,4 or 2..10.
        #[arg(long)]
        k: String,
        /// Indices, e.g. 1..30 or 2,3,5.
        #[arg(long)]
        j: String,
        #[arg(long, default_value_t = 1_000_000)]
        max_den: u64,
    },
    /// The constants β_k.
    Beta {
        #[arg(long)]
        k: String,
        /// Include the denominator factorization and anomalous primes.
        #[arg(long)]
        profile: bool,
    },
    /// Fundamental Pell solutions and the factorable fixed-point matrix for √j.
    Pell {
        #[arg(long)]
        j: String,
    },
    /// Factor a matrix of the subgroup generated by A and B.
    Factor {
        /// Entries a,b,c,d of [[a, b], [c, d]].
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Locate the zeros of the polynomial family and measure their distance to |z| = 1.
    Unimodular {
        #[arg(long)]
        k: String,
    },
    /// Hard indices and tail bounds for a point.
    Audit {
        #[command(flatten)]
        point: PointArgs,
        /// Index bound for the hard-index scan.
        #[arg(long, default_value_t = 4096)]
        n: u64,
        /// Exponent for the tail bounds.
        #[arg(long, default_value_t = 2.0)]
        s: f64,
    },
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// sqrt:J, quad:a,b,d (a + b√d) or rat:p/q.
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    /// Rational factor applied to z.
    #[arg(long, allow_hyphen_values = true)]
    pub scale: Option<String>,
}

impl PointArgs {
    pub fn parse(&self) -> Result<QuadSurd, CliError> {
        let z = parse_point(&self.z)?;
        match &self.scale {
            Some(s) => Ok(z.scale(&parse_rational(s)?)),
            None => Ok(z),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Domain(format!("'{s}' is not a rational number p/q"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(CliError::Domain(format!("'{s}' has a zero denominator")));
    }
    Ok(Rational::new(p, q))
}

pub fn parse_point(spec: &str) -> Result<QuadSurd, CliError> {
    let (kind, body) = spec
        .split_once(':')
        .ok_or_else(|| CliError::Domain(format!("z-spec '{spec}' must be sqrt:J, quad:a,b,d or rat:p/q")))?;
    match kind {
        "sqrt" => {
            let j: u64 =
                body.trim().parse().map_err(|_| CliError::Domain(format!("'{body}' is not a non-negative integer")))?;
            Ok(QuadSurd::sqrt_int(j))
        }
        "quad" => {
            let parts: Vec<&str> = body.split(',').collect();
            let [a, b, d] = parts[..] else {
                return Err(CliError::Domain(format!("quad:{body} needs three fields a,b,d")));
            };
            let d: u64 = d
                .trim()
                .parse()
                .map_err(|_| CliError::Domain(format!("radicand '{d}' must be a non-negative integer")))?;
            Ok(QuadSurd::new(parse_rational(a)?, parse_rational(b)?, d))
        }
        "rat" => Ok(QuadSurd::rational(parse_rational(body)?)),
        _ => Err(CliError::Domain(format!("unknown z-spec kind '{kind}'"))),
    }
}

/// Comma-separated integers and inclusive ranges a..b. With `even_only`,
/// ranges skip odd values; explicitly listed odd values are kept so the
/// command can report them.
pub fn parse_list(s: &str, even_only: bool) -> Result<Vec<i64>, CliError> {
    let bad = |p: &str| CliError::Domain(format!("'{p}' is not an integer or a range a..b"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: i64 = a.trim().parse().map_err(|_| bad(part))?;
            let b: i64 = b.trim().parse().map_err(|_| bad(part))?;
            if a > b {
                return Err(CliError::Domain(format!("range {part} is empty")));
            }
            if b - a > 1_000_000 {
                return Err(CliError::Domain(format!("range {part} is too long")));
            }
            out.extend((a..=b).filter(|v| !even_only || v % 2 == 0));
        } else {
            out.push(part.parse().map_err(|_| bad(part))?);
        }
    }
    if out.is_empty() {
        return Err(CliError::Domain(format!("'{s}' selects no values")));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn parse_matrix(s: &str) -> Result<[BigInt; 4], CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || CliError::Domain(format!("'{s}' must be four integers a,b,c,d"));
    if parts.len() != 4 {
        return Err(bad());
    }
    let v: Vec<BigInt> = parts.iter().map(|p| p.parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    Ok([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
}
