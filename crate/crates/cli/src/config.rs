//! Command-line arguments and their validation.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sheafwc_core::geometry::{self, ChernData, DivisorClass, Polarization, Surface};
use sheafwc_core::{QExponent, Rational};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "sheafwc", version, about = "Generating functions of invariants of moduli of stable sheaves on P^2 and its blow-up")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a generating function.
    Series(SeriesArgs),
    /// Betti numbers of rank-3 sheaves with c1 = -H on P^2.
    Betti(BettiArgs),
    /// List walls of marginal stability.
    Walls(WallsArgs),
    /// Run the consistency checks.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurfaceArg {
    Ruled,
    P2,
}

impl From<SurfaceArg> for Surface {
    fn from(s: SurfaceArg) -> Surface {
        match s {
            SurfaceArg::Ruled => Surface::RuledP2Tilde,
            SurfaceArg::P2 => Surface::P2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    #[arg(long, default_value_t = 1)]
    pub rank: u32,
    /// First Chern class, e.g. "-C-f", "C-3f", "-H", "0".
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub c1: String,
    #[arg(long, value_enum, default_value = "ruled")]
    pub surface: SurfaceArg,
    /// Polarization J = m(C+f) + nf as "m,n".
    #[arg(long, default_value = "1,0")]
    pub polarization: String,
    /// Number of integer q-steps past the base exponent.
    #[arg(long, default_value_t = 8)]
    pub order: u32,
    /// Poincare polynomials instead of Euler numbers.
    #[arg(long)]
    pub refined: bool,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args)]
pub struct BettiArgs {
    /// A single c2 or an inclusive range "lo..hi".
    #[arg(long, default_value = "2..6")]
    pub c2: String,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args)]
pub struct WallsArgs {
    #[arg(long, default_value_t = 2)]
    pub rank: u32,
    #[arg(long, default_value = "-C-f", allow_hyphen_values = true)]
    pub c1: String,
    /// Largest q-shift of a wall, e.g. "9/4".
    #[arg(long, default_value = "2")]
    pub bound: String,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    /// Run only the named checks.
    #[arg(long)]
    pub only: Vec<String>,
    /// q-steps used by the series checks.
    #[arg(long, default_value_t = 8)]
    pub order: u32,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

/// A validated `series` request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesRequest {
    pub rank: u32,
    pub c1: DivisorClass,
    pub surface: Surface,
    pub polarization: Polarization,
    pub refined: bool,
    /// Exponents of the series lie in `base + Z`, `base` in (-1, 0].
    pub base: QExponent,
    pub cutoff: QExponent,
}

pub fn fractional_base(rank: u32, c1: DivisorClass) -> Result<QExponent, ConfigError> {
    let g = ChernData::from_c2(rank, c1, Rational::from_integer(0.into()))?;
    let e = QExponent::from_rational(&g.generating_exponent())
        .ok_or_else(|| invalid("exponent off the 1/24 lattice"))?;
    let mut n = e.numerator().rem_euclid(24);
    if n > 0 {
        n -= 24;
    }
    Ok(QExponent(n))
}

impl SeriesArgs {
    pub fn validate(&self) -> Result<SeriesRequest, ConfigError> {
        let surface: Surface = self.surface.into();
        if !(1..=3).contains(&self.rank) {
            return Err(invalid(format!("rank must be 1, 2 or 3, got {}", self.rank)));
        }
        let c1 = DivisorClass::parse(&self.c1, surface)?;
        if c1.surface() != surface {
            return Err(invalid(format!("c1 = {c1} does not live on {}", surface.name())));
        }
        let polarization: Polarization = self.polarization.parse()?;
        if self.order == 0 {
            return Err(invalid("--order must be at least 1"));
        }
        if surface == Surface::P2 && polarization != Polarization::J10 {
            return Err(invalid("--polarization has no meaning on p2; leave it at the default 1,0"));
        }
        match (self.rank, surface, self.refined) {
            (1, Surface::P2, true) => {
                return Err(ConfigError::Unsupported("refined rank-1 series on p2".into()));
            }
            (2, Surface::P2, true) => {
                return Err(ConfigError::Unsupported(
                    "refined rank-2 series on p2; use the ruled surface at 1,0".into(),
                ));
            }
            (3, Surface::RuledP2Tilde, _) => {
                if geometry::reduce_c1(3, c1).0 != DivisorClass::ruled(-1, -1) {
                    return Err(ConfigError::Unsupported(format!(
                        "rank 3 on the ruled surface needs c1 = -C-f mod 3, got {c1}"
                    )));
                }
            }
            (3, Surface::P2, _) => {
                let DivisorClass::P2 { h } = c1 else { unreachable!() };
                if h.rem_euclid(3) == 0 {
                    return Err(ConfigError::Unsupported("rank 3 on p2 needs c1 = +-H mod 3".into()));
                }
            }
            _ => {}
        }
        let base = fractional_base(self.rank, c1)?;
        Ok(SeriesRequest {
            rank: self.rank,
            c1,
            surface,
            polarization,
            refined: self.refined,
            base,
            cutoff: base + QExponent::integer(self.order as i64),
        })
    }
}

/// Parses "7" or "2..6".
pub fn parse_c2_range(s: &str) -> Result<Vec<i64>, ConfigError> {
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| invalid(format!("cannot read c2 from {t:?}")))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(invalid(format!("empty c2 range {s}")));
    }
    if lo < 2 {
        return Err(invalid("the moduli spaces are empty for c2 < 2"));
    }
    if hi > 12 {
        return Err(invalid("c2 above 12 is not supported"));
    }
    Ok((lo..=hi).collect())
}

pub fn parse_bound(s: &str) -> Result<Rational, ConfigError> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| invalid(format!("cannot read a rational bound from {s:?}")))
}
