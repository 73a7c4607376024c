use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use su2n_core::fdsolver::{Sign, Stencil};
use su2n_core::HalfInt;

fn half_int(s: &str) -> Result<HalfInt, String> {
    s.parse::<HalfInt>().map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "su2n", version, about = "Bound neutron in the field of a line current: exact multiplets, spectrum and numerical cross-checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Tolerance for numeric gates
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Levels j = 1/2..jmax with energies and degeneracies
    Spectrum(SpectrumArgs),
    /// Exact states of one multiplet with their checks
    Multiplet(MultipletArgs),
    /// Run the exact and numeric verification suites
    Verify(VerifyArgs),
    /// Finite-difference convergence study for one sector
    Fd(FdArgs),
    /// Coupled momentum-space residuals of exact states
    Transform(TransformArgs),
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long, value_parser = half_int, allow_hyphen_values = true)]
    pub jmax: HalfInt,
    #[arg(long = "G", default_value_t = 1.0)]
    pub g: f64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub k: i64,
    #[arg(long = "L", default_value_t = 1.0)]
    pub l: f64,
}

#[derive(Args, Debug)]
pub struct MultipletArgs {
    #[arg(long, value_parser = half_int, allow_hyphen_values = true)]
    pub j: HalfInt,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_parser = half_int, allow_hyphen_values = true, default_value = "5/2")]
    pub jmax: HalfInt,
    #[arg(long = "G", default_value_t = 1.0)]
    pub g: f64,
}

#[derive(Args, Debug)]
pub struct FdArgs {
    #[arg(long, value_parser = half_int, allow_hyphen_values = true)]
    pub jz: HalfInt,
    #[arg(long, value_enum, default_value_t = SignArg::Minus)]
    pub sign: SignArg,
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    /// Comma-separated, ascending grid sizes
    #[arg(long, value_delimiter = ',', default_value = "512,1024,2048,4096")]
    pub n: Vec<usize>,
    #[arg(long, value_enum, default_value_t = StencilArg::Weighted)]
    pub stencil: StencilArg,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    #[arg(long, value_parser = half_int, allow_hyphen_values = true)]
    pub j: HalfInt,
    /// One state of the multiplet; all of them if omitted
    #[arg(long, value_parser = half_int, allow_hyphen_values = true)]
    pub jz: Option<HalfInt>,
    #[arg(long = "G", default_value_t = 1.0)]
    pub g: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum StencilArg {
    Weighted,
    Plain,
}

impl From<StencilArg> for Stencil {
    fn from(s: StencilArg) -> Stencil {
        match s {
            StencilArg::Weighted => Stencil::Weighted,
            StencilArg::Plain => Stencil::Plain,
        }
    }
}
