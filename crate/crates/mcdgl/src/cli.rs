//! Command-line definitions. Task lines in problem files are parsed with
//! the same definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "mcdgl", version, about = "Maurer-Cartan moduli of free differential graded Lie algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Computation window: maximum degree, optionally `:max word length`.
    #[arg(long, global = true, value_name = "N[:L]")]
    pub window: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the output here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Basis of a derivation subspace in one degree.
    Basis(BasisArgs),
    /// Emits the Maurer-Cartan system on the degree -1 part.
    Mc(McArgs),
    /// Checks a Maurer-Cartan point or a gauge/automorphism witness.
    Check(CheckArgs),
    /// Homology dimensions of a perturbed differential.
    Homology(HomologyArgs),
    /// Bigraded model of a nilpotent graded Lie algebra.
    Bigraded(InputArgs),
    /// Quillen model of a graded commutative algebra.
    Quillen(InputArgs),
    /// Runs a bundled example end to end.
    Examples(ExamplesArgs),
}

#[derive(Clone, Debug, Args)]
pub struct InputArgs {
    /// Problem file; standard input when absent or `-`.
    pub input: Option<PathBuf>,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "basis")]
pub struct BasisArgs {
    pub input: Option<PathBuf>,
    /// der, dder, sder or weight.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub degree: Option<i32>,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "mc")]
pub struct McArgs {
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub kind: Option<String>,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "check")]
pub struct CheckArgs {
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub kind: Option<String>,
    /// Coordinates `a,b,...` or a combination of declared derivations.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Degree-0 combination of declared derivations.
    #[arg(long, allow_hyphen_values = true)]
    pub gauge: Option<String>,
    /// Scalars `l1,l2,...` of a diagonal automorphism of the algebra.
    #[arg(long = "aut-a", allow_hyphen_values = true)]
    pub aut_a: Option<String>,
    /// Matrix `r1;r2;...` of a linear automorphism of the generators,
    /// row `i` the image of generator `i`.
    #[arg(long = "aut-v", allow_hyphen_values = true)]
    pub aut_v: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<String>,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "homology")]
pub struct HomologyArgs {
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub kind: Option<String>,
    /// Perturbation: coordinates or a combination of declared derivations.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Degrees `lo..hi`, inclusive.
    #[arg(long)]
    pub range: Option<String>,
}

#[derive(Clone, Debug, Args)]
pub struct ExamplesArgs {
    /// wedge-2-4-6-6 or su6-quotient.
    pub name: String,
    /// Smaller window; skips the ellipticity certificate.
    #[arg(long)]
    pub reduced: bool,
}

impl BasisArgs {
    pub fn is_bare(&self) -> bool {
        self.kind.is_none() && self.degree.is_none()
    }
}

impl McArgs {
    pub fn is_bare(&self) -> bool {
        self.kind.is_none()
    }
}

impl CheckArgs {
    pub fn is_bare(&self) -> bool {
        self.point.is_none() && self.gauge.is_none() && self.aut_a.is_none() && self.aut_v.is_none()
    }
}

impl HomologyArgs {
    pub fn is_bare(&self) -> bool {
        self.delta.is_none() && self.range.is_none() && self.kind.is_none()
    }
}
