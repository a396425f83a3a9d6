//! Command-line front end: descriptors in, human or JSON reports out.

pub mod commands;
pub mod descriptor;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ringpert::perturb::{BoundFlavor, Fault, GenProfile, Property};

pub use commands::{execute, CliError, Execution};
pub use descriptor::{parse_descriptor, read_descriptor, Descriptor, DescriptorError, RunSettings};
pub use report::{strip_timing, Report, TableRow};

pub const DEFAULT_JMAX: usize = 6;
pub const DEFAULT_BUDGET: usize = 500;
pub const DEFAULT_SAMPLES: usize = 50;

#[derive(Debug, Parser)]
#[command(name = "ringpert", version, about = "Exact invariants and perturbation experiments over local algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Print the JSON report instead of the human summary.
    #[arg(long, global = true)]
    pub machine: bool,

    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Basis, dimension and nilpotency data of the algebra.
    AlgebraInfo(DescriptorArg),
    /// Loewy lengths, filtration, Artin–Rees numbers and the perturbation bound.
    Invariants(InvariantsArgs),
    /// Betti and Bass tables of the module and of its quotient by the sequence.
    Resolve(ResolveArgs),
    /// Perturb the sequence inside the chosen power of J and compare invariants.
    Perturb(PerturbArgs),
    /// Sample every level from the proved bound down to zero.
    Threshold(ThresholdArgs),
    /// Run the randomized property suite.
    Verify(VerifyArgs),
    /// Print a random descriptor.
    GenRandom(GenRandomArgs),
}

#[derive(Debug, Args)]
pub struct DescriptorArg {
    /// Experiment descriptor file.
    pub descriptor: PathBuf,
}

#[derive(Debug, Args)]
pub struct InvariantsArgs {
    #[command(flatten)]
    pub input: DescriptorArg,
    /// Bound to evaluate [default: descriptor value or main].
    #[arg(long)]
    pub flavor: Option<BoundFlavor>,
}

#[derive(Debug, Args)]
pub struct ResolveArgs {
    #[command(flatten)]
    pub input: DescriptorArg,
    /// Highest homological degree [default: descriptor value or 6].
    #[arg(long)]
    pub jmax: Option<usize>,
    /// Write (side, j, beta, mu) rows to this CSV file.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    #[command(flatten)]
    pub input: DescriptorArg,
    #[arg(long)]
    pub jmax: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Enumerate all tuples when there are at most this many, else draw this many [default: 500].
    #[arg(long)]
    pub budget: Option<usize>,
    /// Bound giving the level of the perturbation [default: main].
    #[arg(long)]
    pub flavor: Option<BoundFlavor>,
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub input: DescriptorArg,
    #[arg(long)]
    pub jmax: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    Small,
    Deep,
    Mixed,
}

impl From<ProfileArg> for GenProfile {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Small => GenProfile::Small,
            ProfileArg::Deep => GenProfile::Deep,
            ProfileArg::Mixed => GenProfile::Mixed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    /// Corrupt one Betti number of the unperturbed quotient.
    FlipBetti,
}

impl From<FaultArg> for Fault {
    fn from(f: FaultArg) -> Self {
        match f {
            FaultArg::FlipBetti => Fault::FlipBetti,
        }
    }
}

fn parse_property(s: &str) -> Result<Property, String> {
    Property::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Property::ALL.iter().map(|p| p.name()).collect();
        format!("unknown property `{s}`; known: {}", names.join(", "))
    })
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 25)]
    pub cases: usize,
    #[arg(long, default_value_t = DEFAULT_JMAX)]
    pub jmax: usize,
    /// Enumerate all perturbation tuples when there are at most this many.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Tuples drawn when enumeration exceeds the budget.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = ProfileArg::Mixed)]
    pub profile: ProfileArg,
    /// Only resample instances whose main bound is non-vacuous.
    #[arg(long)]
    pub nonvacuous: bool,
    /// Shortest generated sequence.
    #[arg(long, default_value_t = 1)]
    pub min_length: usize,
    /// Longest generated sequence.
    #[arg(long, default_value_t = 3)]
    pub max_length: usize,
    /// Largest module dimension the generator accepts.
    #[arg(long, default_value_t = 64)]
    pub max_dim: usize,
    /// Comma-separated property names [default: all].
    #[arg(long, value_delimiter = ',', value_parser = parse_property)]
    pub properties: Vec<Property>,
    /// Corrupt the suite on purpose.
    #[arg(long, value_enum)]
    pub fault: Option<FaultArg>,
}

#[derive(Debug, Args)]
pub struct GenRandomArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ProfileArg::Mixed)]
    pub profile: ProfileArg,
}
