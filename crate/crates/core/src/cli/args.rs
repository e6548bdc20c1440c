use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::abelian::DEFAULT_ORDER_CAP;
use crate::linform::DEFAULT_WORK_BUDGET;
use crate::reduction::DEFAULT_PINPOINT_MAX_K;

#[derive(Debug, Parser)]
#[command(name = "addforms", version, about = "Exact linear-form densities, additive energy and polynomial reductions over finite abelian groups")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Largest admissible group order.
    #[arg(long, global = true, env = "ADDFORMS_MAX_ORDER", default_value_t = DEFAULT_ORDER_CAP)]
    pub max_order: u64,

    /// Cap on predicted primitive evaluations for exact densities.
    #[arg(long, global = true, default_value_t = DEFAULT_WORK_BUDGET)]
    pub work_budget: u128,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact density t(L, A) of a system or quantum system.
    Density(DensityArgs),
    /// Additive energy by counting and by Fourier transform.
    Energy(SetArgs),
    /// Sumset A + B, or rA - sA with --r/--s.
    Sumset(SumsetArgs),
    /// Doubling constant |A + A| / |A|.
    Doubling(SetArgs),
    /// Stabilizer {g : g + A = A}.
    Stabilizer(SetArgs),
    /// Check an inequality on one instance or on every subset of the group.
    Check(CheckArgs),
    /// Polynomial transforms and the linear-form encoding.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Build the witness group and subset.
    Witness(WitnessArgs),
    /// Exhaustive verifiers.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Monte Carlo estimate of t(L, A).
    Estimate(EstimateArgs),
}

#[derive(Debug, Args, Clone)]
#[command(group(ArgGroup::new("subset").args(["set", "set_file"])))]
pub struct SetArgs {
    /// Group, e.g. "Z9 x Z2".
    #[arg(long)]
    pub group: String,
    /// Inline subset, e.g. "{0,2}" or "{(1,0),(2,1)}".
    #[arg(long)]
    pub set: Option<String>,
    /// Subset file (residue tuples per line, or a JSON array of arrays).
    #[arg(long)]
    pub set_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("what").required(true).args(["system", "quantum"])))]
pub struct DensityArgs {
    #[command(flatten)]
    pub set: SetArgs,
    /// System of linear forms, e.g. "[g1; g2; !(g1 + g2)]".
    #[arg(long)]
    pub system: Option<String>,
    /// Quantum system, e.g. "2*[g1]*[g1; g2] - [g1]".
    #[arg(long)]
    pub quantum: Option<String>,
}

#[derive(Debug, Args)]
pub struct SumsetArgs {
    #[command(flatten)]
    pub set: SetArgs,
    /// Second summand (default: the first set).
    #[arg(long)]
    pub other: Option<String>,
    #[arg(long, requires = "s")]
    pub r: Option<usize>,
    #[arg(long, requires = "r")]
    pub s: Option<usize>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("kind").required(true).args(
    ["energy_bound", "kneser", "plunnecke", "energy_doubling", "quantum"]
)))]
pub struct CheckArgs {
    #[command(flatten)]
    pub set: SetArgs,
    /// E(A) <= energy_upper_bound(α(A)).
    #[arg(long)]
    pub energy_bound: bool,
    /// Kneser's inequality for A + B.
    #[arg(long)]
    pub kneser: bool,
    /// Plunnecke-Ruzsa with exponents --r, --s.
    #[arg(long)]
    pub plunnecke: bool,
    /// E(A) α(A+A) >= α(A)^4.
    #[arg(long)]
    pub energy_doubling: bool,
    /// t(Q, A) >= 0 for a quantum system Q.
    #[arg(long)]
    pub quantum: Option<String>,
    /// Second set for two-set inequalities (default: the first set).
    #[arg(long)]
    pub other: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    /// Check every subset (every pair for two-set inequalities).
    #[arg(long)]
    pub exhaustive: bool,
}

#[derive(Debug, Subcommand)]
pub enum ReduceCommand {
    /// The full encoding ψ(q*) with all systems.
    Bundle {
        #[arg(long)]
        q: String,
        #[arg(long)]
        k: usize,
    },
    /// q*(v, e, t).
    Qstar {
        #[arg(long)]
        q: String,
        #[arg(long)]
        k: usize,
    },
    /// p(x) = prod x_i^deg q * q(1/x).
    PFromQ {
        #[arg(long)]
        q: String,
    },
    /// q(x, y) = p(x) + M sum (x_i^3 - y_i).
    QFromP {
        #[arg(long)]
        p: String,
    },
    /// Evaluate ψ(q*) on a subset under both semantics.
    Eval {
        #[arg(long, required_unless_present = "bundle")]
        q: Option<String>,
        #[arg(long, required_unless_present = "bundle")]
        k: Option<usize>,
        /// Bundle JSON written by `reduce bundle`.
        #[arg(long, conflicts_with_all = ["q", "k"])]
        bundle: Option<PathBuf>,
        #[command(flatten)]
        set: SetArgs,
    },
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long)]
    pub k: usize,
    /// Comma-separated n_1,...,n_k.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u64>,
    /// Also write the subset file here.
    #[arg(long)]
    pub subset_out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// L(g), M(g) in S = {0..k} on Z_{(k+1)^2}, all assignments.
    Pinpoint {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_PINPOINT_MAX_K)]
        max_k: usize,
    },
    /// Vertex sets, edge and triangle densities of the witness graphs.
    Witness {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',')]
        n: Vec<u64>,
        /// Also compare every graph density with the fixed-g system densities.
        #[arg(long)]
        cross_check: bool,
    },
    /// Graph densities of U_j(g) against fixed-g system densities on random (A, g).
    Homdensity {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 50)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Grid check of the δ' and δ'' interval claims, and δ(1/n) = 0.
    Delta {
        #[arg(long, default_value = "1/1000")]
        step: String,
        #[arg(long, default_value_t = 20)]
        max_t: u64,
    },
    /// Breakpoint values and continuity of the triangle-density bound.
    Bollobas {
        #[arg(long, default_value_t = 100)]
        t_max: u64,
    },
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub set: SetArgs,
    #[arg(long)]
    pub system: String,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also compute the exact density and compare.
    #[arg(long)]
    pub exact: bool,
}
