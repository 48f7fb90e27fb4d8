use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Linear IPS refutations with roABP coefficients: build, verify,
/// interpolate, lift and restrict.
#[derive(Debug, Parser)]
#[command(name = "roabp-ips", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Coefficient field: a prime `p`, `prime:<p>` or `rational`.
    #[arg(long, global = true, env = "IPS_FIELD")]
    pub field: Option<String>,
    /// Comma-separated variable order.
    #[arg(long, global = true)]
    pub order: Option<String>,
    /// Term budget for expanding programs.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Seed for randomized steps.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Nonmonotone,
    Monotone,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Check {
    Expand,
    Randomized,
    Exact,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RoleArg {
    X,
    Y,
    Z,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Translate a DIMACS CNF into a polynomial system.
    Translate {
        input: PathBuf,
        /// Name prefix for unnamed DIMACS variables.
        #[arg(long, default_value = "x")]
        prefix: String,
        /// Role given to every variable.
        #[arg(long, value_enum, default_value = "x")]
        role: RoleArg,
        #[command(flatten)]
        out: Output,
    },
    /// Write the split system for GEN_n.
    GenSplit {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Lift a 3-CNF; writes Psi as DIMACS and optionally the selector index.
    Lift {
        input: PathBuf,
        #[arg(long)]
        index: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Restrict Psi (lifted from INPUT) along `--order`, or along the order
    /// of a Psi refutation which is then mapped to a refutation of INPUT.
    Restrict {
        input: PathBuf,
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Verify a certificate file.
    Verify {
        certificate: PathBuf,
        #[arg(long, value_enum, default_value = "expand")]
        mode: Check,
        #[arg(long, default_value_t = 16)]
        trials: usize,
    },
    /// Search for a refutation of a system.
    NsSolve {
        system: PathBuf,
        /// Largest degree tried by the Nullstellensatz search.
        #[arg(long, default_value_t = 4)]
        degree: u32,
        /// Use the decision-tree search instead (clause systems only).
        #[arg(long)]
        search: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Bring P0 into z-normal form; with a certificate, transform it too.
    NormalForm {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "nonmonotone")]
        mode: Mode,
        /// Treat INPUT as a refutation and write the transformed refutation.
        #[arg(long)]
        certificate: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Extract a span program from a refutation of a split system.
    ExtractInterpolant {
        certificate: PathBuf,
        #[arg(long, value_enum, default_value = "nonmonotone")]
        mode: Mode,
        /// Also write the normalised refutation here.
        #[arg(long)]
        normalized: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Check a span program against a split system on every z-assignment.
    CheckInterpolant { program: PathBuf, system: PathBuf },
    /// Evaluate a span program; prints the truth table without `--assign`.
    EvalSpan {
        program: PathBuf,
        /// Assignment such as `z1=1,z2=0`.
        #[arg(long)]
        assign: Option<String>,
    },
    /// Build the Tseitin refutation of a graph.
    BuildTseitin {
        /// Edge-list file (`a b` per line, then `charge c0 c1 ...`).
        graph: Option<PathBuf>,
        #[arg(long, conflicts_with_all = ["graph", "complete"])]
        cycle: Option<usize>,
        #[arg(long, conflicts_with_all = ["graph", "cycle"])]
        complete: Option<usize>,
        /// Also write the Tseitin CNF as DIMACS.
        #[arg(long)]
        cnf: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Build the refutation of the functional pigeonhole principle.
    BuildFphp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        cnf: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Simulate a tree-like PC refutation of a CNF by a certificate. Without
    /// `--proof`, one is found by decision-tree search.
    SimulatePc {
        input: PathBuf,
        #[arg(long)]
        proof: Option<PathBuf>,
        /// Write the proof that was simulated.
        #[arg(long)]
        emit_proof: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Run the acceptance suite.
    Selftest,
}
