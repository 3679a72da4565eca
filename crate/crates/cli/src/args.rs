use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cuspzeta",
    version,
    about = "Exact zeta and L-functions of cuspidal quotient graphs"
)]
pub struct Cli {
    /// Emit a single machine-readable JSON document.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Pade,
    Closure,
    Finite,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Transfer,
    Vertex,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a graph document and summarize it.
    Validate { graph: PathBuf },

    /// Inverse zeta function Z(u)^-1.
    Zeta {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        method: MethodArg,
        /// Trace order M used by the Padé route.
        #[arg(long, default_value_t = 16)]
        traces: usize,
        /// Coefficients an approximant must reproduce past its window.
        #[arg(long, default_value_t = 4)]
        margin: usize,
    },

    /// Weighted cycle counts N_1..N_M.
    Traces {
        graph: PathBuf,
        #[arg(long, default_value_t = 16)]
        traces: usize,
    },

    /// Census of cycle classes up to a length.
    Cycles {
        graph: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },

    /// Compare cycle counts and the Euler product with the trace series.
    EulerCheck {
        graph: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },

    /// Check det(1-uT)(1-u^2)^chi = det(1-uA+u^2Q) on truncations.
    IharaCheck {
        graph: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_depth: usize,
    },

    /// Principal minors of 1-uT or 1-uA+u^2Q over a schedule of finite sets.
    MinorNet {
        graph: PathBuf,
        /// Evaluation point, as p/q.
        #[arg(long, default_value = "1/10")]
        u: String,
        #[arg(long, value_enum, default_value = "vertex")]
        mode: ModeArg,
        /// Interleave sets carrying a detached ray segment.
        #[arg(long)]
        adversarial: bool,
        #[arg(long, default_value_t = 8)]
        max_depth: usize,
    },

    /// Inverse L-function for a block assignment.
    Lfunction {
        graph: PathBuf,
        blocks: PathBuf,
        #[arg(long, default_value_t = 16)]
        traces: usize,
        /// Also compare with the Euler product through this degree.
        #[arg(long)]
        euler_degree: Option<usize>,
    },

    /// Inverse roots of Z^-1, dominant modulus, delta and epsilon.
    Spectrum {
        graph: PathBuf,
        #[arg(long, default_value_t = 16)]
        traces: usize,
    },

    /// Residuals of N_m against the dominant term.
    Pgt {
        graph: PathBuf,
        #[arg(long, default_value_t = 16)]
        traces: usize,
    },

    /// Write the single-cusp graph for the parameters q_0,q_1,...
    Nagao {
        #[arg(long, value_delimiter = ',', required = true)]
        qs: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        preperiod: Vec<u64>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Zeta { .. } => "zeta",
            Command::Traces { .. } => "traces",
            Command::Cycles { .. } => "cycles",
            Command::EulerCheck { .. } => "euler-check",
            Command::IharaCheck { .. } => "ihara-check",
            Command::MinorNet { .. } => "minor-net",
            Command::Lfunction { .. } => "lfunction",
            Command::Spectrum { .. } => "spectrum",
            Command::Pgt { .. } => "pgt",
            Command::Nagao { .. } => "nagao",
        }
    }
}
