//! Arguments of the `theory` subcommand.

use crate::commands;
use crate::error::{CliError, CliResult};
use clap::Subcommand;
use dimincr_core::theory::QInput;

#[derive(Subcommand, Debug)]
pub enum TheoryCommand {
    /// Number of detection iterations sufficient for failure probability ε.
    Iterations {
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// |I_3δ|.
        #[arg(long)]
        i3d: usize,
        #[arg(long)]
        delta: f64,
        /// Σ |c_h| outside I_3δ.
        #[arg(long, default_value_t = 0.0)]
        tail: f64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        epsilon: f64,
    },
    /// Per-index failure probability q, optionally with the union bound.
    Q {
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// Comma-separated |c_h|.
        #[arg(long, value_delimiter = ',', required = true)]
        c_slice: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        delta_psi: f64,
        #[arg(long, default_value_t = 0.0)]
        delta_plus: f64,
        #[arg(long, default_value_t = 1.0)]
        c_q: f64,
        #[arg(long, default_value_t = 0.0)]
        tail: f64,
        /// With --i-delta, also print |I_δ| q^r.
        #[arg(long, requires = "i_delta")]
        r: Option<u32>,
        #[arg(long)]
        i_delta: Option<usize>,
    },
    /// Probability bound for detecting a false positive.
    FalsePositive {
        #[arg(long)]
        delta_psi: f64,
        #[arg(long)]
        delta_plus: f64,
        #[arg(long)]
        r: u32,
    },
}

impl TheoryCommand {
    pub fn evaluate(&self) -> CliResult<String> {
        match self {
            TheoryCommand::Iterations { b, c, i3d, delta, tail, d, epsilon } => {
                commands::theory_iterations(*b, *c, *i3d, *delta, *tail, *d, *epsilon)
            }
            TheoryCommand::Q { b, c_slice, delta_psi, delta_plus, c_q, tail, r, i_delta } => {
                let inp = QInput {
                    b: *b,
                    c_slice,
                    delta_psi: *delta_psi,
                    delta_plus: *delta_plus,
                    c_q: *c_q,
                    tail_sum: *tail,
                };
                let union = match (i_delta, r) {
                    (Some(n), Some(r)) => Some((*n, *r)),
                    (Some(_), None) => return Err(CliError::Config("--i-delta needs --r".into())),
                    _ => None,
                };
                commands::theory_q(&inp, union)
            }
            TheoryCommand::FalsePositive { delta_psi, delta_plus, r } => {
                commands::theory_false_positive(*delta_psi, *delta_plus, *r)
            }
        }
    }
}
