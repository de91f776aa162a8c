use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod output;

use config::{Format, Overrides, RunConfig, UsageError, PREC_ENV};
use output::Output;

const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_VERIFICATION: u8 = 4;

/// Exact computations for rational T^2-equivariant elliptic cohomology.
#[derive(Parser)]
#[command(name = "ellcoh", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Weierstrass coefficients a1,a2,a3,a4,a6
    #[arg(long, global = true, allow_hyphen_values = true)]
    curve: Option<String>,
    /// Working precision (total degree); defaults to $ELLCOH_PREC or 10
    #[arg(long, global = true)]
    prec: Option<usize>,
    /// Pole cap k for Cousin windows
    #[arg(long, global = true)]
    polecap: Option<u32>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Direction grid radius |λ|+|μ|
    #[arg(long, global = true)]
    grid: Option<i64>,
    /// key=value configuration file; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Value of the theory on the sphere S^V or S^-V
    Value {
        /// Representation, e.g. "(1,0):1,(0,1):2"
        #[arg(long, allow_hyphen_values = true)]
        rep: String,
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        sign: String,
    },
    /// Formal group law of the curve
    Fgl {
        #[command(subcommand)]
        op: FglOp,
    },
    /// Codimension data of a finite subgroup of the torus
    Subgroup {
        /// Generators as "x,y;x,y" with rational entries; empty for the trivial group
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        gens: String,
    },
    /// Cohomology of a divisor on E×E
    Divisor {
        #[arg(long, allow_hyphen_values = true, conflicts_with = "terms")]
        rep: Option<String>,
        /// Terms "dir=(1,0) j=1 coeff=2", separated by ';'
        #[arg(long)]
        terms: Option<String>,
    },
    /// Intersection numbers of the components over two directions
    Intersect {
        #[arg(long, allow_hyphen_values = true)]
        dirs: String,
        #[arg(long, default_value_t = 3)]
        max_j: u64,
        /// Also count intersection points by torsion enumeration
        #[arg(long)]
        brute: bool,
    },
    /// Exactness report of a truncated local Cousin complex
    Cousin {
        /// Window directions, e.g. "(1,0),(0,1)"
        #[arg(long, allow_hyphen_values = true)]
        dirs: String,
    },
    /// Run every property suite
    Selftest,
}

#[derive(Subcommand)]
enum FglOp {
    /// Coefficients of the logarithm
    Log,
    /// The group law F(t1, t2)
    Add,
    /// The n-series [n](t)
    Nseries {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Check the linear relation among the hatted coordinates
    Fundrel {
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        subgroup: String,
        /// Directions to check; defaults to the grid
        #[arg(long, allow_hyphen_values = true)]
        dir: Option<String>,
    },
}

fn run(cli: Cli) -> Result<(Output, Format)> {
    let g = cli.global;
    let flags = Overrides {
        curve: g.curve,
        prec: g.prec,
        polecap: g.polecap,
        format: g.format,
        grid: g.grid,
    };
    let cfg = RunConfig::resolve(std::env::var(PREC_ENV).ok(), g.config.as_deref(), &flags)?;
    let out = match cli.command {
        Command::Value { rep, sign } => commands::value(&cfg, &rep, &sign)?,
        Command::Fgl { op } => match op {
            FglOp::Log => commands::fgl_log(&cfg)?,
            FglOp::Add => commands::fgl_add(&cfg)?,
            FglOp::Nseries { n } => commands::fgl_nseries(&cfg, n)?,
            FglOp::Fundrel { subgroup, dir } => {
                commands::fgl_fundrel(&cfg, &subgroup, dir.as_deref())?
            }
        },
        Command::Subgroup { gens } => commands::subgroup(&cfg, &gens)?,
        Command::Divisor { rep, terms } => commands::divisor(rep.as_deref(), terms.as_deref())?,
        Command::Intersect { dirs, max_j, brute } => commands::intersect(&dirs, max_j, brute)?,
        Command::Cousin { dirs } => commands::cousin(&cfg, &dirs)?,
        Command::Selftest => commands::selftest()?,
    };
    Ok((out, cfg.format))
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<UsageError>().is_some() {
        return EXIT_PARSE;
    }
    match e.downcast_ref::<ellcoh::Error>() {
        Some(err) if err.is_parse() || matches!(err, ellcoh::Error::ZeroVector(_)) => EXIT_PARSE,
        _ => EXIT_PRECONDITION,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_PARSE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok((out, format)) => {
            print!("{}", out.render(format));
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFICATION)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
