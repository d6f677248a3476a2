use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eqszego::asymptotics::Bracket;
use eqszego::geometry::{FiberNorm, ModelSpace};
use szego_lab::{
    assert_table, run_decay, run_diag, run_dim, run_neardiag, run_oracle, ConfigError,
    ExperimentConfig, PointSpec, Table, VERSION,
};

#[derive(Parser)]
#[command(
    name = "szego-lab",
    version,
    about = "Equivariant Szegő kernel experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Isotypic dimensions against the limit integral
    Dim(Common),
    /// Diagonal kernel against the central and noncentral terms
    Diag(Common),
    /// Gaussian decay transverse to the orbit
    Neardiag(Common),
    /// Decay between points on different orbits
    Decay(Common),
    /// Isotypic-basis kernel against the Haar quadrature oracle
    Oracle(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    P1,
    P1xp1,
}

#[derive(Clone, Copy, ValueEnum)]
enum FiberArg {
    /// c_θ = 1
    #[value(name = "1")]
    Unit,
    /// c_θ = 1/2π
    #[value(name = "inv2pi")]
    InvTwoPi,
}

#[derive(Clone, Copy, ValueEnum)]
enum BracketArg {
    Thm,
    Sec4,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "p1xp1")]
    model: ModelArg,
    #[arg(long, default_value_t = 2)]
    r: u32,
    #[arg(long, default_value_t = 1)]
    nu: u32,
    #[arg(long, default_value_t = 10)]
    kmin: u32,
    #[arg(long, default_value_t = 50)]
    kmax: u32,
    #[arg(long, default_value_t = 1)]
    kstep: u32,
    /// generic, orthonormal-ZW, parallel-ZW or Z0,Z1,W0,W1
    #[arg(long, default_value = "generic")]
    point: String,
    #[arg(long, default_value_t = 20240601)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "fiber-norm", value_enum, default_value = "1")]
    fiber: FiberArg,
    #[arg(long, value_enum, default_value = "thm")]
    bracket: BracketArg,
    /// CSV destination; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Wall-clock budget in seconds
    #[arg(long, default_value_t = 60.0)]
    budget: f64,
    /// Check the experiment's acceptance condition and exit 3 on failure
    #[arg(long)]
    assert: bool,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig, ConfigError> {
        if !(self.budget > 0.0 && self.budget.is_finite()) {
            return Err(ConfigError::Invalid(format!(
                "--budget must be positive, got {}",
                self.budget
            )));
        }
        Ok(ExperimentConfig {
            model: match self.model {
                ModelArg::P1 => ModelSpace::P1,
                ModelArg::P1xp1 => ModelSpace::P1xP1 { r: self.r },
            },
            nu: self.nu,
            kmin: self.kmin,
            kmax: self.kmax,
            kstep: self.kstep,
            point: self.point.parse::<PointSpec>()?,
            seed: self.seed,
            tol: self.tol,
            fiber: match self.fiber {
                FiberArg::Unit => FiberNorm::Unit,
                FiberArg::InvTwoPi => FiberNorm::InvTwoPi,
            },
            bracket: match self.bracket {
                BracketArg::Thm => Bracket::Theorem,
                BracketArg::Sec4 => Bracket::Sec4,
            },
            out: self.out.clone(),
            budget: Duration::from_secs_f64(self.budget),
        })
    }
}

type Runner = fn(&ExperimentConfig) -> Result<Table, ConfigError>;

fn emit(table: &Table, out: &Option<PathBuf>) -> Result<(), ConfigError> {
    match out {
        Some(p) => table.write_csv(BufWriter::new(File::create(p)?)),
        None => table.write_csv(io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common, run): (&str, &Common, Runner) = match &cli.command {
        Command::Dim(c) => ("dim", c, run_dim),
        Command::Diag(c) => ("diag", c, run_diag),
        Command::Neardiag(c) => ("neardiag", c, run_neardiag),
        Command::Decay(c) => ("decay", c, run_decay),
        Command::Oracle(c) => ("oracle", c, run_oracle),
    };
    let result = common.config().and_then(|cfg| {
        cfg.validate()?;
        let table = run(&cfg)?;
        emit(&table, &cfg.out)?;
        Ok((cfg, table))
    });
    match result {
        Ok((cfg, table)) => {
            if table.truncated {
                eprintln!(
                    "warning: time budget exhausted, {} rows written",
                    table.rows.len()
                );
            }
            if common.assert {
                let c = assert_table(name, &cfg, &table);
                eprintln!("{}: {}", if c.passed { "PASS" } else { "FAIL" }, c.message);
                if !c.passed {
                    return ExitCode::from(3);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{VERSION}: {e}");
            ExitCode::from(2)
        }
    }
}
