use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hydrostokes::workbench::{
    error_line, exit_code, norms, simulate, spectrum, verify, InitKind, Suite, WorkbenchConfig,
};
use hydrostokes::Result;

#[derive(Parser)]
#[command(name = "hydrostokes", version, about = "Primitive-equations workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a full solve and write diagnostics and snapshots.
    Simulate {
        #[arg(long)]
        config: Option<PathBuf>,
        /// random-decay, single-mode or rough-perturbation
        #[arg(long)]
        init: Option<String>,
        #[arg(long)]
        amplitude: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run an estimate suite and write scan CSVs.
    Verify {
        /// kernel, young, semigroup, resolvent, multiplier, interpolation, nonlinear, recursion or all
        suite: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print mixed, L2 and sup norms of a snapshot.
    Norms {
        snapshot: PathBuf,
        #[arg(long, default_value_t = f64::INFINITY)]
        q: f64,
        #[arg(long, default_value_t = 4.0)]
        p: f64,
    },
    /// Write per-mode eigenvalues for both subspaces.
    Spectrum {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn load(path: &Option<PathBuf>, output: &Option<PathBuf>) -> Result<WorkbenchConfig> {
    let mut cfg = match path {
        Some(p) => WorkbenchConfig::load(p)?,
        None => WorkbenchConfig::default(),
    };
    if let Some(o) = output {
        cfg.output_dir = o.clone();
    }
    Ok(cfg)
}

fn run(cmd: &Command) -> Result<u8> {
    match cmd {
        Command::Simulate { config, init, amplitude, output } => {
            let mut cfg = load(config, output)?;
            if let Some(kind) = init {
                cfg.init.kind = kind.parse::<InitKind>()?;
            }
            if let Some(a) = amplitude {
                cfg.init.amplitude = *a;
                cfg.validate()?;
            }
            let out = simulate(&cfg)?;
            let sol = &out.solution;
            println!("steps {}", sol.trajectory.len() - 1);
            println!("picard iterations {} converged {}", sol.report.iterations.len(), sol.report.converged);
            println!("split delta {:e} rough norm {:e}", sol.split.delta, sol.split.a0_norm);
            println!("max residual {:e}", sol.residual.iter().copied().fold(0.0, f64::max));
            println!("wrote {} and {} snapshots", out.csv.display(), out.snapshots.len());
            Ok(0)
        }
        Command::Verify { suite, config, output } => {
            let suite: Suite = suite.parse()?;
            let cfg = load(config, output)?;
            let out = verify(suite, &cfg)?;
            for line in &out.lines {
                println!("{line}");
            }
            Ok(if out.passed { 0 } else { 1 })
        }
        Command::Norms { snapshot, q, p } => {
            let v = norms(snapshot, *q, *p)?;
            println!("time {:e}", v.time);
            println!("mixed_q{q}_p{p} {:e}", v.mixed);
            println!("l2 {:e}", v.l2);
            println!("sup {:e}", v.sup);
            Ok(0)
        }
        Command::Spectrum { config, output } => {
            let cfg = load(config, output)?;
            let out = spectrum(&cfg)?;
            println!("bound full {:e}", out.full_bound);
            println!("bound solenoidal {:e}", out.solenoidal_bound);
            println!("wrote {}", out.csv.display());
            Ok(0)
        }
    }
}

fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Simulate { .. } => "simulate",
        Command::Verify { .. } => "verify",
        Command::Norms { .. } => "norms",
        Command::Spectrum { .. } => "spectrum",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", error_line(name(&cli.command), &e));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
