use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bh_core::families::FamilySpec;
use bh_core::report::{
    cmd_bound, cmd_contractivity, cmd_hyper, cmd_ksz, cmd_multilinear, cmd_search, cmd_supnorm, cmd_table, cmd_verify,
    parse_rational, read_input, render, CommandOutput, RunConfig,
};
use bh_core::Error;

/// Lower bounds for Bohnenblust-Hille constants.
#[derive(Parser, Debug)]
#[command(name = "bh", version)]
struct Cli {
    /// Working precision in decimal digits (at least 30).
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Worker threads (0 or unset: automatic).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// csv or markdown.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write the table here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for cached polynomial powers (default: $BH_CACHE_DIR).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Relative tolerance when comparing against printed table values.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Flat key=value config file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reproduce a table: 1, 2, 3, summary or comparative.
    Table { id: String },
    /// Bound from a power of a family member.
    Bound {
        #[arg(long)]
        family: String,
        /// key=value, repeatable.
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
    /// Extremal-parameter search: m2, m3 or m6.
    Search { target: String },
    /// Sup norm of a serialized polynomial.
    Supnorm { file: PathBuf },
    /// Hypercontractivity aggregate over a results CSV.
    Hyper { csv: PathBuf },
    /// Bound from the multilinear form T_m.
    Multilinear { m: u32 },
    /// binom(m+n-1, n-1)^(1/(2m)).
    Contractivity { n: u32, m: u32 },
    /// Random-polynomial growth experiment.
    Ksz {
        #[arg(long, default_value_t = 2)]
        m: u32,
        /// Exponent r, e.g. 1 or 4/3.
        #[arg(long, default_value = "1")]
        r: String,
        /// Comma-separated dimensions.
        #[arg(long, default_value = "4,8,16,32", value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, default_value_t = 32)]
        trials: usize,
    },
    /// Run the invariant suite.
    Verify,
}

fn config(cli: &Cli) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_config_text(&read_input(path)?)?;
    }
    if let Some(p) = cli.precision {
        cfg.set("precision", &p.to_string())?;
    }
    if let Some(t) = cli.threads {
        cfg.set("threads", &t.to_string())?;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(f) = &cli.format {
        cfg.set("format", f)?;
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.clone());
    }
    if let Some(c) = &cli.cache {
        cfg.cache_dir = Some(c.clone());
    }
    if let Some(t) = cli.tolerance {
        cfg.set("tolerance", &t.to_string())?;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(CommandOutput, RunConfig), Error> {
    let cfg = config(cli)?;
    if let Some(t) = cfg.threads {
        // fails only if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let out = match &cli.command {
        Command::Table { id } => cmd_table(id.parse()?, &cfg)?,
        Command::Bound { family, params, power } => cmd_bound(&FamilySpec::parse(family, params)?, *power, &cfg)?,
        Command::Search { target } => cmd_search(target.parse()?, &cfg)?,
        Command::Supnorm { file } => cmd_supnorm(&read_input(file)?, &cfg)?,
        Command::Hyper { csv } => cmd_hyper(&read_input(csv)?, &cfg)?,
        Command::Multilinear { m } => cmd_multilinear(*m, &cfg)?,
        Command::Contractivity { n, m } => cmd_contractivity(*n, *m, &cfg)?,
        Command::Ksz { m, r, n, trials } => cmd_ksz(*m, &parse_rational(r)?, n, *trials, &cfg)?,
        Command::Verify => cmd_verify(&cfg)?,
    };
    Ok((out, cfg))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ConvergenceFailure(_) => 3,
        Error::InvariantViolated(_) => 2,
        _ => 1,
    }
}

fn emit(out: &CommandOutput, cfg: &RunConfig) -> Result<(), Error> {
    let text = render(&out.csv, cfg.format)?;
    match &cfg.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    let mut err = std::io::stderr();
    for line in &out.notes {
        writeln!(err, "{line}")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            if code == 1 {
                eprintln!("UsageError");
            }
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli).and_then(|(out, cfg)| emit(&out, &cfg).map(|_| out)) {
        Ok(out) if out.failures > 0 => {
            eprintln!("{} check(s) outside tolerance", out.failures);
            ExitCode::from(2)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::from(exit_code(&e))
        }
    }
}
