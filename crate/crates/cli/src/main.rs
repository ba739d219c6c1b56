//! `zpcp`: command-line front end for lattices over `ℤ₍p₎C_p`.

mod commands;
mod report;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use zpcp::acceptance::AcceptanceConfig;
use zpcp::cancel::{with_token, CancelToken};
use zpcp::generate::{generate_instance, GenerateKind, GenerateParams};
use zpcp::wire::Instance;
use zpcp::{Error, Prime, Result};

use commands::Predicate;
use report::{envelope, error_output, CommandOutput, Outcome};

#[derive(Parser)]
#[command(name = "zpcp", version, about = "Exact lattices over the group ring Z_(p)C_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct IoArgs {
    /// Input JSON document; stdin when omitted.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Cancel the computation after this many seconds.
    #[arg(long, global = true)]
    timeout_secs: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Decomposition type (a, b, c) of a sigma_lattice.
    Classify(PrimeArg),
    /// Compatible R-basis of a lattice_pair (M, L) with pM ⊆ L ⊆ M.
    Compat(PrimeArg),
    /// Split a free elementary formed_lattice or hermitian_gram as L0 ⊥ L1.
    Jordan(PrimeArg),
    /// Test integral | unimodular | modular:j | elementary on a formed lattice.
    Check {
        #[arg(long)]
        predicate: String,
        #[command(flatten)]
        prime: PrimeArg,
    },
    /// Emit a seeded instance document.
    Generate {
        /// free_pair | elementary_hermitian | block_type | example24 | exampledim2
        kind: String,
        #[arg(long)]
        p: u32,
        /// R-rank; for block_type the multiplicity of R.
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        t: usize,
        /// Multiplicity of T for block_type.
        #[arg(long, default_value_t = 0)]
        b: usize,
        /// Multiplicity of S for block_type.
        #[arg(long, default_value_t = 0)]
        c: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Primes to test, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 5])]
        p: Vec<u32>,
        /// Largest R-rank used by the randomized criteria.
        #[arg(long, default_value_t = 3)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Scale one basis vector before verification; the suite must then fail.
        #[arg(long)]
        inject_fault: bool,
    },
}

#[derive(Args)]
struct PrimeArg {
    /// Expected prime; must match the document when given.
    #[arg(long)]
    p: Option<u32>,
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    let mut text = String::new();
    match path {
        Some(p) => text = std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?,
        None => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| Error::Parse(e.to_string()))?;
        }
    }
    Ok(text)
}

fn write_output(io: &IoArgs, value: &impl serde::Serialize) -> std::io::Result<()> {
    let mut text = if io.pretty { serde_json::to_string_pretty(value)? } else { serde_json::to_string(value)? };
    text.push('\n');
    match &io.output {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn load(io: &IoArgs, expected: &PrimeArg) -> Result<Instance> {
    let (doc, instance) = commands::load_instance(&read_input(&io.input)?)?;
    match expected.p {
        Some(p) if p != doc.p => Err(Error::PrimeMismatch(p, doc.p)),
        _ => Ok(instance),
    }
}

fn run(command: &Command, io: &IoArgs, token: &CancelToken) -> Result<CommandOutput> {
    match command {
        Command::Classify(prime) => commands::classify(load(io, prime)?),
        Command::Compat(prime) => commands::compat(load(io, prime)?),
        Command::Jordan(prime) => commands::jordan(load(io, prime)?),
        Command::Check { predicate, prime } => {
            let predicate: Predicate = predicate.parse()?;
            commands::check(load(io, prime)?, predicate)
        }
        Command::Selftest { p, rank, seed, inject_fault } => {
            let primes = p.iter().map(|&q| Prime::new(q)).collect::<Result<Vec<_>>>()?;
            let cfg = AcceptanceConfig { primes, max_rank: *rank, seed: *seed, inject_fault: *inject_fault };
            commands::selftest(&cfg, token)
        }
        Command::Generate { .. } => unreachable!("generate emits an instance document"),
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Classify(_) => "classify",
        Command::Compat(_) => "compat",
        Command::Jordan(_) => "jordan",
        Command::Check { .. } => "check",
        Command::Generate { .. } => "generate",
        Command::Selftest { .. } => "selftest",
    }
}

fn generate(command: &Command, io: &IoArgs) -> ExitCode {
    let Command::Generate { kind, p, rank, t, b, c, seed } = command else { unreachable!() };
    let params = kind.parse::<GenerateKind>().and_then(|kind| {
        Ok(GenerateParams { kind, p: Prime::new(*p)?, rank: *rank, t: *t, b: *b, c: *c, seed: *seed })
    });
    let doc = params.and_then(|params| generate_instance(&params));
    match doc {
        Ok(doc) => match write_output(io, &doc) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("zpcp: {e}");
                Outcome::BadInput.into()
            }
        },
        Err(e) => {
            eprintln!("zpcp generate: {e}");
            report::outcome_of(&e).into()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if matches!(cli.command, Command::Generate { .. }) {
        return generate(&cli.command, &cli.io);
    }
    let token = CancelToken::new();
    if let Some(secs) = cli.io.timeout_secs {
        let watchdog = token.clone();
        std::thread::spawn(move || {
            std::thread::sleep(Duration::from_secs(secs));
            watchdog.cancel();
        });
    }
    let out = with_token(&token, || run(&cli.command, &cli.io, &token)).unwrap_or_else(|e| error_output(&e));
    let doc = envelope(command_name(&cli.command), &out);
    for d in &out.diagnostics {
        eprintln!("{d}");
    }
    if let Err(e) = write_output(&cli.io, &doc) {
        eprintln!("zpcp: {e}");
        return Outcome::BadInput.into();
    }
    out.outcome.into()
}
