//! `ban`: command-line front end for Boolean automata networks and modules.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::Target;
use report::Outcome;

#[derive(Parser)]
#[command(name = "ban", version, about = "Boolean automata networks, modules, wirings and simulations")]
struct Cli {
    /// Print a machine-readable report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one update on a configuration and an input configuration.
    Eval {
        module: PathBuf,
        /// Configuration of the automata: a binary word or a name=bit list.
        #[arg(long)]
        x: String,
        /// Input configuration; may be omitted for networks without inputs.
        #[arg(long)]
        i: Option<String>,
        /// Updated automata, e.g. "{a,b}".
        #[arg(long)]
        delta: String,
    },
    /// Run an update mode, printing every configuration along the way.
    Exec {
        module: PathBuf,
        #[arg(long)]
        x: String,
        /// Input configurations separated by `;`, one per step; a single one is held fixed.
        #[arg(long)]
        i: Option<String>,
        /// "{a};{b,c}", "parallel" or "seq:a,b,c".
        #[arg(long)]
        mode: String,
    },
    /// Wire two modules together, or a module to itself.
    Wire {
        #[arg(long, num_args = 2, value_names = ["A", "B"], conflicts_with = "recursive", required_unless_present = "recursive")]
        non_recursive: Option<Vec<PathBuf>>,
        #[arg(long, value_name = "A")]
        recursive: Option<PathBuf>,
        /// "e1=s1,e2=s2": each input is replaced by the automaton's state.
        #[arg(long, default_value = "")]
        map: String,
        /// Treat a malformed wiring as the empty wiring instead of rejecting it.
        #[arg(long)]
        lenient: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Split a module into sub-modules, one file per part plus a manifest.
    Split {
        module: PathBuf,
        /// "a,d/b/c" or "r:a,d/s:b/t:c".
        #[arg(long)]
        parts: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Recompose the sub-modules listed in a split manifest.
    Merge {
        manifest: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Split and recompose, then compare with the original.
    VerifyRoundtrip {
        module: PathBuf,
        #[arg(long)]
        parts: String,
    },
    /// Check the local simulation of one target automaton, or of all of them.
    CheckLocal {
        scheme: PathBuf,
        #[arg(long)]
        automaton: Option<String>,
    },
    /// Assemble the simulating network of a scheme.
    Assemble {
        scheme: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check global simulation of a scheme, or search for one between two networks.
    CheckSim {
        #[arg(required_unless_present = "search", conflicts_with = "search")]
        scheme: Option<PathBuf>,
        /// Simulating network F and simulated network F'.
        #[arg(long, num_args = 2, value_names = ["F", "FP"], requires = "phi")]
        search: Option<Vec<PathBuf>>,
        /// Global encoding of F' in F.
        #[arg(long)]
        phi: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        maxlen: usize,
    },
    /// Rewrite a network into one with clause or monotone local functions.
    Transform {
        network: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// State transition graph, fixed points and fair convergence.
    Dynamics {
        network: PathBuf,
        /// "parallel" or "async".
        #[arg(long, default_value = "async")]
        mode: String,
        /// Restrict to configurations reachable from those satisfying e.g. "a=1,d=1".
        #[arg(long)]
        seed_pred: Option<String>,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Seeded random sweep over the round trip and both transforms.
    SelfTest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Command {
    fn label(&self) -> &'static str {
        match self {
            Command::Eval { .. } => "eval",
            Command::Exec { .. } => "exec",
            Command::Wire { .. } => "wire",
            Command::Split { .. } => "split",
            Command::Merge { .. } => "merge",
            Command::VerifyRoundtrip { .. } => "verify-roundtrip",
            Command::CheckLocal { .. } => "check-local",
            Command::Assemble { .. } => "assemble",
            Command::CheckSim { .. } => "check-sim",
            Command::Transform { .. } => "transform",
            Command::Dynamics { .. } => "dynamics",
            Command::SelfTest { .. } => "self-test",
        }
    }
}

fn run(command: &Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Eval { module, x, i, delta } => commands::eval(module, x, i.as_deref(), delta),
        Command::Exec { module, x, i, mode } => commands::exec(module, x, i.as_deref(), mode),
        Command::Wire {
            non_recursive,
            recursive,
            map,
            lenient,
            output,
        } => match (non_recursive, recursive) {
            (Some(pair), _) => commands::wire_two(&pair[0], &pair[1], map, *lenient, output.as_deref()),
            (None, Some(a)) => commands::wire_one(a, map, *lenient, output.as_deref()),
            (None, None) => unreachable!("clap requires one of the two forms"),
        },
        Command::Split { module, parts, output } => commands::split_module(module, parts, output),
        Command::Merge { manifest, output } => commands::merge(manifest, output.as_deref()),
        Command::VerifyRoundtrip { module, parts } => commands::verify_roundtrip(module, parts),
        Command::CheckLocal { scheme, automaton } => commands::check_local(scheme, automaton.as_deref()),
        Command::Assemble { scheme, output } => commands::assemble_scheme(scheme, output.as_deref()),
        Command::CheckSim {
            scheme,
            search,
            phi,
            maxlen,
        } => match (scheme, search) {
            (_, Some(pair)) => {
                let phi = phi.as_ref().expect("clap requires --phi with --search");
                commands::check_sim_search(&pair[0], &pair[1], phi, *maxlen)
            }
            (Some(s), None) => commands::check_sim(s),
            (None, None) => unreachable!("clap requires a scheme or --search"),
        },
        Command::Transform { network, to, output } => commands::transform(network, *to, output),
        Command::Dynamics {
            network,
            mode,
            seed_pred,
            dot,
            report,
        } => commands::dynamics(network, mode, seed_pred.as_deref(), dot.as_deref(), report.as_deref()),
        Command::SelfTest { seed } => commands::self_test(*seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli.command) {
        Ok(outcome) => {
            if cli.json {
                println!("{}", outcome.to_json(cli.command.label(), start.elapsed()));
            } else {
                for line in &outcome.lines {
                    println!("{line}");
                }
            }
            ExitCode::from(outcome.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
