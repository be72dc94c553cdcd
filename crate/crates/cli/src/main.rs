use std::io::Read as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kanforge::enumerate::{enumerate_k_terminal, DEFAULT_MAX_TERMS};
use kanforge::free::validate_structural_term;
use kanforge::mutation::{with_mutation, Mutation};
use kanforge::{json, run_suite, Bit, Error, GenConfig, Name, Nominal as _, Perm, Suite, Value};

mod demo;

#[derive(Parser)]
#[command(
    name = "kanforge",
    version,
    about = "Law checks for free Kan fibrations on 01-substitution sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded law suite and report every law checked.
    Laws {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, env = "KANFORGE_SEED", default_value_t = 7)]
        seed: u64,
        /// Samples per law and per test morphism.
        #[arg(long, default_value_t = 200)]
        iters: usize,
        /// Largest rank of sampled terms.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(0..=3))]
        rank: u64,
        /// Size of the name alphabet used by the samplers.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..=8))]
        names: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, hide = true, value_parser = parse_mutation)]
        mutate: Option<Mutation>,
    },
    /// Count the terms of K 1_1 of each rank over the first few names.
    Enumerate {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
        max_terms: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Operations on a single term given as JSON (`-` reads stdin, `@path` reads a file).
    Term {
        #[command(subcommand)]
        action: TermAction,
    },
    /// Build paths in a small fibration and check them, printing a transcript.
    PathDemo {
        #[arg(long, env = "KANFORGE_SEED", default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum TermAction {
    Rank {
        term: String,
    },
    Subst {
        term: String,
        #[arg(long)]
        name: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        bit: u8,
    },
    /// Apply the product of the given transpositions, each written `a0,a1`.
    Act {
        term: String,
        #[arg(long = "swap", required = true)]
        swaps: Vec<String>,
    },
    Eq {
        left: String,
        right: String,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mutation(s: &str) -> Result<Mutation, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure of the input rather than of a law.
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

fn read_term(arg: &str) -> Result<Value, Usage> {
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Usage(format!("reading stdin: {e}")))?;
        s
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| Usage(format!("reading {path}: {e}")))?
    } else {
        arg.to_string()
    };
    let t = json::from_str(&text)?;
    validate_structural_term(&t)?;
    Ok(t)
}

fn parse_swap(s: &str) -> Result<Perm, Usage> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Usage(format!("expected a swap written a0,a1, got {s:?}")))?;
    Ok(Perm::swap(
        a.trim().parse::<Name>()?,
        b.trim().parse::<Name>()?,
    ))
}

fn run(cli: Cli) -> Result<bool, Usage> {
    match cli.command {
        Command::Laws {
            suite,
            seed,
            iters,
            rank,
            names,
            format,
            mutate,
        } => {
            let cfg = GenConfig {
                names: names as usize,
                rank: rank as usize,
                ..GenConfig::default()
            };
            let go = || run_suite(suite, seed, iters, &cfg);
            // panics inside a suite are recorded in the report
            let default_hook = std::panic::take_hook();
            std::panic::set_hook(Box::new(|_| {}));
            let report = match mutate {
                Some(m) => with_mutation(m, go),
                None => go(),
            };
            std::panic::set_hook(default_hook);
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report.to_json()).expect("serialisable")
                ),
            }
            Ok(report.is_clean())
        }
        Command::Enumerate {
            rank,
            alphabet,
            max_terms,
            format,
        } => {
            let e = enumerate_k_terminal(rank, alphabet, max_terms)?;
            match format {
                Format::Text => {
                    for (r, n) in e.counts().iter().enumerate() {
                        println!("rank {r}: {n}");
                    }
                    println!("total: {}", e.counts().iter().sum::<usize>());
                }
                Format::Json => println!("{}", e.to_json()),
            }
            Ok(true)
        }
        Command::Term { action } => {
            let out = match action {
                TermAction::Rank { term } => {
                    serde_json::json!({ "rank": read_term(&term)?.rank() }).to_string()
                }
                TermAction::Subst { term, name, bit } => {
                    let t = read_term(&term)?;
                    let bit = Bit::from_u8(bit).expect("range checked by clap");
                    json::to_string(&t.subst(name.parse::<Name>()?, bit))
                }
                TermAction::Act { term, swaps } => {
                    let t = read_term(&term)?;
                    let mut p = Perm::identity();
                    for s in &swaps {
                        p = p.compose(&parse_swap(s)?);
                    }
                    json::to_string(&t.act(&p))
                }
                TermAction::Eq { left, right } => {
                    let equal = read_term(&left)? == read_term(&right)?;
                    serde_json::json!({ "equal": equal }).to_string()
                }
            };
            println!("{out}");
            Ok(true)
        }
        Command::PathDemo { seed } => {
            let (transcript, ok) = demo::path_demo(seed);
            print!("{transcript}");
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
