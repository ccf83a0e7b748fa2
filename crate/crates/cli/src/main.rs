use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod failure;
mod human;

use failure::Failure;

#[derive(Parser)]
#[command(name = "rcbr", version, about = "Exact rationalizability, belief hierarchies and justification games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum SideArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
}

#[derive(Subcommand)]
enum Command {
    /// Run iterated elimination and print the stage trace.
    Solve {
        game: PathBuf,
        #[arg(long, default_value = "rat")]
        concept: rcbr_core::elimination::Concept,
        /// Print the justifying beliefs and elimination certificates.
        #[arg(long)]
        certificates: bool,
    },
    /// Never-best-response, dominance and the auxiliary zero-sum game for
    /// one strategy.
    Dominance {
        game: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        player: u8,
        #[arg(long)]
        strategy: String,
    },
    /// Build witness hierarchies for every survivor and re-check them.
    Certify {
        game: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Write one witness file per survivor here instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check externally supplied witness hierarchies at a level.
    Check {
        witness: PathBuf,
        game: PathBuf,
        #[arg(long)]
        level: usize,
    },
    /// Play the justification game of a strategy. `--as` picks the side the
    /// engine plays with its synthesized strategy.
    Play {
        game: PathBuf,
        #[arg(long)]
        strategy: String,
        #[arg(long = "as", value_enum)]
        side: SideArg,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        player: u8,
        /// Take the other side yourself, reading moves from standard input.
        #[arg(long)]
        interactive: bool,
        /// Replace the engine's default opponent with a random legal one.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = rcbr_core::justification::DEFAULT_PLY_BUDGET)]
        budget: usize,
        /// Also save the transcript here.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Compare the ranked-game engine with the closed form.
    RankedDemo {
        ranked: PathBuf,
        #[arg(long)]
        gamma: Option<rcbr_core::Ordinal>,
    },
    /// Run the verification sweep over a corpus of small games.
    VerifyFt {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        size: u8,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2", allow_hyphen_values = true)]
        values: Vec<i64>,
        /// Sample this many games instead of enumerating them.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Lift a measure on the first coordinate to a relation by least
    /// selection.
    Lift {
        relation: PathBuf,
        /// Weights as `x=1/2,y=1/2`.
        measure: String,
    },
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Solve {
            game,
            concept,
            certificates,
        } => commands::solve(&game, concept, certificates),
        Command::Dominance { game, player, strategy } => commands::dominance(&game, player, &strategy),
        Command::Certify { game, depth, out } => commands::certify(&game, depth, out.as_deref()),
        Command::Check { witness, game, level } => commands::check(&witness, &game, level),
        Command::Play {
            game,
            strategy,
            side,
            player,
            interactive,
            seed,
            budget,
            transcript,
        } => commands::play(commands::PlayArgs {
            path: &game,
            strategy: &strategy,
            side,
            player,
            interactive,
            seed,
            budget,
            transcript: transcript.as_deref(),
        }),
        Command::RankedDemo { ranked, gamma } => commands::ranked_demo(&ranked, gamma.as_ref()),
        Command::VerifyFt {
            size,
            values,
            sample,
            seed,
        } => commands::verify_ft(size as usize, &values, sample, seed),
        Command::Lift { relation, measure } => commands::lift(&relation, &measure),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            print!("{}", failure.output());
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
