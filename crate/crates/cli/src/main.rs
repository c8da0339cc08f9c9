//! `forkalg`: frames, closure algebras, projectivity and unification from the
//! command line.
//!
//! Exit status is 0 for success or a true verdict, 1 for a false verdict and
//! 2 for errors.

mod commands;
mod dot;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "forkalg", version, about = "Finite closure algebras and the fork variety")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Take the reflexive-transitive closure of input relations.
    #[arg(long, global = true)]
    close: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Questions about a frame.
    #[command(subcommand)]
    Frame(FrameCmd),
    /// Questions about the complex algebra of a frame.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Unifiers of the complex algebra of a frame.
    #[command(subcommand)]
    Unify(UnifyCmd),
    /// Enumerate small frames.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Run the acceptance suite and print a pass/fail table.
    VerifyPaper,
}

#[derive(Args, Debug)]
pub struct InputArg {
    /// Frame file, or a builtin: @fork, @w, @cofork, @point.
    pub input: String,
}

#[derive(Subcommand, Debug)]
enum FrameCmd {
    /// Order-theoretic statistics.
    Stats(InputArg),
    /// μ-sets of the frame read as a quasiorder.
    Mu(InputArg),
}

#[derive(Subcommand, Debug)]
enum AlgebraCmd {
    /// Check axioms or equations exhaustively.
    Axioms {
        #[command(flatten)]
        input: InputArg,
        /// Axiom to check (grz, bd2, bw2, geach); all four by default.
        #[arg(long = "axiom")]
        axioms: Vec<String>,
        /// Extra equation to check, e.g. "f(x) <= x + f(-x)".
        #[arg(long = "term")]
        terms: Vec<String>,
        /// Largest number of assignments to evaluate.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Is the algebra projective in the fork variety?
    Projective(InputArg),
    /// Bounded retraction onto a generated subframe.
    Retract {
        #[command(flatten)]
        input: InputArg,
        /// Points of the subframe, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        sub: Vec<String>,
        /// Print the case used for every point.
        #[arg(long)]
        explain: bool,
    },
    /// Find a copy of B_W inside the algebra.
    BwWitness {
        #[command(flatten)]
        input: InputArg,
        /// One witness per qualifying pair of atoms.
        #[arg(long)]
        all: bool,
    },
}

#[derive(Subcommand, Debug)]
enum UnifyCmd {
    /// Admissible congruences, μ-set, type and certificates.
    Report {
        #[command(flatten)]
        input: InputArg,
        /// Also run the brute-force oracle with targets up to this many atoms
        /// (0 means the atom count of the algebra).
        #[arg(long)]
        oracle: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogCmd {
    /// Write every frame satisfying the constraints.
    Dump {
        /// Comma separated: quasiorder, poset, fork, connected, height=H, width=M.
        #[arg(long, value_delimiter = ',', default_value = "poset")]
        constraints: Vec<String>,
        /// Largest point count.
        #[arg(long)]
        max: usize,
        /// Smallest point count.
        #[arg(long, default_value_t = 1)]
        min: usize,
        /// All labelled frames instead of one per isomorphism class.
        #[arg(long)]
        labelled: bool,
        /// Raise the enumeration cap.
        #[arg(long)]
        cap: Option<usize>,
        /// Write one file per frame into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = commands::Ctx {
        format: cli.format,
        close: cli.close,
    };
    let result = match cli.command {
        Command::Frame(FrameCmd::Stats(i)) => commands::frame_stats(&ctx, &i.input),
        Command::Frame(FrameCmd::Mu(i)) => commands::frame_mu(&ctx, &i.input),
        Command::Algebra(AlgebraCmd::Axioms {
            input,
            axioms,
            terms,
            budget,
        }) => commands::algebra_axioms(&ctx, &input.input, &axioms, &terms, budget),
        Command::Algebra(AlgebraCmd::Projective(i)) => commands::algebra_projective(&ctx, &i.input),
        Command::Algebra(AlgebraCmd::Retract { input, sub, explain }) => {
            commands::algebra_retract(&ctx, &input.input, &sub, explain)
        }
        Command::Algebra(AlgebraCmd::BwWitness { input, all }) => {
            commands::algebra_bw_witness(&ctx, &input.input, all)
        }
        Command::Unify(UnifyCmd::Report { input, oracle }) => {
            commands::unify_report(&ctx, &input.input, oracle)
        }
        Command::Catalog(CatalogCmd::Dump {
            constraints,
            max,
            min,
            labelled,
            cap,
            out,
        }) => commands::catalog_dump(&ctx, &constraints, min, max, labelled, cap, out.as_deref()),
        Command::VerifyPaper => commands::verify_paper(&ctx),
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.rendered);
            if !outcome.rendered.ends_with('\n') {
                println!();
            }
            ExitCode::from(if outcome.verdict { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
