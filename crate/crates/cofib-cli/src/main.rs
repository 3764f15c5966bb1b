//! `cofib`: checks cofibration categories, Reedy diagrams, subdivision
//! filtrations, localizations and quasicategories of frames.

mod cmd;
mod io;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::io::Inputs;
use crate::report::RunReport;

#[derive(Parser, Debug)]
#[command(name = "cofib", version, about = "Finite cofibration categories and quasicategories of frames")]
pub struct Cli {
    /// Filtration level k.
    #[arg(long, global = true, default_value_t = 1)]
    pub level: usize,
    /// Dimension cap for simplicial sets.
    #[arg(long, global = true, default_value_t = 2)]
    pub cap: usize,
    /// Enumeration budget; for `nf fill` and `witness verify`, the filler level k'.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Live-coset bound of the localization oracle.
    #[arg(long, global = true)]
    pub oracle_bound: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Directory searched for inputs that are not found as given.
    #[arg(long, global = true, env = "COFIB_CORPUS")]
    pub seed_corpus: Option<PathBuf>,
    #[command(subcommand)]
    pub group: Group,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Subcommand, Debug)]
pub enum Group {
    /// Finite categories.
    #[command(subcommand)]
    Cat(CatCmd),
    /// Finite simplicial sets.
    #[command(subcommand)]
    Sset(SsetCmd),
    /// Quasicategories.
    #[command(subcommand)]
    Qc(QcCmd),
    /// Subdivision filtrations.
    #[command(subcommand)]
    Filt(FiltCmd),
    /// Barycentric subdivision of a marked poset.
    #[command(subcommand)]
    Dsd(DsdCmd),
    /// Retraction witnesses.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Cofibration categories.
    #[command(subcommand)]
    Cofcat(CofcatCmd),
    /// Reedy diagrams.
    #[command(subcommand)]
    Reedy(ReedyCmd),
    /// Homotopy categories.
    #[command(subcommand)]
    Ho(HoCmd),
    /// Quasicategories of frames.
    #[command(subcommand)]
    Nf(NfCmd),
    /// Bundled instances.
    #[command(subcommand)]
    Corpus(CorpusCmd),
    /// Acceptance suites.
    Acceptance {
        #[arg(value_enum)]
        suite: Suite,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Core,
    Horns,
}

#[derive(Args, Debug)]
pub struct FileArg {
    pub file: String,
}

#[derive(Subcommand, Debug)]
pub enum CatCmd {
    /// Validate the category laws.
    Check(FileArg),
    /// Check or synthesize a degree function.
    Degree(FileArg),
}

#[derive(Subcommand, Debug)]
pub enum SsetCmd {
    /// Validate the simplicial identities.
    Check(FileArg),
    /// The join of two simplicial sets.
    Join { a: String, b: String },
    /// Replay the generalized-horn decompositions up to dimension m.
    Horns {
        #[arg(long, default_value_t = 4)]
        m: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum QcCmd {
    /// Inner horn lifting up to the cap.
    Check(FileArg),
    /// The homotopy category.
    Ho(FileArg),
    /// Whether a vertex is initial up to the cap.
    Universal {
        file: String,
        #[arg(long)]
        vertex: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum FiltCmd {
    /// filt{k,K} as a homotopical category.
    Build(FileArg),
    /// Filtration degree of every simplex at the level.
    Degree(FileArg),
    /// B_{k,m}.
    Bset {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
    },
    /// A_{k,m}.
    Aset {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum DsdCmd {
    /// Sd of the nerve of a marked poset.
    Build(FileArg),
}

#[derive(Subcommand, Debug)]
pub enum WitnessCmd {
    /// Verify a retraction witness at --level with filler level --budget (default 3).
    Verify {
        /// One of Dm-m, E1, cone-filt, D-Sd.
        kind: String,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Marked poset for D-Sd (default: the chain 0 < 1, identities only).
        #[arg(long)]
        complex: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CofcatCmd {
    /// Axioms (C0)-(C5).
    Check(FileArg),
    /// Pullback of a fibration P: E -> D along F: C -> D.
    Pullback { c: String, e: String, d: String, f: String, p: String },
    /// The path object P(C) and its structure maps.
    Pathobj(FileArg),
    /// Whether P: E -> D is a (acyclic) fibration; D defaults to the terminal category.
    Fibration { e: String, d: Option<String>, p: Option<String> },
    /// The Gluing Lemma on every cube.
    Glue(FileArg),
}

#[derive(Subcommand, Debug)]
pub enum ReedyCmd {
    /// Homotopical and Reedy cofibrant.
    Check(FileArg),
    /// Colimit by latching attachment, checked against the direct search.
    Colim(FileArg),
    /// Φ^(0), ..., Φ^(level) with connecting maps.
    Phi(FileArg),
    /// Factor X -> const(terminal) as a Reedy cofibration and a levelwise weq.
    Factor(FileArg),
}

#[derive(Subcommand, Debug)]
pub enum HoCmd {
    /// Homotopy category by left fractions.
    Compute(FileArg),
    /// Localization by coset enumeration.
    Oracle(FileArg),
    /// Compare the two localizations.
    Compare(FileArg),
    /// Whether F: C -> D is a weak equivalence.
    Weqfunctor { c: String, d: String, f: String },
}

#[derive(Subcommand, Debug)]
pub enum NfCmd {
    /// Frame counts through the cap.
    Enum(FileArg),
    /// The frame chi^* X for a simplicial operator chi given by its values.
    Act {
        file: String,
        #[arg(long)]
        op: String,
    },
    /// Fill a horn problem at level --budget (default --level).
    Fill(FileArg),
    /// Initiality of a vertex frame, by formula and by Φ.
    Init(FileArg),
    /// Pushout squares of two 2-frames, by formula and by Φ.
    Push { upper: String, lower: String },
    /// Universality of a cone frame, by Φ and definitionally through the cap.
    Universal(FileArg),
    /// Θ: Ho Nf -> Ho C.
    Theta(FileArg),
    /// Φ comparison of a diagram on L restricted to the subcomplex K.
    DgrmWeq {
        file: String,
        #[arg(long)]
        sub: String,
    },
    /// Every inner horn problem of Λ^m_i and whether it fills at the level.
    Horns {
        file: String,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        i: usize,
        /// Write the first unfilled problem here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CorpusCmd {
    List,
    /// Write a bundled instance as a category file.
    Export {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Shared state of one invocation.
pub struct Ctx {
    pub inputs: Inputs,
    pub report: RunReport,
    pub level: usize,
    pub cap: usize,
    pub budget: Option<usize>,
    pub oracle_bound: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let mut ctx = Ctx {
        inputs: Inputs::new(cli.seed_corpus.clone()),
        report: RunReport::new(argv),
        level: cli.level,
        cap: cli.cap,
        budget: cli.budget,
        oracle_bound: cli.oracle_bound,
    };
    ctx.report.param("level", cli.level);
    ctx.report.param("cap", cli.cap);
    let outcome = cmd::run(&cli.group, &mut ctx);
    ctx.report.inputs = std::mem::take(&mut ctx.inputs.hashes);
    match outcome {
        Ok(()) => {
            let text = match cli.format {
                Format::Machine => ctx.report.machine() + "\n",
                Format::Human => ctx.report.human(start.elapsed()),
            };
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if ctx.report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}
