use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spectral_chart::io::Document;
use spectral_chart::triplecover::DEFAULT_BUDGET;
use spectral_chart_cli::commands::{self, Outcome};
use spectral_chart_cli::sweep::{Mode, RunConfig};

#[derive(Parser)]
#[command(name = "spectral-chart", version, about = "Exact certification of matrix-polynomial charts")]
struct Cli {
    /// Emit the report as a versioned JSON document.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Run every gate; exit 0 for a definite form, 3 for an indefinite one, 4 on rejection.
    Certify { path: String },
    /// Spectral curve, genus, branch degree and reality.
    Curve { path: String },
    /// Regularity at every point of the projective line.
    Regular { path: String },
    /// Strong regularity by the span of powers.
    Strongreg { path: String },
    /// The shifted Petri matrix and its rank.
    Petri { path: String },
    /// The invariant hermitian form.
    Gram { path: String },
    /// Jordan structure of the fiber over a point.
    Jordan {
        path: String,
        /// A scalar such as `1+2*i`, `inf`, or `root:c0,c1,...` for the roots of a polynomial.
        #[arg(long, default_value = "0")]
        zeta: String,
    },
    /// Degree-3 algebras and modules.
    Triple {
        #[command(subcommand)]
        verb: TripleVerb,
    },
    /// Randomized consistency suites.
    Sweep {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long = "k", value_delimiter = ',', default_values_t = vec![2, 3])]
        ks: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
    },
    /// Print a built-in example document.
    Fixture { name: String },
}

#[derive(Subcommand)]
enum TripleVerb {
    /// Associativity, reality datum and, when present, module relations.
    Validate { path: String },
    /// Genus, h⁰(O(2)) and embeddability of an algebra.
    Invariants { path: String },
    /// The control algebra and module of a 3×3 quadratic datum.
    Derive { path: String },
    /// Rank of the generalized Petri map of an instance.
    Petri { path: String },
    /// Hermitian form of an instance.
    Gram { path: String },
    /// Look for a σ-real module over an algebra.
    Search {
        path: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn configure_threads() {
    if let Some(n) = std::env::var("SPECTRAL_CHART_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn run(verb: Verb) -> Outcome {
    match verb {
        Verb::Certify { path } => commands::certify(&path),
        Verb::Curve { path } => commands::curve(&path),
        Verb::Regular { path } => commands::regular(&path),
        Verb::Strongreg { path } => commands::strongreg(&path),
        Verb::Petri { path } => commands::petri(&path),
        Verb::Gram { path } => commands::gram(&path),
        Verb::Jordan { path, zeta } => commands::jordan(&path, &zeta),
        Verb::Triple { verb } => match verb {
            TripleVerb::Validate { path } => commands::triple_validate(&path),
            TripleVerb::Invariants { path } => commands::triple_invariants(&path),
            TripleVerb::Derive { path } => commands::triple_derive(&path),
            TripleVerb::Petri { path } => commands::triple_petri(&path),
            TripleVerb::Gram { path } => commands::triple_gram(&path),
            TripleVerb::Search { path, budget, seed } => commands::triple_search(&path, budget, seed),
        },
        Verb::Sweep { seed, samples, ks, mode } => commands::sweep(&RunConfig { mode, seed, samples, ks }),
        Verb::Fixture { name } => commands::fixture(&name),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::EXIT_INPUT as u8 } else { 0 });
        }
    };
    configure_threads();
    let outcome = run(cli.verb);
    if cli.json {
        print!("{}", serde_json::to_string_pretty(&Document::new(&outcome.report)).expect("json") + "\n");
    } else {
        println!("{}", outcome.text);
    }
    ExitCode::from(outcome.code as u8)
}
