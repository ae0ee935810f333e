use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use eqtree::corpus::{random_corpus, Family, CORPUS_MAX_NODES, CORPUS_SEED};
use eqtree::derive::build_equation_automaton_naive;
use eqtree::semantics::enumerate_language;
use eqtree::syntax::{parse_alphabet, parse_expression, RankedAlphabet, RegExpr, Tree};
use eqtree::treeauto::{
    build_equation_automaton_fast, isomorphic, language_difference_up_to, TreeAutomaton,
};

mod bench;
mod trace;

use bench::{run_bench, Algo};

/// Equation tree automata from regular tree expressions.
#[derive(Parser)]
#[command(name = "eqtree", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildAlgo {
    Naive,
    Fast,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchAlgo {
    Fast,
    Naive,
    Both,
    /// Stages up to ∼e only; `states` then counts ∼e classes.
    Front,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Build an automaton and write it as JSON.
    Build {
        /// Alphabet file, or inline declarations such as "a/0 f/2".
        #[arg(long)]
        alphabet: String,
        /// Expression file, or the expression itself.
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value = "fast")]
        algo: BuildAlgo,
        /// JSON output; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Print γ-links, continuations, Follow, ψ and the ∼e classes.
        #[arg(long)]
        trace: bool,
    },
    /// Run a JSON automaton on a tree. Exit 3 when rejected.
    Member {
        #[arg(long)]
        aut: PathBuf,
        #[arg(long)]
        tree: String,
    },
    /// Check that both constructions agree. Exit 2 on disagreement.
    Compare {
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        expr: Option<String>,
        #[arg(long, default_value_t = 8)]
        max_nodes: usize,
        /// Also check this many seeded random expressions.
        #[arg(long)]
        corpus: Option<usize>,
        #[arg(long, default_value_t = CORPUS_SEED)]
        seed: u64,
    },
    /// Time the pipelines on a generated family.
    Bench {
        #[arg(long)]
        family: String,
        /// Comma-separated node counts.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_enum, default_value = "fast")]
        algo: BenchAlgo,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, default_value_t = 1)]
        repeat: usize,
    },
    /// List the trees of the language with at most `max-nodes` nodes.
    Enum {
        #[arg(long)]
        alphabet: String,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        max_nodes: usize,
    },
}

enum Failure {
    Parse(String),
    Invariant(String),
    Rejected,
}

impl From<eqtree::Error> for Failure {
    fn from(e: eqtree::Error) -> Self {
        use eqtree::Error::*;
        match e {
            Cyclic
            | Nondeterministic(_)
            | NotLetterLabelled
            | NotCoaccessible(_)
            | EpsilonCycle(_)
            | SizeLimit { .. } => Failure::Invariant(e.to_string()),
            _ => Failure::Parse(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Reads `arg` as a file when one exists at that path, else takes it verbatim.
fn file_or_text(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn load(alphabet: &str, expr: &str) -> Result<(RankedAlphabet, RegExpr), Failure> {
    let sigma = parse_alphabet(&file_or_text(alphabet)?)?;
    let e = parse_expression(file_or_text(expr)?.trim(), &sigma)?;
    Ok((sigma, e))
}

fn write(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn build(
    alphabet: &str,
    expr: &str,
    algo: BuildAlgo,
    out: Option<&Path>,
    dot: Option<&Path>,
    show: bool,
) -> Outcome {
    let (sigma, e) = load(alphabet, expr)?;
    if show {
        print!("{}", trace::trace(&e, &sigma)?);
    }
    let aut = match algo {
        BuildAlgo::Naive => build_equation_automaton_naive(&e, &sigma),
        BuildAlgo::Fast => build_equation_automaton_fast(&e, &sigma)?,
    };
    if show {
        println!("== automaton");
        print!("{}", aut.display_rules());
    }
    match out {
        Some(p) => write(p, &aut.to_json())?,
        None if !show => print!("{}", aut.to_json()),
        None => {}
    }
    if let Some(p) = dot {
        write(p, &aut.to_dot())?;
    }
    Ok(())
}

fn member(aut: &Path, tree: &str) -> Outcome {
    let text = std::fs::read_to_string(aut)
        .map_err(|e| Failure::Parse(format!("{}: {e}", aut.display())))?;
    let aut = TreeAutomaton::from_json(&text)?;
    let t = Tree::parse(tree, aut.alphabet())?;
    let reached: Vec<&str> = aut.run(&t).into_iter().map(|q| aut.name(q)).collect();
    println!("states: {{{}}}", reached.join(", "));
    if aut.accepts(&t) {
        println!("accepted");
        Ok(())
    } else {
        println!("rejected");
        Err(Failure::Rejected)
    }
}

/// Prints one verdict line; true when both checks pass.
fn compare_one(
    label: &str,
    sigma: &RankedAlphabet,
    e: &RegExpr,
    max_nodes: usize,
) -> Result<bool, Failure> {
    let naive = build_equation_automaton_naive(e, sigma);
    let fast = build_equation_automaton_fast(e, sigma)?;
    let iso = isomorphic(&fast, &naive)?;
    let witness = language_difference_up_to(&fast, &naive, max_nodes);
    println!(
        "{label}: states fast={} naive={} isomorphic={} languages(<={max_nodes})={}",
        fast.state_count(),
        naive.state_count(),
        iso,
        match &witness {
            None => "equal".to_string(),
            Some(t) => format!("differ on {}", t.render(sigma)),
        }
    );
    Ok(iso && witness.is_none())
}

fn compare(
    alphabet: Option<&str>,
    expr: Option<&str>,
    max_nodes: usize,
    corpus: Option<usize>,
    seed: u64,
) -> Outcome {
    let mut ok = true;
    match (alphabet, expr) {
        (Some(a), Some(x)) => {
            let (sigma, e) = load(a, x)?;
            ok &= compare_one(&e.pretty(&sigma), &sigma, &e, max_nodes)?;
        }
        (None, None) if corpus.is_some() => {}
        _ => {
            return Err(Failure::Parse(
                "compare needs --alphabet and --expr, or --corpus".into(),
            ))
        }
    }
    if let Some(count) = corpus {
        let sigma = eqtree::corpus::corpus_alphabet();
        let mut failed = 0;
        for (i, e) in random_corpus(&sigma, seed, count, CORPUS_MAX_NODES)
            .iter()
            .enumerate()
        {
            if !compare_one(&format!("#{i}"), &sigma, e, max_nodes)? {
                failed += 1;
            }
        }
        println!("corpus: {} passed, {failed} failed", count - failed);
        ok &= failed == 0;
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Invariant("the constructions disagree".into()))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Build {
            alphabet,
            expr,
            algo,
            out,
            dot,
            trace,
        } => build(
            &alphabet,
            &expr,
            algo,
            out.as_deref(),
            dot.as_deref(),
            trace,
        ),
        Command::Member { aut, tree } => member(&aut, &tree),
        Command::Compare {
            alphabet,
            expr,
            max_nodes,
            corpus,
            seed,
        } => compare(
            alphabet.as_deref(),
            expr.as_deref(),
            max_nodes,
            corpus,
            seed,
        ),
        Command::Bench {
            family,
            sizes,
            algo,
            format,
            repeat,
        } => {
            let family = Family::parse(&family)?;
            let algo = match algo {
                BenchAlgo::Fast => Algo::Fast,
                BenchAlgo::Naive => Algo::Naive,
                BenchAlgo::Both => Algo::Both,
                BenchAlgo::Front => Algo::Front,
            };
            let report = run_bench(family, &sizes, algo, repeat)?;
            match format {
                Format::Csv => print!("{}", report.to_csv()),
                Format::Text => print!("{}", report.to_text()),
            }
            Ok(())
        }
        Command::Enum {
            alphabet,
            expr,
            max_nodes,
        } => {
            let (sigma, e) = load(&alphabet, &expr)?;
            let mut lines: Vec<String> = enumerate_language(&e, max_nodes)
                .iter()
                .map(|t| t.render(&sigma))
                .collect();
            lines.sort();
            for l in lines {
                println!("{l}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Deep expressions recurse deeply when rendered and dropped.
    let worker = std::thread::Builder::new()
        .stack_size(1 << 30)
        .spawn(move || run(cli))
        .expect("spawn worker thread");
    match worker.join().expect("worker panicked") {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Parse(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Invariant(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Rejected) => ExitCode::from(3),
    }
}
