//! `mincode`: build, analyze, transform and verify minimum-expected-length prefix codes.
//!
//! Exit status is 0 for an affirmative answer, 1 for a negative finding,
//! 2 for unreadable or invalid input and 3 when a resource guard trips.
//! Every subcommand takes `--json`; rationals are always `"p/q"` strings.

mod formats;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mincode::analysis::{self, MonotonicityWitness, PropertyReport};
use mincode::huffman::{self, ChildOrder, Selector, TiePolicy, DEFAULT_ENUMERATION_CAP};
use mincode::oracle::{self, VerificationReport};
use mincode::rational::to_fraction;
use mincode::swaps::{self, Certificate, SwapKinds, DEFAULT_CLOSURE_CAP};
use mincode::sync::{self, DEFAULT_SUBSET_CAP};
use mincode::{CodeTree, Error, PrefixCode, Source};
use serde::Serialize;
use serde_json::json;

use formats::FormatError;

#[derive(Parser)]
#[command(name = "mincode", version, about = "Minimum-expected-length binary prefix codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a Huffman code, or list every Huffman tree with --all.
    Huffman {
        source: PathBuf,
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value_t = Policy::FirstLeft)]
        policy: Policy,
        /// Print the tree in Graphviz DOT instead of the codeword table.
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// Report completeness, monotonicity and optimality of a code.
    Check {
        source: PathBuf,
        code: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Swap closure of a code, or a swap certificate between two codes.
    Swaps {
        source: PathBuf,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: Option<PathBuf>,
        /// Comma-separated subset of parent, row, prob.
        #[arg(long, default_value = "parent,row,prob")]
        kinds: SwapKinds,
        #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Shortest self-synchronizing string of a complete code.
    Sync {
        source: PathBuf,
        code: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustively cross-check the characterization theorems.
    Verify {
        source: Option<PathBuf>,
        /// Run the built-in corpus instead of a single source.
        #[arg(long, conflicts_with = "source")]
        corpus: bool,
        /// Skip corpus sources with more symbols than this.
        #[arg(long, default_value_t = oracle::MAX_VERIFICATION)]
        max_n: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    FirstLeft,
    FirstRight,
    LastLeft,
    LastRight,
}

impl Policy {
    fn tie_policy(self) -> TiePolicy {
        let (selector, child_order) = match self {
            Policy::FirstLeft => (Selector::FirstIndex, ChildOrder::SmallerLeft),
            Policy::FirstRight => (Selector::FirstIndex, ChildOrder::SmallerRight),
            Policy::LastLeft => (Selector::LastIndex, ChildOrder::SmallerLeft),
            Policy::LastRight => (Selector::LastIndex, ChildOrder::SmallerRight),
        };
        TiePolicy { selector, child_order }
    }
}

enum Failure {
    Input(String),
    Guard(String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Input(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded(_)
            | Error::AlphabetTooLarge { .. }
            | Error::TooManyStates(_)
            | Error::SubsetCapExceeded(_)
            | Error::Truncated(_) => Failure::Guard(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Huffman { source, all, policy, dot, json } => cmd_huffman(source, all, policy, dot, json),
        Command::Check { source, code, json } => cmd_check(source, code, json),
        Command::Swaps { source, from, to, kinds, cap, json } => cmd_swaps(source, from, to, kinds, cap, json),
        Command::Sync { source, code, cap, json } => cmd_sync(source, code, cap, json),
        Command::Verify { source, corpus, max_n, json } => cmd_verify(source, corpus, max_n, json),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("resource limit: {msg}");
            ExitCode::from(3)
        }
    }
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn load_tree(source: &Source, path: &Path) -> Result<CodeTree, Failure> {
    let code = formats::load_code(path)?;
    Ok(CodeTree::from_code(source, &code)?)
}

#[derive(Serialize)]
struct CodewordRow {
    symbol: String,
    codeword: String,
    length: usize,
}

fn code_rows(source: &Source, code: &PrefixCode) -> Vec<CodewordRow> {
    source
        .symbols()
        .map(|s| {
            let word = code.word(s).expect("tree covers the source");
            CodewordRow { symbol: s.to_string(), codeword: word.to_string(), length: word.len() }
        })
        .collect()
}

fn cmd_huffman(path: PathBuf, all: bool, policy: Policy, dot: bool, json: bool) -> Outcome {
    let source = formats::load_source(&path)?;
    if all {
        let trees = huffman::huffman_enumerate(&source, DEFAULT_ENUMERATION_CAP)?;
        let labels: Vec<String> = trees.iter().map(|t| t.canonical_label().to_string()).collect();
        if json {
            print_json(&json!({ "count": labels.len(), "labels": labels }));
        } else {
            println!("{} Huffman trees", labels.len());
            for label in labels {
                println!("{label}");
            }
        }
        return Ok(true);
    }
    let tree = huffman::huffman_build(&source, policy.tie_policy());
    let code = tree.to_code();
    let expected = to_fraction(&tree.expected_length());
    if dot {
        print!("{}", tree.to_dot());
    } else if json {
        print_json(&json!({
            "label": tree.canonical_label().to_string(),
            "code": code_rows(&source, &code),
            "expected_length": expected,
        }));
    } else {
        for row in code_rows(&source, &code) {
            println!("{} {} {}", row.symbol, row.codeword, row.length);
        }
        println!("expected length {expected}");
    }
    Ok(true)
}

#[derive(Serialize)]
struct WitnessJson {
    a: Vec<String>,
    b: Vec<String>,
    i: usize,
    j: usize,
}

impl WitnessJson {
    fn new(source: &Source, w: &MonotonicityWitness) -> Self {
        let names = |v: Vec<&str>| v.into_iter().map(String::from).collect();
        WitnessJson { a: names(w.a_symbols(source)), b: names(w.b_symbols(source)), i: w.i, j: w.j }
    }
}

#[derive(Serialize)]
struct ReportJson {
    complete: bool,
    kraft_total: String,
    monotone: bool,
    strongly_monotone: bool,
    witness: Option<WitnessJson>,
    optimal: bool,
    expected_length: String,
    huffman_length: String,
    huffman_member: bool,
    length_equivalent_to_huffman: bool,
}

impl ReportJson {
    fn new(source: &Source, r: &PropertyReport) -> Self {
        ReportJson {
            complete: r.complete,
            kraft_total: to_fraction(&r.kraft_total),
            monotone: r.monotone,
            strongly_monotone: r.strongly_monotone,
            witness: r.witness.as_ref().map(|w| WitnessJson::new(source, w)),
            optimal: r.optimal,
            expected_length: to_fraction(&r.expected_len),
            huffman_length: to_fraction(&r.huffman_len),
            huffman_member: r.huffman_member,
            length_equivalent_to_huffman: r.length_equivalent_to_huffman,
        }
    }
}

fn cmd_check(source: PathBuf, code: PathBuf, json: bool) -> Outcome {
    let source = formats::load_source(&source)?;
    let code = formats::load_code(&code)?;
    let report = analysis::classify(&source, &code)?;
    let out = ReportJson::new(&source, &report);
    if json {
        print_json(&out);
    } else {
        println!("complete: {}", out.complete);
        println!("kraft_total: {}", out.kraft_total);
        println!("monotone: {}", out.monotone);
        println!("strongly_monotone: {}", out.strongly_monotone);
        if let Some(w) = &out.witness {
            println!("witness: {{{}}} vs {{{}}} (i={}, j={})", w.a.join(","), w.b.join(","), w.i, w.j);
        }
        println!("optimal: {}", out.optimal);
        println!("expected_length: {}", out.expected_length);
        println!("huffman_length: {}", out.huffman_length);
        println!("huffman_member: {}", out.huffman_member);
        println!("length_equivalent_to_huffman: {}", out.length_equivalent_to_huffman);
    }
    Ok(report.optimal)
}

fn cmd_swaps(source: PathBuf, from: PathBuf, to: Option<PathBuf>, kinds: SwapKinds, cap: usize, json: bool) -> Outcome {
    let source = formats::load_source(&source)?;
    let start = load_tree(&source, &from)?;
    if let Some(to) = to {
        let target = load_tree(&source, &to)?;
        let certificate = match swaps::swap_equivalent(&start, &target, kinds, cap)? {
            Some(moves) => Some(Certificate::from_moves(&start, &moves)?),
            None => None,
        };
        if json {
            let lines: Option<Vec<String>> =
                certificate.as_ref().map(|c| c.steps.iter().map(|s| s.to_string()).collect());
            print_json(&json!({ "equivalent": certificate.is_some(), "certificate": lines }));
        } else {
            match &certificate {
                Some(c) => print!("{c}"),
                None => println!("NOT EQUIVALENT"),
            }
        }
        return Ok(certificate.is_some());
    }
    let closure = swaps::swap_closure(&start, kinds, cap);
    if closure.truncated {
        return Err(Failure::Guard(format!("closure exceeded {cap} trees")));
    }
    let labels: Vec<String> = closure.sorted_labels().iter().map(|l| l.to_string()).collect();
    if json {
        print_json(&json!({ "size": labels.len(), "labels": labels }));
    } else {
        println!("closure size {}", labels.len());
        for label in labels {
            println!("{label}");
        }
    }
    Ok(true)
}

fn cmd_sync(source: PathBuf, code: PathBuf, cap: usize, json: bool) -> Outcome {
    let source = formats::load_source(&source)?;
    let tree = load_tree(&source, &code)?;
    let result = sync::shortest_sync_string(&tree, cap)?;
    let string = result.string.as_ref().map(|s| s.to_string());
    if json {
        print_json(&json!({
            "exists": result.exists,
            "string": string,
            "explored_subsets": result.explored_subsets,
        }));
    } else {
        println!("{}", string.as_deref().unwrap_or("NONE"));
    }
    Ok(result.exists)
}

#[derive(Serialize)]
struct CheckJson {
    name: &'static str,
    statement: &'static str,
    passed: bool,
    cases: usize,
    counterexample: Option<String>,
}

fn report_json(name: &str, report: &VerificationReport) -> serde_json::Value {
    let checks: Vec<CheckJson> = report
        .checks
        .iter()
        .map(|c| CheckJson {
            name: c.name,
            statement: c.statement,
            passed: c.passed,
            cases: c.cases,
            counterexample: c.counterexample.clone(),
        })
        .collect();
    let probs: Vec<(String, String)> =
        report.source.symbols().zip(report.source.probs()).map(|(s, p)| (s.to_string(), to_fraction(p))).collect();
    json!({
        "name": name,
        "source": probs,
        "trees": report.trees,
        "all_passed": report.all_passed(),
        "checks": checks,
    })
}

fn cmd_verify(source: Option<PathBuf>, corpus: bool, max_n: usize, json: bool) -> Outcome {
    let entries: Vec<(String, Source)> = match (source, corpus) {
        (Some(path), _) => vec![(path.display().to_string(), formats::load_source(&path)?)],
        (None, true) => oracle::corpus()
            .into_iter()
            .filter(|e| e.source.len() <= max_n)
            .map(|e| (e.name, e.source))
            .collect(),
        (None, false) => return Err(Failure::Input("give a source file or --corpus".into())),
    };
    let mut all = true;
    let mut reports = Vec::new();
    for (name, source) in &entries {
        let report = oracle::verify_theorems(source)?;
        all &= report.all_passed();
        if json {
            reports.push(report_json(name, &report));
        } else {
            println!("[{name}] {report}");
        }
    }
    if json {
        print_json(&json!({ "all_passed": all, "sources": reports }));
    } else {
        println!("{}", if all { "all checks passed" } else { "SOME CHECKS FAILED" });
    }
    Ok(all)
}
