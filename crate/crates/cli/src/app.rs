//! Argument parsing and command dispatch.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hsbar::f2core::{rank, SubsetIndex};
use hsbar::forms::classify_orbits;
use hsbar::hmbar::hm_ranks;
use hsbar::ktheory::kq1_torus;
use hsbar::pages::build_e1;
use hsbar::solver::{solve, BranchNode, SolveOptions, SolveReport, Verdict};
use serde_json::json;

use crate::corpus::{borromean_m, example, EXAMPLE_NAMES};
use crate::document::ResultDocument;
use crate::problem::{read_problem, Problem, ProblemFile};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Machine,
}

#[derive(Debug, Parser)]
#[command(
    name = "hsbar",
    version,
    about = "Spectral-sequence calculator for bar-flavor Pin(2)-monopole Floer groups"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,
    /// Maximum number of differential choices to explore.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Keep the constant term of the Rokhlin map.
    #[arg(long, global = true)]
    no_normalize: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Problem file (JSON).
    file: Option<PathBuf>,
    /// Use a bundled example instead of a file.
    #[arg(long, conflicts_with = "file")]
    example: Option<String>,
    /// Cup value for `borromean-m` (even).
    #[arg(long, requires = "example")]
    m: Option<i64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate an input.
    Validate(Input),
    /// Print the E¹ page.
    E1(Input),
    /// Print E¹, E² and the tree of higher differentials.
    Pages(Input),
    /// Run the full search and print the final module.
    Solve(Input),
    /// HM-bar ranks of the cup-contraction complex and the summand quota.
    Hm(Input),
    /// KQ¹ of the n-torus.
    Kq {
        #[arg(long)]
        n: usize,
    },
    /// Orbits of Rokhlin maps with a given cubic part.
    Classify {
        #[arg(long)]
        n: usize,
        /// Cubic monomial as digits, e.g. 123; repeatable.
        #[arg(long)]
        cubic: Vec<String>,
        /// Highest degree of the remaining ANF terms.
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
    },
    /// Print a bundled example as a problem file.
    Example {
        name: String,
        #[arg(long)]
        m: Option<i64>,
    },
    /// List the bundled examples.
    ListExamples,
}

/// Runs the command line `args` (including the program name) and returns
/// the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load_example(name: &str, m: Option<i64>) -> Result<ProblemFile, CliError> {
    match (name, m) {
        ("borromean-m", Some(m)) => {
            borromean_m(m).ok_or_else(|| CliError::Usage(format!("--m must be even, got {m}")))
        }
        (_, Some(_)) => Err(CliError::Usage("--m only applies to borromean-m".into())),
        _ => example(name)
            .ok_or_else(|| CliError::Usage(format!("unknown example {name}; try list-examples"))),
    }
}

fn load(input: &Input) -> Result<Problem, CliError> {
    match (&input.file, &input.example) {
        (Some(path), None) => read_problem(path),
        (None, Some(name)) => {
            let file = load_example(name, input.m)?;
            let pair = file.validate()?;
            Ok(Problem { file, pair })
        }
        _ => Err(CliError::Usage(
            "give a problem file or --example NAME".into(),
        )),
    }
}

fn options(cli: &Cli) -> SolveOptions {
    let mut o = SolveOptions {
        normalize: !cli.no_normalize,
        ..SolveOptions::default()
    };
    if let Some(b) = cli.budget {
        o.budget = b;
    }
    o
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io {
        path: "<stdout>".into(),
        message: e.to_string(),
    })
}

fn json_line(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let machine = cli.format == Format::Machine;
    match &cli.command {
        Command::Validate(input) => {
            let p = load(input)?;
            let text = if machine {
                json_line(&ProblemFile::from_pair(p.file.name.clone(), &p.pair))
            } else {
                let mu = p.pair.mu();
                format!(
                    "ok: {} (b1 = {}, weight {}, degree {})\nrokhlin: {}\n",
                    p.name(),
                    p.pair.n(),
                    mu.weight(),
                    mu.degree(),
                    mu.anf_string()
                )
            };
            emit(out, &text)
        }
        Command::E1(input) => {
            let p = load(input)?;
            let mu = if cli.no_normalize {
                p.pair.mu().clone()
            } else {
                p.pair.mu().normalized().0
            };
            let e1 = build_e1(&mu);
            let text = if machine {
                json_line(&json!({
                    "grid": e1.grid(),
                    "d1_rank": rank(e1.differential()),
                    "summands": e1.chains().len(),
                }))
            } else {
                format!(
                    "E1\n{}d1 rank: {}\n",
                    e1.grid().render(),
                    rank(e1.differential())
                )
            };
            emit(out, &text)
        }
        Command::Pages(input) => {
            let p = load(input)?;
            let report = solve(&p.pair, &options(cli))?;
            let text = if machine {
                let doc =
                    ResultDocument::new(p.file.name.clone(), &p.pair, &report, !cli.no_normalize);
                json_line(&doc.pages)
            } else {
                render_pages(&report)
            };
            emit(out, &text)
        }
        Command::Solve(input) => {
            let p = load(input)?;
            let report = solve(&p.pair, &options(cli))?;
            let text = if machine {
                let mut s =
                    ResultDocument::new(p.file.name.clone(), &p.pair, &report, !cli.no_normalize)
                        .to_json();
                s.push('\n');
                s
            } else {
                let mut s = render_pages(&report);
                s.push_str(&render_verdict(&report));
                s
            };
            emit(out, &text)
        }
        Command::Hm(input) => {
            let p = load(input)?;
            let (even, odd) = hm_ranks(p.pair.cup())?;
            let text = if machine {
                json_line(&json!({ "even": even, "odd": odd, "quota": even + odd }))
            } else {
                format!("HM ranks: {even} even, {odd} odd\nquota: {}\n", even + odd)
            };
            emit(out, &text)
        }
        Command::Kq { n } => {
            let g = kq1_torus(*n)?;
            let text = if machine {
                json_line(&json!({ "n": n, "z2_count": g.z2_count, "z_count": g.z_count }))
            } else {
                format!("{g}\n")
            };
            emit(out, &text)
        }
        Command::Classify {
            n,
            cubic,
            max_degree,
        } => {
            let mut triples = BTreeSet::new();
            for c in cubic {
                let s = SubsetIndex::from_digits(*n, c)
                    .filter(|s| s.cardinality() == 3)
                    .ok_or_else(|| {
                        CliError::Usage(format!("--cubic {c} is not a triple in 1..={n}"))
                    })?;
                triples.insert(s);
            }
            let orbits =
                classify_orbits(*n, &triples, *max_degree).map_err(CliError::Validation)?;
            let text = if machine {
                let list: Vec<_> = orbits
                    .iter()
                    .map(|o| {
                        json!({
                            "weights": [o.weights.0, o.weights.1],
                            "size": o.size,
                            "representative": o.representative.anf_string(),
                        })
                    })
                    .collect();
                json_line(&list)
            } else {
                let mut s = format!("{} orbits\n", orbits.len());
                for (i, o) in orbits.iter().enumerate() {
                    s.push_str(&format!(
                        "orbit {}: weights {}/{}, {} functions, representative {}\n",
                        i + 1,
                        o.weights.0,
                        o.weights.1,
                        o.size,
                        o.representative.anf_string()
                    ));
                }
                s
            };
            emit(out, &text)
        }
        Command::Example { name, m } => {
            let file = load_example(name, *m)?;
            emit(out, &json_line(&file))
        }
        Command::ListExamples => {
            let mut s = String::new();
            for name in EXAMPLE_NAMES {
                let p = example(name).expect("bundled example");
                let pair = p.validate()?;
                s.push_str(&format!(
                    "{name:<14} b1 = {}  rokhlin = {}\n",
                    pair.n(),
                    pair.mu().anf_string()
                ));
            }
            emit(out, &s)
        }
    }
}

fn render_node(node: &BranchNode, depth: usize, out: &mut String) {
    for child in &node.children {
        let status = match child.verdict {
            Verdict::Interior => "open",
            Verdict::Leaf { .. } if child.survives() => "survives",
            Verdict::Leaf { .. } => "eliminated",
        };
        out.push_str(&format!(
            "{}d{} #{}: rank {}, {} summands, {}\n",
            "  ".repeat(depth + 1),
            child.page,
            child.candidate,
            child.rank,
            child.summands,
            status
        ));
        render_node(child, depth + 1, out);
    }
}

pub fn render_pages(report: &SolveReport) -> String {
    let mut s = format!("E1\n{}", report.e1.grid().render());
    s.push_str(&format!("\nE2\n{}", report.e2.grid().render()));
    s.push_str(&format!(
        "\nbranches from E2 ({} summands)\n",
        report.tree.summands
    ));
    render_node(&report.tree, 0, &mut s);
    s
}

pub fn render_verdict(report: &SolveReport) -> String {
    let (even, odd) = report.hm_ranks;
    let mut s = format!(
        "\nquota: {} (HM ranks {even} even, {odd} odd)\n",
        report.quota
    );
    if report.discarded_constant {
        s.push_str(&format!(
            "shift: {} (constant term removed)\n",
            report.shift
        ));
    }
    match &report.unique {
        Some(m) => s.push_str(&format!("final: {}; unique: yes\n", m.describe())),
        None => {
            s.push_str(&format!(
                "final: {} candidates; unique: no\n",
                report.finals.len()
            ));
            for (i, m) in report.finals.iter().enumerate() {
                s.push_str(&format!("  candidate {}: {}\n", i + 1, m.describe()));
            }
        }
    }
    s
}
