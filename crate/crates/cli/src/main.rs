use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lampgroup::complex::HnnConstants;
use lampgroup::constructions::{
    build_automaton_abelian, build_automaton_group, cayley_report, AbelianAutomaton, CayleyGroup,
};
use lampgroup::lamplighter::{lamplighter_to_word, word_to_lamplighter};
use lampgroup::verify::{verify_suite, SuiteParams, DEFAULT_SEED, SEED_ENV};
use lampgroup::{FiniteAbelianGroup, GroupWord, LamplighterElement, MealyAutomaton, SquareComplex};

#[derive(Parser)]
#[command(name = "lampgroup", version, about = "Automata over finite abelian groups and their lamplighter groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an automaton and print it.
    Build {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "automaton.json")]
        emit: Emit,
    },
    /// Run the state on a comma-separated input word.
    Act {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        state: String,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Print the dual automaton.
    Dual {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "automaton.json")]
        emit: Emit,
    },
    /// Print the inverse automaton.
    Invert {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "automaton.json")]
        emit: Emit,
    },
    /// Print the minimal automaton with the same state actions.
    Minimize {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "automaton.json")]
        emit: Emit,
    },
    /// Print the square complex, or check that its link is complete.
    Complex {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        check_complete: bool,
    },
    /// Print the presentation of the fundamental group of the square complex.
    Presentation {
        #[command(flatten)]
        source: Source,
        /// One relation per line instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Map a word over the generators to the lamplighter group, or an
    /// element back to a word.
    Normalform {
        #[arg(long)]
        group: String,
        #[arg(long, conflicts_with = "element", required_unless_present = "element")]
        word: Option<String>,
        /// JSON element, e.g. '{"lamps":{"0":[2]},"shift":1}'.
        #[arg(long)]
        element: Option<String>,
    },
    /// Run the verification suite and print its report.
    Verify {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 6)]
        word_len: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 200)]
        roundtrips: usize,
        #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Include wall times; the report is then no longer reproducible.
        #[arg(long)]
        timings: bool,
    },
    /// Report reversibility of the automaton of a group given by its table.
    Cayley {
        #[arg(long, conflicts_with = "symmetric", required_unless_present = "symmetric")]
        table: Option<PathBuf>,
        /// Use the symmetric group on this many points.
        #[arg(long)]
        symmetric: Option<usize>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Abelian group such as Z3 or Z2xZ4.
    #[arg(long)]
    group: Option<String>,
    /// Cayley table JSON of an arbitrary finite group.
    #[arg(long)]
    cayley: Option<PathBuf>,
    /// Automaton JSON.
    #[arg(long)]
    automaton: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    #[value(name = "automaton.json")]
    AutomatonJson,
    #[value(name = "complex.json")]
    ComplexJson,
    Dot,
    #[value(name = "complex.dot")]
    ComplexDot,
    #[value(name = "link.dot")]
    LinkDot,
}

enum Failure {
    Usage(String),
    Check(Value),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

impl Source {
    fn automaton(&self) -> Result<MealyAutomaton, Failure> {
        if let Some(spec) = &self.group {
            let g: FiniteAbelianGroup = spec.parse()?;
            Ok(build_automaton_abelian(&g))
        } else if let Some(path) = &self.cayley {
            Ok(build_automaton_group(&CayleyGroup::from_json(&read(path)?)?))
        } else if let Some(path) = &self.automaton {
            Ok(MealyAutomaton::from_json(&read(path)?)?)
        } else {
            unreachable!("clap requires one source")
        }
    }
}

fn emit(a: &MealyAutomaton, how: Emit, name: &str) -> String {
    let complex = || SquareComplex::from_automaton(a);
    match how {
        Emit::AutomatonJson => a.to_json(),
        Emit::ComplexJson => complex().to_json(),
        Emit::Dot => a.to_dot(name),
        Emit::ComplexDot => complex().to_dot(),
        Emit::LinkDot => complex().link_dot(),
    }
}

/// Splits on commas outside parentheses, so `(0,1),(1,1)` is two letters.
fn split_letters(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = s[start..].trim();
    if !last.is_empty() || !out.is_empty() {
        out.push(last);
    }
    out
}

fn act(a: &MealyAutomaton, state: &str, word: &str) -> Outcome {
    let q = a.state_index(state)?;
    let input = split_letters(word)
        .into_iter()
        .map(|l| a.letter_index(l))
        .collect::<Result<Vec<_>, _>>()?;
    let out = a.act(q, &input)?;
    let labels: Vec<&str> = out.iter().map(|&x| a.letter_labels()[x].as_str()).collect();
    Ok(labels.join(","))
}

fn complex(a: &MealyAutomaton, check: bool) -> Outcome {
    let c = SquareComplex::from_automaton(a);
    if !check {
        return Ok(c.to_json());
    }
    let (complete, status) = c.is_complete();
    let defects: Vec<Value> = status
        .defects()
        .into_iter()
        .map(|(corner, count)| {
            json!({
                "corner": corner,
                "vertical_label": c.vertical()[corner.vertical],
                "horizontal_label": c.horizontal()[corner.horizontal],
                "squares": count,
            })
        })
        .collect();
    let report = json!({
        "complete": complete,
        "corners": status.counts.len(),
        "witness": defects.first(),
        "defects": defects,
    });
    if complete {
        Ok(pretty(&report))
    } else {
        Err(Failure::Check(report))
    }
}

fn presentation(source: &Source, text: bool) -> Outcome {
    let a = source.automaton()?;
    let c = SquareComplex::from_automaton(&a);
    let p = c.fundamental_presentation();
    if text {
        return Ok(p.to_text());
    }
    let (v, e, f) = c.cell_census();
    let mut out = json!({
        "generators": p.generators,
        "relations": p.relations,
        "notes": p.notes,
        "cell_census": [v, e, f],
    });
    if source.group.is_some() {
        out["hnn"] = serde_json::to_value(HnnConstants::for_order(a.num_states()))?;
    }
    Ok(pretty(&out))
}

fn normalform(spec: &str, word: Option<&str>, element: Option<&str>) -> Outcome {
    let ax = AbelianAutomaton::new(spec.parse()?);
    let (p, w) = match (word, element) {
        (Some(text), _) => {
            let w = GroupWord::parse(ax.automaton(), text)?;
            let p = word_to_lamplighter(ax.group(), &w)?;
            (p.clone(), lamplighter_to_word(&ax, &p)?)
        }
        (None, Some(text)) => {
            let p = LamplighterElement::from_json(text)?;
            p.validate(ax.group())?;
            (p.clone(), lamplighter_to_word(&ax, &p)?)
        }
        (None, None) => unreachable!("clap requires word or element"),
    };
    Ok(pretty(&json!({
        "element": serde_json::to_value(&p)?,
        "word": w.display(),
    })))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("plain data serializes")
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Build { source, emit: how } => Ok(emit(&source.automaton()?, how, "automaton")),
        Command::Act { source, state, word } => act(&source.automaton()?, &state, &word),
        Command::Dual { source, emit: how } => Ok(emit(&source.automaton()?.dual(), how, "dual")),
        Command::Invert { source, emit: how } => Ok(emit(&source.automaton()?.inverse()?, how, "inverse")),
        Command::Minimize { source, emit: how } => Ok(emit(&source.automaton()?.minimize().0, how, "minimal")),
        Command::Complex { source, check_complete } => complex(&source.automaton()?, check_complete),
        Command::Presentation { source, text } => presentation(&source, text),
        Command::Normalform { group, word, element } => normalform(&group, word.as_deref(), element.as_deref()),
        Command::Verify {
            group,
            depth,
            word_len,
            samples,
            roundtrips,
            seed,
            timings,
        } => {
            let g: FiniteAbelianGroup = group.parse()?;
            let params = SuiteParams {
                depth,
                word_len,
                samples,
                roundtrips,
                seed,
                timings,
            };
            let report = verify_suite(&g, &params);
            if report.verdict {
                Ok(report.to_json())
            } else {
                Err(Failure::Check(serde_json::to_value(&report)?))
            }
        }
        Command::Cayley { table, symmetric } => {
            let y = match (table, symmetric) {
                (Some(path), _) => CayleyGroup::from_json(&read(&path)?)?,
                (None, Some(k)) if (2..=5).contains(&k) => CayleyGroup::symmetric(k),
                (None, Some(k)) => return Err(Failure::Usage(format!("--symmetric {k}: expected 2..=5"))),
                (None, None) => unreachable!("clap requires table or symmetric"),
            };
            Ok(pretty(&serde_json::to_value(cayley_report(&y))?))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            println!("{}", out.trim_end());
            ExitCode::SUCCESS
        }
        Err(Failure::Check(report)) => {
            println!("{}", pretty(&report));
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
