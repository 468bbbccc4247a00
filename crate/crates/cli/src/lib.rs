//! Command-line front end for `mealy-orbits`.
//!
//! Every command prints a short human-readable report, or with `--json` the
//! structured report defined in [`report`]. Budget exhaustion is part of the
//! answer and never makes a command fail.

pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use mealy_orbits::element::{Enumerator, DEFAULT_TUPLE_BOUND};
use mealy_orbits::orbits::generator_elements;
use mealy_orbits::{
    catalog, check_consistency, decide, format, orbit_finite, orbit_signature, orbit_upword, witness_search,
    DecideBudgets, EnumBudget, Error, MealyAutomaton, StateWord, UpwordBudget, WitnessBudget,
};

use report::*;

#[derive(Debug, Parser)]
#[command(name = "mealy-orbits", version, about = "Mealy automata, automaton semigroups and their orbits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate an automaton.
    Validate,
    /// Apply a product of states to a word or an ultimately periodic word.
    Act {
        /// Product of states, dot-separated; the rightmost state acts first.
        #[arg(long)]
        element: String,
    },
    /// Orbit of a word (or of an ultimately periodic word) under the generators.
    Orbit {
        /// Print the orbit graph in DOT format instead.
        #[arg(long)]
        dot: bool,
    },
    /// Breadth-first enumeration of the generated semigroup.
    Enumerate,
    /// Greedy search for prefixes with growing orbits.
    Witness,
    /// Run the finiteness semi-decision procedure.
    Finiteness {
        /// Also audit the verdict against all orbits up to this depth.
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=16))]
        check_depth: Option<u64>,
    },
    /// Orbit signature of a word for single-state generators.
    Signature,
    /// Moore diagram in DOT format.
    ExportDot,
    /// List catalog automata, or print one in the file format.
    Catalog { name: Option<String> },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Automaton file (JSON).
    #[arg(long, global = true, conflicts_with = "catalog")]
    pub automaton: Option<PathBuf>,
    /// Catalog automaton NAME[:PARAM], e.g. fig2:3.
    #[arg(long, global = true)]
    pub catalog: Option<String>,
    /// Comma-separated generators, each a dot-separated product of states
    /// (default: every state).
    #[arg(long, global = true)]
    pub gens: Option<String>,
    #[arg(long, global = true)]
    pub word: Option<String>,
    /// Ultimately periodic word written pre(period), e.g. 0(01)^ω.
    #[arg(long, global = true)]
    pub upword: Option<String>,
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub depth: u64,
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    pub lookahead: u64,
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub orbit_cap: u64,
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_elements: u64,
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_length: u64,
    /// Emit structured (JSON) output.
    #[arg(long, global = true)]
    pub json: bool,
}

/// Failure of a command: usage problems exit with 2, everything else with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownCatalog(_) => CliError::Usage(format!("{e}; known: {}", catalog::NAMES.join(", "))),
            other => CliError::Failed(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

impl Common {
    fn load(&self) -> CliResult<MealyAutomaton> {
        match (&self.automaton, &self.catalog) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))?;
                Ok(format::parse(&text)?)
            }
            (None, Some(name)) => Ok(catalog::by_name(name)?),
            (None, None) => Err(CliError::Usage("one of --automaton or --catalog is required".into())),
        }
    }

    fn generators(&self, m: &MealyAutomaton) -> CliResult<Vec<StateWord>> {
        match &self.gens {
            None => Ok((0..m.num_states()).map(StateWord::single).collect()),
            Some(list) => list
                .split(',')
                .map(|g| m.parse_state_word(g).map_err(CliError::from))
                .collect(),
        }
    }

    fn word(&self, m: &MealyAutomaton) -> CliResult<mealy_orbits::FiniteWord> {
        let text = self
            .word
            .as_deref()
            .ok_or_else(|| CliError::Usage("--word is required".into()))?;
        Ok(m.alphabet().parse_word(text)?)
    }

    fn enum_budget(&self) -> EnumBudget {
        EnumBudget {
            max_elements: self.max_elements as usize,
            max_length: self.max_length as usize,
            tuple_bound: DEFAULT_TUPLE_BOUND,
        }
    }

    fn witness_budget(&self) -> WitnessBudget {
        WitnessBudget {
            max_depth: self.depth as usize,
            lookahead: self.lookahead as usize,
            orbit_cap: self.orbit_cap as usize,
        }
    }
}

/// Output of one command: structured value plus its text rendering.
pub struct Rendered {
    pub json: String,
    pub text: String,
}

fn rendered<T: serde::Serialize>(value: &T, text: String) -> Rendered {
    Rendered {
        json: to_json(value),
        text,
    }
}

/// Runs a parsed command line, returning what should be printed.
pub fn execute(cli: &Cli) -> CliResult<Rendered> {
    let c = &cli.common;
    if let Command::Catalog { name } = &cli.command {
        return Ok(match name {
            None => {
                let names: Vec<String> = catalog::NAMES.iter().map(|s| s.to_string()).collect();
                let text = names.join("\n") + "\n";
                rendered(&names, text)
            }
            Some(name) => {
                let m = catalog::by_name(name)?;
                let json = format::to_json(&m);
                Rendered { json: json.clone(), text: json }
            }
        });
    }
    let m = c.load()?;
    let gens = c.generators(&m)?;
    let gen_names: Vec<String> = gens.iter().map(|g| m.render_state_word(g)).collect();
    let alphabet = m.alphabet();
    Ok(match &cli.command {
        Command::Catalog { .. } => unreachable!(),
        Command::Validate => {
            let r = ValidateReport {
                valid: true,
                states: m.num_states(),
                letters: m.arity(),
                state_names: m.state_names().to_vec(),
                alphabet: alphabet.names().to_vec(),
            };
            let text = format!("valid: {} states, {} letters\n", r.states, r.letters);
            rendered(&r, text)
        }
        Command::Act { element } => {
            let s = m.parse_state_word(element)?;
            if let Some(up) = &c.upword {
                let x = alphabet.parse_upword(up)?;
                let y = m.act_upword(&s, &x, &UpwordBudget::default())?;
                let r = ActReport {
                    element: m.render_state_word(&s),
                    input: alphabet.render_upword(&x),
                    image: alphabet.render_upword(&y),
                    section: None,
                };
                let text = format!("image: {}\n", r.image);
                rendered(&r, text)
            } else {
                let u = c.word(&m)?;
                let (image, section) = m.act_stateword(&s, &u);
                let r = ActReport {
                    element: m.render_state_word(&s),
                    input: alphabet.render_word(&u),
                    image: alphabet.render_word(&image),
                    section: Some(m.render_state_word(&section)),
                };
                let text = format!("image: {}\nsection: {}\n", r.image, r.section.as_deref().unwrap_or(""));
                rendered(&r, text)
            }
        }
        Command::Orbit { dot } => {
            let elems = generator_elements(&m, &gens, DEFAULT_TUPLE_BOUND)?;
            let cap = c.orbit_cap as usize;
            if let Some(up) = &c.upword {
                let x = alphabet.parse_upword(up)?;
                let o = orbit_upword(&elems, &x, cap, UpwordBudget::default().max_cycle)?;
                let r = UpOrbitReport {
                    generators: gen_names,
                    basepoint: alphabet.render_upword(&x),
                    closed: o.closed,
                    size: o.closed.then_some(o.points.len()),
                    lower_bound: o.lower_bound,
                    cap,
                    points: o.points.iter().map(|p| alphabet.render_upword(p)).collect(),
                };
                let text = up_orbit_text(&r);
                rendered(&r, text)
            } else {
                let u = c.word(&m)?;
                match orbit_finite(&elems, &u, cap) {
                    Ok(o) if *dot => {
                        let d = o.to_dot(alphabet, &gen_names);
                        rendered(&DotReport { dot: d.clone() }, d)
                    }
                    Ok(o) => {
                        let r = OrbitReport {
                            generators: gen_names,
                            basepoint: alphabet.render_word(&u),
                            closed: true,
                            size: Some(o.len()),
                            lower_bound: o.len(),
                            cap,
                            points: o.points.iter().map(|p| alphabet.render_word(p)).collect(),
                            edges: o.edges,
                        };
                        let text = orbit_text(&r);
                        rendered(&r, text)
                    }
                    Err(Error::OrbitCap { cap }) => {
                        let r = OrbitReport {
                            generators: gen_names,
                            basepoint: alphabet.render_word(&u),
                            closed: false,
                            size: None,
                            lower_bound: cap,
                            cap,
                            points: Vec::new(),
                            edges: Vec::new(),
                        };
                        let text = orbit_text(&r);
                        rendered(&r, text)
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
        Command::Enumerate => {
            let mut en = Enumerator::new(&m, &gens, c.enum_budget())?;
            en.run_to_end()?;
            let r = GrowthView::new(&m, gen_names, &en.report(true));
            let text = growth_text(&r);
            rendered(&r, text)
        }
        Command::Witness => {
            let elems = generator_elements(&m, &gens, DEFAULT_TUPLE_BOUND)?;
            let chain = witness_search(&elems, c.witness_budget());
            let r = ChainView::new(&m, gen_names, &chain);
            let text = chain_text(&r);
            rendered(&r, text)
        }
        Command::Finiteness { check_depth } => {
            let budgets = DecideBudgets {
                enumeration: c.enum_budget(),
                witness: c.witness_budget(),
                ..DecideBudgets::default()
            };
            let verdict = decide(&m, &gens, budgets)?;
            let consistency = match check_depth {
                Some(d) => Some(check_consistency(&verdict, &m, &gens, *d as usize)?),
                None => None,
            };
            let r = FinitenessView::new(&m, gen_names, &verdict, consistency);
            let text = finiteness_text(&r);
            rendered(&r, text)
        }
        Command::Signature => {
            let states = gens
                .iter()
                .map(|g| match g.states() {
                    [q] => Ok(*q),
                    _ => Err(CliError::Usage("signature needs single-state generators".into())),
                })
                .collect::<CliResult<Vec<_>>>()?;
            let u = c.word(&m)?;
            match orbit_signature(&m, &states, &u, c.orbit_cap as usize) {
                Ok(sig) => {
                    let r = SignatureView::new(&m, gen_names, &sig);
                    let text = signature_text(&r);
                    rendered(&r, text)
                }
                Err(Error::OrbitCap { cap }) => {
                    let r = SignatureView::exceeded(alphabet.render_word(&u), gen_names, cap);
                    let text = signature_text(&r);
                    rendered(&r, text)
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::ExportDot => {
            let d = m.export_dot();
            rendered(&DotReport { dot: d.clone() }, d)
        }
    })
}

/// Parses `args`, runs the command and writes to `out`; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let body = if cli.common.json { r.json } else { r.text };
            let _ = out.write_all(body.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
