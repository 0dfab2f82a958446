//! `ghml`: command-line front end for symbolic GSTs and Kripke structures.
//!
//! Exit codes: 0 when the checked property holds (or the command just
//! produces output), 1 when it fails (a witness is printed), 2 on usage,
//! parse or validation errors.

mod input;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use ghml_core::hm_classes::{schemata_check, vhhm_check, ImageFiniteBounded};
use ghml_core::{
    bisim, build_surrogate, distinguishing_formula, format_model, image_finite, image_finite_bounded, mc_gst,
    mc_kripke, minimize, parse_formula, stratified, strong_bisim_discrete, weak_bisim_gst, BisimVerdict,
    KripkeStructure, ModelFile,
};

use input::{Input, Lazy};

#[derive(Parser)]
#[command(
    name = "ghml",
    version,
    about = "Surrogates, bisimulation and modal logic for generalized synchronization trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the surrogate Kripke structure of a GST.
    Surrogate {
        gst: String,
        /// Write the structure here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a Graphviz rendering.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Minimize a Kripke structure (a GST is replaced by its surrogate).
    Minimize { model: String },
    /// Decide bisimilarity of two states.
    Bisim {
        first: String,
        second: String,
        /// Compared states as `s,t`; defaults to the initial states.
        #[arg(long)]
        states: Option<String>,
    },
    /// Weak bisimilarity of two GSTs.
    Weakbisim { first: String, second: String },
    /// Strong bisimilarity of two discrete GSTs.
    Strongbisim { first: String, second: String },
    /// Model-check a formula at a GST root or a Kripke state.
    Check {
        model: String,
        formula: String,
        /// State of a Kripke structure; defaults to the initial state.
        #[arg(long)]
        state: Option<String>,
    },
    /// Print a formula true at `s` and false at `t`.
    Distinguish { first: String, s: String, second: String, t: String },
    /// Check the transitivity and weak density schemata.
    Schemata { model: String },
    /// Image-finiteness verdict; generators are checked up to `--depth`.
    Imagefinite {
        model: String,
        #[arg(long)]
        state: Option<String>,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Largest depth up to `--depth` at which two states agree.
    Stratified {
        model: String,
        s: String,
        t: String,
        #[arg(long)]
        depth: usize,
        /// Check a truncation of a generator with this family width instead
        /// of the lazy structure.
        #[arg(long)]
        width: Option<usize>,
    },
    /// Finite truncation of a generator.
    Truncate {
        model: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        width: usize,
    },
    /// Compare bisimilarity with stratified agreement over several models.
    Vhhm {
        #[arg(required = true)]
        models: Vec<String>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Graphviz rendering of a model.
    ExportDot {
        model: String,
        /// Annotate states with their block after minimization.
        #[arg(long)]
        blocks: bool,
    },
}

/// Result of a command: its report and whether the property held.
struct Report {
    text: String,
    holds: bool,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, holds: true }
    }

    fn verdict(holds: bool, text: String) -> Self {
        Report { text, holds }
    }
}

fn finite(spec: &str) -> Result<KripkeStructure> {
    Input::load(spec)?.kripke()
}

fn state(ks: &KripkeStructure, name: &str) -> Result<usize> {
    ks.state_id(name).map_err(|_| anyhow!("unknown state `{name}` in `{}`", ks.name))
}

fn initial_or(ks: &KripkeStructure, name: Option<&str>) -> Result<usize> {
    match name {
        Some(n) => state(ks, n),
        None => ks.initial().ok_or_else(|| anyhow!("`{}` has no initial state; pass a state name", ks.name)),
    }
}

fn describe_verdict(v: &BisimVerdict) -> String {
    match v {
        BisimVerdict::Bisimilar { relation } => {
            let mut out = String::from("bisimilar\n");
            for (a, b) in relation {
                let _ = writeln!(out, "  {a} ~ {b}");
            }
            out
        }
        BisimVerdict::Distinguished { formula } => format!("not bisimilar\n{formula}\n"),
    }
}

fn run(cmd: Command) -> Result<Report> {
    Ok(match cmd {
        Command::Surrogate { gst, out, dot } => {
            let g = Input::load(&gst)?.gst()?;
            let ks = build_surrogate(&g);
            let text = format_model(&ModelFile::Kripke(ks.clone()));
            if let Some(path) = dot {
                std::fs::write(&path, ks.to_dot(None)).with_context(|| format!("writing {}", path.display()))?;
            }
            match out {
                Some(path) => {
                    std::fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
                    Report::ok(format!("{} states, {} transitions\n", ks.num_states(), ks.transitions().len()))
                }
                None => Report::ok(text),
            }
        }
        Command::Minimize { model } => {
            let ks = finite(&model)?;
            let (partition, quotient) = minimize(&ks);
            let mut text = String::new();
            for (b, block) in partition.blocks.iter().enumerate() {
                let names: Vec<&str> = block.iter().map(|s| ks.state_name(*s)).collect();
                let _ = writeln!(text, "# block {b}: {}", names.join(", "));
            }
            text.push_str(&format_model(&ModelFile::Kripke(quotient)));
            Report::ok(text)
        }
        Command::Bisim { first, second, states } => {
            let (k1, k2) = (finite(&first)?, finite(&second)?);
            let (s, t) = match states.as_deref() {
                Some(pair) => {
                    let (s, t) = pair.split_once(',').ok_or_else(|| anyhow!("--states expects `s,t`"))?;
                    (state(&k1, s.trim())?, state(&k2, t.trim())?)
                }
                None => (initial_or(&k1, None)?, initial_or(&k2, None)?),
            };
            let v = bisim(&k1, s, &k2, t)?;
            Report::verdict(v.is_bisimilar(), describe_verdict(&v))
        }
        Command::Weakbisim { first, second } => {
            let (g1, g2) = (Input::load(&first)?.gst()?, Input::load(&second)?.gst()?);
            let v = weak_bisim_gst(&g1, &g2);
            Report::verdict(v.is_bisimilar(), describe_verdict(&v))
        }
        Command::Strongbisim { first, second } => {
            let (g1, g2) = (Input::load(&first)?.gst()?, Input::load(&second)?.gst()?);
            let holds = strong_bisim_discrete(&g1, &g2)?;
            Report::verdict(holds, format!("{}\n", if holds { "strongly bisimilar" } else { "not strongly bisimilar" }))
        }
        Command::Check { model, formula, state: at } => {
            let f = parse_formula(&formula)?;
            let holds = match Input::load(&model)? {
                Input::Model(m) if at.is_none() && matches!(*m, ModelFile::Gst(_)) => {
                    mc_gst(&Input::Model(m).gst()?, &f)
                }
                other => {
                    let ks = other.kripke()?;
                    mc_kripke(&ks, initial_or(&ks, at.as_deref())?, &f)?
                }
            };
            Report::verdict(holds, format!("{holds}\n"))
        }
        Command::Distinguish { first, s, second, t } => {
            let (k1, k2) = (finite(&first)?, finite(&second)?);
            let (s, t) = (state(&k1, &s)?, state(&k2, &t)?);
            match distinguishing_formula(&k1, s, &k2, t) {
                Ok(f) => Report::ok(format!("{f}\n")),
                Err(ghml_core::Error::Bisimilar) => {
                    Report::verdict(false, "bisimilar: no distinguishing formula\n".into())
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Schemata { model } => {
            let ks = finite(&model)?;
            let report = schemata_check(&ks);
            Report::verdict(report.passes(), format!("{}\n", report.describe(&ks)))
        }
        Command::Imagefinite { model, state: at, depth } => match Input::load(&model)? {
            Input::Lazy(lazy) => {
                let verdict = match &lazy {
                    Lazy::Fig3 => {
                        let (lz, u, _) = ghml_core::gen_fig3();
                        let s = match &at {
                            Some(n) => n.parse()?,
                            None => u,
                        };
                        image_finite_bounded(&lz, &s, depth)?
                    }
                    Lazy::Gx => {
                        let lz = ghml_core::gen_gx();
                        let s = match &at {
                            Some(n) => n.parse()?,
                            None => ghml_core::hm_classes::GxState::R,
                        };
                        image_finite_bounded(&lz, &s, depth)?
                    }
                };
                match verdict {
                    ImageFiniteBounded::ConsistentWithImageFinite => {
                        Report::ok(format!("consistent with image-finite up to depth {depth}\n"))
                    }
                    ImageFiniteBounded::NotImageFiniteUpTo { depth, witness } => {
                        Report::verdict(false, format!("not image-finite up to depth {depth}\nwitness [{witness}]\n"))
                    }
                }
            }
            other => {
                let g = other.gst()?;
                let w = image_finite(&g).witness;
                Report::ok(format!(
                    "image-finite\nwitness ({} states):\n{}",
                    w.num_states(),
                    format_model(&ModelFile::Kripke(w))
                ))
            }
        },
        Command::Stratified { model, s, t, depth, width } => {
            let result = match (Input::load(&model)?, width) {
                (Input::Lazy(lazy), None) => lazy.stratified(&s, &t, depth)?,
                (Input::Lazy(lazy), Some(w)) => {
                    let ks = lazy.truncate(depth + 1, w);
                    stratified(&ks, state(&ks, &s)?, state(&ks, &t)?, depth)?
                }
                (other, _) => {
                    let ks = other.kripke()?;
                    stratified(&ks, state(&ks, &s)?, state(&ks, &t)?, depth)?
                }
            };
            match result {
                Some(j) => Report::verdict(j == depth, format!("agree up to depth {j}\n")),
                None => Report::verdict(false, "differ on variables\n".into()),
            }
        }
        Command::Truncate { model, depth, width } => match Input::load(&model)? {
            Input::Lazy(lazy) => Report::ok(format_model(&ModelFile::Kripke(lazy.truncate(depth, width)))),
            _ => bail!("`truncate` expects a generator (gen:fig3 or gen:gx)"),
        },
        Command::Vhhm { models, depth } => {
            let structures = models.iter().map(|m| finite(m)).collect::<Result<Vec<_>>>()?;
            let report = vhhm_check(&structures, depth);
            Report::verdict(report.passes(), report.to_string())
        }
        Command::ExportDot { model, blocks } => {
            let ks = finite(&model)?;
            let partition = blocks.then(|| minimize(&ks).0);
            Report::ok(ks.to_dot(partition.as_ref().map(|p| p.block_of.as_slice())))
        }
    })
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            print!("{}", report.text);
            if report.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
