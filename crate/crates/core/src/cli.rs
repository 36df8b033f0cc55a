//! The `kb` command line. [`run`] takes the argument vector and two output streams
//! and returns the process exit code: 0 for true, equivalent or all-pass; 1 for
//! false, inequivalent or some-fail; 2 for usage and input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::algebra::MultiModel;
use crate::autgroup::{automorphism_group, decide_equivalence, EquivOptions, Verdict};
use crate::config::{Limits, DEFAULT_MAX_ELEMENTS, DEFAULT_MAX_POINTS, DEFAULT_SEED_DEPTH};
use crate::error::{Error, Result};
use crate::formula::Description;
use crate::frontend::{
    parse_context, parse_formula_in, parse_model_named, parse_probes, parse_query_named, parse_witness,
    print_witness,
};
use crate::galois::{content, entails};
use crate::semantics::PointSet;
use crate::translate::{synthesize_interpretation, verify_witness, Probes, SynthesisBounds};
use crate::valuealg::{default_aux, generate_with, group_orbits, GenerationConfig, Partition};

#[derive(Parser, Debug)]
#[command(name = "kb", version, about = "Query, compare and verify finite knowledge bases")]
struct Cli {
    /// Cap on the size of any point space G^X.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_POINTS)]
    max_points: usize,
    /// Cap on materialized Boolean-algebra elements.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ELEMENTS)]
    max_elements: usize,
    /// Worker threads for instance pairs and probes.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Line-oriented machine output.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Model file (.kbm).
    #[arg(long)]
    model: PathBuf,
    /// Instance name; may be omitted when the model has exactly one.
    #[arg(long)]
    instance: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the content of a query in one instance.
    Eval {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        query: PathBuf,
    },
    /// Decide whether a query entails a formula.
    Entails {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// List the automorphism group of an instance.
    Aut {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Partition G^X into automorphism orbits.
    Orbits {
        #[command(flatten)]
        model: ModelArgs,
        /// Context such as `x:s, y:s`.
        #[arg(long)]
        vars: String,
    },
    /// List the atoms of the algebra of definable sets over a context.
    Rf {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        vars: String,
        /// Auxiliary variables per sort; defaults to the total carrier size.
        #[arg(long)]
        aux: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED_DEPTH)]
        seed_depth: usize,
    },
    /// Decide automorphic equivalence of two multi-models.
    Equiv {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Also write the witness to this file.
        #[arg(long)]
        witness_out: Option<PathBuf>,
        /// Require a single isomorphism shared by all instance pairs.
        #[arg(long)]
        uniform: bool,
        /// Search for translations beta and beta' to include in the witness.
        #[arg(long)]
        synthesize: bool,
    },
    /// Check an equivalence witness against probe descriptions.
    VerifyWitness {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        /// Probes over the left signature; replaces the default battery.
        #[arg(long)]
        probes: Option<PathBuf>,
        /// Probes over the right signature; replaces the default battery.
        #[arg(long)]
        probes_right: Option<PathBuf>,
    },
    /// Print the probe formulas entailed by a query.
    Closure {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        probes: PathBuf,
    },
}

struct Ctx {
    limits: Limits,
    jobs: Option<usize>,
    machine: bool,
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let ctx = Ctx {
        limits: Limits {
            max_points: cli.max_points,
            max_elements: cli.max_elements,
            ..Limits::default()
        },
        jobs: cli.jobs,
        machine: cli.machine,
    };
    if ctx.limits.max_points == 0 || ctx.limits.max_elements == 0 || ctx.jobs == Some(0) {
        let _ = writeln!(err, "error: caps and --jobs must be positive");
        return 2;
    }
    let mut buf = String::new();
    let result = dispatch(&cli.command, &ctx, &mut buf, err);
    let _ = out.write_all(buf.as_bytes());
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = match e.diagnostic() {
                Some(d) => writeln!(err, "{d}"),
                None => writeln!(err, "error: {e}"),
            };
            2
        }
    }
}

fn dispatch(cmd: &Command, ctx: &Ctx, out: &mut String, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Eval { model, query } => {
            let (mm, name) = load_instance(model)?;
            let m = mm.instance(&name)?;
            let d = load_query(query, &mm)?;
            let set = content(m, &d, &ctx.limits)?;
            write_points(out, &set, ctx.machine);
            Ok(0)
        }
        Command::Entails { model, query, formula } => {
            let (mm, name) = load_instance(model)?;
            let m = mm.instance(&name)?;
            let d = load_query(query, &mm)?;
            let v = parse_formula_in(formula, "--formula", 1, mm.signature(), &d.context)?;
            let verdict = entails(m, &d, &v, &ctx.limits)?;
            if ctx.machine {
                out.push_str(&format!("VERDICT {verdict}\n"));
            } else {
                out.push_str(&format!("{verdict}\n"));
            }
            Ok(if verdict { 0 } else { 1 })
        }
        Command::Aut { model } => {
            let (mm, name) = load_instance(model)?;
            let m = mm.instance(&name)?;
            let group = automorphism_group(m);
            if ctx.machine {
                out.push_str(&format!("ORDER {}\n", group.order()));
                for g in group.members() {
                    out.push_str(&format!("MEMBER {}\n", g.display()));
                }
            } else {
                out.push_str(&format!("order {}\n", group.order()));
                out.push_str(&group.to_string());
            }
            Ok(0)
        }
        Command::Orbits { model, vars } => {
            let (mm, name) = load_instance(model)?;
            let m = mm.instance(&name)?;
            let x = parse_context(vars, mm.signature())?;
            let orbits = group_orbits(&automorphism_group(m), &x, ctx.limits.max_points)?;
            write_partition(out, &orbits, "orbit", ctx.machine);
            Ok(0)
        }
        Command::Rf {
            model,
            vars,
            aux,
            seed_depth,
        } => {
            let (mm, name) = load_instance(model)?;
            let m = mm.instance(&name)?;
            let x = parse_context(vars, mm.signature())?;
            let cfg = GenerationConfig {
                seed_depth: *seed_depth,
                limits: ctx.limits,
                ..GenerationConfig::new(aux.unwrap_or_else(|| default_aux(m)))
            };
            let alg = generate_with(m, &x, &cfg)?;
            write_partition(out, alg.atoms(), "atom", ctx.machine);
            Ok(0)
        }
        Command::Equiv {
            left,
            right,
            witness_out,
            uniform,
            synthesize,
        } => {
            let l = load_model(left)?;
            let r = load_model(right)?;
            let opts = EquivOptions {
                uniform: *uniform,
                jobs: ctx.jobs,
            };
            match decide_equivalence(&l, &r, opts)? {
                Verdict::Inequivalent(reason) => {
                    if ctx.machine {
                        out.push_str(&format!("VERDICT inequivalent {reason}\n"));
                    } else {
                        out.push_str(&format!("inequivalent: {reason}\n"));
                    }
                    Ok(1)
                }
                Verdict::Equivalent(mut w) => {
                    if *synthesize {
                        for p in &mut w.pairs {
                            let (f, g) = (l.instance(&p.left)?, r.instance(&p.right)?);
                            let bounds = SynthesisBounds::default();
                            p.beta = synthesize_interpretation(f, g, &p.delta, bounds, &ctx.limits)?;
                            p.beta_prime =
                                synthesize_interpretation(g, f, &p.delta.inverse(), bounds, &ctx.limits)?;
                            if p.beta.is_none() || p.beta_prime.is_none() {
                                let _ = writeln!(
                                    err,
                                    "warning: no translation found within bounds for {} -> {}",
                                    p.left, p.right
                                );
                            }
                        }
                    }
                    let text = print_witness(&w, &l, &r);
                    if let Some(path) = witness_out {
                        fs::write(path, &text).map_err(|e| io_error(path, e))?;
                    }
                    out.push_str(if ctx.machine { "VERDICT equivalent\n" } else { "equivalent\n" });
                    out.push_str(&text);
                    Ok(0)
                }
            }
        }
        Command::VerifyWitness {
            left,
            right,
            witness,
            probes,
            probes_right,
        } => {
            let l = load_model(left)?;
            let r = load_model(right)?;
            let w = parse_witness(&read(witness)?, &display(witness), &l, &r)?;
            let mut battery = Probes::defaults(l.signature(), r.signature());
            if let Some(p) = probes {
                battery.left = parse_probes(&read(p)?, &display(p), l.signature())?;
            }
            if let Some(p) = probes_right {
                battery.right = parse_probes(&read(p)?, &display(p), r.signature())?;
            }
            let report = verify_witness(&l, &r, &w, &battery, &ctx.limits, ctx.jobs)?;
            if ctx.machine {
                out.push_str(&report.machine());
            } else {
                out.push_str(&report.to_string());
            }
            Ok(if report.all_passed() { 0 } else { 1 })
        }
        Command::Closure { model, query, probes } => {
            let (mm, name) = load_instance(model)?;
            let m = mm.instance(&name)?;
            let d = load_query(query, &mm)?;
            let blocks = parse_probes(&read(probes)?, &display(probes), mm.signature())?;
            let mut found = Vec::new();
            for b in &blocks {
                if b.context != d.context {
                    return Err(Error::ContextMismatch(format!(
                        "probe block `vars {};` differs from the query context `vars {};`",
                        b.context.display(mm.signature()),
                        d.context.display(mm.signature())
                    )));
                }
                for v in &b.formulas {
                    if entails(m, &d, v, &ctx.limits)? {
                        found.push(v.display(mm.signature()).to_string());
                    }
                }
            }
            for f in found {
                if ctx.machine {
                    out.push_str("ENTAILED ");
                }
                out.push_str(&f);
                out.push('\n');
            }
            Ok(0)
        }
    }
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

fn io_error(p: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: display(p),
        source,
    }
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).map_err(|e| io_error(p, e))
}

fn load_model(p: &Path) -> Result<MultiModel> {
    parse_model_named(&read(p)?, &display(p))
}

fn load_query(p: &Path, mm: &MultiModel) -> Result<Description> {
    parse_query_named(&read(p)?, &display(p), mm.signature())
}

/// Loads the model file and resolves the requested instance name.
fn load_instance(args: &ModelArgs) -> Result<(MultiModel, String)> {
    let mm = load_model(&args.model)?;
    let name = match &args.instance {
        Some(n) => {
            mm.instance(n)?;
            n.clone()
        }
        None => match mm.instances() {
            [only] => only.name.clone(),
            all => {
                let names: Vec<&str> = all.iter().map(|i| i.name.as_str()).collect();
                return Err(Error::Contract(format!(
                    "--instance is required; instances are [{}]",
                    names.join(", ")
                )));
            }
        },
    };
    Ok((mm, name))
}

fn write_points(out: &mut String, set: &PointSet, machine: bool) {
    for i in set.indices() {
        if machine {
            out.push_str("POINT ");
        }
        out.push_str(&set.space().format_point(i));
        out.push('\n');
    }
    if machine {
        out.push_str(&format!("COUNT {}\n", set.count()));
    } else {
        let n = set.count();
        out.push_str(&format!("{n} point{}\n", if n == 1 { "" } else { "s" }));
    }
}

fn write_partition(out: &mut String, p: &Partition, noun: &str, machine: bool) {
    if machine {
        out.push_str(&format!("COUNT {}\n", p.len()));
    } else {
        let n = p.len();
        out.push_str(&format!("{n} {noun}{}\n", if n == 1 { "" } else { "s" }));
    }
    for b in p.blocks() {
        if machine {
            out.push_str("BLOCK ");
        }
        out.push_str(&b.format_inline());
        out.push('\n');
    }
}
