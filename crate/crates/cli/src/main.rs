//! Command-line front end for the normal-form engine: normalization,
//! equivalence, enumeration, clone closure, the length-parameterized family,
//! and model verification.
//!
//! Exit status: 0 on success or a passing verification, 1 when a
//! verification fails (a counterexample is printed), 2 on usage, parse, or
//! guard errors.

use clap::{Args, Parser, Subcommand};
use clonelab_core::clones::{
    clone_closure_with_guard, distinguish, length_spectrum, s_of_with_guard,
    verify_family_closed_with_guard, Distinction, LengthSet,
};
use clonelab_core::free::{
    check_free_laws_with_guard, enumerate_free_with_guard, equivalent, eval_term, free_size,
    ENUMERATION_GUARD,
};
use clonelab_core::models::{
    check_generation_with_guard, check_laws, dedup_isomorphic, enumerate_models_with_guard,
    eval_in_model, induced_map, Assignment, FiniteModel, MODEL_SIZE_GUARD,
};
use clonelab_core::parse::parse_term;
use clonelab_core::subst::{parse_substitution, substitute};
use clonelab_core::{Element, Term};
use serde_json::json;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "clonelab",
    version,
    about = "Normal forms and term clones of a small variety"
)]
struct Cli {
    /// Emit JSON instead of plain text
    #[arg(long, global = true)]
    json: bool,

    /// Override enumeration and model-size guards (prints a warning)
    #[arg(long, global = true)]
    force: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize a term to its normal form
    Normalize {
        /// Term in the grammar `0 | p | x<K> | t*t | (t)`
        term: String,
    },
    /// Decide whether two terms denote the same element
    Eq { left: String, right: String },
    /// Apply a substitution to a normalized term
    Substitute {
        term: String,
        /// Bindings `x1=p*x2; x2=0`; the empty string is the identity
        #[arg(long)]
        bindings: String,
    },
    /// List the carrier of the free algebra on n generators
    Enumerate { n: u32 },
    /// Size of the free algebra on n generators
    Count { n: u32 },
    /// Substitution-closure of a generator set inside the free algebra on m generators
    Closure {
        /// Comma-separated generator terms, normalized before use
        #[arg(long = "gen", value_delimiter = ',', required = true)]
        generators: Vec<String>,
        #[arg(long)]
        vars: u32,
    },
    /// The length-parameterized family of closed sets
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Exhaustive verification suites
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Finite models of the variety
    #[command(subcommand)]
    Models(ModelsCommand),
}

#[derive(Args)]
struct FamilyArgs {
    /// Admissible word lengths, e.g. `2,4`; empty for the empty set
    #[arg(long, default_value = "")]
    lengths: String,
    /// Ambient generator count m
    #[arg(long)]
    vars: u32,
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// List the member for a length set
    List(FamilyArgs),
    /// Check closure and length invariance of a member
    Verify(FamilyArgs),
    /// Produce a word separating two members
    Distinguish {
        #[arg(long, default_value = "")]
        lengths: String,
        #[arg(long, default_value = "")]
        lengths2: String,
        #[arg(long)]
        vars: u32,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Check the four laws over the free algebra on --vars generators
    Laws {
        #[arg(long, default_value_t = 3)]
        vars: u32,
    },
    /// Check that evaluation maps into every small model are homomorphisms
    Freeness {
        #[arg(long, default_value_t = 2)]
        vars: u32,
        #[arg(long, default_value_t = 3)]
        model_size: usize,
    },
    /// Check that constants and generators generate the free algebra
    Generation {
        #[arg(long, default_value_t = 4)]
        vars: u32,
    },
}

#[derive(Subcommand)]
enum ModelsCommand {
    /// List every model of the variety on a carrier of size k
    Enumerate {
        k: usize,
        /// Collapse isomorphic models to one representative
        #[arg(long)]
        dedup: bool,
    },
    /// Check the laws in a model read from a JSON file
    Check { file: PathBuf },
    /// Evaluate a term in a model read from a JSON file
    Eval {
        file: PathBuf,
        term: String,
        /// Carrier indices assigned to x1, x2, ... in order, e.g. `1,0,2`
        #[arg(long, default_value = "")]
        assign: String,
    },
}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Die quietly when a downstream pipe closes, like other unix filters.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

const PASS: ExitCode = ExitCode::SUCCESS;
const FAIL: ExitCode = ExitCode::FAILURE;

/// Picks the effective guard: the default, or the requested size under
/// `--force` with a warning.
fn effective_guard(force: bool, requested: usize, default: usize, what: &str) -> usize {
    if force && requested > default {
        eprintln!("warning: forcing {what} to {requested}, past the default guard of {default}");
        requested
    } else {
        default
    }
}

fn parse_named_term(label: &str, text: &str) -> Result<Term, String> {
    parse_term(text).map_err(|e| format!("{label}: {e}"))
}

fn guard_msg(e: clonelab_core::free::GuardError) -> String {
    format!("{e}; rerun with --force to override")
}

fn clone_err_msg(e: clonelab_core::clones::CloneError) -> String {
    match e {
        clonelab_core::clones::CloneError::Guard(g) => guard_msg(g),
        other => other.to_string(),
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::Normalize { term } => {
            let element = eval_term(&parse_named_term("term", term)?);
            print_element(cli, &element);
            Ok(PASS)
        }
        Command::Eq { left, right } => {
            let lhs = parse_named_term("left term", left)?;
            let rhs = parse_named_term("right term", right)?;
            let same = equivalent(&lhs, &rhs);
            let (le, re) = (eval_term(&lhs), eval_term(&rhs));
            if cli.json {
                emit(&json!({ "equivalent": same, "left": le, "right": re }));
            } else if same {
                println!("equivalent: both normalize to [{le}]");
            } else {
                println!("distinct: [{le}] vs [{re}]");
            }
            Ok(if same { PASS } else { FAIL })
        }
        Command::Substitute { term, bindings } => {
            let element = eval_term(&parse_named_term("term", term)?);
            let subst = parse_substitution(bindings).map_err(|e| e.to_string())?;
            print_element(cli, &substitute(&element, &subst));
            Ok(PASS)
        }
        Command::Enumerate { n } => {
            let guard = effective_guard(
                cli.force,
                *n as usize,
                ENUMERATION_GUARD as usize,
                "free algebra enumeration",
            ) as u32;
            let carrier = enumerate_free_with_guard(*n, guard).map_err(guard_msg)?;
            if cli.json {
                emit(&json!({ "n": n, "count": carrier.len(), "elements": carrier }));
            } else {
                for e in &carrier {
                    println!("{e}");
                }
            }
            Ok(PASS)
        }
        Command::Count { n } => {
            let size = free_size(*n).ok_or_else(|| {
                format!(
                    "the size of the free algebra on {n} generators overflows 128-bit arithmetic"
                )
            })?;
            if cli.json {
                emit(&json!({ "n": n, "count": size.to_string() }));
            } else {
                println!("{size}");
            }
            Ok(PASS)
        }
        Command::Closure { generators, vars } => {
            let mut elements = Vec::new();
            for g in generators {
                elements.push(eval_term(&parse_named_term("generator", g)?));
            }
            let guard = effective_guard(
                cli.force,
                *vars as usize,
                ENUMERATION_GUARD as usize,
                "clone closure",
            ) as u32;
            let closure =
                clone_closure_with_guard(&elements, *vars, guard).map_err(clone_err_msg)?;
            if cli.json {
                emit(&json!({
                    "vars": vars,
                    "count": closure.len(),
                    "closed": closure.is_flagged_closed(),
                    "members": closure.members(),
                }));
            } else {
                for e in closure.members() {
                    println!("{e}");
                }
            }
            Ok(PASS)
        }
        Command::Family(cmd) => run_family(cli, cmd),
        Command::Verify(cmd) => run_verify(cli, cmd),
        Command::Models(cmd) => run_models(cli, cmd),
    }
}

fn family_guard(cli: &Cli, vars: u32) -> u32 {
    effective_guard(
        cli.force,
        vars as usize,
        ENUMERATION_GUARD as usize,
        "family enumeration",
    ) as u32
}

fn run_family(cli: &Cli, cmd: &FamilyCommand) -> Result<ExitCode, String> {
    match cmd {
        FamilyCommand::List(args) => {
            let a = LengthSet::parse(&args.lengths).map_err(|e| e.to_string())?;
            let member = s_of_with_guard(&a, args.vars, family_guard(cli, args.vars))
                .map_err(|e| e.to_string())?;
            if cli.json {
                emit(&json!({
                    "lengths": a.lengths(),
                    "vars": args.vars,
                    "count": member.len(),
                    "spectrum": length_spectrum(&member),
                    "members": member.members(),
                }));
            } else {
                for e in member.members() {
                    println!("{e}");
                }
            }
            Ok(PASS)
        }
        FamilyCommand::Verify(args) => {
            let a = LengthSet::parse(&args.lengths).map_err(|e| e.to_string())?;
            let report =
                verify_family_closed_with_guard(&a, args.vars, family_guard(cli, args.vars))
                    .map_err(guard_msg)?;
            if cli.json {
                emit(&report);
            } else {
                println!("{report}");
            }
            Ok(if report.pass { PASS } else { FAIL })
        }
        FamilyCommand::Distinguish {
            lengths,
            lengths2,
            vars,
        } => {
            let a = LengthSet::parse(lengths).map_err(|e| e.to_string())?;
            let b = LengthSet::parse(lengths2).map_err(|e| e.to_string())?;
            let outcome = distinguish(&a, &b, *vars).map_err(|e| e.to_string())?;
            if cli.json {
                emit(&outcome);
            } else {
                match &outcome {
                    Distinction::Equal => println!("equal"),
                    Distinction::Witness { element, in_first } => {
                        let side = if *in_first { "first" } else { "second" };
                        println!("witness: [{element}] belongs to the {side} member only");
                    }
                }
            }
            Ok(PASS)
        }
    }
}

fn run_verify(cli: &Cli, cmd: &VerifyCommand) -> Result<ExitCode, String> {
    match cmd {
        VerifyCommand::Laws { vars } => {
            let guard = effective_guard(
                cli.force,
                *vars as usize,
                ENUMERATION_GUARD as usize,
                "law suite",
            ) as u32;
            let report = check_free_laws_with_guard(*vars, guard).map_err(guard_msg)?;
            if cli.json {
                emit(&report);
            } else {
                println!("{report}");
            }
            Ok(if report.pass { PASS } else { FAIL })
        }
        VerifyCommand::Freeness { vars, model_size } => {
            let guard = effective_guard(cli.force, *model_size, MODEL_SIZE_GUARD, "model size");
            let mut models_checked = 0u64;
            let mut assignments_checked = 0u64;
            let mut products_checked = 0u64;
            for k in 1..=*model_size {
                for model in enumerate_models_with_guard(k, guard).map_err(guard_msg)? {
                    models_checked += 1;
                    for a in Assignment::all(*vars, k) {
                        assignments_checked += 1;
                        let h = induced_map(*vars, &model, &a).map_err(|e| e.to_string())?;
                        products_checked += h.report.checked;
                        if !h.report.pass {
                            if cli.json {
                                emit(&json!({
                                    "pass": false,
                                    "model": model,
                                    "assignment": a,
                                    "report": h.report,
                                }));
                            } else {
                                println!(
                                    "fail on a model of size {} under assignment {:?}: {}",
                                    model.size(),
                                    a,
                                    h.report
                                );
                            }
                            return Ok(FAIL);
                        }
                    }
                }
            }
            if cli.json {
                emit(&json!({
                    "pass": true,
                    "models": models_checked,
                    "assignments": assignments_checked,
                    "products": products_checked,
                }));
            } else {
                println!(
                    "pass ({models_checked} models, {assignments_checked} assignments, {products_checked} products checked)"
                );
            }
            Ok(PASS)
        }
        VerifyCommand::Generation { vars } => {
            let guard = effective_guard(
                cli.force,
                *vars as usize,
                ENUMERATION_GUARD as usize,
                "generation check",
            ) as u32;
            let mut failed = Vec::new();
            for n in 0..=*vars {
                if !check_generation_with_guard(n, guard).map_err(guard_msg)? {
                    failed.push(n);
                }
            }
            let pass = failed.is_empty();
            if cli.json {
                emit(&json!({ "pass": pass, "up_to": vars, "failed": failed }));
            } else if pass {
                println!(
                    "pass (generators and constants generate the free algebra for n = 0..={vars})"
                );
            } else {
                println!("fail at n = {failed:?}");
            }
            Ok(if pass { PASS } else { FAIL })
        }
    }
}

fn run_models(cli: &Cli, cmd: &ModelsCommand) -> Result<ExitCode, String> {
    match cmd {
        ModelsCommand::Enumerate { k, dedup } => {
            let guard = effective_guard(cli.force, *k, MODEL_SIZE_GUARD, "model size");
            let mut models = enumerate_models_with_guard(*k, guard).map_err(guard_msg)?;
            if *dedup {
                models = dedup_isomorphic(&models);
            }
            if cli.json {
                emit(&json!({ "k": k, "count": models.len(), "models": models }));
            } else {
                println!("{} model(s) of size {k}", models.len());
                for (i, m) in models.iter().enumerate() {
                    println!("model {i}:");
                    print!("{m}");
                }
            }
            Ok(PASS)
        }
        ModelsCommand::Check { file } => {
            let model = read_model(file)?;
            let report = check_laws(&model);
            if cli.json {
                emit(&report);
            } else {
                println!("{report}");
            }
            Ok(if report.pass { PASS } else { FAIL })
        }
        ModelsCommand::Eval { file, term, assign } => {
            let model = read_model(file)?;
            let term = parse_named_term("term", term)?;
            let mut values = Vec::new();
            for token in assign.split(',') {
                let token = token.trim();
                if token.is_empty() {
                    continue;
                }
                values.push(
                    token.parse::<usize>().map_err(|_| {
                        format!("assignment entry {token:?} is not a carrier index")
                    })?,
                );
            }
            let assignment = Assignment::new(values);
            let result = eval_in_model(&term, &model, &assignment).map_err(|e| e.to_string())?;
            if cli.json {
                emit(&json!({ "value": result }));
            } else {
                println!("e{result}");
            }
            Ok(PASS)
        }
    }
}

fn read_model(file: &PathBuf) -> Result<FiniteModel, String> {
    let text =
        fs::read_to_string(file).map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid model in {}: {e}", file.display()))
}

fn print_element(cli: &Cli, e: &Element) {
    if cli.json {
        emit(e);
    } else {
        println!("{e}");
    }
}

fn emit(value: &impl serde::Serialize) {
    println!(
        "{}",
        serde_json::to_string(value).expect("serializable output")
    );
}
