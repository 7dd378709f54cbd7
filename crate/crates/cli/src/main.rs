use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use plt_core::diagram::{diagram_from_json, diagram_to_json, to_dot, DiagramJson};
use plt_core::interp::interp_closed;
use plt_core::lambda::{
    normalize_counting, parse_program, typecheck, LambdaError, Mode, Program, Signature, TypeAst,
    DEFAULT_FUEL,
};
use plt_core::registers::{machine_to_lambda, run_machine, RegisterMachine, StrFunction};
use plt_core::two_way::{
    check_equiv_with_fuel, compile, from_table, lambda_transducer_of, parse_table,
    str_function_from_program, Convention, LambdaTransducer, TransducerJson, TwoWayError,
    TwoWayTransducer,
};

#[derive(Debug, Error)]
enum CliError {
    /// Bad invocation, unreadable or unparsable input. Exit status 2.
    #[error("{0}")]
    Usage(String),
    /// Type errors, validation failures, counterexamples. Exit status 1.
    #[error("{0}")]
    Domain(String),
}

type CliResult<T> = Result<T, CliError>;

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn domain(e: impl ToString) -> CliError {
    CliError::Domain(e.to_string())
}

fn lambda_err(e: LambdaError) -> CliError {
    match e {
        LambdaError::Parse { .. } | LambdaError::DuplicateDefinition { .. } => usage(e),
        other => domain(other),
    }
}

fn two_way_err(e: TwoWayError) -> CliError {
    match e {
        TwoWayError::Lambda(l) => lambda_err(l),
        TwoWayError::Format(_) => usage(e),
        other => domain(other),
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "plt",
    version,
    about = "Planar affine λ-terms, transition diagrams and two-way transducers"
)]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct TermArgs {
    /// A `.lam` program.
    file: PathBuf,
    #[arg(long, default_value = "main")]
    term: String,
    /// Type of the term; defaults to the `type` declaration named like the term.
    #[arg(long = "type")]
    ty: Option<String>,
    #[arg(long, default_value = "planar")]
    mode: Mode,
}

#[derive(clap::Args, Debug)]
struct Sampling {
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long = "max-len", default_value_t = 16)]
    max_len: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RenderFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    Pp,
    #[value(alias = "eps_pm")]
    Eps,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Type check a definition.
    Typecheck(TermArgs),
    /// β-normalize a definition.
    Normalize {
        file: PathBuf,
        #[arg(long, default_value = "main")]
        term: String,
    },
    /// Interpret a purely affine definition as a diagram.
    Interp {
        #[command(flatten)]
        args: TermArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: RenderFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compile a λ-transducer or string function to a transducer JSON.
    Compile {
        #[command(flatten)]
        args: TermArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a transducer JSON on a word.
    Run {
        transducer: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Run a λ-transducer or string function by normalization.
    RunLambda {
        #[command(flatten)]
        args: TermArgs,
        #[arg(long)]
        word: String,
    },
    /// Run a register machine JSON on a word.
    RunMachine {
        machine: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Read a `.tbl` transition table into a transducer JSON.
    FromTable {
        table: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Translate a register machine JSON into a `.lam` λ-transducer.
    FromRegisters {
        machine: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Change the convention of a transducer JSON.
    Convert {
        transducer: PathBuf,
        #[arg(long, value_enum)]
        to: ConventionArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare a λ-transducer with a transducer JSON on sampled words.
    CheckEquiv {
        #[command(flatten)]
        args: TermArgs,
        transducer: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Render a transducer or diagram JSON as DOT or canonical JSON.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        format: RenderFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn fuel() -> CliResult<u64> {
    match std::env::var("PLT_FUEL") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("PLT_FUEL must be a number, got '{v}'"))),
        Err(_) => Ok(DEFAULT_FUEL),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> CliResult<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match output {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).expect("JSON values serialize")
}

fn load_program(path: &Path) -> CliResult<Program> {
    parse_program(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_transducer(path: &Path) -> CliResult<TwoWayTransducer> {
    let j: TransducerJson = serde_json::from_str(&read(path)?)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    TwoWayTransducer::from_json(&j).map_err(two_way_err)
}

fn load_machine(path: &Path) -> CliResult<RegisterMachine> {
    read(path)?.parse().map_err(domain)
}

fn selected_type(p: &Program, args: &TermArgs) -> CliResult<TypeAst> {
    match &args.ty {
        Some(text) => p.parse_type(text).map_err(usage),
        None => p.type_decl(&args.term).cloned().ok_or_else(|| {
            usage(format!(
                "no type given for '{}': pass --type or declare 'type {}'",
                args.term, args.term
            ))
        }),
    }
}

/// The output alphabet of a string function type, otherwise every letter
/// declared by a `sig`.
fn signature_for(p: &Program, ty: &TypeAst) -> CliResult<Signature> {
    if let Some((_, _, output)) = ty.as_string_function() {
        return Signature::new(output).map_err(usage);
    }
    let mut letters = Vec::new();
    for (_, s) in p.signatures() {
        for &c in s.letters() {
            if !letters.contains(&c) {
                letters.push(c);
            }
        }
    }
    Signature::new(letters).map_err(usage)
}

fn selected_term<'p>(p: &'p Program, name: &str) -> CliResult<&'p plt_core::lambda::Term> {
    p.term(name)
        .ok_or_else(|| usage(format!("no definition '{name}'")))
}

enum Source {
    Transducer(LambdaTransducer),
    Function(StrFunction),
}

/// A `.lam` file with `def output` is a λ-transducer; otherwise the selected
/// definition must be a string function.
fn load_source(args: &TermArgs) -> CliResult<Source> {
    let p = load_program(&args.file)?;
    if let Some(l) = LambdaTransducer::from_program(&p, args.mode).map_err(two_way_err)? {
        return Ok(Source::Transducer(l));
    }
    let f = str_function_from_program(&p, &args.term, args.ty.as_deref()).map_err(two_way_err)?;
    f.check(args.mode).map_err(lambda_err)?;
    Ok(Source::Function(f))
}

fn load_lambda_transducer(args: &TermArgs) -> CliResult<LambdaTransducer> {
    match load_source(args)? {
        Source::Transducer(l) => Ok(l),
        Source::Function(f) => lambda_transducer_of(&f, args.mode).map_err(two_way_err),
    }
}

fn show_output(json: bool, word: &str, output: Option<&str>) {
    if json {
        println!("{}", json!({ "word": word, "output": output }));
    } else {
        println!("{}", output.unwrap_or("⊥"));
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let json = cli.json;
    match cli.command {
        Command::Typecheck(args) => {
            let p = load_program(&args.file)?;
            let ty = selected_type(&p, &args)?;
            let sig = signature_for(&p, &ty)?;
            let expanded = ty.expand();
            let j = typecheck(selected_term(&p, &args.term)?, &expanded, &sig, args.mode)
                .map_err(lambda_err)?;
            if json {
                let affine = j.derivation.is_purely_affine();
                let v = json!({ "term": args.term, "type": expanded.to_string(), "mode": args.mode.to_string(), "purely_affine": affine });
                println!("{v}");
            } else {
                println!("{} : {}", args.term, expanded);
            }
        }
        Command::Normalize { file, term } => {
            let p = load_program(&file)?;
            let (nf, steps) =
                normalize_counting(selected_term(&p, &term)?, fuel()?).map_err(lambda_err)?;
            if json {
                println!(
                    "{}",
                    json!({ "term": term, "normal_form": nf.to_string(), "steps": steps })
                );
            } else {
                println!("{nf}");
            }
        }
        Command::Interp {
            args,
            format,
            output,
        } => {
            let p = load_program(&args.file)?;
            let ty = selected_type(&p, &args)?;
            let sig = signature_for(&p, &ty)?;
            let d = interp_closed(
                selected_term(&p, &args.term)?,
                &ty.expand(),
                &sig,
                args.mode,
            )
            .map_err(domain)?;
            let text = match format {
                RenderFormat::Json => pretty(&diagram_to_json(
                    &d,
                    &sig.letters().iter().collect::<String>(),
                )),
                RenderFormat::Dot => to_dot(&d, &args.term),
            };
            emit(&text, output.as_deref())?;
        }
        Command::Compile { args, output } => {
            let t = compile(&load_lambda_transducer(&args)?).map_err(two_way_err)?;
            emit(&pretty(&t.to_json()), output.as_deref())?;
        }
        Command::Run { transducer, word } => {
            let t = load_transducer(&transducer)?;
            let out = t.run_word(&word).map_err(two_way_err)?;
            show_output(json, &word, out.as_deref());
        }
        Command::RunLambda { args, word } => {
            let fuel = fuel()?;
            let out = match load_source(&args)? {
                Source::Transducer(l) => {
                    l.run_oracle_with_fuel(&word, fuel).map_err(two_way_err)?
                }
                Source::Function(f) => f.apply_with_fuel(&word, fuel).map_err(lambda_err)?,
            };
            show_output(json, &word, Some(&out));
        }
        Command::RunMachine { machine, word } => {
            let out = run_machine(&load_machine(&machine)?, &word).map_err(domain)?;
            show_output(json, &word, Some(&out));
        }
        Command::FromTable { table, output } => {
            let tbl = parse_table(&read(&table)?)
                .map_err(|e| usage(format!("{}: {e}", table.display())))?;
            let t = from_table(&tbl).map_err(two_way_err)?;
            emit(&pretty(&t.to_json()), output.as_deref())?;
        }
        Command::FromRegisters { machine, output } => {
            let l = machine_to_lambda(&load_machine(&machine)?).map_err(domain)?;
            emit(&l.to_lam(), output.as_deref())?;
        }
        Command::Convert {
            transducer,
            to,
            output,
        } => {
            let to = match to {
                ConventionArg::Pp => Convention::Pp,
                ConventionArg::Eps => Convention::EpsPm,
            };
            let t = plt_core::two_way::convert_convention(&load_transducer(&transducer)?, to)
                .map_err(two_way_err)?;
            emit(&pretty(&t.to_json()), output.as_deref())?;
        }
        Command::CheckEquiv {
            args,
            transducer,
            sampling,
        } => {
            let l = load_lambda_transducer(&args)?;
            let t = load_transducer(&transducer)?;
            let report = check_equiv_with_fuel(
                &l,
                &t,
                sampling.samples,
                sampling.max_len,
                sampling.seed,
                fuel()?,
            )
            .map_err(two_way_err)?;
            let cx = report.counterexample.as_ref();
            if json {
                let v = json!({
                    "checked": report.checked,
                    "passed": report.passed(),
                    "counterexample": cx.map(|c| json!({ "word": c.word, "expected": c.expected, "found": c.found })),
                });
                println!("{v}");
            } else if let Some(c) = cx {
                println!(
                    "counterexample on {:?}: λ-transducer gives {:?}, transducer gives {}",
                    c.word,
                    c.expected,
                    c.found
                        .as_ref()
                        .map_or("⊥".to_string(), |f| format!("{f:?}"))
                );
            } else {
                println!("ok: {} words agree", report.checked);
            }
            if let Some(c) = cx {
                return Err(CliError::Domain(format!("counterexample on {:?}", c.word)));
            }
        }
        Command::Render {
            file,
            format,
            output,
        } => {
            let text = read(&file)?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let rendered = if value.get("steps").is_some() {
                let j: TransducerJson = serde_json::from_value(value).map_err(usage)?;
                let t = TwoWayTransducer::from_json(&j).map_err(two_way_err)?;
                match format {
                    RenderFormat::Json => pretty(&t.to_json()),
                    RenderFormat::Dot => t.to_dot(),
                }
            } else {
                let j: DiagramJson = serde_json::from_value(value).map_err(usage)?;
                let (d, alphabet) = diagram_from_json(&j).map_err(domain)?;
                match format {
                    RenderFormat::Json => pretty(&diagram_to_json(&d, &alphabet)),
                    RenderFormat::Dot => to_dot(&d, "diagram"),
                }
            };
            emit(&rendered, output.as_deref())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Domain(_) => ExitCode::from(1),
                CliError::Usage(_) => ExitCode::from(2),
            }
        }
    }
}
