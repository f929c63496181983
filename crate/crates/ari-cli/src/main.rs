use ari_kernel::arith::{apply, AxiomTable};
use ari_kernel::calculus::Mode;
use ari_kernel::code::{parse_code, Code};
use ari_kernel::corpus;
use ari_kernel::encode::{decode, encode_formula, encode_termoid, Kind};
use ari_kernel::script::{audit, check_script, parse_script, AuditReport, CheckOptions, LinkTarget, Script};
use ari_kernel::syntax::{parse_formula, parse_termoid, Func};
use clap::{Parser, Subcommand, ValueEnum};
use std::process::ExitCode;

const EXIT_DEDUCTION: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "ari", version, about = "Encode, evaluate and check proofs of the arithmetic system Ari")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Logic used for checking, overriding the script header
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Maximum number of decimal digits materialized for a single value
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    digit_budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Reject every generalization over a variable free in an active hypothesis
    #[arg(long, global = true)]
    strict_capture: bool,
    /// Substitute a checked script for a hypothesis or a line: NAME=SCRIPT
    #[arg(long = "link", global = true, value_name = "NAME=SCRIPT")]
    links: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the code of a formula or termoid
    Encode { text: String },
    /// Print the object a code denotes
    Decode {
        code: String,
        #[arg(long, value_enum, default_value_t = KindArg::Auto)]
        kind: KindArg,
    },
    /// Apply a function symbol to codes
    Eval { function: String, args: Vec<String> },
    /// Check one script (a path or corpus:NAME)
    Check { script: String },
    /// Check scripts with linkage applied to the first one
    Audit {
        #[arg(required = true)]
        scripts: Vec<String>,
    },
    /// Inspect the bundled corpus
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusAction {
    List,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Open,
    Closed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    #[value(alias = "structured")]
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Auto,
    Termoid,
    Formula,
    Deduction,
}

fn load(spec: &str) -> Result<Script, String> {
    match spec.strip_prefix("corpus:") {
        Some(name) => corpus::load_corpus(name).map_err(|e| e.to_string()),
        None => {
            let text = std::fs::read_to_string(spec).map_err(|e| format!("{spec}: {e}"))?;
            parse_script(&text).map_err(|e| format!("{spec}: {e}"))
        }
    }
}

fn options(cli: &Cli) -> CheckOptions {
    CheckOptions {
        mode: cli.mode.map(|m| match m {
            ModeArg::Open => Mode::Open,
            ModeArg::Closed => Mode::Closed,
        }),
        budget: cli.digit_budget as usize,
        strict_capture: cli.strict_capture,
        ..CheckOptions::default()
    }
}

fn emit(report: &AuditReport, format: Format) {
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", report.to_json()),
    }
}

fn status(reports: &[AuditReport]) -> u8 {
    if reports.iter().all(AuditReport::is_proof) {
        0
    } else {
        EXIT_DEDUCTION
    }
}

fn run(cli: &Cli) -> Result<u8, String> {
    let budget = cli.digit_budget as usize;
    match &cli.command {
        Command::Encode { text } => {
            let code = match parse_formula(text) {
                Ok(f) => encode_formula(&f).map_err(|e| e.to_string())?,
                Err(fe) => {
                    let t = parse_termoid(text).map_err(|te| format!("not a formula ({fe}) nor a termoid ({te})"))?;
                    encode_termoid(&t).map_err(|e| e.to_string())?
                }
            };
            print_code(&code, budget);
            Ok(0)
        }
        Command::Decode { code, kind } => {
            let c = parse_code(code)?;
            let kind = match kind {
                KindArg::Auto => Kind::Auto,
                KindArg::Termoid => Kind::Termoid,
                KindArg::Formula => Kind::Formula,
                KindArg::Deduction => Kind::Deduction,
            };
            let obj = decode(&c, kind).map_err(|e| e.to_string())?;
            println!("{obj}");
            Ok(0)
        }
        Command::Eval { function, args } => {
            let f = Func::from_name(function).ok_or_else(|| format!("unknown function symbol '{function}'"))?;
            if args.len() != f.arity() as usize {
                return Err(format!("{function} takes {} arguments", f.arity()));
            }
            let vals = args.iter().map(|a| parse_code(a)).collect::<Result<Vec<_>, _>>()?;
            let out = apply(f, &vals, &AxiomTable::full()).map_err(|e| e.to_string())?;
            print_code(&out, budget);
            Ok(0)
        }
        Command::Check { script } => {
            let s = load(script)?;
            let mut opts = options(cli);
            opts.links = Vec::new();
            let r = if cli.links.is_empty() { check_script(&s, &opts) } else { audit_with_links(cli, &s)? };
            emit(&r, cli.format);
            Ok(status(std::slice::from_ref(&r)))
        }
        Command::Audit { scripts } => {
            let mut reports = Vec::new();
            for (i, spec) in scripts.iter().enumerate() {
                let s = load(spec)?;
                let r = if i == 0 { audit_with_links(cli, &s)? } else { check_script(&s, &options(cli)) };
                emit(&r, cli.format);
                reports.push(r);
            }
            Ok(status(&reports))
        }
        Command::Corpus { action: CorpusAction::List } => {
            for n in corpus::names() {
                println!("{n}");
            }
            Ok(0)
        }
    }
}

fn audit_with_links(cli: &Cli, main: &Script) -> Result<AuditReport, String> {
    let mut linked = Vec::new();
    for l in &cli.links {
        let (name, spec) = l.split_once('=').ok_or_else(|| format!("--link expects NAME=SCRIPT, got '{l}'"))?;
        let spec = if spec.ends_with(".ari") || spec.contains('/') || spec.starts_with("corpus:") {
            spec.to_string()
        } else {
            format!("corpus:{spec}")
        };
        linked.push((LinkTarget::parse(name), load(&spec)?));
    }
    let refs: Vec<(LinkTarget, &Script)> = linked.iter().map(|(t, s)| (t.clone(), s)).collect();
    Ok(audit(main, &refs, &options(cli)))
}

fn print_code(c: &Code, budget: usize) {
    match c.materialize(budget) {
        Ok(n) => println!("{n}"),
        Err(e) => println!("{c}\n# value exceeds the digit budget; at least {} digits", e.digits_lower_bound),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
