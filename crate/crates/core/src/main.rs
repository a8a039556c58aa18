use std::fs;
use std::io::{self, Read as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use hamdev::deviation::{analyze_deviation, exact, is_bounded, threshold, DEFAULT_MAX_CONFIGS};
use hamdev::error::EngineError;
use hamdev::format::{parse_cnf, parse_digraph, parse_nft, serialize_nft};
use hamdev::gadgets::{gen_3sat, gen_family, gen_reach_bounded, gen_reach_threshold, gen_sat_unsat, GadgetError, GadgetInstance};
use hamdev::nft::{stats, Nft};
use hamdev::normalize::{atomize, trim};
use hamdev::oracle::{brute_force_deviation, domains_equal_upto, OracleError};
use hamdev::reductions::{compare, CompareMode};
use hamdev::report::{render_text, OracleReport, Report};

const TRUE: u8 = 0;
const FALSE: u8 = 1;
const USAGE: u8 = 2;
const RESOURCE: u8 = 3;

/// Hamming deviation of finite-state transducers.
#[derive(Parser, Debug)]
#[command(name = "hamdev", version)]
struct Cli {
    /// Maximum number of alignment configurations the engine may build.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_CONFIGS)]
    max_configs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report length preservation, deviation, bounds and a witness run.
    Analyze {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// One JSON object per file.
        #[arg(long)]
        json: bool,
    },
    /// Exit 0 iff the deviation is finite.
    Bounded { file: PathBuf },
    /// Exit 0 iff the deviation is at most K.
    Threshold {
        file: PathBuf,
        #[arg(value_parser = parse_k)]
        k: BigUint,
    },
    /// Exit 0 iff the deviation is exactly K.
    Exact {
        file: PathBuf,
        #[arg(value_parser = parse_k)]
        k: BigUint,
    },
    /// Decide a comparison problem for two transducers with equal domains.
    Compare {
        #[command(subcommand)]
        mode: CompareCommand,
    },
    /// Generate a gadget instance together with its expected answer.
    Gen(GenArgs),
    /// Brute-force the largest distance over bounded runs.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        max_run_len: usize,
        /// Defaults to 2 * max-run-len * lmax.
        #[arg(long)]
        max_pair_len: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Print the trimmed transducer.
    Trim { file: PathBuf },
    /// Print an equivalent transducer whose transitions read at most one letter.
    Atomize { file: PathBuf },
}

#[derive(Args, Debug)]
struct Pair {
    file1: PathBuf,
    file2: PathBuf,
    /// Refuse to answer unless the domains agree on all inputs up to this length.
    #[arg(long, value_name = "L")]
    check_domains: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum CompareCommand {
    Bounded {
        #[command(flatten)]
        pair: Pair,
    },
    Threshold {
        #[arg(value_parser = parse_k)]
        k: BigUint,
        #[command(flatten)]
        pair: Pair,
    },
    Exact {
        #[arg(value_parser = parse_k)]
        k: BigUint,
        #[command(flatten)]
        pair: Pair,
    },
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Write the transducer here and the expected answer to FILE.truth.
    #[arg(short, long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    gadget: Gadget,
}

#[derive(Subcommand, Debug)]
enum Gadget {
    /// Quadratic family T_n.
    Family { n: usize },
    /// Bounded iff t is unreachable from s.
    Reach { graph: PathBuf },
    /// Deviation at most K iff t is unreachable from s.
    ReachK { graph: PathBuf, k: usize },
    /// Deviation above n(m+1)-1 iff the formula is satisfiable.
    #[command(name = "3sat")]
    ThreeSat { cnf: PathBuf },
    /// Deviation exactly k1*k2+k2-1 iff the first formula is satisfiable and the second is not.
    SatUnsat { cnf1: PathBuf, cnf2: PathBuf },
}

/// Decimal, or binary with a `0b` prefix.
fn parse_k(s: &str) -> Result<BigUint, String> {
    let parsed = match s.strip_prefix("0b") {
        Some(bits) => BigUint::parse_bytes(bits.as_bytes(), 2),
        None => BigUint::parse_bytes(s.as_bytes(), 10),
    };
    parsed.ok_or_else(|| format!("'{s}' is not a natural number (decimal or 0b-binary)"))
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: USAGE, message: message.into() }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        let code = match e {
            EngineError::BudgetExceeded { .. } | EngineError::Overflow => RESOURCE,
            _ => USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<GadgetError> for Failure {
    fn from(e: GadgetError) -> Self {
        let code = if matches!(e, GadgetError::Oracle(OracleError::ScaleExceeded { .. })) { RESOURCE } else { USAGE };
        Failure { code, message: e.to_string() }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_nft(path: &Path) -> Result<Nft, Failure> {
    parse_nft(&read_text(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn verdict(answer: bool) -> u8 {
    println!("{}", if answer { "TRUE" } else { "FALSE" });
    if answer {
        TRUE
    } else {
        FALSE
    }
}

fn analyze_one(path: &Path, json: bool, max_configs: usize) -> Result<String, Failure> {
    let t = load_nft(path)?;
    let result = analyze_deviation(&t, max_configs)?;
    if json {
        let line = serde_json::to_string(&Report::new(&result)).expect("report serializes");
        Ok(format!("{line}\n"))
    } else {
        Ok(render_text(&t, &result))
    }
}

fn analyze_files(files: &[PathBuf], json: bool, max_configs: usize) -> u8 {
    let results: Vec<Result<String, Failure>> = std::thread::scope(|scope| {
        let handles: Vec<_> =
            files.iter().map(|f| scope.spawn(move || analyze_one(f, json, max_configs))).collect();
        handles.into_iter().map(|h| h.join().expect("analysis thread panicked")).collect()
    });
    let mut code = TRUE;
    for (i, (file, result)) in files.iter().zip(results).enumerate() {
        match result {
            Ok(text) => {
                if !json && files.len() > 1 {
                    if i > 0 {
                        println!();
                    }
                    println!("file: {}", file.display());
                }
                print!("{text}");
            }
            Err(f) => {
                eprintln!("error: {}", f.message);
                code = code.max(f.code);
            }
        }
    }
    code
}

fn run_compare(mode: CompareCommand, max_configs: usize) -> Result<u8, Failure> {
    let (mode, pair) = match mode {
        CompareCommand::Bounded { pair } => (CompareMode::Bounded, pair),
        CompareCommand::Threshold { k, pair } => (CompareMode::Threshold(k), pair),
        CompareCommand::Exact { k, pair } => (CompareMode::Exact(k), pair),
    };
    let t1 = load_nft(&pair.file1)?;
    let t2 = load_nft(&pair.file2)?;
    if let Some(len) = pair.check_domains {
        if !domains_equal_upto(&t1, &t2, len) {
            return Err(Failure::usage(format!("domains differ on inputs of length at most {len}")));
        }
    }
    Ok(verdict(compare(&t1, &t2, &mode, max_configs)?))
}

fn run_gen(args: GenArgs) -> Result<u8, Failure> {
    let graph = |p: &Path| parse_digraph(&read_text(p)?).map_err(|e| Failure::usage(format!("{}: {e}", p.display())));
    let cnf = |p: &Path| parse_cnf(&read_text(p)?).map_err(|e| Failure::usage(format!("{}: {e}", p.display())));
    let instance: GadgetInstance = match &args.gadget {
        Gadget::Family { n } => gen_family(*n)?,
        Gadget::Reach { graph: g } => gen_reach_bounded(&graph(g)?)?,
        Gadget::ReachK { graph: g, k } => gen_reach_threshold(&graph(g)?, *k)?,
        Gadget::ThreeSat { cnf: f } => gen_3sat(&cnf(f)?)?,
        Gadget::SatUnsat { cnf1, cnf2 } => gen_sat_unsat(&cnf(cnf1)?, &cnf(cnf2)?)?,
    };
    let truth = format!("# truth: {} {}\n", instance.provenance, instance.truth);
    let text = serialize_nft(&instance.nft);
    match args.output {
        Some(path) => {
            let mut sidecar = path.clone().into_os_string();
            sidecar.push(".truth");
            fs::write(&path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            fs::write(&sidecar, truth).map_err(|e| Failure::usage(format!("{}: {e}", sidecar.to_string_lossy())))?;
        }
        None => print!("{text}{truth}"),
    }
    Ok(TRUE)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let max_configs = cli.max_configs;
    match cli.command {
        Command::Analyze { files, json } => Ok(analyze_files(&files, json, max_configs)),
        Command::Bounded { file } => Ok(verdict(is_bounded(&load_nft(&file)?, max_configs)?)),
        Command::Threshold { file, k } => Ok(verdict(threshold(&load_nft(&file)?, &k, max_configs)?)),
        Command::Exact { file, k } => Ok(verdict(exact(&load_nft(&file)?, &k, max_configs)?)),
        Command::Compare { mode } => run_compare(mode, max_configs),
        Command::Gen(args) => run_gen(args),
        Command::Oracle { file, max_run_len, max_pair_len, json } => {
            let t = load_nft(&file)?;
            let pair_len = max_pair_len.unwrap_or(2 * max_run_len * stats(&t).lmax as usize);
            let r = brute_force_deviation(&t, max_run_len, pair_len);
            if json {
                println!("{}", serde_json::to_string(&OracleReport::from(&r)).expect("report serializes"));
            } else {
                println!("max-seen: {}", r.max_seen);
                println!("saturated: {}", r.saturated);
                if let Some(w) = &r.witness {
                    let parts: Vec<String> = w.0.iter().map(usize::to_string).collect();
                    println!("witness: [{}]", parts.join(" "));
                }
            }
            Ok(TRUE)
        }
        Command::Trim { file } => {
            print!("{}", serialize_nft(&trim(&load_nft(&file)?)));
            Ok(TRUE)
        }
        Command::Atomize { file } => {
            print!("{}", serialize_nft(&atomize(&load_nft(&file)?)));
            Ok(TRUE)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
