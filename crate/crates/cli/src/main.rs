//! `drinfeld`: Frobenius data, module structure and endomorphism rings of
//! Drinfeld modules over finite fields, one prime at a time or in batches.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use drinfeld_core::charpoly::frobenius_charpoly;
use drinfeld_core::drinfeld::{DrinfeldConfig, GlobalDrinfeldModule};
use drinfeld_core::fq::{format_apoly, parse_apoly, set_factor_seed, APoly, FqContext};
use drinfeld_core::quadorder::CaseData;
use drinfeld_core::reciprocity::{emit_reports, reciprocity_auto};
use drinfeld_core::scan::{
    analyze_prime, emit_to, find_prime_with_index_divisor, primes_of_degree, scan_table, Format, IndexTarget,
    PrimeInvariants, ScanConfig,
};
use drinfeld_core::structure::elementary_divisors;
use drinfeld_core::{Error, Result};

#[derive(Parser)]
#[command(name = "drinfeld", version, about = "Drinfeld modules over finite fields")]
struct Cli {
    /// Seed for randomized factoring (results do not depend on it).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for batch commands.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct Module {
    /// JSON file such as {"p": 3, "phi_T": ["T", "T", "1"]}.
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct Single {
    #[command(flatten)]
    module: Module,
    /// Monic irreducible polynomial in T.
    #[arg(long)]
    prime: String,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Output file; stdout by default.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Format {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic polynomial of the Frobenius at a prime.
    Charpoly(Single),
    /// Elementary divisors of the reduction at a prime.
    Divisors(Single),
    /// Rank two: c_pi, c_phi and the maximal order at a prime.
    Endo(Single),
    /// Splitting of primes in the n-torsion field, checked both ways.
    Recip {
        #[command(flatten)]
        module: Module,
        #[arg(long)]
        modulus: String,
        #[arg(long, alias = "degree")]
        max_degree: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Rank two: table rows for all primes of the given degrees.
    Scan {
        #[command(flatten)]
        module: Module,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        min_degree: Option<usize>,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Keep primes with A[pi] equal to the endomorphism ring.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Rank two: first prime with n | b_1 and/or m | c_phi.
    Find {
        #[command(flatten)]
        module: Module,
        #[arg(long)]
        target_b1: Option<String>,
        #[arg(long)]
        target_cphi: Option<String>,
        #[arg(long, default_value_t = 14)]
        max_degree: usize,
    },
}

fn load(m: &Module) -> Result<GlobalDrinfeldModule> {
    DrinfeldConfig::from_json(&fs::read_to_string(&m.config)?)?.build()
}

fn poly(s: &str, k: &FqContext) -> Result<APoly> {
    parse_apoly(s, k)
}

/// Prints `v` with the field it was computed over attached.
fn print_json(mut v: Value, k: &FqContext) -> Result<()> {
    if let Value::Object(map) = &mut v {
        let mut field = json!({ "p": k.characteristic(), "n": k.degree() });
        if k.degree() > 1 {
            field["modulus"] = k.modulus_string().into();
        }
        map.insert("field".into(), field);
    }
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &v)?;
    writeln!(out)?;
    Ok(())
}

fn endo_json(inv: &PrimeInvariants, k: &Arc<FqContext>) -> Value {
    let f = |x: &APoly| format_apoly(x, k);
    let extra = match &inv.mo.data {
        CaseData::Odd { delta_max, .. } => json!({ "delta_max": f(delta_max) }),
        CaseData::EvenInsep { s, c } => json!({ "s": f(s), "c": f(c) }),
        CaseData::EvenSep { different, .. } => json!({ "different": f(different) }),
    };
    json!({
        "prime": f(&inv.prime),
        "a": f(&inv.fd.trace(k)),
        "epsilon": k.format(inv.fd.epsilon),
        "c_pi": f(&inv.endo.c_pi),
        "c_phi": f(&inv.endo.c_phi),
        "b": f(&inv.endo.b),
        "case": inv.mo.case(),
        "extra": extra,
        "generator_degree": inv.endo.generator.degree(),
    })
}

fn write_out(path: Option<&Path>, job: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut f = io::BufWriter::new(fs::File::create(p)?);
            job(&mut f)?;
            f.flush()?;
            Ok(())
        }
        None => job(&mut io::stdout().lock()),
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(seed) = cli.seed {
        set_factor_seed(seed);
    }
    match cli.cmd {
        Command::Charpoly(s) => {
            let phi = load(&s.module)?;
            let k = phi.base();
            let fd = frobenius_charpoly(&phi.reduce_at(&poly(&s.prime, k)?)?)?;
            print_json(serde_json::to_value(fd.to_json(k))?, k)
        }
        Command::Divisors(s) => {
            let phi = load(&s.module)?;
            let k = phi.base();
            let red = phi.reduce_at(&poly(&s.prime, k)?)?;
            let fd = frobenius_charpoly(&red)?;
            let prof = elementary_divisors(&red, &fd)?;
            print_json(serde_json::to_value(prof.to_json(red.ctx().prime(), k))?, k)
        }
        Command::Endo(s) => {
            let phi = load(&s.module)?;
            let k = phi.base().clone();
            let inv = analyze_prime(&phi, &poly(&s.prime, &k)?)?;
            print_json(endo_json(&inv, &k), &k)
        }
        Command::Recip { module, modulus, max_degree, output } => {
            let phi = load(&module)?;
            let k = phi.base().clone();
            let n = poly(&modulus, &k)?;
            if n.is_zero() {
                return Err(Error::InvalidInput("modulus is zero".into()));
            }
            let mut reports = Vec::new();
            for d in 1..=max_degree {
                for p in primes_of_degree(&k, d) {
                    if !phi.has_good_reduction(&p) || p.divides(&n, &k) {
                        log::info!("skipping {}", format_apoly(&p, &k));
                        continue;
                    }
                    reports.push(reciprocity_auto(&phi, &p, &n)?);
                }
            }
            if let Some(bad) = reports.iter().find(|r| !r.sides_agree() || !r.divisor_formulas_hold()) {
                return Err(Error::Invariant(format!(
                    "criteria disagree at {}",
                    format_apoly(&bad.prime, &k)
                )));
            }
            write_out(output.out.as_deref(), |w| emit_reports(&reports, &k, output.format.into(), w))
        }
        Command::Scan { module, degree, min_degree, max_degree, all, output } => {
            let phi = load(&module)?;
            let (lo, hi) = match (degree, min_degree, max_degree) {
                (Some(d), None, None) => (d, d),
                (None, lo, Some(hi)) => (lo.unwrap_or(1), hi),
                _ => {
                    return Err(Error::InvalidInput(
                        "give --degree, or --max-degree with optional --min-degree".into(),
                    ))
                }
            };
            let cfg = ScanConfig { d_min: lo, d_max: hi, all, threads: cli.threads };
            let rows = scan_table(&phi, &cfg)?;
            emit_to(&rows, phi.base(), output.format.into(), output.out.as_deref())
        }
        Command::Find { module, target_b1, target_cphi, max_degree } => {
            let phi = load(&module)?;
            let k = phi.base().clone();
            let target = IndexTarget {
                b1: target_b1.map(|s| poly(&s, &k)).transpose()?,
                c_phi: target_cphi.map(|s| poly(&s, &k)).transpose()?,
            };
            let cfg = ScanConfig { d_min: 1, d_max: max_degree, all: true, threads: cli.threads };
            let inv = find_prime_with_index_divisor(&phi, &target, &cfg)?;
            print_json(endo_json(&inv, &k), &k)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
