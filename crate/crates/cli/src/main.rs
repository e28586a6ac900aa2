use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcomb_core::verify::{self, Check, Field, RunConfig, PRIME_MENU};
use qcomb_core::Error;

/// Exact verification of weight-function identities at seeded random points.
///
/// Exit codes: 0 verified, 1 falsified or condition not satisfied, 2 usage
/// error, 3 internal or degenerate-input error.
#[derive(Parser, Debug)]
#[command(name = "qcomb", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run one check.
    Verify(VerifyArgs),
    /// Run every `[[run]]` entry of a TOML manifest.
    Suite {
        manifest: PathBuf,
        /// Write the aggregate report here (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Re-run the configuration embedded in a report and compare.
    Replay {
        report: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// List the available checks.
    List,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// One of: jing id1 id2 pp mn detq deta idp1 idp2 xx xt detprod rll kbi
    /// bc1 bc2 singular resI submodule theta.
    check: String,
    #[arg(long, default_value_t = 2)]
    ell: usize,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    i: usize,
    #[arg(long, default_value_t = 2)]
    j: usize,
    /// Series truncation order K.
    #[arg(long, default_value_t = 8)]
    order: usize,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, env = "QCOMB_SEED", default_value_t = 1)]
    seed: u64,
    /// `rational` or `prime`.
    #[arg(long, default_value = "rational")]
    field: String,
    /// Prime modulus for `--field prime`.
    #[arg(long)]
    prime: Option<u64>,
    /// Bound on sampled numerators and denominators.
    #[arg(long, default_value_t = 1000)]
    bound: u64,
    /// Perturb one coefficient so the check must fail.
    #[arg(long)]
    mutate: bool,
    /// Do not impose the identity's hypothesis.
    #[arg(long)]
    lift_condition: bool,
    /// Basis depth for `rll`.
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// Word length for `submodule` (default ell + 2).
    #[arg(long)]
    word_len: Option<usize>,
    /// Write the report here (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
}

impl VerifyArgs {
    fn config(&self) -> Result<RunConfig, Error> {
        let field = match (self.field.as_str(), self.prime) {
            ("rational", None) => Field::Rational,
            ("rational", Some(_)) => return Err(Error::Usage("--prime needs --field prime".into())),
            ("prime", Some(p)) => format!("prime:{p}").parse()?,
            (other, None) => other.parse()?,
            (other, Some(_)) => return Err(Error::Usage(format!("--prime conflicts with --field {other}"))),
        };
        Ok(RunConfig {
            check: self.check.parse()?,
            ell: self.ell,
            n: self.n,
            i: self.i,
            j: self.j,
            order: self.order,
            trials: self.trials,
            seed: self.seed,
            field,
            bound: self.bound,
            mutate: self.mutate,
            lift_condition: self.lift_condition,
            depth: self.depth,
            word_len: self.word_len,
        })
    }
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match path {
        None => Ok(()),
        Some(p) if p.as_os_str() == "-" => {
            println!("{text}");
            Ok(())
        }
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Usage(_) => 2,
        _ => 3,
    }
}

fn summary(r: &verify::Report) -> String {
    let c = &r.config;
    let mut line = format!(
        "{} ell={} n={} i={} j={} field={} trials={}: {}",
        c.check,
        c.ell,
        c.n,
        c.i,
        c.j,
        c.field,
        c.trials,
        r.verdict.as_str()
    );
    if let Some(e) = &r.error {
        line.push_str(&format!(" ({e})"));
    }
    line
}

fn main_inner(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::List => {
            for c in Check::ALL {
                println!("{c}");
            }
            println!("primes: {PRIME_MENU:?}");
            Ok(0)
        }
        Cmd::Verify(args) => {
            let report = verify::run(&args.config()?)?;
            eprintln!("{}", summary(&report));
            write_out(&args.json, &report.to_json())?;
            Ok(report.verdict.exit_code() as u8)
        }
        Cmd::Suite { manifest, json } => {
            let suite = verify::run_suite(&read(&manifest)?)?;
            for e in &suite.entries {
                let what = e
                    .report
                    .as_ref()
                    .map(summary)
                    .unwrap_or_else(|| format!("{}: {}", e.check.as_deref().unwrap_or("?"), e.verdict.as_str()));
                match &e.error {
                    Some(err) if e.report.is_none() => eprintln!("[{}] {what} ({err})", e.index),
                    _ => eprintln!("[{}] {what}", e.index),
                }
            }
            eprintln!("suite: {}", suite.verdict.as_str());
            write_out(&json, &suite.to_json())?;
            Ok(suite.exit_code() as u8)
        }
        Cmd::Replay { report, json } => {
            let old = verify::Report::from_json(&read(&report)?)?;
            let (fresh, same) = verify::replay(&old)?;
            eprintln!("{}", summary(&fresh));
            eprintln!("replay {}", if same { "identical" } else { "DIFFERS" });
            write_out(&json, &fresh.to_json())?;
            Ok(if same { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("qcomb: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
