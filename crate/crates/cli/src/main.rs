//! `patfrac`: series, closed forms, brute-force tables and identity checks.
//!
//! Exit codes: 0 success, 1 verification or reconstruction failure,
//! 2 invalid arguments.

mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use patfrac::genfun::{self, SolverConfig};
use patfrac::oracle::{self, Enumeration, JointTable, PatternTable};
use patfrac::ratrec::{self, DEFAULT_GUARD};
use patfrac::{verify, Strategy, TriSeries, ZSeries};

use output::{Format, Record};

#[derive(Parser, Debug)]
#[command(
    name = "patfrac",
    version,
    about = "123-patterns in 132-avoiding permutations, exactly"
)]
struct Cli {
    /// Worker threads for parallel loops (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print P, Q or B as a truncated series
    Series {
        target: Target,
        #[arg(long, default_value_t = 10)]
        nz: u32,
        #[arg(long, default_value_t = 4)]
        nq: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Keep the rising-pair variable t instead of setting t = 1
        #[arg(long)]
        keep_t: bool,
    },
    /// Closed form of AR(r, z), the 132-avoiders with exactly r rising triples
    Ar(RationalArgs),
    /// Closed form of Aaron(r, z), one 132-pattern and exactly r rising triples
    Aaron(RationalArgs),
    /// Brute-force count tables
    Table {
        which: Which,
        #[arg(long, default_value_t = 6)]
        nmax: usize,
        /// Compare every cell against the generating function
        #[arg(long)]
        check: bool,
        /// Allow nmax above the enumeration cap
        #[arg(long)]
        allow_large: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Evaluate the finite continued fraction for P
    Contfrac {
        #[arg(long, default_value_t = 10)]
        nz: u32,
        #[arg(long, default_value_t = 4)]
        nq: u32,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        keep_t: bool,
    },
    /// Run the identity suite
    Verify {
        #[arg(long, default_value_t = 8)]
        nz: u32,
        #[arg(long, default_value_t = 10)]
        nq: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(clap::Args, Debug)]
struct RationalArgs {
    #[arg(long)]
    r: u32,
    #[arg(long, default_value_t = 30)]
    nz: u32,
    /// q-truncation; defaults to the table default or r, whichever is larger
    #[arg(long)]
    nq: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    #[value(name = "P", alias = "p")]
    P,
    #[value(name = "Q", alias = "q")]
    Q,
    #[value(name = "B", alias = "b")]
    B,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Which {
    F,
    G,
    Joint,
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Check(String),
    Usage(String),
}

impl From<patfrac::GenfunError> for Failure {
    fn from(e: patfrac::GenfunError) -> Self {
        Failure::Check(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        #[cfg(feature = "parallel")]
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Series {
            target,
            nz,
            nq,
            format,
            keep_t,
        } => {
            let config = SolverConfig::new(nz, nq);
            let s = match target {
                Target::P => genfun::solve_p(&config),
                Target::Q => genfun::solve_q(&config),
                Target::B => genfun::iterate_b(&config)?,
            };
            Ok(series_output(&s, keep_t, format))
        }
        Command::Contfrac {
            nz,
            nq,
            depth,
            format,
            keep_t,
        } => {
            let mut config = SolverConfig::new(nz, nq);
            config.depth = depth;
            let s = genfun::contfrac_p(&config)?;
            Ok(series_output(&s, keep_t, format))
        }
        Command::Ar(args) => rational(args, "AR", 8),
        Command::Aaron(args) => rational(args, "Aaron", 7),
        Command::Table {
            which,
            nmax,
            check,
            allow_large,
            format,
        } => table(which, nmax, check, allow_large, format),
        Command::Verify { nz, nq, format } => {
            let checks = verify::run(&SolverConfig::new(nz, nq));
            let text = Record::verification(&checks).render(format);
            if verify::all_passed(&checks) {
                Ok(text)
            } else {
                print!("{text}");
                Err(Failure::Check("identity suite failed".into()))
            }
        }
    }
}

fn series_output(s: &TriSeries, keep_t: bool, format: Format) -> String {
    let record = if keep_t {
        Record::trivariate(s)
    } else {
        Record::bivariate(&s.set_t_one())
    };
    record.render(format)
}

fn rational(args: RationalArgs, name: &'static str, default_nq: u32) -> Result<String, Failure> {
    let nq = match args.nq {
        Some(nq) if nq < args.r => {
            return Err(Failure::Usage(format!("--r {} exceeds --nq {nq}", args.r)))
        }
        Some(nq) => nq,
        None => default_nq.max(args.r),
    };
    if args.guard < 3 {
        return Err(Failure::Usage("--guard must be at least 3".into()));
    }
    let config = SolverConfig::new(args.nz, nq);
    let series: ZSeries = if name == "AR" {
        genfun::ar_series(args.r, &config)?
    } else {
        genfun::aaron_series(args.r, &config)?
    };
    let rf = ratrec::reconstruct(&series, args.guard).map_err(|e| Failure::Check(e.to_string()))?;
    Ok(Record::rational(name, args.r, &rf).render(args.format))
}

fn table(
    which: Which,
    nmax: usize,
    check: bool,
    allow_large: bool,
    format: Format,
) -> Result<String, Failure> {
    let opts = Enumeration {
        strategy: Strategy::default(),
        allow_large,
    };
    let usage = |e: oracle::OracleError| Failure::Usage(e.to_string());
    let (text, report) = match which {
        Which::F | Which::G => {
            let t = if which == Which::F {
                oracle::f_table_with(nmax, opts).map_err(usage)?
            } else {
                oracle::g_table_with(nmax, opts).map_err(usage)?
            };
            let name = if which == Which::F { "f" } else { "g" };
            let report = check.then(|| check_pattern_table(&t, which));
            (Record::table(name, &t).render(format), report)
        }
        Which::Joint => {
            let t = oracle::joint_table_with(nmax, opts).map_err(usage)?;
            let report = check.then(|| check_joint_table(&t));
            (Record::joint(&t).render(format), report)
        }
    };
    match report {
        None => Ok(text),
        Some(r) => {
            eprintln!(
                "check: {} cells compared, {} mismatches",
                r.compared,
                r.mismatches.len()
            );
            for m in &r.mismatches {
                eprintln!("  mismatch {m}");
            }
            if r.mismatches.is_empty() {
                Ok(text)
            } else {
                print!("{text}");
                Err(Failure::Check("table check failed".into()))
            }
        }
    }
}

struct CheckReport {
    compared: usize,
    mismatches: Vec<String>,
}

fn binomial3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

fn check_pattern_table(t: &PatternTable, which: Which) -> CheckReport {
    let nmax = t.nmax();
    let nq = binomial3(nmax) as u32;
    let config = SolverConfig::new(nmax as u32, nq);
    let s = match which {
        Which::F => genfun::solve_p(&config),
        _ => genfun::solve_q(&config),
    }
    .set_t_one();
    let mut report = CheckReport {
        compared: 0,
        mismatches: Vec::new(),
    };
    for n in 0..=nmax {
        for r in 0..=binomial3(n) {
            let series = s.coeff(n as u32, 0, r as u32).expect("in range");
            let brute = BigInt::from(t.get(n, r));
            report.compared += 1;
            if series != brute {
                report
                    .mismatches
                    .push(format!("n={n} r={r}: series {series}, enumeration {brute}"));
            }
        }
    }
    // a nonzero series coefficient beyond C(n, 3) would also be a mismatch
    for (e, c) in s.terms() {
        if e.q as usize > binomial3(e.z as usize) {
            report
                .mismatches
                .push(format!("n={} r={}: series {c}, enumeration 0", e.z, e.q));
        }
    }
    report
}

fn check_joint_table(t: &JointTable) -> CheckReport {
    let nmax = t.nmax();
    let config = SolverConfig::new(nmax as u32, binomial3(nmax) as u32);
    let p = genfun::solve_p(&config);
    let mut report = CheckReport {
        compared: 0,
        mismatches: Vec::new(),
    };
    for (&(n, k, r), count) in t.iter() {
        report.compared += 1;
        let series = p.coeff(n as u32, k as u32, r as u32).expect("in range");
        if series != BigInt::from(count.clone()) {
            report.mismatches.push(format!(
                "n={n} k={k} r={r}: series {series}, enumeration {count}"
            ));
        }
    }
    for (e, c) in p.terms() {
        if t.get(e.z as usize, e.t as usize, e.q as usize) == Default::default() {
            report.compared += 1;
            report.mismatches.push(format!(
                "n={} k={} r={}: series {c}, enumeration 0",
                e.z, e.t, e.q
            ));
        }
    }
    report
}
