mod base_args;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aclab::dk::{ratio_scan, DkSeries, RatioRecord};
use aclab::oracle::{self, fraction_grid};
use aclab::rational::{format_exact, to_decimal};
use aclab::verify::{self, THEOREM_B_PAIRS};
use aclab::{BaseSequence, ComplementPair, VerificationReport};
use anyhow::{bail, Context, Result};
use base_args::BaseArgs;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};

const SIG_DIGITS: usize = 12;

macro_rules! outln {
    ($($arg:tt)*) => {
        writeln!(io::stdout(), $($arg)*)?
    };
}

const CSV_HEADER: [&str; 9] =
    ["x", "in_A", "in_B", "count_A", "count_B", "ratio_num", "ratio_den", "ratio_decimal", "defect"];

/// Additive complements from mixed-radix bases.
#[derive(Debug, Parser)]
#[command(name = "aclab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print b_0..b_n and a_0..a_n.
    Construct {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long, default_value_t = 10)]
        length: usize,
        /// Write the JSON form here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print A(x), B(x) and A(x)B(x) - x.
    Count {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long)]
        x: BigUint,
    },
    /// One CSV row per member of A ∪ B up to the limit, then a summary.
    RatioScan {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long)]
        limit: BigUint,
        /// CSV destination; rows go to stdout and the summary to stderr if omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run a verification suite and print its JSON report.
    Verify {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Suite-specific size: a limit, k_max, or l_max.
        #[arg(long)]
        bound: Option<u64>,
        /// Also write the report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Table of D_k and D*_k.
    Dk {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long, default_value_t = 10)]
        k_max: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Coverage,
    Uniqueness,
    Defect,
    Lemma32,
    Lemma33,
    Lemma34,
    Lemma35,
    ScanReduction,
    #[value(name = "theoremB-crosscheck")]
    TheoremBCrosscheck,
    Thm13Convergence,
}

impl Suite {
    fn default_bound(self) -> u64 {
        match self {
            Suite::Coverage | Suite::Uniqueness | Suite::ScanReduction => 10_000,
            Suite::Defect => 10,
            Suite::Lemma32 => 8,
            Suite::Lemma33 => 20,
            Suite::Lemma34 | Suite::Lemma35 => 3,
            Suite::TheoremBCrosscheck => THEOREM_B_PAIRS.len() as u64,
            Suite::Thm13Convergence => 7,
        }
    }

    fn needs_base(self) -> bool {
        !matches!(self, Suite::Lemma33 | Suite::TheoremBCrosscheck | Suite::Thm13Convergence)
    }
}

enum Outcome {
    Done,
    Failed,
}

fn load_base(args: &BaseArgs, length: usize) -> Result<BaseSequence> {
    let spec = args.to_spec()?;
    Ok(BaseSequence::materialize(spec, length)?)
}

fn emit_json(value: &serde_json::Value, path: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("cannot write {}", p.display()))?,
        None => outln!("{text}"),
    }
    Ok(())
}

fn joined<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn construct(args: &BaseArgs, length: usize, json: Option<&Path>) -> Result<Outcome> {
    let base = load_base(args, length + 1)?;
    let b = base.b_prefix(length + 1);
    let a = base.a_prefix(length + 1);
    outln!("b: {}", joined(&b));
    outln!("a: {}", joined(&a));
    let strs = |v: &[BigUint]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let value = serde_json::json!({
        "spec": base.spec(),
        "description": base.describe(),
        "b": strs(&b),
        "a": strs(&a),
    });
    emit_json(&value, json)?;
    Ok(Outcome::Done)
}

fn count(args: &BaseArgs, x: &BigUint) -> Result<Outcome> {
    let base = load_base(args, 2)?;
    let pair = ComplementPair::new(base);
    let (ca, cb) = pair.counts(x);
    let defect = BigInt::from(&ca * &cb) - BigInt::from(x.clone());
    outln!("count_A = {ca}");
    outln!("count_B = {cb}");
    outln!("defect = {defect}");
    Ok(Outcome::Done)
}

fn csv_row(r: &RatioRecord) -> [String; 9] {
    [
        r.x.to_string(),
        r.in_a.to_string(),
        r.in_b.to_string(),
        r.count_a.to_string(),
        r.count_b.to_string(),
        r.ratio.numer().to_string(),
        r.ratio.denom().to_string(),
        to_decimal(&r.ratio, SIG_DIGITS),
        r.defect.to_string(),
    ]
}

fn scan(args: &BaseArgs, limit: &BigUint, csv_path: Option<&Path>) -> Result<Outcome> {
    let base = load_base(args, 2)?;
    let pair = ComplementPair::new(base);
    let sink: Box<dyn Write> = match csv_path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("cannot write {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(CSV_HEADER)?;
    let mut write_err = None;
    let summary = ratio_scan(&pair, limit, |r| {
        if write_err.is_none() {
            if let Err(e) = writer.write_record(csv_row(r)) {
                write_err = Some(e);
            }
        }
    })?;
    if let Some(e) = write_err {
        return Err(e).context("writing CSV");
    }
    writer.flush()?;
    drop(writer);

    let mut lines = vec![format!("records = {}", summary.records)];
    let describe = |m: &Option<(aclab::ExactRational, BigUint)>| match m {
        Some((r, x)) => format!("{} ({}) at x = {x}", format_exact(r), to_decimal(r, SIG_DIGITS)),
        None => "none".to_string(),
    };
    lines.push(format!("max_ratio (x >= {}) = {}", summary.regime_start, describe(&summary.max_ratio)));
    lines.push(format!("global_max_ratio = {}", describe(&summary.global_max_ratio)));
    lines.push(format!("defect_one = {} [{}]", summary.defect_one.len(), joined(&summary.defect_one)));
    for line in lines {
        if csv_path.is_some() {
            outln!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
    Ok(Outcome::Done)
}

fn run_suite(args: &BaseArgs, suite: Suite, bound: u64) -> Result<VerificationReport> {
    let base = if suite.needs_base() {
        if !args.given() {
            bail!("suite {:?} requires a base: pass --kind or --spec", suite);
        }
        Some(load_base(args, 2)?)
    } else {
        None
    };
    let base = || base.as_ref().expect("checked above");
    let k = |b: u64| usize::try_from(b).context("bound too large");
    let report = match suite {
        Suite::Coverage => verify::coverage(base(), bound),
        Suite::Uniqueness => verify::uniqueness(base(), bound),
        Suite::Defect => verify::defect_one(base(), k(bound)?)?,
        Suite::Lemma32 => verify::lemma32(base(), k(bound)?)?,
        Suite::Lemma33 => oracle::check_lemma33(&fraction_grid(3, &(0..=bound).collect::<Vec<_>>())),
        Suite::Lemma34 => oracle::check_lemma34(base(), k(bound)?)?,
        Suite::Lemma35 => oracle::check_lemma35(base(), k(bound)?)?,
        Suite::ScanReduction => oracle::check_scan_reduction(base(), bound)?,
        Suite::TheoremBCrosscheck => verify::theorem_b_crosscheck(&THEOREM_B_PAIRS)?,
        Suite::Thm13Convergence => {
            let a = args.a.unwrap_or(2);
            let b = match args.b.as_slice() {
                [] => 4,
                [b] => *b,
                _ => bail!("thm13-convergence takes a single --b"),
            };
            verify::thm13_convergence(a, b, bound)?
        }
    };
    Ok(report)
}

fn verify_cmd(args: &BaseArgs, suite: Suite, bound: Option<u64>, json: Option<&Path>) -> Result<Outcome> {
    let report = run_suite(args, suite, bound.unwrap_or_else(|| suite.default_bound()))?;
    let value = serde_json::to_value(&report)?;
    emit_json(&value, None)?;
    if json.is_some() {
        emit_json(&value, json)?;
    }
    Ok(if report.pass { Outcome::Done } else { Outcome::Failed })
}

fn dk_cmd(args: &BaseArgs, k_max: usize, json: Option<&Path>) -> Result<Outcome> {
    let base = load_base(args, 2)?;
    let series = DkSeries::compute(&base, k_max)?;
    outln!("k\tD_k\tD_k_decimal\tD*_k\tD*_k_decimal");
    let mut rows = Vec::new();
    for row in &series.rows {
        let (star, star_dec) = match &row.d_star {
            Some(s) => (format_exact(s), to_decimal(s, SIG_DIGITS)),
            None => (String::new(), String::new()),
        };
        let d = format_exact(&row.d);
        let d_dec = to_decimal(&row.d, SIG_DIGITS);
        outln!("{}\t{d}\t{d_dec}\t{star}\t{star_dec}", row.k);
        rows.push(serde_json::json!({
            "k": row.k,
            "d": d,
            "d_decimal": d_dec,
            "d_star": row.d_star.as_ref().map(|_| star.clone()),
            "d_star_decimal": row.d_star.as_ref().map(|_| star_dec.clone()),
        }));
    }
    if json.is_some() {
        emit_json(&serde_json::json!({ "base": series.base, "rows": rows }), json)?;
    }
    Ok(Outcome::Done)
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("ACLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().with_context(|| format!("ACLAB_THREADS = {raw:?} is not a number"))?;
    if n == 0 {
        bail!("ACLAB_THREADS must be at least 1");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome> {
    configure_threads()?;
    match &cli.command {
        Command::Construct { base, length, json } => construct(base, *length, json.as_deref()),
        Command::Count { base, x } => count(base, x),
        Command::RatioScan { base, limit, csv } => scan(base, limit, csv.as_deref()),
        Command::Verify { base, suite, bound, json } => verify_cmd(base, *suite, *bound, json.as_deref()),
        Command::Dk { base, k_max, json } => dk_cmd(base, *k_max, json.as_deref()),
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<csv::Error>().is_some_and(|ce| matches!(ce.kind(), csv::ErrorKind::Io(io) if io.kind() == io::ErrorKind::BrokenPipe))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
