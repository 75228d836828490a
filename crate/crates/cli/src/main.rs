use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde::Serialize;

use quartic_core::constants::{constant_report, predicted_n, ConstantOptions};
use quartic_core::enumeration::{direct_count, Method as DirectMethod};
use quartic_core::surfaces::{find_lines, LINE_SEARCH_HEIGHT};
use quartic_core::{torsor, Error, FieldCtx, SurfaceId};

#[derive(Parser)]
#[command(name = "quartic", version, about = "Rational points of bounded height on quartic del Pezzo surfaces")]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Output {
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountMethod {
    Torsor,
    Direct,
    Both,
}

#[derive(clap::Args)]
struct ConstArgs {
    #[arg(long, default_value_t = 100_000)]
    prime_bound: u64,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl ConstArgs {
    fn options(&self) -> ConstantOptions {
        ConstantOptions { prime_bound: self.prime_bound, samples: self.samples, seed: self.seed }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Count points of height at most B off the lines.
    Count {
        #[arg(long)]
        surface: String,
        #[arg(long, allow_hyphen_values = true)]
        field: i64,
        /// An integer or a fraction p/q.
        #[arg(long, allow_hyphen_values = true)]
        bound: String,
        #[arg(long, value_enum, default_value_t = CountMethod::Torsor)]
        method: CountMethod,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate α, θ₀, ω_∞ and the leading constant c.
    Constants {
        #[arg(long)]
        surface: String,
        #[arg(long, allow_hyphen_values = true)]
        field: i64,
        #[command(flatten)]
        consts: ConstArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Tabulate N(B) / (B (log B)⁵) against c.
    Compare {
        #[arg(long)]
        surface: String,
        #[arg(long, allow_hyphen_values = true)]
        field: i64,
        /// Comma-separated bounds, each above 1.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        bounds: Vec<String>,
        #[command(flatten)]
        consts: ConstArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Print the lines on a surface as JSON cutting forms.
    Lines {
        #[arg(long)]
        surface: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = -1)]
        field: i64,
        #[arg(long, default_value_t = LINE_SEARCH_HEIGHT)]
        height: i128,
    },
    /// Cross-check torsor and direct counts on a small grid.
    Selftest,
}

enum Failure {
    Usage(String),
    Consistency(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) => Failure::Consistency(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn surface(s: &str) -> Res<SurfaceId> {
    let id: SurfaceId = s.parse()?;
    if id == SurfaceId::S0 {
        return Err(Failure::Usage("s0 is stored as data only; choose s1..s4".into()));
    }
    Ok(id)
}

fn bound(s: &str) -> Res<Ratio<i128>> {
    let b: Ratio<i128> = s.trim().parse().map_err(|_| Failure::Usage(format!("cannot parse bound {s:?}")))?;
    if b < Ratio::from_integer(0) {
        return Err(Failure::Usage(format!("bound {b} is negative")));
    }
    Ok(b)
}

fn to_f64(r: Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn emit<T: Serialize>(output: &Output, rows: &[T]) -> Res<()> {
    let mut sink: Box<dyn Write> = match &output.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    match output.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut sink);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, rows).map_err(|e| Failure::Usage(e.to_string()))?;
            writeln!(sink)?;
        }
    }
    sink.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CountRow {
    surface: String,
    field_d: i64,
    bound: String,
    method: &'static str,
    count: u64,
    elapsed_ms: u128,
}

#[derive(Serialize)]
struct ConstantsRow {
    surface: String,
    field_d: i64,
    alpha: f64,
    theta0: f64,
    theta0_prime_bound: u64,
    theta0_tail: f64,
    omega_inf: f64,
    omega_inf_stderr: f64,
    c: f64,
    seed: u64,
}

#[derive(Serialize)]
struct CompareRow {
    surface: String,
    field_d: i64,
    bound: String,
    count: u64,
    ratio: f64,
    predicted_c: f64,
}

fn count(s: &str, d: i64, b: &str, method: CountMethod, output: &Output) -> Res<()> {
    let s = surface(s)?;
    let k = FieldCtx::new(d)?;
    let b = bound(b)?;
    let mut rows = Vec::new();
    let row = |method, count, t: Instant| CountRow {
        surface: s.to_string(),
        field_d: d,
        bound: b.to_string(),
        method,
        count,
        elapsed_ms: t.elapsed().as_millis(),
    };
    if method != CountMethod::Direct {
        let t = Instant::now();
        let n = torsor::count(&k, s, b)?.count;
        rows.push(row("torsor", n, t));
    }
    if method != CountMethod::Torsor {
        let t = Instant::now();
        let n = direct_count(&k, s, b, DirectMethod::Exhaustive)?;
        rows.push(row("direct", n, t));
    }
    emit(output, &rows)?;
    if method == CountMethod::Both && rows[0].count != rows[1].count {
        return Err(Failure::Consistency(format!(
            "torsor count {} differs from direct count {} for {s}, d = {d}, B = {b}",
            rows[0].count, rows[1].count
        )));
    }
    Ok(())
}

fn constants(s: &str, d: i64, consts: &ConstArgs, output: &Output) -> Res<()> {
    let s = surface(s)?;
    let k = FieldCtx::new(d)?;
    let r = constant_report(&k, s, consts.options())?;
    let row = ConstantsRow {
        surface: s.to_string(),
        field_d: d,
        alpha: r.alpha.value(),
        theta0: r.theta0.value,
        theta0_prime_bound: r.theta0.prime_bound,
        theta0_tail: r.theta0.tail,
        omega_inf: r.omega_inf.value,
        omega_inf_stderr: r.omega_inf.stderr,
        c: r.c,
        seed: consts.seed,
    };
    emit(output, &[row])
}

fn compare(s: &str, d: i64, bounds: &[String], consts: &ConstArgs, output: &Output) -> Res<()> {
    let s = surface(s)?;
    let k = FieldCtx::new(d)?;
    let bounds: Vec<Ratio<i128>> = bounds.iter().map(|b| bound(b)).collect::<Res<_>>()?;
    if bounds.is_empty() || bounds.iter().any(|&b| b <= Ratio::from_integer(1)) {
        return Err(Failure::Usage("compare needs one or more bounds above 1".into()));
    }
    let c = constant_report(&k, s, consts.options())?.c;
    let mut rows = Vec::new();
    for b in bounds {
        let n = torsor::count(&k, s, b)?.count;
        rows.push(CompareRow {
            surface: s.to_string(),
            field_d: d,
            bound: b.to_string(),
            count: n,
            ratio: n as f64 / predicted_n(1.0, to_f64(b)),
            predicted_c: c,
        });
    }
    emit(output, &rows)
}

#[derive(Serialize)]
struct LinesOut {
    surface: String,
    field_d: i64,
    search_height: i128,
    lines: Vec<[[i128; 5]; 3]>,
}

fn lines(s: &str, d: i64, h0: i128) -> Res<()> {
    let s = surface(s)?;
    let k = FieldCtx::new(d)?;
    if h0 < 1 {
        return Err(Failure::Usage(format!("search height {h0} is below 1")));
    }
    let ls = find_lines(&k, s, h0)?;
    let out = LinesOut { surface: s.to_string(), field_d: d, search_height: h0, lines: ls.iter().map(|l| l.cuts).collect() };
    println!("{}", serde_json::to_string_pretty(&out).map_err(|e| Failure::Usage(e.to_string()))?);
    Ok(())
}

fn selftest() -> Res<()> {
    let mut failures = 0;
    for d in [-1, -3, -5] {
        let k = FieldCtx::new(d)?;
        for s in SurfaceId::COUNTED {
            for b in [1, 2, 5] {
                let b = Ratio::from_integer(b);
                let t = torsor::count(&k, s, b)?.count;
                let n = direct_count(&k, s, b, DirectMethod::Exhaustive)?;
                let ok = t == n;
                failures += !ok as u32;
                println!("{} {s} d={d} B={b} torsor={t} direct={n}", if ok { "ok  " } else { "FAIL" });
            }
        }
    }
    if failures > 0 {
        return Err(Failure::Consistency(format!("{failures} torsor/direct mismatches")));
    }
    Ok(())
}

fn run(cli: Cli) -> Res<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    match &cli.cmd {
        Cmd::Count { surface, field, bound, method, output } => count(surface, *field, bound, *method, output),
        Cmd::Constants { surface, field, consts, output } => constants(surface, *field, consts, output),
        Cmd::Compare { surface, field, bounds, consts, output } => compare(surface, *field, bounds, consts, output),
        Cmd::Lines { surface, field, height } => lines(surface, *field, *height),
        Cmd::Selftest => selftest(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(usage as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Consistency(m)) => {
            eprintln!("consistency failure: {m}");
            ExitCode::from(2)
        }
    }
}
