//! etaq: expand exact q-series, verify the identity catalog, and scan
//! nonnegativity claims.
//!
//! Exit codes: 0 on success/pass, 1 on verification failure (a report is
//! still emitted), 2 on usage errors.

mod cache;

use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cache::SeriesCache;
use etaq::identities::{grid_jobs, run_jobs_timed, IdentityId, Job};
use etaq::products::{eta_quotient, EtaQuotientSpec};
use etaq::series::ScanOutcome;
use etaq::theta::{c_series, klyachko_theta};
use etaq::{BiSeries, UniSeries, VerificationReport};

#[derive(Parser)]
#[command(
    name = "etaq",
    version,
    about = "Exact q-series engine: eta products, theta lattice sums, identity verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Csv,
    Json,
}

#[derive(Args)]
struct OutputOpts {
    /// Output format.
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Expand an eta quotient given in compact text form.
    Expand {
        /// Eta quotient, e.g. "2^2 * 1^-1" for the 2-core generating function.
        #[arg(long)]
        eta: String,
        #[arg(long)]
        order: usize,
        /// Fail (exit 1) if any coefficient is negative.
        #[arg(long)]
        check_nonneg: bool,
        /// Bypass the on-disk expansion cache.
        #[arg(long)]
        no_cache: bool,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Nonnegativity report for the Saito product S_N(q).
    Saito {
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        no_cache: bool,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Theta lattice sums: C_a(z;q) rows (--a) or the Klyachko series (--t).
    Theta {
        /// Emit the bivariate C_a(z;q) rows.
        #[arg(long)]
        a: Option<usize>,
        /// Emit the univariate constrained lattice sum for this t.
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        order: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// t-core counts a_t(n) as a table.
    Pcore {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        order: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Verify identities from the catalog over a parameter grid.
    Verify(GridCmd),
    /// Scan a conjecture over a parameter grid (scan-pass / scan-fail).
    Scan(GridCmd),
    /// Manage the expansion cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// Print the resolved cache directory.
    Dir,
    /// Print entry count, total size, and keys.
    Stats,
    /// Remove all cache entries.
    Clear,
}

#[derive(Args)]
struct GridCmd {
    /// Identity id, e.g. THM1, KID, CONJ2A.
    #[arg(long)]
    id: String,
    #[arg(long)]
    order: usize,
    /// z-window "ZMIN:ZMAX" for windowed scans, e.g. --window=-60:60.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Parallel jobs; 1 is fully sequential.
    #[arg(long, default_value = "1")]
    jobs: usize,
    /// Record wall-clock elapsedMs per report (not reproducible).
    #[arg(long)]
    timings: bool,
    #[command(flatten)]
    output: OutputOpts,
    /// Grid values, each "K" or "LO..HI" (inclusive).
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    i: Option<String>,
    #[arg(long)]
    j: Option<String>,
    #[arg(long = "L")]
    l: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long = "M")]
    m_upper: Option<String>,
    #[arg(long = "N")]
    n_upper: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    t: Option<String>,
}

fn parse_range(name: &str, text: &str) -> Result<(String, i64, i64)> {
    let parse = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| anyhow!("bad value {s:?} for --{name} (expected integer or LO..HI)"))
    };
    match text.split_once("..") {
        Some((lo, hi)) => Ok((name.to_string(), parse(lo)?, parse(hi)?)),
        None => {
            let v = parse(text)?;
            Ok((name.to_string(), v, v))
        }
    }
}

fn parse_window(text: &str) -> Result<(i64, i64)> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| anyhow!("bad window {text:?} (expected ZMIN:ZMAX)"))?;
    Ok((
        lo.trim()
            .parse()
            .map_err(|_| anyhow!("bad window bound {lo:?}"))?,
        hi.trim()
            .parse()
            .map_err(|_| anyhow!("bad window bound {hi:?}"))?,
    ))
}

impl GridCmd {
    fn grid(&self, id: IdentityId) -> Result<Vec<(String, i64, i64)>> {
        let flags: [(&str, &Option<String>); 11] = [
            ("a", &self.a),
            ("b", &self.b),
            ("i", &self.i),
            ("j", &self.j),
            ("L", &self.l),
            ("m", &self.m),
            ("n", &self.n),
            ("M", &self.m_upper),
            ("N", &self.n_upper),
            ("p", &self.p),
            ("t", &self.t),
        ];
        let mut grid = Vec::new();
        for (name, value) in flags {
            if let Some(text) = value {
                grid.push(parse_range(name, text)?);
            }
        }
        // canonical parameter order for deterministic job layout
        grid.sort_by_key(|(name, _, _)| {
            id.param_names()
                .iter()
                .position(|p| p == name)
                .unwrap_or(usize::MAX)
        });
        Ok(grid)
    }

    fn jobs(&self) -> Result<Vec<Job>> {
        let id = IdentityId::from_str(&self.id)?;
        let window = self.window.as_deref().map(parse_window).transpose()?;
        let grid = self.grid(id)?;
        Ok(grid_jobs(id, &grid, self.order, window)?)
    }
}

fn emit(output: &OutputOpts, text: String) -> Result<()> {
    match &output.out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text).with_context(|| format!("writing {path}")),
    }
}

fn render_uni(series: &UniSeries, prefactor: Option<&str>, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Plain => {
            if let Some(p) = prefactor {
                let _ = writeln!(out, "prefactor exponent: {p}");
            }
            for (n, c) in series.coeffs().iter().enumerate() {
                let _ = writeln!(out, "{n} {c}");
            }
        }
        Format::Csv => {
            let _ = writeln!(out, "n,coeff");
            for (n, c) in series.coeffs().iter().enumerate() {
                let _ = writeln!(out, "{n},{c}");
            }
        }
        Format::Json => {
            let doc = serde_json::json!({
                "prefactor": prefactor,
                "series": series.to_json(),
            });
            let _ = writeln!(out, "{}", serde_json::to_string(&doc).unwrap());
        }
    }
    out
}

fn render_bi(series: &BiSeries, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Plain => {
            for (n, row) in series.rows().iter().enumerate() {
                let _ = write!(out, "q^{n}:");
                for (e, c) in row.terms() {
                    let _ = write!(out, " {c}*z^{e}");
                }
                let _ = writeln!(out);
            }
        }
        Format::Csv => {
            let _ = writeln!(out, "n,zexp,coeff");
            for (n, row) in series.rows().iter().enumerate() {
                for (e, c) in row.terms() {
                    let _ = writeln!(out, "{n},{e},{c}");
                }
            }
        }
        Format::Json => {
            let _ = writeln!(out, "{}", serde_json::to_string(&series.to_json()).unwrap());
        }
    }
    out
}

fn render_reports(reports: &[VerificationReport], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Plain => {
            for r in reports {
                let params: Vec<String> =
                    r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = write!(
                    out,
                    "{} [{}] order={} {}",
                    r.id,
                    params.join(","),
                    r.order,
                    r.status
                );
                if let Some(d) = &r.first_discrepancy {
                    let _ = write!(
                        out,
                        " first-discrepancy={}",
                        serde_json::to_string(d).unwrap()
                    );
                }
                let _ = writeln!(out);
            }
        }
        Format::Csv => {
            let _ = writeln!(out, "id,params,order,status,discrepancy");
            for r in reports {
                let params: Vec<String> =
                    r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let disc = r
                    .first_discrepancy
                    .as_ref()
                    .map(|d| serde_json::to_string(d).unwrap().replace(',', ";"))
                    .unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.id,
                    params.join(" "),
                    r.order,
                    r.status,
                    disc
                );
            }
        }
        Format::Json => {
            let _ = writeln!(out, "{}", serde_json::to_string(reports).unwrap());
        }
    }
    out
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Expand {
            eta,
            order,
            check_nonneg,
            no_cache,
            output,
        } => {
            let spec = EtaQuotientSpec::from_str(&eta)?;
            let cache = SeriesCache::new(!no_cache);
            let key = format!("eta:{spec}:order={order}");
            let prefactor = eta_quotient(&spec, 0).prefactor;
            let series = cache.series(&key, || eta_quotient(&spec, order).series)?;
            let pre = format!("{}/{}", prefactor.numer(), prefactor.denom());
            emit(&output, render_uni(&series, Some(&pre), output.format))?;
            if check_nonneg {
                if let ScanOutcome::Negative { q_exp, value, .. } = series.nonneg_scan() {
                    eprintln!("negative coefficient {value} at q^{q_exp}");
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Command::Saito {
            n,
            order,
            no_cache,
            output,
        } => {
            if n < 1 {
                bail!("--N must be >= 1");
            }
            let cache = SeriesCache::new(!no_cache);
            let key = format!("saito:N={n}:order={order}");
            let series = cache.series(&key, || etaq::saito::saito_series(n, order).1)?;
            let report = etaq::report::NonnegReport::new(
                n,
                order,
                etaq::saito::saito_prefactor(n),
                &series.nonneg_scan(),
            );
            let text = match output.format {
                Format::Json => format!("{}\n", serde_json::to_string(&report).unwrap()),
                Format::Csv => {
                    let first = report
                        .first_negative
                        .as_ref()
                        .map(|f| format!("{},{}", f.n, f.coeff))
                        .unwrap_or_else(|| ",".into());
                    format!(
                        "N,order,prefactor,pass,firstNegative_n,firstNegative_coeff\n{},{},{},{},{}\n",
                        report.n, report.order, report.prefactor, report.pass, first
                    )
                }
                Format::Plain => format!(
                    "S_{} to order {}: prefactor q^({}) {}\n",
                    report.n,
                    report.order,
                    report.prefactor,
                    if report.pass {
                        "all coefficients nonnegative".to_string()
                    } else {
                        format!("first negative: {:?}", report.first_negative)
                    }
                ),
            };
            emit(&output, text)?;
            Ok(report.pass)
        }
        Command::Theta {
            a,
            t,
            order,
            output,
        } => match (a, t) {
            (Some(a), None) => {
                if a < 2 {
                    bail!("--a must be >= 2");
                }
                emit(&output, render_bi(&c_series(a, order), output.format))?;
                Ok(true)
            }
            (None, Some(t)) => {
                if t < 1 {
                    bail!("--t must be >= 1");
                }
                emit(
                    &output,
                    render_uni(&klyachko_theta(t, order), None, output.format),
                )?;
                Ok(true)
            }
            _ => bail!("theta requires exactly one of --a or --t"),
        },
        Command::Pcore { t, order, output } => {
            if t < 1 {
                bail!("--t must be >= 1");
            }
            let series = etaq::pcore::tcore_series(t, order);
            emit(&output, render_uni(&series, None, output.format))?;
            Ok(true)
        }
        Command::Verify(cmd) => run_grid(cmd, false),
        Command::Scan(cmd) => run_grid(cmd, true),
        Command::Cache { action } => {
            let cache = SeriesCache::new(true);
            match action {
                CacheAction::Dir => println!("{}", cache.dir().display()),
                CacheAction::Stats => {
                    let (count, bytes, keys) = cache.stats()?;
                    println!(
                        "{count} entries, {bytes} bytes in {}",
                        cache.dir().display()
                    );
                    for key in keys {
                        println!("  {key}");
                    }
                }
                CacheAction::Clear => {
                    let removed = cache.clear()?;
                    println!("removed {removed} entries");
                }
            }
            Ok(true)
        }
    }
}

fn run_grid(cmd: GridCmd, scan_only: bool) -> Result<bool> {
    let id = IdentityId::from_str(&cmd.id)?;
    if scan_only && !id.is_conjecture() {
        bail!("scan only accepts conjecture ids (CONJ2A, CONJ2B, CONJ2C); use verify for {id}");
    }
    if cmd.jobs < 1 {
        bail!("--jobs must be >= 1");
    }
    let jobs = cmd.jobs()?;
    if jobs.is_empty() {
        bail!("empty parameter grid");
    }
    let mut reports = Vec::with_capacity(jobs.len());
    for result in run_jobs_timed(&jobs, cmd.jobs, cmd.timings) {
        reports.push(result?);
    }
    let all_ok = reports.iter().all(|r| r.is_ok());
    emit(&cmd.output, render_reports(&reports, cmd.output.format))?;
    Ok(all_ok)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
