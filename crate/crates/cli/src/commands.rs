use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qrdecomp::bounds::{nkmq_bound_report, sarkozy_window, BoundValue};
use qrdecomp::certificate::{verify_document, CertificateDocument};
use qrdecomp::charsum::{
    sample_charsum_report, sample_filter_stats, write_charsum_csv, write_filter_csv,
    DEFAULT_EPSILON,
};
use qrdecomp::field::prime_power;
use qrdecomp::search::{
    count_by_size, naive_search, search_with_jobs, shkredov_search, Mode, SearchConfig,
    DEFAULT_COUNT_LIMIT, DIRECT_ENUMERATION_LIMIT,
};
use qrdecomp::Field;
use serde::Serialize;

use crate::cache::load_field;
use crate::manifest::{emit, RunManifest};

#[derive(Debug, Parser)]
#[command(
    name = "qrdecomp",
    version,
    about = "Additive decompositions of quadratic residues in finite fields"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct FieldArgs {
    /// Field order q = p^n.
    #[arg(long, conflicts_with_all = ["p", "n"])]
    q: Option<u64>,
    /// Characteristic (with --n).
    #[arg(long)]
    p: Option<u64>,
    /// Extension degree (default 1).
    #[arg(long, requires = "p")]
    n: Option<u32>,
}

impl FieldArgs {
    fn build(&self) -> Result<Field> {
        let (p, n) = match (self.q, self.p) {
            (Some(q), _) => {
                let (p, n) =
                    prime_power(q).with_context(|| format!("{q} is not an odd prime power"))?;
                (p as u64, n)
            }
            (None, Some(p)) => (p, self.n.unwrap_or(1)),
            (None, None) => bail!("give either --q or --p [--n]"),
        };
        load_field(p, n)
    }
}

#[derive(Debug, Args)]
struct OutArg {
    /// Output file; a `<FILE>.manifest.json` is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the field and its residue set.
    Field {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Pruned exhaustive search for Q = A + B.
    Search {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value = "decide")]
        mode: Mode,
        /// Disable the Cauchy-Davenport rejection.
        #[arg(long)]
        no_cd: bool,
        /// Enable the size-window cap on #A (prime fields).
        #[arg(long)]
        window: bool,
        /// Evaluate scaling-canonical sets only.
        #[arg(long)]
        symmetry: bool,
        /// Disable filter pruning.
        #[arg(long)]
        no_filter: bool,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Largest #B* counted by direct subset enumeration.
        #[arg(long, default_value_t = DIRECT_ENUMERATION_LIMIT)]
        enumeration_limit: usize,
        /// Largest #Q for inclusion-exclusion counting.
        #[arg(long, default_value_t = DEFAULT_COUNT_LIMIT)]
        count_limit: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Brute-force oracle (q <= 17).
    Naive {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value = "count-all")]
        mode: Mode,
        #[command(flatten)]
        out: OutArg,
    },
    /// Exact N(k, m, q) by brute force, optionally beside the binomial bound.
    Count {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        /// Constant c for C(⌊c√q⌋, k) C(⌊c√q⌋, m).
        #[arg(long)]
        c: Option<f64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Search for A + A = Q.
    Shkredov {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Sampled double character sums against the Karatsuba-type bound (CSV).
    Charsum {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 1)]
        nu: u32,
        /// Samples per grid entry.
        #[arg(long)]
        samples: usize,
        /// Comma-separated `#Ux#V` entries, e.g. `16x4,8x8`.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Sampled filter-set sizes #U(V) for random V of size ⌊q^(ε/2)⌋ (CSV).
    FilterStats {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// The size window (√p/(3 ln p), √p ln p).
    Window {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Recheck a stored certificate from scratch.
    Verify {
        #[arg(long)]
        certificate: PathBuf,
    },
}

fn parse_grid(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split(',')
        .map(|entry| {
            let (u, v) = entry
                .trim()
                .split_once('x')
                .with_context(|| format!("grid entry {entry:?} is not of the form UxV"))?;
            Ok((u.trim().parse()?, v.trim().parse()?))
        })
        .collect()
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct FieldInfo {
    q: u32,
    p: u32,
    n: u32,
    modulus: Vec<u32>,
    generator: u32,
    residue_count: usize,
    residues: String,
}

#[derive(Serialize)]
struct CountOutput {
    q: u32,
    k: usize,
    m: usize,
    count: u64,
    c: Option<f64>,
    bound: Option<BoundValue>,
}

#[derive(Serialize)]
struct WindowOutput {
    p: u64,
    lower: f64,
    upper: f64,
}

pub fn run(cli: Cli, argv: &[String]) -> Result<u8> {
    let name = match &cli.command {
        Command::Field { .. } => "field",
        Command::Search { .. } => "search",
        Command::Naive { .. } => "naive",
        Command::Count { .. } => "count",
        Command::Shkredov { .. } => "shkredov",
        Command::Charsum { .. } => "charsum",
        Command::FilterStats { .. } => "filter-stats",
        Command::Window { .. } => "window",
        Command::Verify { .. } => "verify",
    };
    let mut manifest = RunManifest::new(argv, name);
    match cli.command {
        Command::Field { field, out } => {
            let f = field.build()?;
            manifest.field = Some((&f).into());
            let residues = f.quadratic_residues();
            let info = FieldInfo {
                q: f.q(),
                p: f.p(),
                n: f.n(),
                modulus: f.modulus().to_vec(),
                generator: f.generator(),
                residue_count: residues.len(),
                residues: residues.to_string(),
            };
            emit(out.out.as_deref(), &json(&info)?, manifest)?;
            Ok(0)
        }
        Command::Search {
            field,
            mode,
            no_cd,
            window,
            symmetry,
            no_filter,
            jobs,
            enumeration_limit,
            count_limit,
            out,
        } => {
            let f = field.build()?;
            let config = SearchConfig {
                use_cauchy_davenport: !no_cd,
                use_sarkozy_window: window,
                use_filter_pruning: !no_filter,
                symmetry_reduction: symmetry,
                mode,
                enumeration_limit,
                count_limit,
            };
            let report = search_with_jobs(&f, config, jobs)?;
            manifest.field = Some((&f).into());
            manifest.config = Some(report.config);
            let doc = CertificateDocument::from_report(&report);
            emit(out.out.as_deref(), &doc.to_json(), manifest)?;
            if report.partial {
                eprintln!("counting limit exceeded: n_q is partial");
                return Ok(2);
            }
            Ok(0)
        }
        Command::Naive { field, mode, out } => {
            let f = field.build()?;
            let report = naive_search(&f, mode)?;
            manifest.field = Some((&f).into());
            manifest.config = Some(report.config);
            emit(
                out.out.as_deref(),
                &CertificateDocument::from_report(&report).to_json(),
                manifest,
            )?;
            Ok(0)
        }
        Command::Count {
            field,
            k,
            m,
            c,
            out,
        } => {
            let f = field.build()?;
            let count = count_by_size(&f, k, m)?;
            let bound = c.map(|c| nkmq_bound_report(f.q() as u64, k as u64, m as u64, c));
            manifest.field = Some((&f).into());
            let body = CountOutput {
                q: f.q(),
                k,
                m,
                count,
                c,
                bound,
            };
            emit(out.out.as_deref(), &json(&body)?, manifest)?;
            Ok(0)
        }
        Command::Shkredov { field, out } => {
            let f = field.build()?;
            let report = shkredov_search(&f)?;
            manifest.field = Some((&f).into());
            manifest.config = Some(report.config);
            emit(
                out.out.as_deref(),
                &CertificateDocument::from_report(&report).to_json(),
                manifest,
            )?;
            Ok(0)
        }
        Command::Charsum {
            field,
            nu,
            samples,
            grid,
            seed,
            out,
        } => {
            let f = field.build()?;
            let grid = parse_grid(&grid)?;
            let report = sample_charsum_report(&f, nu, samples, &grid, seed)?;
            let mut buf = Vec::new();
            write_charsum_csv(&report, &mut buf)?;
            eprintln!(
                "q = {}, nu = {}: max |lhs|/rhs = {}",
                report.q, report.nu, report.max_ratio
            );
            manifest.field = Some((&f).into());
            manifest.seed = Some(seed);
            emit(out.out.as_deref(), &String::from_utf8(buf)?, manifest)?;
            Ok(0)
        }
        Command::FilterStats {
            field,
            epsilon,
            samples,
            seed,
            out,
        } => {
            let f = field.build()?;
            let stats = sample_filter_stats(&f, epsilon, samples, seed)?;
            let mut buf = Vec::new();
            write_filter_csv(&stats, &mut buf)?;
            eprintln!(
                "q = {}, #V = {}: max #U/sqrt(q) = {}",
                stats.q, stats.v_size, stats.max_ratio_to_sqrt_q
            );
            manifest.field = Some((&f).into());
            manifest.seed = Some(seed);
            emit(out.out.as_deref(), &String::from_utf8(buf)?, manifest)?;
            Ok(0)
        }
        Command::Window { p, out } => {
            let (lower, upper) = sarkozy_window(p)?;
            emit(
                out.out.as_deref(),
                &json(&WindowOutput { p, lower, upper })?,
                manifest,
            )?;
            Ok(0)
        }
        Command::Verify { certificate } => {
            let text = std::fs::read_to_string(&certificate)
                .with_context(|| format!("reading {}", certificate.display()))?;
            let doc = CertificateDocument::from_json(&text)?;
            let outcome = verify_document(&doc)?;
            print!("{}", json(&outcome)?);
            for failure in &outcome.failures {
                eprintln!("rejected: {failure}");
            }
            Ok(if outcome.verified { 0 } else { 1 })
        }
    }
}
