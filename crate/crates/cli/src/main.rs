//! `hfsurgery`: ranks of hat Heegaard Floer homology of Dehn surgeries.
//!
//! Exit status is 0 on success, 1 on bad input (unreadable or invalid knot
//! data, malformed slope, usage errors) and 2 when two computations that must
//! agree do not.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hfsurgery::applications::{cabling_obstruction, genus_bounds};
use hfsurgery::cone::{oracle_rank_profile_with_margin, ConeError, DEFAULT_MARGIN};
use hfsurgery::rank::{rank_jumps, RankError};
use hfsurgery::sweep::{render_table, tabulate, verify, VerifyConfig};
use hfsurgery::{parse_knot_file, rank_per_spinc, total_rank, KnotInvariants, RankProfile, SlopeContext};

#[derive(Parser, Debug)]
#[command(name = "hfsurgery", version, about = "Heegaard Floer ranks of p/q Dehn surgeries on knots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct KnotArgs {
    /// Knot data file
    #[arg(long)]
    knot: PathBuf,
    /// Reject even ranks instead of warning about them
    #[arg(long)]
    strict: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank of every spin^c class, as `i<TAB>rank` rows
    Ranks {
        #[command(flatten)]
        knot: KnotArgs,
        /// Slope `P` or `P/Q`
        #[arg(long, allow_hyphen_values = true)]
        slope: String,
        /// Add a column computed by the mapping-cone oracle
        #[arg(long)]
        oracle: bool,
        /// Oracle window beyond the minimal truncation
        #[arg(long, default_value_t = DEFAULT_MARGIN, value_parser = clap::value_parser!(i64).range(0..))]
        window_margin: i64,
        #[arg(long)]
        pretty: bool,
    },
    /// Total rank
    Total {
        #[command(flatten)]
        knot: KnotArgs,
        #[arg(long, allow_hyphen_values = true)]
        slope: String,
    },
    /// Distinct ranks and Dehn surgery genus lower bounds
    Genus {
        /// Knot data file; needs --slope
        #[arg(long, conflicts_with = "profile", requires = "slope")]
        knot: Option<PathBuf>,
        /// Slope `P` or `P/Q`; optional with --profile
        #[arg(long, allow_hyphen_values = true)]
        slope: Option<String>,
        /// A rank profile given directly, e.g. `7,9,9,7,3,1,3`
        #[arg(long, required_unless_present = "knot")]
        profile: Option<String>,
        /// Genus of the knot behind --profile, if known
        #[arg(long, requires = "profile", value_parser = clap::value_parser!(i64).range(0..))]
        genus: Option<i64>,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        pretty: bool,
    },
    /// Cabling Conjecture lists for every slope 1 < |p| <= 2g - 1
    Cabling {
        #[command(flatten)]
        knot: KnotArgs,
        #[arg(long)]
        pretty: bool,
    },
    /// Compare closed formulas with the oracle on random knots and slopes
    Verify {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(i64).range(1..))]
        pmax: i64,
        #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(i64).range(1..))]
        qmax: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MARGIN, value_parser = clap::value_parser!(i64).range(0..))]
        window_margin: i64,
    },
    /// Profiles of one knot over all slopes with |p| <= pmax, q <= qmax
    Sweep {
        #[command(flatten)]
        knot: KnotArgs,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(i64).range(1..))]
        pmax: i64,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(i64).range(1..))]
        qmax: i64,
        #[arg(long)]
        pretty: bool,
    },
}

#[derive(Debug, PartialEq, Eq)]
enum Failure {
    Invalid(String),
    Internal(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Internal(_) => 2,
        }
    }
}

impl From<RankError> for Failure {
    fn from(e: RankError) -> Self {
        match e {
            RankError::Inconsistent(_) => Failure::Internal(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<ConeError> for Failure {
    fn from(e: ConeError) -> Self {
        match e {
            ConeError::TooLarge { .. } => Failure::Invalid(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err((out, failure)) => {
            print!("{out}");
            match &failure {
                Failure::Invalid(msg) => eprintln!("error: {msg}"),
                Failure::Internal(msg) => eprintln!("internal consistency failure: {msg}"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}

/// Output produced so far travels with a failure, so partial tables still print.
type Outcome = Result<String, (String, Failure)>;

fn bare(failure: Failure) -> (String, Failure) {
    (String::new(), failure)
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Ranks {
            knot,
            slope,
            oracle,
            window_margin,
            pretty,
        } => {
            let k = load_knot(&knot).map_err(bare)?;
            let ctx = parse_slope(&slope).map_err(bare)?;
            ranks(&k, &ctx, oracle.then_some(window_margin), pretty)
        }
        Command::Total { knot, slope } => {
            let k = load_knot(&knot).map_err(bare)?;
            let ctx = parse_slope(&slope).map_err(bare)?;
            let total = total_rank(&k, &ctx);
            let profile = rank_per_spinc(&k, &ctx).map_err(|e| bare(e.into()))?;
            if profile.total() != total {
                return Err(bare(Failure::Internal(format!(
                    "total rank {total} but the profile sums to {}",
                    profile.total()
                ))));
            }
            Ok(format!("{total}\n"))
        }
        Command::Genus {
            knot,
            slope,
            profile,
            genus,
            strict,
            pretty,
        } => genus_command(knot, slope, profile, genus, strict, pretty).map_err(bare),
        Command::Cabling { knot, pretty } => {
            let k = load_knot(&knot).map_err(bare)?;
            if k.genus < 1 {
                return Err(bare(Failure::Invalid("the cabling sweep needs genus at least 1".into())));
            }
            let report = cabling_obstruction(&k);
            Ok(if pretty { report.to_text() } else { report.to_tsv() })
        }
        Command::Verify {
            count,
            pmax,
            qmax,
            seed,
            window_margin,
        } => {
            let report = verify(&VerifyConfig {
                count,
                pmax,
                qmax,
                seed,
                window_margin,
            });
            let out = report.to_string();
            match report.failed() {
                0 => Ok(out),
                n => Err((out, Failure::Internal(format!("{n} of {count} pairs failed")))),
            }
        }
        Command::Sweep {
            knot,
            pmax,
            qmax,
            pretty,
        } => {
            let k = load_knot(&knot).map_err(bare)?;
            let rows = tabulate(&k, pmax, qmax)
                .into_iter()
                .map(|(ctx, r)| r.map(|p| (ctx, p)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| bare(e.into()))?;
            let table = render_table(&rows);
            Ok(if pretty { align(&table) } else { table })
        }
    }
}

fn ranks(k: &KnotInvariants, ctx: &SlopeContext, oracle_margin: Option<i64>, pretty: bool) -> Outcome {
    let profile = rank_per_spinc(k, ctx).map_err(|e| bare(e.into()))?;
    // a profile with broken jump structure is a bug even without the oracle
    let jumps = rank_jumps(&profile, k).map_err(|e| bare(e.into()))?;
    if let Some(v) = jumps.violations(k.genus).first() {
        return Err(bare(Failure::Internal(v.to_string())));
    }
    let oracle = match oracle_margin {
        Some(margin) => Some(oracle_rank_profile_with_margin(k, ctx, margin).map_err(|e| bare(e.into()))?),
        None => None,
    };

    let mut out = String::new();
    if pretty {
        let _ = writeln!(out, "# {} at {ctx}", k.name);
        out.push_str(if oracle.is_some() { "class\trank\toracle\n" } else { "class\trank\n" });
    }
    for (i, rank) in profile.iter() {
        let _ = write!(out, "{}\t{rank}", i.value());
        if let Some(o) = &oracle {
            let _ = write!(out, "\t{}", o.get(i));
        }
        out.push('\n');
    }
    if pretty {
        out = align(&out);
    }
    match oracle {
        Some(o) if o.ranks() != profile.ranks() => {
            let differing = profile.iter().filter(|&(i, r)| o.get(i) != r).count();
            Err((out, Failure::Internal(format!("oracle disagrees on {differing} classes"))))
        }
        _ => Ok(out),
    }
}

fn genus_command(
    knot: Option<PathBuf>,
    slope: Option<String>,
    profile: Option<String>,
    genus: Option<i64>,
    strict: bool,
    pretty: bool,
) -> Result<String, Failure> {
    let (profile, hint, from_knot) = match (knot, profile) {
        (Some(path), _) => {
            let k = load_knot(&KnotArgs { knot: path, strict })?;
            let ctx = parse_slope(slope.as_deref().unwrap_or_default())?;
            (rank_per_spinc(&k, &ctx)?, Some(k.genus), true)
        }
        (None, Some(text)) => {
            let ranks = parse_profile(&text)?;
            let ctx = match slope {
                Some(s) => parse_slope(&s)?,
                None => SlopeContext::new(ranks.len() as i64, 1).map_err(|e| Failure::Invalid(e.to_string()))?,
            };
            let profile = RankProfile::from_ranks(ctx, ranks).map_err(|e| Failure::Invalid(e.to_string()))?;
            (profile, genus, false)
        }
        (None, None) => return Err(Failure::Invalid("give --knot or --profile".into())),
    };
    let report = genus_bounds(&profile, hint).map_err(|e| {
        if from_knot {
            Failure::Internal(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    })?;
    Ok(if pretty { report.to_text() } else { report.to_tsv() })
}

fn load_knot(args: &KnotArgs) -> Result<KnotInvariants, Failure> {
    let path: &Path = &args.knot;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let knot = parse_knot_file(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    match knot.validate(args.strict) {
        Ok(warnings) => {
            for w in warnings {
                eprintln!("warning: {}: {w}", path.display());
            }
            Ok(knot)
        }
        Err(e) => Err(Failure::Invalid(format!("{}: {e}", path.display()))),
    }
}

fn parse_slope(text: &str) -> Result<SlopeContext, Failure> {
    SlopeContext::parse(text).map_err(|e| Failure::Invalid(e.to_string()))
}

fn parse_profile(text: &str) -> Result<Vec<i64>, Failure> {
    let ranks = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .ok()
                .filter(|&r| r >= 1)
                .ok_or_else(|| Failure::Invalid(format!("bad rank `{t}` in profile")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if ranks.is_empty() {
        return Err(Failure::Invalid("empty profile".into()));
    }
    Ok(ranks)
}

/// Pads TSV columns with spaces.
fn align(tsv: &str) -> String {
    let rows: Vec<Vec<&str>> = tsv
        .lines()
        .map(|l| if l.starts_with('#') { vec![l] } else { l.split('\t').collect() })
        .collect();
    let mut widths: Vec<usize> = Vec::new();
    for row in rows.iter().filter(|r| r.len() > 1) {
        for (n, cell) in row.iter().enumerate() {
            if n >= widths.len() {
                widths.push(0);
            }
            widths[n] = widths[n].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(n, cell)| match widths.get(n) {
                Some(&w) if row.len() > 1 => format!("{cell:>w$}"),
                _ => cell.to_string(),
            })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}
