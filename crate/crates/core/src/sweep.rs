//! Randomized cross-checks of the closed formulas against the cone oracle,
//! and slope-range tabulation.
//!
//! Pairs are drawn sequentially from a seeded ChaCha stream and checked in
//! parallel; results come back in draw order, so a report depends only on
//! the configuration.

use std::fmt::{self, Write as _};

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::applications::{genus_bounds, GenusContradiction};
use crate::cone::{oracle_rank_profile_with_margin, ConeError, DEFAULT_MARGIN};
use crate::knot::KnotInvariants;
use crate::rank::{rank_jumps, rank_per_spinc, total_rank, JumpViolation, RankError, RankProfile};
use crate::slope::SlopeContext;

/// Environment variable capping the worker count.
pub const THREADS_VAR: &str = "HFSURGERY_THREADS";

pub const MAX_RANDOM_GENUS: i64 = 4;
const ODD_RANKS: [i64; 4] = [1, 3, 5, 7];

/// A random knot: genus uniform in `0..=4`, `nu` uniform in `0..=g`,
/// symmetric ranks from {1, 3, 5, 7} on `|s| < g`, and for `nu = 0` a flag
/// uniform in {1, 2}. Flag 2 needs `rk H_*(A_0) >= 3`, so it redraws that
/// rank from {3, 5, 7}; on the unknot (`g = 0`) the flag is always 1.
pub fn random_knot<R: Rng + ?Sized>(rng: &mut R, name: impl Into<String>) -> KnotInvariants {
    let genus = rng.gen_range(0..=MAX_RANDOM_GENUS);
    let nu = rng.gen_range(0..=genus);
    let mut ranks = Vec::new();
    for s in 0..genus {
        let r = *ODD_RANKS.choose(rng).unwrap();
        ranks.push((s, r));
        if s > 0 {
            ranks.push((-s, r));
        }
    }
    let flag = if nu > 0 {
        None
    } else if genus > 0 && rng.gen_bool(0.5) {
        ranks[0].1 = *ODD_RANKS[1..].choose(rng).unwrap();
        Some(2)
    } else {
        Some(1)
    };
    KnotInvariants::new(name, nu, genus, ranks, flag)
}

/// A reduced slope with `1 <= |p| <= pmax` and `1 <= q <= qmax`, uniform
/// over coprime pairs.
pub fn random_slope<R: Rng + ?Sized>(rng: &mut R, pmax: i64, qmax: i64) -> SlopeContext {
    loop {
        let p = rng.gen_range(1..=pmax.max(1)) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let q = rng.gen_range(1..=qmax.max(1));
        if p.gcd(&q) == 1 {
            return SlopeContext::new(p, q).expect("nonzero reduced slope in range");
        }
    }
}

/// Every reduced slope with `1 <= |p| <= pmax`, `1 <= q <= qmax`, ordered by
/// `p` then `q`.
pub fn slope_range(pmax: i64, qmax: i64) -> Vec<SlopeContext> {
    (-pmax..=pmax)
        .filter(|&p| p != 0)
        .flat_map(|p| (1..=qmax).filter(move |q| p.gcd(q) == 1).map(move |q| (p, q)))
        .filter_map(|(p, q)| SlopeContext::new(p, q).ok())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CheckFailure {
    #[error("closed formula failed: {0}")]
    Formula(RankError),
    #[error("oracle failed: {0}")]
    Oracle(ConeError),
    #[error("formula {formula:?} but oracle {oracle:?}")]
    OracleMismatch { formula: Vec<i64>, oracle: Vec<i64> },
    #[error("profile sums to {sum} but total rank is {closed_form}")]
    TotalMismatch { sum: i64, closed_form: i64 },
    #[error(transparent)]
    DistinctRanks(GenusContradiction),
    #[error("{distinct} distinct ranks exceed the spin^c bound {bound}")]
    SpincBound { distinct: usize, bound: i64 },
    #[error("jump closed form: {0}")]
    JumpClosedForm(RankError),
    #[error("jump structure: {0}")]
    Jump(JumpViolation),
}

/// What [`check_pair`] found for one `(knot, slope)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairOutcome {
    pub knot: KnotInvariants,
    pub ctx: SlopeContext,
    pub profile: Option<RankProfile>,
    /// `|p| >= 2g + 1`, where the jump structure was checked.
    pub large_slope: bool,
    pub failures: Vec<CheckFailure>,
}

impl PairOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every check on one pair: formula against oracle, profile sum against
/// total rank, both bounds on the number of distinct ranks, and for
/// `|p| >= 2g + 1` the jump structure.
pub fn check_pair(knot: &KnotInvariants, ctx: &SlopeContext, window_margin: i64) -> PairOutcome {
    let large_slope = ctx.order() > 2 * knot.genus;
    let mut outcome = PairOutcome {
        knot: knot.clone(),
        ctx: *ctx,
        profile: None,
        large_slope,
        failures: Vec::new(),
    };
    let failures = &mut outcome.failures;

    let profile = match rank_per_spinc(knot, ctx) {
        Ok(p) => p,
        Err(e) => {
            failures.push(CheckFailure::Formula(e));
            return outcome;
        }
    };
    match oracle_rank_profile_with_margin(knot, ctx, window_margin) {
        Ok(oracle) if oracle.ranks() != profile.ranks() => failures.push(CheckFailure::OracleMismatch {
            formula: profile.ranks().to_vec(),
            oracle: oracle.ranks().to_vec(),
        }),
        Ok(_) => {}
        Err(e) => failures.push(CheckFailure::Oracle(e)),
    }
    let closed_form = total_rank(knot, ctx);
    if profile.total() != closed_form {
        failures.push(CheckFailure::TotalMismatch {
            sum: profile.total(),
            closed_form,
        });
    }
    match genus_bounds(&profile, Some(knot.genus)) {
        Ok(report) => {
            let distinct = report.distinct_ranks.len();
            if distinct as i64 > report.spinc_bound {
                failures.push(CheckFailure::SpincBound {
                    distinct,
                    bound: report.spinc_bound,
                });
            }
        }
        Err(e) => failures.push(CheckFailure::DistinctRanks(e)),
    }
    if large_slope {
        match rank_jumps(&profile, knot) {
            Ok(jumps) => failures.extend(jumps.violations(knot.genus).into_iter().map(CheckFailure::Jump)),
            Err(e) => failures.push(CheckFailure::JumpClosedForm(e)),
        }
    }
    outcome.profile = Some(profile);
    outcome
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub count: usize,
    pub pmax: i64,
    pub qmax: i64,
    pub seed: u64,
    pub window_margin: i64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            count: 1000,
            pmax: 20,
            qmax: 9,
            seed: 0,
            window_margin: DEFAULT_MARGIN,
        }
    }
}

/// The `(knot, slope)` pairs a configuration draws, in order.
pub fn draw_pairs(config: &VerifyConfig) -> Vec<(KnotInvariants, SlopeContext)> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.count)
        .map(|n| {
            let knot = random_knot(&mut rng, format!("K{n}"));
            let ctx = random_slope(&mut rng, config.pmax, config.qmax);
            (knot, ctx)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub outcomes: Vec<PairOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.passed()).count()
    }

    pub fn failed(&self) -> usize {
        self.outcomes.len() - self.passed()
    }

    pub fn failures(&self) -> impl Iterator<Item = (usize, &PairOutcome)> {
        self.outcomes.iter().enumerate().filter(|(_, o)| !o.passed())
    }
}

impl fmt::Display for VerifyReport {
    /// Counts, then one line per failing pair.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(f, "seed\t{}", c.seed)?;
        writeln!(f, "pmax\t{}\nqmax\t{}", c.pmax, c.qmax)?;
        writeln!(f, "pairs\t{}", self.outcomes.len())?;
        writeln!(f, "passed\t{}", self.passed())?;
        writeln!(f, "failed\t{}", self.failed())?;
        for (n, o) in self.failures() {
            for failure in &o.failures {
                writeln!(f, "FAIL\t{n}\t{}\t{}\t{failure}", o.ctx, o.knot.to_knot_file().trim_end().replace('\n', "; "))?;
            }
        }
        Ok(())
    }
}

/// Draws `config.count` pairs and checks them all.
pub fn verify(config: &VerifyConfig) -> VerifyReport {
    let pairs = draw_pairs(config);
    let outcomes = with_pool(|| {
        pairs
            .par_iter()
            .map(|(knot, ctx)| check_pair(knot, ctx, config.window_margin))
            .collect()
    });
    VerifyReport {
        config: *config,
        outcomes,
    }
}

/// Profiles of one knot over [`slope_range`], with the total rank.
pub fn tabulate(knot: &KnotInvariants, pmax: i64, qmax: i64) -> Vec<(SlopeContext, Result<RankProfile, RankError>)> {
    let slopes = slope_range(pmax, qmax);
    with_pool(|| {
        slopes
            .par_iter()
            .map(|ctx| (*ctx, rank_per_spinc(knot, ctx)))
            .collect()
    })
}

/// TSV rows `p/q<TAB>ranks<TAB>total` for [`tabulate`]'s output.
pub fn render_table(rows: &[(SlopeContext, RankProfile)]) -> String {
    let mut out = String::new();
    for (ctx, profile) in rows {
        let ranks: Vec<String> = profile.ranks().iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{ctx}\t{}\t{}", ranks.join(","), profile.total());
    }
    out
}

/// Runs `job` on a pool capped by `HFSURGERY_THREADS` when it is set to a
/// positive integer, otherwise on rayon's global pool.
fn with_pool<T: Send>(job: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    match threads.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(job),
        None => job(),
    }
}
