//! Knot-level Floer input data and the line-oriented knot file format.
//!
//! A knot enters every formula only through a handful of numbers: the
//! invariant `nu`, the Seifert genus, the ranks of `H_*(A_s)` for
//! `|s| < genus`, and (when `nu == 0`) the rank of `(v_0 + h_0)_*`.
//!
//! ```text
//! # 6_2
//! name 6_2
//! nu 1
//! genus 2
//! rank 1 3
//! rank -1 3
//! ```
//!
//! Knots with `nu < 0` are not accepted. Supply the invariants of the
//! mirror knot instead and negate the slope: `S^3_{p/q}(-K)` is
//! `-S^3_{-p/q}(K)`, which has the same ranks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest accepted genus.
pub const MAX_GENUS: i64 = 1_000;
/// Largest accepted value of a single `rank` line.
pub const MAX_RANK: i64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotInvariants {
    pub name: String,
    pub nu: i64,
    pub genus: i64,
    /// Ranks of `H_*(A_s)` that differ from the default of 1. Keys are `s`.
    pub a_ranks: BTreeMap<i64, i64>,
    /// Rank of `(v_0 + h_0)_*`, one of 1 or 2. Present exactly when `nu == 0`.
    pub v0h0_rank: Option<u8>,
}

/// One violated rule of [`KnotInvariants::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Diagnostic {
    #[error("nu must be non-negative (got {0}); use the mirror knot and the negated slope")]
    NegativeNu(i64),
    #[error("genus must be non-negative (got {0})")]
    NegativeGenus(i64),
    #[error("genus {0} exceeds the supported maximum {MAX_GENUS}")]
    GenusTooLarge(i64),
    #[error("nu {nu} exceeds genus {genus}")]
    NuExceedsGenus { nu: i64, genus: i64 },
    #[error("rank of H_*(A_{s}) must be at least 1 (got {rank})")]
    NonPositiveRank { s: i64, rank: i64 },
    #[error("rank of H_*(A_{s}) is {rank}, above the supported maximum {MAX_RANK}")]
    RankTooLarge { s: i64, rank: i64 },
    #[error("rank of H_*(A_{s}) must be 1 since |s| >= genus {genus} (got {rank})")]
    RankOutsideGenus { s: i64, rank: i64, genus: i64 },
    #[error("asymmetric ranks: H_*(A_{s}) has rank {rank} but H_*(A_{mirror}) has rank {mirror_rank}", mirror = -s)]
    AsymmetricRank { s: i64, rank: i64, mirror_rank: i64 },
    #[error("nu is 0 but no v0h0 rank was given")]
    MissingV0h0,
    #[error("v0h0 is only meaningful when nu is 0 (nu is {0})")]
    UnexpectedV0h0(i64),
    #[error("v0h0 must be 1 or 2 (got {0})")]
    BadV0h0(u8),
    #[error("v0h0 rank {flag} exceeds the rank {rank0} of H_*(A_0)")]
    V0h0ExceedsRank { flag: u8, rank0: i64 },
    #[error("rank of H_*(A_{s}) is even ({rank})")]
    EvenRank { s: i64, rank: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid knot data: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
pub struct InvalidKnot(pub Vec<Diagnostic>);

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KnotFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing required field `{0}`")]
    MissingField(&'static str),
    #[error(transparent)]
    Invalid(#[from] InvalidKnot),
}

impl KnotInvariants {
    /// Builds a record without validating it. Rank entries equal to 1 are dropped.
    pub fn new(
        name: impl Into<String>,
        nu: i64,
        genus: i64,
        ranks: impl IntoIterator<Item = (i64, i64)>,
        v0h0_rank: Option<u8>,
    ) -> Self {
        let a_ranks = ranks.into_iter().filter(|&(_, r)| r != 1).collect();
        KnotInvariants {
            name: name.into(),
            nu,
            genus,
            a_ranks,
            v0h0_rank,
        }
    }

    pub fn unknot() -> Self {
        KnotInvariants::new("U", 0, 0, [], Some(1))
    }

    /// Effective rank of `H_*(A_s)`; 1 for every `s` not listed.
    pub fn rank(&self, s: i64) -> i64 {
        self.a_ranks.get(&s).copied().unwrap_or(1)
    }

    /// `rank(s) - 1`, the excess contributed by `A_s`.
    pub fn excess(&self, s: i64) -> i64 {
        self.rank(s) - 1
    }

    /// `sum_s (rank(s) - 1)` over all `s`.
    pub fn total_excess(&self) -> i64 {
        self.a_ranks.values().map(|r| r - 1).sum()
    }

    /// The `s` values with `|s| < genus`, the only ones that can carry excess.
    pub fn support(&self) -> impl Iterator<Item = i64> {
        let g = self.genus.max(0);
        (1 - g)..g
    }

    /// Checks every structural rule. On success returns the warnings: even
    /// ranks, which are rejected outright when `strict` is set.
    pub fn validate(&self, strict: bool) -> Result<Vec<Diagnostic>, InvalidKnot> {
        let mut errors = Vec::new();
        let mut warnings = Vec::new();

        if self.nu < 0 {
            errors.push(Diagnostic::NegativeNu(self.nu));
        }
        if self.genus < 0 {
            errors.push(Diagnostic::NegativeGenus(self.genus));
        } else if self.genus > MAX_GENUS {
            errors.push(Diagnostic::GenusTooLarge(self.genus));
        }
        if self.nu > self.genus {
            errors.push(Diagnostic::NuExceedsGenus {
                nu: self.nu,
                genus: self.genus,
            });
        }

        for (&s, &rank) in &self.a_ranks {
            if rank < 1 {
                errors.push(Diagnostic::NonPositiveRank { s, rank });
                continue;
            }
            if rank > MAX_RANK {
                errors.push(Diagnostic::RankTooLarge { s, rank });
            }
            if s.abs() >= self.genus && rank != 1 {
                errors.push(Diagnostic::RankOutsideGenus {
                    s,
                    rank,
                    genus: self.genus,
                });
            }
            // report each asymmetric pair once
            let mirror_rank = self.rank(-s);
            if mirror_rank != rank && (s > 0 || !self.a_ranks.contains_key(&-s)) {
                errors.push(Diagnostic::AsymmetricRank {
                    s,
                    rank,
                    mirror_rank,
                });
            }
            if rank % 2 == 0 {
                let d = Diagnostic::EvenRank { s, rank };
                if strict {
                    errors.push(d);
                } else {
                    warnings.push(d);
                }
            }
        }

        match (self.nu, self.v0h0_rank) {
            (0, None) => errors.push(Diagnostic::MissingV0h0),
            (0, Some(flag)) if flag != 1 && flag != 2 => errors.push(Diagnostic::BadV0h0(flag)),
            (0, Some(flag)) => {
                // (v_0 + h_0)_* is a map out of H_*(A_0)
                let rank0 = self.rank(0);
                if i64::from(flag) > rank0 {
                    errors.push(Diagnostic::V0h0ExceedsRank { flag, rank0 });
                }
            }
            (nu, Some(_)) if nu > 0 => errors.push(Diagnostic::UnexpectedV0h0(nu)),
            _ => {}
        }

        if errors.is_empty() {
            Ok(warnings)
        } else {
            Err(InvalidKnot(errors))
        }
    }

    /// Renders the record in the knot file format accepted by [`parse_knot_file`].
    pub fn to_knot_file(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for KnotInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.name.is_empty() {
            writeln!(f, "name {}", self.name)?;
        }
        writeln!(f, "nu {}", self.nu)?;
        writeln!(f, "genus {}", self.genus)?;
        for (s, r) in &self.a_ranks {
            writeln!(f, "rank {s} {r}")?;
        }
        if let Some(flag) = self.v0h0_rank {
            writeln!(f, "v0h0 {flag}")?;
        }
        Ok(())
    }
}

impl FromStr for KnotInvariants {
    type Err = KnotFileError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_knot_file(text)
    }
}

/// Parses and validates (non-strict) a knot file.
pub fn parse_knot_file(text: &str) -> Result<KnotInvariants, KnotFileError> {
    let mut name: Option<String> = None;
    let mut nu: Option<i64> = None;
    let mut genus: Option<i64> = None;
    let mut v0h0: Option<u8> = None;
    let mut ranks: BTreeMap<i64, i64> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = content.split_whitespace();
        let Some(key) = tokens.next() else { continue };
        let args: Vec<&str> = tokens.collect();
        let syntax = |message: String| KnotFileError::Syntax { line, message };
        let expect_args = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(syntax(format!(
                    "`{key}` takes {n} argument{}, found {}",
                    if n == 1 { "" } else { "s" },
                    args.len()
                )))
            }
        };
        let int = |tok: &str| {
            tok.parse::<i64>()
                .map_err(|_| syntax(format!("expected an integer, found `{tok}`")))
        };
        let once = |seen: bool| {
            if seen {
                Err(syntax(format!("duplicate `{key}` line")))
            } else {
                Ok(())
            }
        };

        match key {
            "name" => {
                once(name.is_some())?;
                if args.is_empty() {
                    return Err(syntax("`name` needs a value".into()));
                }
                name = Some(args.join(" "));
            }
            "nu" => {
                once(nu.is_some())?;
                expect_args(1)?;
                nu = Some(int(args[0])?);
            }
            "genus" => {
                once(genus.is_some())?;
                expect_args(1)?;
                genus = Some(int(args[0])?);
            }
            "rank" => {
                expect_args(2)?;
                let s = int(args[0])?;
                let r = int(args[1])?;
                if r < 1 {
                    return Err(syntax(format!("rank must be at least 1, found {r}")));
                }
                if ranks.insert(s, r).is_some() {
                    return Err(syntax(format!("duplicate `rank {s}` line")));
                }
            }
            "v0h0" => {
                once(v0h0.is_some())?;
                expect_args(1)?;
                v0h0 = match args[0] {
                    "1" => Some(1),
                    "2" => Some(2),
                    other => return Err(syntax(format!("v0h0 must be 1 or 2, found `{other}`"))),
                };
            }
            other => return Err(syntax(format!("unknown key `{other}`"))),
        }
    }

    let knot = KnotInvariants::new(
        name.unwrap_or_default(),
        nu.ok_or(KnotFileError::MissingField("nu"))?,
        genus.ok_or(KnotFileError::MissingField("genus"))?,
        ranks,
        v0h0,
    );
    knot.validate(false)?;
    Ok(knot)
}
