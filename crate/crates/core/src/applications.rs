//! Consequences of a rank profile: lower bounds on Dehn surgery genera and
//! obstructions to reducible integer surgeries (the Cabling Conjecture).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::knot::KnotInvariants;
use crate::rank::{residue_excess, RankProfile};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusBoundReport {
    /// `|H_1(Y)| = |p|`; every input here is a surgery space.
    pub h1_order: i64,
    /// The set `R` of distinct ranks.
    pub distinct_ranks: BTreeSet<i64>,
    /// `(|p| + 1) / 2` for odd `p`, `(|p| + 2) / 2` for even `p`.
    pub spinc_bound: i64,
    /// `min(g + 1, spinc_bound)` when a genus is known, else `spinc_bound`.
    pub r_cardinality_bound: i64,
    /// `|R| - 1`, a lower bound on the rational surgery genus.
    pub g_q_lower: i64,
    /// Number of L-structures (classes of rank 1).
    pub l_structures: i64,
    /// Least `g` with `2g - 1 >= |p| - l`; 0 for an L-space.
    pub g_z_lower: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{distinct} distinct ranks exceed g + 1 = {} for a genus {genus} knot", genus + 1)]
pub struct GenusContradiction {
    pub distinct: usize,
    pub genus: i64,
}

/// Distinct-rank statistics of a profile. `genus`, when given, is the genus
/// of the knot the profile came from; more than `genus + 1` distinct ranks
/// is impossible and reported as an error.
pub fn genus_bounds(profile: &RankProfile, genus: Option<i64>) -> Result<GenusBoundReport, GenusContradiction> {
    let order = profile.ctx().order();
    let distinct_ranks: BTreeSet<i64> = profile.ranks().iter().copied().collect();
    let cardinality = distinct_ranks.len() as i64;
    let spinc_bound = order / 2 + 1;
    if let Some(g) = genus {
        if cardinality > g + 1 {
            return Err(GenusContradiction {
                distinct: distinct_ranks.len(),
                genus: g,
            });
        }
    }
    let l_structures = profile.ranks().iter().filter(|&&r| r == 1).count() as i64;
    let g_z_lower = if l_structures == order {
        0
    } else {
        // ceil((|p| - l + 1) / 2)
        (order - l_structures + 2) / 2
    };
    Ok(GenusBoundReport {
        h1_order: order,
        r_cardinality_bound: genus.map_or(spinc_bound, |g| (g + 1).min(spinc_bound)),
        spinc_bound,
        g_q_lower: cardinality - 1,
        l_structures,
        g_z_lower,
        distinct_ranks,
    })
}

impl GenusBoundReport {
    pub fn to_tsv(&self) -> String {
        let ranks = join(self.distinct_ranks.iter());
        format!(
            "h1_order\t{}\ndistinct_ranks\t{ranks}\nr_cardinality\t{}\nr_cardinality_bound\t{}\n\
             spinc_bound\t{}\ng_q_lower\t{}\nl_structures\t{}\ng_z_lower\t{}\n",
            self.h1_order,
            self.distinct_ranks.len(),
            self.r_cardinality_bound,
            self.spinc_bound,
            self.g_q_lower,
            self.l_structures,
            self.g_z_lower,
        )
    }

    pub fn to_text(&self) -> String {
        let ranks = join(self.distinct_ranks.iter());
        format!(
            "|H_1(Y)|             {}\n\
             distinct ranks R     {{{ranks}}} ({} values, at most {})\n\
             rational genus       g_Q >= {}\n\
             L-structures         {}\n\
             integral genus       g_Z >= {}\n",
            self.h1_order,
            self.distinct_ranks.len(),
            self.r_cardinality_bound,
            self.g_q_lower,
            self.l_structures,
            self.g_z_lower,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CablingError {
    #[error("slope {p} is outside 1 < |p| <= 2g - 1 = {}", 2 * genus - 1)]
    OutOfRange { p: i64, genus: i64 },
}

/// The list `L` attached to integer surgery `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CablingList {
    pub p: i64,
    /// All `|p|` entries: `A` followed by `B` in the split form, otherwise
    /// indexed by `i = 0..|p|`.
    pub entries: Vec<i64>,
    /// `(A, B)` when `nu > 0` and `p < 2 nu - 1`.
    pub split: Option<(Vec<i64>, Vec<i64>)>,
}

impl CablingList {
    /// Entry multiplicities, keyed by value.
    pub fn multiplicities(&self) -> BTreeMap<i64, usize> {
        let mut counts = BTreeMap::new();
        for &e in &self.entries {
            *counts.entry(e).or_insert(0) += 1;
        }
        counts
    }

    /// Divisors `a > 1` of `|p|` that divide every multiplicity.
    pub fn passing_divisors(&self) -> Vec<i64> {
        let counts = self.multiplicities();
        (2..=self.p.abs())
            .filter(|a| self.p % a == 0)
            .filter(|&a| counts.values().all(|&c| c as i64 % a == 0))
            .collect()
    }
}

pub fn cabling_list(knot: &KnotInvariants, p: i64) -> Result<CablingList, CablingError> {
    let genus = knot.genus;
    let order = p.abs();
    if order <= 1 || order > 2 * genus - 1 {
        return Err(CablingError::OutOfRange { p, genus });
    }
    let nu = knot.nu;
    let sum = |i: i64| residue_excess(knot, order, i);

    if nu == 0 || 2 * nu - 1 <= p {
        return Ok(CablingList {
            p,
            entries: (0..order).map(sum).collect(),
            split: None,
        });
    }
    let r = (2 * nu - 1).rem_euclid(order);
    let a: Vec<i64> = (1..=r).map(|j| 2 + sum(-nu + j)).collect();
    let b: Vec<i64> = (r + 1..=order).map(|j| sum(-nu + j)).collect();
    let entries = a.iter().chain(&b).copied().collect();
    Ok(CablingList {
        p,
        entries,
        split: Some((a, b)),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeVerdict {
    pub list: CablingList,
    pub passing_divisors: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CablingReport {
    pub slopes: Vec<SlopeVerdict>,
    /// True iff no slope in range has a passing divisor: no integer surgery
    /// on the knot is reducible unless the knot is a cable.
    pub obstructed: bool,
}

/// Sweeps every integer slope `1 < |p| <= 2g - 1`, in the order 2, -2, 3, -3, ...
pub fn cabling_obstruction(knot: &KnotInvariants) -> CablingReport {
    let slopes: Vec<SlopeVerdict> = (2..=2 * knot.genus - 1)
        .flat_map(|m| [m, -m])
        .map(|p| {
            let list = cabling_list(knot, p).expect("slope in range");
            SlopeVerdict {
                passing_divisors: list.passing_divisors(),
                list,
            }
        })
        .collect();
    let obstructed = slopes.iter().all(|v| v.passing_divisors.is_empty());
    CablingReport { slopes, obstructed }
}

impl CablingReport {
    pub fn verdict(&self) -> &'static str {
        if self.obstructed {
            "obstructed"
        } else {
            "not obstructed"
        }
    }

    /// `p<TAB>L<TAB>passing divisors` per slope, then a verdict line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for v in &self.slopes {
            let divisors = if v.passing_divisors.is_empty() {
                "-".to_string()
            } else {
                join(v.passing_divisors.iter())
            };
            let _ = writeln!(out, "{}\t{}\t{divisors}", v.list.p, join(v.list.entries.iter()));
        }
        let _ = writeln!(out, "verdict\t{}", self.verdict());
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.slopes {
            let list = match &v.list.split {
                Some((a, b)) => format!("A = {{{}}}, B = {{{}}}", join(a.iter()), join(b.iter())),
                None => format!("L = {{{}}}", join(v.list.entries.iter())),
            };
            let _ = write!(out, "p = {:>3}   {list}", v.list.p);
            if !v.passing_divisors.is_empty() {
                let _ = write!(out, "   divisible by a = {}", join(v.passing_divisors.iter()));
            }
            out.push('\n');
        }
        let _ = writeln!(out, "verdict: {}", self.verdict());
        out
    }
}

fn join<'a>(items: impl Iterator<Item = &'a i64>) -> String {
    items.map(ToString::to_string).collect::<Vec<_>>().join(",")
}
