//! Closed formulas for the ranks of `HF^(S^3_{p/q}(K), [i])`.

use num_integer::Integer;
use thiserror::Error;

use crate::knot::KnotInvariants;
use crate::slope::{excess_rank, phi, window_sum, SlopeContext, SlopeError, SpinC};
use crate::Inconsistency;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("knot has nu = 0 but no v0h0 rank")]
    MissingFlag,
    #[error("profile for {ctx} needs {expected} entries, got {got}")]
    LengthMismatch {
        ctx: SlopeContext,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Slope(#[from] SlopeError),
    #[error(transparent)]
    Inconsistent(#[from] Inconsistency),
}

/// Ranks of `HF^` for every spin^c class `[0], ..., [|p| - 1]` of a surgery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile {
    ctx: SlopeContext,
    ranks: Vec<i64>,
}

impl RankProfile {
    /// Wraps externally supplied ranks, e.g. a published table.
    pub fn from_ranks(ctx: SlopeContext, ranks: Vec<i64>) -> Result<Self, RankError> {
        let expected = ctx.order() as usize;
        if ranks.len() != expected {
            return Err(RankError::LengthMismatch {
                ctx,
                expected,
                got: ranks.len(),
            });
        }
        Ok(RankProfile { ctx, ranks })
    }

    pub fn ctx(&self) -> &SlopeContext {
        &self.ctx
    }

    pub fn ranks(&self) -> &[i64] {
        &self.ranks
    }

    pub fn get(&self, i: SpinC) -> i64 {
        self.ranks[i.value() as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (SpinC, i64)> + '_ {
        self.ctx.spincs().zip(self.ranks.iter().copied())
    }

    pub fn total(&self) -> i64 {
        self.ranks.iter().sum()
    }
}

/// Rank of `HF^(S^3_{p/q}(K), [i])` for every class, by the case split on
/// `nu`, the sign of `p` and `(2 nu - 1) q` versus `p`.
pub fn rank_per_spinc(knot: &KnotInvariants, ctx: &SlopeContext) -> Result<RankProfile, RankError> {
    let ranks = ctx
        .spincs()
        .map(|i| rank_of_class(knot, ctx, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RankProfile { ctx: *ctx, ranks })
}

fn rank_of_class(knot: &KnotInvariants, ctx: &SlopeContext, i: SpinC) -> Result<i64, RankError> {
    let (p, q, nu) = (ctx.p(), ctx.q(), knot.nu);
    let excess = excess_rank(ctx, i, knot);

    if nu == 0 {
        let flag = knot.v0h0_rank.ok_or(RankError::MissingFlag)?;
        return Ok(if p < 0 && flag == 2 && phi(ctx, i.value(), 0) > 0 {
            -1 + excess
        } else {
            1 + excess
        });
    }

    let width = (2 * nu - 1) * q;
    if p < 0 {
        return Ok(1 + 2 * window_sum(ctx, i, nu)? + excess);
    }
    let large = 1 + excess;
    if width < p {
        return Ok(large);
    }
    let small = -1 + 2 * window_sum(ctx, i, nu)? + excess;
    if width == p && small != large {
        // both branches apply on the boundary
        return Err(Inconsistency::new(format!(
            "boundary (2nu-1)q = p at {ctx}, {i}: branches give {large} and {small}"
        ))
        .into());
    }
    Ok(small)
}

/// The integer-surgery specialization (`q = 1`), computed from the residue
/// sets `I_[i] = { s : |s| < g, s = i mod p }` and
/// `J = { [-nu + j] : j = 1..r }` where `2 nu - 1 = n |p| + r`.
pub fn rank_integer_surgery(knot: &KnotInvariants, p: i64) -> Result<RankProfile, RankError> {
    let ctx = SlopeContext::new(p, 1)?;
    let order = ctx.order();
    let nu = knot.nu;
    let (n, r) = (2 * nu - 1).div_mod_floor(&order);
    let in_j = |i: i64| (1..=r).any(|j| (j - nu - i).rem_euclid(order) == 0);

    let mut ranks = Vec::with_capacity(order as usize);
    for i in 0..order {
        let sum = residue_excess(knot, order, i);
        let rank = if nu > 0 {
            match (p > 0 && 2 * nu - 1 <= p, p > 0, in_j(i)) {
                (true, _, _) => 1 + sum,
                (false, true, true) => 2 * n + 1 + sum,
                (false, true, false) => 2 * n - 1 + sum,
                (false, false, true) => 2 * n + 3 + sum,
                (false, false, false) => 2 * n + 1 + sum,
            }
        } else {
            let flag = knot.v0h0_rank.ok_or(RankError::MissingFlag)?;
            if p < 0 && flag == 2 && i == 0 {
                -1 + sum
            } else {
                1 + sum
            }
        };
        ranks.push(rank);
    }
    Ok(RankProfile { ctx, ranks })
}

/// `sum_{s in I_[i]} (rank H_*(A_s) - 1)` for integer surgery of order `|p|`.
pub fn residue_excess(knot: &KnotInvariants, order: i64, i: i64) -> i64 {
    knot.a_ranks
        .iter()
        .filter(|(&s, _)| (s - i).rem_euclid(order) == 0)
        .map(|(_, &r)| r - 1)
        .sum()
}

/// Total rank of `HF^(S^3_{p/q}(K))`.
///
/// For `nu = 0`, `p < 0` with `rk (v_0 + h_0)_* = 2` the classes hitting
/// filtration 0, `min(q, |p|)` of them, each lose 2.
pub fn total_rank(knot: &KnotInvariants, ctx: &SlopeContext) -> i64 {
    let (p, q, nu) = (ctx.p(), ctx.q(), knot.nu);
    let sigma = knot.total_excess();
    if nu > 0 || p > 0 {
        p + 2 * ((2 * nu - 1) * q - p).max(0) + q * sigma
    } else {
        let base = p.abs() + q * sigma;
        if knot.v0h0_rank == Some(2) {
            base - 2 * q.min(p.abs())
        } else {
            base
        }
    }
}

/// Rank differences `rho_i = rk[i] - rk[i-1]` and the dual pairing
/// `i <-> i~ = q - i (mod p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpStructure {
    ctx: SlopeContext,
    /// `rho_0`, the rank at `[0]`.
    pub base: i64,
    /// `rho_i` for `i = 1..|p|`, stored at index `i - 1`.
    pub rho: Vec<i64>,
    /// Each unordered dual pair once, as `(i, i~)` with `i <= i~`.
    pub dual_pairs: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum JumpViolation {
    #[error("{count} nonzero jumps, more than 2g - 1 = {bound}")]
    TooManyJumps { count: usize, bound: i64 },
    #[error("{count} nonzero jumps away from q~, more than 2g - 2 = {bound}")]
    TooManyPaired { count: usize, bound: i64 },
    #[error("rho_{i} = {rho_i} but its dual rho_{dual} = {rho_dual}")]
    DualNotOpposite {
        i: i64,
        dual: i64,
        rho_i: i64,
        rho_dual: i64,
    },
    #[error("pair ({i}, {i_dual}) encloses {j} but not its dual {j_dual}")]
    NotNested {
        i: i64,
        i_dual: i64,
        j: i64,
        j_dual: i64,
    },
}

impl JumpStructure {
    pub fn ctx(&self) -> &SlopeContext {
        &self.ctx
    }

    /// `rho_i` for `i` in `1..|p|`.
    pub fn jump(&self, i: i64) -> i64 {
        self.rho[(i - 1) as usize]
    }

    pub fn nonzero_jumps(&self) -> usize {
        self.rho.iter().filter(|&&r| r != 0).count()
    }

    /// Checks the structure that holds whenever `|p| >= 2g + 1`: at most
    /// `2g - 1` nonzero jumps, all but the one at `q~` in opposite dual
    /// pairs, and dual pairs nested. Quadratic in `|p|`.
    pub fn violations(&self, genus: i64) -> Vec<JumpViolation> {
        let order = self.ctx.order();
        let mut out = Vec::new();
        if order < 2 * genus + 1 || order < 2 {
            return out;
        }
        let q_tilde = self.ctx.q_tilde().expect("|p| > 1");

        // a genus 0 knot has no jumps at all
        let (bound, paired_bound) = ((2 * genus - 1).max(0), (2 * genus - 2).max(0));
        let count = self.nonzero_jumps();
        if count as i64 > bound {
            out.push(JumpViolation::TooManyJumps { count, bound });
        }
        let paired = (1..order)
            .filter(|&i| i != q_tilde && self.jump(i) != 0)
            .count();
        if paired as i64 > paired_bound {
            out.push(JumpViolation::TooManyPaired {
                count: paired,
                bound: paired_bound,
            });
        }
        for &(i, dual) in &self.dual_pairs {
            let (rho_i, rho_dual) = (self.jump(i), self.jump(dual));
            if rho_dual != -rho_i {
                out.push(JumpViolation::DualNotOpposite {
                    i,
                    dual,
                    rho_i,
                    rho_dual,
                });
            }
        }
        for &(i, i_dual) in &self.dual_pairs {
            for j in (i + 1)..i_dual {
                let Some(j_dual) = self.ctx.dual(j) else { continue };
                if !(i < j_dual && j_dual < i_dual) {
                    out.push(JumpViolation::NotNested {
                        i,
                        i_dual,
                        j,
                        j_dual,
                    });
                }
            }
        }
        out
    }
}

/// Differences the profile and, when `|p| >= 2g + 1`, checks every jump
/// against its closed form in `q_bar`. A mismatch is an internal bug.
pub fn rank_jumps(profile: &RankProfile, knot: &KnotInvariants) -> Result<JumpStructure, RankError> {
    let ctx = *profile.ctx();
    let order = ctx.order();
    let ranks = profile.ranks();
    let rho: Vec<i64> = ranks.windows(2).map(|w| w[1] - w[0]).collect();
    let dual_pairs = (1..order)
        .filter_map(|i| ctx.dual(i).map(|d| (i, d)))
        .filter(|&(i, d)| i <= d)
        .collect();
    let jumps = JumpStructure {
        ctx,
        base: ranks[0],
        rho,
        dual_pairs,
    };

    if order > 2 * knot.genus && order > 1 {
        for i in 1..order {
            if let Some(expected) = predicted_jump(knot, &ctx, i) {
                let got = jumps.jump(i);
                if got != expected {
                    return Err(Inconsistency::new(format!(
                        "jump rho_{i} at {ctx}: profile gives {got}, closed form gives {expected}"
                    ))
                    .into());
                }
            }
        }
    }
    Ok(jumps)
}

/// Closed form for `rho_i`, `i` in `1..|p|`:
///
/// ```text
/// sum_k (rk H_*(A_{i q_bar + p k}) - rk H_*(A_{i q_bar - 1 + p k}))
/// ```
///
/// plus `+2` at `i = (1 - nu) q` and `-2` at `i = nu q` (mod p) when
/// `nu > 0` and `p < 0` or `0 < p <= (2 nu - 1) q`. The second part needs
/// `|p| >= 2g + 1`. Returns `None` for `nu = 0`, `p < 0`,
/// `rk (v_0 + h_0)_* = 2`, where no such formula holds.
pub fn predicted_jump(knot: &KnotInvariants, ctx: &SlopeContext, i: i64) -> Option<i64> {
    let (p, q, nu) = (ctx.p(), ctx.q(), knot.nu);
    let order = ctx.order();
    if nu == 0 && p < 0 && knot.v0h0_rank == Some(2) {
        return None;
    }
    let c = (i * ctx.q_bar()).rem_euclid(order);
    let base = residue_excess(knot, order, c) - residue_excess(knot, order, c - 1);
    let shifted = nu > 0 && (p < 0 || p <= (2 * nu - 1) * q);
    if !shifted {
        return Some(base);
    }
    let congruent = |a: i64| (i - a).rem_euclid(order) == 0;
    let up = if congruent((1 - nu) * q) { 2 } else { 0 };
    let down = if congruent(nu * q) { 2 } else { 0 };
    Some(base + up - down)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knot_6_2() -> KnotInvariants {
        KnotInvariants::new("6_2", 1, 2, [(1, 3), (-1, 3)], None)
    }

    fn knot_8_20() -> KnotInvariants {
        KnotInvariants::new("8_20", 0, 2, [(1, 3), (-1, 3)], Some(1))
    }

    fn knot_9_47() -> KnotInvariants {
        KnotInvariants::new("-9_47", 1, 3, [(1, 5), (-1, 5), (2, 3), (-2, 3)], None)
    }

    fn ctx(p: i64, q: i64) -> SlopeContext {
        SlopeContext::new(p, q).unwrap()
    }

    #[test]
    fn profile_6_2_five_halves() {
        let prof = rank_per_spinc(&knot_6_2(), &ctx(5, 2)).unwrap();
        assert_eq!(prof.ranks(), &[1, 1, 3, 5, 3]);
        assert_eq!(prof.total(), total_rank(&knot_6_2(), &ctx(5, 2)));
        assert_eq!(total_rank(&knot_6_2(), &ctx(5, 2)), 13);
    }

    #[test]
    fn profile_6_2_negative() {
        let prof = rank_per_spinc(&knot_6_2(), &ctx(-3, 1)).unwrap();
        assert_eq!(prof.ranks(), &[3, 3, 3]);
        assert_eq!(total_rank(&knot_6_2(), &ctx(-3, 1)), 9);
    }

    #[test]
    fn unknot_gives_lens_spaces() {
        let u = KnotInvariants::unknot();
        for (p, q) in [(5, 2), (-7, 3), (1, 4), (7, 3)] {
            let c = ctx(p, q);
            let prof = rank_per_spinc(&u, &c).unwrap();
            assert!(prof.ranks().iter().all(|&r| r == 1));
            assert_eq!(total_rank(&u, &c), p.abs());
        }
    }

    #[test]
    fn profile_8_20() {
        let prof = rank_per_spinc(&knot_8_20(), &ctx(3, 1)).unwrap();
        assert_eq!(prof.ranks(), &[1, 3, 3]);
        assert_eq!(prof.total(), 7);
        assert_eq!(total_rank(&knot_8_20(), &ctx(3, 1)), 7);
    }

    #[test]
    fn integer_surgery_examples() {
        let prof = rank_integer_surgery(&knot_9_47(), 2).unwrap();
        assert_eq!(prof.ranks(), &[5, 9]);
        let prof = rank_integer_surgery(&knot_8_20(), -2).unwrap();
        assert_eq!(prof.ranks(), &[1, 5]);
        // empty I_[i] gives rank 1 in the large-slope branch
        let k = KnotInvariants::new("", 2, 2, [(1, 3), (-1, 3)], None);
        let prof = rank_integer_surgery(&k, 5).unwrap();
        assert_eq!(prof.ranks()[2], 1);
    }

    #[test]
    fn integer_surgery_matches_general_formula() {
        let knots = [
            knot_6_2(),
            knot_8_20(),
            knot_9_47(),
            KnotInvariants::new("", 3, 4, [(0, 3), (1, 5), (-1, 5), (3, 7), (-3, 7)], None),
            KnotInvariants::new("", 0, 2, [(0, 5), (1, 3), (-1, 3)], Some(2)),
            KnotInvariants::new("", 4, 4, [(2, 3), (-2, 3)], None),
        ];
        for k in &knots {
            for p in (-12..=12).filter(|&p| p != 0) {
                let a = rank_integer_surgery(k, p).unwrap();
                let b = rank_per_spinc(k, &ctx(p, 1)).unwrap();
                assert_eq!(a, b, "knot nu={} g={} p={p}", k.nu, k.genus);
            }
        }
    }

    #[test]
    fn boundary_branches_agree() {
        // (2 nu - 1) q = p forces q = 1, p = 2 nu - 1
        let k = KnotInvariants::new("", 2, 3, [(1, 3), (-1, 3), (2, 5), (-2, 5)], None);
        let prof = rank_per_spinc(&k, &ctx(3, 1)).unwrap();
        assert_eq!(prof.total(), total_rank(&k, &ctx(3, 1)));
    }

    #[test]
    fn flag_two_branch() {
        let k = KnotInvariants::new("8_20'", 0, 2, [(0, 3), (1, 3), (-1, 3)], Some(2));
        let c = ctx(-2, 1);
        let prof = rank_per_spinc(&k, &c).unwrap();
        // [0] hits filtration 0: -1 + S = -1 + 2
        assert_eq!(prof.ranks(), &[1, 5]);
        assert_eq!(prof.total(), total_rank(&k, &c));
        let mut flag_one = k.clone();
        flag_one.v0h0_rank = Some(1);
        assert_eq!(rank_per_spinc(&flag_one, &c).unwrap().ranks(), &[3, 5]);
    }

    #[test]
    fn missing_flag() {
        let mut k = knot_8_20();
        k.v0h0_rank = None;
        assert_eq!(rank_per_spinc(&k, &ctx(3, 1)), Err(RankError::MissingFlag));
        assert_eq!(rank_integer_surgery(&k, 3), Err(RankError::MissingFlag));
    }

    #[test]
    fn from_ranks_checks_length() {
        assert!(RankProfile::from_ranks(ctx(7, 4), vec![7, 9, 9, 7, 3, 1, 3]).is_ok());
        assert!(matches!(
            RankProfile::from_ranks(ctx(7, 4), vec![1, 2]),
            Err(RankError::LengthMismatch { expected: 7, got: 2, .. })
        ));
    }

    #[test]
    fn jumps_6_2() {
        let k = knot_6_2();
        let prof = rank_per_spinc(&k, &ctx(5, 2)).unwrap();
        let jumps = rank_jumps(&prof, &k).unwrap();
        assert_eq!(jumps.base, 1);
        assert_eq!(jumps.rho, vec![0, 2, 2, -2]);

        let prof = rank_per_spinc(&k, &ctx(11, 2)).unwrap();
        let jumps = rank_jumps(&prof, &k).unwrap();
        assert!(jumps.nonzero_jumps() <= 3);
        assert!(jumps.violations(k.genus).is_empty());
    }

    #[test]
    fn jumps_with_shifted_closed_form() {
        // nu > 0, p < 0: the +-2 correction terms are exercised
        let k = knot_6_2();
        let prof = rank_per_spinc(&k, &ctx(-5, 1)).unwrap();
        assert_eq!(prof.ranks(), &[3, 3, 1, 1, 3]);
        let jumps = rank_jumps(&prof, &k).unwrap();
        assert_eq!(jumps.rho, vec![0, -2, 0, 2]);
        assert_eq!(predicted_jump(&k, &ctx(-5, 1), 1), Some(0));
    }

    #[test]
    fn unknot_jumps_vanish() {
        let u = KnotInvariants::unknot();
        let prof = rank_per_spinc(&u, &ctx(9, 4)).unwrap();
        let jumps = rank_jumps(&prof, &u).unwrap();
        assert!(jumps.rho.iter().all(|&r| r == 0));
        // single class: nothing to difference
        let prof = rank_per_spinc(&u, &ctx(1, 4)).unwrap();
        assert!(rank_jumps(&prof, &u).unwrap().rho.is_empty());
    }

    #[test]
    fn tampered_profile_is_reported() {
        let k = knot_6_2();
        let c = ctx(11, 2);
        let mut ranks = rank_per_spinc(&k, &c).unwrap().ranks().to_vec();
        ranks[4] += 2;
        let prof = RankProfile::from_ranks(c, ranks).unwrap();
        assert!(matches!(rank_jumps(&prof, &k), Err(RankError::Inconsistent(_))));
    }
}
