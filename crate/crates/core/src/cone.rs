//! The truncated mapping cone of `D_{p/q,[i]} : A_[i] -> B_[i]` at the
//! homology level, used as an independent oracle for the closed formulas.
//!
//! `A_[i]` has one block `(s, H_*(A_t))` per `s`, with `t = floor((i + p s)/q)`,
//! and `B_[i]` one rank-1 block per `s`. The vertical map sends block `s` to
//! `B_s` and is nonzero iff `t >= nu`; the horizontal map sends block `s` to
//! `B_{s+1}` and is nonzero iff `t <= -nu`. Every nonzero map has rank 1, so
//! a 0/1 matrix with a fixed choice of basis vector realizes it:
//!
//! * a vertical map reads the first basis vector of its block,
//! * a horizontal map reads the last one,
//! * except on a `t = 0` block of a `nu = 0` knot with `rk (v_0 + h_0)_* = 1`,
//!   where both read the first vector.
//!
//! Outside `[-W, W]` every block has rank 1 and exactly one nonzero map, an
//! isomorphism onto a `B` block nothing else inside the window needs. Those
//! pairs cancel without changing `rk Ker + rk Coker`, so the finite matrix
//! gives the exact answer once `W >= min_window`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::knot::KnotInvariants;
use crate::linalg;
use crate::rank::RankProfile;
use crate::slope::{SlopeContext, SpinC};

/// Default extra width beyond [`min_window`].
pub const DEFAULT_MARGIN: i64 = 2;
/// Largest matrix (rows times columns) the oracle will build.
pub const MAX_CONE_ENTRIES: i64 = 16_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("window {window} is below the minimum {min} for {ctx}, {class}")]
    WindowTooSmall {
        ctx: SlopeContext,
        class: SpinC,
        window: i64,
        min: i64,
    },
    #[error("cone for {ctx}, {class} would need a {rows} x {cols} matrix")]
    TooLarge {
        ctx: SlopeContext,
        class: SpinC,
        rows: i64,
        cols: i64,
    },
    #[error("knot has nu = 0 but no v0h0 rank")]
    MissingFlag,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ABlock {
    /// Position `s` in `A_[i]`.
    pub s: i64,
    /// `floor((i + p s) / q)`.
    pub filtration: i64,
    /// `rk H_*(A_filtration)`.
    pub dim: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeModel {
    pub ctx: SlopeContext,
    pub class: SpinC,
    pub window: i64,
    pub a_blocks: Vec<ABlock>,
    /// Positions `s` of the retained `B` blocks, one matrix row each.
    pub b_blocks: Vec<i64>,
    /// `b_blocks.len()` rows, `sum(dim)` columns, entries 0 or 1.
    pub matrix: Vec<Vec<i64>>,
}

impl ConeModel {
    pub fn a_dim(&self) -> i64 {
        self.a_blocks.iter().map(|b| b.dim).sum()
    }

    /// One line per `B` block, `0`/`1` per `A` basis vector, blocks separated by `|`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (row, s) in self.matrix.iter().zip(&self.b_blocks) {
            let _ = write!(out, "B{s:>4} ");
            let mut col = 0;
            for (k, block) in self.a_blocks.iter().enumerate() {
                if k > 0 {
                    out.push('|');
                }
                for _ in 0..block.dim {
                    out.push(if row[col] != 0 { '1' } else { '0' });
                    col += 1;
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Least `W >= 0` such that every `s > W` and every `s < -W` lies in the
/// acyclic tail: `|t| >= max(g, 1)` with the sign that makes exactly one of
/// the two maps an isomorphism.
pub fn min_window(knot: &KnotInvariants, ctx: &SlopeContext, class: SpinC) -> i64 {
    let m = i128::from(knot.genus.max(1));
    let q = i128::from(ctx.q());
    let order = i128::from(ctx.order());
    let i = i128::from(class.value());
    // with u = s for p > 0 and u = -s for p < 0, t = floor((i + |p| u) / q)
    // t >= m  <=>  u >= ceil((m q - i) / |p|)
    let u_hi = -((i - m * q).div_euclid(order));
    // t <= -m  <=>  u <= floor(((1 - m) q - 1 - i) / |p|)
    let u_lo = ((1 - m) * q - 1 - i).div_euclid(order);
    (u_hi - 1).max(-1 - u_lo).max(0) as i64
}

pub fn build_cone(
    knot: &KnotInvariants,
    ctx: &SlopeContext,
    class: SpinC,
    window: i64,
) -> Result<ConeModel, ConeError> {
    let min = min_window(knot, ctx, class);
    if window < min {
        return Err(ConeError::WindowTooSmall {
            ctx: *ctx,
            class,
            window,
            min,
        });
    }
    let nu = knot.nu;
    let i = class.value();
    // the dropped tail takes B_{-W} (p > 0) or B_{W+2} onwards (p < 0)
    let first_row = if ctx.p() > 0 { 1 - window } else { -window };
    let n_rows = 2 * window + 1 - i64::from(ctx.p() > 0) + i64::from(ctx.p() < 0);
    let too_large = |cols: i64| {
        (i128::from(n_rows) * i128::from(cols) > i128::from(MAX_CONE_ENTRIES)).then_some(
            ConeError::TooLarge {
                ctx: *ctx,
                class,
                rows: n_rows,
                cols,
            },
        )
    };
    // every block has dimension at least 1
    if let Some(err) = too_large(2 * window + 1) {
        return Err(err);
    }

    let a_blocks: Vec<ABlock> = (-window..=window)
        .map(|s| {
            let filtration = ctx.floor_index(i, s);
            ABlock {
                s,
                filtration,
                dim: knot.rank(filtration),
            }
        })
        .collect();
    let cols: i64 = a_blocks.iter().map(|b| b.dim).sum();
    if let Some(err) = too_large(cols) {
        return Err(err);
    }
    let row_of = |s: i64| {
        let r = s - first_row;
        (0..n_rows).contains(&r).then_some(r as usize)
    };

    let mut matrix = vec![vec![0_i64; cols as usize]; n_rows as usize];
    let mut col = 0_usize;
    for block in &a_blocks {
        let first = col;
        let last = col + block.dim as usize - 1;
        let t = block.filtration;
        if t >= nu {
            if let Some(r) = row_of(block.s) {
                matrix[r][first] = 1;
            }
        }
        if t <= -nu {
            let target = if nu == 0 && t == 0 {
                match knot.v0h0_rank {
                    Some(1) => first,
                    Some(_) => last,
                    None => return Err(ConeError::MissingFlag),
                }
            } else {
                last
            };
            if let Some(r) = row_of(block.s + 1) {
                matrix[r][target] = 1;
            }
        }
        col = last + 1;
    }

    Ok(ConeModel {
        ctx: *ctx,
        class,
        window,
        a_blocks,
        b_blocks: (first_row..first_row + n_rows).collect(),
        matrix,
    })
}

/// `rk Ker + rk Coker` of the cone's matrix.
pub fn cone_rank(model: &ConeModel) -> i64 {
    linalg::kernel_plus_cokernel(
        model.b_blocks.len(),
        model.a_dim() as usize,
        &model.matrix,
    ) as i64
}

/// The oracle's rank for every class, at window `min_window + DEFAULT_MARGIN`.
pub fn oracle_rank_profile(knot: &KnotInvariants, ctx: &SlopeContext) -> Result<RankProfile, ConeError> {
    oracle_rank_profile_with_margin(knot, ctx, DEFAULT_MARGIN)
}

pub fn oracle_rank_profile_with_margin(
    knot: &KnotInvariants,
    ctx: &SlopeContext,
    margin: i64,
) -> Result<RankProfile, ConeError> {
    let ranks = ctx
        .spincs()
        .map(|class| {
            let w = min_window(knot, ctx, class) + margin.max(0);
            build_cone(knot, ctx, class, w).map(|m| cone_rank(&m))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RankProfile::from_ranks(*ctx, ranks).expect("one rank per class"))
}
