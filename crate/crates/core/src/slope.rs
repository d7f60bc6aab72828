//! Slope-level combinatorics.
//!
//! Everything here is integer arithmetic on a reduced surgery slope `p/q`
//! with `q > 0`. The central object is the counting function
//!
//! ```text
//! phi_i(s) = #{ n in Z : floor((i + p n) / q) = s }
//! ```
//!
//! which depends on `i` only through its class mod `p`.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::knot::KnotInvariants;
use crate::Inconsistency;

/// Largest accepted `|p|` and `q`.
pub const MAX_SLOPE_TERM: i64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("surgery slope numerator must be nonzero")]
    ZeroNumerator,
    #[error("surgery slope denominator must be nonzero")]
    ZeroDenominator,
    #[error("slope {p}/{q} is outside the supported range |p|, q <= {MAX_SLOPE_TERM}")]
    OutOfRange { p: i64, q: i64 },
    #[error("cannot parse slope `{0}`; expected P or P/Q with Q > 0")]
    Syntax(String),
}

/// A reduced surgery slope `p/q` together with its Bezout data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SlopeContext {
    p: i64,
    q: i64,
    q_bar: i64,
    p_bar: i64,
    q_tilde: Option<i64>,
}

/// A spin^c class `[i]` in `Z/p`, stored as its representative in `0..|p|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinC(i64);

impl SpinC {
    pub fn value(self) -> i64 {
        self.0
    }
}

impl fmt::Display for SpinC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0)
    }
}

impl SlopeContext {
    /// Reduces `p_raw/q_raw`, moves the sign onto the numerator, and solves
    /// `q * q_bar + p * p_bar = 1` with `q_bar` in `1..|p|`.
    ///
    /// For `|p| = 1` there is no such `q_bar`; it is reported as 0 with `p_bar = p`.
    pub fn new(p_raw: i64, q_raw: i64) -> Result<Self, SlopeError> {
        if p_raw == 0 {
            return Err(SlopeError::ZeroNumerator);
        }
        if q_raw == 0 {
            return Err(SlopeError::ZeroDenominator);
        }
        let g = p_raw.gcd(&q_raw);
        let (mut p, mut q) = (p_raw / g, q_raw / g);
        if q < 0 {
            p = -p;
            q = -q;
        }
        if p.abs() > MAX_SLOPE_TERM || q > MAX_SLOPE_TERM {
            return Err(SlopeError::OutOfRange { p, q });
        }
        let abs_p = p.abs();
        let (q_bar, p_bar, q_tilde) = if abs_p == 1 {
            (0, p, None)
        } else {
            let e = q.extended_gcd(&p);
            debug_assert_eq!(e.gcd.abs(), 1);
            // e.x * q + e.y * p = ±1
            let x = e.x * e.gcd;
            let q_bar = x.rem_euclid(abs_p);
            let p_bar = (1 - q * q_bar) / p;
            (q_bar, p_bar, Some(q.rem_euclid(abs_p)))
        };
        Ok(SlopeContext {
            p,
            q,
            q_bar,
            p_bar,
            q_tilde,
        })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// `|p|`, the number of spin^c structures.
    pub fn order(&self) -> i64 {
        self.p.abs()
    }

    pub fn q_bar(&self) -> i64 {
        self.q_bar
    }

    pub fn p_bar(&self) -> i64 {
        self.p_bar
    }

    /// The representative of `q` mod `p` in `1..|p|`; `None` when `|p| = 1`.
    pub fn q_tilde(&self) -> Option<i64> {
        self.q_tilde
    }

    pub fn spinc(&self, i: i64) -> SpinC {
        SpinC(i.rem_euclid(self.order()))
    }

    pub fn spincs(&self) -> impl Iterator<Item = SpinC> {
        (0..self.order()).map(SpinC)
    }

    /// The dual index `i~ = q - i mod p`, defined for `i` in `1..|p|` other than `q~`.
    pub fn dual(&self, i: i64) -> Option<i64> {
        let q_tilde = self.q_tilde?;
        if i < 1 || i >= self.order() || i == q_tilde {
            return None;
        }
        Some((self.q - i).rem_euclid(self.order()))
    }

    /// `floor((i + p s) / q)`, the filtration index of the `s`-th summand.
    pub fn floor_index(&self, i: i64, s: i64) -> i64 {
        let num = i128::from(i) + i128::from(self.p) * i128::from(s);
        Integer::div_floor(&num, &i128::from(self.q)) as i64
    }

    /// Parses `P` or `P/Q`. The sign belongs on `P`; `P/-Q` is rejected.
    pub fn parse(text: &str) -> Result<Self, SlopeError> {
        let bad = || SlopeError::Syntax(text.to_string());
        let (p_txt, q_txt) = match text.trim().split_once('/') {
            Some((p, q)) => (p.trim(), Some(q.trim())),
            None => (text.trim(), None),
        };
        let p: i64 = p_txt.parse().map_err(|_| bad())?;
        let q: i64 = match q_txt {
            Some(q) if q.starts_with(['-', '+']) => return Err(bad()),
            Some(q) => q.parse().map_err(|_| bad())?,
            None => 1,
        };
        SlopeContext::new(p, q)
    }
}

impl fmt::Display for SlopeContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// `ceil(a / b)` for `b > 0`.
fn div_ceil(a: i128, b: i128) -> i128 {
    -Integer::div_floor(&-a, &b)
}

/// `phi_i(s)`: the number of integers `n` with `floor((i + p n) / q) = s`.
///
/// Equivalently the number of multiples of `p` in `[s q - i, (s + 1) q - i)`.
/// Accepts any integer lift `i`.
pub fn phi(ctx: &SlopeContext, i: i64, s: i64) -> i64 {
    let (i, s) = (i128::from(i), i128::from(s));
    let q = i128::from(ctx.q);
    let abs_p = i128::from(ctx.order());
    let lo = s * q - i;
    let hi = (s + 1) * q - i;
    (div_ceil(hi, abs_p) - div_ceil(lo, abs_p)) as i64
}

/// `sum_{|s| < mu} phi_i(s)`, evaluated twice: once by summing [`phi`] and
/// once by the residue-counting closed form. Disagreement is an internal bug.
pub fn window_sum(ctx: &SlopeContext, i: SpinC, mu: i64) -> Result<i64, Inconsistency> {
    assert!(mu >= 1, "window half-width must be positive");
    let direct: i64 = ((1 - mu)..mu).map(|s| phi(ctx, i.0, s)).sum();
    let closed = window_sum_closed(ctx, i, mu);
    if direct == closed {
        Ok(direct)
    } else {
        Err(Inconsistency::new(format!(
            "window sum at {ctx}, {i}, mu={mu}: summed phi gives {direct}, closed form gives {closed}"
        )))
    }
}

/// Closed form: write `(2 mu - 1) q = n |p| + r` and `(mu - 1) q = k |p| + t`.
/// The count is `n`, plus one on the `r` residues `i = -t + j`, `j < r`.
fn window_sum_closed(ctx: &SlopeContext, i: SpinC, mu: i64) -> i64 {
    let abs_p = i128::from(ctx.order());
    let q = i128::from(ctx.q);
    let mu = i128::from(mu);
    let width = (2 * mu - 1) * q;
    let (n, r) = width.div_mod_floor(&abs_p);
    let t = ((mu - 1) * q).mod_floor(&abs_p);
    let offset = (i128::from(i.0) + t).mod_floor(&abs_p);
    (n + i128::from(offset < r)) as i64
}

/// `phi_i(s) - phi_{i-1}(s)` via the congruence trichotomy:
/// `+1` if `i = s q`, `-1` if `i = (s + 1) q` (mod p), else 0.
pub fn delta_phi(ctx: &SlopeContext, i: i64, s: i64) -> i64 {
    debug_assert!(ctx.order() > 1 && (1..ctx.order()).contains(&i));
    let m = i128::from(ctx.order());
    let (i, s, q) = (i128::from(i), i128::from(s), i128::from(ctx.q));
    if (i - s * q).mod_floor(&m) == 0 {
        1
    } else if (i - (s + 1) * q).mod_floor(&m) == 0 {
        -1
    } else {
        0
    }
}

/// `S_[i] = sum_s phi_i(s) (rank H_*(A_s) - 1)`, the excess rank of a class.
pub fn excess_rank(ctx: &SlopeContext, i: SpinC, knot: &KnotInvariants) -> i64 {
    knot.a_ranks
        .iter()
        .map(|(&s, &r)| phi(ctx, i.0, s) * (r - 1))
        .sum()
}
