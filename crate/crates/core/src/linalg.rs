//! Exact rank of integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, Signed};

/// Rank over the rationals of an integer matrix given as rows.
///
/// Fraction-free row reduction: every elimination step cross-multiplies by
/// the pivot and then divides the row by its content, so entries stay
/// integral and small. Runs in `i64` and restarts in `BigInt` if an
/// intermediate value would overflow.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    reduce(rows.to_vec()).unwrap_or_else(|| {
        let big = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        reduce(big).expect("BigInt arithmetic cannot overflow")
    })
}

/// `rk Ker + rk Coker` of a map `Z^cols -> Z^rows`.
pub fn kernel_plus_cokernel(rows: usize, cols: usize, matrix: &[Vec<i64>]) -> usize {
    let r = rank(matrix);
    (cols - r) + (rows - r)
}

fn reduce<T>(mut m: Vec<Vec<T>>) -> Option<usize>
where
    T: Integer + Signed + CheckedMul + CheckedSub + Clone,
{
    let n_rows = m.len();
    let n_cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;

    for col in 0..n_cols {
        if rank == n_rows {
            break;
        }
        // smallest nonzero pivot keeps the cross-multiplication cheap
        let Some(pivot_row) = (rank..n_rows)
            .filter(|&r| !m[r][col].is_zero())
            .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()))
        else {
            continue;
        };
        m.swap(rank, pivot_row);
        let (head, tail) = m.split_at_mut(rank + 1);
        let pivot = &head[rank];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let g = pivot[col].gcd(&row[col]);
            let a = pivot[col].clone() / g.clone();
            let b = row[col].clone() / g;
            for c in col..n_cols {
                let lhs = row[c].checked_mul(&a)?;
                let rhs = pivot[c].checked_mul(&b)?;
                row[c] = lhs.checked_sub(&rhs)?;
            }
            let content = row[col..]
                .iter()
                .fold(T::zero(), |acc, x| acc.gcd(x));
            if !content.is_zero() && !content.is_one() {
                for x in row[col..].iter_mut() {
                    *x = x.clone() / content.clone();
                }
            }
        }
        rank += 1;
    }
    Some(rank)
}
