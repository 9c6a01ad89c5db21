//! Exact primal simplex for packing LPs using fraction-free integer pivoting.
//!
//! Every tableau entry is an integer and the rational tableau is the integer
//! tableau divided by the common denominator `d` (the last pivot). Bland's
//! rule rules out cycling.

use super::scalar::Scalar;

pub(crate) struct LpSolution<T> {
    /// Optimal objective value times `denom`.
    pub value_num: T,
    pub denom: T,
    /// Structural variable values times `denom`.
    pub x_num: Vec<T>,
}

/// Maximizes `sum(x)` subject to `a·x ≤ caps` and `0 ≤ x ≤ upper`.
///
/// `caps` and `upper` must be nonnegative and `a` entrywise nonnegative, so
/// the slack basis is feasible and the program is bounded. Returns `None`
/// only on arithmetic overflow.
pub(crate) fn solve_packing_lp<T: Scalar>(
    a: &[Vec<T>],
    caps: &[T],
    upper: &[T],
) -> Option<LpSolution<T>> {
    let n = a.len();
    let r = upper.len();
    let m = n + r;
    let rhs = r + m;
    let width = rhs + 1;
    let minus_one = T::zero().sub(&T::one())?;

    let mut t = vec![vec![T::zero(); width]; m + 1];
    for j in 0..r {
        t[0][j] = minus_one.clone();
    }
    for i in 0..n {
        t[1 + i][..r].clone_from_slice(&a[i][..r]);
        t[1 + i][r + i] = T::one();
        t[1 + i][rhs] = caps[i].clone();
    }
    for j in 0..r {
        let row = 1 + n + j;
        t[row][j] = T::one();
        t[row][r + n + j] = T::one();
        t[row][rhs] = upper[j].clone();
    }
    let mut basis: Vec<usize> = (0..m).map(|i| r + i).collect();
    let mut d = T::one();

    while let Some(pc) = (0..rhs).find(|&j| t[0][j].is_negative()) {
        let mut pr: Option<usize> = None;
        for i in 1..=m {
            if !t[i][pc].is_positive() {
                continue;
            }
            pr = match pr {
                None => Some(i),
                Some(b) => {
                    let lhs = t[i][rhs].mul(&t[b][pc])?;
                    let cur = t[b][rhs].mul(&t[i][pc])?;
                    if lhs < cur || (lhs == cur && basis[i - 1] < basis[b - 1]) {
                        Some(i)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        // The upper-bound rows keep every column bounded.
        let pr = pr.expect("packing LP with finite upper bounds is bounded");

        let pivot_row = t[pr].clone();
        let piv = pivot_row[pc].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == pr {
                continue;
            }
            let f = row[pc].clone();
            for (k, entry) in row.iter_mut().enumerate() {
                let scaled = piv.mul(entry)?;
                let v = if f.is_zero() {
                    scaled
                } else {
                    scaled.sub(&f.mul(&pivot_row[k])?)?
                };
                *entry = v.div_exact(&d)?;
            }
        }
        d = piv;
        basis[pr - 1] = pc;
    }

    let mut x_num = vec![T::zero(); r];
    for (row, &var) in basis.iter().enumerate() {
        if var < r {
            x_num[var] = t[row + 1][rhs].clone();
        }
    }
    Some(LpSolution {
        value_num: t[0][rhs].clone(),
        denom: d,
        x_num,
    })
}
