//! Smith normal form over the integers.

use crate::error::{Error, Result};

fn overflow() -> Error {
    Error::Overflow("Smith normal form")
}

/// Extended gcd: `(d, x, y)` with `a x + b y = d`. When `a | b` this is
/// `(a, 1, 0)`, so eliminating against a dividing pivot leaves the pivot alone.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if a != 0 && b % a == 0 {
        return (a, 1, 0);
    }
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Nonzero invariant factors `d_1 | d_2 | ⋯` of an integer matrix, all positive.
/// The rank of the matrix is the length of the result.
#[allow(clippy::needless_range_loop)] // paired row updates
pub fn invariant_factors(rows: &[Vec<i64>]) -> Result<Vec<i64>> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != nc) {
        return Err(Error::Dimension {
            expected: nc,
            found: rows.iter().map(Vec::len).find(|&l| l != nc).unwrap_or(nc),
        });
    }
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        // pivot: smallest nonzero magnitude in the remaining block
        let Some((pi, pj)) = (t..nr)
            .flat_map(|i| (t..nc).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].unsigned_abs())
        else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            // clear column t with row operations
            for i in t + 1..nr {
                if a[i][t] == 0 {
                    continue;
                }
                let (p, q) = (a[t][t], a[i][t]);
                let (d, x, y) = ext_gcd(p, q);
                let (u, v) = (p / d, q / d);
                for j in t..nc {
                    let (r1, r2) = (a[t][j], a[i][j]);
                    let top = x
                        .checked_mul(r1)
                        .and_then(|s| y.checked_mul(r2).and_then(|w| s.checked_add(w)))
                        .ok_or_else(overflow)?;
                    let bottom = u
                        .checked_mul(r2)
                        .and_then(|s| v.checked_mul(r1).and_then(|w| s.checked_sub(w)))
                        .ok_or_else(overflow)?;
                    a[t][j] = top;
                    a[i][j] = bottom;
                }
            }
            // clear row t with column operations
            let mut changed = false;
            for j in t + 1..nc {
                if a[t][j] == 0 {
                    continue;
                }
                changed = true;
                let (p, q) = (a[t][t], a[t][j]);
                let (d, x, y) = ext_gcd(p, q);
                let (u, v) = (p / d, q / d);
                for row in a.iter_mut().skip(t) {
                    let (c1, c2) = (row[t], row[j]);
                    let left = x
                        .checked_mul(c1)
                        .and_then(|s| y.checked_mul(c2).and_then(|w| s.checked_add(w)))
                        .ok_or_else(overflow)?;
                    let right = u
                        .checked_mul(c2)
                        .and_then(|s| v.checked_mul(c1).and_then(|w| s.checked_sub(w)))
                        .ok_or_else(overflow)?;
                    row[t] = left;
                    row[j] = right;
                }
            }
            if !changed || (t + 1..nr).all(|i| a[i][t] == 0) {
                break;
            }
        }
        // enforce divisibility into the rest of the block
        let p = a[t][t];
        if let Some((i, _)) = (t + 1..nr)
            .flat_map(|i| (t + 1..nc).map(move |j| (i, j)))
            .find(|&(i, j)| a[i][j] % p != 0)
        {
            // add row i to row t and redo this step
            for j in t..nc {
                a[t][j] = a[t][j].checked_add(a[i][j]).ok_or_else(overflow)?;
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag.into_iter()
        .map(|d| i64::try_from(d).map_err(|_| overflow()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        assert_eq!(invariant_factors(&[vec![0, 1], vec![1, -3]]).unwrap(), vec![1, 1]);
        assert_eq!(invariant_factors(&[vec![2, 0], vec![0, 3]]).unwrap(), vec![1, 6]);
        assert_eq!(invariant_factors(&[vec![4, 0], vec![0, 6]]).unwrap(), vec![2, 12]);
        assert_eq!(invariant_factors(&[vec![0, 0], vec![0, 0]]).unwrap(), Vec::<i64>::new());
        assert_eq!(invariant_factors(&[vec![5]]).unwrap(), vec![5]);
        assert_eq!(
            invariant_factors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap(),
            vec![2, 6, 12]
        );
        assert!(invariant_factors(&[vec![1, 2], vec![3]]).is_err());
        assert_eq!(invariant_factors(&[]).unwrap(), Vec::<i64>::new());
    }
}
