//! Row-style Hermite normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Index of the first nonzero entry.
pub fn pivot_column(row: &[BigInt]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

fn sub_multiple(target: &mut [BigInt], src: &[BigInt], k: &BigInt) {
    if k.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        *t -= k * s;
    }
}

/// Reduces the rows to Hermite normal form: zero rows dropped, pivots strictly
/// increasing left to right and positive, entries above each pivot reduced
/// into `[0, pivot)`. The result is the unique HNF basis of the row lattice.
pub fn hermite_normal_form(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        // Euclid on column c among rows r.. until one nonzero entry is left.
        while let Some(best) =
            (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).min_by(|&i, &j| rows[i][c].abs().cmp(&rows[j][c].abs()))
        {
            rows.swap(r, best);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let (head, tail) = rows.split_at_mut(i);
                sub_multiple(&mut tail[0], &head[r], &q);
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r >= rows.len() || rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = rows[i][c].div_floor(&rows[r][c]);
            let (head, tail) = rows.split_at_mut(r);
            sub_multiple(&mut head[i], &tail[0], &q);
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows.retain(|row| pivot_column(row).is_some());
    rows
}
