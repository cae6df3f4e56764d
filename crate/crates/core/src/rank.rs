//! Exact matrix rank by fraction-free (Bareiss) elimination.
//!
//! Runs in `i128` with checked arithmetic and restarts in arbitrary
//! precision if any intermediate overflows.

use num_bigint::BigInt;

/// Rank of an integer matrix given as rows.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let wide: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    match bareiss_i128(wide) {
        Some(r) => r,
        None => bareiss_big(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        ),
    }
}

/// Affine rank (dimension of the affine hull) of a point set.
pub fn affine_rank(points: &[Vec<i64>]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let homogenized: Vec<Vec<i64>> = points
        .iter()
        .map(|p| p.iter().copied().chain(std::iter::once(1)).collect())
        .collect();
    rank(&homogenized) - 1
}

fn bareiss_i128(mut m: Vec<Vec<i128>>) -> Option<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev: i128 = 1;
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let a = m[r][c].checked_mul(m[i][j])?;
                let b = m[i][c].checked_mul(m[r][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        r += 1;
        if r == rows {
            break;
        }
    }
    Some(r)
}

fn bareiss_big(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let zero = BigInt::from(0);
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c] != zero) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = zero.clone();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranks() {
        assert_eq!(rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank(&[vec![1, 2], vec![3, 4]]), 2);
        assert_eq!(rank(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(rank(&[vec![1, 1, 1], vec![1, -1, 1], vec![2, 0, 2], vec![0, 0, 5]]), 3);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn affine_rank_of_simplex_and_line() {
        assert_eq!(affine_rank(&[vec![0, 0], vec![1, 0], vec![0, 1]]), 2);
        assert_eq!(affine_rank(&[vec![0, 0], vec![1, 1], vec![2, 2]]), 1);
        assert_eq!(affine_rank(&[vec![3, 3]]), 0);
    }

    #[test]
    fn big_path_agrees_with_wide_path() {
        // Sylvester–Hadamard matrix of order 32: full rank, large minors.
        let n = 32;
        let h: Vec<Vec<i64>> = (0..n)
            .map(|i: usize| (0..n).map(|j: usize| if (i & j).count_ones() % 2 == 0 { 1 } else { -1 }).collect())
            .collect();
        assert_eq!(rank(&h), n);
        let big = bareiss_big(
            h.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        );
        assert_eq!(big, n);
    }
}
