//! Dense matrices over exact rings: determinants, solves and inverses.

use crate::error::{Error, Result};
use crate::exactnum::Ring;

pub type Matrix<R> = Vec<Vec<R>>;

fn check_square<R>(m: &Matrix<R>) -> Result<usize> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Internal("matrix is not square".into()));
    }
    Ok(n)
}

/// Determinant. Eliminates on unit pivots and falls back to a division-free
/// minor expansion when the ring offers none (series with vanishing constant terms).
pub fn det<R: Ring>(m: &Matrix<R>) -> Result<R> {
    let n = check_square(m)?;
    if n == 0 {
        return Err(Error::Internal("determinant of an empty matrix needs a ring unit".into()));
    }
    let mut a = m.clone();
    let mut d = a[0][0].one_like();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[r][c].try_inv().is_some()) else {
            return Ok(det_expand(m));
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let inv = a[c][c].try_inv().expect("pivot is a unit");
        d = d * a[c][c].clone();
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone() * inv.clone();
            for k in c..n {
                let v = a[r][k].clone() - f.clone() * a[c][k].clone();
                a[r][k] = v;
            }
        }
    }
    Ok(d)
}

/// Division-free determinant by expansion along rows, memoised on column subsets.
pub fn det_expand<R: Ring>(m: &Matrix<R>) -> R {
    let n = m.len();
    assert!(n <= 20, "minor expansion is exponential in the size");
    let zero = m[0][0].zero_like();
    // minors[mask] = determinant of rows (n - popcount(mask))..n on the columns in mask
    let full = 1usize << n;
    let mut minors: Vec<Option<R>> = vec![None; full];
    minors[0] = Some(m[0][0].one_like());
    for mask in 1..full {
        let k = mask.count_ones() as usize;
        let row = n - k;
        let mut acc = zero.clone();
        let mut sign_pos = true;
        for c in 0..n {
            if mask & (1 << c) == 0 {
                continue;
            }
            let sub = minors[mask ^ (1 << c)].clone().expect("smaller minors are filled first");
            let term = m[row][c].clone() * sub;
            acc = if sign_pos { acc + term } else { acc - term };
            sign_pos = !sign_pos;
        }
        minors[mask] = Some(acc);
    }
    minors[full - 1].clone().expect("full minor")
}

/// Solve `m · X = rhs` column by column.
pub fn solve<R: Ring>(m: &Matrix<R>, rhs: &Matrix<R>) -> Result<Matrix<R>> {
    let n = check_square(m)?;
    if rhs.len() != n {
        return Err(Error::Internal("right-hand side has the wrong number of rows".into()));
    }
    let w = rhs.first().map_or(0, |r| r.len());
    let mut a: Matrix<R> = m.iter().zip(rhs).map(|(r, b)| r.iter().chain(b.iter()).cloned().collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| a[r][c].try_inv().is_some()).ok_or(Error::Singular)?;
        a.swap(p, c);
        let inv = a[c][c].try_inv().expect("pivot is a unit");
        for k in c..n + w {
            a[c][k] = a[c][k].clone() * inv.clone();
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for k in c..n + w {
                let v = a[r][k].clone() - f.clone() * a[c][k].clone();
                a[r][k] = v;
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn identity<R: Ring>(n: usize, like: &R) -> Matrix<R> {
    (0..n).map(|i| (0..n).map(|j| if i == j { like.one_like() } else { like.zero_like() }).collect()).collect()
}

pub fn inverse<R: Ring>(m: &Matrix<R>) -> Result<Matrix<R>> {
    let n = check_square(m)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    solve(m, &identity(n, &m[0][0]))
}

pub fn matmul<R: Ring>(a: &Matrix<R>, b: &Matrix<R>) -> Matrix<R> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = row[0].zero_like();
                    for k in 0..inner {
                        acc = acc + row[k].clone() * b[k][j].clone();
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn transpose<R: Clone>(a: &Matrix<R>) -> Matrix<R> {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{PSeries, Rational, Scalar};

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn det_and_inverse_agree() {
        let m = vec![vec![q(2), q(1), q(0)], vec![q(1), q(3), q(1)], vec![q(0), q(1), q(4)]];
        assert_eq!(det(&m).unwrap(), q(18));
        assert_eq!(det_expand(&m), q(18));
        let inv = inverse(&m).unwrap();
        assert_eq!(matmul(&m, &inv), identity(3, &q(1)));
    }

    #[test]
    fn singular_matrix() {
        let m = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(det(&m).unwrap(), q(0));
        assert_eq!(inverse(&m), Err(Error::Singular));
    }

    #[test]
    fn series_det_falls_back_without_unit_pivots() {
        let p = PSeries::monomial(q(1), 1, 3);
        let one = PSeries::one(3);
        let m = vec![vec![p.clone(), one.clone()], vec![one.clone(), p.clone()]];
        let d = det(&m).unwrap();
        assert_eq!(d, p.clone() * p - one);
        let m2 = vec![
            vec![PSeries::monomial(q(1), 1, 3), PSeries::monomial(q(2), 1, 3)],
            vec![PSeries::monomial(q(1), 1, 3), PSeries::monomial(q(1), 1, 3)],
        ];
        assert_eq!(det(&m2).unwrap(), PSeries::monomial(q(-1), 2, 3));
    }
}
