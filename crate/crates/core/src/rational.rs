//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Renders as `numerator/denominator`, denominator always present.
pub fn to_string(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse(s: &str) -> Result<Q> {
    let bad = || Error::BadRational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// Decimal rendering with a fixed number of fractional digits (truncated toward zero).
pub fn to_decimal(x: &Q, digits: usize) -> String {
    let neg = x.is_negative();
    let a = x.abs();
    let int = a.numer() / a.denom();
    let mut rem = a.numer() % a.denom();
    let mut s = format!("{}{}", if neg { "-" } else { "" }, int);
    if digits > 0 {
        s.push('.');
        for _ in 0..digits {
            rem *= 10;
            let d = &rem / a.denom();
            rem %= a.denom();
            s.push_str(&d.to_string());
        }
    }
    s
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub(crate) fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Reduced row echelon rank of a rational matrix given as rows.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in (r + 1)..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            for j in c..cols {
                let t = &f * &m[r][j];
                m[i][j] -= t;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Dimension of the affine hull of a point set (-1 for the empty set).
pub fn affine_dimension(points: &[Vec<Q>]) -> isize {
    let Some(first) = points.first() else {
        return -1;
    };
    let diffs: Vec<Vec<Q>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    rank(&diffs) as isize
}

/// Solves `a x = b` exactly. Returns `None` when the system is inconsistent
/// or underdetermined. Rows beyond the column count must be consistent.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::with_capacity(n);
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            return None;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r][c..].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..=n {
                let t = &f * &m[r][j];
                m[i][j] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

/// Fraction-free (Bareiss) solve of a square integer system `a x = b`.
/// Returns `None` for singular `a`.
pub fn bareiss_solve(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, p);
        for i in (k + 1)..n {
            for j in (k + 1)..=n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let mut x = vec![Q::zero(); n];
    for i in (0..n).rev() {
        let mut s = Q::from_integer(m[i][n].clone());
        for j in (i + 1)..n {
            s -= Q::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = s / Q::from_integer(m[i][i].clone());
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        assert_eq!(parse("3/6").unwrap(), q_frac(1, 2));
        assert_eq!(parse("-4").unwrap(), q_int(-4));
        assert_eq!(to_string(&q_int(2)), "2/1");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert_eq!(to_decimal(&q_frac(2, 3), 4), "0.6666");
        assert_eq!(to_decimal(&q_frac(-1, 4), 2), "-0.25");
    }

    #[test]
    fn bareiss_matches_gauss() {
        let a = vec![
            vec![BigInt::from(2), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(2)],
        ];
        let b = vec![BigInt::from(0), BigInt::from(-2)];
        let x = bareiss_solve(&a, &b).unwrap();
        assert_eq!(x, vec![q_frac(2, 3), q_frac(-4, 3)]);
        let aq: Vec<Vec<Q>> = a
            .iter()
            .map(|r| r.iter().cloned().map(Q::from_integer).collect())
            .collect();
        let bq: Vec<Q> = b.iter().cloned().map(Q::from_integer).collect();
        assert_eq!(solve(&aq, &bq).unwrap(), x);
    }

    #[test]
    fn singular_and_inconsistent() {
        let a = vec![vec![q_int(1), q_int(1)], vec![q_int(2), q_int(2)]];
        assert!(solve(&a, &[q_int(1), q_int(2)]).is_none());
        let tall = vec![vec![q_int(1)], vec![q_int(2)]];
        assert_eq!(solve(&tall, &[q_int(1), q_int(2)]), Some(vec![q_int(1)]));
        assert!(solve(&tall, &[q_int(1), q_int(3)]).is_none());
    }

    #[test]
    fn affine_dims() {
        let pts = vec![
            vec![q_int(0), q_int(0)],
            vec![q_int(1), q_int(1)],
            vec![q_int(2), q_int(2)],
        ];
        assert_eq!(affine_dimension(&pts), 1);
        assert_eq!(affine_dimension(&pts[..1]), 0);
        assert_eq!(affine_dimension(&[]), -1);
    }
}
