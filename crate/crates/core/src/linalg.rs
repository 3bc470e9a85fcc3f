//! Exact rational and integer matrix helpers.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Q = Ratio<i128>;
pub type QMat = Vec<Vec<Q>>;

pub fn q(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn qfrac(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub fn to_q(m: &[Vec<i64>]) -> QMat {
    m.iter().map(|r| r.iter().map(|&x| q(x as i128)).collect()).collect()
}

pub fn identity(n: usize) -> QMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn transpose(a: &QMat) -> QMat {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn mat_mul(a: &QMat, b: &QMat) -> QMat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = Q::zero();
                    for t in 0..inner {
                        if !row[t].is_zero() {
                            s += row[t] * b[t][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &QMat, v: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Q::zero(), |s, (x, y)| s + x * y))
        .collect()
}

pub fn diag(d: &[Q]) -> QMat {
    let mut m = vec![vec![Q::zero(); d.len()]; d.len()];
    for (i, x) in d.iter().enumerate() {
        m[i][i] = *x;
    }
    m
}

/// Gauss-Jordan inverse; `None` when singular.
pub fn inverse(a: &QMat) -> Option<QMat> {
    let n = a.len();
    let mut m: QMat = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c];
                for j in 0..2 * n {
                    let v = m[c][j];
                    m[r][j] -= f * v;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn det(a: &QMat) -> Q {
    let n = a.len();
    let mut m = a.clone();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(c, p);
            d = -d;
        }
        d *= m[c][c];
        for r in c + 1..n {
            if !m[r][c].is_zero() {
                let f = m[r][c] / m[c][c];
                for j in c..n {
                    let v = m[c][j];
                    m[r][j] -= f * v;
                }
            }
        }
    }
    d
}

/// Row Hermite normal form of the integer row span; zero rows dropped.
pub fn hnf_rows(mut rows: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
    rows.retain(|r| r.iter().any(|x| *x != 0));
    if rows.is_empty() {
        return rows;
    }
    let cols = rows[0].len();
    let mut p = 0;
    for c in 0..cols {
        if p >= rows.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for r in p..rows.len() {
                if rows[r][c] != 0 && best.is_none_or(|b| rows[r][c].abs() < rows[b][c].abs()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            rows.swap(p, b);
            let mut done = true;
            for r in p + 1..rows.len() {
                if rows[r][c] != 0 {
                    let f = Integer::div_floor(&rows[r][c], &rows[p][c]);
                    for j in 0..cols {
                        let v = rows[p][j];
                        rows[r][j] -= f * v;
                    }
                    if rows[r][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if p < rows.len() && rows[p][c] != 0 {
            if rows[p][c] < 0 {
                for x in rows[p].iter_mut() {
                    *x = -*x;
                }
            }
            for r in 0..p {
                let f = Integer::div_floor(&rows[r][c], &rows[p][c]);
                if f != 0 {
                    for j in 0..cols {
                        let v = rows[p][j];
                        rows[r][j] -= f * v;
                    }
                }
            }
            p += 1;
        }
    }
    rows.truncate(p);
    rows
}

/// Primitive positive generator of a one-dimensional integer null space.
pub fn primitive_null_vector(a: &[Vec<i64>]) -> Option<Vec<i64>> {
    let n = a.len();
    if n == 0 {
        return None;
    }
    let mut m = to_q(a);
    let cols = m[0].len();
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..n).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..n {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..cols {
                    let v = m[r][j];
                    m[i][j] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    if free.len() != 1 {
        return None;
    }
    let f = free[0];
    let mut v = vec![Q::zero(); cols];
    v[f] = Q::one();
    for (i, &c) in pivots.iter().enumerate() {
        v[c] = -m[i][f];
    }
    let den = v.iter().fold(1i128, |l, x| l.lcm(x.denom()));
    let mut iv: Vec<i128> = v.iter().map(|x| (x * q(den)).to_integer()).collect();
    let g = iv.iter().fold(0i128, |g, x| g.gcd(x));
    for x in iv.iter_mut() {
        *x /= g;
    }
    if iv.iter().all(|x| *x <= 0) {
        for x in iv.iter_mut() {
            *x = -*x;
        }
    }
    if iv.iter().any(|x| *x <= 0) {
        return None;
    }
    Some(iv.into_iter().map(|x| x as i64).collect())
}

pub fn lcm_denoms<'a>(it: impl IntoIterator<Item = &'a Q>) -> i128 {
    it.into_iter().fold(1i128, |l, x| l.lcm(x.denom()))
}

pub fn is_integral(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn abs_q(x: Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let a = to_q(&[vec![2, -1], vec![-1, 2]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert_eq!(inv[0][1], qfrac(1, 3));
        assert_eq!(det(&a), q(3));
    }

    #[test]
    fn hnf_spans() {
        let h = hnf_rows(vec![vec![2, 0], vec![0, 2], vec![2, 2], vec![4, 6]]);
        assert_eq!(h, vec![vec![2, 0], vec![0, 2]]);
        let h = hnf_rows(vec![vec![2, -1], vec![-1, 2], vec![1, 1]]);
        assert_eq!(h.len(), 2);
        assert_eq!(
            det(&h.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).abs(),
            q(3)
        );
    }

    #[test]
    fn null_vector() {
        let a = vec![vec![2, -2], vec![-2, 2]];
        assert_eq!(primitive_null_vector(&a), Some(vec![1, 1]));
        let a = vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]];
        assert_eq!(primitive_null_vector(&a), None);
    }
}
