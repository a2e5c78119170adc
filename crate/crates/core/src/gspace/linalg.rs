//! Exact linear algebra: rational null spaces and integer Smith normal form.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::point::Rational;

/// Basis of `{x : A x = 0}` for a rational `rows x n` matrix, in reduced
/// form (one free coordinate set to 1 per basis vector).
pub fn null_space(a: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col];
                let pivot = m[row].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot) {
                    *x -= f * *p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f];
            }
            v
        })
        .collect()
}

pub fn rank(a: &[Vec<Rational>], n: usize) -> usize {
    n - null_space(a, n).len()
}

/// Smith normal form `U A V = D` of an integer matrix, with `U`, `V`
/// unimodular and `D` diagonal with non-negative entries `d_1 | d_2 | ...`.
pub struct Smith {
    pub u: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
    pub diagonal: Vec<i64>,
}

pub fn smith_normal_form(a: &[Vec<i64>]) -> Smith {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut d: Vec<Vec<i64>> = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // smallest non-zero entry of the remaining block becomes the pivot
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| d[i][j] != 0)
            .min_by_key(|&(i, j)| d[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }

        let mut done = true;
        for i in t + 1..rows {
            let q = Integer::div_floor(&d[i][t], &d[t][t]);
            if q != 0 {
                add_row(&mut d, i, t, -q);
                add_row(&mut u, i, t, -q);
            }
            if d[i][t] != 0 {
                done = false;
            }
        }
        for j in t + 1..cols {
            let q = Integer::div_floor(&d[t][j], &d[t][t]);
            if q != 0 {
                add_col(&mut d, j, t, -q);
                add_col(&mut v, j, t, -q);
            }
            if d[t][j] != 0 {
                done = false;
            }
        }
        if !done {
            continue;
        }
        // divisibility: fold any entry not divisible by the pivot into row t
        let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| d[i][j] % d[t][t] != 0);
        if let Some((i, _)) = bad {
            add_row(&mut d, t, i, 1);
            add_row(&mut u, t, i, 1);
            continue;
        }
        if d[t][t] < 0 {
            for x in d[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
        t += 1;
    }
    let diagonal = (0..rows.min(cols)).map(|i| d[i][i]).collect();
    Smith { u, v, diagonal }
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// row[i] += k * row[j]
fn add_row(m: &mut [Vec<i64>], i: usize, j: usize, k: i64) {
    let src = m[j].clone();
    for (x, s) in m[i].iter_mut().zip(src) {
        *x += k * s;
    }
}

/// col[i] += k * col[j]
fn add_col(m: &mut [Vec<i64>], i: usize, j: usize, k: i64) {
    for row in m.iter_mut() {
        row[i] += k * row[j];
    }
}

/// Scales a non-zero rational vector to a primitive integer vector whose
/// first non-zero entry is positive.
pub fn primitive_integer(v: &[Rational]) -> Vec<i64> {
    let l = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (x * l).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, x| acc.gcd(x));
    let sign = ints.iter().find(|x| **x != 0).map_or(1, |x| x.signum());
    ints.iter().map(|x| sign * x / g.max(1)).collect()
}

pub fn mat_vec(m: &[Vec<i64>], x: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| b * *a).sum()).collect()
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        (0..a.len()).map(|i| (0..b[0].len()).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    }

    #[test]
    fn null_space_of_rank_one() {
        let a = vec![vec![q(1), q(-1), q(0)], vec![q(2), q(-2), q(0)]];
        let ns = null_space(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((v[0] - v[1]).is_zero());
        }
        assert_eq!(rank(&a, 3), 1);
        assert_eq!(null_space(&[], 2).len(), 2);
    }

    #[test]
    fn smith_forms() {
        for a in [
            vec![vec![-2, 0], vec![0, -2]],
            vec![vec![-1, -1], vec![1, -1]],
            vec![vec![0, 1], vec![1, 0]],
            vec![vec![2, 4], vec![6, 8]],
            vec![vec![0, 0], vec![0, -2]],
            vec![vec![-1, 1], vec![1, -1]],
        ] {
            let s = smith_normal_form(&a);
            let d = mul(&mul(&s.u, &a), &s.v);
            for i in 0..2 {
                for j in 0..2 {
                    let expected = if i == j { s.diagonal[i] } else { 0 };
                    assert_eq!(d[i][j], expected, "{a:?}");
                }
            }
            if s.diagonal[0] != 0 {
                assert_eq!(s.diagonal[1] % s.diagonal[0], 0);
            }
            let det = |m: &Vec<Vec<i64>>| m[0][0] * m[1][1] - m[0][1] * m[1][0];
            assert_eq!(det(&s.u).abs(), 1);
            assert_eq!(det(&s.v).abs(), 1);
        }
        assert_eq!(smith_normal_form(&[vec![2, 4], vec![6, 8]]).diagonal, vec![2, 4]);
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(primitive_integer(&[Rational::new(-1, 2), Rational::new(1, 3)]), vec![3, -2]);
        assert_eq!(primitive_integer(&[q(0), q(-4)]), vec![0, 1]);
    }
}
