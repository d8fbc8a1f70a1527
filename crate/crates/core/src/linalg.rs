//! Small dense linear algebra: cofactor determinants and inverses for
//! matrices up to 3×3, exact rank over a field, and SVD-based numerical rank.

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Real, Ring};

/// A square matrix of size at most 3 stored in a fixed 3×3 array; entries
/// outside the leading `n×n` block are ignored.
pub type Mat3<R> = [[R; 3]; 3];

/// Determinant of the leading `n×n` block, `n ≤ 3`.
pub fn det<R: Ring>(m: &Mat3<R>, n: usize) -> R {
    match n {
        0 => R::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        3 => {
            let minor = |a: usize, b: usize, c: usize, d: usize| {
                m[1][a].clone() * m[2][b].clone() - m[1][c].clone() * m[2][d].clone()
            };
            m[0][0].clone() * minor(1, 2, 2, 1) - m[0][1].clone() * minor(0, 2, 2, 0)
                + m[0][2].clone() * minor(0, 1, 1, 0)
        }
        _ => panic!("det supports n <= 3"),
    }
}

/// Adjugate of the leading `n×n` block.
pub fn adjugate<R: Ring>(m: &Mat3<R>, n: usize) -> Mat3<R> {
    let mut adj: Mat3<R> = std::array::from_fn(|_| std::array::from_fn(|_| R::zero()));
    match n {
        1 => adj[0][0] = R::one(),
        2 => {
            adj[0][0] = m[1][1].clone();
            adj[1][1] = m[0][0].clone();
            adj[0][1] = R::zero() - m[0][1].clone();
            adj[1][0] = R::zero() - m[1][0].clone();
        }
        3 => {
            for (i, row) in adj.iter_mut().enumerate() {
                for (j, entry) in row.iter_mut().enumerate() {
                    // cofactor C_{ji}
                    let rows: Vec<usize> = (0..3).filter(|&r| r != j).collect();
                    let cols: Vec<usize> = (0..3).filter(|&c| c != i).collect();
                    let minor = m[rows[0]][cols[0]].clone() * m[rows[1]][cols[1]].clone()
                        - m[rows[0]][cols[1]].clone() * m[rows[1]][cols[0]].clone();
                    *entry = if (i + j) % 2 == 0 { minor } else { R::zero() - minor };
                }
            }
        }
        _ => panic!("adjugate supports 1 <= n <= 3"),
    }
    adj
}

/// Inverse of a complex `n×n` matrix; fails when the determinant is zero or
/// negligible against the entry scale.
pub fn inverse<T: Real>(m: &Mat3<Complex<T>>, n: usize) -> Result<Mat3<Complex<T>>> {
    let d = det(m, n);
    let scale = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .fold(T::zero(), |acc, (i, j)| acc.max(m[i][j].norm()));
    if d.norm() <= T::epsilon() * scale.powi(n as i32) || !d.norm().is_finite() {
        return Err(Error::Singular);
    }
    let mut adj = adjugate(m, n);
    for row in adj.iter_mut().take(n) {
        for entry in row.iter_mut().take(n) {
            *entry = *entry / d;
        }
    }
    Ok(adj)
}

pub fn mat_mul<R: Ring>(a: &Mat3<R>, b: &Mat3<R>, n: usize) -> Mat3<R> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            if i < n && j < n {
                (0..n).fold(R::zero(), |acc, k| acc + a[i][k].clone() * b[k][j].clone())
            } else {
                R::zero()
            }
        })
    })
}

pub fn mat_vec<R: Ring>(a: &Mat3<R>, v: &[R; 3], n: usize) -> [R; 3] {
    std::array::from_fn(|i| {
        if i < n {
            (0..n).fold(R::zero(), |acc, k| acc + a[i][k].clone() * v[k].clone())
        } else {
            R::zero()
        }
    })
}

pub fn transpose<R: Clone>(a: &Mat3<R>) -> Mat3<R> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].clone()))
}

/// Rank of a matrix over an exact field by Gaussian elimination.
pub fn exact_rank<R: Ring + PartialEq>(mut rows: Vec<Vec<R>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != R::zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != R::zero() {
                let f = rows[r][col].clone() / p.clone();
                for c in col..ncols {
                    let delta = f.clone() * rows[rank][c].clone();
                    rows[r][c] = rows[r][c].clone() - delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Singular values of a sample matrix together with the rank they imply.
#[derive(Clone, Debug, Serialize)]
pub struct NumericalRank {
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

impl NumericalRank {
    /// σ_k / σ_{k+1} for the detected rank k; infinite when σ_{k+1} is zero
    /// or absent.
    pub fn gap(&self) -> f64 {
        let k = self.rank;
        if k == 0 || k >= self.singular_values.len() {
            return f64::INFINITY;
        }
        self.singular_values[k - 1] / self.singular_values[k]
    }
}

/// Numerical rank with singular values below `rel_threshold · σ_max`
/// treated as zero. Rows are first normalized by their largest entry so that
/// samples of very different magnitude weigh equally.
pub fn numerical_rank(rows: &[Vec<Complex<f64>>], rel_threshold: f64) -> NumericalRank {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return NumericalRank { rank: 0, singular_values: Vec::new() };
    }
    let m = DMatrix::from_fn(nrows, ncols, |i, j| {
        let scale = rows[i].iter().fold(0.0f64, |a, x| a.max(x.norm()));
        if scale > 0.0 {
            rows[i][j] / scale
        } else {
            Complex::new(0.0, 0.0)
        }
    });
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let smax = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|&&s| s > rel_threshold * smax).count();
    NumericalRank { rank, singular_values: sv }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn det_and_inverse_3x3() {
        let m = [[c(2.0, 1.0), c(0.5, 0.0), c(0.0, 1.0)], [c(0.5, 0.0), c(1.0, 0.0), c(0.3, -0.2)], [
            c(0.0, 1.0),
            c(0.3, -0.2),
            c(3.0, 0.5),
        ]];
        let inv = inverse(&m, 3).unwrap();
        let id = mat_mul(&m, &inv, 3);
        for (i, row) in id.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((x - c(expected, 0.0)).norm() < 1e-14);
            }
        }
        let singular = [[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)], [c(2.0, 0.0), c(4.0, 0.0), c(0.0, 0.0)], [
            c(0.0, 0.0); 3
        ]];
        assert_eq!(inverse(&singular, 2), Err(Error::Singular));
    }

    #[test]
    fn det_small_sizes() {
        let m = [[3i64, 1, 0], [4, 2, 0], [0, 0, 0]];
        assert_eq!(det(&m, 1), 3);
        assert_eq!(det(&m, 2), 2);
        assert_eq!(det(&[[2i64, 0, 1], [1, 3, 2], [1, 1, 1]], 3), 2 * 1 - 0 + (1 - 3));
    }

    #[test]
    fn exact_rank_over_rationals() {
        let r = |n: i64| Rational64::from_integer(n);
        let rows = vec![vec![r(1), r(2), r(3)], vec![r(2), r(4), r(6)], vec![r(0), r(1), r(1)]];
        assert_eq!(exact_rank(rows), 2);
    }

    #[test]
    fn numerical_rank_detects_gap() {
        let rows: Vec<Vec<Complex<f64>>> = (0..6)
            .map(|i| {
                let a = c(i as f64 + 1.0, 0.5);
                let b = c(1.0, -(i as f64));
                vec![a, b, a + b, a - b * 2.0]
            })
            .collect();
        let r = numerical_rank(&rows, 1e-10);
        assert_eq!(r.rank, 2);
        assert!(r.gap() > 1e10);
    }
}
