#![allow(dead_code)]

use frameweave::{Frame, Matrix};
use proptest::prelude::*;

pub fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-4.0f64..4.0, rows * cols)
        .prop_map(move |data| Matrix::from_row_slice(rows, cols, &data))
}

pub fn any_matrix(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| matrix(r, c))
}

pub fn symmetric(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max).prop_flat_map(|n| matrix(n, n)).prop_map(|a| {
        let at = a.transpose();
        (&a + &at).scale(0.5)
    })
}

/// Product of an `r x k` and a `k x c` factor, so the rank is at most `k`.
pub fn low_rank(max: usize) -> impl Strategy<Value = (Matrix, usize)> {
    (1..=max, 1..=max, 1..=max).prop_flat_map(|(r, c, k)| {
        let k = k.min(r).min(c);
        (matrix(r, k), matrix(k, c), Just(k))
            .prop_map(|(a, b, k)| (&a * &b, k))
    })
}

pub fn frame(n: usize, m: usize) -> impl Strategy<Value = Frame> {
    matrix(n, m).prop_map(|t| Frame::from_synthesis(t).unwrap())
}

/// Same-shape pair with `1 <= n <= max_n` and `n <= m <= max_m`.
pub fn frame_pair(max_n: usize, max_m: usize) -> impl Strategy<Value = (Frame, Frame)> {
    (1..=max_n)
        .prop_flat_map(move |n| (Just(n), n..=max_m))
        .prop_flat_map(|(n, m)| (frame(n, m), frame(n, m)))
}

/// Small integer entries produce exact rank deficiencies often.
pub fn int_frame_pair(max_n: usize, max_m: usize) -> impl Strategy<Value = (Frame, Frame)> {
    (1..=max_n)
        .prop_flat_map(move |n| (Just(n), n..=max_m))
        .prop_flat_map(|(n, m)| {
            let side = move || {
                prop::collection::vec(-2i32..=2, n * m).prop_map(move |d| {
                    let d: Vec<f64> = d.into_iter().map(f64::from).collect();
                    Frame::from_synthesis(Matrix::from_row_slice(n, m, &d)).unwrap()
                })
            };
            (side(), side())
        })
}

pub fn to_na(m: &Matrix) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).max_abs()
}

/// Exact rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn exact_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let nr = a.len();
    let nc = if nr == 0 { 0 } else { a[0].len() };
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..nc {
        let Some(p) = (rank..nr).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..nr {
            for j in col + 1..nc {
                a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
            }
            a[i][col] = 0;
        }
        prev = a[rank][col];
        rank += 1;
    }
    rank
}

pub fn frame_to_ints(f: &Frame) -> Vec<Vec<i64>> {
    f.synthesis()
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x as i64).collect())
        .collect()
}
